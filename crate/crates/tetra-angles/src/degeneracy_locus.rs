//! The critical cylinder over the circumcircle and the surface it maps to.
//!
//! Routines taking a [`CanonicalFrame`] work in frame units: circumcenter at
//! the origin, circumradius 1, `A = (1, 0)`.

use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix3, Point2, Vector3};

use crate::angle_map::{distances, lift, AngleCosTriple, ApexPoint, DistanceTriple};
use crate::base_geometry::{BaseTriangle, CanonicalFrame, Vertex};
use crate::error::{Error, Result};

/// Angular distance below which a cylinder point counts as lying on a
/// non-smooth ray.
pub const NONSMOOTH_GUARD: f64 = 1e-6;

/// Left side of the degeneracy condition in squared distances
/// `(u, v, w) = (x², y², z²)`.
///
/// Equals `−4C₁²(ρ² − R²)` where `ρ` is the distance of the projected apex
/// from the circumcenter, so it is positive inside the cylinder.
pub fn degeneracy_residual_sq(base: &BaseTriangle, u: f64, v: f64, w: f64) -> f64 {
    let [xb2, yb2, zb2] = base.side_lengths().squared();
    xb2 * (u - w) * (v - u) + yb2 * (w - v) * (v - u) + zb2 * (w - v) * (u - w) + xb2 * yb2 * zb2
}

/// [`degeneracy_residual_sq`] evaluated at a distance triple.
pub fn degeneracy_residual(base: &BaseTriangle, d: &DistanceTriple) -> f64 {
    let [u, v, w] = d.squared();
    degeneracy_residual_sq(base, u, v, w)
}

/// The plane in squared-distance space containing the intersection of the
/// degeneracy cylinder with the realizability paraboloid.
pub fn cylinder_plane_residual(base: &BaseTriangle, u: f64, v: f64, w: f64) -> f64 {
    let [xb2, yb2, zb2] = base.side_lengths().squared();
    (yb2 + zb2 - xb2) * xb2 * u + (xb2 + zb2 - yb2) * yb2 * v + (xb2 + yb2 - zb2) * zb2 * w
        - 2.0 * xb2 * yb2 * zb2
}

/// Whether the apex lies on the vertical cylinder over the circumcircle,
/// within `tol_predicate · R` radially.
pub fn on_cylinder(base: &BaseTriangle, apex: &ApexPoint) -> Result<bool> {
    distances(base, apex)?;
    let (o, radius) = base.circumcircle();
    let rho = (Point2::new(apex.p, apex.q) - o).norm();
    Ok((rho - radius).abs() <= base.tolerances().tol_predicate * radius)
}

/// `(2C₁t − C₂)² + (2C₁s − C₃)² − C₄` for a planar point `(t, s)`; zero
/// exactly when `ABCD` is a cyclic quadrilateral, negative inside the
/// circumcircle.
pub fn cyclic_criterion(base: &BaseTriangle, d: Point2<f64>) -> Result<f64> {
    let (a1, a2) = (base.a().x, base.a().y);
    let (b1, b2) = (base.b().x, base.b().y);
    let (c1, c2) = (base.c().x, base.c().y);
    let k1 = a1 * b2 - a1 * c2 - a2 * b1 + a2 * c1 + b1 * c2 - b2 * c1;
    if k1 == 0.0 {
        return Err(Error::DegenerateBase { area2: 0.0 });
    }
    let na = a1 * a1 + a2 * a2;
    let nb = b1 * b1 + b2 * b2;
    let nc = c1 * c1 + c2 * c2;
    let k2 = na * (b2 - c2) + nb * (c2 - a2) + nc * (a2 - b2);
    let k3 = na * (c1 - b1) + nb * (a1 - c1) + nc * (b1 - a1);
    let k4 = ((b1 - c1).powi(2) + (b2 - c2).powi(2))
        * ((a1 - c1).powi(2) + (a2 - c2).powi(2))
        * ((b1 - a1).powi(2) + (b2 - a2).powi(2));
    Ok((2.0 * k1 * d.x - k2).powi(2) + (2.0 * k1 * d.y - k3).powi(2) - k4)
}

/// A point `(cos φ, sin φ, r)` of the cylinder in frame units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CylinderPoint {
    pub phi: f64,
    pub r: f64,
}

impl CylinderPoint {
    pub fn new(phi: f64, r: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::HeightNonPositive(r));
        }
        Ok(CylinderPoint { phi: phi.rem_euclid(TAU), r })
    }

    /// `tan(φ/2)`; infinite at `φ = π`.
    pub fn t(&self) -> f64 {
        (self.phi / 2.0).tan()
    }

    pub fn from_t(t: f64, r: f64) -> Result<Self> {
        CylinderPoint::new(2.0 * t.atan(), r)
    }

    /// Projects an apex onto the frame angle and frame height. The apex need
    /// not be exactly on the cylinder.
    pub fn from_apex(frame: &CanonicalFrame, apex: &ApexPoint) -> Result<Self> {
        let p = frame.to_frame(Point2::new(apex.p, apex.q));
        CylinderPoint::new(p.y.atan2(p.x), apex.r / frame.radius())
    }

    pub fn to_apex(&self, frame: &CanonicalFrame) -> ApexPoint {
        let p = frame.from_frame(Point2::new(self.phi.cos(), self.phi.sin()));
        ApexPoint::new(p.x, p.y, self.r * frame.radius())
    }

    fn frame_point(&self) -> Vector3<f64> {
        Vector3::new(self.phi.cos(), self.phi.sin(), self.r)
    }
}

/// Half-angle quantities shared by the closed-form expressions.
struct HalfAngle {
    u: f64,
    v: f64,
    s: f64,
    c: f64,
    r: f64,
    p1: f64,
    p2: f64,
    p3: f64,
}

impl HalfAngle {
    fn new(frame: &CanonicalFrame, cp: &CylinderPoint) -> Self {
        let (u, v) = frame.uv_cot();
        let (s, c) = (cp.phi / 2.0).sin_cos();
        let r = cp.r;
        let r2 = r * r;
        HalfAngle {
            u,
            v,
            s,
            c,
            r,
            p1: r2 + 4.0 * s * s,
            p2: (u * u + 1.0) * r2 + 4.0 * (s * u - c).powi(2),
            p3: (v * v + 1.0) * r2 + 4.0 * (s * v - c).powi(2),
        }
    }

    /// The non-smoothness cubic in `t`, multiplied by `cos³(φ/2)`.
    fn cubic(&self) -> f64 {
        let (u, v, s, c) = (self.u, self.v, self.s, self.c);
        (u + v) * s.powi(3) + 3.0 * (u * v - 1.0) * s * s * c - 3.0 * (u + v) * s * c * c
            - (u * v - 1.0) * c.powi(3)
    }

    /// Direction of the normal, up to the scalar factor carrying the cubic.
    fn normal_direction(&self) -> Vector3<f64> {
        let (u, v, s, c) = (self.u, self.v, self.s, self.c);
        Vector3::new(
            c / self.p1.sqrt(),
            (s + u * c) * (v - u) / (self.p2.sqrt() * (u * u + 1.0).sqrt()),
            (s + v * c) * (u - v) / (self.p3.sqrt() * (v * v + 1.0).sqrt()),
        )
    }

    fn normal_scalar_phi(&self) -> f64 {
        let (u, v) = (self.u, self.v);
        32.0 * self.r.powi(3) * (u - v) * self.cubic()
            / ((u * u + 1.0) * (v * v + 1.0) * (self.p1 * self.p2 * self.p3).powi(3)).sqrt()
    }
}

/// Image of a cylinder point, from the closed-form components in the
/// half-angle parametrization.
pub fn fc_point(frame: &CanonicalFrame, cp: &CylinderPoint) -> Result<AngleCosTriple> {
    if !(cp.r > 0.0) {
        return Err(Error::HeightNonPositive(cp.r));
    }
    let h = HalfAngle::new(frame, cp);
    let (u, v, s, c, r2) = (h.u, h.v, h.s, h.c, h.r * h.r);
    let nu = (u * u + 1.0).sqrt();
    let nv = (v * v + 1.0).sqrt();
    let f1 = ((v * v + 1.0) * (u * u + 1.0) * r2 + 4.0 * (u * v + 1.0) * (s * v - c) * (s * u - c))
        / (nu * nv * h.p2.sqrt() * h.p3.sqrt());
    let f2 = ((v * v + 1.0) * r2 + (2.0 * s * v - c).powi(2) - c * c) / (nv * h.p1.sqrt() * h.p3.sqrt());
    let f3 = ((u * u + 1.0) * r2 + (2.0 * s * u - c).powi(2) - c * c) / (nu * h.p1.sqrt() * h.p2.sqrt());
    Ok(AngleCosTriple::new(f1, f2, f3))
}

/// `∂FC/∂φ × ∂FC/∂r`, the normal in the angle parametrization.
pub fn fc_normal_phi(frame: &CanonicalFrame, cp: &CylinderPoint) -> Result<Vector3<f64>> {
    if !(cp.r > 0.0) {
        return Err(Error::HeightNonPositive(cp.r));
    }
    let h = HalfAngle::new(frame, cp);
    Ok(h.normal_direction() * h.normal_scalar_phi())
}

/// `∂FC/∂t × ∂FC/∂r` with `t = tan(φ/2)`.
///
/// Vanishes on the non-smooth rays and, because `dt/dφ` blows up there, at
/// `φ = π`.
pub fn fc_normal(frame: &CanonicalFrame, cp: &CylinderPoint) -> Result<Vector3<f64>> {
    let c = (cp.phi / 2.0).cos();
    Ok(fc_normal_phi(frame, cp)? * (2.0 * c * c))
}

/// The three angles at which the cylinder image has an edge.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NonSmoothAngles {
    pub phis: [f64; 3],
}

impl NonSmoothAngles {
    /// Smallest angular distance from `phi` to one of the rays.
    pub fn distance(&self, phi: f64) -> f64 {
        self.phis
            .iter()
            .map(|&p| {
                let d = (phi - p).rem_euclid(TAU);
                d.min(TAU - d)
            })
            .fold(f64::INFINITY, f64::min)
    }
}

/// Roots of `(u+v)t³ + 3(uv−1)t² − 3(u+v)t − uv + 1` as angles `φ = 2·atan t`.
///
/// Substituting `t = tan(φ/2)` turns the cubic into a multiple of
/// `sin(3φ/2 + ε)`, which gives the roots in closed form, including the
/// root at `φ = π` when `u + v = 0`.
pub fn nonsmooth_angles(frame: &CanonicalFrame) -> NonSmoothAngles {
    let (u, v) = frame.uv_cot();
    let eps = (u * v - 1.0).atan2(u + v);
    let mut phis = [0.0; 3];
    for (k, p) in phis.iter_mut().enumerate() {
        let phi = (2.0 / 3.0 * (k as f64 * PI - eps)).rem_euclid(TAU);
        *p = if phi >= TAU { 0.0 } else { phi };
    }
    phis.sort_by(f64::total_cmp);
    NonSmoothAngles { phis }
}

/// Value, gradient and Hessian (in `D`) of `cos∠PDQ`.
pub(crate) fn cos_angle_jet(d: &Vector3<f64>, p: &Vector3<f64>, q: &Vector3<f64>) -> (f64, Vector3<f64>, Matrix3<f64>) {
    let a = p - d;
    let b = q - d;
    let na = a.norm();
    let nb = b.norm();
    let ah = a / na;
    let bh = b / nb;
    let c = ah.dot(&bh);
    let ga = (bh - ah * c) / na;
    let gb = (ah - bh * c) / nb;
    let id = Matrix3::identity();
    let haa = -(ah * ga.transpose() + ga * ah.transpose()) / na - (id - ah * ah.transpose()) * (c / (na * na));
    let hbb = -(bh * gb.transpose() + gb * bh.transpose()) / nb - (id - bh * bh.transpose()) * (c / (nb * nb));
    let hab = (id - bh * bh.transpose() - ah * ah.transpose() + ah * bh.transpose() * c) / (na * nb);
    (c, -(ga + gb), haa + hab + hab.transpose() + hbb)
}

fn frame_vertices(frame: &CanonicalFrame) -> [Vector3<f64>; 3] {
    Vertex::ALL.map(|v| lift(frame.vertex(v)))
}

/// Jets of the three components of `F` at a frame-unit point.
fn jets(frame: &CanonicalFrame, d: &Vector3<f64>) -> [(f64, Vector3<f64>, Matrix3<f64>); 3] {
    let [a, b, c] = frame_vertices(frame);
    [cos_angle_jet(d, &b, &c), cos_angle_jet(d, &a, &c), cos_angle_jet(d, &a, &b)]
}

/// First and second partial derivatives of `FC(φ, r)`.
#[derive(Clone, Copy, Debug)]
pub struct FcJet {
    pub value: Vector3<f64>,
    pub d_phi: Vector3<f64>,
    pub d_r: Vector3<f64>,
    pub d_phiphi: Vector3<f64>,
    pub d_phir: Vector3<f64>,
    pub d_rr: Vector3<f64>,
}

pub fn fc_jet(frame: &CanonicalFrame, cp: &CylinderPoint) -> Result<FcJet> {
    if !(cp.r > 0.0) {
        return Err(Error::HeightNonPositive(cp.r));
    }
    let d = cp.frame_point();
    let (sp, cph) = cp.phi.sin_cos();
    let dp = Vector3::new(-sp, cph, 0.0);
    let dpp = Vector3::new(-cph, -sp, 0.0);
    let e3 = Vector3::z();
    let mut out = FcJet {
        value: Vector3::zeros(),
        d_phi: Vector3::zeros(),
        d_r: Vector3::zeros(),
        d_phiphi: Vector3::zeros(),
        d_phir: Vector3::zeros(),
        d_rr: Vector3::zeros(),
    };
    for (i, (f, g, h)) in jets(frame, &d).iter().enumerate() {
        out.value[i] = *f;
        out.d_phi[i] = g.dot(&dp);
        out.d_r[i] = g.z;
        out.d_phiphi[i] = (h * dp).dot(&dp) + g.dot(&dpp);
        out.d_phir[i] = (h * e3).dot(&dp);
        out.d_rr[i] = h[(2, 2)];
    }
    Ok(out)
}

/// Gaussian curvature of the cylinder image at a regular point, from the
/// second fundamental form of the analytic jet against the closed-form
/// normal.
pub fn gaussian_curvature_fc(frame: &CanonicalFrame, cp: &CylinderPoint) -> Result<f64> {
    if !(cp.r > 0.0) {
        return Err(Error::HeightNonPositive(cp.r));
    }
    if nonsmooth_angles(frame).distance(cp.phi) <= NONSMOOTH_GUARD {
        return Err(Error::NonSmoothPoint(cp.phi));
    }
    let j = fc_jet(frame, cp)?;
    let n = fc_normal_phi(frame, cp)?;
    let num = j.d_phiphi.dot(&n) * j.d_rr.dot(&n) - j.d_phir.dot(&n).powi(2);
    Ok(num / n.norm_squared().powi(2))
}

/// `(FCₜₜ,N)(FCᵣᵣ,N) − (FCₜᵣ,N)²` in the `(t, r)` parametrization, in
/// closed form.
pub fn fc_curvature_contraction(frame: &CanonicalFrame, cp: &CylinderPoint) -> f64 {
    let h = HalfAngle::new(frame, cp);
    let (u, v) = (h.u, h.v);
    1_048_576.0 * h.r.powi(10) * h.cubic().powi(4) * (u - v).powi(6) * (h.r * h.r + 4.0) * h.c.powi(8)
        / ((u * u + 1.0).powi(2) * (v * v + 1.0).powi(2) * (h.p1 * h.p2 * h.p3).powi(6))
}

/// The contraction divided by `|N|⁴` with the cubic cancelled:
/// `K = (u−v)²(r²+4) / (16 r² W²)`, `W` the squared norm of
/// the normal direction.
pub fn fc_curvature_closed(frame: &CanonicalFrame, cp: &CylinderPoint) -> f64 {
    let h = HalfAngle::new(frame, cp);
    let w = h.normal_direction().norm_squared();
    (h.u - h.v).powi(2) * (h.r * h.r + 4.0) / (16.0 * h.r * h.r * w * w)
}

fn require_cylinder(base: &BaseTriangle, apex: &ApexPoint) -> Result<CylinderPoint> {
    if !on_cylinder(base, apex)? {
        return Err(Error::NotOnCylinder);
    }
    CylinderPoint::from_apex(&base.canonicalize(), apex)
}

fn eta_frame(frame: &CanonicalFrame, cp: &CylinderPoint) -> Vector3<f64> {
    let (sa, ca) = frame.theta_b().sin_cos();
    let (sb, cb) = frame.theta_c().sin_cos();
    let (sp, cp_) = cp.phi.sin_cos();
    let z = cp.r;
    let z2 = z * z;
    let sba = (frame.theta_c() - frame.theta_b()).sin();
    let e1 = ((sb - sa) * (1.0 + cp_) + (ca - cb) * sp) * z2
        - 2.0 * ((sb - sa) * (cb - cp_) + (ca - cb) * (sb - sp)) * sp * sp;
    let e2 = (ca - cb) * (cp_ * (2.0 * cp_ * cp_ + z2 - 2.0) + z2)
        + sp * (sa - sb) * (2.0 * cp_ * cp_ + z2)
        + sba * (2.0 * cp.phi).sin();
    let e3 = z * (sb - sa) * (2.0 - cp_ - 3.0 * cp_ * cp_) - z * (ca - cb) * sp * (3.0 * cp_ + 1.0)
        + z * sba * (1.0 + cp_);
    Vector3::new(e1, e2, e3)
}

/// The kernel direction `η` of the differential at a cylinder point, in base
/// coordinates (frame units of length).
pub fn degenerate_direction(base: &BaseTriangle, apex: &ApexPoint) -> Result<Vector3<f64>> {
    let cp = require_cylinder(base, apex)?;
    let frame = base.canonicalize();
    let e = eta_frame(&frame, &cp);
    let xy = frame.rotate_from_frame(nalgebra::Vector2::new(e.x, e.y));
    Ok(Vector3::new(xy.x, xy.y, e.z))
}

/// Coefficients `ξᵢ` of `F(D + tη̂) = F(D) + ξ t² + o(t²)` for the unit
/// kernel direction `η̂`, in frame units (lengths divided by `R`).
pub fn degenerate_second_order(base: &BaseTriangle, apex: &ApexPoint) -> Result<Vector3<f64>> {
    let cp = require_cylinder(base, apex)?;
    let frame = base.canonicalize();
    let e = eta_frame(&frame, &cp).normalize();
    let js = jets(&frame, &cp.frame_point());
    Ok(Vector3::from_fn(|i, _| 0.5 * (js[i].2 * e).dot(&e)))
}
