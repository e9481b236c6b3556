//! What `F` does near the base vertices and at infinity, the limit solid
//! ellipses, the octant markers around `I`, and the membership test for the
//! image `Σ`.

mod mesh;
mod planar;

pub use mesh::*;
pub use planar::*;

use nalgebra::{Point2, Vector3};

use crate::angle_map::{face_cosines, AngleCosTriple, ApexPoint};
use crate::base_geometry::{BaseClass, BaseTriangle, CanonicalFrame, Vertex};
use crate::degeneracy_locus::{fc_point, CylinderPoint};
use crate::error::{Error, Result};
use crate::inverse_p3p::{preimages, P3PWarning};
use crate::pillow::{free_axes, pillow_value, pillowcase_slice, special_points, QuadraticForm};

/// `Lim(V)`: the filled ellipse of accumulation values of `F` as the apex
/// tends to `V`. It lies in the plane `t[axis] = value` with
/// `value = cos(angle at V)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LimitSolidEllipse {
    pub vertex: Vertex,
    /// 0-based coordinate index of the fixed axis (equal to the vertex index).
    pub fixed_axis: usize,
    pub fixed_value: f64,
    /// Bounding ellipse in the two free coordinates, increasing axis order.
    pub form: QuadraticForm,
}

impl LimitSolidEllipse {
    pub fn free_axes(&self) -> (usize, usize) {
        free_axes(self.fixed_axis)
    }

    /// The free coordinates of `t`.
    pub fn project(&self, t: &AngleCosTriple) -> (f64, f64) {
        let a = t.to_array();
        let (i, j) = self.free_axes();
        (a[i], a[j])
    }

    /// Lifts free coordinates into the plane of the ellipse.
    pub fn lift(&self, s: f64, t: f64) -> AngleCosTriple {
        let mut a = [0.0; 3];
        let (i, j) = self.free_axes();
        a[self.fixed_axis] = self.fixed_value;
        a[i] = s;
        a[j] = t;
        AngleCosTriple::from_array(a)
    }

    pub fn plane_residual(&self, t: &AngleCosTriple) -> f64 {
        t.to_array()[self.fixed_axis] - self.fixed_value
    }

    /// `form(s, t) − rhs`; non-positive on the solid ellipse.
    pub fn form_residual(&self, t: &AngleCosTriple) -> f64 {
        let (s, u) = self.project(t);
        self.form.residual(s, u)
    }

    pub fn contains(&self, t: &AngleCosTriple, tol: f64) -> bool {
        self.plane_residual(t).abs() <= tol && self.form_residual(t) <= tol
    }

    /// Point of the solid ellipse at polar parameters `(λ, ψ)`, `λ ∈ [0, 1]`;
    /// `λ = 1` traces the boundary curve `E_V`.
    pub fn point(&self, lambda: f64, psi: f64) -> AngleCosTriple {
        let a = self.fixed_value.clamp(-1.0, 1.0).acos();
        self.lift(lambda * psi.cos(), lambda * (psi + a).cos())
    }

    /// Distance-like residual to the solid set: zero inside, otherwise the
    /// larger of the plane offset and the form excess.
    pub fn excess(&self, t: &AngleCosTriple) -> f64 {
        self.plane_residual(t).abs().max(self.form_residual(t).max(0.0))
    }
}

pub fn limit_solid_ellipse(base: &BaseTriangle, vertex: Vertex) -> Result<LimitSolidEllipse> {
    let frame_area = base.signed_area2();
    let s = base.side_lengths().max();
    if !(frame_area.abs() > base.tolerances().tol_area * s * s) {
        return Err(Error::DegenerateBase { area2: frame_area });
    }
    let axis = vertex.index();
    let value = base.cos_angles()[axis];
    let form = pillowcase_slice(axis + 1, value)?;
    Ok(LimitSolidEllipse { vertex, fixed_axis: axis, fixed_value: value, form })
}

pub fn limit_solid_ellipses(base: &BaseTriangle) -> Result<[LimitSolidEllipse; 3]> {
    Ok([
        limit_solid_ellipse(base, Vertex::A)?,
        limit_solid_ellipse(base, Vertex::B)?,
        limit_solid_ellipse(base, Vertex::C)?,
    ])
}

/// Limit of `F(V + tη)` as `t → 0⁺`.
///
/// The two face angles with a ray through `V` tend to `−e·η̂` for the unit
/// edge vector `e` from `V` to the other vertex; the remaining face angle
/// tends to the base angle at `V`.
pub fn vertex_limit(base: &BaseTriangle, v: Vertex, eta: &Vector3<f64>) -> Result<AngleCosTriple> {
    let n = eta.norm();
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::NonPositiveLength);
    }
    let eh = eta / n;
    let pv = base.vertex(v);
    let mut out = [0.0; 3];
    for w in Vertex::ALL {
        if w == v {
            out[w.index()] = base.cos_angles()[v.index()];
            continue;
        }
        // the face opposite w uses the edge from v to the third vertex
        let u = Vertex::ALL.into_iter().find(|&x| x != v && x != w).unwrap();
        let e = base.vertex(u) - pv;
        let e = Vector3::new(e.x, e.y, 0.0) / e.norm();
        out[w.index()] = -e.dot(&eh);
    }
    Ok(AngleCosTriple::from_array(out))
}

/// The segment of `Lim(V)` reached by apexes on the cylinder tending to `V`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LimitSegment {
    pub vertex: Vertex,
    pub start: AngleCosTriple,
    pub end: AngleCosTriple,
}

impl LimitSegment {
    pub fn at(&self, s: f64) -> AngleCosTriple {
        AngleCosTriple::from_vector(self.start.to_vector() * (1.0 - s) + self.end.to_vector() * s)
    }
}

/// `[B̃, C̃] ⊂ Lim(A)`, `[Ã, C̃] ⊂ Lim(B)`, `[Ã, B̃] ⊂ Lim(C)`.
pub fn limit_segments(base: &BaseTriangle) -> [LimitSegment; 3] {
    let sp = special_points(base);
    [
        LimitSegment { vertex: Vertex::A, start: sp.b_tilde, end: sp.c_tilde },
        LimitSegment { vertex: Vertex::B, start: sp.a_tilde, end: sp.c_tilde },
        LimitSegment { vertex: Vertex::C, start: sp.a_tilde, end: sp.b_tilde },
    ]
}

/// Behaviour of `F` high up the cylinder.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Asymptotic {
    /// `lim r²(F − (1,1,1))`, the same for every `φ`.
    pub limit: Vector3<f64>,
    /// `r²(F(φ, r) − (1,1,1))` at the probe height.
    pub rate: Vector3<f64>,
    pub probe_r: f64,
}

/// Height (frame units) at which [`asymptotic_direction`] evaluates the rate.
pub const ASYMPTOTIC_PROBE: f64 = 1e3;

pub fn asymptotic_direction(frame: &CanonicalFrame, phi: f64) -> Result<Asymptotic> {
    let (tb, tc) = (frame.theta_b(), frame.theta_c());
    let limit = Vector3::new((tb - tc).cos() - 1.0, tc.cos() - 1.0, tb.cos() - 1.0);
    let r = ASYMPTOTIC_PROBE;
    let f = fc_point(frame, &CylinderPoint::new(phi, r)?)?;
    let rate = (f.to_vector() - Vector3::repeat(1.0)) * (r * r);
    Ok(Asymptotic { limit, rate, probe_r: r })
}

/// An apex strictly inside the cylinder whose image is
/// `I = (cos∠BAC, cos∠ABC, cos∠ACB)`; exists exactly for acute bases.
pub fn interior_witness(base: &BaseTriangle) -> Result<ApexPoint> {
    if base.classify() != BaseClass::Acute {
        return Err(Error::NotAcuteBase);
    }
    let frame = base.canonicalize();
    let (u, v) = frame.uv_tan();
    if !(u * v + 1.0 < 0.0) {
        return Err(Error::NotAcuteBase);
    }
    let den = (1.0 + u * u) * (1.0 + v * v);
    let p0 = (u * u * v * v - u * u - v * v - 3.0) / den;
    let q0 = -2.0 * (u + v) * (1.0 + u * v) / den;
    let r0 = (-16.0 * (1.0 + u * v) / den).sqrt();
    let xy = frame.from_frame(Point2::new(p0, q0));
    Ok(ApexPoint::new(xy.x, xy.y, r0 * frame.radius()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn symbol(self) -> char {
        match self {
            Sign::Minus => '-',
            Sign::Plus => '+',
        }
    }
}

/// Whether an octant around `I` meets the interior of the closure of the image
/// (`Plus`), the interior of its complement (`Minus`), or both.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Marker {
    Plus,
    Minus,
    PlusMinus,
}

impl Marker {
    pub fn symbol(self) -> &'static str {
        match self {
            Marker::Plus => "+",
            Marker::Minus => "-",
            Marker::PlusMinus => "+-",
        }
    }
}

pub type Octant = [Sign; 3];

#[derive(Clone, Debug, PartialEq)]
pub struct RegionMarkerTable {
    pub center: AngleCosTriple,
    pub class: BaseClass,
    /// In the order `(−,−,−), (−,−,+), …, (+,+,+)` over the base axes.
    pub markers: [(Octant, Marker); 8],
}

impl RegionMarkerTable {
    pub fn get(&self, o: Octant) -> Marker {
        self.markers.iter().find(|(k, _)| *k == o).map(|(_, m)| *m).unwrap()
    }

    /// `(sgn(x − x₀), sgn(y − y₀), sgn(z − z₀))`, or `None` on a dividing
    /// plane.
    pub fn region_index(&self, t: &AngleCosTriple) -> Option<Octant> {
        let c = self.center.to_array();
        let a = t.to_array();
        let mut o = [Sign::Minus; 3];
        for k in 0..3 {
            let d = a[k] - c[k];
            if d == 0.0 || !d.is_finite() {
                return None;
            }
            o[k] = if d > 0.0 { Sign::Plus } else { Sign::Minus };
        }
        Some(o)
    }
}

pub fn all_octants() -> [Octant; 8] {
    let mut out = [[Sign::Minus; 3]; 8];
    for (n, o) in out.iter_mut().enumerate() {
        for (k, s) in o.iter_mut().enumerate() {
            if n >> (2 - k) & 1 == 1 {
                *s = Sign::Plus;
            }
        }
    }
    out
}

/// The marker pattern for the base's class. Non-acute rows single out the
/// axis of the largest angle.
pub fn omega_markers(base: &BaseTriangle) -> Result<RegionMarkerTable> {
    let s = base.side_lengths().max();
    let area2 = base.signed_area2();
    if !(area2.abs() > base.tolerances().tol_area * s * s) {
        return Err(Error::DegenerateBase { area2 });
    }
    let class = base.classify();
    let k = base.largest_angle_vertex().index();
    let octants = all_octants();
    let mut markers = [([Sign::Minus; 3], Marker::Plus); 8];
    for (slot, o) in markers.iter_mut().zip(octants) {
        let minus = o.iter().filter(|&&s| s == Sign::Minus).count();
        let m = match class {
            BaseClass::Acute if minus == 2 => Marker::PlusMinus,
            BaseClass::Acute => Marker::Plus,
            _ if minus == 3 => Marker::Plus,
            _ if o[k] == Sign::Minus => Marker::Minus,
            _ if minus == 2 => Marker::PlusMinus,
            _ => Marker::Plus,
        };
        *slot = (o, m);
    }
    Ok(RegionMarkerTable { center: special_points(base).i_triangle, class, markers })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SigmaStatus {
    /// Attained by an apex strictly above the base plane.
    InSigma,
    /// In the closure only: attained in the base plane, or a limit value.
    OnClosureBoundaryOnly,
    Outside,
}

impl SigmaStatus {
    pub fn name(self) -> &'static str {
        match self {
            SigmaStatus::InSigma => "in_sigma",
            SigmaStatus::OnClosureBoundaryOnly => "closure_boundary",
            SigmaStatus::Outside => "outside",
        }
    }
}

/// Classifies a target against `Σ`, the image of the open upper half-space.
///
/// A preimage counts as a witness when it is not flagged planar by the
/// solver. Targets near `(1,1,1)` or a limit solid ellipse without a witness
/// are reported as closure points.
pub fn sigma_membership(base: &BaseTriangle, target: &AngleCosTriple) -> Result<SigmaStatus> {
    if !target.is_finite() {
        return Err(Error::SolverNonConvergence(format!("non-finite target {target:?}")));
    }
    let tol = base.tolerances().tol_predicate;
    let one = AngleCosTriple::new(1.0, 1.0, 1.0);
    if target.max_abs_diff(&one) <= tol {
        return Ok(SigmaStatus::OnClosureBoundaryOnly);
    }
    let sol = preimages(base, target)?;
    if sol.solutions.iter().chain(&sol.near_vertex).any(|s| !s.planar) {
        return Ok(SigmaStatus::InSigma);
    }
    if !sol.is_empty() {
        return Ok(SigmaStatus::OnClosureBoundaryOnly);
    }
    if sol.warnings.contains(&P3PWarning::DegenerateFiber) {
        if pillow_value(target).abs() <= tol {
            return Ok(SigmaStatus::OnClosureBoundaryOnly);
        }
        return Err(Error::SolverNonConvergence(format!(
            "degenerate fiber off the pillowcase at {target:?}"
        )));
    }
    for e in limit_solid_ellipses(base)? {
        if e.contains(target, tol) {
            return Ok(SigmaStatus::OnClosureBoundaryOnly);
        }
    }
    Ok(SigmaStatus::Outside)
}

/// `F` at `V + t·η` for a unit `η`, the probe used to approach a vertex.
pub fn approach_value(base: &BaseTriangle, v: Vertex, eta: &Vector3<f64>, t: f64) -> Result<AngleCosTriple> {
    let p = base.vertex(v);
    let e = eta.normalize() * (t * base.circumradius());
    face_cosines(base, &ApexPoint::new(p.x + e.x, p.y + e.y, e.z.abs()))
}
