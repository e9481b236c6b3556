//! Constant-angle surfaces over a chord, their traces on the critical
//! cylinder, and the special regions these traces cut out.

use std::f64::consts::{FRAC_PI_2, TAU};

use nalgebra::Vector3;

use crate::angle_map::{lift, ApexPoint};
use crate::base_geometry::{BaseClass, BaseTriangle, CanonicalFrame, Side, Vertex};
use crate::degeneracy_locus::{on_cylinder, CylinderPoint};
use crate::error::{Error, Result};

/// Points `M` with `∠KML = alpha`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Toroid {
    pub k: Vector3<f64>,
    pub l: Vector3<f64>,
    pub alpha: f64,
}

impl Toroid {
    pub fn new(k: Vector3<f64>, l: Vector3<f64>, alpha: f64) -> Result<Self> {
        if k == l {
            return Err(Error::InvalidBase("toroid chord endpoints coincide".into()));
        }
        if !(alpha > 0.0 && alpha < std::f64::consts::PI) {
            return Err(Error::InvalidBase(format!("toroid angle {alpha} outside (0, pi)")));
        }
        Ok(Toroid { k, l, alpha })
    }

    /// The toroid over a base side whose angle is the base angle opposite
    /// the side.
    pub fn critical(base: &BaseTriangle, side: Side) -> Result<Self> {
        let (p, q) = side.endpoints();
        let alpha = base.base_angles()[side.opposite_vertex().index()];
        Toroid::new(lift(base.vertex(p)), lift(base.vertex(q)), alpha)
    }
}

/// `cos∠KML − cos α`.
pub fn toroid_residual(t: &Toroid, m: &Vector3<f64>) -> Result<f64> {
    let a = t.k - m;
    let b = t.l - m;
    let (na, nb) = (a.norm(), b.norm());
    let scale = (t.k - t.l).norm();
    if na <= f64::EPSILON * scale || nb <= f64::EPSILON * scale {
        return Err(Error::PointOnChordEndpoint);
    }
    Ok(a.dot(&b) / (na * nb) - t.alpha.cos())
}

/// `γ_side`: the trace of the critical toroid of `side` on the cylinder, in
/// frame coordinates. The height is `2√(cos α · cos(φ − μ))` over the
/// half-circle `|φ − μ| ≤ π/2`, where `μ` is the midpoint of the minor arc
/// cut off by the side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriticalCurve {
    pub side: Side,
    /// Base angle opposite the side.
    pub alpha: f64,
    /// Frame angle of the arc midpoint.
    pub mu: f64,
}

/// Signed angular offset `φ − μ` reduced to `(−π, π]`.
fn offset(phi: f64, mu: f64) -> f64 {
    let d = (phi - mu).rem_euclid(TAU);
    if d > std::f64::consts::PI {
        d - TAU
    } else {
        d
    }
}

impl CriticalCurve {
    /// Height at `phi`, or `None` outside the half-circle domain.
    pub fn height(&self, phi: f64) -> Option<f64> {
        let d = offset(phi, self.mu);
        if d.abs() > FRAC_PI_2 + 1e-12 {
            return None;
        }
        Some(2.0 * (self.alpha.cos() * d.cos()).max(0.0).sqrt())
    }

    /// Closed domain `[μ − π/2, μ + π/2]` (not reduced mod 2π).
    pub fn domain(&self) -> (f64, f64) {
        (self.mu - FRAC_PI_2, self.mu + FRAC_PI_2)
    }

    /// Point in frame coordinates.
    pub fn point(&self, phi: f64) -> Option<Vector3<f64>> {
        self.height(phi).map(|z| Vector3::new(phi.cos(), phi.sin(), z))
    }

    /// Point in base coordinates.
    pub fn apex(&self, frame: &CanonicalFrame, phi: f64) -> Option<ApexPoint> {
        let z = self.height(phi)?;
        let p = frame.from_frame(nalgebra::Point2::new(phi.cos(), phi.sin()));
        Some(ApexPoint::new(p.x, p.y, z * frame.radius()))
    }
}

pub fn critical_curve(frame: &CanonicalFrame, side: Side) -> Result<CriticalCurve> {
    let opp = side.opposite_vertex();
    if !frame.is_acute_at(opp) {
        return Err(Error::EmptyCurve);
    }
    let (p, q) = side.endpoints();
    let m = frame.vertex(p).coords + frame.vertex(q).coords;
    Ok(CriticalCurve {
        side,
        alpha: frame.base_angles()[opp.index()],
        mu: m.y.atan2(m.x).rem_euclid(TAU),
    })
}

/// A patch of the cylinder around a base vertex, under both critical curves
/// of the sides through that vertex and above the base plane.
///
/// `plus` is the curve of the side whose far endpoint comes first
/// counterclockwise from the vertex; it bounds the region on
/// `[phi_lo, split]`, `minus` on `[split, phi_hi]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpecialRegion {
    pub vertex: Vertex,
    pub plus: CriticalCurve,
    pub minus: CriticalCurve,
    /// Angular range in the frame, `phi_lo < phi_hi`, not reduced mod 2π.
    pub phi_lo: f64,
    pub phi_hi: f64,
    /// Angle where the two bounding curves cross.
    pub split: f64,
}

impl SpecialRegion {
    pub fn side_pair(&self) -> (Side, Side) {
        (self.plus.side, self.minus.side)
    }

    /// Upper height bound at `phi`; zero outside the range.
    pub fn z_max(&self, phi: f64) -> f64 {
        let d = offset(phi, self.phi_lo);
        let d = if d < 0.0 { d + TAU } else { d };
        if d > self.phi_hi - self.phi_lo {
            return 0.0;
        }
        let p = self.plus.height(phi).unwrap_or(0.0);
        let m = self.minus.height(phi).unwrap_or(0.0);
        p.min(m)
    }

    /// The bound as prescribed piecewise: the plus curve left of the split,
    /// the minus curve right of it.
    pub fn z_max_piecewise(&self, phi: f64) -> f64 {
        let d = offset(phi, self.split);
        let c = if d <= 0.0 { &self.plus } else { &self.minus };
        c.height(phi).unwrap_or(0.0)
    }

    /// Whether `(φ, r)` lies in the closed region minus the base circle.
    pub fn contains(&self, cp: &CylinderPoint, tol: f64) -> bool {
        cp.r > 0.0 && cp.r <= self.z_max(cp.phi) + tol
    }

    /// A point well inside: half the height above the range midpoint.
    pub fn interior_sample(&self) -> CylinderPoint {
        let phi = 0.5 * (self.phi_lo + self.phi_hi);
        CylinderPoint { phi: phi.rem_euclid(TAU), r: 0.5 * self.z_max(phi) }
    }
}

pub fn special_region(frame: &CanonicalFrame, pair: (Side, Side)) -> Result<SpecialRegion> {
    let (s1, s2) = pair;
    let v = s1.common_vertex(s2).ok_or(Error::EmptyRegion)?;
    let c1 = critical_curve(frame, s1).map_err(|_| Error::EmptyRegion)?;
    let c2 = critical_curve(frame, s2).map_err(|_| Error::EmptyRegion)?;
    let tv = frame.theta(v);
    let far = |s: Side| {
        let (p, q) = s.endpoints();
        if p == v {
            q
        } else {
            p
        }
    };
    let ccw = |w: Vertex| (frame.theta(w) - tv).rem_euclid(TAU);
    let (plus, minus) = if ccw(far(s1)) < ccw(far(s2)) { (c1, c2) } else { (c2, c1) };
    let (ap, am) = (plus.alpha, minus.alpha);
    let (cp, sp) = (ap.cos(), ap.sin());
    let (cm, sm) = (am.cos(), am.sin());
    let split = ((cm * cm - cp * cp) / (sp * cp + sm * cm)).atan();
    Ok(SpecialRegion {
        vertex: v,
        plus,
        minus,
        phi_lo: tv + ap - FRAC_PI_2,
        phi_hi: tv + FRAC_PI_2 - am,
        split: tv + split,
    })
}

/// The special regions of a base: three for an acute base (one per vertex),
/// otherwise the single region around the vertex with the largest angle.
pub fn special_regions_all(base: &BaseTriangle) -> Result<Vec<SpecialRegion>> {
    let frame = base.canonicalize();
    let vertices: Vec<Vertex> = match base.classify() {
        BaseClass::Acute => Vertex::ALL.to_vec(),
        _ => vec![base.largest_angle_vertex()],
    };
    vertices
        .into_iter()
        .map(|v| {
            let sides: Vec<Side> = Side::ALL.into_iter().filter(|s| s.opposite_vertex() != v).collect();
            special_region(&frame, (sides[0], sides[1]))
        })
        .collect()
}

/// Whether the apex lies on the cylinder inside one of the special regions
/// (bounding curves included, base plane excluded).
pub fn in_special_region(base: &BaseTriangle, apex: &ApexPoint) -> bool {
    if !matches!(on_cylinder(base, apex), Ok(true)) || !(apex.r > 0.0) {
        return false;
    }
    let frame = base.canonicalize();
    let Ok(cp) = CylinderPoint::from_apex(&frame, apex) else { return false };
    let Ok(regions) = special_regions_all(base) else { return false };
    let tol = base.tolerances().tol_predicate;
    regions.iter().any(|r| r.contains(&cp, tol))
}
