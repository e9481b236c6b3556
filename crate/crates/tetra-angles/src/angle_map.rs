//! The forward map `F(D) = (cos∠BDC, cos∠ADC, cos∠ADB)` and its
//! differential structure.

use std::f64::consts::TAU;

use nalgebra::{Matrix3, Point3, Vector3};

use crate::base_geometry::{BaseClass, BaseTriangle, Vertex};
use crate::error::{Error, Result};

/// A candidate apex `D = (p, q, r)`; the base lies in the plane `r = 0`.
///
/// `F` is even in `r`, so the routines accept either sign, but the
/// canonical sheet is `r ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ApexPoint {
    pub p: f64,
    pub q: f64,
    pub r: f64,
}

impl ApexPoint {
    pub const fn new(p: f64, q: f64, r: f64) -> Self {
        ApexPoint { p, q, r }
    }

    pub fn planar(p: f64, q: f64) -> Self {
        ApexPoint { p, q, r: 0.0 }
    }

    pub fn to_point(self) -> Point3<f64> {
        Point3::new(self.p, self.q, self.r)
    }

    pub fn from_point(p: Point3<f64>) -> Self {
        ApexPoint::new(p.x, p.y, p.z)
    }

    pub fn dist(&self, other: &ApexPoint) -> f64 {
        (self.to_point() - other.to_point()).norm()
    }

    pub fn offset(&self, v: &Vector3<f64>) -> ApexPoint {
        ApexPoint::from_point(self.to_point() + v)
    }
}

/// `(x, y, z) = (|DC|, |DB|, |DA|)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DistanceTriple {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl DistanceTriple {
    pub fn squared(&self) -> [f64; 3] {
        [self.x * self.x, self.y * self.y, self.z * self.z]
    }
}

/// A point `(cos ᾱ, cos β̄, cos γ̄)` with `ᾱ = ∠BDC`, `β̄ = ∠ADC`,
/// `γ̄ = ∠ADB`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleCosTriple {
    pub c_alpha: f64,
    pub c_beta: f64,
    pub c_gamma: f64,
}

impl AngleCosTriple {
    pub const fn new(c_alpha: f64, c_beta: f64, c_gamma: f64) -> Self {
        AngleCosTriple { c_alpha, c_beta, c_gamma }
    }

    pub fn from_array(c: [f64; 3]) -> Self {
        AngleCosTriple::new(c[0], c[1], c[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.c_alpha, self.c_beta, self.c_gamma]
    }

    pub fn to_vector(self) -> Vector3<f64> {
        Vector3::new(self.c_alpha, self.c_beta, self.c_gamma)
    }

    pub fn from_vector(v: Vector3<f64>) -> Self {
        AngleCosTriple::new(v.x, v.y, v.z)
    }

    /// Face angles in radians.
    pub fn angles(self) -> [f64; 3] {
        self.to_array().map(|c| c.clamp(-1.0, 1.0).acos())
    }

    pub fn dist(&self, other: &AngleCosTriple) -> f64 {
        (self.to_vector() - other.to_vector()).norm()
    }

    pub fn max_abs_diff(&self, other: &AngleCosTriple) -> f64 {
        (self.to_vector() - other.to_vector()).amax()
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|c| c.is_finite())
    }
}

pub(crate) fn lift(p: nalgebra::Point2<f64>) -> Vector3<f64> {
    Vector3::new(p.x, p.y, 0.0)
}

fn check_vertex_guard(base: &BaseTriangle, apex: &ApexPoint) -> Result<()> {
    let guard = base.tolerances().tol_dedup * base.circumradius();
    let d = apex.to_point().coords;
    for v in Vertex::ALL {
        if (lift(base.vertex(v)) - d).norm() <= guard {
            return Err(Error::ApexAtBaseVertex(v.letter()));
        }
    }
    Ok(())
}

pub fn distances(base: &BaseTriangle, apex: &ApexPoint) -> Result<DistanceTriple> {
    check_vertex_guard(base, apex)?;
    let d = apex.to_point().coords;
    Ok(DistanceTriple {
        x: (lift(base.c()) - d).norm(),
        y: (lift(base.b()) - d).norm(),
        z: (lift(base.a()) - d).norm(),
    })
}

/// Clamps a law-of-cosines value into `[-1, 1]` if it overshoots by at most
/// `tol`.
fn clamp_cos(c: f64, tol: f64) -> Result<f64> {
    if !c.is_finite() || c.abs() > 1.0 + tol {
        return Err(Error::InconsistentDistances(c));
    }
    Ok(c.clamp(-1.0, 1.0))
}

/// The map `F̄` on distance coordinates, by the law of cosines.
pub fn face_cosines_dist(d: &DistanceTriple, base: &BaseTriangle) -> Result<AngleCosTriple> {
    if !(d.x > 0.0 && d.y > 0.0 && d.z > 0.0) {
        return Err(Error::NonPositiveLength);
    }
    let [xb2, yb2, zb2] = base.side_lengths().squared();
    let [x2, y2, z2] = d.squared();
    let tol = base.tolerances().tol_predicate;
    Ok(AngleCosTriple::new(
        clamp_cos((x2 + y2 - zb2) / (2.0 * d.x * d.y), tol)?,
        clamp_cos((x2 + z2 - yb2) / (2.0 * d.x * d.z), tol)?,
        clamp_cos((y2 + z2 - xb2) / (2.0 * d.y * d.z), tol)?,
    ))
}

/// The forward map `F`.
pub fn face_cosines(base: &BaseTriangle, apex: &ApexPoint) -> Result<AngleCosTriple> {
    let d = distances(base, apex)?;
    face_cosines_dist(&d, base)
}

/// `(∇F₁, ∇F₂, ∇F₃)` in Cartesian components.
pub fn gradients(base: &BaseTriangle, apex: &ApexPoint) -> Result<[Vector3<f64>; 3]> {
    let dm = distances(base, apex)?;
    let d = apex.to_point().coords;
    let da = lift(base.a()) - d;
    let db = lift(base.b()) - d;
    let dc = lift(base.c()) - d;
    let [xb2, yb2, zb2] = base.side_lengths().squared();
    let (x, y, z) = (dm.x, dm.y, dm.z);
    let [x2, y2, z2] = dm.squared();
    let g1 = db * ((x2 - y2 - zb2) / (2.0 * y2 * y * x)) + dc * ((y2 - x2 - zb2) / (2.0 * x2 * x * y));
    let g2 = da * ((x2 - z2 - yb2) / (2.0 * z2 * z * x)) + dc * ((z2 - x2 - yb2) / (2.0 * x2 * x * z));
    let g3 = da * ((y2 - z2 - xb2) / (2.0 * z2 * z * y)) + db * ((z2 - y2 - xb2) / (2.0 * y2 * y * z));
    Ok([g1, g2, g3])
}

fn require_off_plane(base: &BaseTriangle, apex: &ApexPoint) -> Result<()> {
    if apex.r.abs() <= base.tolerances().tol_predicate * base.circumradius() {
        return Err(Error::CoplanarApex);
    }
    Ok(())
}

/// `|JF|` with rows `∇F₃, ∇F₂, ∇F₁` written in the basis `DC, DB, DA`:
/// `−Q/(4x⁴y⁴z⁴)` where `Q` is the degeneracy polynomial.
pub fn jacobian_det(base: &BaseTriangle, apex: &ApexPoint) -> Result<f64> {
    require_off_plane(base, apex)?;
    let d = distances(base, apex)?;
    let q = crate::degeneracy_locus::degeneracy_residual(base, &d);
    let [x2, y2, z2] = d.squared();
    Ok(-q / (4.0 * (x2 * y2 * z2).powi(2)))
}

/// Determinant of the Cartesian Jacobian with rows `∇F₁, ∇F₂, ∇F₃`.
pub fn jacobian_det_cartesian(base: &BaseTriangle, apex: &ApexPoint) -> Result<f64> {
    let j = jacobian_det(base, apex)?;
    let d = apex.to_point().coords;
    let m = Matrix3::from_rows(&[
        (lift(base.c()) - d).transpose(),
        (lift(base.b()) - d).transpose(),
        (lift(base.a()) - d).transpose(),
    ]);
    // reversing the row order flips the sign
    Ok(-j * m.determinant())
}

/// Strict angle inequalities satisfied by every non-degenerate tetrahedron:
/// each face angle is below the sum of the other two and the sum is below
/// `2π`.
pub fn angle_inequalities(t: &AngleCosTriple) -> bool {
    let [a, b, c] = t.angles();
    a < b + c && b < a + c && c < a + b && a + b + c < TAU
}

/// Outcome of one Rieck statement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RieckStatus {
    Holds,
    Violated,
    HypothesisNotMet,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RieckStatement {
    /// `"1"`, `"2"` or `"3"` followed by the cyclic shift (0, 1, 2).
    pub label: String,
    pub status: RieckStatus,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RieckReport {
    pub statements: Vec<RieckStatement>,
}

impl RieckReport {
    pub fn violations(&self) -> usize {
        self.statements.iter().filter(|s| s.status == RieckStatus::Violated).count()
    }
}

/// Evaluates the three Rieck statements for an acute base and all their
/// cyclic shifts `ᾱ→β̄→γ̄`, `∠BAC→∠ABC→∠ACB`.
pub fn rieck_inequalities(base: &BaseTriangle, apex: &ApexPoint) -> Result<RieckReport> {
    if base.classify() != BaseClass::Acute {
        return Err(Error::NotAcuteBase);
    }
    let t = face_cosines(base, apex)?;
    let g = t.angles();
    let a = base.base_angles();
    let tol = base.tolerances().tol_predicate;
    let mut statements = Vec::with_capacity(9);
    for k in 0..3 {
        let (a1, a2, a3) = (a[k], a[(k + 1) % 3], a[(k + 2) % 3]);
        let (g1, g2, g3) = (g[k], g[(k + 1) % 3], g[(k + 2) % 3]);
        let verdict = |ok: bool| if ok { RieckStatus::Holds } else { RieckStatus::Violated };
        statements.push(RieckStatement {
            label: format!("1.{k}"),
            status: verdict(a1 + g2 + g3 < TAU + tol),
        });
        let hyp = g1 <= a1;
        statements.push(RieckStatement {
            label: format!("2.{k}"),
            status: if hyp { verdict(g2 <= a2.max(a3 + g1) + tol) } else { RieckStatus::HypothesisNotMet },
        });
        statements.push(RieckStatement {
            label: format!("3.{k}"),
            status: if hyp {
                verdict(a3.cos() * g2.cos() + a2.cos() * g3.cos() > -tol)
            } else {
                RieckStatus::HypothesisNotMet
            },
        });
    }
    Ok(RieckReport { statements })
}
