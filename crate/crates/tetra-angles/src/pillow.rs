//! The pillow `ℙ = {1 + 2xyz − x² − y² − z² ≥ 0} ∩ [−1, 1]³` and its
//! boundary, the pillowcase `𝔹ℙ`.

use std::f64::consts::TAU;

use nalgebra::Vector3;

use crate::angle_map::AngleCosTriple;
use crate::base_geometry::BaseTriangle;
use crate::error::{Error, Result};

pub(crate) fn pillow_value_raw(x: f64, y: f64, z: f64) -> f64 {
    1.0 + 2.0 * x * y * z - x * x - y * y - z * z
}

pub fn pillow_value(t: &AngleCosTriple) -> f64 {
    pillow_value_raw(t.c_alpha, t.c_beta, t.c_gamma)
}

/// Gradient of the defining polynomial; it vanishes on `𝔹ℙ` exactly at the
/// four vertices of the inscribed tetrahedron.
pub fn pillow_gradient(t: &AngleCosTriple) -> Vector3<f64> {
    let (x, y, z) = (t.c_alpha, t.c_beta, t.c_gamma);
    Vector3::new(2.0 * (y * z - x), 2.0 * (x * z - y), 2.0 * (x * y - z))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PillowMembership {
    Interior,
    OnPillowcase,
    Outside,
}

pub fn pillow_membership(t: &AngleCosTriple, tol: f64) -> PillowMembership {
    let in_cube = t.to_array().iter().all(|c| c.abs() <= 1.0 + tol);
    if !in_cube {
        return PillowMembership::Outside;
    }
    let v = pillow_value(t);
    if v.abs() <= tol {
        PillowMembership::OnPillowcase
    } else if v > 0.0 {
        PillowMembership::Interior
    } else {
        PillowMembership::Outside
    }
}

/// Parameters `(φ, ψ)` of the pillowcase; `(φ, ψ)` and `(−φ, −ψ)` give the
/// same point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PillowParam {
    pub phi: f64,
    pub psi: f64,
}

impl PillowParam {
    pub fn new(phi: f64, psi: f64) -> Self {
        PillowParam { phi: phi.rem_euclid(TAU), psi: psi.rem_euclid(TAU) }
    }
}

/// `(φ, ψ) ↦ (cos(φ − ψ), cos ψ, cos φ)`.
pub fn param_to_pillowcase(p: &PillowParam) -> AngleCosTriple {
    AngleCosTriple::new((p.phi - p.psi).cos(), p.psi.cos(), p.phi.cos())
}

/// The conic `a·s² + b·s·t + c·t² = rhs` in the two free coordinates
/// `(s, t)`, taken in increasing axis order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadraticForm {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub rhs: f64,
}

impl QuadraticForm {
    pub fn eval(&self, s: f64, t: f64) -> f64 {
        self.a * s * s + self.b * s * t + self.c * t * t
    }

    pub fn residual(&self, s: f64, t: f64) -> f64 {
        self.eval(s, t) - self.rhs
    }

    /// Eccentricity of the ellipse; tends to 1 as it flattens.
    pub fn eccentricity(&self) -> f64 {
        let mean = 0.5 * (self.a + self.c);
        let dev = (0.25 * (self.a - self.c).powi(2) + 0.25 * self.b * self.b).sqrt();
        let (lo, hi) = (mean - dev, mean + dev);
        (1.0 - lo / hi).max(0.0).sqrt()
    }
}

/// Free coordinate indices for a fixed axis (0-based).
pub fn free_axes(axis: usize) -> (usize, usize) {
    match axis {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// Slice of `𝔹ℙ` by the plane `t[axis] = c` (`axis` in 1..=3):
/// `s² − 2c·s·t + t² = 1 − c²`.
pub fn pillowcase_slice(axis: usize, c: f64) -> Result<QuadraticForm> {
    if !(1..=3).contains(&axis) {
        return Err(Error::InvalidBase(format!("axis {axis} not in 1..=3")));
    }
    if !(c.abs() < 1.0) {
        return Err(Error::DegenerateSlice(c));
    }
    Ok(QuadraticForm { a: 1.0, b: -2.0 * c, c: 1.0, rhs: 1.0 - c * c })
}

/// The vertices and edges of the regular tetrahedron inscribed in `𝔹ℙ`.
#[derive(Clone, Debug, PartialEq)]
pub struct PillowcaseEdges {
    pub vertices: [AngleCosTriple; 4],
    /// Pairs of indices into `vertices`.
    pub edges: [(usize, usize); 6],
    pub i1: (AngleCosTriple, AngleCosTriple),
    pub i2: (AngleCosTriple, AngleCosTriple),
    pub i3: (AngleCosTriple, AngleCosTriple),
}

pub fn pillowcase_edges() -> PillowcaseEdges {
    let v = [
        AngleCosTriple::new(1.0, 1.0, 1.0),
        AngleCosTriple::new(1.0, -1.0, -1.0),
        AngleCosTriple::new(-1.0, 1.0, -1.0),
        AngleCosTriple::new(-1.0, -1.0, 1.0),
    ];
    PillowcaseEdges {
        vertices: v,
        edges: [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
        i1: (v[2], v[1]),
        i2: (v[3], v[2]),
        i3: (v[1], v[3]),
    }
}

/// The points `Ã`, `B̃`, `C̃` (images of the circumcircle arcs) and
/// `I = (cos∠BAC, cos∠ABC, cos∠ACB)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpecialPoints {
    pub a_tilde: AngleCosTriple,
    pub b_tilde: AngleCosTriple,
    pub c_tilde: AngleCosTriple,
    pub i_triangle: AngleCosTriple,
}

impl SpecialPoints {
    /// Where `I` sits relative to the pillow: inside for acute bases, on the
    /// pillowcase for right ones, outside for obtuse ones.
    pub fn i_membership(&self, tol: f64) -> PillowMembership {
        pillow_membership(&self.i_triangle, tol)
    }
}

pub fn special_points(base: &BaseTriangle) -> SpecialPoints {
    let [x0, y0, z0] = base.cos_angles();
    SpecialPoints {
        a_tilde: AngleCosTriple::new(-x0, y0, z0),
        b_tilde: AngleCosTriple::new(x0, -y0, z0),
        c_tilde: AngleCosTriple::new(x0, y0, -z0),
        i_triangle: AngleCosTriple::new(x0, y0, z0),
    }
}
