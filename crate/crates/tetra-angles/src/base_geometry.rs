//! The fixed base triangle `ABC`, its canonical frame and the
//! Cayley-Menger realizability tests.

use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix4, Matrix5, Point2, Vector2};
use serde::Deserialize;

use crate::angle_map::DistanceTriple;
use crate::error::{Error, Result};

/// Relative tolerances shared by every predicate in the crate.
///
/// All lengths are normalized to circumradius 1 before a tolerance is
/// applied, so the values are dimensionless.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ToleranceConfig {
    pub tol_area: f64,
    pub tol_predicate: f64,
    pub tol_root: f64,
    pub tol_dedup: f64,
    pub rng_seed: u64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            tol_area: 1e-12,
            tol_predicate: 1e-9,
            tol_root: 1e-12,
            tol_dedup: 1e-7,
            rng_seed: 0,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let named = [
            ("tol_area", self.tol_area),
            ("tol_predicate", self.tol_predicate),
            ("tol_root", self.tol_root),
            ("tol_dedup", self.tol_dedup),
        ];
        for (name, v) in named {
            if !(v > 0.0 && v <= 1e-3) {
                return Err(Error::InvalidTolerance(format!("{name} = {v} not in (0, 1e-3]")));
            }
        }
        Ok(())
    }
}

/// A base vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    A,
    B,
    C,
}

impl Vertex {
    pub const ALL: [Vertex; 3] = [Vertex::A, Vertex::B, Vertex::C];

    pub fn index(self) -> usize {
        match self {
            Vertex::A => 0,
            Vertex::B => 1,
            Vertex::C => 2,
        }
    }

    pub fn from_index(i: usize) -> Vertex {
        Vertex::ALL[i % 3]
    }

    pub fn letter(self) -> char {
        ['A', 'B', 'C'][self.index()]
    }

    pub fn opposite_side(self) -> Side {
        match self {
            Vertex::A => Side::BC,
            Vertex::B => Side::AC,
            Vertex::C => Side::AB,
        }
    }
}

/// A base side, named by its endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    BC,
    AC,
    AB,
}

impl Side {
    pub const ALL: [Side; 3] = [Side::BC, Side::AC, Side::AB];

    pub fn opposite_vertex(self) -> Vertex {
        match self {
            Side::BC => Vertex::A,
            Side::AC => Vertex::B,
            Side::AB => Vertex::C,
        }
    }

    pub fn endpoints(self) -> (Vertex, Vertex) {
        match self {
            Side::BC => (Vertex::B, Vertex::C),
            Side::AC => (Vertex::A, Vertex::C),
            Side::AB => (Vertex::A, Vertex::B),
        }
    }

    /// The vertex shared by two distinct sides.
    pub fn common_vertex(self, other: Side) -> Option<Vertex> {
        if self == other {
            return None;
        }
        let a = self.opposite_vertex().index();
        let b = other.opposite_vertex().index();
        Some(Vertex::from_index(3 - a - b))
    }

    pub fn name(self) -> &'static str {
        match self {
            Side::BC => "BC",
            Side::AC => "AC",
            Side::AB => "AB",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseClass {
    Acute,
    Right,
    Obtuse,
}

/// Side lengths `x̄ = |AB|`, `ȳ = |AC|`, `z̄ = |BC|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SideLengths {
    pub ab: f64,
    pub ac: f64,
    pub bc: f64,
}

impl SideLengths {
    /// Squared lengths in the order `(x̄², ȳ², z̄²)`.
    pub fn squared(&self) -> [f64; 3] {
        [self.ab * self.ab, self.ac * self.ac, self.bc * self.bc]
    }

    pub fn max(&self) -> f64 {
        self.ab.max(self.ac).max(self.bc)
    }
}

/// Position relative to the elliptic paraboloid `𝔻 = 0` in squared-distance
/// coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParaboloidSide {
    Inside,
    OnParaboloid,
    Outside,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum BaseJson {
    Points {
        #[serde(rename = "A")]
        a: [f64; 2],
        #[serde(rename = "B")]
        b: [f64; 2],
        #[serde(rename = "C")]
        c: [f64; 2],
    },
    Angles {
        angles: [f64; 3],
        circumradius: f64,
    },
}

/// The base triangle together with the tolerances used by all predicates
/// evaluated against it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BaseTriangle {
    a: Point2<f64>,
    b: Point2<f64>,
    c: Point2<f64>,
    tol: ToleranceConfig,
}

impl BaseTriangle {
    pub fn new(a: Point2<f64>, b: Point2<f64>, c: Point2<f64>) -> Result<Self> {
        Self::with_tolerances(a, b, c, ToleranceConfig::default())
    }

    pub fn with_tolerances(
        a: Point2<f64>,
        b: Point2<f64>,
        c: Point2<f64>,
        tol: ToleranceConfig,
    ) -> Result<Self> {
        tol.validate()?;
        if ![a, b, c].iter().all(|p| p.x.is_finite() && p.y.is_finite()) {
            return Err(Error::InvalidBase("non-finite vertex coordinate".into()));
        }
        let base = BaseTriangle { a, b, c, tol };
        let area2 = base.signed_area2();
        let s = base.side_lengths_unchecked().max();
        if !(s > 0.0) || area2.abs() <= tol.tol_area * s * s {
            return Err(Error::DegenerateBase { area2 });
        }
        Ok(base)
    }

    /// Builds the base inscribed in a circle of radius `circumradius` centred
    /// at the origin, with `A = (R, 0)` and the vertices in counterclockwise
    /// order. `angles` are the interior angles at `A`, `B`, `C` in radians.
    pub fn from_angles(angles: [f64; 3], circumradius: f64) -> Result<Self> {
        Self::from_angles_with_tolerances(angles, circumradius, ToleranceConfig::default())
    }

    pub fn from_angles_with_tolerances(
        angles: [f64; 3],
        circumradius: f64,
        tol: ToleranceConfig,
    ) -> Result<Self> {
        if !(circumradius > 0.0 && circumradius.is_finite()) {
            return Err(Error::InvalidBase(format!("circumradius {circumradius} must be positive")));
        }
        if angles.iter().any(|&x| !(x > 0.0 && x < PI)) {
            return Err(Error::InvalidBase("angles must lie in (0, pi)".into()));
        }
        let sum: f64 = angles.iter().sum();
        if (sum - PI).abs() > tol.tol_predicate.max(1e-12) * PI {
            return Err(Error::InvalidBase(format!("angles sum to {sum}, expected pi")));
        }
        let r = circumradius;
        let on_circle = |t: f64| Point2::new(r * t.cos(), r * t.sin());
        Self::with_tolerances(
            on_circle(0.0),
            on_circle(2.0 * angles[2]),
            on_circle(-2.0 * angles[1]),
            tol,
        )
    }

    /// Parses `{"A":[..],"B":[..],"C":[..]}` or
    /// `{"angles":[a1,a2,a3],"circumradius":R}`.
    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_json_with_tolerances(text, ToleranceConfig::default())
    }

    pub fn from_json_with_tolerances(text: &str, tol: ToleranceConfig) -> Result<Self> {
        let parsed: BaseJson =
            serde_json::from_str(text).map_err(|e| Error::InvalidBase(e.to_string()))?;
        match parsed {
            BaseJson::Points { a, b, c } => Self::with_tolerances(
                Point2::new(a[0], a[1]),
                Point2::new(b[0], b[1]),
                Point2::new(c[0], c[1]),
                tol,
            ),
            BaseJson::Angles { angles, circumradius } => {
                Self::from_angles_with_tolerances(angles, circumradius, tol)
            }
        }
    }

    pub fn a(&self) -> Point2<f64> {
        self.a
    }

    pub fn b(&self) -> Point2<f64> {
        self.b
    }

    pub fn c(&self) -> Point2<f64> {
        self.c
    }

    pub fn vertex(&self, v: Vertex) -> Point2<f64> {
        match v {
            Vertex::A => self.a,
            Vertex::B => self.b,
            Vertex::C => self.c,
        }
    }

    pub fn vertices(&self) -> [Point2<f64>; 3] {
        [self.a, self.b, self.c]
    }

    pub fn tolerances(&self) -> &ToleranceConfig {
        &self.tol
    }

    /// Same vertices, different tolerances.
    pub fn with_tol(&self, tol: ToleranceConfig) -> Result<Self> {
        Self::with_tolerances(self.a, self.b, self.c, tol)
    }

    /// Applies `p ↦ s·R(θ)·p + t` to every vertex.
    pub fn transformed(&self, scale: f64, rotation: f64, translation: Vector2<f64>) -> Result<Self> {
        let (s, c) = rotation.sin_cos();
        let f = |p: Point2<f64>| {
            Point2::new(scale * (c * p.x - s * p.y), scale * (s * p.x + c * p.y)) + translation
        };
        Self::with_tolerances(f(self.a), f(self.b), f(self.c), self.tol)
    }

    /// The coefficient `C₁ = a₁b₂ − a₁c₂ − a₂b₁ + a₂c₁ + b₁c₂ − b₂c₁`, twice the
    /// signed area (positive for counterclockwise `ABC`).
    pub fn signed_area2(&self) -> f64 {
        let (a, b, c) = (self.a, self.b, self.c);
        a.x * b.y - a.x * c.y - a.y * b.x + a.y * c.x + b.x * c.y - b.y * c.x
    }

    pub fn area(&self) -> f64 {
        0.5 * self.signed_area2().abs()
    }

    fn side_lengths_unchecked(&self) -> SideLengths {
        SideLengths {
            ab: (self.b - self.a).norm(),
            ac: (self.c - self.a).norm(),
            bc: (self.c - self.b).norm(),
        }
    }

    /// `(x̄, ȳ, z̄) = (|AB|, |AC|, |BC|)`.
    pub fn side_lengths(&self) -> SideLengths {
        self.side_lengths_unchecked()
    }

    pub fn side_length(&self, side: Side) -> f64 {
        let (p, q) = side.endpoints();
        (self.vertex(q) - self.vertex(p)).norm()
    }

    /// Interior angles `(∠BAC, ∠ABC, ∠ACB)`.
    pub fn base_angles(&self) -> [f64; 3] {
        let angle_at = |p: Point2<f64>, q: Point2<f64>, r: Point2<f64>| {
            let u = q - p;
            let w = r - p;
            (u.x * w.y - u.y * w.x).abs().atan2(u.dot(&w))
        };
        [
            angle_at(self.a, self.b, self.c),
            angle_at(self.b, self.c, self.a),
            angle_at(self.c, self.a, self.b),
        ]
    }

    /// Cosines of the interior angles, the coordinates of the point `I`.
    pub fn cos_angles(&self) -> [f64; 3] {
        let s = self.side_lengths().squared();
        let (x2, y2, z2) = (s[0], s[1], s[2]);
        let (x, y, z) = (x2.sqrt(), y2.sqrt(), z2.sqrt());
        [
            (x2 + y2 - z2) / (2.0 * x * y),
            (x2 + z2 - y2) / (2.0 * x * z),
            (y2 + z2 - x2) / (2.0 * y * z),
        ]
    }

    /// `4·cos∠BAC·cos∠ABC·cos∠ACB`.
    pub fn cos_product(&self) -> f64 {
        let c = self.cos_angles();
        4.0 * c[0] * c[1] * c[2]
    }

    pub fn classify(&self) -> BaseClass {
        let p = self.cos_product();
        if p.abs() <= self.tol.tol_predicate {
            BaseClass::Right
        } else if p > 0.0 {
            BaseClass::Acute
        } else {
            BaseClass::Obtuse
        }
    }

    /// The vertex with the largest interior angle (first one on ties).
    pub fn largest_angle_vertex(&self) -> Vertex {
        let ang = self.base_angles();
        let mut k = 0;
        for i in 1..3 {
            if ang[i] > ang[k] {
                k = i;
            }
        }
        Vertex::from_index(k)
    }

    pub fn circumcircle(&self) -> (Point2<f64>, f64) {
        let b = self.b - self.a;
        let c = self.c - self.a;
        let d = 2.0 * (b.x * c.y - b.y * c.x);
        let b2 = b.norm_squared();
        let c2 = c.norm_squared();
        let ux = (c.y * b2 - b.y * c2) / d;
        let uy = (b.x * c2 - c.x * b2) / d;
        let s = self.side_lengths();
        let radius = s.ab * s.ac * s.bc / (2.0 * self.signed_area2().abs());
        (self.a + Vector2::new(ux, uy), radius)
    }

    pub fn circumcenter(&self) -> Point2<f64> {
        self.circumcircle().0
    }

    pub fn circumradius(&self) -> f64 {
        self.circumcircle().1
    }

    pub fn canonicalize(&self) -> CanonicalFrame {
        CanonicalFrame::new(self)
    }

    /// The 5×5 Cayley-Menger determinant of `ABCD` with `|DC| = x`,
    /// `|DB| = y`, `|DA| = z`.
    pub fn cayley_menger(&self, d: &DistanceTriple) -> Result<f64> {
        if !(d.x > 0.0 && d.y > 0.0 && d.z > 0.0) {
            return Err(Error::NonPositiveLength);
        }
        let [xb2, yb2, zb2] = self.side_lengths().squared();
        let (u, v, w) = (d.x * d.x, d.y * d.y, d.z * d.z);
        let m = Matrix5::new(
            0.0, u, v, w, 1.0, //
            u, 0.0, zb2, yb2, 1.0, //
            v, zb2, 0.0, xb2, 1.0, //
            w, yb2, xb2, 0.0, 1.0, //
            1.0, 1.0, 1.0, 1.0, 0.0,
        );
        Ok(m.determinant())
    }

    /// The (1,1)-minor `𝔻₁` of the Cayley-Menger matrix, which only involves
    /// the base.
    pub fn cayley_menger_base(&self) -> f64 {
        let [xb2, yb2, zb2] = self.side_lengths().squared();
        Matrix4::new(
            0.0, zb2, yb2, 1.0, //
            zb2, 0.0, xb2, 1.0, //
            yb2, xb2, 0.0, 1.0, //
            1.0, 1.0, 1.0, 0.0,
        )
        .determinant()
    }

    pub fn is_realizable(&self, d: &DistanceTriple) -> Result<bool> {
        let det = self.cayley_menger(d)?;
        let scale = [d.x, d.y, d.z, self.side_lengths().max()]
            .into_iter()
            .fold(0.0f64, f64::max)
            .powi(6);
        Ok(det > self.tol.tol_predicate * scale && self.cayley_menger_base() < 0.0)
    }

    /// `𝔻/2` as a quadratic polynomial in the squared distances
    /// `(u, v, w) = (x², y², z²)`.
    pub fn paraboloid_value(&self, u: f64, v: f64, w: f64) -> f64 {
        let [x2, y2, z2] = self.side_lengths().squared();
        -x2 * u * u - y2 * v * v - z2 * w * w
            + (x2 + y2 - z2) * u * v
            + (x2 - y2 + z2) * u * w
            + (y2 + z2 - x2) * v * w
            + (x2 * y2 + x2 * z2 - x2 * x2) * u
            + (x2 * y2 + y2 * z2 - y2 * y2) * v
            + (x2 * z2 + y2 * z2 - z2 * z2) * w
            - x2 * y2 * z2
    }

    pub fn dt_membership(&self, u: f64, v: f64, w: f64) -> ParaboloidSide {
        let r2 = self.circumradius().powi(2);
        let val = self.paraboloid_value(u, v, w) / (r2 * r2 * r2);
        if val.abs() <= self.tol.tol_predicate {
            ParaboloidSide::OnParaboloid
        } else if val > 0.0 {
            ParaboloidSide::Inside
        } else {
            ParaboloidSide::Outside
        }
    }
}

/// `V² = x²y²z²(1 + 2c₁c₂c₃ − c₁² − c₂² − c₃²)/36`.
pub fn volume_squared_cosines(x: f64, y: f64, z: f64, c: [f64; 3]) -> f64 {
    let p = crate::pillow::pillow_value_raw(c[0], c[1], c[2]);
    x * x * y * y * z * z * p / 36.0
}

/// The four-sine form of the volume.
pub fn volume_squared_sines(x: f64, y: f64, z: f64, alpha: f64, beta: f64, gamma: f64) -> f64 {
    let s = ((alpha + beta + gamma) / 2.0).sin()
        * ((alpha + beta - gamma) / 2.0).sin()
        * ((alpha + gamma - beta) / 2.0).sin()
        * ((beta + gamma - alpha) / 2.0).sin();
    x * x * y * y * z * z * s / 9.0
}

/// Orientation-preserving similarity that moves the circumcenter to the
/// origin, scales the circumradius to 1 and puts `A` at `(1, 0)`.
///
/// The primary data are the angular positions of `B` and `C`; the two
/// tangent-half-angle conventions are derived on demand.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CanonicalFrame {
    center: Point2<f64>,
    radius: f64,
    cos_rot: f64,
    sin_rot: f64,
    theta_b: f64,
    theta_c: f64,
    angles: [f64; 3],
    tol: f64,
}

fn wrap_tau(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y >= TAU {
        0.0
    } else {
        y
    }
}

impl CanonicalFrame {
    fn new(base: &BaseTriangle) -> Self {
        let (center, radius) = base.circumcircle();
        let da = base.a - center;
        let rot = da.y.atan2(da.x);
        let (sin_rot, cos_rot) = rot.sin_cos();
        let mut f = CanonicalFrame {
            center,
            radius,
            cos_rot,
            sin_rot,
            theta_b: 0.0,
            theta_c: 0.0,
            angles: base.base_angles(),
            tol: base.tol.tol_predicate,
        };
        let pb = f.to_frame(base.b);
        let pc = f.to_frame(base.c);
        f.theta_b = wrap_tau(pb.y.atan2(pb.x));
        f.theta_c = wrap_tau(pc.y.atan2(pc.x));
        f
    }

    pub fn center(&self) -> Point2<f64> {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Rotation angle of the similarity (the direction of `A` seen from the
    /// circumcenter).
    pub fn rotation(&self) -> f64 {
        self.sin_rot.atan2(self.cos_rot)
    }

    /// Angular position of `B` in `(0, 2π)`.
    pub fn theta_b(&self) -> f64 {
        self.theta_b
    }

    /// Angular position of `C` in `(0, 2π)`.
    pub fn theta_c(&self) -> f64 {
        self.theta_c
    }

    /// Angular position of a vertex (0 for `A`).
    pub fn theta(&self, v: Vertex) -> f64 {
        match v {
            Vertex::A => 0.0,
            Vertex::B => self.theta_b,
            Vertex::C => self.theta_c,
        }
    }

    /// Base angles `(∠BAC, ∠ABC, ∠ACB)`, which the similarity preserves.
    pub fn base_angles(&self) -> [f64; 3] {
        self.angles
    }

    /// Whether the base angle at `v` is acute, with the right-angle band of
    /// [`BaseTriangle::classify`].
    pub fn is_acute_at(&self, v: Vertex) -> bool {
        self.angles[v.index()].cos() > self.tol
    }

    /// Predicate tolerance inherited from the base.
    pub fn tol_predicate(&self) -> f64 {
        self.tol
    }

    /// Whether `A`, `B`, `C` run counterclockwise around the circumcircle.
    pub fn is_counterclockwise(&self) -> bool {
        self.theta_b < self.theta_c
    }

    /// `u = cot(θ_B/2)`, `v = cot(θ_C/2)`, so that
    /// `B = ((u²−1)/(u²+1), 2u/(u²+1))`. Used by the cylinder-image formulas.
    pub fn uv_cot(&self) -> (f64, f64) {
        (
            1.0 / (self.theta_b / 2.0).tan(),
            1.0 / (self.theta_c / 2.0).tan(),
        )
    }

    /// `u = tan(θ_B/2)`, `v = tan(θ_C/2)`, so that
    /// `B = ((1−u²)/(1+u²), 2u/(1+u²))`. Used by the interior witness.
    pub fn uv_tan(&self) -> (f64, f64) {
        ((self.theta_b / 2.0).tan(), (self.theta_c / 2.0).tan())
    }

    pub fn to_frame(&self, p: Point2<f64>) -> Point2<f64> {
        let d = (p - self.center) / self.radius;
        Point2::new(
            self.cos_rot * d.x + self.sin_rot * d.y,
            -self.sin_rot * d.x + self.cos_rot * d.y,
        )
    }

    pub fn from_frame(&self, p: Point2<f64>) -> Point2<f64> {
        let d = Vector2::new(
            self.cos_rot * p.x - self.sin_rot * p.y,
            self.sin_rot * p.x + self.cos_rot * p.y,
        );
        self.center + d * self.radius
    }

    /// Rotates a frame vector back into base coordinates (no scaling).
    pub fn rotate_from_frame(&self, v: Vector2<f64>) -> Vector2<f64> {
        Vector2::new(
            self.cos_rot * v.x - self.sin_rot * v.y,
            self.sin_rot * v.x + self.cos_rot * v.y,
        )
    }

    /// A vertex expressed in the frame, on the unit circle.
    pub fn vertex(&self, v: Vertex) -> Point2<f64> {
        let t = self.theta(v);
        Point2::new(t.cos(), t.sin())
    }
}

/// The three reference bases: equilateral, the 3-4-5 right triangle and
/// an obtuse triangle with angles `(π/6, π/4, 7π/12)`.
pub mod fixtures {
    use super::*;

    pub fn equilateral() -> BaseTriangle {
        BaseTriangle::from_angles([PI / 3.0; 3], 1.0).unwrap()
    }

    pub fn pythagorean() -> BaseTriangle {
        BaseTriangle::new(Point2::new(0.0, 0.0), Point2::new(3.0, 0.0), Point2::new(0.0, 4.0)).unwrap()
    }

    pub fn obtuse() -> BaseTriangle {
        BaseTriangle::from_angles([PI / 6.0, PI / 4.0, 7.0 * PI / 12.0], 1.0).unwrap()
    }

    pub fn all() -> [BaseTriangle; 3] {
        [equilateral(), pythagorean(), obtuse()]
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn det_cofactor(m: &[Vec<f64>]) -> f64 {
        let n = m.len();
        if n == 1 {
            return m[0][0];
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<f64>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, v)| *v).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sign * m[0][j] * det_cofactor(&minor)
            })
            .sum()
    }

    #[test]
    fn side_lengths_of_fixtures() {
        let s = equilateral().side_lengths();
        for v in [s.ab, s.ac, s.bc] {
            assert_relative_eq!(v, 3f64.sqrt(), epsilon = 1e-14);
        }
        let s = pythagorean().side_lengths();
        assert_eq!((s.ab, s.ac, s.bc), (3.0, 4.0, 5.0));
    }

    #[test]
    fn coincident_vertices_are_degenerate() {
        let p = Point2::new(1.0, 2.0);
        let e = BaseTriangle::new(p, p, Point2::new(0.0, 0.0)).unwrap_err();
        assert!(matches!(e, Error::DegenerateBase { .. }));
        let e = BaseTriangle::new(Point2::origin(), Point2::new(1.0, 1.0), Point2::new(2.0, 2.0));
        assert!(e.is_err());
    }

    #[test]
    fn angles_and_classification() {
        let eq = equilateral();
        for a in eq.base_angles() {
            assert_relative_eq!(a, PI / 3.0, epsilon = 1e-14);
        }
        assert_eq!(eq.classify(), BaseClass::Acute);
        let p = pythagorean();
        assert_relative_eq!(p.base_angles()[0], PI / 2.0, epsilon = 1e-15);
        assert_eq!(p.classify(), BaseClass::Right);
        assert_eq!(obtuse().classify(), BaseClass::Obtuse);
        assert_eq!(obtuse().largest_angle_vertex(), Vertex::C);
        assert_eq!(p.largest_angle_vertex(), Vertex::A);
    }

    #[test]
    fn circumcircle_of_fixtures() {
        let (c, r) = equilateral().circumcircle();
        assert_relative_eq!(r, 1.0, epsilon = 1e-14);
        assert!(c.coords.norm() < 1e-14);
        let (c, r) = pythagorean().circumcircle();
        assert_relative_eq!(r, 2.5, epsilon = 1e-14);
        assert_relative_eq!(c.x, 1.5, epsilon = 1e-14);
        assert_relative_eq!(c.y, 2.0, epsilon = 1e-14);
    }

    #[test]
    fn equilateral_frame_is_identity() {
        let f = equilateral().canonicalize();
        assert_relative_eq!(f.theta_b(), 2.0 * PI / 3.0, epsilon = 1e-14);
        assert_relative_eq!(f.theta_c(), 4.0 * PI / 3.0, epsilon = 1e-14);
        let (u, v) = f.uv_cot();
        assert_relative_eq!(u, 1.0 / 3f64.sqrt(), epsilon = 1e-14);
        assert_relative_eq!(v, -1.0 / 3f64.sqrt(), epsilon = 1e-14);
        let (u, v) = f.uv_tan();
        assert_relative_eq!(u, 3f64.sqrt(), epsilon = 1e-13);
        assert_relative_eq!(v, -(3f64.sqrt()), epsilon = 1e-13);
        assert!(f.is_counterclockwise());
    }

    #[test]
    fn regular_tetrahedron_cayley_menger() {
        let base = BaseTriangle::from_angles([PI / 3.0; 3], 1.0 / 3f64.sqrt()).unwrap();
        let d = DistanceTriple { x: 1.0, y: 1.0, z: 1.0 };
        assert_relative_eq!(base.cayley_menger(&d).unwrap(), 4.0, epsilon = 1e-12);
        assert!(base.is_realizable(&d).unwrap());
        // side 1 base: 𝔻₁ = −16 S² = −3
        assert_relative_eq!(base.cayley_menger_base(), -3.0, epsilon = 1e-12);
    }

    #[test]
    fn planar_apex_is_boundary() {
        let base = equilateral();
        let d = DistanceTriple { x: 1.0, y: 1.0, z: 1.0 };
        assert!(base.cayley_menger(&d).unwrap().abs() < 1e-12);
        assert!(!base.is_realizable(&d).unwrap());
        assert!(base.cayley_menger(&DistanceTriple { x: 0.0, y: 1.0, z: 1.0 }).is_err());
    }

    #[test]
    fn gross_violation_is_not_realizable() {
        let base = BaseTriangle::from_angles([PI / 3.0; 3], 1.0 / 3f64.sqrt()).unwrap();
        let d = DistanceTriple { x: 100.0, y: 1.0, z: 1.0 };
        assert!(!base.is_realizable(&d).unwrap());
    }

    #[test]
    fn cayley_menger_matches_cofactor_expansion_and_coordinates() {
        let base = pythagorean();
        let s = base.side_lengths().squared();
        for (p, q, r) in [(0.3, 0.7, 1.1), (2.0, -1.0, 0.5), (5.0, 5.0, 3.0)] {
            let dv = nalgebra::Vector3::new(p, q, r);
            let dist = |v: Point2<f64>| (nalgebra::Vector3::new(v.x, v.y, 0.0) - dv).norm();
            let d = DistanceTriple { x: dist(base.c()), y: dist(base.b()), z: dist(base.a()) };
            let (u, v, w) = (d.x * d.x, d.y * d.y, d.z * d.z);
            let m = vec![
                vec![0.0, u, v, w, 1.0],
                vec![u, 0.0, s[2], s[1], 1.0],
                vec![v, s[2], 0.0, s[0], 1.0],
                vec![w, s[1], s[0], 0.0, 1.0],
                vec![1.0, 1.0, 1.0, 1.0, 0.0],
            ];
            let brute = det_cofactor(&m);
            let det = base.cayley_menger(&d).unwrap();
            assert_relative_eq!(det, brute, max_relative = 1e-10);
            // V = area·r/3
            let vol2 = (base.area() * r / 3.0).powi(2);
            assert_relative_eq!(det, 288.0 * vol2, max_relative = 1e-10);
            assert_relative_eq!(base.paraboloid_value(u, v, w), det / 2.0, max_relative = 1e-10);
        }
    }

    #[test]
    fn paraboloid_marked_points() {
        for base in all() {
            let [x2, y2, z2] = base.side_lengths().squared();
            assert_eq!(base.dt_membership(0.0, z2, y2), ParaboloidSide::OnParaboloid);
            assert_eq!(base.dt_membership(z2, 0.0, x2), ParaboloidSide::OnParaboloid);
            assert_eq!(base.dt_membership(y2, x2, 0.0), ParaboloidSide::OnParaboloid);
            let r = base.circumradius();
            let h2 = 0.25 * r * r + r * r;
            assert_eq!(base.dt_membership(h2, h2, h2), ParaboloidSide::Inside);
        }
    }

    #[test]
    fn collinear_limit_shrinks_base_minor() {
        let mut prev = f64::NEG_INFINITY;
        for k in 1..8 {
            let h = 10f64.powi(-k);
            let base = BaseTriangle::new(Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.5, h)).unwrap();
            let d1 = base.cayley_menger_base();
            assert!(d1 < 0.0);
            assert!(d1 > prev);
            prev = d1;
        }
        assert!(prev.abs() < 1e-12);
    }

    #[test]
    fn volume_formulas_regular() {
        assert_relative_eq!(volume_squared_cosines(1.0, 1.0, 1.0, [0.5; 3]), 1.0 / 72.0, epsilon = 1e-15);
        let t = PI / 3.0;
        assert_relative_eq!(volume_squared_sines(1.0, 1.0, 1.0, t, t, t), 1.0 / 72.0, epsilon = 1e-15);
        assert!(volume_squared_sines(1.0, 2.0, 3.0, 1.0, 0.4, 0.6).abs() < 1e-15);
    }

    #[test]
    fn volume_formulas_on_pillowcase_vanish() {
        let (phi, psi) = (0.7f64, 2.1f64);
        let c = [(phi - psi).cos(), psi.cos(), phi.cos()];
        assert!(volume_squared_cosines(1.3, 0.4, 2.0, c).abs() < 1e-14);
    }

    #[test]
    fn json_forms() {
        let b = BaseTriangle::from_json(r#"{"A":[0,0],"B":[3,0],"C":[0,4]}"#).unwrap();
        assert_eq!(b, pythagorean());
        let b = BaseTriangle::from_json(r#"{"angles":[1.0471975511965976,1.0471975511965976,1.0471975511965979],"circumradius":2}"#)
            .unwrap();
        assert_relative_eq!(b.circumradius(), 2.0, epsilon = 1e-12);
        assert!(BaseTriangle::from_json(r#"{"A":[0,0],"B":[0,0],"C":[0,4]}"#).is_err());
        assert!(BaseTriangle::from_json(r#"{"X":1}"#).is_err());
        assert!(BaseTriangle::from_json(r#"{"angles":[1,1,1],"circumradius":1}"#).is_err());
    }

    #[test]
    fn tolerance_validation() {
        let mut t = ToleranceConfig::default();
        assert!(t.validate().is_ok());
        t.tol_dedup = 0.1;
        assert!(t.validate().is_err());
        t.tol_dedup = 0.0;
        assert!(t.validate().is_err());
    }

    fn arb_base() -> impl Strategy<Value = BaseTriangle> {
        (-5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64)
            .prop_filter_map("degenerate", |(a, b, c, d, e, f)| {
                let base = BaseTriangle::new(Point2::new(a, b), Point2::new(c, d), Point2::new(e, f)).ok()?;
                let ang = base.base_angles();
                (ang.iter().cloned().fold(f64::INFINITY, f64::min) > 0.05).then_some(base)
            })
    }

    proptest! {
        #[test]
        fn frame_puts_vertices_on_unit_circle(base in arb_base()) {
            let f = base.canonicalize();
            for p in base.vertices() {
                let q = f.to_frame(p);
                prop_assert!((q.coords.norm() - 1.0).abs() < 1e-12);
                let back = f.from_frame(q);
                prop_assert!((back - p).norm() <= 1e-12 * (1.0 + p.coords.norm()));
            }
            let a = f.to_frame(base.a());
            prop_assert!((a.x - 1.0).abs() < 1e-12 && a.y.abs() < 1e-12);
            prop_assert!((f.theta_b() - f.theta_c()).abs() > 1e-6);
            let (c, r) = base.circumcircle();
            for p in base.vertices() {
                prop_assert!(((p - c).norm() - r).abs() <= 1e-9 * r);
            }
            let sum: f64 = base.base_angles().iter().sum();
            prop_assert!((sum - PI).abs() < 1e-9);
        }

        #[test]
        fn frame_and_class_are_similarity_invariant(base in arb_base(), s in 0.1..10.0f64, rot in -3.0..3.0f64, tx in -4.0..4.0f64, ty in -4.0..4.0f64) {
            let moved = base.transformed(s, rot, Vector2::new(tx, ty)).unwrap();
            let f0 = base.canonicalize();
            let f1 = moved.canonicalize();
            prop_assert!((f0.theta_b() - f1.theta_b()).abs() < 1e-9);
            prop_assert!((f0.theta_c() - f1.theta_c()).abs() < 1e-9);
            let p0 = base.cos_product();
            let p1 = moved.cos_product();
            prop_assert!((p0 - p1).abs() < 1e-9);
            if p0.abs() > 1e-6 {
                prop_assert_eq!(base.classify(), moved.classify());
            }
        }

        #[test]
        fn base_minor_is_negative(base in arb_base()) {
            let s = base.side_lengths().max();
            prop_assert!(base.cayley_menger_base() < 0.0);
            let expect = -16.0 * base.area().powi(2);
            prop_assert!((base.cayley_menger_base() - expect).abs() <= 1e-9 * s.powi(4));
        }
    }
}
