//! Inverting `F`: all apexes with prescribed face-angle cosines over a
//! fixed base (a perspective-three-point problem).

use nalgebra::{Matrix3, Point2, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::angle_map::{face_cosines, gradients, AngleCosTriple, ApexPoint};
use crate::base_geometry::{BaseTriangle, CanonicalFrame, Vertex};
use crate::error::{Error, Result};
use crate::pillow::pillow_value;
use crate::poly::Poly;

/// Relative radial distance from the cylinder below which a solution is
/// flagged as near-degenerate.
pub const NEAR_CYLINDER: f64 = 1e-4;

/// Residual band above `tol_root` in which a candidate is neither accepted
/// nor discarded; it is reported as a convergence failure.
const AMBIGUOUS_RESIDUAL: f64 = 1e-7;

/// Imaginary-part tolerance for keeping a quartic root as real. Looser than
/// `tol_root` because roots near a double root carry `√ε`-sized imaginary
/// noise; spurious roots are rejected later by the residual test.
const IMAG_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum P3PWarning {
    /// The reduced quartic vanishes identically: the fiber over the target
    /// is a curve, not a finite set.
    DegenerateFiber,
    /// Distinct candidate roots merged under deduplication.
    DedupCluster,
    /// A candidate close to a base vertex could not be polished to
    /// `tol_root`; see [`P3PSolution::near_vertex`].
    NearVertex,
}

#[derive(Clone, Debug, PartialEq)]
pub struct P3PApex {
    pub apex: ApexPoint,
    /// Max componentwise `|F(apex) − target|`.
    pub residual: f64,
    pub near_cylinder: bool,
    /// `r` was below the planar band and has been clamped to zero. The band
    /// is `max(tol_dedup·R, √tol_root·d)` with `d` the distance to the
    /// nearest base vertex: `F` is even in `r`, so heights below `√tol_root·d`
    /// do not change the image at the root tolerance.
    pub planar: bool,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct P3PSolution {
    pub solutions: Vec<P3PApex>,
    pub warnings: Vec<P3PWarning>,
    /// Candidates next to a vertex whose residual is above `tol_root` but
    /// within the evaluation floor there, roughly `tol_root·R/d`.
    pub near_vertex: Vec<P3PApex>,
}

impl P3PSolution {
    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn apexes(&self) -> impl Iterator<Item = &ApexPoint> {
        self.solutions.iter().map(|s| &s.apex)
    }
}

/// Whether the target angles satisfy the non-strict triangle inequalities
/// for a trihedral angle.
fn admissible(t: &AngleCosTriple) -> bool {
    let [a, b, c] = t.angles();
    let slack = 1e-12;
    a <= b + c + slack && b <= a + c + slack && c <= a + b + slack && a + b + c <= std::f64::consts::TAU + slack
}

/// The reduced quartic in `s = y/x` and its coefficientwise magnitude bound.
fn quartic(sides: [f64; 3], t: &AngleCosTriple) -> (Poly, Poly) {
    let [a2, b2, c2] = sides.map(|l| l * l);
    let [k1, k2, k3] = t.to_array();
    let q = Poly::new(&[1.0, -2.0 * k1, 1.0]);
    let qa = q.abs();
    let a = Poly::new(&[-a2]);
    let bw1 = Poly::new(&[2.0 * a2 * k2]);
    let bw2 = Poly::new(&[0.0, 2.0 * a2 * k3]);
    let cw1 = q.scale(b2).sub(&Poly::new(&[a2]));
    let cw2 = q.scale(c2).sub(&Poly::new(&[0.0, 0.0, a2]));
    let cw1a = qa.scale(b2).add(&Poly::new(&[a2]));
    let cw2a = qa.scale(c2).add(&Poly::new(&[0.0, 0.0, a2]));
    let (aa, b1a, b2a) = (a.abs(), bw1.abs(), bw2.abs());
    let x = a.mul(&cw2).sub(&a.mul(&cw1));
    let y = a.mul(&bw2).sub(&a.mul(&bw1));
    let z = bw1.mul(&cw2).sub(&bw2.mul(&cw1));
    let res = x.mul(&x).sub(&y.mul(&z));
    let xa = aa.mul(&cw2a).add(&aa.mul(&cw1a));
    let ya = aa.mul(&b2a).add(&aa.mul(&b1a));
    let za = b1a.mul(&cw2a).add(&b2a.mul(&cw1a));
    let bound = xa.mul(&xa).add(&ya.mul(&za));
    (res, bound)
}

/// Distance triples `(x, y, z)` in frame units for a root `s`.
fn lift_root(sides: [f64; 3], t: &AngleCosTriple, s: f64) -> Vec<[f64; 3]> {
    let [a, b, c] = sides;
    let (a2, b2, c2) = (a * a, b * b, c * c);
    let [k1, k2, k3] = t.to_array();
    let q = 1.0 + s * s - 2.0 * s * k1;
    if !(q > 0.0) {
        return Vec::new();
    }
    let x = (a2 / q).sqrt();
    let bw1 = 2.0 * a2 * k2;
    let bw2 = 2.0 * a2 * k3 * s;
    let cw1 = b2 * q - a2;
    let cw2 = c2 * q - a2 * s * s;
    let mut ws = Vec::new();
    let scale = a2 * (1.0 + s) * (1.0 + s);
    if (bw1 - bw2).abs() > 1e-6 * a2 * (1.0 + s) {
        ws.push((cw2 - cw1) / (bw1 - bw2));
    } else {
        // −a²w² + B₁w + C₁ = 0, kept where the second equation also holds
        let disc = bw1 * bw1 + 4.0 * a2 * cw1;
        if disc >= -1e-12 * scale * scale {
            let sq = disc.max(0.0).sqrt();
            for w in [(bw1 + sq) / (2.0 * a2), (bw1 - sq) / (2.0 * a2)] {
                if (-a2 * w * w + bw2 * w + cw2).abs() <= 1e-6 * scale * (1.0 + w * w) {
                    ws.push(w);
                }
            }
        }
    }
    ws.into_iter().filter(|w| *w > 0.0).map(|w| [x, s * x, w * x]).collect()
}

/// Newton on the three law-of-cosines equations in distance space.
fn polish_distances(sides: [f64; 3], t: &AngleCosTriple, d: [f64; 3]) -> [f64; 3] {
    let [a2, b2, c2] = sides.map(|l| l * l);
    let [k1, k2, k3] = t.to_array();
    let g = |d: &Vector3<f64>| {
        Vector3::new(
            d.x * d.x + d.y * d.y - 2.0 * d.x * d.y * k1 - a2,
            d.x * d.x + d.z * d.z - 2.0 * d.x * d.z * k2 - b2,
            d.y * d.y + d.z * d.z - 2.0 * d.y * d.z * k3 - c2,
        )
    };
    let mut v = Vector3::from(d);
    let mut gv = g(&v);
    for _ in 0..8 {
        let j = Matrix3::new(
            2.0 * v.x - 2.0 * v.y * k1,
            2.0 * v.y - 2.0 * v.x * k1,
            0.0,
            2.0 * v.x - 2.0 * v.z * k2,
            0.0,
            2.0 * v.z - 2.0 * v.x * k2,
            0.0,
            2.0 * v.y - 2.0 * v.z * k3,
            2.0 * v.z - 2.0 * v.y * k3,
        );
        let Some(inv) = j.try_inverse() else { break };
        let nv = v - inv * gv;
        let ng = g(&nv);
        if !(ng.norm() < gv.norm()) || nv.iter().any(|c| *c <= 0.0) {
            break;
        }
        v = nv;
        gv = ng;
    }
    [v.x, v.y, v.z]
}

/// Planar foot and height from distances to `C`, `B`, `A` in the frame.
fn trilaterate(frame: &CanonicalFrame, d: [f64; 3]) -> Option<Vector3<f64>> {
    let [x, y, z] = d;
    let a = frame.vertex(Vertex::A).coords;
    let b = frame.vertex(Vertex::B).coords - a;
    let c = frame.vertex(Vertex::C).coords - a;
    // 2(B−A)·P' = z² − y² + |B−A|², likewise for C, with P' = P − A
    let m = nalgebra::Matrix2::new(2.0 * b.x, 2.0 * b.y, 2.0 * c.x, 2.0 * c.y);
    let rhs = nalgebra::Vector2::new(z * z - y * y + b.norm_squared(), z * z - x * x + c.norm_squared());
    let p = m.try_inverse()? * rhs;
    let r2 = z * z - p.norm_squared();
    let scale = z * z + 1.0;
    if r2 < -1e-8 * scale {
        return None;
    }
    let pt = p + a;
    Some(Vector3::new(pt.x, pt.y, r2.max(0.0).sqrt()))
}

fn residual(base: &BaseTriangle, apex: &ApexPoint, target: &AngleCosTriple) -> f64 {
    match face_cosines(base, apex) {
        Ok(f) => f.max_abs_diff(target),
        Err(_) => f64::INFINITY,
    }
}

fn vertex_distance(base: &BaseTriangle, apex: &ApexPoint) -> f64 {
    base.vertices()
        .iter()
        .map(|v| (v - Point2::new(apex.p, apex.q)).norm().hypot(apex.r))
        .fold(f64::INFINITY, f64::min)
}

/// Guarded Newton on `F(apex) = target` in base coordinates.
fn polish_cartesian(base: &BaseTriangle, mut apex: ApexPoint, target: &AngleCosTriple) -> (ApexPoint, f64) {
    let tol = base.tolerances().tol_root;
    let mut res = residual(base, &apex, target);
    for _ in 0..30 {
        if res <= 0.1 * tol {
            break;
        }
        let (Ok(g), Ok(f)) = (gradients(base, &apex), face_cosines(base, &apex)) else { break };
        let j = Matrix3::from_rows(&[g[0].transpose(), g[1].transpose(), g[2].transpose()]);
        let e = f.to_vector() - target.to_vector();
        let svd = j.svd(true, true);
        let smax = svd.singular_values.max();
        let Ok(step) = svd.solve(&e, 1e-10 * smax) else { break };
        let mut lambda = 1.0;
        let mut improved = false;
        for _ in 0..6 {
            let mut cand = apex.offset(&(-step * lambda));
            cand.r = cand.r.abs();
            let cr = residual(base, &cand, target);
            if cr < res {
                apex = cand;
                res = cr;
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if !improved {
            break;
        }
    }
    (apex, res)
}

/// All apexes `D` with `r ≥ 0` and `F(D) = target`.
pub fn preimages(base: &BaseTriangle, target: &AngleCosTriple) -> Result<P3PSolution> {
    let tol = *base.tolerances();
    let mut out = P3PSolution::default();
    if !target.is_finite() || target.to_array().iter().any(|c| c.abs() > 1.0) {
        return Ok(out);
    }
    if !admissible(target) || pillow_value(target) < -tol.tol_predicate {
        return Ok(out);
    }
    let frame = base.canonicalize();
    let radius = frame.radius();
    let sl = base.side_lengths();
    let sides = [sl.bc / radius, sl.ac / radius, sl.ab / radius];
    let (q, bound) = quartic(sides, target);
    if q.max_abs() <= 1e-12 * bound.max_abs() {
        out.warnings.push(P3PWarning::DegenerateFiber);
        return Ok(out);
    }
    let roots = q
        .roots()
        .ok_or_else(|| Error::SolverNonConvergence(format!("quartic eigenvalues failed for {q:?}")))?;
    let mut failures = Vec::new();
    let mut raw = Vec::new();
    let mut near = Vec::new();
    for z in roots {
        if z.im.abs() > IMAG_TOL * (1.0 + z.re.abs()) || !(z.re > 0.0) {
            continue;
        }
        for d in lift_root(sides, target, z.re) {
            let d = polish_distances(sides, target, d);
            let Some(p) = trilaterate(&frame, d) else { continue };
            let xy = frame.from_frame(Point2::new(p.x, p.y));
            let apex = ApexPoint::new(xy.x, xy.y, p.z * radius);
            let (apex, res) = polish_cartesian(base, apex, target);
            // F loses about R/d digits at distance d from a vertex
            let cond = (radius / vertex_distance(base, &apex)).max(1.0);
            if res <= tol.tol_root {
                raw.push((apex, res));
            } else if res <= tol.tol_root * cond {
                near.push(P3PApex { apex, residual: res, near_cylinder: false, planar: false });
            } else if res <= AMBIGUOUS_RESIDUAL * cond {
                let msg = format!("s={:.17e} apex=({:.17e},{:.17e},{:.17e}) residual={res:e}", z.re, apex.p, apex.q, apex.r);
                failures.push((apex, msg));
            }
        }
    }
    let dedup = tol.tol_dedup * radius;
    for (apex, res) in raw {
        if let Some(prev) = out.solutions.iter_mut().find(|s| s.apex.dist(&apex) <= dedup) {
            if res < prev.residual {
                prev.apex = apex;
                prev.residual = res;
            }
            continue;
        }
        out.solutions.push(P3PApex { apex, residual: res, near_cylinder: false, planar: false });
    }
    // an ambiguous candidate next to an accepted solution is the same root
    let unresolved: Vec<String> = failures
        .into_iter()
        .filter(|(a, _)| !out.solutions.iter().any(|s| s.apex.dist(a) <= 1e-5 * radius))
        .map(|(_, msg)| msg)
        .collect();
    if !unresolved.is_empty() {
        return Err(Error::SolverNonConvergence(unresolved.join("; ")));
    }
    for c in near {
        let dup = out.solutions.iter().any(|s| s.apex.dist(&c.apex) <= 1e-5 * radius)
            || out.near_vertex.iter().any(|s| s.apex.dist(&c.apex) <= dedup);
        if !dup {
            out.near_vertex.push(c);
        }
    }
    if !out.near_vertex.is_empty() {
        out.warnings.push(P3PWarning::NearVertex);
    }
    let (o, _) = base.circumcircle();
    for s in out.solutions.iter_mut().chain(out.near_vertex.iter_mut()) {
        let rho = (Point2::new(s.apex.p, s.apex.q) - o).norm();
        s.near_cylinder = (rho / radius - 1.0).abs() <= NEAR_CYLINDER;
        let d = vertex_distance(base, &s.apex);
        if s.apex.r <= dedup.max(tol.tol_root.sqrt() * d) {
            s.apex.r = 0.0;
            s.planar = true;
        }
    }
    out.solutions.sort_by(|a, b| {
        (a.apex.p, a.apex.q, a.apex.r)
            .partial_cmp(&(b.apex.p, b.apex.q, b.apex.r))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    if out.solutions.len() > 4 {
        out.warnings.push(P3PWarning::DedupCluster);
    }
    Ok(out)
}

/// Histogram of preimage counts over random targets in the pillow.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CountProfile {
    pub counts: [usize; 5],
    /// Targets with more than four solutions (never expected).
    pub overflow: usize,
    pub nonconverged: usize,
    pub degenerate: usize,
}

impl CountProfile {
    pub fn total(&self) -> usize {
        self.counts.iter().sum::<usize>() + self.overflow + self.nonconverged + self.degenerate
    }

    pub fn max_count(&self) -> usize {
        (0..5).rev().find(|&k| self.counts[k] > 0).unwrap_or(0)
    }
}

/// Uniform samples from the solid pillow by rejection from the cube.
pub fn random_pillow_targets(n: usize, seed: u64) -> Vec<AngleCosTriple> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let t = AngleCosTriple::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
        if pillow_value(&t) >= 0.0 {
            out.push(t);
        }
    }
    out
}

pub fn preimage_count_profile(base: &BaseTriangle, samples: usize, seed: u64) -> CountProfile {
    let targets = random_pillow_targets(samples, seed);
    let results: Vec<Result<P3PSolution>> = targets.par_iter().map(|t| preimages(base, t)).collect();
    let mut prof = CountProfile::default();
    for r in results {
        match r {
            Ok(s) if s.warnings.contains(&P3PWarning::DegenerateFiber) => prof.degenerate += 1,
            Ok(s) if s.len() > 4 => prof.overflow += 1,
            Ok(s) => prof.counts[s.len()] += 1,
            Err(_) => prof.nonconverged += 1,
        }
    }
    prof
}

#[derive(Clone, Debug, PartialEq)]
pub struct RoundtripReport {
    pub apex: ApexPoint,
    pub count: usize,
    /// Distance from `apex` to the closest recovered preimage.
    pub best_distance: f64,
    pub near_cylinder: bool,
    /// `best_distance` is within the tolerance that applies: `1e-7·R` off
    /// the cylinder, `1e-4·R` near it.
    pub recovered: bool,
    pub error: Option<String>,
}

pub fn roundtrip_check(base: &BaseTriangle, apex: &ApexPoint) -> RoundtripReport {
    let radius = base.circumradius();
    let (o, _) = base.circumcircle();
    let rho = (Point2::new(apex.p, apex.q) - o).norm();
    let near = (rho / radius - 1.0).abs() <= NEAR_CYLINDER;
    let mirrored = ApexPoint::new(apex.p, apex.q, apex.r.abs());
    let mut report = RoundtripReport {
        apex: *apex,
        count: 0,
        best_distance: f64::INFINITY,
        near_cylinder: near,
        recovered: false,
        error: None,
    };
    let target = match face_cosines(base, apex) {
        Ok(t) => t,
        Err(e) => {
            report.error = Some(e.to_string());
            return report;
        }
    };
    match preimages(base, &target) {
        Ok(sol) => {
            report.count = sol.len();
            report.best_distance = sol.apexes().map(|a| a.dist(&mirrored)).fold(f64::INFINITY, f64::min);
            let tol = if near { 1e-4 } else { 1e-7 };
            report.recovered = report.best_distance <= tol * radius;
        }
        Err(e) => report.error = Some(e.to_string()),
    }
    report
}
