//! `F` on the base plane: collisions between the disc `𝔹₋` and its exterior
//! `𝔹₊`, and explicit colliding pairs.

use std::f64::consts::{PI, TAU};

use nalgebra::{Point2, Vector2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::angle_map::{face_cosines, AngleCosTriple, ApexPoint};
use crate::base_geometry::{BaseClass, BaseTriangle, Side, Vertex};
use crate::error::{Error, Result};
use crate::inverse_p3p::preimages;

/// Which part of the base plane a planar apex is in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlanarPart {
    /// Inside the circumcircle.
    Disc,
    OnCircle,
    /// Outside the circumcircle.
    Exterior,
}

pub fn planar_part(base: &BaseTriangle, p: Point2<f64>, tol: f64) -> PlanarPart {
    let (o, r) = base.circumcircle();
    let rho = (p - o).norm() / r;
    if rho < 1.0 - tol {
        PlanarPart::Disc
    } else if rho > 1.0 + tol {
        PlanarPart::Exterior
    } else {
        PlanarPart::OnCircle
    }
}

/// Two points of line `KL` outside the segment, symmetric about the foot of
/// the altitude from the opposite vertex `V`, seeing `VK` under `alpha`.
/// Both map to the same value, with `1` in the slot of `V`.
pub fn noninjective_pair(base: &BaseTriangle, side: Side, alpha: f64) -> Result<(ApexPoint, ApexPoint)> {
    let v = side.opposite_vertex();
    let (k, l) = side.endpoints();
    let ang = base.base_angles();
    let bound = ang[k.index()].min(ang[l.index()]);
    if !(alpha > 0.0 && alpha < bound) {
        return Err(Error::InvalidBase(format!("alpha {alpha} not in (0, {bound})")));
    }
    let (pk, pl, pv) = (base.vertex(k), base.vertex(l), base.vertex(v));
    let dir = (pl - pk).normalize();
    let foot = pk + dir * (pv - pk).dot(&dir);
    let h = (pv - foot).norm();
    let off = h / alpha.tan();
    let d1 = foot + dir * off;
    let d2 = foot - dir * off;
    Ok((ApexPoint::planar(d1.x, d1.y), ApexPoint::planar(d2.x, d2.y)))
}

/// Point `X` with `∠PXQ = θ` lies on one of two circles through `P`, `Q`.
fn chord_circles(p: Point2<f64>, q: Point2<f64>, theta: f64) -> [(Point2<f64>, f64); 2] {
    let m = Point2::from((p.coords + q.coords) * 0.5);
    let d = q - p;
    let half = 0.5 * d.norm();
    let n = Vector2::new(-d.y, d.x) / d.norm();
    let off = half / theta.tan();
    let rad = half / theta.sin();
    [(m + n * off, rad), (m - n * off, rad)]
}

/// Reflection of `k` through the line of centres: the second common point of
/// two circles meeting at `k`.
fn second_intersection(k: Point2<f64>, c1: Point2<f64>, c2: Point2<f64>) -> Option<Point2<f64>> {
    let d = c2 - c1;
    let dn = d.norm_squared();
    if dn == 0.0 {
        return None;
    }
    let w = k - c1;
    let foot = c1 + d * (w.dot(&d) / dn);
    Some(Point2::from(2.0 * foot.coords - k.coords))
}

/// Target components `(ᾱ, β̄, γ̄)` of the overlap construction, in the slot
/// order `(K, L, V)` where `V` is the obtuse vertex and `K`, `L` the others.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OverlapPair {
    pub target: AngleCosTriple,
    /// Preimage inside the circumcircle.
    pub inner: ApexPoint,
    /// Preimage outside the circumcircle.
    pub outer: ApexPoint,
}

/// For an obtuse base, a value attained both in `𝔹₋` and in `𝔹₊`.
///
/// `f_gamma`, `f_alpha ∈ (0, 1)` place `γ̄` in `(π − ∠V, ∠V)` and `ᾱ` in
/// `(∠K, γ̄ − ∠L)`; then `β̄ = γ̄ − ᾱ`. Both preimages are found as second
/// intersections of the circles seeing `KL` under `γ̄` and `KV` under `β̄`.
pub fn obtuse_overlap_pair(base: &BaseTriangle, f_gamma: f64, f_alpha: f64) -> Result<OverlapPair> {
    if base.classify() != BaseClass::Obtuse {
        return Err(Error::InvalidBase("overlap construction needs an obtuse base".into()));
    }
    if !(f_gamma > 0.0 && f_gamma < 1.0 && f_alpha > 0.0 && f_alpha < 1.0) {
        return Err(Error::InvalidBase("fractions must lie in (0, 1)".into()));
    }
    let v = base.largest_angle_vertex();
    let others: Vec<Vertex> = Vertex::ALL.into_iter().filter(|&w| w != v).collect();
    let (k, l) = (others[0], others[1]);
    let ang = base.base_angles();
    let (av, ak, al) = (ang[v.index()], ang[k.index()], ang[l.index()]);
    let gamma = (PI - av) + f_gamma * (2.0 * av - PI);
    let alpha = ak + f_alpha * (gamma - al - ak);
    let beta = gamma - alpha;
    let mut t = [0.0; 3];
    t[v.index()] = gamma.cos();
    t[k.index()] = alpha.cos();
    t[l.index()] = beta.cos();
    let target = AngleCosTriple::from_array(t);
    let (pk, pl, pv) = (base.vertex(k), base.vertex(l), base.vertex(v));
    let radius = base.circumradius();
    let mut inner = None;
    let mut outer = None;
    for (c1, _) in chord_circles(pk, pl, gamma) {
        for (c2, _) in chord_circles(pk, pv, beta) {
            let Some(d) = second_intersection(pk, c1, c2) else { continue };
            if (d - pk).norm() <= 1e-9 * radius {
                continue;
            }
            let apex = ApexPoint::planar(d.x, d.y);
            let Ok(f) = face_cosines(base, &apex) else { continue };
            if f.max_abs_diff(&target) > 1e-9 {
                continue;
            }
            match planar_part(base, d, 1e-9) {
                PlanarPart::Disc => inner = Some(apex),
                PlanarPart::Exterior => outer = Some(apex),
                PlanarPart::OnCircle => {}
            }
        }
    }
    match (inner, outer) {
        (Some(inner), Some(outer)) => Ok(OverlapPair { target, inner, outer }),
        _ => Err(Error::SolverNonConvergence(format!("overlap construction failed for {target:?}"))),
    }
}

/// Uniform sample of `𝔹₋` (the open circumdisc, shrunk by `margin`).
pub fn sample_disc(base: &BaseTriangle, n: usize, seed: u64, margin: f64) -> Vec<ApexPoint> {
    let (o, r) = base.circumcircle();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let rho = (1.0 - margin) * rng.gen::<f64>().sqrt();
            let a = rng.gen_range(0.0..TAU);
            ApexPoint::planar(o.x + r * rho * a.cos(), o.y + r * rho * a.sin())
        })
        .collect()
}

/// Sample of `𝔹₊` between radii `(1 + margin)R` and `outer·R`, uniform in
/// area.
pub fn sample_exterior(base: &BaseTriangle, n: usize, seed: u64, margin: f64, outer: f64) -> Vec<ApexPoint> {
    let (o, r) = base.circumcircle();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = ((1.0 + margin).powi(2), outer * outer);
    (0..n)
        .map(|_| {
            let rho = rng.gen_range(lo..hi).sqrt();
            let a = rng.gen_range(0.0..TAU);
            ApexPoint::planar(o.x + r * rho * a.cos(), o.y + r * rho * a.sin())
        })
        .collect()
}

/// Outcome of a collision search among planar apexes.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CollisionReport {
    pub samples: usize,
    /// `(D₁ ∈ 𝔹₋, D₂ ∈ 𝔹₊)` with `F(D₁) = F(D₂)`.
    pub cross: Vec<(ApexPoint, ApexPoint)>,
    /// Distinct pairs inside the disc with equal images.
    pub within_disc: Vec<(ApexPoint, ApexPoint)>,
    /// Candidate pairs from the image grid, before confirmation.
    pub candidates: usize,
    pub solver_failures: usize,
}

/// Image-space hash of sample images: cells of side `h`, neighbours probed
/// across the 27 adjacent cells.
fn close_pairs(a: &[AngleCosTriple], b: &[AngleCosTriple], h: f64) -> Vec<(usize, usize)> {
    use std::collections::HashMap;
    let key = |t: &AngleCosTriple| {
        let v = t.to_array();
        [(v[0] / h).floor() as i64, (v[1] / h).floor() as i64, (v[2] / h).floor() as i64]
    };
    let mut grid: HashMap<[i64; 3], Vec<usize>> = HashMap::new();
    for (j, t) in b.iter().enumerate() {
        grid.entry(key(t)).or_default().push(j);
    }
    let mut out = Vec::new();
    for (i, t) in a.iter().enumerate() {
        let k = key(t);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(js) = grid.get(&[k[0] + dx, k[1] + dy, k[2] + dz]) {
                        out.extend(js.iter().filter(|&&j| a[i].dist(&b[j]) <= h).map(|&j| (i, j)));
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// Looks for equal images between `𝔹₋` and `𝔹₊` samples and among `𝔹₋`
/// samples.
///
/// Each disc sample is inverted exactly: every planar preimage other than the
/// sample itself is a collision, in the disc or outside it. The image grid
/// with cell `h` counts disc/exterior sample pairs with close images, as a
/// measure of how near the two images come. Samples stay `margin·R` away
/// from the circle, where images of both sides crowd together near `Ã`,
/// `B̃`, `C̃`.
pub fn collision_search(base: &BaseTriangle, n: usize, seed: u64, margin: f64, h: f64) -> CollisionReport {
    let radius = base.circumradius();
    let inner = sample_disc(base, n, seed, margin);
    let outer = sample_exterior(base, n, seed.wrapping_add(1), margin, 4.0);
    let fi: Vec<Option<AngleCosTriple>> = inner.par_iter().map(|a| face_cosines(base, a).ok()).collect();
    let fo: Vec<Option<AngleCosTriple>> = outer.par_iter().map(|a| face_cosines(base, a).ok()).collect();
    let same = 1e-6 * radius;
    let tol_part = 1e-6;
    let results: Vec<(Vec<ApexPoint>, bool)> = inner
        .par_iter()
        .zip(fi.par_iter())
        .map(|(d1, f)| {
            let Some(f) = f else { return (Vec::new(), true) };
            match preimages(base, f) {
                Ok(sol) => (
                    sol.solutions
                        .iter()
                        .filter(|s| s.planar && s.apex.dist(d1) > same)
                        .map(|s| s.apex)
                        .collect(),
                    false,
                ),
                Err(_) => (Vec::new(), true),
            }
        })
        .collect();
    let mut report = CollisionReport { samples: n, ..Default::default() };
    for (d1, (others, failed)) in inner.iter().zip(&results) {
        report.solver_failures += *failed as usize;
        for d2 in others {
            match planar_part(base, Point2::new(d2.p, d2.q), tol_part) {
                PlanarPart::Disc => report.within_disc.push((*d1, *d2)),
                PlanarPart::Exterior => report.cross.push((*d1, *d2)),
                PlanarPart::OnCircle => {}
            }
        }
    }
    let a: Vec<AngleCosTriple> = fi.iter().map(|t| t.unwrap_or(AngleCosTriple::new(9.0, 9.0, 9.0))).collect();
    let b: Vec<AngleCosTriple> = fo.iter().map(|t| t.unwrap_or(AngleCosTriple::new(-9.0, -9.0, -9.0))).collect();
    report.candidates = close_pairs(&a, &b, h).len();
    report
}

/// A random pillowcase point whose smallest component exceeds the largest
/// base-angle cosine; such points have a planar preimage.
pub fn random_cap_targets(base: &BaseTriangle, n: usize, seed: u64) -> Vec<AngleCosTriple> {
    let m = base.cos_angles().iter().cloned().fold(f64::MIN, f64::max);
    let lim = m.clamp(-1.0, 1.0).acos();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        // (cos(φ−ψ), cos ψ, cos φ) with every angle below acos(m)
        let phi = rng.gen_range(-lim..lim);
        let psi = rng.gen_range(-lim..lim);
        let t = AngleCosTriple::new((phi - psi).cos(), psi.cos(), phi.cos());
        if t.to_array().iter().all(|&c| c > m) && t.max_abs_diff(&AngleCosTriple::new(1.0, 1.0, 1.0)) > 1e-9 {
            out.push(t);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base_geometry::fixtures::*;

    #[test]
    fn noninjective_pairs_collide() {
        for base in all() {
            for side in Side::ALL {
                let (k, l) = side.endpoints();
                let bound = base.base_angles()[k.index()].min(base.base_angles()[l.index()]);
                for f in [0.1, 0.5, 0.9] {
                    let (d1, d2) = noninjective_pair(&base, side, f * bound).unwrap();
                    let (f1, f2) = (face_cosines(&base, &d1).unwrap(), face_cosines(&base, &d2).unwrap());
                    assert!(f1.max_abs_diff(&f2) < 1e-10);
                    assert!(d1.dist(&d2) > 1e-3);
                    let v = side.opposite_vertex().index();
                    assert!((f1.to_array()[v] - 1.0).abs() < 1e-12);
                    for d in [d1, d2] {
                        assert_eq!(planar_part(&base, Point2::new(d.p, d.q), 1e-9), PlanarPart::Exterior);
                    }
                }
            }
        }
    }

    #[test]
    fn overlap_recipe_collides_for_obtuse() {
        let base = obtuse();
        for fg in [0.2, 0.5, 0.8] {
            for fa in [0.25, 0.5, 0.75] {
                let pair = obtuse_overlap_pair(&base, fg, fa).unwrap();
                let f1 = face_cosines(&base, &pair.inner).unwrap();
                let f2 = face_cosines(&base, &pair.outer).unwrap();
                assert!(f1.max_abs_diff(&f2) < 1e-10);
                assert!(f1.max_abs_diff(&pair.target) < 1e-10);
                // the solver sees at least two planar preimages
                let sol = preimages(&base, &pair.target).unwrap();
                assert!(sol.len() >= 2, "{sol:?}");
            }
        }
        assert!(obtuse_overlap_pair(&equilateral(), 0.5, 0.5).is_err());
    }

    #[test]
    fn acute_search_finds_nothing() {
        let r = collision_search(&equilateral(), 2000, 3, 1e-3, 1e-3);
        assert!(r.cross.is_empty() && r.within_disc.is_empty(), "{r:?}");
        assert_eq!(r.solver_failures, 0);
    }

    #[test]
    fn obtuse_search_finds_overlap() {
        let r = collision_search(&obtuse(), 2000, 3, 1e-3, 1e-3);
        assert!(!r.cross.is_empty());
        assert!(r.within_disc.is_empty());
        for (d1, d2) in &r.cross {
            let f1 = face_cosines(&obtuse(), d1).unwrap();
            let f2 = face_cosines(&obtuse(), d2).unwrap();
            assert!(f1.max_abs_diff(&f2) < 1e-9);
        }
    }

    #[test]
    fn cap_targets_have_planar_preimages() {
        for base in all() {
            for t in random_cap_targets(&base, 300, 5) {
                let sol = preimages(&base, &t).unwrap();
                assert!(sol.solutions.iter().any(|s| s.planar), "{t:?} {sol:?}");
            }
        }
    }
}
