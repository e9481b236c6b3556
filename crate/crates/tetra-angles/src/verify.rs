//! Brute-force self-checks of the library against a single base, grouped
//! into named suites. The command line runs them; each returns a report
//! instead of panicking.

use std::f64::consts::{PI, TAU};
use std::str::FromStr;

use nalgebra::{Matrix3, Point2, Vector3};
use rayon::prelude::*;
use serde::Serialize;

use crate::angle_map::{face_cosines, gradients, jacobian_det, jacobian_det_cartesian, ApexPoint};
use crate::base_geometry::{volume_squared_cosines, volume_squared_sines, BaseClass, BaseTriangle, Vertex};
use crate::degeneracy_locus::{
    cyclic_criterion, degeneracy_residual, degenerate_direction, fc_curvature_closed, fc_normal_phi,
    gaussian_curvature_fc, nonsmooth_angles, CylinderPoint,
};
use crate::format::fmt_sig;
use crate::inverse_p3p::{preimage_count_profile, random_pillow_targets, roundtrip_check, NEAR_CYLINDER};
use crate::limits_boundary::{
    all_octants, approach_value, build_boundary_mesh, collision_search, complement_components,
    interior_witness, limit_solid_ellipses, obtuse_overlap_pair, omega_markers, patch_residual,
    sigma_membership, Marker, SigmaStatus,
};
use crate::pillow::{pillow_value, pillowcase_slice, special_points};
use crate::sampling::{sample_apexes, SampleRegion};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Pillow,
    Volume,
    Jacobian,
    Gradients,
    Nonsmooth,
    Curvature,
    Direction,
    Overlap,
    P3p,
    Witness,
    Limits,
    Markers,
    Mesh,
}

impl Suite {
    pub const ALL: [Suite; 13] = [
        Suite::Pillow,
        Suite::Volume,
        Suite::Jacobian,
        Suite::Gradients,
        Suite::Nonsmooth,
        Suite::Curvature,
        Suite::Direction,
        Suite::Overlap,
        Suite::P3p,
        Suite::Witness,
        Suite::Limits,
        Suite::Markers,
        Suite::Mesh,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Pillow => "pillow",
            Suite::Volume => "volume",
            Suite::Jacobian => "jacobian",
            Suite::Gradients => "gradients",
            Suite::Nonsmooth => "nonsmooth",
            Suite::Curvature => "curvature",
            Suite::Direction => "direction",
            Suite::Overlap => "overlap",
            Suite::P3p => "p3p",
            Suite::Witness => "witness",
            Suite::Limits => "limits",
            Suite::Markers => "markers",
            Suite::Mesh => "mesh",
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
            format!("unknown suite {s:?}, expected one of {} or all", names.join(", "))
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyConfig {
    pub samples: usize,
    pub seed: u64,
    /// Mesh and voxel resolution for the `mesh` suite.
    pub resolution: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { samples: 1000, seed: 0, resolution: 24 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn summary(&self) -> String {
        let mut s = format!("[{}] {}\n", if self.passed { "PASS" } else { "FAIL" }, self.suite);
        for c in &self.checks {
            s += &format!("  {} {}: {}\n", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail);
        }
        s
    }
}

struct Checks(Vec<Check>);

impl Checks {
    /// Records `worst ≤ bound`.
    fn at_most(&mut self, name: &str, worst: f64, bound: f64) {
        let passed = worst <= bound;
        self.0.push(Check { name: name.into(), passed, detail: format!("worst {} <= {}", fmt_sig(worst), fmt_sig(bound)) });
    }

    fn at_least(&mut self, name: &str, least: f64, bound: f64) {
        let passed = least >= bound;
        self.0.push(Check { name: name.into(), passed, detail: format!("least {} >= {}", fmt_sig(least), fmt_sig(bound)) });
    }

    fn flag(&mut self, name: &str, passed: bool, detail: String) {
        self.0.push(Check { name: name.into(), passed, detail });
    }

    fn error(&mut self, name: &str, e: impl std::fmt::Display) {
        self.flag(name, false, format!("error: {e}"));
    }
}

pub fn run_suite(base: &BaseTriangle, suite: Suite, cfg: &VerifyConfig) -> SuiteReport {
    let mut c = Checks(Vec::new());
    match suite {
        Suite::Pillow => pillow_suite(base, cfg, &mut c),
        Suite::Volume => volume_suite(base, cfg, &mut c),
        Suite::Jacobian => jacobian_suite(base, cfg, &mut c),
        Suite::Gradients => gradient_suite(base, cfg, &mut c),
        Suite::Nonsmooth => nonsmooth_suite(base, &mut c),
        Suite::Curvature => curvature_suite(base, &mut c),
        Suite::Direction => direction_suite(base, cfg, &mut c),
        Suite::Overlap => overlap_suite(base, cfg, &mut c),
        Suite::P3p => p3p_suite(base, cfg, &mut c),
        Suite::Witness => witness_suite(base, &mut c),
        Suite::Limits => limits_suite(base, &mut c),
        Suite::Markers => markers_suite(base, cfg, &mut c),
        Suite::Mesh => mesh_suite(base, cfg, &mut c),
    }
    let passed = c.0.iter().all(|x| x.passed);
    SuiteReport { suite: suite.name().into(), passed, checks: c.0 }
}

pub fn run_all(base: &BaseTriangle, cfg: &VerifyConfig) -> Vec<SuiteReport> {
    Suite::ALL.iter().map(|&s| run_suite(base, s, cfg)).collect()
}

fn apexes(base: &BaseTriangle, region: SampleRegion, cfg: &VerifyConfig, c: &mut Checks) -> Vec<ApexPoint> {
    match sample_apexes(base, region, cfg.samples, cfg.seed) {
        Ok(a) => a,
        Err(e) => {
            c.error(&format!("sample {}", region.name()), e);
            Vec::new()
        }
    }
}

fn worst<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    it.into_iter().fold(0.0, |a, b| if b.is_nan() { f64::INFINITY } else { a.max(b) })
}

fn rho_ratio(base: &BaseTriangle, a: &ApexPoint) -> f64 {
    let (o, radius) = base.circumcircle();
    (Point2::new(a.p, a.q) - o).norm() / radius
}

fn pillow_suite(base: &BaseTriangle, cfg: &VerifyConfig, c: &mut Checks) {
    let eval = |a: &ApexPoint| face_cosines(base, a).map(|t| pillow_value(&t)).unwrap_or(f64::NAN);
    let up = apexes(base, SampleRegion::Halfspace, cfg, c);
    let least = up.iter().map(eval).fold(f64::INFINITY, f64::min);
    c.at_least("pillow_value over the half-space", if up.is_empty() { 0.0 } else { least }, -1e-9);
    let flat = apexes(base, SampleRegion::Plane, cfg, c);
    c.at_most("|pillow_value| on the plane", worst(flat.iter().map(|a| eval(a).abs())), 1e-9);
}

fn volume_suite(base: &BaseTriangle, cfg: &VerifyConfig, c: &mut Checks) {
    // every formula loses about eps/r² relative accuracy as the apex drops
    // to the plane, so heights start at 0.1·R
    let radius = base.circumradius();
    let up: Vec<ApexPoint> = apexes(base, SampleRegion::Halfspace, cfg, c)
        .into_iter()
        .map(|a| ApexPoint::new(a.p, a.q, 0.1 * radius + 0.95 * a.r))
        .collect();
    let mut err = 0.0f64;
    for a in &up {
        let (Ok(d), Ok(t)) = (crate::angle_map::distances(base, a), face_cosines(base, a)) else {
            err = f64::INFINITY;
            continue;
        };
        let cm = base.cayley_menger(&d).unwrap_or(f64::NAN) / 288.0;
        let vc = volume_squared_cosines(d.x, d.y, d.z, t.to_array());
        let [al, be, ga] = t.angles();
        let vs = volume_squared_sines(d.x, d.y, d.z, al, be, ga);
        // the exact volume, for scale
        let v = base.area() * a.r / 3.0;
        let scale = v * v;
        err = err.max(((vc - cm).abs().max((vs - cm).abs())) / scale);
    }
    c.at_most("relative spread of the three volume formulas", err, 1e-10);
}

fn jacobian_suite(base: &BaseTriangle, cfg: &VerifyConfig, c: &mut Checks) {
    let band = 1e-6;
    let mut pts = apexes(base, SampleRegion::Halfspace, cfg, c);
    // stratify: a second batch hugging the cylinder
    let frame = base.canonicalize();
    let hug: Vec<ApexPoint> = apexes(base, SampleRegion::Cylinder, cfg, c)
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let cp = CylinderPoint::from_apex(&frame, a).unwrap();
            let s = 1.0 + if i % 2 == 0 { 1e-4 } else { -1e-4 } * (1.0 + (i % 7) as f64);
            let q = frame.from_frame(Point2::new(s * cp.phi.cos(), s * cp.phi.sin()));
            ApexPoint::new(q.x, q.y, a.r)
        })
        .collect();
    pts.extend(hug);
    let mut wrong = 0;
    let mut wrong_cart = 0;
    let mut checked = 0;
    for a in &pts {
        let rho = rho_ratio(base, a);
        if (rho - 1.0).abs() <= band {
            continue;
        }
        let (Ok(j), Ok(jc), Ok(g)) = (jacobian_det(base, a), jacobian_det_cartesian(base, a), gradients(base, a)) else {
            wrong += 1;
            continue;
        };
        checked += 1;
        if (j < 0.0) != (rho < 1.0) {
            wrong += 1;
        }
        let m = Matrix3::from_rows(&[g[0].transpose(), g[1].transpose(), g[2].transpose()]);
        if m.determinant().signum() != jc.signum() {
            wrong_cart += 1;
        }
    }
    c.flag(
        "sign of |JF| against cylinder side",
        wrong == 0,
        format!("{wrong} misclassified of {checked} outside a {} band", fmt_sig(band)),
    );
    c.flag("gradient determinant sign", wrong_cart == 0, format!("{wrong_cart} disagreements"));
    let flat = apexes(base, SampleRegion::Plane, cfg, c);
    let mut disagree = 0;
    for a in &flat {
        if (rho_ratio(base, a) - 1.0).abs() <= band {
            continue;
        }
        let q = crate::angle_map::distances(base, a).map(|d| degeneracy_residual(base, &d));
        let k = cyclic_criterion(base, Point2::new(a.p, a.q));
        match (q, k) {
            // the two residuals carry opposite signs by construction
            (Ok(q), Ok(k)) if q.signum() == -k.signum() => {}
            _ => disagree += 1,
        }
    }
    c.flag("degeneracy residual against cyclic criterion", disagree == 0, format!("{disagree} sign disagreements"));
}

/// Central finite-difference gradients with step `h` (relative to `R`).
pub fn fd_gradients(base: &BaseTriangle, a: &ApexPoint, h: f64) -> crate::Result<[Vector3<f64>; 3]> {
    let step = h * base.circumradius();
    let mut g = [Vector3::zeros(); 3];
    for k in 0..3 {
        let mut e = Vector3::zeros();
        e[k] = step;
        let fp = face_cosines(base, &a.offset(&e))?.to_vector();
        let fm = face_cosines(base, &a.offset(&-e))?.to_vector();
        let col = (fp - fm) / (2.0 * step);
        for (i, gi) in g.iter_mut().enumerate() {
            gi[k] = col[i];
        }
    }
    Ok(g)
}

fn gradient_suite(base: &BaseTriangle, cfg: &VerifyConfig, c: &mut Checks) {
    let pts = apexes(base, SampleRegion::Halfspace, cfg, c);
    let radius = base.circumradius();
    let err = worst(pts.par_iter().map(|a| {
        // keep the stencil off the plane
        let a = ApexPoint::new(a.p, a.q, a.r.max(1e-2 * radius));
        match (gradients(base, &a), fd_gradients(base, &a, 1e-5)) {
            // gradients scale like 1/length; compare in frame units
            (Ok(g), Ok(f)) => (0..3).map(|i| (g[i] - f[i]).amax() * radius).fold(0.0, f64::max),
            _ => f64::INFINITY,
        }
    }).collect::<Vec<_>>());
    c.at_most("analytic against central differences", err, 1e-7);
}

fn nonsmooth_suite(base: &BaseTriangle, c: &mut Checks) {
    let frame = base.canonicalize();
    let ns = nonsmooth_angles(&frame);
    let mut err = 0.0f64;
    for p in ns.phis {
        for r in [0.05, 0.5, 1.0, 3.0] {
            match CylinderPoint::new(p, r).and_then(|cp| fc_normal_phi(&frame, &cp)) {
                Ok(n) => err = err.max(n.amax()),
                Err(_) => err = f64::INFINITY,
            }
        }
    }
    c.at_most("normal at the non-smooth rays", err, 1e-9);
    if is_regular(base) {
        let e = ns.phis.iter().zip([PI / 3.0, PI, 5.0 * PI / 3.0]).map(|(p, e)| (p - e).abs());
        c.at_most("regular base rays", worst(e), 1e-12);
    }
}

fn is_regular(base: &BaseTriangle) -> bool {
    base.base_angles().iter().all(|a| (a - PI / 3.0).abs() < 1e-12)
}

fn curvature_suite(base: &BaseTriangle, c: &mut Checks) {
    let frame = base.canonicalize();
    let ns = nonsmooth_angles(&frame);
    let n = 50;
    let mut least = f64::INFINITY;
    let mut rel = 0.0f64;
    for i in 0..n {
        let phi = (i as f64 + 0.5) * TAU / n as f64;
        if ns.distance(phi) < 1e-3 {
            continue;
        }
        for j in 0..n {
            let r = 0.05 + 4.0 * j as f64 / n as f64;
            let cp = CylinderPoint { phi, r };
            let k = gaussian_curvature_fc(&frame, &cp).unwrap_or(f64::NAN);
            least = least.min(if k.is_nan() { f64::NEG_INFINITY } else { k });
            let kc = fc_curvature_closed(&frame, &cp);
            rel = rel.max(((k - kc) / kc).abs());
        }
    }
    c.flag("Gaussian curvature on the grid", least > 0.0, format!("least {}", fmt_sig(least)));
    c.at_most("fundamental forms against closed form", rel, 1e-8);
}

/// Fitted linear and quadratic coefficients of `t ↦ F(D + tη̂)` from a
/// five-point stencil, `t` in units of `R`.
pub fn direction_coefficients(base: &BaseTriangle, a: &ApexPoint, eta: &Vector3<f64>, h: f64) -> crate::Result<(Vector3<f64>, Vector3<f64>)> {
    let e = eta.normalize() * base.circumradius();
    let f = |t: f64| face_cosines(base, &a.offset(&(e * t))).map(|x| x.to_vector());
    let (m2, m1, z, p1, p2) = (f(-2.0 * h)?, f(-h)?, f(0.0)?, f(h)?, f(2.0 * h)?);
    let lin = (m2 - m1 * 8.0 + p1 * 8.0 - p2) / (12.0 * h);
    let quad = (-m2 + m1 * 16.0 - z * 30.0 + p1 * 16.0 - p2) / (24.0 * h * h);
    Ok((lin, quad))
}

fn direction_suite(base: &BaseTriangle, cfg: &VerifyConfig, c: &mut Checks) {
    let pts = apexes(base, SampleRegion::Cylinder, cfg, c);
    let rows: Vec<(f64, f64, f64)> = pts
        .par_iter()
        .map(|a| {
            let (Ok(eta), Ok(g)) = (degenerate_direction(base, a), gradients(base, a)) else {
                return (f64::INFINITY, f64::INFINITY, 0.0);
            };
            let dot = (0..3).map(|i| g[i].dot(&eta).abs() / (g[i].norm() * eta.norm())).fold(0.0, f64::max);
            match direction_coefficients(base, a, &eta, 1e-4) {
                Ok((lin, quad)) => (dot, lin.amax(), quad.amax()),
                Err(_) => (dot, f64::INFINITY, 0.0),
            }
        })
        .collect();
    c.at_most("cosine between kernel and gradients", worst(rows.iter().map(|r| r.0)), 1e-9);
    c.at_most("linear coefficient along the kernel", worst(rows.iter().map(|r| r.1)), 1e-8);
    let least = rows.iter().map(|r| r.2).fold(f64::INFINITY, f64::min);
    c.at_least("quadratic coefficient along the kernel", if rows.is_empty() { 1.0 } else { least }, 1e-4);
}

fn overlap_suite(base: &BaseTriangle, cfg: &VerifyConfig, c: &mut Checks) {
    let rep = collision_search(base, cfg.samples, cfg.seed, 1e-3, 1e-3);
    c.flag(
        "no self-collisions inside the disc",
        rep.within_disc.is_empty(),
        format!("{} found among {} samples", rep.within_disc.len(), rep.samples),
    );
    c.flag("solver failures", rep.solver_failures == 0, format!("{}", rep.solver_failures));
    if base.classify() == BaseClass::Obtuse {
        c.flag("disc and exterior collide", !rep.cross.is_empty(), format!("{} collisions", rep.cross.len()));
        match obtuse_overlap_pair(base, 0.5, 0.5) {
            Ok(pair) => {
                let fi = face_cosines(base, &pair.inner);
                let fo = face_cosines(base, &pair.outer);
                let d = match (fi, fo) {
                    (Ok(a), Ok(b)) => a.max_abs_diff(&pair.target).max(b.max_abs_diff(&pair.target)),
                    _ => f64::INFINITY,
                };
                c.at_most("constructed pair shares its image", d, 1e-10);
            }
            Err(e) => c.error("constructed pair shares its image", e),
        }
    } else {
        c.flag("disc and exterior never collide", rep.cross.is_empty(), format!("{} collisions", rep.cross.len()));
    }
}

fn p3p_suite(base: &BaseTriangle, cfg: &VerifyConfig, c: &mut Checks) {
    let prof = preimage_count_profile(base, cfg.samples, cfg.seed);
    c.flag("at most four preimages", prof.overflow == 0 && prof.max_count() <= 4, format!("{prof:?}"));
    let limit = (cfg.samples as f64 * 1e-3).floor() as usize;
    c.flag("non-convergence rate", prof.nonconverged <= limit, format!("{} of {}", prof.nonconverged, prof.total()));
    let radius = base.circumradius();
    let pts: Vec<ApexPoint> = apexes(base, SampleRegion::Halfspace, cfg, c)
        .into_iter()
        .filter(|a| (rho_ratio(base, a) - 1.0).abs() > NEAR_CYLINDER && a.r > 1e-3 * radius)
        .collect();
    let lost: Vec<String> = pts
        .par_iter()
        .map(|a| roundtrip_check(base, a))
        .filter(|r| !r.recovered)
        .map(|r| format!("{:?}", r.apex))
        .collect();
    let mut detail = format!("{} of {} lost", lost.len(), pts.len());
    if !lost.is_empty() {
        detail += &format!(": {}", lost.join(" "));
    }
    c.flag("roundtrip recovery", lost.is_empty(), detail);
}

fn witness_suite(base: &BaseTriangle, c: &mut Checks) {
    match (base.classify(), interior_witness(base)) {
        (BaseClass::Acute, Ok(w)) => {
            let i = special_points(base).i_triangle;
            let err = face_cosines(base, &w).map(|f| f.max_abs_diff(&i)).unwrap_or(f64::INFINITY);
            c.at_most("witness maps to I", err, 1e-12);
            c.at_most("witness inside the cylinder", rho_ratio(base, &w), 1.0 - 1e-12);
        }
        (BaseClass::Acute, Err(e)) => c.error("witness exists", e),
        (_, r) => c.flag("no witness for a non-acute base", r.is_err(), format!("{r:?}")),
    }
}

fn limits_suite(base: &BaseTriangle, c: &mut Checks) {
    let ells = match limit_solid_ellipses(base) {
        Ok(e) => e,
        Err(e) => return c.error("limit ellipses", e),
    };
    let mut approach = 0.0f64;
    for v in Vertex::ALL {
        let e = &ells[v.index()];
        for k in 0..20 {
            let theta = k as f64 * TAU / 20.0;
            let tilt = 0.05 + 1.4 * (k as f64 / 19.0);
            let eta = Vector3::new(theta.cos() * tilt.sin(), theta.sin() * tilt.sin(), tilt.cos());
            approach = approach.max(approach_value(base, v, &eta, 3e-7).map(|f| e.excess(&f)).unwrap_or(f64::INFINITY));
        }
    }
    c.at_most("vertex approach inside Lim(V)", approach, 1e-6);
    let mut slice = 0.0f64;
    for e in &ells {
        let Ok(form) = pillowcase_slice(e.fixed_axis + 1, e.fixed_value) else {
            slice = f64::INFINITY;
            continue;
        };
        for k in 0..64 {
            let p = e.point(1.0, k as f64 * TAU / 64.0);
            let (s, t) = e.project(&p);
            slice = slice.max(form.residual(s, t).abs()).max(pillow_value(&p).abs());
        }
    }
    c.at_most("E curves on the pillowcase slices", slice, 1e-10);
}

fn markers_suite(base: &BaseTriangle, cfg: &VerifyConfig, c: &mut Checks) {
    let table = match omega_markers(base) {
        Ok(t) => t,
        Err(e) => return c.error("marker table", e),
    };
    let oct = all_octants();
    let mut targets = random_pillow_targets(cfg.samples, cfg.seed);
    // forward images guarantee interior hits
    for a in apexes(base, SampleRegion::Halfspace, cfg, c) {
        if let Ok(t) = face_cosines(base, &a) {
            targets.push(t);
        }
    }
    let status: Vec<Option<(usize, crate::Result<SigmaStatus>)>> = targets
        .par_iter()
        .map(|t| {
            let o = table.region_index(t)?;
            Some((oct.iter().position(|x| *x == o).unwrap(), sigma_membership(base, t)))
        })
        .collect();
    let mut inside = [0usize; 8];
    let mut outside = [0usize; 8];
    let mut errors = 0;
    for (k, s) in status.into_iter().flatten() {
        match s {
            Ok(SigmaStatus::InSigma) => inside[k] += 1,
            Ok(SigmaStatus::Outside) => outside[k] += 1,
            Ok(SigmaStatus::OnClosureBoundaryOnly) => {}
            Err(_) => errors += 1,
        }
    }
    for (k, (o, m)) in table.markers.iter().enumerate() {
        let name: String = o.iter().map(|s| s.symbol()).collect();
        let ok = match m {
            Marker::Plus => inside[k] > 0 && outside[k] == 0,
            Marker::Minus => inside[k] == 0,
            Marker::PlusMinus => inside[k] > 0 && outside[k] > 0,
        };
        c.flag(
            &format!("octant ({name}) marked {}", m.symbol()),
            ok,
            format!("{} inside, {} outside", inside[k], outside[k]),
        );
    }
    c.flag("membership errors", errors == 0, format!("{errors}"));
}

fn mesh_suite(base: &BaseTriangle, cfg: &VerifyConfig, c: &mut Checks) {
    let mesh_tol = 1e-8;
    match build_boundary_mesh(base, cfg.resolution, mesh_tol) {
        Ok(mesh) => {
            let res = worst(mesh.patches.iter().map(|p| patch_residual(base, p).unwrap_or(f64::INFINITY)));
            c.at_most("patch residuals", res, mesh_tol);
            let regions = mesh.census().iter().filter(|n| n.starts_with("SpecialRegionImage")).count();
            let want = if base.classify() == BaseClass::Acute { 3 } else { 1 };
            c.flag("special-region patches", regions == want, format!("{regions}, expected {want}"));
        }
        Err(e) => c.error("build mesh", e),
    }
    let rep = complement_components(base, cfg.resolution);
    let detail = format!("{} components {:?}, {} failures", rep.components.len(), rep.components, rep.solver_failures);
    if base.classify() == BaseClass::Acute {
        c.flag("three complementary components", rep.components.len() == 3 && rep.solver_failures == 0, detail);
    } else {
        c.flag("voxel classification", rep.solver_failures == 0, detail);
    }
}
