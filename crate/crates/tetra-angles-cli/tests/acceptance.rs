//! End-to-end acceptance run: one line per criterion, nonzero exit if any
//! criterion fails.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, Stdio};
use std::time::Instant;

use nalgebra::{Matrix3, Point2, Vector2, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tetra_angles::angle_map::{distances, face_cosines, gradients, jacobian_det, AngleCosTriple, ApexPoint};
use tetra_angles::base_geometry::{
    fixtures, volume_squared_cosines, volume_squared_sines, BaseClass, BaseTriangle, Vertex,
};
use tetra_angles::degeneracy_locus::{
    cyclic_criterion, degeneracy_residual, degenerate_direction, fc_normal_phi, fc_point, gaussian_curvature_fc,
    nonsmooth_angles, CylinderPoint,
};
use tetra_angles::inverse_p3p::{preimage_count_profile, random_pillow_targets, roundtrip_check};
use tetra_angles::limits_boundary::{
    build_boundary_mesh, collision_search, complement_components, interior_witness, limit_solid_ellipse,
    obtuse_overlap_pair, omega_markers, planar_part, sigma_membership, Marker, PatchTag, PlanarPart, SigmaStatus,
};
use tetra_angles::pillow::{pillow_value, special_points};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn fixture_names() -> [(&'static str, BaseTriangle); 3] {
    [("equilateral", fixtures::equilateral()), ("pythagorean", fixtures::pythagorean()), ("obtuse", fixtures::obtuse())]
}

fn rho(base: &BaseTriangle, a: &ApexPoint) -> f64 {
    let (o, r) = base.circumcircle();
    (Point2::new(a.p, a.q) - o).norm() / r
}

fn near_vertex(base: &BaseTriangle, a: &ApexPoint, guard: f64) -> bool {
    let g = guard * base.circumradius();
    base.vertices().iter().any(|v| (v - Point2::new(a.p, a.q)).norm().hypot(a.r) < g)
}

/// Uniform in the box of half-width `2R` around the circumcenter, heights
/// uniform in `(r_min·R, 2R]`, or zero heights when `r_min` is `None`.
fn box_apexes(base: &BaseTriangle, n: usize, seed: u64, r_min: Option<f64>) -> Vec<ApexPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (o, rad) = base.circumcircle();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let p = o.x + rad * rng.gen_range(-2.0..2.0);
        let q = o.y + rad * rng.gen_range(-2.0..2.0);
        let r = match r_min {
            Some(m) => rad * (m + (2.0 - m) * (1.0 - rng.gen::<f64>())),
            None => 0.0,
        };
        let a = ApexPoint::new(p, q, r);
        if !near_vertex(base, &a, 1e-3) {
            out.push(a);
        }
    }
    out
}

fn cylinder_apexes(base: &BaseTriangle, n: usize, seed: u64) -> Vec<ApexPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let frame = base.canonicalize();
    (0..n)
        .map(|_| CylinderPoint { phi: rng.gen_range(0.0..TAU), r: rng.gen_range(0.05..2.0) }.to_apex(&frame))
        .collect()
}

fn c01_pillow_containment() -> Outcome {
    let mut least = f64::INFINITY;
    let mut flat = 0.0f64;
    for (_, base) in fixture_names() {
        for a in box_apexes(&base, 100_000, 1, Some(0.0)) {
            least = least.min(pillow_value(&face_cosines(&base, &a).unwrap()));
        }
        for a in box_apexes(&base, 10_000, 2, None) {
            flat = flat.max(pillow_value(&face_cosines(&base, &a).unwrap()).abs());
        }
    }
    outcome(least >= -1e-9 && flat <= 1e-9, format!("min pillow_value {least:.3e} (>= -1e-9), planar max |.| {flat:.3e} (<= 1e-9)"))
}

fn c02_volume_identity() -> Outcome {
    let mut worst = 0.0f64;
    for (_, base) in fixture_names() {
        // near-flat tetrahedra are ill-conditioned for every formula
        for a in box_apexes(&base, 10_000, 3, Some(0.1)) {
            let d = distances(&base, &a).unwrap();
            let t = face_cosines(&base, &a).unwrap();
            assert!(base.is_realizable(&d).unwrap());
            let exact = (base.area() * a.r / 3.0).powi(2);
            let [al, be, ga] = t.angles();
            let e = [
                volume_squared_cosines(d.x, d.y, d.z, t.to_array()),
                volume_squared_sines(d.x, d.y, d.z, al, be, ga),
                base.cayley_menger(&d).unwrap() / 288.0,
            ];
            for v in e {
                worst = worst.max((v - exact).abs() / exact);
            }
        }
    }
    outcome(worst <= 1e-10, format!("max relative error {worst:.3e} (<= 1e-10)"))
}

fn c03_degeneracy_equivalence() -> Outcome {
    let band = 1e-6;
    let mut bad = 0usize;
    let mut checked = 0usize;
    let mut planar_bad = 0usize;
    for (k, (_, base)) in fixture_names().into_iter().enumerate() {
        let (o, rad) = base.circumcircle();
        let mut rng = ChaCha8Rng::seed_from_u64(40 + k as u64);
        let mut pts = box_apexes(&base, 3334, 4, Some(0.01));
        // a stratum straddling the cylinder at relative offsets 1e-6 .. 1e-2
        while pts.len() < 6667 {
            let off = 10f64.powf(rng.gen_range(-6.0..-2.0)) * if rng.gen::<bool>() { 1.0 } else { -1.0 };
            let ang = rng.gen_range(0.0..TAU);
            let a = ApexPoint::new(
                o.x + rad * (1.0 + off) * ang.cos(),
                o.y + rad * (1.0 + off) * ang.sin(),
                rad * rng.gen_range(0.01..2.0),
            );
            if !near_vertex(&base, &a, 1e-3) {
                pts.push(a);
            }
        }
        for a in &pts {
            let s = rho(&base, a);
            if (s - 1.0).abs() <= band {
                continue;
            }
            checked += 1;
            let inside = s < 1.0;
            let g = gradients(&base, a).unwrap();
            let det_g = Matrix3::from_rows(&[g[0].transpose(), g[1].transpose(), g[2].transpose()]).determinant();
            let d = Vector3::new(a.p, a.q, a.r);
            let lift = |p: Point2<f64>| Vector3::new(p.x, p.y, 0.0) - d;
            let det_m = Matrix3::from_rows(&[lift(base.c()).transpose(), lift(base.b()).transpose(), lift(base.a()).transpose()])
                .determinant();
            // with the edge frame fixed, |JF| is negative exactly inside
            let expect = if inside { det_m.signum() } else { -det_m.signum() };
            let j = jacobian_det(&base, a).unwrap();
            if det_g.signum() != expect || (j < 0.0) != inside {
                bad += 1;
            }
        }
        for a in box_apexes(&base, 3333, 5, None) {
            if (rho(&base, &a) - 1.0).abs() <= band {
                continue;
            }
            let q = degeneracy_residual(&base, &distances(&base, &a).unwrap());
            let c = cyclic_criterion(&base, Point2::new(a.p, a.q)).unwrap();
            // positive inside versus negative inside
            if q.signum() != -c.signum() {
                planar_bad += 1;
            }
        }
    }
    outcome(
        bad == 0 && planar_bad == 0,
        format!("{bad} misclassified of {checked} outside the 1e-6 band, {planar_bad} planar sign disagreements"),
    )
}

fn fd_gradient(base: &BaseTriangle, a: &ApexPoint, h: f64) -> [Vector3<f64>; 3] {
    let mut g = [Vector3::zeros(); 3];
    for k in 0..3 {
        let mut e = Vector3::zeros();
        e[k] = h;
        let fp = face_cosines(base, &a.offset(&e)).unwrap().to_vector();
        let fm = face_cosines(base, &a.offset(&-e)).unwrap().to_vector();
        for i in 0..3 {
            g[i][k] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    g
}

fn c04_gradients() -> Outcome {
    let mut worst = 0.0f64;
    for (_, base) in fixture_names() {
        for a in box_apexes(&base, 1000, 6, Some(0.02)) {
            let g = gradients(&base, &a).unwrap();
            let f = fd_gradient(&base, &a, 1e-5);
            for i in 0..3 {
                worst = worst.max((g[i] - f[i]).amax());
            }
        }
    }
    outcome(worst <= 1e-7, format!("max |analytic - central difference| {worst:.3e} (<= 1e-7)"))
}

fn c05_nonsmooth_angles() -> Outcome {
    let reg = nonsmooth_angles(&fixtures::equilateral().canonicalize());
    let reg_err = reg.phis.iter().zip([PI / 3.0, PI, 5.0 * PI / 3.0]).map(|(p, e)| (p - e).abs()).fold(0.0, f64::max);
    let mut n1 = 0.0f64;
    for (_, base) in fixture_names() {
        let frame = base.canonicalize();
        for phi in nonsmooth_angles(&frame).phis {
            for r in [0.05, 0.2, 0.5, 1.0, 2.0, 5.0] {
                let n = fc_normal_phi(&frame, &CylinderPoint::new(phi, r).unwrap()).unwrap();
                n1 = n1.max(n.x.abs());
            }
        }
    }
    outcome(reg_err <= 1e-12 && n1 <= 1e-9, format!("regular roots off by {reg_err:.3e} (<= 1e-12), max |N1| {n1:.3e} (<= 1e-9)"))
}

/// Gaussian curvature of the regular-base cylinder image at `t = tan(φ/2)`.
fn regular_k(t: f64, r: f64) -> f64 {
    let (t2, r2) = (t * t, r * r);
    (r2 + 4.0) * (r2 * t2 + r2 + 4.0 * t2).powi(2) * ((r2 * t2 + r2 + t2 + 3.0).powi(2) - 12.0 * t2).powi(2)
        / (27.0 * r2 * ((r2 * r2 + 5.0 * r2) * (t2 + 1.0).powi(3) + 4.0 * t2.powi(3) + 30.0 * t2 * t2 + 6.0).powi(2))
}

fn c06_curvature() -> Outcome {
    let grid = |k: usize, lo: f64, hi: f64| lo + (hi - lo) * k as f64 / 49.0;
    let mut rel = 0.0f64;
    let mut min_k = f64::INFINITY;
    for (name, base) in fixture_names() {
        let frame = base.canonicalize();
        let ns = nonsmooth_angles(&frame);
        for i in 0..50 {
            let t = grid(i, -3.0, 3.0);
            let phi = 2.0 * t.atan();
            if ns.distance(phi) < 1e-3 {
                continue;
            }
            for j in 0..50 {
                let r = grid(j, 0.05, 4.0);
                let k = gaussian_curvature_fc(&frame, &CylinderPoint::new(phi, r).unwrap()).unwrap();
                min_k = min_k.min(k);
                if name == "equilateral" {
                    let e = regular_k(t, r);
                    rel = rel.max(((k - e) / e).abs());
                }
            }
        }
    }
    outcome(rel <= 1e-8 && min_k > 0.0, format!("regular closed form rel. error {rel:.3e} (<= 1e-8), min K {min_k:.3e} (> 0)"))
}

fn c07_degenerate_direction() -> Outcome {
    let (mut dot, mut lin, mut quad) = (0.0f64, 0.0f64, f64::INFINITY);
    for (_, base) in fixture_names() {
        let rad = base.circumradius();
        for a in cylinder_apexes(&base, 1000, 7) {
            let eta = degenerate_direction(&base, &a).unwrap();
            let g = gradients(&base, &a).unwrap();
            for gi in g {
                dot = dot.max(gi.dot(&eta).abs() / (gi.norm() * eta.norm()));
            }
            // five-point fit of t ↦ F(D + tη̂), t in units of R
            let e = eta.normalize() * rad;
            let h = 1e-4;
            let f = |t: f64| face_cosines(&base, &a.offset(&(e * t))).unwrap().to_vector();
            let (m2, m1, z, p1, p2) = (f(-2.0 * h), f(-h), f(0.0), f(h), f(2.0 * h));
            let l = (m2 - m1 * 8.0 + p1 * 8.0 - p2) / (12.0 * h);
            let q = (-m2 + m1 * 16.0 - z * 30.0 + p1 * 16.0 - p2) / (24.0 * h * h);
            lin = lin.max(l.amax());
            quad = quad.min(q.amax());
        }
    }
    outcome(
        dot <= 1e-9 && lin <= 1e-8 && quad > 1e-4,
        format!("max cosine {dot:.3e} (<= 1e-9), linear {lin:.3e} (<= 1e-8), min quadratic {quad:.3e} (> 1e-4)"),
    )
}

fn c08_injectivity() -> Outcome {
    let mut msgs = Vec::new();
    let mut ok = true;
    for (name, base) in fixture_names() {
        let rep = collision_search(&base, 10_000, 8, 1e-3, 1e-3);
        let expect_cross = base.classify() == BaseClass::Obtuse;
        ok &= rep.within_disc.is_empty() && rep.solver_failures == 0 && (rep.cross.is_empty() != expect_cross);
        msgs.push(format!("{name}: {} cross, {} in-disc", rep.cross.len(), rep.within_disc.len()));
    }
    let base = fixtures::obtuse();
    let mut pair_err = 0.0f64;
    for (fg, fa) in [(0.5, 0.5), (0.2, 0.8), (0.8, 0.3)] {
        let pair = obtuse_overlap_pair(&base, fg, fa).unwrap();
        let fi = face_cosines(&base, &pair.inner).unwrap();
        let fo = face_cosines(&base, &pair.outer).unwrap();
        pair_err = pair_err.max(fi.max_abs_diff(&fo));
        ok &= planar_part(&base, Point2::new(pair.inner.p, pair.inner.q), 1e-9) == PlanarPart::Disc;
        ok &= planar_part(&base, Point2::new(pair.outer.p, pair.outer.q), 1e-9) == PlanarPart::Exterior;
    }
    ok &= pair_err <= 1e-10;
    msgs.push(format!("recipe pair image gap {pair_err:.3e} (<= 1e-10)"));
    outcome(ok, msgs.join("; "))
}

fn c09_p3p() -> Outcome {
    let mut ok = true;
    let mut msgs = Vec::new();
    for (name, base) in fixture_names() {
        let prof = preimage_count_profile(&base, 10_000, 9);
        ok &= prof.overflow == 0 && prof.max_count() <= 4 && prof.nonconverged <= 10;
        let pts: Vec<ApexPoint> =
            box_apexes(&base, 1000, 10, Some(1e-3)).into_iter().filter(|a| (rho(&base, a) - 1.0).abs() > 1e-4).collect();
        let lost = pts.iter().filter(|a| !roundtrip_check(&base, a).recovered).count();
        ok &= lost == 0;
        msgs.push(format!("{name}: counts {:?} overflow {} nonconv {} lost {lost}/{}", prof.counts, prof.overflow, prof.nonconverged, pts.len()));
    }
    outcome(ok, msgs.join("; "))
}

fn c10_witness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut err, mut inside) = (0.0f64, true);
    let mut n = 0;
    while n < 100 {
        let a = rng.gen_range(0.05..FRAC_PI_2 - 0.05);
        let b = rng.gen_range(0.05..FRAC_PI_2 - 0.05);
        let c = PI - a - b;
        if !(c > 0.05 && c < FRAC_PI_2 - 0.05) {
            continue;
        }
        n += 1;
        let base = BaseTriangle::from_angles([a, b, c], 1.0)
            .unwrap()
            .transformed(rng.gen_range(0.3..3.0), rng.gen_range(0.0..TAU), Vector2::new(rng.gen_range(-2.0..2.0), 1.0))
            .unwrap();
        let w = interior_witness(&base).unwrap();
        let i = special_points(&base).i_triangle;
        err = err.max(face_cosines(&base, &w).unwrap().max_abs_diff(&i));
        let p0 = base.canonicalize().to_frame(Point2::new(w.p, w.q));
        inside &= p0.coords.norm_squared() < 1.0;
    }
    let w = interior_witness(&fixtures::equilateral()).unwrap();
    let eq = w.p.abs().max(w.q.abs()).max((w.r - 2f64.sqrt()).abs());
    outcome(
        err <= 1e-12 && inside && eq <= 1e-12,
        format!("max |F(w) - I| {err:.3e} (<= 1e-12), all inside {inside}, equilateral offset {eq:.3e} (<= 1e-12)"),
    )
}

fn c11_limit_sets() -> Outcome {
    let mut excess = 0.0f64;
    let mut drift = 0.0f64;
    let mut slice = 0.0f64;
    for (_, base) in fixture_names() {
        let rad = base.circumradius();
        for v in Vertex::ALL {
            let e = limit_solid_ellipse(&base, v).unwrap();
            let pv = base.vertex(v);
            for k in 0..20 {
                let theta = 0.31 + k as f64 * TAU / 20.0;
                let tilt = 0.05 + 1.45 * k as f64 / 19.0;
                let eta = Vector3::new(theta.cos() * tilt.sin(), theta.sin() * tilt.sin(), tilt.cos());
                let at = |t: f64| face_cosines(&base, &ApexPoint::new(pv.x + eta.x * t * rad, pv.y + eta.y * t * rad, eta.z * t * rad)).unwrap();
                let f = at(3e-7);
                excess = excess.max(e.excess(&f));
                drift = drift.max(f.max_abs_diff(&at(3e-6)));
            }
            // radial intersection of the slice t[V] = c with the pillowcase
            let c = e.fixed_value;
            for k in 0..90 {
                let psi = k as f64 * TAU / 90.0;
                let lam = ((1.0 - c * c) / (1.0 - c * (2.0 * psi).sin())).sqrt();
                let p = e.lift(lam * psi.cos(), lam * psi.sin());
                slice = slice.max(pillow_value(&p).abs()).max(e.form_residual(&p).abs());
            }
        }
    }
    outcome(
        excess <= 1e-6 && drift <= 1e-5 && slice <= 1e-10,
        format!("max excess {excess:.3e} (<= 1e-6), approach drift {drift:.3e}, E vs slice {slice:.3e} (<= 1e-10)"),
    )
}

fn c12_markers() -> Outcome {
    use Marker::{Minus as M, Plus as P, PlusMinus as B};
    // octants in order (---), (--+), (-+-), (-++), (+--), (+-+), (++-), (+++)
    let tables = [
        ("equilateral", [P, B, B, P, B, P, P, P]),
        ("pythagorean", [P, M, M, M, B, P, P, P]),
        ("obtuse", [P, B, M, P, M, P, M, P]),
    ];
    let mut ok = true;
    let mut msgs = Vec::new();
    for ((name, base), (_, expect)) in fixture_names().into_iter().zip(tables) {
        let table = omega_markers(&base).unwrap();
        let got: Vec<Marker> = table.markers.iter().map(|m| m.1).collect();
        ok &= got == expect;
        let center = base.cos_angles();
        let cell = |t: &AngleCosTriple| {
            let a = t.to_array();
            if (0..3).any(|i| (a[i] - center[i]).abs() < 1e-9) {
                return None;
            }
            Some((0..3).fold(0, |acc, i| acc * 2 + (a[i] > center[i]) as usize))
        };
        let mut probes = random_pillow_targets(10_000, 12);
        probes.extend(box_apexes(&base, 10_000, 13, Some(0.0)).iter().map(|a| face_cosines(&base, a).unwrap()));
        let (mut inn, mut out) = ([0usize; 8], [0usize; 8]);
        for t in &probes {
            let Some(k) = cell(t) else { continue };
            match sigma_membership(&base, t).unwrap() {
                SigmaStatus::InSigma => inn[k] += 1,
                SigmaStatus::Outside => out[k] += 1,
                SigmaStatus::OnClosureBoundaryOnly => {}
            }
        }
        for k in 0..8 {
            ok &= match expect[k] {
                Marker::Plus => inn[k] > 0 && out[k] == 0,
                Marker::Minus => inn[k] == 0,
                Marker::PlusMinus => inn[k] > 0 && out[k] > 0,
            };
        }
        let cells: Vec<String> = (0..8).map(|k| format!("{}:{}/{}", expect[k].symbol(), inn[k], out[k])).collect();
        msgs.push(format!("{name} [{}]", cells.join(" ")));
    }
    outcome(ok, msgs.join("; "))
}

fn c13_boundary_mesh() -> Outcome {
    let mut ok = true;
    let mut worst = 0.0f64;
    let mut msgs = Vec::new();
    for (name, base) in fixture_names() {
        let mesh = build_boundary_mesh(&base, 64, 1e-8).unwrap();
        let frame = base.canonicalize();
        for patch in &mesh.patches {
            for (v, p) in patch.vertices.iter().zip(&patch.params) {
                let t = AngleCosTriple::from_vector(*v);
                let r = match patch.tag {
                    PatchTag::FBminus | PatchTag::FBplus => {
                        let img = if p[0].is_nan() {
                            AngleCosTriple::new(1.0, 1.0, 1.0)
                        } else {
                            face_cosines(&base, &ApexPoint::planar(p[0], p[1])).unwrap()
                        };
                        pillow_value(&t).abs().max(img.max_abs_diff(&t))
                    }
                    PatchTag::EllipseCap(vx) => {
                        let e = limit_solid_ellipse(&base, vx).unwrap();
                        e.plane_residual(&t).abs().max(e.form_residual(&t).max(0.0))
                    }
                    PatchTag::SpecialRegionImage(_) => {
                        let cp = CylinderPoint::new(p[0], p[1]).unwrap();
                        fc_point(&frame, &cp).unwrap().max_abs_diff(&t)
                    }
                };
                worst = worst.max(r);
            }
        }
        let regions = mesh.census().iter().filter(|n| n.starts_with("SpecialRegionImage")).count();
        let want = if base.classify() == BaseClass::Acute { 3 } else { 1 };
        ok &= regions == want;
        msgs.push(format!("{name}: {} patches, {regions} region images", mesh.patches.len()));
    }
    ok &= worst <= 1e-8;
    let rep = complement_components(&fixtures::equilateral(), 64);
    ok &= rep.components.len() == 3 && rep.solver_failures == 0;
    msgs.push(format!("max residual {worst:.3e} (<= 1e-8)"));
    msgs.push(format!("equilateral res-64 complement components {:?}", rep.components));
    outcome(ok, msgs.join("; "))
}

fn c14_cli_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut differing = Vec::new();
    let mut runs = 0;
    for (name, _) in fixture_names() {
        let commands: [&[&str]; 6] = [
            &["map", "--apex", "0.2", "0.1", "0.9"],
            &["inverse", "--target", "0.3", "0.2", "0.1"],
            &["member", "--target", "0.3", "-0.5", "0.2"],
            &["boundary", "--res", "16"],
            &["sample", "--samples", "200", "--region", "special_regions", "--seed", "42"],
            &["verify", "--suite", "markers", "--samples", "300", "--seed", "42"],
        ];
        for args in commands {
            let mut outputs = Vec::new();
            for k in 0..2 {
                let path = dir.path().join(format!("{name}-{k}"));
                let s = Command::new(env!("CARGO_BIN_EXE_tetra-angles"))
                    .args(args)
                    .args(["--base", name, "--out", path.to_str().unwrap()])
                    .env("TETRA_ANGLES_THREADS", if k == 0 { "1" } else { "0" })
                    .stderr(Stdio::null())
                    .status()
                    .unwrap();
                assert!(s.success(), "{name} {args:?}");
                outputs.push(std::fs::read(&path).unwrap());
                runs += 1;
            }
            if outputs[0] != outputs[1] {
                differing.push(format!("{name} {}", args[0]));
            }
        }
    }
    outcome(differing.is_empty(), format!("{runs} runs, differing: {differing:?}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 14] = [
        ("pillow containment", c01_pillow_containment),
        ("volume identity chain", c02_volume_identity),
        ("degeneracy equivalence", c03_degeneracy_equivalence),
        ("gradients", c04_gradients),
        ("non-smooth angles", c05_nonsmooth_angles),
        ("curvature", c06_curvature),
        ("degenerate direction", c07_degenerate_direction),
        ("injectivity dichotomy", c08_injectivity),
        ("inverse solver", c09_p3p),
        ("interior witness", c10_witness),
        ("limit sets", c11_limit_sets),
        ("octant markers", c12_markers),
        ("boundary mesh", c13_boundary_mesh),
        ("cli determinism", c14_cli_determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|x| name.contains(x.as_str())) {
            continue;
        }
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        let verdict = if res.passed { "PASS" } else { "FAIL" };
        println!("criterion {:2} {:<24} {verdict}  {} [{:.1}s]", i + 1, name, res.detail, start.elapsed().as_secs_f64());
        failed += !res.passed as usize;
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
