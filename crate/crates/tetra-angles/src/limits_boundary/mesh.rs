//! Triangulated patches of the boundary of the closed image, and a voxel
//! count of the pieces of the pillow the image leaves out.

use std::collections::VecDeque;
use std::f64::consts::TAU;
use std::fmt::Write as _;

use nalgebra::{Point2, Vector3};
use rayon::prelude::*;

use super::{limit_segments, limit_solid_ellipses, sigma_membership, LimitSolidEllipse, SigmaStatus};
use crate::angle_map::{face_cosines, AngleCosTriple, ApexPoint};
use crate::base_geometry::{BaseTriangle, Vertex};
use crate::degeneracy_locus::{fc_point, CylinderPoint};
use crate::error::{Error, Result};
use crate::format::fmt_sig;
use crate::inverse_p3p::preimages;
use crate::pillow::{pillow_value, pillow_value_raw, special_points};
use crate::toroids_regions::special_regions_all;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PatchTag {
    /// Image of the open circumdisc.
    FBminus,
    /// Image of the plane outside the circumcircle, closed at infinity.
    FBplus,
    EllipseCap(Vertex),
    SpecialRegionImage(Vertex),
}

impl PatchTag {
    pub fn name(&self) -> String {
        match self {
            PatchTag::FBminus => "F_Bminus".into(),
            PatchTag::FBplus => "F_Bplus".into(),
            PatchTag::EllipseCap(v) => format!("EllipseCap_{}", v.letter()),
            PatchTag::SpecialRegionImage(v) => format!("SpecialRegionImage_{}", v.letter()),
        }
    }
}

/// A triangle list. `params` holds the source coordinates of each vertex:
/// planar apex `(p, q)` for the plane patches (NaN for the point at
/// infinity), free coordinates on caps, `(φ, r)` on region images.
#[derive(Clone, Debug, PartialEq)]
pub struct Patch {
    pub tag: PatchTag,
    pub vertices: Vec<Vector3<f64>>,
    pub params: Vec<[f64; 2]>,
    pub triangles: Vec<[usize; 3]>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Polyline {
    pub name: String,
    pub points: Vec<Vector3<f64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryMesh {
    pub patches: Vec<Patch>,
    /// Curves along which patches meet: the ellipses `E_V`, the limit
    /// segments and the three arc values.
    pub polylines: Vec<Polyline>,
    pub resolution: usize,
}

impl BoundaryMesh {
    pub fn patch(&self, tag: PatchTag) -> Option<&Patch> {
        self.patches.iter().find(|p| p.tag == tag)
    }

    pub fn census(&self) -> Vec<String> {
        self.patches.iter().map(|p| p.tag.name()).collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.patches.iter().map(|p| p.vertices.len()).sum()
    }

    pub fn triangle_count(&self) -> usize {
        self.patches.iter().map(|p| p.triangles.len()).sum()
    }

    /// Wavefront OBJ: one group per patch, faces 1-indexed.
    pub fn to_obj(&self) -> String {
        let mut s = String::new();
        let mut offset = 1;
        for p in &self.patches {
            let _ = writeln!(s, "g {}", p.tag.name());
            for v in &p.vertices {
                let _ = writeln!(s, "v {} {} {}", fmt_sig(v.x), fmt_sig(v.y), fmt_sig(v.z));
            }
            for t in &p.triangles {
                let _ = writeln!(s, "f {} {} {}", t[0] + offset, t[1] + offset, t[2] + offset);
            }
            offset += p.vertices.len();
        }
        s
    }

    /// ASCII PLY with a `patch_id` vertex property indexing `patches`.
    pub fn to_ply(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "ply\nformat ascii 1.0");
        for (i, p) in self.patches.iter().enumerate() {
            let _ = writeln!(s, "comment patch {i} {}", p.tag.name());
        }
        let _ = writeln!(s, "element vertex {}", self.vertex_count());
        let _ = writeln!(s, "property double x\nproperty double y\nproperty double z\nproperty int patch_id");
        let _ = writeln!(s, "element face {}", self.triangle_count());
        let _ = writeln!(s, "property list uchar int vertex_indices\nend_header");
        for (i, p) in self.patches.iter().enumerate() {
            for v in &p.vertices {
                let _ = writeln!(s, "{} {} {} {i}", fmt_sig(v.x), fmt_sig(v.y), fmt_sig(v.z));
            }
        }
        let mut offset = 0;
        for p in &self.patches {
            for t in &p.triangles {
                let _ = writeln!(s, "3 {} {} {}", t[0] + offset, t[1] + offset, t[2] + offset);
            }
            offset += p.vertices.len();
        }
        s
    }
}

/// Vertex layout for a disc: an optional centre followed by `rings` rings of
/// `m` points each. Returns triangles over indices into that layout.
fn disc_triangles(rings: usize, m: usize) -> Vec<[usize; 3]> {
    let mut tris = Vec::new();
    let ring = |j: usize, i: usize| 1 + j * m + i % m;
    for i in 0..m {
        tris.push([0, ring(0, i), ring(0, i + 1)]);
    }
    for j in 0..rings.saturating_sub(1) {
        for i in 0..m {
            let (a, b, c, d) = (ring(j, i), ring(j, i + 1), ring(j + 1, i), ring(j + 1, i + 1));
            tris.push([a, c, d]);
            tris.push([a, d, b]);
        }
    }
    tris
}

/// Keeps the listed triangles whose vertices are all marked, and reindexes.
fn compact(tag: PatchTag, verts: Vec<Vector3<f64>>, params: Vec<[f64; 2]>, keep: &[bool], tris: &[[usize; 3]]) -> Patch {
    let mut map = vec![usize::MAX; verts.len()];
    let mut out = Patch { tag, vertices: Vec::new(), params: Vec::new(), triangles: Vec::new() };
    for t in tris {
        if !t.iter().all(|&i| keep[i]) {
            continue;
        }
        let mut nt = [0; 3];
        for (k, &i) in t.iter().enumerate() {
            if map[i] == usize::MAX {
                map[i] = out.vertices.len();
                out.vertices.push(verts[i]);
                out.params.push(params[i]);
            }
            nt[k] = map[i];
        }
        out.triangles.push(nt);
    }
    out
}

/// Gap left between the plane patches and the circumcircle, relative to `R`.
const CIRCLE_GAP: f64 = 1e-6;

fn plane_patch(base: &BaseTriangle, n: usize, outer: bool) -> Result<Patch> {
    let frame = base.canonicalize();
    let m = 4 * n;
    let hole = base.tolerances().tol_dedup * frame.radius();
    let mut pts: Vec<Option<Point2<f64>>> = vec![None];
    if !outer {
        pts[0] = Some(frame.from_frame(Point2::origin()));
    }
    for j in 1..=n {
        // 𝔹₋ by radius, 𝔹₊ by the inverted radius σ = 1/ρ
        let s = (1.0 - CIRCLE_GAP) * j as f64 / n as f64;
        let rho = if outer { 1.0 / s } else { s };
        for i in 0..m {
            let a = TAU * i as f64 / m as f64;
            pts.push(Some(frame.from_frame(Point2::new(rho * a.cos(), rho * a.sin()))));
        }
    }
    let mapped: Vec<(Option<Vector3<f64>>, [f64; 2])> = pts
        .par_iter()
        .map(|p| match p {
            None => (Some(Vector3::repeat(1.0)), [f64::NAN, f64::NAN]),
            Some(p) => {
                let near_vertex = Vertex::ALL.iter().any(|&v| (base.vertex(v) - p).norm() <= hole);
                let f = if near_vertex { None } else { face_cosines(base, &ApexPoint::planar(p.x, p.y)).ok() };
                (f.map(|t| t.to_vector()), [p.x, p.y])
            }
        })
        .collect();
    let keep: Vec<bool> = mapped.iter().map(|(f, _)| f.is_some()).collect();
    let verts = mapped.iter().map(|(f, _)| f.unwrap_or_else(Vector3::zeros)).collect();
    let params = mapped.iter().map(|(_, p)| *p).collect();
    let tag = if outer { PatchTag::FBplus } else { PatchTag::FBminus };
    Ok(compact(tag, verts, params, &keep, &disc_triangles(n, m)))
}

/// Whether a target has a preimage that certifies it as an interior point of
/// the closed image: above the plane and off the cylinder.
fn has_interior_witness(base: &BaseTriangle, t: &AngleCosTriple) -> bool {
    match preimages(base, t) {
        Ok(sol) => sol.solutions.iter().any(|s| !s.planar && !s.near_cylinder),
        Err(_) => false,
    }
}

fn cap_patch(base: &BaseTriangle, e: &LimitSolidEllipse, n: usize) -> Patch {
    let m = 4 * n;
    let mut pts = vec![e.point(0.0, 0.0)];
    for j in 1..=n {
        let lam = j as f64 / n as f64;
        for i in 0..m {
            pts.push(e.point(lam, TAU * i as f64 / m as f64));
        }
    }
    let keep: Vec<bool> = pts.par_iter().map(|t| !has_interior_witness(base, t)).collect();
    let params = pts.iter().map(|t| {
        let (s, u) = e.project(t);
        [s, u]
    });
    let verts = pts.iter().map(|t| t.to_vector()).collect();
    compact(PatchTag::EllipseCap(e.vertex), verts, params.collect(), &keep, &disc_triangles(n, m))
}

/// Smallest height fraction used for the bottom row of a region image.
const REGION_FLOOR: f64 = 1e-6;

fn region_patch(base: &BaseTriangle, k: usize, n: usize) -> Result<Patch> {
    let frame = base.canonicalize();
    let region = special_regions_all(base)?[k];
    let m = 2 * n;
    let mut cps = Vec::new();
    for i in 1..m {
        let phi = region.phi_lo + (region.phi_hi - region.phi_lo) * i as f64 / m as f64;
        let zmax = region.z_max(phi);
        for j in 0..=n {
            let r = zmax * (j as f64 / n as f64).max(REGION_FLOOR);
            cps.push(CylinderPoint::new(phi, r)?);
        }
    }
    let verts: Vec<Vector3<f64>> =
        cps.par_iter().map(|cp| fc_point(&frame, cp).map(|t| t.to_vector())).collect::<Result<_>>()?;
    let params = cps.iter().map(|cp| [cp.phi, cp.r]).collect();
    let cols = m - 1;
    let idx = |i: usize, j: usize| i * (n + 1) + j;
    let mut tris = Vec::new();
    for i in 0..cols - 1 {
        for j in 0..n {
            tris.push([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)]);
            tris.push([idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)]);
        }
    }
    Ok(Patch { tag: PatchTag::SpecialRegionImage(region.vertex), vertices: verts, params, triangles: tris })
}

fn polylines(base: &BaseTriangle, n: usize) -> Result<Vec<Polyline>> {
    let mut out = Vec::new();
    for e in limit_solid_ellipses(base)? {
        let m = 4 * n;
        let pts = (0..=m).map(|i| e.point(1.0, TAU * i as f64 / m as f64).to_vector()).collect();
        out.push(Polyline { name: format!("E_{}", e.vertex.letter()), points: pts });
    }
    for s in limit_segments(base) {
        let pts = (0..=n).map(|i| s.at(i as f64 / n as f64).to_vector()).collect();
        out.push(Polyline { name: format!("segment_{}", s.vertex.letter()), points: pts });
    }
    let sp = special_points(base);
    for (name, p) in [("arc_BC", sp.a_tilde), ("arc_AC", sp.b_tilde), ("arc_AB", sp.c_tilde)] {
        out.push(Polyline { name: name.into(), points: vec![p.to_vector()] });
    }
    Ok(out)
}

/// Largest defining-equation residual of a patch, recomputed from `params`.
pub fn patch_residual(base: &BaseTriangle, patch: &Patch) -> Result<f64> {
    let mut worst = 0.0f64;
    match patch.tag {
        PatchTag::FBminus | PatchTag::FBplus => {
            for v in &patch.vertices {
                worst = worst.max(pillow_value_raw(v.x, v.y, v.z).abs());
            }
        }
        PatchTag::EllipseCap(vx) => {
            let e = super::limit_solid_ellipse(base, vx)?;
            for v in &patch.vertices {
                let t = AngleCosTriple::from_vector(*v);
                worst = worst.max(e.plane_residual(&t).abs()).max(e.form_residual(&t).max(0.0));
            }
        }
        PatchTag::SpecialRegionImage(_) => {
            let frame = base.canonicalize();
            for (v, p) in patch.vertices.iter().zip(&patch.params) {
                let cp = CylinderPoint::new(p[0], p[1])?;
                let direct = face_cosines(base, &cp.to_apex(&frame))?;
                let fc = fc_point(&frame, &cp)?;
                worst = worst.max((fc.to_vector() - v).amax()).max(direct.max_abs_diff(&fc));
            }
        }
    }
    Ok(worst)
}

/// Triangulates the boundary of the closed image.
///
/// Plane patches cover the circumdisc and, through `ρ ↦ 1/ρ`, its exterior
/// with the point at infinity as the vertex `(1,1,1)`. Each limit solid
/// ellipse is sampled on a polar grid and cut down to the vertices without an
/// interior witness from the inverse solver. Every special region of the base
/// contributes the image of its `(φ, r)` grid.
pub fn build_boundary_mesh(base: &BaseTriangle, resolution: usize, mesh_tol: f64) -> Result<BoundaryMesh> {
    let s = base.side_lengths().max();
    let area2 = base.signed_area2();
    if !(area2.abs() > base.tolerances().tol_area * s * s) {
        return Err(Error::DegenerateBase { area2 });
    }
    if resolution < 8 {
        return Err(Error::InvalidBase(format!("resolution {resolution} below 8")));
    }
    let n = resolution;
    let mut patches = vec![plane_patch(base, n, false)?, plane_patch(base, n, true)?];
    for e in limit_solid_ellipses(base)? {
        let cap = cap_patch(base, &e, n / 2);
        if !cap.triangles.is_empty() {
            patches.push(cap);
        }
    }
    for k in 0..special_regions_all(base)?.len() {
        patches.push(region_patch(base, k, n / 2)?);
    }
    for p in &patches {
        let r = patch_residual(base, p)?;
        if !(r <= mesh_tol) {
            return Err(Error::MeshToleranceUnreachable { patch: p.tag.name(), residual: r });
        }
    }
    Ok(BoundaryMesh { patches, polylines: polylines(base, n)?, resolution })
}

/// Connected pieces of the pillow outside the closed image, found on a voxel
/// grid of side `2/resolution`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplementReport {
    pub resolution: usize,
    /// Voxel centres strictly inside the pillow.
    pub pillow_voxels: usize,
    pub outside_voxels: usize,
    /// Component sizes, largest first.
    pub components: Vec<usize>,
    pub solver_failures: usize,
}

/// Classifies voxel centres with [`sigma_membership`] and groups the
/// `Outside` ones by face adjacency.
pub fn complement_components(base: &BaseTriangle, resolution: usize) -> ComplementReport {
    let n = resolution;
    let c = |i: usize| -1.0 + (i as f64 + 0.5) * 2.0 / n as f64;
    let cells: Vec<(usize, usize, usize)> =
        (0..n).flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k)))).collect();
    // 0: not in the pillow, 1: in the image closure, 2: outside it, 3: failure
    let state: Vec<u8> = cells
        .par_iter()
        .map(|&(i, j, k)| {
            let t = AngleCosTriple::new(c(i), c(j), c(k));
            if !(pillow_value(&t) > 0.0) {
                return 0;
            }
            match sigma_membership(base, &t) {
                Ok(SigmaStatus::Outside) => 2,
                Ok(_) => 1,
                Err(_) => 3,
            }
        })
        .collect();
    let at = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
    let mut seen = vec![false; state.len()];
    let mut components = Vec::new();
    for start in 0..state.len() {
        if state[start] != 2 || seen[start] {
            continue;
        }
        let mut size = 0;
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(idx) = queue.pop_front() {
            size += 1;
            let (i, j, k) = (idx / (n * n), idx / n % n, idx % n);
            let mut push = |ii: usize, jj: usize, kk: usize| {
                let q = at(ii, jj, kk);
                if state[q] == 2 && !seen[q] {
                    seen[q] = true;
                    queue.push_back(q);
                }
            };
            if i > 0 {
                push(i - 1, j, k);
            }
            if i + 1 < n {
                push(i + 1, j, k);
            }
            if j > 0 {
                push(i, j - 1, k);
            }
            if j + 1 < n {
                push(i, j + 1, k);
            }
            if k > 0 {
                push(i, j, k - 1);
            }
            if k + 1 < n {
                push(i, j, k + 1);
            }
        }
        components.push(size);
    }
    components.sort_unstable_by(|a, b| b.cmp(a));
    ComplementReport {
        resolution,
        pillow_voxels: state.iter().filter(|&&s| s != 0).count(),
        outside_voxels: state.iter().filter(|&&s| s == 2).count(),
        components,
        solver_failures: state.iter().filter(|&&s| s == 3).count(),
    }
}
