//! Seeded apex samplers over the regions exposed by the command line.

use std::f64::consts::TAU;
use std::str::FromStr;

use nalgebra::Point2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::angle_map::{face_cosines, AngleCosTriple, ApexPoint};
use crate::base_geometry::BaseTriangle;
use crate::degeneracy_locus::{on_cylinder, CylinderPoint};
use crate::error::{Error, Result};
use crate::pillow::pillow_value;
use crate::toroids_regions::special_regions_all;

/// Apexes closer than this to a base vertex (relative to `R`) are redrawn.
pub const VERTEX_GUARD: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleRegion {
    /// Base plane, in the box of half-width `2R` around the circumcenter.
    Plane,
    /// Open upper half-space over the same box, heights in `(0, 2R]`.
    Halfspace,
    /// Cylinder over the circumcircle, heights in `(0, 2R]`.
    Cylinder,
    /// Union of the special regions on the cylinder.
    SpecialRegions,
}

impl SampleRegion {
    pub const ALL: [SampleRegion; 4] =
        [SampleRegion::Plane, SampleRegion::Halfspace, SampleRegion::Cylinder, SampleRegion::SpecialRegions];

    pub fn name(self) -> &'static str {
        match self {
            SampleRegion::Plane => "plane",
            SampleRegion::Halfspace => "halfspace",
            SampleRegion::Cylinder => "cylinder",
            SampleRegion::SpecialRegions => "special_regions",
        }
    }
}

impl FromStr for SampleRegion {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        SampleRegion::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| format!("unknown region {s:?}, expected plane|halfspace|cylinder|special_regions"))
    }
}

/// One sampled apex with its image.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample {
    pub apex: ApexPoint,
    pub cosines: AngleCosTriple,
    pub pillow_value: f64,
    pub on_cylinder: bool,
}

fn near_vertex(base: &BaseTriangle, apex: &ApexPoint) -> bool {
    let guard = VERTEX_GUARD * base.circumradius();
    base.vertices()
        .iter()
        .any(|v| (v - Point2::new(apex.p, apex.q)).norm().hypot(apex.r) < guard)
}

/// `n` apexes from `region`, identical for identical `(base, n, seed)`.
pub fn sample_apexes(base: &BaseTriangle, region: SampleRegion, n: usize, seed: u64) -> Result<Vec<ApexPoint>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (o, radius) = base.circumcircle();
    let frame = base.canonicalize();
    let regions = match region {
        SampleRegion::SpecialRegions => special_regions_all(base)?,
        _ => Vec::new(),
    };
    if region == SampleRegion::SpecialRegions && regions.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let apex = match region {
            SampleRegion::Plane | SampleRegion::Halfspace => {
                let p = o.x + radius * rng.gen_range(-2.0..2.0);
                let q = o.y + radius * rng.gen_range(-2.0..2.0);
                let r = match region {
                    SampleRegion::Plane => 0.0,
                    _ => 2.0 * radius * (1.0 - rng.gen::<f64>()),
                };
                ApexPoint::new(p, q, r)
            }
            SampleRegion::Cylinder => {
                let cp = CylinderPoint { phi: rng.gen_range(0.0..TAU), r: 2.0 * (1.0 - rng.gen::<f64>()) };
                cp.to_apex(&frame)
            }
            SampleRegion::SpecialRegions => {
                let reg = &regions[rng.gen_range(0..regions.len())];
                let phi = rng.gen_range(reg.phi_lo..reg.phi_hi);
                let r = reg.z_max(phi) * (1.0 - rng.gen::<f64>());
                if !(r > 1e-9) {
                    continue;
                }
                CylinderPoint { phi: phi.rem_euclid(TAU), r }.to_apex(&frame)
            }
        };
        if !near_vertex(base, &apex) {
            out.push(apex);
        }
    }
    Ok(out)
}

pub fn evaluate(base: &BaseTriangle, apex: &ApexPoint) -> Result<Sample> {
    let cosines = face_cosines(base, apex)?;
    Ok(Sample { apex: *apex, cosines, pillow_value: pillow_value(&cosines), on_cylinder: on_cylinder(base, apex)? })
}

/// [`sample_apexes`] followed by the forward map.
pub fn sample(base: &BaseTriangle, region: SampleRegion, n: usize, seed: u64) -> Result<Vec<Sample>> {
    sample_apexes(base, region, n, seed)?.iter().map(|a| evaluate(base, a)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base_geometry::fixtures;
    use crate::toroids_regions::in_special_region;

    #[test]
    fn deterministic_per_seed() {
        let base = fixtures::obtuse();
        for region in SampleRegion::ALL {
            let a = sample_apexes(&base, region, 50, 9).unwrap();
            assert_eq!(a, sample_apexes(&base, region, 50, 9).unwrap());
            assert_ne!(a, sample_apexes(&base, region, 50, 10).unwrap());
        }
    }

    #[test]
    fn regions_hold_what_they_claim() {
        for base in fixtures::all() {
            let tol = 1e-9;
            for s in sample(&base, SampleRegion::Plane, 100, 1).unwrap() {
                assert!(s.pillow_value.abs() <= tol, "{s:?}");
            }
            for s in sample(&base, SampleRegion::Halfspace, 100, 1).unwrap() {
                assert!(s.apex.r > 0.0 && s.pillow_value >= -tol);
            }
            for s in sample(&base, SampleRegion::Cylinder, 100, 1).unwrap() {
                assert!(s.on_cylinder);
            }
            for s in sample(&base, SampleRegion::SpecialRegions, 100, 1).unwrap() {
                assert!(s.on_cylinder && in_special_region(&base, &s.apex), "{s:?}");
            }
        }
    }

    #[test]
    fn empty_request() {
        assert!(sample(&fixtures::equilateral(), SampleRegion::Plane, 0, 0).unwrap().is_empty());
    }

    #[test]
    fn region_names_round_trip() {
        for r in SampleRegion::ALL {
            assert_eq!(r.name().parse::<SampleRegion>(), Ok(r));
        }
        assert!("disc".parse::<SampleRegion>().is_err());
    }
}
