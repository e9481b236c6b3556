//! Face-angle cosines of a tetrahedron with a fixed base.

pub mod angle_map;
pub mod base_geometry;
pub mod degeneracy_locus;
pub mod error;
pub mod format;
pub mod pillow;
pub mod sampling;
pub mod toroids_regions;
pub mod verify;
pub mod inverse_p3p;
pub mod limits_boundary;
pub(crate) mod poly;

pub use error::{Error, Result};
