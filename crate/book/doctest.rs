#[doc = include_str!("src/intro.md")]
pub mod intro {}
#[doc = include_str!("src/bases.md")]
pub mod bases {}
#[doc = include_str!("src/angle_map.md")]
pub mod angle_map {}
#[doc = include_str!("src/pillow.md")]
pub mod pillow {}
#[doc = include_str!("src/cylinder.md")]
pub mod cylinder {}
#[doc = include_str!("src/regions.md")]
pub mod regions {}
#[doc = include_str!("src/inverse.md")]
pub mod inverse {}
#[doc = include_str!("src/boundary.md")]
pub mod boundary {}
#[doc = include_str!("src/cli.md")]
pub mod cli {}
