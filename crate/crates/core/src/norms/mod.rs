pub mod exponent;
pub mod lp;
pub mod regions;

pub use exponent::Exponent;
pub use lp::{lp_norm, region_mass, NormReport};
pub use regions::{default_alpha, Region, RegionPartition};
