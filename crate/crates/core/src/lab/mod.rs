//! Numerical experiments built on the engines.

pub mod regime;
pub mod scaling;
pub mod weyl;

pub use regime::{airy_regime_mass, RegimeMass};
pub use scaling::{
    fit_exponent, geometric_grid, p4_ratio_scan, run_norm_scaling, theory_slope, LineFit, P4Scan, ScalingFit,
};
pub use weyl::{critical_window, weyl_sums, WeylExperiment};
