//! Weighted `L^2` distances from target functions to polynomial ideals,
//! and kernel-growth probes over moment data.

mod probes;
mod projection;
mod space;

pub use probes::{
    christoffel_duality_check, density_index_probe, determinacy_probe, riesz_ideal_check,
    ClassificationRule, DensityIndexRow, DeterminacyProbe, DualityReport, DualityRow, GrowthClass,
};
pub use projection::{ideal_distance, residual_decay_curve, transformed_projection, ProjectionResult};
pub use space::{cross_moments, L2Space, TargetFunction};
