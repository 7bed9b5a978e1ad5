//! Patches, an upper bound on the hull metric, proximality searches and
//! coincidence-rank evidence for fibers of the torus parametrization.

mod fiber;
mod patch;
mod proximity;

pub use fiber::{
    coincidence_from_patterns, coincidence_rank_estimate, distinct_patches, fiber_elements, n_r, sample_translates, validate_convention,
    CoincidenceEstimate, ConventionReport, FiberElement, FiberSet, OracleCheck, DEFAULT_PROBE_RADIUS,
};
pub use patch::{ball_patch, hull_metric_upper, MetricBound};
pub use proximity::{
    ball_volume, statistical_coincidence, strong_proximal_witness, witness_candidates, DensityEstimate, ProximalSearch,
};
