//! Experiment harnesses: truncated operator norms, lower bounds for general
//! `p`, the compactness probe and end-to-end verdict reports.

mod compactness;
mod lower_bound;
mod matrix;
mod report;

pub use compactness::{compactness_probe, family_for, CompactnessProbe, DEFAULT_COMPACT_THRESHOLD};
pub use lower_bound::{norm_lower_bound, CandidateSource, LowerBound, ASCENT_COORDS, ASCENT_ROUNDS};
pub use matrix::{
    l2_operator_norm, truncated_matrix, DenseMatrix, LinearMap, SpectralNorm, TruncatedMatrix, POWER_MAX_ITER,
    POWER_REL_TOL,
};
pub use report::{
    verdict_report, AuxiliaryProfile, Expectation, LadderEstimate, Prediction, ProbeConfig, ProbeReport, Verdict,
    BOUNDED_SLOPE, UNBOUNDED_SLOPE,
};
