//! Moments, the classical and generalized Hilbert operators, the sublinear
//! operator, the `ψ_{N,α}` functions with their test families, and
//! Hilbert-Schmidt sums.

mod hilbert;
mod hs;
mod moments;
mod psi;

pub use hilbert::{
    apply_hg, apply_hg_detailed, apply_hg_sublinear, apply_hg_sublinear_detailed, apply_hg_with_moments,
    derivative_identity_check, hilbert_classic, DerivativeCheck,
};
pub use hs::{hs_sum, HsSeries, HsSpace};
pub use moments::{
    abs_moments, moment_quad_options, moments, moments_by_quadrature, moments_times_t, polynomial_moments,
    quadrature_moments, MomentMethod, MomentSequence,
};
pub use psi::{pole_parameter, psi, test_function, PsiEvaluation, TestFamily};
