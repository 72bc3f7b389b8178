//! Integral means, Hardy/Bergman/Dirichlet-type norms, dyadic decomposition
//! norms and the mean-Lipschitz block profiler.

mod lipschitz;
mod space;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

pub use lipschitz::{lipschitz_profile, BlockNorm, LipschitzProfile, LipschitzVerdict, DECREASE_MARGIN, DEFAULT_TAU};
pub use space::{
    bergman_monomial_norm_sq, decomposition_norm, hardy_norm, integral_mean, integral_mean_sampled,
    k_p_functional, space_norm, space_norm_detailed, sup_mean, sup_mean_weighted_integral, NormEvaluation,
    RADIAL_REL_TOL,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceKind {
    Hardy,
    Bergman,
    DirichletType,
}

/// A function space: `H^p`, `A^p_α` or `D^p_α`. The weight is ignored for
/// Hardy spaces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceParams {
    pub kind: SpaceKind,
    pub p: f64,
    pub alpha: f64,
}

impl SpaceParams {
    pub fn hardy(p: f64) -> Self {
        Self { kind: SpaceKind::Hardy, p, alpha: 0.0 }
    }

    pub fn bergman(p: f64, alpha: f64) -> Self {
        Self { kind: SpaceKind::Bergman, p, alpha }
    }

    pub fn dirichlet(p: f64, alpha: f64) -> Self {
        Self { kind: SpaceKind::DirichletType, p, alpha }
    }

    /// Checks that the norm is defined: `p > 0`, and `α > -1` off Hardy.
    pub fn validate(&self) -> Result<()> {
        if !(self.p.is_finite() && self.p > 0.0) {
            return domain(format!("exponent p must be positive and finite, got {}", self.p));
        }
        if self.kind != SpaceKind::Hardy && !(self.alpha.is_finite() && self.alpha > -1.0) {
            return domain(format!("weight α must exceed -1, got {}", self.alpha));
        }
        Ok(())
    }

    /// Whether generalized Hilbert operators are defined on (and studied on)
    /// this space: `H^p` with `p > 1`, `A^p_α` with `-1 < α < p - 2`,
    /// `D^p_α` with `p - 2 < α ≤ p - 1`.
    pub fn operator_admissible(&self) -> bool {
        if self.validate().is_err() || self.p <= 1.0 {
            return false;
        }
        match self.kind {
            SpaceKind::Hardy => true,
            SpaceKind::Bergman => self.alpha < self.p - 2.0,
            SpaceKind::DirichletType => self.p - 2.0 < self.alpha && self.alpha <= self.p - 1.0,
        }
    }

    pub fn check_operator_admissible(&self) -> Result<()> {
        self.validate()?;
        if !self.operator_admissible() {
            return domain(format!(
                "{} is outside the range where Hilbert-type operators are studied \
                 (H^p: p > 1; A^p_α: -1 < α < p-2; D^p_α: p-2 < α <= p-1)",
                self.label()
            ));
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        match self.kind {
            SpaceKind::Hardy => format!("H^{}", self.p),
            SpaceKind::Bergman => format!("A^{}_{}", self.p, self.alpha),
            SpaceKind::DirichletType => format!("D^{}_{}", self.p, self.alpha),
        }
    }
}
