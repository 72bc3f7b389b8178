use serde::{Deserialize, Serialize};

use super::moments::{abs_moments, moments, moments_times_t, MomentMethod, MomentSequence};
use crate::error::{precondition, Result};
use crate::series::{FunctionSpec, PowerSeries};

/// Classical Hilbert matrix action: coefficient `n` is `Σ_k a_k / (n+k+1)`.
pub fn hilbert_classic(f: &PowerSeries, k_out: usize) -> PowerSeries {
    let a = f.coeffs();
    let coeffs = (0..=k_out)
        .map(|n| a.iter().enumerate().map(|(k, &c)| c / (n + k + 1) as f64).sum())
        .collect();
    PowerSeries::new(coeffs).expect("finite input gives finite output")
}

fn check_symbol_degree(g: &PowerSeries, k_out: usize) -> Result<()> {
    if g.degree() < k_out + 1 {
        return precondition(format!(
            "symbol has degree {} but output degree {k_out} needs degree {}",
            g.degree(),
            k_out + 1
        ));
    }
    Ok(())
}

/// `H_g(f)` from precomputed moments: coefficient `k` is `(k+1) b_{k+1} μ_k`.
pub fn apply_hg_with_moments(g: &PowerSeries, mu: &MomentSequence, k_out: usize) -> Result<PowerSeries> {
    check_symbol_degree(g, k_out)?;
    if mu.len() < k_out + 1 {
        return precondition(format!("need {} moments, got {}", k_out + 1, mu.len()));
    }
    let coeffs = (0..=k_out).map(|k| (k + 1) as f64 * g.coeff(k + 1) * mu.values[k]).collect();
    PowerSeries::new(coeffs)
}

/// `H_g(f)` truncated at `k_out`, together with the moments used.
pub fn apply_hg_detailed(g: &PowerSeries, f: &FunctionSpec, k_out: usize) -> Result<(PowerSeries, MomentSequence)> {
    check_symbol_degree(g, k_out)?;
    let mu = moments(f, k_out)?;
    let out = apply_hg_with_moments(g, &mu, k_out)?;
    Ok((out, mu))
}

/// `H_g(f)(z) = ∫_0^1 f(t) g'(tz) dt`, truncated at `k_out`.
pub fn apply_hg(g: &PowerSeries, f: &FunctionSpec, k_out: usize) -> Result<PowerSeries> {
    apply_hg_detailed(g, f, k_out).map(|(s, _)| s)
}

/// Sublinear operator `H̃(f)(z) = ∫_0^1 |f(t)| / (1 - tz) dt`; coefficient
/// `j` is `∫_0^1 t^j |f(t)| dt`.
pub fn apply_hg_sublinear(f: &PowerSeries, k_out: usize) -> Result<PowerSeries> {
    apply_hg_sublinear_detailed(f, k_out).map(|(s, _)| s)
}

pub fn apply_hg_sublinear_detailed(f: &PowerSeries, k_out: usize) -> Result<(PowerSeries, MomentSequence)> {
    let mu = abs_moments(f, k_out)?;
    let out = PowerSeries::new(mu.values.clone())?;
    Ok((out, mu))
}

/// Outcome of checking `H_g(f)' = H_{g'}(t f)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivativeCheck {
    pub discrepancy: f64,
    /// `ClosedForm` when both sides used closed-form moments.
    pub method: MomentMethod,
}

impl DerivativeCheck {
    /// `1e-9` for closed-form moments, `1e-7` when quadrature was involved.
    pub fn tolerance(&self) -> f64 {
        match self.method {
            MomentMethod::ClosedForm => 1e-9,
            MomentMethod::Quadrature => 1e-7,
        }
    }

    pub fn passes(&self) -> bool {
        self.discrepancy <= self.tolerance()
    }
}

/// Compares the termwise derivative of `H_g(f)` (output degree `k + 1`)
/// with `H_{g'}(t f)` (output degree `k`) and returns the largest
/// coefficient gap. Needs `degree(g) ≥ k + 2`.
pub fn derivative_identity_check(g: &PowerSeries, f: &FunctionSpec, k: usize) -> Result<DerivativeCheck> {
    let lhs = apply_hg(g, f, k + 1)?.derivative();
    let dg = g.derivative();
    let mu_tf = moments_times_t(f, k)?;
    let lhs_method = moments(f, 0)?.method;
    let rhs = apply_hg_with_moments(&dg, &mu_tf, k)?;
    let discrepancy = (0..=k).map(|i| (lhs.coeff(i) - rhs.coeff(i)).norm()).fold(0.0, f64::max);
    let method = if lhs_method == MomentMethod::ClosedForm && mu_tf.method == MomentMethod::ClosedForm {
        MomentMethod::ClosedForm
    } else {
        MomentMethod::Quadrature
    };
    Ok(DerivativeCheck { discrepancy, method })
}
