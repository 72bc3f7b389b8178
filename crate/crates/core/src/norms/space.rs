use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use super::{SpaceKind, SpaceParams};
use crate::error::{domain, Result};
use crate::fourier::{mean_samples, sample_circle, sup_samples};
use crate::quadrature::{geometric_breakpoints_left, integrate, jacobi_unit, QuadOptions};
use crate::series::{dyadic_block_shifted, DyadicBlockIndex, PowerSeries};
use crate::stats::pairwise_sum;

/// Relative change between successive radial node doublings that counts as
/// converged.
pub const RADIAL_REL_TOL: f64 = 1e-9;
const MIN_RADIAL_NODES: usize = 64;
const MAX_RADIAL_NODES: usize = 8192;

fn check_p(p: f64) -> Result<()> {
    if !(p.is_finite() && p > 0.0) {
        return domain(format!("exponent p must be positive and finite, got {p}"));
    }
    Ok(())
}

/// `M_p(r, f)` by uniform angular sampling (always the FFT route).
pub fn integral_mean_sampled(f: &PowerSeries, r: f64, p: f64) -> Result<f64> {
    check_p(p)?;
    if !(0.0..=1.0).contains(&r) {
        return domain(format!("radius must lie in [0, 1], got {r}"));
    }
    Ok(mean_pth_power(f, r, p).powf(1.0 / p))
}

/// `|z|^p` from `|z|^2`. Quarter powers avoid `powf` when `2p` is a small
/// integer, which covers the common exponents.
fn modulus_pow(norm_sqr: f64, p: f64) -> f64 {
    let twice = 2.0 * p;
    if twice.fract() == 0.0 && twice <= 16.0 {
        norm_sqr.sqrt().sqrt().powi(twice as i32)
    } else {
        norm_sqr.powf(0.5 * p)
    }
}

/// `M_p(r,f)^p` from `mean_samples` angular points.
fn mean_pth_power(f: &PowerSeries, r: f64, p: f64) -> f64 {
    if f.degree() == 0 {
        return f.coeff(0).norm().powf(p);
    }
    let m = mean_samples(f.degree(), p);
    let vals: Vec<f64> = sample_circle(f, r, m).iter().map(|v| modulus_pow(v.norm_sqr(), p)).collect();
    pairwise_sum(&vals) / m as f64
}

/// `M_2(r,f)^2 = Σ |a_k|^2 r^{2k}`.
fn parseval_sq(f: &PowerSeries, r: f64) -> f64 {
    let r2 = r * r;
    let mut pow = 1.0;
    let terms: Vec<f64> = f
        .coeffs()
        .iter()
        .map(|c| {
            let v = c.norm_sqr() * pow;
            pow *= r2;
            v
        })
        .collect();
    pairwise_sum(&terms)
}

/// The integral mean `M_p(r, f)`. Exact (Parseval) for `p = 2`; otherwise
/// sampled at `≥ 4(K+1)` equispaced angles.
pub fn integral_mean(f: &PowerSeries, r: f64, p: f64) -> Result<f64> {
    check_p(p)?;
    if !(0.0..=1.0).contains(&r) {
        return domain(format!("radius must lie in [0, 1], got {r}"));
    }
    if p == 2.0 {
        return Ok(parseval_sq(f, r).sqrt());
    }
    Ok(mean_pth_power(f, r, p).powf(1.0 / p))
}

/// `‖f‖_{H^p}`, the boundary mean of the polynomial.
pub fn hardy_norm(f: &PowerSeries, p: f64) -> Result<f64> {
    integral_mean(f, 1.0, p)
}

/// `‖z^k‖^2_{A^2_α} = k! Γ(α+2) / Γ(k+α+2)`.
pub fn bergman_monomial_norm_sq(k: usize, alpha: f64) -> f64 {
    let kf = k as f64;
    (ln_gamma(kf + 1.0) + ln_gamma(alpha + 2.0) - ln_gamma(kf + alpha + 2.0)).exp()
}

/// A norm value with the resolutions used to compute it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormEvaluation {
    pub value: f64,
    /// Angular samples per circle (0 when an exact coefficient formula was used).
    pub angular_samples: usize,
    /// Radial Gauss-Jacobi nodes in the accepted rule, if any.
    pub radial_nodes: Option<usize>,
    /// Relative change at the last node doubling.
    pub radial_rel_change: Option<f64>,
    pub converged: bool,
}

impl NormEvaluation {
    fn exact(value: f64) -> Self {
        Self { value, angular_samples: 0, radial_nodes: None, radial_rel_change: None, converged: true }
    }
}

/// `(α+1) ∫_D |f|^p (1-|z|^2)^α dA`, i.e. `‖f‖^p_{A^p_α}`.
fn bergman_pth_power(f: &PowerSeries, p: f64, alpha: f64) -> Result<NormEvaluation> {
    if p == 2.0 {
        let terms: Vec<f64> = f
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| c.norm_sqr() * bergman_monomial_norm_sq(k, alpha))
            .collect();
        return Ok(NormEvaluation::exact(pairwise_sum(&terms)));
    }
    if f.degree() == 0 {
        return Ok(NormEvaluation::exact(f.coeff(0).norm().powf(p)));
    }
    // With u = r^2 the area integral becomes ∫_0^1 M_p^p(√u) (1-u)^α du.
    let radial = |n: usize| -> Result<f64> {
        let rule = jacobi_unit(n, alpha)?;
        let vals: Vec<f64> = rule
            .nodes
            .par_iter()
            .zip(rule.weights.par_iter())
            .map(|(&u, &w)| w * mean_pth_power(f, u.sqrt(), p))
            .collect();
        Ok((alpha + 1.0) * pairwise_sum(&vals))
    };
    // Gauss-Jacobi nodes cluster like n^{-2} at u = 1, where M_p(√u) varies
    // on the scale 1/K, so about √K nodes resolve the radial profile.
    let degree_hint = (4.0 * ((f.degree() + 1) as f64).sqrt()).ceil() as usize;
    let mut n = MIN_RADIAL_NODES.max(degree_hint.next_power_of_two());
    let mut prev = radial(n)?;
    loop {
        let next_n = 2 * n;
        let cur = radial(next_n)?;
        let change = if cur == 0.0 { 0.0 } else { ((cur - prev) / cur).abs() };
        if change < RADIAL_REL_TOL || next_n >= MAX_RADIAL_NODES {
            return Ok(NormEvaluation {
                value: cur,
                angular_samples: mean_samples(f.degree(), p),
                radial_nodes: Some(next_n),
                radial_rel_change: Some(change),
                converged: change < RADIAL_REL_TOL,
            });
        }
        prev = cur;
        n = next_n;
    }
}

/// Norm in `S` with diagnostics. Hardy norms are boundary means; Bergman
/// norms use Gauss-Jacobi radial quadrature (node doubling to a relative
/// change below [`RADIAL_REL_TOL`]); Dirichlet-type norms combine `|f(0)|^p`
/// with the Bergman norm of `f'`.
pub fn space_norm_detailed(f: &PowerSeries, s: &SpaceParams) -> Result<NormEvaluation> {
    s.validate()?;
    let p = s.p;
    match s.kind {
        SpaceKind::Hardy => {
            let value = hardy_norm(f, p)?;
            let samples = if p == 2.0 { 0 } else { mean_samples(f.degree(), p) };
            Ok(NormEvaluation { angular_samples: samples, ..NormEvaluation::exact(value) })
        }
        SpaceKind::Bergman => {
            let e = bergman_pth_power(f, p, s.alpha)?;
            Ok(NormEvaluation { value: e.value.powf(1.0 / p), ..e })
        }
        SpaceKind::DirichletType => {
            let e = bergman_pth_power(&f.derivative(), p, s.alpha)?;
            let total = f.coeff(0).norm().powf(p) + e.value;
            Ok(NormEvaluation { value: total.powf(1.0 / p), ..e })
        }
    }
}

/// `‖f‖_S`. See [`space_norm_detailed`] for resolutions and convergence.
pub fn space_norm(f: &PowerSeries, s: &SpaceParams) -> Result<f64> {
    space_norm_detailed(f, s).map(|e| e.value)
}

/// `(|f(0)|^p + Σ_n 2^{-n(β+1)} ‖Δ_n f‖^p_{H^p})^{1/p}` over the blocks that
/// meet `[1, degree]`.
pub fn decomposition_norm(f: &PowerSeries, p: f64, beta: f64) -> Result<f64> {
    if !(p > 1.0 && p.is_finite()) {
        return domain(format!("decomposition norm needs p > 1, got {p}"));
    }
    if !(beta > -1.0 && beta.is_finite()) {
        return domain(format!("decomposition norm needs β > -1, got {beta}"));
    }
    let mut terms = vec![f.coeff(0).norm().powf(p)];
    for n in DyadicBlockIndex::covering(f.degree()) {
        let block = dyadic_block_shifted(f, n);
        let norm = hardy_norm(&block, p)?;
        terms.push(2f64.powf(-(n.0 as f64) * (beta + 1.0)) * norm.powf(p));
    }
    Ok(pairwise_sum(&terms).powf(1.0 / p))
}

/// `K_p(f) = Σ_{k ≤ K} (k+1)^{p-2} |a_k|^p`.
pub fn k_p_functional(f: &PowerSeries, p: f64) -> Result<f64> {
    if !(p >= 1.0 && p.is_finite()) {
        return domain(format!("K_p needs p >= 1, got {p}"));
    }
    let terms: Vec<f64> = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| ((k + 1) as f64).powf(p - 2.0) * c.norm().powf(p))
        .collect();
    Ok(pairwise_sum(&terms))
}

/// `M_∞(r, f)` from `≥ 8(K+1)` angular samples.
pub fn sup_mean(f: &PowerSeries, r: f64) -> f64 {
    if f.degree() == 0 {
        return f.coeff(0).norm();
    }
    sample_circle(f, r, sup_samples(f.degree())).iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// `∫_0^1 M_∞^p(r, f) (1-r)^w dr` by adaptive quadrature on panels refined
/// geometrically toward `r = 1`.
pub fn sup_mean_weighted_integral(f: &PowerSeries, p: f64, w: f64) -> Result<f64> {
    check_p(p)?;
    if !(w > -1.0 && w.is_finite()) {
        return domain(format!("radial weight exponent must exceed -1, got {w}"));
    }
    // in x = 1 - r the weight is x^w and the refinement sits at x = 0
    let bp = geometric_breakpoints_left(0.0, 1.0, 60);
    let opts = QuadOptions { abs_tol: 1e-12, rel_tol: 1e-10, max_panels: 4000 };
    let r = integrate(|x| sup_mean(f, 1.0 - x).powf(p) * x.powf(w), &bp, &opts);
    Ok(r.value)
}
