use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::space::hardy_norm;
use crate::error::{domain, precondition, Result};
use crate::series::{dyadic_block_shifted, DyadicBlockIndex, PowerSeries};
use crate::stats::least_squares;

/// Default tolerance on the fitted exponent.
pub const DEFAULT_TAU: f64 = 0.1;

/// Relative drop per block required by the little-oh trend. Normalized
/// block norms of symbols on the `O` boundary (the log kernel for `p > 2`)
/// settle from above by far less than this.
pub const DECREASE_MARGIN: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockNorm {
    pub n: u32,
    /// `‖Δ_n g'‖_{H^p}`
    pub block_norm: f64,
    /// `block_norm · 2^{-n(1-1/p)}`
    pub normalized: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LipschitzVerdict {
    /// Normalized block norms decrease at the top of the range.
    LittleOhCandidate,
    /// Growth exponent within tolerance of `1 - 1/p`.
    LambdaCandidate,
    NotLambda,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LipschitzProfile {
    pub p: f64,
    pub tau: f64,
    pub blocks: Vec<BlockNorm>,
    /// Least-squares slope of `ln β_n` against `n ln 2`. `None` when fewer
    /// than two blocks are nonzero.
    pub sigma: Option<f64>,
    pub lambda_candidate: bool,
    pub little_oh_candidate: bool,
    pub verdict: LipschitzVerdict,
}

impl LipschitzProfile {
    /// The critical exponent `1 - 1/p`.
    pub fn target(&self) -> f64 {
        1.0 - 1.0 / self.p
    }

    /// CSV with header `n,block_norm,normalized`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,block_norm,normalized\n");
        for b in &self.blocks {
            let _ = writeln!(out, "{},{:e},{:e}", b.n, b.block_norm, b.normalized);
        }
        out
    }

    /// `{sigma, tau, verdict}`.
    pub fn report_json(&self) -> serde_json::Value {
        serde_json::json!({ "sigma": self.sigma, "tau": self.tau, "verdict": self.verdict })
    }
}

/// Block profile of `g'` over `n_min..=n_max` and the resulting
/// `Λ(p, 1/p)` diagnostics.
///
/// The `Λ` test is one-sided: a fitted exponent at or below `1 - 1/p + τ`
/// is a candidate, since smoother symbols belong to the class as well.
pub fn lipschitz_profile(g: &PowerSeries, p: f64, n_min: u32, n_max: u32, tau: f64) -> Result<LipschitzProfile> {
    if !(p > 1.0 && p.is_finite()) {
        return domain(format!("profile needs p > 1, got {p}"));
    }
    if !(tau >= 0.0 && tau.is_finite()) {
        return domain(format!("tolerance must be nonnegative, got {tau}"));
    }
    if n_max < n_min || n_max - n_min < 3 {
        return precondition(format!("need at least four blocks, got n in {n_min}..={n_max}"));
    }
    if n_max >= 40 {
        return precondition(format!("block index {n_max} is beyond any representable truncation"));
    }
    let needed = 1usize << (n_max + 1);
    if g.degree() < needed {
        return precondition(format!("degree of g is {} but blocks up to {n_max} need degree {needed}", g.degree()));
    }
    let target = 1.0 - 1.0 / p;
    let dg = g.derivative();
    let blocks = (n_min..=n_max)
        .map(|n| {
            let block = dyadic_block_shifted(&dg, DyadicBlockIndex(n));
            let norm = hardy_norm(&block, p)?;
            Ok(BlockNorm { n, block_norm: norm, normalized: norm * 2f64.powf(-(n as f64) * target) })
        })
        .collect::<Result<Vec<_>>>()?;

    let (xs, ys): (Vec<f64>, Vec<f64>) = blocks
        .iter()
        .filter(|b| b.block_norm > 0.0)
        .map(|b| (b.n as f64 * std::f64::consts::LN_2, b.block_norm.ln()))
        .unzip();
    let sigma = least_squares(&xs, &ys).map(|(_, slope)| slope);
    // Without two nonzero blocks there is no growth to measure.
    let lambda_candidate = sigma.is_none_or(|s| s <= target + tau);
    let tail = &blocks[blocks.len() - 3..];
    let little_oh_candidate = tail.windows(2).all(|w| {
        let (a, b) = (w[0].normalized, w[1].normalized);
        (a == 0.0 && b == 0.0) || b < a * (1.0 - DECREASE_MARGIN)
    });
    let verdict = if lambda_candidate && little_oh_candidate {
        LipschitzVerdict::LittleOhCandidate
    } else if lambda_candidate {
        LipschitzVerdict::LambdaCandidate
    } else {
        LipschitzVerdict::NotLambda
    };
    Ok(LipschitzProfile { p, tau, blocks, sigma, lambda_candidate, little_oh_candidate, verdict })
}
