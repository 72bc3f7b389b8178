use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{domain, precondition, Result};
use crate::series::PowerSeries;
use crate::stats::least_squares;

/// Hilbert spaces for the Hilbert-Schmidt test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "space", rename_all = "snake_case")]
pub enum HsSpace {
    H2,
    /// `A^2_α` with `-1 < α < 0`.
    Bergman { alpha: f64 },
    /// `D^2_α` with `0 < α ≤ 1`.
    Dirichlet { alpha: f64 },
}

impl HsSpace {
    fn validate(&self) -> Result<()> {
        match *self {
            HsSpace::H2 => Ok(()),
            HsSpace::Bergman { alpha } if alpha > -1.0 && alpha < 0.0 => Ok(()),
            HsSpace::Dirichlet { alpha } if alpha > 0.0 && alpha <= 1.0 => Ok(()),
            HsSpace::Bergman { alpha } => domain(format!("Bergman weight must lie in (-1, 0), got {alpha}")),
            HsSpace::Dirichlet { alpha } => domain(format!("Dirichlet weight must lie in (0, 1], got {alpha}")),
        }
    }

    /// `1/‖z^n‖^2` in the space.
    fn inverse_basis_norm_sq(&self, n: usize) -> f64 {
        let nf = n as f64;
        match *self {
            HsSpace::H2 => 1.0,
            // ‖z^n‖^2_{A^2_α} = n! Γ(2+α) / Γ(n+2+α)
            HsSpace::Bergman { alpha } => (ln_gamma(nf + 2.0 + alpha) - ln_gamma(nf + 1.0) - ln_gamma(2.0 + alpha)).exp(),
            // ‖z^n‖^2_{D^2_α} = n^2 ‖z^{n-1}‖^2_{A^2_α}, and 1 at n = 0
            HsSpace::Dirichlet { alpha } => {
                if n == 0 {
                    1.0
                } else {
                    (ln_gamma(nf + 1.0 + alpha) - ln_gamma(nf) - ln_gamma(2.0 + alpha)).exp() / (nf * nf)
                }
            }
        }
    }
}

/// Partial Hilbert-Schmidt sums `S_1..S_K` with a growth diagnostic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HsSeries {
    pub space: HsSpace,
    /// `partial_sums[K-1] = S_K`.
    pub partial_sums: Vec<f64>,
    /// Slope `B` of `S_K ≈ A + B ln K` over the last decade of cutoffs.
    pub log_growth: Option<f64>,
    /// `S_K - S_{K/2}`.
    pub tail_increment: f64,
}

impl HsSeries {
    pub fn at(&self, k: usize) -> f64 {
        self.partial_sums[k - 1]
    }

    pub fn last(&self) -> f64 {
        *self.partial_sums.last().expect("at least one partial sum")
    }

    /// CSV with header `K,partial_sum`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("K,partial_sum\n");
        for (i, s) in self.partial_sums.iter().enumerate() {
            let _ = writeln!(out, "{},{:e}", i + 1, s);
        }
        out
    }
}

/// Partial sums of `Σ_n ‖H_g(e_n)‖^2` over an orthonormal monomial basis,
/// truncated to `n, k < K` for each cutoff `K = 1..=cutoff`.
///
/// On `H^2` this is `Σ_{k<K} (k+1) |b_{k+1}|^2`.
pub fn hs_sum(g: &PowerSeries, space: HsSpace, cutoff: usize) -> Result<HsSeries> {
    space.validate()?;
    if cutoff == 0 {
        return precondition("cutoff must be at least 1");
    }
    if cutoff + 1 > g.degree() {
        return precondition(format!("cutoff {cutoff} needs symbol degree {}, got {}", cutoff + 1, g.degree()));
    }
    let sums = match space {
        HsSpace::H2 => {
            let mut s = 0.0;
            (0..cutoff)
                .map(|k| {
                    s += (k + 1) as f64 * g.coeff(k + 1).norm_sqr();
                    s
                })
                .collect()
        }
        _ => double_sums(g, &space, cutoff),
    };
    Ok(summarize(space, sums))
}

/// `T(n,k) = w_n c_k / (n+k+1)^2` with `w_n = 1/‖z^n‖^2` and
/// `c_k = (k+1)^2 |b_{k+1}|^2 ‖z^k‖^2`; each cutoff adds the new row and column.
fn double_sums(g: &PowerSeries, space: &HsSpace, cutoff: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..cutoff).map(|n| space.inverse_basis_norm_sq(n)).collect();
    let c: Vec<f64> = (0..cutoff)
        .map(|k| ((k + 1) as f64).powi(2) * g.coeff(k + 1).norm_sqr() / w[k])
        .collect();
    let mut total = 0.0;
    let mut out = Vec::with_capacity(cutoff);
    for m in 0..cutoff {
        // row n = m over k ≤ m, column k = m over n < m
        let mut row = 0.0;
        for (k, ck) in c[..=m].iter().enumerate() {
            let d = (m + k + 1) as f64;
            row += ck / (d * d);
        }
        let mut col = 0.0;
        if c[m] != 0.0 {
            for (n, wn) in w[..m].iter().enumerate() {
                let d = (n + m + 1) as f64;
                col += wn / (d * d);
            }
        }
        total += w[m] * row + c[m] * col;
        out.push(total);
    }
    out
}

fn summarize(space: HsSpace, sums: Vec<f64>) -> HsSeries {
    let k = sums.len();
    let lo = (k / 10).max(1);
    let (xs, ys): (Vec<f64>, Vec<f64>) = (lo..=k).map(|i| ((i as f64).ln(), sums[i - 1])).unzip();
    let log_growth = least_squares(&xs, &ys).map(|(_, b)| b);
    let half = (k / 2).max(1);
    let tail_increment = sums[k - 1] - sums[half - 1];
    HsSeries { space, partial_sums: sums, log_growth, tail_increment }
}
