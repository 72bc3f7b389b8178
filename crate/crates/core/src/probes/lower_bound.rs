use num_complex::Complex64;
use rand::seq::index::sample;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::norms::{space_norm, SpaceParams};
use crate::operators::{polynomial_moments, test_function};
use crate::sampling::stream_rng;
use crate::series::{materialize, PowerSeries};

use super::compactness::family_for;

/// Coordinate-ascent rounds applied to the best starting candidate.
pub const ASCENT_ROUNDS: usize = 20;
/// Coordinates perturbed per ascent round.
pub const ASCENT_COORDS: usize = 16;
/// RNG streams at or above this offset drive the ascent, below it the
/// random trials.
const ASCENT_STREAM: u64 = 1 << 40;
/// Offsets from `1/p` for the power-law inputs, which approach the extremal
/// direction of Hilbert-type matrices as the truncation grows.
const POWER_LAW_SHIFTS: [f64; 6] = [0.0, 0.02, 0.05, 0.1, 0.2, 0.4];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum CandidateSource {
    Monomial { m: usize },
    TestFamily { n: u64 },
    /// `a_k = (k+1)^{-exponent}`
    PowerLaw { exponent: f64 },
    Random { trial: usize },
    Zero,
}

/// `max ‖H_g f‖_S / ‖f‖_S` over the searched inputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LowerBound {
    pub value: f64,
    /// Inputs have degree below this, outputs are truncated to degree one less.
    pub truncation: usize,
    /// Where the ascent started.
    pub start: CandidateSource,
    /// Ratio at the start, before coordinate ascent.
    pub start_value: f64,
    pub evaluations: usize,
}

struct Evaluator<'a> {
    row_factors: Vec<Complex64>,
    space: &'a SpaceParams,
}

impl Evaluator<'_> {
    fn size(&self) -> usize {
        self.row_factors.len()
    }

    fn ratio_with_moments(&self, f: &[Complex64], mu: &[Complex64]) -> Result<f64> {
        let input = PowerSeries::new(f.to_vec())?;
        let den = space_norm(&input, self.space)?;
        if den == 0.0 {
            return Ok(0.0);
        }
        let out: Vec<Complex64> = self.row_factors.iter().zip(mu).map(|(d, m)| d * m).collect();
        Ok(space_norm(&PowerSeries::new(out)?, self.space)? / den)
    }

    fn ratio(&self, f: &PowerSeries) -> Result<f64> {
        let f = f.truncate(self.size() - 1);
        let mu = polynomial_moments(&f, self.size() - 1).values;
        self.ratio_with_moments(f.coeffs(), &mu)
    }
}

fn candidates(n: usize, space: &SpaceParams, budget: usize) -> Vec<CandidateSource> {
    let mut out: Vec<CandidateSource> = (0..n.min(4)).map(|m| CandidateSource::Monomial { m }).collect();
    let mut m = 4;
    while m < n {
        out.push(CandidateSource::Monomial { m });
        m *= 2;
    }
    if family_for(space).is_some() {
        let mut big_n = 1u64;
        while big_n as usize <= n {
            out.push(CandidateSource::TestFamily { n: big_n });
            big_n *= 2;
        }
    }
    let base = 1.0 / space.p;
    for shift in POWER_LAW_SHIFTS {
        out.push(CandidateSource::PowerLaw { exponent: base + shift });
    }
    out.extend((0..budget).map(|trial| CandidateSource::Random { trial }));
    out
}

fn build(source: CandidateSource, degree: usize, space: &SpaceParams, seed: u64) -> Result<PowerSeries> {
    let one = Complex64::new(1.0, 0.0);
    match source {
        CandidateSource::Monomial { m } => Ok(PowerSeries::monomial(m, one).truncate(degree.max(m))),
        CandidateSource::TestFamily { n } => {
            let (family, alpha) = family_for(space).expect("family checked when listing candidates");
            materialize(&test_function(family, n, space.p, alpha)?, degree)
        }
        CandidateSource::PowerLaw { exponent } => {
            PowerSeries::from_real(&(0..=degree).map(|k| ((k + 1) as f64).powf(-exponent)).collect::<Vec<_>>())
        }
        CandidateSource::Random { trial } => {
            let mut rng = stream_rng(seed, trial as u64);
            let damping: f64 = rng.gen_range(0.0..1.5);
            let coeffs = (0..=degree)
                .map(|k| {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    Complex64::new(re, im) * ((k + 1) as f64).powf(-damping)
                })
                .collect();
            PowerSeries::new(coeffs)
        }
        CandidateSource::Zero => Ok(PowerSeries::zeros(degree)),
    }
}

/// Lower bound for the norm of `H_g` on `S` restricted to polynomials of
/// degree below `n = degree(g)`, with outputs truncated to degree `n - 1`.
///
/// Inputs searched: monomials, the `f_N` family matched to `S`, power laws
/// `(k+1)^{-s}` with `s` near `1/p`, `budget` random damped polynomials,
/// then coordinate ascent from the best of them.
/// Trial `i` draws from RNG stream `i` under `seed`, so the result does not
/// depend on the number of worker threads.
pub fn norm_lower_bound(g: &PowerSeries, space: &SpaceParams, budget: usize, seed: u64) -> Result<LowerBound> {
    space.check_operator_admissible()?;
    let n = g.degree();
    if n == 0 || g.is_zero() {
        return Ok(LowerBound { value: 0.0, truncation: n, start: CandidateSource::Zero, start_value: 0.0, evaluations: 0 });
    }
    let ev = Evaluator { row_factors: (0..n).map(|k| (k + 1) as f64 * g.coeff(k + 1)).collect(), space };
    let degree = n - 1;

    let sources = candidates(n, space, budget);
    let ratios = sources
        .par_iter()
        .map(|&src| build(src, degree, space, seed).and_then(|f| ev.ratio(&f)))
        .collect::<Result<Vec<f64>>>()?;
    let mut evaluations = ratios.len();
    let (best_idx, &start_value) = ratios
        .iter()
        .enumerate()
        .fold((0, &f64::NEG_INFINITY), |acc, (i, r)| if *r > *acc.1 { (i, r) } else { acc });
    let start = sources[best_idx];

    let mut f: Vec<Complex64> = build(start, degree, space, seed)?.truncate(degree).into_coeffs();
    let mut mu = polynomial_moments(&PowerSeries::new(f.clone())?, degree).values;
    let mut best = start_value;
    let mut step = 0.25 * f.iter().fold(0.0_f64, |m, c| m.max(c.norm()));
    let dirs = [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0)];
    for round in 0..ASCENT_ROUNDS {
        let mut rng = stream_rng(seed, ASCENT_STREAM + round as u64);
        let coords = sample(&mut rng, n, ASCENT_COORDS.min(n)).into_vec();
        let mut improved = false;
        for m in coords {
            let trial = dirs
                .iter()
                .map(|&dir| {
                    let delta = dir * step;
                    let mut ft = f.clone();
                    ft[m] += delta;
                    let mt: Vec<Complex64> =
                        mu.iter().enumerate().map(|(k, v)| v + delta / (k + m + 1) as f64).collect();
                    ev.ratio_with_moments(&ft, &mt).map(|r| (r, ft, mt))
                })
                .collect::<Result<Vec<_>>>()?;
            evaluations += trial.len();
            for (r, ft, mt) in trial {
                if r > best {
                    best = r;
                    f = ft;
                    mu = mt;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    Ok(LowerBound { value: best, truncation: n, start, start_value, evaluations })
}
