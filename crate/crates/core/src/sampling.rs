//! Seeded random polynomials for the invariant suites.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::series::PowerSeries;

/// Generator for complex Gaussian polynomials. Sample `i` draws from its own
/// stream, so samples can be produced in any order or in parallel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomPolySampler {
    pub seed: u64,
    /// Coefficient `k` is scaled by `(k+1)^{-damping}`.
    pub damping: f64,
}

impl RandomPolySampler {
    pub fn new(seed: u64, damping: f64) -> Self {
        Self { seed, damping }
    }

    pub fn rng(&self, index: u64) -> ChaCha8Rng {
        stream_rng(self.seed, index)
    }

    /// Sample `index` with the given degree; coefficients have unit
    /// expected modulus squared before damping.
    pub fn sample(&self, index: u64, degree: usize) -> PowerSeries {
        let mut rng = self.rng(index);
        let scale = std::f64::consts::FRAC_1_SQRT_2;
        let coeffs = (0..=degree)
            .map(|k| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                let d = ((k + 1) as f64).powf(-self.damping);
                Complex64::new(re, im) * (scale * d)
            })
            .collect();
        PowerSeries::new(coeffs).expect("gaussian samples are finite")
    }

    /// Like [`sample`](Self::sample) with real coefficients.
    pub fn sample_real(&self, index: u64, degree: usize) -> PowerSeries {
        let mut rng = self.rng(index);
        let coeffs: Vec<f64> = (0..=degree)
            .map(|k| {
                let x: f64 = StandardNormal.sample(&mut rng);
                x * ((k + 1) as f64).powf(-self.damping)
            })
            .collect();
        PowerSeries::from_real(&coeffs).expect("gaussian samples are finite")
    }
}

/// Independent ChaCha stream `index` under `seed`.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
