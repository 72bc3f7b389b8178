use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{precondition, HgError, Result};
use crate::series::PowerSeries;

/// Relative change in the Rayleigh quotient that stops power iteration.
pub const POWER_REL_TOL: f64 = 1e-10;
/// Iteration cap for power iteration.
pub const POWER_MAX_ITER: usize = 100_000;

/// A finite matrix acting on `C^cols`.
pub trait LinearMap: Sync {
    fn rows(&self) -> usize;
    fn cols(&self) -> usize;
    fn apply(&self, x: &[Complex64]) -> Vec<Complex64>;
    fn apply_adjoint(&self, y: &[Complex64]) -> Vec<Complex64>;
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Self {
        assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data: data.iter().map(|&v| Complex64::new(v, 0.0)).collect() }
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }
}

impl LinearMap for DenseMatrix {
    fn rows(&self) -> usize {
        self.rows
    }
    fn cols(&self) -> usize {
        self.cols
    }
    fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.data.par_chunks(self.cols).map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }
    fn apply_adjoint(&self, y: &[Complex64]) -> Vec<Complex64> {
        (0..self.cols)
            .into_par_iter()
            .map(|j| (0..self.rows).map(|i| self.get(i, j).conj() * y[i]).sum())
            .collect()
    }
}

/// The `N×N` section `M_{k,n} = (k+1) b_{k+1} / (n+k+1)` of `H_g`, stored as
/// the row factors `d_k = (k+1) b_{k+1}` times the Hilbert matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedMatrix {
    row_factors: Vec<Complex64>,
}

impl TruncatedMatrix {
    pub fn size(&self) -> usize {
        self.row_factors.len()
    }

    pub fn entry(&self, k: usize, n: usize) -> Complex64 {
        self.row_factors[k] / (n + k + 1) as f64
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.size();
        let data = (0..n * n).map(|i| self.entry(i / n, i % n)).collect();
        DenseMatrix { rows: n, cols: n, data }
    }
}

impl LinearMap for TruncatedMatrix {
    fn rows(&self) -> usize {
        self.size()
    }
    fn cols(&self) -> usize {
        self.size()
    }
    fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.size();
        let inv: Vec<f64> = (0..2 * n).map(|m| 1.0 / (m + 1) as f64).collect();
        (0..n)
            .into_par_iter()
            .map(|k| {
                let s: Complex64 = x.iter().zip(&inv[k..k + n]).map(|(v, h)| v * h).sum();
                self.row_factors[k] * s
            })
            .collect()
    }
    fn apply_adjoint(&self, y: &[Complex64]) -> Vec<Complex64> {
        let n = self.size();
        let inv: Vec<f64> = (0..2 * n).map(|m| 1.0 / (m + 1) as f64).collect();
        let scaled: Vec<Complex64> = y.iter().zip(&self.row_factors).map(|(v, d)| d.conj() * v).collect();
        (0..n)
            .into_par_iter()
            .map(|j| scaled.iter().zip(&inv[j..j + n]).map(|(v, h)| v * h).sum())
            .collect()
    }
}

/// The section of size `n` of the coefficient matrix of `H_g`; requires
/// `degree(g) ≥ n`.
pub fn truncated_matrix(g: &PowerSeries, n: usize) -> Result<TruncatedMatrix> {
    if n == 0 {
        return precondition("matrix size must be at least 1");
    }
    if g.degree() < n {
        return precondition(format!("a section of size {n} needs degree(g) >= {n}, got {}", g.degree()));
    }
    Ok(TruncatedMatrix { row_factors: (0..n).map(|k| (k + 1) as f64 * g.coeff(k + 1)).collect() })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralNorm {
    pub value: f64,
    pub iterations: usize,
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
}

/// Largest singular value by power iteration on `M* M` from the normalized
/// all-ones vector.
pub fn l2_operator_norm<M: LinearMap + ?Sized>(m: &M) -> Result<SpectralNorm> {
    let n = m.cols();
    if n == 0 || m.rows() == 0 {
        return Ok(SpectralNorm { value: 0.0, iterations: 0 });
    }
    let mut v = vec![Complex64::new(1.0 / (n as f64).sqrt(), 0.0); n];
    let mut lambda = 0.0;
    for it in 1..=POWER_MAX_ITER {
        let w = m.apply_adjoint(&m.apply(&v));
        let rayleigh: f64 = v.iter().zip(&w).map(|(a, b)| (a.conj() * b).re).sum();
        let wn = norm(&w);
        if wn == 0.0 {
            return Ok(SpectralNorm { value: 0.0, iterations: it });
        }
        let done = (rayleigh - lambda).abs() <= POWER_REL_TOL * rayleigh;
        lambda = rayleigh;
        if done {
            return Ok(SpectralNorm { value: lambda.max(0.0).sqrt(), iterations: it });
        }
        v = w.into_iter().map(|x| x / wn).collect();
    }
    Err(HgError::NonConvergence(format!(
        "power iteration did not settle within {POWER_MAX_ITER} iterations"
    )))
}
