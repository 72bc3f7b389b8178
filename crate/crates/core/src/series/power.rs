use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{HgError, Result};

/// Truncated Taylor series `a_0 + a_1 z + ... + a_K z^K`.
///
/// The degree is the index of the last stored coefficient; trailing zeros are
/// kept so that the truncation level is always explicit.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<Complex64>,
}

impl PowerSeries {
    /// Builds a series from its coefficients. Fails on an empty vector or on
    /// non-finite entries.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(HgError::Domain("a series needs at least one coefficient".into()));
        }
        if let Some(k) = coeffs.iter().position(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(HgError::Domain(format!("coefficient {k} is not finite")));
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// The zero series of degree `degree`.
    pub fn zeros(degree: usize) -> Self {
        Self { coeffs: vec![Complex64::new(0.0, 0.0); degree + 1] }
    }

    /// `c z^m` stored with degree `m`.
    pub fn monomial(m: usize, c: Complex64) -> Self {
        let mut s = Self::zeros(m);
        s.coeffs[m] = c;
        s
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient `k`, zero past the truncation degree.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm_sqr() == 0.0)
    }

    /// Same function stored with a different truncation degree (pads with
    /// zeros or drops the tail).
    pub fn truncate(&self, degree: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(degree + 1, Complex64::default());
        Self { coeffs }
    }

    /// Termwise derivative; degree drops by one (a constant stays degree 0).
    pub fn derivative(&self) -> Self {
        if self.degree() == 0 {
            return Self::zeros(0);
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(k, &c)| c * (k + 1) as f64)
            .collect();
        Self { coeffs }
    }

    /// Multiplication by `z^shift`.
    pub fn shift_up(&self, shift: usize) -> Self {
        let mut coeffs = vec![Complex64::default(); shift];
        coeffs.extend_from_slice(&self.coeffs);
        Self { coeffs }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|&a| a * c).collect() }
    }

    /// `alpha * self + beta * other`, degree is the larger of the two.
    pub fn linear_combination(&self, alpha: Complex64, other: &Self, beta: Complex64) -> Self {
        let degree = self.degree().max(other.degree());
        let coeffs = (0..=degree)
            .map(|k| alpha * self.coeff(k) + beta * other.coeff(k))
            .collect();
        Self { coeffs }
    }

    /// Evaluates at a point by Horner's rule.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::default(), |acc, &c| acc * z + c)
    }

    /// Evaluates at a real point.
    pub fn eval_real(&self, t: f64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::default(), |acc, &c| acc * t + c)
    }

    /// Coefficients `a_k r^k`, i.e. the dilation `f(r z)`.
    pub fn dilate(&self, r: f64) -> Self {
        let mut pow = 1.0;
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| {
                let v = c * pow;
                pow *= r;
                v
            })
            .collect();
        Self { coeffs }
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `(sum |a_k|^2)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        crate::stats::pairwise_sum(&self.coeffs.iter().map(|c| c.norm_sqr()).collect::<Vec<_>>()).sqrt()
    }

    /// Serializes to the shared `{"degree", "re", "im"}` schema.
    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            degree: self.degree(),
            re: self.coeffs.iter().map(|c| c.re).collect(),
            im: self.coeffs.iter().map(|c| c.im).collect(),
        }
    }
}

/// Wire form of a [`PowerSeries`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub degree: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl TryFrom<SeriesJson> for PowerSeries {
    type Error = HgError;

    fn try_from(j: SeriesJson) -> Result<Self> {
        if j.re.len() != j.degree + 1 || j.im.len() != j.degree + 1 {
            return Err(HgError::Parse(format!(
                "series of degree {} needs {} coefficients, got re={} im={}",
                j.degree,
                j.degree + 1,
                j.re.len(),
                j.im.len()
            )));
        }
        PowerSeries::new(j.re.into_iter().zip(j.im).map(|(re, im)| Complex64::new(re, im)).collect())
    }
}

impl Serialize for PowerSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for PowerSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = SeriesJson::deserialize(d)?;
        PowerSeries::try_from(j).map_err(serde::de::Error::custom)
    }
}

/// Coefficient indices `[2^n, 2^{n+1} - 1]` of the `n`-th dyadic block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DyadicBlockIndex(pub u32);

impl DyadicBlockIndex {
    pub fn start(self) -> usize {
        1usize << self.0
    }

    pub fn end_inclusive(self) -> usize {
        (1usize << (self.0 + 1)) - 1
    }

    pub fn range(self) -> std::ops::RangeInclusive<usize> {
        self.start()..=self.end_inclusive()
    }

    /// Blocks meeting `[1, degree]`.
    pub fn covering(degree: usize) -> impl Iterator<Item = DyadicBlockIndex> {
        let count = if degree == 0 { 0 } else { usize::BITS - degree.leading_zeros() };
        (0..count).map(DyadicBlockIndex)
    }
}

/// The block `Δ_n f`: coefficients of `f` on `I(n)`, zero elsewhere. The
/// result has degree `2^{n+1} - 1` (or the degree of `f`, if smaller, when
/// the block is empty).
pub fn dyadic_block(f: &PowerSeries, n: DyadicBlockIndex) -> PowerSeries {
    if n.start() > f.degree() {
        return PowerSeries::zeros(f.degree());
    }
    let degree = n.end_inclusive();
    let mut out = PowerSeries::zeros(degree);
    for k in n.range() {
        out.coeffs[k] = f.coeff(k);
    }
    out
}

/// Coefficients of `f` on `I(n)` shifted down to start at index zero. The
/// modulus on the unit circle equals that of [`dyadic_block`].
pub fn dyadic_block_shifted(f: &PowerSeries, n: DyadicBlockIndex) -> PowerSeries {
    let len = n.start();
    let coeffs = (0..len).map(|j| f.coeff(n.start() + j)).collect();
    PowerSeries { coeffs }
}

/// Hadamard (coefficientwise) product; degree is the smaller of the two.
pub fn hadamard(w: &PowerSeries, f: &PowerSeries) -> PowerSeries {
    let coeffs = w.coeffs.iter().zip(&f.coeffs).map(|(a, b)| a * b).collect();
    PowerSeries { coeffs }
}
