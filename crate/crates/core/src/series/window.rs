use std::sync::Arc;

use num_complex::Complex64;

use super::jet::Jet;
use super::PowerSeries;
use crate::error::{domain, Result};

/// Grid size used to estimate `A_Φ`.
pub const AMPLITUDE_GRID: usize = 4096;

type JetFn = dyn Fn(f64) -> Jet + Send + Sync;

/// A compactly supported `C^2` (in practice `C^∞`) real window `Φ`, with its
/// first two derivatives and the amplitude `A_Φ = max|Φ| + max|Φ''|`.
#[derive(Clone)]
pub struct SmoothWindow {
    support: (f64, f64),
    eval: Arc<JetFn>,
    amplitude: f64,
}

impl std::fmt::Debug for SmoothWindow {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SmoothWindow")
            .field("support", &self.support)
            .field("amplitude", &self.amplitude)
            .finish()
    }
}

/// `exp(-1/x)` for `x > 0`, zero otherwise.
fn flat_exp(x: Jet) -> Jet {
    if x.v <= 0.0 {
        Jet::default()
    } else {
        (-x.recip()).exp()
    }
}

/// Smooth step: 0 for `x ≤ 0`, 1 for `x ≥ 1`.
fn smooth_step(x: Jet) -> Jet {
    if x.v <= 0.0 {
        return Jet::default();
    }
    if x.v >= 1.0 {
        return Jet::constant(1.0);
    }
    let a = flat_exp(x);
    let b = flat_exp(Jet::constant(1.0) - x);
    a / (a + b)
}

impl SmoothWindow {
    /// Window vanishing outside `(s_lo, s_hi)` and equal to 1 on
    /// `[flat_lo, flat_hi]`, built from `exp(-1/x)` transitions.
    pub fn bump(s_lo: f64, s_hi: f64, flat_lo: f64, flat_hi: f64) -> Result<Self> {
        if !(s_lo < flat_lo && flat_lo < flat_hi && flat_hi < s_hi) {
            return domain(format!(
                "bump window needs s_lo < flat_lo < flat_hi < s_hi, got {s_lo}, {flat_lo}, {flat_hi}, {s_hi}"
            ));
        }
        let rise = flat_lo - s_lo;
        let fall = s_hi - flat_hi;
        let eval = move |s: f64| {
            let left = smooth_step(Jet::affine((s - s_lo) / rise, 1.0 / rise));
            let right = smooth_step(Jet::affine((s_hi - s) / fall, -1.0 / fall));
            left * right
        };
        Ok(Self::from_jet((s_lo, s_hi), eval))
    }

    /// Wraps an arbitrary jet evaluator; values outside `support` are forced
    /// to zero and `A_Φ` is measured on a grid.
    pub fn from_jet(support: (f64, f64), eval: impl Fn(f64) -> Jet + Send + Sync + 'static) -> Self {
        let (lo, hi) = support;
        let eval: Arc<JetFn> = Arc::new(move |s: f64| if s <= lo || s >= hi { Jet::default() } else { eval(s) });
        let mut max_v: f64 = 0.0;
        let mut max_d2: f64 = 0.0;
        for i in 0..=AMPLITUDE_GRID {
            let s = lo + (hi - lo) * i as f64 / AMPLITUDE_GRID as f64;
            let j = eval(s);
            max_v = max_v.max(j.v.abs());
            max_d2 = max_d2.max(j.d2.abs());
        }
        Self { support, eval, amplitude: max_v + max_d2 }
    }

    /// Pointwise product with a smooth profile, e.g. `φ_N` on `[1, 2]`.
    pub fn with_profile(&self, profile: impl Fn(f64) -> Jet + Send + Sync + 'static) -> Self {
        let base = self.eval.clone();
        Self::from_jet(self.support, move |s| {
            let b = base(s);
            if b == Jet::default() {
                b
            } else {
                b * profile(s)
            }
        })
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn jet(&self, s: f64) -> Jet {
        (self.eval)(s)
    }

    pub fn value(&self, s: f64) -> f64 {
        self.jet(s).v
    }

    pub fn d1(&self, s: f64) -> f64 {
        self.jet(s).d1
    }

    pub fn d2(&self, s: f64) -> f64 {
        self.jet(s).d2
    }
}

/// The window polynomial `W_N^Φ(z) = Σ_k Φ(k/N) profile(k/N) z^k`.
pub fn window_poly(
    window: &SmoothWindow,
    n: usize,
    profile: Option<&dyn Fn(f64) -> Complex64>,
) -> Result<PowerSeries> {
    if n == 0 {
        return domain("window polynomial needs N >= 1");
    }
    let nf = n as f64;
    let degree = (nf * window.support.1).ceil() as usize;
    let coeffs = (0..=degree)
        .map(|k| {
            let s = k as f64 / nf;
            let phi = window.value(s);
            match profile {
                Some(p) if phi != 0.0 => p(s) * phi,
                _ => Complex64::new(phi, 0.0),
            }
        })
        .collect();
    PowerSeries::new(coeffs)
}
