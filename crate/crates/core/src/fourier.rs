//! Evaluation of truncated series on circles by FFT.

use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::series::PowerSeries;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Angular sample count for `M_p`: at least `4(K+1)`, enough for exact
/// quadrature of `|f|^p` when `p` is an even integer, rounded up to a power
/// of two.
pub fn mean_samples(degree: usize, p: f64) -> usize {
    let mut m = 4 * (degree + 1);
    if p.fract() == 0.0 && (p as usize).is_multiple_of(2) {
        m = m.max(p as usize * degree + 1);
    }
    m.next_power_of_two()
}

/// Angular sample count for `M_∞`: at least `8(K+1)`.
pub fn sup_samples(degree: usize) -> usize {
    (8 * (degree + 1)).next_power_of_two()
}

/// Values `f(r e^{2πij/m})`, `j = 0..m`. Requires `m > degree(f)`.
pub fn sample_circle(f: &PowerSeries, r: f64, m: usize) -> Vec<Complex64> {
    assert!(m > f.degree(), "sample count must exceed the degree");
    let mut buf = vec![Complex64::default(); m];
    let mut pow = 1.0;
    for (b, &c) in buf.iter_mut().zip(f.coeffs()) {
        *b = c * pow;
        pow *= r;
        if pow == 0.0 {
            break;
        }
    }
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(m));
    fft.process(&mut buf);
    buf
}
