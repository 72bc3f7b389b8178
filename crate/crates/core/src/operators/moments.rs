use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, HgError, Result};
use crate::quadrature::{geometric_breakpoints, integrate_vec, QuadOptions};
use crate::series::{FunctionSpec, PowerSeries};

/// Geometric refinement levels toward `t = 1` for moment quadrature.
const GEOMETRIC_LEVELS: u32 = 50;
/// Backward-recurrence start offsets beyond this switch to the forward
/// recurrence, which is stable when the pole is that close to one.
const MAX_BACKWARD_OFFSET: f64 = 4.0e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentMethod {
    ClosedForm,
    Quadrature,
}

/// `μ_k = ∫_0^1 t^k f(t) dt` for `k = 0..=K`, with a per-entry absolute error
/// bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentSequence {
    pub values: Vec<Complex64>,
    pub method: MomentMethod,
    pub error_bounds: Vec<f64>,
}

impl MomentSequence {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_error(&self) -> f64 {
        self.error_bounds.iter().fold(0.0, |m, &e| m.max(e))
    }

    fn closed(values: Vec<Complex64>, error_bounds: Vec<f64>) -> Self {
        Self { values, method: MomentMethod::ClosedForm, error_bounds }
    }

    /// Multiply every moment by `c` (moments of `c f`).
    pub fn scale(mut self, c: Complex64) -> Self {
        for v in &mut self.values {
            *v *= c;
        }
        for e in &mut self.error_bounds {
            *e *= c.norm();
        }
        self
    }
}

/// Moments of a polynomial: `μ_k = Σ_m a_m / (k+m+1)`, exact up to rounding.
pub fn polynomial_moments(f: &PowerSeries, k_max: usize) -> MomentSequence {
    let a = f.coeffs();
    let (values, errs) = (0..=k_max)
        .map(|k| {
            let mut s = Complex64::default();
            let mut mag = 0.0;
            for (m, &c) in a.iter().enumerate() {
                let d = (k + m + 1) as f64;
                s += c / d;
                mag += c.norm() / d;
            }
            (s, 2.0 * (a.len() as f64 + 1.0) * f64::EPSILON * mag)
        })
        .unzip();
    MomentSequence::closed(values, errs)
}

/// `J_k = ∫_0^1 t^k / (1 - a t) dt` for `k = 0..=k_max`, complex `a` with
/// `|a| ≤ 1`, `a ≠ 1`.
fn geometric_kernel_moments(a: Complex64, k_max: usize) -> Vec<Complex64> {
    if a == Complex64::default() {
        return (0..=k_max).map(|k| Complex64::new(1.0 / (k + 1) as f64, 0.0)).collect();
    }
    let r = a.norm();
    let offset = if r < 1.0 { (40.0 / -r.ln()).ceil() } else { f64::INFINITY };
    let mut j = vec![Complex64::default(); k_max + 1];
    if offset <= MAX_BACKWARD_OFFSET {
        // J_{k-1} = a J_k + 1/k, run downward from J_M = 0 with |a|^{M-K} < e^{-40}.
        let m = k_max + offset as usize;
        let mut cur = Complex64::default();
        for k in (1..=m).rev() {
            cur = a * cur + 1.0 / k as f64;
            if k - 1 <= k_max {
                j[k - 1] = cur;
            }
        }
    } else {
        // J_0 = -log(1-a)/a and J_k = (J_{k-1} - 1/k)/a; errors grow like |a|^{-k}.
        let one = Complex64::new(1.0, 0.0);
        j[0] = -(one - a).ln() / a;
        for k in 1..=k_max {
            j[k] = (j[k - 1] - 1.0 / k as f64) / a;
        }
    }
    j
}

/// `∫_0^1 t^k / (1 - a t)^2 dt = 1/(1-a) - k J_k`.
fn rational_moments(scale: f64, a: f64, k_max: usize) -> MomentSequence {
    let j = geometric_kernel_moments(Complex64::new(a, 0.0), k_max);
    let lead = 1.0 / (1.0 - a);
    let (values, errs) = j
        .iter()
        .enumerate()
        .map(|(k, jk)| {
            let v = lead - k as f64 * jk.re;
            let e = 8.0 * f64::EPSILON * (lead + k as f64 * jk.re.abs());
            (Complex64::new(scale * v, 0.0), e * scale.abs())
        })
        .unzip();
    MomentSequence::closed(values, errs)
}

/// `∫_0^1 t^k log(1/(1-t)) dt = H_{k+1}/(k+1)`.
fn log_kernel_moments(k_max: usize) -> MomentSequence {
    let mut h = 0.0;
    let (values, errs) = (0..=k_max)
        .map(|k| {
            h += 1.0 / (k + 1) as f64;
            let v = h / (k + 1) as f64;
            (Complex64::new(v, 0.0), 4.0 * (k + 2) as f64 * f64::EPSILON * v)
        })
        .unzip();
    MomentSequence::closed(values, errs)
}

fn cauchy_moments(atoms: &[crate::series::Atom], k_max: usize) -> Result<MomentSequence> {
    let mut values = vec![Complex64::default(); k_max + 1];
    let mut errs = vec![0.0; k_max + 1];
    for (idx, atom) in atoms.iter().enumerate() {
        let a = atom.node.conj();
        if (a - 1.0).norm() < 1e-12 {
            return domain(format!(
                "cauchy node {idx} sits at z = 1, where the transform is not integrable on [0, 1)"
            ));
        }
        let j = geometric_kernel_moments(a, k_max);
        for (k, jk) in j.iter().enumerate() {
            values[k] += atom.weight * jk;
            errs[k] += 8.0 * (k + 2) as f64 * f64::EPSILON * atom.weight.norm() * jk.norm().max(1.0);
        }
    }
    Ok(MomentSequence::closed(values, errs))
}

/// Quadrature options for the moment engine.
pub fn moment_quad_options() -> QuadOptions {
    QuadOptions { abs_tol: 1e-11, rel_tol: 1e-13, max_panels: 20_000 }
}

/// Moments `∫_0^1 t^k h(t) dt` by vector adaptive Gauss-Kronrod quadrature on
/// panels refined geometrically toward `t = 1`.
pub fn quadrature_moments(
    h: impl Fn(f64) -> Complex64,
    k_max: usize,
    opts: &QuadOptions,
) -> Result<MomentSequence> {
    let dim = 2 * (k_max + 1);
    let bp = geometric_breakpoints(0.0, 1.0, GEOMETRIC_LEVELS);
    let res = integrate_vec(
        |t, out: &mut [f64]| {
            let v = h(t);
            let mut pow = 1.0;
            for pair in out.chunks_exact_mut(2) {
                pair[0] = pow * v.re;
                pair[1] = pow * v.im;
                pow *= t;
            }
        },
        dim,
        &bp,
        opts,
    );
    if !res.converged {
        return Err(HgError::NonConvergence(format!(
            "moment quadrature stopped at {} panels with error {:e}",
            res.panels, res.error
        )));
    }
    let values = res.values.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect();
    Ok(MomentSequence { values, method: MomentMethod::Quadrature, error_bounds: vec![res.error; k_max + 1] })
}

/// Moments of `f` for `k = 0..=k_max`. Closed forms cover polynomials,
/// rational kernels, the log kernel and Cauchy transforms of atomic measures.
/// Coefficient rules have no evaluator on `[0, 1)` and must be materialized
/// first.
pub fn moments(f: &FunctionSpec, k_max: usize) -> Result<MomentSequence> {
    f.validate()?;
    match f {
        FunctionSpec::Polynomial { coeffs } => Ok(polynomial_moments(coeffs, k_max)),
        FunctionSpec::RationalKernel { scale, pole } => Ok(rational_moments(*scale, *pole, k_max)),
        FunctionSpec::LogKernel => Ok(log_kernel_moments(k_max)),
        FunctionSpec::CauchyTransform { atoms } => cauchy_moments(atoms, k_max),
        FunctionSpec::BoundedCoeffSeq { .. } => domain(
            "a coefficient rule has no closed-form values on [0, 1); materialize it to a polynomial first",
        ),
    }
}

/// Moments of `f` by quadrature only, regardless of closed forms; the
/// cross-check oracle for [`moments`].
pub fn moments_by_quadrature(f: &FunctionSpec, k_max: usize) -> Result<MomentSequence> {
    f.validate()?;
    if let FunctionSpec::CauchyTransform { atoms } = f {
        if atoms.iter().any(|a| (a.node - 1.0).norm() < 1e-12) {
            return domain("cauchy node at z = 1 is not integrable on [0, 1)");
        }
    }
    let Some(_) = f.eval_real(0.0) else {
        return domain("function has no evaluator on [0, 1)");
    };
    quadrature_moments(|t| f.eval_real(t).expect("checked above"), k_max, &moment_quad_options())
}

/// Moments of `t f(t)`: closed form for polynomials (the coefficients shift),
/// an independent quadrature otherwise.
pub fn moments_times_t(f: &FunctionSpec, k_max: usize) -> Result<MomentSequence> {
    f.validate()?;
    match f {
        FunctionSpec::Polynomial { coeffs } => Ok(polynomial_moments(&coeffs.shift_up(1), k_max)),
        FunctionSpec::BoundedCoeffSeq { .. } => moments(f, k_max),
        _ => {
            if let FunctionSpec::CauchyTransform { atoms } = f {
                if atoms.iter().any(|a| (a.node - 1.0).norm() < 1e-12) {
                    return domain("cauchy node at z = 1 is not integrable on [0, 1)");
                }
            }
            quadrature_moments(|t| f.eval_real(t).expect("evaluable spec") * t, k_max, &moment_quad_options())
        }
    }
}

/// `∫_0^1 t^j |f(t)| dt` for `j = 0..=k_max`, by quadrature with absolute
/// error target `1e-10`.
pub fn abs_moments(f: &PowerSeries, k_max: usize) -> Result<MomentSequence> {
    if f.degree() == 0 {
        return Ok(polynomial_moments(&PowerSeries::from_real(&[f.coeff(0).norm()])?, k_max));
    }
    let opts = QuadOptions { abs_tol: 1e-10, rel_tol: 1e-13, max_panels: 20_000 };
    let dim = k_max + 1;
    let bp = geometric_breakpoints(0.0, 1.0, GEOMETRIC_LEVELS);
    let res = integrate_vec(
        |t, out: &mut [f64]| {
            let v = f.eval_real(t).norm();
            let mut pow = v;
            for o in out.iter_mut() {
                *o = pow;
                pow *= t;
            }
        },
        dim,
        &bp,
        &opts,
    );
    if !res.converged {
        return Err(HgError::NonConvergence(format!(
            "absolute-moment quadrature stopped at {} panels with error {:e}",
            res.panels, res.error
        )));
    }
    let values = res.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    Ok(MomentSequence { values, method: MomentMethod::Quadrature, error_bounds: vec![res.error; dim] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{Atom, FunctionSpec};

    fn poly(c: &[f64]) -> FunctionSpec {
        PowerSeries::from_real(c).unwrap().into()
    }

    #[test]
    fn spec_examples() {
        let m = moments(&poly(&[0.0, 0.0, 0.0, 1.0]), 5).unwrap();
        for k in 0..=5 {
            assert!((m.values[k].re - 1.0 / (k + 4) as f64).abs() < 1e-16);
        }
        let r = moments(&FunctionSpec::rational(1.0, 0.5), 0).unwrap();
        assert!((r.values[0].re - 2.0).abs() < 1e-15);
        let one = moments(&poly(&[1.0]), 3).unwrap();
        let want = [1.0, 0.5, 1.0 / 3.0, 0.25];
        for k in 0..4 {
            assert!((one.values[k].re - want[k]).abs() < 1e-16);
        }
        assert_eq!(one.method, MomentMethod::ClosedForm);
    }

    #[test]
    fn rational_recurrence_matches_quadrature() {
        for &a in &[0.0, 0.3, 0.75, 0.9, 0.99, 1.0 - 1.0 / 4096.0] {
            let spec = FunctionSpec::rational(1.5, a);
            let cf = moments(&spec, 200).unwrap();
            let q = moments_by_quadrature(&spec, 200).unwrap();
            for k in 0..=200 {
                let d = (cf.values[k] - q.values[k]).norm();
                assert!(d <= 1e-9 * cf.values[0].norm().max(1.0), "a={a} k={k} d={d}");
            }
        }
    }

    #[test]
    fn forward_recurrence_near_one() {
        let a = 1.0 - 1e-8;
        let m = moments(&FunctionSpec::rational(1.0, a), 50).unwrap();
        // I_0 = 1/(1-a)
        assert!(((m.values[0].re - 1e8) / 1e8).abs() < 1e-7);
        // I_k decreases in k and stays positive
        assert!(m.values.windows(2).all(|w| w[1].re < w[0].re && w[1].re > 0.0));
    }

    #[test]
    fn log_kernel_and_cauchy_closed_forms() {
        let cf = moments(&FunctionSpec::LogKernel, 40).unwrap();
        let q = moments_by_quadrature(&FunctionSpec::LogKernel, 40).unwrap();
        for k in 0..=40 {
            assert!((cf.values[k] - q.values[k]).norm() < 1e-10, "k={k}");
        }
        let spec = FunctionSpec::CauchyTransform {
            atoms: vec![
                Atom::at_angle(Complex64::new(1.0, 0.5), 2.0),
                Atom::at_angle(Complex64::new(-0.3, 0.0), std::f64::consts::PI),
            ],
        };
        let cf = moments(&spec, 60).unwrap();
        let q = moments_by_quadrature(&spec, 60).unwrap();
        for k in 0..=60 {
            assert!((cf.values[k] - q.values[k]).norm() < 1e-10, "k={k} {} {}", cf.values[k], q.values[k]);
        }
        let bad = FunctionSpec::CauchyTransform { atoms: vec![Atom::at_angle(Complex64::new(1.0, 0.0), 0.0)] };
        assert!(moments(&bad, 3).is_err());
        assert!(moments(&FunctionSpec::power_law(1.0), 3).is_err());
    }

    #[test]
    fn abs_moment_examples() {
        let one = PowerSeries::from_real(&[1.0]).unwrap();
        let neg = PowerSeries::from_real(&[-1.0]).unwrap();
        let a = abs_moments(&one, 4).unwrap();
        let b = abs_moments(&neg, 4).unwrap();
        for j in 0..=4 {
            assert!((a.values[j].re - 1.0 / (j + 1) as f64).abs() < 1e-15);
            assert_eq!(a.values[j], b.values[j]);
        }
        let f = PowerSeries::from_real(&[-0.5, 1.0]).unwrap();
        let m = abs_moments(&f, 3).unwrap();
        assert!((m.values[0].re - 0.25).abs() < 1e-10);
        assert!(m.values.windows(2).all(|w| w[1].re <= w[0].re));
    }
}
