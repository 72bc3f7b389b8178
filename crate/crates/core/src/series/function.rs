use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::PowerSeries;
use crate::error::{domain, Result};

/// Tolerance on `|ζ| = 1` for Cauchy-transform nodes.
const CIRCLE_TOL: f64 = 1e-12;

/// A point mass `weight · δ_node` on the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub weight: Complex64,
    pub node: Complex64,
}

impl Atom {
    /// Atom at `e^{iθ}`.
    pub fn at_angle(weight: Complex64, theta: f64) -> Self {
        Self { weight, node: Complex64::from_polar(1.0, theta) }
    }
}

/// Rule producing coefficients `b_k` with `sup k |b_k| < ∞` when the
/// exponent is at least one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum CoeffRule {
    /// `b_0 = 0`, `b_k = scale · k^{-exponent} · e^{i k phase}`.
    PowerLaw { scale: f64, exponent: f64, #[serde(default)] phase: f64 },
}

impl CoeffRule {
    pub fn coeff(&self, k: usize) -> Complex64 {
        match *self {
            CoeffRule::PowerLaw { scale, exponent, phase } => {
                if k == 0 {
                    Complex64::default()
                } else {
                    let kf = k as f64;
                    Complex64::from_polar(scale * kf.powf(-exponent), phase * kf)
                }
            }
        }
    }
}

/// Named analytic functions on the disc.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionSpec {
    /// A polynomial given by its coefficients.
    Polynomial { coeffs: PowerSeries },
    /// `log 1/(1 - z)`.
    LogKernel,
    /// `scale / (1 - pole z)^2` with `0 ≤ pole < 1`.
    RationalKernel { scale: f64, pole: f64 },
    /// `Σ_j w_j / (1 - conj(ζ_j) z)`, the Cauchy transform of an atomic measure.
    CauchyTransform { atoms: Vec<Atom> },
    /// Coefficients given by a rule.
    BoundedCoeffSeq { rule: CoeffRule },
}

impl From<PowerSeries> for FunctionSpec {
    fn from(coeffs: PowerSeries) -> Self {
        FunctionSpec::Polynomial { coeffs }
    }
}

impl FunctionSpec {
    pub fn rational(scale: f64, pole: f64) -> Self {
        FunctionSpec::RationalKernel { scale, pole }
    }

    pub fn power_law(exponent: f64) -> Self {
        FunctionSpec::BoundedCoeffSeq {
            rule: CoeffRule::PowerLaw { scale: 1.0, exponent, phase: 0.0 },
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            FunctionSpec::RationalKernel { scale, pole } => {
                if !(0.0..1.0).contains(pole) {
                    return domain(format!("rational kernel pole must satisfy 0 <= a < 1, got {pole}"));
                }
                if !scale.is_finite() {
                    return domain("rational kernel scale must be finite");
                }
            }
            FunctionSpec::CauchyTransform { atoms } => {
                for (j, atom) in atoms.iter().enumerate() {
                    if (atom.node.norm() - 1.0).abs() > CIRCLE_TOL {
                        return domain(format!("cauchy node {j} is off the unit circle (|ζ| = {})", atom.node.norm()));
                    }
                    if !atom.weight.re.is_finite() || !atom.weight.im.is_finite() {
                        return domain(format!("cauchy weight {j} is not finite"));
                    }
                }
            }
            FunctionSpec::BoundedCoeffSeq { rule: CoeffRule::PowerLaw { scale, exponent, phase } } => {
                if !(scale.is_finite() && exponent.is_finite() && phase.is_finite()) {
                    return domain("coefficient rule parameters must be finite");
                }
            }
            FunctionSpec::Polynomial { .. } | FunctionSpec::LogKernel => {}
        }
        Ok(())
    }

    /// Taylor coefficient `k`.
    pub fn coeff(&self, k: usize) -> Complex64 {
        match self {
            FunctionSpec::Polynomial { coeffs } => coeffs.coeff(k),
            FunctionSpec::LogKernel => {
                if k == 0 {
                    Complex64::default()
                } else {
                    Complex64::new(1.0 / k as f64, 0.0)
                }
            }
            FunctionSpec::RationalKernel { scale, pole } => {
                Complex64::new(scale * (k + 1) as f64 * pole.powi(k as i32), 0.0)
            }
            FunctionSpec::CauchyTransform { atoms } => atoms
                .iter()
                .map(|a| a.weight * a.node.conj().powu(k as u32))
                .sum(),
            FunctionSpec::BoundedCoeffSeq { rule } => rule.coeff(k),
        }
    }

    /// Value at a real point `t ∈ [0, 1)`, when a closed form is available.
    pub fn eval_real(&self, t: f64) -> Option<Complex64> {
        match self {
            FunctionSpec::Polynomial { coeffs } => Some(coeffs.eval_real(t)),
            FunctionSpec::LogKernel => Some(Complex64::new(-(-t).ln_1p(), 0.0)),
            FunctionSpec::RationalKernel { scale, pole } => {
                Some(Complex64::new(scale / (1.0 - pole * t).powi(2), 0.0))
            }
            FunctionSpec::CauchyTransform { atoms } => Some(
                atoms
                    .iter()
                    .map(|a| a.weight / (Complex64::new(1.0, 0.0) - a.node.conj() * t))
                    .sum(),
            ),
            FunctionSpec::BoundedCoeffSeq { .. } => None,
        }
    }
}

/// The first `degree + 1` Taylor coefficients of `spec`.
pub fn materialize(spec: &FunctionSpec, degree: usize) -> Result<PowerSeries> {
    spec.validate()?;
    match spec {
        FunctionSpec::Polynomial { coeffs } => Ok(coeffs.truncate(degree)),
        FunctionSpec::RationalKernel { scale, pole } => {
            // (k+1) a^k by running product keeps small a exact at k = 0.
            let mut pow = 1.0;
            let coeffs = (0..=degree)
                .map(|k| {
                    let v = Complex64::new(scale * (k + 1) as f64 * pow, 0.0);
                    pow *= pole;
                    v
                })
                .collect();
            PowerSeries::new(coeffs)
        }
        FunctionSpec::CauchyTransform { atoms } => {
            let mut coeffs = vec![Complex64::default(); degree + 1];
            for atom in atoms {
                let step = atom.node.conj();
                let mut pow = atom.weight;
                for c in coeffs.iter_mut() {
                    *c += pow;
                    pow *= step;
                }
            }
            PowerSeries::new(coeffs)
        }
        _ => PowerSeries::new((0..=degree).map(|k| spec.coeff(k)).collect()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(v: &PowerSeries) -> Vec<f64> {
        v.coeffs().iter().map(|c| c.re).collect()
    }

    #[test]
    fn log_kernel_coefficients() {
        let s = materialize(&FunctionSpec::LogKernel, 3).unwrap();
        assert_eq!(re(&s), vec![0.0, 1.0, 0.5, 1.0 / 3.0]);
    }

    #[test]
    fn rational_kernel_coefficients() {
        let s = materialize(&FunctionSpec::rational(1.0, 0.0), 2).unwrap();
        assert_eq!(re(&s), vec![1.0, 0.0, 0.0]);
        let s = materialize(&FunctionSpec::rational(1.0, 0.5), 2).unwrap();
        assert_eq!(re(&s), vec![1.0, 1.0, 0.75]);
    }

    #[test]
    fn invalid_specs_are_domain_errors() {
        assert!(materialize(&FunctionSpec::rational(1.0, 1.0), 2).is_err());
        assert!(materialize(&FunctionSpec::rational(1.0, -0.1), 2).is_err());
        let off = FunctionSpec::CauchyTransform {
            atoms: vec![Atom { weight: Complex64::new(1.0, 0.0), node: Complex64::new(0.5, 0.0) }],
        };
        assert!(materialize(&off, 2).is_err());
    }

    #[test]
    fn cauchy_transform_matches_conjugate_powers() {
        let atoms = vec![
            Atom::at_angle(Complex64::new(0.5, 0.25), 0.7),
            Atom::at_angle(Complex64::new(-1.0, 0.0), 2.1),
        ];
        let spec = FunctionSpec::CauchyTransform { atoms: atoms.clone() };
        let s = materialize(&spec, 40).unwrap();
        for k in 0..=40 {
            let want: Complex64 = atoms.iter().map(|a| a.weight * a.node.conj().powu(k as u32)).sum();
            assert!((s.coeff(k) - want).norm() < 1e-13);
        }
        // the series reproduces the closed form inside the disc
        let t = 0.3;
        let sum = materialize(&spec, 200).unwrap().eval_real(t);
        assert!((sum - spec.eval_real(t).unwrap()).norm() < 1e-13);
    }

    #[test]
    fn power_law_rule() {
        let s = materialize(&FunctionSpec::power_law(0.5), 4).unwrap();
        assert_eq!(s.coeff(0), Complex64::default());
        assert!((s.coeff(4).re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn spec_json_tags() {
        let spec = FunctionSpec::rational(2.0, 0.25);
        let s = serde_json::to_string(&spec).unwrap();
        assert_eq!(s, r#"{"kind":"rational_kernel","scale":2.0,"pole":0.25}"#);
        let back: FunctionSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(back, spec);
    }
}
