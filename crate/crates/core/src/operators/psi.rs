use serde::{Deserialize, Serialize};

use crate::error::{domain, HgError, Result};
use crate::quadrature::{geometric_breakpoints, integrate_vec, QuadOptions};
use crate::series::{FunctionSpec, Jet};

/// `a_N = 1 - 1/N`.
pub fn pole_parameter(n: u64) -> f64 {
    1.0 - 1.0 / n as f64
}

/// `ψ_{N,α}(s) = N^{-(3-(2+α)/p)} ∫_0^1 t^{sN} / (1 - a_N t)^2 dt` and its
/// first two derivatives in `s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsiEvaluation {
    pub n: u64,
    pub p: f64,
    pub alpha: f64,
    pub s: f64,
    pub a_n: f64,
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

impl PsiEvaluation {
    /// `φ_{N,α}(s) = 1/ψ_{N,α}(s)`.
    pub fn phi(&self) -> f64 {
        1.0 / self.value
    }

    pub fn jet(&self) -> Jet {
        Jet::new(self.value, self.d1, self.d2)
    }

    /// `(φ, φ', φ'')`.
    pub fn phi_jet(&self) -> Jet {
        self.jet().recip()
    }

    /// `ψ · N^{2-(2+α)/p}`, which stays bounded above and below in `N`.
    pub fn normalized(&self) -> f64 {
        self.value * (self.n as f64).powf(2.0 - (2.0 + self.alpha) / self.p)
    }
}

fn check(n: u64, p: f64, alpha: f64, s: f64) -> Result<()> {
    if n == 0 {
        return domain("N must be at least 1");
    }
    if !(p > 0.0 && p.is_finite()) {
        return domain(format!("p must be positive, got {p}"));
    }
    if !(alpha > -1.0 && alpha.is_finite()) {
        return domain(format!("α must exceed -1, got {alpha}"));
    }
    if !(s > 0.0 && s.is_finite()) {
        return domain(format!("s must be positive, got {s}"));
    }
    Ok(())
}

/// Evaluates `ψ_{N,α}(s)` with relative error below `1e-9`.
pub fn psi(n: u64, p: f64, alpha: f64, s: f64) -> Result<PsiEvaluation> {
    check(n, p, alpha, s)?;
    let a = pole_parameter(n);
    let nf = n as f64;
    let e = s * nf;
    let bp = geometric_breakpoints(0.0, 1.0, 60);
    let opts = QuadOptions { abs_tol: 0.0, rel_tol: 1e-12, max_panels: 20_000 };
    let res = integrate_vec(
        |t, out: &mut [f64]| {
            if t <= 0.0 {
                out.fill(0.0);
                return;
            }
            let lt = t.ln();
            let base = (e * lt).exp() / (1.0 - a * t).powi(2);
            let l = nf * lt;
            out[0] = base;
            out[1] = base * l;
            out[2] = base * l * l;
        },
        3,
        &bp,
        &opts,
    );
    if !res.converged {
        return Err(HgError::NonConvergence(format!("ψ quadrature error {:e}", res.error)));
    }
    let pre = nf.powf(-(3.0 - (2.0 + alpha) / p));
    Ok(PsiEvaluation {
        n,
        p,
        alpha,
        s,
        a_n: a,
        value: pre * res.values[0],
        d1: pre * res.values[1],
        d2: pre * res.values[2],
    })
}

/// Test-function families built on the pole `a_N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestFamily {
    /// `N^{-(2-1/p)} (1 - a_N z)^{-2}`, bounded in `H^p`.
    Hardy,
    /// `N^{-(3-(2+α)/p)} (1 - a_N z)^{-2}`, bounded in `D^p_α`.
    Dirichlet,
}

/// The member `f_N` of `family`. The Dirichlet family needs `α < 3p - 2`.
pub fn test_function(family: TestFamily, n: u64, p: f64, alpha: f64) -> Result<FunctionSpec> {
    if n == 0 {
        return domain("N must be at least 1");
    }
    if !(p > 0.0 && p.is_finite()) {
        return domain(format!("p must be positive, got {p}"));
    }
    let nf = n as f64;
    let scale = match family {
        TestFamily::Hardy => nf.powf(-(2.0 - 1.0 / p)),
        TestFamily::Dirichlet => {
            if !(alpha < 3.0 * p - 2.0) {
                return domain(format!("dirichlet test family needs α < 3p - 2, got α = {alpha}, p = {p}"));
            }
            nf.powf(-(3.0 - (2.0 + alpha) / p))
        }
    };
    Ok(FunctionSpec::rational(scale, pole_parameter(n)))
}
