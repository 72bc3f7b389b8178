//! The function mini-language accepted by `--f` and `--g`.
//!
//! ```text
//! const:c            constant c (complex, e.g. 2 or 1+2i)
//! mono:m             z^m
//! poly:a0,a1,...     polynomial with the given coefficients
//! log-kernel         log 1/(1-z)
//! rational:a,c       c / (1 - a z)^2
//! coeff:k^-e         b_k = k^-e, optionally s*k^-e and @phase
//! cauchy:w@θ;...     Σ w_j / (1 - e^{-iθ_j} z)
//! {...}              inline JSON (function spec or series)
//! anything else      path to a JSON file
//! ```

use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use hgops::series::{Atom, CoeffRule, FunctionSpec, PowerSeries};
use num_complex::Complex64;

fn complex(s: &str) -> Result<Complex64> {
    let t = s.trim();
    Complex64::from_str(t).map_err(|_| anyhow!("not a number: {t:?}"))
}

fn real(s: &str) -> Result<f64> {
    let t = s.trim();
    t.parse::<f64>().map_err(|_| anyhow!("not a real number: {t:?}"))
}

fn coeff_rule(body: &str) -> Result<CoeffRule> {
    let (rule, phase) = match body.split_once('@') {
        Some((r, ph)) => (r, real(ph)?),
        None => (body, 0.0),
    };
    let (scale, power) = match rule.split_once('*') {
        Some((s, p)) => (real(s)?, p),
        None => (1.0, rule),
    };
    let exp = power
        .trim()
        .strip_prefix("k^")
        .ok_or_else(|| anyhow!("coefficient rule must look like k^-e, got {power:?}"))?;
    Ok(CoeffRule::PowerLaw { scale, exponent: -real(exp)?, phase })
}

/// Parses JSON holding a function spec, a bare series, or an `apply` result
/// (`{"series": ...}`).
pub fn from_json(text: &str) -> Result<FunctionSpec> {
    let value: serde_json::Value = serde_json::from_str(text).context("invalid JSON")?;
    if value.get("kind").is_some() {
        return Ok(serde_json::from_value(value)?);
    }
    let series = value.get("series").cloned().unwrap_or(value);
    let s: PowerSeries = serde_json::from_value(series).context("JSON is neither a function spec nor a series")?;
    Ok(s.into())
}

/// Parses a function description.
pub fn function(text: &str) -> Result<FunctionSpec> {
    let t = text.trim();
    if t == "log-kernel" {
        return Ok(FunctionSpec::LogKernel);
    }
    if t.starts_with('{') {
        return from_json(t);
    }
    let spec = match t.split_once(':') {
        Some(("const", c)) => PowerSeries::new(vec![complex(c)?])?.into(),
        Some(("mono", m)) => {
            let m: usize = m.trim().parse().map_err(|_| anyhow!("monomial degree must be a nonnegative integer"))?;
            PowerSeries::monomial(m, Complex64::new(1.0, 0.0)).into()
        }
        Some(("poly", cs)) => {
            let coeffs = cs.split(',').map(complex).collect::<Result<Vec<_>>>()?;
            PowerSeries::new(coeffs)?.into()
        }
        Some(("rational", args)) => {
            let (a, c) = args.split_once(',').ok_or_else(|| anyhow!("rational needs a,c"))?;
            FunctionSpec::rational(real(c)?, real(a)?)
        }
        Some(("coeff", rule)) => FunctionSpec::BoundedCoeffSeq { rule: coeff_rule(rule)? },
        Some(("cauchy", atoms)) => {
            let atoms = atoms
                .split(';')
                .filter(|a| !a.trim().is_empty())
                .map(|a| {
                    let (w, th) = a.split_once('@').ok_or_else(|| anyhow!("cauchy atom must be w@theta, got {a:?}"))?;
                    Ok(Atom::at_angle(complex(w)?, real(th)?))
                })
                .collect::<Result<Vec<_>>>()?;
            if atoms.is_empty() {
                bail!("cauchy needs at least one atom");
            }
            FunctionSpec::CauchyTransform { atoms }
        }
        _ => {
            let body = std::fs::read_to_string(t).with_context(|| format!("unknown function {t:?} and no such file"))?;
            from_json(&body).with_context(|| format!("reading {t}"))?
        }
    };
    spec.validate()?;
    Ok(spec)
}

/// Comma-separated list of integers.
pub fn list<T: FromStr>(text: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(|s| s.trim().parse::<T>().map_err(|_| anyhow!("bad list entry {s:?}")))
        .collect()
}
