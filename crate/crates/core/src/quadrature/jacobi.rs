use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use statrs::function::gamma::ln_gamma;

use crate::error::{HgError, Result};

/// Nodes and weights of an interpolatory Gauss rule.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn apply(&self, f: impl Fn(f64) -> f64) -> f64 {
        let terms: Vec<f64> = self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).collect();
        crate::stats::pairwise_sum(&terms)
    }
}

/// Gauss-Jacobi rule for `∫_{-1}^{1} f(x) (1-x)^α (1+x)^β dx`, via
/// Golub-Welsch on the Jacobi matrix. The implicit QL sweep tracks only the
/// first eigenvector components, so the cost is `O(n^2)`.
pub fn gauss_jacobi(n: usize, alpha: f64, beta: f64) -> Result<GaussRule> {
    if n == 0 {
        return Err(HgError::Domain("Gauss rule needs at least one node".into()));
    }
    if alpha <= -1.0 || beta <= -1.0 {
        return Err(HgError::Domain(format!("Jacobi weight needs α, β > -1, got {alpha}, {beta}")));
    }
    let ab = alpha + beta;
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    for (k, d) in diag.iter_mut().enumerate() {
        let kf = k as f64;
        *d = if k == 0 {
            (beta - alpha) / (ab + 2.0)
        } else {
            (beta * beta - alpha * alpha) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0))
        };
    }
    for k in 1..n {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        let num = 4.0 * kf * (kf + alpha) * (kf + beta) * (kf + ab);
        let den = s * s * (s + 1.0) * (s - 1.0);
        off[k - 1] = (num / den).sqrt();
    }
    let mut first = vec![0.0; n];
    first[0] = 1.0;
    tridiagonal_ql(&mut diag, &mut off, &mut first)?;

    let ln_mu0 = (ab + 1.0) * std::f64::consts::LN_2 + ln_gamma(alpha + 1.0) + ln_gamma(beta + 1.0)
        - ln_gamma(ab + 2.0);
    let mu0 = ln_mu0.exp();
    let mut pairs: Vec<(f64, f64)> = diag.into_iter().zip(first).map(|(x, v)| (x, mu0 * v * v)).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (nodes, weights) = pairs.into_iter().unzip();
    Ok(GaussRule { nodes, weights })
}

/// Symmetric tridiagonal eigen-decomposition by implicit QL with Wilkinson
/// shifts. On return `diag` holds the eigenvalues and `first` the first
/// components of the matching unit eigenvectors.
fn tridiagonal_ql(diag: &mut [f64], off: &mut [f64], first: &mut [f64]) -> Result<()> {
    let n = diag.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(HgError::NonConvergence("tridiagonal QL did not converge".into()));
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                let fz = first[i + 1];
                first[i + 1] = s * first[i] + c * fz;
                first[i] = c * first[i] - s * fz;
            }
            if deflated {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}

/// Gauss rule on `[0, 1]` for the weight `(1-u)^α`, i.e.
/// `∫_0^1 F(u) (1-u)^α du ≈ Σ w_i F(u_i)`. Rules are cached per `(n, α)`.
pub fn jacobi_unit(n: usize, alpha: f64) -> Result<Arc<GaussRule>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, u64), Arc<GaussRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (n, alpha.to_bits());
    if let Some(rule) = cache.lock().expect("rule cache poisoned").get(&key) {
        return Ok(rule.clone());
    }
    let raw = gauss_jacobi(n, alpha, 0.0)?;
    let scale = 0.5f64.powf(alpha + 1.0);
    let rule = Arc::new(GaussRule {
        nodes: raw.nodes.iter().map(|x| 0.5 * (1.0 + x)).collect(),
        weights: raw.weights.iter().map(|w| w * scale).collect(),
    });
    cache.lock().expect("rule cache poisoned").insert(key, rule.clone());
    Ok(rule)
}
