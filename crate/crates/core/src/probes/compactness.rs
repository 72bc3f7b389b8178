use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::norms::{space_norm, SpaceKind, SpaceParams};
use crate::operators::{apply_hg, test_function, TestFamily};
use crate::series::PowerSeries;
use crate::stats::log_log_slope;

/// Default decay factor (first over last value) for a compact candidate.
pub const DEFAULT_COMPACT_THRESHOLD: f64 = 2.0;

/// The `f_N` family bounded in `S`: Hardy for `H^p`, Dirichlet-type for
/// `D^p_α`, and Dirichlet-type with weight `α + p` for `A^p_α`.
pub fn family_for(space: &SpaceParams) -> Option<(TestFamily, f64)> {
    let (family, alpha) = match space.kind {
        SpaceKind::Hardy => (TestFamily::Hardy, 0.0),
        SpaceKind::DirichletType => (TestFamily::Dirichlet, space.alpha),
        SpaceKind::Bergman => (TestFamily::Dirichlet, space.alpha + space.p),
    };
    (family == TestFamily::Hardy || alpha < 3.0 * space.p - 2.0).then_some((family, alpha))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompactnessProbe {
    pub n_list: Vec<u64>,
    /// `‖H_g(f_N)‖_S` with outputs truncated at `degree(g) - 1`.
    pub values: Vec<f64>,
    /// Log-log slope of the values against `N`.
    pub slope: Option<f64>,
    /// First value over last value.
    pub decay_factor: f64,
    pub threshold: f64,
    pub compact_candidate: bool,
}

/// Norms of `H_g(f_N)` along `n_list`. A candidate for compactness when the
/// sequence drops by at least `threshold` from the first to the last `N`
/// (or vanishes identically).
pub fn compactness_probe(g: &PowerSeries, space: &SpaceParams, n_list: &[u64], threshold: f64) -> Result<CompactnessProbe> {
    space.check_operator_admissible()?;
    if n_list.is_empty() {
        return domain("N list is empty");
    }
    let Some((family, alpha)) = family_for(space) else {
        return domain(format!("no bounded test family for {}", space.label()));
    };
    let k_out = g.degree().saturating_sub(1);
    let values = n_list
        .par_iter()
        .map(|&n| {
            if g.degree() == 0 {
                return Ok(0.0);
            }
            let f = test_function(family, n, space.p, alpha)?;
            space_norm(&apply_hg(g, &f, k_out)?, space)
        })
        .collect::<Result<Vec<f64>>>()?;
    let xs: Vec<f64> = n_list.iter().map(|&n| n as f64).collect();
    let slope = log_log_slope(&xs, &values);
    let (first, last) = (values[0], *values.last().unwrap());
    let decay_factor = if last > 0.0 { first / last } else if first > 0.0 { f64::INFINITY } else { 1.0 };
    let all_zero = values.iter().all(|&v| v == 0.0);
    let compact_candidate = all_zero || decay_factor >= threshold;
    Ok(CompactnessProbe { n_list: n_list.to_vec(), values, slope, decay_factor, threshold, compact_candidate })
}
