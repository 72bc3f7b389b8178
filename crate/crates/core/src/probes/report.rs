use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::compactness::{compactness_probe, CompactnessProbe, DEFAULT_COMPACT_THRESHOLD};
use super::lower_bound::{norm_lower_bound, CandidateSource};
use super::matrix::{l2_operator_norm, truncated_matrix};
use crate::error::{domain, Result};
use crate::norms::{lipschitz_profile, LipschitzProfile, SpaceKind, SpaceParams, DEFAULT_TAU};
use crate::series::{materialize, CoeffRule, FunctionSpec};
use crate::stats::log_log_slope;

/// Log-log growth of the lower bounds at or below this is read as bounded.
pub const BOUNDED_SLOPE: f64 = 0.1;
/// Growth at or above this is read as unbounded.
pub const UNBOUNDED_SLOPE: f64 = 0.15;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeConfig {
    /// Truncation degrees for the lower-bound ladder.
    pub ladder: Vec<usize>,
    /// `N` values for the compactness probe.
    pub n_list: Vec<u64>,
    /// Random trials per truncation.
    pub budget: usize,
    pub seed: u64,
    /// Block range for the Lipschitz profile.
    pub profile_blocks: (u32, u32),
    pub tau: f64,
    /// Run the compactness probe.
    pub compactness: bool,
    pub compact_threshold: f64,
    /// Degree of the symbol used by the compactness probe; 16 times the
    /// largest `N` when absent.
    pub compact_degree: Option<usize>,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            ladder: vec![64, 256, 1024],
            n_list: vec![4, 16, 64, 256, 1024],
            budget: 16,
            seed: 0,
            profile_blocks: (4, 10),
            tau: DEFAULT_TAU,
            compactness: false,
            compact_threshold: DEFAULT_COMPACT_THRESHOLD,
            compact_degree: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    BoundedCandidate,
    UnboundedCandidate,
    CompactCandidate,
    Inconclusive,
}

/// What the theorems predict from the symbol's profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    Yes,
    No,
    Open,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub bounded: Expectation,
    pub compact: Expectation,
    pub basis: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LadderEstimate {
    pub truncation: usize,
    pub lower_bound: f64,
    pub start: CandidateSource,
    /// Largest singular value of the matching section (Hardy `p = 2` only).
    pub l2_norm: Option<f64>,
}

/// Profile at an auxiliary exponent `q < p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuxiliaryProfile {
    pub q: f64,
    pub sigma: Option<f64>,
    pub lambda_candidate: bool,
    pub little_oh_candidate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub operator: String,
    pub symbol: FunctionSpec,
    pub space: SpaceParams,
    pub seed: u64,
    pub budget: usize,
    pub estimates: Vec<LadderEstimate>,
    /// Log-log slope of the lower bounds against the truncation.
    pub growth_slope: Option<f64>,
    pub boundedness: Verdict,
    pub profile: LipschitzProfile,
    pub auxiliary_profiles: Vec<AuxiliaryProfile>,
    pub compactness: Option<CompactnessProbe>,
    pub prediction: Prediction,
    pub verdict: Verdict,
    pub disagreements: Vec<String>,
    pub open_question: Option<String>,
}

impl ProbeReport {
    /// CSV with header `N,estimate` from the lower-bound ladder.
    pub fn ladder_csv(&self) -> String {
        let mut out = String::from("N,estimate\n");
        for e in &self.estimates {
            let _ = writeln!(out, "{},{:e}", e.truncation, e.lower_bound);
        }
        out
    }
}

/// Whether the symbol is visibly in `C` (`sup k|b_k| < ∞`) or `K` (Cauchy
/// transforms), judged from its description.
fn symbol_classes(g: &FunctionSpec) -> (bool, bool) {
    match g {
        FunctionSpec::LogKernel => (true, true),
        FunctionSpec::CauchyTransform { .. } => (true, true),
        FunctionSpec::Polynomial { .. } | FunctionSpec::RationalKernel { .. } => (true, true),
        FunctionSpec::BoundedCoeffSeq { rule: CoeffRule::PowerLaw { exponent, .. } } => (*exponent >= 1.0, false),
    }
}

fn describe(g: &FunctionSpec) -> String {
    match g {
        FunctionSpec::Polynomial { coeffs } => format!("polynomial of degree {}", coeffs.degree()),
        FunctionSpec::LogKernel => "log 1/(1-z)".into(),
        FunctionSpec::RationalKernel { scale, pole } => format!("{scale}/(1-{pole}z)^2"),
        FunctionSpec::CauchyTransform { atoms } => format!("Cauchy transform of {} atoms", atoms.len()),
        FunctionSpec::BoundedCoeffSeq { rule: CoeffRule::PowerLaw { scale, exponent, .. } } => {
            format!("b_k = {scale} k^-{exponent}")
        }
    }
}

fn predict(
    space: &SpaceParams,
    profile: &LipschitzProfile,
    aux: &[AuxiliaryProfile],
    classes: (bool, bool),
) -> (Prediction, Option<String>) {
    let lam = profile.lambda_candidate;
    let small = profile.little_oh_candidate;
    let yn = |b: bool| if b { Expectation::Yes } else { Expectation::No };
    let p = space.p;
    if space.kind != SpaceKind::Hardy || p <= 2.0 {
        let basis = format!("bounded iff g in Λ({p},1/{p}); compact iff g in λ({p},1/{p})");
        return (Prediction { bounded: yn(lam), compact: yn(lam && small), basis }, None);
    }
    let (in_c, in_k) = classes;
    let q_lam = aux.iter().any(|a| a.lambda_candidate);
    let q_small = aux.iter().any(|a| a.little_oh_candidate && a.lambda_candidate);
    let open = format!(
        "whether g in Λ({p},1/{p}) alone makes H_g bounded on H^{p} is open; \
         numerics for Λ(q,1/q), q < p, are listed without interpretation"
    );
    let (bounded, mut basis) = if !lam {
        (Expectation::No, "H^p with p > 2: bounded only if g in Λ(p,1/p)".to_string())
    } else if in_c || in_k || q_lam {
        (Expectation::Yes, "H^p with p > 2: g in C, K, or Λ(q,1/q) for some q < p suffices".to_string())
    } else {
        (Expectation::Open, "H^p with p > 2: g in Λ(p,1/p) only".to_string())
    };
    let compact = if !(lam && small) {
        Expectation::No
    } else if q_small {
        Expectation::Yes
    } else {
        Expectation::Open
    };
    basis.push_str("; compact only if g in λ(p,1/p), and if g in λ(q,1/q) for some q < p");
    (Prediction { bounded, compact, basis }, Some(open))
}

/// Runs the Lipschitz profile, the lower-bound ladder and, when configured,
/// the compactness probe; compares the trends with what the theorems predict.
pub fn verdict_report(g: &FunctionSpec, space: &SpaceParams, config: &ProbeConfig) -> Result<ProbeReport> {
    g.validate()?;
    space.check_operator_admissible()?;
    if config.ladder.is_empty() {
        return domain("truncation ladder is empty");
    }
    let (n_min, n_max) = config.profile_blocks;
    let g_profile = materialize(g, 1usize << (n_max + 1))?;
    let profile = lipschitz_profile(&g_profile, space.p, n_min, n_max, config.tau)?;
    let auxiliary_profiles = if space.kind == SpaceKind::Hardy && space.p > 2.0 {
        (1..=3)
            .map(|j| {
                let q = 1.0 + (space.p - 1.0) * j as f64 / 4.0;
                lipschitz_profile(&g_profile, q, n_min, n_max, config.tau).map(|pr| AuxiliaryProfile {
                    q,
                    sigma: pr.sigma,
                    lambda_candidate: pr.lambda_candidate,
                    little_oh_candidate: pr.little_oh_candidate,
                })
            })
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };

    let hardy2 = space.kind == SpaceKind::Hardy && space.p == 2.0;
    let estimates = config
        .ladder
        .iter()
        .map(|&n| {
            let gn = materialize(g, n)?;
            let lb = norm_lower_bound(&gn, space, config.budget, config.seed)?;
            let l2_norm = if hardy2 && n > 0 {
                Some(l2_operator_norm(&truncated_matrix(&gn, n)?)?.value)
            } else {
                None
            };
            Ok(LadderEstimate { truncation: n, lower_bound: lb.value, start: lb.start, l2_norm })
        })
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = estimates.iter().map(|e| e.truncation as f64).collect();
    let ys: Vec<f64> = estimates.iter().map(|e| e.lower_bound).collect();
    let growth_slope = log_log_slope(&xs, &ys);
    let boundedness = match growth_slope {
        _ if ys.iter().all(|&v| v == 0.0) => Verdict::BoundedCandidate,
        Some(s) if s <= BOUNDED_SLOPE => Verdict::BoundedCandidate,
        Some(s) if s >= UNBOUNDED_SLOPE => Verdict::UnboundedCandidate,
        _ => Verdict::Inconclusive,
    };

    let compactness = if config.compactness {
        let max_n = config.n_list.iter().copied().max().unwrap_or(1) as usize;
        let degree = config.compact_degree.unwrap_or(16 * max_n);
        let gc = materialize(g, degree)?;
        Some(compactness_probe(&gc, space, &config.n_list, config.compact_threshold)?)
    } else {
        None
    };

    let (prediction, open_question) = predict(space, &profile, &auxiliary_profiles, symbol_classes(g));
    let mut disagreements = Vec::new();
    match (prediction.bounded, boundedness) {
        (Expectation::Yes, Verdict::UnboundedCandidate) => {
            disagreements.push("theory predicts bounded but lower bounds grow".to_string())
        }
        (Expectation::No, Verdict::BoundedCandidate) => {
            disagreements.push("theory predicts unbounded but lower bounds stay flat".to_string())
        }
        _ => {}
    }
    if let Some(c) = &compactness {
        match (prediction.compact, c.compact_candidate) {
            (Expectation::Yes, false) => {
                disagreements.push("theory predicts compact but H_g(f_N) does not decay".to_string())
            }
            (Expectation::No, true) => {
                disagreements.push("theory predicts non-compact but H_g(f_N) decays".to_string())
            }
            _ => {}
        }
    }
    let verdict = match (boundedness, &compactness) {
        (Verdict::UnboundedCandidate, _) => Verdict::UnboundedCandidate,
        (_, Some(c)) if c.compact_candidate => Verdict::CompactCandidate,
        (b, _) => b,
    };

    Ok(ProbeReport {
        operator: format!("H_g with g = {}", describe(g)),
        symbol: g.clone(),
        space: *space,
        seed: config.seed,
        budget: config.budget,
        estimates,
        growth_slope,
        boundedness,
        profile,
        auxiliary_profiles,
        compactness,
        prediction,
        verdict,
        disagreements,
        open_question,
    })
}
