use std::fmt::Write as _;
use std::time::Instant;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use hgops::norms::{
    decomposition_norm, k_p_functional, lipschitz_profile, space_norm_detailed, NormEvaluation, DEFAULT_TAU,
};
use hgops::operators::{
    apply_hg_detailed, apply_hg_sublinear_detailed, hilbert_classic, hs_sum, HsSpace, MomentMethod,
};
use hgops::probes::{l2_operator_norm, truncated_matrix, verdict_report, ProbeConfig, DEFAULT_COMPACT_THRESHOLD};
use hgops::series::{materialize, FunctionSpec, PowerSeries};
use hgops::{HgError, SpaceParams};
use serde_json::json;

use crate::parse;

#[derive(Parser, Debug)]
#[command(name = "hgops", version, about = "Generalized Hilbert operators on spaces of analytic functions")]
pub struct Cli {
    /// Worker threads (defaults to all cores)
    #[arg(long, global = true, env = "HGOPS_THREADS")]
    pub threads: Option<usize>,
    /// Write the result here instead of stdout
    #[arg(long, short, global = true)]
    pub output: Option<std::path::PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Apply an operator and print the output series as JSON
    Apply(ApplyArgs),
    /// Compute a norm or coefficient functional
    Norm(NormArgs),
    /// Dyadic block profile of g' (mean Lipschitz diagnostic)
    Profile(ProfileArgs),
    /// Boundedness/compactness verdict report
    Probe(ProbeArgs),
    /// Hilbert-Schmidt partial sums as CSV (K,partial_sum)
    Hs(HsArgs),
    /// Largest singular values of truncated matrices as CSV (N,estimate)
    Opnorm(OpnormArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Classic,
    Hg,
    Sublinear,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct ApplyArgs {
    #[arg(long, value_enum, default_value = "hg")]
    pub op: Op,
    /// Symbol g (required for --op hg)
    #[arg(long)]
    pub g: Option<String>,
    /// Input function f
    #[arg(long)]
    pub f: String,
    /// Output degree
    #[arg(long = "K", default_value_t = 16)]
    pub k: usize,
    /// Degree at which f is materialized when it is not a polynomial
    #[arg(long, default_value_t = 256)]
    pub f_degree: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormSpace {
    Hardy,
    Bergman,
    Dirichlet,
    Decomposition,
    Kp,
}

#[derive(Args, Debug)]
pub struct NormArgs {
    #[arg(long, value_enum)]
    pub space: NormSpace,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// Weight α (Bergman, Dirichlet)
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub alpha: f64,
    /// Exponent β (decomposition norm)
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub beta: f64,
    #[arg(long)]
    pub f: String,
    /// Degree at which f is materialized when it is not a polynomial
    #[arg(long, default_value_t = 256)]
    pub degree: usize,
}

#[derive(Args, Debug)]
pub struct ProfileArgs {
    #[arg(long)]
    pub g: String,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 4)]
    pub n_min: u32,
    #[arg(long, default_value_t = 10)]
    pub n_max: u32,
    #[arg(long, default_value_t = DEFAULT_TAU)]
    pub tau: f64,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbeSpace {
    Hardy,
    Bergman,
    Dirichlet,
}

#[derive(Args, Debug)]
pub struct ProbeArgs {
    #[arg(long)]
    pub g: String,
    #[arg(long, value_enum, default_value = "hardy")]
    pub space: ProbeSpace,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub alpha: f64,
    /// Truncation degrees for the lower-bound ladder
    #[arg(long, default_value = "64,256,1024")]
    pub ladder: String,
    /// N values for the compactness probe
    #[arg(long, default_value = "4,16,64,256,1024")]
    pub n_ladder: String,
    /// Random trials per truncation
    #[arg(long, default_value_t = 16)]
    pub budget: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also run the compactness probe
    #[arg(long)]
    pub compact: bool,
    /// Decay factor that counts as compact
    #[arg(long, default_value_t = DEFAULT_COMPACT_THRESHOLD)]
    pub compact_threshold: f64,
    #[arg(long, default_value_t = 4)]
    pub n_min: u32,
    #[arg(long, default_value_t = 10)]
    pub n_max: u32,
    #[arg(long, default_value_t = DEFAULT_TAU)]
    pub tau: f64,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum HsKind {
    H2,
    Bergman,
    Dirichlet,
}

#[derive(Args, Debug)]
pub struct HsArgs {
    #[arg(long)]
    pub g: String,
    #[arg(long, value_enum, default_value = "h2")]
    pub space: HsKind,
    /// Weight α: in (-1, 0) for Bergman, (0, 1] for Dirichlet
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Largest cutoff
    #[arg(long = "K", default_value_t = 1000)]
    pub k: usize,
}

#[derive(Args, Debug)]
pub struct OpnormArgs {
    #[arg(long)]
    pub g: String,
    /// Matrix sizes
    #[arg(long, default_value = "2,64,256,1024")]
    pub ladder: String,
}

fn series_of(spec: &FunctionSpec, degree: usize) -> Result<PowerSeries> {
    Ok(match spec {
        FunctionSpec::Polynomial { coeffs } => coeffs.clone(),
        other => materialize(other, degree)?,
    })
}

fn method_name(m: MomentMethod) -> &'static str {
    match m {
        MomentMethod::ClosedForm => "closed_form",
        MomentMethod::Quadrature => "quadrature",
    }
}

fn pretty(v: &serde_json::Value) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn apply(a: &ApplyArgs) -> Result<String> {
    let f = parse::function(&a.f)?;
    let (series, provenance) = match a.op {
        Op::Classic => {
            let fs = series_of(&f, a.f_degree)?;
            (hilbert_classic(&fs, a.k), json!({ "op": "classic", "moment_method": "closed_form" }))
        }
        Op::Hg => {
            let Some(g) = &a.g else { bail!(HgError::Domain("--op hg needs --g".into())) };
            let g = materialize(&parse::function(g)?, a.k + 1)?;
            let f = match f {
                FunctionSpec::BoundedCoeffSeq { .. } => materialize(&f, a.f_degree)?.into(),
                other => other,
            };
            let (s, mu) = apply_hg_detailed(&g, &f, a.k)?;
            let prov = json!({
                "op": "hg",
                "moment_method": method_name(mu.method),
                "max_moment_error": mu.max_error(),
            });
            (s, prov)
        }
        Op::Sublinear => {
            let fs = series_of(&f, a.f_degree)?;
            let (s, mu) = apply_hg_sublinear_detailed(&fs, a.k)?;
            (s, json!({ "op": "sublinear", "moment_method": method_name(mu.method), "max_moment_error": mu.max_error() }))
        }
    };
    pretty(&json!({ "series": series, "provenance": provenance }))
}

fn resolutions(e: &NormEvaluation) -> serde_json::Value {
    json!({
        "angular_samples": e.angular_samples,
        "radial_nodes": e.radial_nodes,
        "radial_rel_change": e.radial_rel_change,
        "converged": e.converged,
    })
}

fn norm(a: &NormArgs) -> Result<String> {
    let f = series_of(&parse::function(&a.f)?, a.degree)?;
    let out = match a.space {
        NormSpace::Hardy | NormSpace::Bergman | NormSpace::Dirichlet => {
            let s = match a.space {
                NormSpace::Hardy => SpaceParams::hardy(a.p),
                NormSpace::Bergman => SpaceParams::bergman(a.p, a.alpha),
                _ => SpaceParams::dirichlet(a.p, a.alpha),
            };
            let e = space_norm_detailed(&f, &s)?;
            if !e.converged {
                eprintln!("radial quadrature did not reach the relative tolerance");
                return Err(HgError::NonConvergence(format!("norm estimate {} not converged", e.value)).into());
            }
            json!({ "value": e.value, "space": s, "resolutions": resolutions(&e) })
        }
        NormSpace::Decomposition => {
            let v = decomposition_norm(&f, a.p, a.beta)?;
            let m = hgops::fourier::mean_samples(f.degree(), a.p);
            json!({ "value": v, "p": a.p, "beta": a.beta, "resolutions": { "angular_samples": m } })
        }
        NormSpace::Kp => {
            let v = k_p_functional(&f, a.p)?;
            json!({ "value": v, "p": a.p, "resolutions": { "terms": f.degree() + 1 } })
        }
    };
    pretty(&out)
}

fn profile(a: &ProfileArgs) -> Result<String> {
    let spec = parse::function(&a.g)?;
    if a.n_max >= 40 {
        bail!(HgError::Domain(format!("n_max {} is too large", a.n_max)));
    }
    let g = materialize(&spec, 1usize << (a.n_max + 1))?;
    let prof = lipschitz_profile(&g, a.p, a.n_min, a.n_max, a.tau)?;
    match a.format {
        Format::Csv => Ok(prof.to_csv()),
        Format::Json => {
            let mut v = prof.report_json();
            v["blocks"] = serde_json::to_value(&prof.blocks)?;
            pretty(&v)
        }
    }
}

fn probe(a: &ProbeArgs, threads: usize) -> Result<String> {
    let spec = parse::function(&a.g)?;
    let space = match a.space {
        ProbeSpace::Hardy => SpaceParams::hardy(a.p),
        ProbeSpace::Bergman => SpaceParams::bergman(a.p, a.alpha),
        ProbeSpace::Dirichlet => SpaceParams::dirichlet(a.p, a.alpha),
    };
    let config = ProbeConfig {
        ladder: parse::list(&a.ladder)?,
        n_list: parse::list(&a.n_ladder)?,
        budget: a.budget,
        seed: a.seed,
        profile_blocks: (a.n_min, a.n_max),
        tau: a.tau,
        compactness: a.compact,
        compact_threshold: a.compact_threshold,
        compact_degree: None,
    };
    space.check_operator_admissible()?;
    eprintln!("probing {} on {} over truncations {:?}", a.g, space.label(), config.ladder);
    let start = Instant::now();
    let report = verdict_report(&spec, &space, &config)?;
    match a.format {
        Format::Csv => Ok(report.ladder_csv()),
        Format::Json => pretty(&json!({
            "report": report,
            "metadata": {
                "wall_clock_seconds": start.elapsed().as_secs_f64(),
                "threads": threads,
                "version": env!("CARGO_PKG_VERSION"),
            },
        })),
    }
}

fn hs(a: &HsArgs) -> Result<String> {
    let spec = parse::function(&a.g)?;
    let space = match (a.space, a.alpha) {
        (HsKind::H2, _) => HsSpace::H2,
        (HsKind::Bergman, Some(alpha)) => HsSpace::Bergman { alpha },
        (HsKind::Dirichlet, Some(alpha)) => HsSpace::Dirichlet { alpha },
        _ => bail!(HgError::Domain("--alpha is required for bergman and dirichlet".into())),
    };
    let g = materialize(&spec, a.k + 1)?;
    Ok(hs_sum(&g, space, a.k)?.to_csv())
}

fn opnorm(a: &OpnormArgs) -> Result<String> {
    let spec = parse::function(&a.g)?;
    let sizes: Vec<usize> = parse::list(&a.ladder)?;
    let top = sizes.iter().copied().max().unwrap_or(1);
    let g = materialize(&spec, top)?;
    let mut out = String::from("N,estimate\n");
    for n in sizes {
        let s = l2_operator_norm(&truncated_matrix(&g, n)?)?;
        let _ = writeln!(out, "{n},{:e}", s.value);
    }
    Ok(out)
}

/// Runs the parsed command and returns what should be written out.
pub fn run(cli: &Cli) -> Result<String> {
    let threads = rayon::current_num_threads();
    match &cli.command {
        Command::Apply(a) => apply(a),
        Command::Norm(a) => norm(a),
        Command::Profile(a) => profile(a),
        Command::Probe(a) => probe(a, threads),
        Command::Hs(a) => hs(a),
        Command::Opnorm(a) => opnorm(a),
    }
}
