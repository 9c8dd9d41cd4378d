//! Command-line front end: analysis, Bayes factors, sensitivity grids,
//! stratified runs, bundled replications, and oracle density curves.
//!
//! Every sampling command requires an explicit seed, and identical
//! invocations produce byte-identical outputs. Exit codes: 0 success,
//! 2 argument error, 3 data validation error, 4 numeric error.

use crate::comparators::{
    ib_bf10, ib_posterior_sample, lt_log_ml, lt_posterior_sample, IbPrior, LtHypothesis, LtPrior,
};
use crate::covariates::{
    hierarchical_sample, population_effects, population_weights, stratified_independent,
    HierarchicalHyperPrior,
};
use crate::data::{parse_strata, parse_trials, TrialData};
use crate::error::{Error, Result};
use crate::evidence::{
    bayes_factor, log_ml_h0_aggregated, log_ml_m0, log_ml_m1, log_ml_monotone, LogEvidence,
};
use crate::model::{brease_eb_prior, default_prior, AggregatedH0Prior, BreaseParams, BreasePrior};
use crate::oracle::{oracle_posterior_marginal, MarginalTarget};
use crate::replicate::{replicate, Study};
use crate::samplers::{
    exact_sample, gibbs_sample_thinned, sample_monotone, Constraint, DrawMeta, DrawSet, Method,
};
use crate::summaries::{sensitivity_grid, summarize, Estimand, GridModel, PriorParam};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(
    name = "brease",
    about = "Bayesian analysis of binary experiments via baseline risk, efficacy and side effects",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Posterior summaries, draws and evidence for one experiment.
    Analyze(AnalyzeArgs),
    /// Marginal likelihoods and Bayes factors only.
    Bf(BfArgs),
    /// Bayes factors over a grid of prior hyperparameters.
    Sensitivity(SensitivityArgs),
    /// Stratified analysis with independent or hierarchical priors.
    Strata(StrataArgs),
    /// Run a bundled case study end to end.
    Replicate(ReplicateArgs),
    /// Brute-force posterior marginal density curve.
    OracleMarginal(OracleMarginalArgs),
}

#[derive(Args, Debug)]
struct CountArgs {
    /// Adverse events in the control arm.
    #[arg(long)]
    y0: Option<u64>,
    /// Control arm size.
    #[arg(long)]
    n0: Option<u64>,
    /// Adverse events in the treatment arm.
    #[arg(long)]
    y1: Option<u64>,
    /// Treatment arm size.
    #[arg(long)]
    n1: Option<u64>,
    /// CSV file with header study,y0,N0,y1,N1 (one analysis per row).
    #[arg(long, conflicts_with_all = ["y0", "n0", "y1", "n1"])]
    input: Option<PathBuf>,
}

impl CountArgs {
    fn trials(&self) -> Result<Vec<(String, TrialData)>> {
        if let Some(path) = &self.input {
            let file = std::fs::File::open(path)?;
            return Ok(parse_trials(file)?.studies);
        }
        match (self.y0, self.n0, self.y1, self.n1) {
            (Some(y0), Some(n0), Some(y1), Some(n1)) => {
                Ok(vec![("inline".into(), TrialData::new(y0, n0, y1, n1)?)])
            }
            _ => Err(Error::domain(
                "provide either --input CSV or all of --y0 --n0 --y1 --n1",
            )),
        }
    }
}

/// Prior shorthand: default:<mu> | brease:<mu0>,<mue>,<mus>,<n0>,<ne>,<ns> |
/// eb:<n> | ib:<a> | lt:<sigma_psi>.
#[derive(Clone, Debug)]
enum PriorSpec {
    Brease(BreasePrior),
    Eb(f64),
    Ib(f64),
    Lt(f64),
}

fn parse_prior_spec(s: &str) -> Result<PriorSpec> {
    // anything wrong with the flag value is an argument error, including
    // out-of-range hyperparameters
    parse_prior_spec_inner(s).map_err(|e| Error::domain(e.to_string()))
}

fn parse_prior_spec_inner(s: &str) -> Result<PriorSpec> {
    let (family, rest) = s
        .split_once(':')
        .ok_or_else(|| Error::domain(format!("prior spec {s:?} needs the form family:params")))?;
    let nums: Vec<f64> = rest
        .split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::domain(format!("prior spec value {v:?} is not a number")))
        })
        .collect::<Result<_>>()?;
    match (family, nums.as_slice()) {
        ("default", [mu]) => Ok(PriorSpec::Brease(default_prior(*mu)?)),
        ("brease", [mu0, mue, mus, n0, ne, ns]) => {
            Ok(PriorSpec::Brease(BreasePrior::new(*mu0, *mue, *mus, *n0, *ne, *ns)?))
        }
        ("eb", [n]) => Ok(PriorSpec::Eb(*n)),
        ("ib", [a]) => Ok(PriorSpec::Ib(*a)),
        ("lt", [sigma_psi]) => Ok(PriorSpec::Lt(*sigma_psi)),
        _ => Err(Error::domain(format!(
            "prior spec {s:?} not recognized; expected default:<mu>, brease:<6 values>, eb:<n>, ib:<a> or lt:<sigma_psi>"
        ))),
    }
}

fn brease_prior_for(spec: &PriorSpec, data: &TrialData) -> Result<BreasePrior> {
    match spec {
        PriorSpec::Brease(p) => Ok(*p),
        PriorSpec::Eb(n) => brease_eb_prior(data, *n),
        _ => Err(Error::domain(
            "this operation needs a brease-family prior (default:, brease: or eb:)",
        )),
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Exact,
    Gibbs,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConstraintArg {
    None,
    NoHarm,
    NoBenefit,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    #[command(flatten)]
    counts: CountArgs,
    /// Prior shorthand (see --help).
    #[arg(long, default_value = "default:0.3")]
    prior: String,
    /// Seed; required because every sampling command must be reproducible.
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 100_000)]
    draws: u64,
    #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
    method: MethodArg,
    #[arg(long, default_value_t = 1_000)]
    burn_in: u64,
    /// Keep every k-th draw (Gibbs only).
    #[arg(long, default_value_t = 1)]
    thin: u64,
    #[arg(long, value_enum, default_value_t = ConstraintArg::None)]
    constraint: ConstraintArg,
    /// Credible-interval level.
    #[arg(long, default_value_t = 0.95)]
    level: f64,
    /// Independent chains merged by chain index.
    #[arg(long, default_value_t = 1)]
    chains: u64,
    /// Output directory (default: env BREASE_OUT_DIR, else the working
    /// directory).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn out_dir(flag: &Option<PathBuf>) -> PathBuf {
    flag.clone()
        .or_else(|| std::env::var_os("BREASE_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let mut f = std::fs::File::create(&path)?;
    f.write_all(contents.as_bytes())?;
    Ok(path)
}

fn sample_chains(
    data: &TrialData,
    prior: &BreasePrior,
    args: &AnalyzeArgs,
) -> Result<DrawSet> {
    let chains = args.chains.max(1);
    let per_chain = args.draws.div_ceil(chains);
    let constraint = match args.constraint {
        ConstraintArg::None => None,
        ConstraintArg::NoHarm => Some(Constraint::NoHarm),
        ConstraintArg::NoBenefit => Some(Constraint::NoBenefit),
    };
    let run_one = |chain: u64| -> Result<DrawSet> {
        let seed = args.seed;
        let chain_seed_stream = chain;
        match (args.method, constraint) {
            (MethodArg::Exact, None) => {
                if chains == 1 {
                    exact_sample(data, prior, per_chain, seed)
                } else {
                    let mut rng = crate::numerics::RngStream::with_stream(seed, chain_seed_stream);
                    let draws = crate::samplers::exact_draws(data, prior, per_chain, &mut rng)?;
                    Ok(DrawSet {
                        draws,
                        meta: DrawMeta {
                            seed,
                            method: Method::Exact,
                            burn_in: 0,
                            constraint: None,
                            prior: *prior,
                        },
                    })
                }
            }
            (MethodArg::Gibbs, None) => {
                let init = BreaseParams { theta0: 0.5, eta_e: 0.5, eta_s: 0.5 };
                gibbs_sample_thinned(
                    data,
                    prior,
                    args.burn_in + per_chain * args.thin,
                    args.burn_in,
                    args.thin,
                    &init,
                    seed.wrapping_add(chain),
                )
            }
            (MethodArg::Exact, Some(c)) => {
                sample_monotone(data, prior, c, Method::Exact, per_chain, 0, seed.wrapping_add(chain))
            }
            (MethodArg::Gibbs, Some(c)) => sample_monotone(
                data,
                prior,
                c,
                Method::Gibbs,
                args.burn_in + per_chain,
                args.burn_in,
                seed.wrapping_add(chain),
            ),
        }
    };
    if chains == 1 {
        return run_one(0);
    }
    let results: Vec<Result<DrawSet>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..chains).map(|c| scope.spawn(move || run_one(c))).collect();
        handles.into_iter().map(|h| h.join().expect("chain thread panicked")).collect()
    });
    let mut merged: Option<DrawSet> = None;
    for r in results {
        let set = r?;
        match &mut merged {
            None => merged = Some(set),
            Some(m) => m.draws.extend(set.draws),
        }
    }
    Ok(merged.expect("at least one chain"))
}

fn evidence_json(e: &LogEvidence, bf_vs: Option<(&str, f64)>) -> serde_json::Value {
    json!({
        "model": e.model,
        "log_ml": e.log_ml,
        "bf_vs": bf_vs.map(|(m, v)| json!({ "model": m, "bf": v })),
        "mc_error": e.mc_error,
        "data_fingerprint": format!("{:016x}", e.data_fingerprint),
    })
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<serde_json::Value> {
    let dir = out_dir(&args.out);
    let mut reports = Vec::new();
    for (label, data) in args.counts.trials()? {
        let spec = parse_prior_spec(&args.prior)?;
        let report = match &spec {
            PriorSpec::Ib(a) => {
                let prior = IbPrior::symmetric(*a)?;
                let draws = ib_posterior_sample(&data, &prior, args.draws, args.seed)?;
                let mut csv = String::from("theta0,theta1\n");
                for d in &draws {
                    csv.push_str(&format!("{},{}\n", d.theta0, d.theta1));
                }
                write_file(&dir, &format!("{label}_draws.csv"), &csv)?;
                let mut rr: Vec<f64> = draws.iter().map(|d| d.theta1 / d.theta0).collect();
                rr.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let tail = (1.0 - args.level) / 2.0;
                json!({
                    "study": label,
                    "data": data,
                    "model": "ib",
                    "a": a,
                    "risk_ratio": {
                        "median": crate::summaries::quantile(&rr, 0.5),
                        "cri_low": crate::summaries::quantile(&rr, tail),
                        "cri_high": crate::summaries::quantile(&rr, 1.0 - tail),
                        "level": args.level,
                    },
                    "bf10": ib_bf10(&data, *a)?,
                })
            }
            PriorSpec::Lt(sigma_psi) => {
                let prior = LtPrior::new(0.0, 0.0, 1.0, *sigma_psi)?;
                let set = lt_posterior_sample(&data, &prior, args.draws + args.burn_in, args.burn_in, args.seed)?;
                let mut csv = String::from("beta,psi,theta0,theta1\n");
                for d in &set.draws {
                    csv.push_str(&format!("{},{},{},{}\n", d.beta, d.psi, d.theta0, d.theta1));
                }
                write_file(&dir, &format!("{label}_draws.csv"), &csv)?;
                let mut rr: Vec<f64> = set.draws.iter().map(|d| d.theta1 / d.theta0).collect();
                rr.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let tail = (1.0 - args.level) / 2.0;
                let bf10 = (lt_log_ml(&data, &prior, LtHypothesis::H1)?.log_ml
                    - lt_log_ml(&data, &prior, LtHypothesis::H0)?.log_ml)
                    .exp();
                json!({
                    "study": label,
                    "data": data,
                    "model": "lt",
                    "sigma_psi": sigma_psi,
                    "acceptance_rate": set.acceptance_rate,
                    "risk_ratio": {
                        "median": crate::summaries::quantile(&rr, 0.5),
                        "cri_low": crate::summaries::quantile(&rr, tail),
                        "cri_high": crate::summaries::quantile(&rr, 1.0 - tail),
                        "level": args.level,
                    },
                    "bf10": bf10,
                })
            }
            _ => {
                let prior = brease_prior_for(&spec, &data)?;
                let set = sample_chains(&data, &prior, args)?;
                write_file(&dir, &format!("{label}_draws.csv"), &set.to_csv())?;
                write_file(
                    &dir,
                    &format!("{label}_draws_meta.json"),
                    &serde_json::to_string_pretty(&set.metadata_json())?,
                )?;
                let mut summaries = Vec::new();
                for estimand in Estimand::ALL {
                    // ratio estimands are skipped when undefined on the draws
                    if let Ok(s) = summarize(&set, estimand, args.level) {
                        summaries.push(json!({
                            "estimand": s.estimand,
                            "median": s.median,
                            "cri_low": s.cri_low,
                            "cri_high": s.cri_high,
                        }));
                    }
                }
                let m0 = log_ml_m0(&data, &prior)?;
                let m1 = log_ml_m1(&data, &prior)?;
                let bf10 = bayes_factor(&m1, &m0)?;
                json!({
                    "study": label,
                    "data": data,
                    "model": "brease",
                    "prior": prior,
                    "method": match args.method { MethodArg::Exact => "exact", MethodArg::Gibbs => "gibbs" },
                    "n_draws": set.len(),
                    "level": args.level,
                    "summaries": summaries,
                    "evidence": [
                        evidence_json(&m0, None),
                        evidence_json(&m1, Some(("m0", bf10.bf))),
                    ],
                    "bf10": bf10.bf,
                })
            }
        };
        reports.push(report);
    }
    let value = if reports.len() == 1 {
        reports.pop().expect("one report")
    } else {
        json!(reports)
    };
    write_file(&dir, "report.json", &serde_json::to_string_pretty(&value)?)?;
    Ok(value)
}

#[derive(Args, Debug)]
struct BfArgs {
    #[command(flatten)]
    counts: CountArgs,
    /// Prior shorthand; brease families compare M1 against M0.
    #[arg(long, default_value = "default:0.3")]
    prior: String,
    /// Comparator family: brease, ib or lt (overrides --prior family).
    #[arg(long)]
    comparator: Option<String>,
    /// Symmetric IB hyperparameter.
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    /// LT prior scale on the log odds ratio.
    #[arg(long, default_value_t = 1.0)]
    sigma_psi: f64,
    /// Also report the monotone and aggregated-null evidences.
    #[arg(long)]
    extended: bool,
}

fn cmd_bf(args: &BfArgs) -> Result<serde_json::Value> {
    let mut reports = Vec::new();
    for (label, data) in args.counts.trials()? {
        let comparator = args.comparator.as_deref().unwrap_or("brease");
        let report = match comparator {
            "ib" => {
                let bf10 = ib_bf10(&data, args.a)?;
                json!({
                    "study": label,
                    "comparator": "ib",
                    "a": args.a,
                    "bf10": bf10,
                    "bf01": 1.0 / bf10,
                })
            }
            "lt" => {
                let prior = LtPrior::new(0.0, 0.0, 1.0, args.sigma_psi)?;
                let h1 = lt_log_ml(&data, &prior, LtHypothesis::H1)?;
                let h0 = lt_log_ml(&data, &prior, LtHypothesis::H0)?;
                let bf = bayes_factor(&h1, &h0)?;
                json!({
                    "study": label,
                    "comparator": "lt",
                    "sigma_psi": args.sigma_psi,
                    "evidence": [evidence_json(&h0, None), evidence_json(&h1, None)],
                    "bf10": bf.bf,
                    "log_bf10": bf.log_bf,
                })
            }
            "brease" => {
                let spec = parse_prior_spec(&args.prior)?;
                let prior = brease_prior_for(&spec, &data)?;
                let m0 = log_ml_m0(&data, &prior)?;
                let m1 = log_ml_m1(&data, &prior)?;
                let bf10 = bayes_factor(&m1, &m0)?;
                let mut evidence = vec![
                    evidence_json(&m0, None),
                    evidence_json(&m1, Some(("m0", bf10.bf))),
                ];
                if args.extended {
                    let nh = log_ml_monotone(&data, &prior, Constraint::NoHarm)?;
                    let nb = log_ml_monotone(&data, &prior, Constraint::NoBenefit)?;
                    let h0 =
                        log_ml_h0_aggregated(&data, &AggregatedH0Prior::from_brease(&prior))?;
                    evidence.push(evidence_json(&nh, Some(("m0", bayes_factor(&nh, &m0)?.bf))));
                    evidence.push(evidence_json(&nb, Some(("m0", bayes_factor(&nb, &m0)?.bf))));
                    evidence.push(evidence_json(&h0, None));
                }
                json!({
                    "study": label,
                    "comparator": "brease",
                    "prior": prior,
                    "evidence": evidence,
                    "bf10": bf10.bf,
                    "log_bf10": bf10.log_bf,
                })
            }
            other => {
                return Err(Error::domain(format!(
                    "unknown comparator {other:?}; expected brease, ib or lt"
                )))
            }
        };
        reports.push(report);
    }
    Ok(if reports.len() == 1 { reports.pop().expect("one") } else { json!(reports) })
}

#[derive(Args, Debug)]
struct SensitivityArgs {
    #[command(flatten)]
    counts: CountArgs,
    /// Base prior the axes perturb.
    #[arg(long, default_value = "brease:0.5,0.5,0.5,2,1,1")]
    prior: String,
    /// First axis as param=start:stop:count (params mu0, mue, mus, n0, ne, ns).
    #[arg(long)]
    axis1: String,
    /// Second axis; a single value gives a one-dimensional sweep.
    #[arg(long)]
    axis2: String,
    /// Numerator model: m0, m1, no-harm, no-benefit or h0-aggregated.
    #[arg(long, default_value = "m1")]
    num: String,
    /// Denominator model.
    #[arg(long, default_value = "m0")]
    den: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_axis(s: &str) -> Result<(PriorParam, Vec<f64>)> {
    let (name, range) = s
        .split_once('=')
        .ok_or_else(|| Error::domain(format!("axis {s:?} needs the form param=start:stop:count")))?;
    let param = match name {
        "mu0" => PriorParam::Mu0,
        "mue" => PriorParam::MuE,
        "mus" => PriorParam::MuS,
        "n0" => PriorParam::N0,
        "ne" => PriorParam::NE,
        "ns" => PriorParam::NS,
        other => return Err(Error::domain(format!("unknown prior parameter {other:?}"))),
    };
    let parts: Vec<&str> = range.split(':').collect();
    let values = match parts.as_slice() {
        [single] => vec![single
            .parse::<f64>()
            .map_err(|_| Error::domain(format!("axis value {single:?} is not a number")))?],
        [start, stop, count] => {
            let start: f64 = start
                .parse()
                .map_err(|_| Error::domain(format!("bad axis start {start:?}")))?;
            let stop: f64 =
                stop.parse().map_err(|_| Error::domain(format!("bad axis stop {stop:?}")))?;
            let count: usize = count
                .parse()
                .map_err(|_| Error::domain(format!("bad axis count {count:?}")))?;
            if count < 1 {
                return Err(Error::domain("axis count must be at least 1"));
            }
            if count == 1 {
                vec![start]
            } else {
                (0..count)
                    .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
                    .collect()
            }
        }
        _ => {
            return Err(Error::domain(format!(
                "axis range {range:?} needs start:stop:count or a single value"
            )))
        }
    };
    Ok((param, values))
}

fn parse_grid_model(s: &str) -> Result<GridModel> {
    match s {
        "m0" => Ok(GridModel::M0),
        "m1" => Ok(GridModel::M1),
        "no-harm" => Ok(GridModel::NoHarm),
        "no-benefit" => Ok(GridModel::NoBenefit),
        "h0-aggregated" => Ok(GridModel::H0Aggregated),
        other => Err(Error::domain(format!(
            "unknown model {other:?}; expected m0, m1, no-harm, no-benefit or h0-aggregated"
        ))),
    }
}

fn cmd_sensitivity(args: &SensitivityArgs) -> Result<serde_json::Value> {
    let trials = args.counts.trials()?;
    if trials.len() != 1 {
        return Err(Error::domain("sensitivity grids run on a single experiment"));
    }
    let (label, data) = &trials[0];
    let spec = parse_prior_spec(&args.prior)?;
    let base = brease_prior_for(&spec, data)?;
    let axis1 = parse_axis(&args.axis1)?;
    let axis2 = parse_axis(&args.axis2)?;
    let grid = sensitivity_grid(
        data,
        &base,
        (axis1.0, &axis1.1),
        (axis2.0, &axis2.1),
        (parse_grid_model(&args.num)?, parse_grid_model(&args.den)?),
    )?;
    let csv = grid.to_csv();
    let dir = out_dir(&args.out);
    let path = write_file(&dir, &format!("{label}_sensitivity.csv"), &csv)?;
    let min = grid.points.iter().map(|p| p.bf).fold(f64::INFINITY, f64::min);
    let max = grid.points.iter().map(|p| p.bf).fold(f64::NEG_INFINITY, f64::max);
    Ok(json!({
        "study": label,
        "points": grid.points.len(),
        "bf_min": min,
        "bf_max": max,
        "csv": path,
    }))
}

#[derive(Args, Debug)]
struct StrataArgs {
    /// Stratified CSV with header stratum,y0,N0,y1,N1.
    #[arg(long)]
    input: PathBuf,
    /// independent or hierarchical.
    #[arg(long, default_value = "independent")]
    mode: String,
    /// Prior for independent mode (one shared spec).
    #[arg(long, default_value = "default:0.3")]
    prior: String,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 100_000)]
    draws: u64,
    #[arg(long, default_value_t = 20_000)]
    burn_in: u64,
    /// Hyperprior means lambda0,lambdae,lambdas.
    #[arg(long, default_value = "0.5,0.5,0.5")]
    lambda: String,
    /// Hyperprior sample sizes nu0,nue,nus.
    #[arg(long, default_value = "10,10,10")]
    nu: String,
    /// Gamma shape and rate for the pooled sizes.
    #[arg(long, default_value = "10,0.1")]
    gamma: String,
    /// Also report population (marginal) effects.
    #[arg(long)]
    population: bool,
    #[arg(long, default_value_t = 0.95)]
    level: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_triple(s: &str, what: &str) -> Result<[f64; 3]> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| Error::domain(format!("{what} component {x:?} is not a number")))
        })
        .collect::<Result<_>>()?;
    v.try_into()
        .map_err(|_| Error::domain(format!("{what} needs exactly three comma-separated values")))
}

fn cmd_strata(args: &StrataArgs) -> Result<serde_json::Value> {
    let file = std::fs::File::open(&args.input)?;
    let data = parse_strata(file)?;
    let dir = out_dir(&args.out);
    let draws = match args.mode.as_str() {
        "independent" => {
            let spec = parse_prior_spec(&args.prior)?;
            let priors: Vec<BreasePrior> = data
                .strata
                .iter()
                .map(|(_, d)| brease_prior_for(&spec, d))
                .collect::<Result<_>>()?;
            stratified_independent(&data, &priors, args.draws, args.seed)?
        }
        "hierarchical" => {
            let lambda = parse_triple(&args.lambda, "--lambda")?;
            let nu = parse_triple(&args.nu, "--nu")?;
            let g: Vec<f64> = args
                .gamma
                .split(',')
                .map(|x| {
                    x.trim().parse::<f64>().map_err(|_| {
                        Error::domain(format!("--gamma component {x:?} is not a number"))
                    })
                })
                .collect::<Result<_>>()?;
            if g.len() != 2 {
                return Err(Error::domain("--gamma needs shape,rate"));
            }
            let hyper = HierarchicalHyperPrior {
                lambda0: lambda[0],
                lambdae: lambda[1],
                lambdas: lambda[2],
                nu0: nu[0],
                nue: nu[1],
                nus: nu[2],
                shape0: g[0],
                rate0: g[1],
                shapee: g[0],
                ratee: g[1],
                shapes: g[0],
                rates: g[1],
            };
            hierarchical_sample(&data, &hyper, args.burn_in + args.draws, args.burn_in, args.seed, None)?
        }
        other => {
            return Err(Error::domain(format!(
                "unknown mode {other:?}; expected independent or hierarchical"
            )))
        }
    };
    let mut strata_reports = Vec::new();
    let mut chain_csv = String::from("stratum,theta0,eta_e,eta_s,theta1\n");
    for (label, set) in draws.labels.iter().zip(&draws.per_stratum) {
        let ve = summarize(set, Estimand::VaccineEfficacy, args.level)?;
        let rr = summarize(set, Estimand::RiskRatio, args.level)?;
        strata_reports.push(json!({
            "stratum": label,
            "vaccine_efficacy": {
                "median": ve.median, "cri_low": ve.cri_low, "cri_high": ve.cri_high,
            },
            "risk_ratio": {
                "median": rr.median, "cri_low": rr.cri_low, "cri_high": rr.cri_high,
            },
        }));
        for p in set.draws.iter().take(10_000) {
            chain_csv.push_str(&format!(
                "{},{},{},{},{}\n",
                label, p.theta0, p.eta_e, p.eta_s, p.theta1()
            ));
        }
    }
    write_file(&dir, "strata_draws.csv", &chain_csv)?;
    let population = if args.population {
        let counts: Vec<u64> = data.strata.iter().map(|(_, d)| d.total()).collect();
        let pop = population_effects(&draws, &counts, 1.0, args.seed.wrapping_add(99))?;
        let mut rr: Vec<f64> = pop.iter().map(|p| p.risk_ratio).collect();
        rr.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let tail = (1.0 - args.level) / 2.0;
        let w = population_weights(&data, 1.0)?;
        Some(json!({
            "risk_ratio": {
                "median": crate::summaries::quantile(&rr, 0.5),
                "cri_low": crate::summaries::quantile(&rr, tail),
                "cri_high": crate::summaries::quantile(&rr, 1.0 - tail),
            },
            "weights": w.probabilities,
            "propensities": w.propensities,
        }))
    } else {
        None
    };
    if let Some(chain) = &draws.hyper_chain {
        let mut csv = String::from("mu0,mue,mus,n0,ne,ns\n");
        for h in chain {
            csv.push_str(&format!(
                "{},{},{},{},{},{}\n",
                h.mu0, h.mue, h.mus, h.n0, h.ne, h.ns
            ));
        }
        write_file(&dir, "hyper_chain.csv", &csv)?;
    }
    let report = json!({
        "mode": args.mode,
        "strata": strata_reports,
        "population": population,
        "acceptance_rates": draws.acceptance_rates,
        "warnings": draws.warnings,
    });
    write_file(&dir, "strata_report.json", &serde_json::to_string_pretty(&report)?)?;
    Ok(report)
}

#[derive(Args, Debug)]
struct ReplicateArgs {
    /// aspirin_phs, covid_pfizer or pathological.
    study: Study,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, default_value_t = 100_000)]
    draws: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OracleMarginalArgs {
    #[command(flatten)]
    counts: CountArgs,
    #[arg(long, default_value = "default:0.3")]
    prior: String,
    /// theta0 or theta1.
    #[arg(long, default_value = "theta0")]
    target: String,
    #[arg(long, default_value_t = 100)]
    grid: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_oracle_marginal(args: &OracleMarginalArgs) -> Result<serde_json::Value> {
    let trials = args.counts.trials()?;
    if trials.len() != 1 {
        return Err(Error::domain("oracle marginals run on a single experiment"));
    }
    let (label, data) = &trials[0];
    let spec = parse_prior_spec(&args.prior)?;
    let prior = brease_prior_for(&spec, data)?;
    let target = match args.target.as_str() {
        "theta0" => MarginalTarget::Theta0,
        "theta1" => MarginalTarget::Theta1,
        other => return Err(Error::domain(format!("unknown target {other:?}"))),
    };
    let table = oracle_posterior_marginal(data, &prior, target, args.grid)?;
    let mut csv = String::from("center,density,mass\n");
    for ((c, d), m) in table.centers.iter().zip(&table.density).zip(&table.masses) {
        csv.push_str(&format!("{c},{d},{m}\n"));
    }
    let dir = out_dir(&args.out);
    let path = write_file(&dir, &format!("{label}_{}_marginal.csv", args.target), &csv)?;
    Ok(json!({ "study": label, "target": args.target, "grid": args.grid, "csv": path }))
}

/// Parse argv and run; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match &cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Bf(args) => cmd_bf(args),
        Command::Sensitivity(args) => cmd_sensitivity(args),
        Command::Strata(args) => cmd_strata(args),
        Command::Replicate(args) => {
            replicate(args.study, args.seed, args.draws).and_then(|report| {
                let dir = out_dir(&args.out);
                write_file(&dir, "replicate_report.json", &serde_json::to_string_pretty(&report)?)?;
                Ok(report)
            })
        }
        Command::OracleMarginal(args) => cmd_oracle_marginal(args),
    };
    match result {
        Ok(report) => {
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prior_spec_grammar() {
        assert!(matches!(
            parse_prior_spec("default:0.3").unwrap(),
            PriorSpec::Brease(p) if p.mue == 0.3
        ));
        assert!(matches!(
            parse_prior_spec("brease:0.5,0.3,0.2,2,1,1").unwrap(),
            PriorSpec::Brease(p) if p.mus == 0.2
        ));
        assert!(matches!(parse_prior_spec("eb:1").unwrap(), PriorSpec::Eb(n) if n == 1.0));
        assert!(matches!(parse_prior_spec("ib:1").unwrap(), PriorSpec::Ib(a) if a == 1.0));
        assert!(matches!(parse_prior_spec("lt:2").unwrap(), PriorSpec::Lt(s) if s == 2.0));
        assert!(parse_prior_spec("default:1.5").is_err());
        assert!(parse_prior_spec("nonsense").is_err());
        assert!(parse_prior_spec("brease:1,2").is_err());
    }

    #[test]
    fn axis_grammar() {
        let (p, v) = parse_axis("mus=0.01:0.5:3").unwrap();
        assert_eq!(p, PriorParam::MuS);
        assert_eq!(v.len(), 3);
        assert_eq!(v[0], 0.01);
        assert_eq!(v[2], 0.5);
        let (_, v) = parse_axis("ns=1").unwrap();
        assert_eq!(v, vec![1.0]);
        assert!(parse_axis("bogus=1:2:3").is_err());
        assert!(parse_axis("mus").is_err());
    }
}
