//! Analytic marginal likelihoods and Bayes factors.
//!
//! Every model built from the independent-beta prior has a marginal
//! likelihood that is a finite weighted sum of beta functions; all sums are
//! accumulated in log space. Directional models reweight the unconstrained
//! evidence by posterior/prior event probabilities estimated from exact
//! (i.i.d.) draws, so their Monte Carlo error is a clean binomial one.

use crate::data::TrialData;
use crate::error::{Error, Result};
use crate::model::{AggregatedH0Prior, BreasePrior};
use crate::numerics::special::{
    ln_beta3, ln_beta_unchecked, ln_binomial, ln_gamma, log_add_exp, log_sum_exp_unchecked,
};
use crate::samplers::{exact_draws, no_benefit_weights, no_harm_weights, WeightTable};
use crate::numerics::rng::RngStream;
use serde::{Deserialize, Serialize};

/// Which model a log marginal likelihood belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelLabel {
    M0,
    M1,
    MMinus,
    MPlus,
    MMinusMono,
    MPlusMono,
    MMinusSym,
    H0Aggregated,
    Ib,
    Lt,
}

/// A log marginal likelihood, tagged with its model and data fingerprint.
///
/// `mc_error` is zero exactly when the value is fully analytic; it carries
/// the propagated standard error when Monte Carlo probability ratios
/// entered the computation.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct LogEvidence {
    pub model: ModelLabel,
    pub log_ml: f64,
    pub mc_error: f64,
    pub data_fingerprint: u64,
}

/// Marginal likelihood of the null model (common risk, beta prior):
/// the beta-binomial closed form.
pub fn log_ml_m0(data: &TrialData, prior: &BreasePrior) -> Result<LogEvidence> {
    data.validate()?;
    let (a0, b0) = prior.shapes0();
    let n = data.total();
    let y = data.y0 + data.y1;
    let log_ml = ln_binomial(data.n0, data.y0) + ln_binomial(data.n1, data.y1)
        + ln_beta_unchecked(y as f64 + a0, (n - y) as f64 + b0)
        - ln_beta_unchecked(a0, b0);
    Ok(LogEvidence {
        model: ModelLabel::M0,
        log_ml,
        mc_error: 0.0,
        data_fingerprint: data.fingerprint(),
    })
}

/// Cells above which the expanded sum is streamed instead of materialized.
const TABLE_CAP: usize = 20_000_000;

/// Marginal likelihood of the unconstrained model: the double sum of beta
/// functions over the latent-count table, normalized by the prior betas.
pub fn log_ml_m1(data: &TrialData, prior: &BreasePrior) -> Result<LogEvidence> {
    data.validate()?;
    let rows = (data.y1 + 1) as usize;
    let cols = (data.n1 - data.y1 + 1) as usize;
    let lse = if rows.saturating_mul(cols) <= TABLE_CAP {
        WeightTable::build(data, prior).lse
    } else {
        streamed_table_lse(data, prior)
    };
    let (a0, b0) = prior.shapes0();
    let (ae, be) = prior.shapes_e();
    let (sa, sb) = prior.shapes_s();
    let log_ml = ln_binomial(data.n0, data.y0) + ln_binomial(data.n1, data.y1)
        - ln_beta_unchecked(a0, b0)
        - ln_beta_unchecked(ae, be)
        - ln_beta_unchecked(sa, sb)
        + lse;
    Ok(LogEvidence {
        model: ModelLabel::M1,
        log_ml,
        mc_error: 0.0,
        data_fingerprint: data.fingerprint(),
    })
}

/// Row-streamed log-sum-exp of the latent-count table for data too large to
/// materialize; identical value up to floating-point associativity.
fn streamed_table_lse(data: &TrialData, prior: &BreasePrior) -> f64 {
    let (y0, y1) = (data.y0, data.y1);
    let k_max = data.n1 - data.y1;
    let n = data.total();
    let (a0, b0) = prior.shapes0();
    let (ae, be) = prior.shapes_e();
    let (sa, sb) = prior.shapes_s();
    let lg_n_0 = ln_gamma(n as f64 + a0 + b0);
    let mut row_lse = Vec::with_capacity((y1 + 1) as usize);
    let mut row = Vec::with_capacity((k_max + 1) as usize);
    for c1 in 0..=y1 {
        row.clear();
        let j = (y1 - c1) as f64;
        for p1 in 0..=k_max {
            let s = (y0 + y1 - c1 + p1) as f64;
            let v = ln_binomial(y1, c1)
                + ln_binomial(k_max, p1)
                + ln_beta_unchecked(p1 as f64 + ae, j + be)
                + ln_gamma(s + a0) + ln_gamma(n as f64 - s + b0) - lg_n_0
                + ln_beta_unchecked(c1 as f64 + sa, (k_max - p1) as f64 + sb);
            row.push(v);
        }
        row_lse.push(log_sum_exp_unchecked(&row));
    }
    log_sum_exp_unchecked(&row_lse)
}

/// Marginal likelihood under a monotonicity constraint: the one-dimensional
/// analog of the unconstrained sum.
pub fn log_ml_monotone(
    data: &TrialData,
    prior: &BreasePrior,
    constraint: crate::samplers::Constraint,
) -> Result<LogEvidence> {
    data.validate()?;
    let (a0, b0) = prior.shapes0();
    let front = ln_binomial(data.n0, data.y0) + ln_binomial(data.n1, data.y1)
        - ln_beta_unchecked(a0, b0);
    let (lse, norm, model) = match constraint {
        crate::samplers::Constraint::NoHarm => {
            let (ae, be) = prior.shapes_e();
            (
                log_sum_exp_unchecked(&no_harm_weights(data, prior)),
                ln_beta_unchecked(ae, be),
                ModelLabel::MMinusMono,
            )
        }
        crate::samplers::Constraint::NoBenefit => {
            let (sa, sb) = prior.shapes_s();
            (
                log_sum_exp_unchecked(&no_benefit_weights(data, prior)),
                ln_beta_unchecked(sa, sb),
                ModelLabel::MPlusMono,
            )
        }
    };
    Ok(LogEvidence {
        model,
        log_ml: front - norm + lse,
        mc_error: 0.0,
        data_fingerprint: data.fingerprint(),
    })
}

/// Marginal likelihood of the symmetrized one-sided benefit model: the
/// average of the no-harm model with θ0 as baseline and its arm-swapped
/// mirror, where the mirror prior's (mu0, n0) govern θ1 and (mus, ns) the
/// side effects of the control condition.
pub fn log_ml_symmetrized_minus(
    data: &TrialData,
    prior_forward: &BreasePrior,
    prior_reverse: &BreasePrior,
) -> Result<LogEvidence> {
    let fwd = log_ml_monotone(data, prior_forward, crate::samplers::Constraint::NoHarm)?;
    let swapped = data.swap_arms();
    let rev = log_ml_monotone(&swapped, prior_reverse, crate::samplers::Constraint::NoBenefit)?;
    let log_ml = log_add_exp(fwd.log_ml, rev.log_ml) - std::f64::consts::LN_2;
    Ok(LogEvidence {
        model: ModelLabel::MMinusSym,
        log_ml,
        mc_error: 0.0,
        data_fingerprint: data.fingerprint(),
    })
}

/// Marginal likelihood of the aggregated-Dirichlet null model: the double
/// sum over latent cross-arm counts of trivariate beta functions.
pub fn log_ml_h0_aggregated(data: &TrialData, prior: &AggregatedH0Prior) -> Result<LogEvidence> {
    data.validate()?;
    let (a00, a10, a11) = prior.alphas();
    let r = data.y0 + data.y1;
    let s = data.total() - r;
    let lg_total = ln_gamma((r + s) as f64 + a00 + a10 + a11);
    let ln2 = std::f64::consts::LN_2;
    // stream rows: w0 over the observed-count axis
    let lg_w1: Vec<f64> = (0..=s).map(|w1| ln_gamma((s - w1) as f64 + a00)).collect();
    let lc_s: Vec<f64> = (0..=s).map(|w1| ln_binomial(s, w1)).collect();
    let mut row_lse = Vec::with_capacity((r + 1) as usize);
    let mut row = Vec::with_capacity((s + 1) as usize);
    for w0 in 0..=r {
        row.clear();
        let base = ln_binomial(r, w0) + ln_gamma((r - w0) as f64 + a11);
        for w1 in 0..=s {
            row.push(
                base - ((w0 + w1) as f64) * ln2
                    + lc_s[w1 as usize]
                    + lg_w1[w1 as usize]
                    + ln_gamma((w0 + w1) as f64 + a10)
                    - lg_total,
            );
        }
        row_lse.push(log_sum_exp_unchecked(&row));
    }
    let log_ml = ln_binomial(data.n0, data.y0) + ln_binomial(data.n1, data.y1)
        - ln_beta3(a00, a10, a11)?
        + log_sum_exp_unchecked(&row_lse);
    Ok(LogEvidence {
        model: ModelLabel::H0Aggregated,
        log_ml,
        mc_error: 0.0,
        data_fingerprint: data.fingerprint(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Benefit,
    Harm,
}

/// Marginal likelihood of the directional model obtained by conditioning
/// the unconstrained prior on the direction event; the two event
/// probabilities are estimated from exact draws.
pub fn log_ml_directional(
    data: &TrialData,
    prior: &BreasePrior,
    direction: Direction,
    prior_draws: u64,
    posterior_draws: u64,
    seed: u64,
) -> Result<LogEvidence> {
    if prior_draws < 10_000 || posterior_draws < 10_000 {
        return Err(Error::domain(
            "directional evidence needs at least 10^4 draws per probability estimate",
        ));
    }
    let m1 = log_ml_m1(data, prior)?;
    let event = |p: &crate::model::BreaseParams| match direction {
        Direction::Benefit => p.theta1() < p.theta0,
        Direction::Harm => p.theta1() > p.theta0,
    };
    let empty = TrialData::new(0, 0, 0, 0)?;
    let mut rng = RngStream::new(seed);
    let prior_hits = exact_draws(&empty, prior, prior_draws, &mut rng)?
        .iter()
        .filter(|p| event(p))
        .count();
    let mut rng2 = RngStream::with_stream(seed, 1);
    let post_hits = exact_draws(data, prior, posterior_draws, &mut rng2)?
        .iter()
        .filter(|p| event(p))
        .count();
    if prior_hits == 0 || post_hits == 0 {
        return Err(Error::numeric(format!(
            "the {direction:?} event was never hit ({prior_hits} prior, {post_hits} posterior successes); increase the draw counts"
        )));
    }
    let p_prior = prior_hits as f64 / prior_draws as f64;
    let p_post = post_hits as f64 / posterior_draws as f64;
    // delta-method SE of ln(p_post) − ln(p_prior)
    let var = (1.0 - p_post) / (p_post * posterior_draws as f64)
        + (1.0 - p_prior) / (p_prior * prior_draws as f64);
    Ok(LogEvidence {
        model: match direction {
            Direction::Benefit => ModelLabel::MMinus,
            Direction::Harm => ModelLabel::MPlus,
        },
        log_ml: m1.log_ml + p_post.ln() - p_prior.ln(),
        mc_error: var.sqrt(),
        data_fingerprint: data.fingerprint(),
    })
}

/// A Bayes factor with its log value and propagated Monte Carlo error.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct BayesFactor {
    pub bf: f64,
    pub log_bf: f64,
    pub mc_error: f64,
}

/// BF = exp(log ML numerator − log ML denominator); refuses to compare
/// evidences computed on different data.
pub fn bayes_factor(num: &LogEvidence, den: &LogEvidence) -> Result<BayesFactor> {
    if num.data_fingerprint != den.data_fingerprint {
        return Err(Error::domain(
            "Bayes factor requested across different data sets (fingerprint mismatch)",
        ));
    }
    let log_bf = num.log_ml - den.log_ml;
    Ok(BayesFactor {
        bf: log_bf.exp(),
        log_bf,
        mc_error: (num.mc_error * num.mc_error + den.mc_error * den.mc_error).sqrt(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Functional {
    Theta0,
    EtaE,
    EtaS,
    RiskRatio,
    RiskDifference,
}

/// Analytic posterior expectation of a functional, from the mixture weights
/// and conditional beta moments.
pub fn analytic_posterior_moment(
    data: &TrialData,
    prior: &BreasePrior,
    functional: Functional,
) -> Result<f64> {
    data.validate()?;
    let table = WeightTable::build(data, prior);
    let mean = |sh: (f64, f64)| sh.0 / (sh.0 + sh.1);
    // E[1/X] for X ~ Beta(a, b) is (a+b−1)/(a−1), finite only for a > 1
    let inv_mean = |sh: (f64, f64)| (sh.0 + sh.1 - 1.0) / (sh.0 - 1.0);
    if functional == Functional::RiskRatio {
        let min_shape = data.y0 as f64 + prior.shapes0().0;
        if min_shape <= 1.0 {
            return Err(Error::domain(format!(
                "posterior risk ratio moment diverges: smallest theta0 shape {min_shape} must exceed 1"
            )));
        }
    }
    let mut acc = 0.0;
    for (c1, p1, w) in table.weights() {
        let sh = table.shapes(c1, p1);
        let v = match functional {
            Functional::Theta0 => mean(sh[0]),
            Functional::EtaE => mean(sh[1]),
            Functional::EtaS => mean(sh[2]),
            Functional::RiskDifference => {
                mean(sh[2]) - mean(sh[0]) * mean(sh[1]) - mean(sh[0]) * mean(sh[2])
            }
            Functional::RiskRatio => {
                1.0 - mean(sh[1]) - mean(sh[2]) + inv_mean(sh[0]) * mean(sh[2])
            }
        };
        acc += w * v;
    }
    Ok(acc)
}
