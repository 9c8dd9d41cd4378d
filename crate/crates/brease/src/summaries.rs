//! Posterior summarization of estimands and analytic sensitivity grids.

use crate::data::TrialData;
use crate::error::{Error, Result};
use crate::evidence::{log_ml_h0_aggregated, log_ml_m0, log_ml_m1, log_ml_monotone};
use crate::model::{AggregatedH0Prior, BreasePrior};
use crate::samplers::{Constraint, DrawSet};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimand {
    Theta0,
    Theta1,
    EtaE,
    EtaS,
    RiskRatio,
    RiskDifference,
    VaccineEfficacy,
}

impl Estimand {
    pub const ALL: [Estimand; 7] = [
        Estimand::Theta0,
        Estimand::Theta1,
        Estimand::EtaE,
        Estimand::EtaS,
        Estimand::RiskRatio,
        Estimand::RiskDifference,
        Estimand::VaccineEfficacy,
    ];
}

/// Posterior median and equal-tailed credible interval of one estimand.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct EstimandSummary {
    pub estimand: Estimand,
    pub median: f64,
    pub cri_low: f64,
    pub cri_high: f64,
    pub level: f64,
    pub n_draws: usize,
}

/// Linear-interpolation quantile of a sorted sample.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    debug_assert!(n > 0);
    let h = (n - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
    }
}

/// Evaluate an estimand on each draw; ratio estimands reject draw sets
/// containing a zero baseline risk.
fn estimand_values(draws: &DrawSet, estimand: Estimand) -> Result<Vec<f64>> {
    if matches!(estimand, Estimand::RiskRatio | Estimand::VaccineEfficacy)
        && draws.draws.iter().any(|p| p.theta0 == 0.0)
    {
        return Err(Error::domain(format!(
            "{estimand:?} is undefined on draws with theta0 = 0"
        )));
    }
    Ok(draws
        .draws
        .iter()
        .map(|p| match estimand {
            Estimand::Theta0 => p.theta0,
            Estimand::Theta1 => p.theta1(),
            Estimand::EtaE => p.eta_e,
            Estimand::EtaS => p.eta_s,
            Estimand::RiskRatio => p.theta1() / p.theta0,
            Estimand::RiskDifference => p.theta1() - p.theta0,
            Estimand::VaccineEfficacy => 1.0 - p.theta1() / p.theta0,
        })
        .collect())
}

/// Median and equal-tailed interval at the given level.
pub fn summarize(draws: &DrawSet, estimand: Estimand, level: f64) -> Result<EstimandSummary> {
    if draws.len() < 100 {
        return Err(Error::domain(format!(
            "summaries need at least 100 draws, got {}",
            draws.len()
        )));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::domain(format!("level must lie in (0,1), got {level}")));
    }
    let mut vals = estimand_values(draws, estimand)?;
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let tail = (1.0 - level) / 2.0;
    Ok(EstimandSummary {
        estimand,
        median: quantile(&vals, 0.5),
        cri_low: quantile(&vals, tail),
        cri_high: quantile(&vals, 1.0 - tail),
        level,
        n_draws: vals.len(),
    })
}

/// A hyperparameter axis of the sensitivity grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PriorParam {
    Mu0,
    MuE,
    MuS,
    N0,
    NE,
    NS,
}

impl PriorParam {
    fn apply(&self, prior: &BreasePrior, value: f64) -> Result<BreasePrior> {
        let mut p = *prior;
        match self {
            PriorParam::Mu0 => p.mu0 = value,
            PriorParam::MuE => p.mue = value,
            PriorParam::MuS => p.mus = value,
            PriorParam::N0 => p.n0 = value,
            PriorParam::NE => p.ne = value,
            PriorParam::NS => p.ns = value,
        }
        BreasePrior::new(p.mu0, p.mue, p.mus, p.n0, p.ne, p.ns)
    }
}

/// Models available on the analytic sensitivity grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridModel {
    M0,
    M1,
    NoHarm,
    NoBenefit,
    H0Aggregated,
}

fn grid_log_ml(data: &TrialData, prior: &BreasePrior, model: GridModel) -> Result<f64> {
    Ok(match model {
        GridModel::M0 => log_ml_m0(data, prior)?.log_ml,
        GridModel::M1 => log_ml_m1(data, prior)?.log_ml,
        GridModel::NoHarm => log_ml_monotone(data, prior, Constraint::NoHarm)?.log_ml,
        GridModel::NoBenefit => log_ml_monotone(data, prior, Constraint::NoBenefit)?.log_ml,
        GridModel::H0Aggregated => {
            log_ml_h0_aggregated(data, &AggregatedH0Prior::from_brease(prior))?.log_ml
        }
    })
}

/// One evaluated grid point.
#[derive(Clone, Debug, Serialize)]
pub struct GridPoint {
    pub param1: PriorParam,
    pub value1: f64,
    pub param2: PriorParam,
    pub value2: f64,
    pub log_bf: f64,
    pub bf: f64,
    pub band: &'static str,
}

/// A lattice of hyperparameter points with per-point Bayes factors.
#[derive(Clone, Debug, Serialize)]
pub struct SensitivityGrid {
    pub points: Vec<GridPoint>,
    pub numerator: GridModel,
    pub denominator: GridModel,
}

/// Evidence band labels at the conventional thresholds 1, 3 and 10.
pub fn jeffreys_band(bf: f64) -> &'static str {
    if bf < 1.0 {
        "favors_h0"
    } else if bf < 3.0 {
        "weak"
    } else if bf < 10.0 {
        "moderate"
    } else {
        "strong"
    }
}

/// Evaluate the Bayes factor of the model pair over the outer product of
/// the two hyperparameter axes.
pub fn sensitivity_grid(
    data: &TrialData,
    base_prior: &BreasePrior,
    axis1: (PriorParam, &[f64]),
    axis2: (PriorParam, &[f64]),
    evidence_pair: (GridModel, GridModel),
) -> Result<SensitivityGrid> {
    data.validate()?;
    if axis1.1.is_empty() || axis2.1.is_empty() {
        return Err(Error::domain("sensitivity axes must be non-empty"));
    }
    let mut points = Vec::with_capacity(axis1.1.len() * axis2.1.len());
    for &v1 in axis1.1 {
        let p1 = axis1.0.apply(base_prior, v1)?;
        for &v2 in axis2.1 {
            let prior = axis2.0.apply(&p1, v2)?;
            let log_bf = grid_log_ml(data, &prior, evidence_pair.0)?
                - grid_log_ml(data, &prior, evidence_pair.1)?;
            let bf = log_bf.exp();
            points.push(GridPoint {
                param1: axis1.0,
                value1: v1,
                param2: axis2.0,
                value2: v2,
                log_bf,
                bf,
                band: jeffreys_band(bf),
            });
        }
    }
    Ok(SensitivityGrid {
        points,
        numerator: evidence_pair.0,
        denominator: evidence_pair.1,
    })
}

impl SensitivityGrid {
    /// CSV export with columns param1,value1,param2,value2,log_bf,bf,band.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("param1,value1,param2,value2,log_bf,bf,band\n");
        for p in &self.points {
            s.push_str(&format!(
                "{:?},{},{:?},{},{},{},{}\n",
                p.param1, p.value1, p.param2, p.value2, p.log_bf, p.bf, p.band
            ));
        }
        s
    }
}
