//! Bundled case studies and one-call replication reports.
//!
//! Counts are from the published trial reports: the Physicians' Health
//! Study aspirin arm (fatal myocardial infarction), the Pfizer-BioNTech
//! BNT162b2 trial (second primary endpoint, all-available efficacy
//! population), its published age-subgroup breakdown, and a synthetic
//! prior-data-conflict instance that defeats off-the-shelf MCMC.

use crate::comparators::{ib_bf10, lt_log_ml, LtHypothesis, LtPrior};
use crate::data::{StratifiedTrialData, TrialData};
use crate::error::Result;
use crate::evidence::{bayes_factor, log_ml_m0, log_ml_m1};
use crate::model::{default_prior, BreaseParams, BreasePrior};
use crate::oracle::{oracle_posterior_marginal, MarginalTarget};
use crate::samplers::{exact_sample, gibbs_sample_thinned, sample_monotone, Constraint, Method};
use crate::summaries::{sensitivity_grid, summarize, Estimand, GridModel, PriorParam};
use serde::{Deserialize, Serialize};
use serde_json::json;

/// Physicians' Health Study, fatal myocardial infarction: 26/11034 placebo
/// vs 10/11037 aspirin.
pub fn aspirin_phs() -> TrialData {
    TrialData { y0: 26, n0: 11034, y1: 10, n1: 11037 }
}

/// Pfizer-BioNTech COVID-19 trial: 169/20172 placebo vs 9/19965 vaccine.
pub fn covid_pfizer() -> TrialData {
    TrialData { y0: 169, n0: 20172, y1: 9, n1: 19965 }
}

/// Prior-data-conflict instance: 20/1000 vs 40/1000 with a quasi-monotone
/// prior concentrated near zero side effects.
pub fn pathological() -> (TrialData, BreasePrior) {
    (
        TrialData { y0: 20, n0: 1000, y1: 40, n1: 1000 },
        BreasePrior { mu0: 0.5, mue: 0.5, mus: 0.01, n0: 2.0, ne: 2.0, ns: 1.0 },
    )
}

/// Age-stratified counts of the Pfizer-BioNTech trial, assembled from the
/// published subgroup tables.
pub fn covid_age_strata() -> StratifiedTrialData {
    StratifiedTrialData {
        strata: vec![
            ("16-55".into(), TrialData { y0: 114, n0: 9955, y1: 5, n1: 9897 }),
            ("56-64".into(), TrialData { y0: 29, n0: 3683, y1: 2, n1: 3632 }),
            ("65-74".into(), TrialData { y0: 14, n0: 3099, y1: 1, n1: 3070 }),
            ("75+".into(), TrialData { y0: 5, n0: 785, y1: 0, n1: 774 }),
        ],
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Study {
    AspirinPhs,
    CovidPfizer,
    Pathological,
}

impl std::str::FromStr for Study {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "aspirin_phs" => Ok(Study::AspirinPhs),
            "covid_pfizer" => Ok(Study::CovidPfizer),
            "pathological" => Ok(Study::Pathological),
            other => Err(format!(
                "unknown study {other:?}; expected aspirin_phs, covid_pfizer or pathological"
            )),
        }
    }
}

fn summary_json(s: &crate::summaries::EstimandSummary) -> serde_json::Value {
    json!({
        "estimand": s.estimand,
        "median": s.median,
        "cri_low": s.cri_low,
        "cri_high": s.cri_high,
        "level": s.level,
    })
}

/// Full report bundle for one of the bundled studies.
pub fn replicate(study: Study, seed: u64, draws: u64) -> Result<serde_json::Value> {
    match study {
        Study::AspirinPhs => {
            let data = aspirin_phs();
            let prior = default_prior(0.3)?;
            let set = exact_sample(&data, &prior, draws, seed)?;
            let rr = summarize(&set, Estimand::RiskRatio, 0.95)?;
            let m1 = log_ml_m1(&data, &prior)?;
            let m0 = log_ml_m0(&data, &prior)?;
            let bf10 = bayes_factor(&m1, &m0)?;
            let ib_bf01 = 1.0 / ib_bf10(&data, 1.0)?;
            let lt = LtPrior::default_prior();
            let lt_bf10 = (lt_log_ml(&data, &lt, LtHypothesis::H1)?.log_ml
                - lt_log_ml(&data, &lt, LtHypothesis::H0)?.log_ml)
                .exp();
            let vague = BreasePrior::new(0.5, 0.5, 0.5, 2.0, 1.0, 1.0)?;
            let anchors = sensitivity_grid(
                &data,
                &vague,
                (PriorParam::MuS, &[0.01, 0.5]),
                (PriorParam::NS, &[1.0]),
                (GridModel::M1, GridModel::M0),
            )?;
            Ok(json!({
                "study": "aspirin_phs",
                "data": data,
                "risk_ratio": summary_json(&rr),
                "bf10_brease_default": bf10.bf,
                "bf01_ib_a1": ib_bf01,
                "bf10_lt_default": lt_bf10,
                "sensitivity_anchors": {
                    "bf10_at_mus_0_01": anchors.points[0].bf,
                    "bf01_at_mus_0_5": 1.0 / anchors.points[1].bf,
                },
            }))
        }
        Study::CovidPfizer => {
            let data = covid_pfizer();
            let prior = default_prior(0.3)?;
            let set = exact_sample(&data, &prior, draws, seed)?;
            let ve = summarize(&set, Estimand::VaccineEfficacy, 0.95)?;
            let nh = sample_monotone(
                &data,
                &prior,
                Constraint::NoHarm,
                Method::Exact,
                draws,
                0,
                seed + 1,
            )?;
            let eta_e = summarize(&nh, Estimand::EtaE, 0.95)?;
            let m1 = log_ml_m1(&data, &prior)?;
            let m0 = log_ml_m0(&data, &prior)?;
            let bf10 = bayes_factor(&m1, &m0)?;
            let ib = ib_bf10(&data, 1.0)?;
            let lt = LtPrior::default_prior();
            let lt_bf10 = (lt_log_ml(&data, &lt, LtHypothesis::H1)?.log_ml
                - lt_log_ml(&data, &lt, LtHypothesis::H0)?.log_ml)
                .exp();
            Ok(json!({
                "study": "covid_pfizer",
                "data": data,
                "vaccine_efficacy": summary_json(&ve),
                "efficacy_under_no_harm": summary_json(&eta_e),
                "bf10_brease_default": bf10.bf,
                "bf10_ib_a1": ib,
                "bf10_lt_default": lt_bf10,
            }))
        }
        Study::Pathological => {
            let (data, prior) = pathological();
            let set = exact_sample(&data, &prior, draws, seed)?;
            let init = BreaseParams { theta0: 0.5, eta_e: 0.5, eta_s: 0.5 };
            let thin = 100;
            let gibbs = gibbs_sample_thinned(
                &data,
                &prior,
                1_000 + draws * thin,
                1_000,
                thin,
                &init,
                seed + 1,
            )?;
            let table = oracle_posterior_marginal(&data, &prior, MarginalTarget::Theta0, 100)?;
            let exact_draws: Vec<f64> = set.theta0().collect();
            let gibbs_draws: Vec<f64> = gibbs.theta0().collect();
            let tv_exact = table.tv_distance_to_draws(&exact_draws);
            let tv_gibbs = table.tv_distance_to_draws(&gibbs_draws);
            let mut a = exact_draws.clone();
            let mut b = gibbs_draws.clone();
            let ks = two_sample_ks(&mut a, &mut b);
            Ok(json!({
                "study": "pathological",
                "data": data,
                "prior": prior,
                "tv_exact_vs_marginal": tv_exact,
                "tv_gibbs_vs_marginal": tv_gibbs,
                "ks_exact_vs_gibbs": ks,
                "gibbs_thin": thin,
            }))
        }
    }
}

/// Two-sample Kolmogorov-Smirnov distance.
pub fn two_sample_ks(a: &mut [f64], b: &mut [f64]) -> f64 {
    a.sort_by(|x, y| x.partial_cmp(y).unwrap());
    b.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let (na, nb) = (a.len(), b.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < na && j < nb {
        let (fa, fb) = (i as f64 / na as f64, j as f64 / nb as f64);
        d = d.max((fa - fb).abs());
        if a[i] <= b[j] {
            i += 1;
        } else {
            j += 1;
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_data_is_valid() {
        assert!(aspirin_phs().validate().is_ok());
        assert!(covid_pfizer().validate().is_ok());
        assert!(pathological().0.validate().is_ok());
        let strata = covid_age_strata();
        assert_eq!(strata.len(), 4);
        for (_, d) in &strata.strata {
            assert!(d.validate().is_ok());
        }
        // stratum sizes match the published subgroup totals
        let sizes: Vec<u64> = strata.strata.iter().map(|(_, d)| d.total()).collect();
        assert_eq!(sizes, vec![19_852, 7_315, 6_169, 1_559]);
    }

    #[test]
    fn study_parsing() {
        assert_eq!("aspirin_phs".parse::<Study>().unwrap(), Study::AspirinPhs);
        assert!("nope".parse::<Study>().is_err());
    }

    #[test]
    fn aspirin_replication_hits_reported_numbers() {
        let report = replicate(Study::AspirinPhs, 7, 100_000).unwrap();
        let rr = &report["risk_ratio"];
        assert!((rr["median"].as_f64().unwrap() - 0.44).abs() <= 0.01);
        assert!((report["bf10_brease_default"].as_f64().unwrap() - 1.2).abs() <= 0.05);
        assert!((report["bf01_ib_a1"].as_f64().unwrap() - 20.27).abs() <= 0.03);
    }
}
