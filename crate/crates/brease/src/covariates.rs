//! Stratified analysis: independent priors per stratum, hierarchical
//! partial pooling via Metropolis-within-Gibbs, and population (marginal)
//! effects obtained by averaging over the stratum distribution.

use crate::data::StratifiedTrialData;
use crate::error::{Error, Result};
use crate::model::{ln_beta_star_pdf, BreaseParams, BreasePrior};
use crate::numerics::rng::RngStream;
use crate::numerics::sample::{sample_beta, sample_binomial, sample_dirichlet};
use crate::samplers::{exact_draws, DrawMeta, DrawSet, Method};
use serde::{Deserialize, Serialize};

/// Hyperprior of the hierarchical model: a prior of the same family on the
/// pooled means (λ, ν) and Gamma(shape, rate) priors on the pooled sample
/// sizes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HierarchicalHyperPrior {
    pub lambda0: f64,
    pub lambdae: f64,
    pub lambdas: f64,
    pub nu0: f64,
    pub nue: f64,
    pub nus: f64,
    pub shape0: f64,
    pub rate0: f64,
    pub shapee: f64,
    pub ratee: f64,
    pub shapes: f64,
    pub rates: f64,
}

impl HierarchicalHyperPrior {
    /// λ = (1/2,1/2,1/2), ν = (10,10,10), Gamma(10, 0.1) on all sizes.
    pub fn default_prior() -> Self {
        HierarchicalHyperPrior {
            lambda0: 0.5,
            lambdae: 0.5,
            lambdas: 0.5,
            nu0: 10.0,
            nue: 10.0,
            nus: 10.0,
            shape0: 10.0,
            rate0: 0.1,
            shapee: 10.0,
            ratee: 0.1,
            shapes: 10.0,
            rates: 0.1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("lambda0", self.lambda0),
            ("lambdae", self.lambdae),
            ("lambdas", self.lambdas),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::validation(format!(
                    "hyperprior mean {name} must lie inside (0,1), got {v}"
                )));
            }
        }
        for (name, v) in [
            ("nu0", self.nu0),
            ("nue", self.nue),
            ("nus", self.nus),
            ("shape0", self.shape0),
            ("rate0", self.rate0),
            ("shapee", self.shapee),
            ("ratee", self.ratee),
            ("shapes", self.shapes),
            ("rates", self.rates),
        ] {
            if !(v > 0.0) {
                return Err(Error::validation(format!(
                    "hyperprior parameter {name} must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// One state of the hierarchical hyperparameter chain.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct HyperDraw {
    pub mu0: f64,
    pub mue: f64,
    pub mus: f64,
    pub n0: f64,
    pub ne: f64,
    pub ns: f64,
}

/// Per-stratum draw sets plus, for pooled runs, the hyperparameter chain
/// and the Metropolis acceptance rates.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StratifiedDraws {
    pub labels: Vec<String>,
    pub per_stratum: Vec<DrawSet>,
    pub hyper_chain: Option<Vec<HyperDraw>>,
    /// Acceptance rates of the six hyperparameter blocks
    /// (mu0, n0, mue, ne, mus, ns), for pooled runs.
    pub acceptance_rates: Option<[f64; 6]>,
    pub warnings: Vec<String>,
}

/// Independent per-stratum exact sampling on derived streams.
pub fn stratified_independent(
    data: &StratifiedTrialData,
    priors: &[BreasePrior],
    t: u64,
    seed: u64,
) -> Result<StratifiedDraws> {
    if priors.len() != data.strata.len() {
        return Err(Error::domain(format!(
            "{} strata but {} priors",
            data.strata.len(),
            priors.len()
        )));
    }
    let mut per_stratum = Vec::with_capacity(data.strata.len());
    for (i, ((_, d), prior)) in data.strata.iter().zip(priors).enumerate() {
        let mut rng = RngStream::with_stream(seed, i as u64);
        let draws = exact_draws(d, prior, t, &mut rng)?;
        per_stratum.push(DrawSet {
            draws,
            meta: DrawMeta {
                seed,
                method: Method::Exact,
                burn_in: 0,
                constraint: None,
                prior: *prior,
            },
        });
    }
    Ok(StratifiedDraws {
        labels: data.strata.iter().map(|(l, _)| l.clone()).collect(),
        per_stratum,
        hyper_chain: None,
        acceptance_rates: None,
        warnings: Vec::new(),
    })
}

/// Random-walk step sizes for the six hyperparameter blocks, adapted
/// toward 0.44 acceptance during burn-in and frozen afterwards.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct StepSizes {
    pub mu: [f64; 3],
    pub n: [f64; 3],
}

impl Default for StepSizes {
    fn default() -> Self {
        StepSizes { mu: [0.5; 3], n: [0.5; 3] }
    }
}

struct HyperBlock {
    lambda: f64,
    nu: f64,
    shape: f64,
    rate: f64,
    mu: f64,
    n: f64,
    step_mu: f64,
    step_n: f64,
    acc_mu: u64,
    acc_n: u64,
}

impl HyperBlock {
    /// Log target for the mean on the logit scale (prior × likelihood of
    /// the stratum values × Jacobian).
    fn ln_target_mu(&self, mu: f64, values: &[f64]) -> f64 {
        let mut v = ln_beta_star_pdf(mu, self.lambda, self.nu) + mu.ln() + (-mu).ln_1p();
        for &x in values {
            v += ln_beta_star_pdf(x, mu, self.n);
        }
        v
    }

    /// Log target for the size on the log scale.
    fn ln_target_n(&self, n: f64, values: &[f64]) -> f64 {
        let mut v = (self.shape - 1.0) * n.ln() - self.rate * n + n.ln();
        for &x in values {
            v += ln_beta_star_pdf(x, self.mu, n);
        }
        v
    }

    fn update(&mut self, values: &[f64], rng: &mut RngStream) {
        let logit = self.mu.ln() - (-self.mu).ln_1p();
        let prop = logit + self.step_mu * rng.standard_normal();
        let mu_prop = 1.0 / (1.0 + (-prop).exp());
        if mu_prop > 0.0 && mu_prop < 1.0 {
            let delta = self.ln_target_mu(mu_prop, values) - self.ln_target_mu(self.mu, values);
            if delta >= rng.uniform_open().ln() {
                self.mu = mu_prop;
                self.acc_mu += 1;
            }
        }
        let ln_n = self.n.ln() + self.step_n * rng.standard_normal();
        let n_prop = ln_n.exp();
        if n_prop.is_finite() && n_prop > 0.0 {
            let delta = self.ln_target_n(n_prop, values) - self.ln_target_n(self.n, values);
            if delta >= rng.uniform_open().ln() {
                self.n = n_prop;
                self.acc_n += 1;
            }
        }
    }

    fn adapt(&mut self, iters: u64) {
        let r_mu = self.acc_mu as f64 / iters as f64;
        let r_n = self.acc_n as f64 / iters as f64;
        self.step_mu *= (0.6 * (r_mu - 0.44)).exp();
        self.step_n *= (0.6 * (r_n - 0.44)).exp();
    }
}

/// Two-stage sampler for the hierarchical model: per-stratum
/// data-augmentation updates conditional on the pooled prior, then
/// random-walk Metropolis updates of the pooled means (logit scale) and
/// sizes (log scale).
pub fn hierarchical_sample(
    data: &StratifiedTrialData,
    hyper: &HierarchicalHyperPrior,
    t: u64,
    burn_in: u64,
    seed: u64,
    step_sizes: Option<StepSizes>,
) -> Result<StratifiedDraws> {
    hyper.validate()?;
    if t <= burn_in {
        return Err(Error::domain("t must exceed burn-in"));
    }
    let k = data.strata.len();
    let steps = step_sizes.unwrap_or_default();
    let mut rng = RngStream::new(seed);
    let mut blocks = [
        HyperBlock {
            lambda: hyper.lambda0,
            nu: hyper.nu0,
            shape: hyper.shape0,
            rate: hyper.rate0,
            mu: hyper.lambda0,
            n: hyper.shape0 / hyper.rate0,
            step_mu: steps.mu[0],
            step_n: steps.n[0],
            acc_mu: 0,
            acc_n: 0,
        },
        HyperBlock {
            lambda: hyper.lambdae,
            nu: hyper.nue,
            shape: hyper.shapee,
            rate: hyper.ratee,
            mu: hyper.lambdae,
            n: hyper.shapee / hyper.ratee,
            step_mu: steps.mu[1],
            step_n: steps.n[1],
            acc_mu: 0,
            acc_n: 0,
        },
        HyperBlock {
            lambda: hyper.lambdas,
            nu: hyper.nus,
            shape: hyper.shapes,
            rate: hyper.rates,
            mu: hyper.lambdas,
            n: hyper.shapes / hyper.rates,
            step_mu: steps.mu[2],
            step_n: steps.n[2],
            acc_mu: 0,
            acc_n: 0,
        },
    ];
    let mut params: Vec<BreaseParams> =
        vec![BreaseParams { theta0: 0.5, eta_e: 0.5, eta_s: 0.5 }; k];
    let kept = (t - burn_in) as usize;
    let mut per_stratum: Vec<Vec<BreaseParams>> = vec![Vec::with_capacity(kept); k];
    let mut hyper_chain = Vec::with_capacity(kept);
    let eps = 1e-12;
    for it in 0..t {
        // (i) per-stratum data augmentation given the pooled prior
        for (i, (_, d)) in data.strata.iter().enumerate() {
            let st = &mut params[i];
            let theta1 = st.theta1();
            let num_c = (1.0 - st.theta0) * st.eta_s;
            let pc = if num_c == 0.0 { 0.0 } else { (num_c / theta1).clamp(0.0, 1.0) };
            let num_p = st.theta0 * st.eta_e;
            let pp = if num_p == 0.0 {
                0.0
            } else {
                (num_p / (1.0 - theta1)).clamp(0.0, 1.0)
            };
            let c1 = sample_binomial(d.y1, pc, &mut rng)?;
            let p1 = sample_binomial(d.n1 - d.y1, pp, &mut rng)?;
            let n = d.total();
            let s = d.y0 + d.y1 - c1 + p1;
            let (b0, be, bs) = (&blocks[0], &blocks[1], &blocks[2]);
            st.theta0 = sample_beta(
                s as f64 + b0.mu * b0.n,
                (n - s) as f64 + (1.0 - b0.mu) * b0.n,
                &mut rng,
            )?
            .clamp(eps, 1.0 - eps);
            st.eta_e = sample_beta(
                p1 as f64 + be.mu * be.n,
                (d.y1 - c1) as f64 + (1.0 - be.mu) * be.n,
                &mut rng,
            )?
            .clamp(eps, 1.0 - eps);
            st.eta_s = sample_beta(
                c1 as f64 + bs.mu * bs.n,
                (d.n1 - d.y1 - p1) as f64 + (1.0 - bs.mu) * bs.n,
                &mut rng,
            )?
            .clamp(eps, 1.0 - eps);
        }
        // (ii) Metropolis updates of the pooled prior
        let th0: Vec<f64> = params.iter().map(|p| p.theta0).collect();
        let ee: Vec<f64> = params.iter().map(|p| p.eta_e).collect();
        let es: Vec<f64> = params.iter().map(|p| p.eta_s).collect();
        blocks[0].update(&th0, &mut rng);
        blocks[1].update(&ee, &mut rng);
        blocks[2].update(&es, &mut rng);
        if it < burn_in && it % 50 == 49 {
            for b in &mut blocks {
                b.adapt(it + 1);
            }
        }
        if it >= burn_in {
            for (i, p) in params.iter().enumerate() {
                per_stratum[i].push(*p);
            }
            hyper_chain.push(HyperDraw {
                mu0: blocks[0].mu,
                mue: blocks[1].mu,
                mus: blocks[2].mu,
                n0: blocks[0].n,
                ne: blocks[1].n,
                ns: blocks[2].n,
            });
        }
    }
    let rates = [
        blocks[0].acc_mu as f64 / t as f64,
        blocks[0].acc_n as f64 / t as f64,
        blocks[1].acc_mu as f64 / t as f64,
        blocks[1].acc_n as f64 / t as f64,
        blocks[2].acc_mu as f64 / t as f64,
        blocks[2].acc_n as f64 / t as f64,
    ];
    let mut warnings = Vec::new();
    for (name, r) in ["mu0", "n0", "mue", "ne", "mus", "ns"].iter().zip(rates) {
        if !(0.05..=0.95).contains(&r) {
            warnings.push(format!("acceptance rate for {name} is {r:.3}, outside [0.05, 0.95]"));
        }
    }
    let median_prior = BreasePrior::new(
        blocks[0].lambda,
        blocks[1].lambda,
        blocks[2].lambda,
        blocks[0].shape / blocks[0].rate,
        blocks[1].shape / blocks[1].rate,
        blocks[2].shape / blocks[2].rate,
    )?;
    Ok(StratifiedDraws {
        labels: data.strata.iter().map(|(l, _)| l.clone()).collect(),
        per_stratum: per_stratum
            .into_iter()
            .map(|draws| DrawSet {
                draws,
                meta: DrawMeta {
                    seed,
                    method: Method::Gibbs,
                    burn_in,
                    constraint: None,
                    prior: median_prior,
                },
            })
            .collect(),
        hyper_chain: Some(hyper_chain),
        acceptance_rates: Some(rates),
        warnings,
    })
}

/// Recorded stratum weights: posterior-mean population shares and
/// conjugate propensity estimates.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PopulationWeights {
    pub probabilities: Vec<f64>,
    pub propensities: Vec<f64>,
}

/// Conjugate summaries of the stratum-share and treatment-assignment
/// distributions; the propensities are reported but do not enter effect
/// computation because the likelihood factorizes.
pub fn population_weights(
    data: &StratifiedTrialData,
    dirichlet_concentration: f64,
) -> Result<PopulationWeights> {
    if !(dirichlet_concentration > 0.0) {
        return Err(Error::domain("Dirichlet concentration must be positive"));
    }
    let total: u64 = data.strata.iter().map(|(_, d)| d.total()).sum();
    let k = data.strata.len() as f64;
    let denom = total as f64 + k * dirichlet_concentration;
    let probabilities = data
        .strata
        .iter()
        .map(|(_, d)| (d.total() as f64 + dirichlet_concentration) / denom)
        .collect();
    let propensities = data
        .strata
        .iter()
        .map(|(_, d)| (d.n1 as f64 + 1.0) / (d.total() as f64 + 2.0))
        .collect();
    Ok(PopulationWeights { probabilities, propensities })
}

/// One population-effect draw.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct PopulationDraw {
    pub theta0: f64,
    pub theta1: f64,
    pub risk_ratio: f64,
    pub risk_difference: f64,
}

/// Marginal effects: per iteration, draw stratum shares from the conjugate
/// Dirichlet posterior and average the stratum risks.
pub fn population_effects(
    draws: &StratifiedDraws,
    counts: &[u64],
    dirichlet_concentration: f64,
    seed: u64,
) -> Result<Vec<PopulationDraw>> {
    if counts.len() != draws.per_stratum.len() {
        return Err(Error::domain(format!(
            "{} strata of draws but {} counts",
            draws.per_stratum.len(),
            counts.len()
        )));
    }
    if !(dirichlet_concentration > 0.0) {
        return Err(Error::domain("Dirichlet concentration must be positive"));
    }
    let t = draws
        .per_stratum
        .iter()
        .map(|s| s.len())
        .min()
        .ok_or_else(|| Error::domain("no strata"))?;
    let alphas: Vec<f64> = counts
        .iter()
        .map(|&n| n as f64 + dirichlet_concentration)
        .collect();
    let mut rng = RngStream::new(seed);
    let mut out = Vec::with_capacity(t);
    for i in 0..t {
        let p = if alphas.len() == 1 {
            vec![1.0]
        } else {
            sample_dirichlet(&alphas, &mut rng)?
        };
        let mut theta0 = 0.0;
        let mut theta1 = 0.0;
        for (x, set) in p.iter().zip(&draws.per_stratum) {
            theta0 += x * set.draws[i].theta0;
            theta1 += x * set.draws[i].theta1();
        }
        out.push(PopulationDraw {
            theta0,
            theta1,
            risk_ratio: theta1 / theta0,
            risk_difference: theta1 - theta0,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::TrialData;
    use crate::model::default_prior;
    use crate::samplers::exact_sample;
    use crate::summaries::quantile;

    fn two_strata() -> StratifiedTrialData {
        StratifiedTrialData::new(vec![
            ("a".into(), TrialData::new(3, 40, 5, 45).unwrap()),
            ("b".into(), TrialData::new(8, 60, 2, 55).unwrap()),
        ])
        .unwrap()
    }

    #[test]
    fn single_stratum_matches_plain_exact_sampler() {
        let d = TrialData::new(4, 30, 6, 28).unwrap();
        let strat =
            StratifiedTrialData::new(vec![("only".into(), d)]).unwrap();
        let prior = default_prior(0.3).unwrap();
        let via_strat = stratified_independent(&strat, &[prior], 5_000, 77).unwrap();
        let direct = {
            let mut rng = RngStream::with_stream(77, 0);
            exact_draws(&d, &prior, 5_000, &mut rng).unwrap()
        };
        assert_eq!(via_strat.per_stratum[0].draws.len(), direct.len());
        for (a, b) in via_strat.per_stratum[0].draws.iter().zip(&direct) {
            assert_eq!(a.theta0, b.theta0);
        }
        let _ = exact_sample(&d, &prior, 10, 1).unwrap();
    }

    #[test]
    fn stratum_prior_count_mismatch() {
        let prior = default_prior(0.3).unwrap();
        assert!(stratified_independent(&two_strata(), &[prior], 100, 1).is_err());
    }

    #[test]
    fn hierarchical_prior_invariance_without_data() {
        // all-empty strata leave the joint prior invariant: the pooled-mean
        // chain must average to lambda
        let data = StratifiedTrialData::new(vec![
            ("x".into(), TrialData::new(0, 0, 0, 0).unwrap()),
            ("y".into(), TrialData::new(0, 0, 0, 0).unwrap()),
        ])
        .unwrap();
        let hyper = HierarchicalHyperPrior::default_prior();
        let out = hierarchical_sample(&data, &hyper, 100_000, 4_000, 19, None).unwrap();
        let chain = out.hyper_chain.unwrap();
        let n = chain.len() as f64;
        let mean: f64 = chain.iter().map(|h| h.mue).sum::<f64>() / n;
        // batch-means standard error to absorb chain autocorrelation
        let nb = 100;
        let bs = chain.len() / nb;
        let batches: Vec<f64> = (0..nb)
            .map(|b| chain[b * bs..(b + 1) * bs].iter().map(|h| h.mue).sum::<f64>() / bs as f64)
            .collect();
        let bvar =
            batches.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (nb - 1) as f64;
        let se = (bvar / nb as f64).sqrt();
        assert!(
            (mean - hyper.lambdae).abs() < 3.0 * se.max(1e-4),
            "hyper mean {mean} vs lambda {} (se {se})",
            hyper.lambdae
        );
        for p in out.per_stratum[0].draws.iter().take(500) {
            assert!(p.theta0 > 0.0 && p.theta0 < 1.0);
            assert!((0.0..=1.0).contains(&p.theta1()));
        }
    }

    #[test]
    fn hierarchical_concentrated_hyperprior_approaches_fixed_prior() {
        // a near-degenerate hyperprior pins the pooled prior, so a single
        // stratum behaves like the fixed-prior sampler
        let d = TrialData::new(6, 50, 10, 48).unwrap();
        let data = StratifiedTrialData::new(vec![("s".into(), d)]).unwrap();
        let hyper = HierarchicalHyperPrior {
            lambda0: 0.5,
            lambdae: 0.3,
            lambdas: 0.3,
            nu0: 1e4,
            nue: 1e4,
            nus: 1e4,
            shape0: 2.0e4,
            rate0: 1.0e4,
            shapee: 1.0e4,
            ratee: 1.0e4,
            shapes: 1.0e4,
            rates: 1.0e4,
        };
        let out = hierarchical_sample(&data, &hyper, 120_000, 20_000, 23, None).unwrap();
        let fixed = exact_sample(&d, &default_prior(0.3).unwrap(), 50_000, 24).unwrap();
        let mut a: Vec<f64> = out.per_stratum[0].draws.iter().map(|p| p.theta0).collect();
        let mut b: Vec<f64> = fixed.theta0().collect();
        let ks = crate::testutil::two_sample_ks(&mut a, &mut b);
        assert!(ks <= 0.05, "KS = {ks}");
    }

    #[test]
    fn population_effects_convexity_and_edge_cases() {
        let prior = default_prior(0.3).unwrap();
        let strat = two_strata();
        let draws = stratified_independent(&strat, &[prior, prior], 2_000, 5).unwrap();
        let counts: Vec<u64> = strat.strata.iter().map(|(_, d)| d.total()).collect();
        let pop = population_effects(&draws, &counts, 1.0, 6).unwrap();
        for (i, p) in pop.iter().enumerate() {
            let t0a = draws.per_stratum[0].draws[i].theta0;
            let t0b = draws.per_stratum[1].draws[i].theta0;
            assert!(p.theta0 >= t0a.min(t0b) - 1e-15 && p.theta0 <= t0a.max(t0b) + 1e-15);
        }
        // single stratum: marginal equals the stratum draws exactly
        let one = StratifiedTrialData::new(vec![strat.strata[0].clone()]).unwrap();
        let d1 = stratified_independent(&one, &[prior], 500, 5).unwrap();
        let pop1 = population_effects(&d1, &[1000], 1.0, 6).unwrap();
        for (p, q) in pop1.iter().zip(&d1.per_stratum[0].draws) {
            assert_eq!(p.theta0, q.theta0);
            assert_eq!(p.theta1, q.theta1());
        }
        // mismatched counts
        assert!(population_effects(&d1, &[1, 2], 1.0, 6).is_err());
    }

    #[test]
    fn population_mean_of_equal_strata() {
        // two strata with known identical posteriors: the marginal mean is
        // the common mean within Monte Carlo error
        let d = TrialData::new(5, 50, 5, 50).unwrap();
        let strat = StratifiedTrialData::new(vec![
            ("u".into(), d),
            ("v".into(), d),
        ])
        .unwrap();
        let prior = default_prior(0.3).unwrap();
        let draws = stratified_independent(&strat, &[prior, prior], 40_000, 9).unwrap();
        let pop = population_effects(&draws, &[100, 100], 1.0, 10).unwrap();
        let mean: f64 = pop.iter().map(|p| p.theta0).sum::<f64>() / pop.len() as f64;
        let single: f64 = draws.per_stratum[0]
            .draws
            .iter()
            .map(|p| p.theta0)
            .sum::<f64>()
            / draws.per_stratum[0].len() as f64;
        assert!((mean - single).abs() < 0.005, "{mean} vs {single}");
    }

    #[test]
    fn population_weights_are_conjugate_means() {
        let strat = two_strata();
        let w = population_weights(&strat, 1.0).unwrap();
        let totals: Vec<f64> = strat.strata.iter().map(|(_, d)| d.total() as f64).collect();
        let denom: f64 = totals.iter().sum::<f64>() + 2.0;
        assert!((w.probabilities[0] - (totals[0] + 1.0) / denom).abs() < 1e-15);
        assert!((w.probabilities.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        // propensity of stratum a: (45+1)/(85+2)
        assert!((w.propensities[0] - 46.0 / 87.0).abs() < 1e-15);
    }

    #[test]
    fn hierarchical_reports_acceptance_rates() {
        let data = two_strata();
        let hyper = HierarchicalHyperPrior::default_prior();
        let out = hierarchical_sample(&data, &hyper, 6_000, 2_000, 3, None).unwrap();
        let rates = out.acceptance_rates.unwrap();
        for r in rates {
            assert!(r > 0.0 && r < 1.0);
        }
        assert_eq!(out.hyper_chain.unwrap().len(), 4_000);
        let med = {
            let mut v: Vec<f64> =
                out.per_stratum[0].draws.iter().map(|p| p.theta0).collect();
            v.sort_by(|a, b| a.partial_cmp(b).unwrap());
            quantile(&v, 0.5)
        };
        assert!(med > 0.0 && med < 1.0);
    }
}
