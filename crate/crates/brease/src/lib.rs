//! Bayesian analysis of binary experiments parameterized by baseline risk,
//! efficacy and adverse side effects: exact and data-augmented posterior
//! samplers, analytic marginal likelihoods and Bayes factors, sensitivity
//! analysis, stratified and hierarchical extensions, independent-beta and
//! logit comparators, and a brute-force quadrature oracle for validation.

// `!(x > 0.0)` is used instead of `x <= 0.0` throughout: the negated form
// also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod covariates;
pub mod data;
pub mod cli;
pub mod comparators;
pub mod error;
pub mod evidence;
pub mod model;
pub mod numerics;
pub mod oracle;
pub mod replicate;
pub mod samplers;
pub mod summaries;

pub use data::{StratifiedTrialData, StudyCorpus, TrialData};
pub use error::{Error, Result};
pub use model::{AggregatedH0Prior, BreaseParams, BreasePrior};
pub use evidence::{BayesFactor, LogEvidence, ModelLabel};
pub use samplers::{Constraint, DrawSet, Method};
pub use summaries::{Estimand, EstimandSummary};

#[cfg(test)]
pub(crate) mod testutil {
    /// One-sample Kolmogorov-Smirnov distance against a CDF.
    pub fn ks_distance(draws: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
        draws.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let n = draws.len() as f64;
        let mut d: f64 = 0.0;
        for (i, &x) in draws.iter().enumerate() {
            let f = cdf(x);
            d = d.max((f - i as f64 / n).abs());
            d = d.max(((i + 1) as f64 / n - f).abs());
        }
        d
    }

    /// Asymptotic one-sample critical value at significance alpha.
    pub fn ks_critical(n: usize, alpha: f64) -> f64 {
        (-(alpha / 2.0).ln() / (2.0 * n as f64)).sqrt()
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
}
