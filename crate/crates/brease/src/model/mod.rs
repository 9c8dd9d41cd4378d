//! The causal parameterization of a binary experiment: baseline risk,
//! efficacy, adverse side effects, the induced likelihood in both its
//! direct and expanded forms, response types, partial identification,
//! prior moments, and the generalized-Dirichlet correspondence.

pub mod density;

use crate::data::TrialData;
use crate::error::{Error, Result};
use crate::numerics::special::{ln_beta_unchecked, ln_binomial, log_sum_exp_unchecked};
use serde::{Deserialize, Serialize};

/// Jointly independent beta priors on (θ0, ηe, ηs) in mean/sample-size form:
/// each marginal is Beta(μ·n, (1−μ)·n).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BreasePrior {
    pub mu0: f64,
    pub mue: f64,
    pub mus: f64,
    pub n0: f64,
    pub ne: f64,
    pub ns: f64,
}

impl BreasePrior {
    pub fn new(mu0: f64, mue: f64, mus: f64, n0: f64, ne: f64, ns: f64) -> Result<Self> {
        for (name, mu) in [("mu0", mu0), ("mue", mue), ("mus", mus)] {
            if !(mu > 0.0 && mu < 1.0) {
                return Err(Error::validation(format!(
                    "prior mean {name} must lie strictly inside (0,1), got {mu}"
                )));
            }
        }
        for (name, n) in [("n0", n0), ("ne", ne), ("ns", ns)] {
            if !(n > 0.0) {
                return Err(Error::validation(format!(
                    "prior sample size {name} must be positive, got {n}"
                )));
            }
        }
        Ok(BreasePrior { mu0, mue, mus, n0, ne, ns })
    }

    /// Beta shape pair for θ0.
    pub fn shapes0(&self) -> (f64, f64) {
        (self.mu0 * self.n0, (1.0 - self.mu0) * self.n0)
    }

    /// Beta shape pair for ηe.
    pub fn shapes_e(&self) -> (f64, f64) {
        (self.mue * self.ne, (1.0 - self.mue) * self.ne)
    }

    /// Beta shape pair for ηs.
    pub fn shapes_s(&self) -> (f64, f64) {
        (self.mus * self.ns, (1.0 - self.mus) * self.ns)
    }

    /// Whether the prior collapses to a traditional Dirichlet on response
    /// types: ne = μ0·n0 and ns = (1−μ0)·n0.
    pub fn is_equal_confidence(&self) -> bool {
        (self.ne - self.mu0 * self.n0).abs() <= 1e-12 * self.n0
            && (self.ns - (1.0 - self.mu0) * self.n0).abs() <= 1e-12 * self.n0
    }
}

/// The default prior: BREASE(1/2, μ, μ; 2, 1, 1).
pub fn default_prior(mu: f64) -> Result<BreasePrior> {
    BreasePrior::new(0.5, mu, mu, 2.0, 1.0, 1.0)
}

/// Aggregated-Dirichlet prior for the sharp null θ0 = θ1, specified by the
/// efficacy/side-effect hyperparameters alone.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AggregatedH0Prior {
    pub mue: f64,
    pub mus: f64,
    pub ne: f64,
    pub ns: f64,
}

impl AggregatedH0Prior {
    pub fn new(mue: f64, mus: f64, ne: f64, ns: f64) -> Result<Self> {
        for (name, mu) in [("mue", mue), ("mus", mus)] {
            if !(mu > 0.0 && mu < 1.0) {
                return Err(Error::validation(format!(
                    "prior mean {name} must lie strictly inside (0,1), got {mu}"
                )));
            }
        }
        for (name, n) in [("ne", ne), ("ns", ns)] {
            if !(n > 0.0) {
                return Err(Error::validation(format!(
                    "prior sample size {name} must be positive, got {n}"
                )));
            }
        }
        Ok(AggregatedH0Prior { mue, mus, ne, ns })
    }

    /// Extract the (ηe, ηs) hyperparameters from a full prior.
    pub fn from_brease(prior: &BreasePrior) -> Self {
        AggregatedH0Prior { mue: prior.mue, mus: prior.mus, ne: prior.ne, ns: prior.ns }
    }

    /// Dirichlet concentrations on the aggregated cells (p00, p10*, p11).
    pub fn alphas(&self) -> (f64, f64, f64) {
        (
            (1.0 - self.mus) * self.ns,
            self.mue * self.ne + self.mus * self.ns,
            (1.0 - self.mue) * self.ne,
        )
    }
}

/// One point of the parameter cube.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BreaseParams {
    pub theta0: f64,
    pub eta_e: f64,
    pub eta_s: f64,
}

impl BreaseParams {
    pub fn new(theta0: f64, eta_e: f64, eta_s: f64) -> Result<Self> {
        for (name, v) in [("theta0", theta0), ("eta_e", eta_e), ("eta_s", eta_s)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::validation(format!("{name} must lie in [0,1], got {v}")));
            }
        }
        Ok(BreaseParams { theta0, eta_e, eta_s })
    }

    /// Derived risk of treatment θ1.
    pub fn theta1(&self) -> f64 {
        risk_of_treatment(self)
    }
}

/// θ1 = (1−ηe)·θ0 + ηs·(1−θ0).
///
/// Evaluated cell-wise as p01 + p11 so the response-type margin reproduces
/// it bit for bit.
pub fn risk_of_treatment(params: &BreaseParams) -> f64 {
    let p11 = params.theta0 - params.eta_e * params.theta0;
    let p01 = params.eta_s * (1.0 - params.theta0);
    p01 + p11
}

/// Joint response-type probabilities (doomed/immune/preventive/causal).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResponseTypeProbs {
    /// P(Y(0)=0, Y(1)=0), the immune.
    pub p00: f64,
    /// P(Y(0)=1, Y(1)=0), the preventive.
    pub p10: f64,
    /// P(Y(0)=0, Y(1)=1), the causal.
    pub p01: f64,
    /// P(Y(0)=1, Y(1)=1), the doomed.
    pub p11: f64,
}

/// Contingency-table cells as products of (θ0, ηe, ηs).
///
/// Complements are taken against the margins so that p10+p11 equals θ0 and
/// p01+p11 equals the risk of treatment exactly.
pub fn response_type_probs(params: &BreaseParams) -> ResponseTypeProbs {
    let p10 = params.eta_e * params.theta0;
    let p11 = params.theta0 - p10;
    let p01 = params.eta_s * (1.0 - params.theta0);
    let p00 = (1.0 - params.theta0) - p01;
    ResponseTypeProbs { p00, p10, p01, p11 }
}

/// Partially identified intervals for ηe and ηs at a given (θ0, θ1).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentificationBounds {
    pub eta_e_low: f64,
    pub eta_e_high: f64,
    pub eta_s_low: f64,
    pub eta_s_high: f64,
}

/// Sharp bounds on the counterfactual parameters given the identified risks.
pub fn partial_id_bounds(theta0: f64, theta1: f64) -> Result<IdentificationBounds> {
    if !(theta0 > 0.0 && theta0 < 1.0) {
        return Err(Error::domain(format!(
            "partial identification bounds need theta0 strictly inside (0,1), got {theta0}"
        )));
    }
    if !(0.0..=1.0).contains(&theta1) {
        return Err(Error::domain(format!("theta1 must lie in [0,1], got {theta1}")));
    }
    Ok(IdentificationBounds {
        eta_e_low: (1.0 - theta1 / theta0).max(0.0),
        eta_e_high: ((1.0 - theta1) / theta0).min(1.0),
        eta_s_low: ((theta1 - theta0) / (1.0 - theta0)).max(0.0),
        eta_s_high: (theta1 / (1.0 - theta0)).min(1.0),
    })
}

#[inline]
fn xlogy(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * y.ln()
    }
}

/// Log likelihood of the observed counts, by direct substitution of
/// θ1 = risk_of_treatment into the two-binomial likelihood.
///
/// Returns −∞ when the parameters make the observed counts impossible.
pub fn log_likelihood(data: &TrialData, params: &BreaseParams) -> f64 {
    let theta0 = params.theta0;
    let theta1 = params.theta1();
    let mut ll = 0.0;
    ll += ln_binomial(data.n0, data.y0);
    ll += xlogy(data.y0 as f64, theta0);
    ll += xlogy((data.n0 - data.y0) as f64, 1.0 - theta0);
    ll += ln_binomial(data.n1, data.y1);
    ll += xlogy(data.y1 as f64, theta1);
    ll += xlogy((data.n1 - data.y1) as f64, 1.0 - theta1);
    if ll.is_nan() {
        // 0^positive contributions produce ln(0) = −∞; NaN only arises from
        // ∞ − ∞ mixtures, which still mean an impossible configuration.
        return f64::NEG_INFINITY;
    }
    ll
}

/// Log likelihood via the expanded double binomial sum.
///
/// Algebraically identical to [`log_likelihood`]; exposed for
/// cross-validation of the expansion that powers the analytic machinery.
pub fn log_likelihood_expanded(data: &TrialData, params: &BreaseParams) -> f64 {
    let (y0, n0, y1, n1) = (data.y0, data.n0, data.y1, data.n1);
    let n = data.total();
    let theta0 = params.theta0;
    let (ee, es) = (params.eta_e, params.eta_s);
    let mut terms = Vec::with_capacity(((y1 + 1) * (n1 - y1 + 1)) as usize);
    for j in 0..=y1 {
        for k in 0..=(n1 - y1) {
            let t = ln_binomial(y1, j)
                + ln_binomial(n1 - y1, k)
                + xlogy((y0 + j + k) as f64, theta0)
                + xlogy((n - y0 - j - k) as f64, 1.0 - theta0)
                + xlogy(k as f64, ee)
                + xlogy(j as f64, 1.0 - ee)
                + xlogy((y1 - j) as f64, es)
                + xlogy((n1 - y1 - k) as f64, 1.0 - es);
            terms.push(if t.is_nan() { f64::NEG_INFINITY } else { t });
        }
    }
    ln_binomial(n0, y0) + ln_binomial(n1, y1) + log_sum_exp_unchecked(&terms)
}

/// Prior moments of the induced joint law of (θ0, θ1).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PriorMoments {
    pub cov: f64,
    pub var_theta0: f64,
    pub var_theta1: f64,
    pub cor: f64,
}

/// Cov(θ0, θ1), Var(θ0), Var(θ1) and Cor(θ0, θ1) under the prior.
pub fn prior_covariance(prior: &BreasePrior) -> PriorMoments {
    let BreasePrior { mu0, mue, mus, n0, ne, ns } = *prior;
    let var0 = mu0 * (1.0 - mu0) / (n0 + 1.0);
    let cov = var0 * (1.0 - mue - mus);
    let var1 = var0 * (1.0 - mue - mus).powi(2)
        + mue * (1.0 - mue) / (ne + 1.0) * (var0 + mu0 * mu0)
        + mus * (1.0 - mus) / (ns + 1.0) * (var0 + (1.0 - mu0) * (1.0 - mu0));
    PriorMoments {
        cov,
        var_theta0: var0,
        var_theta1: var1,
        cor: cov / (var0 * var1).sqrt(),
    }
}

/// Parameters of the generalized Dirichlet distribution induced on the
/// response-type probabilities, ordered to match the density
/// p01^{a1−1} p00^{a2−1} p10^{a3−1} p11^{a4−1} (p00+p01)^{b1−1} (p10+p11)^{b2−1}.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneralizedDirichletParams {
    pub a: [f64; 4],
    pub b: [f64; 4],
    pub gamma: [[u8; 4]; 4],
}

/// The fixed aggregation matrix of the induced generalized Dirichlet.
pub const GD_GAMMA: [[u8; 4]; 4] = [
    [1, 0, 1, 0],
    [1, 0, 0, 1],
    [0, 1, 1, 0],
    [0, 1, 0, 1],
];

/// Map the prior to its generalized-Dirichlet form on response types.
pub fn to_generalized_dirichlet(prior: &BreasePrior) -> GeneralizedDirichletParams {
    let BreasePrior { mu0, mue, mus, n0, ne, ns } = *prior;
    GeneralizedDirichletParams {
        a: [mus * ns, (1.0 - mus) * ns, mue * ne, (1.0 - mue) * ne],
        b: [
            (1.0 - mu0) * n0 - ns + 1.0,
            mu0 * n0 - ne + 1.0,
            1.0,
            1.0,
        ],
        gamma: GD_GAMMA,
    }
}

/// Empirical-Bayes prior: shrunken point estimates of the risks, prior means
/// of (ηe, ηs) at the midpoints of their partially identified intervals,
/// unit-style prior sample size n on both.
pub fn brease_eb_prior(data: &TrialData, n: f64) -> Result<BreasePrior> {
    if !(n > 0.0) {
        return Err(Error::validation(format!(
            "empirical-Bayes prior sample size must be positive, got {n}"
        )));
    }
    let th0 = (data.y0 as f64 + 1.0) / (data.n0 as f64 + 2.0);
    let th1 = (data.y1 as f64 + 1.0) / (data.n1 as f64 + 2.0);
    let b = partial_id_bounds(th0, th1)?;
    let mue = 0.5 * (b.eta_e_low + b.eta_e_high);
    let mus = 0.5 * (b.eta_s_low + b.eta_s_high);
    BreasePrior::new(0.5, mue, mus, 2.0, n, n)
}

/// ln of the Beta(μ·n, (1−μ)·n) density at x.
pub(crate) fn ln_beta_star_pdf(x: f64, mu: f64, n: f64) -> f64 {
    let (a, b) = (mu * n, (1.0 - mu) * n);
    (a - 1.0) * x.ln() + (b - 1.0) * (-x).ln_1p() - ln_beta_unchecked(a, b)
}
