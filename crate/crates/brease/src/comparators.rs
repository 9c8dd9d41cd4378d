//! The two mainstream baselines: independent beta priors on the two risks,
//! and Gaussian priors on the logit-transformed grand log odds and log odds
//! ratio. Conjugate posteriors and a Savage-Dickey closed form for the
//! former; mode-centered Gauss-Hermite evidence and an independence
//! Metropolis sampler for the latter.

use crate::data::TrialData;
use crate::error::{Error, Result};
use crate::evidence::{LogEvidence, ModelLabel};
use crate::numerics::quad::gauss_hermite;
use crate::numerics::rng::RngStream;
use crate::numerics::sample::sample_beta;
use crate::numerics::special::{ln_beta_unchecked, ln_binomial, log_sum_exp_unchecked};
use serde::{Deserialize, Serialize};

/// Independent Beta(a0,b0) × Beta(a1,b1) prior on (θ0, θ1).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IbPrior {
    pub a0: f64,
    pub b0: f64,
    pub a1: f64,
    pub b1: f64,
}

impl IbPrior {
    pub fn new(a0: f64, b0: f64, a1: f64, b1: f64) -> Result<Self> {
        if [a0, b0, a1, b1].iter().any(|&v| !(v > 0.0)) {
            return Err(Error::validation(format!(
                "independent-beta hyperparameters must be positive, got ({a0},{b0},{a1},{b1})"
            )));
        }
        Ok(IbPrior { a0, b0, a1, b1 })
    }

    /// The symmetric IB(a,a;a,a) family.
    pub fn symmetric(a: f64) -> Result<Self> {
        IbPrior::new(a, a, a, a)
    }
}

/// Independent normal priors on the grand log odds β and log odds ratio ψ,
/// with logit θ0 = β − ψ/2 and logit θ1 = β + ψ/2.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LtPrior {
    pub mu_beta: f64,
    pub mu_psi: f64,
    pub sigma_beta: f64,
    pub sigma_psi: f64,
}

impl LtPrior {
    pub fn new(mu_beta: f64, mu_psi: f64, sigma_beta: f64, sigma_psi: f64) -> Result<Self> {
        if !(sigma_beta > 0.0) || !(sigma_psi > 0.0) {
            return Err(Error::validation(format!(
                "logit-prior scales must be positive, got ({sigma_beta}, {sigma_psi})"
            )));
        }
        Ok(LtPrior { mu_beta, mu_psi, sigma_beta, sigma_psi })
    }

    /// The default LT(0,0;1,1) prior.
    pub fn default_prior() -> Self {
        LtPrior { mu_beta: 0.0, mu_psi: 0.0, sigma_beta: 1.0, sigma_psi: 1.0 }
    }
}

/// One posterior draw of the independent-beta model.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct IbDraw {
    pub theta0: f64,
    pub theta1: f64,
}

/// Exact conjugate sampling: θz ~ Beta(az + yz, bz + Nz − yz) independently.
pub fn ib_posterior_sample(
    data: &TrialData,
    prior: &IbPrior,
    t: u64,
    seed: u64,
) -> Result<Vec<IbDraw>> {
    data.validate()?;
    let mut rng = RngStream::new(seed);
    let a0 = prior.a0 + data.y0 as f64;
    let b0 = prior.b0 + (data.n0 - data.y0) as f64;
    let a1 = prior.a1 + data.y1 as f64;
    let b1 = prior.b1 + (data.n1 - data.y1) as f64;
    (0..t)
        .map(|_| {
            Ok(IbDraw {
                theta0: sample_beta(a0, b0, &mut rng)?,
                theta1: sample_beta(a1, b1, &mut rng)?,
            })
        })
        .collect()
}

/// Savage-Dickey Bayes factor for the symmetric IB(a,a;a,a) prior against
/// the sharp null θ0 = θ1, in log space. Requires a > 1/2.
pub fn ib_log_bf10(data: &TrialData, a: f64) -> Result<f64> {
    data.validate()?;
    if !(a > 0.5) {
        return Err(Error::domain(format!(
            "the Savage-Dickey closed form needs a > 1/2, got {a}"
        )));
    }
    let (y0, n0, y1, n1) = (data.y0 as f64, data.n0 as f64, data.y1 as f64, data.n1 as f64);
    Ok(ln_beta_unchecked(2.0 * a - 1.0, 2.0 * a - 1.0)
        + ln_beta_unchecked(a + y0, a + n0 - y0)
        + ln_beta_unchecked(a + y1, a + n1 - y1)
        - ln_beta_unchecked(2.0 * a + y0 + y1 - 1.0, 2.0 * a + n0 - y0 + n1 - y1 - 1.0)
        - 2.0 * ln_beta_unchecked(a, a))
}

/// BF10 for the symmetric IB prior.
pub fn ib_bf10(data: &TrialData, a: f64) -> Result<f64> {
    Ok(ib_log_bf10(data, a)?.exp())
}

/// Marginal likelihoods of the two independent-beta models (both analytic).
pub fn ib_log_ml(data: &TrialData, prior: &IbPrior, null: bool) -> Result<LogEvidence> {
    data.validate()?;
    let (y0, n0, y1, n1) = (data.y0 as f64, data.n0 as f64, data.y1 as f64, data.n1 as f64);
    let front = ln_binomial(data.n0, data.y0) + ln_binomial(data.n1, data.y1);
    let log_ml = if null {
        // Savage-Dickey conditional prior at the null: θ ~ Beta(a0+a1−1, b0+b1−1)
        let a = prior.a0 + prior.a1 - 1.0;
        let b = prior.b0 + prior.b1 - 1.0;
        if !(a > 0.0) || !(b > 0.0) {
            return Err(Error::domain(
                "null-model prior shapes must be positive: need a0+a1 > 1 and b0+b1 > 1",
            ));
        }
        front + ln_beta_unchecked(a + y0 + y1, b + n0 - y0 + n1 - y1) - ln_beta_unchecked(a, b)
    } else {
        front + ln_beta_unchecked(prior.a0 + y0, prior.b0 + n0 - y0)
            - ln_beta_unchecked(prior.a0, prior.b0)
            + ln_beta_unchecked(prior.a1 + y1, prior.b1 + n1 - y1)
            - ln_beta_unchecked(prior.a1, prior.b1)
    };
    Ok(LogEvidence {
        model: ModelLabel::Ib,
        log_ml,
        mc_error: 0.0,
        data_fingerprint: data.fingerprint(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LtHypothesis {
    H0,
    H1,
}

#[inline]
fn sigmoid(u: f64) -> f64 {
    if u >= 0.0 {
        1.0 / (1.0 + (-u).exp())
    } else {
        let e = u.exp();
        e / (1.0 + e)
    }
}

/// ln P(y | N, logit p = u) without the binomial coefficient.
#[inline]
fn ln_binom_logit(y: f64, n: f64, u: f64) -> f64 {
    // y·ln σ(u) + (N−y)·ln σ(−u), with ln σ(u) = −ln(1+e^{-u})
    let ln_s = -(-u).exp().ln_1p();
    let ln_1ms = -(u).exp().ln_1p();
    y * ln_s + (n - y) * ln_1ms
}

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;

struct LtLogPost<'a> {
    data: &'a TrialData,
    prior: &'a LtPrior,
}

impl LtLogPost<'_> {
    /// Unnormalized log posterior over (β, ψ), including the binomial
    /// coefficients and normal prior constants.
    fn eval(&self, beta: f64, psi: f64) -> f64 {
        let d = self.data;
        let p = self.prior;
        ln_binomial(d.n0, d.y0)
            + ln_binomial(d.n1, d.y1)
            + ln_binom_logit(d.y0 as f64, d.n0 as f64, beta - psi / 2.0)
            + ln_binom_logit(d.y1 as f64, d.n1 as f64, beta + psi / 2.0)
            - 0.5 * ((beta - p.mu_beta) / p.sigma_beta).powi(2)
            - p.sigma_beta.ln()
            - LN_SQRT_2PI
            - 0.5 * ((psi - p.mu_psi) / p.sigma_psi).powi(2)
            - p.sigma_psi.ln()
            - LN_SQRT_2PI
    }

    fn grad(&self, beta: f64, psi: f64) -> [f64; 2] {
        let d = self.data;
        let p = self.prior;
        let r0 = d.y0 as f64 - d.n0 as f64 * sigmoid(beta - psi / 2.0);
        let r1 = d.y1 as f64 - d.n1 as f64 * sigmoid(beta + psi / 2.0);
        [
            r0 + r1 - (beta - p.mu_beta) / (p.sigma_beta * p.sigma_beta),
            -r0 / 2.0 + r1 / 2.0 - (psi - p.mu_psi) / (p.sigma_psi * p.sigma_psi),
        ]
    }

    /// Negative Hessian (observed information), positive definite.
    fn info(&self, beta: f64, psi: f64) -> [[f64; 2]; 2] {
        let d = self.data;
        let p = self.prior;
        let s0 = sigmoid(beta - psi / 2.0);
        let s1 = sigmoid(beta + psi / 2.0);
        let w0 = d.n0 as f64 * s0 * (1.0 - s0);
        let w1 = d.n1 as f64 * s1 * (1.0 - s1);
        [
            [
                w0 + w1 + 1.0 / (p.sigma_beta * p.sigma_beta),
                -w0 / 2.0 + w1 / 2.0,
            ],
            [
                -w0 / 2.0 + w1 / 2.0,
                w0 / 4.0 + w1 / 4.0 + 1.0 / (p.sigma_psi * p.sigma_psi),
            ],
        ]
    }

    /// Newton ascent from the pooled-rate starting point.
    fn mode(&self) -> Result<(f64, f64)> {
        let d = self.data;
        let pooled = (d.y0 + d.y1) as f64 + 0.5;
        let total = d.total() as f64 + 1.0;
        let mut beta = (pooled / (total - pooled)).ln();
        let mut psi = 0.0;
        for _ in 0..200 {
            let g = self.grad(beta, psi);
            let h = self.info(beta, psi);
            let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
            let db = (h[1][1] * g[0] - h[0][1] * g[1]) / det;
            let dp = (-h[1][0] * g[0] + h[0][0] * g[1]) / det;
            beta += db;
            psi += dp;
            if db.abs().max(dp.abs()) < 1e-12 {
                return Ok((beta, psi));
            }
        }
        Err(Error::numeric(
            "logit-model mode finding did not converge in 200 Newton iterations",
        ))
    }
}

/// Mode-centered Gauss-Hermite evidence for the logit model, under the
/// alternative (2-D over (β,ψ)) or the null ψ = 0 (1-D over β).
///
/// Node counts are doubled until the relative change drops below 1e-6.
pub fn lt_log_ml(
    data: &TrialData,
    prior: &LtPrior,
    hypothesis: LtHypothesis,
) -> Result<LogEvidence> {
    data.validate()?;
    let post = LtLogPost { data, prior };
    let log_ml = match hypothesis {
        LtHypothesis::H1 => {
            let (mb, mp) = post.mode()?;
            let h = post.info(mb, mp);
            // lower Cholesky of the covariance (inverse information)
            let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
            let cov = [[h[1][1] / det, -h[0][1] / det], [-h[1][0] / det, h[0][0] / det]];
            let l11 = cov[0][0].sqrt();
            let l21 = cov[0][1] / l11;
            let l22 = (cov[1][1] - l21 * l21).sqrt();
            let ln_det_l = (l11 * l22).ln();
            let mut prev = f64::NAN;
            for n in [24usize, 48, 96, 192] {
                let (z, w) = gauss_hermite(n);
                let mut terms = Vec::with_capacity(n * n);
                let sqrt2 = std::f64::consts::SQRT_2;
                for (i, &zi) in z.iter().enumerate() {
                    for (j, &zj) in z.iter().enumerate() {
                        let beta = mb + sqrt2 * l11 * zi;
                        let psi = mp + sqrt2 * (l21 * zi + l22 * zj);
                        terms.push(
                            post.eval(beta, psi) + zi * zi + zj * zj + w[i].ln() + w[j].ln(),
                        );
                    }
                }
                let v = log_sum_exp_unchecked(&terms) + 2.0 * 0.5 * std::f64::consts::LN_2
                    + ln_det_l;
                if (v - prev).abs() <= 1e-6 * v.abs().max(1.0) {
                    prev = v;
                    break;
                }
                prev = v;
            }
            prev
        }
        LtHypothesis::H0 => {
            // psi fixed at zero; drop its prior factor
            let eval0 = |beta: f64| {
                post.eval(beta, 0.0)
                    + 0.5 * ((0.0 - prior.mu_psi) / prior.sigma_psi).powi(2)
                    + prior.sigma_psi.ln()
                    + LN_SQRT_2PI
            };
            // 1-D Newton on beta
            let d = data;
            let pooled = (d.y0 + d.y1) as f64 + 0.5;
            let total = d.total() as f64 + 1.0;
            let mut beta = (pooled / (total - pooled)).ln();
            let mut ok = false;
            for _ in 0..200 {
                let s = sigmoid(beta);
                let g = (d.y0 + d.y1) as f64 - d.total() as f64 * s
                    - (beta - prior.mu_beta) / (prior.sigma_beta * prior.sigma_beta);
                let info = d.total() as f64 * s * (1.0 - s)
                    + 1.0 / (prior.sigma_beta * prior.sigma_beta);
                let step = g / info;
                beta += step;
                if step.abs() < 1e-12 {
                    ok = true;
                    break;
                }
            }
            if !ok {
                return Err(Error::numeric(
                    "logit-model null mode finding did not converge in 200 Newton iterations",
                ));
            }
            let s = sigmoid(beta);
            let info = data.total() as f64 * s * (1.0 - s)
                + 1.0 / (prior.sigma_beta * prior.sigma_beta);
            let sd = info.sqrt().recip();
            let mut prev = f64::NAN;
            for n in [32usize, 64, 128, 256] {
                let (z, w) = gauss_hermite(n);
                let terms: Vec<f64> = z
                    .iter()
                    .zip(&w)
                    .map(|(&zi, &wi)| {
                        eval0(beta + std::f64::consts::SQRT_2 * sd * zi) + zi * zi + wi.ln()
                    })
                    .collect();
                let v = log_sum_exp_unchecked(&terms) + 0.5 * std::f64::consts::LN_2 + sd.ln();
                if (v - prev).abs() <= 1e-6 * v.abs().max(1.0) {
                    prev = v;
                    break;
                }
                prev = v;
            }
            prev
        }
    };
    if !log_ml.is_finite() {
        return Err(Error::numeric("logit evidence quadrature returned a non-finite value"));
    }
    Ok(LogEvidence {
        model: ModelLabel::Lt,
        log_ml,
        mc_error: 0.0,
        data_fingerprint: data.fingerprint(),
    })
}

/// One posterior draw of the logit model.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct LtDraw {
    pub beta: f64,
    pub psi: f64,
    pub theta0: f64,
    pub theta1: f64,
}

/// Posterior draws plus the acceptance rate of the independence sampler.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LtDrawSet {
    pub draws: Vec<LtDraw>,
    pub acceptance_rate: f64,
    pub seed: u64,
}

/// Independence Metropolis on (β, ψ) with a Laplace proposal: multivariate
/// normal at the posterior mode with covariance from the observed
/// information.
pub fn lt_posterior_sample(
    data: &TrialData,
    prior: &LtPrior,
    t: u64,
    burn_in: u64,
    seed: u64,
) -> Result<LtDrawSet> {
    data.validate()?;
    if t <= burn_in {
        return Err(Error::domain("t must exceed burn-in"));
    }
    let post = LtLogPost { data, prior };
    let (mb, mp) = post.mode()?;
    let h = post.info(mb, mp);
    let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
    let cov = [[h[1][1] / det, -h[0][1] / det], [-h[1][0] / det, h[0][0] / det]];
    let l11 = cov[0][0].sqrt();
    let l21 = cov[0][1] / l11;
    let l22 = (cov[1][1] - l21 * l21).sqrt();
    // slightly heavier proposal to keep importance ratios bounded
    let scale = 1.2;
    let ln_prop = |beta: f64, psi: f64| {
        // invert x = m + scale·L·z for the lower-triangular L
        let z1 = (beta - mb) / (scale * l11);
        let z2 = ((psi - mp) / scale - l21 * z1) / l22;
        -0.5 * (z1 * z1 + z2 * z2) - (scale * scale * l11 * l22).ln() - 2.0 * LN_SQRT_2PI
    };
    let mut rng = RngStream::new(seed);
    let mut cur = (mb, mp);
    let mut cur_lp = post.eval(cur.0, cur.1) - ln_prop(cur.0, cur.1);
    let mut draws = Vec::with_capacity((t - burn_in) as usize);
    let mut accepted = 0u64;
    for it in 0..t {
        let z1 = rng.standard_normal();
        let z2 = rng.standard_normal();
        let beta = mb + scale * l11 * z1;
        let psi = mp + scale * (l21 * z1 + l22 * z2);
        let lp = post.eval(beta, psi) - ln_prop(beta, psi);
        if (lp - cur_lp) >= rng.uniform_open().ln() {
            cur = (beta, psi);
            cur_lp = lp;
            accepted += 1;
        }
        if it >= burn_in {
            draws.push(LtDraw {
                beta: cur.0,
                psi: cur.1,
                theta0: sigmoid(cur.0 - cur.1 / 2.0),
                theta1: sigmoid(cur.0 + cur.1 / 2.0),
            });
        }
    }
    Ok(LtDrawSet {
        draws,
        acceptance_rate: accepted as f64 / t as f64,
        seed,
    })
}
