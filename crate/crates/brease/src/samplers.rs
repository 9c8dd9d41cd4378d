//! Exact and data-augmented posterior samplers.
//!
//! The posterior is a mixture of independent betas indexed by the latent
//! counterfactual counts (C1, P1): the number of treated subjects for whom
//! treatment caused, respectively prevented, the outcome. The exact sampler
//! draws (C1, P1) from the normalized mixture-weight table and then the
//! three betas; the Gibbs sampler alternates the latent counts and the
//! parameters. Monotonicity-constrained models reduce to one-dimensional
//! mixtures, and the aggregated-Dirichlet null model to a mixture over the
//! latent cross-arm counts (w0, w1).

use crate::data::TrialData;
use crate::error::{Error, Result};
use crate::model::{AggregatedH0Prior, BreaseParams, BreasePrior};
use crate::numerics::rng::RngStream;
use crate::numerics::sample::{sample_beta, sample_binomial, sample_dirichlet};
use crate::numerics::special::{ln_binomial, ln_gamma};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    Gibbs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    NoHarm,
    NoBenefit,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DrawMeta {
    pub seed: u64,
    pub method: Method,
    pub burn_in: u64,
    pub constraint: Option<Constraint>,
    pub prior: BreasePrior,
}

/// A set of posterior (or prior) draws with its provenance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DrawSet {
    pub draws: Vec<BreaseParams>,
    pub meta: DrawMeta,
}

impl DrawSet {
    pub fn len(&self) -> usize {
        self.draws.len()
    }

    pub fn is_empty(&self) -> bool {
        self.draws.is_empty()
    }

    pub fn theta0(&self) -> impl Iterator<Item = f64> + '_ {
        self.draws.iter().map(|d| d.theta0)
    }

    pub fn theta1(&self) -> impl Iterator<Item = f64> + '_ {
        self.draws.iter().map(|d| d.theta1())
    }

    /// CSV export with columns theta0,eta_e,eta_s,theta1.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("theta0,eta_e,eta_s,theta1\n");
        for d in &self.draws {
            s.push_str(&format!("{},{},{},{}\n", d.theta0, d.eta_e, d.eta_s, d.theta1()));
        }
        s
    }

    /// JSON metadata sidecar.
    pub fn metadata_json(&self) -> serde_json::Value {
        serde_json::json!({
            "seed": self.meta.seed,
            "method": self.meta.method,
            "burn_in": self.meta.burn_in,
            "constraint": self.meta.constraint,
            "prior": self.meta.prior,
            "n_draws": self.draws.len(),
        })
    }
}

/// The (C1, P1) mixture-weight table of the unconstrained posterior.
///
/// Log gamma values are memoized per axis (every argument is affine in C1,
/// P1 or their sum), so building the table is O(rows + cols) gamma
/// evaluations plus O(rows × cols) arithmetic. The same table feeds the
/// exact sampler, the analytic marginal likelihood and posterior moments.
pub(crate) struct WeightTable {
    pub cols: usize, // P1 in 0..=N1-y1
    pub ln_w: Vec<f64>,
    pub lse: f64,
    data: TrialData,
    shapes0: (f64, f64),
    shapes_e: (f64, f64),
    shapes_s: (f64, f64),
}

impl WeightTable {
    pub fn build(data: &TrialData, prior: &BreasePrior) -> WeightTable {
        let (y0, y1) = (data.y0, data.y1);
        let k_max = data.n1 - data.y1;
        let n = data.total();
        let (a0, b0) = prior.shapes0();
        let (ae, be) = prior.shapes_e();
        let (sa, sb) = prior.shapes_s();
        let cols = (k_max + 1) as usize;

        let lc_y1: Vec<f64> = (0..=y1).map(|c| ln_binomial(y1, c)).collect();
        let lc_k: Vec<f64> = (0..=k_max).map(|p| ln_binomial(k_max, p)).collect();
        // eta_e beta: B(P1+ae, (y1−C1)+be)
        let lg_p_ae: Vec<f64> = (0..=k_max).map(|p| ln_gamma(p as f64 + ae)).collect();
        let lg_j_be: Vec<f64> = (0..=y1).map(|j| ln_gamma(j as f64 + be)).collect();
        let lg_m_e: Vec<f64> =
            (0..=(k_max + y1)).map(|m| ln_gamma(m as f64 + ae + be)).collect();
        // theta0 beta: B(s+a0, N−s+b0), s = y0+y1−C1+P1
        let lg_s_a0: Vec<f64> =
            (0..=(y1 + k_max)).map(|d| ln_gamma((y0 + d) as f64 + a0)).collect();
        let lg_s_b0: Vec<f64> =
            (0..=(y1 + k_max)).map(|d| ln_gamma((n - y0 - d) as f64 + b0)).collect();
        // eta_s beta: B(C1+as, (k_max−P1)+bs)
        let lg_c_sa: Vec<f64> = (0..=y1).map(|c| ln_gamma(c as f64 + sa)).collect();
        let lg_r_sb: Vec<f64> = (0..=k_max).map(|r| ln_gamma(r as f64 + sb)).collect();
        let lg_m_s: Vec<f64> =
            (0..=(y1 + k_max)).map(|m| ln_gamma(m as f64 + sa + sb)).collect();
        let lg_n_0 = ln_gamma(n as f64 + a0 + b0);

        let mut ln_w = Vec::with_capacity(((y1 + 1) as usize) * cols);
        let mut max = f64::NEG_INFINITY;
        for c1 in 0..=y1 {
            let j = (y1 - c1) as usize;
            for p1 in 0..=k_max {
                let r = (k_max - p1) as usize;
                // index of s − y0 = y1 − C1 + P1
                let d = (y1 - c1 + p1) as usize;
                let v = lc_y1[c1 as usize]
                    + lc_k[p1 as usize]
                    + (lg_p_ae[p1 as usize] + lg_j_be[j] - lg_m_e[p1 as usize + j])
                    + (lg_s_a0[d] + lg_s_b0[d] - lg_n_0)
                    + (lg_c_sa[c1 as usize] + lg_r_sb[r] - lg_m_s[c1 as usize + r]);
                if v > max {
                    max = v;
                }
                ln_w.push(v);
            }
        }
        let sum: f64 = ln_w.iter().map(|&v| (v - max).exp()).sum();
        let lse = max + sum.ln();
        WeightTable {
            cols,
            ln_w,
            lse,
            data: *data,
            shapes0: (a0, b0),
            shapes_e: (ae, be),
            shapes_s: (sa, sb),
        }
    }

    /// Normalized cumulative distribution over the flattened table.
    pub fn cdf(&self) -> Vec<f64> {
        let mut cdf = Vec::with_capacity(self.ln_w.len());
        let mut acc = 0.0;
        for &v in &self.ln_w {
            acc += (v - self.lse).exp();
            cdf.push(acc);
        }
        if let Some(last) = cdf.last_mut() {
            *last = 1.0;
        }
        cdf
    }

    /// Posterior beta shape pairs conditional on the latent counts.
    pub fn shapes(&self, c1: u64, p1: u64) -> [(f64, f64); 3] {
        let d = &self.data;
        let n = d.total();
        let s = d.y0 + d.y1 - c1 + p1;
        [
            (s as f64 + self.shapes0.0, (n - s) as f64 + self.shapes0.1),
            (
                p1 as f64 + self.shapes_e.0,
                (d.y1 - c1) as f64 + self.shapes_e.1,
            ),
            (
                c1 as f64 + self.shapes_s.0,
                (d.n1 - d.y1 - p1) as f64 + self.shapes_s.1,
            ),
        ]
    }

    /// Normalized weight iterator with the latent counts.
    pub fn weights(&self) -> impl Iterator<Item = (u64, u64, f64)> + '_ {
        self.ln_w.iter().enumerate().map(move |(i, &v)| {
            let c1 = (i / self.cols) as u64;
            let p1 = (i % self.cols) as u64;
            (c1, p1, (v - self.lse).exp())
        })
    }
}

fn draw_index(cdf: &[f64], rng: &mut RngStream) -> usize {
    let u = rng.uniform();
    cdf.partition_point(|&c| c <= u).min(cdf.len() - 1)
}

/// Exact i.i.d. sampling from the posterior: inverse-CDF over the
/// normalized (C1, P1) table, then the three conditional betas.
pub fn exact_sample(
    data: &TrialData,
    prior: &BreasePrior,
    t: u64,
    seed: u64,
) -> Result<DrawSet> {
    data.validate()?;
    if t == 0 {
        return Err(Error::domain("at least one draw is required"));
    }
    let mut rng = RngStream::new(seed);
    let draws = exact_draws(data, prior, t, &mut rng)?;
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

pub(crate) fn exact_draws(
    data: &TrialData,
    prior: &BreasePrior,
    t: u64,
    rng: &mut RngStream,
) -> Result<Vec<BreaseParams>> {
    let table = WeightTable::build(data, prior);
    if !table.lse.is_finite() {
        return Err(Error::numeric("mixture-weight table is identically zero"));
    }
    let cdf = table.cdf();
    let mut draws = Vec::with_capacity(t as usize);
    for _ in 0..t {
        let idx = draw_index(&cdf, rng);
        let c1 = (idx / table.cols) as u64;
        let p1 = (idx % table.cols) as u64;
        let sh = table.shapes(c1, p1);
        let theta0 = sample_beta(sh[0].0, sh[0].1, rng)?;
        let eta_e = sample_beta(sh[1].0, sh[1].1, rng)?;
        let eta_s = sample_beta(sh[2].0, sh[2].1, rng)?;
        draws.push(BreaseParams { theta0, eta_e, eta_s });
    }
    Ok(draws)
}

/// Binomial success probability for the causal count C1, written as
/// ratio of nonnegative parts so boundary parameter values take their
/// limiting value instead of producing NaN.
#[inline]
fn causal_prob(theta0: f64, eta_e: f64, eta_s: f64) -> f64 {
    let num = (1.0 - theta0) * eta_s;
    let den = num + (1.0 - eta_e) * theta0;
    if num == 0.0 {
        0.0
    } else {
        (num / den).clamp(0.0, 1.0)
    }
}

/// Binomial success probability for the preventive count P1.
#[inline]
fn preventive_prob(theta0: f64, eta_e: f64, eta_s: f64) -> f64 {
    let num = theta0 * eta_e;
    let den = num + (1.0 - theta0) * (1.0 - eta_s);
    if num == 0.0 {
        0.0
    } else {
        (num / den).clamp(0.0, 1.0)
    }
}

/// Data-augmentation Gibbs sampler: alternate the latent counterfactual
/// counts and the conditionally independent betas. Returns the chain after
/// burn-in.
pub fn gibbs_sample(
    data: &TrialData,
    prior: &BreasePrior,
    t: u64,
    burn_in: u64,
    init: &BreaseParams,
    seed: u64,
) -> Result<DrawSet> {
    gibbs_sample_thinned(data, prior, t, burn_in, 1, init, seed)
}

/// Gibbs sampling keeping every `thin`-th post-burn-in state.
///
/// Under strong prior-data conflict the chain's autocorrelation time runs
/// into the hundreds, so distribution-level comparisons against i.i.d.
/// draws need thinned output.
pub fn gibbs_sample_thinned(
    data: &TrialData,
    prior: &BreasePrior,
    t: u64,
    burn_in: u64,
    thin: u64,
    init: &BreaseParams,
    seed: u64,
) -> Result<DrawSet> {
    data.validate()?;
    if t <= burn_in {
        return Err(Error::domain(format!(
            "total iterations t={t} must exceed burn-in {burn_in}"
        )));
    }
    if thin == 0 {
        return Err(Error::domain("thinning interval must be at least 1"));
    }
    for (name, v) in [("theta0", init.theta0), ("eta_e", init.eta_e), ("eta_s", init.eta_s)] {
        if !(v > 0.0 && v < 1.0) {
            return Err(Error::domain(format!(
                "gibbs initialization must be strictly inside (0,1)^3, got {name}={v}"
            )));
        }
    }
    let (a0, b0) = prior.shapes0();
    let (ae, be) = prior.shapes_e();
    let (sa, sb) = prior.shapes_s();
    let n = data.total();
    let mut rng = RngStream::new(seed);
    let mut state = *init;
    let kept = (t - burn_in).div_ceil(thin);
    let mut draws = Vec::with_capacity(kept as usize);
    for it in 0..t {
        let c1 = sample_binomial(
            data.y1,
            causal_prob(state.theta0, state.eta_e, state.eta_s),
            &mut rng,
        )?;
        let p1 = sample_binomial(
            data.n1 - data.y1,
            preventive_prob(state.theta0, state.eta_e, state.eta_s),
            &mut rng,
        )?;
        let s = data.y0 + data.y1 - c1 + p1;
        state.theta0 = sample_beta(s as f64 + a0, (n - s) as f64 + b0, &mut rng)?;
        state.eta_e = sample_beta(
            p1 as f64 + ae,
            (data.y1 - c1) as f64 + be,
            &mut rng,
        )?;
        state.eta_s = sample_beta(
            c1 as f64 + sa,
            (data.n1 - data.y1 - p1) as f64 + sb,
            &mut rng,
        )?;
        if it >= burn_in && (it - burn_in).is_multiple_of(thin) {
            draws.push(state);
        }
    }
    Ok(DrawSet {
        draws,
        meta: DrawMeta {
            seed,
            method: Method::Gibbs,
            burn_in,
            constraint: None,
            prior: *prior,
        },
    })
}

/// One-dimensional mixture weights of the no-harm model (over P1).
pub(crate) fn no_harm_weights(data: &TrialData, prior: &BreasePrior) -> Vec<f64> {
    let (a0, b0) = prior.shapes0();
    let (ae, be) = prior.shapes_e();
    let n = data.total();
    let k_max = data.n1 - data.y1;
    let lg_m_e = |p: f64| ln_gamma(p + ae) + ln_gamma(data.y1 as f64 + be) - ln_gamma(p + data.y1 as f64 + ae + be);
    (0..=k_max)
        .map(|p1| {
            let s = data.y0 + data.y1 + p1;
            ln_binomial(k_max, p1)
                + lg_m_e(p1 as f64)
                + ln_gamma(s as f64 + a0) + ln_gamma((n - s) as f64 + b0)
                - ln_gamma(n as f64 + a0 + b0)
        })
        .collect()
}

/// One-dimensional mixture weights of the no-benefit model (over C1).
pub(crate) fn no_benefit_weights(data: &TrialData, prior: &BreasePrior) -> Vec<f64> {
    let (a0, b0) = prior.shapes0();
    let (sa, sb) = prior.shapes_s();
    let n = data.total();
    (0..=data.y1)
        .map(|c1| {
            let s = data.y0 + data.y1 - c1;
            ln_binomial(data.y1, c1)
                + ln_gamma(c1 as f64 + sa) + ln_gamma((data.n1 - data.y1) as f64 + sb)
                - ln_gamma((c1 + data.n1 - data.y1) as f64 + sa + sb)
                + ln_gamma(s as f64 + a0) + ln_gamma((n - s) as f64 + b0)
                - ln_gamma(n as f64 + a0 + b0)
        })
        .collect()
}

fn normalized_cdf(ln_w: &[f64]) -> Vec<f64> {
    let lse = crate::numerics::special::log_sum_exp_unchecked(ln_w);
    let mut acc = 0.0;
    let mut cdf: Vec<f64> = ln_w
        .iter()
        .map(|&v| {
            acc += (v - lse).exp();
            acc
        })
        .collect();
    if let Some(last) = cdf.last_mut() {
        *last = 1.0;
    }
    cdf
}

/// Posterior sampling under a monotonicity constraint (ηs = 0 for no-harm,
/// ηe = 0 for no-benefit), by the exact one-dimensional mixture or its
/// data-augmentation counterpart.
pub fn sample_monotone(
    data: &TrialData,
    prior: &BreasePrior,
    constraint: Constraint,
    method: Method,
    t: u64,
    burn_in: u64,
    seed: u64,
) -> Result<DrawSet> {
    data.validate()?;
    if t == 0 {
        return Err(Error::domain("at least one draw is required"));
    }
    let (a0, b0) = prior.shapes0();
    let (ae, be) = prior.shapes_e();
    let (sa, sb) = prior.shapes_s();
    let n = data.total();
    let mut rng = RngStream::new(seed);
    let mut draws = Vec::new();
    match (constraint, method) {
        (Constraint::NoHarm, Method::Exact) => {
            let cdf = normalized_cdf(&no_harm_weights(data, prior));
            for _ in 0..t {
                let p1 = draw_index(&cdf, &mut rng) as u64;
                let s = data.y0 + data.y1 + p1;
                let theta0 = sample_beta(s as f64 + a0, (n - s) as f64 + b0, &mut rng)?;
                let eta_e =
                    sample_beta(p1 as f64 + ae, data.y1 as f64 + be, &mut rng)?;
                draws.push(BreaseParams { theta0, eta_e, eta_s: 0.0 });
            }
        }
        (Constraint::NoBenefit, Method::Exact) => {
            let cdf = normalized_cdf(&no_benefit_weights(data, prior));
            for _ in 0..t {
                let c1 = draw_index(&cdf, &mut rng) as u64;
                let s = data.y0 + data.y1 - c1;
                let theta0 = sample_beta(s as f64 + a0, (n - s) as f64 + b0, &mut rng)?;
                let eta_s = sample_beta(
                    c1 as f64 + sa,
                    (data.n1 - data.y1) as f64 + sb,
                    &mut rng,
                )?;
                draws.push(BreaseParams { theta0, eta_e: 0.0, eta_s });
            }
        }
        (Constraint::NoHarm, Method::Gibbs) => {
            if t <= burn_in {
                return Err(Error::domain("t must exceed burn-in"));
            }
            let (mut theta0, mut eta_e): (f64, f64) = (0.5, 0.5);
            for it in 0..t {
                let pp = {
                    let num = theta0 * eta_e;
                    let den = num + (1.0 - theta0);
                    if num == 0.0 { 0.0 } else { (num / den).clamp(0.0, 1.0) }
                };
                let p1 = sample_binomial(data.n1 - data.y1, pp, &mut rng)?;
                let s = data.y0 + data.y1 + p1;
                theta0 = sample_beta(s as f64 + a0, (n - s) as f64 + b0, &mut rng)?;
                eta_e = sample_beta(p1 as f64 + ae, data.y1 as f64 + be, &mut rng)?;
                if it >= burn_in {
                    draws.push(BreaseParams { theta0, eta_e, eta_s: 0.0 });
                }
            }
        }
        (Constraint::NoBenefit, Method::Gibbs) => {
            if t <= burn_in {
                return Err(Error::domain("t must exceed burn-in"));
            }
            let (mut theta0, mut eta_s): (f64, f64) = (0.5, 0.5);
            for it in 0..t {
                let cp = {
                    let num = (1.0 - theta0) * eta_s;
                    let den = theta0 + num;
                    if num == 0.0 { 0.0 } else { (num / den).clamp(0.0, 1.0) }
                };
                let c1 = sample_binomial(data.y1, cp, &mut rng)?;
                let s = data.y0 + data.y1 - c1;
                theta0 = sample_beta(s as f64 + a0, (n - s) as f64 + b0, &mut rng)?;
                eta_s = sample_beta(
                    c1 as f64 + sa,
                    (data.n1 - data.y1) as f64 + sb,
                    &mut rng,
                )?;
                if it >= burn_in {
                    draws.push(BreaseParams { theta0, eta_e: 0.0, eta_s });
                }
            }
        }
    }
    Ok(DrawSet {
        draws,
        meta: DrawMeta {
            seed,
            method,
            burn_in: if method == Method::Gibbs { burn_in } else { 0 },
            constraint: Some(constraint),
            prior: *prior,
        },
    })
}

/// One draw of the aggregated-cell simplex under the sharp null, plus the
/// parameters it implies.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct H0Draw {
    pub p00: f64,
    pub p10_star: f64,
    pub p11: f64,
}

impl H0Draw {
    /// Common risk θ0 = θ1 under the null.
    pub fn theta(&self) -> f64 {
        self.p10_star / 2.0 + self.p11
    }

    pub fn eta_e(&self) -> f64 {
        self.p10_star / (self.p10_star + 2.0 * self.p11)
    }

    pub fn eta_s(&self) -> f64 {
        self.p10_star / (self.p10_star + 2.0 * self.p00)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct H0DrawSet {
    pub draws: Vec<H0Draw>,
    pub seed: u64,
    pub method: Method,
    pub burn_in: u64,
}

/// Log mixture weights of the aggregated null model over (w0, w1), plus
/// the constant ln Γ(sum) shared by every cell.
pub(crate) struct H0WeightTable {
    pub cols: usize, // w1 in 0..=N-y0-y1
    pub ln_w: Vec<f64>,
}

pub(crate) fn h0_weight_table(
    data: &TrialData,
    prior: &AggregatedH0Prior,
    cap_cells: usize,
) -> Result<H0WeightTable> {
    let (a00, a10, a11) = prior.alphas();
    let r = data.y0 + data.y1;
    let s = data.total() - r;
    let rows = (r + 1) as usize;
    let cols = (s + 1) as usize;
    if rows.saturating_mul(cols) > cap_cells {
        return Err(Error::numeric(format!(
            "aggregated-null weight table would need {rows}×{cols} cells; cap is {cap_cells}"
        )));
    }
    let ln2 = std::f64::consts::LN_2;
    let lg_w1: Vec<f64> = (0..=s).map(|w1| ln_gamma((s - w1) as f64 + a00)).collect();
    let lg_w0: Vec<f64> = (0..=r).map(|w0| ln_gamma((r - w0) as f64 + a11)).collect();
    let lg_sum10: Vec<f64> =
        (0..=(r + s)).map(|m| ln_gamma(m as f64 + a10)).collect();
    let lc_r: Vec<f64> = (0..=r).map(|w0| ln_binomial(r, w0)).collect();
    let lc_s: Vec<f64> = (0..=s).map(|w1| ln_binomial(s, w1)).collect();
    let lg_total = ln_gamma((r + s) as f64 + a00 + a10 + a11);
    let mut ln_w = Vec::with_capacity(rows * cols);
    for w0 in 0..=r {
        for w1 in 0..=s {
            ln_w.push(
                -((w0 + w1) as f64) * ln2
                    + lc_r[w0 as usize]
                    + lc_s[w1 as usize]
                    + lg_w1[w1 as usize]
                    + lg_sum10[(w0 + w1) as usize]
                    + lg_w0[w0 as usize]
                    - lg_total,
            );
        }
    }
    Ok(H0WeightTable { cols, ln_w })
}

fn h0_dirichlet_shapes(data: &TrialData, prior: &AggregatedH0Prior, w0: u64, w1: u64) -> [f64; 3] {
    let (a00, a10, a11) = prior.alphas();
    let r = data.y0 + data.y1;
    let s = data.total() - r;
    [
        (s - w1) as f64 + a00,
        (w0 + w1) as f64 + a10,
        (r - w0) as f64 + a11,
    ]
}

/// Posterior sampling for the aggregated-Dirichlet null model.
pub fn sample_h0_aggregated(
    data: &TrialData,
    prior: &AggregatedH0Prior,
    method: Method,
    t: u64,
    burn_in: u64,
    seed: u64,
) -> Result<H0DrawSet> {
    data.validate()?;
    if t == 0 {
        return Err(Error::domain("at least one draw is required"));
    }
    let mut rng = RngStream::new(seed);
    let mut draws = Vec::new();
    match method {
        Method::Exact => {
            let table = h0_weight_table(data, prior, 20_000_000)?;
            let cdf = normalized_cdf(&table.ln_w);
            for _ in 0..t {
                let idx = draw_index(&cdf, &mut rng);
                let w0 = (idx / table.cols) as u64;
                let w1 = (idx % table.cols) as u64;
                let sh = h0_dirichlet_shapes(data, prior, w0, w1);
                let p = sample_dirichlet(&sh, &mut rng)?;
                draws.push(H0Draw { p00: p[0], p10_star: p[1], p11: p[2] });
            }
        }
        Method::Gibbs => {
            if t <= burn_in {
                return Err(Error::domain("t must exceed burn-in"));
            }
            let r = data.y0 + data.y1;
            let s = data.total() - r;
            let mut p = H0Draw { p00: 1.0 / 3.0, p10_star: 1.0 / 3.0, p11: 1.0 / 3.0 };
            for it in 0..t {
                let pr0 = p.p10_star / (p.p10_star + 2.0 * p.p11);
                let pr1 = p.p10_star / (p.p10_star + 2.0 * p.p00);
                let w0 = sample_binomial(r, pr0.clamp(0.0, 1.0), &mut rng)?;
                let w1 = sample_binomial(s, pr1.clamp(0.0, 1.0), &mut rng)?;
                let sh = h0_dirichlet_shapes(data, prior, w0, w1);
                let v = sample_dirichlet(&sh, &mut rng)?;
                p = H0Draw { p00: v[0], p10_star: v[1], p11: v[2] };
                if it >= burn_in {
                    draws.push(p);
                }
            }
        }
    }
    Ok(H0DrawSet {
        draws,
        seed,
        method,
        burn_in: if method == Method::Gibbs { burn_in } else { 0 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::default_prior;
    use crate::testutil::two_sample_ks;

    fn pathological() -> (TrialData, BreasePrior) {
        (
            TrialData::new(20, 1000, 40, 1000).unwrap(),
            BreasePrior::new(0.5, 0.5, 0.01, 2.0, 2.0, 1.0).unwrap(),
        )
    }

    #[test]
    fn empty_data_posterior_is_prior() {
        let d = TrialData::new(0, 0, 0, 0).unwrap();
        let prior = default_prior(0.3).unwrap();
        let set = exact_sample(&d, &prior, 100_000, 11).unwrap();
        let n = set.len() as f64;
        let m0: f64 = set.theta0().sum::<f64>() / n;
        let me: f64 = set.draws.iter().map(|x| x.eta_e).sum::<f64>() / n;
        // prior means 1/2 and 0.3; SE of uniform mean = 1/sqrt(12 n)
        assert!((m0 - 0.5).abs() < 3.0 / (12.0f64 * n).sqrt());
        let se_e = (0.3f64 * 0.7 / 2.0 / n).sqrt();
        assert!((me - 0.3).abs() < 3.0 * se_e, "mean eta_e {me}");
    }

    #[test]
    fn exact_mean_matches_analytic_mixture_mean() {
        let (d, prior) = pathological();
        let table = WeightTable::build(&d, &prior);
        let mut want = 0.0;
        for (c1, p1, w) in table.weights() {
            let sh = table.shapes(c1, p1);
            want += w * sh[0].0 / (sh[0].0 + sh[0].1);
        }
        let set = exact_sample(&d, &prior, 100_000, 12).unwrap();
        let n = set.len() as f64;
        let mean: f64 = set.theta0().sum::<f64>() / n;
        let var: f64 = set.theta0().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        let se = (var / n).sqrt();
        assert!((mean - want).abs() < 3.0 * se, "mean {mean} vs analytic {want}");
    }

    #[test]
    fn exact_draws_are_iid() {
        let (d, prior) = pathological();
        let set = exact_sample(&d, &prior, 100_000, 13).unwrap();
        let xs: Vec<f64> = set.theta0().collect();
        let n = xs.len();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
        let lag1: f64 = xs
            .windows(2)
            .map(|w| (w[0] - mean) * (w[1] - mean))
            .sum::<f64>()
            / ((n - 1) as f64 * var);
        assert!(lag1.abs() < 3.0 / (n as f64).sqrt(), "lag-1 autocorrelation {lag1}");
    }

    #[test]
    fn gibbs_matches_exact_on_pathological_instance() {
        // the prior-data conflict drives the chain's autocorrelation time
        // to ~140, so the distributional comparison uses a thinned chain
        let (d, prior) = pathological();
        let exact = exact_sample(&d, &prior, 50_000, 21).unwrap();
        let init = BreaseParams::new(0.5, 0.5, 0.5).unwrap();
        let gibbs =
            gibbs_sample_thinned(&d, &prior, 1_000 + 50_000 * 200, 1_000, 200, &init, 22)
                .unwrap();
        assert_eq!(gibbs.len(), 50_000);
        let mut a: Vec<f64> = exact.theta0().collect();
        let mut b: Vec<f64> = gibbs.theta0().collect();
        let ks = two_sample_ks(&mut a, &mut b);
        assert!(ks <= 0.01, "exact-vs-gibbs KS = {ks}");
    }

    #[test]
    fn gibbs_chains_from_distant_starts_converge() {
        let (d, prior) = pathological();
        let lo = BreaseParams::new(0.05, 0.05, 0.05).unwrap();
        let hi = BreaseParams::new(0.95, 0.95, 0.95).unwrap();
        let a =
            gibbs_sample_thinned(&d, &prior, 2_000 + 50_000 * 100, 2_000, 100, &lo, 31).unwrap();
        let b =
            gibbs_sample_thinned(&d, &prior, 2_000 + 50_000 * 100, 2_000, 100, &hi, 32).unwrap();
        let mut xa: Vec<f64> = a.theta0().collect();
        let mut xb: Vec<f64> = b.theta0().collect();
        let ks = two_sample_ks(&mut xa, &mut xb);
        assert!(ks <= 0.015, "KS between chains = {ks}");
    }

    #[test]
    fn gibbs_empty_data_matches_prior_moments() {
        let d = TrialData::new(0, 0, 0, 0).unwrap();
        let prior = default_prior(0.3).unwrap();
        let init = BreaseParams::new(0.5, 0.5, 0.5).unwrap();
        let set = gibbs_sample(&d, &prior, 101_000, 1_000, &init, 5).unwrap();
        let n = set.len() as f64;
        let mean: f64 = set.theta0().sum::<f64>() / n;
        assert!((mean - 0.5).abs() < 3.0 / (12.0f64 * n).sqrt(), "theta0 mean {mean}");
    }

    #[test]
    fn gibbs_validates_inputs() {
        let d = TrialData::new(1, 2, 1, 2).unwrap();
        let prior = default_prior(0.3).unwrap();
        let bad = BreaseParams::new(0.0, 0.5, 0.5).unwrap();
        assert!(gibbs_sample(&d, &prior, 100, 10, &bad, 1).is_err());
        let ok = BreaseParams::new(0.5, 0.5, 0.5).unwrap();
        assert!(gibbs_sample(&d, &prior, 10, 10, &ok, 1).is_err());
    }

    #[test]
    fn weight_table_normalizes() {
        let (d, prior) = pathological();
        let table = WeightTable::build(&d, &prior);
        let total: f64 = table.weights().map(|(_, _, w)| w).sum();
        assert!((total - 1.0).abs() < 1e-10, "weights sum to {total}");
    }

    #[test]
    fn monotone_constraints_hold_exactly() {
        let d = TrialData::new(3, 10, 4, 10).unwrap();
        let prior = default_prior(0.3).unwrap();
        let nh = sample_monotone(&d, &prior, Constraint::NoHarm, Method::Exact, 2000, 0, 7)
            .unwrap();
        for p in &nh.draws {
            assert_eq!(p.eta_s, 0.0);
            // identical expression tree as risk_of_treatment with eta_s = 0
            assert_eq!(p.theta1(), p.theta0 - p.eta_e * p.theta0);
        }
        let nb = sample_monotone(&d, &prior, Constraint::NoBenefit, Method::Gibbs, 3000, 500, 7)
            .unwrap();
        for p in &nb.draws {
            assert_eq!(p.eta_e, 0.0);
            assert_eq!(p.theta1(), p.eta_s * (1.0 - p.theta0) + p.theta0);
        }
    }

    #[test]
    fn exact_samplers_ignore_burn_in() {
        let d = TrialData::new(3, 10, 4, 10).unwrap();
        let prior = default_prior(0.3).unwrap();
        for c in [Constraint::NoHarm, Constraint::NoBenefit] {
            let a = sample_monotone(&d, &prior, c, Method::Exact, 200, 0, 5).unwrap();
            let b = sample_monotone(&d, &prior, c, Method::Exact, 200, 500, 5).unwrap();
            assert_eq!(a.to_csv(), b.to_csv());
        }
    }

    #[test]
    fn covid_no_harm_efficacy_summary() {
        // under the no-harm constraint the efficacy is point identified and
        // matches the reported unconstrained vaccine-efficacy interval
        let d = TrialData::new(169, 20172, 9, 19965).unwrap();
        let prior = default_prior(0.3).unwrap();
        let set =
            sample_monotone(&d, &prior, Constraint::NoHarm, Method::Exact, 100_000, 0, 77)
                .unwrap();
        let s = crate::summaries::summarize(&set, crate::summaries::Estimand::EtaE, 0.95)
            .unwrap();
        assert!((s.median - 0.94).abs() <= 0.01, "median {}", s.median);
        assert!((s.cri_low - 0.90).abs() <= 0.01, "low {}", s.cri_low);
        assert!((s.cri_high - 0.97).abs() <= 0.01, "high {}", s.cri_high);
    }

    #[test]
    fn no_harm_with_all_treated_dead_kills_efficacy() {
        let d = TrialData::new(1, 10, 10, 10).unwrap();
        let prior = default_prior(0.3).unwrap();
        let set = sample_monotone(&d, &prior, Constraint::NoHarm, Method::Exact, 20_000, 0, 9)
            .unwrap();
        let mean: f64 = set.draws.iter().map(|p| p.eta_e).sum::<f64>() / set.len() as f64;
        assert!(mean < 0.05, "eta_e mean {mean} should be near 0");
    }

    #[test]
    fn monotone_exact_vs_gibbs_agree() {
        let d = TrialData::new(3, 10, 4, 10).unwrap();
        let prior = default_prior(0.3).unwrap();
        let ex = sample_monotone(&d, &prior, Constraint::NoBenefit, Method::Exact, 50_000, 0, 41)
            .unwrap();
        let gb =
            sample_monotone(&d, &prior, Constraint::NoBenefit, Method::Gibbs, 51_000, 1_000, 42)
                .unwrap();
        let mut a: Vec<f64> = ex.theta0().collect();
        let mut b: Vec<f64> = gb.theta0().collect();
        let ks = two_sample_ks(&mut a, &mut b);
        assert!(ks <= 0.01, "KS = {ks}");
    }

    #[test]
    fn h0_aggregated_draws() {
        let d = TrialData::new(3, 10, 4, 10).unwrap();
        let prior = AggregatedH0Prior::new(0.5, 0.5, 1.0, 1.0).unwrap();
        let ex = sample_h0_aggregated(&d, &prior, Method::Exact, 50_000, 0, 51).unwrap();
        for p in ex.draws.iter().take(100) {
            let sum = p.p00 + p.p10_star + p.p11;
            assert!((sum - 1.0).abs() < 1e-12);
            // theta0 and theta1 coincide by construction
            assert_eq!(p.theta(), p.p10_star / 2.0 + p.p11);
        }
        let gb = sample_h0_aggregated(&d, &prior, Method::Gibbs, 51_000, 1_000, 52).unwrap();
        let mut a: Vec<f64> = ex.draws.iter().map(|p| p.p10_star).collect();
        let mut b: Vec<f64> = gb.draws.iter().map(|p| p.p10_star).collect();
        let ks = two_sample_ks(&mut a, &mut b);
        assert!(ks <= 0.01, "KS = {ks}");
    }

    #[test]
    fn export_formats() {
        let d = TrialData::new(1, 5, 2, 6).unwrap();
        let prior = default_prior(0.3).unwrap();
        let set = exact_sample(&d, &prior, 10, 3).unwrap();
        let csv = set.to_csv();
        assert!(csv.starts_with("theta0,eta_e,eta_s,theta1\n"));
        assert_eq!(csv.lines().count(), 11);
        let meta = set.metadata_json();
        assert_eq!(meta["seed"], 3);
        assert_eq!(meta["method"], "exact");
        // identical seed reproduces the draw set byte for byte
        let again = exact_sample(&d, &prior, 10, 3).unwrap();
        assert_eq!(set.to_csv(), again.to_csv());
    }
}
