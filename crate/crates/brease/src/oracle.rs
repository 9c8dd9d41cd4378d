//! Brute-force numerical-integration references.
//!
//! Everything here integrates raw likelihood kernels against prior
//! densities directly — no analytic identity, mixture weight, or closed
//! form from the modules under validation is consumed — so agreement with
//! the analytic paths is evidence for both sides.

use crate::comparators::{IbPrior, LtPrior};
use crate::data::TrialData;
use crate::error::{Error, Result};
use crate::model::{AggregatedH0Prior, BreasePrior};
use crate::numerics::quad::{
    beta_axis_rule, gauss_legendre, ln_integrate_power_product, AxisRule, PowerFactor,
};
use crate::numerics::special::{ln_beta_unchecked, ln_binomial, log_sum_exp_unchecked};
use serde::{Deserialize, Serialize};

/// Controls of the quadrature reference.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Base resolution per axis; at least 16.
    pub panels_per_axis: usize,
    /// Successive refinements must agree to this absolute log-scale
    /// tolerance.
    pub tolerance: f64,
    pub max_refinements: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { panels_per_axis: 64, tolerance: 1e-6, max_refinements: 4 }
    }
}

impl QuadratureSpec {
    fn validate(&self) -> Result<()> {
        if self.panels_per_axis < 16 {
            return Err(Error::domain("quadrature needs at least 16 panels per axis"));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::domain("quadrature tolerance must be positive"));
        }
        Ok(())
    }

    /// Tanh-sinh level whose node count roughly matches the requested
    /// per-axis resolution.
    fn base_level(&self) -> u32 {
        let mut level = 0u32;
        while (1usize << level) * 16 < self.panels_per_axis && level < 8 {
            level += 1;
        }
        level
    }
}

/// The model whose evidence is being integrated, with its prior.
#[derive(Clone, Copy, Debug)]
pub enum OracleModel {
    M0(BreasePrior),
    M1(BreasePrior),
    NoHarm(BreasePrior),
    NoBenefit(BreasePrior),
    H0Aggregated(AggregatedH0Prior),
    IbH1(IbPrior),
    /// The conditional prior of the independent-beta model at the null.
    IbH0(IbPrior),
    LtH1(LtPrior),
    LtH0(LtPrior),
}

const COST_GUARD_N: u64 = 50;

#[inline]
fn xlogy(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * y.ln()
    }
}

/// ln of the two-binomial likelihood without binomial coefficients.
#[inline]
fn ln_lik_kernel(data: &TrialData, theta0: f64, theta1: f64) -> f64 {
    xlogy(data.y0 as f64, theta0)
        + xlogy((data.n0 - data.y0) as f64, 1.0 - theta0)
        + xlogy(data.y1 as f64, theta1)
        + xlogy((data.n1 - data.y1) as f64, 1.0 - theta1)
}

fn ln_front(data: &TrialData) -> f64 {
    ln_binomial(data.n0, data.y0) + ln_binomial(data.n1, data.y1)
}

/// Streaming log-sum-exp accumulator for large tensor sums.
#[derive(Clone, Copy)]
struct LseAcc {
    max: f64,
    sum: f64,
}

impl LseAcc {
    fn new() -> Self {
        LseAcc { max: f64::NEG_INFINITY, sum: 0.0 }
    }

    #[inline]
    fn push(&mut self, v: f64) {
        if v == f64::NEG_INFINITY {
            return;
        }
        if v <= self.max {
            self.sum += (v - self.max).exp();
        } else {
            self.sum = self.sum * (self.max - v).exp() + 1.0;
            self.max = v;
        }
    }

    fn value(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + self.sum.ln()
        }
    }
}

fn tensor2(a: &AxisRule, b: &AxisRule, mut ln_f: impl FnMut(f64, f64) -> f64) -> f64 {
    let mut acc = LseAcc::new();
    for (&xa, &wa) in a.nodes.iter().zip(&a.ln_weights) {
        for (&xb, &wb) in b.nodes.iter().zip(&b.ln_weights) {
            acc.push(wa + wb + ln_f(xa, xb));
        }
    }
    acc.value()
}

fn tensor3(
    a: &AxisRule,
    b: &AxisRule,
    c: &AxisRule,
    mut ln_f: impl FnMut(f64, f64, f64) -> f64,
) -> f64 {
    let mut acc = LseAcc::new();
    for (&xa, &wa) in a.nodes.iter().zip(&a.ln_weights) {
        for (&xb, &wb) in b.nodes.iter().zip(&b.ln_weights) {
            let wab = wa + wb;
            for (&xc, &wc) in c.nodes.iter().zip(&c.ln_weights) {
                acc.push(wab + wc + ln_f(xa, xb, xc));
            }
        }
    }
    acc.value()
}

fn refine(
    spec: &QuadratureSpec,
    mut eval: impl FnMut(u32) -> Result<f64>,
) -> Result<f64> {
    let base = spec.base_level();
    let mut prev = eval(base)?;
    for k in 1..=spec.max_refinements {
        let cur = eval(base + k)?;
        if (cur - prev).abs() <= spec.tolerance {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::numeric(format!(
        "oracle quadrature did not stabilize to {:.1e} within {} refinements",
        spec.tolerance, spec.max_refinements
    )))
}

/// Log marginal likelihood by direct quadrature of likelihood × prior over
/// the model's parameter domain.
pub fn oracle_log_ml(data: &TrialData, model: &OracleModel, spec: &QuadratureSpec) -> Result<f64> {
    data.validate()?;
    spec.validate()?;
    if data.total() > COST_GUARD_N {
        return Err(Error::domain(format!(
            "oracle evidence is guarded to N0+N1 <= {COST_GUARD_N}"
        )));
    }
    let front = ln_front(data);
    match *model {
        OracleModel::M0(prior) => {
            let (a0, b0) = prior.shapes0();
            refine(spec, |level| {
                let axis = beta_axis_rule(a0, b0, level);
                Ok(front + axis.ln_integrate(|t| ln_lik_kernel(data, t, t)))
            })
        }
        OracleModel::M1(prior) => {
            let (a0, b0) = prior.shapes0();
            let (ae, be) = prior.shapes_e();
            let (sa, sb) = prior.shapes_s();
            refine(spec, |level| {
                let t0 = beta_axis_rule(a0, b0, level);
                let ee = beta_axis_rule(ae, be, level);
                let es = beta_axis_rule(sa, sb, level);
                Ok(front
                    + tensor3(&t0, &ee, &es, |theta0, eta_e, eta_s| {
                        let theta1 = (theta0 - eta_e * theta0) + eta_s * (1.0 - theta0);
                        ln_lik_kernel(data, theta0, theta1)
                    }))
            })
        }
        OracleModel::NoHarm(prior) => {
            let (a0, b0) = prior.shapes0();
            let (ae, be) = prior.shapes_e();
            refine(spec, |level| {
                let t0 = beta_axis_rule(a0, b0, level);
                let ee = beta_axis_rule(ae, be, level);
                Ok(front
                    + tensor2(&t0, &ee, |theta0, eta_e| {
                        ln_lik_kernel(data, theta0, (1.0 - eta_e) * theta0)
                    }))
            })
        }
        OracleModel::NoBenefit(prior) => {
            let (a0, b0) = prior.shapes0();
            let (sa, sb) = prior.shapes_s();
            refine(spec, |level| {
                let t0 = beta_axis_rule(a0, b0, level);
                let es = beta_axis_rule(sa, sb, level);
                Ok(front
                    + tensor2(&t0, &es, |theta0, eta_s| {
                        ln_lik_kernel(data, theta0, theta0 + eta_s * (1.0 - theta0))
                    }))
            })
        }
        OracleModel::H0Aggregated(prior) => {
            // stick-breaking: p10* ~ Beta(α10, α00+α11), then the remaining
            // mass splits as w ~ Beta(α00, α11)
            let (a00, a10, a11) = prior.alphas();
            let y = (data.y0 + data.y1) as f64;
            let rest = (data.total() - data.y0 - data.y1) as f64;
            refine(spec, |level| {
                let v_axis = beta_axis_rule(a10, a00 + a11, level);
                let w_axis = beta_axis_rule(a00, a11, level);
                Ok(front
                    + tensor2(&v_axis, &w_axis, |v, w| {
                        let p11 = (1.0 - v) * (1.0 - w);
                        let theta = v / 2.0 + p11;
                        xlogy(y, theta) + xlogy(rest, 1.0 - theta)
                    }))
            })
        }
        OracleModel::IbH1(prior) => refine(spec, |level| {
            let t0 = beta_axis_rule(prior.a0, prior.b0, level);
            let t1 = beta_axis_rule(prior.a1, prior.b1, level);
            let l0 = t0.ln_integrate(|t| {
                xlogy(data.y0 as f64, t) + xlogy((data.n0 - data.y0) as f64, 1.0 - t)
            });
            let l1 = t1.ln_integrate(|t| {
                xlogy(data.y1 as f64, t) + xlogy((data.n1 - data.y1) as f64, 1.0 - t)
            });
            Ok(front + l0 + l1)
        }),
        OracleModel::IbH0(prior) => {
            let a = prior.a0 + prior.a1 - 1.0;
            let b = prior.b0 + prior.b1 - 1.0;
            if !(a > 0.0) || !(b > 0.0) {
                return Err(Error::domain(
                    "conditioned null prior needs a0+a1 > 1 and b0+b1 > 1",
                ));
            }
            refine(spec, |level| {
                let axis = beta_axis_rule(a, b, level);
                Ok(front + axis.ln_integrate(|t| ln_lik_kernel(data, t, t)))
            })
        }
        OracleModel::LtH1(prior) => refine(spec, |level| Ok(lt_oracle_h1(data, &prior, level))),
        OracleModel::LtH0(prior) => refine(spec, |level| Ok(lt_oracle_h0(data, &prior, level))),
    }
}

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;

fn gl_axis(lo: f64, hi: f64, panels: usize) -> AxisRule {
    let (x, w) = gauss_legendre(16);
    let mut nodes = Vec::with_capacity(16 * panels);
    let mut ln_weights = Vec::with_capacity(16 * panels);
    let step = (hi - lo) / panels as f64;
    for p in 0..panels {
        let c = lo + (p as f64 + 0.5) * step;
        for i in 0..16 {
            nodes.push(c + 0.5 * step * x[i]);
            ln_weights.push((w[i] * 0.5 * step).ln());
        }
    }
    AxisRule { nodes, ln_weights }
}

fn ln_sigmoid(u: f64) -> f64 {
    -(-u).exp().ln_1p()
}

fn lt_ln_joint(data: &TrialData, prior: &LtPrior, beta: f64, psi: f64) -> f64 {
    let u0 = beta - psi / 2.0;
    let u1 = beta + psi / 2.0;
    data.y0 as f64 * ln_sigmoid(u0)
        + (data.n0 - data.y0) as f64 * ln_sigmoid(-u0)
        + data.y1 as f64 * ln_sigmoid(u1)
        + (data.n1 - data.y1) as f64 * ln_sigmoid(-u1)
        - 0.5 * ((beta - prior.mu_beta) / prior.sigma_beta).powi(2)
        - prior.sigma_beta.ln()
        - LN_SQRT_2PI
}

fn lt_oracle_h1(data: &TrialData, prior: &LtPrior, level: u32) -> f64 {
    let panels = (1usize << level) * 2;
    // cover the prior mass and any data-driven mode for guarded N
    let beta_axis = gl_axis(prior.mu_beta - 14.0, prior.mu_beta + 14.0, panels);
    let psi_axis = gl_axis(prior.mu_psi - 14.0, prior.mu_psi + 14.0, panels);
    ln_front(data)
        + tensor2(&beta_axis, &psi_axis, |beta, psi| {
            lt_ln_joint(data, prior, beta, psi)
                - 0.5 * ((psi - prior.mu_psi) / prior.sigma_psi).powi(2)
                - prior.sigma_psi.ln()
                - LN_SQRT_2PI
        })
}

fn lt_oracle_h0(data: &TrialData, prior: &LtPrior, level: u32) -> f64 {
    let panels = (1usize << level) * 4;
    let beta_axis = gl_axis(prior.mu_beta - 14.0, prior.mu_beta + 14.0, panels);
    ln_front(data) + beta_axis.ln_integrate(|beta| lt_ln_joint(data, prior, beta, 0.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MarginalTarget {
    Theta0,
    Theta1,
}

/// A posterior marginal density on a uniform grid over (0, 1): pointwise
/// values at bin centers plus quadrature-accurate bin masses.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DensityTable {
    pub centers: Vec<f64>,
    pub density: Vec<f64>,
    pub masses: Vec<f64>,
}

impl DensityTable {
    pub fn bin_masses(&self) -> &[f64] {
        &self.masses
    }

    /// Total-variation distance to a histogram of draws over the same bins.
    pub fn tv_distance_to_draws(&self, draws: &[f64]) -> f64 {
        let k = self.centers.len();
        let mut hist = vec![0.0f64; k];
        for &x in draws {
            let idx = ((x * k as f64) as usize).min(k - 1);
            hist[idx] += 1.0;
        }
        let n = draws.len() as f64;
        0.5 * hist
            .iter()
            .zip(&self.masses)
            .map(|(h, m)| (h / n - m).abs())
            .sum::<f64>()
    }
}

const MARGINAL_GUARD_N: u64 = 2_000;

/// Pointwise posterior marginal of θ0 or θ1 on a uniform grid, normalized
/// to unit mass; bin masses come from per-bin Gauss panels so sharply
/// peaked posteriors keep their mass even on coarse grids.
pub fn oracle_posterior_marginal(
    data: &TrialData,
    prior: &BreasePrior,
    target: MarginalTarget,
    grid: usize,
) -> Result<DensityTable> {
    data.validate()?;
    if data.total() > MARGINAL_GUARD_N {
        return Err(Error::domain(format!(
            "oracle marginals are guarded to N0+N1 <= {MARGINAL_GUARD_N}"
        )));
    }
    if grid < 10 {
        return Err(Error::domain("marginal grid needs at least 10 points"));
    }
    let ln_joint = |x: f64| -> Result<f64> {
        match target {
            MarginalTarget::Theta0 => ln_joint_theta0(data, prior, x),
            MarginalTarget::Theta1 => ln_joint_theta1(data, prior, x),
        }
    };
    let centers: Vec<f64> = (0..grid).map(|i| (i as f64 + 0.5) / grid as f64).collect();
    let mut ln_center = Vec::with_capacity(grid);
    for &x in &centers {
        ln_center.push(ln_joint(x)?);
    }
    let (gx, gw) = gauss_legendre(4);
    let width = 1.0 / grid as f64;
    let mut ln_mass = Vec::with_capacity(grid);
    for &c in &centers {
        let mut terms = Vec::with_capacity(4);
        for (xi, wi) in gx.iter().zip(&gw) {
            let x = c + 0.5 * width * xi;
            terms.push((wi * 0.5 * width).ln() + ln_joint(x)?);
        }
        ln_mass.push(log_sum_exp_unchecked(&terms));
    }
    let ln_z = log_sum_exp_unchecked(&ln_mass);
    Ok(DensityTable {
        centers,
        density: ln_center.iter().map(|v| (v - ln_z).exp()).collect(),
        masses: ln_mass.iter().map(|v| (v - ln_z).exp()).collect(),
    })
}

/// ln of the unnormalized θ0-posterior: prior density times the likelihood
/// integrated over (ηe, ηs).
fn ln_joint_theta0(data: &TrialData, prior: &BreasePrior, theta0: f64) -> Result<f64> {
    let (a0, b0) = prior.shapes0();
    let (ae, be) = prior.shapes_e();
    let (sa, sb) = prior.shapes_s();
    let ln_prior = (a0 - 1.0) * theta0.ln() + (b0 - 1.0) * (-theta0).ln_1p()
        - ln_beta_unchecked(a0, b0);
    let ee = beta_axis_rule(ae, be, 2);
    let es = beta_axis_rule(sa, sb, 2);
    let inner = tensor2(&ee, &es, |eta_e, eta_s| {
        let theta1 = (theta0 - eta_e * theta0) + eta_s * (1.0 - theta0);
        ln_lik_kernel(data, theta0, theta1)
    });
    Ok(ln_prior + inner)
}

/// ln of the unnormalized θ1-posterior: the likelihood at (θ0, θ1) times
/// the induced joint prior, integrated over θ0 with the conditional prior
/// expressed as a one-dimensional ηs integral.
fn ln_joint_theta1(data: &TrialData, prior: &BreasePrior, theta1: f64) -> Result<f64> {
    let (a0, b0) = prior.shapes0();
    let mut cuts = vec![0.0, 1.0, theta1, 1.0 - theta1];
    cuts.retain(|&c| (0.0..=1.0).contains(&c));
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    let mut pieces = Vec::new();
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi - lo < 1e-14 {
            continue;
        }
        let factors = [
            PowerFactor { root: 0.0, expo: a0 - 1.0, upper: false },
            PowerFactor { root: 1.0, expo: b0 - 1.0, upper: true },
        ];
        let v = ln_integrate_power_product(
            &factors,
            -ln_beta_unchecked(a0, b0),
            lo,
            hi,
            |theta0, _, _| {
                ln_lik_kernel(data, theta0, theta1)
                    + ln_conditional_kernel(prior, theta0, theta1)
            },
            1e-7,
        )?;
        pieces.push(v);
    }
    Ok(log_sum_exp_unchecked(&pieces))
}

/// ln π(θ1 | θ0) via the ηs mixing integral; independent of the density
/// module's implementation.
fn ln_conditional_kernel(prior: &BreasePrior, theta0: f64, theta1: f64) -> f64 {
    let (ae, be) = prior.shapes_e();
    let (sa, sb) = prior.shapes_s();
    let r0 = (theta1 - theta0) / (1.0 - theta0);
    let r1 = theta1 / (1.0 - theta0);
    let lo = r0.max(0.0);
    let hi = r1.min(1.0);
    if hi <= lo {
        return f64::NEG_INFINITY;
    }
    let c = (1.0 - theta0) / theta0;
    let ln_const = (ae - 1.0 + be - 1.0) * c.ln()
        - ln_beta_unchecked(ae, be)
        - ln_beta_unchecked(sa, sb)
        - theta0.ln();
    let factors = [
        PowerFactor { root: 0.0, expo: sa - 1.0, upper: false },
        PowerFactor { root: 1.0, expo: sb - 1.0, upper: true },
        PowerFactor { root: r0.min(lo), expo: ae - 1.0, upper: false },
        PowerFactor { root: r1.max(hi), expo: be - 1.0, upper: true },
    ];
    ln_integrate_power_product(&factors, ln_const, lo, hi, |_, _, _| 0.0, 1e-8)
        .unwrap_or(f64::NEG_INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evidence::{log_ml_m0, log_ml_m1};
    use crate::model::default_prior;
    use crate::samplers::exact_sample;
    use approx::assert_relative_eq;

    #[test]
    fn empty_data_oracle_is_zero() {
        let d = TrialData::new(0, 0, 0, 0).unwrap();
        let prior = default_prior(0.3).unwrap();
        let spec = QuadratureSpec::default();
        for model in [
            OracleModel::M0(prior),
            OracleModel::M1(prior),
            OracleModel::NoHarm(prior),
            OracleModel::NoBenefit(prior),
        ] {
            let v = oracle_log_ml(&d, &model, &spec).unwrap();
            assert!(v.abs() < 1e-6, "{model:?} gave {v}");
        }
    }

    #[test]
    fn m0_oracle_matches_hand_formula() {
        let d = TrialData::new(1, 2, 1, 2).unwrap();
        let prior = BreasePrior::new(0.5, 0.5, 0.5, 2.0, 1.0, 1.0).unwrap();
        let spec = QuadratureSpec::default();
        let got = oracle_log_ml(&d, &OracleModel::M0(prior), &spec).unwrap();
        // C(2,1)² ∫ θ²(1−θ)² dθ = 4·B(3,3)
        let want = (4.0 * ln_beta_unchecked(3.0, 3.0).exp()).ln();
        assert_relative_eq!(got, want, epsilon = 1e-6);
        // cost guard
        let big = TrialData::new(10, 60, 10, 60).unwrap();
        assert!(oracle_log_ml(&big, &OracleModel::M0(prior), &spec).is_err());
    }

    #[test]
    fn oracle_agrees_with_analytic_on_reference_instance() {
        let d = TrialData::new(2, 5, 3, 6).unwrap();
        let prior = default_prior(0.3).unwrap();
        let spec = QuadratureSpec::default();
        let m1_oracle = oracle_log_ml(&d, &OracleModel::M1(prior), &spec).unwrap();
        let m1 = log_ml_m1(&d, &prior).unwrap().log_ml;
        assert!((m1_oracle - m1).abs() < 1e-4, "oracle {m1_oracle} vs analytic {m1}");
        let m0_oracle = oracle_log_ml(&d, &OracleModel::M0(prior), &spec).unwrap();
        let m0 = log_ml_m0(&d, &prior).unwrap().log_ml;
        assert!((m0_oracle - m0).abs() < 1e-6);
        for (c, model) in [
            (crate::samplers::Constraint::NoHarm, OracleModel::NoHarm(prior)),
            (crate::samplers::Constraint::NoBenefit, OracleModel::NoBenefit(prior)),
        ] {
            let analytic = crate::evidence::log_ml_monotone(&d, &prior, c).unwrap().log_ml;
            let via_oracle = oracle_log_ml(&d, &model, &spec).unwrap();
            assert!(
                (analytic - via_oracle).abs() < 1e-5,
                "{c:?}: {analytic} vs {via_oracle}"
            );
        }
        let small = TrialData::new(1, 2, 1, 2).unwrap();
        let h0p = crate::model::AggregatedH0Prior::new(0.5, 0.5, 1.0, 1.0).unwrap();
        let analytic = crate::evidence::log_ml_h0_aggregated(&small, &h0p).unwrap().log_ml;
        let via_oracle =
            oracle_log_ml(&small, &OracleModel::H0Aggregated(h0p), &spec).unwrap();
        assert!((analytic - via_oracle).abs() < 1e-5);
    }

    #[test]
    fn doubling_panels_is_stable() {
        let d = TrialData::new(2, 5, 3, 6).unwrap();
        let prior = default_prior(0.3).unwrap();
        let coarse = QuadratureSpec { panels_per_axis: 32, tolerance: 1e-5, max_refinements: 4 };
        let fine = QuadratureSpec { panels_per_axis: 64, tolerance: 1e-5, max_refinements: 4 };
        let a = oracle_log_ml(&d, &OracleModel::M1(prior), &coarse).unwrap();
        let b = oracle_log_ml(&d, &OracleModel::M1(prior), &fine).unwrap();
        assert!((a - b).abs() < 1e-5, "{a} vs {b}");
    }

    #[test]
    fn empty_data_marginal_is_prior_density() {
        let d = TrialData::new(0, 0, 0, 0).unwrap();
        let prior = BreasePrior::new(0.4, 0.3, 0.3, 5.0, 1.0, 1.0).unwrap();
        let (a0, b0) = prior.shapes0();
        let table = oracle_posterior_marginal(&d, &prior, MarginalTarget::Theta0, 200).unwrap();
        for (&x, &f) in table.centers.iter().zip(&table.density) {
            let want = ((a0 - 1.0) * x.ln() + (b0 - 1.0) * (-x).ln_1p()
                - ln_beta_unchecked(a0, b0))
            .exp();
            assert!((f - want).abs() < 1e-6 * want.max(1.0), "x={x}: {f} vs {want}");
        }
    }

    #[test]
    fn pathological_marginals_match_exact_sampler() {
        let d = TrialData::new(20, 1000, 40, 1000).unwrap();
        let prior = BreasePrior::new(0.5, 0.5, 0.01, 2.0, 2.0, 1.0).unwrap();
        let set = exact_sample(&d, &prior, 100_000, 33).unwrap();
        let t0 = oracle_posterior_marginal(&d, &prior, MarginalTarget::Theta0, 100).unwrap();
        let draws0: Vec<f64> = set.theta0().collect();
        let tv0 = t0.tv_distance_to_draws(&draws0);
        assert!(tv0 <= 0.02, "theta0 TV = {tv0}");
        let t1 = oracle_posterior_marginal(&d, &prior, MarginalTarget::Theta1, 100).unwrap();
        let draws1: Vec<f64> = set.theta1().collect();
        let tv1 = t1.tv_distance_to_draws(&draws1);
        assert!(tv1 <= 0.02, "theta1 TV = {tv1}");
    }
}
