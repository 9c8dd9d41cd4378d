//! Induced prior densities of the treatment risk θ1: the conditional
//! density given θ0 and the marginal, with closed-form fast paths and
//! general quadrature routes kept separately testable.

use super::BreasePrior;
use crate::error::{Error, Result};
use crate::numerics::quad::{ln_integrate_power_product, PowerFactor};
use crate::numerics::special::ln_beta_unchecked;

const COND_TOL: f64 = 1e-9;
const MARG_TOL: f64 = 1e-7;

fn check_theta0(theta0: f64) -> Result<()> {
    if !(theta0 > 0.0 && theta0 < 1.0) {
        return Err(Error::domain(format!(
            "conditional density needs theta0 strictly inside (0,1), got {theta0}"
        )));
    }
    Ok(())
}

fn check_theta1(theta1: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&theta1) {
        return Err(Error::domain(format!("theta1 must lie in [0,1], got {theta1}")));
    }
    Ok(())
}

fn is_uniform(shape: (f64, f64)) -> bool {
    (shape.0 - 1.0).abs() < 1e-12 && (shape.1 - 1.0).abs() < 1e-12
}

/// π(θ1 | θ0) under the prior.
///
/// Uses the piecewise closed form when both ηe and ηs are uniform, and
/// adaptive quadrature of the mixing integral otherwise.
pub fn conditional_density_theta1(prior: &BreasePrior, theta0: f64, theta1: f64) -> Result<f64> {
    check_theta0(theta0)?;
    check_theta1(theta1)?;
    if is_uniform(prior.shapes_e()) && is_uniform(prior.shapes_s()) {
        return Ok(conditional_density_uniform_uniform(theta0, theta1));
    }
    conditional_density_theta1_numeric(prior, theta0, theta1)
}

/// Piecewise-linear conditional density when ηe, ηs ~ Uniform(0,1).
pub fn conditional_density_uniform_uniform(theta0: f64, theta1: f64) -> f64 {
    let lo = theta0.min(1.0 - theta0);
    let hi = theta0.max(1.0 - theta0);
    if theta1 < lo {
        theta1 / (theta0 * (1.0 - theta0))
    } else if theta1 < hi {
        1.0 / hi
    } else {
        (1.0 - theta1) / (theta0 * (1.0 - theta0))
    }
}

/// General quadrature route for π(θ1 | θ0): the mixing integral over ηs on
/// its admissible interval, with the beta-factor endpoint exponents
/// absorbed exactly.
///
/// Returns +∞ at points where the density genuinely diverges (possible on
/// the diagonal when the ηe and ηs shapes sum below one).
pub fn conditional_density_theta1_numeric(
    prior: &BreasePrior,
    theta0: f64,
    theta1: f64,
) -> Result<f64> {
    check_theta0(theta0)?;
    check_theta1(theta1)?;
    let (ae, be) = prior.shapes_e();
    let (sa, sb) = prior.shapes_s();
    // eta_e = c (eta_s − r0), 1 − eta_e = c (r1 − eta_s), c = (1−θ0)/θ0
    let r0 = (theta1 - theta0) / (1.0 - theta0);
    let r1 = theta1 / (1.0 - theta0);
    let lo = r0.max(0.0);
    let hi = r1.min(1.0);
    if hi <= lo {
        return Ok(0.0);
    }
    let c = (1.0 - theta0) / theta0;
    let ln_const = (ae - 1.0) * c.ln() + (be - 1.0) * c.ln()
        - ln_beta_unchecked(ae, be)
        - ln_beta_unchecked(sa, sb)
        - theta0.ln();
    let factors = [
        PowerFactor { root: 0.0, expo: sa - 1.0, upper: false },
        PowerFactor { root: 1.0, expo: sb - 1.0, upper: true },
        PowerFactor { root: r0.min(lo), expo: ae - 1.0, upper: false },
        PowerFactor { root: r1.max(hi), expo: be - 1.0, upper: true },
    ];
    match ln_integrate_power_product(&factors, ln_const, lo, hi, |_, _, _| 0.0, COND_TOL) {
        Ok(v) => Ok(v.exp()),
        Err(Error::Numeric(msg)) if msg.contains("non-integrable") => Ok(f64::INFINITY),
        Err(e) => Err(e),
    }
}

/// Marginal prior density π(θ1).
///
/// Equal-confidence priors use the aggregated beta closed form; everything
/// else integrates the conditional against the θ0 prior.
pub fn marginal_density_theta1(prior: &BreasePrior, theta1: f64) -> Result<f64> {
    check_theta1(theta1)?;
    if prior.is_equal_confidence() {
        let mu1 = (1.0 - prior.mue) * prior.mu0 + prior.mus * (1.0 - prior.mu0);
        return Ok(super::ln_beta_star_pdf(theta1, mu1, prior.n0).exp());
    }
    marginal_density_theta1_numeric(prior, theta1)
}

/// General quadrature route for π(θ1) = ∫ π(θ1|θ0) π(θ0) dθ0.
pub fn marginal_density_theta1_numeric(prior: &BreasePrior, theta1: f64) -> Result<f64> {
    check_theta1(theta1)?;
    if theta1 == 0.0 || theta1 == 1.0 {
        return Err(Error::domain(
            "marginal density is evaluated on the open interval (0,1)",
        ));
    }
    let (a0, b0) = prior.shapes0();
    let (ae, be) = prior.shapes_e();
    let (sa, sb) = prior.shapes_s();
    // Segment boundaries where the conditional changes regime.
    let mut cuts = vec![0.0, 1.0];
    for s in [theta1, 1.0 - theta1] {
        if s > 0.0 && s < 1.0 {
            cuts.push(s);
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    // Local exponent of the conditional in |θ0 − θ1| (resp. |θ0 − (1−θ1)|)
    // where the admissible-interval endpoints collide; only divergent
    // behavior is registered for absorption.
    let diag_expo = (sa + ae - 1.0).min(0.0);
    let anti_expo = (sb + be - 1.0).min(0.0);
    let mut segments_ln = Vec::new();
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let mut factors = vec![
            PowerFactor { root: 0.0, expo: a0 - 1.0, upper: false },
            PowerFactor { root: 1.0, expo: b0 - 1.0, upper: true },
        ];
        let diag_factor = |root: f64, expo: f64, factors: &mut Vec<PowerFactor>| {
            if expo < 0.0 && (root == lo || root == hi) {
                factors.push(PowerFactor { root, expo, upper: root == hi });
            }
        };
        if theta1 > 0.0 && theta1 < 1.0 {
            diag_factor(theta1, diag_expo, &mut factors);
        }
        {
            let anti = 1.0 - theta1;
            if anti > 0.0 && anti < 1.0 {
                diag_factor(anti, anti_expo, &mut factors);
            }
        }
        let ln_b0 = ln_beta_unchecked(a0, b0);
        let fac = factors.clone();
        let ln_seg = ln_integrate_power_product(
            &factors,
            -ln_b0,
            lo,
            hi,
            |theta0, _, _| {
                let mut lnv = match conditional_density_theta1_numeric(prior, theta0, theta1) {
                    Ok(v) => v.ln(),
                    Err(_) => f64::NEG_INFINITY,
                };
                // peel off whatever power factors the outer rule already carries
                for f in &fac {
                    if f.root != 0.0 && f.root != 1.0 {
                        let d = if f.upper { f.root - theta0 } else { theta0 - f.root };
                        lnv -= f.expo * d.ln();
                    }
                }
                lnv
            },
            MARG_TOL,
        )?;
        segments_ln.push(ln_seg);
    }
    Ok(crate::numerics::special::log_sum_exp_unchecked(&segments_ln).exp())
}

/// Marginal prior density of θ1 = (1−ηe)·θ0 under the no-harm constraint.
///
/// When ne = μ0·n0 the product of betas collapses to a beta and the closed
/// form is used.
pub fn marginal_density_theta1_no_harm(prior: &BreasePrior, theta1: f64) -> Result<f64> {
    check_theta1(theta1)?;
    let (a0, _) = prior.shapes0();
    let (ae, _) = prior.shapes_e();
    if (prior.ne - a0).abs() < 1e-12 * prior.n0.max(1.0) {
        let shape_a = (1.0 - prior.mue) * prior.ne;
        let shape_b = prior.mue * prior.ne + (1.0 - prior.mu0) * prior.n0;
        let _ = ae;
        return Ok(ln_beta_pdf(theta1, shape_a, shape_b));
    }
    marginal_density_theta1_no_harm_numeric(prior, theta1)
}

fn ln_beta_pdf(x: f64, a: f64, b: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    ((a - 1.0) * x.ln() + (b - 1.0) * (-x).ln_1p() - ln_beta_unchecked(a, b)).exp()
}

/// Quadrature route for the no-harm marginal:
/// π(θ1) = ∫_{θ1}^1 π0(θ0) πe(1 − θ1/θ0) θ0⁻¹ dθ0.
pub fn marginal_density_theta1_no_harm_numeric(prior: &BreasePrior, theta1: f64) -> Result<f64> {
    check_theta1(theta1)?;
    if theta1 == 0.0 || theta1 == 1.0 {
        return Err(Error::domain(
            "marginal density is evaluated on the open interval (0,1)",
        ));
    }
    let (a0, b0) = prior.shapes0();
    let (ae, be) = prior.shapes_e();
    let ln_const =
        (be - 1.0) * theta1.ln() - ln_beta_unchecked(a0, b0) - ln_beta_unchecked(ae, be);
    let factors = [
        PowerFactor { root: theta1, expo: ae - 1.0, upper: false },
        PowerFactor { root: 1.0, expo: b0 - 1.0, upper: true },
        PowerFactor { root: 0.0, expo: a0 - ae - be, upper: false },
    ];
    Ok(ln_integrate_power_product(&factors, ln_const, theta1, 1.0, |_, _, _| 0.0, MARG_TOL)?
        .exp())
}

/// Quadrature route for the no-benefit marginal:
/// π(θ1) = ∫_0^{θ1} π0(θ0) πs((θ1−θ0)/(1−θ0)) (1−θ0)⁻¹ dθ0.
pub fn marginal_density_theta1_no_benefit_numeric(
    prior: &BreasePrior,
    theta1: f64,
) -> Result<f64> {
    check_theta1(theta1)?;
    if theta1 == 0.0 || theta1 == 1.0 {
        return Err(Error::domain(
            "marginal density is evaluated on the open interval (0,1)",
        ));
    }
    let (a0, b0) = prior.shapes0();
    let (sa, sb) = prior.shapes_s();
    let ln_const =
        (sb - 1.0) * (-theta1).ln_1p() - ln_beta_unchecked(a0, b0) - ln_beta_unchecked(sa, sb);
    let factors = [
        PowerFactor { root: 0.0, expo: a0 - 1.0, upper: false },
        PowerFactor { root: theta1, expo: sa - 1.0, upper: true },
        PowerFactor { root: 1.0, expo: b0 - sa - sb, upper: true },
    ];
    Ok(ln_integrate_power_product(&factors, ln_const, 0.0, theta1, |_, _, _| 0.0, MARG_TOL)?
        .exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::default_prior;
    use crate::numerics::quad::integrate_adaptive;
    use crate::numerics::RngStream;
    use approx::assert_relative_eq;

    fn uniform_uniform_prior() -> BreasePrior {
        BreasePrior::new(0.5, 0.5, 0.5, 2.0, 2.0, 2.0).unwrap()
    }

    #[test]
    fn closed_form_examples() {
        let p = uniform_uniform_prior();
        let d = conditional_density_theta1(&p, 0.25, 0.1).unwrap();
        assert_relative_eq!(d, 0.1 / (0.25 * 0.75), max_relative = 1e-12);
        let d = conditional_density_theta1(&p, 0.25, 0.5).unwrap();
        assert_relative_eq!(d, 1.0 / 0.75, max_relative = 1e-12);
        let d = conditional_density_theta1(&p, 0.8, 0.5).unwrap();
        assert_relative_eq!(d, 1.0 / 0.8, max_relative = 1e-12);
    }

    #[test]
    fn numeric_matches_closed_form() {
        let p = uniform_uniform_prior();
        let mut rng = RngStream::new(31);
        for _ in 0..60 {
            let t0 = 0.02 + 0.96 * rng.uniform();
            let t1 = 0.02 + 0.96 * rng.uniform();
            let want = conditional_density_uniform_uniform(t0, t1);
            let got = conditional_density_theta1_numeric(&p, t0, t1).unwrap();
            assert!(
                (got - want).abs() <= 1e-6,
                "({t0},{t1}): numeric {got} vs closed {want}"
            );
        }
    }

    #[test]
    fn conditional_integrates_to_one() {
        let mut rng = RngStream::new(77);
        for _ in 0..12 {
            let prior = BreasePrior::new(
                0.1 + 0.8 * rng.uniform(),
                0.1 + 0.8 * rng.uniform(),
                0.1 + 0.8 * rng.uniform(),
                0.4 + 6.0 * rng.uniform(),
                0.4 + 6.0 * rng.uniform(),
                0.4 + 6.0 * rng.uniform(),
            )
            .unwrap();
            let t0 = 0.05 + 0.9 * rng.uniform();
            let mut f =
                |t1: f64| conditional_density_theta1_numeric(&prior, t0, t1).unwrap_or(0.0);
            // split at the regime boundaries to keep panels on smooth pieces
            let mut cuts = vec![0.0, t0.min(1.0 - t0), t0.max(1.0 - t0), 1.0];
            cuts.dedup();
            let mut total = 0.0;
            for w in cuts.windows(2) {
                total += integrate_adaptive(&mut f, w[0] + 1e-9, w[1] - 1e-9, 1e-7, 24).unwrap();
            }
            assert!(
                (total - 1.0).abs() < 1e-5,
                "prior {prior:?}, theta0 {t0}: mass {total}"
            );
        }
    }

    #[test]
    fn marginal_uniform_uniform_is_twice_bernoulli_entropy() {
        let p = uniform_uniform_prior();
        for t1 in [0.05f64, 0.2, 0.5, 0.77, 0.95] {
            let want = 2.0 * (-t1 * t1.ln() - (1.0 - t1) * (1.0 - t1).ln());
            let got = marginal_density_theta1_numeric(&p, t1).unwrap();
            assert!((got - want).abs() < 1e-4, "t1={t1}: {got} vs {want}");
        }
        assert_relative_eq!(
            marginal_density_theta1_numeric(&p, 0.5).unwrap(),
            2.0 * 2.0f64.ln(),
            epsilon = 1e-4
        );
    }

    #[test]
    fn no_harm_uniform_marginal_is_neg_log() {
        // theta0 and eta_e uniform, no-harm: pi(theta1) = −ln(theta1)
        let p = BreasePrior::new(0.5, 0.5, 0.5, 2.0, 2.0, 1.0).unwrap();
        for t1 in [0.05, 0.1, 0.37, 0.8, 0.99] {
            let got = marginal_density_theta1_no_harm_numeric(&p, t1).unwrap();
            assert!((got - (-t1.ln())).abs() < 1e-4, "t1={t1}: {got}");
        }
    }

    #[test]
    fn no_harm_closed_form_when_ne_matches() {
        // ne = mu0 n0 collapses the product of betas to a beta
        let p = BreasePrior::new(0.4, 0.3, 0.2, 5.0, 2.0, 1.0).unwrap();
        assert!((p.ne - p.mu0 * p.n0).abs() < 1e-12);
        let a = (1.0 - p.mue) * p.ne;
        let b = p.mue * p.ne + (1.0 - p.mu0) * p.n0;
        for t1 in [0.1, 0.33, 0.6, 0.9] {
            let via_closed = marginal_density_theta1_no_harm(&p, t1).unwrap();
            let via_numeric = marginal_density_theta1_no_harm_numeric(&p, t1).unwrap();
            assert_relative_eq!(via_closed, ln_beta_pdf(t1, a, b), max_relative = 1e-12);
            assert!(
                (via_numeric - via_closed).abs() < 1e-5,
                "t1={t1}: numeric {via_numeric} vs beta {via_closed}"
            );
        }
    }

    #[test]
    fn no_benefit_uniform_conditional_mass() {
        // eta_s uniform: theta1 | theta0 ~ Uniform(theta0, 1), so the
        // no-benefit marginal of theta1 integrates the prior tail
        let p = BreasePrior::new(0.5, 0.5, 0.5, 2.0, 1.0, 2.0).unwrap();
        // pi(theta1) = ∫_0^{theta1} 1/(1−theta0) dtheta0 = −ln(1−theta1)
        for t1 in [0.1, 0.5, 0.9] {
            let got = marginal_density_theta1_no_benefit_numeric(&p, t1).unwrap();
            assert!((got - (-(1.0 - t1).ln())).abs() < 1e-4, "t1={t1}: {got}");
        }
    }

    #[test]
    fn equal_confidence_marginal_matches_aggregated_beta() {
        // Dirichlet special case: theta1 ~ Beta*((1−mue)mu0 + mus(1−mu0), n0)
        let p = BreasePrior::new(0.5, 0.3, 0.2, 4.0, 2.0, 2.0).unwrap();
        assert!(p.is_equal_confidence());
        let mu1 = (1.0 - p.mue) * p.mu0 + p.mus * (1.0 - p.mu0);
        for t1 in [0.1, 0.3, 0.55, 0.85] {
            let want = super::super::ln_beta_star_pdf(t1, mu1, p.n0).exp();
            let got = marginal_density_theta1_numeric(&p, t1).unwrap();
            assert!((got - want).abs() < 1e-4, "t1={t1}: {got} vs {want}");
            assert_relative_eq!(
                marginal_density_theta1(&p, t1).unwrap(),
                want,
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn default_prior_marginal_is_uniform() {
        // the default family has uniform marginals on theta1
        let p = default_prior(0.3).unwrap();
        for t1 in [0.12, 0.5, 0.81] {
            let got = marginal_density_theta1_numeric(&p, t1).unwrap();
            assert!((got - 1.0).abs() < 1e-4, "t1={t1}: {got}");
        }
    }

    #[test]
    fn domain_errors() {
        let p = default_prior(0.3).unwrap();
        assert!(conditional_density_theta1(&p, 0.0, 0.5).is_err());
        assert!(conditional_density_theta1(&p, 0.5, 1.5).is_err());
        assert!(marginal_density_theta1_numeric(&p, 0.0).is_err());
    }
}
