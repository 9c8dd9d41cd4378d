//! Random-variate generation for beta, binomial, Dirichlet and gamma laws.
//!
//! Beta and Dirichlet draws are built from log-scale gamma variates so that
//! shapes far below one (the quasi-monotone priors use shapes like 0.01)
//! do not underflow to exact zeros the way naive gamma ratios do.

use super::rng::RngStream;
use crate::error::{Error, Result};
use rand_distr::{Binomial, Distribution};

/// ln of a Gamma(shape, 1) draw.
///
/// Marsaglia-Tsang for shape ≥ 1; for shape < 1 the boost
/// ln X = ln X' + ln(U)/shape with X' ~ Gamma(shape+1) keeps everything on
/// the log scale.
pub fn ln_gamma_draw(shape: f64, rng: &mut RngStream) -> f64 {
    debug_assert!(shape > 0.0);
    if shape < 1.0 {
        let boost = rng.uniform_open().ln() / shape;
        return ln_gamma_draw(shape + 1.0, rng) + boost;
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let x = rng.standard_normal();
        let t = 1.0 + c * x;
        if t <= 0.0 {
            continue;
        }
        let v = t * t * t;
        let u = rng.uniform_open();
        if u.ln() < 0.5 * x * x + d - d * v + d * v.ln() {
            return (d * v).ln();
        }
    }
}

/// Gamma(shape, rate) draw.
pub fn sample_gamma(shape: f64, rate: f64, rng: &mut RngStream) -> Result<f64> {
    if !(shape > 0.0) || !(rate > 0.0) {
        return Err(Error::domain(format!(
            "sample_gamma requires positive shape and rate, got ({shape}, {rate})"
        )));
    }
    Ok(ln_gamma_draw(shape, rng).exp() / rate)
}

/// Beta(a, b) draw, strictly inside (0, 1).
pub fn sample_beta(a: f64, b: f64, rng: &mut RngStream) -> Result<f64> {
    if !(a > 0.0) || !(b > 0.0) {
        return Err(Error::domain(format!(
            "sample_beta requires positive shapes, got ({a}, {b})"
        )));
    }
    let lx = ln_gamma_draw(a, rng);
    let ly = ln_gamma_draw(b, rng);
    Ok(sigmoid_interior(lx - ly))
}

/// 1/(1+e^{-t}), nudged into the open interval (0, 1).
#[inline]
fn sigmoid_interior(t: f64) -> f64 {
    let v = if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    };
    if v <= 0.0 {
        f64::MIN_POSITIVE
    } else if v >= 1.0 {
        1.0 - f64::EPSILON / 2.0
    } else {
        v
    }
}

/// Binomial(n, p) draw; p ∈ {0, 1} is deterministic.
pub fn sample_binomial(n: u64, p: f64, rng: &mut RngStream) -> Result<u64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!(
            "sample_binomial requires p in [0,1], got {p}"
        )));
    }
    if p == 0.0 || n == 0 {
        return Ok(0);
    }
    if p == 1.0 {
        return Ok(n);
    }
    let dist = Binomial::new(n, p)
        .map_err(|e| Error::domain(format!("sample_binomial({n}, {p}): {e}")))?;
    Ok(dist.sample(rng.inner()))
}

/// Dirichlet(α) draw on the probability simplex.
pub fn sample_dirichlet(alphas: &[f64], rng: &mut RngStream) -> Result<Vec<f64>> {
    if alphas.len() < 2 {
        return Err(Error::domain(
            "sample_dirichlet requires at least two components",
        ));
    }
    if alphas.iter().any(|&a| !(a > 0.0)) {
        return Err(Error::domain(
            "sample_dirichlet requires strictly positive concentrations",
        ));
    }
    let ln_g: Vec<f64> = alphas.iter().map(|&a| ln_gamma_draw(a, rng)).collect();
    let m = ln_g.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut p: Vec<f64> = ln_g.iter().map(|&lg| (lg - m).exp()).collect();
    let s: f64 = p.iter().sum();
    for v in &mut p {
        *v /= s;
    }
    Ok(p)
}
