//! Quadrature kernels: Gauss-Legendre panels, recursive-bisection adaptive
//! integration, tanh-sinh rules for integrands with endpoint power
//! singularities, and Gauss-Hermite rules for mode-centered evidence
//! integrals.

use crate::error::{Error, Result};
use crate::numerics::special::log_sum_exp_unchecked;

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev initial guess
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        loop {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j as f64 + 1.0) * z * p2 - j as f64 * p3) / (j as f64 + 1.0);
            }
            let pp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() < 1e-15 {
                let pp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
                x[i] = -z;
                x[n - 1 - i] = z;
                w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
                w[n - 1 - i] = w[i];
                break;
            }
        }
    }
    (x, w)
}

/// Gauss-Hermite nodes and weights for ∫ e^{-x²} f(x) dx, by Newton
/// iteration on the orthonormal recurrence.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    #[allow(clippy::excessive_precision)]
    const PI_POW: f64 = 0.751_125_544_464_942_9; // pi^{-1/4}
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    let mut z = 0.0;
    for i in 0..m {
        // initial guesses (Numerical Recipes)
        z = match i {
            0 => (2.0 * n as f64 + 1.0).sqrt() - 1.85575 * (2.0 * n as f64 + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * (n as f64).powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        for _ in 0..200 {
            let mut p1 = PI_POW;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = z * (2.0 / (j as f64 + 1.0)).sqrt() * p2
                    - (j as f64 / (j as f64 + 1.0)).sqrt() * p3;
            }
            let pp = (2.0 * n as f64).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() < 1e-14 {
                x[i] = z;
                x[n - 1 - i] = -z;
                w[i] = 2.0 / (pp * pp);
                w[n - 1 - i] = w[i];
                break;
            }
        }
    }
    (x, w)
}

fn gl16() -> &'static (Vec<f64>, Vec<f64>) {
    use std::sync::OnceLock;
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(16))
}

/// 16-point Gauss-Legendre estimate on [a, b].
pub fn gl16_panel(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> f64 {
    let (x, w) = gl16();
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut s = 0.0;
    for i in 0..16 {
        s += w[i] * f(c + h * x[i]);
    }
    s * h
}

/// Adaptive quadrature by recursive bisection of 16-point panels.
///
/// A few levels of subdivision are always forced so narrow features
/// cannot slip between the nodes of the first panel. Absolute tolerance;
/// errors out if the tolerance cannot be met within `max_depth` levels.
pub fn integrate_adaptive(
    f: &mut impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: u32,
) -> Result<f64> {
    const FORCED_LEVELS: u32 = 4;
    #[allow(clippy::too_many_arguments)]
    fn rec(
        f: &mut impl FnMut(f64) -> f64,
        a: f64,
        b: f64,
        whole: f64,
        tol: f64,
        depth: u32,
        forced: u32,
        worst: &mut f64,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let left = gl16_panel(f, a, m);
        let right = gl16_panel(f, m, b);
        let err = (left + right - whole).abs();
        if (err <= tol && forced == 0) || depth == 0 {
            if depth == 0 {
                *worst = worst.max(err);
            }
            return left + right;
        }
        let forced = forced.saturating_sub(1);
        rec(f, a, m, left, tol * 0.5, depth - 1, forced, worst)
            + rec(f, m, b, right, tol * 0.5, depth - 1, forced, worst)
    }
    let whole = gl16_panel(f, a, b);
    let mut worst = 0.0;
    let v = rec(f, a, b, whole, tol, max_depth, FORCED_LEVELS, &mut worst);
    if worst > tol.max(1e-14 * v.abs()) {
        return Err(Error::numeric(format!(
            "adaptive quadrature on [{a}, {b}] did not converge: residual panel error {worst:.3e} > {tol:.3e}"
        )));
    }
    Ok(v)
}

/// One affine power weight |x − root|^{expo} of a product integrand.
///
/// `upper` distinguishes factors whose root sits at or above the interval
/// (distance root − x) from those at or below it (distance x − root), so
/// distances are always sums of nonnegative terms.
#[derive(Clone, Copy, Debug)]
pub struct PowerFactor {
    pub root: f64,
    pub expo: f64,
    pub upper: bool,
}

#[inline]
fn ln_cosh(s: f64) -> f64 {
    s.abs() + (-2.0 * s.abs()).exp().ln_1p() - std::f64::consts::LN_2
}

/// Tanh-sinh node: log fractional distances to the two endpoints plus the
/// log of the transformed weight, all stable at double-exponential depth.
///
/// Fractions are d_lo/len = 1/(1+e^{−2s}) and d_hi/len = 1/(1+e^{2s});
/// returning them in log form keeps deep nodes from flushing to zero.
#[inline]
fn ts_node(u: f64) -> (f64, f64, f64) {
    let s = std::f64::consts::FRAC_PI_2 * u.sinh();
    let ln_f_lo = if s >= 0.0 {
        -(-2.0 * s).exp().ln_1p()
    } else {
        2.0 * s - (2.0 * s).exp().ln_1p()
    };
    let ln_f_hi = if s <= 0.0 {
        -(2.0 * s).exp().ln_1p()
    } else {
        -2.0 * s - (-2.0 * s).exp().ln_1p()
    };
    let ln_w = (std::f64::consts::FRAC_PI_2).ln() + ln_cosh(u) - 2.0 * ln_cosh(s);
    (ln_f_lo, ln_f_hi, ln_w)
}

/// ln ∫_lo^hi Π |x−rootᵢ|^{expoᵢ} · exp(ln_g(x, d_lo, d_hi)) dx
/// by tanh-sinh quadrature with successive step halving.
///
/// The double-exponential transform resolves integrable endpoint power
/// singularities (any exponent > −1) and near-singular roots just outside
/// the interval; `ln_g` receives each node with its exact distances to the
/// endpoints so log factors can be formed without cancellation.
pub fn ln_integrate_power_product(
    factors: &[PowerFactor],
    ln_const: f64,
    lo: f64,
    hi: f64,
    mut ln_g: impl FnMut(f64, f64, f64) -> f64,
    tol: f64,
) -> Result<f64> {
    if !(hi > lo) {
        return Ok(f64::NEG_INFINITY);
    }
    // net power of the weight approaching each endpoint, for integrability
    // and tail-truncation control
    let p: f64 = 1.0
        + factors
            .iter()
            .filter(|f| !f.upper && f.root >= lo)
            .map(|f| f.expo)
            .sum::<f64>();
    let q: f64 = 1.0
        + factors
            .iter()
            .filter(|f| f.upper && f.root <= hi)
            .map(|f| f.expo)
            .sum::<f64>();
    if p <= 0.0 || q <= 0.0 {
        return Err(Error::numeric(format!(
            "non-integrable endpoint exponent (p={p}, q={q}) on [{lo}, {hi}]"
        )));
    }
    // truncate u where the doubly-exponential tail drops below tolerance;
    // negative-exponent factors slow the tail decay even when their root
    // sits strictly outside the interval, so count them all here
    let tail_p: f64 = 1.0
        + factors
            .iter()
            .filter(|f| !f.upper && f.expo < 0.0)
            .map(|f| f.expo)
            .sum::<f64>();
    let tail_q: f64 = 1.0
        + factors
            .iter()
            .filter(|f| f.upper && f.expo < 0.0)
            .map(|f| f.expo)
            .sum::<f64>();
    let decay = tail_p.min(tail_q).clamp(0.01, 1.0);
    let s_max = ((-tol.min(1e-3).ln()) + 12.0) / (2.0 * decay);
    let u_max = (2.0 * s_max / std::f64::consts::PI).asinh();
    let len = hi - lo;
    let ln_len = len.ln();
    let mut eval = |delta: f64| -> f64 {
        let half_count = (u_max / delta).ceil() as i64;
        let mut terms = Vec::with_capacity((2 * half_count + 1) as usize);
        for j in -half_count..=half_count {
            let u = j as f64 * delta;
            let (ln_f_lo, ln_f_hi, ln_w) = ts_node(u);
            let d_lo = len * ln_f_lo.exp();
            let d_hi = len * ln_f_hi.exp();
            let x = if ln_f_lo <= ln_f_hi { lo + d_lo } else { hi - d_hi };
            let mut t = delta.ln() + ln_w + ln_len - std::f64::consts::LN_2 + ln_const;
            for fac in factors {
                // roots sitting exactly on an endpoint take the log-form
                // distance, which never flushes to zero
                let ln_dist = if fac.upper {
                    if fac.root == hi {
                        ln_len + ln_f_hi
                    } else {
                        ((fac.root - hi) + d_hi).ln()
                    }
                } else if fac.root == lo {
                    ln_len + ln_f_lo
                } else {
                    ((lo - fac.root) + d_lo).ln()
                };
                t += fac.expo * ln_dist;
            }
            t += ln_g(x, d_lo, d_hi);
            if t != f64::NEG_INFINITY && !t.is_nan() {
                terms.push(t);
            }
        }
        log_sum_exp_unchecked(&terms)
    };
    let mut delta = 0.5;
    let mut prev = eval(delta);
    for _ in 0..8 {
        delta *= 0.5;
        let cur = eval(delta);
        let err = if cur == f64::NEG_INFINITY && prev == f64::NEG_INFINITY {
            0.0
        } else {
            ((prev - cur).exp() - 1.0).abs()
        };
        if err <= tol {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::numeric(format!(
        "tanh-sinh quadrature on [{lo}, {hi}] did not converge to {tol:.1e}"
    )))
}

/// A one-axis quadrature rule: nodes plus log-weights.
///
/// Rules satisfy ∫ f dμ ≈ Σ exp(ln_w[i]) · f(x[i]) for the measure μ they
/// encode; log weights keep likelihood factors spanning hundreds of orders
/// of magnitude finite.
#[derive(Clone, Debug)]
pub struct AxisRule {
    pub nodes: Vec<f64>,
    pub ln_weights: Vec<f64>,
}

impl AxisRule {
    /// ln ∫ exp(ln_f(x)) dμ(x).
    pub fn ln_integrate(&self, mut ln_f: impl FnMut(f64) -> f64) -> f64 {
        let terms: Vec<f64> = self
            .nodes
            .iter()
            .zip(&self.ln_weights)
            .map(|(&x, &lw)| lw + ln_f(x))
            .collect();
        log_sum_exp_unchecked(&terms)
    }
}

/// Composite Gauss-Legendre rule with `panels` equal panels on [lo, hi].
pub fn plain_axis_rule(lo: f64, hi: f64, panels: usize) -> AxisRule {
    let (x, w) = gl16();
    let mut nodes = Vec::with_capacity(16 * panels);
    let mut ln_weights = Vec::with_capacity(16 * panels);
    let step = (hi - lo) / panels as f64;
    for p in 0..panels {
        let a = lo + p as f64 * step;
        let c = a + 0.5 * step;
        let h = 0.5 * step;
        for i in 0..16 {
            nodes.push(c + h * x[i]);
            ln_weights.push((w[i] * h).ln());
        }
    }
    AxisRule { nodes, ln_weights }
}

/// Tanh-sinh rule for the normalized Beta(a, b) density on [0, 1]:
/// ∫ f(x) Beta(x; a, b) dx ≈ Σ exp(ln_w) f(x).
///
/// `level` halves the step per increment; level 3 ≈ 150 nodes.
pub fn beta_axis_rule(a: f64, b: f64, level: u32) -> AxisRule {
    let ln_norm = crate::numerics::special::ln_beta_unchecked(a, b);
    let decay = a.min(b).min(1.0);
    let s_max = (35.0 + 12.0) / (2.0 * decay);
    let u_max = (2.0 * s_max / std::f64::consts::PI).asinh();
    let delta = 0.5 / (1 << level) as f64;
    let half_count = (u_max / delta).ceil() as i64;
    let mut nodes = Vec::with_capacity((2 * half_count + 1) as usize);
    let mut ln_weights = Vec::with_capacity((2 * half_count + 1) as usize);
    for j in -half_count..=half_count {
        let u = j as f64 * delta;
        let (ln_f_lo, ln_f_hi, ln_w) = ts_node(u);
        let x = if ln_f_lo <= ln_f_hi {
            ln_f_lo.exp()
        } else {
            1.0 - ln_f_hi.exp()
        };
        let lw = delta.ln() + ln_w - std::f64::consts::LN_2 + (a - 1.0) * ln_f_lo
            + (b - 1.0) * ln_f_hi
            - ln_norm;
        nodes.push(x);
        ln_weights.push(lw);
    }
    AxisRule { nodes, ln_weights }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::special::ln_beta_unchecked;
    use approx::assert_relative_eq;

    #[test]
    fn gl_integrates_polynomials_exactly() {
        // GL16 is exact for degree ≤ 31
        let mut f = |x: f64| x.powi(20) - 3.0 * x.powi(7) + 2.0;
        let got = gl16_panel(&mut f, 0.0, 1.0);
        let want = 1.0 / 21.0 - 3.0 / 8.0 + 2.0;
        assert_relative_eq!(got, want, max_relative = 1e-14);
    }

    #[test]
    fn adaptive_handles_peaked_integrand() {
        let mut f = |x: f64| (-(x - 0.3).powi(2) / 2e-6).exp();
        let got = integrate_adaptive(&mut f, 0.0, 1.0, 1e-12, 40).unwrap();
        let want = (2.0 * std::f64::consts::PI * 1e-6).sqrt();
        assert_relative_eq!(got, want, max_relative = 1e-9);
    }

    #[test]
    fn beta_rule_normalizes_tiny_shapes() {
        // ∫ Beta(x; 0.01, 1) dx = 1, singular at 0
        let rule = beta_axis_rule(0.01, 1.0, 3);
        let v = rule.ln_integrate(|_| 0.0);
        assert!(v.abs() < 1e-10, "∫density = exp({v})");
        // first moment of Beta(0.01, 1) is a/(a+b)
        let m = rule.ln_integrate(|x| x.ln()).exp();
        assert_relative_eq!(m, 0.01 / 1.01, max_relative = 1e-9);
    }

    #[test]
    fn beta_rule_mean_of_generic_shape() {
        let rule = beta_axis_rule(2.5, 0.4, 3);
        let m = rule.ln_integrate(|x| x.ln()).exp();
        assert_relative_eq!(m, 2.5 / 2.9, max_relative = 1e-10);
    }

    #[test]
    fn power_product_reproduces_beta_functions() {
        // ∫_0^1 x^{a−1}(1−x)^{b−1} dx with singular shapes
        for (a, b) in [(0.01, 0.99), (0.5, 3.0), (2.0, 2.0), (0.05, 0.05)] {
            let factors = [
                PowerFactor { root: 0.0, expo: a - 1.0, upper: false },
                PowerFactor { root: 1.0, expo: b - 1.0, upper: true },
            ];
            let got =
                ln_integrate_power_product(&factors, 0.0, 0.0, 1.0, |_, _, _| 0.0, 1e-10).unwrap();
            assert_relative_eq!(got, ln_beta_unchecked(a, b), epsilon = 1e-9);
        }
    }

    #[test]
    fn power_product_with_offset_roots() {
        // ∫_0.2^0.9 (x−0.1)^{-0.5} (1.5−x)^{2} dx, roots outside the interval
        let factors = [
            PowerFactor { root: 0.1, expo: -0.5, upper: false },
            PowerFactor { root: 1.5, expo: 2.0, upper: true },
        ];
        let got = ln_integrate_power_product(&factors, 0.0, 0.2, 0.9, |_, _, _| 0.0, 1e-12)
            .unwrap()
            .exp();
        let mut f = |x: f64| (x - 0.1f64).powf(-0.5) * (1.5 - x) * (1.5 - x);
        let want = integrate_adaptive(&mut f, 0.2, 0.9, 1e-12, 40).unwrap();
        assert_relative_eq!(got, want, max_relative = 1e-9);
    }

    #[test]
    fn power_product_near_singular_root() {
        // root a hair outside the interval still integrates accurately
        let eps = 1e-9;
        let factors = [PowerFactor { root: -eps, expo: -0.9, upper: false }];
        let got = ln_integrate_power_product(&factors, 0.0, 0.0, 1.0, |_, _, _| 0.0, 1e-10)
            .unwrap()
            .exp();
        // ∫_0^1 (x+eps)^{-0.9} dx = ((1+eps)^{0.1} − eps^{0.1})/0.1
        let want = ((1.0 + eps).powf(0.1) - eps.powf(0.1)) / 0.1;
        assert_relative_eq!(got, want, max_relative = 1e-8);
    }

    #[test]
    fn power_product_rejects_nonintegrable() {
        let factors = [PowerFactor { root: 0.0, expo: -1.0, upper: false }];
        assert!(ln_integrate_power_product(&factors, 0.0, 0.0, 1.0, |_, _, _| 0.0, 1e-9).is_err());
    }

    #[test]
    fn hermite_rule_integrates_gaussian_moments() {
        let (x, w) = gauss_hermite(40);
        // ∫ e^{-x²} dx = sqrt(pi)
        let s: f64 = w.iter().sum();
        assert_relative_eq!(s, std::f64::consts::PI.sqrt(), max_relative = 1e-12);
        // ∫ x² e^{-x²} dx = sqrt(pi)/2
        let s2: f64 = x.iter().zip(&w).map(|(&xi, &wi)| wi * xi * xi).sum();
        assert_relative_eq!(s2, std::f64::consts::PI.sqrt() / 2.0, max_relative = 1e-12);
    }
}
