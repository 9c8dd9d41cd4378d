//! Numerical kernel: special functions, log-space reductions, quadrature
//! rules, and seeded random-variate generation.

pub mod quad;
pub mod rng;
pub mod sample;
pub mod special;

pub use rng::RngStream;
pub use sample::{ln_gamma_draw, sample_beta, sample_binomial, sample_dirichlet, sample_gamma};
pub use special::{
    ln_beta, ln_beta3, ln_binomial, ln_gamma, log_add_exp, log_sum_exp, reg_inc_beta,
};

/// A quantity carried on the natural-log scale; −∞ encodes zero.
///
/// Thin wrapper that documents the scale at type level where raw `f64`s
/// would be ambiguous (mixture weights, marginal likelihoods).
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct LogReal(f64);

impl LogReal {
    pub const ZERO: LogReal = LogReal(f64::NEG_INFINITY);

    /// Wrap a value already on the log scale. NaN is rejected.
    pub fn from_ln(ln: f64) -> crate::error::Result<Self> {
        if ln.is_nan() {
            return Err(crate::error::Error::domain("LogReal cannot hold NaN"));
        }
        Ok(LogReal(ln))
    }

    pub fn from_value(v: f64) -> crate::error::Result<Self> {
        if v.is_nan() || v < 0.0 {
            return Err(crate::error::Error::domain(
                "LogReal represents nonnegative quantities",
            ));
        }
        Ok(LogReal(v.ln()))
    }

    pub fn ln(self) -> f64 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0.exp()
    }

    /// Log-scale product.
    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, rhs: LogReal) -> LogReal {
        LogReal(self.0 + rhs.0)
    }

    /// Log-scale sum via log-add-exp.
    #[allow(clippy::should_implement_trait)]
    pub fn add(self, rhs: LogReal) -> LogReal {
        LogReal(special::log_add_exp(self.0, rhs.0))
    }
}
