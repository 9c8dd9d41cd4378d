//! C ABI for the brease library: opaque handles, status codes, and
//! copy-out accessors. The generated header lands in include/brease.h.
//!
//! Handles returned by `*_new`/`*_sample` functions own their data and
//! must be released with the matching `*_free`. All functions are
//! re-entrant; a handle must not be used concurrently from two threads.

use brease::comparators::{ib_log_bf10, lt_log_ml, LtHypothesis, LtPrior};
use brease::evidence::{log_ml_m0, log_ml_m1, log_ml_monotone};
use brease::model::{brease_eb_prior, default_prior, BreaseParams, BreasePrior};
use brease::samplers::{
    exact_sample, gibbs_sample_thinned, sample_monotone, Constraint, DrawSet, Method,
};
use brease::summaries::{summarize, Estimand};
use brease::TrialData;
use std::cell::RefCell;
use std::os::raw::c_char;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BreaseStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ValidationError = 3,
    NumericError = 4,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<std::ffi::CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = std::ffi::CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &brease::Error) -> BreaseStatus {
    set_error(&err.to_string());
    match err {
        brease::Error::Domain(_) => BreaseStatus::InvalidArgument,
        brease::Error::Validation(_) | brease::Error::Parse { .. } => {
            BreaseStatus::ValidationError
        }
        _ => BreaseStatus::NumericError,
    }
}

/// Message of the most recent error on this thread, or NULL when the last
/// call succeeded. The pointer stays valid until the next failing call on
/// the same thread.
#[no_mangle]
pub extern "C" fn brease_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .map(|c| c.as_ptr())
            .unwrap_or(std::ptr::null())
    })
}

/// Library version as a static C string.
#[no_mangle]
pub extern "C" fn brease_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Observed 2x2 counts of a binary experiment (opaque).
pub struct BreaseTrial(TrialData);

/// Prior hyperparameters in mean/sample-size form (opaque).
pub struct BreasePriorHandle(BreasePrior);

/// A set of posterior draws (opaque).
pub struct BreaseDraws(DrawSet);

macro_rules! nonnull {
    ($ptr:expr) => {
        match unsafe { $ptr.as_ref() } {
            Some(r) => r,
            None => {
                set_error("null pointer argument");
                return BreaseStatus::NullPointer;
            }
        }
    };
}

macro_rules! out_ptr {
    ($ptr:expr) => {
        match unsafe { $ptr.as_mut() } {
            Some(r) => r,
            None => {
                set_error("null output pointer");
                return BreaseStatus::NullPointer;
            }
        }
    };
}

/// Create trial data from the four counts.
///
/// # Safety
/// `out` must point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn brease_trial_new(
    y0: u64,
    n0: u64,
    y1: u64,
    n1: u64,
    out: *mut *mut BreaseTrial,
) -> BreaseStatus {
    let out = out_ptr!(out);
    match TrialData::new(y0, n0, y1, n1) {
        Ok(d) => {
            *out = Box::into_raw(Box::new(BreaseTrial(d)));
            BreaseStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// # Safety
/// `trial` must be a pointer returned by `brease_trial_new`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn brease_trial_free(trial: *mut BreaseTrial) {
    if !trial.is_null() {
        drop(unsafe { Box::from_raw(trial) });
    }
}

/// Create a prior from the six hyperparameters.
///
/// # Safety
/// `out` must point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn brease_prior_new(
    mu0: f64,
    mue: f64,
    mus: f64,
    n0: f64,
    ne: f64,
    ns: f64,
    out: *mut *mut BreasePriorHandle,
) -> BreaseStatus {
    let out = out_ptr!(out);
    match BreasePrior::new(mu0, mue, mus, n0, ne, ns) {
        Ok(p) => {
            *out = Box::into_raw(Box::new(BreasePriorHandle(p)));
            BreaseStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// The default prior family with expected effect size `mu`.
///
/// # Safety
/// `out` must point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn brease_prior_default(
    mu: f64,
    out: *mut *mut BreasePriorHandle,
) -> BreaseStatus {
    let out = out_ptr!(out);
    match default_prior(mu) {
        Ok(p) => {
            *out = Box::into_raw(Box::new(BreasePriorHandle(p)));
            BreaseStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// The empirical-Bayes prior for the given data with prior sample size `n`.
///
/// # Safety
/// `trial` must be a live trial handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn brease_prior_empirical_bayes(
    trial: *const BreaseTrial,
    n: f64,
    out: *mut *mut BreasePriorHandle,
) -> BreaseStatus {
    let trial = nonnull!(trial);
    let out = out_ptr!(out);
    match brease_eb_prior(&trial.0, n) {
        Ok(p) => {
            *out = Box::into_raw(Box::new(BreasePriorHandle(p)));
            BreaseStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// # Safety
/// `prior` must be a pointer returned by a prior constructor, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn brease_prior_free(prior: *mut BreasePriorHandle) {
    if !prior.is_null() {
        drop(unsafe { Box::from_raw(prior) });
    }
}

/// Draw `t` exact i.i.d. posterior samples.
///
/// # Safety
/// `trial` and `prior` must be live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn brease_exact_sample(
    trial: *const BreaseTrial,
    prior: *const BreasePriorHandle,
    t: u64,
    seed: u64,
    out: *mut *mut BreaseDraws,
) -> BreaseStatus {
    let trial = nonnull!(trial);
    let prior = nonnull!(prior);
    let out = out_ptr!(out);
    match exact_sample(&trial.0, &prior.0, t, seed) {
        Ok(set) => {
            *out = Box::into_raw(Box::new(BreaseDraws(set)));
            BreaseStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Run the data-augmentation sampler for `t` iterations, keeping every
/// `thin`-th state after `burn_in`.
///
/// # Safety
/// `trial` and `prior` must be live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn brease_gibbs_sample(
    trial: *const BreaseTrial,
    prior: *const BreasePriorHandle,
    t: u64,
    burn_in: u64,
    thin: u64,
    seed: u64,
    out: *mut *mut BreaseDraws,
) -> BreaseStatus {
    let trial = nonnull!(trial);
    let prior = nonnull!(prior);
    let out = out_ptr!(out);
    let init = BreaseParams { theta0: 0.5, eta_e: 0.5, eta_s: 0.5 };
    match gibbs_sample_thinned(&trial.0, &prior.0, t, burn_in, thin, &init, seed) {
        Ok(set) => {
            *out = Box::into_raw(Box::new(BreaseDraws(set)));
            BreaseStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Monotonicity constraint selector for the C ABI.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BreaseConstraint {
    NoHarm = 0,
    NoBenefit = 1,
}

/// Exact sampling under a monotonicity constraint.
///
/// # Safety
/// `trial` and `prior` must be live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn brease_monotone_sample(
    trial: *const BreaseTrial,
    prior: *const BreasePriorHandle,
    constraint: BreaseConstraint,
    t: u64,
    seed: u64,
    out: *mut *mut BreaseDraws,
) -> BreaseStatus {
    let trial = nonnull!(trial);
    let prior = nonnull!(prior);
    let out = out_ptr!(out);
    let c = match constraint {
        BreaseConstraint::NoHarm => Constraint::NoHarm,
        BreaseConstraint::NoBenefit => Constraint::NoBenefit,
    };
    match sample_monotone(&trial.0, &prior.0, c, Method::Exact, t, 0, seed) {
        Ok(set) => {
            *out = Box::into_raw(Box::new(BreaseDraws(set)));
            BreaseStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// # Safety
/// `draws` must be a pointer returned by a sampling function, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn brease_draws_free(draws: *mut BreaseDraws) {
    if !draws.is_null() {
        drop(unsafe { Box::from_raw(draws) });
    }
}

/// Number of draws in the set.
///
/// # Safety
/// `draws` must be a live draws handle.
#[no_mangle]
pub unsafe extern "C" fn brease_draws_len(draws: *const BreaseDraws) -> usize {
    unsafe { draws.as_ref() }.map(|d| d.0.len()).unwrap_or(0)
}

/// Column selector for draw export.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BreaseColumn {
    Theta0 = 0,
    EtaE = 1,
    EtaS = 2,
    Theta1 = 3,
}

/// Copy one column of the draw matrix into `buf` (capacity `len`); fails
/// unless `len` matches the number of draws.
///
/// # Safety
/// `draws` must be a live handle and `buf` must point to at least `len`
/// writable doubles.
#[no_mangle]
pub unsafe extern "C" fn brease_draws_column(
    draws: *const BreaseDraws,
    column: BreaseColumn,
    buf: *mut f64,
    len: usize,
) -> BreaseStatus {
    let draws = nonnull!(draws);
    if buf.is_null() {
        set_error("null buffer");
        return BreaseStatus::NullPointer;
    }
    if len != draws.0.len() {
        set_error("buffer length does not match the number of draws");
        return BreaseStatus::InvalidArgument;
    }
    let slice = unsafe { std::slice::from_raw_parts_mut(buf, len) };
    for (dst, p) in slice.iter_mut().zip(&draws.0.draws) {
        *dst = match column {
            BreaseColumn::Theta0 => p.theta0,
            BreaseColumn::EtaE => p.eta_e,
            BreaseColumn::EtaS => p.eta_s,
            BreaseColumn::Theta1 => p.theta1(),
        };
    }
    BreaseStatus::Ok
}

/// Estimand selector for posterior summaries.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BreaseEstimand {
    Theta0 = 0,
    Theta1 = 1,
    EtaE = 2,
    EtaS = 3,
    RiskRatio = 4,
    RiskDifference = 5,
    VaccineEfficacy = 6,
}

/// Median and equal-tailed interval of an estimand over the draws.
///
/// # Safety
/// `draws` must be a live handle; the three outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn brease_summarize(
    draws: *const BreaseDraws,
    estimand: BreaseEstimand,
    level: f64,
    median: *mut f64,
    cri_low: *mut f64,
    cri_high: *mut f64,
) -> BreaseStatus {
    let draws = nonnull!(draws);
    let median = out_ptr!(median);
    let cri_low = out_ptr!(cri_low);
    let cri_high = out_ptr!(cri_high);
    let e = match estimand {
        BreaseEstimand::Theta0 => Estimand::Theta0,
        BreaseEstimand::Theta1 => Estimand::Theta1,
        BreaseEstimand::EtaE => Estimand::EtaE,
        BreaseEstimand::EtaS => Estimand::EtaS,
        BreaseEstimand::RiskRatio => Estimand::RiskRatio,
        BreaseEstimand::RiskDifference => Estimand::RiskDifference,
        BreaseEstimand::VaccineEfficacy => Estimand::VaccineEfficacy,
    };
    match summarize(&draws.0, e, level) {
        Ok(s) => {
            *median = s.median;
            *cri_low = s.cri_low;
            *cri_high = s.cri_high;
            BreaseStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Log marginal likelihood of the null (shared-risk) model.
///
/// # Safety
/// `trial` and `prior` must be live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn brease_log_ml_m0(
    trial: *const BreaseTrial,
    prior: *const BreasePriorHandle,
    out: *mut f64,
) -> BreaseStatus {
    let trial = nonnull!(trial);
    let prior = nonnull!(prior);
    let out = out_ptr!(out);
    match log_ml_m0(&trial.0, &prior.0) {
        Ok(e) => {
            *out = e.log_ml;
            BreaseStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Log marginal likelihood of the unconstrained model.
///
/// # Safety
/// `trial` and `prior` must be live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn brease_log_ml_m1(
    trial: *const BreaseTrial,
    prior: *const BreasePriorHandle,
    out: *mut f64,
) -> BreaseStatus {
    let trial = nonnull!(trial);
    let prior = nonnull!(prior);
    let out = out_ptr!(out);
    match log_ml_m1(&trial.0, &prior.0) {
        Ok(e) => {
            *out = e.log_ml;
            BreaseStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Log marginal likelihood under a monotonicity constraint.
///
/// # Safety
/// `trial` and `prior` must be live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn brease_log_ml_monotone(
    trial: *const BreaseTrial,
    prior: *const BreasePriorHandle,
    constraint: BreaseConstraint,
    out: *mut f64,
) -> BreaseStatus {
    let trial = nonnull!(trial);
    let prior = nonnull!(prior);
    let out = out_ptr!(out);
    let c = match constraint {
        BreaseConstraint::NoHarm => Constraint::NoHarm,
        BreaseConstraint::NoBenefit => Constraint::NoBenefit,
    };
    match log_ml_monotone(&trial.0, &prior.0, c) {
        Ok(e) => {
            *out = e.log_ml;
            BreaseStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// BF10 of the unconstrained model against the shared-risk null.
///
/// # Safety
/// `trial` and `prior` must be live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn brease_bf10(
    trial: *const BreaseTrial,
    prior: *const BreasePriorHandle,
    out: *mut f64,
) -> BreaseStatus {
    let trial = nonnull!(trial);
    let prior = nonnull!(prior);
    let out = out_ptr!(out);
    let m1 = match log_ml_m1(&trial.0, &prior.0) {
        Ok(e) => e,
        Err(e) => return status_of(&e),
    };
    let m0 = match log_ml_m0(&trial.0, &prior.0) {
        Ok(e) => e,
        Err(e) => return status_of(&e),
    };
    *out = (m1.log_ml - m0.log_ml).exp();
    BreaseStatus::Ok
}

/// Savage-Dickey BF10 for the symmetric independent-beta comparator.
///
/// # Safety
/// `trial` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn brease_ib_bf10(
    trial: *const BreaseTrial,
    a: f64,
    out: *mut f64,
) -> BreaseStatus {
    let trial = nonnull!(trial);
    let out = out_ptr!(out);
    match ib_log_bf10(&trial.0, a) {
        Ok(v) => {
            *out = v.exp();
            BreaseStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// BF10 for the logit comparator with prior scales (1, sigma_psi).
///
/// # Safety
/// `trial` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn brease_lt_bf10(
    trial: *const BreaseTrial,
    sigma_psi: f64,
    out: *mut f64,
) -> BreaseStatus {
    let trial = nonnull!(trial);
    let out = out_ptr!(out);
    let prior = match LtPrior::new(0.0, 0.0, 1.0, sigma_psi) {
        Ok(p) => p,
        Err(e) => return status_of(&e),
    };
    let h1 = match lt_log_ml(&trial.0, &prior, LtHypothesis::H1) {
        Ok(e) => e,
        Err(e) => return status_of(&e),
    };
    let h0 = match lt_log_ml(&trial.0, &prior, LtHypothesis::H0) {
        Ok(e) => e,
        Err(e) => return status_of(&e),
    };
    *out = (h1.log_ml - h0.log_ml).exp();
    BreaseStatus::Ok
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_through_the_c_abi() {
        unsafe {
            let mut trial: *mut BreaseTrial = std::ptr::null_mut();
            assert_eq!(
                brease_trial_new(26, 11034, 10, 11037, &mut trial),
                BreaseStatus::Ok
            );
            let mut prior: *mut BreasePriorHandle = std::ptr::null_mut();
            assert_eq!(brease_prior_default(0.3, &mut prior), BreaseStatus::Ok);

            let mut draws: *mut BreaseDraws = std::ptr::null_mut();
            assert_eq!(
                brease_exact_sample(trial, prior, 20_000, 7, &mut draws),
                BreaseStatus::Ok
            );
            assert_eq!(brease_draws_len(draws), 20_000);

            let (mut med, mut lo, mut hi) = (0.0, 0.0, 0.0);
            assert_eq!(
                brease_summarize(
                    draws,
                    BreaseEstimand::RiskRatio,
                    0.95,
                    &mut med,
                    &mut lo,
                    &mut hi
                ),
                BreaseStatus::Ok
            );
            assert!((med - 0.44).abs() < 0.02, "median {med}");
            assert!(lo < med && med < hi);

            let mut buf = vec![0.0f64; 20_000];
            assert_eq!(
                brease_draws_column(draws, BreaseColumn::Theta1, buf.as_mut_ptr(), buf.len()),
                BreaseStatus::Ok
            );
            assert!(buf.iter().all(|&x| (0.0..=1.0).contains(&x)));

            let mut bf = 0.0;
            assert_eq!(brease_bf10(trial, prior, &mut bf), BreaseStatus::Ok);
            assert!((bf - 1.2).abs() < 0.05, "bf {bf}");

            let mut ib = 0.0;
            assert_eq!(brease_ib_bf10(trial, 1.0, &mut ib), BreaseStatus::Ok);
            assert!((1.0 / ib - 20.27).abs() < 0.05);

            brease_draws_free(draws);
            brease_prior_free(prior);
            brease_trial_free(trial);
        }
    }

    #[test]
    fn error_paths_set_messages() {
        unsafe {
            let mut trial: *mut BreaseTrial = std::ptr::null_mut();
            assert_eq!(
                brease_trial_new(5, 2, 0, 1, &mut trial),
                BreaseStatus::ValidationError
            );
            let msg = brease_last_error_message();
            assert!(!msg.is_null());
            let text = std::ffi::CStr::from_ptr(msg).to_string_lossy();
            assert!(text.contains("y0"));

            let mut prior: *mut BreasePriorHandle = std::ptr::null_mut();
            assert_eq!(
                brease_prior_default(1.5, &mut prior),
                BreaseStatus::ValidationError
            );
            assert_eq!(
                brease_trial_new(1, 2, 1, 2, std::ptr::null_mut()),
                BreaseStatus::NullPointer
            );
            let mut ib = 0.0;
            assert_eq!(brease_trial_new(0, 0, 0, 0, &mut trial), BreaseStatus::Ok);
            assert_eq!(
                brease_ib_bf10(trial, 0.25, &mut ib),
                BreaseStatus::InvalidArgument
            );
            brease_trial_free(trial);
        }
    }

    #[test]
    fn version_is_a_c_string() {
        unsafe {
            let v = std::ffi::CStr::from_ptr(brease_version());
            assert!(!v.to_string_lossy().is_empty());
        }
    }
}
