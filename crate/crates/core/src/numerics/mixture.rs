//! Truncated mixture series `Σ w(m) term(m)` with Poisson or negative-binomial weights.

use crate::error::{Error, Result};
use crate::numerics::special::{beta_pair, gamma_pq, ln_gamma};
use crate::scalar::Real;

/// Default tail tolerance of every truncated series.
pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-12;

/// Hard cap on the number of series terms.
pub const MAX_TERMS: u64 = 2_000_000;

/// A truncated series value together with its error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureSum<R> {
    /// Truncated sum, clamped to `[0, 1]`.
    pub value: R,
    /// Unconsumed weight mass; bounds the truncation error for terms in `[0, 1]`.
    pub truncation_bound: R,
    /// Number of terms consumed.
    pub terms: u64,
}

/// Poisson-weighted mixture with rate `eta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureSeriesSpec<R> {
    /// Poisson rate of the mixing weights.
    pub eta: R,
    /// Stop once the remaining Poisson tail mass is below this value.
    pub tail_tolerance: R,
}

impl<R: Real> MixtureSeriesSpec<R> {
    /// Mixture with rate `eta` and the default tail tolerance.
    pub fn new(eta: R) -> Self {
        MixtureSeriesSpec { eta, tail_tolerance: R::c(DEFAULT_TAIL_TOLERANCE) }
    }
}

fn weighted_series<R, W, T, F>(
    log_weight: W,
    tail_after: T,
    mode: u64,
    tail_tolerance: R,
    mut term: F,
) -> Result<MixtureSum<R>>
where
    R: Real,
    W: Fn(u64) -> R,
    T: Fn(u64) -> R,
    F: FnMut(u64) -> Result<R>,
{
    if !(tail_tolerance > R::zero()) {
        return Err(Error::domain("tail tolerance must be positive"));
    }
    let mut value = R::zero();
    for m in 0..MAX_TERMS {
        let w = log_weight(m).exp();
        if w > R::zero() {
            value = value + w * term(m)?.clamp_unit();
        }
        if m >= mode {
            let tail = tail_after(m);
            if tail < tail_tolerance {
                return Ok(MixtureSum { value: value.clamp_unit(), truncation_bound: tail, terms: m + 1 });
            }
        }
    }
    Err(Error::IterationCap(MAX_TERMS as usize))
}

/// Sums `Σ_m Poisson_eta(m) term(m)` until the unconsumed Poisson mass is below the tolerance.
pub fn poisson_mixture_cdf<R, F>(spec: MixtureSeriesSpec<R>, term: F) -> Result<MixtureSum<R>>
where
    R: Real,
    F: FnMut(u64) -> Result<R>,
{
    let eta = spec.eta;
    if !(eta >= R::zero()) || eta.is_infinite() {
        return Err(Error::domain(format!("Poisson rate must be finite and nonnegative, got {eta}")));
    }
    if eta == R::zero() {
        let mut term = term;
        let value = term(0)?.clamp_unit();
        return Ok(MixtureSum { value, truncation_bound: R::zero(), terms: 1 });
    }
    let ln_eta = eta.ln();
    let mode = eta.floor().to_u64().unwrap_or(u64::MAX);
    weighted_series(
        |m| R::n(m) * ln_eta - eta - ln_gamma(R::n(m + 1)),
        |m| gamma_pq(R::n(m + 1), eta).0,
        mode,
        spec.tail_tolerance,
        term,
    )
}

/// Sums `Σ_m NB(m; shape, success) term(m)` where the negative-binomial weights are
/// `Γ(shape + m) / (m! Γ(shape)) success^shape (1 - success)^m`.
pub fn negative_binomial_mixture<R, F>(
    shape: R,
    success: R,
    tail_tolerance: R,
    term: F,
) -> Result<MixtureSum<R>>
where
    R: Real,
    F: FnMut(u64) -> Result<R>,
{
    if !(shape > R::zero()) {
        return Err(Error::domain(format!("negative-binomial shape must be positive, got {shape}")));
    }
    if !(success > R::zero() && success <= R::one()) {
        return Err(Error::domain(format!("negative-binomial success probability must lie in (0, 1], got {success}")));
    }
    if success == R::one() {
        let mut term = term;
        let value = term(0)?.clamp_unit();
        return Ok(MixtureSum { value, truncation_bound: R::zero(), terms: 1 });
    }
    let fail = R::one() - success;
    let ln_success = success.ln();
    let ln_fail = fail.ln();
    let lg_shape = ln_gamma(shape);
    let mode = if shape > R::one() {
        ((shape - R::one()) * fail / success).floor().to_u64().unwrap_or(u64::MAX)
    } else {
        0
    };
    weighted_series(
        |m| {
            let mr = R::n(m);
            ln_gamma(shape + mr) - ln_gamma(mr + R::one()) - lg_shape + shape * ln_success + mr * ln_fail
        },
        // P(M > m) = I_{1 - success}(m + 1, shape).
        |m| beta_pair(R::n(m + 1), shape, fail, success).0,
        mode,
        tail_tolerance,
        term,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_rate_returns_first_term() {
        let s = poisson_mixture_cdf(MixtureSeriesSpec::new(0.0f64), |m| Ok(1.0 / (m as f64 + 2.0))).unwrap();
        assert_eq!(s.value, 0.5);
        assert_eq!(s.terms, 1);
    }

    #[test]
    fn constant_terms_are_reproduced() {
        for &eta in &[0.3f64, 2.0, 17.5, 250.0] {
            let s = poisson_mixture_cdf(MixtureSeriesSpec::new(eta), |_| Ok(0.37)).unwrap();
            assert!((s.value - 0.37).abs() < 1e-11, "eta = {eta}");
            assert!(s.truncation_bound < 1e-12);
        }
        for &(shape, success) in &[(0.5f64, 0.2f64), (3.0, 0.7), (12.0, 0.05)] {
            let s = negative_binomial_mixture(shape, success, 1e-12, |_| Ok(0.61)).unwrap();
            assert!((s.value - 0.61).abs() < 1e-11);
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(poisson_mixture_cdf(MixtureSeriesSpec::new(-1.0f64), |_| Ok(0.0)).is_err());
        let spec = MixtureSeriesSpec { eta: 1.0f64, tail_tolerance: 0.0 };
        assert!(poisson_mixture_cdf(spec, |_| Ok(0.0)).is_err());
        assert!(negative_binomial_mixture(1.0f64, 0.0, 1e-12, |_| Ok(0.0)).is_err());
    }
}
