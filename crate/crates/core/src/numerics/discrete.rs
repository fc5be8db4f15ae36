//! Poisson and binomial masses and their mid-distribution functions.

use crate::numerics::special::ln_gamma;
use crate::scalar::Real;

/// Natural log of the binomial coefficient `C(n, k)`.
pub fn ln_choose<R: Real>(n: u64, k: u64) -> R {
    if k > n {
        return R::neg_infinity();
    }
    ln_gamma(R::n(n + 1)) - ln_gamma(R::n(k + 1)) - ln_gamma(R::n(n - k + 1))
}

/// Poisson mass `e^-rate rate^k / k!`.
pub fn poisson_pmf<R: Real>(k: u64, rate: R) -> R {
    if rate <= R::zero() {
        return if k == 0 { R::one() } else { R::zero() };
    }
    (R::n(k) * rate.ln() - rate - ln_gamma(R::n(k + 1))).exp()
}

/// Poisson CDF `P(X <= k)` by direct summation.
pub fn poisson_cdf<R: Real>(k: u64, rate: R) -> R {
    let mut sum = R::zero();
    for j in 0..=k {
        sum = sum + poisson_pmf(j, rate);
    }
    sum.clamp_unit()
}

/// Binomial mass `C(n, k) p^k (1 - p)^(n - k)`.
pub fn binomial_pmf<R: Real>(n: u64, k: u64, p: R) -> R {
    if k > n {
        return R::zero();
    }
    if p <= R::zero() {
        return if k == 0 { R::one() } else { R::zero() };
    }
    if p >= R::one() {
        return if k == n { R::one() } else { R::zero() };
    }
    (ln_choose::<R>(n, k) + R::n(k) * p.ln() + R::n(n - k) * (R::one() - p).ln()).exp()
}

/// Binomial CDF `P(X <= k)` by direct summation.
pub fn binomial_cdf<R: Real>(n: u64, k: u64, p: R) -> R {
    let mut sum = R::zero();
    for j in 0..=k.min(n) {
        sum = sum + binomial_pmf(n, j, p);
    }
    sum.clamp_unit()
}

/// Poisson mid-distribution function `P(X < k) + P(X = k) / 2`.
pub fn poisson_mid_cdf<R: Real>(k: u64, rate: R) -> R {
    let below = if k == 0 { R::zero() } else { poisson_cdf(k - 1, rate) };
    (below + R::c(0.5) * poisson_pmf(k, rate)).clamp_unit()
}

/// Binomial mid-distribution function `P(X < k) + P(X = k) / 2`.
pub fn binomial_mid_cdf<R: Real>(n: u64, k: u64, p: R) -> R {
    let below = if k == 0 { R::zero() } else { binomial_cdf(n, k - 1, p) };
    (below + R::c(0.5) * binomial_pmf(n, k, p)).clamp_unit()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn masses_sum_to_one() {
        let total: f64 = (0..=20).map(|k| binomial_pmf(20, k, 0.37)).sum();
        assert!((total - 1.0).abs() < 1e-13);
        let total: f64 = (0..=80).map(|k| poisson_pmf(k, 6.5)).sum();
        assert!((total - 1.0).abs() < 1e-13);
    }

    #[test]
    fn degenerate_parameters() {
        assert_eq!(poisson_pmf(0, 0.0f64), 1.0);
        assert_eq!(poisson_pmf(2, 0.0f64), 0.0);
        assert_eq!(binomial_pmf(5, 5, 1.0f64), 1.0);
        assert_eq!(binomial_pmf(5, 0, 0.0f64), 1.0);
        assert_eq!(binomial_mid_cdf(5, 0, 0.0f64), 0.5);
    }

    #[test]
    fn poisson_mid_cdf_at_two() {
        let e2 = (-2.0f64).exp();
        assert!((poisson_mid_cdf(2, 2.0f64) - 4.0 * e2).abs() < 1e-15);
    }
}
