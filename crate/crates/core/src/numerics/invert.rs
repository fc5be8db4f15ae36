//! Bracketed bisection for generalized inverses of monotone CDFs.

use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_BISECTIONS: usize = 2_000;

/// Smallest `x` in `[lo, hi]` with `cdf(x) >= p`, located by bisection.
///
/// Bisection stops once the bracket is narrower than `1e-12 · max(1, |x|)`, so
/// the result is within that distance of the generalized inverse; at a jump of
/// the CDF it is the jump location.
pub fn invert_cdf<R, F>(cdf: F, p: R, lo: R, hi: R) -> Result<R>
where
    R: Real,
    F: Fn(R) -> R,
{
    if !(lo <= hi) {
        return Err(Error::domain(format!("bracket [{lo}, {hi}] is empty")));
    }
    let f_lo = cdf(lo);
    let f_hi = cdf(hi);
    if !(f_lo <= p && p <= f_hi) {
        return Err(Error::BracketDoesNotStraddle {
            lo: lo.to_string(),
            hi: hi.to_string(),
            level: p.to_string(),
        });
    }
    if f_lo >= p {
        return Ok(lo);
    }
    let tol = R::c(1e-12);
    let (mut a, mut b) = (lo, hi);
    for _ in 0..MAX_BISECTIONS {
        let mid = a + (b - a) * R::c(0.5);
        if mid <= a || mid >= b {
            break;
        }
        if cdf(mid) < p {
            a = mid;
        } else {
            b = mid;
        }
        if b - a <= tol * R::one().max(b.abs()) {
            break;
        }
    }
    Ok(b)
}
