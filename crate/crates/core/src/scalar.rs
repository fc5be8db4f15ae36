//! Numeric abstractions.
//!
//! [`Scalar`] is an ordered field used by the finite discrete models. It is
//! implemented for `f32`, `f64` and [`BigRational`]; the rational instance makes
//! every discrete vote exact. [`Real`] is the floating-point bound used by the
//! special functions and the continuous families.

use std::fmt::{Debug, Display};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{FloatConst, FromPrimitive, Num, Signed, ToPrimitive, Zero};
use num::{Float, One};

/// Ordered field with an optional exactness guarantee.
pub trait Scalar:
    Clone + PartialOrd + Debug + Display + Num + Signed + FromPrimitive + Send + Sync + 'static
{
    /// True when arithmetic is exact (no rounding).
    const EXACT: bool;

    /// Relative tolerance used by [`Scalar::approx_eq`]; zero for exact types.
    fn tolerance() -> f64;

    /// Ratio `num / den` of two integers.
    fn ratio(num: i64, den: i64) -> Self;

    /// Nearest `f64` value.
    fn to_f64(&self) -> f64;

    /// Exact fraction string (`"p/q"`) when the value is held exactly.
    fn exact_string(&self) -> Option<String>;

    /// Converts an `f64`, exactly for rationals.
    fn from_f64_value(x: f64) -> Option<Self>;

    /// Equality up to the type's tolerance, relative to `max(1, |a|, |b|)`.
    fn approx_eq(&self, other: &Self) -> bool {
        if Self::EXACT {
            return self == other;
        }
        let a = self.to_f64();
        let b = other.to_f64();
        let scale = 1f64.max(a.abs()).max(b.abs());
        (a - b).abs() <= Self::tolerance() * scale
    }

    /// One half.
    fn half() -> Self {
        Self::ratio(1, 2)
    }

    /// Clamps into the unit interval.
    fn clamp_unit(self) -> Self {
        if self < Self::zero() {
            Self::zero()
        } else if self > Self::one() {
            Self::one()
        } else {
            self
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn tolerance() -> f64 {
        1e-12
    }

    fn ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn exact_string(&self) -> Option<String> {
        None
    }

    fn from_f64_value(x: f64) -> Option<Self> {
        Some(x)
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn tolerance() -> f64 {
        1e-5
    }

    fn ratio(num: i64, den: i64) -> Self {
        (num as f64 / den as f64) as f32
    }

    fn to_f64(&self) -> f64 {
        *self as f64
    }

    fn exact_string(&self) -> Option<String> {
        None
    }

    fn from_f64_value(x: f64) -> Option<Self> {
        Some(x as f32)
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn tolerance() -> f64 {
        0.0
    }

    fn ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            if self.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        })
    }

    fn exact_string(&self) -> Option<String> {
        if self.denom().is_one() {
            Some(self.numer().to_string())
        } else {
            Some(format!("{}/{}", self.numer(), self.denom()))
        }
    }

    fn from_f64_value(x: f64) -> Option<Self> {
        BigRational::from_float(x)
    }
}

/// Floating-point type accepted by the special functions and continuous families.
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Display + Send + Sync + 'static {
    /// Converts an `f64` constant.
    fn c(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant representable")
    }

    /// Converts an unsigned integer.
    fn n(k: u64) -> Self {
        Self::from_u64(k).expect("integer representable")
    }

    /// Clamps into the unit interval.
    fn clamp_unit(self) -> Self {
        if self < Self::zero() {
            Self::zero()
        } else if self > Self::one() {
            Self::one()
        } else {
            self
        }
    }
}

impl<T> Real for T where T: Float + FloatConst + FromPrimitive + Debug + Display + Send + Sync + 'static {}

/// Parses a literal such as `"1/6"`, `"3"`, `"0.25"` or `"1e-3"` into an exact rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let s = text.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if all_digits.is_empty() { BigInt::zero() } else { all_digits.parse().ok()? };
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = BigRational::from_integer(numer);
    if scale >= 0 {
        value *= BigRational::from_integer(num::pow(ten, scale as usize));
    } else {
        value /= BigRational::from_integer(num::pow(ten, (-scale) as usize));
    }
    Some(if negative { -value } else { value })
}

/// Parses a literal into a float, accepting fractions such as `"1/2"`.
pub fn parse_real(text: &str) -> Option<f64> {
    let s = text.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: f64 = n.trim().parse().ok()?;
        let d: f64 = d.trim().parse().ok()?;
        return Some(n / d);
    }
    s.parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_and_decimal_literals_exactly() {
        assert_eq!(parse_rational("1/6"), Some(BigRational::ratio(1, 6)));
        assert_eq!(parse_rational("0.25"), Some(BigRational::ratio(1, 4)));
        assert_eq!(parse_rational("-1.5e-1"), Some(BigRational::ratio(-3, 20)));
        assert_eq!(parse_rational("12"), Some(BigRational::ratio(12, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
    }

    #[test]
    fn float_literals_accept_fractions() {
        assert_eq!(parse_real("1/2"), Some(0.5));
        assert_eq!(parse_real("0.3"), Some(0.3));
        assert_eq!(parse_real("x"), None);
    }

    #[test]
    fn exact_strings() {
        assert_eq!(BigRational::ratio(2, 4).exact_string().as_deref(), Some("1/2"));
        assert_eq!(BigRational::ratio(4, 2).exact_string().as_deref(), Some("2"));
        assert_eq!(0.5f64.exact_string(), None);
    }

    #[test]
    fn approximate_equality_respects_type() {
        assert!(Scalar::approx_eq(&(0.1f64 + 0.2), &0.3));
        assert!(!BigRational::ratio(1, 3).approx_eq(&BigRational::ratio(333, 1000)));
    }
}
