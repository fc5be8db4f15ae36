//! Parsing of command-line values.

use std::path::Path;

use expert_votes::compatible::{FamilyDescriptor, Interval};
use expert_votes::model_file::{load_model, LoadedModel};
use expert_votes::{parse_rational, parse_real, Rational, Scalar};

use crate::{FamilyArgs, Failure};

/// Scalars that can be read from a command-line literal.
pub trait CliScalar: Scalar {
    fn parse(text: &str) -> Option<Self>;
}

impl CliScalar for Rational {
    fn parse(text: &str) -> Option<Self> {
        parse_rational(text)
    }
}

impl CliScalar for f64 {
    fn parse(text: &str) -> Option<Self> {
        parse_real(text)
    }
}

pub fn scalar<S: CliScalar>(flag: &str, text: &str) -> Result<S, Failure> {
    S::parse(text).ok_or_else(|| Failure::Input(format!("--{flag}: cannot read `{text}` as a number")))
}

/// Real literal, also accepting fractions and `inf`.
pub fn real(flag: &str, text: &str) -> Result<f64, Failure> {
    match text.trim() {
        "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
        "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
        t => parse_real(t).ok_or_else(|| Failure::Input(format!("--{flag}: cannot read `{text}` as a number"))),
    }
}

pub fn load(path: &Path) -> Result<LoadedModel, Failure> {
    load_model(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn constant(flag: &str, value: &Option<String>, family: &str) -> Result<f64, Failure> {
    match value {
        Some(text) => real(flag, text),
        None => Err(Failure::Input(format!("family `{family}` needs --{flag}"))),
    }
}

pub fn family(args: &FamilyArgs) -> Result<FamilyDescriptor<f64>, Failure> {
    family_from(&args.family, &args.a, args.n, &args.p, &args.q, &args.m)
}

pub fn family_from(
    tag: &str,
    a: &Option<String>,
    n: Option<u64>,
    p: &Option<String>,
    q: &Option<String>,
    m: &Option<String>,
) -> Result<FamilyDescriptor<f64>, Failure> {
    let count = || n.ok_or_else(|| Failure::Input(format!("family `{tag}` needs --n")));
    let family = match tag {
        "normal-location" => FamilyDescriptor::NormalLocation { a: constant("a", a, tag)? },
        "uniform-location" => FamilyDescriptor::UniformLocation,
        "uniform-scale" => FamilyDescriptor::UniformScale,
        "normal-scale" => FamilyDescriptor::NormalScale { m: constant("m", m, tag)? },
        "gamma-scale" => FamilyDescriptor::GammaScale { p: constant("p", p, tag)? },
        "poisson" => FamilyDescriptor::Poisson { n: count()? },
        "binomial" => FamilyDescriptor::Binomial { n: count()? },
        "noncentral-beta" => FamilyDescriptor::NoncentralBeta { p: constant("p", p, tag)?, q: constant("q", q, tag)? },
        other => {
            return Err(Failure::Input(format!(
                "unknown family `{other}`; expected one of normal-location, uniform-location, uniform-scale, \
                 normal-scale, gamma-scale, poisson, binomial, noncentral-beta"
            )))
        }
    };
    family.validate()?;
    Ok(family)
}

/// A distribution query.
#[derive(Debug, Clone, PartialEq)]
pub enum Query {
    Cdf(f64),
    Quantile(f64),
    Interval(Interval<f64>),
}

/// Parses `cdf:<x>`, `quantile:<p>` or `interval:<lo>,<hi>`.
///
/// Interval ends default to closed. A leading `[` closes and `(` or `]` opens
/// the lower end; a trailing `]` closes and `)` or `[` opens the upper end.
pub fn query(text: &str) -> Result<Query, Failure> {
    let bad = || Failure::Input(format!("--query: cannot read `{text}`"));
    let (kind, arg) = text.split_once(':').ok_or_else(bad)?;
    match kind {
        "cdf" => Ok(Query::Cdf(real("query", arg)?)),
        "quantile" => Ok(Query::Quantile(real("query", arg)?)),
        "interval" => {
            let arg = arg.trim();
            let (lo_closed, arg) = match arg.chars().next() {
                Some('[') => (true, &arg[1..]),
                Some('(') | Some(']') => (false, &arg[1..]),
                _ => (true, arg),
            };
            let (hi_closed, arg) = match arg.chars().last() {
                Some(']') => (true, &arg[..arg.len() - 1]),
                Some(')') | Some('[') => (false, &arg[..arg.len() - 1]),
                _ => (true, arg),
            };
            let (lo, hi) = arg.split_once(',').ok_or_else(bad)?;
            let (lo, hi) = (real("query", lo)?, real("query", hi)?);
            // Infinite ends are never included.
            let iv = Interval::new(lo, hi, lo_closed && lo.is_finite(), hi_closed && hi.is_finite())?;
            Ok(Query::Interval(iv))
        }
        _ => Err(bad()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn queries_parse_with_and_without_brackets() {
        assert_eq!(query("cdf:1").unwrap(), Query::Cdf(1.0));
        assert_eq!(query("quantile:1/4").unwrap(), Query::Quantile(0.25));
        let closed = Interval::new(0.0, 2.0, true, true).unwrap();
        assert_eq!(query("interval:0,2").unwrap(), Query::Interval(closed));
        let half = Interval::new(0.0, 2.0, false, true).unwrap();
        assert_eq!(query("interval:]0,2]").unwrap(), Query::Interval(half));
        assert_eq!(query("interval:(0,2]").unwrap(), Query::Interval(half));
        let below = Interval::new(f64::NEG_INFINITY, 1.0, false, false).unwrap();
        assert_eq!(query("interval:[-inf,1)").unwrap(), Query::Interval(below));
        assert!(query("interval:2,1").is_err());
        assert!(query("mean:1").is_err());
        assert!(query("cdf").is_err());
    }

    #[test]
    fn families_need_their_constants() {
        assert!(family_from("poisson", &None, None, &None, &None, &None).is_err());
        assert!(family_from("poisson", &None, Some(2), &None, &None, &None).is_ok());
        assert!(family_from("normal-location", &Some("-1".into()), None, &None, &None, &None).is_err());
        assert!(family_from("cauchy", &None, None, &None, &None, &None).is_err());
    }
}
