//! Compatible votes for unilateral hypotheses on canonical one-parameter
//! families, and the probability on the parameter line they extend to.
//!
//! For a family with mid-distribution function `G_θ(t)` the compatible vote for
//! `Θ ∩ ]-∞, θ_f)` at the observation `t` is `1 - G_θf(t)`. As a function of
//! `θ_f` it is the distribution function of a probability on `Θ`, returned by
//! [`param_distribution`].

mod distribution;

pub use distribution::{Component, Interval, Law, ParamDistribution};

use crate::error::{Error, Result};
use crate::numerics::mixture::{poisson_mixture_cdf, MixtureSeriesSpec};
use crate::numerics::special::{beta_prime_pair, gamma_pq, normal_cdf};
use crate::numerics::{binomial_mid_cdf, poisson_mid_cdf};
use crate::scalar::Real;
use crate::simple_choice::VoteResult;
use crate::stable::MidCdfFamily;

/// Canonical family with its known constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyDescriptor<R> {
    /// `T ~ N(θ, a²)`.
    NormalLocation { a: R },
    /// `T` uniform on `[θ - 1, θ + 1]`.
    UniformLocation,
    /// `T` uniform on `[0, θ]`, `θ > 0`.
    UniformScale,
    /// `X ~ N(m, θ²)` with known mean; the statistic is `|X - m|`.
    NormalScale { m: R },
    /// `T ~ gamma(p, scale θ)`.
    GammaScale { p: R },
    /// Total count of `n` Poisson(θ) replicates, `T ~ Poisson(nθ)`.
    Poisson { n: u64 },
    /// `T ~ binomial(n, θ)`.
    Binomial { n: u64 },
    /// Beta-prime law `β(p, q)` with Poisson(θ) noncentrality on the first shape.
    NoncentralBeta { p: R, q: R },
}

/// Whether the boundary `θ_f` belongs to the hypothesis `]-∞, θ_f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Boundary {
    Open,
    Closed,
}

/// Pull of a weighted compatible vote towards a central value `θ0`.
///
/// Location families draw each frontier vote from `N(θ_f + λ(θ_f - θ0), c²)`;
/// scale families use the point mass at `θ_f (θ_f / θ0)^λ`, so `spread` must be 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PonderationSpec<R> {
    pub median: R,
    pub pull: R,
    pub spread: R,
}

fn is_integer<R: Real>(t: R) -> bool {
    t.is_finite() && t == t.floor()
}

fn to_count<R: Real>(t: R) -> u64 {
    t.to_u64().unwrap_or(u64::MAX)
}

impl<R: Real> FamilyDescriptor<R> {
    /// Short tag naming the family.
    pub fn tag(&self) -> &'static str {
        match self {
            FamilyDescriptor::NormalLocation { .. } => "normal-location",
            FamilyDescriptor::UniformLocation => "uniform-location",
            FamilyDescriptor::UniformScale => "uniform-scale",
            FamilyDescriptor::NormalScale { .. } => "normal-scale",
            FamilyDescriptor::GammaScale { .. } => "gamma-scale",
            FamilyDescriptor::Poisson { .. } => "poisson",
            FamilyDescriptor::Binomial { .. } => "binomial",
            FamilyDescriptor::NoncentralBeta { .. } => "noncentral-beta",
        }
    }

    /// Checks the family constants.
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: R| {
            if v > R::zero() && v.is_finite() {
                Ok(())
            } else {
                Err(Error::domain(format!("{} constant {name} must be positive and finite, got {v}", self.tag())))
            }
        };
        match *self {
            FamilyDescriptor::NormalLocation { a } => positive("a", a),
            FamilyDescriptor::UniformLocation | FamilyDescriptor::UniformScale => Ok(()),
            FamilyDescriptor::NormalScale { m } => {
                if m.is_finite() {
                    Ok(())
                } else {
                    Err(Error::domain("normal-scale mean must be finite"))
                }
            }
            FamilyDescriptor::GammaScale { p } => positive("p", p),
            FamilyDescriptor::Poisson { n } | FamilyDescriptor::Binomial { n } => {
                if n >= 1 {
                    Ok(())
                } else {
                    Err(Error::domain(format!("{} constant n must be at least 1", self.tag())))
                }
            }
            FamilyDescriptor::NoncentralBeta { p, q } => positive("p", p).and(positive("q", q)),
        }
    }

    /// Parameter set `Θ` as an interval.
    pub fn parameter_interval(&self) -> Interval<R> {
        let inf = R::infinity();
        match self {
            FamilyDescriptor::NormalLocation { .. } | FamilyDescriptor::UniformLocation => Interval::full(),
            FamilyDescriptor::UniformScale | FamilyDescriptor::NormalScale { .. } | FamilyDescriptor::GammaScale { .. } => {
                Interval { lo: R::zero(), hi: inf, lo_closed: false, hi_closed: false }
            }
            FamilyDescriptor::Poisson { .. } | FamilyDescriptor::NoncentralBeta { .. } => {
                Interval { lo: R::zero(), hi: inf, lo_closed: true, hi_closed: false }
            }
            FamilyDescriptor::Binomial { .. } => Interval { lo: R::zero(), hi: R::one(), lo_closed: true, hi_closed: true },
        }
    }

    fn check_theta(&self, theta: R) -> Result<()> {
        let iv = self.parameter_interval();
        let above = theta > iv.lo || (iv.lo_closed && theta == iv.lo);
        let below = theta < iv.hi || (iv.hi_closed && theta == iv.hi);
        if theta.is_finite() && above && below {
            Ok(())
        } else {
            Err(Error::domain(format!("parameter {theta} lies outside the {} parameter set", self.tag())))
        }
    }

    /// Checks the observation against the statistic range.
    ///
    /// For the normal-scale family the observation is the raw value `x`; every
    /// other family takes the statistic itself.
    pub fn check_observation(&self, t: R) -> Result<()> {
        let ok = match *self {
            FamilyDescriptor::NormalLocation { .. } | FamilyDescriptor::UniformLocation => t.is_finite(),
            FamilyDescriptor::NormalScale { m } => t.is_finite() && t != m,
            FamilyDescriptor::UniformScale | FamilyDescriptor::GammaScale { .. } => t.is_finite() && t > R::zero(),
            FamilyDescriptor::Poisson { .. } => is_integer(t) && t >= R::zero(),
            FamilyDescriptor::Binomial { n } => is_integer(t) && t >= R::zero() && t <= R::n(n),
            FamilyDescriptor::NoncentralBeta { .. } => t.is_finite() && t >= R::zero(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::domain(format!("observation {t} lies outside the {} statistic range", self.tag())))
        }
    }

    /// Mid-distribution function `G_θ(t) = P_θ(T < t) + P_θ(T = t) / 2`.
    pub fn mid_cdf(&self, theta: R, t: R) -> Result<R> {
        self.validate()?;
        self.check_theta(theta)?;
        self.check_observation(t)?;
        let value = match *self {
            FamilyDescriptor::NormalLocation { a } => normal_cdf((t - theta) / a),
            FamilyDescriptor::UniformLocation => ((t - theta + R::one()) / R::c(2.0)).clamp_unit(),
            FamilyDescriptor::UniformScale => (t / theta).min(R::one()),
            FamilyDescriptor::NormalScale { m } => {
                let s = (t - m).abs();
                R::one() - R::c(2.0) * normal_cdf(-s / theta)
            }
            FamilyDescriptor::GammaScale { p } => gamma_pq(p, t / theta).0,
            FamilyDescriptor::Poisson { n } => poisson_mid_cdf(to_count(t), R::n(n) * theta),
            FamilyDescriptor::Binomial { n } => binomial_mid_cdf(n, to_count(t), theta),
            FamilyDescriptor::NoncentralBeta { p, q } => {
                poisson_mixture_cdf(MixtureSeriesSpec::new(theta), |m| Ok(beta_prime_pair(p + R::n(m), q, t).0))?.value
            }
        };
        Ok(value.clamp_unit())
    }
}

impl<R: Real> MidCdfFamily<R> for FamilyDescriptor<R> {
    fn mid_cdf(&self, theta: R, t: R) -> Result<R> {
        FamilyDescriptor::mid_cdf(self, theta, t)
    }
}

/// Compatible vote for `Θ ∩ ]-∞, θ_f)` (open) or `Θ ∩ ]-∞, θ_f]` (closed).
///
/// Inside `Θ` the value is `1 - G_θf(t)`. At the lower end of a closed
/// parameter set the closed hypothesis is `{θ_f}` and the open one is empty;
/// at the upper end of a closed parameter set the closed hypothesis is all of
/// `Θ`.
pub fn compatible_vote<R: Real>(family: &FamilyDescriptor<R>, t: R, theta_f: R, boundary: Boundary) -> Result<R> {
    let g = family.mid_cdf(theta_f, t)?;
    let iv = family.parameter_interval();
    if theta_f == iv.lo && boundary == Boundary::Open {
        return Ok(R::zero());
    }
    if theta_f == iv.hi && boundary == Boundary::Closed {
        return Ok(R::one());
    }
    Ok(R::one() - g)
}

fn half<R: Real>() -> R {
    R::c(0.5)
}

/// Probability on `Θ` extending the compatible votes at observation `t`.
pub fn param_distribution<R: Real>(family: &FamilyDescriptor<R>, t: R) -> Result<ParamDistribution<R>> {
    family.validate()?;
    family.check_observation(t)?;
    let dist = match *family {
        FamilyDescriptor::NormalLocation { a } => ParamDistribution::continuous(Law::Normal { mean: t, sd: a }),
        FamilyDescriptor::UniformLocation => {
            ParamDistribution::continuous(Law::Uniform { lo: t - R::one(), hi: t + R::one() })
        }
        FamilyDescriptor::UniformScale => ParamDistribution::continuous(Law::Pareto { scale: t }),
        FamilyDescriptor::NormalScale { m } => ParamDistribution::continuous(Law::NormalScale { s: (t - m).abs() }),
        FamilyDescriptor::GammaScale { p } => ParamDistribution::continuous(Law::InverseGamma { shape: p, scale: t }),
        FamilyDescriptor::Poisson { n } => {
            let rate = R::n(n);
            let upper = Component { weight: half(), law: Law::Gamma { shape: t + R::one(), rate } };
            if t == R::zero() {
                ParamDistribution::new(vec![(R::zero(), half())], vec![upper])?
            } else {
                let lower = Component { weight: half(), law: Law::Gamma { shape: t, rate } };
                ParamDistribution::new(Vec::new(), vec![lower, upper])?
            }
        }
        FamilyDescriptor::Binomial { n } => {
            let n = R::n(n);
            let mut atoms = Vec::new();
            let mut components = Vec::new();
            if t == R::zero() {
                atoms.push((R::zero(), half()));
            } else {
                components.push(Component { weight: half(), law: Law::Beta { a: t, b: n + R::one() - t } });
            }
            if t == n {
                atoms.push((R::one(), half()));
            } else {
                components.push(Component { weight: half(), law: Law::Beta { a: t + R::one(), b: n - t } });
            }
            ParamDistribution::new(atoms, components)?
        }
        FamilyDescriptor::NoncentralBeta { p, q } => {
            let atom = beta_prime_pair(p, q, t).1;
            let rest = R::one() - atom;
            ParamDistribution::new(
                vec![(R::zero(), atom)],
                vec![Component { weight: rest, law: Law::NoncentralBeta { p, q, t, atom } }],
            )?
        }
    };
    Ok(dist)
}

/// Probability on `Θ` extending the weighted compatible votes.
///
/// Supported for the normal-location family (normal ponderation around
/// `θ_f + λ(θ_f - θ0)` with spread `c`) and the gamma-scale family (point
/// ponderation at `θ_f (θ_f / θ0)^λ`).
pub fn param_distribution_weighted<R: Real>(
    family: &FamilyDescriptor<R>,
    t: R,
    spec: &PonderationSpec<R>,
) -> Result<ParamDistribution<R>> {
    family.validate()?;
    family.check_observation(t)?;
    let PonderationSpec { median, pull, spread } = *spec;
    if !(pull >= R::zero()) || !pull.is_finite() {
        return Err(Error::domain(format!("pull must be finite and nonnegative, got {pull}")));
    }
    if !(spread >= R::zero()) || !spread.is_finite() || !median.is_finite() {
        return Err(Error::domain("median and spread must be finite, spread nonnegative"));
    }
    match *family {
        FamilyDescriptor::NormalLocation { a } => {
            let k = R::one() + pull;
            let mean = (t + pull * median) / k;
            let sd = (a * a + spread * spread).sqrt() / k;
            Ok(ParamDistribution::continuous(Law::Normal { mean, sd }))
        }
        FamilyDescriptor::GammaScale { p } => {
            if spread != R::zero() {
                return Err(Error::domain("scale ponderations use a point mass, so spread must be 0"));
            }
            if !(median > R::zero()) {
                return Err(Error::domain(format!("scale median must be positive, got {median}")));
            }
            Ok(ParamDistribution::continuous(Law::PowerInverseGamma {
                shape: p,
                scale: t * median.powf(pull),
                power: R::one() + pull,
            }))
        }
        _ => Err(Error::UnsupportedFamily(family.tag().to_string())),
    }
}

/// Vote between `Θ0 = [θ1, θ2]` and its complement, read off the extended
/// probability; `p_decide_0` is the mass of `[θ1, θ2]`.
pub fn bilateral_vote<R: Real>(family: &FamilyDescriptor<R>, t: R, theta1: R, theta2: R) -> Result<VoteResult<R>> {
    if theta1.is_nan() || theta2.is_nan() || theta1 > theta2 {
        return Err(Error::domain(format!("bilateral bounds must satisfy θ1 ≤ θ2, got [{theta1}, {theta2}]")));
    }
    family.check_theta(theta1)?;
    family.check_theta(theta2)?;
    let dist = param_distribution(family, t)?;
    let p0 = dist.interval_prob(&Interval::closed(theta1, theta2)?)?;
    Ok(VoteResult { p_decide_1: (R::one() - p0).clamp_unit() })
}

/// Probability of an interval under a parameter distribution.
pub fn interval_prob<R: Real>(dist: &ParamDistribution<R>, interval: &Interval<R>) -> Result<R> {
    dist.interval_prob(interval)
}
