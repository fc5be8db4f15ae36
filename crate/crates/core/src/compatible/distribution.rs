//! Probability distributions on the parameter line.

use crate::error::{Error, Result};
use crate::numerics::invert_cdf;
use crate::numerics::mixture::{poisson_mixture_cdf, MixtureSeriesSpec};
use crate::numerics::special::{beta_pair, beta_prime_pair, gamma_pq, ln_beta, ln_gamma, normal_cdf, normal_pdf};
use crate::numerics::{student_cdf, student_pdf};
use crate::scalar::Real;

const MAX_EXPANSIONS: usize = 2_000;

/// Interval of the parameter line with open or closed ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval<R> {
    pub lo: R,
    pub hi: R,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl<R: Real> Interval<R> {
    /// Validated interval; infinite ends are always treated as open.
    pub fn new(lo: R, hi: R, lo_closed: bool, hi_closed: bool) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() {
            return Err(Error::MalformedInterval("an end point is not a number".to_string()));
        }
        if lo > hi {
            return Err(Error::MalformedInterval(format!("lower end {lo} exceeds upper end {hi}")));
        }
        Ok(Interval { lo, hi, lo_closed: lo_closed && lo.is_finite(), hi_closed: hi_closed && hi.is_finite() })
    }

    /// `[lo, hi]`.
    pub fn closed(lo: R, hi: R) -> Result<Self> {
        Self::new(lo, hi, true, true)
    }

    /// `]lo, hi[`.
    pub fn open(lo: R, hi: R) -> Result<Self> {
        Self::new(lo, hi, false, false)
    }

    /// `]-∞, x[` or `]-∞, x]`.
    pub fn below(x: R, closed: bool) -> Result<Self> {
        Self::new(R::neg_infinity(), x, false, closed)
    }

    /// The whole line.
    pub fn full() -> Self {
        Interval { lo: R::neg_infinity(), hi: R::infinity(), lo_closed: false, hi_closed: false }
    }

    /// The singleton `{x}`.
    pub fn point(x: R) -> Result<Self> {
        Self::closed(x, x)
    }
}

fn gamma_pdf<R: Real>(shape: R, x: R) -> R {
    if x <= R::zero() {
        return R::zero();
    }
    ((shape - R::one()) * x.ln() - x - ln_gamma(shape)).exp()
}

/// Absolutely continuous law on the parameter line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Law<R> {
    /// Normal with mean and standard deviation.
    Normal { mean: R, sd: R },
    /// Uniform on `[lo, hi]`.
    Uniform { lo: R, hi: R },
    /// Density `scale / x²` on `[scale, ∞)`.
    Pareto { scale: R },
    /// Law of a normal scale given `s = |x - m|`, with CDF `2Φ(-s / x)`.
    NormalScale { s: R },
    /// Law of `scale / X` with `X ~ gamma(shape, 1)`.
    InverseGamma { shape: R, scale: R },
    /// Law of `(scale / X)^(1 / power)` with `X ~ gamma(shape, 1)`.
    PowerInverseGamma { shape: R, scale: R, power: R },
    /// Gamma with shape and rate.
    Gamma { shape: R, rate: R },
    /// Beta on `[0, 1]`.
    Beta { a: R, b: R },
    /// Continuous part of the noncentrality law given a beta-prime observation `t`.
    ///
    /// Its CDF is `(Σ_m Poisson_x(m) [1 - F(p + m, q, t)] - atom) / (1 - atom)`
    /// with `atom = 1 - F(p, q, t)`.
    NoncentralBeta { p: R, q: R, t: R, atom: R },
    /// Student law with `df` degrees of freedom, location and scale.
    Student { df: u64, loc: R, scale: R },
}

impl<R: Real> Law<R> {
    /// Smallest closed interval containing the support.
    pub fn support(&self) -> (R, R) {
        let inf = R::infinity();
        match *self {
            Law::Normal { .. } | Law::Student { .. } => (R::neg_infinity(), inf),
            Law::Uniform { lo, hi } => (lo, hi),
            Law::Pareto { scale } => (scale, inf),
            Law::NormalScale { .. }
            | Law::InverseGamma { .. }
            | Law::PowerInverseGamma { .. }
            | Law::Gamma { .. }
            | Law::NoncentralBeta { .. } => (R::zero(), inf),
            Law::Beta { .. } => (R::zero(), R::one()),
        }
    }

    /// `P(X ≤ x)`.
    pub fn cdf(&self, x: R) -> R {
        if x.is_nan() {
            return x;
        }
        let (lo, hi) = self.support();
        if x <= lo && !(lo == R::neg_infinity()) {
            return R::zero();
        }
        if x >= hi {
            return R::one();
        }
        let value = match *self {
            Law::Normal { mean, sd } => normal_cdf((x - mean) / sd),
            Law::Uniform { lo, hi } => (x - lo) / (hi - lo),
            Law::Pareto { scale } => R::one() - scale / x,
            Law::NormalScale { s } => R::c(2.0) * normal_cdf(-s / x),
            Law::InverseGamma { shape, scale } => gamma_pq(shape, scale / x).1,
            Law::PowerInverseGamma { shape, scale, power } => gamma_pq(shape, scale * x.powf(-power)).1,
            Law::Gamma { shape, rate } => gamma_pq(shape, rate * x).0,
            Law::Beta { a, b } => beta_pair(a, b, x, R::one() - x).0,
            Law::NoncentralBeta { p, q, t, atom } => {
                let series = poisson_mixture_cdf(MixtureSeriesSpec::new(x), |m| {
                    Ok(beta_prime_pair(p + R::n(m), q, t).1)
                });
                match series {
                    Ok(sum) => (sum.value - atom) / (R::one() - atom),
                    Err(_) => R::nan(),
                }
            }
            Law::Student { df, loc, scale } => student_cdf(df, (x - loc) / scale).unwrap_or(R::nan()),
        };
        value.clamp_unit()
    }

    /// Density at `x`.
    pub fn density(&self, x: R) -> R {
        let (lo, hi) = self.support();
        if x.is_nan() || x < lo || x > hi {
            return R::zero();
        }
        match *self {
            Law::Normal { mean, sd } => normal_pdf((x - mean) / sd) / sd,
            Law::Uniform { lo, hi } => R::one() / (hi - lo),
            Law::Pareto { scale } => scale / (x * x),
            Law::NormalScale { s } => {
                if x <= R::zero() {
                    return R::zero();
                }
                R::c(2.0) * normal_pdf(s / x) * s / (x * x)
            }
            Law::InverseGamma { shape, scale } => {
                if x <= R::zero() {
                    return R::zero();
                }
                let y = scale / x;
                gamma_pdf(shape, y) * y / x
            }
            Law::PowerInverseGamma { shape, scale, power } => {
                if x <= R::zero() {
                    return R::zero();
                }
                let y = scale * x.powf(-power);
                gamma_pdf(shape, y) * power * y / x
            }
            Law::Gamma { shape, rate } => gamma_pdf(shape, rate * x) * rate,
            Law::Beta { a, b } => {
                if x <= R::zero() || x >= R::one() {
                    return R::zero();
                }
                ((a - R::one()) * x.ln() + (b - R::one()) * (R::one() - x).ln() - ln_beta(a, b)).exp()
            }
            Law::NoncentralBeta { p, q, t, atom } => {
                // d/dx Σ_m Poisson_x(m) h(m) = Σ_m Poisson_x(m) [h(m + 1) - h(m)].
                let series = poisson_mixture_cdf(MixtureSeriesSpec::new(x), |m| {
                    let here = beta_prime_pair(p + R::n(m), q, t).0;
                    let next = beta_prime_pair(p + R::n(m + 1), q, t).0;
                    Ok(here - next)
                });
                match series {
                    Ok(sum) => sum.value / (R::one() - atom),
                    Err(_) => R::nan(),
                }
            }
            Law::Student { df, loc, scale } => student_pdf(df, (x - loc) / scale) / scale,
        }
    }
}

/// Weighted absolutely continuous piece of a parameter distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Component<R> {
    pub weight: R,
    pub law: Law<R>,
}

/// Probability on the parameter line: point masses plus weighted continuous laws.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamDistribution<R> {
    atoms: Vec<(R, R)>,
    components: Vec<Component<R>>,
}

impl<R: Real> ParamDistribution<R> {
    /// Distribution from `(location, mass)` atoms and weighted laws; zero-weight pieces are dropped.
    pub fn new(atoms: Vec<(R, R)>, components: Vec<Component<R>>) -> Result<Self> {
        if atoms.iter().any(|(loc, m)| !loc.is_finite() || !(*m >= R::zero()))
            || components.iter().any(|c| !(c.weight >= R::zero()))
        {
            return Err(Error::domain("distribution pieces need finite locations and nonnegative masses"));
        }
        let total = atoms.iter().fold(R::zero(), |acc, a| acc + a.1)
            + components.iter().fold(R::zero(), |acc, c| acc + c.weight);
        if (total - R::one()).abs() > R::c(1e-10) {
            return Err(Error::domain(format!("distribution mass is {total}, expected 1")));
        }
        let atoms = atoms.into_iter().filter(|a| a.1 > R::zero()).collect();
        let components = components.into_iter().filter(|c| c.weight > R::zero()).collect();
        Ok(ParamDistribution { atoms, components })
    }

    /// Single continuous law.
    pub fn continuous(law: Law<R>) -> Self {
        ParamDistribution { atoms: Vec::new(), components: vec![Component { weight: R::one(), law }] }
    }

    pub fn atoms(&self) -> &[(R, R)] {
        &self.atoms
    }

    pub fn components(&self) -> &[Component<R>] {
        &self.components
    }

    /// Total mass, one up to rounding.
    pub fn total_mass(&self) -> R {
        self.atoms.iter().fold(R::zero(), |acc, a| acc + a.1) + self.components.iter().fold(R::zero(), |acc, c| acc + c.weight)
    }

    fn continuous_cdf(&self, x: R) -> R {
        self.components.iter().fold(R::zero(), |acc, c| acc + c.weight * c.law.cdf(x))
    }

    /// `P(θ ≤ x)`.
    pub fn cdf(&self, x: R) -> R {
        let atoms = self.atoms.iter().filter(|a| a.0 <= x).fold(R::zero(), |acc, a| acc + a.1);
        (self.continuous_cdf(x) + atoms).clamp_unit()
    }

    /// `P(θ < x)`.
    pub fn cdf_left(&self, x: R) -> R {
        let atoms = self.atoms.iter().filter(|a| a.0 < x).fold(R::zero(), |acc, a| acc + a.1);
        (self.continuous_cdf(x) + atoms).clamp_unit()
    }

    /// Density of the continuous part.
    pub fn density(&self, x: R) -> R {
        self.components.iter().fold(R::zero(), |acc, c| acc + c.weight * c.law.density(x))
    }

    /// Probability of an interval, honoring open and closed ends at atoms.
    pub fn interval_prob(&self, interval: &Interval<R>) -> Result<R> {
        let Interval { lo, hi, lo_closed, hi_closed } = *interval;
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::MalformedInterval(format!("[{lo}, {hi}]")));
        }
        let upper = if hi == R::infinity() {
            self.total_mass()
        } else if hi_closed {
            self.cdf(hi)
        } else {
            self.cdf_left(hi)
        };
        let below = if lo == R::neg_infinity() {
            R::zero()
        } else if lo_closed {
            self.cdf_left(lo)
        } else {
            self.cdf(lo)
        };
        Ok((upper - below).max(R::zero()).clamp_unit())
    }

    /// Smallest closed interval containing the support.
    pub fn support(&self) -> (R, R) {
        let mut lo = R::infinity();
        let mut hi = R::neg_infinity();
        for a in &self.atoms {
            lo = lo.min(a.0);
            hi = hi.max(a.0);
        }
        for c in &self.components {
            let (a, b) = c.law.support();
            lo = lo.min(a);
            hi = hi.max(b);
        }
        (lo, hi)
    }

    /// Generalized inverse `inf { x : P(θ ≤ x) ≥ p }`.
    pub fn quantile(&self, p: R) -> Result<R> {
        if !(p >= R::zero() && p <= R::one()) {
            return Err(Error::domain(format!("quantile level must lie in [0, 1], got {p}")));
        }
        let (slo, shi) = self.support();
        let cdf = |x: R| self.cdf(x);
        let mut lo = if slo.is_finite() { slo } else { -R::one() };
        if cdf(lo) >= p {
            if slo.is_finite() {
                return Ok(lo);
            }
            if p == R::zero() {
                return Ok(R::neg_infinity());
            }
            let mut width = R::one();
            let mut steps = 0;
            while cdf(lo) >= p {
                lo = lo - width;
                width = width + width;
                steps += 1;
                if steps > MAX_EXPANSIONS {
                    return Err(Error::IterationCap(MAX_EXPANSIONS));
                }
            }
        }
        let mut hi = if shi.is_finite() { shi } else { lo.max(R::zero()) + R::one() };
        let mut width = R::one().max(hi.abs());
        let mut steps = 0;
        while cdf(hi) < p {
            if hi.is_infinite() {
                return Ok(hi);
            }
            hi = hi + width;
            width = width + width;
            steps += 1;
            if steps > MAX_EXPANSIONS {
                return if p == R::one() { Ok(R::infinity()) } else { Err(Error::IterationCap(MAX_EXPANSIONS)) };
            }
        }
        invert_cdf(cdf, p, lo, hi)
    }
}
