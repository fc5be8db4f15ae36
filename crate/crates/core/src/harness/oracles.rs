//! Reference computations that avoid the closed forms under test: direct sums,
//! adaptive quadrature and Monte Carlo.

use rand::Rng;
use rand_distr::{Beta, Binomial, Distribution, Poisson, StandardNormal};

use crate::compatible::FamilyDescriptor;
use crate::ghost::{AnovaSummary, StudentSummary, TwoBinomialSummary};
use crate::numerics::quadrature::{integrate, integrate_to_infinity};
use crate::numerics::{ln_gamma, normal_cdf};

const QUAD_TOL: f64 = 1e-13;

/// `E f(X)` for `X ~ gamma(shape, rate)`.
///
/// The unit interval uses `g = s^(1 / shape)` so the integrand stays bounded
/// for small shapes.
pub fn gamma_expectation<F: Fn(f64) -> f64>(f: F, shape: f64, rate: f64) -> f64 {
    let lg = ln_gamma(shape);
    let head = integrate(
        |s: f64| {
            let g = s.powf(1.0 / shape);
            f(g / rate) * (-g).exp()
        },
        0.0,
        1.0,
        QUAD_TOL,
    ) / (lg + shape.ln()).exp();
    let tail = integrate_to_infinity(
        |g: f64| f(g / rate) * ((shape - 1.0) * g.ln() - g - lg).exp(),
        1.0,
        QUAD_TOL,
    );
    head + tail
}

/// `P(μ ≤ μ0)` by averaging the known-variance vote over the posterior law of the precision.
pub fn student_vote_oracle(s: &StudentSummary<f64>) -> f64 {
    let n = s.n as f64;
    let shape = (n - 1.0) / 2.0;
    let rate = (n - 1.0) * s.variance / 2.0;
    gamma_expectation(|lambda| normal_cdf((n * lambda).sqrt() * (s.mu0 - s.mean)), shape, rate)
}

/// Shifted log-Poisson weights `ln P(M = m)` for `m ≤ cap`.
fn poisson_log_weights(mean: f64, cap: usize) -> Vec<f64> {
    (0..=cap)
        .map(|m| {
            if mean == 0.0 {
                if m == 0 { 0.0 } else { f64::NEG_INFINITY }
            } else {
                -mean + m as f64 * mean.ln() - ln_gamma(m as f64 + 1.0)
            }
        })
        .collect()
}

fn poisson_cap(mean: f64) -> usize {
    (mean + 15.0 * mean.sqrt() + 40.0).ceil() as usize
}

/// `Q^(t,u)([0, θ1])` by nested quadrature: the noncentral gamma density of
/// `T` is integrated over `[0, t]`, and the result is averaged over the gamma
/// law of `u / υ`.
pub fn anova_vote_oracle(s: &AnovaSummary<f64>) -> f64 {
    let AnovaSummary { p, q, t, u, theta1 } = *s;
    if t == 0.0 {
        return 1.0;
    }
    let max_cap = 4_000;
    let ln_gamma_pm: Vec<f64> = (0..=max_cap).map(|m| ln_gamma(p + m as f64)).collect();
    // P(T ≤ t) given υ = u / λ, with x = t s^(1/p) absorbing the x^(p-1) factor.
    let cdf_t = |lambda: f64| -> f64 {
        let upsilon = u / lambda;
        let mean = theta1 / upsilon;
        let cap = poisson_cap(mean).min(max_cap);
        let logw = poisson_log_weights(mean, cap);
        let y_top = t / upsilon;
        let front = p * y_top.ln() - p.ln();
        integrate(
            |s: f64| {
                let y = y_top * s.powf(1.0 / p);
                let ln_y = if y > 0.0 { y.ln() } else { f64::NEG_INFINITY };
                let mut total = 0.0;
                for m in 0..=cap {
                    if logw[m] == f64::NEG_INFINITY {
                        continue;
                    }
                    let power = if m == 0 { 0.0 } else { m as f64 * ln_y };
                    total += (logw[m] + power - y - ln_gamma_pm[m] + front).exp();
                }
                total
            },
            0.0,
            1.0,
            1e-12,
        )
    };
    1.0 - gamma_expectation(cdf_t, q, 1.0)
}

/// `Q([0, θ]) = 1 - G_θ(t)` for the noncentral beta-prime family by quadrature of its density.
pub fn noncentral_beta_vote_oracle(p: f64, q: f64, theta: f64, t: f64) -> f64 {
    if t == 0.0 {
        return 1.0;
    }
    let cap = poisson_cap(theta);
    let logw = poisson_log_weights(theta, cap);
    let ln_b: Vec<f64> = (0..=cap)
        .map(|m| ln_gamma(p + m as f64) + ln_gamma(q) - ln_gamma(p + q + m as f64))
        .collect();
    let front = p * t.ln() - p.ln();
    let g = integrate(
        |s: f64| {
            let x = t * s.powf(1.0 / p);
            let ln_x = if x > 0.0 { x.ln() } else { f64::NEG_INFINITY };
            let ln_1x = x.ln_1p();
            let mut total = 0.0;
            for m in 0..=cap {
                if logw[m] == f64::NEG_INFINITY {
                    continue;
                }
                let power = if m == 0 { 0.0 } else { m as f64 * ln_x };
                total += (logw[m] + power - (p + q + m as f64) * ln_1x - ln_b[m] + front).exp();
            }
            total
        },
        0.0,
        1.0,
        QUAD_TOL,
    );
    1.0 - g
}

/// Poisson probabilities `P(X = 0..=k)` by the product recurrence.
fn poisson_pmfs(k: u64, rate: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(k as usize + 1);
    let mut term = (-rate).exp();
    for i in 0..=k {
        out.push(term);
        term *= rate / (i + 1) as f64;
    }
    out
}

/// `G_θ(t)` of a Poisson count with mean `rate`, by direct summation.
pub fn poisson_mid_cdf_oracle(t: u64, rate: f64) -> f64 {
    let pmf = poisson_pmfs(t, rate);
    pmf[..t as usize].iter().sum::<f64>() + 0.5 * pmf[t as usize]
}

/// Binomial probabilities `C(n, i) θ^i (1 - θ)^(n - i)`.
fn binomial_pmfs(n: u64, theta: f64) -> Vec<f64> {
    let mut choose = 1.0;
    (0..=n)
        .map(|i| {
            if i > 0 {
                choose = choose * (n - i + 1) as f64 / i as f64;
            }
            choose * theta.powi(i as i32) * (1.0 - theta).powi((n - i) as i32)
        })
        .collect()
}

/// `G_θ(ω)` of a binomial count, by direct summation.
pub fn binomial_mid_cdf_oracle(n: u64, omega: u64, theta: f64) -> f64 {
    let pmf = binomial_pmfs(n, theta);
    pmf[..omega as usize].iter().sum::<f64>() + 0.5 * pmf[omega as usize]
}

/// Monte Carlo mean and standard error of a sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
}

impl Estimate {
    fn from_sums(sum: f64, sum_sq: f64, draws: usize) -> Self {
        let n = draws as f64;
        let mean = sum / n;
        let var = (sum_sq / n - mean * mean).max(0.0) * n / (n - 1.0);
        Estimate { mean, std_error: (var / n).sqrt() }
    }

    /// `|mean - target|` in standard errors; exact agreement with zero spread gives 0.
    pub fn z_score(&self, target: f64) -> f64 {
        let gap = (self.mean - target).abs();
        if gap == 0.0 {
            0.0
        } else if self.std_error == 0.0 {
            f64::INFINITY
        } else {
            gap / self.std_error
        }
    }
}

/// Monte Carlo estimate of `E_θ[Q_θ({1})] = E_θ[1 - G_θ(T)]` for a family.
///
/// Supported for the normal-location, Poisson and binomial families.
pub fn vote_mean_monte_carlo<R: Rng>(family: &FamilyDescriptor<f64>, theta: f64, draws: usize, rng: &mut R) -> Estimate {
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..draws {
        let t = match *family {
            FamilyDescriptor::NormalLocation { a } => {
                let z: f64 = StandardNormal.sample(rng);
                theta + a * z
            }
            FamilyDescriptor::Poisson { n } => Poisson::new(n as f64 * theta).expect("positive rate").sample(rng),
            FamilyDescriptor::Binomial { n } => Binomial::new(n, theta).expect("valid proportion").sample(rng) as f64,
            _ => panic!("Monte Carlo sampling is not provided for {}", family.tag()),
        };
        let v = 1.0 - family.mid_cdf(theta, t).expect("sampled statistic is in range");
        sum += v;
        sum_sq += v * v;
    }
    Estimate::from_sums(sum, sum_sq, draws)
}

fn sample_binomial_parameter<R: Rng>(n: u64, x: u64, rng: &mut R) -> f64 {
    let upper = rng.random_bool(0.5);
    if upper {
        if x == n { 1.0 } else { Beta::new((x + 1) as f64, (n - x) as f64).expect("positive shapes").sample(rng) }
    } else if x == 0 {
        0.0
    } else {
        Beta::new(x as f64, (n + 1 - x) as f64).expect("positive shapes").sample(rng)
    }
}

/// Monte Carlo estimate of `P(p1 ≤ p2)` for the two binomial parameter distributions.
pub fn two_binomial_monte_carlo<R: Rng>(s: &TwoBinomialSummary, draws: usize, rng: &mut R) -> Estimate {
    let mut hits = 0usize;
    for _ in 0..draws {
        let p1 = sample_binomial_parameter(s.n1, s.x1, rng);
        let p2 = sample_binomial_parameter(s.n2, s.x2, rng);
        if p1 <= p2 {
            hits += 1;
        }
    }
    Estimate::from_sums(hits as f64, hits as f64, draws)
}

/// Largest abstention improvement that any grid rule achieves over the given
/// abstention probabilities while meeting both risk bounds.
///
/// Rules assign to each ratio class decision probabilities `(a / grid, b / grid)`
/// for decisions 0 and 1. `masses[c] = (P_0(class c), P_1(class c))`. A
/// positive result means some rule abstains strictly less under `θ = 0` or
/// `θ = 1` than the reference.
pub fn abstention_improvement(masses: &[(f64, f64)], alpha0: f64, alpha1: f64, abstain: (f64, f64), grid: u32) -> f64 {
    let options: Vec<(f64, f64)> = (0..=grid)
        .flat_map(|a| (0..=grid - a).map(move |b| (a as f64 / grid as f64, b as f64 / grid as f64)))
        .collect();
    let slack = 1e-12;
    let mut best = f64::NEG_INFINITY;
    // Depth-first enumeration with running sums (E1 p0, E0 p1, E0 decided, E1 decided).
    fn walk(
        c: usize,
        masses: &[(f64, f64)],
        options: &[(f64, f64)],
        acc: (f64, f64, f64, f64),
        limits: (f64, f64),
        abstain: (f64, f64),
        best: &mut f64,
    ) {
        if acc.0 > limits.1 || acc.1 > limits.0 {
            return;
        }
        if c == masses.len() {
            let gain = (abstain.0 - (1.0 - acc.2)).max(abstain.1 - (1.0 - acc.3));
            if gain > *best {
                *best = gain;
            }
            return;
        }
        let (m0, m1) = masses[c];
        for &(a, b) in options {
            let next = (acc.0 + m1 * a, acc.1 + m0 * b, acc.2 + m0 * (a + b), acc.3 + m1 * (a + b));
            walk(c + 1, masses, options, next, limits, abstain, best);
        }
    }
    walk(0, masses, &options, (0.0, 0.0, 0.0, 0.0), (alpha0 + slack, alpha1 + slack), abstain, &mut best);
    best
}
