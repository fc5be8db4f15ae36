//! Nuisance ("ghost") parameters: a second parameter `υ` that no hypothesis
//! fixes. The votes are averaged over a probability on `υ` read off a
//! companion statistic `U`.

use crate::compatible::{Law, ParamDistribution};
use crate::error::{Error, Result};
use crate::numerics::mixture::{negative_binomial_mixture, DEFAULT_TAIL_TOLERANCE};
use crate::numerics::special::beta_prime_pair;
use crate::numerics::student_cdf;
use crate::scalar::{Real, Scalar};
use crate::simple_choice::VoteResult;

/// Normal sample summary for inference on the mean with unknown variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudentSummary<R> {
    pub n: u64,
    /// Sample mean `x̄`.
    pub mean: R,
    /// Sample variance `s²` with divisor `n - 1`.
    pub variance: R,
    /// Frontier `μ0` between `Θ1 = ]-∞, μ0]` and `Θ0 = ]μ0, ∞[`.
    pub mu0: R,
}

/// Vote for `μ ≤ μ0` together with the probability on `μ` it extends to.
#[derive(Debug, Clone, PartialEq)]
pub struct StudentInference<R> {
    pub vote: VoteResult<R>,
    /// Student law with `n - 1` degrees of freedom, location `x̄`, scale `√(s² / n)`.
    pub distribution: ParamDistribution<R>,
}

/// Student inference on a normal mean.
///
/// `Q({0}) = F_{n-1}(√n (x̄ - μ0) / s)` and `Q({1})` is its complement, the
/// mass of `]-∞, μ0]` under the returned distribution.
pub fn student_vote<R: Real>(s: &StudentSummary<R>) -> Result<StudentInference<R>> {
    if s.n < 2 {
        return Err(Error::domain(format!("Student inference needs n ≥ 2, got {}", s.n)));
    }
    if !s.mean.is_finite() || !s.mu0.is_finite() || !s.variance.is_finite() || s.variance < R::zero() {
        return Err(Error::domain("mean, μ0 and variance must be finite, variance nonnegative"));
    }
    if s.variance == R::zero() {
        return Err(Error::ZeroVariance);
    }
    let n = R::n(s.n);
    let scale = (s.variance / n).sqrt();
    let q0 = student_cdf(s.n - 1, (s.mean - s.mu0) / scale)?;
    Ok(StudentInference {
        vote: VoteResult { p_decide_1: (R::one() - q0).clamp_unit() },
        distribution: ParamDistribution::continuous(Law::Student { df: s.n - 1, loc: s.mean, scale }),
    })
}

/// Summary of a noncentral gamma statistic `T` and an independent scale statistic `U`.
///
/// `T / υ` is gamma(p) with Poisson(θ / υ) noncentrality and `U / υ` is gamma(q).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnovaSummary<R> {
    pub p: R,
    pub q: R,
    pub t: R,
    pub u: R,
    /// Frontier `θ1` of `Θ1 = [0, θ1]`.
    pub theta1: R,
}

/// Vote `Q^(t,u)([0, θ1])` averaged over the scale parameter.
///
/// Evaluates `1 - Σ_m NB(m; q, u / (θ1 + u)) F(p + m, q + m, t / (θ1 + u))`, with
/// `F` the beta-prime CDF, until the unconsumed negative-binomial mass is below
/// the default tail tolerance.
pub fn anova_vote<R: Real>(s: &AnovaSummary<R>) -> Result<R> {
    let AnovaSummary { p, q, t, u, theta1 } = *s;
    let finite = [p, q, t, u, theta1].iter().all(|v| v.is_finite());
    if !finite || !(p > R::zero()) || !(q > R::zero()) || !(u > R::zero()) || t < R::zero() || theta1 < R::zero() {
        return Err(Error::domain("need p, q, u > 0 and t, θ1 ≥ 0, all finite"));
    }
    let scale = theta1 + u;
    let x = t / scale;
    let sum = negative_binomial_mixture(q, u / scale, R::c(DEFAULT_TAIL_TOLERANCE), |m| {
        let m = R::n(m);
        Ok(beta_prime_pair(p + m, q + m, x).0)
    })?;
    Ok((R::one() - sum.value).clamp_unit())
}

/// Two independent binomial counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TwoBinomialSummary {
    pub n1: u64,
    pub x1: u64,
    pub n2: u64,
    pub x2: u64,
}

/// Piece of the parameter distribution of a binomial proportion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Piece {
    Zero,
    One,
    /// Beta law with integer shapes.
    Beta(u64, u64),
}

fn binomial_pieces(n: u64, x: u64) -> [Piece; 2] {
    let lower = if x == 0 { Piece::Zero } else { Piece::Beta(x, n + 1 - x) };
    let upper = if x == n { Piece::One } else { Piece::Beta(x + 1, n - x) };
    [lower, upper]
}

/// `P(Beta(a, b) ≤ Beta(c, d))` for independent laws with integer shapes.
///
/// `P(X ≤ y) = P(Bin(a + b - 1, y) ≥ a)`, so averaging over `Y` gives the upper
/// tail at `a` of a beta-binomial law with `N = a + b - 1` trials.
fn beta_leq_beta<S: Scalar>(a: u64, b: u64, c: u64, d: u64) -> S {
    let n = a + b - 1;
    let sc = |k: u64| S::from_u64(k).expect("count fits the scalar type");
    let mut term = (0..n).fold(S::one(), |acc, j| acc * sc(d + j) / sc(c + d + j));
    let mut below = S::zero();
    for i in 0..a {
        below = below + term.clone();
        if i < n {
            term = term * sc(n - i) / sc(i + 1) * sc(c + i) / sc(d + n - i - 1);
        }
    }
    (S::one() - below).clamp_unit()
}

/// `P(A ≤ B)` for independent pieces, with point masses comparing with full mass on ties.
fn piece_leq<S: Scalar>(lhs: Piece, rhs: Piece) -> S {
    match (lhs, rhs) {
        (Piece::Zero, _) | (_, Piece::One) => S::one(),
        (Piece::One, _) | (_, Piece::Zero) => S::zero(),
        (Piece::Beta(a, b), Piece::Beta(c, d)) => beta_leq_beta(a, b, c, d),
    }
}

/// `P(p1 ≤ p2)` for independent proportions drawn from the parameter
/// distributions of the two binomial observations.
///
/// Each distribution is an equal mixture of two pieces, beta laws or point
/// masses at the edges. Coinciding point masses count as `p1 ≤ p2`.
pub fn two_binomial_vote<S: Scalar>(s: &TwoBinomialSummary) -> Result<S> {
    if s.n1 == 0 || s.n2 == 0 || s.x1 > s.n1 || s.x2 > s.n2 {
        return Err(Error::domain(format!(
            "need n ≥ 1 and 0 ≤ x ≤ n, got ({}, {}) and ({}, {})",
            s.x1, s.n1, s.x2, s.n2
        )));
    }
    let quarter = S::ratio(1, 4);
    let mut total = S::zero();
    for a in binomial_pieces(s.n1, s.x1) {
        for b in binomial_pieces(s.n2, s.x2) {
            total = total + quarter.clone() * piece_leq::<S>(a, b);
        }
    }
    Ok(total.clamp_unit())
}

/// Support point of a model with two statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoAxisOutcome<S> {
    pub label: String,
    pub t: S,
    pub u: S,
    pub weight: S,
}

/// Finite model indexed by an interest parameter `θ` and a ghost parameter `υ`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoAxisModel<S> {
    pub outcomes: Vec<TwoAxisOutcome<S>>,
    pub thetas: Vec<String>,
    /// Ghost parameter labels in increasing order.
    pub upsilons: Vec<String>,
    /// `density[θ][υ][ω]`.
    pub density: Vec<Vec<Vec<S>>>,
}

impl<S: Scalar> TwoAxisModel<S> {
    /// Two independent binomial counts with `T = x1` and `U = x1 + x2`.
    ///
    /// The interest parameter is the odds ratio `r` of the first proportion to
    /// the second and the ghost parameter is the second proportion `p2`, so
    /// `p1 = r o / (1 + r o)` with `o = p2 / (1 - p2)`.
    pub fn two_binomial(n1: u64, n2: u64, odds_ratios: &[S], p2s: &[S]) -> Result<Self> {
        if odds_ratios.iter().any(|r| !(r > &S::zero())) || p2s.iter().any(|p| !(p > &S::zero() && p < &S::one())) {
            return Err(Error::domain("odds ratios must be positive and proportions inside (0, 1)"));
        }
        let binom = |n: u64, k: u64, p: &S| {
            let c = (0..k).fold(S::one(), |acc, j| {
                acc * S::from_u64(n - j).expect("fits") / S::from_u64(j + 1).expect("fits")
            });
            let q = S::one() - p.clone();
            let mut v = c;
            for _ in 0..k {
                v = v * p.clone();
            }
            for _ in k..n {
                v = v * q.clone();
            }
            v
        };
        let mut outcomes = Vec::new();
        for x1 in 0..=n1 {
            for x2 in 0..=n2 {
                outcomes.push(TwoAxisOutcome {
                    label: format!("{x1},{x2}"),
                    t: S::from_u64(x1).expect("fits"),
                    u: S::from_u64(x1 + x2).expect("fits"),
                    weight: S::one(),
                });
            }
        }
        let density = odds_ratios
            .iter()
            .map(|r| {
                p2s.iter()
                    .map(|p2| {
                        let o = p2.clone() / (S::one() - p2.clone());
                        let p1 = r.clone() * o.clone() / (S::one() + r.clone() * o);
                        let mut row = Vec::new();
                        for x1 in 0..=n1 {
                            for x2 in 0..=n2 {
                                row.push(binom(n1, x1, &p1) * binom(n2, x2, p2));
                            }
                        }
                        row
                    })
                    .collect()
            })
            .collect();
        Ok(TwoAxisModel {
            outcomes,
            thetas: odds_ratios.iter().map(|r| r.to_string()).collect(),
            upsilons: p2s.iter().map(|p| p.to_string()).collect(),
            density,
        })
    }
}

/// First witness against conditional expertisability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExpertisabilityViolation {
    /// The conditional law of `U` given `T = t` differs between `θ` and `θ'` at `υ`.
    ThetaDependent { t: String, theta: String, theta_other: String, upsilon: String },
    /// The conditional law of `U` given `T = t` is not MLR in `υ`.
    NotMonotone { t: String, upsilon_lower: String, upsilon_upper: String, u_left: String, u_right: String },
}

/// Outcome of [`ghost_expertisable_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpertisabilityReport {
    pub expertisable: bool,
    pub violation: Option<ExpertisabilityViolation>,
}

fn leq_cross<S: Scalar>(a: &S, b: &S, c: &S, d: &S) -> bool {
    // a / b <= c / d for nonnegative values with positive b, d.
    let lhs = a.clone() * d.clone();
    let rhs = c.clone() * b.clone();
    lhs <= rhs || lhs.approx_eq(&rhs)
}

/// Checks that the conditional law of `U` given `T` is free of `θ` and has a
/// likelihood ratio nondecreasing in `u` for increasing `υ`.
pub fn ghost_expertisable_check<S: Scalar>(model: &TwoAxisModel<S>) -> Result<ExpertisabilityReport> {
    let n = model.outcomes.len();
    if model.density.len() != model.thetas.len()
        || model.density.iter().any(|rows| {
            rows.len() != model.upsilons.len() || rows.iter().any(|r| r.len() != n)
        })
    {
        return Err(Error::invalid("density must be indexed by θ, then υ, then outcome"));
    }
    let mut t_levels: Vec<S> = Vec::new();
    let mut u_levels: Vec<S> = Vec::new();
    for o in &model.outcomes {
        if !t_levels.contains(&o.t) {
            t_levels.push(o.t.clone());
        }
        if !u_levels.contains(&o.u) {
            u_levels.push(o.u.clone());
        }
    }
    let by_value = |a: &S, b: &S| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal);
    t_levels.sort_by(by_value);
    u_levels.sort_by(by_value);
    // joint[θ][υ][t][u] = P(T = t, U = u).
    let joint: Vec<Vec<Vec<Vec<S>>>> = model
        .density
        .iter()
        .map(|rows| {
            rows.iter()
                .map(|row| {
                    let mut grid = vec![vec![S::zero(); u_levels.len()]; t_levels.len()];
                    for (o, d) in model.outcomes.iter().zip(row) {
                        let ti = t_levels.iter().position(|t| *t == o.t).expect("level");
                        let ui = u_levels.iter().position(|u| *u == o.u).expect("level");
                        grid[ti][ui] = grid[ti][ui].clone() + d.clone() * o.weight.clone();
                    }
                    grid
                })
                .collect()
        })
        .collect();
    let total = |v: &[S]| v.iter().fold(S::zero(), |acc, x| acc + x.clone());

    for (ui, upsilon) in model.upsilons.iter().enumerate() {
        for (ti, t) in t_levels.iter().enumerate() {
            let reference = (0..model.thetas.len()).find(|&th| !total(&joint[th][ui][ti]).is_zero());
            let Some(r) = reference else { continue };
            let base = &joint[r][ui][ti];
            let base_total = total(base);
            for th in r + 1..model.thetas.len() {
                let row = &joint[th][ui][ti];
                let row_total = total(row);
                if row_total.is_zero() {
                    continue;
                }
                let same = base
                    .iter()
                    .zip(row)
                    .all(|(a, b)| (a.clone() * row_total.clone()).approx_eq(&(b.clone() * base_total.clone())));
                if !same {
                    return Ok(ExpertisabilityReport {
                        expertisable: false,
                        violation: Some(ExpertisabilityViolation::ThetaDependent {
                            t: t.to_string(),
                            theta: model.thetas[r].clone(),
                            theta_other: model.thetas[th].clone(),
                            upsilon: upsilon.clone(),
                        }),
                    });
                }
            }
        }
    }

    for ti in 0..t_levels.len() {
        for a in 0..model.upsilons.len() {
            for b in a + 1..model.upsilons.len() {
                let theta = (0..model.thetas.len())
                    .find(|&th| !total(&joint[th][a][ti]).is_zero() && !total(&joint[th][b][ti]).is_zero());
                let Some(th) = theta else { continue };
                let (lo, hi) = (&joint[th][a][ti], &joint[th][b][ti]);
                let mut prev: Option<usize> = None;
                for ui in 0..u_levels.len() {
                    if lo[ui].is_zero() && hi[ui].is_zero() {
                        continue;
                    }
                    if let Some(p) = prev {
                        // hi[p] / lo[p] <= hi[ui] / lo[ui], with x / 0 = ∞.
                        let ok = if lo[p].is_zero() {
                            lo[ui].is_zero()
                        } else if lo[ui].is_zero() {
                            true
                        } else {
                            leq_cross(&hi[p], &lo[p], &hi[ui], &lo[ui])
                        };
                        if !ok {
                            return Ok(ExpertisabilityReport {
                                expertisable: false,
                                violation: Some(ExpertisabilityViolation::NotMonotone {
                                    t: t_levels[ti].to_string(),
                                    upsilon_lower: model.upsilons[a].clone(),
                                    upsilon_upper: model.upsilons[b].clone(),
                                    u_left: u_levels[p].to_string(),
                                    u_right: u_levels[ui].to_string(),
                                }),
                            });
                        }
                    }
                    prev = Some(ui);
                }
            }
        }
    }
    Ok(ExpertisabilityReport { expertisable: true, violation: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::rational::BigRational;

    type Q = BigRational;

    fn summary(n1: u64, x1: u64, n2: u64, x2: u64) -> TwoBinomialSummary {
        TwoBinomialSummary { n1, x1, n2, x2 }
    }

    #[test]
    fn student_symmetric_and_df3() {
        let s = StudentSummary { n: 5, mean: 1.2, variance: 2.0, mu0: 1.2 };
        let r = student_vote(&s).unwrap();
        assert!((r.vote.p_decide_1 - 0.5f64).abs() < 1e-15);
        // √4 (x̄ - μ0) / s = 1 with s = 2.
        let s = StudentSummary { n: 4, mean: 1.0, variance: 4.0, mu0: 0.0 };
        let r = student_vote(&s).unwrap();
        let oracle = 0.5 + (1.0f64 / 3f64.sqrt()).atan() / std::f64::consts::PI
            + 3f64.sqrt() / (4.0 * std::f64::consts::PI);
        assert!((r.vote.p_decide_0() - oracle).abs() < 1e-13);
        assert!((r.vote.p_decide_0() - 0.804_499).abs() < 1e-6);
        assert!(matches!(student_vote(&StudentSummary { variance: 0.0, ..s }), Err(Error::ZeroVariance)));
    }

    #[test]
    fn anova_closed_forms() {
        let s = AnovaSummary { p: 1.0, q: 1.0, t: 3.0, u: 2.0, theta1: 0.0 };
        assert!((anova_vote(&s).unwrap() - 2.0f64 / 5.0).abs() < 1e-14);
        let s = AnovaSummary { p: 2.5f64, q: 0.5, t: 1.7, u: 0.8, theta1: 0.0 };
        let oracle = 1.0 - crate::numerics::beta_prime_cdf(2.5, 0.5, 1.7 / 0.8).unwrap();
        assert!((anova_vote(&s).unwrap() - oracle).abs() < 1e-12);
    }

    #[test]
    fn anova_tends_to_one() {
        let mut last = 0.0;
        for theta1 in [0.0, 1.0, 10.0, 100.0, 1000.0] {
            let v = anova_vote(&AnovaSummary { p: 1.5, q: 2.0, t: 4.0, u: 3.0, theta1 }).unwrap();
            assert!(v >= last);
            last = v;
        }
        assert!(last > 0.999);
    }

    #[test]
    fn two_binomial_exact_values() {
        assert_eq!(two_binomial_vote::<Q>(&summary(1, 0, 1, 1)).unwrap(), Q::ratio(7, 8));
        assert_eq!(two_binomial_vote::<Q>(&summary(5, 2, 5, 2)).unwrap(), Q::ratio(1, 2));
        // P(Beta(1, 1) ≤ Beta(2, 1)) = 2/3.
        assert_eq!(beta_leq_beta::<Q>(1, 1, 2, 1), Q::ratio(2, 3));
        assert_eq!(beta_leq_beta::<Q>(2, 3, 2, 3), Q::ratio(1, 2));
        assert!(two_binomial_vote::<f64>(&summary(3, 4, 2, 1)).is_err());
    }

    #[test]
    fn two_binomial_complement_identity() {
        for (n1, x1, n2, x2) in [(5, 2, 7, 3), (4, 1, 6, 5), (10, 3, 8, 4)] {
            let v = two_binomial_vote::<Q>(&summary(n1, x1, n2, x2)).unwrap();
            let flipped = two_binomial_vote::<Q>(&summary(n1, n1 - x1, n2, n2 - x2)).unwrap();
            assert_eq!(flipped, Q::ratio(1, 1) - v);
        }
    }

    #[test]
    fn two_binomial_grid_is_expertisable() {
        let m = TwoAxisModel::two_binomial(
            2,
            3,
            &[Q::ratio(1, 2), Q::ratio(1, 1), Q::ratio(3, 1)],
            &[Q::ratio(1, 5), Q::ratio(1, 2), Q::ratio(2, 3)],
        )
        .unwrap();
        let report = ghost_expertisable_check(&m).unwrap();
        assert!(report.expertisable, "{report:?}");
    }

    #[test]
    fn theta_dependent_conditional_is_flagged() {
        // T and U both carry θ: U = T + Bernoulli(θ-dependent).
        let outcomes = vec![
            TwoAxisOutcome { label: "a".into(), t: Q::ratio(0, 1), u: Q::ratio(0, 1), weight: Q::ratio(1, 1) },
            TwoAxisOutcome { label: "b".into(), t: Q::ratio(0, 1), u: Q::ratio(1, 1), weight: Q::ratio(1, 1) },
        ];
        let m = TwoAxisModel {
            outcomes,
            thetas: vec!["lo".into(), "hi".into()],
            upsilons: vec!["v".into()],
            density: vec![vec![vec![Q::ratio(1, 2), Q::ratio(1, 2)]], vec![vec![Q::ratio(1, 4), Q::ratio(3, 4)]]],
        };
        let report = ghost_expertisable_check(&m).unwrap();
        assert_eq!(
            report.violation,
            Some(ExpertisabilityViolation::ThetaDependent {
                t: "0".into(),
                theta: "lo".into(),
                theta_other: "hi".into(),
                upsilon: "v".into()
            })
        );
    }
}
