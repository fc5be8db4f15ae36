//! Three-decision Bol'shev rules, the four-decision plebiscite rule and the
//! vote-divergence statistic on two-density models.
//!
//! Decisions are coded 0 (`θ = 0`), 1 (`θ = 1`), 2 (abstain: both plausible)
//! and, for the plebiscite rule only, 3 (conflict: neither plausible).

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::simple_choice::{check_unit, ExtRatio, Hypothesis, SimpleTest, TwoDensityModel};

/// Ordered pair of simple tests defining a three-decision rule.
///
/// At an outcome the rule answers 1 with the lower test's acceptance, 0 with
/// the complement of the upper test's acceptance, and 2 otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct BolshevRule<S> {
    pub lower: SimpleTest<S>,
    pub upper: SimpleTest<S>,
    /// Set when the optimal lower test exceeds the optimal upper test, in which
    /// case any test between them is optimal and a single one was selected.
    pub non_unique: bool,
}

/// Probability over the decisions `{0, 1, 2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TernaryDecisionDist<S> {
    pub p0: S,
    pub p1: S,
    pub p2: S,
}

/// Outcome of the plebiscite rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PlebisciteDecision {
    /// Only `θ = 0` keeps enough votes.
    Theta0,
    /// Only `θ = 1` keeps enough votes.
    Theta1,
    /// Both hypotheses keep enough votes.
    Abstain,
    /// Neither hypothesis keeps enough votes.
    Conflict,
}

impl PlebisciteDecision {
    /// Numeric code 0, 1, 2 or 3.
    pub fn code(self) -> u8 {
        match self {
            PlebisciteDecision::Theta0 => 0,
            PlebisciteDecision::Theta1 => 1,
            PlebisciteDecision::Abstain => 2,
            PlebisciteDecision::Conflict => 3,
        }
    }

    /// Name used in reports.
    pub fn label(self) -> &'static str {
        match self {
            PlebisciteDecision::Theta0 => "theta0",
            PlebisciteDecision::Theta1 => "theta1",
            PlebisciteDecision::Abstain => "abstain",
            PlebisciteDecision::Conflict => "conflict",
        }
    }
}

impl fmt::Display for PlebisciteDecision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.code(), self.label())
    }
}

/// Largest simple test with `E_0(φ) = target`, for `0 <= target <= 1 - P_0(Ω_∞)`.
///
/// Between two ratio classes the test is written in the `(k_next, 0)` form.
pub fn largest_test_with_mean0<S: Scalar>(model: &TwoDensityModel<S>, target: &S) -> SimpleTest<S> {
    let classes = model.ratio_classes();
    let mut cum = S::zero();
    let mut chosen = 0;
    let mut before = S::zero();
    for (j, c) in classes.iter().enumerate() {
        if cum <= *target {
            chosen = j;
            before = cum.clone();
        }
        cum = cum + c.mass0.clone();
    }
    let class = &classes[chosen];
    match &class.k {
        ExtRatio::Infinite => SimpleTest::largest(),
        k if k.is_zero() => SimpleTest::smallest(),
        k => {
            let beta = if class.mass0.is_zero() {
                S::zero()
            } else {
                ((target.clone() - before) / class.mass0.clone()).clamp_unit()
            };
            SimpleTest { k: k.clone(), beta }
        }
    }
}

/// Smallest simple test with `E_1(1 - φ) = target`, for `0 <= target <= 1 - P_1(Ω_0)`.
///
/// Between two ratio classes the test is written in the `(k_prev, 1)` form.
pub fn smallest_test_with_miss1<S: Scalar>(model: &TwoDensityModel<S>, target: &S) -> SimpleTest<S> {
    let classes = model.ratio_classes();
    let mut tail = S::zero();
    let mut tails = vec![S::zero(); classes.len()];
    for j in (0..classes.len()).rev() {
        tails[j] = tail.clone();
        tail = tail + classes[j].mass1.clone();
    }
    let chosen = tails.iter().position(|t| t <= target).unwrap_or(classes.len() - 1);
    let class = &classes[chosen];
    match &class.k {
        ExtRatio::Infinite => SimpleTest::largest(),
        k if k.is_zero() => SimpleTest::smallest(),
        k => {
            let beta = if class.mass1.is_zero() {
                S::one()
            } else {
                (S::one() - (target.clone() - tails[chosen].clone()) / class.mass1.clone()).clamp_unit()
            };
            SimpleTest { k: k.clone(), beta }
        }
    }
}

/// Compares two tests through their acceptance on every class of positive mass.
fn compare_as<S: Scalar>(model: &TwoDensityModel<S>, a: &SimpleTest<S>, b: &SimpleTest<S>) -> Ordering {
    for c in model.ratio_classes() {
        if c.mass0.is_zero() && c.mass1.is_zero() {
            continue;
        }
        match a.accept(&c.k).partial_cmp(&b.accept(&c.k)) {
            Some(Ordering::Equal) | None => continue,
            Some(other) => return other,
        }
    }
    Ordering::Equal
}

fn min_s<S: Scalar>(a: &S, b: S) -> S {
    if *a < b {
        a.clone()
    } else {
        b
    }
}

/// Optimal Bol'shev rule under the risk caps `R(0) <= α0` and `R(1) <= α1`.
///
/// The lower test is the largest test with `E_0(φ) = min(α0, 1 - P_0(Ω_∞))`,
/// the upper test the smallest with `E_1(1 - φ) = min(α1, 1 - P_1(Ω_0))`.
/// When the lower test exceeds the upper one, the returned rule uses a single
/// test, the one whose `E_0` is the midpoint of the two `E_0` values (the `E_1`
/// midpoint if those coincide), and is flagged non-unique.
pub fn bolshev_optimal<S: Scalar>(model: &TwoDensityModel<S>, alpha0: &S, alpha1: &S) -> Result<BolshevRule<S>> {
    check_unit(alpha0, "α0")?;
    check_unit(alpha1, "α1")?;
    let a0 = min_s(alpha0, S::one() - model.mass_at_infinity(Hypothesis::Theta0));
    let a1 = min_s(alpha1, S::one() - model.mass_at_zero(Hypothesis::Theta1));
    let lower = largest_test_with_mean0(model, &a0);
    let upper = smallest_test_with_miss1(model, &a1);
    if compare_as(model, &lower, &upper) != Ordering::Greater {
        return Ok(BolshevRule { lower, upper, non_unique: false });
    }
    let e_lo = model.expert_mean(&lower, Hypothesis::Theta0);
    let e_up = model.expert_mean(&upper, Hypothesis::Theta0);
    let mut test = if e_lo > e_up {
        largest_test_with_mean0(model, &(S::half() * (e_lo + e_up)))
    } else {
        let m_lo = S::one() - model.expert_mean(&lower, Hypothesis::Theta1);
        let m_up = S::one() - model.expert_mean(&upper, Hypothesis::Theta1);
        smallest_test_with_miss1(model, &(S::half() * (m_lo + m_up)))
    };
    if compare_as(model, &test, &upper) == Ordering::Less {
        test = upper.clone();
    }
    if compare_as(model, &test, &lower) == Ordering::Greater {
        test = lower.clone();
    }
    Ok(BolshevRule { lower: test.clone(), upper: test, non_unique: true })
}

impl<S: Scalar> BolshevRule<S> {
    /// Decision probabilities at support point `index`.
    pub fn apply_at(&self, model: &TwoDensityModel<S>, index: usize) -> TernaryDecisionDist<S> {
        let k = model.ratio_at(index);
        let lo = self.lower.accept(k);
        let up = self.upper.accept(k);
        let p2 = if up > lo { up.clone() - lo.clone() } else { S::zero() };
        TernaryDecisionDist { p0: S::one() - up, p1: lo, p2 }
    }

    /// Risk `R(0) = E_0 δ({1})` or `R(1) = E_1 δ({0})`.
    pub fn risk(&self, model: &TwoDensityModel<S>, theta: Hypothesis) -> S {
        match theta {
            Hypothesis::Theta0 => model.expert_mean(&self.lower, Hypothesis::Theta0),
            Hypothesis::Theta1 => S::one() - model.expert_mean(&self.upper, Hypothesis::Theta1),
        }
    }

    /// Abstention probability `E_θ δ({2})`.
    pub fn abstention(&self, model: &TwoDensityModel<S>, theta: Hypothesis) -> S {
        let d = model.expert_mean(&self.upper, theta) - model.expert_mean(&self.lower, theta);
        if d.is_negative() {
            S::zero()
        } else {
            d
        }
    }
}

/// Decision probabilities of a rule at an outcome.
pub fn bolshev_apply<S: Scalar>(
    rule: &BolshevRule<S>,
    model: &TwoDensityModel<S>,
    outcome: &str,
) -> Result<TernaryDecisionDist<S>> {
    Ok(rule.apply_at(model, model.outcome_index(outcome)?))
}

fn check_threshold<S: Scalar>(alpha: &S, name: &str) -> Result<()> {
    if alpha.is_negative() || *alpha >= S::one() {
        return Err(Error::Threshold(format!("{name} = {alpha}")));
    }
    Ok(())
}

/// Plebiscite decision at support point `index` with thresholds `α0, α1 < 1`.
pub fn plebiscite_at<S: Scalar>(
    model: &TwoDensityModel<S>,
    index: usize,
    alpha0: &S,
    alpha1: &S,
) -> Result<PlebisciteDecision> {
    check_threshold(alpha0, "α0")?;
    check_threshold(alpha1, "α1")?;
    let for0 = model.vote_simple_at(index, Hypothesis::Theta0).p_decide_0();
    let for1 = model.vote_simple_at(index, Hypothesis::Theta1).p_decide_1;
    Ok(match (for0 > *alpha0, for1 > *alpha1) {
        (true, false) => PlebisciteDecision::Theta0,
        (false, true) => PlebisciteDecision::Theta1,
        (true, true) => PlebisciteDecision::Abstain,
        (false, false) => PlebisciteDecision::Conflict,
    })
}

/// Plebiscite decision: `θ = 0` is kept when `Q_0({0}) > α0`, `θ = 1` when `Q_1({1}) > α1`.
pub fn plebiscite<S: Scalar>(
    model: &TwoDensityModel<S>,
    outcome: &str,
    alpha0: &S,
    alpha1: &S,
) -> Result<PlebisciteDecision> {
    plebiscite_at(model, model.outcome_index(outcome)?, alpha0, alpha1)
}

/// Vote divergence `G(ω) = Q_1({0}) - Q_0({1})` at support point `index`.
pub fn vote_divergence_at<S: Scalar>(model: &TwoDensityModel<S>, index: usize) -> S {
    model.vote_simple_at(index, Hypothesis::Theta1).p_decide_0()
        - model.vote_simple_at(index, Hypothesis::Theta0).p_decide_1
}

/// Vote divergence `G(ω) = Q_1({0}) - Q_0({1})` at an outcome.
pub fn vote_divergence<S: Scalar>(model: &TwoDensityModel<S>, outcome: &str) -> Result<S> {
    Ok(vote_divergence_at(model, model.outcome_index(outcome)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::rational::BigRational;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::ratio(n, d)
    }

    fn golden() -> TwoDensityModel<Q> {
        TwoDensityModel::from_columns(
            &["A", "B", "C"],
            &[q(1, 1), q(1, 1), q(1, 1)],
            &[q(1, 6), q(1, 3), q(1, 2)],
            &[q(1, 2), q(1, 3), q(1, 6)],
        )
        .unwrap()
    }

    #[test]
    fn optimal_rule_at_one_tenth() {
        let m = golden();
        let rule = bolshev_optimal(&m, &q(1, 10), &q(1, 10)).unwrap();
        assert_eq!(rule.lower, SimpleTest { k: ExtRatio::Finite(q(1, 3)), beta: q(3, 5) });
        assert_eq!(rule.upper, SimpleTest { k: ExtRatio::Finite(q(3, 1)), beta: q(2, 5) });
        assert!(!rule.non_unique);
        let a = bolshev_apply(&rule, &m, "A").unwrap();
        assert_eq!((a.p0, a.p1, a.p2), (q(0, 1), q(3, 5), q(2, 5)));
        let b = bolshev_apply(&rule, &m, "B").unwrap();
        assert_eq!((b.p0, b.p1, b.p2), (q(0, 1), q(0, 1), q(1, 1)));
        assert_eq!(rule.risk(&m, Hypothesis::Theta0), q(1, 10));
        assert_eq!(rule.risk(&m, Hypothesis::Theta1), q(1, 10));
    }

    #[test]
    fn overlapping_tests_are_flagged() {
        let m = golden();
        let lower = largest_test_with_mean0(&m, &q(3, 5));
        let upper = smallest_test_with_miss1(&m, &q(3, 5));
        assert_eq!(lower, SimpleTest { k: ExtRatio::Finite(q(3, 1)), beta: q(1, 5) });
        assert_eq!(upper, SimpleTest { k: ExtRatio::Finite(q(1, 3)), beta: q(4, 5) });
        let rule = bolshev_optimal(&m, &q(3, 5), &q(3, 5)).unwrap();
        assert!(rule.non_unique);
        // Midpoint of E0 = 2/15 and E0 = 3/5 is 11/30, reached by (1, 3/5).
        assert_eq!(rule.lower, SimpleTest { k: ExtRatio::Finite(q(1, 1)), beta: q(3, 5) });
        assert_eq!(rule.lower, rule.upper);
        for label in ["A", "B", "C"] {
            assert_eq!(bolshev_apply(&rule, &m, label).unwrap().p2, q(0, 1));
        }
    }

    #[test]
    fn zero_risk_forces_abstention() {
        let m = golden();
        let rule = bolshev_optimal(&m, &q(0, 1), &q(0, 1)).unwrap();
        for label in ["A", "B", "C"] {
            let d = bolshev_apply(&rule, &m, label).unwrap();
            assert_eq!(d.p2, q(1, 1));
        }
    }

    #[test]
    fn plebiscite_examples() {
        let m = golden();
        let d = |label: &str, a: Q| plebiscite(&m, label, &a, &a).unwrap();
        assert_eq!(d("A", q(3, 10)), PlebisciteDecision::Theta1);
        assert_eq!(d("B", q(3, 10)), PlebisciteDecision::Abstain);
        assert_eq!(d("B", q(2, 5)), PlebisciteDecision::Conflict);
        assert_eq!(d("C", q(3, 10)), PlebisciteDecision::Theta0);
        assert!(matches!(plebiscite(&m, "A", &q(1, 1), &q(1, 2)), Err(Error::Threshold(_))));
    }

    #[test]
    fn divergence_examples() {
        let m = golden();
        assert_eq!(vote_divergence(&m, "A").unwrap(), q(-2, 3));
        assert_eq!(vote_divergence(&m, "C").unwrap(), q(2, 3));
        assert_eq!(vote_divergence(&m.swapped(), "A").unwrap(), q(2, 3));
    }
}
