//! Choice between two fully specified probabilities on a finite support.
//!
//! Outcomes are grouped by the likelihood ratio `K = p0 / p1` (with `0/0`
//! mapped to `+∞`). Simple tests `φ(k, β) = 1{K < k} + β·1{K = k}` accept
//! decision 1; the vote at an outcome is the probability that a test drawn
//! through `P_θ` accepts decision 1 there.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Extended nonnegative ratio value: a finite number or `+∞`.
#[derive(Debug, Clone, PartialEq)]
pub enum ExtRatio<S> {
    Finite(S),
    Infinite,
}

impl<S: Scalar> ExtRatio<S> {
    /// Ratio `num / den` of two nonnegative masses with `0/0 = +∞`.
    pub fn of(num: &S, den: &S) -> Self {
        if den.is_zero() {
            ExtRatio::Infinite
        } else {
            ExtRatio::Finite(num.clone() / den.clone())
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtRatio::Finite(k) if k.is_zero())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtRatio::Infinite)
    }

    /// Equality up to the scalar tolerance.
    pub fn approx_eq(&self, other: &Self) -> bool {
        match (self, other) {
            (ExtRatio::Infinite, ExtRatio::Infinite) => true,
            (ExtRatio::Finite(a), ExtRatio::Finite(b)) => {
                if S::EXACT {
                    a == b
                } else {
                    let (x, y) = (a.to_f64(), b.to_f64());
                    (x - y).abs() <= S::tolerance() * x.abs().max(y.abs()).max(f64::MIN_POSITIVE)
                        || (x == 0.0 && y == 0.0)
                }
            }
            _ => false,
        }
    }

    /// Nearest `f64`, with `+∞` for the infinite value.
    pub fn to_f64(&self) -> f64 {
        match self {
            ExtRatio::Finite(k) => k.to_f64(),
            ExtRatio::Infinite => f64::INFINITY,
        }
    }
}

impl<S: Scalar> PartialOrd for ExtRatio<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (ExtRatio::Infinite, ExtRatio::Infinite) => Some(Ordering::Equal),
            (ExtRatio::Infinite, ExtRatio::Finite(_)) => Some(Ordering::Greater),
            (ExtRatio::Finite(_), ExtRatio::Infinite) => Some(Ordering::Less),
            (ExtRatio::Finite(a), ExtRatio::Finite(b)) => a.partial_cmp(b),
        }
    }
}

impl<S: Scalar> fmt::Display for ExtRatio<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRatio::Finite(k) => write!(f, "{k}"),
            ExtRatio::Infinite => write!(f, "inf"),
        }
    }
}

/// One of the two probabilities of the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Hypothesis {
    /// `θ = 0`, density `p0`.
    Theta0,
    /// `θ = 1`, density `p1`.
    Theta1,
}

impl Hypothesis {
    /// Decision label, `"θ=0"` or `"θ=1"`.
    pub fn label(self) -> &'static str {
        match self {
            Hypothesis::Theta0 => "θ=0",
            Hypothesis::Theta1 => "θ=1",
        }
    }
}

/// Probability over the decision set `{0, 1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct VoteResult<S> {
    /// Probability of decision 1; decision 0 receives the complement.
    pub p_decide_1: S,
}

impl<S: Scalar> VoteResult<S> {
    pub fn new(p_decide_1: S) -> Self {
        VoteResult { p_decide_1: p_decide_1.clamp_unit() }
    }

    /// Vote from the probability of decision 0.
    pub fn from_p0(p_decide_0: S) -> Self {
        Self::new(S::one() - p_decide_0)
    }

    pub fn p_decide_0(&self) -> S {
        S::one() - self.p_decide_1.clone()
    }
}

/// One support point of a two-density model.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome<S> {
    pub label: String,
    /// Base-measure mass of the point.
    pub weight: S,
    pub p0: S,
    pub p1: S,
}

impl<S: Scalar> Outcome<S> {
    pub fn mass(&self, theta: Hypothesis) -> S {
        let density = match theta {
            Hypothesis::Theta0 => &self.p0,
            Hypothesis::Theta1 => &self.p1,
        };
        self.weight.clone() * density.clone()
    }
}

/// Outcomes sharing one value of the likelihood ratio.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioClass<S> {
    pub k: ExtRatio<S>,
    /// Indices into the model support.
    pub members: Vec<usize>,
    /// `P0(K = k)`.
    pub mass0: S,
    /// `P1(K = k)`.
    pub mass1: S,
}

impl<S: Scalar> RatioClass<S> {
    pub fn mass(&self, theta: Hypothesis) -> &S {
        match theta {
            Hypothesis::Theta0 => &self.mass0,
            Hypothesis::Theta1 => &self.mass1,
        }
    }
}

/// Simple test `φ(k, β) = 1{K < k} + β·1{K = k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimpleTest<S> {
    pub k: ExtRatio<S>,
    pub beta: S,
}

impl<S: Scalar> SimpleTest<S> {
    /// Validated test; `k = 0` requires `β = 1` and `k = ∞` requires `β = 0`.
    pub fn new(k: ExtRatio<S>, beta: S) -> Result<Self> {
        if beta < S::zero() || beta > S::one() {
            return Err(Error::domain(format!("test randomization β = {beta} outside [0, 1]")));
        }
        if let ExtRatio::Finite(v) = &k {
            if v.is_negative() {
                return Err(Error::domain(format!("test threshold k = {v} is negative")));
            }
        }
        if k.is_zero() && !beta.is_one() {
            return Err(Error::domain("the test with k = 0 must have β = 1"));
        }
        if k.is_infinite() && !beta.is_zero() {
            return Err(Error::domain("the test with k = ∞ must have β = 0"));
        }
        Ok(SimpleTest { k, beta })
    }

    /// The smallest test, `φ(0, 1) = 1{K = 0}`.
    pub fn smallest() -> Self {
        SimpleTest { k: ExtRatio::Finite(S::zero()), beta: S::one() }
    }

    /// The largest test, `φ(∞, 0) = 1{K < ∞}`.
    pub fn largest() -> Self {
        SimpleTest { k: ExtRatio::Infinite, beta: S::zero() }
    }

    /// Acceptance probability of decision 1 at an outcome with ratio `k_outcome`.
    pub fn accept(&self, k_outcome: &ExtRatio<S>) -> S {
        match k_outcome.partial_cmp(&self.k) {
            Some(Ordering::Less) => S::one(),
            Some(Ordering::Equal) => self.beta.clone(),
            _ => S::zero(),
        }
    }

    /// Lexicographic order on `(k, β)`.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        self.k
            .partial_cmp(&other.k)
            .unwrap_or(Ordering::Equal)
            .then(self.beta.partial_cmp(&other.beta).unwrap_or(Ordering::Equal))
    }
}

impl<S: Scalar> fmt::Display for SimpleTest<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(k = {}, β = {})", self.k, self.beta)
    }
}

/// Finite-support model with two densities against a base measure.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoDensityModel<S> {
    outcomes: Vec<Outcome<S>>,
    classes: Vec<RatioClass<S>>,
    class_of: Vec<usize>,
}

fn check_total<S: Scalar>(total: &S, what: &str) -> Result<()> {
    if total.approx_eq(&S::one()) {
        Ok(())
    } else {
        Err(Error::invalid(format!("{what} integrates to {total}, expected 1")))
    }
}

impl<S: Scalar> TwoDensityModel<S> {
    /// Validates the model and precomputes its ratio classes.
    pub fn new(outcomes: Vec<Outcome<S>>) -> Result<Self> {
        if outcomes.is_empty() {
            return Err(Error::invalid("the support is empty"));
        }
        for (i, o) in outcomes.iter().enumerate() {
            if outcomes[..i].iter().any(|prev| prev.label == o.label) {
                return Err(Error::invalid(format!("duplicate outcome label `{}`", o.label)));
            }
            if !(o.weight > S::zero()) {
                return Err(Error::invalid(format!("outcome `{}` has nonpositive base weight", o.label)));
            }
            if o.p0.is_negative() || o.p1.is_negative() {
                return Err(Error::invalid(format!("outcome `{}` has a negative density", o.label)));
            }
        }
        let total0 = outcomes.iter().fold(S::zero(), |acc, o| acc + o.mass(Hypothesis::Theta0));
        let total1 = outcomes.iter().fold(S::zero(), |acc, o| acc + o.mass(Hypothesis::Theta1));
        check_total(&total0, "p0")?;
        check_total(&total1, "p1")?;

        let ratios: Vec<ExtRatio<S>> = outcomes.iter().map(|o| ExtRatio::of(&o.p0, &o.p1)).collect();
        let mut order: Vec<usize> = (0..outcomes.len()).collect();
        order.sort_by(|&a, &b| ratios[a].partial_cmp(&ratios[b]).unwrap_or(Ordering::Equal));

        let mut classes: Vec<RatioClass<S>> = Vec::new();
        let mut class_of = vec![0; outcomes.len()];
        for &i in &order {
            let joins = classes.last().is_some_and(|c| c.k.approx_eq(&ratios[i]));
            if !joins {
                classes.push(RatioClass {
                    k: ratios[i].clone(),
                    members: Vec::new(),
                    mass0: S::zero(),
                    mass1: S::zero(),
                });
            }
            let class = classes.last_mut().expect("class pushed above");
            class.members.push(i);
            class.mass0 = class.mass0.clone() + outcomes[i].mass(Hypothesis::Theta0);
            class.mass1 = class.mass1.clone() + outcomes[i].mass(Hypothesis::Theta1);
            class_of[i] = classes.len() - 1;
        }
        Ok(TwoDensityModel { outcomes, classes, class_of })
    }

    /// Builds a model from parallel label, weight and density lists.
    pub fn from_columns(labels: &[&str], weights: &[S], p0: &[S], p1: &[S]) -> Result<Self> {
        if labels.len() != weights.len() || labels.len() != p0.len() || labels.len() != p1.len() {
            return Err(Error::invalid("column lengths differ"));
        }
        let outcomes = labels
            .iter()
            .zip(weights)
            .zip(p0.iter().zip(p1))
            .map(|((l, w), (a, b))| Outcome {
                label: (*l).to_string(),
                weight: w.clone(),
                p0: a.clone(),
                p1: b.clone(),
            })
            .collect();
        Self::new(outcomes)
    }

    pub fn outcomes(&self) -> &[Outcome<S>] {
        &self.outcomes
    }

    /// Ratio classes sorted by `k` ascending, `+∞` last.
    pub fn ratio_classes(&self) -> &[RatioClass<S>] {
        &self.classes
    }

    /// Position of an outcome label in the support.
    pub fn outcome_index(&self, label: &str) -> Result<usize> {
        self.outcomes
            .iter()
            .position(|o| o.label == label)
            .ok_or_else(|| Error::UnknownOutcome(label.to_string()))
    }

    /// Index of the ratio class holding outcome `index`.
    pub fn class_of(&self, index: usize) -> usize {
        self.class_of[index]
    }

    /// Ratio value `K` at outcome `index`.
    pub fn ratio_at(&self, index: usize) -> &ExtRatio<S> {
        &self.classes[self.class_of[index]].k
    }

    /// The same model with the roles of `p0` and `p1` exchanged.
    pub fn swapped(&self) -> Self {
        let outcomes = self
            .outcomes
            .iter()
            .map(|o| Outcome { p0: o.p1.clone(), p1: o.p0.clone(), ..o.clone() })
            .collect();
        Self::new(outcomes).expect("swapping densities preserves validity")
    }

    /// Mean `E_θ(φ) = P_θ(K < k) + β·P_θ(K = k)` of a simple test.
    pub fn expert_mean(&self, test: &SimpleTest<S>, theta: Hypothesis) -> S {
        self.classes.iter().fold(S::zero(), |acc, c| acc + test.accept(&c.k) * c.mass(theta).clone())
    }

    /// Vote at support point `index`.
    pub fn vote_simple_at(&self, index: usize, theta: Hypothesis) -> VoteResult<S> {
        let j = self.class_of[index];
        let class = &self.classes[j];
        if class.k.is_zero() {
            return VoteResult::new(S::one());
        }
        if class.k.is_infinite() {
            return VoteResult::new(S::zero());
        }
        let above = self.classes[j + 1..].iter().fold(S::zero(), |acc, c| acc + c.mass(theta).clone());
        VoteResult::new(S::half() * class.mass(theta).clone() + above)
    }

    /// Vote `Q_θ` of the experts at an outcome.
    pub fn vote_simple(&self, outcome: &str, theta: Hypothesis) -> Result<VoteResult<S>> {
        Ok(self.vote_simple_at(self.outcome_index(outcome)?, theta))
    }

    /// Weighted vote `(1 - λ) Q_0 + λ Q_1` at support point `index`.
    pub fn vote_weighted_at(&self, index: usize, lambda: &S) -> Result<VoteResult<S>> {
        check_unit(lambda, "λ")?;
        let q0 = self.vote_simple_at(index, Hypothesis::Theta0).p_decide_1;
        let q1 = self.vote_simple_at(index, Hypothesis::Theta1).p_decide_1;
        Ok(VoteResult::new((S::one() - lambda.clone()) * q0 + lambda.clone() * q1))
    }

    /// Weighted vote `(1 - λ) Q_0 + λ Q_1` at an outcome.
    pub fn vote_weighted(&self, outcome: &str, lambda: &S) -> Result<VoteResult<S>> {
        self.vote_weighted_at(self.outcome_index(outcome)?, lambda)
    }

    /// Posterior probability of `θ = 1` under the prior `Λ({0}) = λ`.
    pub fn posterior_prob_1_at(&self, index: usize, lambda: &S) -> Result<S> {
        check_unit(lambda, "λ")?;
        Ok(match self.ratio_at(index) {
            ExtRatio::Infinite => S::zero(),
            ExtRatio::Finite(k) if k.is_zero() => S::one(),
            ExtRatio::Finite(k) => {
                let rest = S::one() - lambda.clone();
                (rest.clone() / (lambda.clone() * k.clone() + rest)).clamp_unit()
            }
        })
    }

    /// Posterior probability of `θ = 1` at an outcome under the prior `Λ({0}) = λ`.
    pub fn posterior_prob_1(&self, outcome: &str, lambda: &S) -> Result<S> {
        self.posterior_prob_1_at(self.outcome_index(outcome)?, lambda)
    }

    /// `P_θ(Ω_0)`, the mass of the class `K = 0`.
    pub fn mass_at_zero(&self, theta: Hypothesis) -> S {
        self.classes.iter().filter(|c| c.k.is_zero()).fold(S::zero(), |acc, c| acc + c.mass(theta).clone())
    }

    /// `P_θ(Ω_∞)`, the mass of the class `K = +∞`.
    pub fn mass_at_infinity(&self, theta: Hypothesis) -> S {
        self.classes
            .iter()
            .filter(|c| c.k.is_infinite())
            .fold(S::zero(), |acc, c| acc + c.mass(theta).clone())
    }
}

pub(crate) fn check_unit<S: Scalar>(value: &S, name: &str) -> Result<()> {
    if *value < S::zero() || *value > S::one() {
        Err(Error::domain(format!("{name} = {value} outside [0, 1]")))
    } else {
        Ok(())
    }
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
    fn golden_classes() {
        let m = golden();
        let ks: Vec<_> = m.ratio_classes().iter().map(|c| c.k.clone()).collect();
        assert_eq!(ks, vec![ExtRatio::Finite(q(1, 3)), ExtRatio::Finite(q(1, 1)), ExtRatio::Finite(q(3, 1))]);
        let masses: Vec<_> = m.ratio_classes().iter().map(|c| (c.mass0.clone(), c.mass1.clone())).collect();
        assert_eq!(masses, vec![(q(1, 6), q(1, 2)), (q(1, 3), q(1, 3)), (q(1, 2), q(1, 6))]);
    }

    #[test]
    fn expert_means() {
        let m = golden();
        assert_eq!(m.expert_mean(&SimpleTest::largest(), Hypothesis::Theta0), q(1, 1));
        assert_eq!(m.expert_mean(&SimpleTest::smallest(), Hypothesis::Theta1), q(0, 1));
        let t = SimpleTest::new(ExtRatio::Finite(q(1, 1)), q(1, 1)).unwrap();
        assert_eq!(m.expert_mean(&t, Hypothesis::Theta0), q(1, 2));
    }

    #[test]
    fn golden_votes() {
        let m = golden();
        assert_eq!(m.vote_simple("A", Hypothesis::Theta0).unwrap().p_decide_1, q(11, 12));
        assert_eq!(m.vote_simple("A", Hypothesis::Theta1).unwrap().p_decide_1, q(3, 4));
        assert_eq!(m.vote_simple("C", Hypothesis::Theta1).unwrap().p_decide_1, q(1, 12));
        assert_eq!(m.vote_weighted("B", &q(1, 2)).unwrap().p_decide_1, q(1, 2));
        assert_eq!(m.posterior_prob_1("C", &q(1, 2)).unwrap(), q(1, 4));
        assert!(matches!(m.vote_simple("Z", Hypothesis::Theta0), Err(Error::UnknownOutcome(_))));
    }

    #[test]
    fn degenerate_models() {
        let same = TwoDensityModel::from_columns(&["x", "y"], &[q(1, 1), q(1, 1)], &[q(1, 4), q(3, 4)], &[q(1, 4), q(3, 4)])
            .unwrap();
        assert_eq!(same.ratio_classes().len(), 1);
        assert_eq!(same.ratio_classes()[0].k, ExtRatio::Finite(q(1, 1)));
        assert_eq!((same.ratio_classes()[0].mass0.clone(), same.ratio_classes()[0].mass1.clone()), (q(1, 1), q(1, 1)));

        let disjoint = TwoDensityModel::from_columns(
            &["x", "y", "z"],
            &[q(1, 1), q(1, 1), q(1, 1)],
            &[q(0, 1), q(1, 1), q(0, 1)],
            &[q(1, 1), q(0, 1), q(0, 1)],
        )
        .unwrap();
        let ks: Vec<_> = disjoint.ratio_classes().iter().map(|c| c.k.clone()).collect();
        assert_eq!(ks, vec![ExtRatio::Finite(q(0, 1)), ExtRatio::Infinite]);
        // The indeterminate point z lands in the infinite class and votes 0.
        assert_eq!(disjoint.vote_simple("z", Hypothesis::Theta1).unwrap().p_decide_1, q(0, 1));
        assert_eq!(disjoint.vote_simple("x", Hypothesis::Theta0).unwrap().p_decide_1, q(1, 1));
    }

    #[test]
    fn invalid_models_are_rejected() {
        let bad = TwoDensityModel::from_columns(&["x", "y"], &[q(1, 1), q(1, 1)], &[q(1, 2), q(1, 3)], &[q(1, 2), q(1, 2)]);
        assert!(matches!(bad, Err(Error::InvalidModel(_))));
        let dup = TwoDensityModel::from_columns(&["x", "x"], &[q(1, 1), q(1, 1)], &[q(1, 2), q(1, 2)], &[q(1, 2), q(1, 2)]);
        assert!(dup.is_err());
        assert!(SimpleTest::new(ExtRatio::Finite(q(0, 1)), q(1, 2)).is_err());
        assert!(SimpleTest::new(ExtRatio::<Q>::Infinite, q(1, 1)).is_err());
    }

    #[test]
    fn float_mode_groups_nearly_equal_ratios() {
        let m = TwoDensityModel::<f64>::from_columns(
            &["a", "b", "c"],
            &[1.0, 1.0, 1.0],
            &[0.2, 0.2, 0.6],
            &[0.1, 0.1 * (1.0 + 1e-15), 0.8 - 0.1 * 1e-15],
        )
        .unwrap();
        assert_eq!(m.ratio_classes().len(), 2);
    }
}
