use expert_votes::bolshev::{bolshev_optimal, plebiscite_at, PlebisciteDecision};
use expert_votes::compatible::{compatible_vote, param_distribution, Boundary, FamilyDescriptor, Interval};
use expert_votes::ghost::{anova_vote, student_vote, two_binomial_vote, AnovaSummary, StudentSummary, TwoBinomialSummary};
use expert_votes::harness::generators;
use expert_votes::numerics::{beta_prime_cdf, normal_cdf};
use expert_votes::simple_choice::{Hypothesis, TwoDensityModel};
use expert_votes::stable::Side;
use num::rational::BigRational as Q;
use num::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn model_from_counts(counts: &[(u8, u8)]) -> TwoDensityModel<Q> {
    let s0: i64 = counts.iter().map(|c| i64::from(c.0)).sum();
    let s1: i64 = counts.iter().map(|c| i64::from(c.1)).sum();
    let labels: Vec<String> = (0..counts.len()).map(|i| format!("w{i}")).collect();
    let labels: Vec<&str> = labels.iter().map(String::as_str).collect();
    let ones = vec![Q::one(); counts.len()];
    let p0: Vec<Q> = counts.iter().map(|c| q(c.0.into(), s0)).collect();
    let p1: Vec<Q> = counts.iter().map(|c| q(c.1.into(), s1)).collect();
    TwoDensityModel::from_columns(&labels, &ones, &p0, &p1).unwrap()
}

fn positive_counts() -> impl Strategy<Value = Vec<(u8, u8)>> {
    prop::collection::vec((1u8..10, 1u8..10), 2..7)
}

fn any_counts() -> impl Strategy<Value = Vec<(u8, u8)>> {
    prop::collection::vec((0u8..10, 0u8..10), 2..7)
        .prop_filter("both densities need mass", |c| c.iter().any(|x| x.0 > 0) && c.iter().any(|x| x.1 > 0))
}

fn vote_mean(m: &TwoDensityModel<Q>, theta: Hypothesis) -> Q {
    (0..m.outcomes().len()).fold(Q::zero(), |acc, i| acc + m.outcomes()[i].mass(theta) * m.vote_simple_at(i, theta).p_decide_1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn simple_votes_are_neutral(counts in positive_counts()) {
        let m = model_from_counts(&counts);
        prop_assert_eq!(vote_mean(&m, Hypothesis::Theta0), q(1, 2));
        prop_assert_eq!(vote_mean(&m, Hypothesis::Theta1), q(1, 2));
    }

    #[test]
    fn weighted_vote_is_affine_and_posterior_is_a_probability(counts in any_counts(), k in 0i64..=10) {
        let m = model_from_counts(&counts);
        let lambda = q(k, 10);
        for i in 0..m.outcomes().len() {
            let v0 = m.vote_simple_at(i, Hypothesis::Theta0).p_decide_1;
            let v1 = m.vote_simple_at(i, Hypothesis::Theta1).p_decide_1;
            let w = m.vote_weighted_at(i, &lambda).unwrap().p_decide_1;
            prop_assert_eq!(w, (Q::one() - lambda.clone()) * v0 + lambda.clone() * v1);
            let post = m.posterior_prob_1_at(i, &lambda).unwrap();
            prop_assert!(post >= Q::zero() && post <= Q::one());
        }
    }

    #[test]
    fn bolshev_rule_respects_both_risk_bounds(counts in any_counts(), a0 in 0i64..20, a1 in 0i64..20) {
        let m = model_from_counts(&counts);
        let (a0, a1) = (q(a0, 20), q(a1, 20));
        let rule = bolshev_optimal(&m, &a0, &a1).unwrap();
        prop_assert!(rule.risk(&m, Hypothesis::Theta0) <= a0);
        prop_assert!(rule.risk(&m, Hypothesis::Theta1) <= a1);
        for th in [Hypothesis::Theta0, Hypothesis::Theta1] {
            let ab = rule.abstention(&m, th);
            prop_assert!(ab >= Q::zero() && ab <= Q::one());
        }
    }

    #[test]
    fn raising_alpha0_never_leaves_rejection_of_theta0(counts in any_counts(), a in 0i64..9, b in 0i64..10) {
        let m = model_from_counts(&counts);
        let rejects0 = |d: PlebisciteDecision| matches!(d, PlebisciteDecision::Theta1 | PlebisciteDecision::Conflict);
        let rejects1 = |d: PlebisciteDecision| matches!(d, PlebisciteDecision::Theta0 | PlebisciteDecision::Conflict);
        for i in 0..m.outcomes().len() {
            if rejects0(plebiscite_at(&m, i, &q(a, 10), &q(b, 10)).unwrap()) {
                prop_assert!(rejects0(plebiscite_at(&m, i, &q(a + 1, 10), &q(b, 10)).unwrap()));
            }
            if rejects1(plebiscite_at(&m, i, &q(b, 10), &q(a, 10)).unwrap()) {
                prop_assert!(rejects1(plebiscite_at(&m, i, &q(b, 10), &q(a + 1, 10)).unwrap()));
            }
        }
    }

    #[test]
    fn stable_votes_are_ordered_along_the_parameter(seed in any::<u64>(), levels in 2usize..7, thetas in 2usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = generators::random_mlr_family(&mut rng, levels, thetas, seed % 2 == 0, 0);
        for w in 0..f.outcomes().len() {
            for th in 1..thetas {
                prop_assert!(f.vote_stable_at(w, th - 1).p_decide_1 <= f.vote_stable_at(w, th).p_decide_1);
            }
            prop_assert!(
                f.vote_most_favorable_at(w, Side::Theta1).p_decide_1 <= f.vote_most_favorable_at(w, Side::Theta0).p_decide_1
            );
        }
    }

    #[test]
    fn normal_cdf_is_symmetric(x in -40.0f64..40.0) {
        prop_assert!((normal_cdf(x) + normal_cdf(-x) - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn normal_location_vote_increases_with_the_frontier(a in 0.1f64..5.0, t in -10.0f64..10.0, lo in -10.0f64..10.0, step in 0.0f64..5.0) {
        let f = FamilyDescriptor::NormalLocation { a };
        let v_lo = compatible_vote(&f, t, lo, Boundary::Open).unwrap();
        let v_hi = compatible_vote(&f, t, lo + step, Boundary::Open).unwrap();
        prop_assert!(v_lo <= v_hi + 1e-15);
        prop_assert!((0.0..=1.0).contains(&v_lo));
    }

    #[test]
    fn poisson_extension_splits_additively(n in 1u64..5, obs in 0u64..10, cut in 0.0f64..10.0, left in any::<bool>()) {
        let d = param_distribution(&FamilyDescriptor::Poisson { n }, obs as f64).unwrap();
        let below = d.interval_prob(&Interval::below(cut, left).unwrap()).unwrap();
        let above = d.interval_prob(&Interval::new(cut, f64::INFINITY, !left, false).unwrap()).unwrap();
        prop_assert!((below + above - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn two_binomial_complement_identity(n1 in 2u64..8, n2 in 2u64..8, x1 in 1u64..7, x2 in 1u64..7) {
        prop_assume!(x1 < n1 && x2 < n2);
        let v = |x1, x2| two_binomial_vote::<Q>(&TwoBinomialSummary { n1, x1, n2, x2 }).unwrap();
        prop_assert_eq!(v(n1 - x1, n2 - x2), Q::one() - v(x1, x2));
    }

    #[test]
    fn student_mass_below_mu0_is_the_vote_for_theta1(n in 2u64..40, mean in -5.0f64..5.0, var in 0.05f64..10.0, mu0 in -5.0f64..5.0) {
        let s = StudentSummary { n, mean, variance: var, mu0 };
        let r = student_vote(&s).unwrap();
        let mass = r.distribution.interval_prob(&Interval::below(mu0, true).unwrap()).unwrap();
        prop_assert!((mass - r.vote.p_decide_1).abs() <= 1e-12);
    }

    #[test]
    fn anova_without_noncentrality_is_a_beta_prime_tail(p in 0.5f64..4.0, qq in 0.5f64..4.0, t in 0.01f64..10.0, u in 0.01f64..10.0) {
        let v = anova_vote(&AnovaSummary { p, q: qq, t, u, theta1: 0.0 }).unwrap();
        prop_assert!((v - (1.0 - beta_prime_cdf(p, qq, t / u).unwrap())).abs() <= 1e-12);
    }
}

#[test]
fn anova_vote_is_not_monotone_in_the_scale_statistic() {
    let v = |u: f64| anova_vote(&AnovaSummary { p: 1.5, q: 2.0, t: 0.2, u, theta1: 0.6 }).unwrap();
    assert!(v(0.2) > v(0.8));
    assert!(v(0.8) < v(3.0));
    assert!(v(1e-3) > 0.9999 && v(200.0) > 0.9999);
}
