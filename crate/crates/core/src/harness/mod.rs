//! Deterministic property harness behind `expert-votes check`.
//!
//! Every property draws its random cases from its own ChaCha stream, seeded
//! from the run seed and the property name, so reports are reproducible and
//! independent of the order in which suites run.

pub mod generators;
pub mod oracles;

use std::fmt;
use std::str::FromStr;

use num::rational::BigRational;
use num::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bolshev::{bolshev_optimal, plebiscite_at, vote_divergence_at, PlebisciteDecision};
use crate::compatible::{
    bilateral_vote, compatible_vote, param_distribution, param_distribution_weighted, Boundary, FamilyDescriptor,
    Interval, PonderationSpec,
};
use crate::error::Error;
use crate::ghost::{anova_vote, student_vote, two_binomial_vote, AnovaSummary, StudentSummary, TwoBinomialSummary};
use crate::numerics::{beta_prime_cdf, normal_cdf, poisson_mid_cdf, student_cdf};
use crate::scalar::Scalar;
use crate::simple_choice::{Hypothesis, Outcome, SimpleTest, TwoDensityModel};
use crate::stable::{
    unilateral_pvalue, DiscreteFamilyModel, GapConvention, PartitionKind, Side,
};

type Q = BigRational;

/// Property suite selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Neutrality,
    Monotonicity,
    Additivity,
    Oracles,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Neutrality => "neutrality",
            Suite::Monotonicity => "monotonicity",
            Suite::Additivity => "additivity",
            Suite::Oracles => "oracles",
            Suite::All => "all",
        }
    }

    fn members(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Neutrality, Suite::Monotonicity, Suite::Additivity, Suite::Oracles],
            other => vec![other],
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "neutrality" => Ok(Suite::Neutrality),
            "monotonicity" => Ok(Suite::Monotonicity),
            "additivity" => Ok(Suite::Additivity),
            "oracles" => Ok(Suite::Oracles),
            "all" => Ok(Suite::All),
            other => Err(Error::Parse(format!("unknown suite `{other}`"))),
        }
    }
}

/// What the `worst` column of a property measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    /// Largest absolute deviation from the expected value.
    Deviation,
    /// Largest Monte Carlo deviation in standard errors.
    ZScore,
    /// Number of failing cases.
    Violations,
}

impl Measure {
    pub fn name(self) -> &'static str {
        match self {
            Measure::Deviation => "deviation",
            Measure::ZScore => "z",
            Measure::Violations => "violations",
        }
    }
}

/// Result of one property.
#[derive(Debug, Clone, PartialEq)]
pub struct PropertyResult {
    pub suite: Suite,
    pub name: &'static str,
    pub cases: usize,
    pub measure: Measure,
    pub worst: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Results of a harness run, in a fixed order.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub suite: Suite,
    pub seed: u64,
    pub results: Vec<PropertyResult>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    /// Largest `worst` value over the results of one suite and measure.
    pub fn worst(&self, suite: Suite, measure: Measure) -> f64 {
        self.results
            .iter()
            .filter(|r| r.suite == suite && r.measure == measure)
            .map(|r| r.worst)
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "check suite={} seed={}", self.suite.name(), self.seed)?;
        for r in &self.results {
            writeln!(
                f,
                "{} [{}] {}: cases={} worst {}={:.3e} tol={:.1e}",
                if r.passed { "PASS" } else { "FAIL" },
                r.suite.name(),
                r.name,
                r.cases,
                r.measure.name(),
                r.worst,
                r.tolerance
            )?;
        }
        let passed = self.results.iter().filter(|r| r.passed).count();
        write!(f, "{} of {} properties passed", passed, self.results.len())
    }
}

/// Accumulates the worst case of one property.
struct Tracker {
    cases: usize,
    worst: f64,
}

impl Tracker {
    fn new() -> Self {
        Tracker { cases: 0, worst: 0.0 }
    }

    fn record(&mut self, deviation: f64) {
        self.cases += 1;
        // NaN deviations count as failures.
        if deviation.is_nan() {
            self.worst = f64::INFINITY;
        } else if deviation > self.worst {
            self.worst = deviation;
        }
    }

    fn gap(&mut self, value: f64, expected: f64) {
        self.record((value - expected).abs());
    }

    fn flag(&mut self, ok: bool) {
        self.cases += 1;
        if !ok {
            self.worst += 1.0;
        }
    }
}

fn stream(seed: u64, name: &str) -> ChaCha8Rng {
    // FNV-1a of the property name, mixed with the run seed.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h)
}

struct Runner {
    seed: u64,
    suite: Suite,
    results: Vec<PropertyResult>,
}

impl Runner {
    fn run(
        &mut self,
        name: &'static str,
        measure: Measure,
        tolerance: f64,
        body: impl FnOnce(&mut ChaCha8Rng, &mut Tracker),
    ) {
        let mut rng = stream(self.seed, name);
        let mut t = Tracker::new();
        body(&mut rng, &mut t);
        let passed = t.cases > 0 && t.worst <= tolerance;
        self.results.push(PropertyResult {
            suite: self.suite,
            name,
            cases: t.cases,
            measure,
            worst: t.worst,
            tolerance,
            passed,
        });
    }
}

/// Runs the selected suites.
pub fn run(suite: Suite, seed: u64) -> CheckReport {
    let mut runner = Runner { seed, suite, results: Vec::new() };
    for member in suite.members() {
        runner.suite = member;
        match member {
            Suite::Neutrality => neutrality(&mut runner),
            Suite::Monotonicity => monotonicity(&mut runner),
            Suite::Additivity => additivity(&mut runner),
            Suite::Oracles => oracle_suite(&mut runner),
            Suite::All => unreachable!("expanded above"),
        }
    }
    CheckReport { suite, seed, results: runner.results }
}

fn q(n: i64, d: i64) -> Q {
    Q::ratio(n, d)
}

fn exact_gap(a: &Q, b: &Q) -> f64 {
    (a.clone() - b.clone()).abs().to_f64()
}

/// The two-density model with three unit intervals used throughout the docs.
pub fn golden_model() -> TwoDensityModel<Q> {
    TwoDensityModel::from_columns(
        &["A", "B", "C"],
        &[q(1, 1), q(1, 1), q(1, 1)],
        &[q(1, 6), q(1, 3), q(1, 2)],
        &[q(1, 2), q(1, 3), q(1, 6)],
    )
    .expect("valid model")
}

fn vote_mean(model: &TwoDensityModel<Q>, theta: Hypothesis) -> Q {
    (0..model.outcomes().len()).fold(Q::zero(), |acc, i| {
        acc + model.outcomes()[i].mass(theta) * model.vote_simple_at(i, theta).p_decide_1
    })
}

fn family_vote_mean(f: &DiscreteFamilyModel<Q>, theta: usize) -> Q {
    (0..f.outcomes().len()).fold(Q::zero(), |acc, i| {
        acc + f.density(theta)[i].clone() * f.outcomes()[i].weight.clone() * f.vote_stable_at(i, theta).p_decide_1
    })
}

fn neutrality(r: &mut Runner) {
    r.run("mid-cdf identity on the golden model", Measure::Deviation, 0.0, |_, t| {
        let f = DiscreteFamilyModel::from_two_density(&golden_model());
        for th in 0..2 {
            t.record(exact_gap(&f.neutrality_sum(th), &q(1, 2)));
        }
    });
    r.run("vote neutrality on the golden model", Measure::Deviation, 0.0, |_, t| {
        let m = golden_model();
        for th in [Hypothesis::Theta0, Hypothesis::Theta1] {
            t.record(exact_gap(&vote_mean(&m, th), &q(1, 2)));
        }
    });
    r.run("vote neutrality on 100 random two-density models", Measure::Deviation, 0.0, |rng, t| {
        for _ in 0..100 {
            let size = rng.random_range(2..=7);
            let m = generators::random_two_density(rng, size, 1);
            for th in [Hypothesis::Theta0, Hypothesis::Theta1] {
                t.record(exact_gap(&vote_mean(&m, th), &q(1, 2)));
            }
        }
    });
    r.run("mid-cdf identity on 100 random families", Measure::Deviation, 0.0, |rng, t| {
        for _ in 0..100 {
            let (levels, thetas) = (rng.random_range(2..=7), rng.random_range(2..=4));
            let f = generators::random_mlr_family(rng, levels, thetas, true, 0);
            for th in 0..thetas {
                t.record(exact_gap(&f.neutrality_sum(th), &q(1, 2)));
            }
        }
    });
    r.run("vote neutrality on 100 random families without half-lines", Measure::Deviation, 0.0, |rng, t| {
        for _ in 0..100 {
            let (levels, thetas) = (rng.random_range(2..=7), rng.random_range(2..=4));
            let f = generators::random_mlr_family(rng, levels, thetas, false, 1);
            for th in 0..thetas {
                t.record(exact_gap(&family_vote_mean(&f, th), &q(1, 2)));
            }
        }
    });
    r.run("monte-carlo vote neutrality of continuous and count families", Measure::ZScore, 4.0, |rng, t| {
        let cases: [(FamilyDescriptor<f64>, [f64; 5]); 3] = [
            (FamilyDescriptor::NormalLocation { a: 1.5 }, [-3.0, -0.5, 0.0, 1.0, 4.0]),
            (FamilyDescriptor::Poisson { n: 2 }, [0.2, 0.7, 1.5, 3.0, 8.0]),
            (FamilyDescriptor::Binomial { n: 7 }, [0.05, 0.3, 0.5, 0.7, 0.95]),
        ];
        for (family, thetas) in cases {
            for theta in thetas {
                let est = oracles::vote_mean_monte_carlo(&family, theta, 100_000, rng);
                t.record(est.z_score(0.5));
            }
        }
    });
}

/// A family, some observations and the parameter range scanned by grid checks.
struct FamilyCase {
    family: FamilyDescriptor<f64>,
    observations: Vec<f64>,
    /// Scanned parameter range; open ends are never evaluated.
    range: (f64, f64),
}

fn family_cases() -> Vec<FamilyCase> {
    vec![
        FamilyCase { family: FamilyDescriptor::NormalLocation { a: 1.5 }, observations: vec![-2.0, 0.0, 1.3], range: (-8.0, 8.0) },
        FamilyCase { family: FamilyDescriptor::UniformLocation, observations: vec![-0.5, 0.0, 2.0], range: (-3.0, 4.0) },
        FamilyCase { family: FamilyDescriptor::UniformScale, observations: vec![0.5, 2.0], range: (0.0, 10.0) },
        FamilyCase { family: FamilyDescriptor::NormalScale { m: 1.0 }, observations: vec![-1.0, 2.5], range: (0.0, 10.0) },
        FamilyCase { family: FamilyDescriptor::GammaScale { p: 2.5 }, observations: vec![0.3, 4.0], range: (0.0, 20.0) },
        FamilyCase { family: FamilyDescriptor::Poisson { n: 2 }, observations: vec![0.0, 1.0, 5.0], range: (0.0, 10.0) },
        FamilyCase { family: FamilyDescriptor::Binomial { n: 6 }, observations: vec![0.0, 2.0, 6.0], range: (0.0, 1.0) },
        FamilyCase { family: FamilyDescriptor::NoncentralBeta { p: 1.5, q: 2.0 }, observations: vec![0.0, 0.4, 3.0], range: (0.0, 15.0) },
    ]
}

impl FamilyCase {
    /// `points` parameter values across the range, dropping ends outside `Θ`.
    fn grid(&self, points: usize) -> Vec<f64> {
        let iv = self.family.parameter_interval();
        let (lo, hi) = self.range;
        (0..=points)
            .map(|i| lo + (hi - lo) * i as f64 / points as f64)
            .filter(|&x| (x > iv.lo || (iv.lo_closed && x == iv.lo)) && (x < iv.hi || (iv.hi_closed && x == iv.hi)))
            .collect()
    }
}

fn monotonicity(r: &mut Runner) {
    r.run("compatible vote nondecreasing in the frontier, all families", Measure::Deviation, 1e-12, |_, t| {
        for case in family_cases() {
            for &obs in &case.observations {
                for boundary in [Boundary::Open, Boundary::Closed] {
                    let votes: Vec<f64> = case
                        .grid(60)
                        .iter()
                        .map(|&th| compatible_vote(&case.family, obs, th, boundary).unwrap_or(f64::NAN))
                        .collect();
                    for w in votes.windows(2) {
                        t.record((w[0] - w[1]).max(0.0));
                    }
                }
            }
        }
    });
    r.run("compatible vote limits at the ends of the parameter set", Measure::Deviation, 1e-8, |_, t| {
        for case in family_cases() {
            let iv = case.family.parameter_interval();
            for &obs in &case.observations {
                let lo = if iv.lo.is_finite() { iv.lo + if iv.lo_closed { 0.0 } else { 1e-9 } } else { obs - 1e3 };
                let hi = if iv.hi.is_finite() { iv.hi } else if iv.lo == 0.0 { 1e9 } else { obs + 1e3 };
                let hi = match case.family {
                    FamilyDescriptor::Poisson { .. } | FamilyDescriptor::NoncentralBeta { .. } => hi.min(1e3),
                    _ => hi,
                };
                let v_lo = compatible_vote(&case.family, obs, lo, Boundary::Open).unwrap_or(f64::NAN);
                let v_hi = compatible_vote(&case.family, obs, hi, Boundary::Closed).unwrap_or(f64::NAN);
                t.record(v_lo.abs());
                t.record((1.0 - v_hi).abs());
            }
        }
    });
    r.run("open and closed frontiers agree inside the parameter set", Measure::Deviation, 1e-5, |_, t| {
        for case in family_cases() {
            let iv = case.family.parameter_interval();
            for &obs in &case.observations {
                for th in case.grid(30) {
                    if th == iv.lo || th == iv.hi {
                        continue;
                    }
                    let open = compatible_vote(&case.family, obs, th, Boundary::Open).unwrap_or(f64::NAN);
                    let closed = compatible_vote(&case.family, obs, th, Boundary::Closed).unwrap_or(f64::NAN);
                    let h = 1e-7 * th.abs().max(1.0);
                    let near = compatible_vote(&case.family, obs, th - h, Boundary::Closed).unwrap_or(f64::NAN);
                    t.record((open - closed).abs().max((near - open).abs()));
                }
            }
        }
    });
    r.run("mid-cdf nondecreasing in t and nonincreasing in the parameter", Measure::Deviation, 1e-12, |_, t| {
        for case in family_cases() {
            let grid = case.grid(25);
            let mut obs: Vec<f64> = match case.family {
                FamilyDescriptor::Poisson { .. } => (0..12).map(f64::from).collect(),
                FamilyDescriptor::Binomial { n } => (0..=n).map(|k| k as f64).collect(),
                // The statistic is the distance to the known center.
                FamilyDescriptor::NormalScale { m } => (0..24).map(|k| m + 0.25 * k as f64).collect(),
                _ => (1..=24).map(|k| case.observations[0] + 0.25 * k as f64 - 3.0).collect(),
            };
            obs.retain(|&x| case.family.check_observation(x).is_ok());
            for &th in &grid {
                let g: Vec<f64> = obs.iter().map(|&x| case.family.mid_cdf(th, x).unwrap_or(f64::NAN)).collect();
                for w in g.windows(2) {
                    t.record((w[0] - w[1]).max(0.0));
                }
            }
            for &x in &obs {
                let g: Vec<f64> = grid.iter().map(|&th| case.family.mid_cdf(th, x).unwrap_or(f64::NAN)).collect();
                for w in g.windows(2) {
                    t.record((w[1] - w[0]).max(0.0));
                }
            }
        }
    });
    r.run("stable vote nondecreasing in the parameter on 100 random families", Measure::Deviation, 0.0, |rng, t| {
        for _ in 0..100 {
            let (levels, thetas) = (rng.random_range(2..=7), rng.random_range(2..=5));
            let half_lines = rng.random_bool(0.5);
            let f = generators::random_mlr_family(rng, levels, thetas, half_lines, 0);
            for w in 0..f.outcomes().len() {
                let votes: Vec<Q> = (0..thetas).map(|th| f.vote_stable_at(w, th).p_decide_1).collect();
                for pair in votes.windows(2) {
                    let drop = pair[0].clone() - pair[1].clone();
                    t.record(if drop.is_positive() { drop.to_f64() } else { 0.0 });
                }
                let min0 = f.vote_most_favorable_at(w, Side::Theta0).p_decide_1;
                let max1 = f.vote_most_favorable_at(w, Side::Theta1).p_decide_1;
                let gap = max1 - min0;
                t.record(if gap.is_positive() { gap.to_f64() } else { 0.0 });
            }
        }
    });
    r.run("expert mean monotone in the test order and larger under theta 1", Measure::Violations, 0.0, |rng, t| {
        for _ in 0..50 {
            let size = rng.random_range(2..=6);
            let m = generators::random_two_density(rng, size, 0);
            let betas = [q(0, 1), q(1, 4), q(1, 2), q(3, 4), q(1, 1)];
            let mut tests = vec![SimpleTest::smallest()];
            for c in m.ratio_classes() {
                for b in &betas {
                    if let Ok(test) = SimpleTest::new(c.k.clone(), b.clone()) {
                        tests.push(test);
                    }
                }
            }
            tests.push(SimpleTest::largest());
            tests.sort_by(|a, b| a.lex_cmp(b));
            for th in [Hypothesis::Theta0, Hypothesis::Theta1] {
                let means: Vec<Q> = tests.iter().map(|x| m.expert_mean(x, th)).collect();
                for w in means.windows(2) {
                    t.flag(w[0] <= w[1]);
                }
            }
            for x in &tests {
                t.flag(m.expert_mean(x, Hypothesis::Theta1) >= m.expert_mean(x, Hypothesis::Theta0));
            }
        }
    });
    r.run("weighted vote nonincreasing in lambda", Measure::Violations, 0.0, |rng, t| {
        for _ in 0..50 {
            let size = rng.random_range(2..=6);
            let m = generators::random_two_density(rng, size, 0);
            for i in 0..m.outcomes().len() {
                let votes: Vec<Q> = (0..=8).map(|k| m.vote_weighted_at(i, &q(k, 8)).expect("valid").p_decide_1).collect();
                for w in votes.windows(2) {
                    t.flag(w[0] >= w[1]);
                }
            }
        }
    });
    r.run("plebiscite decision monotone in the thresholds", Measure::Violations, 0.0, |rng, t| {
        for _ in 0..50 {
            let size = rng.random_range(2..=6);
            let m = generators::random_two_density(rng, size, 0);
            for i in 0..m.outcomes().len() {
                for fixed in 0..10 {
                    let fixed = q(fixed, 10);
                    let by0: Vec<PlebisciteDecision> =
                        (0..10).map(|k| plebiscite_at(&m, i, &q(k, 10), &fixed).expect("valid")).collect();
                    let by1: Vec<PlebisciteDecision> =
                        (0..10).map(|k| plebiscite_at(&m, i, &fixed, &q(k, 10)).expect("valid")).collect();
                    let rejects0 = |d: &PlebisciteDecision| matches!(d, PlebisciteDecision::Theta1 | PlebisciteDecision::Conflict);
                    let rejects1 = |d: &PlebisciteDecision| matches!(d, PlebisciteDecision::Theta0 | PlebisciteDecision::Conflict);
                    for w in by0.windows(2) {
                        t.flag(!rejects0(&w[0]) || rejects0(&w[1]));
                    }
                    for w in by1.windows(2) {
                        t.flag(!rejects1(&w[0]) || rejects1(&w[1]));
                    }
                }
            }
        }
    });
    r.run("anova vote monotone in theta1 and t on a 10x10x10 grid", Measure::Deviation, 1e-12, |_, t| {
        let axis = |k: usize| 0.2 + 0.6 * k as f64;
        let vote = |t_: f64, u: f64, th: f64| {
            anova_vote(&AnovaSummary { p: 1.5, q: 2.0, t: t_, u, theta1: th }).unwrap_or(f64::NAN)
        };
        for i in 0..10 {
            for j in 0..10 {
                for k in 0..10 {
                    let v = vote(axis(i), axis(j), axis(k) - 0.2);
                    if k + 1 < 10 {
                        t.record((v - vote(axis(i), axis(j), axis(k + 1) - 0.2)).max(0.0));
                    }
                    if i + 1 < 10 {
                        t.record((vote(axis(i + 1), axis(j), axis(k) - 0.2) - v).max(0.0));
                    }
                }
            }
        }
    });
    r.run("two-binomial vote monotone in the counts", Measure::Violations, 0.0, |_, t| {
        for n1 in 1..=5 {
            for n2 in 1..=5 {
                let v = |x1: u64, x2: u64| two_binomial_vote::<Q>(&TwoBinomialSummary { n1, x1, n2, x2 }).expect("valid");
                for x1 in 0..=n1 {
                    for x2 in 0..=n2 {
                        let here = v(x1, x2);
                        t.flag(here >= Q::zero() && here <= Q::one());
                        if x1 < n1 {
                            t.flag(v(x1 + 1, x2) <= here);
                        }
                        if x2 < n2 {
                            t.flag(v(x1, x2 + 1) >= here);
                        }
                    }
                }
            }
        }
    });
    r.run("bilateral normal vote unimodal in t", Measure::Deviation, 1e-13, |_, t| {
        let f = FamilyDescriptor::NormalLocation { a: 1.0 };
        for (th1, th2) in [(-1.0, 1.0), (-0.3, 2.0), (0.5, 0.6), (-4.0, -1.0)] {
            let votes: Vec<f64> = (0..=480)
                .map(|k| bilateral_vote(&f, -12.0 + 0.05 * k as f64, th1, th2).map_or(f64::NAN, |v| v.p_decide_0()))
                .collect();
            let peak = votes.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let top = votes.iter().position(|&v| v == peak).unwrap_or(0);
            for (k, w) in votes.windows(2).enumerate() {
                let rise = w[1] - w[0];
                t.record(if k < top { (-rise).max(0.0) } else { rise.max(0.0) });
            }
        }
    });
}

/// Random partition of the line into consecutive intervals, cutting at the given points.
fn random_partition(rng: &mut ChaCha8Rng, mut cuts: Vec<f64>) -> Vec<Interval<f64>> {
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let to_left: Vec<bool> = cuts.iter().map(|_| rng.random_bool(0.5)).collect();
    let mut pieces = Vec::with_capacity(cuts.len() + 1);
    let mut lo = f64::NEG_INFINITY;
    let mut lo_closed = false;
    for (c, left) in cuts.iter().zip(&to_left) {
        pieces.push(Interval { lo, hi: *c, lo_closed, hi_closed: *left });
        lo = *c;
        lo_closed = !*left;
    }
    pieces.push(Interval { lo, hi: f64::INFINITY, lo_closed, hi_closed: false });
    pieces
}

fn additivity(r: &mut Runner) {
    r.run("interval probabilities add up over 100 random partitions per family", Measure::Deviation, 1e-10, |rng, t| {
        for case in family_cases() {
            for &obs in &case.observations {
                let dist = match param_distribution(&case.family, obs) {
                    Ok(d) => d,
                    Err(_) => {
                        t.record(f64::INFINITY);
                        continue;
                    }
                };
                let atoms: Vec<f64> = dist.atoms().iter().map(|a| a.0).collect();
                for _ in 0..100 {
                    let count = rng.random_range(1..=5);
                    let cuts: Vec<f64> = (0..count)
                        .map(|_| {
                            if !atoms.is_empty() && rng.random_bool(0.3) {
                                atoms[rng.random_range(0..atoms.len())]
                            } else {
                                rng.random_range(case.range.0..case.range.1)
                            }
                        })
                        .collect();
                    let total: f64 = random_partition(rng, cuts)
                        .iter()
                        .map(|iv| dist.interval_prob(iv).unwrap_or(f64::NAN))
                        .sum();
                    t.gap(total, 1.0);
                }
                t.gap(dist.total_mass(), 1.0);
            }
        }
    });
    r.run("extension matches the compatible votes on 50 points per family", Measure::Deviation, 1e-9, |_, t| {
        for case in family_cases() {
            let mut points = Vec::new();
            for &obs in &case.observations {
                for th in case.grid(40) {
                    points.push((obs, th));
                }
            }
            let stride = (points.len() / 50).max(1);
            for &(obs, th) in points.iter().step_by(stride).take(50) {
                let dist = param_distribution(&case.family, obs);
                for (boundary, closed) in [(Boundary::Open, false), (Boundary::Closed, true)] {
                    let vote = compatible_vote(&case.family, obs, th, boundary).unwrap_or(f64::NAN);
                    let mass = dist
                        .as_ref()
                        .ok()
                        .and_then(|d| d.interval_prob(&Interval::below(th, closed).ok()?).ok())
                        .unwrap_or(f64::NAN);
                    t.gap(mass, vote);
                }
            }
        }
    });
    r.run("binomial reflection for n up to 20", Measure::Deviation, 1e-12, |_, t| {
        for n in 1..=20u64 {
            let f = FamilyDescriptor::Binomial { n };
            for w in 0..=n {
                let d = param_distribution(&f, w as f64).expect("valid");
                let mirror = param_distribution(&f, (n - w) as f64).expect("valid");
                for k in 0..=20 {
                    let x = k as f64 / 20.0;
                    let reflected = mirror.interval_prob(&Interval::new(1.0 - x, 1.0, true, true).expect("valid"));
                    t.gap(d.cdf(x), reflected.unwrap_or(f64::NAN));
                }
            }
        }
    });
    r.run("weighted vote affine in lambda", Measure::Deviation, 0.0, |rng, t| {
        for _ in 0..50 {
            let size = rng.random_range(2..=6);
            let m = generators::random_two_density(rng, size, 0);
            for i in 0..m.outcomes().len() {
                let v0 = m.vote_simple_at(i, Hypothesis::Theta0).p_decide_1;
                let v1 = m.vote_simple_at(i, Hypothesis::Theta1).p_decide_1;
                for k in 0..=6 {
                    let l = q(k, 6);
                    let expected = (Q::one() - l.clone()) * v0.clone() + l.clone() * v1.clone();
                    t.record(exact_gap(&m.vote_weighted_at(i, &l).expect("valid").p_decide_1, &expected));
                }
            }
        }
    });
    r.run("weighted stable vote between its component votes", Measure::Violations, 0.0, |rng, t| {
        for _ in 0..50 {
            let (levels, thetas) = (rng.random_range(2..=6), rng.random_range(3..=5));
            let half_lines = rng.random_bool(0.5);
            let f = generators::random_mlr_family(rng, levels, thetas, half_lines, 0);
            for side in [Side::Theta0, Side::Theta1] {
                let range = f.side_indices(side);
                let raw: Vec<i64> = range.clone().map(|_| rng.random_range(0..=3)).collect();
                let total: i64 = raw.iter().sum();
                if total == 0 {
                    continue;
                }
                let weights: Vec<Q> = raw.iter().map(|&w| q(w, total)).collect();
                for (w, o) in f.outcomes().iter().enumerate() {
                    let v = f.vote_weighted_on_theta(&o.label, side, &weights).expect("valid").p_decide_1;
                    let votes: Vec<Q> = range.clone().map(|th| f.vote_stable_at(w, th).p_decide_1).collect();
                    let lo = votes.iter().min().expect("non-empty");
                    let hi = votes.iter().max().expect("non-empty");
                    t.flag(&v >= lo && &v <= hi);
                }
            }
        }
    });
    r.run("ratio classes invariant under rescaling the base measure", Measure::Violations, 0.0, |rng, t| {
        for _ in 0..50 {
            let size = rng.random_range(2..=6);
            let m = generators::random_two_density(rng, size, 0);
            let rows: Vec<Outcome<Q>> = m
                .outcomes()
                .iter()
                .map(|o| {
                    let c = q(rng.random_range(1..=5), rng.random_range(1..=5));
                    Outcome { label: o.label.clone(), weight: o.weight.clone() * c.clone(), p0: o.p0.clone() / c.clone(), p1: o.p1.clone() / c }
                })
                .collect();
            let scaled = TwoDensityModel::new(rows).expect("same masses");
            t.flag(scaled.ratio_classes() == m.ratio_classes());
        }
    });
    r.run("vote divergence antisymmetric under swapping the densities", Measure::Deviation, 0.0, |rng, t| {
        for _ in 0..50 {
            let size = rng.random_range(2..=6);
            let m = generators::random_two_density(rng, size, 0);
            let s = m.swapped();
            for i in 0..m.outcomes().len() {
                let o = &m.outcomes()[i];
                if o.p0.is_zero() && o.p1.is_zero() {
                    continue;
                }
                let j = s.outcome_index(&o.label).expect("same labels");
                t.record(exact_gap(&vote_divergence_at(&m, i), &-vote_divergence_at(&s, j)));
            }
        }
    });
    r.run("split partition coarsens the global partition off the half-lines", Measure::Violations, 0.0, |rng, t| {
        for _ in 0..100 {
            let (levels, thetas) = (rng.random_range(2..=7), rng.random_range(2..=5));
            let half_lines = rng.random_bool(0.5);
            let f = generators::random_mlr_family(rng, levels, thetas, half_lines, 0);
            let split = f.essential_partition(PartitionKind::Split);
            let global = f.essential_partition(PartitionKind::Global);
            let n = f.outcomes().len();
            for a in 0..n {
                for b in 0..n {
                    let off = |i: usize| !split.in_di_minus_ds[i] && !split.in_ds[i] && !split.indeterminate[i];
                    if off(a) && off(b) && global.block_index[a] == global.block_index[b] {
                        t.flag(split.block_index[a] == split.block_index[b]);
                    }
                }
            }
        }
    });
    r.run("stable votes independent of the gap convention", Measure::Violations, 0.0, |rng, t| {
        for _ in 0..100 {
            let (levels, thetas) = (rng.random_range(2..=7), rng.random_range(2..=5));
            let half_lines = rng.random_bool(0.5);
            let f = generators::random_mlr_family(rng, levels, thetas, half_lines, 0);
            let g = f.clone().with_gap_convention(GapConvention::Right);
            let part = f.essential_partition(PartitionKind::Split);
            for w in 0..f.outcomes().len() {
                if part.indeterminate[w] {
                    continue;
                }
                for th in 0..thetas {
                    t.flag(f.vote_stable_at(w, th) == g.vote_stable_at(w, th));
                }
            }
        }
    });
    r.run("two-point family votes equal the simple-choice votes", Measure::Violations, 0.0, |rng, t| {
        for _ in 0..50 {
            let size = rng.random_range(2..=6);
            let m = generators::random_two_density(rng, size, 0);
            let f = DiscreteFamilyModel::from_two_density(&m);
            for i in 0..m.outcomes().len() {
                t.flag(m.vote_simple_at(i, Hypothesis::Theta1) == f.vote_stable_at(i, 0));
                t.flag(m.vote_simple_at(i, Hypothesis::Theta0) == f.vote_stable_at(i, 1));
            }
        }
    });
}

fn oracle_suite(r: &mut Runner) {
    r.run("golden table", Measure::Deviation, 0.0, |_, t| {
        let m = golden_model();
        let expected = [
            ["11/12", "5/6", "3/4", "3/4"],
            ["2/3", "1/2", "1/3", "1/2"],
            ["1/4", "1/6", "1/12", "1/4"],
        ];
        for (i, row) in expected.iter().enumerate() {
            for (j, lambda) in [q(0, 1), q(1, 2), q(1, 1)].iter().enumerate() {
                let v = m.vote_weighted_at(i, lambda).expect("valid").p_decide_1;
                t.record(exact_gap(&v, &crate::parse_rational(row[j]).expect("literal")));
            }
            let post = m.posterior_prob_1_at(i, &q(1, 2)).expect("valid");
            t.record(exact_gap(&post, &crate::parse_rational(row[3]).expect("literal")));
        }
    });
    r.run("poisson extension against exact sums", Measure::Deviation, 1e-10, |_, t| {
        for n in [1u64, 4] {
            let f = FamilyDescriptor::Poisson { n };
            for obs in [0u64, 1, 3, 7] {
                let d = param_distribution(&f, obs as f64).expect("valid");
                for k in 0..20 {
                    let theta = 0.1 + 0.6 * k as f64;
                    let g = oracles::poisson_mid_cdf_oracle(obs, n as f64 * theta);
                    t.gap(d.interval_prob(&Interval::below(theta, true).expect("valid")).unwrap_or(f64::NAN), 1.0 - g);
                    if obs == 0 && n == 1 {
                        t.gap(d.cdf(theta), 1.0 - 0.5 * (-theta).exp());
                    }
                }
            }
        }
    });
    r.run("binomial extension against exact sums", Measure::Deviation, 1e-10, |_, t| {
        for n in [1u64, 5, 10, 20] {
            let f = FamilyDescriptor::Binomial { n };
            for w in 0..=n {
                let d = param_distribution(&f, w as f64).expect("valid");
                for k in 0..=20 {
                    let theta = k as f64 / 20.0;
                    let g = oracles::binomial_mid_cdf_oracle(n, w, theta);
                    let expected = if k == 20 { 1.0 } else { 1.0 - g };
                    t.gap(d.cdf(theta), expected);
                }
                let atom0 = d.interval_prob(&Interval::point(0.0).expect("valid")).unwrap_or(f64::NAN);
                let atom1 = d.interval_prob(&Interval::point(1.0).expect("valid")).unwrap_or(f64::NAN);
                t.gap(atom0, if w == 0 { 0.5 } else { 0.0 });
                t.gap(atom1, if w == n { 0.5 } else { 0.0 });
            }
        }
    });
    r.run("normal location extension and weighted extension", Measure::Deviation, 1e-10, |_, t| {
        for (a, obs) in [(1.0, 0.0), (2.5, -1.3), (0.4, 3.2)] {
            let f = FamilyDescriptor::NormalLocation { a };
            let d = param_distribution(&f, obs).expect("valid");
            for k in 1..=20 {
                let p = k as f64 / 21.0;
                let x = d.quantile(p).unwrap_or(f64::NAN);
                t.gap(normal_cdf((x - obs) / a), p);
            }
            for pull in [0.0, 1.0, 3.0] {
                for spread in [0.0, 1.0] {
                    let median = 0.7;
                    let spec = PonderationSpec { median, pull, spread };
                    let w = param_distribution_weighted(&f, obs, &spec).expect("valid");
                    let mean = (obs + pull * median) / (1.0 + pull);
                    let sd = (a * a + spread * spread).sqrt() / (1.0 + pull);
                    for k in -10..=10 {
                        let x = mean + 0.4 * k as f64 * sd;
                        t.gap(w.cdf(x), normal_cdf((x - mean) / sd));
                    }
                }
            }
        }
    });
    r.run("gamma-scale ponderation closed form", Measure::Deviation, 1e-10, |_, t| {
        let f = FamilyDescriptor::GammaScale { p: 1.0 };
        let (median, pull) = (1.7, 0.6);
        let spec = PonderationSpec { median, pull, spread: 0.0 };
        for i in 0..10 {
            let obs = 0.2 + 0.5 * i as f64;
            let d = param_distribution_weighted(&f, obs, &spec).expect("valid");
            for j in 0..10 {
                let theta_f = 0.3 + 0.45 * j as f64;
                let beta_f = (1.0 + pull) * theta_f.ln() - pull * median.ln();
                t.gap(d.cdf(theta_f), (-(obs.ln() - beta_f).exp()).exp());
            }
        }
    });
    r.run("student vote against the precision-mixture quadrature", Measure::Deviation, 1e-8, |_, t| {
        for n in [2u64, 4, 10, 30] {
            for &(mean, variance, mu0) in &STUDENT_TRIPLES {
                let s = StudentSummary { n, mean, variance, mu0 };
                let v = student_vote(&s).expect("valid");
                t.gap(v.vote.p_decide_1, oracles::student_vote_oracle(&s));
                let z = (n as f64).sqrt() * (mean - mu0) / variance.sqrt();
                t.gap(v.vote.p_decide_0(), student_cdf(n - 1, z).expect("valid"));
                let mass = v.distribution.interval_prob(&Interval::below(mu0, true).expect("valid"));
                t.gap(mass.unwrap_or(f64::NAN), v.vote.p_decide_1);
            }
        }
    });
    r.run("anova vote with theta1 = 0 against the beta-prime tail", Measure::Deviation, 1e-12, |_, t| {
        for &(p, q_) in &ANOVA_SHAPES {
            for &(obs, u, _) in &ANOVA_POINTS {
                let v = anova_vote(&AnovaSummary { p, q: q_, t: obs, u, theta1: 0.0 }).unwrap_or(f64::NAN);
                t.gap(v, 1.0 - beta_prime_cdf(p, q_, obs / u).expect("valid"));
            }
        }
    });
    r.run("anova vote against the double quadrature", Measure::Deviation, 1e-7, |_, t| {
        for &(p, q_) in &ANOVA_SHAPES {
            for &(obs, u, theta1) in &ANOVA_POINTS {
                let s = AnovaSummary { p, q: q_, t: obs, u, theta1 };
                t.gap(anova_vote(&s).unwrap_or(f64::NAN), oracles::anova_vote_oracle(&s));
            }
        }
    });
    r.run("noncentral beta extension against density quadrature", Measure::Deviation, 1e-8, |_, t| {
        let values = [0.5, 1.0, 2.5];
        for &p in &values {
            for &q_ in &values {
                for &theta in &values {
                    for obs in [0.5, 2.0] {
                        let f = FamilyDescriptor::NoncentralBeta { p, q: q_ };
                        let d = param_distribution(&f, obs).expect("valid");
                        t.gap(d.cdf(theta), oracles::noncentral_beta_vote_oracle(p, q_, theta, obs));
                    }
                }
            }
        }
    });
    r.run("two-binomial exact cases and complement identity", Measure::Deviation, 0.0, |_, t| {
        let v = |n1, x1, n2, x2| two_binomial_vote::<Q>(&TwoBinomialSummary { n1, x1, n2, x2 }).expect("valid");
        t.record(exact_gap(&v(1, 0, 1, 1), &q(7, 8)));
        for n in 2..=8u64 {
            for x in 1..n {
                t.record(exact_gap(&v(n, x, n, x), &q(1, 2)));
            }
        }
        for n1 in 2..=6u64 {
            for n2 in 2..=6u64 {
                for x1 in 1..n1 {
                    for x2 in 1..n2 {
                        t.record(exact_gap(&v(n1, n1 - x1, n2, n2 - x2), &(Q::one() - v(n1, x1, n2, x2))));
                    }
                }
            }
        }
    });
    r.run("two-binomial vote against monte carlo", Measure::ZScore, 4.0, |rng, t| {
        for _ in 0..5 {
            let (n1, n2) = (rng.random_range(1..=12), rng.random_range(1..=12));
            let s = TwoBinomialSummary { n1, x1: rng.random_range(0..=n1), n2, x2: rng.random_range(0..=n2) };
            let exact = two_binomial_vote::<f64>(&s).expect("valid");
            t.record(oracles::two_binomial_monte_carlo(&s, 100_000, rng).z_score(exact));
        }
    });
    r.run("stable vote against the direct block mid-cdf", Measure::Deviation, 0.0, |rng, t| {
        for _ in 0..100 {
            let levels = rng.random_range(2..=7);
            let half_lines = rng.random_bool(0.5);
            let f = generators::random_mlr_family(rng, levels, 3, half_lines, 0);
            let part = f.essential_partition(PartitionKind::Split);
            for w in 0..f.outcomes().len() {
                for th in 0..3 {
                    let expected = if part.in_di_minus_ds[w] {
                        Q::one()
                    } else if part.in_ds[w] {
                        Q::zero()
                    } else {
                        let b = part.block_index[w];
                        let mut g = Q::zero();
                        for (v, o) in f.outcomes().iter().enumerate() {
                            let mass = f.density(th)[v].clone() * o.weight.clone();
                            if part.block_index[v] < b {
                                g += mass;
                            } else if part.block_index[v] == b {
                                g += mass / q(2, 1);
                            }
                        }
                        Q::one() - g
                    };
                    t.record(exact_gap(&f.vote_stable_at(w, th).p_decide_1, &expected));
                }
            }
        }
    });
    r.run("global partition equals grouping by the full ratio vector", Measure::Violations, 0.0, |rng, t| {
        for _ in 0..100 {
            let (levels, thetas) = (rng.random_range(2..=7), 4);
            let f = generators::random_mlr_family(rng, levels, thetas, false, 1);
            let part = f.essential_partition(PartitionKind::Global);
            let vector = |l: usize| -> Vec<Q> {
                let mut v = Vec::new();
                for a in 0..thetas {
                    for b in a + 1..thetas {
                        v.push(f.level_masses(b)[l].clone() / f.level_masses(a)[l].clone());
                    }
                }
                v
            };
            let levels_t = f.t_levels().to_vec();
            let mut expected = vec![0usize; levels_t.len()];
            for l in 1..levels_t.len() {
                expected[l] = expected[l - 1] + usize::from(vector(l) != vector(l - 1));
            }
            for (w, o) in f.outcomes().iter().enumerate() {
                let l = levels_t.iter().position(|x| *x == o.t).expect("level");
                t.flag(part.block_index[w] == expected[l]);
            }
        }
    });
    r.run("bolshev risk bounds on 200 random models", Measure::Violations, 0.0, |rng, t| {
        for _ in 0..200 {
            let size = rng.random_range(2..=6);
            let m = generators::random_two_density(rng, size, 0);
            let a0 = q(rng.random_range(0..=20), 20);
            let a1 = q(rng.random_range(0..=20), 20);
            let rule = bolshev_optimal(&m, &a0, &a1).expect("valid");
            t.flag(rule.risk(&m, Hypothesis::Theta0) <= a0);
            t.flag(rule.risk(&m, Hypothesis::Theta1) <= a1);
            let ordered = m.ratio_classes().iter().all(|c| rule.lower.accept(&c.k) <= rule.upper.accept(&c.k));
            t.flag(ordered);
        }
    });
    r.run("bolshev abstention minimal against a grid of rules", Measure::Deviation, 1e-9, |rng, t| {
        for _ in 0..20 {
            let size = rng.random_range(2..=4);
            let m = generators::random_two_density(rng, size, 0);
            let masses: Vec<(f64, f64)> =
                m.ratio_classes().iter().map(|c| (c.mass0.to_f64(), c.mass1.to_f64())).collect();
            for a0 in [q(1, 20), q(1, 10), q(3, 10)] {
                for a1 in [q(1, 20), q(1, 10), q(3, 10)] {
                    let rule = bolshev_optimal(&m, &a0, &a1).expect("valid");
                    let abstain = (
                        rule.abstention(&m, Hypothesis::Theta0).to_f64(),
                        rule.abstention(&m, Hypothesis::Theta1).to_f64(),
                    );
                    let gain = oracles::abstention_improvement(&masses, a0.to_f64(), a1.to_f64(), abstain, 4);
                    t.record(gain.max(0.0));
                }
            }
        }
    });
    r.run("plebiscite agrees with deterministic bolshev rules", Measure::Violations, 0.0, |rng, t| {
        for _ in 0..100 {
            let size = rng.random_range(2..=6);
            let m = generators::random_two_density(rng, size, 1);
            let classes = m.ratio_classes();
            let cum0: Vec<Q> = (0..=classes.len())
                .map(|j| classes[..j].iter().fold(Q::zero(), |a, c| a + c.mass0.clone()))
                .collect();
            let tail1: Vec<Q> = (0..=classes.len())
                .map(|j| classes[j..].iter().fold(Q::zero(), |a, c| a + c.mass1.clone()))
                .collect();
            for a0 in cum0.iter().filter(|a| **a < Q::one()) {
                for a1 in tail1.iter().filter(|a| **a < Q::one()) {
                    let rule = bolshev_optimal(&m, a0, a1).expect("valid");
                    let deterministic = |b: &Q| b.is_zero() || b.is_one();
                    if rule.non_unique || !deterministic(&rule.lower.beta) || !deterministic(&rule.upper.beta) {
                        continue;
                    }
                    for i in 0..m.outcomes().len() {
                        let o = &m.outcomes()[i];
                        if o.p0.is_zero() && o.p1.is_zero() {
                            continue;
                        }
                        let d = rule.apply_at(&m, i);
                        let det = if d.p1.is_one() {
                            PlebisciteDecision::Theta1
                        } else if d.p0.is_one() {
                            PlebisciteDecision::Theta0
                        } else {
                            PlebisciteDecision::Abstain
                        };
                        t.flag(plebiscite_at(&m, i, a0, a1).expect("valid") == det);
                    }
                }
            }
        }
    });
    r.run("unilateral p-values against direct evaluation", Measure::Deviation, 1e-12, |_, t| {
        let f = FamilyDescriptor::NormalLocation { a: 1.0 };
        let (g, v) = unilateral_pvalue(&f, 0.0, 1.645).expect("valid");
        t.gap(v, 1.0 - normal_cdf(1.645));
        t.gap(g + v, 1.0);
        t.gap(unilateral_pvalue(&f, 2.0, 2.0).expect("valid").0, 0.5);
        let pois = FamilyDescriptor::Poisson { n: 1 };
        let e = (-2.0f64).exp();
        t.gap(unilateral_pvalue(&pois, 2.0, 2.0).expect("valid").0, e * (1.0 + 2.0) + 0.5 * 2.0 * e);
        t.gap(poisson_mid_cdf(2, 2.0), 4.0 * e);
        let fam = DiscreteFamilyModel::from_two_density(&golden_model());
        let (g0, v0) = fam.unilateral_pvalue("A", "0").expect("valid");
        t.record(exact_gap(&g0, &q(1, 12)));
        t.record(exact_gap(&v0, &q(11, 12)));
    });
}

/// `(x̄, s², μ0)` triples for the Student oracle.
const STUDENT_TRIPLES: [(f64, f64, f64); 10] = [
    (0.0, 1.0, 0.0),
    (1.0, 4.0, 0.0),
    (-0.4, 0.25, 0.1),
    (2.3, 1.7, 1.9),
    (10.0, 9.0, 12.0),
    (0.05, 0.01, 0.0),
    (-3.0, 2.0, -1.0),
    (5.5, 30.0, 1.0),
    (0.7, 0.5, 0.6),
    (-1.2, 3.3, -2.5),
];

const ANOVA_SHAPES: [(f64, f64); 3] = [(0.5, 0.5), (1.0, 1.0), (2.5, 3.0)];

/// `(t, u, θ1)` points for the ANOVA oracle.
const ANOVA_POINTS: [(f64, f64, f64); 4] = [(1.0, 2.0, 0.5), (3.0, 1.5, 2.0), (0.4, 0.7, 1.2), (5.0, 4.0, 8.0)];
