//! Acceptance criteria, one pass/fail line each.
//!
//! Every criterion records the worst deviation it observes and compares it to
//! its tolerance. The process exits with status 1 when any criterion fails.

use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use expert_votes::bolshev::bolshev_optimal;
use expert_votes::compatible::{
    compatible_vote, param_distribution, param_distribution_weighted, Boundary, FamilyDescriptor, Interval,
    PonderationSpec,
};
use expert_votes::ghost::{anova_vote, student_vote, two_binomial_vote, AnovaSummary, StudentSummary, TwoBinomialSummary};
use expert_votes::harness::{self, generators, oracles, Suite};
use expert_votes::model_file::{load_model, LoadedModel, ModelData};
use expert_votes::numerics::{beta_prime_cdf, normal_cdf, student_cdf};
use expert_votes::simple_choice::{Hypothesis, TwoDensityModel};
use expert_votes::stable::{DiscreteFamilyModel, GapConvention};
use expert_votes::{parse_rational, Scalar};
use num::rational::BigRational as Q;
use num::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Worst observed deviation of one criterion.
struct Worst {
    value: f64,
    cases: usize,
}

impl Worst {
    fn new() -> Self {
        Worst { value: 0.0, cases: 0 }
    }

    fn gap(&mut self, got: f64, want: f64) {
        self.push((got - want).abs());
    }

    fn exact(&mut self, got: &Q, want: &Q) {
        self.push((got.clone() - want.clone()).to_f64().abs());
    }

    fn push(&mut self, d: f64) {
        self.cases += 1;
        self.value = if d.is_nan() { f64::INFINITY } else { self.value.max(d) };
    }
}

struct Line {
    id: usize,
    title: &'static str,
    worst: Worst,
    tolerance: f64,
    note: String,
}

impl Line {
    fn passed(&self) -> bool {
        self.worst.cases > 0 && self.worst.value <= self.tolerance
    }
}

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn fixture() -> TwoDensityModel<Q> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/golden.model");
    match load_model(&path).expect("fixture loads") {
        LoadedModel::Exact(ModelData::TwoDensity { model, .. }) => model,
        _ => panic!("fixture must be an exact two-density model"),
    }
}

fn golden_table() -> Worst {
    let m = fixture();
    let rows = [["11/12", "5/6", "3/4", "3/4"], ["2/3", "1/2", "1/3", "1/2"], ["1/4", "1/6", "1/12", "1/4"]];
    let mut w = Worst::new();
    for (label, row) in ["A", "B", "C"].iter().zip(rows) {
        for (lambda, want) in [q(0, 1), q(1, 2), q(1, 1)].iter().zip(row) {
            let got = m.vote_weighted(label, lambda).expect("known outcome").p_decide_1;
            w.exact(&got, &parse_rational(want).expect("literal"));
        }
        let post = m.posterior_prob_1(label, &q(1, 2)).expect("known outcome");
        w.exact(&post, &parse_rational(row[3]).expect("literal"));
    }
    w
}

fn poisson_inference() -> Worst {
    let mut w = Worst::new();
    for n in [1u64, 4] {
        let family = FamilyDescriptor::Poisson { n };
        for t in [0u64, 1, 3, 7] {
            let dist = param_distribution(&family, t as f64).expect("valid");
            for k in 1..=20 {
                let theta = 0.4 * k as f64;
                let mass = dist.interval_prob(&Interval::below(theta, true).expect("valid")).expect("valid");
                w.gap(mass, 1.0 - oracles::poisson_mid_cdf_oracle(t, n as f64 * theta));
                if t == 0 && n == 1 {
                    w.gap(mass, 1.0 - 0.5 * (-theta).exp());
                }
            }
        }
    }
    w
}

fn binomial_inference() -> Worst {
    let mut w = Worst::new();
    for n in [1u64, 5, 10, 20] {
        let family = FamilyDescriptor::Binomial { n };
        for omega in 0..=n {
            let dist = param_distribution(&family, omega as f64).expect("valid");
            // At the closed right end the CDF is the total mass.
            for k in 0..20 {
                let theta = k as f64 / 20.0;
                w.gap(dist.cdf(theta), 1.0 - oracles::binomial_mid_cdf_oracle(n, omega, theta));
            }
            w.gap(dist.cdf(1.0), 1.0);
            let atom = |x: f64| dist.interval_prob(&Interval::point(x).expect("valid")).expect("valid");
            w.gap(atom(0.0), if omega == 0 { 0.5 } else { 0.0 });
            w.gap(atom(1.0), if omega == n { 0.5 } else { 0.0 });
        }
    }
    w
}

fn normal_location() -> Worst {
    let mut w = Worst::new();
    for (a, t) in [(1.0, 0.0), (2.5, -1.3), (0.4, 3.2)] {
        let family = FamilyDescriptor::NormalLocation { a };
        let dist = param_distribution(&family, t).expect("valid");
        for k in 1..=20 {
            let p = k as f64 / 21.0;
            let x = dist.quantile(p).expect("valid");
            w.gap(normal_cdf((x - t) / a), p);
        }
        for pull in [0.0, 1.0, 3.0] {
            for spread in [0.0, 1.0] {
                let median = -0.6;
                let dist = param_distribution_weighted(&family, t, &PonderationSpec { median, pull, spread }).expect("valid");
                let mean = (t + pull * median) / (1.0 + pull);
                let sd = (a * a + spread * spread).sqrt() / (1.0 + pull);
                for k in -10..=10 {
                    let x = mean + 0.35 * k as f64 * sd;
                    w.gap(dist.cdf(x), normal_cdf((x - mean) / sd));
                }
            }
        }
    }
    w
}

fn gamma_ponderation() -> Worst {
    let mut w = Worst::new();
    let family = FamilyDescriptor::GammaScale { p: 1.0 };
    let (median, pull) = (2.0, 1.5);
    let spec = PonderationSpec { median, pull, spread: 0.0 };
    for i in 0..10 {
        let t = 0.25 + 0.6 * i as f64;
        let dist = param_distribution_weighted(&family, t, &spec).expect("valid");
        let u = t.ln();
        for j in 0..10 {
            let theta_f = 0.2 + 0.5 * j as f64;
            let beta_f = (1.0 + pull) * theta_f.ln() - pull * median.ln();
            let open = dist.interval_prob(&Interval::new(0.0, theta_f, false, false).expect("valid")).expect("valid");
            w.gap(open, (-(u - beta_f).exp()).exp());
        }
    }
    w
}

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

fn student() -> Worst {
    let mut w = Worst::new();
    for n in [2u64, 4, 10, 30] {
        for (mean, variance, mu0) in STUDENT_TRIPLES {
            let s = StudentSummary { n, mean, variance, mu0 };
            let v = student_vote(&s).expect("valid").vote;
            w.gap(v.p_decide_1, oracles::student_vote_oracle(&s));
            let z = (n as f64).sqrt() * (mean - mu0) / variance.sqrt();
            w.gap(v.p_decide_0(), student_cdf(n - 1, z).expect("valid"));
        }
    }
    w
}

fn anova() -> (Worst, Worst, f64) {
    let start = Instant::now();
    let (mut branch, mut w) = (Worst::new(), Worst::new());
    let points = [(1.0, 2.0, 0.5), (3.0, 1.5, 2.0), (0.4, 0.7, 1.2), (5.0, 4.0, 8.0)];
    for (p, q_) in [(0.5, 0.5), (1.0, 1.0), (2.5, 3.0)] {
        for (t, u, theta1) in points {
            let zero = anova_vote(&AnovaSummary { p, q: q_, t, u, theta1: 0.0 }).expect("valid");
            branch.gap(zero, 1.0 - beta_prime_cdf(p, q_, t / u).expect("valid"));
            let s = AnovaSummary { p, q: q_, t, u, theta1 };
            w.gap(anova_vote(&s).expect("valid"), oracles::anova_vote_oracle(&s));
        }
    }
    (branch, w, start.elapsed().as_secs_f64())
}

fn two_binomial(rng: &mut ChaCha8Rng) -> (Worst, Worst, f64) {
    let mut exact = Worst::new();
    let vote = |n1, x1, n2, x2| two_binomial_vote::<Q>(&TwoBinomialSummary { n1, x1, n2, x2 }).expect("valid");
    for n in 2..=10u64 {
        for x in 1..n {
            exact.exact(&vote(n, x, n, x), &q(1, 2));
        }
    }
    for n1 in 2..=7u64 {
        for n2 in 2..=7u64 {
            for x1 in 1..n1 {
                for x2 in 1..n2 {
                    exact.exact(&vote(n1, n1 - x1, n2, n2 - x2), &(Q::one() - vote(n1, x1, n2, x2)));
                }
            }
        }
    }
    let start = Instant::now();
    let mut z = Worst::new();
    for _ in 0..10 {
        let (n1, n2) = (rng.random_range(1..=15), rng.random_range(1..=15));
        let s = TwoBinomialSummary { n1, x1: rng.random_range(0..=n1), n2, x2: rng.random_range(0..=n2) };
        let v = two_binomial_vote::<f64>(&s).expect("valid");
        z.push(oracles::two_binomial_monte_carlo(&s, 1_000_000, rng).z_score(v));
    }
    (exact, z, start.elapsed().as_secs_f64())
}

fn neutrality(rng: &mut ChaCha8Rng) -> (Worst, Worst) {
    let mut exact = Worst::new();
    let golden = DiscreteFamilyModel::from_two_density(&fixture());
    for theta in 0..2 {
        exact.exact(&golden.neutrality_sum(theta), &q(1, 2));
    }
    for i in 0..100 {
        let (levels, thetas) = (rng.random_range(2..=7), rng.random_range(2..=4));
        let family = generators::random_mlr_family(rng, levels, thetas, i % 2 == 0, 0);
        for convention in [GapConvention::Left, GapConvention::Right] {
            let family = family.clone().with_gap_convention(convention);
            for theta in 0..thetas {
                exact.exact(&family.neutrality_sum(theta), &q(1, 2));
            }
        }
    }
    let mut z = Worst::new();
    let cases: [(FamilyDescriptor<f64>, [f64; 5]); 3] = [
        (FamilyDescriptor::NormalLocation { a: 0.8 }, [-2.0, -0.1, 0.0, 1.7, 5.0]),
        (FamilyDescriptor::Poisson { n: 3 }, [0.1, 0.5, 1.0, 2.5, 6.0]),
        (FamilyDescriptor::Binomial { n: 9 }, [0.02, 0.25, 0.5, 0.8, 0.97]),
    ];
    for (family, thetas) in cases {
        for theta in thetas {
            z.push(oracles::vote_mean_monte_carlo(&family, theta, 100_000, rng).z_score(0.5));
        }
    }
    (exact, z)
}

fn bolshev(rng: &mut ChaCha8Rng) -> Worst {
    let mut w = Worst::new();
    let alphas = [q(1, 20), q(1, 10), q(3, 10)];
    let mut models = 0;
    while models < 50 {
        let size = rng.random_range(2..=5);
        let m = generators::random_two_density(rng, size, 0);
        if m.ratio_classes().len() > 5 {
            continue;
        }
        models += 1;
        let masses: Vec<(f64, f64)> = m.ratio_classes().iter().map(|c| (c.mass0.to_f64(), c.mass1.to_f64())).collect();
        for a0 in &alphas {
            for a1 in &alphas {
                let rule = bolshev_optimal(&m, a0, a1).expect("valid");
                // The rule itself must be admissible before it is compared.
                let admissible = rule.risk(&m, Hypothesis::Theta0) <= *a0 && rule.risk(&m, Hypothesis::Theta1) <= *a1;
                let abstain = (
                    rule.abstention(&m, Hypothesis::Theta0).to_f64(),
                    rule.abstention(&m, Hypothesis::Theta1).to_f64(),
                );
                let gain = oracles::abstention_improvement(&masses, a0.to_f64(), a1.to_f64(), abstain, 4);
                w.push(if admissible { gain.max(0.0) } else { f64::INFINITY });
            }
        }
    }
    w
}

fn monotonicity(seed: u64) -> (Worst, String) {
    let mut w = Worst::new();
    let mut tags = Vec::new();
    let families: [(FamilyDescriptor<f64>, f64, f64, f64); 8] = [
        (FamilyDescriptor::NormalLocation { a: 1.0 }, 0.4, -6.0, 6.0),
        (FamilyDescriptor::UniformLocation, 0.4, -2.0, 3.0),
        (FamilyDescriptor::UniformScale, 1.5, 0.1, 6.0),
        (FamilyDescriptor::NormalScale { m: 0.0 }, 1.2, 0.05, 8.0),
        (FamilyDescriptor::GammaScale { p: 2.0 }, 1.5, 0.05, 10.0),
        (FamilyDescriptor::Poisson { n: 3 }, 2.0, 0.0, 5.0),
        (FamilyDescriptor::Binomial { n: 8 }, 3.0, 0.0, 1.0),
        (FamilyDescriptor::NoncentralBeta { p: 1.0, q: 2.0 }, 1.0, 0.0, 12.0),
    ];
    for (family, t, lo, hi) in families {
        tags.push(family.tag());
        for boundary in [Boundary::Open, Boundary::Closed] {
            let grid: Vec<f64> = (0..=100).map(|k| lo + (hi - lo) * k as f64 / 100.0).collect();
            let votes: Vec<f64> = grid
                .iter()
                .map(|&th| compatible_vote(&family, t, th, boundary).unwrap_or(f64::NAN))
                .collect();
            for pair in votes.windows(2) {
                w.push((pair[0] - pair[1]).max(0.0));
            }
        }
    }
    let report = harness::run(Suite::All, seed);
    let failed: Vec<&str> = report.results.iter().filter(|r| !r.passed).map(|r| r.name).collect();
    w.push(failed.len() as f64);
    let note = format!(
        "{} families gridded; check --suite all: {} of {} properties green{}",
        tags.len(),
        report.results.len() - failed.len(),
        report.results.len(),
        if failed.is_empty() { String::new() } else { format!(" (failed: {})", failed.join("; ")) }
    );
    (w, note)
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let mut lines = Vec::new();
    let mut add = |id, title, worst, tolerance, note: String| lines.push(Line { id, title, worst, tolerance, note });

    add(1, "golden table, 12 cells, rational mode", golden_table(), 0.0, String::new());
    add(2, "poisson distributional inference", poisson_inference(), 1e-10, String::new());
    add(3, "binomial distributional inference", binomial_inference(), 1e-10, String::new());
    add(4, "normal location inference and weighted inference", normal_location(), 1e-10, String::new());
    add(5, "gamma-scale ponderation, p = 1", gamma_ponderation(), 1e-10, String::new());
    add(6, "student ghost inference", student(), 1e-8, String::new());
    let (branch, w, secs) = anova();
    add(7, "anova series without noncentrality", branch, 1e-12, String::new());
    add(7, "anova series against double quadrature", w, 1e-7, format!("runtime {secs:.2}s (limit 10s)"));
    let (exact, z, secs) = two_binomial(&mut rng);
    add(8, "two-binomial exact identities", exact, 0.0, String::new());
    add(8, "two-binomial monte carlo, 1e6 draws x 10 tuples", z, 4.0, format!("worst in sigma; runtime {secs:.2}s (limit 20s)"));
    let (exact, z) = neutrality(&mut rng);
    add(9, "neutrality, exact rational", exact, 0.0, String::new());
    add(9, "neutrality, monte carlo 1e5 draws", z, 4.0, "worst in sigma".to_string());
    add(10, "bolshev optimality against grid rules", bolshev(&mut rng), 1e-9, String::new());
    let (w, note) = monotonicity(1);
    add(11, "monotonicity and compatibility", w, 0.0, note);

    let mut failed = 0;
    for line in &lines {
        let status = if line.passed() { "PASS" } else { "FAIL" };
        failed += usize::from(!line.passed());
        let note = if line.note.is_empty() { String::new() } else { format!("  [{}]", line.note) };
        println!(
            "criterion {:>2} {status}: {} (cases={}, worst={:.3e}, tol={:.0e}){note}",
            line.id, line.title, line.worst.cases, line.worst.value, line.tolerance
        );
    }
    let elapsed = start.elapsed().as_secs_f64();
    println!("acceptance: {} of {} checks passed in {elapsed:.1}s", lines.len() - failed, lines.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
