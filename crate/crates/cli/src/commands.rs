//! One function per subcommand, each building a result document.

use std::path::Path;

use expert_votes::bolshev::{bolshev_optimal, plebiscite_at, vote_divergence_at, PlebisciteDecision};
use expert_votes::compatible::{
    bilateral_vote, compatible_vote, param_distribution, param_distribution_weighted, Boundary, FamilyDescriptor, Law,
    ParamDistribution, PonderationSpec,
};
use expert_votes::ghost::{anova_vote, student_vote, two_binomial_vote, AnovaSummary, StudentSummary, TwoBinomialSummary};
use expert_votes::harness::{self, Suite};
use expert_votes::model_file::{LoadedModel, ModelData};
use expert_votes::numerics::DEFAULT_TAIL_TOLERANCE;
use expert_votes::simple_choice::{ExtRatio, Hypothesis, SimpleTest, TwoDensityModel};
use expert_votes::stable::{unilateral_pvalue, Side};
use expert_votes::{Rational, Scalar};

use crate::document::{Document, Mode, Value};
use crate::inputs::{self, CliScalar, Query};
use crate::{FamilyArgs, Failure, Outcome};

type Output = Result<Outcome, Failure>;

/// Runs `$body` with `$data` bound to the model data in its own numeric mode.
macro_rules! with_model {
    ($path:expr, |$data:ident| $body:expr) => {
        match inputs::load($path)? {
            LoadedModel::Exact($data) => $body,
            LoadedModel::Float($data) => $body,
        }
    };
}

fn two_density<S: Scalar>(data: &ModelData<S>) -> Result<&TwoDensityModel<S>, Failure> {
    match data {
        ModelData::TwoDensity { model, .. } => Ok(model),
        ModelData::DiscreteFamily(_) => Err(Failure::Input("this command needs a two_density model".into())),
    }
}

fn model_doc<S: Scalar>(command: &'static str, path: &Path, _data: &ModelData<S>) -> Document {
    let mut doc = Document::new(command, Mode::of::<S>());
    doc.input("model", Value::text(path.display().to_string()));
    doc
}

fn hypothesis(text: &str) -> Result<Hypothesis, Failure> {
    match text {
        "0" | "theta0" => Ok(Hypothesis::Theta0),
        "1" | "theta1" => Ok(Hypothesis::Theta1),
        other => Err(Failure::Input(format!("--theta: expected 0 or 1, got `{other}`"))),
    }
}

fn vote_fields<S: Scalar>(doc: &mut Document, p_decide_1: &S) {
    doc.put("p_decide_1", Value::prob(p_decide_1));
    doc.put("p_decide_0", Value::prob(&(S::one() - p_decide_1.clone())));
}

fn ratio_value<S: Scalar>(k: &ExtRatio<S>) -> Value {
    match k {
        ExtRatio::Finite(x) => match x.exact_string() {
            Some(e) => Value::text(e),
            None => Value::Real(x.to_f64()),
        },
        ExtRatio::Infinite => Value::text("inf"),
    }
}

fn test_value<S: Scalar>(t: &SimpleTest<S>) -> Value {
    Value::record(vec![("k", ratio_value(&t.k)), ("beta", Value::prob(&t.beta))])
}

fn decision_value(d: PlebisciteDecision) -> Value {
    Value::record(vec![("label", Value::text(d.label())), ("code", Value::Int(i64::from(d.code())))])
}

pub fn vote_simple(path: &Path, outcome: &str, theta: &str) -> Output {
    let h = hypothesis(theta)?;
    with_model!(path, |data| {
        let model = two_density(&data)?;
        let v = model.vote_simple(outcome, h)?;
        let mut doc = model_doc("vote-simple", path, &data);
        doc.input("outcome", Value::text(outcome)).input("theta", Value::text(theta));
        vote_fields(&mut doc, &v.p_decide_1);
        Ok(doc.into())
    })
}

fn weighted_inputs<S: CliScalar>(
    command: &'static str,
    path: &Path,
    data: &ModelData<S>,
    outcome: &str,
    lambda_text: &str,
) -> Result<(Document, S), Failure> {
    let lambda: S = inputs::scalar("lambda", lambda_text)?;
    let mut doc = model_doc(command, path, data);
    doc.input("outcome", Value::text(outcome)).input("lambda", Value::prob(&lambda));
    Ok((doc, lambda))
}

pub fn vote_weighted(path: &Path, outcome: &str, lambda: &str) -> Output {
    with_model!(path, |data| {
        let model = two_density(&data)?;
        let (mut doc, lambda) = weighted_inputs("vote-weighted", path, &data, outcome, lambda)?;
        let v = model.vote_weighted(outcome, &lambda)?;
        vote_fields(&mut doc, &v.p_decide_1);
        Ok(doc.into())
    })
}

pub fn posterior(path: &Path, outcome: &str, lambda: &str) -> Output {
    with_model!(path, |data| {
        let model = two_density(&data)?;
        let (mut doc, lambda) = weighted_inputs("posterior", path, &data, outcome, lambda)?;
        let p = model.posterior_prob_1(outcome, &lambda)?;
        doc.put("posterior_theta1", Value::prob(&p));
        Ok(doc.into())
    })
}

fn alphas<S: CliScalar>(doc: &mut Document, alpha0: &str, alpha1: &str) -> Result<(S, S), Failure> {
    let a0: S = inputs::scalar("alpha0", alpha0)?;
    let a1: S = inputs::scalar("alpha1", alpha1)?;
    doc.input("alpha0", Value::prob(&a0)).input("alpha1", Value::prob(&a1));
    Ok((a0, a1))
}

pub fn bolshev(path: &Path, alpha0: &str, alpha1: &str, outcome: Option<&str>) -> Output {
    with_model!(path, |data| {
        let model = two_density(&data)?;
        let mut doc = model_doc("bolshev", path, &data);
        if let Some(o) = outcome {
            doc.input("outcome", Value::text(o));
        }
        let (a0, a1) = alphas(&mut doc, alpha0, alpha1)?;
        let rule = bolshev_optimal(model, &a0, &a1)?;
        doc.put("lower_test", test_value(&rule.lower))
            .put("upper_test", test_value(&rule.upper))
            .put("non_unique", Value::Bool(rule.non_unique))
            .put("risk_theta0", Value::prob(&rule.risk(model, Hypothesis::Theta0)))
            .put("risk_theta1", Value::prob(&rule.risk(model, Hypothesis::Theta1)))
            .put("abstention_theta0", Value::prob(&rule.abstention(model, Hypothesis::Theta0)))
            .put("abstention_theta1", Value::prob(&rule.abstention(model, Hypothesis::Theta1)));
        let indices: Vec<usize> = match outcome {
            Some(o) => vec![model.outcome_index(o)?],
            None => (0..model.outcomes().len()).collect(),
        };
        let decisions = indices
            .into_iter()
            .map(|i| {
                let d = rule.apply_at(model, i);
                Value::record(vec![
                    ("outcome", Value::text(model.outcomes()[i].label.clone())),
                    ("p_decide_0", Value::prob(&d.p0)),
                    ("p_decide_1", Value::prob(&d.p1)),
                    ("p_abstain", Value::prob(&d.p2)),
                ])
            })
            .collect();
        doc.put("decisions", Value::List(decisions));
        Ok(doc.into())
    })
}

pub fn plebiscite(path: &Path, outcome: &str, alpha0: &str, alpha1: &str) -> Output {
    with_model!(path, |data| {
        let model = two_density(&data)?;
        let mut doc = model_doc("plebiscite", path, &data);
        doc.input("outcome", Value::text(outcome));
        let (a0, a1) = alphas(&mut doc, alpha0, alpha1)?;
        let i = model.outcome_index(outcome)?;
        let decision = plebiscite_at(model, i, &a0, &a1)?;
        doc.put("decision", decision_value(decision))
            .put("vote_theta0_for_0", Value::prob(&model.vote_simple_at(i, Hypothesis::Theta0).p_decide_0()))
            .put("vote_theta1_for_1", Value::prob(&model.vote_simple_at(i, Hypothesis::Theta1).p_decide_1));
        Ok(doc.into())
    })
}

pub fn divergence(path: &Path, outcome: &str) -> Output {
    with_model!(path, |data| {
        let model = two_density(&data)?;
        let mut doc = model_doc("divergence", path, &data);
        doc.input("outcome", Value::text(outcome));
        let g = vote_divergence_at(model, model.outcome_index(outcome)?);
        let value = match g.exact_string() {
            Some(e) => Value::text(e),
            None => Value::Real(g.to_f64()),
        };
        doc.put("divergence", value);
        Ok(doc.into())
    })
}

pub fn vote_stable(path: &Path, outcome: &str, theta: &str) -> Output {
    with_model!(path, |data| {
        let family = data.to_family()?;
        let mut doc = model_doc("vote-stable", path, &data);
        doc.input("outcome", Value::text(outcome)).input("theta", Value::text(theta));
        let v = family.vote_stable(outcome, theta)?;
        let side = if family.side_indices(Side::Theta1).contains(&family.theta_index(theta)?) { "theta1" } else { "theta0" };
        vote_fields(&mut doc, &v.p_decide_1);
        doc.put("side", Value::text(side));
        Ok(doc.into())
    })
}

pub fn pvalue_model(path: &Path, outcome: &str, theta: &str) -> Output {
    with_model!(path, |data| {
        let family = data.to_family()?;
        let mut doc = model_doc("pvalue", path, &data);
        doc.input("outcome", Value::text(outcome)).input("theta", Value::text(theta));
        let (g, upper) = family.unilateral_pvalue(outcome, theta)?;
        doc.put("lower_tail", Value::prob(&g)).put("upper_tail", Value::prob(&upper));
        Ok(doc.into())
    })
}

fn family_doc(command: &'static str, args: &FamilyArgs) -> Result<(Document, FamilyDescriptor<f64>, f64), Failure> {
    let family = inputs::family(args)?;
    let t = inputs::real("t", &args.t)?;
    let mut doc = Document::new(command, Mode::Float);
    doc.input("family", Value::text(family.tag()));
    let constants = [("a", &args.a), ("p", &args.p), ("q", &args.q), ("m", &args.m)];
    for (flag, value) in constants {
        if let Some(text) = value {
            doc.input(flag, Value::Real(inputs::real(flag, text)?));
        }
    }
    if let Some(n) = args.n {
        doc.input("n", Value::Int(n as i64));
    }
    doc.input("t", Value::Real(t));
    Ok((doc, family, t))
}

pub fn pvalue_family(args: &FamilyArgs, theta: &str) -> Output {
    let (mut doc, family, t) = family_doc("pvalue", args)?;
    let theta0 = inputs::real("theta", theta)?;
    doc.input("theta", Value::Real(theta0));
    let (g, upper) = unilateral_pvalue(&family, theta0, t)?;
    doc.put("lower_tail", Value::prob(&g)).put("upper_tail", Value::prob(&upper));
    Ok(doc.into())
}

fn law_value(law: &Law<f64>) -> Value {
    let r = Value::Real;
    let fields: Vec<(&str, Value)> = match *law {
        Law::Normal { mean, sd } => vec![("law", Value::text("normal")), ("mean", r(mean)), ("sd", r(sd))],
        Law::Uniform { lo, hi } => vec![("law", Value::text("uniform")), ("lo", r(lo)), ("hi", r(hi))],
        Law::Pareto { scale } => vec![("law", Value::text("pareto")), ("scale", r(scale))],
        Law::NormalScale { s } => vec![("law", Value::text("normal-scale")), ("s", r(s))],
        Law::InverseGamma { shape, scale } => {
            vec![("law", Value::text("inverse-gamma")), ("shape", r(shape)), ("scale", r(scale))]
        }
        Law::PowerInverseGamma { shape, scale, power } => vec![
            ("law", Value::text("power-inverse-gamma")),
            ("shape", r(shape)),
            ("scale", r(scale)),
            ("power", r(power)),
        ],
        Law::Gamma { shape, rate } => vec![("law", Value::text("gamma")), ("shape", r(shape)), ("rate", r(rate))],
        Law::Beta { a, b } => vec![("law", Value::text("beta")), ("a", r(a)), ("b", r(b))],
        Law::NoncentralBeta { p, q, t, .. } => {
            vec![("law", Value::text("noncentral-beta-continuous")), ("p", r(p)), ("q", r(q)), ("t", r(t))]
        }
        Law::Student { df, loc, scale } => {
            vec![("law", Value::text("student")), ("df", Value::Int(df as i64)), ("loc", r(loc)), ("scale", r(scale))]
        }
    };
    Value::record(fields)
}

/// Atoms, components and the answers to the requested queries.
fn distribution_fields(doc: &mut Document, dist: &ParamDistribution<f64>, queries: &[String]) -> Result<(), Failure> {
    let parsed: Vec<Query> = queries.iter().map(|q| inputs::query(q)).collect::<Result<_, _>>()?;
    let atoms = dist
        .atoms()
        .iter()
        .map(|&(at, mass)| Value::record(vec![("at", Value::Real(at)), ("mass", Value::Prob { value: mass, exact: None })]))
        .collect();
    let components = dist
        .components()
        .iter()
        .map(|c| {
            let mut fields = vec![("weight".to_string(), Value::Prob { value: c.weight, exact: None })];
            if let Value::Record(law) = law_value(&c.law) {
                fields.extend(law);
            }
            Value::Record(fields)
        })
        .collect();
    doc.put("atoms", Value::List(atoms)).put("components", Value::List(components));
    let mut answers = Vec::new();
    for (text, q) in queries.iter().zip(parsed) {
        let (kind, value) = match q {
            Query::Cdf(x) => ("cdf", Value::Prob { value: dist.cdf(x), exact: None }),
            Query::Quantile(p) => ("quantile", Value::Real(dist.quantile(p)?)),
            Query::Interval(iv) => ("interval", Value::Prob { value: dist.interval_prob(&iv)?, exact: None }),
        };
        answers.push(Value::record(vec![
            ("query", Value::text(text.clone())),
            ("kind", Value::text(kind)),
            ("value", value),
        ]));
    }
    if !answers.is_empty() {
        doc.put("queries", Value::List(answers));
    }
    Ok(())
}

pub fn dist(args: &FamilyArgs, theta_f: Option<&str>, queries: &[String]) -> Output {
    let (mut doc, family, t) = family_doc("dist", args)?;
    if !queries.is_empty() {
        doc.input("query", Value::List(queries.iter().map(|q| Value::text(q.clone())).collect()));
    }
    let dist = param_distribution(&family, t)?;
    if let Some(text) = theta_f {
        let theta_f = inputs::real("theta-f", text)?;
        doc.input("theta_f", Value::Real(theta_f));
        let open = compatible_vote(&family, t, theta_f, Boundary::Open)?;
        let closed = compatible_vote(&family, t, theta_f, Boundary::Closed)?;
        doc.put("vote_open", Value::Prob { value: open, exact: None })
            .put("vote_closed", Value::Prob { value: closed, exact: None });
    }
    distribution_fields(&mut doc, &dist, queries)?;
    Ok(doc.into())
}

pub fn dist_weighted(args: &FamilyArgs, median: &str, pull: &str, spread: &str, queries: &[String]) -> Output {
    let (mut doc, family, t) = family_doc("dist-weighted", args)?;
    let spec = PonderationSpec {
        median: inputs::real("median", median)?,
        pull: inputs::real("pull", pull)?,
        spread: inputs::real("spread", spread)?,
    };
    doc.input("median", Value::Real(spec.median))
        .input("pull", Value::Real(spec.pull))
        .input("spread", Value::Real(spec.spread));
    if !queries.is_empty() {
        doc.input("query", Value::List(queries.iter().map(|q| Value::text(q.clone())).collect()));
    }
    let dist = param_distribution_weighted(&family, t, &spec)?;
    distribution_fields(&mut doc, &dist, queries)?;
    Ok(doc.into())
}

pub fn bilateral(args: &FamilyArgs, theta1: &str, theta2: &str) -> Output {
    let (mut doc, family, t) = family_doc("bilateral", args)?;
    let (lo, hi) = (inputs::real("theta1", theta1)?, inputs::real("theta2", theta2)?);
    doc.input("theta1", Value::Real(lo)).input("theta2", Value::Real(hi));
    let v = bilateral_vote(&family, t, lo, hi)?;
    doc.put("p_decide_0", Value::Prob { value: v.p_decide_0(), exact: None })
        .put("p_decide_1", Value::Prob { value: v.p_decide_1, exact: None });
    Ok(doc.into())
}

pub fn student(n: u64, mean: &str, variance: &str, mu0: &str, queries: &[String]) -> Output {
    let s = StudentSummary {
        n,
        mean: inputs::real("mean", mean)?,
        variance: inputs::real("variance", variance)?,
        mu0: inputs::real("mu0", mu0)?,
    };
    let mut doc = Document::new("student", Mode::Float);
    doc.input("n", Value::Int(n as i64))
        .input("mean", Value::Real(s.mean))
        .input("variance", Value::Real(s.variance))
        .input("mu0", Value::Real(s.mu0));
    let r = student_vote(&s)?;
    vote_fields(&mut doc, &r.vote.p_decide_1);
    distribution_fields(&mut doc, &r.distribution, queries)?;
    Ok(doc.into())
}

pub fn anova(p: &str, q: &str, t: &str, u: &str, theta1: &str) -> Output {
    let s = AnovaSummary {
        p: inputs::real("p", p)?,
        q: inputs::real("q", q)?,
        t: inputs::real("t", t)?,
        u: inputs::real("u", u)?,
        theta1: inputs::real("theta1", theta1)?,
    };
    let mut doc = Document::new("anova", Mode::Float);
    doc.input("p", Value::Real(s.p))
        .input("q", Value::Real(s.q))
        .input("t", Value::Real(s.t))
        .input("u", Value::Real(s.u))
        .input("theta1", Value::Real(s.theta1));
    let v = anova_vote(&s)?;
    vote_fields(&mut doc, &v);
    doc.put("truncation_bound", Value::Real(DEFAULT_TAIL_TOLERANCE));
    Ok(doc.into())
}

pub fn two_binomial(n1: u64, x1: u64, n2: u64, x2: u64) -> Output {
    let s = TwoBinomialSummary { n1, x1, n2, x2 };
    let v: Rational = two_binomial_vote(&s)?;
    let mut doc = Document::new("two-binomial", Mode::Rational);
    doc.input("n1", Value::Int(n1 as i64))
        .input("x1", Value::Int(x1 as i64))
        .input("n2", Value::Int(n2 as i64))
        .input("x2", Value::Int(x2 as i64));
    doc.put("p_p1_le_p2", Value::prob(&v));
    Ok(doc.into())
}

pub fn check(suite: &str, seed: u64) -> Output {
    let selected: Suite = suite.parse()?;
    let report = harness::run(selected, seed);
    let mut doc = Document::new("check", Mode::Float);
    doc.input("suite", Value::text(selected.name())).input("seed", Value::Int(seed as i64));
    let properties = report
        .results
        .iter()
        .map(|r| {
            Value::record(vec![
                ("suite", Value::text(r.suite.name())),
                ("name", Value::text(r.name)),
                ("passed", Value::Bool(r.passed)),
                ("measure", Value::text(r.measure.name())),
                ("cases", Value::Int(r.cases as i64)),
                ("worst", Value::Real(r.worst)),
                ("tolerance", Value::Real(r.tolerance)),
            ])
        })
        .collect();
    doc.put("passed", Value::Bool(report.passed())).put("properties", Value::List(properties));
    Ok(Outcome { document: doc, text: Some(format!("{report}\n")), passed: report.passed() })
}
