use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture() -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/golden.model");
    path.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_expert-votes")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    let out = run(&all);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn temp_model(name: &str, text: &str) -> String {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn weighted_vote_on_the_fixture_is_exactly_one_half() {
    let model = fixture();
    let doc = json(&["vote-weighted", "--model", &model, "--outcome", "B", "--lambda", "1/2"]);
    assert_eq!(doc["command"], "vote-weighted");
    assert_eq!(doc["numeric_mode"], "rational");
    assert_eq!(doc["result"]["p_decide_1"]["exact"], "1/2");
    assert_eq!(doc["result"]["p_decide_1"]["value"], 0.5);
    assert_eq!(doc["inputs"]["lambda"]["exact"], "1/2");
}

#[test]
fn golden_votes_and_posteriors_through_the_binary() {
    let model = fixture();
    for (outcome, vote, post) in [("A", "11/12", "3/4"), ("B", "2/3", "1/2"), ("C", "1/4", "1/4")] {
        let doc = json(&["vote-simple", "--model", &model, "--outcome", outcome, "--theta", "0"]);
        assert_eq!(doc["result"]["p_decide_1"]["exact"], vote);
        let doc = json(&["posterior", "--model", &model, "--outcome", outcome, "--lambda", "1/2"]);
        assert_eq!(doc["result"]["posterior_theta1"]["exact"], post);
    }
    let doc = json(&["vote-stable", "--model", &model, "--outcome", "A", "--theta", "0"]);
    assert_eq!(doc["result"]["p_decide_1"]["exact"], "11/12");
    let doc = json(&["divergence", "--model", &model, "--outcome", "B"]);
    assert_eq!(doc["result"]["divergence"], "0");
}

#[test]
fn poisson_distribution_cdf_for_a_zero_count() {
    let doc = json(&["dist", "--family", "poisson", "--n", "1", "--t", "0", "--query", "cdf:1"]);
    let value = doc["result"]["queries"][0]["value"]["value"].as_f64().unwrap();
    assert!((value - (1.0 - 0.5 * (-1.0f64).exp())).abs() < 1e-12);
    assert_eq!(doc["numeric_mode"], "float");
    assert_eq!(doc["result"]["atoms"][0]["mass"]["value"], 0.5);
}

#[test]
fn plebiscite_keeps_only_theta1_at_a() {
    let model = fixture();
    let doc = json(&["plebiscite", "--model", &model, "--outcome", "A", "--alpha0", "0.3", "--alpha1", "0.3"]);
    assert_eq!(doc["result"]["decision"]["code"], 1);
    assert_eq!(doc["result"]["decision"]["label"], "theta1");
}

#[test]
fn bolshev_reports_rule_risks_and_decisions() {
    let model = fixture();
    let doc = json(&["bolshev", "--model", &model, "--alpha0", "1/6", "--alpha1", "1/6"]);
    let r = &doc["result"];
    assert_eq!(r["risk_theta0"]["exact"], "1/6");
    assert_eq!(r["risk_theta1"]["exact"], "1/6");
    assert_eq!(r["decisions"].as_array().unwrap().len(), 3);
    assert_eq!(r["decisions"][0]["p_decide_1"]["exact"], "1");
    assert_eq!(r["decisions"][1]["p_abstain"]["exact"], "1");
    assert_eq!(r["decisions"][2]["p_decide_0"]["exact"], "1");
}

#[test]
fn float_literals_switch_the_model_to_float_mode() {
    let text = "kind = \"two_density\"\n\n[[outcome]]\nlabel = \"x\"\np0 = 0.25\np1 = 0.75\n\n[[outcome]]\nlabel = \"y\"\np0 = 0.75\np1 = 0.25\n";
    let path = temp_model("float.model", text);
    let doc = json(&["vote-simple", "--model", &path, "--outcome", "x", "--theta", "1"]);
    assert_eq!(doc["numeric_mode"], "float");
    assert!(doc["result"]["p_decide_1"].get("exact").is_none());
    assert!((doc["result"]["p_decide_1"]["value"].as_f64().unwrap() - 0.625).abs() < 1e-15);
}

#[test]
fn discrete_family_models_give_stable_votes_and_pvalues() {
    let text = r#"
kind = "discrete_family"
thetas = ["lo", "mid", "hi"]
split = 1

[[outcome]]
label = "x0"
t = 0
density = ["1/2", "1/4", "1/8"]

[[outcome]]
label = "x1"
t = 1
density = ["1/2", "3/4", "7/8"]
"#;
    let path = temp_model("family.model", text);
    let doc = json(&["vote-stable", "--model", &path, "--outcome", "x1", "--theta", "mid"]);
    assert_eq!(doc["result"]["p_decide_1"]["exact"], "3/8");
    assert_eq!(doc["result"]["side"], "theta0");
    let doc = json(&["pvalue", "--model", &path, "--outcome", "x0", "--theta", "hi"]);
    assert_eq!(doc["result"]["lower_tail"]["exact"], "1/16");
    assert_eq!(doc["result"]["upper_tail"]["exact"], "15/16");
}

#[test]
fn family_pvalue_bilateral_student_anova_two_binomial() {
    let doc = json(&["pvalue", "--family", "normal-location", "--a", "1", "--t", "1.6448536269514722", "--theta", "0"]);
    assert!((doc["result"]["upper_tail"]["value"].as_f64().unwrap() - 0.05).abs() < 1e-12);

    let doc = json(&["bilateral", "--family", "normal-location", "--a", "1", "--t", "0", "--theta1", "-1", "--theta2", "1"]);
    assert!((doc["result"]["p_decide_0"]["value"].as_f64().unwrap() - 0.6826894921370859).abs() < 1e-12);

    let doc = json(&["student", "--n", "10", "--mean", "1", "--variance", "4", "--mu0", "1", "--query", "interval:(-inf,1]"]);
    assert!((doc["result"]["p_decide_1"]["value"].as_f64().unwrap() - 0.5).abs() < 1e-14);
    assert!((doc["result"]["queries"][0]["value"]["value"].as_f64().unwrap() - 0.5).abs() < 1e-14);
    assert_eq!(doc["result"]["components"][0]["law"], "student");

    let doc = json(&["anova", "--p", "1", "--q", "1", "--t", "1", "--u", "1", "--theta1", "0"]);
    assert!((doc["result"]["p_decide_1"]["value"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!(doc["result"]["truncation_bound"].as_f64().unwrap() > 0.0);

    let doc = json(&["two-binomial", "--n1", "1", "--x1", "0", "--n2", "1", "--x2", "1"]);
    assert_eq!(doc["result"]["p_p1_le_p2"]["exact"], "7/8");
    assert_eq!(doc["numeric_mode"], "rational");
}

#[test]
fn weighted_distribution_and_compatible_votes() {
    let doc = json(&[
        "dist-weighted", "--family", "normal-location", "--a", "1", "--t", "2", "--median", "0", "--pull", "1",
        "--query", "cdf:1",
    ]);
    assert!((doc["result"]["queries"][0]["value"]["value"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    let doc = json(&["dist", "--family", "uniform-scale", "--t", "2", "--theta-f", "4"]);
    assert!((doc["result"]["vote_open"]["value"].as_f64().unwrap() - 0.5).abs() < 1e-15);
    assert!((doc["result"]["vote_closed"]["value"].as_f64().unwrap() - 0.5).abs() < 1e-15);
}

#[test]
fn printed_quantiles_round_trip_through_cdf_queries() {
    let doc = json(&["dist", "--family", "gamma-scale", "--p", "2.5", "--t", "3", "--query", "quantile:0.3"]);
    let x = doc["result"]["queries"][0]["value"].as_f64().unwrap();
    let q = format!("cdf:{x}");
    let back = json(&["dist", "--family", "gamma-scale", "--p", "2.5", "--t", "3", "--query", &q]);
    assert!((back["result"]["queries"][0]["value"]["value"].as_f64().unwrap() - 0.3).abs() < 1e-12);
}

#[test]
fn neutrality_suite_passes_with_zero_exact_deviation() {
    let doc = json(&["check", "--suite", "neutrality", "--seed", "7"]);
    assert_eq!(doc["result"]["passed"], true);
    for p in doc["result"]["properties"].as_array().unwrap() {
        if p["measure"] == "deviation" {
            assert_eq!(p["worst"], 0.0, "{p}");
        }
    }
}

#[test]
fn check_reports_are_byte_identical_for_a_seed() {
    let first = run(&["check", "--suite", "all", "--seed", "1"]);
    let second = run(&["check", "--suite", "all", "--seed", "1"]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn exit_statuses_distinguish_input_and_domain_errors() {
    let model = fixture();
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["vote-simple", "--model", "/nonexistent.model", "--outcome", "A", "--theta", "0"]).status.code(), Some(2));
    assert_eq!(run(&["vote-simple", "--model", &model, "--outcome", "Z", "--theta", "0"]).status.code(), Some(2));
    assert_eq!(run(&["vote-weighted", "--model", &model, "--outcome", "A", "--lambda", "abc"]).status.code(), Some(2));
    assert_eq!(run(&["dist", "--family", "cauchy", "--t", "0"]).status.code(), Some(2));
    assert_eq!(run(&["dist", "--family", "poisson", "--n", "1", "--t", "0", "--query", "interval:2,1"]).status.code(), Some(2));
    assert_eq!(run(&["check", "--suite", "everything"]).status.code(), Some(2));
    assert_eq!(run(&["vote-weighted", "--model", &model, "--outcome", "A", "--lambda", "3/2"]).status.code(), Some(3));
    assert_eq!(run(&["student", "--n", "5", "--mean", "0", "--variance", "0", "--mu0", "0"]).status.code(), Some(3));
    let err = run(&["vote-weighted", "--model", &model, "--outcome", "A", "--lambda", "3/2"]);
    assert!(String::from_utf8_lossy(&err.stderr).starts_with("error:"));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn text_output_is_the_default() {
    let model = fixture();
    let out = run(&["vote-weighted", "--model", &model, "--outcome", "B", "--lambda", "1/2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("command: vote-weighted\nnumeric_mode: rational\n"));
    assert!(text.contains("p_decide_1: 1/2 (0.50000000000000000)"));
}
