//! `expert-votes`: command-line front end for vote computations.
//!
//! Exit status: 0 on success, 1 when `check` finds a failing property, 2 on
//! malformed input, 3 when an argument lies outside a function's domain.

mod commands;
mod document;
mod inputs;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::document::Document;

#[derive(Debug, Parser)]
#[command(name = "expert-votes", version, about = "Expert votes, decision rules and distributional inference")]
struct Cli {
    /// Print the structured JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
pub struct ModelArg {
    /// Model file (TOML).
    #[arg(long)]
    pub model: PathBuf,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    /// Family tag, e.g. `normal-location` or `poisson`.
    #[arg(long)]
    pub family: String,
    /// Known standard deviation of a normal location family.
    #[arg(long)]
    pub a: Option<String>,
    /// Sample size of a Poisson or binomial family.
    #[arg(long)]
    pub n: Option<u64>,
    /// First shape constant of a gamma or noncentral beta family.
    #[arg(long)]
    pub p: Option<String>,
    /// Second shape constant of a noncentral beta family.
    #[arg(long)]
    pub q: Option<String>,
    /// Known center of a normal scale family.
    #[arg(long)]
    pub m: Option<String>,
    /// Observed statistic.
    #[arg(long)]
    pub t: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Vote Q_θ({1}) of the simple choice between two densities.
    #[command(allow_negative_numbers = true)]
    VoteSimple {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        outcome: String,
        /// Hypothesis: 0 or 1.
        #[arg(long)]
        theta: String,
    },
    /// Vote weighted between the two hypotheses by λ.
    #[command(allow_negative_numbers = true)]
    VoteWeighted {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        outcome: String,
        #[arg(long)]
        lambda: String,
    },
    /// Posterior probability of θ = 1 under the prior weight λ.
    #[command(allow_negative_numbers = true)]
    Posterior {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        outcome: String,
        #[arg(long)]
        lambda: String,
    },
    /// Bol'shev rule for risk bounds α0 and α1.
    #[command(allow_negative_numbers = true)]
    Bolshev {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        alpha0: String,
        #[arg(long)]
        alpha1: String,
        /// Report the decision at a single outcome instead of all outcomes.
        #[arg(long)]
        outcome: Option<String>,
    },
    /// Plebiscite decision at an outcome.
    #[command(allow_negative_numbers = true)]
    Plebiscite {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        outcome: String,
        #[arg(long)]
        alpha0: String,
        #[arg(long)]
        alpha1: String,
    },
    /// Vote divergence Q_1({0}) - Q_0({1}) at an outcome.
    #[command(allow_negative_numbers = true)]
    Divergence {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        outcome: String,
    },
    /// Stable vote of a discrete family at a parameter label.
    #[command(allow_negative_numbers = true)]
    VoteStable {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        outcome: String,
        #[arg(long)]
        theta: String,
    },
    /// Unilateral mid-p-values G_θ(t) and 1 - G_θ(t).
    #[command(allow_negative_numbers = true)]
    Pvalue {
        /// Discrete family model; omit to use `--family`.
        #[arg(long, conflicts_with = "family")]
        model: Option<PathBuf>,
        #[arg(long, requires = "model")]
        outcome: Option<String>,
        #[arg(long)]
        theta: String,
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        q: Option<String>,
        #[arg(long)]
        m: Option<String>,
        #[arg(long, requires = "family")]
        t: Option<String>,
    },
    /// Parameter distribution extending the compatible votes.
    #[command(allow_negative_numbers = true)]
    Dist {
        #[command(flatten)]
        family: FamilyArgs,
        /// Frontier at which to report the compatible votes.
        #[arg(long)]
        theta_f: Option<String>,
        /// `cdf:<x>`, `quantile:<p>` or `interval:<lo>,<hi>`; repeatable.
        #[arg(long)]
        query: Vec<String>,
    },
    /// Parameter distribution under a ponderation.
    #[command(allow_negative_numbers = true)]
    DistWeighted {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        median: String,
        #[arg(long)]
        pull: String,
        #[arg(long, default_value = "0")]
        spread: String,
        #[arg(long)]
        query: Vec<String>,
    },
    /// Bilateral vote for θ in [θ1, θ2].
    #[command(allow_negative_numbers = true)]
    Bilateral {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        theta1: String,
        #[arg(long)]
        theta2: String,
    },
    /// Normal mean with unknown variance.
    #[command(allow_negative_numbers = true)]
    Student {
        #[arg(long)]
        n: u64,
        /// Sample mean.
        #[arg(long)]
        mean: String,
        /// Sample variance.
        #[arg(long)]
        variance: String,
        /// Frontier between the hypotheses on the mean.
        #[arg(long)]
        mu0: String,
        #[arg(long)]
        query: Vec<String>,
    },
    /// Noncentral gamma statistic with an unknown scale.
    #[command(allow_negative_numbers = true)]
    Anova {
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
        #[arg(long)]
        t: String,
        #[arg(long)]
        u: String,
        #[arg(long)]
        theta1: String,
    },
    /// Comparison of two binomial proportions.
    #[command(allow_negative_numbers = true)]
    TwoBinomial {
        #[arg(long)]
        n1: u64,
        #[arg(long)]
        x1: u64,
        #[arg(long)]
        n2: u64,
        #[arg(long)]
        x2: u64,
    },
    /// Run the invariant harness.
    #[command(allow_negative_numbers = true)]
    Check {
        /// neutrality, monotonicity, additivity, oracles or all.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

/// A command failure and the exit status it maps to.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Domain(String),
}

impl From<expert_votes::Error> for Failure {
    fn from(e: expert_votes::Error) -> Self {
        if e.is_numeric_domain() {
            Failure::Domain(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

/// What a command produced: a document, and for `check` whether it passed.
pub struct Outcome {
    pub document: Document,
    pub text: Option<String>,
    pub passed: bool,
}

impl From<Document> for Outcome {
    fn from(document: Document) -> Self {
        Outcome { document, text: None, passed: true }
    }
}

fn dispatch(command: Command) -> Result<Outcome, Failure> {
    use commands as c;
    match command {
        Command::VoteSimple { model, outcome, theta } => c::vote_simple(&model.model, &outcome, &theta),
        Command::VoteWeighted { model, outcome, lambda } => c::vote_weighted(&model.model, &outcome, &lambda),
        Command::Posterior { model, outcome, lambda } => c::posterior(&model.model, &outcome, &lambda),
        Command::Bolshev { model, alpha0, alpha1, outcome } => {
            c::bolshev(&model.model, &alpha0, &alpha1, outcome.as_deref())
        }
        Command::Plebiscite { model, outcome, alpha0, alpha1 } => {
            c::plebiscite(&model.model, &outcome, &alpha0, &alpha1)
        }
        Command::Divergence { model, outcome } => c::divergence(&model.model, &outcome),
        Command::VoteStable { model, outcome, theta } => c::vote_stable(&model.model, &outcome, &theta),
        Command::Pvalue { model, outcome, theta, family, a, n, p, q, m, t } => match (model, family) {
            (Some(path), None) => {
                let outcome = outcome.ok_or_else(|| Failure::Input("--outcome is required with --model".into()))?;
                c::pvalue_model(&path, &outcome, &theta)
            }
            (None, Some(family)) => {
                let t = t.ok_or_else(|| Failure::Input("--t is required with --family".into()))?;
                c::pvalue_family(&FamilyArgs { family, a, n, p, q, m, t }, &theta)
            }
            _ => Err(Failure::Input("pvalue needs either --model or --family".into())),
        },
        Command::Dist { family, theta_f, query } => c::dist(&family, theta_f.as_deref(), &query),
        Command::DistWeighted { family, median, pull, spread, query } => {
            c::dist_weighted(&family, &median, &pull, &spread, &query)
        }
        Command::Bilateral { family, theta1, theta2 } => c::bilateral(&family, &theta1, &theta2),
        Command::Student { n, mean, variance, mu0, query } => c::student(n, &mean, &variance, &mu0, &query),
        Command::Anova { p, q, t, u, theta1 } => c::anova(&p, &q, &t, &u, &theta1),
        Command::TwoBinomial { n1, x1, n2, x2 } => c::two_binomial(n1, x1, n2, x2),
        Command::Check { suite, seed } => c::check(&suite, seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        // Help and version requests exit 0; usage errors exit 2.
        Err(e) => e.exit(),
    };
    match dispatch(cli.command) {
        Ok(outcome) => {
            if cli.json {
                println!("{}", outcome.document.to_json());
            } else {
                print!("{}", outcome.text.unwrap_or_else(|| outcome.document.to_text()));
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
