//! TOML model files.
//!
//! A two-density model:
//!
//! ```toml
//! kind = "two_density"
//!
//! [[outcome]]
//! label = "A"
//! weight = 1
//! p0 = "1/6"
//! p1 = "1/2"
//! t = 0          # optional statistic value
//! ```
//!
//! A discrete family lists its parameter labels in increasing order, the
//! number `split` of leading labels forming `Θ1`, and one density entry per
//! label at every outcome:
//!
//! ```toml
//! kind = "discrete_family"
//! thetas = ["a", "b", "c"]
//! split = 1
//!
//! [[outcome]]
//! label = "x0"
//! t = 0
//! weight = 1
//! density = ["1/2", "1/4", "1/8"]
//! ```
//!
//! Numbers are integers, strings holding exact fractions or decimals, or TOML
//! floats. A file without any TOML float is read exactly as rationals; a single
//! float switches the whole model to `f64`.

use std::path::Path;

use num::rational::BigRational;
use num::{BigInt, FromPrimitive};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::scalar::{parse_rational, parse_real, Scalar};
use crate::simple_choice::{Outcome, TwoDensityModel};
use crate::stable::{DiscreteFamilyModel, FamilyOutcome};

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Literal {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Literal {
    fn is_float(&self) -> bool {
        matches!(self, Literal::Float(_))
    }

    fn exact(&self) -> Result<BigRational> {
        match self {
            Literal::Int(k) => Ok(BigRational::from_integer(BigInt::from(*k))),
            Literal::Float(x) => BigRational::from_f64(*x).ok_or_else(|| Error::Parse(format!("non-finite number {x}"))),
            Literal::Text(s) => parse_rational(s).ok_or_else(|| Error::Parse(format!("cannot read `{s}` as a number"))),
        }
    }

    fn float(&self) -> Result<f64> {
        match self {
            Literal::Int(k) => Ok(*k as f64),
            Literal::Float(x) => Ok(*x),
            Literal::Text(s) => parse_real(s).ok_or_else(|| Error::Parse(format!("cannot read `{s}` as a number"))),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutcome {
    label: String,
    #[serde(default)]
    weight: Option<Literal>,
    #[serde(default)]
    t: Option<Literal>,
    #[serde(default)]
    p0: Option<Literal>,
    #[serde(default)]
    p1: Option<Literal>,
    #[serde(default)]
    density: Option<Vec<Literal>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    kind: String,
    #[serde(default)]
    thetas: Option<Vec<String>>,
    #[serde(default)]
    split: Option<usize>,
    #[serde(rename = "outcome", default)]
    outcomes: Vec<RawOutcome>,
}

impl RawModel {
    fn literals(&self) -> impl Iterator<Item = &Literal> {
        self.outcomes.iter().flat_map(|o| {
            o.weight
                .iter()
                .chain(o.t.iter())
                .chain(o.p0.iter())
                .chain(o.p1.iter())
                .chain(o.density.iter().flatten())
        })
    }
}

/// Arithmetic a model file is read in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NumericMode {
    Exact,
    Float,
}

impl NumericMode {
    pub fn name(&self) -> &'static str {
        match self {
            NumericMode::Exact => "exact",
            NumericMode::Float => "float",
        }
    }
}

/// A validated model in one arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelData<S> {
    /// Two densities, with optional statistic values per outcome.
    TwoDensity { model: TwoDensityModel<S>, t: Option<Vec<S>> },
    DiscreteFamily(DiscreteFamilyModel<S>),
}

impl<S: Scalar> ModelData<S> {
    /// The model as a discrete family; two-density models use their statistic
    /// values when given and the likelihood-ratio rank otherwise.
    pub fn to_family(&self) -> Result<DiscreteFamilyModel<S>> {
        match self {
            ModelData::TwoDensity { model, t: Some(t) } => DiscreteFamilyModel::from_two_density_with_t(model, t),
            ModelData::TwoDensity { model, t: None } => Ok(DiscreteFamilyModel::from_two_density(model)),
            ModelData::DiscreteFamily(f) => Ok(f.clone()),
        }
    }
}

/// A model file read in exact or floating-point arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub enum LoadedModel {
    Exact(ModelData<BigRational>),
    Float(ModelData<f64>),
}

impl LoadedModel {
    pub fn mode(&self) -> NumericMode {
        match self {
            LoadedModel::Exact(_) => NumericMode::Exact,
            LoadedModel::Float(_) => NumericMode::Float,
        }
    }
}

fn required<'a>(value: &'a Option<Literal>, field: &str, label: &str) -> Result<&'a Literal> {
    value.as_ref().ok_or_else(|| Error::Parse(format!("outcome `{label}` is missing `{field}`")))
}

fn build<S: Scalar>(raw: &RawModel, read: impl Fn(&Literal) -> Result<S>) -> Result<ModelData<S>> {
    let weight = |o: &RawOutcome| o.weight.as_ref().map_or(Ok(S::one()), &read);
    match raw.kind.as_str() {
        "two_density" => {
            if raw.thetas.is_some() || raw.split.is_some() {
                return Err(Error::Parse("two_density models take no `thetas` or `split`".to_string()));
            }
            let mut outcomes = Vec::with_capacity(raw.outcomes.len());
            for o in &raw.outcomes {
                if o.density.is_some() {
                    return Err(Error::Parse(format!("outcome `{}`: use p0 and p1 in a two_density model", o.label)));
                }
                outcomes.push(Outcome {
                    label: o.label.clone(),
                    weight: weight(o)?,
                    p0: read(required(&o.p0, "p0", &o.label)?)?,
                    p1: read(required(&o.p1, "p1", &o.label)?)?,
                });
            }
            let with_t = raw.outcomes.iter().filter(|o| o.t.is_some()).count();
            let t = if with_t == 0 {
                None
            } else if with_t == raw.outcomes.len() {
                Some(raw.outcomes.iter().map(|o| read(o.t.as_ref().expect("checked"))).collect::<Result<Vec<S>>>()?)
            } else {
                return Err(Error::Parse("either every outcome or none carries `t`".to_string()));
            };
            let model = TwoDensityModel::new(outcomes)?;
            if let Some(t) = &t {
                DiscreteFamilyModel::from_two_density_with_t(&model, t)?;
            }
            Ok(ModelData::TwoDensity { model, t })
        }
        "discrete_family" => {
            let thetas = raw.thetas.clone().ok_or_else(|| Error::Parse("missing `thetas`".to_string()))?;
            let split = raw.split.ok_or_else(|| Error::Parse("missing `split`".to_string()))?;
            let mut outcomes = Vec::with_capacity(raw.outcomes.len());
            let mut density = vec![Vec::with_capacity(raw.outcomes.len()); thetas.len()];
            for o in &raw.outcomes {
                if o.p0.is_some() || o.p1.is_some() {
                    return Err(Error::Parse(format!("outcome `{}`: use `density` in a discrete_family model", o.label)));
                }
                let row = o.density.as_ref().ok_or_else(|| Error::Parse(format!("outcome `{}` is missing `density`", o.label)))?;
                if row.len() != thetas.len() {
                    return Err(Error::Parse(format!(
                        "outcome `{}` lists {} densities for {} parameters",
                        o.label,
                        row.len(),
                        thetas.len()
                    )));
                }
                for (col, lit) in density.iter_mut().zip(row) {
                    col.push(read(lit)?);
                }
                outcomes.push(FamilyOutcome {
                    label: o.label.clone(),
                    t: read(required(&o.t, "t", &o.label)?)?,
                    weight: weight(o)?,
                });
            }
            Ok(ModelData::DiscreteFamily(DiscreteFamilyModel::new(outcomes, thetas, density, split)?))
        }
        other => Err(Error::Parse(format!("unknown model kind `{other}`"))),
    }
}

/// Parses and validates a model document.
pub fn parse_model(text: &str) -> Result<LoadedModel> {
    let raw: RawModel = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if raw.literals().any(Literal::is_float) {
        Ok(LoadedModel::Float(build(&raw, Literal::float)?))
    } else {
        Ok(LoadedModel::Exact(build(&raw, Literal::exact)?))
    }
}

/// Reads, parses and validates a model file.
pub fn load_model(path: impl AsRef<Path>) -> Result<LoadedModel> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_model(&text)
}
