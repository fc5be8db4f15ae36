//! Result documents: one text rendering and one JSON rendering of the same data.

use expert_votes::Scalar;
use serde_json::{json, Map, Value as Json};

/// A result or input value.
#[derive(Debug, Clone)]
pub enum Value {
    /// A probability, with its exact fraction when computed in rational mode.
    Prob { value: f64, exact: Option<String> },
    /// A real number that is not a probability (a location, a quantile).
    Real(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    List(Vec<Value>),
    Record(Vec<(String, Value)>),
}

impl Value {
    pub fn prob<S: Scalar>(x: &S) -> Self {
        Value::Prob { value: x.to_f64(), exact: x.exact_string() }
    }

    pub fn text(s: impl Into<String>) -> Self {
        Value::Text(s.into())
    }

    pub fn record<K: Into<String>>(fields: Vec<(K, Value)>) -> Self {
        Value::Record(fields.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    fn to_json(&self) -> Json {
        match self {
            Value::Prob { value, exact } => {
                let mut m = Map::new();
                m.insert("value".into(), json_number(*value));
                m.insert("decimal".into(), Json::String(decimal(*value)));
                if let Some(e) = exact {
                    m.insert("exact".into(), Json::String(e.clone()));
                }
                Json::Object(m)
            }
            Value::Real(x) => {
                if x.is_finite() {
                    json_number(*x)
                } else {
                    Json::String(decimal(*x))
                }
            }
            Value::Int(i) => json!(i),
            Value::Bool(b) => json!(b),
            Value::Text(s) => json!(s),
            Value::List(items) => Json::Array(items.iter().map(Value::to_json).collect()),
            Value::Record(fields) => Json::Object(fields.iter().map(|(k, v)| (k.clone(), v.to_json())).collect()),
        }
    }

    /// Single-line rendering, used for scalars and records of scalars.
    fn inline(&self) -> Option<String> {
        match self {
            Value::Prob { value, exact: Some(e) } => Some(format!("{e} ({})", decimal(*value))),
            Value::Prob { value, exact: None } | Value::Real(value) => Some(decimal(*value)),
            Value::Int(i) => Some(i.to_string()),
            Value::Bool(b) => Some(b.to_string()),
            Value::Text(s) => Some(s.clone()),
            Value::List(items) if items.is_empty() => Some("none".to_string()),
            Value::List(_) => None,
            Value::Record(fields) => {
                let parts: Option<Vec<String>> =
                    fields.iter().map(|(k, v)| v.scalar_text().map(|t| format!("{k}={t}"))).collect();
                parts.map(|p| p.join(", "))
            }
        }
    }

    fn scalar_text(&self) -> Option<String> {
        match self {
            Value::List(_) | Value::Record(_) => None,
            other => other.inline(),
        }
    }

    fn render(&self, key: &str, indent: usize, out: &mut String) {
        let pad = "  ".repeat(indent);
        if let Some(line) = self.scalar_text() {
            out.push_str(&format!("{pad}{key}: {line}\n"));
            return;
        }
        match self {
            Value::List(items) if items.is_empty() => out.push_str(&format!("{pad}{key}: none\n")),
            Value::List(items) => {
                out.push_str(&format!("{pad}{key}:\n"));
                for item in items {
                    match item.inline() {
                        Some(line) => out.push_str(&format!("{pad}  - {line}\n")),
                        None => item.render("-", indent + 1, out),
                    }
                }
            }
            Value::Record(fields) => {
                out.push_str(&format!("{pad}{key}:\n"));
                for (k, v) in fields {
                    v.render(k, indent + 1, out);
                }
            }
            _ => unreachable!("scalars are rendered inline"),
        }
    }
}

fn json_number(x: f64) -> Json {
    serde_json::Number::from_f64(x).map_or(Json::Null, Json::Number)
}

/// Decimal rendering with 17 significant digits.
pub fn decimal(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let e = x.abs().log10().floor() as i32;
    if (-5..15).contains(&e) {
        format!("{:.*}", (16 - e) as usize, x)
    } else {
        format!("{x:.16e}")
    }
}

/// Numeric mode reported with every document.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Rational,
    Float,
}

impl Mode {
    pub fn of<S: Scalar>() -> Self {
        if S::EXACT {
            Mode::Rational
        } else {
            Mode::Float
        }
    }

    fn name(self) -> &'static str {
        match self {
            Mode::Rational => "rational",
            Mode::Float => "float",
        }
    }
}

/// Everything a command prints.
#[derive(Debug, Clone)]
pub struct Document {
    pub command: &'static str,
    pub mode: Mode,
    pub inputs: Vec<(String, Value)>,
    pub result: Vec<(String, Value)>,
}

impl Document {
    pub fn new(command: &'static str, mode: Mode) -> Self {
        Document { command, mode, inputs: Vec::new(), result: Vec::new() }
    }

    pub fn input(&mut self, key: &str, value: Value) -> &mut Self {
        self.inputs.push((key.to_string(), value));
        self
    }

    pub fn put(&mut self, key: &str, value: Value) -> &mut Self {
        self.result.push((key.to_string(), value));
        self
    }

    pub fn to_json(&self) -> String {
        let record = |fields: &[(String, Value)]| {
            Json::Object(fields.iter().map(|(k, v)| (k.clone(), v.to_json())).collect())
        };
        let doc = json!({
            "command": self.command,
            "numeric_mode": self.mode.name(),
            "inputs": record(&self.inputs),
            "result": record(&self.result),
        });
        serde_json::to_string_pretty(&doc).expect("documents serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("command: {}\nnumeric_mode: {}\n", self.command, self.mode.name());
        Value::Record(self.inputs.clone()).render("inputs", 0, &mut out);
        Value::Record(self.result.clone()).render("result", 0, &mut out);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use expert_votes::Rational;

    #[test]
    fn decimals_carry_seventeen_significant_digits() {
        assert_eq!(decimal(0.5), "0.50000000000000000");
        assert_eq!(decimal(1.0 / 3.0), "0.33333333333333331");
        assert_eq!(decimal(1e-9), "1.0000000000000001e-9");
        assert_eq!(decimal(0.0), "0");
        assert_eq!(decimal(f64::NEG_INFINITY), "-inf");
    }

    #[test]
    fn rational_probabilities_keep_their_fraction() {
        let v = Value::prob(&Rational::new(1.into(), 2.into()));
        assert_eq!(v.inline().unwrap(), "1/2 (0.50000000000000000)");
        let j = v.to_json();
        assert_eq!(j["exact"], "1/2");
        assert_eq!(j["value"], 0.5);
    }

    #[test]
    fn text_and_json_share_fields() {
        let mut d = Document::new("demo", Mode::Float);
        d.input("t", Value::Real(1.0));
        d.put("atoms", Value::List(vec![Value::record(vec![("at", Value::Real(0.0)), ("mass", Value::Real(0.5))])]));
        let text = d.to_text();
        assert!(text.contains("numeric_mode: float"));
        assert!(text.contains("  - at=0, mass=0.50000000000000000"));
        let json: Json = serde_json::from_str(&d.to_json()).unwrap();
        assert_eq!(json["result"]["atoms"][0]["mass"], 0.5);
        assert_eq!(json["numeric_mode"], "float");
    }
}
