//! Report assembly and the JSON encodings of exact data.

use std::collections::BTreeMap;

use mcdef::artin::{monomial_label, LTensor};
use mcdef::{CochainComplex, Field, Scalar, SparseVec};
use serde_json::{json, Map, Value};

pub const SCHEMA: &str = "mcdef-report";
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub check: String,
    pub pass: bool,
    pub detail: Option<String>,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub args: Vec<String>,
    /// `(source, sha256)` of the input document.
    pub input: Option<(String, String)>,
    pub field: Option<Field>,
    pub verdicts: Vec<Verdict>,
    pub results: Map<String, Value>,
    pub timing_ms: Option<u128>,
}

impl Report {
    pub fn new(command: &str, args: Vec<String>) -> Self {
        Report { command: command.into(), args, input: None, field: None, verdicts: Vec::new(), results: Map::new(), timing_ms: None }
    }

    pub fn verdict(&mut self, check: impl Into<String>, pass: bool, detail: Option<String>) {
        self.verdicts.push(Verdict { check: check.into(), pass, detail });
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.results.insert(key.into(), value);
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn to_json(&self) -> Value {
        let mut out = Map::new();
        out.insert("schema".into(), json!(SCHEMA));
        out.insert("schema_version".into(), json!(SCHEMA_VERSION));
        out.insert("tool_version".into(), json!(env!("CARGO_PKG_VERSION")));
        out.insert("command".into(), json!({ "name": self.command, "args": self.args }));
        if let Some((source, digest)) = &self.input {
            out.insert("input".into(), json!({ "source": source, "sha256": digest }));
        }
        if let Some(f) = self.field {
            out.insert("field".into(), json!(f.name()));
        }
        let verdicts: Vec<Value> = self
            .verdicts
            .iter()
            .map(|v| {
                let mut m = Map::new();
                m.insert("check".into(), json!(v.check));
                m.insert("pass".into(), json!(v.pass));
                if let Some(d) = &v.detail {
                    m.insert("detail".into(), json!(d));
                }
                Value::Object(m)
            })
            .collect();
        out.insert("verdicts".into(), Value::Array(verdicts));
        out.insert("pass".into(), json!(self.passed()));
        out.insert("results".into(), Value::Object(self.results.clone()));
        if let Some(ms) = self.timing_ms {
            out.insert("timing_ms".into(), json!(ms));
        }
        Value::Object(out)
    }

    /// Indented JSON with short arrays kept on one line.
    pub fn render_json(&self) -> String {
        mcdef::format::render_json(&self.to_json())
    }

    pub fn render_text(&self) -> String {
        let mut s = format!("mcdef {}", self.command);
        if let Some((source, digest)) = &self.input {
            s += &format!(" [{source}, sha256 {}]", &digest[..12]);
        }
        s.push('\n');
        for v in &self.verdicts {
            s += &format!("{} {}", if v.pass { "PASS" } else { "FAIL" }, v.check);
            if let Some(d) = &v.detail {
                s += &format!(": {d}");
            }
            s.push('\n');
        }
        s += if self.passed() { "overall PASS\n" } else { "overall FAIL\n" };
        if let Some(ms) = self.timing_ms {
            s += &format!("time {ms} ms\n");
        }
        s
    }
}

pub fn scalar(c: &Scalar, field: Field) -> Value {
    Value::String(c.coerce(field).to_string())
}

/// `[[label, coefficient], …]` in index order.
pub fn vector(v: &SparseVec, field: Field, label: impl Fn(usize) -> String) -> Value {
    Value::Array(v.iter().map(|(i, c)| json!([label(i), scalar(c, field)])).collect())
}

pub fn vector_text(v: &SparseVec, field: Field, label: impl Fn(usize) -> String) -> String {
    if v.is_zero() {
        return "0".into();
    }
    let terms: Vec<String> = v.iter().map(|(i, c)| format!("{}*{}", c.coerce(field), label(i))).collect();
    terms.join(" + ")
}

pub fn coords(v: &SparseVec, len: usize, field: Field) -> Value {
    Value::Array((0..len).map(|i| scalar(&v.get(i), field)).collect())
}

/// `[[degree, dimension], …]`
pub fn dims(d: &BTreeMap<i32, usize>) -> Value {
    Value::Array(d.iter().filter(|(_, &n)| n > 0).map(|(k, n)| json!([k, n])).collect())
}

/// `[[monomial, vector], …]`
pub fn tensor(t: &LTensor, field: Field, label: impl Fn(usize) -> String) -> Value {
    Value::Array(
        t.terms()
            .filter(|(_, v)| !v.is_zero())
            .map(|(m, v)| json!([monomial_label(m), vector(v, field, &label)]))
            .collect(),
    )
}

/// Cohomology per degree with the chosen representatives; `rep` encodes a
/// local cocycle of the given degree.
pub fn cohomology(c: &CochainComplex, rep: impl Fn(i32, &SparseVec) -> Value) -> mcdef::Result<Value> {
    let mut out = Vec::new();
    for k in c.space.degrees() {
        let h = c.cohomology_at(k)?;
        if h.h_dim == 0 {
            continue;
        }
        let reps: Vec<Value> = h.reps.iter().map(|r| rep(k, r)).collect();
        out.push(json!({ "degree": k, "dim": h.h_dim, "representatives": reps }));
    }
    Ok(Value::Array(out))
}

/// Cohomology of a complex whose labels name its basis.
pub fn labelled_cohomology(c: &CochainComplex) -> mcdef::Result<Value> {
    let field = c.field();
    cohomology(c, |k, r| vector(r, field, |i| c.space.label(c.space.global(k, i)).to_string()))
}
