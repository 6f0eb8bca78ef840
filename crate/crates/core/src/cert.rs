//! Machine-checkable result records rendered as canonical JSON.
//!
//! Canonical form: UTF-8, two-space pretty printing, keys sorted
//! lexicographically (the default serde_json map is a BTreeMap), a single
//! trailing newline, and every big integer as a decimal string. Small
//! structural counts are plain JSON numbers; nothing is ever serialized
//! as a binary float.

use crate::arith::Factorization;
use num_bigint::BigUint;
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;

/// Render a JSON value in canonical form.
pub fn canonical(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialization cannot fail");
    s.push('\n');
    s
}

/// A big integer as a decimal-string JSON value.
pub fn big_json<T: ToString>(n: T) -> Value {
    Value::String(n.to_string())
}

/// Factorization as JSON: prime-exponent pairs sorted by prime, plus the
/// unfactored cofactor when the budget ran out.
pub fn factorization_json(f: &Factorization) -> Value {
    let factors: Vec<Value> = f
        .factors()
        .iter()
        .map(|(p, e)| json!([p.to_string(), e]))
        .collect();
    let mut obj = Map::new();
    obj.insert("n".into(), big_json(f.n()));
    obj.insert("factors".into(), Value::Array(factors));
    obj.insert("complete".into(), Value::Bool(f.is_complete()));
    if let Some(c) = f.cofactor() {
        obj.insert("cofactor".into(), big_json(c));
    }
    Value::Object(obj)
}

/// Outcome of one exhaustible search, with enough evidence to replay
/// every listed solution by direct substitution.
#[derive(Debug, Clone)]
pub struct SolutionCertificate {
    pub equation_id: String,
    pub parameters: BTreeMap<String, Value>,
    pub search_bound: BigUint,
    pub solutions: Vec<Value>,
    /// Replay data, parallel to `solutions`.
    pub evidence: Vec<Value>,
    /// `true` only when the full range was decided, with complete
    /// factorizations wherever the decision needed them.
    pub exhaustive: bool,
    /// Scan points the search could not decide within budget.
    pub uncovered: Vec<Value>,
    pub notes: Vec<String>,
}

impl SolutionCertificate {
    pub fn new(equation_id: &str, search_bound: impl Into<BigUint>) -> Self {
        SolutionCertificate {
            equation_id: equation_id.to_string(),
            parameters: BTreeMap::new(),
            search_bound: search_bound.into(),
            solutions: Vec::new(),
            evidence: Vec::new(),
            exhaustive: true,
            uncovered: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn with_parameter(mut self, key: &str, value: Value) -> Self {
        self.parameters.insert(key.to_string(), value);
        self
    }

    pub fn push_solution(&mut self, solution: Value, evidence: Value) {
        self.solutions.push(solution);
        self.evidence.push(evidence);
    }

    pub fn mark_uncovered(&mut self, point: Value) {
        self.uncovered.push(point);
        self.exhaustive = false;
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn to_json(&self) -> Value {
        let params: Map<String, Value> =
            self.parameters.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        let mut obj = Map::new();
        obj.insert("equation_id".into(), Value::String(self.equation_id.clone()));
        obj.insert("parameters".into(), Value::Object(params));
        obj.insert("search_bound".into(), big_json(&self.search_bound));
        obj.insert("solutions".into(), Value::Array(self.solutions.clone()));
        obj.insert("evidence".into(), Value::Array(self.evidence.clone()));
        obj.insert("exhaustive".into(), Value::Bool(self.exhaustive));
        obj.insert("uncovered".into(), Value::Array(self.uncovered.clone()));
        obj.insert(
            "notes".into(),
            Value::Array(self.notes.iter().map(|s| Value::String(s.clone())).collect()),
        );
        Value::Object(obj)
    }

    pub fn canonical_string(&self) -> String {
        canonical(&self.to_json())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{factor, EffortBudget};

    #[test]
    fn canonical_form_is_sorted_and_newline_terminated() {
        let v = json!({"zeta": 1, "alpha": "2", "mid": [3, 4]});
        let s = canonical(&v);
        assert!(s.ends_with("}\n"));
        let alpha = s.find("alpha").unwrap();
        let mid = s.find("mid").unwrap();
        let zeta = s.find("zeta").unwrap();
        assert!(alpha < mid && mid < zeta);
    }

    #[test]
    fn factorization_serialization() {
        let f = factor(&BigUint::from(13860u32), &EffortBudget::new(1 << 16)).unwrap();
        let v = factorization_json(&f);
        assert_eq!(v["n"], Value::String("13860".into()));
        assert_eq!(v["complete"], Value::Bool(true));
        let factors = v["factors"].as_array().unwrap();
        // 13860 = 2^2 * 3^2 * 5 * 7 * 11
        assert_eq!(factors.len(), 5);
        assert_eq!(factors[0], json!(["2", 2]));
        assert_eq!(factors[4], json!(["11", 1]));
        assert!(v.get("cofactor").is_none());
    }

    #[test]
    fn certificate_round_trip() {
        let mut c = SolutionCertificate::new("demo", 100u32)
            .with_parameter("pair", Value::String("pell".into()));
        c.push_solution(json!({"n": 1}), json!({"value": "1"}));
        c.mark_uncovered(json!(7));
        c.note("one index skipped");
        let s = c.canonical_string();
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["equation_id"], "demo");
        assert_eq!(back["exhaustive"], Value::Bool(false));
        assert_eq!(back["uncovered"], json!([7]));
        assert_eq!(back["search_bound"], "100");
        // Identical content serializes identically.
        assert_eq!(s, canonical(&back));
    }
}
