use serde_json::{json, Map, Value};

use crate::formring::ElementSet;
use crate::unitary::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
        }
    }
}

/// One named check. Failed checks always carry a witness; skipped ones
/// carry the reason.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub witness: Option<Value>,
    pub ms: u64,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: Status::Pass,
            witness: None,
            ms: 0,
        }
    }

    pub fn fail(name: impl Into<String>, witness: Value) -> Self {
        Check {
            name: name.into(),
            status: Status::Fail,
            witness: Some(witness),
            ms: 0,
        }
    }

    pub fn skip(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: Status::Skip,
            witness: Some(json!({ "reason": reason.into() })),
            ms: 0,
        }
    }

    /// `pass` when `ok`, otherwise `fail` with the lazily built witness.
    pub fn expect(name: impl Into<String>, ok: bool, witness: impl FnOnce() -> Value) -> Self {
        if ok {
            Check::pass(name)
        } else {
            Check::fail(name, witness())
        }
    }

    pub fn with_ms(mut self, ms: u64) -> Self {
        self.ms = ms;
        self
    }

    fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("name".into(), Value::String(self.name.clone()));
        m.insert("status".into(), Value::String(self.status.as_str().into()));
        m.insert("ms".into(), Value::from(self.ms));
        if let Some(w) = &self.witness {
            m.insert("witness".into(), w.clone());
        }
        Value::Object(m)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub suite: String,
    pub config: Value,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn passed(&self) -> bool {
        self.count(Status::Fail) == 0
    }

    /// JSON with lexicographically sorted keys.
    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "config": self.config,
            "checks": self.checks.iter().map(Check::to_json).collect::<Vec<_>>(),
            "summary": {
                "pass": self.count(Status::Pass),
                "fail": self.count(Status::Fail),
                "skip": self.count(Status::Skip),
            },
        })
    }

    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
        s.push('\n');
        s
    }
}

pub fn matrix_json(m: &Matrix) -> Value {
    json!(m.to_rows())
}

pub fn set_json(s: ElementSet) -> Value {
    json!(s.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_are_sorted_and_summary_counts() {
        let r = Report {
            suite: "x".into(),
            config: json!({"seed": 1, "n": 3}),
            checks: vec![
                Check::pass("a"),
                Check::fail("b", json!([1])),
                Check::skip("c", "too big"),
            ],
        };
        let text = r.render();
        let pos = |k: &str| text.find(&format!("\"{k}\"")).unwrap();
        assert!(pos("checks") < pos("config") && pos("config") < pos("suite") && pos("suite") < pos("summary"));
        assert!(pos("n") < pos("seed"));
        assert_eq!(r.to_json()["summary"], json!({"pass": 1, "fail": 1, "skip": 1}));
        assert!(!r.passed());
    }
}
