use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json::{ctxt_to_json, tm_to_json};
use crate::renaming::Rnm;
use crate::substitution::Subst;
use crate::syntax::{Ctxt, Tm};

/// One violated law instance.
#[derive(Clone, Debug, PartialEq)]
pub struct Failure {
    pub law: String,
    pub counterexample: Value,
}

/// Outcome of a law suite: how many instances ran and which failed.
#[derive(Clone, Debug, PartialEq)]
pub struct LawReport {
    pub suite: String,
    pub cases: usize,
    pub failures: Vec<Failure>,
}

impl LawReport {
    pub fn new(suite: impl Into<String>) -> LawReport {
        LawReport {
            suite: suite.into(),
            cases: 0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub(crate) fn case(&mut self) {
        self.cases += 1;
    }

    pub(crate) fn fail(&mut self, law: &str, counterexample: Value) {
        self.failures.push(Failure {
            law: law.to_string(),
            counterexample,
        });
    }

    /// Records one instance; `ok` false adds the counterexample.
    pub(crate) fn check(&mut self, law: &str, ok: bool, counterexample: impl FnOnce() -> Value) {
        self.case();
        if !ok {
            self.fail(law, counterexample());
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "cases": self.cases,
            "passed": self.passed(),
            "failures": self.failures.iter().map(|f| json!({
                "law": f.law,
                "counterexample": f.counterexample,
            })).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<LawReport> {
        let bad = |reason: &str| Error::Json {
            path: "$".into(),
            reason: reason.into(),
        };
        let suite = v["suite"].as_str().ok_or_else(|| bad("missing suite"))?.to_string();
        let cases = v["cases"].as_u64().ok_or_else(|| bad("missing cases"))? as usize;
        let failures = v["failures"]
            .as_array()
            .ok_or_else(|| bad("missing failures"))?
            .iter()
            .map(|f| {
                Ok(Failure {
                    law: f["law"].as_str().ok_or_else(|| bad("failure without law"))?.to_string(),
                    counterexample: f["counterexample"].clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LawReport { suite, cases, failures })
    }
}

pub(crate) fn tms_json(ts: &[&Tm]) -> Value {
    let ctxt = ts.first().map(|t| ctxt_to_json(t.ctxt())).unwrap_or(Value::Null);
    json!({ "ctxt": ctxt, "terms": ts.iter().map(|t| tm_to_json(t)).collect::<Vec<_>>() })
}

pub(crate) fn subst_json(s: &Subst) -> Value {
    json!({
        "src": ctxt_to_json(s.src()),
        "tgt": ctxt_to_json(s.tgt()),
        "entries": s.entries().iter().map(tm_to_json).collect::<Vec<_>>(),
    })
}

pub(crate) fn rnm_json(r: &Rnm) -> Value {
    json!({
        "src": ctxt_to_json(r.src()),
        "tgt": ctxt_to_json(r.tgt()),
        "entries": r.entries().iter().map(|i| i.depth()).collect::<Vec<_>>(),
    })
}

pub(crate) fn ctxts_json(gs: &[&Ctxt]) -> Value {
    Value::Array(gs.iter().map(|g| ctxt_to_json(g)).collect())
}
