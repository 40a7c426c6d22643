//! Machine-readable run reports. Every numeric value is rendered as a
//! reduced fraction string; nothing is ever serialized as floating point.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

/// One assertion or query result.
#[derive(Clone, Serialize, Debug)]
pub struct ResultEntry {
    pub query: String,
    pub value: String,
    /// `None` for plain queries, `Some(pass)` for assertions.
    pub pass: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub citation: Option<String>,
    /// Expected-vs-actual detail on failing assertions.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Serialize, Default, Debug)]
pub struct Report {
    pub scenario: String,
    pub results: Vec<ResultEntry>,
    pub axioms_used: BTreeSet<String>,
    pub verdict_summary: BTreeMap<String, String>,
}

impl Report {
    pub fn new(scenario: &str) -> Report {
        Report {
            scenario: scenario.to_string(),
            ..Report::default()
        }
    }

    pub fn record_axiom(&mut self, axiom: &str) {
        self.axioms_used.insert(axiom.to_string());
    }

    pub fn record_verdict(&mut self, key: &str, value: String) {
        self.verdict_summary.insert(key.to_string(), value);
    }

    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.pass != Some(false))
    }

    pub fn failures(&self) -> usize {
        self.results.iter().filter(|r| r.pass == Some(false)).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization is infallible")
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# {}\n\n", self.scenario));
        for r in &self.results {
            let mark = match r.pass {
                Some(true) => "PASS",
                Some(false) => "FAIL",
                None => "    ",
            };
            out.push_str(&format!("[{mark}] {} = {}", r.query, r.value));
            if let Some(c) = &r.citation {
                out.push_str(&format!("  ({c})"));
            }
            out.push('\n');
            if let Some(d) = &r.detail {
                out.push_str(&format!("       {d}\n"));
            }
        }
        if !self.verdict_summary.is_empty() {
            out.push_str("\nVerdicts:\n");
            for (k, v) in &self.verdict_summary {
                out.push_str(&format!("  {k} = {v}\n"));
            }
        }
        if !self.axioms_used.is_empty() {
            out.push_str("\nAxioms used:\n");
            for a in &self.axioms_used {
                out.push_str(&format!("  - {a}\n"));
            }
        }
        let failures = self.failures();
        let asserts = self.results.iter().filter(|r| r.pass.is_some()).count();
        out.push_str(&format!("\n{} assertions, {} failed\n", asserts, failures));
        out
    }
}
