//! Structured reports: one schema for every subcommand, emitted as stable
//! JSON (sorted keys, no timing or other run-dependent data, so identical
//! inputs and seed produce byte-identical output) or as readable text.

use serde::Serialize;
use shiftcert_core::cert::{Certificate, Verdict};
use shiftcert_core::rat::fmt_rat;

#[derive(Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    /// The subcommand that produced this report.
    pub command: String,
    /// Canonical text of the weight family.
    pub family: String,
    pub inputs: Inputs,
    pub results: Vec<ResultEntry>,
    /// Command-specific exact values; rationals appear as "p/q" strings.
    pub values: serde_json::Value,
}

#[derive(Serialize, Default)]
pub struct Inputs {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub s: Vec<String>,
}

#[derive(Serialize)]
pub struct ResultEntry {
    pub name: String,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub location: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_value: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub transcript: Vec<String>,
    #[serde(skip)]
    pub verdict_raw: Option<Verdict>,
}

impl ResultEntry {
    pub fn from_certificate(name: &str, c: &Certificate) -> Self {
        ResultEntry {
            name: name.to_string(),
            verdict: c.verdict.to_string(),
            location: c.location.clone(),
            reason: c.reason.clone(),
            rank: c.rank,
            witness: c.witness.as_ref().map(|w| w.iter().map(fmt_rat).collect()),
            witness_value: c.witness_value.as_ref().map(fmt_rat),
            transcript: c.transcript.clone(),
            verdict_raw: Some(c.verdict),
        }
    }

    pub fn answered(name: &str) -> Self {
        ResultEntry {
            name: name.to_string(),
            verdict: "ANSWERED".to_string(),
            location: None,
            reason: None,
            rank: None,
            witness: None,
            witness_value: None,
            transcript: Vec::new(),
            verdict_raw: None,
        }
    }
}

impl Report {
    /// Process exit status: REFUTED dominates INCONCLUSIVE dominates
    /// success; pure answers (thresholds, gap bounds) count as success.
    pub fn exit_code(&self) -> i32 {
        let mut code = 0;
        for r in &self.results {
            match r.verdict_raw {
                Some(Verdict::Refuted) => return 1,
                Some(Verdict::Inconclusive) => code = code.max(2),
                _ => {}
            }
        }
        code
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{} {} — {}\n",
            self.tool, self.version, self.command
        ));
        out.push_str(&format!("family: {}\n", self.family));
        if let Some(x) = &self.inputs.x {
            out.push_str(&format!("x = {x}\n"));
        }
        if let Some(k) = self.inputs.k {
            out.push_str(&format!("k = {k}\n"));
        }
        if let Some(n) = self.inputs.n_max {
            out.push_str(&format!("n_max = {n}\n"));
        }
        if let Some(seed) = self.inputs.seed {
            out.push_str(&format!("seed = {seed}\n"));
        }
        if let Some(p) = self.inputs.precision {
            out.push_str(&format!("precision = {p} bits\n"));
        }
        for r in &self.results {
            out.push_str(&format!("{}: {}\n", r.name, r.verdict));
            if let Some(loc) = &r.location {
                out.push_str(&format!("  at: {loc}\n"));
            }
            if let Some(reason) = &r.reason {
                out.push_str(&format!("  reason: {reason}\n"));
            }
            if let Some(rank) = r.rank {
                out.push_str(&format!("  rank: {rank}\n"));
            }
            if let (Some(w), Some(v)) = (&r.witness, &r.witness_value) {
                out.push_str(&format!("  witness: ({}) -> {v}\n", w.join(", ")));
            }
            for t in &r.transcript {
                out.push_str(&format!("  note: {t}\n"));
            }
        }
        if !self.values.is_null() {
            out.push_str("values:\n");
            render_value(&mut out, &self.values, 1);
        }
        out
    }
}

fn render_value(out: &mut String, v: &serde_json::Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        serde_json::Value::Object(map) => {
            for (k, val) in map {
                match val {
                    serde_json::Value::Object(_) | serde_json::Value::Array(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_value(out, val, depth + 1);
                    }
                    _ => out.push_str(&format!("{pad}{k} = {}\n", scalar(val))),
                }
            }
        }
        serde_json::Value::Array(items) => {
            for item in items {
                match item {
                    serde_json::Value::Object(_) | serde_json::Value::Array(_) => {
                        out.push_str(&format!("{pad}-\n"));
                        render_value(out, item, depth + 1);
                    }
                    _ => out.push_str(&format!("{pad}- {}\n", scalar(item))),
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", scalar(v))),
    }
}

fn scalar(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
