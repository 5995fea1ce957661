//! JSON run reports and CSV export.
//!
//! `serde_json` maps are ordered by key, so a report built from the same
//! inputs always renders to the same bytes. `runtime_ms` stays `null` unless
//! the caller opts into timing.

use std::fmt::Write as _;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;

use super::STableResult;

pub fn ser_decimal<S: Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub operation: String,
    pub parameters: Value,
    pub result: Value,
    pub witnesses: Value,
    pub runtime_ms: Option<u64>,
    pub partial: bool,
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

impl Report {
    pub fn new(operation: &str, parameters: impl Serialize, result: impl Serialize) -> Self {
        Report {
            operation: operation.to_string(),
            parameters: to_value(parameters),
            result: to_value(result),
            witnesses: Value::Null,
            runtime_ms: None,
            partial: false,
        }
    }

    pub fn with_witnesses(mut self, witnesses: impl Serialize) -> Self {
        self.witnesses = to_value(witnesses);
        self
    }

    pub fn partial(mut self, partial: bool) -> Self {
        self.partial = partial;
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

/// Columns `c,member,witness_n`; `witness_n` is empty for non-members.
pub fn s_table_csv(t: &STableResult) -> String {
    let mut out = String::from("c,member,witness_n\n");
    for c in 1..=t.c_max {
        match t.witnesses.get(&c) {
            Some(n) => writeln!(out, "{c},true,{n}"),
            None => writeln!(out, "{c},false,"),
        }
        .expect("writing to a String");
    }
    out
}
