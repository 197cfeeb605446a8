//! Verification reports and deterministic parallel sweeps.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::pres::Window;

/// Witnesses kept per sub-check; the count of failures is always exact.
pub const MAX_WITNESSES: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub check: String,
    pub at: String,
    pub lhs: String,
    pub rhs: String,
}

impl Witness {
    pub fn new(check: &str, at: impl Into<String>, lhs: impl Into<String>, rhs: impl Into<String>) -> Self {
        Witness { check: check.into(), at: at.into(), lhs: lhs.into(), rhs: rhs.into() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SubCheck {
    pub name: String,
    pub checked: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub check: String,
    pub item: String,
    pub params: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<Window>,
    pub status: Status,
    pub subchecks: Vec<SubCheck>,
    pub witnesses: Vec<Witness>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub timing_ms: u64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub artifacts: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<Report>,
}

impl Report {
    pub fn new(check: &str, item: &str) -> Self {
        Report {
            check: check.into(),
            item: item.into(),
            params: BTreeMap::new(),
            window: None,
            status: Status::Pass,
            subchecks: Vec::new(),
            witnesses: Vec::new(),
            notes: Vec::new(),
            timing_ms: 0,
            artifacts: Vec::new(),
            children: Vec::new(),
        }
    }

    pub fn with_window(mut self, w: Window) -> Self {
        self.window = Some(w);
        self
    }

    pub fn param(mut self, k: &str, v: impl ToString) -> Self {
        self.params.insert(k.into(), v.to_string());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Record a sub-check result; failures demote the status.
    pub fn add(&mut self, s: Sweep) {
        if !s.failures.is_empty() {
            self.status = Status::Fail;
        }
        self.subchecks.push(SubCheck { name: s.name, checked: s.checked, failed: s.failures.len() });
        self.witnesses.extend(s.failures.into_iter().take(MAX_WITNESSES));
    }

    /// A single boolean sub-check.
    pub fn expect(&mut self, name: &str, ok: bool, at: &str, lhs: impl Into<String>, rhs: impl Into<String>) {
        let mut s = Sweep::empty(name);
        s.checked = 1;
        if !ok {
            s.failures.push(Witness::new(name, at, lhs, rhs));
        }
        self.add(s);
    }

    /// Record a sweep, downgrading a window exhaustion to an inconclusive sub-check.
    pub fn add_guarded(&mut self, name: &str, s: Result<Sweep>) -> Result<()> {
        match s {
            Ok(s) => self.add(s),
            Err(Error::Window(msg)) => self.inconclusive(name, msg),
            Err(e) => return Err(e),
        }
        Ok(())
    }

    pub fn fail_reason(&mut self, name: &str, reason: impl Into<String>) {
        self.status = Status::Fail;
        let reason = reason.into();
        self.subchecks.push(SubCheck { name: name.into(), checked: 1, failed: 1 });
        self.witnesses.push(Witness::new(name, "-", reason, ""));
    }

    pub fn inconclusive(&mut self, name: &str, reason: impl Into<String>) {
        if self.status == Status::Pass {
            self.status = Status::Inconclusive;
        }
        self.witnesses.push(Witness::new(name, "-", reason.into(), ""));
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn child(&mut self, r: Report) {
        match r.status {
            Status::Fail => self.status = Status::Fail,
            Status::Inconclusive if self.status == Status::Pass => self.status = Status::Inconclusive,
            _ => {}
        }
        self.children.push(r);
    }

    pub fn finish(mut self, started: Instant) -> Self {
        self.timing_ms = started.elapsed().as_millis() as u64;
        self
    }

    /// All failing witnesses, including those of children.
    pub fn all_witnesses(&self) -> Vec<&Witness> {
        let mut out: Vec<&Witness> = self.witnesses.iter().collect();
        for c in &self.children {
            out.extend(c.all_witnesses());
        }
        out
    }

    /// JSON with every timing field zeroed, for determinism comparisons.
    pub fn canonical_json(&self) -> String {
        let mut r = self.clone();
        r.zero_timing();
        serde_json::to_string_pretty(&r).expect("report serializes")
    }

    fn zero_timing(&mut self) {
        self.timing_ms = 0;
        for c in &mut self.children {
            c.zero_timing();
        }
    }

    /// Content address of the inputs that determine this report.
    pub fn certificate_id(&self) -> String {
        let key = serde_json::json!({
            "check": self.check,
            "item": self.item,
            "params": self.params,
            "window": self.window,
        });
        hex::encode(Sha256::digest(key.to_string().as_bytes()))
    }

    /// Indented status lines for the report and its children, with sub-check counts.
    pub fn render_tree(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out, 0);
        out
    }

    fn render_into(&self, out: &mut String, depth: usize) {
        let pad = "  ".repeat(depth);
        out.push_str(&format!("{pad}{}\n", self.summary_line()));
        for s in &self.subchecks {
            out.push_str(&format!("{pad}  - {}: {} checked, {} failed\n", s.name, s.checked, s.failed));
        }
        for w in &self.witnesses {
            out.push_str(&format!("{pad}  ! {} at {}: {} vs {}\n", w.check, w.at, w.lhs, w.rhs));
        }
        for n in &self.notes {
            out.push_str(&format!("{pad}  note: {n}\n"));
        }
        for c in &self.children {
            c.render_into(out, depth + 1);
        }
    }

    pub fn summary_line(&self) -> String {
        let status = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
        };
        let checked: usize = self.subchecks.iter().map(|s| s.checked).sum();
        format!("{status} {} [{}] checks={checked} {}ms", self.check, self.item, self.timing_ms)
    }
}

/// Outcome of one sub-check run over many instances.
#[derive(Clone, Debug)]
pub struct Sweep {
    pub name: String,
    pub checked: usize,
    pub failures: Vec<Witness>,
}

impl Sweep {
    pub fn empty(name: &str) -> Self {
        Sweep { name: name.into(), checked: 0, failures: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Evaluate `f` on every item in parallel; failures keep item order.
/// `f` returns `Some((lhs, rhs))` when the two sides differ.
pub fn sweep<T, F>(name: &str, items: &[T], label: impl Fn(&T) -> String + Sync, f: F) -> Result<Sweep>
where
    T: Sync,
    F: Fn(&T) -> Result<Option<(String, String)>> + Sync,
{
    let results: Vec<Result<Option<(String, String)>>> = items.par_iter().map(&f).collect();
    let mut out = Sweep::empty(name);
    for (item, r) in items.iter().zip(results) {
        out.checked += 1;
        if let Some((l, r)) = r? {
            out.failures.push(Witness::new(name, label(item), l, r));
        }
    }
    Ok(out)
}
