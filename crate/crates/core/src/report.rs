//! Validation reports shared by every checker.
//!
//! A report records, per law, whether it held and a bounded list of concrete
//! witnesses when it did not. A report with no failing law is "empty" in the
//! sense used throughout the crate: `is_ok()` holds exactly then.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Witnesses kept per law; the total count is tracked separately.
pub const MAX_WITNESSES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Fail,
    /// Holds by construction of the representation (nothing to enumerate).
    Structural,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawResult {
    pub law: String,
    pub status: Status,
    pub violations: usize,
    pub witnesses: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    laws: Vec<LawResult>,
}

/// One row of the machine-readable report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub law: String,
    pub status: Status,
    pub witness: Option<String>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    fn slot(&mut self, law: &str) -> &mut LawResult {
        if let Some(pos) = self.laws.iter().position(|l| l.law == law) {
            return &mut self.laws[pos];
        }
        self.laws.push(LawResult {
            law: law.to_string(),
            status: Status::Ok,
            violations: 0,
            witnesses: Vec::new(),
        });
        self.laws.last_mut().unwrap()
    }

    /// Registers `law` as checked; it stays `Ok` unless a failure is recorded.
    pub fn check(&mut self, law: &str) -> &mut Self {
        self.slot(law);
        self
    }

    pub fn structural(&mut self, law: &str) -> &mut Self {
        let slot = self.slot(law);
        if slot.status == Status::Ok {
            slot.status = Status::Structural;
        }
        self
    }

    pub fn fail(&mut self, law: &str, witness: impl Into<String>) {
        let slot = self.slot(law);
        slot.status = Status::Fail;
        slot.violations += 1;
        if slot.witnesses.len() < MAX_WITNESSES {
            slot.witnesses.push(witness.into());
        }
    }

    /// Records the outcome of a boolean test in one call.
    pub fn expect(&mut self, law: &str, holds: bool, witness: impl FnOnce() -> String) {
        if holds {
            self.check(law);
        } else {
            self.fail(law, witness());
        }
    }

    /// Appends every law of `other`, prefixing names with `scope` when given.
    pub fn merge(&mut self, scope: Option<&str>, other: Report) {
        for mut law in other.laws {
            if let Some(scope) = scope {
                law.law = format!("{scope}: {}", law.law);
            }
            let slot = self.slot(&law.law);
            match law.status {
                Status::Fail => slot.status = Status::Fail,
                Status::Structural if slot.status == Status::Ok => slot.status = Status::Structural,
                _ => {}
            }
            slot.violations += law.violations;
            for w in law.witnesses {
                if slot.witnesses.len() < MAX_WITNESSES {
                    slot.witnesses.push(w);
                }
            }
        }
    }

    pub fn is_ok(&self) -> bool {
        self.laws.iter().all(|l| l.status != Status::Fail)
    }

    pub fn laws(&self) -> &[LawResult] {
        &self.laws
    }

    pub fn law(&self, name: &str) -> Option<&LawResult> {
        self.laws.iter().find(|l| l.law == name)
    }

    pub fn failed(&self, name: &str) -> bool {
        self.law(name).is_some_and(|l| l.status == Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &LawResult> {
        self.laws.iter().filter(|l| l.status == Status::Fail)
    }

    pub fn violation_count(&self) -> usize {
        self.laws.iter().map(|l| l.violations).sum()
    }

    /// `"F1 ok, F2 structural, F3 ok"`.
    pub fn summary(&self) -> String {
        self.laws
            .iter()
            .map(|l| {
                let status = match l.status {
                    Status::Ok => "ok",
                    Status::Fail => "FAIL",
                    Status::Structural => "structural",
                };
                format!("{} {}", l.law, status)
            })
            .collect::<Vec<_>>()
            .join(", ")
    }

    /// Flattens into `{law, status, witness}` rows, one per witness.
    pub fn entries(&self) -> Vec<Entry> {
        let mut out = Vec::new();
        for l in &self.laws {
            if l.witnesses.is_empty() {
                out.push(Entry { law: l.law.clone(), status: l.status, witness: None });
            } else {
                for w in &l.witnesses {
                    out.push(Entry { law: l.law.clone(), status: l.status, witness: Some(w.clone()) });
                }
            }
        }
        out
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.laws {
            match l.status {
                Status::Ok => writeln!(f, "  {:<28} ok", l.law)?,
                Status::Structural => writeln!(f, "  {:<28} structural", l.law)?,
                Status::Fail => {
                    writeln!(f, "  {:<28} FAIL ({} violations)", l.law, l.violations)?;
                    for w in &l.witnesses {
                        writeln!(f, "      witness: {w}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_is_ok() {
        let r = Report::new();
        assert!(r.is_ok());
        assert_eq!(r.summary(), "");
    }

    #[test]
    fn failure_flips_status_and_caps_witnesses() {
        let mut r = Report::new();
        r.check("F1");
        for k in 0..20 {
            r.fail("F3", format!("w{k}"));
        }
        assert!(!r.is_ok());
        let f3 = r.law("F3").unwrap();
        assert_eq!(f3.violations, 20);
        assert_eq!(f3.witnesses.len(), MAX_WITNESSES);
        assert_eq!(r.summary(), "F1 ok, F3 FAIL");
    }

    #[test]
    fn merge_scopes_law_names() {
        let mut inner = Report::new();
        inner.fail("A9", "u");
        let mut outer = Report::new();
        outer.merge(Some("C"), inner);
        assert!(outer.failed("C: A9"));
    }
}
