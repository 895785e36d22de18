//! Verification reports: one [`Check`] per invariant, with the first failing
//! witness and the window it was checked on.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub cases: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub window: String,
}

impl Check {
    pub fn skipped(name: impl Into<String>, reason: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            status: Status::Skipped,
            cases: 0,
            witness: None,
            note: Some(reason.into()),
            window: String::new(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Check {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

/// Case counter handed to check bodies.
pub struct Cases {
    check: String,
    count: usize,
}

impl Cases {
    /// Records one case; a failure aborts the check body through `?`.
    pub fn expect(&mut self, ok: bool, witness: impl FnOnce() -> String) -> Result<()> {
        self.count += 1;
        if ok {
            Ok(())
        } else {
            Err(Error::failed(self.check.clone(), witness()))
        }
    }

    /// Equality case with both sides in the witness.
    pub fn expect_eq<T: PartialEq + fmt::Display>(
        &mut self,
        lhs: &T,
        rhs: &T,
        at: impl FnOnce() -> String,
    ) -> Result<()> {
        self.expect(lhs == rhs, || format!("{}: lhs = {lhs}, rhs = {rhs}", at()))
    }

    pub fn count(&self) -> usize {
        self.count
    }
}

/// Runs a check body; any error (including a failed case) becomes a failing
/// check whose witness is the error text.
pub fn check<F>(name: &str, window: &str, body: F) -> Check
where
    F: FnOnce(&mut Cases) -> Result<()>,
{
    let mut cases = Cases {
        check: name.to_string(),
        count: 0,
    };
    let outcome = body(&mut cases);
    let (status, witness) = match outcome {
        Ok(()) => (Status::Pass, None),
        Err(Error::VerificationFailed { witness, .. }) => (Status::Fail, Some(witness)),
        Err(e) => (Status::Fail, Some(e.to_string())),
    };
    Check {
        name: name.to_string(),
        status,
        cases: cases.count,
        witness,
        note: None,
        window: window.to_string(),
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            ..Default::default()
        }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn note(&mut self, n: impl Into<String>) {
        self.notes.push(n.into());
    }

    /// Appends another report's checks, prefixing their names.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            c.name = format!("{prefix}{}", c.name);
            self.checks.push(c);
        }
        self.notes.extend(other.notes);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Turns a failing report into [`Error::VerificationFailed`].
    pub fn into_result(self) -> Result<Report> {
        if let Some(c) = self.failures().next() {
            return Err(Error::failed(
                c.name.clone(),
                c.witness.clone().unwrap_or_default(),
            ));
        }
        Ok(self)
    }

    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# {}", self.title)?;
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            write!(f, "{} {:width$} cases={}", c.status, c.name, c.cases)?;
            if !c.window.is_empty() {
                write!(f, " window={}", c.window)?;
            }
            writeln!(f)?;
            if let Some(w) = &c.witness {
                writeln!(f, "     witness: {w}")?;
            }
            if let Some(n) = &c.note {
                writeln!(f, "     note: {n}")?;
            }
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        let failed = self.failures().count();
        writeln!(
            f,
            "{} checks, {} failed",
            self.checks.len(),
            failed
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failing_case_carries_witness() {
        let c = check("parity", "0..4", |cs| {
            for n in 0..4 {
                cs.expect(n < 2, || format!("n = {n}"))?;
            }
            Ok(())
        });
        assert_eq!(c.status, Status::Fail);
        assert_eq!(c.cases, 3);
        assert_eq!(c.witness.as_deref(), Some("n = 2"));
    }

    #[test]
    fn render_is_deterministic() {
        let mut r = Report::new("demo");
        r.push(check("a", "full", |cs| cs.expect(true, String::new)));
        r.push(Check::skipped("b", "not applicable"));
        assert_eq!(r.render(), r.render());
        assert!(r.all_passed());
        assert!(r.render().contains("SKIP b"));
    }
}
