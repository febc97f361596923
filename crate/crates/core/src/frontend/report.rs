//! Operation reports: a versioned key/value tree rendered either as text or,
//! by the command-line tool, as JSON.

use std::fmt;

use serde::Serialize;

pub const SCHEMA: &str = "vb-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Every residual vanished exactly.
    Verified,
    /// A computed value was returned without a zero-check contract.
    Computed,
    Nonzero,
    Obstruction,
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Entry {
    pub key: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub operation: String,
    pub inputs: Vec<Entry>,
    pub results: Vec<Entry>,
    pub residuals: Vec<Entry>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<usize>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(operation: &str) -> Self {
        Report {
            schema: SCHEMA,
            operation: operation.into(),
            inputs: Vec::new(),
            results: Vec::new(),
            residuals: Vec::new(),
            verdict: Verdict::Computed,
            bound: None,
            notes: Vec::new(),
        }
    }

    pub fn input(&mut self, key: impl Into<String>, value: impl Into<String>) -> &mut Self {
        self.inputs.push(Entry {
            key: key.into(),
            value: value.into(),
        });
        self
    }

    pub fn result(&mut self, key: impl Into<String>, value: impl Into<String>) -> &mut Self {
        self.results.push(Entry {
            key: key.into(),
            value: value.into(),
        });
        self
    }

    /// Records a residual; a nonzero one turns a `Verified` or `Computed`
    /// verdict into `Nonzero`.
    pub fn residual(&mut self, key: impl Into<String>, value: impl Into<String>, zero: bool) -> &mut Self {
        self.residuals.push(Entry {
            key: key.into(),
            value: value.into(),
        });
        if !zero {
            self.verdict = Verdict::Nonzero;
        } else if self.verdict == Verdict::Computed {
            self.verdict = Verdict::Verified;
        }
        self
    }

    pub fn note(&mut self, text: impl Into<String>) -> &mut Self {
        self.notes.push(text.into());
        self
    }

    pub fn verdict(&mut self, v: Verdict) -> &mut Self {
        self.verdict = v;
        self
    }

    pub fn all_residuals_zero(&self) -> bool {
        self.residuals.iter().all(|e| e.value == "0")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "operation: {}", self.operation)?;
        for (title, entries) in [("input", &self.inputs), ("result", &self.results), ("residual", &self.residuals)] {
            for e in entries {
                writeln!(f, "{} {} = {}", title, e.key, e.value)?;
            }
        }
        if let Some(b) = self.bound {
            writeln!(f, "bound: {}", b)?;
        }
        for n in &self.notes {
            writeln!(f, "note: {}", n)?;
        }
        let v = match self.verdict {
            Verdict::Verified => "verified",
            Verdict::Computed => "computed",
            Verdict::Nonzero => "nonzero",
            Verdict::Obstruction => "obstruction",
            Verdict::Undecided => "undecided",
        };
        write!(f, "verdict: {}", v)
    }
}
