//! Deterministic run reports, as text or JSON.

use std::fmt::Write as _;
use std::time::Duration;

use afav_core::machine::{Decision, MachineSpec, PathOutcome, VerificationResult};
use afav_core::{Rational, Scalar};
use serde::Serialize;

/// Fractional digits in the decimal hint after each exact probability.
const DECIMALS: usize = 10;

/// Exact fraction first, then a truncated decimal; intervals as a pair.
pub fn probability<S: Scalar>(p: &S) -> String {
    match p.as_exact() {
        Some(x) => format!("{x} (~{})", x.to_decimal_toward_zero(DECIMALS)),
        None => format!("[{},{}]", p.lower(), p.upper()),
    }
}

/// The bare value, for JSON.
fn fraction<S: Scalar>(p: &S) -> String {
    match p.as_exact() {
        Some(x) => x.to_string(),
        None => format!("[{},{}]", p.lower(), p.upper()),
    }
}

#[derive(Debug, Serialize)]
pub struct PathLine {
    pub choices: String,
    /// Absent for pruned paths.
    pub state: Option<String>,
    pub probability: String,
    pub merged: usize,
    pub pruned_at: Option<usize>,
    #[serde(skip)]
    text: String,
}

#[derive(Debug, Serialize)]
pub struct OracleVerdict {
    pub member: bool,
    /// Exact maximum acceptance the bounds predict, when known.
    pub expected_max: Option<String>,
    /// `None` when an interval run could not decide.
    pub agree: Option<bool>,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub machine: String,
    pub input: String,
    pub scalar: &'static str,
    pub epsilon: String,
    pub paths: Vec<PathLine>,
    pub total_paths: usize,
    pub distinct_paths: usize,
    pub pruned_paths: usize,
    pub max_probability: String,
    pub min_probability: String,
    #[serde(serialize_with = "decision_name")]
    pub decision: Decision,
    pub oracle: Option<OracleVerdict>,
    /// Kept out of both renderings so reports are byte-identical across runs.
    #[serde(skip)]
    pub elapsed: Duration,
    #[serde(skip)]
    max_text: String,
    #[serde(skip)]
    min_text: String,
}

fn decision_name<Z: serde::Serializer>(d: &Decision, s: Z) -> Result<Z::Ok, Z::Error> {
    s.serialize_str(d.as_str())
}

fn path_line<S: Scalar>(machine: &MachineSpec<S>, o: &PathOutcome<S>) -> PathLine {
    let choices = o.choice_string();
    let state = o.final_state.map(|s| machine.state_name(s).to_string());
    let mut text = format!("path {choices}");
    match (&state, o.pruned_at) {
        (Some(name), _) => {
            let _ = write!(text, " state={name} p={}", probability(&o.probability));
        }
        (None, step) => {
            let _ = write!(
                text,
                " pruned@{} p<={}",
                step.unwrap_or(0),
                probability(&o.probability)
            );
        }
    }
    if o.merged > 0 {
        let _ = write!(text, " merged={}", o.merged);
    }
    PathLine {
        choices,
        state,
        probability: fraction(&o.probability),
        merged: o.merged,
        pruned_at: o.pruned_at,
        text,
    }
}

impl RunReport {
    pub fn new<S: Scalar>(
        machine: &MachineSpec<S>,
        input: &str,
        result: &VerificationResult<S>,
        list_paths: bool,
        elapsed: Duration,
    ) -> Self {
        let outcomes = &result.outcomes;
        RunReport {
            machine: machine.name().to_string(),
            input: input.to_string(),
            scalar: S::KIND,
            epsilon: result.epsilon.to_string(),
            paths: if list_paths {
                outcomes.iter().map(|o| path_line(machine, o)).collect()
            } else {
                Vec::new()
            },
            total_paths: outcomes.iter().map(|o| 1 + o.merged).sum(),
            distinct_paths: outcomes.len(),
            pruned_paths: outcomes.iter().filter(|o| o.pruned_at.is_some()).count(),
            max_probability: fraction(&result.max_probability),
            min_probability: fraction(&result.min_probability),
            decision: result.decision,
            oracle: None,
            elapsed,
            max_text: probability(&result.max_probability),
            min_text: probability(&result.min_probability),
        }
    }

    pub fn with_oracle(mut self, verdict: OracleVerdict) -> Self {
        self.oracle = Some(verdict);
        self
    }

    pub fn exit_code(&self) -> i32 {
        match self.decision {
            Decision::Accept => 0,
            Decision::Reject => 1,
            Decision::Inconclusive => 2,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "machine={} input={} scalar={}", self.machine, self.input, self.scalar);
        for p in &self.paths {
            let _ = writeln!(out, "{}", p.text);
        }
        let _ = writeln!(
            out,
            "paths={} distinct={} pruned={}",
            self.total_paths, self.distinct_paths, self.pruned_paths
        );
        let _ = writeln!(out, "max={}", self.max_text);
        let _ = writeln!(out, "min={}", self.min_text);
        let _ = writeln!(out, "decision={} epsilon={}", self.decision, self.epsilon);
        if let Some(o) = &self.oracle {
            let _ = write!(out, "oracle={}", if o.member { "member" } else { "non-member" });
            if let Some(m) = &o.expected_max {
                let _ = write!(out, " expected-max={m}");
            }
            let agree = match o.agree {
                Some(true) => "yes",
                Some(false) => "no",
                None => "undetermined",
            };
            let _ = writeln!(out, " agree={agree}");
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report fields serialize") + "\n"
    }
}

/// Compares a run with an oracle's membership and predicted maximum.
pub fn verdict<S: Scalar>(
    result: &VerificationResult<S>,
    member: bool,
    expected_max: Option<Rational>,
) -> OracleVerdict {
    let agree = match result.decision {
        Decision::Inconclusive => None,
        d => {
            let max_ok = expected_max
                .as_ref()
                .is_none_or(|m| result.max_probability.contains(m));
            Some((d == Decision::Accept) == member && max_ok)
        }
    };
    OracleVerdict {
        member,
        expected_max: expected_max.map(|m| m.to_string()),
        agree,
    }
}
