use num_traits::One;

use super::engine::Enumeration;
use super::{MachineSpec, StateId};
use crate::error::ParameterError;
use crate::rational::Rational;
use crate::scalar::{Certainty, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Decision {
    Accept,
    Reject,
    Inconclusive,
}

impl Decision {
    pub fn as_str(self) -> &'static str {
        match self {
            Decision::Accept => "accept",
            Decision::Reject => "reject",
            Decision::Inconclusive => "inconclusive",
        }
    }
}

impl std::fmt::Display for Decision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Acceptance probability of one path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathOutcome<S> {
    pub choices: Vec<u8>,
    /// `None` for pruned paths.
    pub final_state: Option<StateId>,
    /// Exact (or enclosed) probability; for pruned paths, the certified
    /// upper bound reported by the hook.
    pub probability: S,
    pub merged: usize,
    pub pruned_at: Option<usize>,
}

impl<S: Scalar> PathOutcome<S> {
    /// Choice sequence as text: digits when every index is below 10,
    /// dot-separated otherwise.
    pub fn choice_string(&self) -> String {
        if self.choices.iter().all(|&c| c < 10) {
            self.choices.iter().map(|c| char::from(b'0' + c)).collect()
        } else {
            self.choices
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(".")
        }
    }
}

impl<S: Scalar> Enumeration<S> {
    /// Weights every final configuration; paths not ending in the accepting
    /// classical state get probability 0.
    pub fn outcomes(&self, machine: &MachineSpec<S>) -> Vec<PathOutcome<S>> {
        let mut out: Vec<PathOutcome<S>> = self
            .finals
            .iter()
            .map(|c| PathOutcome {
                choices: c.choices.clone(),
                final_state: Some(c.state),
                probability: if c.state == machine.accept_state() {
                    c.affine.weight(machine.accept_affine())
                } else {
                    S::zero()
                },
                merged: c.merged,
                pruned_at: None,
            })
            .chain(self.pruned.iter().map(|p| PathOutcome {
                choices: p.choices.clone(),
                final_state: None,
                probability: p.bound.clone(),
                merged: p.merged,
                pruned_at: Some(p.step),
            }))
            .collect();
        out.sort_by(|a, b| a.choices.cmp(&b.choices));
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationResult<S> {
    /// Sorted lexicographically by choices.
    pub outcomes: Vec<PathOutcome<S>>,
    pub max_probability: S,
    pub min_probability: S,
    pub decision: Decision,
    pub epsilon: Rational,
}

/// Applies the verification rule with error bound `epsilon`: accept when some
/// path reaches at least 1−ε, reject when every path is at most ε.
///
/// Exact runs that satisfy neither condition (the machine does not meet the
/// error bound on this input) are reported as inconclusive, as are interval
/// runs whose enclosures straddle a threshold.
pub fn decide<S: Scalar>(
    mut outcomes: Vec<PathOutcome<S>>,
    epsilon: &Rational,
) -> Result<VerificationResult<S>, ParameterError> {
    let half = Rational::new(1, 2);
    if epsilon.is_negative() || epsilon >= &half {
        return Err(ParameterError(format!(
            "error bound {epsilon} must lie in [0, 1/2)"
        )));
    }
    outcomes.sort_by(|a, b| a.choices.cmp(&b.choices));
    let (max_probability, min_probability) = match outcomes.split_first() {
        None => (S::zero(), S::zero()),
        Some((first, rest)) => rest.iter().fold(
            (first.probability.clone(), first.probability.clone()),
            |(hi, lo), o| (hi.max_of(&o.probability), lo.min_of(&o.probability)),
        ),
    };
    let threshold = &Rational::one() - epsilon;
    let decision = if max_probability.at_least(&threshold) == Certainty::Yes {
        Decision::Accept
    } else if outcomes
        .iter()
        .all(|o| o.probability.at_most(epsilon) == Certainty::Yes)
    {
        Decision::Reject
    } else {
        Decision::Inconclusive
    };
    Ok(VerificationResult {
        outcomes,
        max_probability,
        min_probability,
        decision,
        epsilon: epsilon.clone(),
    })
}
