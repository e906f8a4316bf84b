//! Finite automata with nondeterministic classical states and an affine
//! register, read in one pass over `^ w $`.

use std::collections::BTreeMap;
use std::fmt;

use crate::affine::{AffineOperator, AffineVector};
use crate::error::{AffineError, ParameterError};
use crate::rational::Rational;
use crate::scalar::Scalar;

mod decide;
mod engine;
mod format;

pub use decide::{decide, Decision, PathOutcome, VerificationResult};
pub use engine::{
    enumerate_paths, step, sweep_prefixes, trace_path, Configuration, DeadEndPruner,
    EnumerateOptions, Enumeration, PruneHook, PrunedPath, DEFAULT_BUDGET,
};
pub use format::{emit_machine, parse_machine};

/// Left end-marker, read before the input.
pub const LEFT_MARKER: char = '^';
/// Right end-marker, read after the input; weighting happens after it.
pub const RIGHT_MARKER: char = '$';

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OperatorId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    pub target: StateId,
    pub operator: OperatorId,
}

/// The 8-tuple (S, E, Σ, δ, s_I, e_I, s_a, E_a) with set-valued transitions.
///
/// Operators are stored once and referenced by id; the transitions for a
/// (state, symbol) pair are kept in the order they were added, and that order
/// defines the choice indices of the paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MachineSpec<S> {
    name: String,
    states: Vec<String>,
    dimension: usize,
    alphabet: Vec<char>,
    initial_state: StateId,
    initial_affine: usize,
    accept_state: StateId,
    accept_affine: Vec<usize>,
    operators: Vec<(String, AffineOperator<S>)>,
    transitions: BTreeMap<(StateId, char), Vec<Transition>>,
}

impl<S: Scalar> MachineSpec<S> {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, id: StateId) -> &str {
        &self.states[id.0]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name).map(StateId)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn initial_state(&self) -> StateId {
        self.initial_state
    }

    /// 0-based index of the initial affine basis state.
    pub fn initial_affine(&self) -> usize {
        self.initial_affine
    }

    pub fn initial_vector(&self) -> AffineVector<S> {
        AffineVector::basis(self.dimension, self.initial_affine)
            .expect("initial index validated at construction")
    }

    pub fn accept_state(&self) -> StateId {
        self.accept_state
    }

    /// 0-based indices of the accepting affine states.
    pub fn accept_affine(&self) -> &[usize] {
        &self.accept_affine
    }

    pub fn operators(&self) -> &[(String, AffineOperator<S>)] {
        &self.operators
    }

    pub fn operator(&self, id: OperatorId) -> &AffineOperator<S> {
        &self.operators[id.0].1
    }

    pub fn transitions(&self) -> &BTreeMap<(StateId, char), Vec<Transition>> {
        &self.transitions
    }

    pub fn transitions_for(&self, state: StateId, symbol: char) -> &[Transition] {
        self.transitions
            .get(&(state, symbol))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn is_input_symbol(&self, c: char) -> bool {
        self.alphabet.contains(&c)
    }

    /// Replaces every scalar, e.g. to lift an exact machine to intervals.
    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> MachineSpec<T> {
        MachineSpec {
            name: self.name.clone(),
            states: self.states.clone(),
            dimension: self.dimension,
            alphabet: self.alphabet.clone(),
            initial_state: self.initial_state,
            initial_affine: self.initial_affine,
            accept_state: self.accept_state,
            accept_affine: self.accept_affine.clone(),
            operators: self
                .operators
                .iter()
                .map(|(n, op)| (n.clone(), op.map(&f)))
                .collect(),
            transitions: self.transitions.clone(),
        }
    }
}

impl MachineSpec<Rational> {
    pub fn to_interval(&self) -> MachineSpec<crate::interval::RationalInterval> {
        self.map_scalars(|x| crate::interval::RationalInterval::point(x.clone()))
    }
}

impl<S: Scalar> fmt::Display for MachineSpec<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "machine {} ({} classical, {} affine, {} operators)",
            self.name,
            self.states.len(),
            self.dimension,
            self.operators.len()
        )
    }
}

fn valid_name(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

fn valid_symbol(c: char) -> bool {
    !c.is_whitespace() && !c.is_control() && c != LEFT_MARKER && c != RIGHT_MARKER && c != '\''
}

/// Incremental construction of a [`MachineSpec`].
#[derive(Clone, Debug)]
pub struct MachineBuilder<S> {
    name: String,
    states: Vec<String>,
    dimension: usize,
    alphabet: Vec<char>,
    initial: Option<(StateId, usize)>,
    accept: Option<(StateId, Vec<usize>)>,
    operators: Vec<(String, AffineOperator<S>)>,
    transitions: BTreeMap<(StateId, char), Vec<Transition>>,
}

impl<S: Scalar> MachineBuilder<S> {
    pub fn new(name: impl Into<String>, dimension: usize) -> Self {
        MachineBuilder {
            name: name.into(),
            states: Vec::new(),
            dimension,
            alphabet: Vec::new(),
            initial: None,
            accept: None,
            operators: Vec::new(),
            transitions: BTreeMap::new(),
        }
    }

    /// Returns the id of `name`, adding the state if it is new.
    pub fn state(&mut self, name: &str) -> StateId {
        match self.states.iter().position(|s| s == name) {
            Some(i) => StateId(i),
            None => {
                self.states.push(name.to_string());
                StateId(self.states.len() - 1)
            }
        }
    }

    pub fn alphabet(&mut self, symbols: impl IntoIterator<Item = char>) -> &mut Self {
        for c in symbols {
            if !self.alphabet.contains(&c) {
                self.alphabet.push(c);
            }
        }
        self
    }

    /// Registers an operator under `name`; re-registering an equal operator
    /// under the same name returns the existing id.
    pub fn operator(
        &mut self,
        name: &str,
        op: AffineOperator<S>,
    ) -> Result<OperatorId, ParameterError> {
        if op.dim() != self.dimension {
            return Err(ParameterError(format!(
                "operator `{name}` has dimension {}, machine has {}",
                op.dim(),
                self.dimension
            )));
        }
        if let Some(i) = self.operators.iter().position(|(n, _)| n == name) {
            if self.operators[i].1 == op {
                return Ok(OperatorId(i));
            }
            return Err(ParameterError(format!(
                "operator `{name}` defined twice with different entries"
            )));
        }
        self.operators.push((name.to_string(), op));
        Ok(OperatorId(self.operators.len() - 1))
    }

    pub fn transition(
        &mut self,
        from: StateId,
        symbol: char,
        to: StateId,
        operator: OperatorId,
    ) -> &mut Self {
        self.transitions
            .entry((from, symbol))
            .or_default()
            .push(Transition {
                target: to,
                operator,
            });
        self
    }

    pub fn initial(&mut self, state: StateId, affine: usize) -> &mut Self {
        self.initial = Some((state, affine));
        self
    }

    pub fn accept(&mut self, state: StateId, affine: impl IntoIterator<Item = usize>) -> &mut Self {
        let mut set: Vec<usize> = affine.into_iter().collect();
        set.sort_unstable();
        set.dedup();
        self.accept = Some((state, set));
        self
    }

    pub fn build(self) -> Result<MachineSpec<S>, ParameterError> {
        let err = |m: String| Err(ParameterError(m));
        if !valid_name(&self.name) {
            return err(format!("invalid machine name `{}`", self.name));
        }
        if self.dimension == 0 {
            return err(AffineError::EmptyDimension.to_string());
        }
        if let Some(s) = self.states.iter().find(|s| !valid_name(s)) {
            return err(format!("invalid state name `{s}`"));
        }
        if let Some(c) = self.alphabet.iter().find(|&&c| !valid_symbol(c)) {
            return err(format!("symbol `{c}` is reserved or not printable"));
        }
        let Some((initial_state, initial_affine)) = self.initial else {
            return err("no initial state".into());
        };
        let Some((accept_state, accept_affine)) = self.accept else {
            return err("no accepting state".into());
        };
        if initial_affine >= self.dimension {
            return err(format!("initial affine state e{} out of range", initial_affine + 1));
        }
        if let Some(i) = accept_affine.iter().find(|&&i| i >= self.dimension) {
            return err(format!("accepting affine state e{} out of range", i + 1));
        }
        for ((_, symbol), list) in &self.transitions {
            if *symbol != LEFT_MARKER && *symbol != RIGHT_MARKER && !self.alphabet.contains(symbol)
            {
                return err(format!("transition on `{symbol}` which is not in the alphabet"));
            }
            if list.len() > u8::MAX as usize + 1 {
                return err(format!("more than 256 choices on `{symbol}`"));
            }
        }
        Ok(MachineSpec {
            name: self.name,
            states: self.states,
            dimension: self.dimension,
            alphabet: self.alphabet,
            initial_state,
            initial_affine,
            accept_state,
            accept_affine,
            operators: self.operators,
            transitions: self.transitions,
        })
    }
}
