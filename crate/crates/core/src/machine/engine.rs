//! Breadth-first expansion of the computation tree.
//!
//! The frontier is kept in lexicographic order of choice sequences: parents
//! are expanded in order and each parent's children are appended in
//! transition order. Deduplication keeps the first (smallest) representative
//! of every (classical state, affine vector) pair, so results never depend on
//! scheduling.

use indexmap::map::Entry;
use indexmap::IndexMap;
use num_traits::One;
use rayon::prelude::*;

use super::{MachineSpec, StateId, LEFT_MARKER, RIGHT_MARKER};
use crate::affine::AffineVector;
use crate::error::EngineError;
use crate::rational::Rational;
use crate::scalar::Scalar;

/// Default cap on live configurations (2^22).
pub const DEFAULT_BUDGET: usize = 1 << 22;

/// Frontiers smaller than this are expanded on the calling thread.
const PARALLEL_THRESHOLD: usize = 512;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration<S> {
    pub state: StateId,
    pub affine: AffineVector<S>,
    /// One transition index per symbol read so far.
    pub choices: Vec<u8>,
    /// Number of other paths folded into this one by deduplication.
    pub merged: usize,
}

#[derive(Clone, Debug)]
pub struct EnumerateOptions {
    pub dedup: bool,
    pub budget: usize,
    /// `None` uses the global rayon pool; `Some(1)` runs single-threaded.
    pub threads: Option<usize>,
    /// Check entry sum 1 and ℓ1 ≥ 1 on every configuration.
    pub check_invariants: bool,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            dedup: true,
            budget: DEFAULT_BUDGET,
            threads: None,
            check_invariants: cfg!(debug_assertions),
        }
    }
}

/// Decides whether a configuration can be dropped early.
pub trait PruneHook<S>: Sync {
    /// A certified upper bound on the final acceptance probability of every
    /// continuation of `config`, or `None` to keep it. `next` indexes the
    /// next symbol of `marked` (the input framed by end-markers).
    fn certify(&self, config: &Configuration<S>, next: usize, marked: &[char]) -> Option<S>;
}

/// A configuration removed by a [`PruneHook`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrunedPath<S> {
    pub choices: Vec<u8>,
    pub merged: usize,
    pub bound: S,
    /// Number of symbols read when the path was cut.
    pub step: usize,
}

/// All final configurations of a run, plus any pruned paths.
#[derive(Clone, Debug)]
pub struct Enumeration<S> {
    pub finals: Vec<Configuration<S>>,
    pub pruned: Vec<PrunedPath<S>>,
    pub peak_live: usize,
}

fn check_input<S: Scalar>(machine: &MachineSpec<S>, input: &str) -> Result<Vec<char>, EngineError> {
    let mut marked = Vec::with_capacity(input.len() + 2);
    marked.push(LEFT_MARKER);
    for (position, symbol) in input.chars().enumerate() {
        if !machine.is_input_symbol(symbol) {
            return Err(EngineError::InvalidInput { symbol, position });
        }
        marked.push(symbol);
    }
    marked.push(RIGHT_MARKER);
    Ok(marked)
}

/// All successors of `config` on `symbol`, in transition order.
pub fn step<S: Scalar>(
    machine: &MachineSpec<S>,
    config: &Configuration<S>,
    symbol: char,
) -> Result<Vec<Configuration<S>>, EngineError> {
    let list = machine.transitions_for(config.state, symbol);
    if list.is_empty() {
        return Err(EngineError::MissingTransition {
            state: machine.state_name(config.state).to_string(),
            symbol,
        });
    }
    Ok(list
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let mut choices = Vec::with_capacity(config.choices.len() + 1);
            choices.extend_from_slice(&config.choices);
            choices.push(i as u8);
            Configuration {
                state: t.target,
                affine: machine.operator(t.operator).apply_unchecked(&config.affine),
                choices,
                merged: config.merged,
            }
        })
        .collect())
}

fn check_invariants<S: Scalar>(config: &Configuration<S>, step: usize) -> Result<(), EngineError> {
    let one = Rational::one();
    let sum = config.affine.entry_sum();
    if !sum.contains(&one) {
        return Err(EngineError::Invariant {
            step,
            detail: format!("entry sum {sum} on path {:?}", config.choices),
        });
    }
    // one entry of magnitude ≥ 1 settles the norm without summing big values
    if config.affine.entries().iter().any(|x| x.abs().upper() >= one) {
        return Ok(());
    }
    let norm = config.affine.l1_norm();
    if norm.upper() < one {
        return Err(EngineError::Invariant {
            step,
            detail: format!("l1 norm {norm} below 1 on path {:?}", config.choices),
        });
    }
    Ok(())
}

/// Runs `machine` on `^ input $`, returning every final configuration in
/// lexicographic order of choices.
pub fn enumerate_paths<S: Scalar>(
    machine: &MachineSpec<S>,
    input: &str,
    options: &EnumerateOptions,
    prune: Option<&dyn PruneHook<S>>,
) -> Result<Enumeration<S>, EngineError> {
    with_pool(options, |parallel| run(machine, input, options, prune, parallel))
}

/// Runs `machine` on `^ p $` for every prefix `p` of `input`, shortest
/// first, calling `visit(p.len(), result)` for each.
///
/// The shared prefix is expanded once, so a sweep over all lengths up to `n`
/// costs about as much as the single longest run. Each result equals what
/// [`enumerate_paths`] returns for that prefix without pruning.
pub fn sweep_prefixes<S: Scalar>(
    machine: &MachineSpec<S>,
    input: &str,
    options: &EnumerateOptions,
    mut visit: impl FnMut(usize, Enumeration<S>) + Send,
) -> Result<(), EngineError> {
    with_pool(options, |parallel| {
        let marked = check_input(machine, input)?;
        let body = &marked[..marked.len() - 1];
        let mut frontier = vec![initial(machine)];
        let mut peak_live = 1;
        for (index, &symbol) in body.iter().enumerate() {
            frontier = advance(machine, &frontier, symbol, index + 1, options, parallel)?;
            peak_live = peak_live.max(frontier.len());
            let finals = advance(machine, &frontier, RIGHT_MARKER, index + 2, options, parallel)?;
            visit(
                index,
                Enumeration {
                    peak_live: peak_live.max(finals.len()),
                    finals,
                    pruned: Vec::new(),
                },
            );
        }
        Ok(())
    })
}

fn with_pool<R: Send>(options: &EnumerateOptions, f: impl FnOnce(bool) -> R + Send) -> R {
    match options.threads {
        Some(n) if n > 1 => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(|| f(true)),
        Some(_) => f(false),
        None => f(true),
    }
}

fn initial<S: Scalar>(machine: &MachineSpec<S>) -> Configuration<S> {
    Configuration {
        state: machine.initial_state(),
        affine: machine.initial_vector(),
        choices: Vec::new(),
        merged: 0,
    }
}

/// One step of the whole frontier: expansion, optional merging, budget check.
fn advance<S: Scalar>(
    machine: &MachineSpec<S>,
    frontier: &[Configuration<S>],
    symbol: char,
    step_no: usize,
    options: &EnumerateOptions,
    parallel: bool,
) -> Result<Vec<Configuration<S>>, EngineError> {
    if !options.dedup {
        let upcoming: usize = frontier
            .iter()
            .map(|c| machine.transitions_for(c.state, symbol).len())
            .sum();
        if upcoming > options.budget {
            return Err(EngineError::Budget {
                step: step_no,
                live: upcoming,
                budget: options.budget,
            });
        }
    }

    let expand = |c: &Configuration<S>| -> Result<Vec<Configuration<S>>, EngineError> {
        let next = step(machine, c, symbol)?;
        if options.check_invariants {
            for n in &next {
                check_invariants(n, step_no)?;
            }
        }
        Ok(next)
    };
    let children: Vec<Vec<Configuration<S>>> = if parallel && frontier.len() >= PARALLEL_THRESHOLD
    {
        frontier
            .par_iter()
            .map(expand)
            .collect::<Result<_, _>>()?
    } else {
        frontier.iter().map(expand).collect::<Result<_, _>>()?
    };

    let next: Vec<Configuration<S>> = if options.dedup {
        let mut seen: IndexMap<(StateId, AffineVector<S>), (Vec<u8>, usize)> = IndexMap::new();
        for c in children.into_iter().flatten() {
            match seen.entry((c.state, c.affine)) {
                Entry::Occupied(mut e) => e.get_mut().1 += c.merged + 1,
                Entry::Vacant(e) => {
                    e.insert((c.choices, c.merged));
                }
            }
        }
        seen.into_iter()
            .map(|((state, affine), (choices, merged))| Configuration {
                state,
                affine,
                choices,
                merged,
            })
            .collect()
    } else {
        children.into_iter().flatten().collect()
    };

    if next.len() > options.budget {
        return Err(EngineError::Budget {
            step: step_no,
            live: next.len(),
            budget: options.budget,
        });
    }
    Ok(next)
}

fn run<S: Scalar>(
    machine: &MachineSpec<S>,
    input: &str,
    options: &EnumerateOptions,
    prune: Option<&dyn PruneHook<S>>,
    parallel: bool,
) -> Result<Enumeration<S>, EngineError> {
    let marked = check_input(machine, input)?;
    let mut frontier = vec![initial(machine)];
    let mut pruned = Vec::new();
    let mut peak_live = 1;

    for (index, &symbol) in marked.iter().enumerate() {
        let step_no = index + 1;
        let mut next = advance(machine, &frontier, symbol, step_no, options, parallel)?;

        let upcoming = index + 1;
        if let Some(hook) = prune {
            if upcoming < marked.len() {
                let verdicts: Vec<Option<S>> = if parallel && next.len() >= PARALLEL_THRESHOLD {
                    next.par_iter()
                        .map(|c| hook.certify(c, upcoming, &marked))
                        .collect()
                } else {
                    next.iter()
                        .map(|c| hook.certify(c, upcoming, &marked))
                        .collect()
                };
                let mut kept = Vec::with_capacity(next.len());
                for (c, verdict) in next.into_iter().zip(verdicts) {
                    match verdict {
                        Some(bound) => pruned.push(PrunedPath {
                            choices: c.choices,
                            merged: c.merged,
                            bound,
                            step: step_no,
                        }),
                        None => kept.push(c),
                    }
                }
                next = kept;
            }
        }

        peak_live = peak_live.max(next.len());
        frontier = next;
    }

    Ok(Enumeration {
        finals: frontier,
        pruned,
        peak_live,
    })
}

/// Replays a single path: one choice index per symbol of `^ input $`.
/// Returns the configuration after every step, starting with the initial one.
pub fn trace_path<S: Scalar>(
    machine: &MachineSpec<S>,
    input: &str,
    choices: &[u8],
) -> Result<Vec<Configuration<S>>, EngineError> {
    let marked = check_input(machine, input)?;
    if choices.len() != marked.len() {
        return Err(EngineError::BadChoice(format!(
            "expected {} choices, got {}",
            marked.len(),
            choices.len()
        )));
    }
    let mut trace = vec![initial(machine)];
    for (&symbol, &choice) in marked.iter().zip(choices) {
        let current = trace.last().expect("trace is never empty");
        let mut next = step(machine, current, symbol)?;
        if choice as usize >= next.len() {
            return Err(EngineError::BadChoice(format!(
                "choice {choice} on `{symbol}` but only {} transitions",
                next.len()
            )));
        }
        trace.push(next.swap_remove(choice as usize));
    }
    Ok(trace)
}

/// Cuts paths whose classical state can no longer reach the accepting state
/// on the remaining input; such paths are rejected with probability 0.
#[derive(Clone, Debug)]
pub struct DeadEndPruner {
    /// `live[j]`: states from which the accepting state is reachable after
    /// reading the marked input from position `j`.
    live: Vec<Vec<bool>>,
}

impl DeadEndPruner {
    pub fn new<S: Scalar>(machine: &MachineSpec<S>, input: &str) -> Self {
        let n_states = machine.states().len();
        let marked: Vec<char> = std::iter::once(LEFT_MARKER)
            .chain(input.chars())
            .chain(std::iter::once(RIGHT_MARKER))
            .collect();
        let mut live = vec![vec![false; n_states]; marked.len() + 1];
        live[marked.len()][machine.accept_state().0] = true;
        for j in (0..marked.len()).rev() {
            for s in 0..n_states {
                live[j][s] = machine
                    .transitions_for(StateId(s), marked[j])
                    .iter()
                    .any(|t| live[j + 1][t.target.0]);
            }
        }
        DeadEndPruner { live }
    }
}

impl<S: Scalar> PruneHook<S> for DeadEndPruner {
    fn certify(&self, config: &Configuration<S>, next: usize, _marked: &[char]) -> Option<S> {
        let alive = self
            .live
            .get(next)
            .map(|row| row[config.state.0])
            .unwrap_or(true);
        (!alive).then(S::zero)
    }
}
