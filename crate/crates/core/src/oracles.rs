//! Brute-force reference answers.
//!
//! Nothing here uses the crate's own scalar or affine arithmetic: numbers are
//! plain big integers and `num_rational::BigRational`, so agreement with the
//! engine is evidence rather than a tautology.

use num_bigint::{BigInt, BigUint};
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;

use crate::error::{OracleError, ParameterError};
use crate::gadgets::PolynomialSpec;
use crate::machine::{MachineSpec, LEFT_MARKER, RIGHT_MARKER};
use crate::rational::Rational;

/// Largest block count accepted by [`subsetsum_min_gap`].
pub const MAX_GAP_BLOCKS: usize = 24;

/// `S#B_1#…#B_k` with binary numbers; empty strings read as 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetSumInstance {
    pub target: BigUint,
    pub blocks: Vec<BigUint>,
    text: String,
}

fn binary(s: &str) -> BigUint {
    s.bytes()
        .fold(BigUint::zero(), |acc, b| (acc << 1u32) + u32::from(b == b'1'))
}

impl SubsetSumInstance {
    pub fn parse(text: &str) -> Result<Self, ParameterError> {
        if let Some(c) = text.chars().find(|c| !matches!(c, '0' | '1' | '#')) {
            return Err(ParameterError(format!("`{c}` is not one of 0, 1, #")));
        }
        let mut parts = text.split('#');
        let target = binary(parts.next().unwrap_or(""));
        let blocks: Vec<BigUint> = parts.map(binary).collect();
        if blocks.is_empty() {
            return Err(ParameterError("instance needs at least one `#`".into()));
        }
        Ok(SubsetSumInstance {
            target,
            blocks,
            text: text.to_string(),
        })
    }

    /// Builds the instance and its text form from numbers.
    pub fn from_values(target: u64, blocks: &[u64]) -> Self {
        let text = std::iter::once(target)
            .chain(blocks.iter().copied())
            .map(|v| format!("{v:b}"))
            .collect::<Vec<_>>()
            .join("#");
        Self::parse(&text).expect("binary digits and delimiters")
    }

    pub fn text(&self) -> &str {
        &self.text
    }
}

/// Whether some subset of the blocks sums to the target (reachable-sum
/// search, sums above the target discarded).
pub fn subsetsum_membership(inst: &SubsetSumInstance) -> bool {
    let mut reachable: BTreeSet<BigUint> = BTreeSet::from([BigUint::zero()]);
    for b in &inst.blocks {
        let next: Vec<BigUint> = reachable
            .iter()
            .map(|s| s + b)
            .filter(|s| *s <= inst.target)
            .collect();
        reachable.extend(next);
        if reachable.contains(&inst.target) {
            return true;
        }
    }
    reachable.contains(&inst.target)
}

/// `min_I |S − S_I|` over all subsets, by Gray-code enumeration.
pub fn subsetsum_min_gap(inst: &SubsetSumInstance) -> Result<BigUint, OracleError> {
    let k = inst.blocks.len();
    if k > MAX_GAP_BLOCKS {
        return Err(OracleError::TooManyBlocks {
            blocks: k,
            limit: MAX_GAP_BLOCKS,
        });
    }
    let target = BigInt::from(inst.target.clone());
    let blocks: Vec<BigInt> = inst.blocks.iter().cloned().map(BigInt::from).collect();
    let mut picked = vec![false; k];
    let mut sum = BigInt::zero();
    let mut best = target.abs();
    for step in 1u64..(1u64 << k) {
        let flip = step.trailing_zeros() as usize;
        picked[flip] = !picked[flip];
        if picked[flip] {
            sum += &blocks[flip];
        } else {
            sum -= &blocks[flip];
        }
        let gap = (&target - &sum).abs();
        if gap < best {
            best = gap;
            if best.is_zero() {
                break;
            }
        }
    }
    Ok(best.to_biguint().expect("absolute value"))
}

pub fn perfect_square(l: u64) -> bool {
    let r = l.sqrt();
    r * r == l
}

fn eval(coefficients: &[u64], x: u64) -> BigUint {
    coefficients
        .iter()
        .rev()
        .fold(BigUint::zero(), |acc, &c| acc * x + c)
}

/// Whether `l = P(i)` for some `i ≥ 0`. Since `P(i) ≥ i`, only `i ≤ l`
/// needs checking, and the search stops once `P(i)` passes `l`.
pub fn poly_image_member(p: &PolynomialSpec, l: u64) -> bool {
    let target = BigUint::from(l);
    (0..=l)
        .map(|i| eval(p.coefficients(), i))
        .take_while(|v| *v <= target)
        .any(|v| v == target)
}

/// `min |l − P(i)|` over `i ∈ from..=l`, or `None` when the range is empty.
pub fn poly_min_gap(p: &PolynomialSpec, l: u64, from: u64) -> Option<BigUint> {
    let target = BigInt::from(l);
    let mut best: Option<BigInt> = None;
    for i in from..=l {
        let v = BigInt::from(eval(p.coefficients(), i));
        let gap = (&target - &v).abs();
        if best.as_ref().is_none_or(|b| gap < *b) {
            best = Some(gap);
        }
        // P is increasing, so later values only move further away
        if v >= target {
            break;
        }
    }
    best.map(|b| b.to_biguint().expect("absolute value"))
}

/// `min |l − i²|` over `i ∈ 1..=l`, or `None` for `l = 0`.
pub fn square_min_gap(l: u64) -> Option<u64> {
    if l == 0 {
        return None;
    }
    let r = l.sqrt();
    let below = l - r * r;
    let above = (r + 1) * (r + 1) - l;
    // r ≥ 1 because l ≥ 1
    Some(below.min(above))
}

/// One leaf of the full computation tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NaiveOutcome {
    pub choices: Vec<u8>,
    pub final_state: String,
    pub probability: BigRational,
}

struct Dense {
    dim: usize,
    entries: Vec<BigRational>,
}

impl Dense {
    fn apply(&self, v: &[BigRational]) -> Vec<BigRational> {
        (0..self.dim)
            .map(|r| {
                (0..self.dim).fold(BigRational::zero(), |acc, c| {
                    acc + &self.entries[r * self.dim + c] * &v[c]
                })
            })
            .collect()
    }
}

fn weight(v: &[BigRational], accepting: &[usize]) -> BigRational {
    let total = v.iter().fold(BigRational::zero(), |acc, x| acc + x.abs());
    let acc = accepting
        .iter()
        .fold(BigRational::zero(), |acc, &i| acc + v[i].abs());
    acc / total
}

/// Walks every path of the computation tree depth first, without merging or
/// pruning, and returns the leaves in lexicographic order of choices.
///
/// Fails once more than `budget` leaves would be produced.
pub fn naive_enumerate(
    machine: &MachineSpec<Rational>,
    input: &str,
    budget: usize,
) -> Result<Vec<NaiveOutcome>, OracleError> {
    let mut marked = vec![LEFT_MARKER];
    for c in input.chars() {
        if !machine.alphabet().contains(&c) {
            return Err(OracleError::InvalidInput(c));
        }
        marked.push(c);
    }
    marked.push(RIGHT_MARKER);

    let ops: Vec<Dense> = machine
        .operators()
        .iter()
        .map(|(_, op)| Dense {
            dim: op.dim(),
            entries: op.entries().iter().map(BigRational::from).collect(),
        })
        .collect();
    let mut start = vec![BigRational::zero(); machine.dimension()];
    start[machine.initial_affine()] = BigRational::one();

    let mut out = Vec::new();
    // (state, vector, choices); children pushed in reverse so the leftmost
    // path is popped first
    let mut stack = vec![(machine.initial_state(), start, Vec::<u8>::new())];
    while let Some((state, v, choices)) = stack.pop() {
        let depth = choices.len();
        if depth == marked.len() {
            let probability = if state == machine.accept_state() {
                weight(&v, machine.accept_affine())
            } else {
                BigRational::zero()
            };
            out.push(NaiveOutcome {
                choices,
                final_state: machine.state_name(state).to_string(),
                probability,
            });
            if out.len() > budget {
                return Err(OracleError::Budget { budget });
            }
            continue;
        }
        let symbol = marked[depth];
        let list = machine.transitions_for(state, symbol);
        if list.is_empty() {
            return Err(OracleError::MissingTransition {
                state: machine.state_name(state).to_string(),
                symbol,
            });
        }
        for (i, t) in list.iter().enumerate().rev() {
            let mut next = choices.clone();
            next.push(i as u8);
            stack.push((t.target, ops[t.operator.0].apply(&v), next));
        }
    }
    Ok(out)
}
