//! Subset-sum verifier over `{0,1,#}`.
//!
//! Affine layout `(1, S − S_I, picked block, balance)`. Classical states:
//! `scan` (reading S), `skip`/`pick` (inside a block that is left out or
//! taken), and the terminal `acc`/`rej`. At every `#` the verifier branches:
//! choice 0 skips the next block, choice 1 picks it.

use super::AmplificationParam;
use crate::affine::AffineOperator;
use crate::machine::{MachineBuilder, MachineSpec, LEFT_MARKER, RIGHT_MARKER};
use crate::rational::Rational;

type Op = AffineOperator<Rational>;

fn int_op(rows: &[&[i64]]) -> Op {
    Op::from_int_rows(rows).expect("verifier operator has unit column sums")
}

/// Doubles e2 and adds the bit (reads S).
fn target_bit(bit: i64) -> Op {
    int_op(&[
        &[1, 0, 0, 0],
        &[bit, 2, 0, 0],
        &[0, 0, 1, 0],
        &[-bit, -1, 0, 1],
    ])
}

/// Doubles e3 and adds the bit (reads a picked block).
fn block_bit(bit: i64) -> Op {
    int_op(&[
        &[1, 0, 0, 0],
        &[0, 1, 0, 0],
        &[bit, 0, 2, 0],
        &[-bit, 0, -1, 1],
    ])
}

/// Subtracts e3 from e2 and clears e3.
fn subtract() -> Op {
    int_op(&[&[1, 0, 0, 0], &[0, 1, -1, 0], &[0, 0, 0, 0], &[0, 0, 2, 1]])
}

/// Scales the gap by t and moves it off e3: `(1, g, 0, −g) ↦ (1, tg, 0, −tg)`.
fn amplify(t: AmplificationParam) -> Op {
    let t = t.as_rational();
    let one = Rational::from_integer(1);
    let zero = Rational::from_integer(0);
    let u = &one - &t;
    Op::from_rows(vec![
        vec![one.clone(), zero.clone(), zero.clone(), zero.clone()],
        vec![zero.clone(), t.clone(), zero.clone(), zero.clone()],
        vec![zero.clone(), u.clone(), one, u],
        vec![zero.clone(), zero.clone(), zero, t],
    ])
    .expect("E(t) has unit column sums")
}

pub fn build_subsetsum_verifier(t: AmplificationParam) -> MachineSpec<Rational> {
    let mut b = MachineBuilder::new(format!("subsetsum-t{t}"), 4);
    let scan = b.state("scan");
    let skip = b.state("skip");
    let pick = b.state("pick");
    let acc = b.state("acc");
    let rej = b.state("rej");
    b.alphabet(['0', '1', '#']);

    let op = |b: &mut MachineBuilder<Rational>, name: &str, m: Op| {
        b.operator(name, m).expect("dimension 4, unique names")
    };
    let id = op(&mut b, "I", Op::identity(4));
    let a0 = op(&mut b, "A0", target_bit(0));
    let a1 = op(&mut b, "A1", target_bit(1));
    let p0 = op(&mut b, "P0", block_bit(0));
    let p1 = op(&mut b, "P1", block_bit(1));
    let d = subtract();
    let e = amplify(t);
    let ed = e.compose(&d).expect("same dimension");
    let d = op(&mut b, "D", d);
    let e = op(&mut b, "E", e);
    let ed = op(&mut b, "ED", ed);

    b.transition(scan, LEFT_MARKER, scan, id)
        .transition(scan, '0', scan, a0)
        .transition(scan, '1', scan, a1)
        .transition(scan, '#', skip, id)
        .transition(scan, '#', pick, id)
        // no delimiter: rejected without any weighting
        .transition(scan, RIGHT_MARKER, rej, id)
        .transition(skip, '0', skip, id)
        .transition(skip, '1', skip, id)
        .transition(skip, '#', skip, id)
        .transition(skip, '#', pick, id)
        .transition(skip, RIGHT_MARKER, acc, e)
        .transition(pick, '0', pick, p0)
        .transition(pick, '1', pick, p1)
        .transition(pick, '#', skip, d)
        .transition(pick, '#', pick, d)
        .transition(pick, RIGHT_MARKER, acc, ed);
    b.initial(scan, 0).accept(acc, [0]);
    b.build().expect("well-formed verifier")
}
