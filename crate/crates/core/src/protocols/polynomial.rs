//! Verifiers for `{0^{P(i)}}` over the alphabet `{0}`.
//!
//! The main path keeps `(1, i, …, P(i), balance)` up to date while reading.
//! After the i-th symbol it may fork a frozen path that keeps P(i) but goes on
//! counting the input length in e2. At `$` a frozen path collapses its state to
//! `(1, t(l − P(i)), …, t(P(i) − l), …, 0)` and accepts on e1; the main path
//! rejects.

use super::AmplificationParam;
use crate::affine::AffineOperator;
use crate::gadgets::{polynomial_gadget, square_gadget, PolynomialSpec, SquareVariant};
use crate::machine::{MachineBuilder, MachineSpec, LEFT_MARKER, RIGHT_MARKER};
use crate::rational::Rational;

type Op = AffineOperator<Rational>;

/// Adds 1 to e2 and takes it from the balance entry.
fn count(dim: usize) -> Op {
    let mut rows = identity_rows(dim);
    rows[1][0] = Rational::from_integer(1);
    rows[dim - 1][0] = Rational::from_integer(-1);
    Op::from_rows(rows).expect("counter has unit column sums")
}

/// All-ones first row restores the constant; the ±t rows compare e2 with
/// the value entry.
fn collapse(dim: usize, value: usize, t: AmplificationParam) -> Op {
    let t = t.as_rational();
    let mut rows = vec![vec![Rational::from_integer(0); dim]; dim];
    rows[0] = vec![Rational::from_integer(1); dim];
    rows[1][1] = t.clone();
    rows[1][value] = -&t;
    rows[value][1] = -&t;
    rows[value][value] = t;
    Op::from_rows(rows).expect("collapse has unit column sums")
}

fn identity_rows(dim: usize) -> Vec<Vec<Rational>> {
    (0..dim)
        .map(|r| {
            (0..dim)
                .map(|c| Rational::from_integer((r == c) as i64))
                .collect()
        })
        .collect()
}

struct Skeleton {
    name: String,
    dim: usize,
    value: usize,
    /// Applied at `^`; sets the initial value entry.
    init: Op,
    grow: Op,
    /// Fork a frozen path already at `^` (i = 0), and reject the empty input.
    fork_at_start: bool,
}

fn build(sk: Skeleton, t: AmplificationParam) -> MachineSpec<Rational> {
    let mut b = MachineBuilder::new(sk.name, sk.dim);
    let empty = b.state("empty");
    let main = b.state("main");
    let frozen = b.state("frozen");
    let acc = b.state("acc");
    let rej = b.state("rej");
    b.alphabet(['0']);

    let op = |b: &mut MachineBuilder<Rational>, name: &str, m: Op| {
        b.operator(name, m).expect("matching dimension, unique names")
    };
    let id = op(&mut b, "I", Op::identity(sk.dim));
    let init = op(&mut b, "Init", sk.init);
    let grow = op(&mut b, "Grow", sk.grow);
    let cnt = op(&mut b, "Count", count(sk.dim));
    let col = op(&mut b, "Collapse", collapse(sk.dim, sk.value, t));

    b.transition(empty, LEFT_MARKER, empty, init);
    if sk.fork_at_start {
        b.transition(empty, LEFT_MARKER, frozen, init)
            .transition(empty, RIGHT_MARKER, rej, id);
    } else {
        b.transition(empty, RIGHT_MARKER, acc, id);
    }
    for from in [empty, main] {
        b.transition(from, '0', main, grow)
            .transition(from, '0', frozen, grow);
    }
    b.transition(main, RIGHT_MARKER, rej, id)
        .transition(frozen, '0', frozen, cnt)
        .transition(frozen, RIGHT_MARKER, acc, col);
    b.initial(empty, 0).accept(acc, [0]);
    b.build().expect("well-formed verifier")
}

/// Verifier for `{0^{i²}}`, four affine states `(1, i, i², balance)`.
pub fn build_usquare_verifier(t: AmplificationParam) -> MachineSpec<Rational> {
    let g = square_gadget(SquareVariant::Dim4);
    build(
        Skeleton {
            name: format!("usquare-t{t}"),
            dim: 4,
            value: g.value_index,
            init: Op::identity(4),
            grow: g.operator,
            fork_at_start: false,
        },
        t,
    )
}

/// Verifier for `{0^{P(i)}}`, `d+3` affine states laid out as the
/// polynomial gadget.
///
/// Frozen paths exist for i = 1..l, plus i = 0 when `P(0) > 0` (otherwise
/// the empty input is the i = 0 member and is accepted classically).
pub fn build_upoly_verifier(p: &PolynomialSpec, t: AmplificationParam) -> MachineSpec<Rational> {
    let g = polynomial_gadget(p);
    let dim = g.initial.dim();
    let mut init = identity_rows(dim);
    for (r, x) in g.initial.entries().iter().enumerate() {
        init[r][0] = x.clone();
    }
    let name = format!("upoly-{}-t{t}", p.to_text().replace(',', "_"));
    build(
        Skeleton {
            name,
            dim,
            value: g.value_index,
            init: Op::from_rows(init).expect("initial column sums to 1"),
            grow: g.operator,
            fork_at_start: p.constant() > 0,
        },
        t,
    )
}
