//! Integer-valued encoding gadgets: affine states that carry a binary value,
//! a counter, a square, or a polynomial value after repeated application.
//!
//! Every gadget knows its own closed form, so callers can check a trajectory
//! without a separate oracle.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::affine::{AffineOperator, AffineVector};
use crate::error::ParameterError;
use crate::rational::Rational;

type Vector = AffineVector<Rational>;
type Operator = AffineOperator<Rational>;

fn ints(entries: &[i64]) -> Vector {
    Vector::from_ints(entries).expect("gadget vector sums to 1")
}

fn op(rows: &[&[i64]]) -> Operator {
    Operator::from_int_rows(rows).expect("gadget operator has unit column sums")
}

fn vector(entries: Vec<Rational>) -> Vector {
    Vector::new(entries).expect("closed form sums to 1")
}

/// Reads a bit string into e2 as (1, val(w), −val(w)).
#[derive(Clone, Debug)]
pub struct BinaryEncoding {
    pub initial: Vector,
    pub zero: Operator,
    pub one: Operator,
}

pub fn binary_encoding() -> BinaryEncoding {
    BinaryEncoding {
        initial: ints(&[1, 0, 0]),
        zero: op(&[&[1, 0, 0], &[0, 2, 0], &[0, -1, 1]]),
        one: op(&[&[1, 0, 0], &[1, 2, 0], &[-1, -1, 1]]),
    }
}

impl BinaryEncoding {
    /// Applies the operators for `bits` (characters `0`/`1`).
    pub fn run(&self, bits: &str) -> Result<Vector, ParameterError> {
        let mut v = self.initial.clone();
        for c in bits.chars() {
            let a = match c {
                '0' => &self.zero,
                '1' => &self.one,
                other => return Err(ParameterError(format!("`{other}` is not a bit"))),
            };
            v = a.apply(&v).expect("dimension 3");
        }
        Ok(v)
    }

    pub fn closed_form(&self, bits: &str) -> Result<Vector, ParameterError> {
        let mut val = BigInt::zero();
        for c in bits.chars() {
            val = val * 2
                + match c {
                    '0' => 0,
                    '1' => 1,
                    other => return Err(ParameterError(format!("`{other}` is not a bit"))),
                };
        }
        let v = Rational::from(val);
        Ok(vector(vec![Rational::one(), v.clone(), -v]))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SquareVariant {
    /// (1, i, i², −i−i²)
    Dim4,
    /// (1, 2i, i², −2i−i²)
    Dim4Doubled,
    /// (1−i−i², i, i²)
    Dim3,
    /// (B⊗B) on (1−i, i)⊗(1−i, i); i² lands in e4
    Tensor,
}

impl SquareVariant {
    pub const ALL: [SquareVariant; 4] = [
        SquareVariant::Dim4,
        SquareVariant::Dim4Doubled,
        SquareVariant::Dim3,
        SquareVariant::Tensor,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SquareVariant::Dim4 => "dim4",
            SquareVariant::Dim4Doubled => "dim4-doubled",
            SquareVariant::Dim3 => "dim3",
            SquareVariant::Tensor => "tensor",
        }
    }
}

impl std::str::FromStr for SquareVariant {
    type Err = ParameterError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SquareVariant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| ParameterError(format!("unknown square variant `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Kind {
    Count1,
    Count2,
    Square(SquareVariant),
    Polynomial(PolynomialSpec),
}

/// A repeated-operator gadget: after `l` applications of `operator` to
/// `initial`, entry `value_index` holds the encoded quantity.
#[derive(Clone, Debug)]
pub struct Gadget {
    pub initial: Vector,
    pub operator: Operator,
    /// 0-based index of the entry carrying the encoded value.
    pub value_index: usize,
    kind: Kind,
}

impl Gadget {
    pub fn trajectory(&self, steps: usize) -> Vec<Vector> {
        let mut out = Vec::with_capacity(steps + 1);
        out.push(self.initial.clone());
        for _ in 0..steps {
            let next = self
                .operator
                .apply(out.last().expect("non-empty"))
                .expect("gadget dimensions agree");
            out.push(next);
        }
        out
    }

    pub fn state_after(&self, steps: usize) -> Vector {
        let mut v = self.initial.clone();
        for _ in 0..steps {
            v = self.operator.apply(&v).expect("gadget dimensions agree");
        }
        v
    }

    /// The state after `l` applications, written down directly.
    pub fn closed_form(&self, l: u64) -> Vector {
        let one = Rational::one();
        let x = Rational::from(BigInt::from(l));
        let x2 = &x * &x;
        match &self.kind {
            Kind::Count1 => vector(vec![one, x.clone(), -x]),
            Kind::Count2 => vector(vec![&one - &x, x]),
            Kind::Square(SquareVariant::Dim4) => {
                let bal = -(&x + &x2);
                vector(vec![one, x, x2, bal])
            }
            Kind::Square(SquareVariant::Dim4Doubled) => {
                let two_x = &x + &x;
                let bal = -(&two_x + &x2);
                vector(vec![one, two_x, x2, bal])
            }
            Kind::Square(SquareVariant::Dim3) => {
                let first = &(&one - &x) - &x2;
                vector(vec![first, x, x2])
            }
            Kind::Square(SquareVariant::Tensor) => {
                let a = &one - &x;
                let ax = &a * &x;
                vector(vec![&a * &a, ax.clone(), ax, x2])
            }
            Kind::Polynomial(p) => {
                let mut entries = Vec::with_capacity(p.degree() + 3);
                let mut power = one.clone();
                let mut total = Rational::zero();
                for _ in 0..=p.degree() {
                    total = &total + &power;
                    entries.push(power.clone());
                    power = &power * &x;
                }
                let value = Rational::from(p.eval(l));
                total = &total + &value;
                entries.push(value);
                entries.push(&one - &total);
                vector(entries)
            }
        }
    }

    /// The encoded value after `l` steps, from the closed form.
    pub fn expected_value(&self, l: u64) -> Rational {
        self.closed_form(l).get(self.value_index).clone()
    }
}

/// Method 1: (1, l, −l) with e2 incremented per symbol.
pub fn counting_method1() -> Gadget {
    Gadget {
        initial: ints(&[1, 0, 0]),
        operator: op(&[&[1, 0, 0], &[1, 1, 0], &[-1, 0, 1]]),
        value_index: 1,
        kind: Kind::Count1,
    }
}

/// Method 2: (1−l, l) in two dimensions.
pub fn counting_method2() -> Gadget {
    Gadget {
        initial: ints(&[1, 0]),
        operator: op(&[&[0, -1], &[1, 2]]),
        value_index: 1,
        kind: Kind::Count2,
    }
}

pub fn square_gadget(variant: SquareVariant) -> Gadget {
    let (initial, operator, value_index) = match variant {
        SquareVariant::Dim4 => (
            ints(&[1, 0, 0, 0]),
            op(&[&[1, 0, 0, 0], &[1, 1, 0, 0], &[1, 2, 1, 0], &[-2, -2, 0, 1]]),
            2,
        ),
        SquareVariant::Dim4Doubled => (
            ints(&[1, 0, 0, 0]),
            op(&[&[1, 0, 0, 0], &[2, 1, 0, 0], &[1, 1, 1, 0], &[-3, -1, 0, 1]]),
            2,
        ),
        SquareVariant::Dim3 => (
            ints(&[1, 0, 0]),
            op(&[&[-1, -4, -2], &[1, 2, 1], &[1, 3, 2]]),
            2,
        ),
        SquareVariant::Tensor => {
            let counter = counting_method2();
            (
                counter.initial.tensor(&counter.initial),
                counter.operator.tensor(&counter.operator),
                3,
            )
        }
    };
    Gadget {
        initial,
        operator,
        value_index,
        kind: Kind::Square(variant),
    }
}

/// A non-linear polynomial with non-negative integer coefficients,
/// `c_0 + c_1 x + … + c_d x^d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolynomialSpec {
    coefficients: Vec<u64>,
}

impl PolynomialSpec {
    /// Trailing zero coefficients are dropped; the result must have degree ≥ 2.
    pub fn new(mut coefficients: Vec<u64>) -> Result<Self, ParameterError> {
        while coefficients.last() == Some(&0) {
            coefficients.pop();
        }
        if coefficients.len() < 3 {
            return Err(ParameterError(
                "polynomial must be non-linear (some coefficient of degree ≥ 2 nonzero)".into(),
            ));
        }
        Ok(PolynomialSpec { coefficients })
    }

    /// Parses `c0,c1,...`.
    pub fn parse(text: &str) -> Result<Self, ParameterError> {
        let coefficients = text
            .split(',')
            .map(|c| {
                c.trim().parse::<u64>().map_err(|_| {
                    ParameterError(format!("coefficient `{c}` is not a non-negative integer"))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(coefficients)
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn constant(&self) -> u64 {
        self.coefficients[0]
    }

    /// Horner evaluation.
    pub fn eval(&self, x: u64) -> BigInt {
        let x = BigInt::from(x);
        self.coefficients
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, &c| acc * &x + c)
    }

    /// Comma-separated coefficients, lowest degree first.
    pub fn to_text(&self) -> String {
        self.coefficients
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl std::fmt::Display for PolynomialSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut terms = Vec::new();
        for (j, &c) in self.coefficients.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coef = if c == 1 && j > 0 {
                String::new()
            } else {
                c.to_string()
            };
            terms.push(match j {
                0 => coef,
                1 => format!("{coef}x"),
                _ => format!("{coef}x^{j}"),
            });
        }
        write!(f, "{}", terms.join("+"))
    }
}

/// Rows 0..=d of Pascal's triangle.
fn pascal(d: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    for j in 1..=d {
        let prev = &rows[j - 1];
        let mut row = vec![BigInt::one(); j + 1];
        for k in 1..j {
            row[k] = &prev[k - 1] + &prev[k];
        }
        rows.push(row);
    }
    rows
}

/// Layout (1, x, …, x^d, P, balance) of dimension d+3; returns the gadget
/// with `value_index = d+1` (the P entry).
///
/// The operator is the exact product of a binomial update on the powers and a
/// coefficient update writing P(i+1); the last row balances each column.
pub fn polynomial_gadget(p: &PolynomialSpec) -> Gadget {
    let d = p.degree();
    let n = d + 3;
    let (p_idx, bal) = (d + 1, d + 2);
    let one = Rational::one();
    let binom = pascal(d);

    let mut shift = vec![vec![Rational::zero(); n]; n];
    for (j, row) in binom.iter().enumerate() {
        for (k, c) in row.iter().enumerate() {
            shift[j][k] = Rational::from(c.clone());
        }
    }
    shift[p_idx][p_idx] = one.clone();
    let mut coef = vec![vec![Rational::zero(); n]; n];
    for j in 0..=d {
        coef[j][j] = one.clone();
        coef[p_idx][j] = Rational::from(BigInt::from(p.coefficients()[j]));
    }
    for m in [&mut shift, &mut coef] {
        m[bal][bal] = one.clone();
        for c in 0..n {
            if c == bal {
                continue;
            }
            let above = (0..bal).fold(Rational::zero(), |acc, r| &acc + &m[r][c]);
            m[bal][c] = &one - &above;
        }
    }
    let shift = Operator::from_rows(shift).expect("balanced");
    let coef = Operator::from_rows(coef).expect("balanced");
    let operator = coef.compose(&shift).expect("same dimension");

    let c0 = Rational::from(BigInt::from(p.constant()));
    let mut initial = vec![Rational::zero(); n];
    initial[0] = one;
    initial[p_idx] = c0.clone();
    initial[bal] = -c0;
    Gadget {
        initial: vector(initial),
        operator,
        value_index: p_idx,
        kind: Kind::Polynomial(p.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn binary_examples() {
        let b = binary_encoding();
        assert_eq!(b.run("").unwrap(), ints(&[1, 0, 0]));
        assert_eq!(b.run("1").unwrap(), ints(&[1, 1, -1]));
        assert_eq!(b.run("101").unwrap(), ints(&[1, 5, -5]));
        assert!(b.run("12").is_err());
        assert!(b.zero.is_valid() && b.one.is_valid());
    }

    #[test]
    fn counting_examples() {
        let (m1, m2) = (counting_method1(), counting_method2());
        assert_eq!(m1.state_after(0), m1.initial);
        assert_eq!(m2.state_after(0), m2.initial);
        assert_eq!(m1.state_after(1), ints(&[1, 1, -1]));
        assert_eq!(m2.state_after(3), ints(&[-2, 3]));
    }

    #[test]
    fn square_examples() {
        assert_eq!(square_gadget(SquareVariant::Dim3).state_after(3), ints(&[-11, 3, 9]));
        for v in SquareVariant::ALL {
            let g = square_gadget(v);
            assert!(g.operator.is_valid());
            assert_eq!(g.state_after(0).get(g.value_index), &q(0));
            assert_eq!(g.state_after(7), g.closed_form(7), "{}", v.name());
        }
        let t = square_gadget(SquareVariant::Tensor);
        assert_eq!(t.state_after(5).get(3), &q(25));
    }

    #[test]
    fn polynomial_examples() {
        let sq = polynomial_gadget(&PolynomialSpec::new(vec![0, 0, 1]).unwrap());
        assert_eq!(sq.value_index, 3);
        assert_eq!(sq.state_after(3).get(sq.value_index), &q(9));
        let p = polynomial_gadget(&PolynomialSpec::new(vec![1, 0, 1]).unwrap());
        assert_eq!(p.state_after(0).get(p.value_index), &q(1));
        let p = polynomial_gadget(&PolynomialSpec::new(vec![0, 1, 0, 2]).unwrap());
        assert!(p.operator.is_valid());
        assert_eq!(p.state_after(4).get(p.value_index), &q(132));
        assert_eq!(p.state_after(4), p.closed_form(4));
    }

    #[test]
    fn polynomial_spec_validation() {
        assert!(PolynomialSpec::new(vec![1, 2]).is_err());
        assert!(PolynomialSpec::new(vec![1, 2, 0, 0]).is_err());
        assert_eq!(PolynomialSpec::parse("0,1,1").unwrap().degree(), 2);
        assert!(PolynomialSpec::parse("0,-1,1").is_err());
        assert_eq!(PolynomialSpec::parse("1,0,0,2").unwrap().to_string(), "2x^3+1");
        assert_eq!(PolynomialSpec::parse("0,1,1").unwrap().eval(2), BigInt::from(6));
    }

    #[test]
    fn balancing_row_is_redundant() {
        // dropping the balance entry and restoring it from the unit sum
        // reproduces the vector
        let g = polynomial_gadget(&PolynomialSpec::new(vec![3, 1, 4, 1]).unwrap());
        for v in g.trajectory(12) {
            let n = v.dim();
            let head = v.entries()[..n - 1]
                .iter()
                .fold(Rational::zero(), |a, x| &a + x);
            assert_eq!(&(&Rational::one() - &head), v.get(n - 1));
        }
    }
}
