//! Affine states, affine operators and the weighting operator.

use num_traits::One;

use crate::error::AffineError;
use crate::rational::Rational;
use crate::scalar::Scalar;

/// Sum of a sequence of scalars.
fn sum<'a, S: Scalar>(items: impl IntoIterator<Item = &'a S>) -> S {
    items.into_iter().fold(S::zero(), |acc, x| acc.add_ref(x))
}

fn is_unit_sum<S: Scalar>(s: &S) -> bool {
    s.contains(&Rational::one())
}

/// A vector whose entries sum to one (exactly, or with 1 inside the interval sum).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineVector<S> {
    entries: Vec<S>,
}

impl<S: Scalar> AffineVector<S> {
    pub fn new(entries: Vec<S>) -> Result<Self, AffineError> {
        if entries.is_empty() {
            return Err(AffineError::EmptyDimension);
        }
        let total = sum(&entries);
        if !is_unit_sum(&total) {
            return Err(AffineError::EntrySum {
                sum: total.to_string(),
            });
        }
        Ok(AffineVector { entries })
    }

    /// The standard basis vector `e_{index+1}` of dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Result<Self, AffineError> {
        if dim == 0 {
            return Err(AffineError::EmptyDimension);
        }
        if index >= dim {
            return Err(AffineError::IndexOutOfRange {
                index,
                dimension: dim,
            });
        }
        let mut entries = vec![S::zero(); dim];
        entries[index] = S::one();
        Ok(AffineVector { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<S> {
        self.entries
    }

    pub fn get(&self, index: usize) -> &S {
        &self.entries[index]
    }

    pub fn entry_sum(&self) -> S {
        sum(&self.entries)
    }

    pub fn l1_norm(&self) -> S {
        self.entries
            .iter()
            .fold(S::zero(), |acc, x| acc.add_ref(&x.abs()))
    }

    /// Probability of observing one of the `accepting` states (0-based
    /// indices): the ℓ1 mass on those entries over the total ℓ1 mass.
    ///
    /// The total is at least 1 because the entries sum to 1, so the ratio is
    /// always defined. Panics if an index is out of range.
    pub fn weight(&self, accepting: &[usize]) -> S {
        let mut mask = vec![false; self.dim()];
        for &i in accepting {
            mask[i] = true;
        }
        let mut accepted = S::zero();
        let mut rest = S::zero();
        for (x, &acc) in self.entries.iter().zip(&mask) {
            if acc {
                accepted = accepted.add_ref(&x.abs());
            } else {
                rest = rest.add_ref(&x.abs());
            }
        }
        S::share(&accepted, &rest)
    }

    pub fn tensor(&self, other: &AffineVector<S>) -> AffineVector<S> {
        let mut entries = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.entries {
            for b in &other.entries {
                entries.push(a.mul_ref(b));
            }
        }
        AffineVector { entries }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> AffineVector<T> {
        AffineVector {
            entries: self.entries.iter().map(f).collect(),
        }
    }
}

#[derive(Clone, Debug)]
enum Coef<S> {
    One,
    MinusOne,
    Exact(Rational),
    General(S),
}

/// A square matrix whose columns each sum to one.
///
/// Besides the dense entries the operator keeps a sparse row form used by
/// [`AffineOperator::apply`]; unit coefficients skip the multiplication.
#[derive(Clone, Debug)]
pub struct AffineOperator<S> {
    dim: usize,
    entries: Vec<S>,
    rows: Vec<Vec<(usize, Coef<S>)>>,
    identity: bool,
}

impl<S: PartialEq> PartialEq for AffineOperator<S> {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.entries == other.entries
    }
}

impl<S: Eq> Eq for AffineOperator<S> {}

/// True iff every column of the row-major `dim`×`dim` matrix sums to one.
pub fn validate_operator<S: Scalar>(dim: usize, entries: &[S]) -> bool {
    dim > 0 && entries.len() == dim * dim && first_bad_column(dim, entries).is_none()
}

fn first_bad_column<S: Scalar>(dim: usize, entries: &[S]) -> Option<(usize, S)> {
    (0..dim).find_map(|c| {
        let s = sum((0..dim).map(|r| &entries[r * dim + c]));
        (!is_unit_sum(&s)).then_some((c, s))
    })
}

impl<S: Scalar> AffineOperator<S> {
    /// Builds an operator from row-major entries, checking shape and column sums.
    pub fn new(dim: usize, entries: Vec<S>) -> Result<Self, AffineError> {
        if dim == 0 {
            return Err(AffineError::EmptyDimension);
        }
        if entries.len() != dim * dim {
            return Err(AffineError::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        if let Some((c, s)) = first_bad_column(dim, &entries) {
            return Err(AffineError::ColumnSum {
                column: c + 1,
                sum: s.to_string(),
            });
        }
        Ok(Self::build(dim, entries))
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self, AffineError> {
        let dim = rows.len();
        for (r, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(AffineError::NotSquare {
                    row: r + 1,
                    expected: dim,
                    found: row.len(),
                });
            }
        }
        Self::new(dim, rows.into_iter().flatten().collect())
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![S::zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = S::one();
        }
        Self::build(dim, entries)
    }

    fn build(dim: usize, entries: Vec<S>) -> Self {
        let one = Rational::one();
        let minus_one = -&one;
        let mut identity = true;
        let rows = (0..dim)
            .map(|r| {
                let mut row = Vec::new();
                for c in 0..dim {
                    let x = &entries[r * dim + c];
                    let expected_identity = if r == c { x.is_one() } else { x.is_zero() };
                    identity &= expected_identity;
                    if x.is_zero() {
                        continue;
                    }
                    let coef = match x.as_exact() {
                        Some(q) if *q == one => Coef::One,
                        Some(q) if *q == minus_one => Coef::MinusOne,
                        Some(q) => Coef::Exact(q.clone()),
                        None => Coef::General(x.clone()),
                    };
                    row.push((c, coef));
                }
                row
            })
            .collect();
        AffineOperator {
            dim,
            entries,
            rows,
            identity,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_identity(&self) -> bool {
        self.identity
    }

    pub fn entry(&self, row: usize, col: usize) -> &S {
        &self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    pub fn rows(&self) -> impl Iterator<Item = &[S]> {
        self.entries.chunks(self.dim)
    }

    pub fn column_sums(&self) -> Vec<S> {
        (0..self.dim)
            .map(|c| sum((0..self.dim).map(|r| self.entry(r, c))))
            .collect()
    }

    pub fn is_valid(&self) -> bool {
        validate_operator(self.dim, &self.entries)
    }

    pub fn apply(&self, v: &AffineVector<S>) -> Result<AffineVector<S>, AffineError> {
        if v.dim() != self.dim {
            return Err(AffineError::DimensionMismatch {
                expected: self.dim,
                found: v.dim(),
            });
        }
        Ok(self.apply_unchecked(v))
    }

    /// Matrix-vector product without the dimension check.
    pub(crate) fn apply_unchecked(&self, v: &AffineVector<S>) -> AffineVector<S> {
        if self.identity {
            return v.clone();
        }
        let x = &v.entries;
        let entries = self
            .rows
            .iter()
            .map(|row| {
                let mut acc: Option<S> = None;
                for (c, coef) in row {
                    let xi = &x[*c];
                    acc = Some(match (acc, coef) {
                        (None, Coef::One) => xi.clone(),
                        (None, Coef::MinusOne) => xi.neg_ref(),
                        (None, Coef::Exact(q)) => xi.scale(q),
                        (None, Coef::General(a)) => a.mul_ref(xi),
                        (Some(s), Coef::One) => s.add_ref(xi),
                        (Some(s), Coef::MinusOne) => s.sub_ref(xi),
                        (Some(s), Coef::Exact(q)) => s.add_ref(&xi.scale(q)),
                        (Some(s), Coef::General(a)) => s.add_ref(&a.mul_ref(xi)),
                    });
                }
                acc.unwrap_or_else(S::zero)
            })
            .collect();
        AffineVector { entries }
    }

    /// Matrix product `self · rhs` (apply `rhs` first, then `self`).
    pub fn compose(&self, rhs: &AffineOperator<S>) -> Result<AffineOperator<S>, AffineError> {
        if rhs.dim != self.dim {
            return Err(AffineError::DimensionMismatch {
                expected: self.dim,
                found: rhs.dim,
            });
        }
        let m = self.dim;
        let mut entries = Vec::with_capacity(m * m);
        for r in 0..m {
            for c in 0..m {
                let mut acc = S::zero();
                for k in 0..m {
                    let a = self.entry(r, k);
                    let b = rhs.entry(k, c);
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add_ref(&a.mul_ref(b));
                    }
                }
                entries.push(acc);
            }
        }
        // 1ᵀ(AB) = (1ᵀA)B = 1ᵀB, so unit column sums carry over
        Ok(Self::build(m, entries))
    }

    /// Kronecker product.
    pub fn tensor(&self, other: &AffineOperator<S>) -> AffineOperator<S> {
        let (m, n) = (self.dim, other.dim);
        let dim = m * n;
        let mut entries = vec![S::zero(); dim * dim];
        for r1 in 0..m {
            for c1 in 0..m {
                let a = self.entry(r1, c1);
                if a.is_zero() {
                    continue;
                }
                for r2 in 0..n {
                    for c2 in 0..n {
                        entries[(r1 * n + r2) * dim + c1 * n + c2] =
                            a.mul_ref(other.entry(r2, c2));
                    }
                }
            }
        }
        Self::build(dim, entries)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> AffineOperator<T> {
        AffineOperator::build(self.dim, self.entries.iter().map(f).collect())
    }
}

impl AffineOperator<Rational> {
    /// Convenience constructor from small integer rows.
    pub fn from_int_rows(rows: &[&[i64]]) -> Result<Self, AffineError> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from_integer(x)).collect())
                .collect(),
        )
    }
}

impl AffineVector<Rational> {
    pub fn from_ints(entries: &[i64]) -> Result<Self, AffineError> {
        Self::new(entries.iter().map(|&x| Rational::from_integer(x)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::RationalInterval;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn binary_a0() -> AffineOperator<Rational> {
        AffineOperator::from_int_rows(&[&[1, 0, 0], &[0, 2, 0], &[0, -1, 1]]).unwrap()
    }

    fn binary_a1() -> AffineOperator<Rational> {
        AffineOperator::from_int_rows(&[&[1, 0, 0], &[1, 2, 0], &[-1, -1, 1]]).unwrap()
    }

    #[test]
    fn validate_operator_examples() {
        let id = AffineOperator::<Rational>::identity(3);
        assert!(validate_operator(3, id.entries()));
        assert!(binary_a0().is_valid());
        let bad: Vec<Rational> = [1, 1, 0, 0, 1, 0, 0, 0, 1].iter().map(|&x| q(x)).collect();
        assert!(!validate_operator(3, &bad));
        assert_eq!(
            AffineOperator::new(3, bad).unwrap_err(),
            AffineError::ColumnSum {
                column: 2,
                sum: "2".into()
            }
        );
    }

    #[test]
    fn apply_examples() {
        let e1 = AffineVector::from_ints(&[1, 0, 0]).unwrap();
        let v = binary_a1().apply(&e1).unwrap();
        assert_eq!(v, AffineVector::from_ints(&[1, 1, -1]).unwrap());
        let v = binary_a1().apply(&v).unwrap();
        assert_eq!(v, AffineVector::from_ints(&[1, 3, -3]).unwrap());
        let w = AffineVector::from_ints(&[4, -7, 4]).unwrap();
        assert_eq!(AffineOperator::identity(3).apply(&w).unwrap(), w);
        let short = AffineVector::from_ints(&[1, 0]).unwrap();
        assert!(matches!(
            binary_a0().apply(&short),
            Err(AffineError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn weight_examples() {
        let v = AffineVector::from_ints(&[1, 2, -2]).unwrap();
        assert_eq!(v.weight(&[0]), Rational::new(1, 5));
        let v = AffineVector::from_ints(&[1, 0, 0, 0]).unwrap();
        assert_eq!(v.weight(&[0]), q(1));
        let t = 3;
        let v = AffineVector::from_ints(&[1, t, 0, -t]).unwrap();
        assert_eq!(v.weight(&[0]), Rational::new(1, 2 * t + 1));
    }

    #[test]
    fn tensor_examples() {
        let b = AffineOperator::from_int_rows(&[&[0, -1], &[1, 2]]).unwrap();
        let bb = b.tensor(&b);
        assert!(bb.is_valid());
        assert!(bb.column_sums().iter().all(|s| s.is_one()));
        let v0 = AffineVector::from_ints(&[1, 0]).unwrap();
        let mut v = v0.tensor(&v0);
        for _ in 0..2 {
            v = bb.apply(&v).unwrap();
        }
        assert_eq!(v, AffineVector::from_ints(&[1, -2, -2, 4]).unwrap());
        let id = AffineOperator::<Rational>::identity(2);
        assert_eq!(id.tensor(&id), AffineOperator::identity(4));
        assert!(id.tensor(&id).is_identity());
    }

    #[test]
    fn vector_requires_unit_sum() {
        assert!(AffineVector::from_ints(&[1, 1]).is_err());
        assert!(AffineVector::<Rational>::new(vec![]).is_err());
        let iv = AffineVector::new(vec![
            RationalInterval::new(q(0), q(2)).unwrap(),
            RationalInterval::point(q(0)),
        ]);
        assert!(iv.is_ok());
    }

    #[test]
    fn compose_matches_sequential_application() {
        let ab = binary_a1().compose(&binary_a0()).unwrap();
        let v = AffineVector::from_ints(&[1, 3, -3]).unwrap();
        assert_eq!(
            ab.apply(&v).unwrap(),
            binary_a1().apply(&binary_a0().apply(&v).unwrap()).unwrap()
        );
        assert!(ab.is_valid());
    }

    /// A random column-sum-1 matrix: free entries everywhere except the last
    /// row, which balances each column.
    fn arb_operator(dim: usize) -> impl Strategy<Value = AffineOperator<Rational>> {
        proptest::collection::vec((-20i64..20, 1i64..5), dim * (dim - 1)).prop_map(move |free| {
            let mut rows: Vec<Vec<Rational>> = free
                .chunks(dim)
                .map(|r| r.iter().map(|&(n, d)| Rational::new(n, d)).collect())
                .collect();
            let last = (0..dim)
                .map(|c| &Rational::one() - &rows.iter().fold(Rational::zero(), |a, r| &a + &r[c]))
                .collect();
            rows.push(last);
            AffineOperator::from_rows(rows).unwrap()
        })
    }

    fn arb_vector(dim: usize) -> impl Strategy<Value = AffineVector<Rational>> {
        proptest::collection::vec((-20i64..20, 1i64..5), dim - 1).prop_map(|free| {
            let mut e: Vec<Rational> = free.iter().map(|&(n, d)| Rational::new(n, d)).collect();
            let s = e.iter().fold(Rational::zero(), |a, x| &a + x);
            e.push(&Rational::one() - &s);
            AffineVector::new(e).unwrap()
        })
    }

    proptest! {
        #[test]
        fn apply_preserves_unit_sum(a in arb_operator(4), v in arb_vector(4)) {
            let w = a.apply(&v).unwrap();
            prop_assert!(w.entry_sum().is_one());
            prop_assert!(w.l1_norm() >= Rational::one());
            prop_assert!(w.weight(&[0, 1, 2, 3]).is_one());
        }

        #[test]
        fn interval_mode_contains_exact(a in arb_operator(3), v in arb_vector(3), w in 0i64..4) {
            // widen each entry of v by w/7 on both sides
            let widen = Rational::new(w, 7);
            let iv = v.map(|x| RationalInterval::new(x - &widen, x + &widen).unwrap());
            let ia = a.map(|x| RationalInterval::point(x.clone()));
            let exact = a.apply(&v).unwrap();
            let enclosed = ia.apply(&iv).unwrap();
            for (e, i) in exact.entries().iter().zip(enclosed.entries()) {
                prop_assert!(i.contains(e));
            }
            prop_assert!(enclosed.weight(&[0]).contains(&exact.weight(&[0])));
            prop_assert!(enclosed.entry_sum().contains(&Rational::one()));
        }
    }
}
