//! The scalar abstraction shared by the affine layer and the engine.
//!
//! Two implementations exist: [`Rational`] for exact runs and
//! [`RationalInterval`] for runs whose inputs are only known to lie in a
//! certified enclosure.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_traits::{One, Zero};

use crate::interval::RationalInterval;
use crate::rational::Rational;

/// Outcome of comparing a scalar against an exact threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certainty {
    Yes,
    No,
    /// Only possible for intervals that straddle the threshold.
    Unknown,
}

pub trait Scalar:
    Clone + Debug + Display + PartialEq + Eq + Hash + Send + Sync + Zero + One + 'static
{
    /// Short label for reports (`exact` / `interval`).
    const KIND: &'static str;

    fn from_rational(r: &Rational) -> Self;

    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn abs(&self) -> Self;

    /// Multiplication by an exact coefficient.
    fn scale(&self, c: &Rational) -> Self;

    /// Lower and upper endpoints; both equal the value for exact scalars.
    fn lower(&self) -> Rational;
    fn upper(&self) -> Rational;

    fn contains(&self, x: &Rational) -> bool;

    /// `accepted / (accepted + rest)` for non-negative parts with a positive
    /// total. Interval implementations return the exact range of the ratio.
    fn share(accepted: &Self, rest: &Self) -> Self;

    fn max_of(&self, other: &Self) -> Self;
    fn min_of(&self, other: &Self) -> Self;

    fn as_exact(&self) -> Option<&Rational>;

    fn at_least(&self, threshold: &Rational) -> Certainty {
        if &self.lower() >= threshold {
            Certainty::Yes
        } else if &self.upper() < threshold {
            Certainty::No
        } else {
            Certainty::Unknown
        }
    }

    fn at_most(&self, threshold: &Rational) -> Certainty {
        if &self.upper() <= threshold {
            Certainty::Yes
        } else if &self.lower() > threshold {
            Certainty::No
        } else {
            Certainty::Unknown
        }
    }
}

impl Scalar for Rational {
    const KIND: &'static str = "exact";

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    #[inline]
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }

    #[inline]
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }

    #[inline]
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    #[inline]
    fn neg_ref(&self) -> Self {
        -self
    }

    fn abs(&self) -> Self {
        Rational::abs(self)
    }

    #[inline]
    fn scale(&self, c: &Rational) -> Self {
        self * c
    }

    fn lower(&self) -> Rational {
        self.clone()
    }

    fn upper(&self) -> Rational {
        self.clone()
    }

    fn contains(&self, x: &Rational) -> bool {
        self == x
    }

    fn share(accepted: &Self, rest: &Self) -> Self {
        if accepted.is_zero() {
            return Rational::zero();
        }
        accepted / &(accepted + rest)
    }

    fn max_of(&self, other: &Self) -> Self {
        Rational::max_of(self, other)
    }

    fn min_of(&self, other: &Self) -> Self {
        Rational::min_of(self, other)
    }

    fn as_exact(&self) -> Option<&Rational> {
        Some(self)
    }
}

impl Scalar for RationalInterval {
    const KIND: &'static str = "interval";

    fn from_rational(r: &Rational) -> Self {
        RationalInterval::point(r.clone())
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn neg_ref(&self) -> Self {
        -self
    }

    fn abs(&self) -> Self {
        RationalInterval::abs(self)
    }

    fn scale(&self, c: &Rational) -> Self {
        RationalInterval::scale(self, c)
    }

    fn lower(&self) -> Rational {
        self.lo().clone()
    }

    fn upper(&self) -> Rational {
        self.hi().clone()
    }

    fn contains(&self, x: &Rational) -> bool {
        RationalInterval::contains(self, x)
    }

    /// a/(a+r) is increasing in a and decreasing in r, so the range is
    /// attained at opposite corners.
    fn share(accepted: &Self, rest: &Self) -> Self {
        let lo = if rest.hi().is_zero() {
            Rational::one()
        } else {
            Rational::share(accepted.lo(), rest.hi())
        };
        let hi = if accepted.hi().is_zero() {
            Rational::zero()
        } else {
            Rational::share(accepted.hi(), rest.lo())
        };
        RationalInterval::new(lo.min_of(&hi), hi)
            .expect("share endpoints are ordered by monotonicity")
    }

    fn max_of(&self, other: &Self) -> Self {
        RationalInterval::max_of(self, other)
    }

    fn min_of(&self, other: &Self) -> Self {
        RationalInterval::min_of(self, other)
    }

    fn as_exact(&self) -> Option<&Rational> {
        if self.is_point() {
            Some(self.lo())
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn interval_share_encloses_point_shares() {
        let a = RationalInterval::new(q(1, 2), q(1, 1)).unwrap();
        let r = RationalInterval::new(q(2, 1), q(3, 1)).unwrap();
        let s = RationalInterval::share(&a, &r);
        assert_eq!(s, RationalInterval::new(q(1, 7), q(1, 3)).unwrap());
        for (x, y) in [(q(1, 2), q(2, 1)), (q(3, 4), q(5, 2)), (q(1, 1), q(3, 1))] {
            assert!(s.contains(&Rational::share(&x, &y)));
        }
    }

    #[test]
    fn threshold_certainty() {
        let x = RationalInterval::new(q(14, 100), q(17, 100)).unwrap();
        assert_eq!(x.at_most(&q(155, 1000)), Certainty::Unknown);
        assert_eq!(x.at_most(&q(1, 5)), Certainty::Yes);
        assert_eq!(q(1, 7).at_most(&q(1, 3)), Certainty::Yes);
        assert_eq!(q(1, 1).at_least(&q(2, 3)), Certainty::Yes);
        assert_eq!(q(1, 2).at_least(&q(2, 3)), Certainty::No);
    }
}
