//! Closed intervals with exact rational endpoints.
//!
//! Every operation returns an interval that contains all pointwise results
//! of its operands; endpoints are computed exactly, so no outward rounding
//! is needed.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::AffineError;
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalInterval {
    lo: Rational,
    hi: Rational,
}

impl RationalInterval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self, AffineError> {
        if lo > hi {
            return Err(AffineError::InvertedInterval {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        Ok(RationalInterval { lo, hi })
    }

    pub fn point(x: Rational) -> Self {
        RationalInterval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// True when `other` lies inside `self`.
    pub fn encloses(&self, other: &RationalInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            -self
        } else {
            RationalInterval {
                lo: Rational::zero(),
                hi: self.hi.max_of(&-&self.lo),
            }
        }
    }

    /// Division by an interval that lies strictly above zero.
    pub fn div_positive(&self, rhs: &RationalInterval) -> Result<Self, AffineError> {
        if !rhs.lo.is_positive() {
            return Err(AffineError::Precision(rhs.to_string()));
        }
        let inv = RationalInterval {
            lo: rhs.hi.recip(),
            hi: rhs.lo.recip(),
        };
        Ok(self * &inv)
    }

    /// Range of `max(x, y)` over the two intervals.
    pub fn max_of(&self, other: &Self) -> Self {
        RationalInterval {
            lo: self.lo.max_of(&other.lo),
            hi: self.hi.max_of(&other.hi),
        }
    }

    pub fn min_of(&self, other: &Self) -> Self {
        RationalInterval {
            lo: self.lo.min_of(&other.lo),
            hi: self.hi.min_of(&other.hi),
        }
    }

    pub fn hull(&self, other: &Self) -> Self {
        RationalInterval {
            lo: self.lo.min_of(&other.lo),
            hi: self.hi.max_of(&other.hi),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let a = &self.lo * c;
        let b = &self.hi * c;
        if c.is_negative() {
            RationalInterval { lo: b, hi: a }
        } else {
            RationalInterval { lo: a, hi: b }
        }
    }
}

impl From<Rational> for RationalInterval {
    fn from(x: Rational) -> Self {
        RationalInterval::point(x)
    }
}

impl<'a> Add<&'a RationalInterval> for &'a RationalInterval {
    type Output = RationalInterval;

    fn add(self, rhs: &'a RationalInterval) -> RationalInterval {
        RationalInterval {
            lo: &self.lo + &rhs.lo,
            hi: &self.hi + &rhs.hi,
        }
    }
}

impl<'a> Sub<&'a RationalInterval> for &'a RationalInterval {
    type Output = RationalInterval;

    fn sub(self, rhs: &'a RationalInterval) -> RationalInterval {
        RationalInterval {
            lo: &self.lo - &rhs.hi,
            hi: &self.hi - &rhs.lo,
        }
    }
}

impl<'a> Mul<&'a RationalInterval> for &'a RationalInterval {
    type Output = RationalInterval;

    fn mul(self, rhs: &'a RationalInterval) -> RationalInterval {
        if rhs.is_point() {
            return self.scale(&rhs.lo);
        }
        if self.is_point() {
            return rhs.scale(&self.lo);
        }
        let products = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let mut lo = products[0].clone();
        let mut hi = products[0].clone();
        for p in &products[1..] {
            if p < &lo {
                lo = p.clone();
            }
            if p > &hi {
                hi = p.clone();
            }
        }
        RationalInterval { lo, hi }
    }
}

impl Neg for &RationalInterval {
    type Output = RationalInterval;

    fn neg(self) -> RationalInterval {
        RationalInterval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }
}

impl Neg for RationalInterval {
    type Output = RationalInterval;

    fn neg(self) -> RationalInterval {
        -&self
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for RationalInterval {
            type Output = RationalInterval;
            fn $m(self, rhs: RationalInterval) -> RationalInterval {
                (&self).$m(&rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);

impl Zero for RationalInterval {
    fn zero() -> Self {
        RationalInterval::point(Rational::zero())
    }

    fn is_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }
}

impl One for RationalInterval {
    fn one() -> Self {
        RationalInterval::point(Rational::one())
    }
}

impl fmt::Display for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

impl fmt::Debug for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
