//! Exact rational numbers.
//!
//! Values whose numerator and denominator fit in an `i64` are kept inline and
//! operated on with 128-bit intermediates; everything else falls back to
//! [`BigRational`]. The representation is canonical (lowest terms, positive
//! denominator, inline whenever it fits), so structural equality and hashing
//! coincide with numeric equality.

use std::borrow::Cow;
use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ScalarParseError;

#[derive(Clone)]
enum Repr {
    /// `den > 0`, `gcd(num, den) == 1`, and neither equals `i64::MIN`.
    Small { num: i64, den: i64 },
    /// Only used when the value does not fit `Small`.
    Big(BigRational),
}

/// An exact rational number in lowest terms.
#[derive(Clone)]
pub struct Rational(Repr);

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

fn fits(v: i128) -> bool {
    v > i64::MIN as i128 && v <= i64::MAX as i128
}

/// Strips shared powers of two, then runs Euclid on the odd parts,
/// finishing in machine words once one side fits. Denominators here are
/// mostly a power of two (or of the base) times a small odd factor, so this
/// usually ends after one big remainder.
fn gcd_big(a: &BigInt, b: &BigInt) -> BigUint {
    let (mut x, mut y) = (a.magnitude().clone(), b.magnitude().clone());
    if x.is_zero() {
        return y;
    }
    if y.is_zero() {
        return x;
    }
    let (tx, ty) = (x.trailing_zeros().unwrap_or(0), y.trailing_zeros().unwrap_or(0));
    x >>= tx;
    y >>= ty;
    if x < y {
        std::mem::swap(&mut x, &mut y);
    }
    let odd = loop {
        if y.is_zero() {
            break x;
        }
        if let Some(small) = y.to_u64() {
            let rest = (&x % small).to_u64().expect("remainder below a u64");
            break BigUint::from(gcd_u128(small as u128, rest as u128) as u64);
        }
        let r = &x % &y;
        x = y;
        y = r;
    };
    odd << tx.min(ty)
}

/// Divides out the common factor of `num / den` (`den > 0`).
fn reduced(num: BigInt, den: BigInt) -> Rational {
    if num.is_zero() {
        return Rational::zero();
    }
    let g = BigInt::from(gcd_big(&num, &den));
    if g.is_one() {
        Rational::from_big(BigRational::new_raw(num, den))
    } else {
        Rational::from_big(BigRational::new_raw(num / &g, den / &g))
    }
}

fn big_add(a: &BigRational, b: &BigRational) -> Rational {
    if a.denom() == b.denom() {
        return reduced(a.numer() + b.numer(), a.denom().clone());
    }
    reduced(
        a.numer() * b.denom() + b.numer() * a.denom(),
        a.denom() * b.denom(),
    )
}

fn big_mul(a: &BigRational, b: &BigRational) -> Rational {
    if a.numer().is_zero() || b.numer().is_zero() {
        return Rational::zero();
    }
    // cross-cancel, so the product is already in lowest terms
    let g1 = BigInt::from(gcd_big(a.numer(), b.denom()));
    let g2 = BigInt::from(gcd_big(b.numer(), a.denom()));
    let num = (a.numer() / &g1) * (b.numer() / &g2);
    let den = (a.denom() / &g2) * (b.denom() / &g1);
    Rational::from_big(BigRational::new_raw(num, den))
}

impl Rational {
    pub fn from_integer(n: i64) -> Self {
        if n == i64::MIN {
            return Self::from_big(BigRational::from_integer(BigInt::from(n)));
        }
        Rational(Repr::Small { num: n, den: 1 })
    }

    /// `num / den`; panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    pub fn from_bigints(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Self::from_big(BigRational::new(num, den))
    }

    fn from_i128(num: i128, den: i128) -> Self {
        debug_assert!(den != 0);
        let (mut num, mut den) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = gcd_u128(num.unsigned_abs(), den as u128) as i128;
        if g > 1 {
            num /= g;
            den /= g;
        }
        if fits(num) && fits(den) {
            Rational(Repr::Small {
                num: num as i64,
                den: den as i64,
            })
        } else {
            Rational(Repr::Big(BigRational::new_raw(
                BigInt::from(num),
                BigInt::from(den),
            )))
        }
    }

    /// Takes a reduced `BigRational` (as produced by `num-rational`) and
    /// moves it inline if it fits.
    fn from_big(r: BigRational) -> Self {
        if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
            if n != i64::MIN && d != i64::MIN {
                return Rational(Repr::Small { num: n, den: d });
            }
        }
        Rational(Repr::Big(r))
    }

    /// Borrows the big form, converting only inline values.
    fn as_big(&self) -> Cow<'_, BigRational> {
        match &self.0 {
            Repr::Small { .. } => Cow::Owned(self.to_big()),
            Repr::Big(b) => Cow::Borrowed(b),
        }
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small { num, den } => {
                BigRational::new_raw(BigInt::from(*num), BigInt::from(*den))
            }
            Repr::Big(b) => b.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small { num, .. } => BigInt::from(*num),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small { den, .. } => BigInt::from(*den),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    /// True when the value is held inline rather than as a big rational.
    pub fn is_small(&self) -> bool {
        matches!(self.0, Repr::Small { .. })
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small { den, .. } => *den == 1,
            Repr::Big(b) => b.is_integer(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small { num, .. } => *num < 0,
            Repr::Big(b) => b.is_negative(),
        }
    }

    pub fn is_positive(&self) -> bool {
        match &self.0 {
            Repr::Small { num, .. } => *num > 0,
            Repr::Big(b) => b.is_positive(),
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn recip(&self) -> Self {
        match &self.0 {
            Repr::Small { num, den } => {
                assert!(*num != 0, "reciprocal of zero");
                Self::from_i128(*den as i128, *num as i128)
            }
            Repr::Big(b) => Self::from_big(b.recip()),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Rational::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    pub fn min_of(&self, other: &Self) -> Self {
        if self <= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    pub fn max_of(&self, other: &Self) -> Self {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// Decimal rendering with `digits` fractional digits, truncated toward zero.
    pub fn to_decimal_toward_zero(&self, digits: usize) -> String {
        let num = self.numer();
        let den = self.denom();
        let neg = num.is_negative();
        let num = num.abs();
        let (int_part, mut rem) = num.div_rem(&den);
        let mut frac = String::with_capacity(digits);
        let ten = BigInt::from(10);
        for _ in 0..digits {
            rem *= &ten;
            let (d, r) = rem.div_rem(&den);
            frac.push_str(&d.to_string());
            rem = r;
        }
        let sign = if neg && (!int_part.is_zero() || frac.bytes().any(|b| b != b'0')) {
            "-"
        } else {
            ""
        };
        if digits == 0 {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac}")
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Self::from_big(BigRational::from_integer(n))
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Self::from_big(r)
    }
}

impl From<&Rational> for BigRational {
    fn from(r: &Rational) -> Self {
        r.to_big()
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational(Repr::Small { num: 0, den: 1 })
    }

    fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small { num: 0, .. })
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational(Repr::Small { num: 1, den: 1 })
    }

    fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small { num: 1, den: 1 })
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => a == c && b == d,
            (Repr::Big(x), Repr::Big(y)) => x == y,
            // canonical form: a small and a big value are never equal
            _ => false,
        }
    }
}

impl Eq for Rational {}

impl Hash for Rational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small { num, den } => {
                0u8.hash(state);
                num.hash(state);
                den.hash(state);
            }
            Repr::Big(b) => {
                // reduced, so the parts identify the value; `Ratio`'s own
                // hash expands a continued fraction, which is far slower
                1u8.hash(state);
                b.numer().hash(state);
                b.denom().hash(state);
            }
        }
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                if b == d {
                    a.cmp(c)
                } else {
                    (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
                }
            }
            _ => {
                // denominators are positive, so cross-multiplying keeps order
                let (a, b) = (self.as_big(), other.as_big());
                (a.numer() * b.denom()).cmp(&(b.numer() * a.denom()))
            }
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a Rational> for &'a Rational {
    type Output = Rational;

    fn add(self, rhs: &'a Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                if *b == 1 && *d == 1 {
                    return Rational::from_i128(*a as i128 + *c as i128, 1);
                }
                if b == d {
                    return Rational::from_i128(*a as i128 + *c as i128, *b as i128);
                }
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                match (a * d).checked_add(c * b).zip(b.checked_mul(d)) {
                    Some((n, m)) => Rational::from_i128(n, m),
                    None => big_add(&self.as_big(), &rhs.as_big()),
                }
            }
            _ => big_add(&self.as_big(), &rhs.as_big()),
        }
    }
}

impl<'a> Sub<&'a Rational> for &'a Rational {
    type Output = Rational;

    fn sub(self, rhs: &'a Rational) -> Rational {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Rational> for &'a Rational {
    type Output = Rational;

    fn mul(self, rhs: &'a Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                if *a == 0 || *c == 0 {
                    return Rational::zero();
                }
                if *b == 1 && *d == 1 {
                    return Rational::from_i128(*a as i128 * *c as i128, 1);
                }
                // cross-cancel so the product is already reduced
                let g1 = a.gcd(d).max(1);
                let g2 = c.gcd(b).max(1);
                let n = (a / g1) as i128 * (c / g2) as i128;
                let m = (b / g2) as i128 * (d / g1) as i128;
                if fits(n) && fits(m) {
                    Rational(Repr::Small {
                        num: n as i64,
                        den: m as i64,
                    })
                } else {
                    Rational(Repr::Big(BigRational::new_raw(
                        BigInt::from(n),
                        BigInt::from(m),
                    )))
                }
            }
            _ => big_mul(&self.as_big(), &rhs.as_big()),
        }
    }
}

impl<'a> Div<&'a Rational> for &'a Rational {
    type Output = Rational;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &'a Rational) -> Rational {
        self * &rhs.recip()
    }
}

impl Neg for &Rational {
    type Output = Rational;

    fn neg(self) -> Rational {
        match &self.0 {
            Repr::Small { num, den } => Rational(Repr::Small {
                num: -num,
                den: *den,
            }),
            Repr::Big(b) => Rational::from_big(-b.clone()),
        }
    }
}

impl Neg for Rational {
    type Output = Rational;

    fn neg(self) -> Rational {
        -&self
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: &'a Rational) -> Rational {
                (&self).$m(rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small { num, den: 1 } => write!(f, "{num}"),
            Repr::Small { num, den } => write!(f, "{num}/{den}"),
            Repr::Big(b) if b.is_integer() => write!(f, "{}", b.numer()),
            Repr::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ScalarParseError;

    /// Accepts an optional sign, digits, and optionally `/` and digits.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ScalarParseError(s.to_string());
        let (num_text, den_text) = match s.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (s, None),
        };
        let digits = num_text.strip_prefix(['-', '+']).unwrap_or(num_text);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let num: BigInt = num_text.parse().map_err(|_| bad())?;
        let den: BigInt = match den_text {
            Some(d) if !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()) => {
                d.parse().map_err(|_| bad())?
            }
            Some(_) => return Err(bad()),
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(bad());
        }
        Ok(Rational::from_bigints(num, den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn normalizes_sign_and_terms() {
        assert_eq!(r(2, -4), r(-1, 2));
        assert_eq!(r(0, -7), Rational::zero());
        assert_eq!(r(6, 3).to_string(), "2");
        assert_eq!(r(3100, 20080).to_string(), "155/1004");
    }

    #[test]
    fn parses_scalar_syntax() {
        assert_eq!("-31".parse::<Rational>().unwrap(), r(-31, 1));
        assert_eq!("283/100".parse::<Rational>().unwrap(), r(283, 100));
        assert_eq!("+4/6".parse::<Rational>().unwrap(), r(2, 3));
        for bad in ["", "-", "1.5", "1/0", "1/", "/2", "a", "1/-2", "--1"] {
            assert!(bad.parse::<Rational>().is_err(), "{bad}");
        }
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Rational::from_integer(i64::MAX);
        let sum = &big + &big;
        assert!(!sum.is_small());
        let back = &sum - &big;
        assert!(back.is_small());
        assert_eq!(back, big);
        let min = Rational::from_integer(i64::MIN);
        assert!(!min.is_small());
        assert_eq!(-(-min.clone()), min);
    }

    #[test]
    fn decimal_truncates_toward_zero() {
        assert_eq!(r(155, 1004).to_decimal_toward_zero(10), "0.1543824701");
        assert_eq!(r(-2, 3).to_decimal_toward_zero(3), "-0.666");
        assert_eq!(r(-1, 10000).to_decimal_toward_zero(2), "0.00");
        assert_eq!(r(7, 2).to_decimal_toward_zero(0), "3");
    }

    fn arb_rational() -> impl Strategy<Value = (i64, i64)> {
        prop_oneof![
            (-50i64..50, 1i64..50),
            (any::<i64>(), 1i64..i64::MAX),
            (-(1i64 << 40)..(1i64 << 40), 1i64..(1 << 40)),
        ]
    }

    fn big(p: (i64, i64)) -> BigRational {
        BigRational::new(BigInt::from(p.0), BigInt::from(p.1))
    }

    proptest! {
        #[test]
        fn agrees_with_big_rational(a in arb_rational(), b in arb_rational()) {
            let (x, y) = (Rational::new(a.0, a.1), Rational::new(b.0, b.1));
            let (bx, by) = (big(a), big(b));
            prop_assert_eq!(BigRational::from(&(&x + &y)), &bx + &by);
            prop_assert_eq!(BigRational::from(&(&x - &y)), &bx - &by);
            prop_assert_eq!(BigRational::from(&(&x * &y)), &bx * &by);
            prop_assert_eq!(x.cmp(&y), bx.cmp(&by));
            if !y.is_zero() {
                prop_assert_eq!(BigRational::from(&(&x / &y)), &bx / &by);
            }
            // canonical representation: round trip through text is identity
            prop_assert_eq!(x.to_string().parse::<Rational>().unwrap(), x);
        }

        #[test]
        fn big_values_agree_with_big_rational(a in arb_big(), b in arb_big()) {
            let (x, y) = (Rational::from(a.clone()), Rational::from(b.clone()));
            let sum = &x + &y;
            prop_assert_eq!(BigRational::from(&sum), &a + &b);
            prop_assert_eq!(BigRational::from(&(&x * &y)), &a * &b);
            prop_assert_eq!(x.cmp(&y), a.cmp(&b));
            // results stay canonical: rebuilding from parts gives an equal,
            // equally hashed value
            let rebuilt = Rational::from_bigints(sum.numer(), sum.denom());
            prop_assert_eq!(&rebuilt, &sum);
            prop_assert_eq!(hash_of(&rebuilt), hash_of(&sum));
        }
    }

    /// Products of word-sized factors with powers of two and an odd factor,
    /// like the values the unary verifier produces.
    fn arb_big() -> impl Strategy<Value = BigRational> {
        (any::<i64>(), any::<i64>(), 0u32..200, 1i64..i64::MAX, 0u32..200, prop::bool::ANY).prop_map(
            |(n1, n2, s1, d, s2, odd)| {
                let num = (BigInt::from(n1) * BigInt::from(n2)) << s1;
                let den = (BigInt::from(d) << s2) * if odd { 31 } else { 1 };
                BigRational::new(num, den)
            },
        )
    }

    fn hash_of(x: &Rational) -> u64 {
        use std::collections::hash_map::DefaultHasher;
        let mut h = DefaultHasher::new();
        x.hash(&mut h);
        h.finish()
    }

    #[test]
    fn gcd_handles_powers_of_two_and_zero() {
        let g = |a: i64, b: i64| gcd_big(&BigInt::from(a), &BigInt::from(b));
        assert_eq!(g(0, 12), BigUint::from(12u32));
        assert_eq!(g(-12, 0), BigUint::from(12u32));
        assert_eq!(g(96, 40), BigUint::from(8u32));
        let a = BigInt::from(3u32) << 150u32;
        let b = BigInt::from(9u32) << 90u32;
        assert_eq!(gcd_big(&a, &b), BigUint::from(3u32) << 90u32);
    }
}
