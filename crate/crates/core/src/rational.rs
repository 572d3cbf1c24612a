//! Exact rationals that stay inline while numerator and denominator fit in
//! `i64` and fall back to arbitrary precision on overflow.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small(Ratio<i64>),
    /// Only when the reduced value does not fit `Small`.
    Big(BigRational),
}

/// An exact rational number in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational(Repr);

fn wide(r: &Ratio<i64>) -> Ratio<i128> {
    Ratio::new_raw(*r.numer() as i128, *r.denom() as i128)
}

/// Downcast a reduced `i128` ratio, going through `Big` when it does not fit.
fn narrow(r: Ratio<i128>) -> Rational {
    match (i64::try_from(*r.numer()), i64::try_from(*r.denom())) {
        (Ok(n), Ok(d)) => small(Ratio::new_raw(n, d)),
        _ => Rational(Repr::Big(BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom())))),
    }
}

fn small(r: Ratio<i64>) -> Rational {
    if *r.numer() == i64::MIN || *r.denom() == i64::MIN {
        return Rational(Repr::Big(BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom()))));
    }
    Rational(Repr::Small(r))
}

impl Rational {
    /// `num / den`; panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        narrow(Ratio::new(num as i128, den as i128))
    }

    pub fn from_integer(v: i64) -> Self {
        small(Ratio::from_integer(v))
    }

    pub fn from_big(r: BigRational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => small(Ratio::new_raw(n, d)),
            _ => Rational(Repr::Big(r)),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(r) => BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom())),
            Repr::Big(r) => r.clone(),
        }
    }

    /// Numerator and denominator, if both fit in `i64`.
    pub fn to_i64_pair(&self) -> Option<(i64, i64)> {
        match &self.0 {
            Repr::Small(r) => Some((*r.numer(), *r.denom())),
            Repr::Big(_) => None,
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => r.is_integer(),
            Repr::Big(r) => r.is_integer(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => r.is_negative(),
            Repr::Big(r) => r.is_negative(),
        }
    }

    pub fn floor(&self) -> Self {
        match &self.0 {
            Repr::Small(r) => narrow(wide(r).floor()),
            Repr::Big(r) => Self::from_big(r.floor()),
        }
    }

    /// Nearest integer, half-way cases away from zero.
    pub fn round(&self) -> Self {
        match &self.0 {
            Repr::Small(r) => narrow(wide(r).round()),
            Repr::Big(r) => Self::from_big(r.round()),
        }
    }

    /// Exact value of a finite float.
    pub fn from_float(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(Self::from_big)
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    fn binary(
        &self,
        other: &Self,
        fast: impl Fn(Ratio<i128>, Ratio<i128>) -> Ratio<i128>,
        slow: impl Fn(BigRational, BigRational) -> BigRational,
    ) -> Self {
        // products of two i64 values fit in i128, and so do sums of two such products
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &other.0) {
            return narrow(fast(wide(a), wide(b)));
        }
        Self::from_big(slow(self.to_big(), other.to_big()))
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Self::from_integer(0)
    }
    fn is_zero(&self) -> bool {
        matches!(&self.0, Repr::Small(r) if r.is_zero())
    }
}

impl One for Rational {
    fn one() -> Self {
        Self::from_integer(1)
    }
}

impl ToPrimitive for Rational {
    /// Integer part, truncated toward zero.
    fn to_i64(&self) -> Option<i64> {
        match &self.0 {
            Repr::Small(r) => Some(r.to_integer()),
            Repr::Big(r) => r.to_integer().to_i64(),
        }
    }
    fn to_u64(&self) -> Option<u64> {
        self.to_i64().and_then(|v| v.to_u64())
    }
    fn to_f64(&self) -> Option<f64> {
        match &self.0 {
            Repr::Small(r) => r.to_f64(),
            Repr::Big(r) => r.to_f64(),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(r) => fmt::Display::fmt(r, f),
            Repr::Big(r) => fmt::Display::fmt(r, f),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, other: &Rational) -> Rational {
                self.binary(other, |a, b| a.$method(b), |a, b| a.$method(b))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, other: Rational) -> Rational {
                (&self).$method(&other)
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, other: &Rational) -> Rational {
                (&self).$method(other)
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, other: Rational) -> Rational {
                self.$method(&other)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl AddAssign for Rational {
    fn add_assign(&mut self, other: Rational) {
        *self = &*self + &other;
    }
}

impl SubAssign for Rational {
    fn sub_assign(&mut self, other: Rational) {
        *self = &*self - &other;
    }
}

impl MulAssign for Rational {
    fn mul_assign(&mut self, other: Rational) {
        *self = &*self * &other;
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match &self.0 {
            Repr::Small(r) => narrow(-wide(r)),
            Repr::Big(r) => Rational::from_big(-r),
        }
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Rational::from_integer(i64::MAX);
        let sum = &big + &big;
        assert!(sum.to_i64_pair().is_none());
        assert_eq!(sum.to_big(), BigRational::from_integer(BigInt::from(i64::MAX) * 2));
        let back = &sum - &big;
        assert_eq!(back, big);
        assert!(back.to_i64_pair().is_some());
    }

    #[test]
    fn arithmetic_matches_big_rationals() {
        let xs = [(1, 3), (-5, 6), (7, 1), (0, 1), (i64::MAX, 3), (-3, i64::MAX)];
        for &(a, b) in &xs {
            for &(c, d) in &xs {
                let (x, y) = (Rational::new(a, b), Rational::new(c, d));
                let (bx, by) = (x.to_big(), y.to_big());
                assert_eq!((&x + &y).to_big(), &bx + &by);
                assert_eq!((&x - &y).to_big(), &bx - &by);
                assert_eq!((&x * &y).to_big(), &bx * &by);
                if !y.is_zero() {
                    assert_eq!((&x / &y).to_big(), &bx / &by);
                }
                assert_eq!(x.cmp(&y), bx.cmp(&by));
            }
        }
    }

    #[test]
    fn reduced_with_positive_denominator() {
        assert_eq!(Rational::new(2, -4).to_i64_pair(), Some((-1, 2)));
        assert_eq!(Rational::new(-3, 6).floor(), Rational::from_integer(-1));
        assert_eq!(Rational::new(i64::MIN, 1).to_i64_pair(), None);
    }
}
