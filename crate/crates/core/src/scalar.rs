//! Coefficient types: exact rationals and `f64`.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub use crate::rational::Rational;
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Build an exact rational `num/den`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(num, den)
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(v)
}

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn is_integral(&self) -> bool;
    fn to_f64(&self) -> f64;
    /// Representative of `self mod 1` in `[0, 1)`.
    fn frac(&self) -> Self;
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;

    fn add_ref(&self, other: &Self) -> Self {
        self.clone() + other.clone()
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.clone() - other.clone()
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.clone() * other.clone()
    }
    /// `self ± a·b` in place.
    fn add_product(&mut self, a: &Self, b: &Self, negate: bool) {
        let p = a.mul_ref(b);
        *self = if negate { self.sub_ref(&p) } else { self.add_ref(&p) };
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        int(v)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_integral(&self) -> bool {
        Rational::is_integer(self)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn frac(&self) -> Self {
        self - self.floor()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn add_product(&mut self, a: &Self, b: &Self, negate: bool) {
        let p = a * b;
        *self = if negate { &*self - &p } else { &*self + &p };
    }
    fn to_json(&self) -> Value {
        if Rational::is_integer(self) {
            match self.to_i64_pair() {
                Some((v, _)) => json!(v),
                None => json!(self.to_string()),
            }
        } else {
            match self.to_i64_pair() {
                Some((n, d)) => json!({"num": n, "den": d}),
                None => json!(self.to_string()),
            }
        }
    }
    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(num) => match num.as_i64() {
                Some(i) => Ok(int(i)),
                None => Err(Error::ModeMix(format!(
                    "float value {num} not accepted in exact mode"
                ))),
            },
            Value::Object(map) => {
                let num = map.get("num").and_then(Value::as_i64);
                let den = map.get("den").and_then(Value::as_i64);
                match (num, den) {
                    (Some(_), Some(0)) => Err(Error::Schema("zero denominator".into())),
                    (Some(n), Some(d)) => Ok(rat(n, d)),
                    _ => Err(Error::Schema(format!("expected {{num, den}}, got {v}"))),
                }
            }
            Value::String(s) => parse_rational(s),
            _ => Err(Error::Schema(format!("expected a number, got {v}"))),
        }
    }
}

fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Schema(format!("cannot parse `{s}` as a rational"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::from_big(BigRational::new(n, d)))
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn is_integral(&self) -> bool {
        self.fract() == 0.0
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn frac(&self) -> Self {
        let r = self.rem_euclid(1.0);
        if r >= 1.0 {
            0.0
        } else {
            r
        }
    }
    fn to_json(&self) -> Value {
        json!(self)
    }
    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(num) => num
                .as_f64()
                .ok_or_else(|| Error::Schema(format!("bad number {num}"))),
            other => Rational::from_json(other).map(|r| Scalar::to_f64(&r)),
        }
    }
}

/// Largest absolute value, used for residual reporting.
pub fn max_abs<T: Scalar>(values: &[T]) -> f64 {
    values.iter().filter(|v| !v.is_zero()).map(|v| v.to_f64().abs()).fold(0.0, f64::max)
}
