//! Coefficient rings for the discrete models: exact `ℤ[i][ζ]` with `ζᴺ = 1`,
//! and `Complex64`.
//!
//! The exact ring is `ℤ[i][x]/(xᴺ − 1)`. Two exact elements are compared as
//! polynomials, which is stronger than comparing their complex values.

use std::fmt::Debug;

use num_complex::Complex64;
use rand::Rng;
use serde_json::{json, Value};
use smallvec::{smallvec, SmallVec};

use crate::cohomology::Mode;
use crate::error::{Error, Result};

pub trait CoefficientRing: Clone + Debug + Send + Sync {
    type Elem: Clone + Debug + PartialEq + Send + Sync;
    /// Operand form for inner loops that multiply the same entries many times.
    type Prepared: Clone + Send + Sync;
    /// Storage unit of an accumulator.
    type Scalar: Clone + Send + Sync;

    fn mode(&self) -> Mode;
    fn period(&self) -> u32;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem {
        self.root(0)
    }
    /// `ζᵏ = exp(2πik/N)`.
    fn root(&self, k: u32) -> Self::Elem;
    fn gaussian(&self, re: i64, im: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `acc += ζᵏ·a·b`.
    fn mul_add_root(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem, k: u32);
    fn mul_root(&self, a: &Self::Elem, k: u32) -> Self::Elem;
    fn prepare(&self, a: &Self::Elem) -> Self::Prepared;
    /// True only for an exact zero, so skipping never changes a sum.
    fn prepared_is_zero(&self, a: &Self::Prepared) -> bool;
    /// A flat buffer holding `len` zero sums.
    fn accumulator(&self, len: usize) -> Vec<Self::Scalar>;
    /// `acc[i] += ζᵏ·a·b`, `k < N`.
    fn accumulate(&self, acc: &mut [Self::Scalar], i: usize, a: &Self::Prepared, b: &Self::Prepared, k: u32);
    fn finish(&self, acc: &[Self::Scalar]) -> Vec<Self::Elem>;
    fn conj(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn to_complex(&self, a: &Self::Elem) -> Complex64;
    /// `0` when equal in the ring (exact) or numerically (float); otherwise the
    /// modulus of the complex difference, floored at the smallest positive `f64`
    /// in exact mode.
    fn residual(&self, a: &Self::Elem, b: &Self::Elem) -> f64;
    fn to_json(&self, a: &Self::Elem) -> Value;
    /// A random small entry: a Gaussian integer with parts in `[−3, 3]` (exact)
    /// or a complex number with parts in `[−1, 1]` (float).
    fn sample<G: Rng>(&self, rng: &mut G) -> Self::Elem;
    fn from_json(&self, v: &Value) -> Result<Self::Elem>;
}

fn root_table(period: u32) -> Vec<Complex64> {
    (0..period)
        .map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / period as f64))
        .collect()
}

/// `ℤ[i][x]/(xᴺ − 1)`.
#[derive(Clone, Debug)]
pub struct ExactRing {
    period: u32,
    roots: Vec<Complex64>,
}

/// `Σ (re + i·im) ζᵏ` stored as its nonzero terms `(k, [re, im])`, sorted by `k`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Cyclotomic(SmallVec<[(u32, [i64; 2]); 1]>);

impl Cyclotomic {
    /// From the dense coefficients of `1, ζ, …, ζᴺ⁻¹`.
    pub fn from_dense(c: &[[i64; 2]]) -> Self {
        Self(c.iter().enumerate().filter(|(_, x)| **x != [0, 0]).map(|(k, x)| (k as u32, *x)).collect())
    }

    pub fn terms(&self) -> &[(u32, [i64; 2])] {
        &self.0
    }

    fn from_unsorted(mut terms: SmallVec<[(u32, [i64; 2]); 1]>) -> Self {
        terms.sort_unstable_by_key(|t| t.0);
        Self(terms)
    }
}

impl ExactRing {
    pub fn new(period: u32) -> Self {
        assert!(period >= 1, "period must be positive");
        Self { period, roots: root_table(period) }
    }

    fn dense(&self, a: &Cyclotomic) -> Vec<[i64; 2]> {
        let mut out = vec![[0, 0]; self.period as usize];
        for &(k, x) in a.terms() {
            out[k as usize] = x;
        }
        out
    }

    fn add_product(&self, acc: &mut [[i64; 2]], a: &Cyclotomic, b: &Cyclotomic, k: u32) {
        let n = self.period as usize;
        for &(i, x) in a.terms() {
            for &(j, y) in b.terms() {
                let mut e = (i + j + k) as usize;
                while e >= n {
                    e -= n;
                }
                let slot = &mut acc[e];
                slot[0] += x[0] * y[0] - x[1] * y[1];
                slot[1] += x[0] * y[1] + x[1] * y[0];
            }
        }
    }
}

impl CoefficientRing for ExactRing {
    type Elem = Cyclotomic;
    type Prepared = Cyclotomic;
    /// `N` coefficients per sum.
    type Scalar = [i64; 2];

    fn mode(&self) -> Mode {
        Mode::Exact
    }

    fn period(&self) -> u32 {
        self.period
    }

    fn zero(&self) -> Cyclotomic {
        Cyclotomic::default()
    }

    fn root(&self, k: u32) -> Cyclotomic {
        Cyclotomic(smallvec![(k % self.period, [1, 0])])
    }

    fn gaussian(&self, re: i64, im: i64) -> Cyclotomic {
        Cyclotomic::from_dense(&[[re, im]])
    }

    fn add(&self, a: &Cyclotomic, b: &Cyclotomic) -> Cyclotomic {
        let mut d = self.dense(a);
        for &(k, x) in b.terms() {
            d[k as usize][0] += x[0];
            d[k as usize][1] += x[1];
        }
        Cyclotomic::from_dense(&d)
    }

    fn neg(&self, a: &Cyclotomic) -> Cyclotomic {
        Cyclotomic(a.terms().iter().map(|&(k, x)| (k, [-x[0], -x[1]])).collect())
    }

    fn mul(&self, a: &Cyclotomic, b: &Cyclotomic) -> Cyclotomic {
        let mut out = self.zero();
        self.mul_add_root(&mut out, a, b, 0);
        out
    }

    fn mul_add_root(&self, acc: &mut Cyclotomic, a: &Cyclotomic, b: &Cyclotomic, k: u32) {
        let mut d = self.dense(acc);
        self.add_product(&mut d, a, b, k % self.period);
        *acc = Cyclotomic::from_dense(&d);
    }

    fn mul_root(&self, a: &Cyclotomic, k: u32) -> Cyclotomic {
        let n = self.period;
        Cyclotomic::from_unsorted(a.terms().iter().map(|&(i, x)| ((i + k % n) % n, x)).collect())
    }

    #[inline]
    fn prepare(&self, a: &Cyclotomic) -> Cyclotomic {
        a.clone()
    }

    #[inline]
    fn prepared_is_zero(&self, a: &Cyclotomic) -> bool {
        a.0.is_empty()
    }

    fn accumulator(&self, len: usize) -> Vec<[i64; 2]> {
        vec![[0, 0]; len * self.period as usize]
    }

    #[inline]
    fn accumulate(&self, acc: &mut [[i64; 2]], i: usize, a: &Cyclotomic, b: &Cyclotomic, k: u32) {
        let n = self.period as usize;
        self.add_product(&mut acc[i * n..(i + 1) * n], a, b, k);
    }

    fn finish(&self, acc: &[[i64; 2]]) -> Vec<Cyclotomic> {
        acc.chunks(self.period as usize).map(Cyclotomic::from_dense).collect()
    }

    fn conj(&self, a: &Cyclotomic) -> Cyclotomic {
        let n = self.period;
        Cyclotomic::from_unsorted(a.terms().iter().map(|&(i, x)| ((n - i) % n, [x[0], -x[1]])).collect())
    }

    fn is_zero(&self, a: &Cyclotomic) -> bool {
        a.0.is_empty()
    }

    fn to_complex(&self, a: &Cyclotomic) -> Complex64 {
        a.terms().iter().map(|&(k, x)| Complex64::new(x[0] as f64, x[1] as f64) * self.roots[k as usize]).sum()
    }

    fn residual(&self, a: &Cyclotomic, b: &Cyclotomic) -> f64 {
        if a == b {
            0.0
        } else {
            self.to_complex(&self.sub(a, b)).norm().max(f64::MIN_POSITIVE)
        }
    }

    fn to_json(&self, a: &Cyclotomic) -> Value {
        match a.terms() {
            [] => json!([0, 0]),
            [(0, x)] => json!(x),
            terms => json!({"terms": terms.iter().map(|(k, x)| json!([k, x[0], x[1]])).collect::<Vec<_>>()}),
        }
    }

    fn sample<G: Rng>(&self, rng: &mut G) -> Cyclotomic {
        self.gaussian(rng.gen_range(-3..=3), rng.gen_range(-3..=3))
    }

    /// `[re, im]` for a Gaussian integer or `{"terms": [[k, re, im], …]}` for `Σ (re + i·im) ζᵏ`.
    fn from_json(&self, v: &Value) -> Result<Cyclotomic> {
        let int = |x: &Value| {
            x.as_i64().ok_or_else(|| match x.is_f64() {
                true => Error::ModeMix("exact mode rejects float entries".into()),
                false => Error::Schema(format!("expected an integer, got {x}")),
            })
        };
        if let Some(pair) = v.as_array() {
            if pair.len() != 2 {
                return Err(Error::Schema("complex entries are [re, im]".into()));
            }
            return Ok(self.gaussian(int(&pair[0])?, int(&pair[1])?));
        }
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Schema(format!("unrecognized ring element {v}")))?;
        let mut out = vec![[0, 0]; self.period as usize];
        for t in terms {
            let t = t.as_array().filter(|t| t.len() == 3).ok_or_else(|| {
                Error::Schema("terms are [k, re, im]".into())
            })?;
            let k = int(&t[0])?.rem_euclid(self.period as i64) as usize;
            out[k][0] += int(&t[1])?;
            out[k][1] += int(&t[2])?;
        }
        Ok(Cyclotomic::from_dense(&out))
    }
}

/// `Complex64` with a precomputed table of `N`-th roots of unity.
#[derive(Clone, Debug)]
pub struct FloatRing {
    period: u32,
    roots: Vec<Complex64>,
    tol: f64,
}

impl FloatRing {
    pub fn new(period: u32, tol: f64) -> Self {
        assert!(period >= 1, "period must be positive");
        Self { period, roots: root_table(period), tol }
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }
}

impl CoefficientRing for FloatRing {
    type Elem = Complex64;
    type Prepared = Complex64;
    type Scalar = Complex64;

    fn mode(&self) -> Mode {
        Mode::Float
    }

    fn period(&self) -> u32 {
        self.period
    }

    fn zero(&self) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }

    fn root(&self, k: u32) -> Complex64 {
        self.roots[(k % self.period) as usize]
    }

    fn gaussian(&self, re: i64, im: i64) -> Complex64 {
        Complex64::new(re as f64, im as f64)
    }

    fn add(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a + b
    }

    fn neg(&self, a: &Complex64) -> Complex64 {
        -a
    }

    fn mul(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a * b
    }

    fn mul_add_root(&self, acc: &mut Complex64, a: &Complex64, b: &Complex64, k: u32) {
        *acc += self.roots[(k % self.period) as usize] * a * b;
    }

    fn mul_root(&self, a: &Complex64, k: u32) -> Complex64 {
        self.roots[(k % self.period) as usize] * a
    }

    #[inline]
    fn prepare(&self, a: &Complex64) -> Complex64 {
        *a
    }

    #[inline]
    fn prepared_is_zero(&self, a: &Complex64) -> bool {
        a.re == 0.0 && a.im == 0.0
    }

    fn accumulator(&self, len: usize) -> Vec<Complex64> {
        vec![Complex64::new(0.0, 0.0); len]
    }

    #[inline]
    fn accumulate(&self, acc: &mut [Complex64], i: usize, a: &Complex64, b: &Complex64, k: u32) {
        acc[i] += self.roots[k as usize] * (a * b);
    }

    fn finish(&self, acc: &[Complex64]) -> Vec<Complex64> {
        acc.to_vec()
    }

    fn conj(&self, a: &Complex64) -> Complex64 {
        a.conj()
    }

    fn is_zero(&self, a: &Complex64) -> bool {
        a.norm() <= self.tol
    }

    fn to_complex(&self, a: &Complex64) -> Complex64 {
        *a
    }

    fn residual(&self, a: &Complex64, b: &Complex64) -> f64 {
        (a - b).norm()
    }

    fn to_json(&self, a: &Complex64) -> Value {
        json!([a.re, a.im])
    }

    fn sample<G: Rng>(&self, rng: &mut G) -> Complex64 {
        Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
    }

    fn from_json(&self, v: &Value) -> Result<Complex64> {
        if let Some(pair) = v.as_array().filter(|p| p.len() == 2) {
            let f = |x: &Value| x.as_f64().ok_or_else(|| Error::Schema(format!("expected a number, got {x}")));
            return Ok(Complex64::new(f(&pair[0])?, f(&pair[1])?));
        }
        let exact = ExactRing::new(self.period).from_json(v)?;
        Ok(ExactRing::new(self.period).to_complex(&exact))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_roots_multiply() {
        let r = ExactRing::new(4);
        assert_eq!(r.mul(&r.root(3), &r.root(2)), r.root(1));
        assert_eq!(r.conj(&r.root(1)), r.root(3));
        assert_eq!(r.mul(&r.gaussian(0, 1), &r.gaussian(0, 1)), r.gaussian(-1, 0));
    }

    #[test]
    fn exact_and_float_agree() {
        let (e, f) = (ExactRing::new(5), FloatRing::new(5, 1e-12));
        let a = e.add(&e.gaussian(2, -1), &e.root(3));
        let b = e.mul_root(&e.gaussian(1, 1), 2);
        let mut acc = e.zero();
        e.mul_add_root(&mut acc, &a, &b, 4);
        let mut facc = f.zero();
        f.mul_add_root(&mut facc, &e.to_complex(&a), &e.to_complex(&b), 4);
        assert!((e.to_complex(&acc) - facc).norm() < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let e = ExactRing::new(4);
        for z in [e.zero(), e.gaussian(3, -2), e.add(&e.root(1), &e.gaussian(1, 0))] {
            assert_eq!(e.from_json(&e.to_json(&z)).unwrap(), z);
        }
        assert!(matches!(e.from_json(&json!([0.5, 0])), Err(Error::ModeMix(_))));
    }
}
