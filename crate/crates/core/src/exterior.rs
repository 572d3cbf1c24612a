//! Exterior powers `Λᵏ` of `ℝⁿ` (and `ℤⁿ`) for `k ≤ 3`.
//!
//! Every multivector and dual form is stored over the lexicographic basis
//! `e_{i₁}∧…∧e_{iₖ}` with `i₁ < … < iₖ`. The same ordering is used for
//! dual coefficients, so a grade-3 dual vector over `Λ³ℤⁿ` is simply a vector
//! in `ℤ^C(n,3)`.

use std::collections::HashMap;
use std::ops::{Add, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use itertools::Itertools;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

pub const MAX_GRADE: usize = 3;

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Lexicographic basis of `Λᵏ` as sorted 0-based index tuples.
pub fn basis(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    (0..n).combinations(k).collect()
}

/// Position of a strictly increasing index tuple in the lexicographic basis.
pub fn basis_rank(n: usize, indices: &[usize]) -> usize {
    let k = indices.len();
    let mut rank = 0;
    let mut next = 0;
    for (p, &i) in indices.iter().enumerate() {
        for j in next..i {
            rank += binomial(n - 1 - j, k - 1 - p);
        }
        next = i + 1;
    }
    rank
}

/// Sorts `indices`, returning the permutation sign, or `None` on repeats.
fn sort_with_sign(indices: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut v = indices.to_vec();
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            } else if v[j] == v[j + 1] {
                return None;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

/// `(left, right, out, negate)` for every nonvanishing product of basis blades.
type WedgeTable = Arc<Vec<(u32, u32, u32, bool)>>;

fn wedge_table(n: usize, p: usize, q: usize) -> WedgeTable {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize, usize), WedgeTable>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().expect("wedge cache").get(&(n, p, q)) {
        return t.clone();
    }
    let mut table = Vec::new();
    for (a, i) in basis(n, p).iter().enumerate() {
        for (b, j) in basis(n, q).iter().enumerate() {
            if i.iter().any(|x| j.contains(x)) {
                continue;
            }
            let inversions: usize = i.iter().map(|x| j.iter().filter(|y| *y < x).count()).sum();
            let mut merged: Vec<usize> = i.iter().chain(j).copied().collect();
            merged.sort_unstable();
            table.push((a as u32, b as u32, basis_rank(n, &merged) as u32, inversions % 2 == 1));
        }
    }
    let table = Arc::new(table);
    cache.lock().expect("wedge cache").insert((n, p, q), table.clone());
    table
}

fn check_shape(n: usize, grade: usize, len: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidIndex("dimension must be positive".into()));
    }
    if grade > MAX_GRADE {
        return Err(Error::GradeOverflow(grade));
    }
    let expected = binomial(n, grade);
    if len != expected {
        return Err(Error::CoefficientLength { expected, found: len });
    }
    Ok(())
}

/// An element of `Λᵏℝⁿ`, `k ≤ 3`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiVector<T = Rational> {
    n: usize,
    grade: usize,
    coeffs: Vec<T>,
}

impl<T: Scalar> MultiVector<T> {
    pub fn new(n: usize, grade: usize, coeffs: Vec<T>) -> Result<Self> {
        check_shape(n, grade, coeffs.len())?;
        Ok(Self { n, grade, coeffs })
    }

    pub fn zero(n: usize, grade: usize) -> Result<Self> {
        Self::new(n, grade, vec![T::zero(); binomial(n, grade)])
    }

    pub fn from_ints(n: usize, grade: usize, values: &[i64]) -> Result<Self> {
        Self::new(n, grade, values.iter().map(|&v| T::from_i64(v)).collect())
    }

    /// A grade-1 vector with the given coordinates.
    pub fn vector(coeffs: Vec<T>) -> Self {
        let n = coeffs.len();
        assert!(n > 0, "vector must have positive dimension");
        Self { n, grade: 1, coeffs }
    }

    pub fn int_vector(values: &[i64]) -> Self {
        Self::vector(values.iter().map(|&v| T::from_i64(v)).collect())
    }

    /// `e_{i₁}∧…∧e_{iₖ}` for 0-based indices in any order.
    pub fn blade(n: usize, indices: &[usize]) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= n) {
            return Err(Error::InvalidIndex(format!("index {bad} out of range for n = {n}")));
        }
        let mut mv = Self::zero(n, indices.len())?;
        if let Some((sorted, sign)) = sort_with_sign(indices) {
            mv.coeffs[basis_rank(n, &sorted)] = T::from_i64(sign);
        }
        Ok(mv)
    }

    /// Basis vector `e_i` (0-based).
    pub fn e(n: usize, i: usize) -> Self {
        Self::blade(n, &[i]).expect("index in range")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coefficient of the basis blade with the given sorted indices.
    pub fn coeff(&self, indices: &[usize]) -> &T {
        &self.coeffs[basis_rank(self.n, indices)]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_integral)
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        if self.grade != other.grade {
            return Err(Error::GradeMismatch { expected: self.grade, found: other.grade });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        Ok(self.zip(other, T::add_ref))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        Ok(self.zip(other, T::sub_ref))
    }

    fn zip(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Self {
        Self {
            n: self.n,
            grade: self.grade,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|c| c.mul_ref(s))
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> MultiVector<U> {
        MultiVector { n: self.n, grade: self.grade, coeffs: self.coeffs.iter().map(f).collect() }
    }

    /// Coefficients reduced mod 1, i.e. the class modulo `Λᵏℤⁿ`.
    pub fn frac(&self) -> Self {
        self.map(Scalar::frac)
    }

    /// Wedge product. Grades above 3 are rejected.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        let grade = self.grade + other.grade;
        if grade > MAX_GRADE {
            return Err(Error::GradeOverflow(grade));
        }
        let mut out = vec![T::zero(); binomial(self.n, grade)];
        for &(i, j, slot, negate) in wedge_table(self.n, self.grade, other.grade).iter() {
            let (a, b) = (&self.coeffs[i as usize], &other.coeffs[j as usize]);
            if !a.is_zero() && !b.is_zero() {
                out[slot as usize].add_product(a, b, negate);
            }
        }
        Ok(Self { n: self.n, grade, coeffs: out })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "grade": self.grade,
            "coeffs": self.coeffs.iter().map(Scalar::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let (n, grade, coeffs) = parse_graded(v)?;
        Self::new(n, grade, coeffs)
    }
}

fn parse_graded<T: Scalar>(v: &Value) -> Result<(usize, usize, Vec<T>)> {
    let field = |name: &str| {
        v.get(name)
            .and_then(Value::as_u64)
            .map(|x| x as usize)
            .ok_or_else(|| Error::Schema(format!("missing integer field `{name}`")))
    };
    let n = field("n")?;
    let grade = field("grade")?;
    let coeffs = v
        .get("coeffs")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Schema("missing array field `coeffs`".into()))?
        .iter()
        .map(T::from_json)
        .collect::<Result<Vec<_>>>()?;
    Ok((n, grade, coeffs))
}

impl<T: Scalar> Add for &MultiVector<T> {
    type Output = MultiVector<T>;

    /// Panics on shape mismatch; use [`MultiVector::try_add`] for fallible code.
    fn add(self, rhs: Self) -> MultiVector<T> {
        self.try_add(rhs).expect("multivector shapes must agree")
    }
}

impl<T: Scalar> Sub for &MultiVector<T> {
    type Output = MultiVector<T>;

    fn sub(self, rhs: Self) -> MultiVector<T> {
        self.try_sub(rhs).expect("multivector shapes must agree")
    }
}

impl<T: Scalar> Neg for &MultiVector<T> {
    type Output = MultiVector<T>;

    fn neg(self) -> MultiVector<T> {
        self.map(|c| -c.clone())
    }
}

/// `t ∧ u ∧ v` for three grade-1 vectors.
pub fn det_triple<T: Scalar>(
    t: &MultiVector<T>,
    u: &MultiVector<T>,
    v: &MultiVector<T>,
) -> Result<MultiVector<T>> {
    for x in [t, u, v] {
        if x.grade != 1 {
            return Err(Error::GradeMismatch { expected: 1, found: x.grade });
        }
    }
    t.wedge(u)?.wedge(v)
}

/// Coordinates of `k∧l∧m` for integer vectors, lexicographic over `i<j<k`.
pub fn int_triple_minors(k: &[i64], l: &[i64], m: &[i64]) -> Vec<i64> {
    let n = k.len();
    let mut out = Vec::with_capacity(binomial(n, 3));
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                out.push(
                    k[a] * (l[b] * m[c] - l[c] * m[b]) - k[b] * (l[a] * m[c] - l[c] * m[a])
                        + k[c] * (l[a] * m[b] - l[b] * m[a]),
                );
            }
        }
    }
    out
}

/// An antisymmetric `k`-linear form, coordinates over the dual lexicographic basis.
#[derive(Clone, Debug, PartialEq)]
pub struct DualVector<T = Rational> {
    n: usize,
    grade: usize,
    coeffs: Vec<T>,
}

impl<T: Scalar> DualVector<T> {
    pub fn new(n: usize, grade: usize, coeffs: Vec<T>) -> Result<Self> {
        check_shape(n, grade, coeffs.len())?;
        Ok(Self { n, grade, coeffs })
    }

    pub fn zero(n: usize, grade: usize) -> Result<Self> {
        Self::new(n, grade, vec![T::zero(); binomial(n, grade)])
    }

    pub fn from_ints(n: usize, grade: usize, values: &[i64]) -> Result<Self> {
        Self::new(n, grade, values.iter().map(|&v| T::from_i64(v)).collect())
    }

    /// Dual basis element `(e_{i₁}∧…∧e_{iₖ})*` for sorted 0-based indices.
    pub fn basis_dual(n: usize, indices: &[usize]) -> Result<Self> {
        let mut d = Self::zero(n, indices.len())?;
        if indices.windows(2).any(|w| w[0] >= w[1]) || indices.iter().any(|&i| i >= n) {
            return Err(Error::InvalidIndex(format!("{indices:?} is not a sorted basis index")));
        }
        d.coeffs[basis_rank(n, indices)] = T::one();
        Ok(d)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_integral)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn pair(&self, x: &MultiVector<T>) -> Result<T> {
        if self.n != x.n {
            return Err(Error::DimensionMismatch { left: self.n, right: x.n });
        }
        if self.grade != x.grade {
            return Err(Error::GradeMismatch { expected: self.grade, found: x.grade });
        }
        Ok(self
            .coeffs
            .iter()
            .zip(&x.coeffs)
            .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n || self.grade != other.grade {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        Ok(Self {
            n: self.n,
            grade: self.grade,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() + b.clone()).collect(),
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "grade": self.grade,
            "coeffs": self.coeffs.iter().map(Scalar::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let (n, grade, coeffs) = parse_graded(v)?;
        Self::new(n, grade, coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    type Mv = MultiVector<Rational>;

    fn e(n: usize, i: usize) -> Mv {
        Mv::e(n, i)
    }

    #[test]
    fn int_minors_match_wedge() {
        let (k, l, m) = ([1, -2, 3, 0], [2, 1, 0, -1], [0, 4, 1, 2]);
        let w = det_triple(&Mv::int_vector(&k), &Mv::int_vector(&l), &Mv::int_vector(&m)).unwrap();
        let minors: Vec<Rational> = int_triple_minors(&k, &l, &m).into_iter().map(int).collect();
        assert_eq!(w.coeffs(), &minors[..]);
    }

    #[test]
    fn basis_rank_matches_enumeration() {
        for n in 1..=6 {
            for k in 0..=3.min(n) {
                for (r, idx) in basis(n, k).iter().enumerate() {
                    assert_eq!(basis_rank(n, idx), r);
                }
            }
        }
    }

    #[test]
    fn wedge_is_alternating() {
        assert!(e(3, 0).wedge(&e(3, 0)).unwrap().is_zero());
        let e12 = Mv::blade(3, &[0, 1]).unwrap();
        assert_eq!(e(3, 0).wedge(&e(3, 1)).unwrap(), e12);
        assert_eq!(e(3, 1).wedge(&e(3, 0)).unwrap(), -&e12);
    }

    #[test]
    fn wedge_of_sums_expands() {
        let a = &e(3, 0) + &e(3, 1);
        let b = &e(3, 1) + &e(3, 2);
        let got = a.wedge(&b).unwrap();
        assert_eq!(got, Mv::from_ints(3, 2, &[1, 1, 1]).unwrap());
    }

    #[test]
    fn wedge_rejects_overflow_and_mismatch() {
        let e12 = Mv::blade(4, &[0, 1]).unwrap();
        assert_eq!(e12.wedge(&e12), Err(Error::GradeOverflow(4)));
        assert!(matches!(e(3, 0).wedge(&e(4, 0)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn pairing_examples() {
        let d = DualVector::<Rational>::basis_dual(3, &[0, 1, 2]).unwrap();
        let x = Mv::blade(3, &[0, 1, 2]).unwrap();
        assert_eq!(d.pair(&x).unwrap(), int(1));
        assert_eq!(DualVector::zero(3, 3).unwrap().pair(&x).unwrap(), int(0));
        let phi = DualVector::<Rational>::from_ints(4, 3, &[1, 0, 2, 0]).unwrap();
        let x = Mv::blade(4, &[0, 2, 3]).unwrap();
        assert_eq!(phi.pair(&x).unwrap(), int(2));
        assert!(phi.pair(&e(4, 0)).is_err());
    }

    #[test]
    fn det_triple_examples() {
        let e123 = Mv::blade(3, &[0, 1, 2]).unwrap();
        assert_eq!(det_triple(&e(3, 0), &e(3, 1), &e(3, 2)).unwrap(), e123);
        assert!(det_triple(&e(3, 0), &e(3, 1), &e(3, 0)).unwrap().is_zero());
        let t = &e(3, 0) + &e(3, 1);
        assert_eq!(det_triple(&t, &e(3, 1), &e(3, 2)).unwrap(), e123);
    }

    #[test]
    fn blade_sorts_with_sign() {
        let b = Mv::blade(3, &[2, 0, 1]).unwrap();
        assert_eq!(b.coeffs(), &[int(1)]);
        let b = Mv::blade(3, &[1, 0, 2]).unwrap();
        assert_eq!(b.coeffs(), &[int(-1)]);
        assert!(Mv::blade(3, &[1, 1, 2]).unwrap().is_zero());
    }

    #[test]
    fn json_shape_is_checked() {
        let v = json!({"n": 3, "grade": 2, "coeffs": [1, {"num": 1, "den": 2}, 0]});
        let mv = Mv::from_json(&v).unwrap();
        assert_eq!(mv.coeffs()[1], rat(1, 2));
        assert_eq!(Mv::from_json(&mv.to_json()).unwrap(), mv);
        let bad = json!({"n": 3, "grade": 2, "coeffs": [1, 2]});
        assert!(Mv::from_json(&bad).is_err());
        let high = json!({"n": 4, "grade": 4, "coeffs": [1]});
        assert_eq!(Mv::from_json(&high), Err(Error::GradeOverflow(4)));
    }
}
