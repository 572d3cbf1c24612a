//! Circle-valued 2-cocycles on `ℤⁿ`, tricharacters on `Λ³ℝⁿ`, and obstruction
//! functions on a finite set of orbits.
//!
//! Phases are elements of `ℝ/ℤ` written additively: the phase `x` stands for
//! `exp(2πi x)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::exterior::{binomial, int_triple_minors, DualVector, MultiVector};
use crate::scalar::{int, Rational, Scalar};

/// Default comparison tolerance for float phases.
pub const FLOAT_TOL: f64 = 1e-9;

/// Default half-width of the box on which table cocycles are stored.
pub const DEFAULT_BOX: i64 = 4;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Mode {
    #[default]
    Exact,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        })
    }
}

/// An element of `ℝ/ℤ`, kept reduced into `[0, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub enum Phase {
    Exact(Rational),
    Float(f64),
}

fn float_frac(x: f64) -> f64 {
    let r = x.rem_euclid(1.0);
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

impl Phase {
    pub fn exact(value: Rational) -> Self {
        if matches!(value.to_i64_pair(), Some((n, d)) if 0 <= n && n < d) {
            return Phase::Exact(value);
        }
        Phase::Exact(value.frac())
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::exact(crate::scalar::rat(num, den))
    }

    pub fn float(value: f64) -> Self {
        Phase::Float(float_frac(value))
    }

    pub fn zero(mode: Mode) -> Self {
        match mode {
            Mode::Exact => Phase::Exact(int(0)),
            Mode::Float => Phase::Float(0.0),
        }
    }

    /// Phase of a real number in the given mode.
    pub fn from_rational(value: &Rational, mode: Mode) -> Self {
        match mode {
            Mode::Exact => Self::exact(value.clone()),
            Mode::Float => Self::float(Scalar::to_f64(&value.frac())),
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            Phase::Exact(_) => Mode::Exact,
            Phase::Float(_) => Mode::Float,
        }
    }

    pub fn to_mode(&self, mode: Mode) -> Result<Self> {
        match (self, mode) {
            (Phase::Exact(r), Mode::Float) => Ok(Self::float(Scalar::to_f64(r))),
            (Phase::Float(_), Mode::Exact) => {
                Err(Error::ModeMix("a float phase cannot be made exact".into()))
            }
            _ => Ok(self.clone()),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Phase::Exact(r) => Scalar::to_f64(r),
            Phase::Float(x) => *x,
        }
    }

    /// Distance to `0` in `ℝ/ℤ`, in `[0, 1/2]`.
    pub fn norm(&self) -> f64 {
        let x = self.to_f64();
        x.min(1.0 - x)
    }

    /// Exact zero, or within `tol` of an integer for float phases.
    pub fn is_zero_within(&self, tol: f64) -> bool {
        match self {
            Phase::Exact(r) => Scalar::is_zero(r),
            Phase::Float(_) => self.norm() <= tol,
        }
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self.clone() - other.clone()).is_zero_within(tol)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (Phase::Exact(a), Phase::Exact(b)) => {
                let sum = a + b;
                Ok(Self::exact(if sum >= int(1) { sum - int(1) } else { sum }))
            }
            (Phase::Float(a), Phase::Float(b)) => Ok(Self::float(a + b)),
            _ => Err(Error::ModeMix("exact and float phases combined".into())),
        }
    }

    pub fn times(&self, k: i64) -> Self {
        match self {
            Phase::Exact(a) if k == 1 || Scalar::is_zero(a) => Self::exact(a.clone()),
            Phase::Exact(a) if k == -1 => Self::exact(int(1) - a),
            Phase::Exact(a) => Self::exact(a * int(k)),
            Phase::Float(a) => Self::float(a * k as f64),
        }
    }

    /// Lift to the real representative in `(−1/2, 1/2]`.
    pub fn centered_lift(&self) -> f64 {
        let x = self.to_f64();
        if x > 0.5 {
            x - 1.0
        } else {
            x
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Phase::Exact(r) => match r.to_i64_pair() {
                Some((num, den)) => json!({"num": num, "den": den}),
                None => json!(r.to_string()),
            },
            Phase::Float(x) => json!(x),
        }
    }

    pub fn from_json(v: &Value, mode: Mode) -> Result<Self> {
        match mode {
            Mode::Exact => Ok(Self::exact(Rational::from_json(v)?)),
            Mode::Float => Ok(Self::float(f64::from_json(v)?)),
        }
    }
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, other: Phase) -> Phase {
        self.checked_add(&other).expect("phases of one mode")
    }
}

impl Sub for Phase {
    type Output = Phase;
    fn sub(self, other: Phase) -> Phase {
        self + (-other)
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        self.times(-1)
    }
}

fn ensure_mode<'a>(phases: impl IntoIterator<Item = &'a Phase>, mode: Mode) -> Result<()> {
    if phases.into_iter().any(|p| p.mode() != mode) {
        return Err(Error::ModeMix(format!("expected only {mode} phases")));
    }
    Ok(())
}

/// Smallest `n ≥ grade` with `C(n, grade) = len`.
pub fn infer_n(len: usize, grade: usize) -> Result<usize> {
    (grade.max(1)..=len + grade + 1)
        .find(|&n| binomial(n, grade) == len)
        .ok_or_else(|| Error::Schema(format!("{len} coefficients fit no grade-{grade} space")))
}

fn json_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::Schema(format!("`{what}` must be an array")))
}

fn json_field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Schema(format!("missing field `{key}`")))
}

fn json_usize(v: &Value, key: &str) -> Result<usize> {
    json_field(v, key)?
        .as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Error::Schema(format!("`{key}` must be a nonnegative integer")))
}

/// An `n × n` matrix of phases. Used for `Θ̂` (strictly upper triangular)
/// and for antisymmetric pairings `Θ`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseMatrix {
    n: usize,
    mode: Mode,
    entries: Vec<Phase>,
}

impl PhaseMatrix {
    pub fn zero(n: usize, mode: Mode) -> Self {
        Self { n, mode, entries: vec![Phase::zero(mode); n * n] }
    }

    pub fn from_rows(rows: Vec<Vec<Phase>>, mode: Mode) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Schema("matrix must be nonempty".into()));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { left: n, right: r.len() });
        }
        let entries: Vec<Phase> = rows.into_iter().flatten().collect();
        ensure_mode(&entries, mode)?;
        Ok(Self { n, mode, entries })
    }

    /// Antisymmetric matrix from its upper entries `(i<j)` in lexicographic order.
    pub fn antisymmetric_from_upper(n: usize, upper: &[Phase], mode: Mode) -> Result<Self> {
        if upper.len() != binomial(n, 2) {
            return Err(Error::CoefficientLength { expected: binomial(n, 2), found: upper.len() });
        }
        ensure_mode(upper, mode)?;
        let mut m = Self::zero(n, mode);
        let mut it = upper.iter();
        for i in 0..n {
            for j in i + 1..n {
                let p = it.next().expect("length checked").clone();
                m.set(j, i, -p.clone());
                m.set(i, j, p);
            }
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn get(&self, i: usize, j: usize) -> &Phase {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Phase) {
        assert_eq!(p.mode(), self.mode, "phase mode");
        self.entries[i * self.n + j] = p;
    }

    /// Entries `(i, j)` with `i < j`, lexicographic.
    pub fn upper(&self) -> Vec<Phase> {
        let mut out = Vec::with_capacity(binomial(self.n, 2));
        for i in 0..self.n {
            for j in i + 1..self.n {
                out.push(self.get(i, j).clone());
            }
        }
        out
    }

    /// Strict upper triangle, zero elsewhere.
    pub fn strict_upper(&self) -> Self {
        let mut m = Self::zero(self.n, self.mode);
        for i in 0..self.n {
            for j in i + 1..self.n {
                m.set(i, j, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn is_strictly_upper(&self, tol: f64) -> bool {
        (0..self.n).all(|i| (0..=i).all(|j| self.get(i, j).is_zero_within(tol)))
    }

    pub fn is_antisymmetric(&self, tol: f64) -> bool {
        (0..self.n).all(|i| {
            (i..self.n).all(|j| (self.get(i, j).clone() + self.get(j, i).clone()).is_zero_within(tol))
        })
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.entries.iter().all(|p| p.is_zero_within(tol))
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.n == other.n
            && self.mode == other.mode
            && self.entries.iter().zip(&other.entries).all(|(a, b)| a.approx_eq(b, tol))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.checked_add(b))
            .collect::<Result<_>>()?;
        Ok(Self { n: self.n, mode: self.mode, entries })
    }

    pub fn neg(&self) -> Self {
        Self { n: self.n, mode: self.mode, entries: self.entries.iter().map(|p| -p.clone()).collect() }
    }

    /// Principal submatrix on the given 0-based rows/columns.
    pub fn restrict(&self, idx: &[usize]) -> Result<Self> {
        if let Some(&bad) = idx.iter().find(|&&i| i >= self.n) {
            return Err(Error::InvalidIndex(format!("index {bad} out of range for n = {}", self.n)));
        }
        let k = idx.len();
        let mut m = Self::zero(k, self.mode);
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        Ok(m)
    }

    pub fn to_mode(&self, mode: Mode) -> Result<Self> {
        let entries = self.entries.iter().map(|p| p.to_mode(mode)).collect::<Result<_>>()?;
        Ok(Self { n: self.n, mode, entries })
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.n)
                .map(|i| Value::Array((0..self.n).map(|j| self.get(i, j).to_json()).collect()))
                .collect(),
        )
    }

    pub fn from_json(v: &Value, mode: Mode) -> Result<Self> {
        let rows = json_array(v, "matrix")?
            .iter()
            .map(|r| json_array(r, "matrix row")?.iter().map(|p| Phase::from_json(p, mode)).collect())
            .collect::<Result<Vec<Vec<Phase>>>>()?;
        Self::from_rows(rows, mode)
    }
}

/// The integer box `[−b, b]ⁿ`, enumerated row-major with the first coordinate slowest.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeBox {
    pub n: usize,
    pub b: i64,
}

impl LatticeBox {
    pub fn new(n: usize, b: i64) -> Self {
        Self { n, b }
    }

    pub fn side(&self) -> usize {
        (2 * self.b + 1) as usize
    }

    pub fn len(&self) -> usize {
        self.side().pow(self.n as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, k: &[i64]) -> bool {
        k.len() == self.n && k.iter().all(|x| x.abs() <= self.b)
    }

    pub fn index(&self, k: &[i64]) -> Result<usize> {
        if !self.contains(k) {
            return Err(Error::OutOfBox(k.to_vec(), self.b));
        }
        Ok(k.iter().fold(0, |acc, &x| acc * self.side() + (x + self.b) as usize))
    }

    pub fn point(&self, mut index: usize) -> Vec<i64> {
        let mut k = vec![0; self.n];
        for slot in k.iter_mut().rev() {
            *slot = (index % self.side()) as i64 - self.b;
            index /= self.side();
        }
        k
    }

    pub fn points(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        (0..self.len()).map(|i| self.point(i))
    }
}

/// A phase-valued function on a box of `ℤⁿ`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxFunction {
    domain: LatticeBox,
    mode: Mode,
    values: Vec<Phase>,
}

impl BoxFunction {
    pub fn new(domain: LatticeBox, values: Vec<Phase>, mode: Mode) -> Result<Self> {
        if values.len() != domain.len() {
            return Err(Error::CoefficientLength { expected: domain.len(), found: values.len() });
        }
        ensure_mode(&values, mode)?;
        Ok(Self { domain, mode, values })
    }

    pub fn from_fn(domain: LatticeBox, mode: Mode, f: impl Fn(&[i64]) -> Phase) -> Result<Self> {
        Self::new(domain, domain.points().map(|k| f(&k)).collect(), mode)
    }

    pub fn domain(&self) -> LatticeBox {
        self.domain
    }

    pub fn eval(&self, k: &[i64]) -> Result<Phase> {
        Ok(self.values[self.domain.index(k)?].clone())
    }
}

/// A normalized `𝕋`-valued 2-cocycle on `ℤⁿ`.
#[derive(Clone, Debug, PartialEq)]
pub enum Cocycle2 {
    /// `ω(k, l) = exp(2πi kᵀΘ̂l)` with `Θ̂` strictly upper triangular.
    Standard { theta_hat: PhaseMatrix },
    /// Explicit values on `[−b, b]ⁿ × [−b, b]ⁿ`, indexed by `(k, l)` with `k` slowest.
    Table { domain: LatticeBox, mode: Mode, values: Vec<Phase> },
}

impl Cocycle2 {
    pub fn trivial(n: usize, mode: Mode) -> Self {
        Cocycle2::Standard { theta_hat: PhaseMatrix::zero(n, mode) }
    }

    pub fn standard(theta_hat: PhaseMatrix) -> Result<Self> {
        if !theta_hat.is_strictly_upper(0.0) {
            return Err(Error::Schema("theta_hat must be strictly upper triangular".into()));
        }
        Ok(Cocycle2::Standard { theta_hat })
    }

    pub fn table(domain: LatticeBox, values: Vec<Phase>, mode: Mode) -> Result<Self> {
        let expected = domain.len() * domain.len();
        if values.len() != expected {
            return Err(Error::CoefficientLength { expected, found: values.len() });
        }
        ensure_mode(&values, mode)?;
        Ok(Cocycle2::Table { domain, mode, values })
    }

    pub fn table_from_fn(
        domain: LatticeBox,
        mode: Mode,
        f: impl Fn(&[i64], &[i64]) -> Phase,
    ) -> Result<Self> {
        let mut values = Vec::with_capacity(domain.len() * domain.len());
        for k in domain.points() {
            for l in domain.points() {
                values.push(f(&k, &l));
            }
        }
        Self::table(domain, values, mode)
    }

    /// Tabulates any cocycle on a box.
    pub fn to_table(&self, b: i64) -> Result<Self> {
        let domain = LatticeBox::new(self.n(), b);
        let mut values = Vec::with_capacity(domain.len() * domain.len());
        for k in domain.points() {
            for l in domain.points() {
                values.push(self.eval(&k, &l)?);
            }
        }
        Self::table(domain, values, self.mode())
    }

    pub fn n(&self) -> usize {
        match self {
            Cocycle2::Standard { theta_hat } => theta_hat.n(),
            Cocycle2::Table { domain, .. } => domain.n,
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            Cocycle2::Standard { theta_hat } => theta_hat.mode(),
            Cocycle2::Table { mode, .. } => *mode,
        }
    }

    /// Half-width of the box where values are known; `None` means all of `ℤⁿ`.
    pub fn box_bound(&self) -> Option<i64> {
        match self {
            Cocycle2::Standard { .. } => None,
            Cocycle2::Table { domain, .. } => Some(domain.b),
        }
    }

    pub fn eval(&self, k: &[i64], l: &[i64]) -> Result<Phase> {
        let n = self.n();
        for v in [k, l] {
            if v.len() != n {
                return Err(Error::DimensionMismatch { left: n, right: v.len() });
            }
        }
        match self {
            Cocycle2::Standard { theta_hat } => {
                let mut acc = Phase::zero(theta_hat.mode());
                for i in 0..n {
                    for j in i + 1..n {
                        let c = k[i] * l[j];
                        if c != 0 {
                            acc = acc + theta_hat.get(i, j).times(c);
                        }
                    }
                }
                Ok(acc)
            }
            Cocycle2::Table { domain, values, .. } => {
                let side = domain.len();
                Ok(values[domain.index(k)? * side + domain.index(l)?].clone())
            }
        }
    }

    /// Pointwise product `ω₁·ω₂`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch { left: self.n(), right: other.n() });
        }
        if self.mode() != other.mode() {
            return Err(Error::ModeMix("cocycles of different modes".into()));
        }
        match (self, other) {
            (Cocycle2::Standard { theta_hat: a }, Cocycle2::Standard { theta_hat: b }) => {
                Ok(Cocycle2::Standard { theta_hat: a.try_add(b)? })
            }
            _ => {
                let b = match (self.box_bound(), other.box_bound()) {
                    (Some(x), Some(y)) => x.min(y),
                    (Some(x), None) | (None, Some(x)) => x,
                    (None, None) => unreachable!(),
                };
                let domain = LatticeBox::new(self.n(), b);
                let mut values = Vec::with_capacity(domain.len() * domain.len());
                for k in domain.points() {
                    for l in domain.points() {
                        values.push(self.eval(&k, &l)?.checked_add(&other.eval(&k, &l)?)?);
                    }
                }
                Self::table(domain, values, self.mode())
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Cocycle2::Standard { theta_hat } => {
                json!({"form": "standard", "theta_hat": theta_hat.to_json()})
            }
            Cocycle2::Table { domain, values, .. } => json!({
                "form": "table",
                "n": domain.n,
                "box": domain.b,
                "values": values.iter().map(Phase::to_json).collect::<Vec<_>>(),
            }),
        }
    }

    pub fn from_json(v: &Value, mode: Mode) -> Result<Self> {
        match json_field(v, "form")?.as_str() {
            Some("standard") => Self::standard(PhaseMatrix::from_json(json_field(v, "theta_hat")?, mode)?),
            Some("table") => {
                let n = json_usize(v, "n")?;
                let b = match v.get("box") {
                    None => DEFAULT_BOX,
                    Some(x) => x
                        .as_i64()
                        .filter(|&b| b >= 0)
                        .ok_or_else(|| Error::Schema("`box` must be a nonnegative integer".into()))?,
                };
                let values = json_array(json_field(v, "values")?, "values")?
                    .iter()
                    .map(|p| Phase::from_json(p, mode))
                    .collect::<Result<_>>()?;
                Self::table(LatticeBox::new(n, b), values, mode)
            }
            _ => Err(Error::Schema("`form` must be \"standard\" or \"table\"".into())),
        }
    }
}

/// A character `U(ξ) = exp(2πi⟨c, ξ⟩)` of `Λ³ℝⁿ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tricharacter {
    c: DualVector<Rational>,
}

impl Tricharacter {
    pub fn new(c: DualVector<Rational>) -> Result<Self> {
        if c.grade() != 3 {
            return Err(Error::GradeMismatch { expected: 3, found: c.grade() });
        }
        Ok(Self { c })
    }

    pub fn trivial(n: usize) -> Self {
        Self { c: DualVector::zero(n, 3).expect("grade 3") }
    }

    pub fn from_ints(n: usize, m: &[i64]) -> Result<Self> {
        Self::new(DualVector::from_ints(n, 3, m)?)
    }

    pub fn n(&self) -> usize {
        self.c.n()
    }

    pub fn coefficients(&self) -> &DualVector<Rational> {
        &self.c
    }

    /// Trivial on `Λ³ℤⁿ`.
    pub fn is_integral(&self) -> bool {
        self.c.is_integral()
    }

    pub fn eval(&self, xi: &MultiVector<Rational>, mode: Mode) -> Result<Phase> {
        Ok(Phase::from_rational(&self.c.pair(xi)?, mode))
    }

    /// `U(k∧l∧m)` for integer vectors.
    pub fn eval_triple(&self, k: &[i64], l: &[i64], m: &[i64], mode: Mode) -> Result<Phase> {
        let n = self.n();
        if let Some(v) = [k, l, m].into_iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch { left: n, right: v.len() });
        }
        let minors = int_triple_minors(k, l, m);
        let value = self
            .c
            .coeffs()
            .iter()
            .zip(minors)
            .filter(|(_, d)| *d != 0)
            .fold(int(0), |acc, (c, d)| acc + c * int(d));
        Ok(Phase::from_rational(&value, mode))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Self::new(self.c.try_add(&other.c)?)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "c": self.c.coeffs().iter().map(Scalar::to_json).collect::<Vec<_>>(),
            "integral": self.is_integral(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let coeffs = json_array(json_field(v, "c")?, "c")?
            .iter()
            .map(Rational::from_json)
            .collect::<Result<Vec<_>>>()?;
        let n = match v.get("n") {
            Some(_) => json_usize(v, "n")?,
            None => infer_n(coeffs.len(), 3)?,
        };
        let u = Self::new(DualVector::new(n, 3, coeffs)?)?;
        if let Some(flag) = v.get("integral") {
            if flag.as_bool() != Some(u.is_integral()) {
                return Err(Error::Schema("`integral` disagrees with the coefficients".into()));
            }
        }
        Ok(u)
    }
}

/// Locally constant obstruction data: one grade-`g` form per orbit.
#[derive(Clone, Debug, PartialEq)]
pub struct ObstructionFunction {
    n: usize,
    grade: usize,
    points: BTreeMap<String, DualVector<Rational>>,
}

impl ObstructionFunction {
    pub fn new(n: usize, grade: usize, points: BTreeMap<String, DualVector<Rational>>) -> Result<Self> {
        for d in points.values() {
            if d.n() != n {
                return Err(Error::DimensionMismatch { left: n, right: d.n() });
            }
            if d.grade() != grade {
                return Err(Error::GradeMismatch { expected: grade, found: d.grade() });
            }
        }
        Ok(Self { n, grade, points })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn points(&self) -> &BTreeMap<String, DualVector<Rational>> {
        &self.points
    }

    pub fn value(&self, point: &str) -> Result<&DualVector<Rational>> {
        self.points.get(point).ok_or_else(|| Error::UnknownPoint(point.to_string()))
    }

    pub fn to_json(&self) -> Value {
        let points: Map<String, Value> = self
            .points
            .iter()
            .map(|(k, d)| (k.clone(), Value::Array(d.coeffs().iter().map(Scalar::to_json).collect())))
            .collect();
        json!({"n": self.n, "grade": self.grade, "points": points})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let grade = match v.get("grade") {
            Some(_) => json_usize(v, "grade")?,
            None => 3,
        };
        let raw = json_field(v, "points")?
            .as_object()
            .ok_or_else(|| Error::Schema("`points` must be an object".into()))?;
        let mut coeffs = BTreeMap::new();
        for (name, c) in raw {
            let c = json_array(c, name)?.iter().map(Rational::from_json).collect::<Result<Vec<_>>>()?;
            coeffs.insert(name.clone(), c);
        }
        let n = match v.get("n") {
            Some(_) => json_usize(v, "n")?,
            None => {
                let len = coeffs
                    .values()
                    .next()
                    .map(Vec::len)
                    .ok_or_else(|| Error::Schema("empty `points` needs an explicit `n`".into()))?;
                infer_n(len, grade)?
            }
        };
        let points = coeffs
            .into_iter()
            .map(|(k, c)| Ok((k, DualVector::new(n, grade, c)?)))
            .collect::<Result<_>>()?;
        Self::new(n, grade, points)
    }
}

/// `∂V(k, l) = V(k) + V(l) − V(k + l)` on `[−b, b]ⁿ`.
pub fn coboundary1(v: &BoxFunction, b: i64) -> Result<Cocycle2> {
    let dom = v.domain();
    if dom.b < 2 * b {
        return Err(Error::BoxTooSmall { have: dom.b, need: 2 * b });
    }
    let origin = vec![0; dom.n];
    let v0 = v.eval(&origin)?;
    if !v0.is_zero_within(FLOAT_TOL) {
        return Err(Error::NotNormalized(format!("V(0) = {}", v0.to_f64())));
    }
    Cocycle2::table_from_fn(LatticeBox::new(dom.n, b), v.mode, |k, l| {
        let sum: Vec<i64> = k.iter().zip(l).map(|(a, b)| a + b).collect();
        v.eval(k).unwrap() + v.eval(l).unwrap() - v.eval(&sum).unwrap()
    })
}

fn add_vec(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Phase of `ω(k+l,m)ω(k,l)U(k∧l∧m) / (ω(k,l+m)ω(l,m))`.
pub fn cocycle_defect(
    omega: &Cocycle2,
    u: &Tricharacter,
    k: &[i64],
    l: &[i64],
    m: &[i64],
) -> Result<Phase> {
    if omega.n() != u.n() {
        return Err(Error::DimensionMismatch { left: omega.n(), right: u.n() });
    }
    let mode = omega.mode();
    let lhs = omega.eval(&add_vec(k, l), m)? + omega.eval(k, l)? + u.eval_triple(k, l, m, mode)?;
    let rhs = omega.eval(k, &add_vec(l, m))? + omega.eval(l, m)?;
    Ok(lhs - rhs)
}

/// `Θ_ij = ω(e_i, e_j) − ω(e_j, e_i)`.
pub fn commutator_pairing(omega: &Cocycle2) -> Result<PhaseMatrix> {
    let n = omega.n();
    let unit = |i: usize| {
        let mut e = vec![0; n];
        e[i] = 1;
        e
    };
    let mut theta = PhaseMatrix::zero(n, omega.mode());
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let p = omega.eval(&unit(i), &unit(j))? - omega.eval(&unit(j), &unit(i))?;
                theta.set(i, j, p);
            }
        }
    }
    Ok(theta)
}

pub fn cohomologous(a: &Cocycle2, b: &Cocycle2, tol: f64) -> Result<bool> {
    if a.mode() != b.mode() {
        return Err(Error::ModeMix("cocycles of different modes".into()));
    }
    Ok(commutator_pairing(a)?.approx_eq(&commutator_pairing(b)?, tol))
}

/// Canonical representative with `Θ̂` the strict upper triangle of `Θ`.
pub fn standard_cocycle(theta: &PhaseMatrix) -> Result<Cocycle2> {
    if !theta.is_antisymmetric(FLOAT_TOL) {
        return Err(Error::NotAntisymmetric(theta.to_json().to_string()));
    }
    Cocycle2::standard(theta.strict_upper())
}

/// `⟨χ(p), t₁∧…∧t_g⟩`.
pub fn cocycle_from_obstruction(
    chi: &ObstructionFunction,
    ts: &[MultiVector<Rational>],
    point: &str,
) -> Result<Rational> {
    let value = chi.value(point)?;
    if ts.len() != chi.grade() {
        return Err(Error::GradeMismatch { expected: chi.grade(), found: ts.len() });
    }
    let mut wedge = MultiVector::new(chi.n(), 0, vec![int(1)])?;
    for t in ts {
        if t.grade() != 1 {
            return Err(Error::GradeMismatch { expected: 1, found: t.grade() });
        }
        wedge = wedge.wedge(t)?;
    }
    value.pair(&wedge)
}
