//! Fiber actions `(ω, U)` of the lifted 2-group on `ℂ`, their classes in
//! `ℤᵏ × H²(ℤⁿ, 𝕋)`, and the derived invariants.

mod family;
mod induced;
mod strict;

pub use family::{mackey_winding, t_duality_decision, Decision, Evidence, FamilyOverBase, TDualityReport};
pub use induced::{induced_rep, InducedRep, LatticeArrow, LatticeBigon, MonomialOperator};
pub use strict::{check_strict_action, CMatrix, StrictActionData};

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cohomology::{
    cocycle_defect, commutator_pairing, standard_cocycle, Cocycle2, LatticeBox, Mode, ObstructionFunction,
    Phase, PhaseMatrix, Tricharacter, FLOAT_TOL,
};
use crate::error::{Error, Result};
use crate::exterior::{basis, basis_rank, binomial, DualVector};
use crate::report::{CheckReport, LawReport};
use crate::scalar::{int, Scalar};

/// Orientation used when a 3-subtorus class is read off the `m` vector.
pub const SUBTORUS_SIGN: &str = "+e_i^e_j^e_k";
/// Orientation relating `m` to the Dixmier-Douady class.
pub const DD_SIGN: &str = "+";

/// An action of the lifted 2-group on `ℂ`: a 2-cocycle and its associator character.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberAction {
    pub omega: Cocycle2,
    pub u: Tricharacter,
}

impl FiberAction {
    pub fn new(omega: Cocycle2, u: Tricharacter) -> Result<Self> {
        if omega.n() != u.n() {
            return Err(Error::DimensionMismatch { left: omega.n(), right: u.n() });
        }
        Ok(Self { omega, u })
    }

    pub fn trivial(n: usize, mode: Mode) -> Self {
        Self { omega: Cocycle2::trivial(n, mode), u: Tricharacter::trivial(n) }
    }

    pub fn n(&self) -> usize {
        self.omega.n()
    }

    /// Pointwise (tensor) product of two actions.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        Self::new(self.omega.mul(&other.omega)?, self.u.mul(&other.u)?)
    }

    pub fn to_json(&self) -> Value {
        json!({"omega": self.omega.to_json(), "U": self.u.to_json()})
    }

    pub fn from_json(v: &Value, mode: Mode) -> Result<Self> {
        let omega = v.get("omega").ok_or_else(|| Error::Schema("missing field `omega`".into()))?;
        let u = v.get("U").ok_or_else(|| Error::Schema("missing field `U`".into()))?;
        Self::new(Cocycle2::from_json(omega, mode)?, Tricharacter::from_json(u)?)
    }
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut e = vec![0; n];
    e[i] = 1;
    e
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Checks normalization, the homomorphism property of `U`, the twisted cocycle
/// identity on box triples, and integrality of `U` on `Λ³ℤⁿ`.
///
/// Standard-form cocycles are bilinear, so the twisted cocycle defect reduces to
/// the trilinear map `U(k∧l∧m)`; it is certified on basis triples. Table-form
/// cocycles are checked on every triple of `[−b, b]ⁿ` whose lookups stay in the table.
pub fn validate_fiber_action(a: &FiberAction, b: i64, tol: f64) -> CheckReport {
    let n = a.n();
    let mode = a.omega.mode();
    let tol = if mode == Mode::Exact { 0.0 } else { tol };
    let mut normal = LawReport::new("normalization");
    let mut hom = LawReport::new("tricharacter-homomorphism");
    let mut cocycle = LawReport::new("twisted-cocycle");
    let mut integral = LawReport::new("tricharacter-integral");

    let residual = |p: Result<Phase>| p.map(|p| p.norm()).unwrap_or(f64::NAN);

    let method = match &a.omega {
        Cocycle2::Standard { .. } => {
            let zero = vec![0; n];
            for i in 0..n {
                let e = unit(n, i);
                normal.record(residual(a.omega.eval(&zero, &e)), tol, || json!({"k": zero, "l": e}));
                normal.record(residual(a.omega.eval(&e, &zero)), tol, || json!({"k": e, "l": zero}));
            }
            for idx in basis(n, 3) {
                let (k, l, m) = (unit(n, idx[0]), unit(n, idx[1]), unit(n, idx[2]));
                let r = residual(cocycle_defect(&a.omega, &a.u, &k, &l, &m));
                cocycle.record(r, tol, || json!({"k": k, "l": l, "m": m}));
            }
            "multilinear-certificate"
        }
        Cocycle2::Table { domain, .. } => {
            let inner = LatticeBox::new(n, b.min(domain.b));
            let zero = vec![0; n];
            for k in domain.points() {
                normal.record(residual(a.omega.eval(&zero, &k)), tol, || json!({"k": zero, "l": k}));
                normal.record(residual(a.omega.eval(&k, &zero)), tol, || json!({"k": k, "l": zero}));
            }
            let batches: Vec<LawReport> = (0..inner.len())
                .into_par_iter()
                .map(|ki| {
                    let k = inner.point(ki);
                    let mut part = LawReport::new("twisted-cocycle");
                    for l in inner.points() {
                        let kl = add(&k, &l);
                        if !domain.contains(&kl) {
                            continue;
                        }
                        for m in inner.points() {
                            if !domain.contains(&add(&l, &m)) {
                                continue;
                            }
                            let r = residual(cocycle_defect(&a.omega, &a.u, &k, &l, &m));
                            part.record(r, tol, || json!({"k": k, "l": l, "m": m}));
                        }
                    }
                    part
                })
                .collect();
            for part in batches {
                cocycle.merge(part);
            }
            "exhaustive-box"
        }
    };

    // U is given by linear coefficients, hence additive by construction.
    let zero_u = residual(a.u.eval_triple(&vec![0; n], &vec![0; n], &vec![0; n], mode));
    hom.record(zero_u, tol, || json!({"structural": true}));

    for (idx, c) in basis(n, 3).iter().zip(a.u.coefficients().coeffs()) {
        let r = Scalar::to_f64(&(c - c.round())).abs();
        integral.record(r, 0.0, || json!({"basis": idx, "c": c.to_json()}));
    }

    let mut report = CheckReport::default()
        .convention("cocycle_method", method)
        .convention("validation_box", b.to_string())
        .convention("mode", mode.to_string());
    for law in [normal, hom, cocycle, integral] {
        report.push(law);
    }
    report
}

/// A class in `ℤᵏ × H²(ℤⁿ, 𝕋)`, `k = C(n, 3)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BrauerClass {
    n: usize,
    m: Vec<i64>,
    theta: PhaseMatrix,
}

impl BrauerClass {
    pub fn new(m: Vec<i64>, theta: PhaseMatrix) -> Result<Self> {
        let n = theta.n();
        if m.len() != binomial(n, 3) {
            return Err(Error::CoefficientLength { expected: binomial(n, 3), found: m.len() });
        }
        if !theta.is_antisymmetric(FLOAT_TOL) {
            return Err(Error::NotAntisymmetric(theta.to_json().to_string()));
        }
        Ok(Self { n, m, theta })
    }

    pub fn zero(n: usize, mode: Mode) -> Self {
        Self { n, m: vec![0; binomial(n, 3)], theta: PhaseMatrix::zero(n, mode) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> &[i64] {
        &self.m
    }

    pub fn theta(&self) -> &PhaseMatrix {
        &self.theta
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.m == other.m && self.theta.approx_eq(&other.theta, tol)
    }

    pub fn to_json(&self) -> Value {
        json!({"n": self.n, "m": self.m, "theta": self.theta.to_json()})
    }

    pub fn from_json(v: &Value, mode: Mode) -> Result<Self> {
        let theta = PhaseMatrix::from_json(
            v.get("theta").ok_or_else(|| Error::Schema("missing field `theta`".into()))?,
            mode,
        )?;
        let m = v
            .get("m")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Schema("`m` must be an array of integers".into()))?
            .iter()
            .map(|x| x.as_i64().ok_or_else(|| Error::Schema("`m` entries must be integers".into())))
            .collect::<Result<Vec<_>>>()?;
        if let Some(n) = v.get("n") {
            if n.as_u64() != Some(theta.n() as u64) {
                return Err(Error::Schema("`n` disagrees with `theta`".into()));
            }
        }
        Self::new(m, theta)
    }
}

pub fn classify(a: &FiberAction) -> Result<BrauerClass> {
    if !a.u.is_integral() {
        return Err(Error::NonIntegralTricharacter(a.u.to_json().to_string()));
    }
    let m = a
        .u
        .coefficients()
        .coeffs()
        .iter()
        .map(|c| {
            use num_traits::ToPrimitive;
            c.to_i64().ok_or_else(|| Error::Schema("coefficient exceeds i64".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    BrauerClass::new(m, commutator_pairing(&a.omega)?)
}

pub fn brauer_mul(x: &BrauerClass, y: &BrauerClass) -> Result<BrauerClass> {
    if x.n != y.n {
        return Err(Error::DimensionMismatch { left: x.n, right: y.n });
    }
    let m = x.m.iter().zip(&y.m).map(|(a, b)| a + b).collect();
    BrauerClass::new(m, x.theta.try_add(&y.theta)?)
}

pub fn brauer_inv(x: &BrauerClass) -> BrauerClass {
    BrauerClass { n: x.n, m: x.m.iter().map(|a| -a).collect(), theta: x.theta.neg() }
}

/// Pullback along the inclusion of the coordinate 3-torus `(i, j, k)` (0-based, increasing).
pub fn restrict_subtorus(x: &BrauerClass, idx: [usize; 3]) -> Result<BrauerClass> {
    if !(idx[0] < idx[1] && idx[1] < idx[2] && idx[2] < x.n) {
        return Err(Error::InvalidIndex(format!("{idx:?} is not an increasing triple below {}", x.n)));
    }
    let m = vec![x.m[basis_rank(x.n, &idx)]];
    BrauerClass::new(m, x.theta.restrict(&idx)?)
}

/// The `H³(𝕋ⁿ, ℤ)` component in `Λ³ℤⁿ`-dual coordinates.
pub fn dd_class(x: &BrauerClass) -> DualVector<crate::scalar::Rational> {
    DualVector::new(x.n, 3, x.m.iter().map(|&v| int(v)).collect()).expect("length checked")
}

pub fn mackey(x: &BrauerClass) -> PhaseMatrix {
    x.theta.clone()
}

/// The canonical action with associator character `m` and pairing `theta`.
pub fn action_from_obstruction(m: &[i64], theta: &PhaseMatrix) -> Result<FiberAction> {
    let n = theta.n();
    FiberAction::new(standard_cocycle(theta)?, Tricharacter::from_ints(n, m)?)
}

/// Assembles the lifting obstruction at each orbit from Dixmier-Douady values on
/// coordinate 3-subtori (0-based triples). Unlisted subtori contribute 0.
pub fn assemble_obstruction(
    n: usize,
    points: &BTreeMap<String, Vec<([usize; 3], i64)>>,
) -> Result<ObstructionFunction> {
    let mut out = BTreeMap::new();
    for (name, values) in points {
        let mut m = vec![0i64; binomial(n, 3)];
        let mut seen = vec![false; m.len()];
        for &(idx, dd) in values {
            if !(idx[0] < idx[1] && idx[1] < idx[2] && idx[2] < n) {
                return Err(Error::InvalidIndex(format!("{idx:?} is not an increasing triple below {n}")));
            }
            let r = basis_rank(n, &idx);
            if seen[r] && m[r] != dd {
                return Err(Error::Schema(format!("conflicting values for subtorus {idx:?} at `{name}`")));
            }
            seen[r] = true;
            m[r] = dd;
        }
        out.insert(name.clone(), DualVector::from_ints(n, 3, &m)?);
    }
    ObstructionFunction::new(n, 3, out)
}

/// Per-orbit liftability: the action lifts to `ℝⁿ` at an orbit iff the obstruction vanishes there.
pub fn liftable(chi: &ObstructionFunction) -> BTreeMap<String, bool> {
    chi.points().iter().map(|(k, d)| (k.clone(), d.is_zero())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::{coboundary1, BoxFunction};

    fn theta(n: usize, upper: &[(i64, i64)]) -> PhaseMatrix {
        let p: Vec<Phase> = upper.iter().map(|&(a, b)| Phase::ratio(a, b)).collect();
        PhaseMatrix::antisymmetric_from_upper(n, &p, Mode::Exact).unwrap()
    }

    #[test]
    fn trivial_action_validates_and_classifies_to_zero() {
        let a = FiberAction::trivial(3, Mode::Exact);
        assert!(validate_fiber_action(&a, 2, 0.0).passed());
        assert_eq!(classify(&a).unwrap(), BrauerClass::zero(3, Mode::Exact));
    }

    #[test]
    fn unnormalized_table_fails_normalization() {
        let dom = LatticeBox::new(2, 1);
        let omega = Cocycle2::table_from_fn(dom, Mode::Exact, |k, l| {
            if k == [0, 0] && l == [1, 0] {
                Phase::ratio(1, 4)
            } else {
                Phase::zero(Mode::Exact)
            }
        })
        .unwrap();
        let a = FiberAction::new(omega, Tricharacter::trivial(2)).unwrap();
        let r = validate_fiber_action(&a, 1, 0.0);
        assert!(!r.law("normalization").unwrap().passed());
    }

    #[test]
    fn generator_class() {
        let u = Tricharacter::from_ints(3, &[1]).unwrap();
        let a = FiberAction::new(Cocycle2::trivial(3, Mode::Exact), u).unwrap();
        let c = classify(&a).unwrap();
        assert_eq!(c.m(), &[1]);
        assert!(c.theta().is_zero(0.0));
        assert_eq!(dd_class(&c).coeffs(), &[int(1)]);
    }

    #[test]
    fn standard_pairing_class() {
        let a = action_from_obstruction(&[0], &theta(3, &[(1, 3), (0, 1), (0, 1)])).unwrap();
        let c = classify(&a).unwrap();
        assert_eq!(c.theta().get(0, 1), &Phase::ratio(1, 3));
    }

    #[test]
    fn half_tricharacter_is_rejected() {
        let u = Tricharacter::new(DualVector::new(3, 3, vec![crate::scalar::rat(1, 2)]).unwrap()).unwrap();
        let a = FiberAction::new(Cocycle2::trivial(3, Mode::Exact), u).unwrap();
        assert!(matches!(classify(&a), Err(Error::NonIntegralTricharacter(_))));
        let r = validate_fiber_action(&a, 1, 0.0);
        assert!(!r.law("twisted-cocycle").unwrap().passed());
        assert!(!r.law("tricharacter-integral").unwrap().passed());
    }

    #[test]
    fn group_law() {
        let x = BrauerClass::new(vec![1], PhaseMatrix::zero(3, Mode::Exact)).unwrap();
        let y = BrauerClass::new(vec![2], PhaseMatrix::zero(3, Mode::Exact)).unwrap();
        assert_eq!(brauer_mul(&x, &y).unwrap().m(), &[3]);
        assert_eq!(brauer_mul(&x, &brauer_inv(&x)).unwrap(), BrauerClass::zero(3, Mode::Exact));
    }

    #[test]
    fn restriction_extracts_component() {
        let t = theta(4, &[(1, 2), (1, 3), (1, 5), (1, 7), (1, 11), (1, 13)]);
        let x = BrauerClass::new(vec![1, 0, 2, 0], t).unwrap();
        let r = restrict_subtorus(&x, [0, 2, 3]).unwrap();
        assert_eq!(r.m(), &[2]);
        assert_eq!(r.theta().get(0, 1), &Phase::ratio(1, 3));
        assert!(restrict_subtorus(&x, [2, 1, 3]).is_err());
        assert!(restrict_subtorus(&x, [1, 2, 4]).is_err());
    }

    #[test]
    fn coboundary_twist_keeps_class() {
        let a = action_from_obstruction(&[2], &theta(3, &[(1, 4), (2, 3), (1, 6)])).unwrap();
        let v = BoxFunction::from_fn(LatticeBox::new(3, 2), Mode::Exact, |k| {
            if k.iter().all(|&x| x == 0) {
                Phase::zero(Mode::Exact)
            } else {
                Phase::ratio(k[0] * k[0] + 3 * k[1] - k[1] * k[2], 7)
            }
        })
        .unwrap();
        let twisted = FiberAction::new(a.omega.mul(&coboundary1(&v, 1).unwrap()).unwrap(), a.u.clone()).unwrap();
        assert!(validate_fiber_action(&twisted, 1, 0.0).passed());
        assert_eq!(classify(&twisted).unwrap(), classify(&a).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let x = BrauerClass::new(vec![1, 0, 2, 0], theta(4, &[(1, 2), (0, 1), (0, 1), (0, 1), (0, 1), (1, 3)])).unwrap();
        assert_eq!(BrauerClass::from_json(&x.to_json(), Mode::Exact).unwrap(), x);
        let a = action_from_obstruction(x.m(), x.theta()).unwrap();
        assert_eq!(FiberAction::from_json(&a.to_json(), Mode::Exact).unwrap(), a);
    }

    #[test]
    fn obstruction_assembly() {
        let mut pts = BTreeMap::new();
        pts.insert("p".to_string(), vec![([0, 2, 3], 1)]);
        pts.insert("q".to_string(), vec![]);
        let chi = assemble_obstruction(4, &pts).unwrap();
        assert_eq!(chi.value("p").unwrap(), &DualVector::from_ints(4, 3, &[0, 0, 1, 0]).unwrap());
        let v = liftable(&chi);
        assert!(!v["p"] && v["q"]);
        pts.insert("r".to_string(), vec![([0, 1, 2], 1), ([0, 1, 2], 2)]);
        assert!(assemble_obstruction(4, &pts).is_err());
    }
}
