//! The induced projective representation on the periodic model
//! `ℓ²((ℤ/N)ⁿ × (Λ²ℤⁿ)/N)` with `η = j/N`.
//!
//! Every operator is monomial: `(A f)(x) = ζ^{e(x)} f(σ(x))` with `ζ = exp(2πi/N)`.

use rand::Rng;
use serde_json::json;

use super::FiberAction;
use crate::cohomology::{Cocycle2, Mode};
use crate::error::{Error, Result};
use crate::exterior::binomial;
use crate::report::{CheckReport, LawReport};
use crate::sampling;

/// Largest model dimension accepted.
pub const MAX_DIM: usize = 1 << 22;

/// `(A f)(x) = ζ^{exps[x]} f(perm[x])` with `ζ = exp(2πi/period)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialOperator {
    period: u32,
    perm: Vec<usize>,
    exps: Vec<u32>,
}

impl MonomialOperator {
    pub fn new(period: u32, perm: Vec<usize>, exps: Vec<u32>) -> Result<Self> {
        if perm.len() != exps.len() {
            return Err(Error::DimensionMismatch { left: perm.len(), right: exps.len() });
        }
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::Schema("monomial operator needs a permutation".into()));
            }
        }
        Ok(Self { period, perm, exps: exps.into_iter().map(|e| e % period).collect() })
    }

    pub fn identity(period: u32, dim: usize) -> Self {
        Self { period, perm: (0..dim).collect(), exps: vec![0; dim] }
    }

    /// `(Z f)(k) = ζ^k f(k)` on `ℓ²(ℤ/N)`.
    pub fn clock(period: u32) -> Self {
        Self { period, perm: (0..period as usize).collect(), exps: (0..period).collect() }
    }

    /// `(X f)(k) = f(k + 1)` on `ℓ²(ℤ/N)`.
    pub fn shift(period: u32) -> Self {
        let n = period as usize;
        Self { period, perm: (0..n).map(|k| (k + 1) % n).collect(), exps: vec![0; n] }
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn period(&self) -> u32 {
        self.period
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "operator dimensions");
        assert_eq!(self.period, other.period, "operator periods");
        let (perm, exps) = self
            .perm
            .iter()
            .zip(&self.exps)
            .map(|(&p, &e)| (other.perm[p], (e + other.exps[p]) % self.period))
            .unzip();
        Self { period: self.period, perm, exps }
    }

    pub fn scaled(&self, exp: u32) -> Self {
        Self {
            period: self.period,
            perm: self.perm.clone(),
            exps: self.exps.iter().map(|e| (e + exp) % self.period).collect(),
        }
    }

    /// `c` with `self = ζ^c · other`, if the two differ by a scalar.
    pub fn scalar_ratio(&self, other: &Self) -> Option<u32> {
        if self.perm != other.perm || self.period != other.period {
            return None;
        }
        let n = self.period;
        let c = (self.exps.first()? + n - other.exps[0]) % n;
        self.exps.iter().zip(&other.exps).all(|(a, b)| (a + n - b) % n == c).then_some(c)
    }

    /// Operator-norm distance to `other`; `2` when the supports differ.
    pub fn distance(&self, other: &Self) -> f64 {
        if self.perm != other.perm {
            return 2.0;
        }
        let n = self.period;
        self.exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| {
                let d = (a + n - b) % n;
                2.0 * (std::f64::consts::PI * d as f64 / n as f64).sin().abs()
            })
            .fold(0.0, f64::max)
    }

    /// `c` with `self·other = ζ^c · other·self`.
    pub fn commutation_phase(&self, other: &Self) -> Option<u32> {
        self.compose(other).scalar_ratio(&other.compose(self))
    }
}

/// An arrow `(l, z/N)` of the lifted group: `l ∈ ℤⁿ`, `z ∈ Λ²ℤⁿ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeArrow {
    pub l: Vec<i64>,
    pub z: Vec<i64>,
}

/// A bigon `(t/N, x/N)`: `t ∈ Λ²ℤⁿ`, `x ∈ Λ³ℤⁿ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBigon {
    pub t: Vec<i64>,
    pub x: Vec<i64>,
}

fn wedge11(k: &[i64], l: &[i64]) -> Vec<i64> {
    let n = k.len();
    let mut out = Vec::with_capacity(binomial(n, 2));
    for a in 0..n {
        for b in a + 1..n {
            out.push(k[a] * l[b] - k[b] * l[a]);
        }
    }
    out
}

fn wedge12(n: usize, k: &[i64], z: &[i64]) -> Vec<i64> {
    let pair = |a: usize, b: usize| z[crate::exterior::basis_rank(n, &[a, b])];
    let mut out = Vec::with_capacity(binomial(n, 3));
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                out.push(k[a] * pair(b, c) - k[b] * pair(a, c) + k[c] * pair(a, b));
            }
        }
    }
    out
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// The representation data `W(g)`, `u(h)` of a fiber action with period `N`.
#[derive(Clone, Debug)]
pub struct InducedRep {
    n: usize,
    period: u32,
    /// `N·Θ̂`, integral.
    theta_hat: Vec<Vec<i64>>,
    /// Associator character coefficients, integral.
    c: Vec<i64>,
    dim: usize,
}

/// Builds the model. Requires a standard-form cocycle with `Θ̂ ∈ (1/N)ℤ` and an
/// integral associator character.
pub fn induced_rep(a: &FiberAction, period: u32) -> Result<InducedRep> {
    let n = a.n();
    if period < 2 {
        return Err(Error::PeriodIncompatible { period, reason: "period must be at least 2".into() });
    }
    let Cocycle2::Standard { theta_hat } = &a.omega else {
        return Err(Error::Schema("the induced model needs a standard-form cocycle".into()));
    };
    if theta_hat.mode() != Mode::Exact {
        return Err(Error::ModeMix("the induced model needs exact phases".into()));
    }
    let mut scaled = vec![vec![0i64; n]; n];
    for (i, row) in scaled.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            let p = theta_hat.get(i, j);
            let crate::cohomology::Phase::Exact(r) = p else { unreachable!() };
            let v = r * crate::scalar::int(period as i64);
            if !v.is_integer() {
                return Err(Error::PeriodIncompatible {
                    period,
                    reason: format!("theta_hat[{i}][{j}] = {r} is not in (1/N)Z"),
                });
            }
            *slot = num_traits::ToPrimitive::to_i64(&v).expect("small entry");
        }
    }
    if !a.u.is_integral() {
        return Err(Error::NonIntegralTricharacter(a.u.to_json().to_string()));
    }
    let c = a
        .u
        .coefficients()
        .coeffs()
        .iter()
        .map(|x| num_traits::ToPrimitive::to_i64(x).expect("small coefficient"))
        .collect();
    let ell = binomial(n, 2);
    let dim = (period as usize)
        .checked_pow((n + ell) as u32)
        .filter(|&d| d <= MAX_DIM)
        .ok_or_else(|| Error::PeriodIncompatible {
            period,
            reason: format!("model dimension N^{} exceeds {MAX_DIM}", n + ell),
        })?;
    Ok(InducedRep { n, period, theta_hat: scaled, c, dim })
}

impl InducedRep {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn period(&self) -> u32 {
        self.period
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn modn(&self, v: i64) -> u32 {
        v.rem_euclid(self.period as i64) as u32
    }

    /// Coordinates `(k, j)` of a basis point, each entry in `[0, N)`.
    fn coords(&self, mut x: usize) -> Vec<i64> {
        let len = self.n + binomial(self.n, 2);
        let mut out = vec![0; len];
        for slot in out.iter_mut().rev() {
            *slot = (x % self.period as usize) as i64;
            x /= self.period as usize;
        }
        out
    }

    fn index(&self, coords: &[i64]) -> usize {
        coords.iter().fold(0, |acc, &v| acc * self.period as usize + self.modn(v) as usize)
    }

    /// Exponent of `ω(k, l) = exp(2πi kᵀΘ̂l)`.
    fn omega_exp(&self, k: &[i64], l: &[i64]) -> i64 {
        let mut acc = 0;
        for i in 0..self.n {
            for j in i + 1..self.n {
                acc += k[i] * self.theta_hat[i][j] * l[j];
            }
        }
        acc
    }

    /// Exponent of `U(k ∧ z/N)`.
    fn u_exp(&self, k: &[i64], z: &[i64]) -> i64 {
        dot(&self.c, &wedge12(self.n, k, z))
    }

    /// Exponent of `ω′((l₁, z₁/N), (l₂, z₂/N)) = U(l₁∧z₂/N)·ω(l₁, l₂)`.
    pub fn omega_prime(&self, g: &LatticeArrow, h: &LatticeArrow) -> u32 {
        self.modn(self.u_exp(&g.l, &h.z) + self.omega_exp(&g.l, &h.l))
    }

    pub fn arrow_mul(&self, g: &LatticeArrow, h: &LatticeArrow) -> LatticeArrow {
        let lw = wedge11(&g.l, &h.l);
        let p = self.period as i64;
        LatticeArrow {
            l: g.l.iter().zip(&h.l).map(|(a, b)| a + b).collect(),
            z: g.z.iter().zip(&h.z).zip(lw).map(|((a, b), w)| a + b + p * w).collect(),
        }
    }

    pub fn boundary(&self, h: &LatticeBigon) -> LatticeArrow {
        LatticeArrow { l: vec![0; self.n], z: h.t.clone() }
    }

    /// `c_{(l, ζ)}(θ, ξ) = (θ, ξ + l∧θ)`.
    pub fn conj(&self, g: &LatticeArrow, h: &LatticeBigon) -> LatticeBigon {
        let lw = wedge12(self.n, &g.l, &h.t);
        LatticeBigon { t: h.t.clone(), x: h.x.iter().zip(lw).map(|(a, b)| a + b).collect() }
    }

    /// `W(g) f(x) = ω′(x, g) f(x g)`.
    pub fn w(&self, g: &LatticeArrow) -> MonomialOperator {
        let n = self.n;
        let (perm, exps) = (0..self.dim)
            .map(|x| {
                let xc = self.coords(x);
                let (k, j) = xc.split_at(n);
                // η + ζ + k∧l, with k∧l ∈ Λ²ℤⁿ absorbed by the lattice.
                let mut next: Vec<i64> = k.iter().zip(&g.l).map(|(a, b)| a + b).collect();
                next.extend(j.iter().zip(&g.z).map(|(a, b)| a + b));
                let e = self.u_exp(k, &g.z) + self.omega_exp(k, &g.l);
                (self.index(&next), self.modn(e))
            })
            .unzip();
        MonomialOperator { period: self.period, perm, exps }
    }

    /// `u(θ, ξ) f(k, η) = U(ξ + k∧θ) f(k, η + θ)`.
    pub fn u(&self, h: &LatticeBigon) -> MonomialOperator {
        let n = self.n;
        let base = dot(&self.c, &h.x);
        let (perm, exps) = (0..self.dim)
            .map(|x| {
                let xc = self.coords(x);
                let (k, j) = xc.split_at(n);
                let mut next = k.to_vec();
                next.extend(j.iter().zip(&h.t).map(|(a, b)| a + b));
                (self.index(&next), self.modn(base + self.u_exp(k, &h.t)))
            })
            .unzip();
        MonomialOperator { period: self.period, perm, exps }
    }

    /// The arrows `(e_i, 0)` followed by `(0, e_a∧e_b / N)`.
    pub fn arrow_generators(&self) -> Vec<LatticeArrow> {
        let ell = binomial(self.n, 2);
        let mut out = Vec::new();
        for i in 0..self.n {
            let mut l = vec![0; self.n];
            l[i] = 1;
            out.push(LatticeArrow { l, z: vec![0; ell] });
        }
        for a in 0..ell {
            let mut z = vec![0; ell];
            z[a] = 1;
            out.push(LatticeArrow { l: vec![0; self.n], z });
        }
        out
    }

    pub fn bigon_generators(&self) -> Vec<LatticeBigon> {
        let (ell, kk) = (binomial(self.n, 2), binomial(self.n, 3));
        let mut out = Vec::new();
        for a in 0..ell {
            let mut t = vec![0; ell];
            t[a] = 1;
            out.push(LatticeBigon { t, x: vec![0; kk] });
        }
        for a in 0..kk {
            let mut x = vec![0; kk];
            x[a] = 1;
            out.push(LatticeBigon { t: vec![0; ell], x });
        }
        out
    }

    fn random_arrow<R: Rng>(&self, rng: &mut R) -> LatticeArrow {
        let p = self.period as i64;
        LatticeArrow {
            l: sampling::int_vector(rng, self.n, p),
            z: sampling::int_vector(rng, binomial(self.n, 2), p),
        }
    }

    fn random_bigon<R: Rng>(&self, rng: &mut R) -> LatticeBigon {
        let p = self.period as i64;
        LatticeBigon {
            t: sampling::int_vector(rng, binomial(self.n, 2), p),
            x: sampling::int_vector(rng, binomial(self.n, 3), p),
        }
    }

    /// Verifies on all generator pairs and `samples` random pairs:
    /// `W(g)W(h) = ω′(g,h) W(gh)`, `u(h)u(k) = u(hk)`,
    /// `W(g)u(h) = u(c_g h)W(g)` and `u(h) = U(ξ)·W(∂h)`.
    pub fn check_relations(&self, samples: usize, seed: u64) -> CheckReport {
        let mut rng = sampling::rng(seed);
        let mut arrows = self.arrow_generators();
        let mut bigons = self.bigon_generators();
        let mut arrow_pairs: Vec<(LatticeArrow, LatticeArrow)> = Vec::new();
        for g in &arrows {
            for h in &arrows {
                arrow_pairs.push((g.clone(), h.clone()));
            }
        }
        let mut bigon_pairs: Vec<(LatticeBigon, LatticeBigon)> = Vec::new();
        for g in &bigons {
            for h in &bigons {
                bigon_pairs.push((g.clone(), h.clone()));
            }
        }
        for _ in 0..samples {
            arrow_pairs.push((self.random_arrow(&mut rng), self.random_arrow(&mut rng)));
            bigon_pairs.push((self.random_bigon(&mut rng), self.random_bigon(&mut rng)));
            arrows.push(self.random_arrow(&mut rng));
            bigons.push(self.random_bigon(&mut rng));
        }

        let mut projective = LawReport::new("projective-relation");
        for (g, h) in &arrow_pairs {
            let lhs = self.w(g).compose(&self.w(h));
            let rhs = self.w(&self.arrow_mul(g, h)).scaled(self.omega_prime(g, h));
            projective.record(lhs.distance(&rhs), 0.0, || json!({"g": [g.l, g.z], "h": [h.l, h.z]}));
        }

        let mut hom = LawReport::new("bigon-homomorphism");
        for (h, k) in &bigon_pairs {
            let lhs = self.u(h).compose(&self.u(k));
            let sum = LatticeBigon {
                t: h.t.iter().zip(&k.t).map(|(a, b)| a + b).collect(),
                x: h.x.iter().zip(&k.x).map(|(a, b)| a + b).collect(),
            };
            hom.record(lhs.distance(&self.u(&sum)), 0.0, || json!({"h": [h.t, h.x], "k": [k.t, k.x]}));
        }

        let mut covariance = LawReport::new("covariance");
        let mut boundary = LawReport::new("boundary-proportional");
        for (g, h) in arrows.iter().zip(bigons.iter().cycle()) {
            let w = self.w(g);
            let lhs = w.compose(&self.u(h));
            let rhs = self.u(&self.conj(g, h)).compose(&w);
            covariance.record(lhs.distance(&rhs), 0.0, || json!({"g": [g.l, g.z], "h": [h.t, h.x]}));
        }
        for h in &bigons {
            let lhs = self.u(h);
            let rhs = self.w(&self.boundary(h)).scaled(self.modn(dot(&self.c, &h.x)));
            boundary.record(lhs.distance(&rhs), 0.0, || json!({"h": [h.t, h.x]}));
        }

        let mut report = CheckReport::default()
            .convention("period", self.period.to_string())
            .convention("dimension", self.dim.to_string());
        for law in [projective, hom, covariance, boundary] {
            report.push(law);
        }
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brauer::action_from_obstruction;
    use crate::cohomology::{Phase, PhaseMatrix};

    fn action(n: usize, m: &[i64], upper: &[Phase]) -> FiberAction {
        let theta = PhaseMatrix::antisymmetric_from_upper(n, upper, Mode::Exact).unwrap();
        action_from_obstruction(m, &theta).unwrap()
    }

    #[test]
    fn clock_shift_relation() {
        for n in [3, 4, 5] {
            let (z, x) = (MonomialOperator::clock(n), MonomialOperator::shift(n));
            // X Z = ζ Z X
            assert_eq!(x.commutation_phase(&z), Some(1));
        }
    }

    #[test]
    fn trivial_action_has_no_phases() {
        let rep = induced_rep(&FiberAction::trivial(2, Mode::Exact), 3).unwrap();
        for g in rep.arrow_generators() {
            assert!(rep.w(&g).exps().iter().all(|&e| e == 0));
        }
        assert!(rep.check_relations(5, 1).passed());
    }

    #[test]
    fn two_torus_commutation() {
        for n in [3u32, 4, 5] {
            let a = action(2, &[], &[Phase::ratio(1, n as i64)]);
            let rep = induced_rep(&a, n).unwrap();
            let gens = rep.arrow_generators();
            let (w1, w2) = (rep.w(&gens[0]), rep.w(&gens[1]));
            assert_eq!(w1.commutation_phase(&w2), Some(1));
            assert!(rep.check_relations(10, 2).passed());
        }
    }

    #[test]
    fn three_torus_generator() {
        let a = action(3, &[1], &vec![Phase::zero(Mode::Exact); 3]);
        let rep = induced_rep(&a, 4).unwrap();
        assert_eq!(rep.dim(), 4096);
        assert!(rep.check_relations(5, 3).passed());
    }

    #[test]
    fn incompatible_period_rejected() {
        let a = action(2, &[], &[Phase::ratio(1, 3)]);
        assert!(matches!(induced_rep(&a, 4), Err(Error::PeriodIncompatible { .. })));
    }
}
