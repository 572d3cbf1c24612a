//! Strict actions `(ᾱ, ū)` on a matrix algebra `M_d`: `ᾱ_s = Ad(A_s)` for a
//! finite sample group `S = (ℤ/N)ⁿ`, and unitaries `ū` on `Λ²ℤⁿ mod N`.

use std::collections::BTreeMap;

use rand::Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exterior::binomial;
use crate::report::{CheckReport, LawReport};
use crate::ring::CoefficientRing;
use crate::sampling;

/// Tuple count above which the checker samples instead of enumerating.
pub const EXHAUSTIVE_LIMIT: usize = 100_000;

/// A square matrix over a coefficient ring, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix<E> {
    d: usize,
    entries: Vec<E>,
}

impl<E: Clone> CMatrix<E> {
    pub fn new(d: usize, entries: Vec<E>) -> Result<Self> {
        if entries.len() != d * d {
            return Err(Error::CoefficientLength { expected: d * d, found: entries.len() });
        }
        Ok(Self { d, entries })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.entries[i * self.d + j]
    }

    pub fn identity<R: CoefficientRing<Elem = E>>(ring: &R, d: usize) -> Self {
        let entries = (0..d * d).map(|x| if x % (d + 1) == 0 { ring.one() } else { ring.zero() }).collect();
        Self { d, entries }
    }

    /// `Σ_k ζ^{phase(i)} [perm(i) = j]`-style monomial matrix: row `i` has `ζ^{exps[i]}` in column `perm[i]`.
    pub fn monomial<R: CoefficientRing<Elem = E>>(ring: &R, perm: &[usize], exps: &[u32]) -> Self {
        let d = perm.len();
        let mut entries = vec![ring.zero(); d * d];
        for (i, (&p, &e)) in perm.iter().zip(exps).enumerate() {
            entries[i * d + p] = ring.root(e);
        }
        Self { d, entries }
    }

    pub fn mul<R: CoefficientRing<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        let d = self.d;
        let mut entries = vec![ring.zero(); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if ring.is_zero(a) {
                    continue;
                }
                for j in 0..d {
                    let b = other.get(k, j);
                    if !ring.is_zero(b) {
                        ring.mul_add_root(&mut entries[i * d + j], a, b, 0);
                    }
                }
            }
        }
        Self { d, entries }
    }

    pub fn adjoint<R: CoefficientRing<Elem = E>>(&self, ring: &R) -> Self {
        let d = self.d;
        let entries = (0..d * d).map(|x| ring.conj(self.get(x % d, x / d))).collect();
        Self { d, entries }
    }

    pub fn residual<R: CoefficientRing<Elem = E>>(&self, ring: &R, other: &Self) -> f64 {
        self.entries.iter().zip(&other.entries).map(|(a, b)| ring.residual(a, b)).fold(0.0, f64::max)
    }

    /// Zero iff `self = λ·other` for a nonzero scalar `λ`, tested by
    /// cross-multiplication against the largest entry of `other`.
    pub fn proportional_residual<R: CoefficientRing<Elem = E>>(&self, ring: &R, other: &Self) -> f64 {
        let Some(p) = (0..other.entries.len()).max_by(|&a, &b| {
            let (x, y) = (ring.to_complex(&other.entries[a]).norm(), ring.to_complex(&other.entries[b]).norm());
            x.total_cmp(&y).then(b.cmp(&a))
        }) else {
            return 0.0;
        };
        let (bp, ap) = (&other.entries[p], &self.entries[p]);
        if ring.is_zero(bp) || ring.is_zero(ap) {
            return if self.residual(ring, other) == 0.0 { 0.0 } else { f64::INFINITY };
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| ring.residual(&ring.mul(a, bp), &ring.mul(b, ap)))
            .fold(0.0, f64::max)
    }

    pub fn to_json<R: CoefficientRing<Elem = E>>(&self, ring: &R) -> Value {
        Value::Array(
            (0..self.d)
                .map(|i| Value::Array((0..self.d).map(|j| ring.to_json(self.get(i, j))).collect()))
                .collect(),
        )
    }

    pub fn from_json<R: CoefficientRing<Elem = E>>(ring: &R, v: &Value) -> Result<Self> {
        let rows = v.as_array().ok_or_else(|| Error::Schema("matrix must be an array of rows".into()))?;
        let d = rows.len();
        let mut entries = Vec::with_capacity(d * d);
        for r in rows {
            let r = r.as_array().filter(|r| r.len() == d).ok_or_else(|| Error::Schema("matrix must be square".into()))?;
            for x in r {
                entries.push(ring.from_json(x)?);
            }
        }
        Self::new(d, entries)
    }
}

/// `ᾱ` as implementing unitaries `A_s` (up to phase) and `ū` as unitaries.
#[derive(Clone, Debug)]
pub struct StrictActionData<R: CoefficientRing> {
    ring: R,
    n: usize,
    d: usize,
    alpha: BTreeMap<Vec<i64>, CMatrix<R::Elem>>,
    u: BTreeMap<Vec<i64>, CMatrix<R::Elem>>,
}

impl<R: CoefficientRing> StrictActionData<R> {
    /// Keys are reduced mod `N`; every matrix must be `d × d`.
    pub fn new(
        ring: R,
        n: usize,
        alpha: Vec<(Vec<i64>, CMatrix<R::Elem>)>,
        u: Vec<(Vec<i64>, CMatrix<R::Elem>)>,
    ) -> Result<Self> {
        let d = alpha.first().map(|(_, m)| m.d()).ok_or_else(|| Error::Schema("`alpha` is empty".into()))?;
        let period = ring.period() as i64;
        let reduce = |k: Vec<i64>| k.into_iter().map(|x| x.rem_euclid(period)).collect::<Vec<_>>();
        let mut a = BTreeMap::new();
        for (s, m) in alpha {
            if s.len() != n {
                return Err(Error::DimensionMismatch { left: n, right: s.len() });
            }
            if m.d() != d {
                return Err(Error::DimensionMismatch { left: d, right: m.d() });
            }
            a.insert(reduce(s), m);
        }
        let mut b = BTreeMap::new();
        for (w, m) in u {
            if w.len() != binomial(n, 2) {
                return Err(Error::DimensionMismatch { left: binomial(n, 2), right: w.len() });
            }
            if m.d() != d {
                return Err(Error::DimensionMismatch { left: d, right: m.d() });
            }
            b.insert(reduce(w), m);
        }
        Ok(Self { ring, n, d, alpha: a, u: b })
    }

    /// `ᾱ_{(a,b)} = Ad(Xᵃ Zᵇ)` on `M_N` with `ū ≡ 1`.
    pub fn weyl(ring: R) -> Self {
        let period = ring.period();
        let d = period as usize;
        let mut alpha = Vec::new();
        for a in 0..period {
            for b in 0..period {
                // (Xᵃ Zᵇ f)(k) = ζ^{b(k+a)} f(k+a)
                let perm: Vec<usize> = (0..d).map(|k| (k + a as usize) % d).collect();
                let exps: Vec<u32> = (0..d).map(|k| (b * ((k as u32 + a) % period)) % period).collect();
                alpha.push((vec![a as i64, b as i64], CMatrix::monomial(&ring, &perm, &exps)));
            }
        }
        let mut u = Vec::new();
        for w in 0..period {
            u.push((vec![w as i64], CMatrix::identity(&ring, d)));
        }
        Self::new(ring, 2, alpha, u).expect("consistent shapes")
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn group(&self) -> Vec<Vec<i64>> {
        self.alpha.keys().cloned().collect()
    }

    pub fn u_mut(&mut self) -> &mut BTreeMap<Vec<i64>, CMatrix<R::Elem>> {
        &mut self.u
    }

    fn reduce(&self, k: &[i64]) -> Vec<i64> {
        let p = self.ring.period() as i64;
        k.iter().map(|x| x.rem_euclid(p)).collect()
    }

    fn alpha_at(&self, s: &[i64]) -> Result<&CMatrix<R::Elem>> {
        let key = self.reduce(s);
        self.alpha.get(&key).ok_or_else(|| Error::UnknownPoint(format!("alpha at {key:?}")))
    }

    fn u_at(&self, w: &[i64]) -> Result<&CMatrix<R::Elem>> {
        let key = self.reduce(w);
        self.u.get(&key).ok_or_else(|| Error::UnknownPoint(format!("u at {key:?}")))
    }

    /// `ᾱ_s(x) = A_s x A_s*`.
    fn apply(&self, s: &[i64], x: &CMatrix<R::Elem>) -> Result<CMatrix<R::Elem>> {
        let a = self.alpha_at(s)?;
        Ok(a.mul(&self.ring, x).mul(&self.ring, &a.adjoint(&self.ring)))
    }

    pub fn to_json(&self) -> Value {
        let entry = |(k, m): (&Vec<i64>, &CMatrix<R::Elem>)| json!({"at": k, "matrix": m.to_json(&self.ring)});
        json!({
            "n": self.n,
            "period": self.ring.period(),
            "alpha": self.alpha.iter().map(entry).collect::<Vec<_>>(),
            "u": self.u.iter().map(entry).collect::<Vec<_>>(),
        })
    }

    /// Reads `{"n", "period", "alpha": [{"at", "matrix"}], "u": [{"at", "matrix"}]}`;
    /// the ring must already carry the period.
    pub fn from_json(ring: R, v: &Value) -> Result<Self> {
        let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| Error::Schema("missing `n`".into()))? as usize;
        if let Some(p) = v.get("period") {
            if p.as_u64() != Some(ring.period() as u64) {
                return Err(Error::Schema("`period` disagrees with the ring".into()));
            }
        }
        let table = |key: &str| -> Result<Vec<(Vec<i64>, CMatrix<R::Elem>)>> {
            v.get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Schema(format!("`{key}` must be an array")))?
                .iter()
                .map(|e| {
                    let at = e
                        .get("at")
                        .and_then(Value::as_array)
                        .ok_or_else(|| Error::Schema("entry needs `at`".into()))?
                        .iter()
                        .map(|x| x.as_i64().ok_or_else(|| Error::Schema("`at` must hold integers".into())))
                        .collect::<Result<Vec<_>>>()?;
                    let m = CMatrix::from_json(&ring, e.get("matrix").ok_or_else(|| Error::Schema("entry needs `matrix`".into()))?)?;
                    Ok((at, m))
                })
                .collect()
        };
        let (alpha, u) = (table("alpha")?, table("u")?);
        Self::new(ring.clone(), n, alpha, u)
    }
}

fn wedge(s: &[i64], t: &[i64]) -> Vec<i64> {
    let n = s.len();
    let mut out = Vec::with_capacity(binomial(n, 2));
    for a in 0..n {
        for b in a + 1..n {
            out.push(s[a] * t[b] - s[b] * t[a]);
        }
    }
    out
}

/// Verifies, on sampled `(s, t, v, w)`:
/// 1. `ᾱ_s ᾱ_t = Ad ū(s∧t) ᾱ_{s+t}` (as conjugations, so up to phase);
/// 2. `ū(a)ū(b) = ū(a+b)` for sampled wedges `a, b`;
/// 3. `z = ᾱ_s(ū(t∧v)) ū(t∧v)*` is central and `ᾱ_w`-fixed;
/// 4. `ᾱ_s(ū(t∧v)) ū(t∧v)* = ū(s∧v) ᾱ_t(ū(s∧v))*`.
///
/// Enumerates all tuples when there are at most [`EXHAUSTIVE_LIMIT`], otherwise
/// draws `samples` seeded tuples.
pub fn check_strict_action<R: CoefficientRing>(
    data: &StrictActionData<R>,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<CheckReport> {
    let ring = &data.ring;
    let tol = if ring.mode() == crate::cohomology::Mode::Exact { 0.0 } else { tol };
    let group = data.group();
    let tuples: Vec<[usize; 4]> = if group.len().pow(4) <= EXHAUSTIVE_LIMIT {
        let g = group.len();
        (0..g.pow(4)).map(|x| [x % g, (x / g) % g, (x / g / g) % g, x / g / g / g]).collect()
    } else {
        let mut rng = sampling::rng(seed);
        (0..samples)
            .map(|_| std::array::from_fn(|_| rng.gen_range(0..group.len())))
            .collect()
    };

    let mut unit = LawReport::new("alpha-unit");
    let mut twisted = LawReport::new("twisted-homomorphism");
    let mut hom = LawReport::new("u-homomorphism");
    let mut central = LawReport::new("central-fixed");
    let mut exchange = LawReport::new("exchange");

    let zero = vec![0; data.n];
    let id = CMatrix::identity(ring, data.d);
    unit.record(data.alpha_at(&zero)?.proportional_residual(ring, &id), tol, || json!({"s": zero}));

    let add = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>();
    for [i, j, k, l] in tuples {
        let (s, t, v, w) = (&group[i], &group[j], &group[k], &group[l]);
        let inputs = || json!({"s": s, "t": t, "v": v, "w": w});

        // Ad(A_s A_t) = Ad(ū(s∧t) A_{s+t})
        let lhs = data.alpha_at(s)?.mul(ring, data.alpha_at(t)?);
        let rhs = data.u_at(&wedge(s, t))?.mul(ring, data.alpha_at(&add(s, t))?);
        twisted.record(lhs.proportional_residual(ring, &rhs), tol, inputs);

        let (a, b) = (wedge(s, t), wedge(v, w));
        let lhs = data.u_at(&a)?.mul(ring, data.u_at(&b)?);
        hom.record(lhs.residual(ring, data.u_at(&add(&a, &b))?), tol, inputs);

        let utv = data.u_at(&wedge(t, v))?;
        let z = data.apply(s, utv)?.mul(ring, &utv.adjoint(ring));
        let scalar = z.proportional_residual(ring, &id);
        let fixed = data.apply(w, &z)?.residual(ring, &z);
        central.record(scalar.max(fixed), tol, inputs);

        let usv = data.u_at(&wedge(s, v))?;
        let rhs = usv.mul(ring, &data.apply(t, usv)?.adjoint(ring));
        exchange.record(z.residual(ring, &rhs), tol, inputs);
    }

    let mut report = CheckReport::default()
        .convention("comparison", "automorphisms compared as conjugations (phase-insensitive)")
        .convention("mode", ring.mode().to_string());
    for law in [unit, twisted, hom, central, exchange] {
        report.push(law);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{ExactRing, FloatRing};

    #[test]
    fn identity_action_passes() {
        let ring = ExactRing::new(3);
        let id = CMatrix::identity(&ring, 2);
        let alpha = (0..3).map(|a| (vec![a], id.clone())).collect();
        let data = StrictActionData::new(ring, 1, alpha, vec![(vec![], id)]).unwrap();
        assert!(check_strict_action(&data, 0, 0, 0.0).unwrap().passed());
    }

    #[test]
    fn weyl_pair_passes_exactly() {
        for n in [3, 4] {
            let data = StrictActionData::weyl(ExactRing::new(n));
            let r = check_strict_action(&data, 500, 1, 0.0).unwrap();
            assert!(r.passed(), "{}", r.to_json());
        }
        let data = StrictActionData::weyl(FloatRing::new(5, 1e-12));
        assert!(check_strict_action(&data, 500, 1, 1e-9).unwrap().passed());
    }

    #[test]
    fn non_homomorphic_u_fails() {
        let mut data = StrictActionData::weyl(ExactRing::new(3));
        let ring = data.ring().clone();
        let u = CMatrix::monomial(&ring, &[0, 1, 2], &[0, 1, 1]);
        data.u_mut().insert(vec![1], u);
        let r = check_strict_action(&data, 0, 0, 0.0).unwrap();
        assert!(!r.law("u-homomorphism").unwrap().passed());
    }

    #[test]
    fn json_round_trip() {
        let data = StrictActionData::weyl(ExactRing::new(3));
        let back = StrictActionData::from_json(ExactRing::new(3), &data.to_json()).unwrap();
        assert_eq!(back.to_json(), data.to_json());
    }
}
