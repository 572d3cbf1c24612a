//! The crossed module `ℋ = (ℝⁿ ⊕ Λ²ℝⁿ, Λ²ℝⁿ ⊕ Λ³ℝⁿ, ∂)`, the weak 2-group `𝒢`
//! with arrows `ℝⁿ` and bigons `ℝⁿ × Λ³ℝⁿ`, the equivalences `ι: 𝒢 → ℋ` and
//! `π: ℋ → 𝒢`, and the transformation `Φ` with `ι∘π = Ad Φ`.
//!
//! Conventions:
//! * `Φ(t, η) = (−η, 0)` is the bigon `(t, η) ⇒ (t, 0)`.
//! * The associator of `𝒢` is `a(t₁, t₂, t₃) = −t₁∧t₂∧t₃`.
//! * `ℝⁿ` acts trivially on `Λ³ℝⁿ`.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exterior::MultiVector;
use crate::report::{CheckReport, LawReport};
use crate::scalar::{max_abs, Rational, Scalar};

pub const PHI_ORIENTATION: &str = "Phi(t,eta) = (-eta,0) : (t,eta) => (t,0); fixed by iota.pi = Ad(Phi)";
pub const ASSOCIATOR_CONVENTION: &str = "a(t1,t2,t3) = (t1+t2+t3, -t1^t2^t3)";

fn expect_grade<T: Scalar>(x: &MultiVector<T>, grade: usize) -> Result<()> {
    if x.grade() != grade {
        return Err(Error::GradeMismatch { expected: grade, found: x.grade() });
    }
    Ok(())
}

fn same_n<T: Scalar>(a: &MultiVector<T>, b: &MultiVector<T>) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch { left: a.n(), right: b.n() });
    }
    Ok(())
}

/// An arrow `(t, η)` of `ℋ`.
#[derive(Clone, Debug, PartialEq)]
pub struct H1Element<T = Rational> {
    pub t: MultiVector<T>,
    pub eta: MultiVector<T>,
}

/// A bigon label `(θ, ξ)` of `ℋ`.
#[derive(Clone, Debug, PartialEq)]
pub struct H2Element<T = Rational> {
    pub theta: MultiVector<T>,
    pub xi: MultiVector<T>,
}

impl<T: Scalar> H1Element<T> {
    pub fn new(t: MultiVector<T>, eta: MultiVector<T>) -> Result<Self> {
        expect_grade(&t, 1)?;
        expect_grade(&eta, 2)?;
        same_n(&t, &eta)?;
        Ok(Self { t, eta })
    }

    pub fn identity(n: usize) -> Self {
        Self { t: MultiVector::zero(n, 1).unwrap(), eta: MultiVector::zero(n, 2).unwrap() }
    }

    pub fn n(&self) -> usize {
        self.t.n()
    }

    pub fn to_json(&self) -> Value {
        json!({"t": self.t.to_json(), "eta": self.eta.to_json()})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let get = |k: &str| {
            v.get(k).ok_or_else(|| Error::Schema(format!("H1 element missing `{k}`")))
        };
        Self::new(MultiVector::from_json(get("t")?)?, MultiVector::from_json(get("eta")?)?)
    }

    fn residual(&self, other: &Self) -> f64 {
        max_abs((&self.t - &other.t).coeffs()).max(max_abs((&self.eta - &other.eta).coeffs()))
    }
}

impl<T: Scalar> H2Element<T> {
    pub fn new(theta: MultiVector<T>, xi: MultiVector<T>) -> Result<Self> {
        expect_grade(&theta, 2)?;
        expect_grade(&xi, 3)?;
        same_n(&theta, &xi)?;
        Ok(Self { theta, xi })
    }

    pub fn identity(n: usize) -> Self {
        Self { theta: MultiVector::zero(n, 2).unwrap(), xi: MultiVector::zero(n, 3).unwrap() }
    }

    pub fn n(&self) -> usize {
        self.theta.n()
    }

    pub fn to_json(&self) -> Value {
        json!({"theta": self.theta.to_json(), "xi": self.xi.to_json()})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let get = |k: &str| {
            v.get(k).ok_or_else(|| Error::Schema(format!("H2 element missing `{k}`")))
        };
        Self::new(MultiVector::from_json(get("theta")?)?, MultiVector::from_json(get("xi")?)?)
    }

    fn residual(&self, other: &Self, quotient: Quotient) -> f64 {
        let dxi = &self.xi - &other.xi;
        max_abs((&self.theta - &other.theta).coeffs()).max(quotient.residual(&dxi))
    }
}

/// Whether `ξ` is taken in `Λ³ℝⁿ` or in `Λ³ℝⁿ / Λ³ℤⁿ`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Quotient {
    #[default]
    None,
    IntegralLattice,
}

impl Quotient {
    fn reduce<T: Scalar>(self, xi: MultiVector<T>) -> MultiVector<T> {
        match self {
            Quotient::None => xi,
            Quotient::IntegralLattice => xi.frac(),
        }
    }

    /// Size of a `Λ³` difference, measured modulo the lattice in quotient mode.
    fn residual<T: Scalar>(self, diff: &MultiVector<T>) -> f64 {
        match self {
            Quotient::None => max_abs(diff.coeffs()),
            Quotient::IntegralLattice => diff
                .coeffs()
                .iter()
                .map(|c| {
                    let f = c.frac().to_f64();
                    f.min(1.0 - f)
                })
                .fold(0.0, f64::max),
        }
    }
}

/// An endo-bigon `ξ: t ⇒ t` of `𝒢`. Source and range are both `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct GBigon<T = Rational> {
    t: MultiVector<T>,
    xi: MultiVector<T>,
    quotient: Quotient,
}

impl<T: Scalar> GBigon<T> {
    pub fn new(t: MultiVector<T>, xi: MultiVector<T>) -> Result<Self> {
        Self::with_quotient(t, xi, Quotient::None)
    }

    pub fn with_quotient(t: MultiVector<T>, xi: MultiVector<T>, quotient: Quotient) -> Result<Self> {
        expect_grade(&t, 1)?;
        expect_grade(&xi, 3)?;
        same_n(&t, &xi)?;
        Ok(Self { t, xi: quotient.reduce(xi), quotient })
    }

    pub fn t(&self) -> &MultiVector<T> {
        &self.t
    }

    pub fn xi(&self) -> &MultiVector<T> {
        &self.xi
    }

    pub fn quotient(&self) -> Quotient {
        self.quotient
    }

    pub fn source(&self) -> &MultiVector<T> {
        &self.t
    }

    pub fn range(&self) -> &MultiVector<T> {
        &self.t
    }

    /// Vertical composite of two bigons on the same arrow.
    pub fn vertical(&self, other: &Self) -> Result<Self> {
        if self.t != other.t {
            return Err(Error::Schema("vertical composite needs a common arrow".into()));
        }
        Self::with_quotient(self.t.clone(), self.xi.try_add(&other.xi)?, self.quotient)
    }

    /// Horizontal composite; adds both components.
    pub fn horizontal(&self, other: &Self) -> Result<Self> {
        Self::with_quotient(self.t.try_add(&other.t)?, self.xi.try_add(&other.xi)?, self.quotient)
    }

    pub fn to_json(&self) -> Value {
        json!({"t": self.t.to_json(), "xi": self.xi.to_json()})
    }
}

pub fn h1_mul<T: Scalar>(a: &H1Element<T>, b: &H1Element<T>) -> Result<H1Element<T>> {
    same_n(&a.t, &b.t)?;
    let eta = &(&a.eta + &b.eta) + &a.t.wedge(&b.t)?;
    Ok(H1Element { t: &a.t + &b.t, eta })
}

pub fn h1_inv<T: Scalar>(a: &H1Element<T>) -> H1Element<T> {
    // t ∧ (−t) = 0, so the inverse is the componentwise negative.
    H1Element { t: -&a.t, eta: -&a.eta }
}

pub fn h2_mul<T: Scalar>(a: &H2Element<T>, b: &H2Element<T>) -> Result<H2Element<T>> {
    Ok(H2Element { theta: a.theta.try_add(&b.theta)?, xi: a.xi.try_add(&b.xi)? })
}

pub fn h2_inv<T: Scalar>(a: &H2Element<T>) -> H2Element<T> {
    H2Element { theta: -&a.theta, xi: -&a.xi }
}

/// `∂(θ, ξ) = (0, θ)`.
pub fn boundary<T: Scalar>(h: &H2Element<T>) -> H1Element<T> {
    H1Element { t: MultiVector::zero(h.n(), 1).unwrap(), eta: h.theta.clone() }
}

/// `c_{(t,η)}(θ, ξ) = (θ, ξ + t∧θ)`.
pub fn conj<T: Scalar>(g: &H1Element<T>, h: &H2Element<T>) -> Result<H2Element<T>> {
    Ok(H2Element { theta: h.theta.clone(), xi: h.xi.try_add(&g.t.wedge(&h.theta)?)? })
}

/// Horizontal composite in `ℋ` of `h₂: h₁ ⇒ …` followed by `k₂`: `h₂ · c_{h₁}(k₂)`.
pub fn horizontal<T: Scalar>(
    h2: &H2Element<T>,
    h1: &H1Element<T>,
    k2: &H2Element<T>,
) -> Result<H2Element<T>> {
    h2_mul(h2, &conj(h1, k2)?)
}

pub fn g_associator<T: Scalar>(
    t1: &MultiVector<T>,
    t2: &MultiVector<T>,
    t3: &MultiVector<T>,
) -> Result<GBigon<T>> {
    let xi = -&crate::exterior::det_triple(t1, t2, t3)?;
    GBigon::new(&(t1 + t2) + t3, xi)
}

pub fn iota<T: Scalar>(t: &MultiVector<T>) -> Result<H1Element<T>> {
    H1Element::new(t.clone(), MultiVector::zero(t.n(), 2)?)
}

pub fn iota_bigon<T: Scalar>(b: &GBigon<T>) -> H2Element<T> {
    H2Element { theta: MultiVector::zero(b.t.n(), 2).unwrap(), xi: b.xi.clone() }
}

/// `ω_ι(t₁, t₂) = (−t₁∧t₂, 0) : ι(t₁)ι(t₂) ⇒ ι(t₁+t₂)`.
pub fn omega_iota<T: Scalar>(t1: &MultiVector<T>, t2: &MultiVector<T>) -> Result<H2Element<T>> {
    H2Element::new(-&t1.wedge(t2)?, MultiVector::zero(t1.n(), 3)?)
}

pub fn pi<T: Scalar>(g: &H1Element<T>) -> MultiVector<T> {
    g.t.clone()
}

/// `π((θ, ξ): g ⇒ ∂(θ,ξ)g) = (ξ: π(g) ⇒ π(g))`.
pub fn pi_bigon<T: Scalar>(h: &H2Element<T>, at: &H1Element<T>) -> GBigon<T> {
    GBigon { t: at.t.clone(), xi: h.xi.clone(), quotient: Quotient::None }
}

/// `ω_π(a, b) = t₁∧η₂` as a bigon on `t₁ + t₂`.
pub fn omega_pi<T: Scalar>(a: &H1Element<T>, b: &H1Element<T>) -> Result<GBigon<T>> {
    GBigon::new(a.t.try_add(&b.t)?, a.t.wedge(&b.eta)?)
}

/// `Φ(t, η) = (−η, 0)`, a bigon `(t, η) ⇒ (t, 0)`.
pub fn phi<T: Scalar>(g: &H1Element<T>) -> H2Element<T> {
    H2Element { theta: -&g.eta, xi: MultiVector::zero(g.n(), 3).unwrap() }
}

/// Target arrow `∂(h)·g` of the bigon `h: g ⇒ ∂(h)g`.
pub fn bigon_range<T: Scalar>(h: &H2Element<T>, g: &H1Element<T>) -> Result<H1Element<T>> {
    h1_mul(&boundary(h), g)
}

/// Image of the bigon `h: g ⇒ ∂(h)g` under `Ad Φ`: `Φ(∂(h)g) · h · Φ(g)⁻¹`.
pub fn ad_phi_bigon<T: Scalar>(h: &H2Element<T>, g: &H1Element<T>) -> Result<H2Element<T>> {
    let target = bigon_range(h, g)?;
    h2_mul(&h2_mul(&phi(&target), h)?, &h2_inv(&phi(g)))
}

/// Multiplication bigon of `Ad Φ`, assembled from `Φ` alone:
/// `Φ(ab) ∘ (Φ(a)⁻¹ • Φ(b)⁻¹)`.
pub fn omega_ad_phi<T: Scalar>(a: &H1Element<T>, b: &H1Element<T>) -> Result<H2Element<T>> {
    let source = iota(&pi(a))?;
    let lifted = horizontal(&h2_inv(&phi(a)), &source, &h2_inv(&phi(b)))?;
    h2_mul(&phi(&h1_mul(a, b)?), &lifted)
}

/// Multiplication bigon of `ι∘π`: `ι(ω_π(a,b)) ∘ ω_ι(π a, π b)`.
pub fn omega_iota_pi<T: Scalar>(a: &H1Element<T>, b: &H1Element<T>) -> Result<H2Element<T>> {
    h2_mul(&iota_bigon(&omega_pi(a, b)?), &omega_iota(&pi(a), &pi(b))?)
}

/// Structure maps of a crossed module; overridable for negative controls.
pub trait CrossedModule<T: Scalar = Rational> {
    fn mul1(&self, a: &H1Element<T>, b: &H1Element<T>) -> Result<H1Element<T>> {
        h1_mul(a, b)
    }
    fn inv1(&self, a: &H1Element<T>) -> H1Element<T> {
        h1_inv(a)
    }
    fn mul2(&self, a: &H2Element<T>, b: &H2Element<T>) -> Result<H2Element<T>> {
        h2_mul(a, b)
    }
    fn inv2(&self, a: &H2Element<T>) -> H2Element<T> {
        h2_inv(a)
    }
    fn boundary(&self, h: &H2Element<T>) -> H1Element<T> {
        boundary(h)
    }
    fn conj(&self, g: &H1Element<T>, h: &H2Element<T>) -> Result<H2Element<T>> {
        conj(g, h)
    }
}

/// The crossed module `ℋ` itself.
#[derive(Clone, Copy, Debug, Default)]
pub struct StandardCrossedModule;

impl<T: Scalar> CrossedModule<T> for StandardCrossedModule {}

/// One `(h₁, h₂, h₂′)` sample for the crossed-module laws.
pub type CrossedModuleSample<T = Rational> = (H1Element<T>, H2Element<T>, H2Element<T>);

/// Checks `∂(c_{h₁}(h₂)) = h₁∂(h₂)h₁⁻¹` and `c_{∂(h₂)}(h₂′) = h₂h₂′h₂⁻¹`,
/// plus the homomorphism properties of `∂` and `c_{h₁}`.
pub fn check_crossed_module<T: Scalar, C: CrossedModule<T>>(
    cm: &C,
    samples: &[CrossedModuleSample<T>],
    tol: f64,
) -> Result<CheckReport> {
    let mut equivariance = LawReport::new("boundary-equivariance");
    let mut peiffer = LawReport::new("peiffer");
    let mut hom = LawReport::new("boundary-homomorphism");
    let mut auto = LawReport::new("conjugation-automorphism");
    for (g, h, k) in samples {
        let inputs = || json!({"h1": g.to_json(), "h2": h.to_json(), "h2_prime": k.to_json()});

        let lhs = cm.boundary(&cm.conj(g, h)?);
        let rhs = cm.mul1(&cm.mul1(g, &cm.boundary(h))?, &cm.inv1(g))?;
        equivariance.record(lhs.residual(&rhs), tol, inputs);

        let lhs = cm.conj(&cm.boundary(h), k)?;
        let rhs = cm.mul2(&cm.mul2(h, k)?, &cm.inv2(h))?;
        peiffer.record(lhs.residual(&rhs, Quotient::None), tol, inputs);

        let lhs = cm.boundary(&cm.mul2(h, k)?);
        let rhs = cm.mul1(&cm.boundary(h), &cm.boundary(k))?;
        hom.record(lhs.residual(&rhs), tol, inputs);

        let lhs = cm.conj(g, &cm.mul2(h, k)?)?;
        let rhs = cm.mul2(&cm.conj(g, h)?, &cm.conj(g, k)?)?;
        auto.record(lhs.residual(&rhs, Quotient::None), tol, inputs);
    }
    let mut report = CheckReport::default();
    for law in [equivariance, peiffer, hom, auto] {
        report.push(law);
    }
    Ok(report)
}

/// The associator of `𝒢`; overridable for negative controls.
pub trait Associator<T: Scalar = Rational> {
    fn associator(
        &self,
        t1: &MultiVector<T>,
        t2: &MultiVector<T>,
        t3: &MultiVector<T>,
    ) -> Result<MultiVector<T>> {
        Ok(g_associator(t1, t2, t3)?.xi)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct StandardAssociator;

impl<T: Scalar> Associator<T> for StandardAssociator {}

/// Inputs for one round of the coherence checks.
#[derive(Clone, Debug)]
pub struct CoherenceSample<T = Rational> {
    pub t: [MultiVector<T>; 4],
    pub a: H1Element<T>,
    pub b: H1Element<T>,
    pub h: H2Element<T>,
}

impl<T: Scalar> CoherenceSample<T> {
    pub fn to_json(&self) -> Value {
        json!({
            "t": self.t.iter().map(MultiVector::to_json).collect::<Vec<_>>(),
            "a": self.a.to_json(),
            "b": self.b.to_json(),
            "h": self.h.to_json(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let get = |k: &str| v.get(k).ok_or_else(|| Error::Schema(format!("sample missing `{k}`")));
        let ts = get("t")?
            .as_array()
            .filter(|a| a.len() == 4)
            .ok_or_else(|| Error::Schema("`t` must hold four vectors".into()))?
            .iter()
            .map(MultiVector::from_json)
            .collect::<Result<Vec<_>>>()?;
        for t in &ts {
            expect_grade(t, 1)?;
        }
        let [t1, t2, t3, t4]: [MultiVector<T>; 4] = ts.try_into().expect("length checked");
        Ok(Self {
            t: [t1, t2, t3, t4],
            a: H1Element::from_json(get("a")?)?,
            b: H1Element::from_json(get("b")?)?,
            h: H2Element::from_json(get("h")?)?,
        })
    }
}

/// Checks the `ω_ι` cocycle condition, the pentagon identity for the
/// associator, `π∘ι = id`, and agreement of `ι∘π` with `Ad Φ` on arrows,
/// bigons and multiplication bigons.
pub fn check_coherence<T: Scalar, A: Associator<T>>(
    assoc: &A,
    samples: &[CoherenceSample<T>],
    quotient: Quotient,
    tol: f64,
) -> Result<CheckReport> {
    let mut cocycle = LawReport::new("omega-iota-cocycle");
    let mut pentagon = LawReport::new("pentagon");
    let mut pi_iota = LawReport::new("pi-iota-identity");
    let mut arrows = LawReport::new("iota-pi-arrows");
    let mut bigons = LawReport::new("iota-pi-bigons");
    let mut mult = LawReport::new("iota-pi-multiplication");

    for s in samples {
        let [t1, t2, t3, t4] = &s.t;
        let inputs = || s.to_json();

        // (i) c_{(t1,0)}(ω_ι(t2,t3)) − ω_ι(t1+t2,t3) + ω_ι(t1,t2+t3) − ω_ι(t1,t2) − ι(a) = 0
        let c = conj(&iota(t1)?, &omega_iota(t2, t3)?)?;
        let sum = h2_mul(
            &h2_mul(&c, &h2_inv(&omega_iota(&(t1 + t2), t3)?))?,
            &h2_mul(&omega_iota(t1, &(t2 + t3))?, &h2_inv(&omega_iota(t1, t2)?))?,
        )?;
        let a = assoc.associator(t1, t2, t3)?;
        let defect = h2_mul(&sum, &h2_inv(&H2Element::new(MultiVector::zero(t1.n(), 2)?, a)?))?;
        cocycle.record(defect.residual(&H2Element::identity(t1.n()), quotient), tol, inputs);

        // (ii) pentagon in Λ³ with trivial ℝⁿ-action
        let p = &(&(&assoc.associator(t2, t3, t4)? - &assoc.associator(&(t1 + t2), t3, t4)?)
            + &assoc.associator(t1, &(t2 + t3), t4)?)
            - &assoc.associator(t1, t2, &(t3 + t4))?;
        let p = &p + &assoc.associator(t1, t2, t3)?;
        pentagon.record(quotient.residual(&p), tol, inputs);

        // π∘ι = id on arrows and bigons
        let b = GBigon::with_quotient(t1.clone(), assoc.associator(t2, t3, t4)?, quotient)?;
        let back = pi_bigon(&iota_bigon(&b), &iota(t1)?);
        let r = max_abs((&pi(&iota(t1)?) - t1).coeffs())
            .max(quotient.residual(&(&back.xi - &b.xi)))
            .max(max_abs((&back.t - &b.t).coeffs()));
        pi_iota.record(r, tol, inputs);

        // ι∘π agrees with Ad Φ
        let range = bigon_range(&phi(&s.a), &s.a)?;
        arrows.record(range.residual(&iota(&pi(&s.a))?), tol, inputs);

        let ad = ad_phi_bigon(&s.h, &s.a)?;
        let ip = iota_bigon(&pi_bigon(&s.h, &s.a));
        bigons.record(ad.residual(&ip, quotient), tol, inputs);

        let ad = omega_ad_phi(&s.a, &s.b)?;
        let ip = omega_iota_pi(&s.a, &s.b)?;
        mult.record(ad.residual(&ip, quotient), tol, inputs);
    }

    let mut report = CheckReport::default()
        .convention("phi_orientation", PHI_ORIENTATION)
        .convention("associator", ASSOCIATOR_CONVENTION)
        .convention(
            "quotient",
            match quotient {
                Quotient::None => "none",
                Quotient::IntegralLattice => "Lambda3(Z^n)",
            },
        );
    for law in [cocycle, pentagon, pi_iota, arrows, bigons, mult] {
        report.push(law);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;
    use crate::scalar::int;

    type Mv = MultiVector<Rational>;

    fn e(n: usize, i: usize) -> Mv {
        Mv::e(n, i)
    }

    fn blade(n: usize, idx: &[usize]) -> Mv {
        Mv::blade(n, idx).unwrap()
    }

    #[test]
    fn h1_product_of_basis_arrows() {
        let a = iota(&e(2, 0)).unwrap();
        let b = iota(&e(2, 1)).unwrap();
        let p = h1_mul(&a, &b).unwrap();
        assert_eq!(p.t, &e(2, 0) + &e(2, 1));
        assert_eq!(p.eta, blade(2, &[0, 1]));
    }

    #[test]
    fn h1_unit_and_inverse() {
        let mut rng = sampling::rng(7);
        for _ in 0..20 {
            let g = sampling::h1(&mut rng, 4);
            assert_eq!(h1_mul(&H1Element::identity(4), &g).unwrap(), g);
            assert_eq!(h1_mul(&g, &h1_inv(&g)).unwrap(), H1Element::identity(4));
        }
    }

    #[test]
    fn h2_is_abelian_group() {
        let mut rng = sampling::rng(8);
        for _ in 0..20 {
            let a = sampling::h2(&mut rng, 4);
            let b = sampling::h2(&mut rng, 4);
            assert_eq!(h2_mul(&a, &b).unwrap(), h2_mul(&b, &a).unwrap());
            assert_eq!(h2_mul(&a, &h2_inv(&a)).unwrap(), H2Element::identity(4));
            assert_eq!(h2_mul(&H2Element::identity(4), &a).unwrap(), a);
        }
    }

    #[test]
    fn boundary_examples() {
        let h = H2Element::new(Mv::zero(3, 2).unwrap(), blade(3, &[0, 1, 2])).unwrap();
        assert_eq!(boundary(&h), H1Element::identity(3));
        let h = H2Element::new(blade(3, &[0, 1]), Mv::zero(3, 3).unwrap()).unwrap();
        assert_eq!(boundary(&h).eta, blade(3, &[0, 1]));
    }

    #[test]
    fn conj_examples() {
        let h = H2Element::new(blade(3, &[1, 2]), Mv::zero(3, 3).unwrap()).unwrap();
        let c = conj(&iota(&e(3, 0)).unwrap(), &h).unwrap();
        assert_eq!(c.theta, blade(3, &[1, 2]));
        assert_eq!(c.xi, blade(3, &[0, 1, 2]));
        let g = H1Element::new(Mv::zero(3, 1).unwrap(), blade(3, &[0, 2])).unwrap();
        assert_eq!(conj(&g, &h).unwrap(), h);
    }

    #[test]
    fn associator_examples() {
        let a = g_associator(&e(3, 0), &e(3, 1), &e(3, 2)).unwrap();
        assert_eq!(a.t(), &(&(&e(3, 0) + &e(3, 1)) + &e(3, 2)));
        assert_eq!(a.xi(), &-&blade(3, &[0, 1, 2]));
        assert!(g_associator(&e(3, 0), &e(3, 1), &e(3, 0)).unwrap().xi().is_zero());
    }

    #[test]
    fn omega_examples() {
        let w = omega_iota(&e(2, 0), &e(2, 1)).unwrap();
        assert_eq!(w.theta, -&blade(2, &[0, 1]));
        let t = sampling::multivector(&mut sampling::rng(1), 3, 1);
        let b = H1Element::new(t, blade(3, &[1, 2])).unwrap();
        let w = omega_pi(&iota(&e(3, 0)).unwrap(), &b).unwrap();
        assert_eq!(w.xi(), &blade(3, &[0, 1, 2]));
        let b0 = iota(&e(3, 2)).unwrap();
        assert!(omega_pi(&b, &b0).unwrap().xi().is_zero());
    }

    #[test]
    fn phi_is_unit_on_zero_eta() {
        let g = iota(&e(3, 1)).unwrap();
        assert_eq!(phi(&g), H2Element::identity(3));
    }

    #[test]
    fn omega_ad_phi_closed_form() {
        let mut rng = sampling::rng(3);
        for _ in 0..50 {
            let a = sampling::h1(&mut rng, 4);
            let b = sampling::h1(&mut rng, 4);
            let w = omega_ad_phi(&a, &b).unwrap();
            assert_eq!(w.theta, -&a.t.wedge(&b.t).unwrap());
            assert_eq!(w.xi, a.t.wedge(&b.eta).unwrap());
        }
    }

    #[test]
    fn quotient_bigon_reduces_xi() {
        let xi = blade(3, &[0, 1, 2]).scale(&crate::scalar::rat(5, 4));
        let b = GBigon::with_quotient(e(3, 0), xi, Quotient::IntegralLattice).unwrap();
        assert_eq!(b.xi().coeffs(), &[crate::scalar::rat(1, 4)]);
        let whole = GBigon::with_quotient(e(3, 0), blade(3, &[0, 1, 2]), Quotient::IntegralLattice)
            .unwrap();
        assert_eq!(whole.xi().coeffs(), &[int(0)]);
    }

    struct BadConj;
    impl CrossedModule for BadConj {
        fn conj(&self, g: &H1Element, h: &H2Element) -> Result<H2Element> {
            Ok(H2Element { theta: h.theta.try_add(&g.eta)?, xi: h.xi.try_add(&g.t.wedge(&h.theta)?)? })
        }
    }

    #[test]
    fn zero_sample_passes_and_bad_conj_fails() {
        let zero: CrossedModuleSample =
            (H1Element::identity(3), H2Element::identity(3), H2Element::identity(3));
        let r = check_crossed_module(&StandardCrossedModule, &[zero], 0.0).unwrap();
        assert!(r.passed());

        let mut rng = sampling::rng(5);
        let samples: Vec<_> = (0..20)
            .map(|_| (sampling::h1(&mut rng, 4), sampling::h2(&mut rng, 4), sampling::h2(&mut rng, 4)))
            .collect();
        assert!(check_crossed_module(&StandardCrossedModule, &samples, 0.0).unwrap().passed());
        let bad = check_crossed_module(&BadConj, &samples, 0.0).unwrap();
        assert!(!bad.law("peiffer").unwrap().passed());
    }
}
