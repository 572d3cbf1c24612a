//! Seeded random samples for checkers, self-tests and property tests.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::brauer::{action_from_obstruction, FiberAction};
use crate::cohomology::{coboundary1, BoxFunction, LatticeBox, Mode, Phase, PhaseMatrix};
use crate::error::Result;
use crate::exterior::{binomial, MultiVector};
use crate::scalar::{rat, Rational};
use crate::twogroup::{CoherenceSample, CrossedModuleSample, H1Element, H2Element};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small rational with denominator at most 6.
pub fn rational<R: Rng>(rng: &mut R) -> Rational {
    rat(rng.gen_range(-9..=9), rng.gen_range(1..=6))
}

pub fn multivector<R: Rng>(rng: &mut R, n: usize, grade: usize) -> MultiVector<Rational> {
    let coeffs = (0..binomial(n, grade)).map(|_| rational(rng)).collect();
    MultiVector::new(n, grade, coeffs).expect("valid shape")
}

pub fn int_vector<R: Rng>(rng: &mut R, n: usize, bound: i64) -> Vec<i64> {
    (0..n).map(|_| rng.gen_range(-bound..=bound)).collect()
}

pub fn h1<R: Rng>(rng: &mut R, n: usize) -> H1Element {
    H1Element::new(multivector(rng, n, 1), multivector(rng, n, 2)).expect("same n")
}

pub fn h2<R: Rng>(rng: &mut R, n: usize) -> H2Element {
    H2Element::new(multivector(rng, n, 2), multivector(rng, n, 3)).expect("same n")
}

pub fn crossed_module_sample<R: Rng>(rng: &mut R, n: usize) -> CrossedModuleSample {
    (h1(rng, n), h2(rng, n), h2(rng, n))
}

pub fn coherence_sample<R: Rng>(rng: &mut R, n: usize) -> CoherenceSample {
    CoherenceSample {
        t: std::array::from_fn(|_| multivector(rng, n, 1)),
        a: h1(rng, n),
        b: h1(rng, n),
        h: h2(rng, n),
    }
}

/// Antisymmetric exact phases with entries in `(1/den)ℤ`.
pub fn phase_matrix<R: Rng>(rng: &mut R, n: usize, den: i64) -> PhaseMatrix {
    let upper: Vec<Phase> = (0..binomial(n, 2)).map(|_| Phase::ratio(rng.gen_range(0..den), den)).collect();
    PhaseMatrix::antisymmetric_from_upper(n, &upper, Mode::Exact).expect("valid shape")
}

/// A standard-form action with pairing in `(1/den)ℤ` and associator coefficients in `[−3, 3]`.
pub fn fiber_action<R: Rng>(rng: &mut R, n: usize, den: i64) -> FiberAction {
    let m = int_vector(rng, binomial(n, 3), 3);
    action_from_obstruction(&m, &phase_matrix(rng, n, den)).expect("valid shape")
}

/// Multiplies the cocycle by `∂V` for a random `V` on `[−2b, 2b]ⁿ` with `V(0) = 0`,
/// giving a table on `[−b, b]ⁿ`.
pub fn coboundary_twist<R: Rng>(rng: &mut R, a: &FiberAction, b: i64) -> Result<FiberAction> {
    let dom = LatticeBox::new(a.n(), 2 * b);
    let values = dom
        .points()
        .map(|k| match k.iter().all(|&x| x == 0) {
            true => Phase::zero(Mode::Exact),
            false => Phase::ratio(rng.gen_range(0..60), 60),
        })
        .collect();
    let v = BoxFunction::new(dom, values, Mode::Exact)?;
    FiberAction::new(a.omega.mul(&coboundary1(&v, b)?)?, a.u.clone())
}
