use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use crossmod::brauer::{
    action_from_obstruction, assemble_obstruction, brauer_mul, classify, dd_class, liftable, restrict_subtorus,
    validate_fiber_action, BrauerClass,
};
use crossmod::cohomology::{cocycle_defect, commutator_pairing, standard_cocycle, Phase, PhaseMatrix};
use crossmod::exterior::{basis, basis_rank, binomial};
use crossmod::scalar::{int, rat};
use crossmod::twogroup::{
    check_coherence, check_crossed_module, h1_mul, CoherenceSample, Quotient, StandardAssociator,
    StandardCrossedModule,
};
use crossmod::{sampling, H1Element, H2Element, Mode, MultiVector, Rational, Tricharacter};

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(p, q)| rat(p, q))
}

fn multivector(n: usize, grade: usize) -> impl Strategy<Value = MultiVector> {
    prop::collection::vec(rational(), binomial(n, grade)).prop_map(move |c| MultiVector::new(n, grade, c).unwrap())
}

fn h1(n: usize) -> impl Strategy<Value = H1Element> {
    (multivector(n, 1), multivector(n, 2)).prop_map(|(t, eta)| H1Element::new(t, eta).unwrap())
}

fn h2(n: usize) -> impl Strategy<Value = H2Element> {
    (multivector(n, 2), multivector(n, 3)).prop_map(|(theta, xi)| H2Element::new(theta, xi).unwrap())
}

fn phase_matrix(n: usize) -> impl Strategy<Value = PhaseMatrix> {
    prop::collection::vec((0i64..24, 1i64..=24), binomial(n, 2)).prop_map(move |upper| {
        let upper: Vec<Phase> = upper.into_iter().map(|(p, q)| Phase::ratio(p, q)).collect();
        PhaseMatrix::antisymmetric_from_upper(n, &upper, Mode::Exact).unwrap()
    })
}

fn class(n: usize) -> impl Strategy<Value = BrauerClass> {
    (prop::collection::vec(-5i64..=5, binomial(n, 3)), phase_matrix(n))
        .prop_map(|(m, theta)| BrauerClass::new(m, theta).unwrap())
}

fn big(x: &Rational) -> BigRational {
    x.to_big()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rational_arithmetic_matches_arbitrary_precision(
        a in any::<i64>(), b in any::<i64>().prop_filter("nonzero", |d| *d != 0),
        c in any::<i64>(), d in any::<i64>().prop_filter("nonzero", |d| *d != 0),
    ) {
        let (x, y) = (rat(a, b), rat(c, d));
        let bx = BigRational::new(BigInt::from(a), BigInt::from(b));
        let by = BigRational::new(BigInt::from(c), BigInt::from(d));
        prop_assert_eq!(big(&x), bx.clone());
        prop_assert_eq!(big(&(&x + &y)), &bx + &by);
        prop_assert_eq!(big(&(&x - &y)), &bx - &by);
        prop_assert_eq!(big(&(&x * &y)), &bx * &by);
        prop_assert_eq!(big(&-&x), -&bx);
        prop_assert_eq!(big(&x.floor()), bx.floor());
        prop_assert_eq!(x.cmp(&y), bx.cmp(&by));
        if c != 0 {
            prop_assert_eq!(big(&(&x / &y)), &bx / &by);
        }
        // equal values compare equal whichever representation produced them
        prop_assert_eq!(&(&x + &y) - &y, x);
    }

    #[test]
    fn wedge_is_associative_and_graded_commutative(
        a in multivector(5, 1), b in multivector(5, 1), c in multivector(5, 1), w in multivector(5, 2),
    ) {
        prop_assert_eq!(a.wedge(&b).unwrap().wedge(&c).unwrap(), a.wedge(&b.wedge(&c).unwrap()).unwrap());
        prop_assert_eq!(a.wedge(&b).unwrap(), -&b.wedge(&a).unwrap());
        prop_assert_eq!(a.wedge(&w).unwrap(), w.wedge(&a).unwrap());
        prop_assert!(a.wedge(&a).unwrap().is_zero());
    }

    #[test]
    fn basis_rank_inverts_enumeration(n in 1usize..8, k in 0usize..4) {
        for (r, idx) in basis(n, k).iter().enumerate() {
            prop_assert_eq!(basis_rank(n, idx), r);
        }
    }

    #[test]
    fn crossed_module_laws_hold(g in h1(4), h in h2(4), k in h2(4)) {
        let report = check_crossed_module(&StandardCrossedModule, &[(g, h, k)], 0.0).unwrap();
        prop_assert!(report.passed());
    }

    #[test]
    fn arrow_product_is_associative(a in h1(4), b in h1(4), c in h1(4)) {
        let left = h1_mul(&h1_mul(&a, &b).unwrap(), &c).unwrap();
        let right = h1_mul(&a, &h1_mul(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn coherence_laws_hold(
        t in prop::array::uniform4(multivector(4, 1)), a in h1(4), b in h1(4), h in h2(4),
    ) {
        let sample = CoherenceSample { t, a, b, h };
        for q in [Quotient::None, Quotient::IntegralLattice] {
            let report = check_coherence(&StandardAssociator, std::slice::from_ref(&sample), q, 0.0).unwrap();
            prop_assert!(report.passed());
        }
    }

    #[test]
    fn phase_arithmetic_is_mod_one(p in -50i64..50, q in 1i64..30, r in -50i64..50, s in 1i64..30) {
        let sum = Phase::ratio(p, q) + Phase::ratio(r, s);
        prop_assert_eq!(sum.clone(), Phase::exact(rat(p, q) + rat(r, s)));
        prop_assert_eq!(sum - Phase::ratio(r, s), Phase::ratio(p, q));
        let x = Phase::ratio(p, q).to_f64();
        prop_assert!((0.0..1.0).contains(&x));
    }

    #[test]
    fn standard_cocycle_recovers_its_pairing(theta in phase_matrix(4)) {
        let omega = standard_cocycle(&theta).unwrap();
        prop_assert_eq!(commutator_pairing(&omega).unwrap(), theta);
    }

    #[test]
    fn obstruction_actions_satisfy_twisted_cocycle(c in class(3), k in prop::collection::vec(-3i64..=3, 3), l in prop::collection::vec(-3i64..=3, 3), m in prop::collection::vec(-3i64..=3, 3)) {
        let a = action_from_obstruction(c.m(), c.theta()).unwrap();
        let d = cocycle_defect(&a.omega, &a.u, &k, &l, &m).unwrap();
        prop_assert!(d.is_zero_within(0.0));
    }

    #[test]
    fn classification_round_trips(c in class(4)) {
        let a = action_from_obstruction(c.m(), c.theta()).unwrap();
        prop_assert!(validate_fiber_action(&a, 1, 0.0).passed());
        prop_assert_eq!(classify(&a).unwrap(), c);
    }

    #[test]
    fn classification_is_a_homomorphism(x in class(4), y in class(4)) {
        let a = action_from_obstruction(x.m(), x.theta()).unwrap();
        let b = action_from_obstruction(y.m(), y.theta()).unwrap();
        prop_assert_eq!(classify(&a.mul(&b).unwrap()).unwrap(), brauer_mul(&x, &y).unwrap());
    }

    #[test]
    fn restriction_extracts_components(c in class(5)) {
        let dd = dd_class(&c);
        for (r, idx) in basis(5, 3).iter().enumerate() {
            let sub = restrict_subtorus(&c, [idx[0], idx[1], idx[2]]).unwrap();
            let got = dd_class(&sub);
            prop_assert_eq!(got.coeffs(), &[dd.coeffs()[r].clone()][..]);
        }
    }

    #[test]
    fn twisting_by_a_coboundary_keeps_the_class(seed in any::<u64>()) {
        let mut rng = sampling::rng(seed);
        let a = sampling::fiber_action(&mut rng, 3, 12);
        let twisted = sampling::coboundary_twist(&mut rng, &a, 1).unwrap();
        prop_assert_eq!(classify(&twisted).unwrap(), classify(&a).unwrap());
    }

    #[test]
    fn liftable_exactly_where_dd_vanishes(values in prop::collection::vec(-2i64..=2, 4)) {
        let mut points = BTreeMap::new();
        for (p, &dd) in values.iter().enumerate() {
            points.insert(format!("p{p}"), vec![([0, 1, 3], dd)]);
        }
        let chi = assemble_obstruction(4, &points).unwrap();
        let verdicts = liftable(&chi);
        for (p, &dd) in values.iter().enumerate() {
            prop_assert_eq!(verdicts[&format!("p{p}")], dd == 0);
        }
    }
}

#[test]
fn integral_tricharacter_is_trivial_on_the_lattice() {
    let u = Tricharacter::from_ints(3, &[2]).unwrap();
    let p = u.eval_triple(&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], Mode::Exact).unwrap();
    assert!(p.is_zero_within(0.0));
    let half = Tricharacter::new(crossmod::DualVector::new(3, 3, vec![rat(1, 2)]).unwrap()).unwrap();
    assert_eq!(half.eval_triple(&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], Mode::Exact).unwrap(), Phase::ratio(1, 2));
    assert_eq!(int(3) * rat(1, 3), int(1));
}
