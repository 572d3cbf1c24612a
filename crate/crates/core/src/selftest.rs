//! Invariant suites for every module at desk scale, shared by the CLI and tests.

use std::fmt;
use std::str::FromStr;

use serde_json::json;

use crate::brauer::{
    action_from_obstruction, brauer_mul, check_strict_action, classify, dd_class, induced_rep, restrict_subtorus,
    t_duality_decision, validate_fiber_action, Decision, FamilyOverBase, FiberAction, StrictActionData,
};
use crate::cohomology::{cohomologous, commutator_pairing, standard_cocycle, Mode};
use crate::error::{Error, Result};
use crate::exterior::{basis, MultiVector};
use crate::fellbundle::{self, FellBundle, GridTricharacter, SuiteConfig};
use crate::report::{CheckReport, LawReport};
use crate::ring::ExactRing;
use crate::sampling;
use crate::scalar::{int, Rational};
use crate::twogroup::{
    check_coherence, check_crossed_module, Quotient, StandardAssociator, StandardCrossedModule,
    ASSOCIATOR_CONVENTION, PHI_ORIENTATION,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Exterior,
    Twogroup,
    Cohomology,
    Brauer,
    Fellbundle,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Exterior, Suite::Twogroup, Suite::Cohomology, Suite::Brauer, Suite::Fellbundle];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Exterior => "exterior",
            Suite::Twogroup => "twogroup",
            Suite::Cohomology => "cohomology",
            Suite::Brauer => "brauer",
            Suite::Fellbundle => "fellbundle",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Schema(format!("unknown suite `{s}`")))
    }
}

/// Fell-bundle sample counts at desk scale (`N = 4`) and stress scale (`N = 8`).
pub fn fell_config(stress: bool, seed: u64) -> (u32, SuiteConfig) {
    match stress {
        false => (4, SuiteConfig { pairs: 50, triples: 200, seed, tol: 1e-12 }),
        true => (8, SuiteConfig { pairs: 5, triples: 100, seed, tol: 1e-12 }),
    }
}

pub fn run(suite: Suite, stress: bool, seed: u64) -> Result<CheckReport> {
    match suite {
        Suite::Exterior => exterior(seed),
        Suite::Twogroup => twogroup(seed),
        Suite::Cohomology => cohomology(seed),
        Suite::Brauer => brauer(seed),
        Suite::Fellbundle => fell(stress, seed),
    }
}

fn exact_residual(ok: bool) -> f64 {
    if ok {
        0.0
    } else {
        1.0
    }
}

/// Appends the laws of `sub` under `prefix/`.
fn absorb(report: &mut CheckReport, prefix: &str, sub: CheckReport) {
    for mut law in sub.laws {
        law.law = format!("{prefix}/{}", law.law);
        report.push(law);
    }
}

fn exterior(seed: u64) -> Result<CheckReport> {
    let mut rng = sampling::rng(seed);
    let n = 5;
    let mut assoc = LawReport::new("wedge-associative");
    let mut anti = LawReport::new("wedge-graded-antisymmetric");
    let mut linear = LawReport::new("wedge-bilinear");
    let mut square = LawReport::new("wedge-square-vanishes");
    for i in 0..200 {
        let inputs = || json!({"sample": i, "seed": seed});
        let (a, b, c) = (sampling::multivector(&mut rng, n, 1), sampling::multivector(&mut rng, n, 1), sampling::multivector(&mut rng, n, 1));
        let bc: MultiVector<Rational> = sampling::multivector(&mut rng, n, 2);

        let lhs = a.wedge(&b)?.wedge(&c)?;
        assoc.record(exact_residual(lhs == a.wedge(&b.wedge(&c)?)?), 0.0, inputs);

        let ok = a.wedge(&b)? == -&b.wedge(&a)? && a.wedge(&bc)? == bc.wedge(&a)?;
        anti.record(exact_residual(ok), 0.0, inputs);

        let lhs = (&a + &b).wedge(&bc)?;
        let rhs = &a.wedge(&bc)? + &b.wedge(&bc)?;
        let s = sampling::rational(&mut rng);
        let ok = lhs == rhs && a.scale(&s).wedge(&bc)? == a.wedge(&bc)?.scale(&s);
        linear.record(exact_residual(ok), 0.0, inputs);

        square.record(exact_residual(a.wedge(&a)?.is_zero()), 0.0, inputs);
    }
    let mut report = CheckReport::default().convention("basis_order", "lexicographic");
    for law in [assoc, anti, linear, square] {
        report.push(law);
    }
    Ok(report)
}

fn twogroup(seed: u64) -> Result<CheckReport> {
    let mut rng = sampling::rng(seed);
    let n = 5;
    let cm: Vec<_> = (0..1000).map(|_| sampling::crossed_module_sample(&mut rng, n)).collect();
    let coh: Vec<_> = (0..1000).map(|_| sampling::coherence_sample(&mut rng, n)).collect();
    let mut report = CheckReport::default()
        .convention("phi_orientation", PHI_ORIENTATION)
        .convention("associator", ASSOCIATOR_CONVENTION);
    absorb(&mut report, "crossed-module", check_crossed_module(&StandardCrossedModule, &cm, 0.0)?);
    absorb(&mut report, "coherence", check_coherence(&StandardAssociator, &coh, Quotient::None, 0.0)?);
    absorb(&mut report, "coherence-lattice-quotient", check_coherence(&StandardAssociator, &coh[..100], Quotient::IntegralLattice, 0.0)?);
    Ok(report)
}

fn cohomology(seed: u64) -> Result<CheckReport> {
    let mut rng = sampling::rng(seed);
    let n = 3;
    let mut round_trip = LawReport::new("pairing-round-trip");
    let mut twist = LawReport::new("coboundary-twist-cohomologous");
    let mut distinct = LawReport::new("distinct-pairings-not-cohomologous");
    for i in 0..20 {
        let inputs = || json!({"sample": i, "seed": seed});
        let theta = sampling::phase_matrix(&mut rng, n, 12);
        let omega = standard_cocycle(&theta)?;
        round_trip.record(exact_residual(commutator_pairing(&omega)? == theta), 0.0, inputs);

        let a = FiberAction::new(omega.clone(), crate::cohomology::Tricharacter::trivial(n))?;
        let twisted = sampling::coboundary_twist(&mut rng, &a, 1)?;
        twist.record(exact_residual(cohomologous(&omega, &twisted.omega, 0.0)?), 0.0, inputs);

        let other = sampling::phase_matrix(&mut rng, n, 12);
        if other != theta {
            distinct.record(exact_residual(!cohomologous(&omega, &standard_cocycle(&other)?, 0.0)?), 0.0, inputs);
        }
    }
    let mut report = CheckReport::default().convention("mode", Mode::Exact.to_string());
    for law in [round_trip, twist, distinct] {
        report.push(law);
    }
    Ok(report)
}

fn brauer(seed: u64) -> Result<CheckReport> {
    let mut rng = sampling::rng(seed);
    let n = 4;
    let mut valid = LawReport::new("random-actions-validate");
    let mut hom = LawReport::new("classify-homomorphism");
    let mut round_trip = LawReport::new("classify-round-trip");
    let mut restrict = LawReport::new("restriction-extracts-component");
    for i in 0..30 {
        let inputs = || json!({"sample": i, "seed": seed});
        let (a, b) = (sampling::fiber_action(&mut rng, n, 12), sampling::fiber_action(&mut rng, n, 12));
        let ab = a.mul(&b)?;
        let ok = [&a, &b, &ab].iter().all(|x| validate_fiber_action(x, 2, 0.0).passed());
        valid.record(exact_residual(ok), 0.0, inputs);

        let (ca, cb) = (classify(&a)?, classify(&b)?);
        hom.record(exact_residual(classify(&ab)? == brauer_mul(&ca, &cb)?), 0.0, inputs);
        round_trip.record(exact_residual(classify(&action_from_obstruction(ca.m(), ca.theta())?)? == ca), 0.0, inputs);

        let dd = dd_class(&ca);
        for (r, idx) in basis(n, 3).iter().enumerate() {
            let sub = restrict_subtorus(&ca, [idx[0], idx[1], idx[2]])?;
            restrict.record(exact_residual(dd_class(&sub).coeffs() == [dd.coeffs()[r].clone()]), 0.0, inputs);
        }
    }

    let mut generator = LawReport::new("generator-dd-class");
    let g = classify(&action_from_obstruction(&[1], &crate::cohomology::PhaseMatrix::zero(3, Mode::Exact))?)?;
    generator.record(exact_residual(dd_class(&g).coeffs() == [int(1)]), 0.0, || json!({"m": [1]}));

    let mut tdual = LawReport::new("tdual-canonical-families");
    for (k, winding, m, want) in [
        (4, 0, vec![0], Decision::Classical),
        (4, 1, vec![0], Decision::NoncommutativeTorusBundle),
        (4, 0, vec![1], Decision::NonassociativeOnly),
        (8, 1, vec![0], Decision::NoncommutativeTorusBundle),
    ] {
        let f = FamilyOverBase::circle(3, k, winding, &m)?;
        let got = t_duality_decision(&f)?.decision;
        tdual.record(exact_residual(got == want), 0.0, || json!({"vertices": k, "winding": winding, "m": m}));
    }

    let mut report = CheckReport::default()
        .convention("subtorus_sign", crate::brauer::SUBTORUS_SIGN)
        .convention("dd_sign", crate::brauer::DD_SIGN)
        .convention("validation_box", "2");
    for law in [valid, hom, round_trip, restrict, generator, tdual] {
        report.push(law);
    }
    let a = action_from_obstruction(&[1], &crate::cohomology::PhaseMatrix::zero(3, Mode::Exact))?;
    absorb(&mut report, "induced", induced_rep(&a, 4)?.check_relations(200, seed));
    absorb(&mut report, "weyl", check_strict_action(&StrictActionData::weyl(ExactRing::new(3)), 200, seed, 0.0)?);
    Ok(report)
}

fn fell(stress: bool, seed: u64) -> Result<CheckReport> {
    let (period, cfg) = fell_config(stress, seed);
    let b = FellBundle::new(ExactRing::new(period), GridTricharacter::new(3, period, vec![1])?)?;
    let mut report = CheckReport::default()
        .convention("n", "3")
        .convention("N", period.to_string())
        .convention("m", "[1]")
        .convention("associator_orientation", fellbundle::ASSOCIATOR_ORIENTATION.to_string())
        .convention("measure", fellbundle::MEASURE_NOTE);
    absorb(&mut report, "phi", fellbundle::phi_suite(&b, &cfg)?);
    absorb(&mut report, "norms", fellbundle::norms_suite(&b, &cfg)?);
    absorb(&mut report, "associator", fellbundle::associator_suite(&b, &cfg)?);
    absorb(&mut report, "axioms", fellbundle::axioms_suite(&b, &cfg)?);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn algebraic_suites_pass() {
        for s in [Suite::Exterior, Suite::Cohomology, Suite::Brauer] {
            let r = run(s, false, 3).unwrap();
            assert!(r.passed(), "{s}: {}", r.to_json());
        }
    }
}
