use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use crossmod::brauer::{action_from_obstruction, classify, t_duality_decision};
use crossmod::sampling;
use crossmod::twogroup::{check_coherence, check_crossed_module, Quotient, StandardAssociator, StandardCrossedModule};
use crossmod::FamilyOverBase;

fn wedge(c: &mut Criterion) {
    let mut rng = sampling::rng(1);
    let a = sampling::multivector(&mut rng, 6, 1);
    let b = sampling::multivector(&mut rng, 6, 2);
    c.bench_function("wedge 1x2 n=6", |bench| bench.iter(|| a.wedge(&b).unwrap()));
}

fn laws(c: &mut Criterion) {
    let mut rng = sampling::rng(2);
    let cm: Vec<_> = (0..100).map(|_| sampling::crossed_module_sample(&mut rng, 5)).collect();
    let coh: Vec<_> = (0..100).map(|_| sampling::coherence_sample(&mut rng, 5)).collect();
    let mut group = c.benchmark_group("laws n=5");
    group.bench_function("crossed module x100", |bench| {
        bench.iter(|| check_crossed_module(&StandardCrossedModule, &cm, 0.0).unwrap())
    });
    group.bench_function("coherence x100", |bench| {
        bench.iter(|| check_coherence(&StandardAssociator, &coh, Quotient::IntegralLattice, 0.0).unwrap())
    });
    group.finish();
}

fn classification(c: &mut Criterion) {
    let mut rng = sampling::rng(3);
    c.bench_function("classify n=4", |bench| {
        bench.iter_batched(|| sampling::fiber_action(&mut rng, 4, 12), |a| classify(&a).unwrap(), BatchSize::SmallInput)
    });
    let a = sampling::fiber_action(&mut rng, 4, 12);
    let class = classify(&a).unwrap();
    c.bench_function("action from obstruction n=4", |bench| {
        bench.iter(|| action_from_obstruction(class.m(), class.theta()).unwrap())
    });
    let family = FamilyOverBase::circle(3, 12, 1, &[1]).unwrap();
    c.bench_function("t-duality circle k=12", |bench| bench.iter(|| t_duality_decision(&family).unwrap()));
}

criterion_group!(benches, wedge, laws, classification);
criterion_main!(benches);
