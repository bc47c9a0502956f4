//! Benchmarks for the hot paths: cover solving, enumeration, lattice
//! construction, and the heavier algebra verifications.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use essrel_core::essential_algebra::EssentialAlgebra;
use essrel_core::essentiality::{antidiagonal_complement, enumerate_essential, min_block_cover};
use essrel_core::lattice_idempotents::order_idempotents;
use essrel_core::order_lattice::build_order_lattice;
use essrel_core::permuted_orders::PAlgebra;
use essrel_core::{Relation, RingTag};

fn bench_compose(c: &mut Criterion) {
    let a = antidiagonal_complement(4);
    let b = Relation::usual_total_order(4);
    c.bench_function("compose n=4", |bencher| {
        bencher.iter(|| std::hint::black_box(&a).compose(std::hint::black_box(&b)).unwrap())
    });
}

fn bench_min_cover(c: &mut Criterion) {
    let r = antidiagonal_complement(5);
    c.bench_function("min block cover n=5 full-minus-diagonal", |bencher| {
        bencher.iter(|| min_block_cover(std::hint::black_box(&r), 4))
    });
}

fn bench_enumerate(c: &mut Criterion) {
    c.bench_function("enumerate essential n=4", |bencher| {
        bencher.iter(|| enumerate_essential(4, false).unwrap().len())
    });
}

fn bench_order_lattice(c: &mut Criterion) {
    c.bench_function("order lattice n=4", |bencher| {
        bencher.iter(|| build_order_lattice(4).unwrap().len())
    });
}

fn bench_idempotents(c: &mut Criterion) {
    let lat = build_order_lattice(4).unwrap();
    c.bench_function("Mobius idempotents n=4", |bencher| {
        bencher.iter(|| order_idempotents(&lat, RingTag::Integer).unwrap().len())
    });
}

fn bench_structure(c: &mut Criterion) {
    let lat = build_order_lattice(3).unwrap();
    c.bench_function("structure isomorphism n=3", |bencher| {
        bencher.iter_batched(
            || PAlgebra::new(&lat).unwrap(),
            |p| p.verify_structure_iso().unwrap().dim_p,
            BatchSize::LargeInput,
        )
    });
}

fn bench_nilpotency(c: &mut Criterion) {
    let e = EssentialAlgebra::build(3).unwrap();
    let gens = e.n_ideal_generators(RingTag::Rational);
    c.bench_function("nilpotency index n=3", |bencher| {
        bencher.iter(|| e.nilpotency_index(std::hint::black_box(&gens)).unwrap())
    });
}

criterion_group! {
    name = engine;
    config = Criterion::default().sample_size(10);
    targets = bench_compose, bench_min_cover, bench_enumerate, bench_order_lattice,
        bench_idempotents, bench_structure, bench_nilpotency
}
criterion_main!(engine);
