use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use tandem_bench::sample_word;
use tandem_core::capacity::{x0_solve, DEFAULT_TOLERANCE};
use tandem_core::dupcore::{descendants, psi, root};
use tandem_core::simplex::{exact_max_code, required_distance, sidon_code};
use tandem_core::utr::{is_utr_code_direct, is_utr_code_reduced, optimal_cone_code};
use tandem_core::DupParams;

fn cones(c: &mut Criterion) {
    let params = DupParams::new(2, 2).unwrap();
    let x = sample_word(params, 12);
    c.bench_function("descendants t=4", |b| b.iter(|| descendants(black_box(&x), 4).unwrap()));
    let y = sample_word(params, 64);
    c.bench_function("root+psi n=64", |b| {
        b.iter(|| {
            let r = root(black_box(&y)).unwrap();
            psi(&r, &y).unwrap()
        })
    });
}

fn simplex_codes(c: &mut Criterion) {
    c.bench_function("required_distance N=1000 t=20 m=8", |b| {
        b.iter(|| required_distance(black_box(1000), 20, 8))
    });
    c.bench_function("exact_max_code m=3 r=6 d=2", |b| b.iter(|| exact_max_code(3, 6, 2).unwrap()));
    c.bench_function("sidon_code m=5 r=8 d=3", |b| b.iter(|| sidon_code(5, 8, 3).unwrap()));
}

fn checkers(c: &mut Criterion) {
    let params = DupParams::new(2, 1).unwrap();
    let code = optimal_cone_code(params, 6, 1, 2).unwrap();
    c.bench_function("utr check direct", |b| b.iter(|| is_utr_code_direct(black_box(&code)).unwrap()));
    c.bench_function("utr check reduced", |b| b.iter(|| is_utr_code_reduced(black_box(&code)).unwrap()));
}

fn fixed_point(c: &mut Criterion) {
    let params = DupParams::new(4, 2).unwrap();
    c.bench_function("x0_solve q=4 k=2", |b| {
        b.iter(|| x0_solve(black_box(0.8273), params, DEFAULT_TOLERANCE).unwrap())
    });
}

criterion_group!(benches, cones, simplex_codes, checkers, fixed_point);
criterion_main!(benches);
