use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use heisenberg_hodge::decomposition::decompose_1form;
use heisenberg_hodge::exterior::{lefschetz_decompose, words_of_bidegree, Form};
use heisenberg_hodge::fan::{fan_eigensystem, fan_grid};
use heisenberg_hodge::mh::{mh_sloc_norm, SlocParams};
use heisenberg_hodge::model::dyadic_grid;
use heisenberg_hodge::multiplier::{m_delta1_assembled, m_delta1_oracle};
use heisenberg_hodge::{MultiplierSpec, C64};
use heisenberg_hodge_bench::fixture;

fn exterior(c: &mut Criterion) {
    let n = 4;
    let words = words_of_bidegree(n, 2, 2);
    let omega = Form::from_terms(n, words.iter().enumerate().map(|(k, w)| (*w, C64::new(1.0 + k as f64, -0.5)))).unwrap();
    c.bench_function("lefschetz_decompose n=4 (2,2)", |b| b.iter(|| lefschetz_decompose(black_box(&omega), 2, 2).unwrap()));
}

fn fan(c: &mut Criterion) {
    let pts = fan_grid(2, &dyadic_grid(-4, 4), 32).unwrap();
    c.bench_function("fan_eigensystem grid n=2", |b| {
        b.iter(|| pts.iter().map(|p| fan_eigensystem(black_box(p)).unwrap().eigenvalues[1]).sum::<f64>())
    });
}

fn operators(c: &mut Criterion) {
    let mut g = c.benchmark_group("model n=2 M=8");
    g.sample_size(20);
    let (model, omega) = fixture(2, 8);
    g.bench_function("apply_hodge degree 1", |b| b.iter(|| model.apply_hodge(1, black_box(&omega)).unwrap()));
    g.bench_function("decompose_1form", |b| b.iter(|| decompose_1form(&model, black_box(&omega)).unwrap()));
    let heat = MultiplierSpec::heat(1.0).unwrap();
    g.bench_function("heat assembled", |b| b.iter(|| m_delta1_assembled(&model, &heat, black_box(&omega)).unwrap()));
    g.bench_function("heat dense oracle", |b| b.iter(|| m_delta1_oracle(&model, &heat, black_box(&omega)).unwrap()));
    g.finish();
}

fn norms(c: &mut Criterion) {
    let mut g = c.benchmark_group("mh norms");
    g.sample_size(10);
    let heat = MultiplierSpec::heat(1.0).unwrap();
    let p = SlocParams::new(1.5);
    g.bench_function("heat tau=1.5 J=8 res=128", |b| b.iter(|| mh_sloc_norm(&heat, black_box(&p)).unwrap().sup));
    g.finish();
}

criterion_group!(benches, exterior, fan, operators, norms);
criterion_main!(benches);
