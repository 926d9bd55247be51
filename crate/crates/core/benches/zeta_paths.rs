use asai_core::exactnum::{pow_p, q, QuadCtx};
use asai_core::heckemod::{delta1, local_factor_checked, trace_level, Delta1Case};
use asai_core::padicgrp::Mat2;
use asai_core::par::Exec;
use asai_core::whitzeta::{zeta_asai, SchwartzFn, ZetaOptions};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn zeta_translate(c: &mut Criterion) {
    let p = 3;
    let ctx = QuadCtx::new(p).unwrap();
    let g = Mat2::n_upper(&ctx, ctx.alpha().scale(&pow_p(p, -2))).mul(&Mat2::t(&ctx, 1, 0));
    let phi = SchwartzFn::indicator(p, (q(1), q(2)), 2, 2);
    let mut group = c.benchmark_group("zeta_asai");
    group.sample_size(10);
    for exec in [Exec::Sequential, Exec::Parallel] {
        let opts = ZetaOptions { exec, ..Default::default() };
        group.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &opts, |b, opts| {
            b.iter(|| zeta_asai(p, &phi, &g, opts).unwrap())
        });
    }
    group.finish();
}

fn delta1_trace_factor(c: &mut Criterion) {
    let traced = trace_level(&delta1(5, Delta1Case::Inert).unwrap()).unwrap();
    let mut group = c.benchmark_group("delta1_local_factor_p5");
    group.sample_size(10);
    for exec in [Exec::Sequential, Exec::Parallel] {
        let opts = ZetaOptions { exec, ..Default::default() };
        group.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &opts, |b, opts| {
            b.iter(|| local_factor_checked(&traced, opts).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, zeta_translate, delta1_trace_factor);
criterion_main!(benches);
