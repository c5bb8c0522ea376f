//! Benchmarks for the hot paths: key-equation solving (dense linear
//! algebra against the shift-register recurrence), a full constrained
//! decode, and the Monte Carlo runner in sequential and parallel form.
//!
//! Run with `cargo bench`, or `cargo bench --no-default-features` to see
//! the sequential-only build (the parallel group then measures the same
//! code path twice).

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use rankmetric::codes::{CodeFamily, CodeSpec};
use rankmetric::decoders;
use rankmetric::field::{FieldContext, FieldElement};
use rankmetric::keyeq;
use rankmetric::linpoly::random_rank_t;
use rankmetric::models::{model_a_setup, sample_model_a_error, ModelAVariant};
use rankmetric::sim::{self, ErrorSource};

fn key_equation(c: &mut Criterion) {
    let ctx = FieldContext::new(2, 1, 12, 1).unwrap();
    let n = ctx.n();
    let mut group = c.benchmark_group("key_equation");
    for t in [2usize, 4] {
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        let poly = random_rank_t(&ctx, t, &mut rng);
        let known: Vec<Option<FieldElement>> = poly
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, z)| (i >= n - 2 * t).then(|| z.clone()))
            .collect();
        let lo = n - 2 * t;
        group.bench_with_input(BenchmarkId::new("dense", t), &t, |b, &t| {
            b.iter(|| keyeq::solve_key_equation(&ctx, &known, t, lo + t, n).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("shift_register", t), &t, |b, &t| {
            b.iter(|| keyeq::solve_key_equation_bm(&ctx, &known, t, lo + t, n).unwrap())
        });
    }
    group.finish();
}

fn constrained_decode(c: &mut Criterion) {
    let base = FieldContext::new(2, 1, 6, 1).unwrap();
    let (ctx, pa) = model_a_setup(&base, 3, ModelAVariant::GabidulinBeyond).unwrap();
    let spec = CodeSpec::new(&ctx, CodeFamily::Gabidulin, 3, None).unwrap();
    // take the first seed whose instance decodes uniquely, so the
    // measured path is the ordinary one
    let r = (0u64..)
        .find_map(|seed| {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let m: Vec<FieldElement> = (0..3).map(|_| ctx.random_element(&mut rng)).collect();
            let cw = spec.encode(&m).unwrap();
            let e = sample_model_a_error(&ctx, &pa, 3, 2, &mut rng).unwrap();
            let r: Vec<FieldElement> =
                cw.iter().zip(&e.vector).map(|(a, b)| ctx.add(a, b)).collect();
            decoders::decode(&spec, Some(&pa), &r).is_ok().then_some(r)
        })
        .unwrap();
    c.bench_function("decode_beyond_half_n6_k3_t2", |b| {
        b.iter(|| decoders::decode(&spec, Some(&pa), &r).unwrap())
    });
}

fn monte_carlo(c: &mut Criterion) {
    let base = FieldContext::new(2, 1, 6, 1).unwrap();
    let (ctx, pa) = model_a_setup(&base, 3, ModelAVariant::GabidulinBeyond).unwrap();
    let spec = CodeSpec::new(&ctx, CodeFamily::Gabidulin, 3, None).unwrap();
    let source = ErrorSource::ModelA { params: pa, t: 2 };
    let mut group = c.benchmark_group("monte_carlo_50_trials");
    group.sample_size(20);
    group.bench_function("sequential", |b| {
        b.iter(|| sim::run_trials_seq(&spec, &source, 50, 99, false))
    });
    group.bench_function("default_runner", |b| {
        b.iter(|| sim::run_trials(&spec, &source, 50, 99, false))
    });
    group.finish();
}

criterion_group!(benches, key_equation, constrained_decode, monte_carlo);
criterion_main!(benches);
