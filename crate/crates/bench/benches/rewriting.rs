use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lpa_bench::words;
use lpa_core::algebra::Strategy;
use lpa_core::verify::{run_suite, SuiteOptions};
use lpa_core::{builtin, parse_expression, CohnAlgebra};

fn normalize(c: &mut Criterion) {
    let contexts = [
        ("L(E*)", CohnAlgebra::leavitt(builtin("E_star").unwrap())),
        (
            "C(E**,{w2,w3,w4})",
            CohnAlgebra::new(builtin("E_star_star").unwrap(), &["w2", "w3", "w4"]).unwrap(),
        ),
    ];
    for (name, ctx) in &contexts {
        let mut group = c.benchmark_group(format!("normalize {name}"));
        for len in [4, 8, 16] {
            let batch = words(ctx, len, 32);
            group.bench_with_input(BenchmarkId::from_parameter(len), &batch, |b, batch| {
                b.iter(|| {
                    for w in batch {
                        ctx.normalize(w, Strategy::Leftmost).unwrap();
                    }
                })
            });
        }
        group.finish();
    }
}

fn multiply(c: &mut Criterion) {
    let ctx = CohnAlgebra::leavitt(builtin("E_star_star").unwrap());
    let x = parse_expression(&ctx, "f1 f2 + f5 f7 f6 + 2 w3 - f8*").unwrap();
    let y = x.star();
    c.bench_function("multiply in L(E**)", |b| b.iter(|| x.mul(&y).unwrap().mul(&x).unwrap()));
}

fn suite(c: &mut Criterion) {
    let mut group = c.benchmark_group("verification suite");
    group.sample_size(10);
    group.bench_function("all blocks", |b| {
        b.iter(|| run_suite(&SuiteOptions::default()).unwrap())
    });
    group.finish();
}

criterion_group!(benches, normalize, multiply, suite);
criterion_main!(benches);
