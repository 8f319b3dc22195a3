//! Benchmarks for the heavy engine paths. Run with the default features
//! for the rayon-backed code and with `--no-default-features` for the
//! sequential fallback:
//!
//! ```text
//! cargo bench -p lsakit
//! cargo bench -p lsakit --no-default-features
//! ```

use criterion::{criterion_group, criterion_main, Criterion};
use lsakit::builtins::{cayley, six_dim};
use lsakit::lsa_core::{char_poly_lsa, classify, validate_lsa, Algebra};

fn unvalidated_copy(a: &Algebra) -> Algebra {
    let mut out = Algebra::zero_algebra(a.name.clone(), a.dim);
    for i in 0..a.dim {
        for j in 0..a.dim {
            for k in 0..a.dim {
                out.set_c(i, j, k, a.c(i, j, k).clone());
            }
        }
    }
    out
}

fn bench_validate(c: &mut Criterion) {
    let a = cayley(6).unwrap();
    c.bench_function("validate_cayley6", |b| {
        b.iter(|| {
            let raw = std::hint::black_box(unvalidated_copy(&a));
            validate_lsa(raw).unwrap()
        })
    });
}

fn bench_charpoly(c: &mut Criterion) {
    let a = six_dim();
    c.bench_function("charpoly_six_dim", |b| {
        b.iter(|| char_poly_lsa(std::hint::black_box(&a)))
    });
}

fn bench_classify(c: &mut Criterion) {
    let a = cayley(5).unwrap();
    c.bench_function("classify_cayley5", |b| {
        b.iter(|| classify(std::hint::black_box(&a), false))
    });
}

criterion_group!(benches, bench_validate, bench_charpoly, bench_classify);
criterion_main!(benches);
