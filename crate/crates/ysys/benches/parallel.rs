//! Criterion benchmarks comparing the rayon-parallel execution strategy with
//! the sequential fallback on the two data-parallel hot paths: the
//! brute-force lift search of the classifier and the certified lattice
//! enumeration of the q-series expansion.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::Zero;

use ysys::classifier::{lift_search, table_candidates};
use ysys::nahm::{nahm_expand, table2_goldens, NahmEnumeration};
use ysys::Strategy;

fn rat(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

fn bench_lift_search(c: &mut Criterion) {
    let mut group = c.benchmark_group("lift_search");
    group.sample_size(10);
    // Row 1 has the largest instance count and dominates the search.
    let candidate = table_candidates().into_iter().next().expect("six rows");
    for strategy in [Strategy::Sequential, Strategy::Parallel] {
        group.bench_with_input(
            BenchmarkId::new("row1_rmax10", format!("{strategy:?}")),
            &strategy,
            |b, &strategy| {
                b.iter(|| lift_search(&candidate, 10, strategy));
            },
        );
    }
    group.finish();
}

fn bench_nahm_expand(c: &mut Criterion) {
    let mut group = c.benchmark_group("nahm_expand");
    group.sample_size(10);
    let (_, k, _) = table2_goldens().into_iter().next().expect("twelve rows");
    let b0 = vec![BigRational::zero(); k.size()];
    let order = rat(40);
    for strategy in [Strategy::Sequential, Strategy::Parallel] {
        group.bench_with_input(
            BenchmarkId::new("table_row1_order40", format!("{strategy:?}")),
            &strategy,
            |b, &strategy| {
                b.iter(|| {
                    nahm_expand(
                        &k,
                        &b0,
                        &rat(0),
                        &order,
                        1000,
                        NahmEnumeration::Box,
                        strategy,
                    )
                    .expect("expansion succeeds")
                });
            },
        );
    }
    group.finish();
}

criterion_group!(benches, bench_lift_search, bench_nahm_expand);
criterion_main!(benches);
