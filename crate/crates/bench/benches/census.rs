use std::collections::HashSet;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use haarforge::catalog::load_catalog;
use haarforge::census::{orbit_representatives, run_census, CensusFilter};
use haarforge_bench::order20_catalog;

fn strata(c: &mut Criterion) {
    let groups = load_catalog(&order20_catalog()).unwrap();
    let mut group = c.benchmark_group("census");
    group.sample_size(10);
    for k in [3, 4, 5] {
        group.bench_with_input(BenchmarkId::new("order 40, vt-noncayley, valency", k), &k, |b, &k| {
            b.iter(|| {
                let mut seen = HashSet::new();
                run_census(&groups, &(40..=40), &(k..=k), CensusFilter::VtNonCayley, None, &mut seen, |_, _| Ok(()))
                    .unwrap()
            })
        });
    }
    let f20 = groups.iter().find(|g| g.name() == "F20").unwrap();
    group.bench_function("orbit representatives F20 k=8", |b| b.iter(|| orbit_representatives(black_box(f20), 8)));
    group.finish();
}

criterion_group!(benches, strata);
criterion_main!(benches);
