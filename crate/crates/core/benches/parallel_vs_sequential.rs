use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use thom_core::bockstein::BocksteinPage;
use thom_core::liegroups::group;
use thom_core::par;
use thom_core::thom::{table1, SearchConfig};

fn bockstein_ranks(c: &mut Criterion) {
    let mut g = c.benchmark_group("bockstein_ranks_PSO(12)");
    g.sample_size(10);
    for (label, parallel) in [("parallel", true), ("sequential", false)] {
        g.bench_function(label, |b| {
            par::set_parallel(parallel);
            // Fresh catalog data each time so cached matrices are not reused.
            b.iter_batched(
                || group("PSO(12)").unwrap(),
                |data| {
                    let page = BocksteinPage::new(&data.prime_data(2).unwrap().ops);
                    (0..=data.dim).map(|n| page.rank(n).unwrap()).sum::<usize>()
                },
                BatchSize::LargeInput,
            );
        });
    }
    g.finish();
    par::set_parallel(true);
}

fn table_scan(c: &mut Criterion) {
    let specs = ["SO(10)", "Ss(12)", "PSO(10)", "PSp(4)", "E8"];
    let mut g = c.benchmark_group("table1_subset");
    g.sample_size(10);
    for (label, parallel) in [("parallel", true), ("sequential", false)] {
        g.bench_function(label, |b| {
            par::set_parallel(parallel);
            b.iter(|| table1(&specs, SearchConfig::default()).unwrap());
        });
    }
    g.finish();
    par::set_parallel(true);
}

criterion_group!(benches, bockstein_ranks, table_scan);
criterion_main!(benches);
