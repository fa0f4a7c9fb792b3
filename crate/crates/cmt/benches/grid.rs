//! Benchmarks the 16x16 reachability grid. With the `parallel` feature on
//! (the default), a one-thread rayon pool stands in for the sequential
//! path so both variants can live in one binary; run with
//! `--no-default-features` to measure the plain sequential code path itself.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use cmt::analysis::reachability;
use cmt::engine::{Firing, Orientation, SemanticsConfig};
use cmt::theories::{builtin_theory, Source};

fn grid(c: &mut Criterion) {
    let config = SemanticsConfig { orientation: Orientation::AsWritten, firing: Firing::Onset };
    let her = builtin_theory("her", Source::Listing).unwrap();
    let uer = builtin_theory("uer", Source::Listing).unwrap();

    let mut group = c.benchmark_group("reachability");
    group.sample_size(10);
    for (name, spec) in [("her", &her), ("uer", &uer)] {
        for horizon in [4usize, 6] {
            #[cfg(feature = "parallel")]
            {
                let seq_pool =
                    rayon::ThreadPoolBuilder::new().num_threads(1).build().expect("pool");
                group.bench_with_input(
                    BenchmarkId::new(format!("{name}-sequential"), horizon),
                    &horizon,
                    |b, &h| b.iter(|| seq_pool.install(|| reachability(spec, config, h))),
                );
                group.bench_with_input(
                    BenchmarkId::new(format!("{name}-parallel"), horizon),
                    &horizon,
                    |b, &h| b.iter(|| reachability(spec, config, h)),
                );
            }
            #[cfg(not(feature = "parallel"))]
            group.bench_with_input(
                BenchmarkId::new(format!("{name}-sequential"), horizon),
                &horizon,
                |b, &h| b.iter(|| reachability(spec, config, h)),
            );
        }
    }
    group.finish();
}

criterion_group!(benches, grid);
criterion_main!(benches);
