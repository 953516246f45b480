//! Grid-sweep throughput: the data-parallel path (default `parallel`
//! feature) against the always-available sequential path, on figure-sized
//! and 10× grids. Run `cargo bench` and compare the two groups; build with
//! `--no-default-features` to measure the fallback dispatch.

use std::f64::consts::FRAC_PI_3;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ptlind::grid::{map_times, map_times_sequential, TimeGrid};
use ptlind::probabilities::transition_quad;
use ptlind::{FormulaFamily, ProbBasis};

fn sweep(c: &mut Criterion) {
    let family = FormulaFamily::GeneralB0Exact {
        r: 0.1,
        s: 0.2,
        diag_phase: FRAC_PI_3,
        rate: 0.1,
    };
    let (gen, pair) = family.numeric_setup(ProbBasis::Flavor).unwrap();
    let mut group = c.benchmark_group("flavor_sweep");
    for points in [501usize, 5001] {
        let times = TimeGrid::new(0.0, 50.0, points).unwrap().times();
        group.bench_with_input(BenchmarkId::new("parallel", points), &times, |b, ts| {
            b.iter(|| {
                black_box(map_times(ts, |t| {
                    transition_quad(&gen, ProbBasis::Flavor, &pair, t).unwrap()
                }))
            })
        });
        group.bench_with_input(BenchmarkId::new("sequential", points), &times, |b, ts| {
            b.iter(|| {
                black_box(map_times_sequential(ts, |t| {
                    transition_quad(&gen, ProbBasis::Flavor, &pair, t).unwrap()
                }))
            })
        });
    }
    group.finish();
}

criterion_group!(benches, sweep);
criterion_main!(benches);
