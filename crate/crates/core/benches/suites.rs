//! Serial vs parallel schedules for the verification suites and the
//! multi-start optimizer.

use std::hint::black_box;

use cevian::optimize::maximize_corner_with;
use cevian::{run_suite_with, Schedule, Suite, TrialPlan};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const SCHEDULES: [(&str, Schedule); 2] = [("serial", Schedule::Serial), ("parallel", Schedule::Parallel)];

fn suites(c: &mut Criterion) {
    let mut group = c.benchmark_group("suite");
    group.sample_size(10);
    for (suite, n) in [(Suite::Theorem1, 4), (Suite::Eq2, 3), (Suite::Moebius, 2)] {
        let plan = TrialPlan::new(suite, n, 5_000, 0);
        for (label, schedule) in SCHEDULES {
            group.bench_with_input(BenchmarkId::new(format!("{suite}/n{n}"), label), &plan, |b, plan| {
                b.iter(|| run_suite_with(black_box(plan), schedule).unwrap())
            });
        }
    }
    group.finish();
}

fn optimizer(c: &mut Criterion) {
    let mut group = c.benchmark_group("optimize");
    group.sample_size(10);
    for n in [3, 6] {
        for (label, schedule) in SCHEDULES {
            group.bench_with_input(BenchmarkId::new(format!("n{n}"), label), &n, |b, &n| {
                b.iter(|| maximize_corner_with(black_box(n), 16, 1e-10, 0, schedule).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, suites, optimizer);
criterion_main!(benches);
