use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use hilfer_bench::{worked_grid, worked_problem};
use hilfer_core::bvp::{solve_picard, IntegralOperator, PicardOptions};
use hilfer_core::fracops::rl_integral;
use hilfer_core::specfun::gamma;
use hilfer_core::{RlOperator, WeightedGridFunction};

fn special_functions(c: &mut Criterion) {
    c.bench_function("gamma/positive", |b| b.iter(|| gamma(black_box(2.0 / 3.0))));
    c.bench_function("gamma/reflection", |b| b.iter(|| gamma(black_box(-1.0 / 3.0))));
}

fn rl_integrals(c: &mut Criterion) {
    let mut group = c.benchmark_group("rl_integral");
    group.sample_size(10);
    for n in [256usize, 1024, 2048] {
        let grid = worked_grid(n);
        let g = WeightedGridFunction::from_weighted_fn(grid.clone(), 1.0 / 3.0, f64::cos).unwrap();
        group.bench_with_input(BenchmarkId::new("on_the_fly", n), &g, |b, g| {
            b.iter(|| rl_integral(0.5, black_box(g)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("build_operator", n), &grid, |b, grid| {
            b.iter(|| RlOperator::new(grid.clone(), 0.5, 1.0 / 3.0).unwrap())
        });
        let op = RlOperator::new(grid.clone(), 0.5, 1.0 / 3.0).unwrap();
        group.bench_with_input(BenchmarkId::new("apply_cached", n), &g, |b, g| {
            b.iter(|| op.apply(black_box(g)).unwrap())
        });
    }
    group.finish();
}

fn picard(c: &mut Criterion) {
    let p = worked_problem();
    let mut group = c.benchmark_group("picard");
    group.sample_size(10);
    for n in [256usize, 1024] {
        let grid = worked_grid(n);
        group.bench_with_input(BenchmarkId::new("solve_worked", n), &grid, |b, grid| {
            b.iter(|| solve_picard(&p, grid, PicardOptions::default()).unwrap())
        });
        let op = IntegralOperator::new(&p, grid.clone()).unwrap();
        let z = hilfer_core::bvp::boundary_term(&p, &grid).unwrap();
        group.bench_with_input(BenchmarkId::new("apply_t", n), &z, |b, z| b.iter(|| op.apply(black_box(z)).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, special_functions, rl_integrals, picard);
criterion_main!(benches);
