use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use repscat::equivalence::compare_representations;
use repscat::numkernel::eigen;
use repscat::planewave::{modes, Kinematics};
use repscat::{registry_lookup, solve_barrier, solve_step, sweep, ModeOptions, Spin};
use repscat_bench::{step_problems, sweep_energies, SCATTER_REPS};

fn step(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_step");
    for (label, problem) in step_problems() {
        group.bench_with_input(BenchmarkId::from_parameter(label), &problem, |b, p| {
            b.iter(|| solve_step(black_box(p)).unwrap())
        });
    }
    group.finish();
}

fn barrier(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_barrier");
    for (label, problem) in step_problems() {
        group.bench_with_input(BenchmarkId::from_parameter(label), &problem, |b, p| {
            b.iter(|| solve_barrier(black_box(p), 1.5).unwrap())
        });
    }
    group.finish();
}

fn sweeps(c: &mut Criterion) {
    let energies = sweep_energies(400);
    let mut group = c.benchmark_group("sweep_400");
    for rep in SCATTER_REPS {
        group.bench_function(rep, |b| {
            b.iter(|| sweep(rep, 1.0, 2.0, black_box(&energies), Spin::Up, ModeOptions::default()).unwrap())
        });
    }
    group.finish();
}

fn kernels(c: &mut Criterion) {
    let xi = registry_lookup("xi").unwrap();
    let h = xi.generator(2.0, 1.0, 0.5);
    c.bench_function("eigen_4x4", |b| b.iter(|| eigen(black_box(&h)).unwrap()));
    let kin = Kinematics::new(2.0, 1.0, 0.5).unwrap();
    c.bench_function("modes_xi", |b| b.iter(|| modes(xi, black_box(&kin)).unwrap()));
    c.bench_function("intertwiner_dirac_xi", |b| {
        b.iter(|| compare_representations(black_box("dirac"), black_box("xi")).unwrap())
    });
}

criterion_group!(benches, step, barrier, sweeps, kernels);
criterion_main!(benches);
