use std::f64::consts::FRAC_PI_3;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use weakval_core::scenarios::hardy::{build_hardy, hardy_table, HardyCoefficients, HardyTable, IN_P_OUT_E};
use weakval_core::scenarios::spin::{spin_table, SpinScenarioParams, SpinTable};
use weakval_core::{
    grid_oracle_extremal, solve_optimal_postselection, spectral_decomposition, Labels, Objective, Observable,
    StateVector,
};

fn symmetric(n: usize) -> Observable {
    let entries: Vec<f64> = (0..n * n)
        .map(|k| {
            let (i, j) = (k / n, k % n);
            ((i * j + i + j) as f64 * 0.37).cos() / (1.0 + i.abs_diff(j) as f64)
        })
        .collect();
    Observable::from_real("A", Labels::indexed(n).unwrap(), &entries).unwrap()
}

fn tables(c: &mut Criterion) {
    c.bench_function("hardy_orthogonal_table", |b| b.iter(|| hardy_table(HardyTable::Orthogonal).unwrap()));
    c.bench_function("hardy_build", |b| b.iter(|| build_hardy(&HardyCoefficients::standard()).unwrap()));
    c.bench_function("spin_pauli_table", |b| {
        b.iter(|| spin_table(SpinTable::Pauli, SpinScenarioParams::default()).unwrap())
    });
}

fn spectral(c: &mut Criterion) {
    let mut group = c.benchmark_group("spectral_decomposition");
    for n in [4, 8, 32] {
        let a = symmetric(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &a, |b, a| b.iter(|| spectral_decomposition(a).unwrap()));
    }
    group.finish();
}

fn optimizer(c: &mut Criterion) {
    let s = build_hardy(&HardyCoefficients::standard()).unwrap();
    let a = s.observable(IN_P_OUT_E).unwrap();
    c.bench_function("solver_hardy", |b| {
        b.iter(|| solve_optimal_postselection(&s.pre_state, a, FRAC_PI_3, Objective::Minimize).unwrap())
    });
    let a8 = symmetric(8);
    let pre8 = StateVector::from_real(Labels::indexed(8).unwrap(), &[1.0, 0.5, -0.3, 0.2, 0.9, -0.7, 0.1, 0.4]).unwrap();
    c.bench_function("solver_dim8", |b| {
        b.iter(|| solve_optimal_postselection(&pre8, &a8, 0.9, Objective::Minimize).unwrap())
    });

    let mut group = c.benchmark_group("grid_oracle_hardy");
    group.sample_size(10);
    for resolution in [200, 2000] {
        group.bench_with_input(BenchmarkId::from_parameter(resolution), &resolution, |b, &r| {
            b.iter(|| grid_oracle_extremal(&s.pre_state, a, FRAC_PI_3, r, Objective::Minimize).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, tables, spectral, optimizer);
criterion_main!(benches);
