use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sos_core::fock::{displaced_thermal_state, uhlmann_fidelity, DisplacedThermal};
use sos_core::linalg::expm;
use sos_core::oracle::{build_sos_generator, evolve, SosGeneratorOptions};
use sos_core::{FockRep, QuantumState, SosParams, Space, C64};

fn params() -> SosParams {
    SosParams::new(1.0, 1.0, 0.5, 1.0, 0.25, 0.1, 0.1).unwrap()
}

fn mixed_spin_oscillator(n: usize) -> QuantumState {
    let rep = FockRep::new(n).unwrap();
    let osc = displaced_thermal_state(&DisplacedThermal::new(C64::new(0.4, 0.2), 1.0, 0.5), &rep).unwrap();
    let half = sos_core::linalg::identity(2) * C64::new(0.5, 0.0);
    QuantumState::new(sos_core::linalg::kron(&half, osc.matrix()), Space::spin_oscillator(n)).unwrap()
}

fn generator_apply(c: &mut Criterion) {
    let mut g = c.benchmark_group("generator_apply");
    for n in [16, 40, 80] {
        let rep = FockRep::new(n).unwrap();
        let l = build_sos_generator(&params(), &rep, SosGeneratorOptions::with_tunneling())
            .unwrap()
            .compile();
        let rho = mixed_spin_oscillator(n).into_matrix();
        g.bench_with_input(BenchmarkId::from_parameter(2 * n), &rho, |b, rho| {
            b.iter(|| l.apply(black_box(rho)))
        });
    }
    g.finish();
}

fn evolve_short(c: &mut Criterion) {
    let mut g = c.benchmark_group("evolve_to_t1");
    g.sample_size(10);
    for n in [16, 32] {
        let rep = FockRep::new(n).unwrap();
        let gen = build_sos_generator(&params(), &rep, SosGeneratorOptions::default()).unwrap();
        let rho = mixed_spin_oscillator(n);
        g.bench_with_input(BenchmarkId::from_parameter(2 * n), &rho, |b, rho| {
            b.iter(|| evolve(&gen, black_box(rho), &[0.0, 1.0]).unwrap())
        });
    }
    g.finish();
}

fn fidelity(c: &mut Criterion) {
    let mut g = c.benchmark_group("uhlmann_fidelity");
    for n in [32, 64, 128] {
        let rep = FockRep::new(n).unwrap();
        let a = displaced_thermal_state(&DisplacedThermal::new(C64::new(1.0, 0.0), 1.0, 1.0), &rep).unwrap();
        let b = displaced_thermal_state(&DisplacedThermal::new(C64::new(-1.0, 0.0), 1.0, 1.0), &rep).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &(a, b), |bch, (a, b)| {
            bch.iter(|| uhlmann_fidelity(black_box(a), black_box(b)).unwrap())
        });
    }
    g.finish();
}

fn matrix_exponential(c: &mut Criterion) {
    let mut g = c.benchmark_group("expm");
    for n in [32, 64, 128] {
        let rep = FockRep::new(n).unwrap();
        let gen = (rep.adag() - rep.a()) * C64::new(0.7, 0.0);
        g.bench_with_input(BenchmarkId::from_parameter(n), &gen, |b, m| b.iter(|| expm(black_box(m))));
    }
    g.finish();
}

criterion_group!(benches, generator_apply, evolve_short, fidelity, matrix_exponential);
criterion_main!(benches);
