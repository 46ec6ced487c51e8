use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hotstart_bench::{ansatz, lih_fermion, lih_qubit};
use hotstart_core::statevector::CompiledHamiltonian;
use hotstart_core::{
    encode, gradient, random_initial_angles, run_circuit, Encoding, GradientMethod, GradientSpec, Objective,
};
use std::hint::black_box;

fn simulation(c: &mut Criterion) {
    let mut g = c.benchmark_group("run_circuit");
    for (n, depth) in [(6, 2), (8, 2), (8, 6)] {
        let circuit = ansatz(n, depth);
        let theta = random_initial_angles(circuit.parameter_count(), 0);
        g.bench_with_input(BenchmarkId::from_parameter(format!("{n}q_d{depth}")), &theta, |b, t| {
            b.iter(|| run_circuit(&circuit, black_box(t)).unwrap())
        });
    }
    g.finish();
}

fn expectation(c: &mut Criterion) {
    let mut g = c.benchmark_group("expectation");
    for (label, h) in [
        ("6q_34", lih_qubit(&[0], &[1, 2])),
        ("6q_118", lih_qubit(&[0], &[3, 4])),
        ("8q_193", lih_qubit(&[0], &[3])),
    ] {
        let compiled = CompiledHamiltonian::new(&h);
        let circuit = ansatz(h.n_qubits(), 2);
        let state = run_circuit(&circuit, &random_initial_angles(circuit.parameter_count(), 1)).unwrap();
        g.bench_function(label, |b| b.iter(|| compiled.expectation(black_box(&state)).unwrap()));
    }
    g.finish();
}

fn gradients(c: &mut Criterion) {
    let h = lih_qubit(&[0], &[1, 2]);
    let circuit = ansatz(h.n_qubits(), 2);
    let obj = Objective::new(&circuit, &h).unwrap();
    let theta = random_initial_angles(circuit.parameter_count(), 2);
    let mut g = c.benchmark_group("gradient_6q_d2");
    for method in [
        GradientMethod::AnalyticShift,
        GradientMethod::ForwardDifference,
        GradientMethod::CentralDifference,
    ] {
        let spec = GradientSpec::new(method);
        g.bench_function(method.to_string(), |b| {
            b.iter(|| gradient(|x: &[f64]| obj.value(x), black_box(&theta), &spec).unwrap())
        });
    }
    g.finish();
}

fn encoding(c: &mut Criterion) {
    let op = lih_fermion(&[0], &[3]);
    let mut g = c.benchmark_group("encode_8q");
    for enc in [Encoding::JordanWigner, Encoding::BravyiKitaev] {
        g.bench_function(enc.short_name(), |b| b.iter(|| encode(black_box(&op), enc).unwrap()));
    }
    g.finish();
}

criterion_group!(kernels, simulation, expectation, gradients, encoding);
criterion_main!(kernels);
