use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use natc_bench::fixture;
use natc_core::benchgen::Benchmark;
use natc_core::decompose::{decompose, Strategy};
use natc_core::metrics::SimulationOptions;
use natc_core::pipeline::{compile, noise_for, simulate, PipelineOptions};
use natc_core::routing::Router;
use natc_core::circuit::schedule_asap;

fn decomposition(c: &mut Criterion) {
    let qft = schedule_asap(&fixture(Benchmark::Qft, 10));
    let mut g = c.benchmark_group("decompose");
    for s in [Strategy::Axial, Strategy::Transverse] {
        g.bench_with_input(BenchmarkId::from_parameter(s), &s, |b, &s| b.iter(|| decompose(black_box(&qft), s)));
    }
    g.finish();
}

fn routing(c: &mut Criterion) {
    let qft = fixture(Benchmark::Qft, 12);
    let mut g = c.benchmark_group("compile");
    g.sample_size(20);
    for router in [Router::Swaps, Router::NaiveMove, Router::Move] {
        let opts = PipelineOptions { router, ..Default::default() };
        g.bench_with_input(BenchmarkId::new("qft12", router), &opts, |b, opts| b.iter(|| compile(black_box(&qft), opts)));
    }
    g.finish();
}

fn simulation(c: &mut Criterion) {
    let opts = PipelineOptions::default();
    let compiled = compile(&fixture(Benchmark::Cnx, 7), &opts).unwrap();
    let noise = noise_for(&opts.hardware);
    let sim = SimulationOptions { states: 8, trajectories: 4, seed: 0 };
    let mut g = c.benchmark_group("simulate");
    g.sample_size(10);
    g.bench_function("cnx7", |b| b.iter(|| simulate(black_box(&compiled), &noise, &sim)));
    g.finish();
}

criterion_group!(benches, decomposition, routing, simulation);
criterion_main!(benches);
