//! End-to-end acceptance checks. Runs as a plain binary so every criterion
//! reports a PASS/FAIL line even when an earlier one fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use natc_core::benchgen::{generate, Benchmark, BenchmarkSpec};
use natc_core::decompose::{decompose_moment, decompose_swap, gr_area, Strategy};
use natc_core::hardware::{build_connectivity_graph, distance, HardwareModel, Layout};
use natc_core::metrics::{duration, estimate_fidelity_from, NoiseParams, SimulationOptions};
use natc_core::oracle::{phase_distance, unitary_of, StateVector};
use natc_core::pipeline::{compile, noise_for, run, simulate, Compiled, PipelineOptions, RunConfig, SimulationConfig, Source};
use natc_core::routing::{check_routed, Router};
use natc_core::{Circuit, Gate, Moment};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn bench(name: Benchmark, n: usize) -> Circuit {
    generate(&BenchmarkSpec { name, n, seed: 1 }).expect("benchmark")
}

fn opts(hw: HardwareModel, router: Router, strategy: Strategy) -> PipelineOptions {
    PipelineOptions {
        hardware: hw,
        router,
        strategy,
        ..Default::default()
    }
}

fn random_u3_moment(n: usize, rng: &mut impl Rng) -> Moment {
    let mut gates = Vec::new();
    for qubit in 0..n {
        if rng.random_bool(0.8) {
            gates.push(Gate::U3 {
                qubit,
                theta: rng.random_range(-PI..PI),
                phi: rng.random_range(-PI..PI),
                lambda: rng.random_range(-PI..PI),
            });
        }
    }
    Moment::new(gates)
}

fn within(t: Instant, limit: Duration) -> Result<(), String> {
    let dt = t.elapsed();
    if dt < limit {
        Ok(())
    } else {
        Err(format!("took {dt:?}, limit {limit:?}"))
    }
}

fn decomposition_correctness() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let n = rng.random_range(1..=5);
        let mut m = random_u3_moment(n, &mut rng);
        if m.is_empty() {
            m = Moment::new(vec![Gate::U3 { qubit: 0, theta: 1.0, phi: 0.5, lambda: -0.25 }]);
        }
        let src = Circuit { num_qubits: n, moments: vec![m.clone()] };
        let u = unitary_of(&src, None).map_err(|e| e.to_string())?;
        for s in [Strategy::Axial, Strategy::Transverse] {
            let low = Circuit { num_qubits: n, moments: decompose_moment(&m, n, s) };
            if !low.gates().all(Gate::is_native) {
                return Err(format!("{s} left non-native gates"));
            }
            let d = phase_distance(&unitary_of(&low, None).map_err(|e| e.to_string())?, &u).map_err(|e| e.to_string())?;
            worst = worst.max(d);
        }
    }
    within(t, Duration::from_secs(30))?;
    if worst < 1e-9 {
        Ok(format!("max phase distance {worst:.2e}"))
    } else {
        Err(format!("max phase distance {worst:.2e}"))
    }
}

fn swap_decomposition() -> Outcome {
    let c = decompose_swap(0, 1, 2);
    let gates = c.gate_count();
    let czs = c.count_where(|g| matches!(g, Gate::Cz { .. }));
    let swap = Circuit::from_gates(2, [Gate::Swap { a: 0, b: 1 }]);
    let d = phase_distance(&unitary_of(&c, None).unwrap(), &unitary_of(&swap, None).unwrap()).unwrap();
    let layout = Layout::new(1, 2, 5.0, 1.0);
    let t1 = duration(&c, &HardwareModel::a1(), &layout).unwrap().total;
    let t2 = duration(&c, &HardwareModel::a2(), &layout).unwrap().total;
    let detail = format!("{gates} gates, {czs} CZ, distance {d:.1e}, A1 {t1:.4} us, A2 {t2:.4} us (want 21, 3, 10.5, 24)");
    let ok = gates == 21 && czs == 3 && d < 1e-9 && (t1 - 10.5).abs() < 1e-9 && (t2 - 24.0).abs() < 1e-9;
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn pulse_area_law() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..300 {
        let n = rng.random_range(1..=5);
        let m = random_u3_moment(n, &mut rng);
        if m.is_empty() {
            continue;
        }
        let theta_max = m
            .gates
            .iter()
            .map(|g| natc_core::decompose::euler_zyz(g).theta.abs())
            .fold(0.0, f64::max);
        let area = |s| gr_area(&Circuit { num_qubits: n, moments: decompose_moment(&m, n, s) });
        let (ax, tr) = (area(Strategy::Axial), area(Strategy::Transverse));
        if (ax - PI).abs() > 1e-9 {
            return Err(format!("axial area {ax}"));
        }
        if (tr - theta_max).abs() > 1e-9 {
            return Err(format!("transverse area {tr}, max theta {theta_max}"));
        }
        if tr > ax + 1e-12 {
            return Err(format!("transverse {tr} above axial {ax}"));
        }
    }
    Ok("300 random moments".into())
}

fn decomposition_speedup() -> Outcome {
    let t = Instant::now();
    let c = bench(Benchmark::Qft, 8);
    let gr = |s| compile(&c, &opts(HardwareModel::a2(), PipelineOptions::default().router, s)).map(|x| x.duration.gr_time);
    let (tr, ax) = (gr(Strategy::Transverse).map_err(|e| e.to_string())?, gr(Strategy::Axial).map_err(|e| e.to_string())?);
    within(t, Duration::from_secs(10))?;
    let ratio = tr / ax;
    let detail = format!("gr_time {tr:.2} / {ax:.2} = {ratio:.3}");
    if ratio <= 0.7 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Replays a packed native circuit and checks every CZ against the blockade radius.
fn czs_in_range(out: &Compiled, r_b: f64) -> bool {
    let mut pos: Vec<_> = out
        .routed
        .initial_mapping
        .sites()
        .iter()
        .zip(&out.routed.initial_offsets)
        .map(|(&s, &o)| out.layout.point_with(s, o))
        .collect();
    for g in out.circuit.gates() {
        match *g {
            Gate::Move { qubit, to_site, to_offset, .. } => pos[qubit] = out.layout.point_with(to_site, to_offset),
            Gate::Cz { a, b } if distance(pos[a], pos[b]) > r_b + 1e-9 => return false,
            _ => {}
        }
    }
    true
}

fn routing_validity() -> Outcome {
    let hw = HardwareModel::a2();
    let mut cases = 0;
    for name in Benchmark::ALL {
        for n in 1..=5 {
            if !name.accepts(n) {
                continue;
            }
            let c = bench(name, n);
            let u = unitary_of(&c, None).unwrap();
            for router in [Router::Swaps, Router::NaiveMove, Router::Move] {
                for s in [Strategy::Axial, Strategy::Transverse] {
                    let out = compile(&c, &opts(hw.clone(), router, s)).map_err(|e| format!("{name} {n}: {e}"))?;
                    let cg = build_connectivity_graph(&out.layout, hw.r_b);
                    check_routed(&out.routed, &cg).map_err(|v| format!("{name} {n} {router}: {}", v[0]))?;
                    if !czs_in_range(&out, hw.r_b) {
                        return Err(format!("{name} {n} {router} {s}: CZ beyond blockade radius"));
                    }
                    let v = unitary_of(&out.circuit, Some(&out.routed.output_permutation())).unwrap();
                    let d = phase_distance(&v, &u).unwrap();
                    if d >= 1e-9 {
                        return Err(format!("{name} {n} {router} {s}: distance {d:.2e}"));
                    }
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("{cases} compilations"))
}

fn movement_vs_swap() -> Outcome {
    let t = Instant::now();
    let hw = HardwareModel::a2();
    let sim = SimulationOptions { states: 100, trajectories: 20, seed: 0 };
    let mut notes = Vec::new();
    for (name, n) in [(Benchmark::Qft, 8), (Benchmark::Cnx, 5)] {
        let c = bench(name, n);
        let mv = compile(&c, &opts(hw.clone(), Router::Move, Strategy::Transverse)).map_err(|e| e.to_string())?;
        let sw = compile(&c, &opts(hw.clone(), Router::Swaps, Strategy::Transverse)).map_err(|e| e.to_string())?;
        let (dm, ds) = (mv.duration.total, sw.duration.total);
        if dm >= ds {
            return Err(format!("{name}{n}: movement {dm:.2} us not below SWAP {ds:.2} us"));
        }
        let noise = noise_for(&hw);
        let fm = simulate(&mv, &noise, &sim).map_err(|e| e.to_string())?;
        let fs = simulate(&sw, &noise, &sim).map_err(|e| e.to_string())?;
        let sigma = (fm.std_error.powi(2) + fs.std_error.powi(2)).sqrt();
        if fm.mean < fs.mean - 3.0 * sigma {
            return Err(format!("{name}{n}: fidelity {:.3} below {:.3} at 3 sigma", fm.mean, fs.mean));
        }
        notes.push(format!("{name}{n} {dm:.1}<{ds:.1} us, F {:.3}>={:.3}", fm.mean, fs.mean));
    }
    within(t, Duration::from_secs(300))?;
    Ok(notes.join("; "))
}

fn zero_routing() -> Outcome {
    for n in 2..=16 {
        let c = bench(Benchmark::Ghz, n);
        for router in [Router::Swaps, Router::NaiveMove, Router::Move] {
            for hw in [HardwareModel::a1(), HardwareModel::a2()] {
                let out = compile(&c, &opts(hw, router, Strategy::Transverse)).map_err(|e| e.to_string())?;
                let ops = out.routed.routing_ops();
                if ops != 0 || out.duration.move_time != 0.0 {
                    return Err(format!("GHZ{n} {router}: {ops} routing operations"));
                }
            }
        }
    }
    Ok("GHZ 2..=16, every router".into())
}

fn noise_analytics() -> Outcome {
    let hw = HardwareModel::a1();
    let layout = Layout::new(1, 1, hw.spacing, hw.d_thr);
    let c = Circuit::from_gates(1, [Gate::Rz { qubit: 0, lambda: PI / 2.0 }]);
    let times: Vec<f64> = duration(&c, &hw, &layout).unwrap().moments.iter().map(|m| m.duration).collect();
    let psi = StateVector::zero(1);
    let noise = NoiseParams::default();
    let f = estimate_fidelity_from(&c, &times, &noise, &psi, 10_000, 11).map_err(|e| e.to_string())?;
    let off = (f.mean - 0.998).abs();
    if off > 3.0 * f.std_error {
        return Err(format!("mean {:.5} +- {:.5}, off by {off:.5}", f.mean, f.std_error));
    }
    let silent = estimate_fidelity_from(&c, &times, &noise.clone().with_scale(0.0), &psi, 1000, 11).unwrap();
    if silent.mean != 1.0 {
        return Err(format!("zero scale gave {}", silent.mean));
    }
    Ok(format!("mean {:.5} +- {:.5}; zero scale exactly 1", f.mean, f.std_error))
}

fn sweep_monotonicity() -> Outcome {
    let c = bench(Benchmark::Cnx, 5);
    let mut hw = HardwareModel::a2();
    hw.r_b = 5.0;
    if compile(&c, &opts(hw.clone(), Router::Swaps, Strategy::Transverse)).is_ok() {
        return Err("r_b equal to spacing accepted".into());
    }
    let mut swaps = Vec::new();
    let mut gaps = Vec::new();
    for r_b in 6..=15 {
        hw.r_b = r_b as f64;
        let s = compile(&c, &opts(hw.clone(), Router::Swaps, Strategy::Transverse)).unwrap().duration.total;
        let m = compile(&c, &opts(hw.clone(), Router::Move, Strategy::Transverse)).unwrap().duration.total;
        swaps.push(s);
        gaps.push((s - m).abs());
    }
    if swaps.windows(2).any(|w| w[1] > w[0] + 1e-9) {
        return Err(format!("SWAP durations {swaps:.2?}"));
    }
    let top = &gaps[gaps.len() / 2..];
    if top.windows(2).any(|w| w[1] > w[0] + 1e-9) || gaps[gaps.len() - 1] >= gaps[0] {
        return Err(format!("gaps {gaps:.2?}"));
    }
    let mut move_times = Vec::new();
    for s in 3..=11 {
        let mut hw = HardwareModel::a2();
        hw.spacing = s as f64;
        hw.r_b = s as f64 + 1.0;
        move_times.push(compile(&c, &opts(hw, Router::Move, Strategy::Transverse)).unwrap().duration.move_time);
    }
    if move_times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(format!("move times {move_times:.2?}"));
    }
    Ok(format!("gap {:.2} -> {:.2} us; move_time {:.1} -> {:.1} us", gaps[0], gaps[gaps.len() - 1], move_times[0], move_times[move_times.len() - 1]))
}

fn determinism() -> Outcome {
    let spec = BenchmarkSpec { name: Benchmark::Vqaoa, n: 6, seed: 42 };
    let config = RunConfig {
        source: Source::Benchmark(spec),
        pipeline: PipelineOptions::default(),
        simulation: Some(SimulationConfig {
            noise: noise_for(&HardwareModel::a2()),
            options: SimulationOptions { states: 8, trajectories: 4, seed: 42 },
        }),
    };
    let once = || run(&generate(&spec).unwrap(), config.clone()).map(|(_, r)| r.to_json());
    let (a, b) = (once().map_err(|e| e.to_string())?, once().map_err(|e| e.to_string())?);
    if a == b {
        Ok(format!("{} identical bytes", a.len()))
    } else {
        Err("reports differ".into())
    }
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("decomposition correctness", decomposition_correctness),
        ("SWAP decomposition", swap_decomposition),
        ("pulse-area law", pulse_area_law),
        ("decomposition speedup", decomposition_speedup),
        ("routing validity and semantics", routing_validity),
        ("movement vs SWAP", movement_vs_swap),
        ("zero-routing benchmarks", zero_routing),
        ("noise analytics", noise_analytics),
        ("sweep monotonicity", sweep_monotonicity),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
