use std::f64::consts::PI;

use natc_core::benchgen::{generate, Benchmark, BenchmarkSpec};
use natc_core::decompose::Strategy as Decomp;
use natc_core::hardware::{distance, moves_compatible, HardwareModel, Layout, MovePath, Point};
use natc_core::metrics::{duration, gate_duration, GateClass, SimulationOptions};
use natc_core::pipeline::{compile, noise_for, simulate, Compiled, PipelineOptions};
use natc_core::routing::Router;
use natc_core::{Circuit, Gate, Offset};
use proptest::prelude::*;

fn bench(name: Benchmark, n: usize) -> Circuit {
    generate(&BenchmarkSpec { name, n, seed: 1 }).unwrap()
}

fn compiled(name: Benchmark, n: usize, hw: HardwareModel, router: Router) -> Compiled {
    let opts = PipelineOptions {
        hardware: hw,
        router,
        ..Default::default()
    };
    compile(&bench(name, n), &opts).unwrap()
}

#[test]
fn single_gate_durations() {
    let a1 = HardwareModel::a1();
    let l = Layout::new(1, 2, 5.0, 1.0);
    let (t, class) = gate_duration(&Gate::Rz { qubit: 0, lambda: PI / 2.0 }, &a1, &l).unwrap();
    assert!((t - 0.125).abs() < 1e-12);
    assert_eq!(class, GateClass::Rz);
    let mv = Gate::Move {
        qubit: 0,
        from_site: 0,
        to_site: 1,
        from_offset: Offset::None,
        to_offset: Offset::None,
    };
    let (t, class) = gate_duration(&mv, &a1, &l).unwrap();
    assert!((t - 9.090_909_090_909).abs() < 1e-9);
    assert_eq!(class, GateClass::Move);
}

#[test]
fn movement_needs_no_more_exchanges_than_swaps() {
    let c = bench(Benchmark::Qft, 8);
    let count = |router| {
        let opts = PipelineOptions { router, ..Default::default() };
        compile(&c, &opts).unwrap().routed.routing_ops()
    };
    assert!(count(Router::Move) <= count(Router::Swaps));
}

fn positions(out: &Compiled) -> Vec<Point> {
    out.routed
        .initial_mapping
        .sites()
        .iter()
        .zip(&out.routed.initial_offsets)
        .map(|(&s, &o)| out.layout.point_with(s, o))
        .collect()
}

/// Replays the packed circuit and checks, after every moment, that all moves
/// of the moment were mutually compatible and that no two atoms sit closer
/// than `spacing - d_thr`.
fn check_geometry(out: &Compiled, allow_exchange: bool) {
    let l = &out.layout;
    let mut pos = positions(out);
    let floor = l.spacing - l.d_thr - 1e-9;
    for (k, m) in out.circuit.moments.iter().enumerate() {
        let paths: Vec<MovePath> = m
            .gates
            .iter()
            .filter_map(|g| match *g {
                Gate::Move {
                    qubit,
                    from_site,
                    to_site,
                    from_offset,
                    to_offset,
                } => Some(MovePath {
                    qubit,
                    from: l.point_with(from_site, from_offset),
                    to: l.point_with(to_site, to_offset),
                }),
                _ => None,
            })
            .collect();
        if paths.is_empty() {
            continue;
        }
        for p in &paths {
            assert!(distance(p.from, pos[p.qubit]) < 1e-9, "moment {k}: move starts away from atom");
        }
        let stationary: Vec<Point> = (0..pos.len())
            .filter(|&q| paths.iter().all(|p| p.qubit != q))
            .map(|q| pos[q])
            .collect();
        assert!(moves_compatible(&paths, &stationary, l.d_thr, allow_exchange), "moment {k}");
        for p in &paths {
            pos[p.qubit] = p.to;
        }
        for i in 0..pos.len() {
            for j in i + 1..pos.len() {
                assert!(distance(pos[i], pos[j]) >= floor, "moment {k}: atoms {i} and {j} too close: {:?} {:?} after {m:?}", pos[i], pos[j]);
            }
        }
    }
}

#[test]
fn every_intermediate_configuration_is_legal() {
    for (name, n) in [(Benchmark::Qft, 8), (Benchmark::Cnx, 5), (Benchmark::Cuccaro, 6), (Benchmark::Vqaoa, 7)] {
        for hw in [HardwareModel::a1(), HardwareModel::a2()] {
            check_geometry(&compiled(name, n, hw.clone(), Router::Move), false);
            check_geometry(&compiled(name, n, hw, Router::NaiveMove), true);
        }
    }
}

#[test]
fn switch_halves_share_a_moment() {
    let out = compiled(Benchmark::Qft, 8, HardwareModel::a2(), Router::Move);
    let mut pairs = 0;
    for m in &out.circuit.moments {
        for g in &m.gates {
            if let Gate::Move { from_site, to_site, .. } = *g {
                if from_site == to_site {
                    continue;
                }
                let partner = m.gates.iter().any(|h| {
                    matches!(*h, Gate::Move { from_site: f, to_site: t, .. } if f == to_site && t == from_site)
                });
                assert!(partner, "switch half without its partner: {g:?} in {m:?}");
                pairs += 1;
            }
        }
    }
    assert_eq!(pairs / 2, out.routed.routing_ops());
}

#[test]
fn cuccaro_fidelity_improves_with_movement_on_a1() {
    let hw = HardwareModel::a1();
    let sim = SimulationOptions {
        states: 40,
        trajectories: 20,
        seed: 9,
    };
    let f = |router| simulate(&compiled(Benchmark::Cuccaro, 6, hw.clone(), router), &noise_for(&hw), &sim).unwrap();
    let (mv, sw) = (f(Router::Move), f(Router::Swaps));
    let sigma = (mv.std_error.powi(2) + sw.std_error.powi(2)).sqrt();
    assert!(mv.mean > sw.mean + 3.0 * sigma, "{} vs {}", mv.mean, sw.mean);
}

#[test]
fn transverse_never_slower_on_global_time() {
    for name in Benchmark::ALL {
        let n = if name == Benchmark::Cnx { 5 } else { 6 };
        let gr = |strategy| {
            let opts = PipelineOptions { strategy, ..Default::default() };
            compile(&bench(name, n), &opts).unwrap().duration.gr_time
        };
        assert!(gr(Decomp::Transverse) <= gr(Decomp::Axial) + 1e-9, "{name}");
    }
}

fn native_gate() -> impl Strategy<Value = Gate> {
    prop_oneof![
        (0..3usize, -PI..PI).prop_map(|(qubit, lambda)| Gate::Rz { qubit, lambda }),
        (-PI..PI, -PI..PI).prop_map(|(theta, phi)| Gate::Gr { theta, phi }),
        (0..3usize, 1..3usize).prop_map(|(a, d)| Gate::Cz { a, b: (a + d) % 3 }),
    ]
}

proptest! {
    #[test]
    fn duration_is_additive(a in prop::collection::vec(native_gate(), 0..12), b in prop::collection::vec(native_gate(), 0..12)) {
        let hw = HardwareModel::a2();
        let l = Layout::new(1, 3, 5.0, 1.0);
        let ca = Circuit::from_gates(3, a);
        let cb = Circuit::from_gates(3, b);
        let mut both = ca.clone();
        both.append(&cb);
        let (ra, rb, rab) = (duration(&ca, &hw, &l).unwrap(), duration(&cb, &hw, &l).unwrap(), duration(&both, &hw, &l).unwrap());
        prop_assert!((rab.total - ra.total - rb.total).abs() < 1e-9);
        let parts = rab.gr_time + rab.rz_time + rab.cz_time + rab.move_time;
        prop_assert!((parts - rab.total).abs() < 1e-9);
    }
}
