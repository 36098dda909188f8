use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use proptest::prelude::{prop, prop_assert, prop_assert_eq, prop_oneof, proptest, Just, ProptestConfig};
use proptest::strategy::Strategy as Gen;

use super::*;
use crate::circuit::validate;
use crate::oracle::{phase_distance, unitary_of};

fn u3(qubit: usize, theta: f64, phi: f64, lambda: f64) -> Gate {
    Gate::U3 {
        qubit,
        theta,
        phi,
        lambda,
    }
}

fn ry(qubit: usize, theta: f64) -> Gate {
    u3(qubit, theta, 0.0, 0.0)
}

fn dist(a: &Circuit, b: &Circuit) -> f64 {
    phase_distance(&unitary_of(a, None).unwrap(), &unitary_of(b, None).unwrap()).unwrap()
}

fn one_moment(n: usize, gates: Vec<Gate>) -> Circuit {
    Circuit {
        num_qubits: n,
        moments: vec![Moment::new(gates)],
    }
}

fn lowered(n: usize, moments: Vec<Moment>) -> Circuit {
    Circuit { num_qubits: n, moments }
}

#[test]
fn euler_read_off() {
    let e = euler_zyz(&u3(0, 0.0, 0.0, 0.0));
    assert_eq!((e.lambda_pre, e.theta, e.phi_post), (0.0, 0.0, 0.0));
    let e = euler_zyz(&u3(0, FRAC_PI_2, 0.0, PI));
    assert_eq!((e.lambda_pre, e.theta, e.phi_post), (PI, FRAC_PI_2, 0.0));
}

#[test]
fn euler_angles_reconstruct_the_gate() {
    let g = u3(0, 2.2, -0.7, 1.9);
    let e = euler_zyz(&g);
    let rebuilt = Circuit::from_gates(
        1,
        [
            Gate::Rz {
                qubit: 0,
                lambda: e.lambda_pre,
            },
            ry(0, e.theta),
            Gate::Rz {
                qubit: 0,
                lambda: e.phi_post,
            },
        ],
    );
    assert!(dist(&rebuilt, &Circuit::from_gates(1, [g])) < 1e-12);
}

#[test]
fn axial_leaves_idle_qubit_alone() {
    let src = one_moment(2, vec![ry(0, 0.9)]);
    let out = axial_moment(&src.moments[0], 2);
    assert!(out.iter().flat_map(|m| &m.gates).all(|g| !matches!(g, Gate::Rz { qubit: 1, .. })));
    let c = lowered(2, out);
    assert!(dist(&c, &src) < 1e-9);
    assert!((gr_area(&c) - PI).abs() < 1e-15);
}

#[test]
fn axial_empty_moment_is_empty() {
    assert!(axial_moment(&Moment::default(), 3).is_empty());
    assert!(transverse_moment(&Moment::default(), 3, &TransverseOptions::default()).is_empty());
}

#[test]
fn axial_full_moment() {
    let src = one_moment(
        4,
        vec![
            u3(0, 0.3, 1.0, -2.0),
            u3(1, -2.9, 0.2, 0.4),
            u3(2, PI, -1.0, 3.0),
            u3(3, 1.1, 0.0, 0.5),
        ],
    );
    let c = lowered(4, axial_moment(&src.moments[0], 4));
    assert!(dist(&c, &src) < 1e-9);
    assert!(validate(&c).is_ok());
}

#[test]
fn transverse_boundary_qubit_has_infinite_kappa() {
    let e = euler_zyz(&ry(0, 1.2));
    let a = transverse_angles(&e, 1.2, 1.0);
    assert_eq!(a.kappa, None);
    assert!((a.chi - PI).abs() < 1e-15);
    let a = transverse_angles(&e, 1.2, -1.0);
    assert!((wrap(a.chi) - PI).abs() < 1e-15);
}

#[test]
fn transverse_zero_theta_qubit() {
    let e = euler_zyz(&u3(0, 0.0, 0.4, 0.3));
    let a = transverse_angles(&e, 1.0, 1.0);
    assert_eq!((a.kappa, a.chi, a.beta, a.alpha), (Some(0.0), 0.0, 0.0, 0.0));
    assert_eq!((a.gamma_plus, a.gamma_minus), (0.3, 0.4));
}

#[test]
fn transverse_two_rotations() {
    let src = one_moment(3, vec![ry(0, FRAC_PI_2), ry(1, FRAC_PI_4)]);
    let c = lowered(3, transverse_moment(&src.moments[0], 3, &TransverseOptions::default()));
    assert!(dist(&c, &src) < 1e-9);
    assert!((gr_area(&c) - FRAC_PI_2).abs() < 1e-15);
}

#[test]
fn transverse_pure_rz_moment_has_no_gr() {
    let src = one_moment(
        2,
        vec![
            Gate::Rz {
                qubit: 0,
                lambda: 0.3,
            },
            u3(1, 0.0, 0.5, 0.25),
        ],
    );
    let out = transverse_moment(&src.moments[0], 2, &TransverseOptions::default());
    let c = lowered(2, out);
    assert_eq!(c.count_where(|g| matches!(g, Gate::Gr { .. })), 0);
    assert_eq!(c.gate_count(), 2);
    assert!(dist(&c, &src) < 1e-12);
}

#[test]
fn swap_template_shape() {
    let t = swap_template();
    assert_eq!(t.gate_count(), 21);
    assert_eq!(t.count_where(|g| matches!(g, Gate::Cz { .. })), 3);
    assert_eq!(t.count_where(|g| matches!(g, Gate::Rz { .. })), 10);
    assert_eq!(t.count_where(|g| matches!(g, Gate::Gr { .. })), 8);
    assert_eq!(t.moments.len(), 19);
    assert!(validate(&t).is_ok());
    assert!(t
        .gates()
        .all(|g| !matches!(g, Gate::Gr { theta, .. } if (theta.abs() - FRAC_PI_4).abs() > 1e-15)));
    assert!(dist(&t, &Circuit::from_gates(2, [Gate::Swap { a: 0, b: 1 }])) < 1e-9);
}

#[test]
fn embedded_swap_is_exact() {
    let c = decompose_swap(3, 1, 4);
    assert!(dist(&c, &Circuit::from_gates(4, [Gate::Swap { a: 3, b: 1 }])) < 1e-9);
}

#[test]
fn parallel_swaps_share_gr_layers() {
    let src = one_moment(
        6,
        vec![
            Gate::Swap { a: 0, b: 1 },
            Gate::Swap { a: 4, b: 2 },
            Gate::Cz { a: 3, b: 5 },
        ],
    );
    let c = decompose(&src, Strategy::Axial);
    assert_eq!(c.count_where(|g| matches!(g, Gate::Gr { .. })), 8);
    assert_eq!(c.count_where(|g| matches!(g, Gate::Cz { .. })), 7);
    assert!(validate(&c).is_ok());
    assert!(dist(&c, &src) < 1e-9);
}

#[test]
fn postprocess_axis_shift_absorbs_leading_rz() {
    let c = Circuit::from_gates(
        1,
        [
            Gate::Rz {
                qubit: 0,
                lambda: 0.3,
            },
            Gate::Gr { theta: 0.8, phi: 0.1 },
            Gate::Rz {
                qubit: 0,
                lambda: 1.1,
            },
            Gate::Gr { theta: -0.8, phi: 0.1 },
            Gate::Rz {
                qubit: 0,
                lambda: 0.5,
            },
        ],
    );
    let p = postprocess(&c, &PostprocessOptions::default());
    assert_eq!(p.gate_count(), c.gate_count() - 1);
    assert!(matches!(p.moments[0].gates[0], Gate::Gr { .. }));
    assert!(dist(&p, &c) < 1e-12);
}

#[test]
fn postprocess_deletes_zero_rz() {
    let c = Circuit::from_gates(
        2,
        [
            Gate::Rz {
                qubit: 0,
                lambda: 0.0,
            },
            Gate::Cz { a: 0, b: 1 },
            Gate::Rz {
                qubit: 1,
                lambda: 2.0 * PI,
            },
        ],
    );
    let p = postprocess(&c, &PostprocessOptions::default());
    assert_eq!(p, Circuit::from_gates(2, [Gate::Cz { a: 0, b: 1 }]));
}

#[test]
fn postprocess_fixpoint_on_minimal_circuit() {
    let c = Circuit::from_gates(
        2,
        [
            Gate::Gr { theta: 0.5, phi: 0.0 },
            Gate::Rz {
                qubit: 1,
                lambda: 0.7,
            },
            Gate::Gr { theta: -0.5, phi: 0.0 },
            Gate::Cz { a: 0, b: 1 },
        ],
    );
    assert_eq!(postprocess(&c, &PostprocessOptions::default()), c);
}

#[test]
fn drop_final_rz_is_opt_in() {
    let c = Circuit::from_gates(
        2,
        [
            Gate::Cz { a: 0, b: 1 },
            Gate::Rz {
                qubit: 1,
                lambda: 0.7,
            },
        ],
    );
    assert_eq!(postprocess(&c, &PostprocessOptions::default()).gate_count(), 2);
    let opts = PostprocessOptions {
        drop_final_rz: true,
        ..Default::default()
    };
    assert_eq!(postprocess(&c, &opts).gate_count(), 1);
}

#[test]
fn strategy_parses() {
    assert_eq!("axial".parse::<Strategy>().unwrap(), Strategy::Axial);
    assert_eq!("transverse".parse::<Strategy>().unwrap(), Strategy::Transverse);
    assert!("diagonal".parse::<Strategy>().is_err());
    assert_eq!(Strategy::Axial.to_string(), "axial");
}

fn arb_moment(n: usize) -> impl Gen<Value = Moment> {
    let ang = -PI..PI;
    let gate = prop_oneof![
        4 => (ang.clone(), ang.clone(), ang.clone()).prop_map(|(t, p, l)| (Some(t), p, l)),
        1 => ang.clone().prop_map(|l| (None, 0.0, l)),
        1 => (ang.clone(), ang.clone()).prop_map(|(p, l)| (Some(0.0), p, l)),
        1 => (prop::bool::ANY, ang.clone(), ang).prop_map(|(neg, p, l)| (Some(if neg { -PI } else { PI }), p, l)),
    ];
    prop::collection::vec(prop::option::of(gate), n).prop_map(|slots| {
        Moment::new(
            slots
                .into_iter()
                .enumerate()
                .filter_map(|(q, s)| {
                    s.map(|(t, p, l)| match t {
                        Some(theta) => u3(q, theta, p, l),
                        None => Gate::Rz { qubit: q, lambda: l },
                    })
                })
                .collect(),
        )
    })
}

fn sized_moment() -> impl Gen<Value = (usize, Moment)> {
    (1usize..=5).prop_flat_map(|n| (Just(n), arb_moment(n)))
}

fn max_theta(m: &Moment) -> f64 {
    m.gates.iter().map(|g| euler_zyz(g).theta.abs()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn both_strategies_preserve_the_moment((n, m) in sized_moment()) {
        let src = lowered(n, vec![m.clone()]);
        for s in [Strategy::Axial, Strategy::Transverse] {
            let c = lowered(n, decompose_moment(&m, n, s));
            prop_assert!(c.gates().all(|g| g.is_native()));
            prop_assert!(c.angles_wrapped());
            prop_assert!(dist(&c, &src) < 1e-9, "{s}: {}", dist(&c, &src));
        }
    }

    #[test]
    fn pulse_areas((n, m) in sized_moment()) {
        let ax = gr_area(&lowered(n, axial_moment(&m, n)));
        let tr = gr_area(&lowered(n, transverse_moment(&m, n, &TransverseOptions::default())));
        let tmax = max_theta(&m);
        prop_assert!((tr - tmax).abs() < 1e-12);
        if !m.is_empty() {
            prop_assert!((ax - PI).abs() < 1e-12);
            prop_assert!(tr <= ax + 1e-12);
            prop_assert_eq!((tr - ax).abs() < 1e-12, (tmax - PI).abs() < 1e-12);
        }
    }

    #[test]
    fn transverse_sign_choices_are_all_exact((n, m) in sized_moment(), neg in prop::bool::ANY, sig in prop::collection::vec(prop::bool::ANY, 5)) {
        let opts = TransverseOptions {
            negative_theta_max: neg,
            sigma: sig.iter().map(|&b| if b { -1.0 } else { 1.0 }).collect(),
        };
        let c = lowered(n, transverse_moment(&m, n, &opts));
        prop_assert!(dist(&c, &lowered(n, vec![m])) < 1e-9);
    }
}

fn arb_circuit() -> impl Gen<Value = Circuit> {
    (2usize..=4).prop_flat_map(|n| {
        let layer = prop_oneof![
            3 => arb_moment(n),
            1 => (0..n, 1..n).prop_map(move |(a, d)| Moment::new(vec![Gate::Cz { a, b: (a + d) % n }])),
            1 => (0..n, 1..n).prop_map(move |(a, d)| Moment::new(vec![Gate::Swap { a, b: (a + d) % n }])),
        ];
        prop::collection::vec(layer, 0..8).prop_map(move |ms| Circuit {
            num_qubits: n,
            moments: ms.into_iter().filter(|m| !m.is_empty()).collect(),
        })
    })
}

fn cz_positions(c: &Circuit) -> Vec<(usize, usize)> {
    c.gates()
        .filter_map(|g| match *g {
            Gate::Cz { a, b } => Some((a, b)),
            _ => None,
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn postprocess_is_safe_and_idempotent(c in arb_circuit(), axial in prop::bool::ANY) {
        let s = if axial { Strategy::Axial } else { Strategy::Transverse };
        let d = decompose(&c, s);
        let opts = PostprocessOptions::default();
        let p = postprocess(&d, &opts);
        prop_assert!(p.gate_count() <= d.gate_count());
        prop_assert!(p.angles_wrapped());
        prop_assert!(validate(&p).is_ok());
        prop_assert!(dist(&p, &c) < 1e-9);
        prop_assert_eq!(postprocess(&p, &opts), p.clone());
        let no_shift = postprocess(&d, &PostprocessOptions { axis_shift: false, ..opts });
        prop_assert!(p.gate_count() <= no_shift.gate_count());
    }

    #[test]
    fn strategies_agree_on_two_qubit_gates(c in arb_circuit()) {
        let a = decompose(&c, Strategy::Axial);
        let t = decompose(&c, Strategy::Transverse);
        prop_assert_eq!(cz_positions(&a), cz_positions(&t));
    }
}
