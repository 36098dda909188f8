use std::f64::consts::PI;

use crate::circuit::{Circuit, Gate, Moment};

use super::postprocess::{postprocess, PostprocessOptions};
use super::transverse::{transverse_moment, TransverseOptions};

fn hadamard(qubit: usize) -> Gate {
    Gate::U3 {
        qubit,
        theta: PI / 2.0,
        phi: 0.0,
        lambda: PI,
    }
}

/// Native realisation of `SWAP(0, 1)`: 10 Rz, 8 GR and 3 CZ gates.
///
/// Built as `CX(1,0) CX(0,1) CX(1,0)` with each CX written `H CZ H`. Each run
/// of Hadamards is lowered transversely with a negative `theta_max`, which
/// leaves Rz(pi) on both sides of every Hadamard, and those cancel pairwise
/// once commuted through the CZ gates.
pub fn swap_template() -> Circuit {
    let layers: Vec<Vec<Gate>> = vec![
        vec![hadamard(0)],
        vec![Gate::Cz { a: 0, b: 1 }],
        vec![hadamard(0), hadamard(1)],
        vec![Gate::Cz { a: 0, b: 1 }],
        vec![hadamard(1), hadamard(0)],
        vec![Gate::Cz { a: 0, b: 1 }],
        vec![hadamard(0)],
    ];
    let opts = TransverseOptions {
        negative_theta_max: true,
        ..Default::default()
    };
    let mut c = Circuit::new(2);
    for layer in layers {
        let m = Moment::new(layer);
        if matches!(m.gates[0], Gate::Cz { .. }) {
            c.push_moment(m);
        } else {
            for d in transverse_moment(&m, 2, &opts) {
                c.push_moment(d);
            }
        }
    }
    postprocess(
        &c,
        &PostprocessOptions {
            axis_shift: false,
            drop_final_rz: false,
        },
    )
}

/// The template of [`swap_template`] on qubits `a` and `b` of an `n`-qubit register.
pub fn decompose_swap(a: usize, b: usize, n: usize) -> Circuit {
    let t = swap_template();
    Circuit {
        num_qubits: n,
        moments: t
            .moments
            .iter()
            .map(|m| Moment::new(m.gates.iter().map(|g| g.relabel(|q| if q == 0 { a } else { b })).collect()))
            .collect(),
    }
}

/// Lowers a moment of parallel SWAPs by running their templates in lockstep.
///
/// Templates share their GR layers. Other two-qubit or move gates in the
/// moment ride along in the first CZ layer.
pub(crate) fn swap_moment(m: &Moment) -> Vec<Moment> {
    let t = swap_template();
    let swaps: Vec<(usize, usize)> = m
        .gates
        .iter()
        .filter_map(|g| match *g {
            Gate::Swap { a, b } => Some((a, b)),
            _ => None,
        })
        .collect();
    let mut others: Vec<Gate> = m
        .gates
        .iter()
        .filter(|g| !matches!(g, Gate::Swap { .. }))
        .copied()
        .collect();
    let mut out = Vec::with_capacity(t.moments.len());
    for layer in &t.moments {
        let mut gates = Vec::new();
        if let [Gate::Gr { .. }] = layer.gates.as_slice() {
            gates.push(layer.gates[0]);
        } else {
            for &(a, b) in &swaps {
                gates.extend(layer.gates.iter().map(|g| g.relabel(|q| if q == 0 { a } else { b })));
            }
            if matches!(layer.gates[0], Gate::Cz { .. }) {
                gates.append(&mut others);
            }
        }
        out.push(Moment::new(gates));
    }
    out
}
