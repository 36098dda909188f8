use std::collections::BTreeMap;

use crate::angle::{is_zero, wrap};
use crate::circuit::{Circuit, Gate, Moment};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PostprocessOptions {
    /// Rotate GR axes per block to absorb leading Rz angles.
    pub axis_shift: bool,
    /// Drop the Rz layer left over at the very end of the circuit.
    pub drop_final_rz: bool,
}

impl Default for PostprocessOptions {
    fn default() -> Self {
        Self {
            axis_shift: true,
            drop_final_rz: false,
        }
    }
}

enum Layer {
    Rz(Vec<f64>),
    Gr { theta: f64, phi: f64 },
}

fn nonzero(angles: &[f64], shift: f64) -> usize {
    angles.iter().filter(|&&a| !is_zero(a + shift)).count()
}

fn emit_rz(out: &mut Vec<Moment>, angles: &[f64]) {
    let gates: Vec<Gate> = angles
        .iter()
        .enumerate()
        .filter(|(_, a)| !is_zero(**a))
        .map(|(qubit, &a)| Gate::Rz {
            qubit,
            lambda: wrap(a),
        })
        .collect();
    if !gates.is_empty() {
        out.push(Moment::new(gates));
    }
}

/// Picks the axis shift for one block.
///
/// Shifting every GR axis by `eta` adds `eta` to the leading Rz layer on all
/// qubits and `-eta` to the trailing one. Candidates are the shifts that zero
/// some leading angle. The winner minimises the Rz count of both layers;
/// ties prefer no shift, then the most frequent leading angle, then the
/// smallest `|eta|`.
fn choose_eta(leading: &[f64], trailing: &[f64]) -> f64 {
    let cost = |eta: f64| nonzero(leading, eta) + nonzero(trailing, -eta);
    let base = cost(0.0);
    // Group candidate shifts that agree modulo 2 pi.
    let mut freq: BTreeMap<i64, (f64, usize)> = BTreeMap::new();
    for &a in leading.iter().filter(|a| !is_zero(**a)) {
        let eta = wrap(-a);
        let key = (eta * 1e9).round() as i64;
        freq.entry(key).or_insert((eta, 0)).1 += 1;
    }
    let mut best = (base, 0usize, 0.0f64);
    for &(eta, count) in freq.values() {
        let c = cost(eta);
        let better = c < best.0
            || (c == best.0 && best.2 != 0.0 && (count > best.1 || (count == best.1 && eta.abs() < best.2.abs())));
        if better {
            best = (c, count, eta);
        }
    }
    best.2
}

/// Gate-count cleanup for native circuits.
///
/// Works on blocks, the runs of Rz and GR moments between two-qubit or move
/// moments:
///
/// * adjacent Rz layers are fused;
/// * with `axis_shift`, the GR axes of each block are rotated to cancel Rz
///   gates at the start of the block;
/// * the trailing Rz layer of a block commutes through the following CZ and
///   move gates into the next block, and is dropped at the end of the
///   circuit only with `drop_final_rz`;
/// * Rz gates with zero angle are deleted and every angle is wrapped to
///   `(-pi, pi]`.
///
/// Non-native U3 and SWAP gates are left alone and act as barriers. The pass
/// is idempotent and never increases the gate count.
pub fn postprocess(c: &Circuit, opts: &PostprocessOptions) -> Circuit {
    let n = c.num_qubits;
    let mut out: Vec<Moment> = Vec::with_capacity(c.moments.len());
    let mut pending = vec![0.0f64; n];
    let mut i = 0;
    while i < c.moments.len() {
        let m = &c.moments[i];
        let single_or_global = m
            .gates
            .iter()
            .all(|g| matches!(g, Gate::Rz { .. } | Gate::Gr { .. }));
        if !single_or_global || m.is_empty() {
            let commutes = m.gates.iter().all(|g| matches!(g, Gate::Cz { .. } | Gate::Move { .. }));
            if !commutes {
                emit_rz(&mut out, &std::mem::replace(&mut pending, vec![0.0; n]));
            }
            if !m.is_empty() {
                out.push(Moment::new(
                    m.gates
                        .iter()
                        .map(|g| match *g {
                            Gate::U3 {
                                qubit,
                                theta,
                                phi,
                                lambda,
                            } => Gate::U3 {
                                qubit,
                                theta: wrap(theta),
                                phi: wrap(phi),
                                lambda: wrap(lambda),
                            },
                            g => g,
                        })
                        .collect(),
                ));
            }
            i += 1;
            continue;
        }

        // Collect the block, fusing adjacent Rz layers.
        let mut layers = vec![Layer::Rz(std::mem::replace(&mut pending, vec![0.0; n]))];
        while i < c.moments.len()
            && !c.moments[i].is_empty()
            && c.moments[i]
                .gates
                .iter()
                .all(|g| matches!(g, Gate::Rz { .. } | Gate::Gr { .. }))
        {
            for g in &c.moments[i].gates {
                match *g {
                    Gate::Rz { qubit, lambda } => {
                        if !matches!(layers.last(), Some(Layer::Rz(_))) {
                            layers.push(Layer::Rz(vec![0.0; n]));
                        }
                        if let Some(Layer::Rz(v)) = layers.last_mut() {
                            v[qubit] += lambda;
                        }
                    }
                    Gate::Gr { theta, phi } => layers.push(Layer::Gr { theta, phi }),
                    _ => unreachable!(),
                }
            }
            i += 1;
        }
        if !matches!(layers.last(), Some(Layer::Rz(_))) {
            layers.push(Layer::Rz(vec![0.0; n]));
        }
        let last = layers.len() - 1;
        if last == 0 {
            // Rz only: keep pushing forward.
            if let Some(Layer::Rz(v)) = layers.pop() {
                pending = v;
            }
            continue;
        }

        let eta = match (opts.axis_shift, &layers[0], &layers[last]) {
            (true, Layer::Rz(lead), Layer::Rz(trail)) => choose_eta(lead, trail),
            _ => 0.0,
        };
        for (k, layer) in layers.iter_mut().enumerate() {
            match layer {
                Layer::Rz(v) if eta != 0.0 && (k == 0 || k == last) => {
                    let d = if k == 0 { eta } else { -eta };
                    for a in v.iter_mut() {
                        *a += d;
                    }
                }
                Layer::Gr { phi, .. } if eta != 0.0 => *phi = wrap(*phi + eta),
                _ => {}
            }
        }
        if let Some(Layer::Rz(v)) = layers.pop() {
            pending = v;
        }
        for layer in layers {
            match layer {
                Layer::Rz(v) => emit_rz(&mut out, &v),
                Layer::Gr { theta, phi } => out.push(Moment::new(vec![Gate::Gr {
                    theta: wrap(theta),
                    phi: wrap(phi),
                }])),
            }
        }
    }
    if !opts.drop_final_rz {
        emit_rz(&mut out, &pending);
    }
    Circuit {
        num_qubits: n,
        moments: out,
    }
}
