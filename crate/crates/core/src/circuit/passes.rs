use super::{Circuit, Gate, Moment, MomentKind, Operands};
use crate::angle::{is_zero, wrap};

/// Commutes Rz gates forward through CZ gates and fuses them into the
/// neighbouring U3.
///
/// An Rz followed (after only diagonal or identity gates) by a U3 on the same
/// qubit becomes part of that U3's `lambda`. Rz gates with no later U3 are
/// folded into the previous U3's `phi`, or emitted once at the end when the
/// qubit has no U3 at all. Non-commuting gates (GR, SWAP) flush the pending
/// rotation in front of them.
pub fn merge_rz(c: &Circuit) -> Circuit {
    if !c.gates().any(|g| matches!(g, Gate::Rz { .. })) {
        return c.clone();
    }
    let n = c.num_qubits;
    let mut pending = vec![0.0f64; n];
    // Position (moment, gate) of the last U3 per qubit with only commuting gates after it.
    let mut last_u3: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut out: Vec<Moment> = Vec::with_capacity(c.moments.len());

    fn flush(
        q: usize,
        pending: &mut [f64],
        last_u3: &mut [Option<(usize, usize)>],
        out: &mut [Moment],
        stray: &mut Vec<Gate>,
    ) {
        let delta = std::mem::take(&mut pending[q]);
        if is_zero(delta) {
            return;
        }
        match last_u3[q] {
            Some((m, i)) if m != usize::MAX => {
                if let Gate::U3 { phi, .. } = &mut out[m].gates[i] {
                    *phi = wrap(*phi + delta);
                }
            }
            _ => stray.push(Gate::Rz {
                qubit: q,
                lambda: wrap(delta),
            }),
        }
    }

    for moment in &c.moments {
        let mut kept = Vec::with_capacity(moment.gates.len());
        let mut stray = Vec::new();
        for gate in &moment.gates {
            match *gate {
                Gate::Rz { qubit, lambda } => pending[qubit] += lambda,
                Gate::U3 {
                    qubit,
                    theta,
                    phi,
                    lambda,
                } => {
                    let delta = std::mem::take(&mut pending[qubit]);
                    kept.push(Gate::U3 {
                        qubit,
                        theta,
                        phi,
                        lambda: if is_zero(delta) { lambda } else { wrap(lambda + delta) },
                    });
                    // Resolved after the moment is placed.
                    last_u3[qubit] = Some((usize::MAX, kept.len() - 1));
                }
                Gate::Cz { .. } | Gate::Move { .. } => kept.push(*gate),
                Gate::Swap { .. } | Gate::Gr { .. } => {
                    for q in gate.qubits(n) {
                        flush(q, &mut pending, &mut last_u3, &mut out, &mut stray);
                        last_u3[q] = None;
                    }
                    kept.push(*gate);
                }
            }
        }
        if !stray.is_empty() {
            out.push(Moment::new(stray));
        }
        if !kept.is_empty() {
            let idx = out.len();
            for slot in last_u3.iter_mut() {
                if let Some((usize::MAX, i)) = *slot {
                    *slot = Some((idx, i));
                }
            }
            out.push(Moment::new(kept));
        } else {
            debug_assert!(last_u3.iter().all(|p| !matches!(p, Some((usize::MAX, _)))));
        }
    }
    let mut stray = Vec::new();
    for q in 0..n {
        flush(q, &mut pending, &mut last_u3, &mut out, &mut stray);
    }
    if !stray.is_empty() {
        out.push(Moment::new(stray));
    }
    Circuit {
        num_qubits: n,
        moments: out,
    }
}

/// Greedy as-soon-as-possible scheduling into homogeneous moments.
///
/// Each gate goes to the earliest existing moment of its own kind that starts
/// after every earlier gate on its qubits; if there is none a new moment is
/// appended. Per-qubit gate order is preserved, moves never overtake an
/// earlier move touching the same site, the two halves of a switch stay in
/// one moment, and GR gates always get a moment of their own.
pub fn schedule_asap(c: &Circuit) -> Circuit {
    let n = c.num_qubits;
    let mut moments: Vec<(MomentKind, Vec<Gate>)> = Vec::new();
    // Index of the next moment each qubit (and each trap site) may use.
    let mut frontier = vec![0usize; n];
    let mut site_frontier: Vec<usize> = Vec::new();
    for m in &c.moments {
        for unit in move_units(&m.gates) {
            let kind = unit[0].kind();
            let mut earliest = 0;
            for gate in &unit {
                let q_max = match gate.operands() {
                    Operands::All => frontier.iter().copied().max().unwrap_or(0),
                    _ => gate.qubits(n).iter().map(|&q| frontier[q]).max().unwrap_or(0),
                };
                earliest = earliest.max(q_max);
                for s in move_sites(gate) {
                    earliest = earliest.max(site_frontier.get(s).copied().unwrap_or(0));
                }
            }
            let slot = if kind == MomentKind::Global {
                None
            } else {
                (earliest..moments.len()).find(|&k| moments[k].0 == kind)
            };
            let slot = match slot {
                Some(k) => k,
                None => {
                    moments.push((kind, Vec::new()));
                    moments.len() - 1
                }
            };
            for gate in &unit {
                moments[slot].1.push(*gate);
                for q in gate.qubits(n) {
                    frontier[q] = slot + 1;
                }
                for s in move_sites(gate) {
                    if site_frontier.len() <= s {
                        site_frontier.resize(s + 1, 0);
                    }
                    site_frontier[s] = slot + 1;
                }
            }
        }
    }
    Circuit {
        num_qubits: n,
        moments: moments.into_iter().map(|(_, g)| Moment::new(g)).collect(),
    }
}

fn move_sites(g: &Gate) -> Vec<usize> {
    match *g {
        Gate::Move { from_site, to_site, .. } => vec![from_site, to_site],
        _ => Vec::new(),
    }
}

/// Splits a moment into scheduling units: single gates, except that two
/// moves with swapped sites (a switch) stay together.
pub(crate) fn move_units(gates: &[Gate]) -> Vec<Vec<Gate>> {
    let ends = |g: &Gate| match *g {
        Gate::Move { from_site, to_site, .. } => Some((from_site, to_site)),
        _ => None,
    };
    let mut taken = vec![false; gates.len()];
    let mut out = Vec::new();
    for i in 0..gates.len() {
        if taken[i] {
            continue;
        }
        taken[i] = true;
        let mut unit = vec![gates[i]];
        if let Some((f, t)) = ends(&gates[i]) {
            if let Some(j) = (i + 1..gates.len()).find(|&j| !taken[j] && ends(&gates[j]) == Some((t, f))) {
                taken[j] = true;
                unit.push(gates[j]);
            }
        }
        out.push(unit);
    }
    out
}
