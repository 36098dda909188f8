use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate, Moment, Offset};
use crate::error::{Error, Result};
use crate::hardware::Layout;

use super::{RoutedCircuit, SwitchRecord};

const REPAIR_DEPTH: usize = 8;
const EPS: f64 = 1e-9;

/// Order in which displacement directions are tried.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DisplacementStyle {
    /// Prefer single-axis offsets: up, then right, then up-right.
    #[default]
    Axis,
    /// Prefer the diagonal offset, then up, then right.
    Diagonal,
}

impl DisplacementStyle {
    fn candidates(self) -> [Offset; 4] {
        match self {
            DisplacementStyle::Axis => [Offset::None, Offset::Up, Offset::Right, Offset::UpRight],
            DisplacementStyle::Diagonal => [Offset::None, Offset::UpRight, Offset::Up, Offset::Right],
        }
    }
}

impl fmt::Display for DisplacementStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DisplacementStyle::Axis => "axis",
            DisplacementStyle::Diagonal => "diagonal",
        })
    }
}

impl FromStr for DisplacementStyle {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "axis" => Ok(Self::Axis),
            "diagonal" => Ok(Self::Diagonal),
            _ => Err(format!("unknown displacement style `{s}`")),
        }
    }
}

/// Offset change of one atom immediately before switch `switch`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Adjustment {
    pub switch: usize,
    pub qubit: usize,
    pub from: Offset,
    pub to: Offset,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisplacementPlan {
    /// Starting offset of each program qubit's atom.
    pub initial: Vec<Offset>,
    pub adjustments: Vec<Adjustment>,
    /// Offsets of `(qubits.0, qubits.1)` while each switch runs.
    pub switch_offsets: Vec<(Offset, Offset)>,
}

struct Planner {
    values: Vec<Offset>,
    /// `(var of first atom, var of second atom, unit direction)`.
    switches: Vec<(usize, usize, (f64, f64))>,
    order: [Offset; 4],
}

impl Planner {
    fn clear(&self, k: usize) -> bool {
        let (a, b, dir) = self.switches[k];
        is_clear(self.values[a], self.values[b], dir)
    }

    /// Sets `var` and repairs every switch it breaks by changing the partner's
    /// variable, recursively. Changes are recorded in `changed` for rollback.
    fn assign(&mut self, var: usize, value: Offset, depth: usize, changed: &mut Vec<(usize, Offset)>) -> bool {
        changed.push((var, self.values[var]));
        self.values[var] = value;
        for k in 0..self.switches.len() {
            let (a, b, _) = self.switches[k];
            if (a != var && b != var) || self.clear(k) {
                continue;
            }
            let other = if a == var { b } else { a };
            if depth == 0 || changed.iter().any(|&(v, _)| v == other) {
                return false;
            }
            if !self.try_var(other, k, depth - 1, changed) {
                return false;
            }
        }
        true
    }

    /// Tries the alternative values for `var` that clear switch `target` on
    /// their own; leaves the first one whose repair succeeds in place.
    fn try_var(&mut self, var: usize, target: usize, depth: usize, changed: &mut Vec<(usize, Offset)>) -> bool {
        let current = self.values[var];
        for value in self.order {
            if value == current {
                continue;
            }
            self.values[var] = value;
            let clears = self.clear(target);
            self.values[var] = current;
            if !clears {
                continue;
            }
            let mark = changed.len();
            if self.assign(var, value, depth, changed) {
                return true;
            }
            self.rollback(changed, mark);
        }
        false
    }

    /// Changes both atoms of switch `target` together.
    fn try_pair(&mut self, target: usize, depth: usize, changed: &mut Vec<(usize, Offset)>) -> bool {
        let (va, vb, dir) = self.switches[target];
        for a in self.order {
            for b in self.order {
                if !is_clear(a, b, dir) || (a == self.values[va] && b == self.values[vb]) {
                    continue;
                }
                let mark = changed.len();
                changed.push((vb, self.values[vb]));
                self.values[vb] = b;
                if self.assign(va, a, depth, changed) && self.assign(vb, b, depth, changed) {
                    return true;
                }
                self.rollback(changed, mark);
            }
        }
        false
    }

    fn rollback(&mut self, changed: &mut Vec<(usize, Offset)>, mark: usize) {
        while changed.len() > mark {
            let (v, old) = changed.pop().expect("len > mark");
            self.values[v] = old;
        }
    }
}

/// True when two atoms exchanging along `dir` (a unit vector) with these
/// offsets pass at least `d_thr` apart.
fn is_clear(a: Offset, b: Offset, dir: (f64, f64)) -> bool {
    let (ua, ub) = (a.unit_vector(), b.unit_vector());
    let w = (ua.0 - ub.0, ua.1 - ub.1);
    (w.0 * dir.1 - w.1 * dir.0).abs() >= 1.0 - EPS
}

/// Chooses trap displacements so every switch's two atoms pass each other
/// with clearance.
///
/// Switches are processed in order. A blocked switch first tries changing
/// either atom's current displacement, repairing earlier switches that the
/// change would break by changing their other atom in turn (bounded depth).
/// Only when that fails is an adjustment move inserted.
pub fn plan_displacements(
    log: &[SwitchRecord],
    num_qubits: usize,
    layout: &Layout,
    style: DisplacementStyle,
) -> DisplacementPlan {
    let mut p = Planner {
        values: vec![Offset::None; num_qubits],
        switches: Vec::with_capacity(log.len()),
        order: style.candidates(),
    };
    let mut var_of: Vec<usize> = (0..num_qubits).collect();
    // (switch, qubit, old var, new var)
    let mut adjustments: Vec<(usize, usize, usize, usize)> = Vec::new();
    for (k, rec) in log.iter().enumerate() {
        let (u, v) = rec.qubits;
        let (a, b) = (layout.grid_point(rec.sites.0), layout.grid_point(rec.sites.1));
        let len = ((b.0 - a.0).powi(2) + (b.1 - a.1).powi(2)).sqrt();
        let dir = ((b.0 - a.0) / len, (b.1 - a.1) / len);
        p.switches.push((var_of[u], var_of[v], dir));
        if p.clear(k) {
            continue;
        }
        let mut changed = Vec::new();
        if p.try_var(var_of[u], k, REPAIR_DEPTH, &mut changed)
            || p.try_var(var_of[v], k, REPAIR_DEPTH, &mut changed)
            || p.try_pair(k, REPAIR_DEPTH, &mut changed)
        {
            continue;
        }
        // Give one atom (or, failing that, both) a fresh displacement for the
        // rest of the circuit.
        let (cu, cv) = (p.values[var_of[u]], p.values[var_of[v]]);
        let order = p.order;
        let pair = order
            .iter()
            .map(|&o| (o, cv))
            .chain(order.iter().map(|&o| (cu, o)))
            .chain(order.iter().flat_map(|&a| order.iter().map(move |&b| (a, b))))
            .find(|&(a, b)| is_clear(a, b, dir))
            .expect("some pair of offsets clears any direction");
        for (q, value, slot) in [(u, pair.0, 0), (v, pair.1, 1)] {
            if value == p.values[var_of[q]] {
                continue;
            }
            let new_var = p.values.len();
            p.values.push(value);
            adjustments.push((k, q, var_of[q], new_var));
            var_of[q] = new_var;
            if slot == 0 {
                p.switches[k].0 = new_var;
            } else {
                p.switches[k].1 = new_var;
            }
        }
    }
    DisplacementPlan {
        initial: p.values[..num_qubits].to_vec(),
        adjustments: adjustments
            .into_iter()
            .filter(|&(_, _, old, new)| p.values[old] != p.values[new])
            .map(|(switch, qubit, old, new)| Adjustment {
                switch,
                qubit,
                from: p.values[old],
                to: p.values[new],
            })
            .collect(),
        switch_offsets: p.switches.iter().map(|&(a, b, _)| (p.values[a], p.values[b])).collect(),
    }
}

/// Writes a plan into a movement-routed circuit: initial offsets, Move gate
/// offsets and adjustment moves. Returns the layout with the initial offsets
/// applied to the occupied sites.
pub fn apply_displacements(
    routed: &RoutedCircuit,
    plan: &DisplacementPlan,
    layout: &Layout,
) -> Result<(RoutedCircuit, Layout)> {
    if !routed.router.uses_movement() {
        return Err(Error::InvalidCircuit("displacements only apply to movement routing".into()));
    }
    let n = routed.circuit.num_qubits;
    if plan.initial.len() != n || plan.switch_offsets.len() != routed.switch_log.len() {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: plan.initial.len(),
        });
    }
    let mut before: BTreeMap<usize, Vec<&Adjustment>> = BTreeMap::new();
    for adj in &plan.adjustments {
        let rec = routed.switch_log.get(adj.switch).ok_or_else(|| {
            Error::InvalidCircuit(format!("adjustment refers to missing switch {}", adj.switch))
        })?;
        before.entry(rec.moment).or_default().push(adj);
    }

    let mut offset = plan.initial.clone();
    let mut site: Vec<usize> = routed.initial_mapping.sites().to_vec();
    let mut moments = Vec::with_capacity(routed.circuit.moments.len() + plan.adjustments.len());
    let mut shift = vec![0usize; routed.circuit.moments.len()];
    for (i, m) in routed.circuit.moments.iter().enumerate() {
        if let Some(adjs) = before.get(&i) {
            let gates = adjs
                .iter()
                .map(|a| {
                    let g = Gate::Move {
                        qubit: a.qubit,
                        from_site: site[a.qubit],
                        to_site: site[a.qubit],
                        from_offset: offset[a.qubit],
                        to_offset: a.to,
                    };
                    offset[a.qubit] = a.to;
                    g
                })
                .collect();
            moments.push(Moment::new(gates));
        }
        shift[i] = moments.len() - i;
        let gates = m
            .gates
            .iter()
            .map(|g| match *g {
                Gate::Move {
                    qubit,
                    from_site,
                    to_site,
                    ..
                } => {
                    site[qubit] = to_site;
                    Gate::Move {
                        qubit,
                        from_site,
                        to_site,
                        from_offset: offset[qubit],
                        to_offset: offset[qubit],
                    }
                }
                other => other,
            })
            .collect();
        moments.push(Moment::new(gates));
    }

    let mut out_layout = layout.clone();
    for (q, &o) in plan.initial.iter().enumerate() {
        out_layout.offsets[routed.initial_mapping.site_of(q)] = o;
    }
    let mut out = routed.clone();
    out.circuit = Circuit { num_qubits: n, moments };
    out.initial_offsets = plan.initial.clone();
    out.adjustments = plan.adjustments.len();
    for rec in &mut out.switch_log {
        rec.moment += shift[rec.moment];
    }
    Ok((out, out_layout))
}
