//! Making every CZ executable under the blockade constraint, either with SWAP
//! gates or by physically exchanging atoms.
//!
//! Wire conventions of the routed circuit:
//!
//! * SWAP routing: wire `w` is the atom that starts with program qubit `w`;
//!   atoms never leave their sites and SWAP gates exchange qubit states.
//! * Movement routing: wire `q` is program qubit `q` and its atom travels with
//!   it; Move gates are the identity on the quantum state.

mod check;
mod displacement;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate, Moment, MomentKind, Offset, Operands};
use crate::error::{Error, Result};
use crate::hardware::{distance, Layout, Mapping, SiteGraph};

pub use check::{check_routed, RoutingViolation};
pub use displacement::{apply_displacements, plan_displacements, Adjustment, DisplacementPlan, DisplacementStyle};

/// Routing strategy.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Router {
    #[default]
    Swaps,
    NaiveMove,
    Move,
}

impl Router {
    pub fn uses_movement(self) -> bool {
        self != Router::Swaps
    }
}

impl fmt::Display for Router {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Router::Swaps => "swaps",
            Router::NaiveMove => "naive-move",
            Router::Move => "move",
        })
    }
}

impl FromStr for Router {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "swaps" => Ok(Router::Swaps),
            "naive-move" => Ok(Router::NaiveMove),
            "move" => Ok(Router::Move),
            _ => Err(format!("unknown router `{s}` (expected swaps, naive-move or move)")),
        }
    }
}

/// One exchange of two atoms' sites (or, for SWAP routing, of two qubits'
/// atoms).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwitchRecord {
    /// Program qubits at `sites.0` and `sites.1` before the exchange.
    pub qubits: (usize, usize),
    pub sites: (usize, usize),
    /// Moment of the routed circuit holding the exchange.
    pub moment: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoutedCircuit {
    pub router: Router,
    pub circuit: Circuit,
    pub initial_mapping: Mapping,
    pub final_mapping: Mapping,
    pub switch_log: Vec<SwitchRecord>,
    /// Exchanges made by the path-relocation fallback of the improved router.
    pub fallback_switches: usize,
    /// Initial displacement of each program qubit's atom.
    pub initial_offsets: Vec<Offset>,
    /// Mid-circuit displacement changes.
    pub adjustments: usize,
}

/// Everything except the circuit, for writing next to the IR.
#[derive(Debug, Clone, Serialize)]
pub struct MappingSidecar<'a> {
    pub router: Router,
    pub initial_mapping: &'a Mapping,
    pub final_mapping: &'a Mapping,
    pub initial_offsets: &'a [Offset],
    pub switch_log: &'a [SwitchRecord],
    pub fallback_switches: usize,
    pub adjustments: usize,
}

impl RoutedCircuit {
    pub fn routing_ops(&self) -> usize {
        self.switch_log.len()
    }

    /// Permutation to pass to [`crate::oracle::unitary_of`] so the routed
    /// circuit compares equal to its source.
    pub fn output_permutation(&self) -> Vec<usize> {
        let n = self.circuit.num_qubits;
        if self.router.uses_movement() {
            return (0..n).collect();
        }
        // Program qubit q ends on the atom whose home site is final(q).
        let mut p = vec![0; n];
        for q in 0..n {
            let atom = self
                .initial_mapping
                .qubit_at(self.final_mapping.site_of(q))
                .expect("final sites are home sites of atoms");
            p[atom] = q;
        }
        p
    }

    pub fn sidecar(&self) -> MappingSidecar<'_> {
        MappingSidecar {
            router: self.router,
            initial_mapping: &self.initial_mapping,
            final_mapping: &self.final_mapping,
            initial_offsets: &self.initial_offsets,
            switch_log: &self.switch_log,
            fallback_switches: self.fallback_switches,
            adjustments: self.adjustments,
        }
    }
}

/// Geometry shared by all routers.
#[derive(Debug, Clone, Copy)]
pub struct RoutingContext<'a> {
    pub layout: &'a Layout,
    pub connectivity: &'a SiteGraph,
    pub movement: &'a SiteGraph,
}

struct State<'a> {
    ctx: RoutingContext<'a>,
    router: Router,
    initial: Mapping,
    mapping: Mapping,
    out: Vec<Moment>,
    log: Vec<SwitchRecord>,
    fallbacks: usize,
}

impl State<'_> {
    fn point(&self, site: usize) -> (f64, f64) {
        self.ctx.layout.grid_point(site)
    }

    fn wire(&self, q: usize) -> usize {
        match self.router {
            Router::Swaps => self
                .initial
                .qubit_at(self.mapping.site_of(q))
                .expect("occupied sites never change under SWAP routing"),
            _ => q,
        }
    }

    fn adjacent(&self, a: usize, b: usize) -> bool {
        self.ctx
            .connectivity
            .has_edge(self.mapping.site_of(a), self.mapping.site_of(b))
    }

    fn exchange(&mut self, sa: usize, sb: usize) {
        let qa = self.mapping.qubit_at(sa).expect("exchange between occupied sites");
        let qb = self.mapping.qubit_at(sb).expect("exchange between occupied sites");
        let moment = self.out.len();
        let gates = match self.router {
            Router::Swaps => vec![Gate::Swap {
                a: self.initial.qubit_at(sa).unwrap_or(qa),
                b: self.initial.qubit_at(sb).unwrap_or(qb),
            }],
            _ => vec![
                Gate::Move {
                    qubit: qa,
                    from_site: sa,
                    to_site: sb,
                    from_offset: Offset::None,
                    to_offset: Offset::None,
                },
                Gate::Move {
                    qubit: qb,
                    from_site: sb,
                    to_site: sa,
                    from_offset: Offset::None,
                    to_offset: Offset::None,
                },
            ],
        };
        self.out.push(Moment::new(gates));
        self.log.push(SwitchRecord {
            qubits: (qa, qb),
            sites: (sa, sb),
            moment,
        });
        self.mapping.exchange_sites(sa, sb);
    }

    /// Best connectivity-graph exchange for bringing `a` and `b` together.
    ///
    /// Ranks by remaining hop distance, then Euclidean operand distance, then
    /// edge length, then site ids.
    fn hop_step(&self, a: usize, b: usize) -> Result<(usize, usize)> {
        let (sa, sb) = (self.mapping.site_of(a), self.mapping.site_of(b));
        let occ = |s: usize| self.mapping.is_occupied(s);
        let from_a = self.ctx.connectivity.hops_from(sa, occ);
        let from_b = self.ctx.connectivity.hops_from(sb, occ);
        if from_a[sb].is_none() {
            return Err(Error::RoutingImpossible(format!(
                "qubits {a} and {b} sit in disconnected parts of the connectivity graph"
            )));
        }
        type Key = (usize, f64, f64, (usize, usize));
        let mut best: Option<Key> = None;
        for (moving, fixed_site, hops) in [(sa, sb, &from_b), (sb, sa, &from_a)] {
            for &(t, w) in self.ctx.connectivity.neighbors(moving) {
                if t == fixed_site || !occ(t) {
                    continue;
                }
                let Some(h) = hops[t] else { continue };
                let key = (h, distance(self.point(t), self.point(fixed_site)), w, (moving.min(t), moving.max(t)));
                if best.as_ref().is_none_or(|b| key_lt(&key, b)) {
                    best = Some(key);
                }
            }
        }
        best.map(|k| k.3).ok_or_else(|| {
            Error::RoutingImpossible(format!("no exchange brings qubits {a} and {b} closer"))
        })
    }

    /// Best movement-graph exchange that strictly shrinks the Euclidean
    /// distance between `a` and `b`, if any.
    fn move_step(&self, a: usize, b: usize) -> Option<(usize, usize)> {
        let (sa, sb) = (self.mapping.site_of(a), self.mapping.site_of(b));
        let current = distance(self.point(sa), self.point(sb));
        let mut best: Option<(f64, f64, (usize, usize))> = None;
        for (moving, fixed_site) in [(sa, sb), (sb, sa)] {
            for &(t, w) in self.ctx.movement.neighbors(moving) {
                if !self.mapping.is_occupied(t) {
                    continue;
                }
                // Exchanging the operands with each other never helps.
                let d = if t == fixed_site {
                    current
                } else {
                    distance(self.point(t), self.point(fixed_site))
                };
                if d >= current - 1e-9 {
                    continue;
                }
                let key = (d, w, (moving.min(t), moving.max(t)));
                let better = match &best {
                    None => true,
                    Some(b) => {
                        key.0 < b.0 - 1e-9
                            || ((key.0 - b.0).abs() <= 1e-9
                                && (key.1 < b.1 - 1e-9 || ((key.1 - b.1).abs() <= 1e-9 && key.2 < b.2)))
                    }
                };
                if better {
                    best = Some(key);
                }
            }
        }
        best.map(|k| k.2)
    }

    /// Walks `a` along a shortest movement path to the nearest occupied site
    /// that is blockade-adjacent to `b`.
    fn relocate(&mut self, a: usize, b: usize) -> Result<()> {
        let sb = self.mapping.site_of(b);
        let sa = self.mapping.site_of(a);
        let occ = |s: usize| self.mapping.is_occupied(s) && s != sb;
        let mut best: Option<(f64, Vec<usize>)> = None;
        for &(t, _) in self.ctx.connectivity.neighbors(sb) {
            if !self.mapping.is_occupied(t) {
                continue;
            }
            if let Some(path) = self.ctx.movement.shortest_path(sa, t, occ) {
                let len: f64 = path
                    .windows(2)
                    .map(|w| distance(self.point(w[0]), self.point(w[1])))
                    .sum();
                if best.as_ref().is_none_or(|(l, _)| len < l - 1e-9) {
                    best = Some((len, path));
                }
            }
        }
        let (_, path) = best.ok_or_else(|| {
            Error::RoutingImpossible(format!("no movement path brings qubit {a} next to qubit {b}"))
        })?;
        for w in path.windows(2) {
            self.exchange(w[0], w[1]);
            self.fallbacks += 1;
        }
        Ok(())
    }

    fn make_adjacent(&mut self, a: usize, b: usize) -> Result<()> {
        let mut guard = 0usize;
        while !self.adjacent(a, b) {
            guard += 1;
            if guard > 4 * self.ctx.layout.num_sites() + 16 {
                return Err(Error::RoutingImpossible(format!(
                    "routing qubits {a} and {b} did not converge"
                )));
            }
            match self.router {
                Router::Swaps | Router::NaiveMove => {
                    let (x, y) = self.hop_step(a, b)?;
                    self.exchange(x, y);
                }
                Router::Move => match self.move_step(a, b) {
                    Some((x, y)) => self.exchange(x, y),
                    None => self.relocate(a, b)?,
                },
            }
        }
        Ok(())
    }
}

fn key_lt(a: &(usize, f64, f64, (usize, usize)), b: &(usize, f64, f64, (usize, usize))) -> bool {
    if a.0 != b.0 {
        return a.0 < b.0;
    }
    if (a.1 - b.1).abs() > 1e-9 {
        return a.1 < b.1;
    }
    if (a.2 - b.2).abs() > 1e-9 {
        return a.2 < b.2;
    }
    a.3 < b.3
}

/// Routes `c` with the given strategy, starting from mapping `m0`.
///
/// Two-qubit gates are handled front to back; before a blocked gate, the
/// router inserts exchanges greedily until its operands sit on a
/// connectivity-graph edge.
pub fn route(router: Router, c: &Circuit, m0: &Mapping, ctx: RoutingContext<'_>) -> Result<RoutedCircuit> {
    if m0.num_qubits() != c.num_qubits {
        return Err(Error::DimensionMismatch {
            expected: c.num_qubits,
            found: m0.num_qubits(),
        });
    }
    if m0.num_sites() != ctx.layout.num_sites() {
        return Err(Error::InsufficientSites {
            sites: ctx.layout.num_sites(),
            qubits: m0.num_sites(),
        });
    }
    let mut st = State {
        ctx,
        router,
        initial: m0.clone(),
        mapping: m0.clone(),
        out: Vec::with_capacity(c.moments.len()),
        log: Vec::new(),
        fallbacks: 0,
    };
    for m in &c.moments {
        match m.kind() {
            Some(MomentKind::TwoQubitOrMove) => {
                let mut pending = Vec::new();
                for g in &m.gates {
                    if let Operands::Two(a, b) = g.operands() {
                        if !st.adjacent(a, b) {
                            if !pending.is_empty() {
                                st.out.push(Moment::new(std::mem::take(&mut pending)));
                            }
                            st.make_adjacent(a, b)?;
                        }
                    } else if matches!(g, Gate::Move { .. }) {
                        return Err(Error::InvalidCircuit("input to routing already contains Move gates".into()));
                    }
                    pending.push(g.relabel(|q| st.wire(q)));
                }
                if !pending.is_empty() {
                    st.out.push(Moment::new(pending));
                }
            }
            _ => {
                let moment = Moment::new(m.gates.iter().map(|g| g.relabel(|q| st.wire(q))).collect());
                st.out.push(moment);
            }
        }
    }
    let n = c.num_qubits;
    Ok(RoutedCircuit {
        router,
        circuit: Circuit {
            num_qubits: n,
            moments: st.out,
        },
        initial_mapping: m0.clone(),
        final_mapping: st.mapping,
        switch_log: st.log,
        fallback_switches: st.fallbacks,
        initial_offsets: vec![Offset::None; n],
        adjustments: 0,
    })
}

/// SWAP-gate routing on the connectivity graph.
pub fn route_swaps(c: &Circuit, m0: &Mapping, ctx: RoutingContext<'_>) -> Result<RoutedCircuit> {
    route(Router::Swaps, c, m0, ctx)
}

/// The SWAP router's choices, each carried out as a pair of atom moves.
pub fn route_naive_movement(c: &Circuit, m0: &Mapping, ctx: RoutingContext<'_>) -> Result<RoutedCircuit> {
    route(Router::NaiveMove, c, m0, ctx)
}

/// Exchanges along movement-graph edges chosen by Euclidean progress.
pub fn route_movement(c: &Circuit, m0: &Mapping, ctx: RoutingContext<'_>) -> Result<RoutedCircuit> {
    route(Router::Move, c, m0, ctx)
}
