use std::fmt;

use crate::circuit::{Gate, Offset};
use crate::hardware::{Mapping, SiteGraph};

use super::RoutedCircuit;

/// A routed-circuit problem found by [`check_routed`].
#[derive(Debug, Clone, PartialEq)]
pub enum RoutingViolation {
    /// A two-qubit gate whose atoms are not on a connectivity-graph edge.
    NotAdjacent { moment: usize, sites: (usize, usize) },
    /// A Move whose start does not match where the atom is.
    MoveMismatch { moment: usize, qubit: usize },
    /// Two atoms on one site after a moment.
    Collision { moment: usize, site: usize },
    /// Tracked final positions disagree with the recorded final mapping.
    FinalMapping,
}

impl fmt::Display for RoutingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotAdjacent { moment, sites } => {
                write!(f, "moment {moment}: sites {} and {} are not connected", sites.0, sites.1)
            }
            Self::MoveMismatch { moment, qubit } => write!(f, "moment {moment}: move of qubit {qubit} starts elsewhere"),
            Self::Collision { moment, site } => write!(f, "moment {moment}: two atoms on site {site}"),
            Self::FinalMapping => f.write_str("final mapping disagrees with the moves"),
        }
    }
}

/// Replays the routed circuit, tracking where every atom is, and checks that
/// each CZ and SWAP acts on connected sites.
pub fn check_routed(routed: &RoutedCircuit, connectivity: &SiteGraph) -> Result<(), Vec<RoutingViolation>> {
    let mut errs = Vec::new();
    let mut site: Vec<usize> = routed.initial_mapping.sites().to_vec();
    let mut offset: Vec<Offset> = routed.initial_offsets.clone();
    let movement = routed.router.uses_movement();
    // Under SWAP routing, program qubits trade atoms but atoms stay put.
    let mut holder: Vec<usize> = (0..site.len()).collect();
    for (i, m) in routed.circuit.moments.iter().enumerate() {
        let mut moved = false;
        for g in &m.gates {
            match *g {
                Gate::Cz { a, b } | Gate::Swap { a, b } => {
                    let sites = (site[a], site[b]);
                    if !connectivity.has_edge(sites.0, sites.1) {
                        errs.push(RoutingViolation::NotAdjacent { moment: i, sites });
                    }
                    if let Gate::Swap { .. } = g {
                        for h in holder.iter_mut() {
                            if *h == a {
                                *h = b;
                            } else if *h == b {
                                *h = a;
                            }
                        }
                    }
                }
                Gate::Move {
                    qubit,
                    from_site,
                    to_site,
                    from_offset,
                    to_offset,
                } => {
                    if !movement || site[qubit] != from_site || offset[qubit] != from_offset {
                        errs.push(RoutingViolation::MoveMismatch { moment: i, qubit });
                        continue;
                    }
                    site[qubit] = to_site;
                    offset[qubit] = to_offset;
                    moved = true;
                }
                _ => {}
            }
        }
        if moved {
            let mut seen = vec![false; connectivity.num_sites()];
            for &s in &site {
                if std::mem::replace(&mut seen[s], true) {
                    errs.push(RoutingViolation::Collision { moment: i, site: s });
                }
            }
        }
    }
    let final_sites: Vec<usize> = holder.iter().map(|&atom| site[atom]).collect();
    match Mapping::new(final_sites, connectivity.num_sites()) {
        Ok(m) if m == routed.final_mapping => {}
        _ => errs.push(RoutingViolation::FinalMapping),
    }
    if errs.is_empty() {
        Ok(())
    } else {
        Err(errs)
    }
}
