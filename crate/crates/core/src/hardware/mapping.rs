use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};

use super::layout::Layout;

/// Bijection between program qubits and the sites they occupy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MappingRepr", into = "MappingRepr")]
pub struct Mapping {
    site_of: Vec<usize>,
    qubit_at: Vec<Option<usize>>,
}

#[derive(Serialize, Deserialize)]
struct MappingRepr {
    num_sites: usize,
    qubit_to_site: Vec<usize>,
}

impl TryFrom<MappingRepr> for Mapping {
    type Error = Error;
    fn try_from(r: MappingRepr) -> Result<Self> {
        Mapping::new(r.qubit_to_site, r.num_sites)
    }
}

impl From<Mapping> for MappingRepr {
    fn from(m: Mapping) -> Self {
        MappingRepr {
            num_sites: m.qubit_at.len(),
            qubit_to_site: m.site_of,
        }
    }
}

impl Mapping {
    /// `site_of[q]` is the site of qubit `q`.
    pub fn new(site_of: Vec<usize>, num_sites: usize) -> Result<Self> {
        if site_of.len() > num_sites {
            return Err(Error::InsufficientSites {
                sites: num_sites,
                qubits: site_of.len(),
            });
        }
        let mut qubit_at = vec![None; num_sites];
        for (q, &s) in site_of.iter().enumerate() {
            if s >= num_sites || qubit_at[s].is_some() {
                return Err(Error::InvalidCircuit(format!("mapping is not injective at site {s}")));
            }
            qubit_at[s] = Some(q);
        }
        Ok(Self { site_of, qubit_at })
    }

    pub fn num_qubits(&self) -> usize {
        self.site_of.len()
    }

    pub fn num_sites(&self) -> usize {
        self.qubit_at.len()
    }

    pub fn site_of(&self, q: usize) -> usize {
        self.site_of[q]
    }

    pub fn qubit_at(&self, site: usize) -> Option<usize> {
        self.qubit_at[site]
    }

    pub fn is_occupied(&self, site: usize) -> bool {
        self.qubit_at[site].is_some()
    }

    pub fn sites(&self) -> &[usize] {
        &self.site_of
    }

    /// Exchanges whatever occupies two sites.
    pub fn exchange_sites(&mut self, a: usize, b: usize) {
        let (qa, qb) = (self.qubit_at[a], self.qubit_at[b]);
        self.qubit_at[a] = qb;
        self.qubit_at[b] = qa;
        if let Some(q) = qa {
            self.site_of[q] = b;
        }
        if let Some(q) = qb {
            self.site_of[q] = a;
        }
    }

    /// Moves a qubit to an empty site.
    pub fn relocate(&mut self, q: usize, to: usize) {
        debug_assert!(self.qubit_at[to].is_none());
        self.qubit_at[self.site_of[q]] = None;
        self.qubit_at[to] = Some(q);
        self.site_of[q] = to;
    }
}

/// Line placement.
///
/// Builds an interaction graph where a CZ in moment `t` adds `1 / (1 + t)` to
/// its pair, grows heavy paths greedily from the heaviest edge at both ends,
/// concatenates them (plus any idle qubits) and lays the result along the
/// snake order of the grid.
pub fn initial_mapping(c: &Circuit, layout: &Layout) -> Result<Mapping> {
    let n = c.num_qubits;
    if n > layout.num_sites() {
        return Err(Error::InsufficientSites {
            sites: layout.num_sites(),
            qubits: n,
        });
    }
    let mut w = vec![vec![0.0f64; n]; n];
    for (t, m) in c.moments.iter().enumerate() {
        for g in &m.gates {
            if let Gate::Cz { a, b } | Gate::Swap { a, b } = *g {
                let add = 1.0 / (1.0 + t as f64);
                w[a][b] += add;
                w[b][a] += add;
            }
        }
    }
    let mut used = vec![false; n];
    let mut order = Vec::with_capacity(n);
    loop {
        // Heaviest edge among unused qubits; earliest pair wins ties.
        let mut best: Option<(f64, usize, usize)> = None;
        for a in 0..n {
            for b in a + 1..n {
                if !used[a] && !used[b] && w[a][b] > 0.0 && best.is_none_or(|(bw, _, _)| w[a][b] > bw) {
                    best = Some((w[a][b], a, b));
                }
            }
        }
        let Some((_, a, b)) = best else { break };
        used[a] = true;
        used[b] = true;
        let mut path = std::collections::VecDeque::from([a, b]);
        loop {
            let mut ext: Option<(f64, usize, bool)> = None;
            for (end, back) in [(*path.back().unwrap_or(&a), true), (*path.front().unwrap_or(&a), false)] {
                for q in 0..n {
                    if !used[q] && w[end][q] > 0.0 && ext.is_none_or(|(bw, _, _)| w[end][q] > bw) {
                        ext = Some((w[end][q], q, back));
                    }
                }
            }
            let Some((_, q, back)) = ext else { break };
            used[q] = true;
            if back {
                path.push_back(q);
            } else {
                path.push_front(q);
            }
        }
        order.extend(path);
    }
    order.extend((0..n).filter(|&q| !used[q]));
    let snake = layout.snake_order();
    let mut site_of = vec![0; n];
    for (k, &q) in order.iter().enumerate() {
        site_of[q] = snake[k];
    }
    Mapping::new(site_of, layout.num_sites())
}
