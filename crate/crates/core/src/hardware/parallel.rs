use crate::circuit::{Gate, Operands};

use super::layout::{distance, Layout, Point};
use super::mapping::Mapping;

const EPS: f64 = 1e-9;

/// Samples per straight move when checking trap clearance.
pub const CLEARANCE_SAMPLES: usize = 64;

/// Straight-line relocation of one atom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MovePath {
    pub qubit: usize,
    pub from: Point,
    pub to: Point,
}

impl MovePath {
    pub fn at(&self, t: f64) -> Point {
        (
            self.from.0 + t * (self.to.0 - self.from.0),
            self.from.1 + t * (self.to.1 - self.from.1),
        )
    }

    pub fn length(&self) -> f64 {
        distance(self.from, self.to)
    }

    /// True when `other` is this path run backwards.
    pub fn is_reverse_of(&self, other: &MovePath) -> bool {
        distance(self.from, other.to) < EPS && distance(self.to, other.from) < EPS
    }
}

/// Two CZ gates may share a moment when every cross pair of atoms is at least
/// one blockade radius apart.
pub fn cz_pairs_compatible(p: [Point; 2], q: [Point; 2], r_b: f64) -> bool {
    p.iter().all(|&a| q.iter().all(|&b| distance(a, b) >= r_b))
}

/// Mapping-level form of [`cz_pairs_compatible`] that also requires disjoint
/// operands.
pub fn can_parallel_cz(g1: &Gate, g2: &Gate, m: &Mapping, layout: &Layout, r_b: f64) -> bool {
    let (Operands::Two(a, b), Operands::Two(c, d)) = (g1.operands(), g2.operands()) else {
        return false;
    };
    if g1.operands().overlaps(&g2.operands()) {
        return false;
    }
    let pos = |q: usize| layout.position(m.site_of(q));
    cz_pairs_compatible([pos(a), pos(b)], [pos(c), pos(d)], r_b)
}

/// AOD and clearance rules for a set of simultaneous moves.
///
/// Atoms starting in the same column must end in the same column, atoms
/// starting in the same row must end in the same row, and under a common
/// linear time parameterisation no moving atom may come within `d_thr` of a
/// stationary atom or another moving atom. With `allow_exchange`, a pair of
/// moves that exactly reverse each other (an idealised atom exchange) is
/// exempt from the mutual clearance check.
pub fn moves_compatible(moves: &[MovePath], stationary: &[Point], d_thr: f64, allow_exchange: bool) -> bool {
    for (i, a) in moves.iter().enumerate() {
        for b in &moves[i + 1..] {
            if a.qubit == b.qubit {
                return false;
            }
            if (a.from.0 - b.from.0).abs() < EPS && (a.to.0 - b.to.0).abs() >= EPS {
                return false;
            }
            if (a.from.1 - b.from.1).abs() < EPS && (a.to.1 - b.to.1).abs() >= EPS {
                return false;
            }
        }
    }
    let limit = d_thr - EPS;
    for k in 0..=CLEARANCE_SAMPLES {
        let t = k as f64 / CLEARANCE_SAMPLES as f64;
        for (i, a) in moves.iter().enumerate() {
            let pa = a.at(t);
            if stationary.iter().any(|&s| distance(pa, s) < limit) {
                return false;
            }
            for b in &moves[i + 1..] {
                if allow_exchange && a.is_reverse_of(b) {
                    continue;
                }
                if distance(pa, b.at(t)) < limit {
                    return false;
                }
            }
        }
    }
    true
}

/// Gate-level form of [`moves_compatible`]; positions come from the Move
/// gates' sites and offsets.
pub fn can_parallel_moves(moves: &[Gate], layout: &Layout, stationary: &[Point]) -> bool {
    let paths: Vec<MovePath> = moves
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
                from: layout.point_with(from_site, from_offset),
                to: layout.point_with(to_site, to_offset),
            }),
            _ => None,
        })
        .collect();
    if paths.len() != moves.len() {
        return false;
    }
    moves_compatible(&paths, stationary, layout.d_thr, false)
}
