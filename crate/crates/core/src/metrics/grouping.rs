use std::collections::VecDeque;

use crate::circuit::{move_units, Circuit, Gate, Moment, MomentKind, Offset, Operands};
use crate::hardware::{cz_pairs_compatible, moves_compatible, Layout, MovePath, Point};

/// Where every wire's atom starts, plus the rules that decide which
/// two-qubit gates and moves may share a moment.
#[derive(Debug, Clone)]
pub struct Placement<'a> {
    pub layout: &'a Layout,
    pub sites: Vec<usize>,
    pub offsets: Vec<Offset>,
    pub r_b: f64,
    /// Treat exactly reversed move pairs as a single idealised exchange.
    pub allow_exchange: bool,
}

impl Placement<'_> {
    fn point(&self, q: usize) -> Point {
        self.layout.point_with(self.sites[q], self.offsets[q])
    }

    fn advance(&mut self, gates: &[Gate]) {
        for g in gates {
            if let Gate::Move {
                qubit,
                to_site,
                to_offset,
                ..
            } = *g
            {
                self.sites[qubit] = to_site;
                self.offsets[qubit] = to_offset;
            }
        }
    }

    fn path(&self, g: &Gate) -> Option<MovePath> {
        match *g {
            Gate::Move {
                qubit,
                from_site,
                to_site,
                from_offset,
                to_offset,
            } => Some(MovePath {
                qubit,
                from: self.layout.point_with(from_site, from_offset),
                to: self.layout.point_with(to_site, to_offset),
            }),
            _ => None,
        }
    }

    /// Whether every gate of `unit` can join `bucket`. Moves in the same
    /// moment may not touch a site another move of that moment uses.
    fn fits(&self, bucket: &[Gate], unit: &[Gate]) -> bool {
        let sites = |gs: &[Gate]| -> Vec<usize> {
            gs.iter()
                .filter_map(|g| match *g {
                    Gate::Move { from_site, to_site, .. } => Some([from_site, to_site]),
                    _ => None,
                })
                .flatten()
                .collect()
        };
        let used = sites(bucket);
        if sites(unit).iter().any(|s| used.contains(s)) {
            return false;
        }
        let mut trial = bucket.to_vec();
        for g in unit {
            if !self.fits_gate(&trial, g) {
                return false;
            }
            trial.push(*g);
        }
        if !unit.iter().any(|g| matches!(g, Gate::Move { .. })) {
            return true;
        }
        let paths: Vec<MovePath> = trial.iter().filter_map(|x| self.path(x)).collect();
        let stationary: Vec<Point> = (0..self.sites.len())
            .filter(|&q| paths.iter().all(|p| p.qubit != q))
            .map(|q| self.point(q))
            .collect();
        moves_compatible(&paths, &stationary, self.layout.d_thr, self.allow_exchange)
    }

    /// Qubit disjointness and blockade separation of one gate against `bucket`.
    fn fits_gate(&self, bucket: &[Gate], g: &Gate) -> bool {
        let ops = g.operands();
        if bucket.iter().any(|b| b.operands().overlaps(&ops)) {
            return false;
        }
        match (*g, ops) {
            (Gate::Cz { .. }, Operands::Two(a, b)) => bucket.iter().all(|other| match other.operands() {
                Operands::Two(c, d) if matches!(other, Gate::Cz { .. }) => {
                    cz_pairs_compatible([self.point(a), self.point(b)], [self.point(c), self.point(d)], self.r_b)
                }
                _ => true,
            }),
            (Gate::Move { .. }, _) => true,
            _ => false,
        }
    }
}

/// Repacks every run of consecutive CZ/Move moments into as few moments as
/// the blockade and trap-clearance rules allow.
///
/// Units keep their relative order; each one joins the most recent moment
/// when it touches none of its qubits and is compatible with everything in
/// it, otherwise it opens a new moment. A unit is a single gate, or the two
/// halves of a switch (moves in one moment with swapped sites).
/// Single-qubit and global layers are left as they are.
pub fn group_parallel(c: &Circuit, mut placement: Placement<'_>) -> Circuit {
    let mut out = Circuit::new(c.num_qubits);
    let mut run: Vec<Vec<Gate>> = Vec::new();
    let flush = |run: &mut Vec<Vec<Gate>>, out: &mut Circuit, placement: &mut Placement<'_>| {
        let mut bucket: Vec<Gate> = Vec::new();
        let mut queue: VecDeque<Vec<Gate>> = run.drain(..).collect();
        while let Some(unit) = queue.pop_front() {
            if placement.fits(&bucket, &unit) {
                bucket.extend(unit);
                continue;
            }
            if !bucket.is_empty() {
                placement.advance(&bucket);
                out.moments.push(Moment::new(std::mem::take(&mut bucket)));
                queue.push_front(unit);
            } else if unit.len() > 1 {
                // A switch the trap rules cannot run at once is done move by move.
                for g in unit.into_iter().rev() {
                    queue.push_front(vec![g]);
                }
            } else {
                bucket.extend(unit);
            }
        }
        if !bucket.is_empty() {
            placement.advance(&bucket);
            out.moments.push(Moment::new(bucket));
        }
    };
    for m in &c.moments {
        match m.kind() {
            Some(MomentKind::TwoQubitOrMove) => {
                run.extend(move_units(&m.gates));
            }
            None if m.is_empty() => {}
            _ => {
                flush(&mut run, &mut out, &mut placement);
                out.moments.push(m.clone());
            }
        }
    }
    flush(&mut run, &mut out, &mut placement);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(n: usize) -> Layout {
        Layout::new(1, n, 5.0, 1.0)
    }

    fn placement(l: &Layout, n: usize) -> Placement<'_> {
        Placement {
            layout: l,
            sites: (0..n).collect(),
            offsets: vec![Offset::None; n],
            r_b: 7.0,
            allow_exchange: false,
        }
    }

    #[test]
    fn far_apart_czs_share_a_moment() {
        let l = line(8);
        let c = Circuit {
            num_qubits: 8,
            moments: vec![
                Moment::new(vec![Gate::Cz { a: 0, b: 1 }]),
                Moment::new(vec![Gate::Cz { a: 2, b: 3 }]),
                Moment::new(vec![Gate::Cz { a: 5, b: 6 }]),
            ],
        };
        let g = group_parallel(&c, placement(&l, 8));
        // (0,1) and (2,3) are 5 um apart; (5,6) would also fit next to (0,1) but
        // the greedy pass only looks at the newest moment.
        assert_eq!(g.moments.len(), 2);
        assert_eq!(g.moments[1].gates.len(), 2);
    }

    #[test]
    fn blockade_conflicts_are_split() {
        let l = line(4);
        let c = Circuit {
            num_qubits: 4,
            moments: vec![Moment::new(vec![Gate::Cz { a: 0, b: 1 }, Gate::Cz { a: 2, b: 3 }])],
        };
        assert_eq!(group_parallel(&c, placement(&l, 4)).moments.len(), 2);
    }

    #[test]
    fn single_qubit_layers_are_barriers() {
        let l = line(6);
        let c = Circuit {
            num_qubits: 6,
            moments: vec![
                Moment::new(vec![Gate::Cz { a: 0, b: 1 }]),
                Moment::new(vec![Gate::Rz { qubit: 2, lambda: 1.0 }]),
                Moment::new(vec![Gate::Cz { a: 4, b: 5 }]),
            ],
        };
        assert_eq!(group_parallel(&c, placement(&l, 6)), c);
    }

    #[test]
    fn exchange_exemption() {
        let l = line(2);
        let mv = |qubit, from_site, to_site| Gate::Move {
            qubit,
            from_site,
            to_site,
            from_offset: Offset::None,
            to_offset: Offset::None,
        };
        let c = Circuit {
            num_qubits: 2,
            moments: vec![Moment::new(vec![mv(0, 0, 1), mv(1, 1, 0)])],
        };
        assert_eq!(group_parallel(&c, placement(&l, 2)).moments.len(), 2);
        let mut p = placement(&l, 2);
        p.allow_exchange = true;
        assert_eq!(group_parallel(&c, p).moments.len(), 1);
    }
}
