use serde::{Deserialize, Serialize};

use crate::circuit::Offset;

/// A position in micrometres.
pub type Point = (f64, f64);

pub fn distance(a: Point, b: Point) -> f64 {
    (a.0 - b.0).hypot(a.1 - b.1)
}

/// Rectangular grid of trap sites.
///
/// Site `row * cols + col` sits at `(col * spacing, row * spacing)`; "up" is
/// `+y` and "right" is `+x`. Each site may carry an initial displacement of
/// `d_thr` up and/or right.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layout {
    pub rows: usize,
    pub cols: usize,
    pub spacing: f64,
    pub d_thr: f64,
    pub offsets: Vec<Offset>,
}

impl Layout {
    pub fn new(rows: usize, cols: usize, spacing: f64, d_thr: f64) -> Self {
        Self {
            rows,
            cols,
            spacing,
            d_thr,
            offsets: vec![Offset::None; rows * cols],
        }
    }

    pub fn num_sites(&self) -> usize {
        self.rows * self.cols
    }

    /// `(row, col)` of a site.
    pub fn coords(&self, site: usize) -> (usize, usize) {
        (site / self.cols, site % self.cols)
    }

    /// Undisplaced grid point of a site.
    pub fn grid_point(&self, site: usize) -> Point {
        let (r, c) = self.coords(site);
        (c as f64 * self.spacing, r as f64 * self.spacing)
    }

    /// Grid point shifted by an offset.
    pub fn point_with(&self, site: usize, offset: Offset) -> Point {
        let (x, y) = self.grid_point(site);
        let (dx, dy) = offset.unit_vector();
        (x + dx * self.d_thr, y + dy * self.d_thr)
    }

    /// Position of a site including its initial displacement.
    pub fn position(&self, site: usize) -> Point {
        self.point_with(site, self.offsets[site])
    }

    /// Sites in boustrophedon order: row 0 left to right, row 1 right to
    /// left, and so on. Consecutive entries are grid neighbours.
    pub fn snake_order(&self) -> Vec<usize> {
        (0..self.rows)
            .flat_map(|r| {
                let row: Vec<usize> = (0..self.cols).map(|c| r * self.cols + c).collect();
                if r % 2 == 0 {
                    row
                } else {
                    row.into_iter().rev().collect()
                }
            })
            .collect()
    }

    /// Smallest distance between two displaced sites.
    pub fn min_pair_distance(&self) -> f64 {
        let n = self.num_sites();
        let mut best = f64::INFINITY;
        for i in 0..n {
            for j in i + 1..n {
                best = best.min(distance(self.position(i), self.position(j)));
            }
        }
        best
    }

    /// True when every pair of sites is at least `spacing - d_thr` apart.
    pub fn is_legal(&self) -> bool {
        self.min_pair_distance() >= self.spacing - self.d_thr - 1e-9
    }
}
