use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use super::layout::{distance, Layout, Point};

/// Undirected site graph with Euclidean edge weights.
#[derive(Debug, Clone, PartialEq)]
pub struct SiteGraph {
    num_sites: usize,
    /// Sorted `(neighbour, weight)` lists.
    adj: Vec<Vec<(usize, f64)>>,
}

impl SiteGraph {
    fn from_pred(layout: &Layout, pred: impl Fn(usize, usize, f64) -> bool) -> Self {
        let n = layout.num_sites();
        let mut adj = vec![Vec::new(); n];
        for i in 0..n {
            for j in i + 1..n {
                let d = distance(layout.grid_point(i), layout.grid_point(j));
                if pred(i, j, d) {
                    adj[i].push((j, d));
                    adj[j].push((i, d));
                }
            }
        }
        for a in &mut adj {
            a.sort_by_key(|e| e.0);
        }
        Self { num_sites: n, adj }
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(i, j, weight)` with `i < j`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(i, a)| a.iter().filter(move |e| e.0 > i).map(move |&(j, w)| (i, j, w)))
            .collect()
    }

    pub fn neighbors(&self, site: usize) -> &[(usize, f64)] {
        &self.adj[site]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search_by_key(&b, |e| e.0).is_ok()
    }

    /// Hop distances from `src` through sites accepted by `allowed`.
    pub fn hops_from(&self, src: usize, allowed: impl Fn(usize) -> bool) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.num_sites];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or(0);
            for &(v, _) in &self.adj[u] {
                if dist[v].is_none() && allowed(v) {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Shortest weighted path `src .. dst` through allowed sites, ties broken
    /// towards smaller site ids. Endpoints need not be allowed.
    pub fn shortest_path(&self, src: usize, dst: usize, allowed: impl Fn(usize) -> bool) -> Option<Vec<usize>> {
        #[derive(PartialEq)]
        struct Entry(f64, usize);
        impl Eq for Entry {}
        impl Ord for Entry {
            fn cmp(&self, o: &Self) -> Ordering {
                o.0.total_cmp(&self.0).then(o.1.cmp(&self.1))
            }
        }
        impl PartialOrd for Entry {
            fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
                Some(self.cmp(o))
            }
        }
        let mut dist = vec![f64::INFINITY; self.num_sites];
        let mut prev = vec![usize::MAX; self.num_sites];
        dist[src] = 0.0;
        let mut heap = BinaryHeap::from([Entry(0.0, src)]);
        while let Some(Entry(d, u)) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            if u == dst {
                break;
            }
            for &(v, w) in &self.adj[u] {
                if v != dst && !allowed(v) {
                    continue;
                }
                let nd = d + w;
                if nd < dist[v] - 1e-12 || (nd <= dist[v] + 1e-12 && prev[v] != usize::MAX && u < prev[v]) {
                    dist[v] = nd;
                    prev[v] = u;
                    heap.push(Entry(nd, v));
                }
            }
        }
        if !dist[dst].is_finite() {
            return None;
        }
        let mut path = vec![dst];
        while *path.last()? != src {
            path.push(prev[*path.last()?]);
        }
        path.reverse();
        Some(path)
    }
}

/// Sites closer than the blockade radius, strictly.
pub fn build_connectivity_graph(layout: &Layout, r_b: f64) -> SiteGraph {
    SiteGraph::from_pred(layout, |_, _, d| d < r_b)
}

fn segment_point_distance(a: Point, b: Point, p: Point) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    };
    distance((a.0 + t * dx, a.1 + t * dy), p)
}

/// Direct relocations: sites at most `cutoff` apart whose connecting segment
/// stays at least `d_thr` from every other grid point.
pub fn build_movement_graph(layout: &Layout, d_thr: f64, cutoff: f64) -> SiteGraph {
    let n = layout.num_sites();
    SiteGraph::from_pred(layout, |i, j, d| {
        d <= cutoff + 1e-9
            && (0..n).filter(|&k| k != i && k != j).all(|k| {
                segment_point_distance(layout.grid_point(i), layout.grid_point(j), layout.grid_point(k)) >= d_thr
            })
    })
}
