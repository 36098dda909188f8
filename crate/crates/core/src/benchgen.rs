//! Generators for the standard benchmark circuits, written in `{U3, Rz, CZ}`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::angle::wrap;
use crate::circuit::{schedule_asap, Circuit, Gate};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Benchmark {
    Ghz,
    Qft,
    Cuccaro,
    Cnx,
    Vqaoa,
    Hamsim,
}

impl Benchmark {
    pub const ALL: [Benchmark; 6] = [
        Benchmark::Ghz,
        Benchmark::Qft,
        Benchmark::Cuccaro,
        Benchmark::Cnx,
        Benchmark::Vqaoa,
        Benchmark::Hamsim,
    ];

    /// Whether `n` qubits is a legal size.
    pub fn accepts(self, n: usize) -> bool {
        match self {
            Benchmark::Cnx => n >= 3 && !n.is_multiple_of(2),
            Benchmark::Cuccaro => n >= 4 && n.is_multiple_of(2),
            _ => n >= 2,
        }
    }
}

impl fmt::Display for Benchmark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Benchmark::Ghz => "ghz",
            Benchmark::Qft => "qft",
            Benchmark::Cuccaro => "cuccaro",
            Benchmark::Cnx => "cnx",
            Benchmark::Vqaoa => "vqaoa",
            Benchmark::Hamsim => "hamsim",
        })
    }
}

impl FromStr for Benchmark {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Benchmark::ALL
            .into_iter()
            .find(|b| b.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown benchmark `{s}` (expected ghz, qft, cuccaro, cnx, vqaoa or hamsim)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchmarkSpec {
    pub name: Benchmark,
    pub n: usize,
    pub seed: u64,
}

/// Gate-list builder with the usual textbook gates expanded in place.
struct Builder {
    n: usize,
    gates: Vec<Gate>,
}

impl Builder {
    fn new(n: usize) -> Self {
        Self { n, gates: Vec::new() }
    }

    fn u3(&mut self, q: usize, theta: f64, phi: f64, lambda: f64) {
        self.gates.push(Gate::U3 {
            qubit: q,
            theta: wrap(theta),
            phi: wrap(phi),
            lambda: wrap(lambda),
        });
    }

    fn h(&mut self, q: usize) {
        self.u3(q, PI / 2.0, 0.0, PI);
    }

    fn rz(&mut self, q: usize, lambda: f64) {
        let lambda = wrap(lambda);
        if lambda != 0.0 {
            self.gates.push(Gate::Rz { qubit: q, lambda });
        }
    }

    fn rx(&mut self, q: usize, theta: f64) {
        self.u3(q, theta, -PI / 2.0, PI / 2.0);
    }

    fn cx(&mut self, c: usize, t: usize) {
        self.h(t);
        self.gates.push(Gate::Cz { a: c, b: t });
        self.h(t);
    }

    /// Controlled phase `diag(1, 1, 1, e^{i lambda})`.
    fn cp(&mut self, lambda: f64, a: usize, b: usize) {
        self.rz(a, lambda / 2.0);
        self.cx(a, b);
        self.rz(b, -lambda / 2.0);
        self.cx(a, b);
        self.rz(b, lambda / 2.0);
    }

    fn rzz(&mut self, theta: f64, a: usize, b: usize) {
        self.cx(a, b);
        self.rz(b, theta);
        self.cx(a, b);
    }

    fn swap(&mut self, a: usize, b: usize) {
        self.cx(a, b);
        self.cx(b, a);
        self.cx(a, b);
    }

    /// Toffoli with six CX gates.
    fn ccx(&mut self, a: usize, b: usize, t: usize) {
        let (tg, tdg) = (PI / 4.0, -PI / 4.0);
        self.h(t);
        self.cx(b, t);
        self.rz(t, tdg);
        self.cx(a, t);
        self.rz(t, tg);
        self.cx(b, t);
        self.rz(t, tdg);
        self.cx(a, t);
        self.rz(b, tg);
        self.rz(t, tg);
        self.h(t);
        self.cx(a, b);
        self.rz(a, tg);
        self.rz(b, tdg);
        self.cx(a, b);
    }

    fn finish(self) -> Circuit {
        schedule_asap(&Circuit::from_gates(self.n, self.gates))
    }
}

fn ghz(n: usize) -> Circuit {
    let mut b = Builder::new(n);
    b.h(0);
    for i in 1..n {
        b.cx(i - 1, i);
    }
    b.finish()
}

/// Little-endian QFT: `|x> -> sum_y e^{2 pi i x y / 2^n} |y> / sqrt(2^n)`.
fn qft(n: usize) -> Circuit {
    let mut b = Builder::new(n);
    for j in (0..n).rev() {
        b.h(j);
        for k in (0..j).rev() {
            b.cp(PI / f64::powi(2.0, (j - k) as i32), k, j);
        }
    }
    for i in 0..n / 2 {
        b.swap(i, n - 1 - i);
    }
    b.finish()
}

/// Ripple-carry adder on `m = (n - 2) / 2` bits.
///
/// Qubit 0 is the carry in, `b_i = 1 + 2i`, `a_i = 2 + 2i`, and qubit
/// `n - 1` receives the carry out. Computes `b <- a + b`.
fn cuccaro(n: usize) -> Circuit {
    let m = (n - 2) / 2;
    let a = |i: usize| 2 + 2 * i;
    let bq = |i: usize| 1 + 2 * i;
    let mut b = Builder::new(n);
    let maj = |b: &mut Builder, c: usize, y: usize, x: usize| {
        b.cx(x, y);
        b.cx(x, c);
        b.ccx(c, y, x);
    };
    let uma = |b: &mut Builder, c: usize, y: usize, x: usize| {
        b.ccx(c, y, x);
        b.cx(x, c);
        b.cx(c, y);
    };
    maj(&mut b, 0, bq(0), a(0));
    for i in 1..m {
        maj(&mut b, a(i - 1), bq(i), a(i));
    }
    b.cx(a(m - 1), n - 1);
    for i in (1..m).rev() {
        uma(&mut b, a(i - 1), bq(i), a(i));
    }
    uma(&mut b, 0, bq(0), a(0));
    b.finish()
}

/// Multi-controlled X with a V-chain of Toffolis.
///
/// `k = (n + 1) / 2` controls on qubits `0..k`, `k - 2` ancillas after them
/// (starting and ending in `|0>`), target on qubit `n - 1`.
fn cnx(n: usize) -> Circuit {
    let k = n.div_ceil(2);
    let anc = |i: usize| k + i;
    let target = n - 1;
    let mut b = Builder::new(n);
    if k == 2 {
        b.ccx(0, 1, target);
        return b.finish();
    }
    let mut compute = vec![(0, 1, anc(0))];
    for i in 2..k - 1 {
        compute.push((i, anc(i - 2), anc(i - 1)));
    }
    for &(x, y, t) in &compute {
        b.ccx(x, y, t);
    }
    b.ccx(k - 1, anc(k - 3), target);
    for &(x, y, t) in compute.iter().rev() {
        b.ccx(x, y, t);
    }
    b.finish()
}

/// Seeded simple graph where every vertex has degree 3, except that one
/// vertex has degree 2 when `n` is odd; small `n` falls back to the complete
/// graph.
pub fn near_regular_graph(n: usize, rng: &mut impl Rng) -> Vec<(usize, usize)> {
    if n <= 4 {
        return (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    }
    let mut degree = vec![3usize; n];
    if n % 2 == 1 {
        degree[n - 1] = 2;
    }
    for _ in 0..10_000 {
        let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, degree[v])).collect();
        stubs.shuffle(rng);
        let mut edges: Vec<(usize, usize)> = stubs
            .chunks(2)
            .map(|p| (p[0].min(p[1]), p[0].max(p[1])))
            .collect();
        edges.sort_unstable();
        let simple = edges.iter().all(|&(a, b)| a != b) && edges.windows(2).all(|w| w[0] != w[1]);
        if simple {
            return edges;
        }
    }
    // Unreachable in practice: the pairing model succeeds with probability
    // about e^{-2} per attempt.
    (0..n).map(|i| (i.min((i + 1) % n), i.max((i + 1) % n))).collect()
}

/// One QAOA layer for MaxCut with seeded angles.
fn vqaoa(n: usize, seed: u64) -> Circuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = near_regular_graph(n, &mut rng);
    let gamma = wrap(rng.random_range(-PI..PI));
    let beta = wrap(rng.random_range(-PI..PI));
    let mut b = Builder::new(n);
    for q in 0..n {
        b.h(q);
    }
    for &(x, y) in &edges {
        b.rzz(2.0 * gamma, x, y);
    }
    for q in 0..n {
        b.rx(q, 2.0 * beta);
    }
    b.finish()
}

/// One first-order Trotter step of `H = J sum Z_i Z_{i+1} + h sum X_i`.
fn hamsim(n: usize) -> Circuit {
    const J: f64 = 1.0;
    const H: f64 = 1.0;
    const DT: f64 = 0.2;
    let mut b = Builder::new(n);
    for i in 0..n - 1 {
        b.rzz(2.0 * J * DT, i, i + 1);
    }
    for q in 0..n {
        b.rx(q, 2.0 * H * DT);
    }
    b.finish()
}

/// Builds a benchmark circuit. Deterministic in `(name, n, seed)`; only VQAOA
/// uses the seed.
pub fn generate(spec: &BenchmarkSpec) -> Result<Circuit> {
    let n = spec.n;
    if !spec.name.accepts(n) {
        let need = match spec.name {
            Benchmark::Cnx => "an odd qubit count of at least 3",
            Benchmark::Cuccaro => "an even qubit count of at least 4",
            _ => "at least 2 qubits",
        };
        return Err(Error::InvalidBenchmark(format!("{} needs {need}, got {n}", spec.name)));
    }
    Ok(match spec.name {
        Benchmark::Ghz => ghz(n),
        Benchmark::Qft => qft(n),
        Benchmark::Cuccaro => cuccaro(n),
        Benchmark::Cnx => cnx(n),
        Benchmark::Vqaoa => vqaoa(n, spec.seed),
        Benchmark::Hamsim => hamsim(n),
    })
}
