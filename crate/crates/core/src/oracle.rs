//! Dense reference simulator used to certify compiler passes.
//!
//! Qubit 0 is the least significant bit of a basis-state index. Two code paths
//! exist on purpose: [`unitary_of`] builds the full matrix by row operations on
//! an identity, while [`apply`] evolves a state vector gate by gate. Tests
//! cross-check them against each other.

use std::ops::{Index, IndexMut};

use num_complex::Complex64 as C;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};

/// Largest register for which [`unitary_of`] builds a dense matrix.
pub const MAX_UNITARY_QUBITS: usize = 12;

/// A 2x2 complex matrix, row-major.
pub type Mat2 = [[C; 2]; 2];

const ZERO: C = C::new(0.0, 0.0);
const ONE: C = C::new(1.0, 0.0);

/// `U3(theta, phi, lambda)`.
pub fn u3_matrix(theta: f64, phi: f64, lambda: f64) -> Mat2 {
    let (s, c) = (theta / 2.0).sin_cos();
    [
        [C::new(c, 0.0), -C::from_polar(s, lambda)],
        [C::from_polar(s, phi), C::from_polar(c, phi + lambda)],
    ]
}

/// `Rz(lambda) = diag(exp(-i lambda/2), exp(i lambda/2))`.
pub fn rz_matrix(lambda: f64) -> Mat2 {
    [
        [C::from_polar(1.0, -lambda / 2.0), ZERO],
        [ZERO, C::from_polar(1.0, lambda / 2.0)],
    ]
}

/// `R(theta, phi) = exp(-i theta/2 (cos phi X + sin phi Y))`.
pub fn r_matrix(theta: f64, phi: f64) -> Mat2 {
    let (s, c) = (theta / 2.0).sin_cos();
    let mi = C::new(0.0, -1.0);
    [
        [C::new(c, 0.0), mi * C::from_polar(s, -phi)],
        [mi * C::from_polar(s, phi), C::new(c, 0.0)],
    ]
}

/// Dense `2^n x 2^n` matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    dim: usize,
    data: Vec<C>,
}

impl UnitaryMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![ZERO; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = ONE;
        }
        Self { dim, data }
    }

    /// Builds a matrix from rows; panics if they do not form a square.
    pub fn from_rows(rows: Vec<Vec<C>>) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "matrix must be square");
        Self {
            dim,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn column(&self, k: usize) -> Vec<C> {
        (0..self.dim).map(|r| self[(r, k)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut out = vec![ZERO; d * d];
        for r in 0..d {
            for c in 0..d {
                out[c * d + r] = self.data[r * d + c].conj();
            }
        }
        Self { dim: d, data: out }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let d = self.dim;
        let mut out = vec![ZERO; d * d];
        for r in 0..d {
            for k in 0..d {
                let a = self.data[r * d + k];
                if a == ZERO {
                    continue;
                }
                for c in 0..d {
                    out[r * d + c] += a * other.data[k * d + c];
                }
            }
        }
        Ok(Self { dim: d, data: out })
    }

    /// Frobenius norm of `U^dagger U - I`.
    pub fn unitarity_error(&self) -> f64 {
        let p = self
            .adjoint()
            .matmul(self)
            .expect("same dimension by construction");
        let id = Self::identity(self.dim);
        frobenius(&p, &id, ONE)
    }

    /// Left-multiplies by a single-qubit gate on qubit `q`.
    fn left_1q(&mut self, q: usize, m: &Mat2) {
        let d = self.dim;
        let bit = 1usize << q;
        for i in (0..d).filter(|i| i & bit == 0) {
            let j = i | bit;
            for c in 0..d {
                let (x, y) = (self.data[i * d + c], self.data[j * d + c]);
                self.data[i * d + c] = m[0][0] * x + m[0][1] * y;
                self.data[j * d + c] = m[1][0] * x + m[1][1] * y;
            }
        }
    }

    /// Left-multiplies by a basis permutation `|x> -> |f(x)>`.
    fn left_permute(&mut self, f: impl Fn(usize) -> usize) {
        let d = self.dim;
        let mut out = vec![ZERO; d * d];
        for r in 0..d {
            let t = f(r);
            out[t * d..(t + 1) * d].copy_from_slice(&self.data[r * d..(r + 1) * d]);
        }
        self.data = out;
    }

    fn left_cz(&mut self, a: usize, b: usize) {
        let d = self.dim;
        let mask = (1usize << a) | (1usize << b);
        for r in (0..d).filter(|r| r & mask == mask) {
            for c in 0..d {
                self.data[r * d + c] = -self.data[r * d + c];
            }
        }
    }
}

impl Index<(usize, usize)> for UnitaryMatrix {
    type Output = C;
    fn index(&self, (r, c): (usize, usize)) -> &C {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for UnitaryMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C {
        &mut self.data[r * self.dim + c]
    }
}

/// State vector of `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub amplitudes: Vec<C>,
}

impl StateVector {
    /// `|0...0>`.
    pub fn zero(n: usize) -> Self {
        Self::basis(n, 0)
    }

    pub fn basis(n: usize, k: usize) -> Self {
        let mut amplitudes = vec![ZERO; 1 << n];
        amplitudes[k] = ONE;
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        for a in &mut self.amplitudes {
            *a /= n;
        }
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> C {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &Self) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn apply_1q(&mut self, q: usize, m: &Mat2) {
        let bit = 1usize << q;
        let d = self.amplitudes.len();
        let mut i = 0;
        while i < d {
            if i & bit != 0 {
                i += bit;
                continue;
            }
            let j = i | bit;
            let (x, y) = (self.amplitudes[i], self.amplitudes[j]);
            self.amplitudes[i] = m[0][0] * x + m[0][1] * y;
            self.amplitudes[j] = m[1][0] * x + m[1][1] * y;
            i += 1;
        }
    }

    pub fn apply_cz(&mut self, a: usize, b: usize) {
        let mask = (1usize << a) | (1usize << b);
        for (i, amp) in self.amplitudes.iter_mut().enumerate() {
            if i & mask == mask {
                *amp = -*amp;
            }
        }
    }

    pub fn apply_swap(&mut self, a: usize, b: usize) {
        let (ba, bb) = (1usize << a, 1usize << b);
        for i in 0..self.amplitudes.len() {
            if i & ba != 0 && i & bb == 0 {
                self.amplitudes.swap(i, i ^ ba ^ bb);
            }
        }
    }

    /// Applies one gate of a circuit with `n` qubits in place.
    pub fn apply_gate(&mut self, gate: &Gate, n: usize) {
        match *gate {
            Gate::U3 {
                qubit,
                theta,
                phi,
                lambda,
            } => self.apply_1q(qubit, &u3_matrix(theta, phi, lambda)),
            Gate::Rz { qubit, lambda } => self.apply_1q(qubit, &rz_matrix(lambda)),
            Gate::Gr { theta, phi } => {
                let m = r_matrix(theta, phi);
                for q in 0..n {
                    self.apply_1q(q, &m);
                }
            }
            Gate::Cz { a, b } => self.apply_cz(a, b),
            Gate::Swap { a, b } => self.apply_swap(a, b),
            Gate::Move { .. } => {}
        }
    }
}

fn check_dim(c: &Circuit, dim: usize) -> Result<()> {
    let expected = 1usize
        .checked_shl(c.num_qubits as u32)
        .unwrap_or(usize::MAX);
    if expected != dim {
        return Err(Error::DimensionMismatch {
            expected,
            found: dim,
        });
    }
    Ok(())
}

/// Evolves `s` through the circuit without forming any matrix.
pub fn apply(c: &Circuit, s: &StateVector) -> Result<StateVector> {
    check_dim(c, s.dim())?;
    let mut out = s.clone();
    for g in c.gates() {
        out.apply_gate(g, c.num_qubits);
    }
    Ok(out)
}

/// Unitary of the whole circuit in moment order.
///
/// `permutation[i] = j` appends a relabelling that moves the state of qubit
/// `i` onto qubit `j`. This undoes the qubit shuffle introduced by routing when
/// comparing a routed circuit with its source.
pub fn unitary_of(c: &Circuit, permutation: Option<&[usize]>) -> Result<UnitaryMatrix> {
    let n = c.num_qubits;
    if n > MAX_UNITARY_QUBITS {
        return Err(Error::TooManyQubits {
            qubits: n,
            cap: MAX_UNITARY_QUBITS,
        });
    }
    let mut u = UnitaryMatrix::identity(1 << n);
    for g in c.gates() {
        match *g {
            Gate::U3 {
                qubit,
                theta,
                phi,
                lambda,
            } => u.left_1q(qubit, &u3_matrix(theta, phi, lambda)),
            Gate::Rz { qubit, lambda } => u.left_1q(qubit, &rz_matrix(lambda)),
            Gate::Gr { theta, phi } => {
                let m = r_matrix(theta, phi);
                for q in 0..n {
                    u.left_1q(q, &m);
                }
            }
            Gate::Cz { a, b } => u.left_cz(a, b),
            Gate::Swap { a, b } => u.left_permute(|x| {
                let (xa, xb) = ((x >> a) & 1, (x >> b) & 1);
                if xa == xb {
                    x
                } else {
                    x ^ (1 << a) ^ (1 << b)
                }
            }),
            Gate::Move { .. } => {}
        }
    }
    if let Some(p) = permutation {
        if p.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.len(),
            });
        }
        let mut seen = vec![false; n];
        for &j in p {
            if j >= n || std::mem::replace(&mut seen[j], true) {
                return Err(Error::InvalidCircuit(format!(
                    "not a permutation of 0..{n}: {p:?}"
                )));
            }
        }
        u.left_permute(|x| {
            (0..n)
                .filter(|&i| (x >> i) & 1 == 1)
                .fold(0, |acc, i| acc | (1 << p[i]))
        });
    }
    Ok(u)
}

fn frobenius(u: &UnitaryMatrix, v: &UnitaryMatrix, c: C) -> f64 {
    u.data
        .iter()
        .zip(&v.data)
        .map(|(a, b)| (a - c * b).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// `min_{|c|=1} ||U - cV||_F`.
///
/// The minimiser is `c = tr(V^dagger U)/|tr(V^dagger U)|`. The norm is
/// evaluated directly rather than through `sqrt(2d - 2|tr|)`, which loses about
/// half the significant digits to cancellation near zero.
pub fn phase_distance(u: &UnitaryMatrix, v: &UnitaryMatrix) -> Result<f64> {
    if u.dim != v.dim {
        return Err(Error::DimensionMismatch {
            expected: u.dim,
            found: v.dim,
        });
    }
    let tr: C = v
        .data
        .iter()
        .zip(&u.data)
        .map(|(b, a)| b.conj() * a)
        .sum();
    let c = if tr.norm() > 0.0 { tr / tr.norm() } else { ONE };
    Ok(frobenius(u, v, c))
}
