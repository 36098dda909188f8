use num_complex::Complex64 as C;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{Gate, Operands};
use crate::error::{Error, Result};
use crate::oracle::{Mat2, StateVector};

/// How a two-qubit gate's Pauli channel is applied.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TwoQubitNoise {
    /// Each operand independently receives X, Y or Z with the two-qubit
    /// marginals.
    #[default]
    Independent,
    /// One draw per gate; the Pauli lands on a uniformly chosen operand.
    SingleOperand,
}

/// Pauli error rates per gate and the dephasing time. All probabilities are
/// multiplied by `scale` when sampled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    pub p1: [f64; 3],
    pub p2: [f64; 3],
    /// Dephasing time in microseconds.
    pub t2_star: f64,
    pub two_qubit: TwoQubitNoise,
    pub scale: f64,
}

impl Default for NoiseParams {
    fn default() -> Self {
        Self {
            p1: [0.001, 0.001, 0.004],
            p2: [0.002, 0.002, 0.005],
            t2_star: 4000.0,
            two_qubit: TwoQubitNoise::Independent,
            scale: 1.0,
        }
    }
}

/// Z-flip probability for an idle interval `t`.
pub fn idle_dephasing(t: f64, t2_star: f64) -> f64 {
    (1.0 - (-t / t2_star).exp()) / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> Mat2 {
        let (o, z, i) = (C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 1.0));
        match self {
            Pauli::X => [[z, o], [o, z]],
            Pauli::Y => [[z, -i], [i, z]],
            Pauli::Z => [[o, z], [z, -o]],
        }
    }
}

impl NoiseParams {
    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.scale.is_finite() && self.scale >= 0.0) {
            return Err(Error::InvalidNoise(format!("scale must be non-negative, got {}", self.scale)));
        }
        for (name, p) in [("p1", self.p1), ("p2", self.p2)] {
            if p.iter().any(|&x| !(x.is_finite() && x >= 0.0)) {
                return Err(Error::InvalidNoise(format!("{name} entries must be non-negative")));
            }
            let total = p.iter().sum::<f64>() * self.scale;
            if total > 1.0 {
                return Err(Error::InvalidNoise(format!("scaled {name} sums to {total} > 1")));
            }
        }
        if self.t2_star.is_nan() || self.t2_star <= 0.0 {
            return Err(Error::InvalidNoise(format!("t2_star must be positive, got {}", self.t2_star)));
        }
        Ok(())
    }

    /// Probability of a Z flip on an idle qubit over `t`.
    pub fn idle_probability(&self, t: f64) -> f64 {
        self.scale * idle_dephasing(t, self.t2_star)
    }

    fn draw(&self, p: [f64; 3], rng: &mut impl Rng) -> Option<Pauli> {
        let r: f64 = rng.random();
        let s = self.scale;
        if r < s * p[0] {
            Some(Pauli::X)
        } else if r < s * (p[0] + p[1]) {
            Some(Pauli::Y)
        } else if r < s * (p[0] + p[1] + p[2]) {
            Some(Pauli::Z)
        } else {
            None
        }
    }

    /// Applies the error channel following `g` to `psi`; true if any Pauli
    /// was applied.
    pub(crate) fn after_gate(&self, g: &Gate, n: usize, psi: &mut StateVector, rng: &mut impl Rng) -> bool {
        match (g, g.operands()) {
            (Gate::Move { .. }, _) => false,
            (_, Operands::One(q)) => self.maybe_apply(self.p1, q, psi, rng),
            (_, Operands::All) => (0..n).fold(false, |acc, q| self.maybe_apply(self.p1, q, psi, rng) | acc),
            (_, Operands::Two(a, b)) => match self.two_qubit {
                TwoQubitNoise::Independent => {
                    self.maybe_apply(self.p2, a, psi, rng) | self.maybe_apply(self.p2, b, psi, rng)
                }
                TwoQubitNoise::SingleOperand => match self.draw(self.p2, rng) {
                    Some(p) => {
                        let q = if rng.random::<bool>() { a } else { b };
                        psi.apply_1q(q, &p.matrix());
                        true
                    }
                    None => false,
                },
            },
        }
    }

    fn maybe_apply(&self, p: [f64; 3], q: usize, psi: &mut StateVector, rng: &mut impl Rng) -> bool {
        match self.draw(p, rng) {
            Some(pauli) => {
                psi.apply_1q(q, &pauli.matrix());
                true
            }
            None => false,
        }
    }
}
