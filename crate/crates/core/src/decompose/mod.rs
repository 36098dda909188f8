//! Lowering of `{U3, Rz, CZ, SWAP}` circuits to the native set `{Rz, GR, CZ}`.

mod postprocess;
mod swap;
mod transverse;

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::angle::{wrap, ANGLE_TOL};
use crate::circuit::{Circuit, Gate, Moment, MomentKind};

pub use postprocess::{postprocess, PostprocessOptions};
pub use swap::{decompose_swap, swap_template};
pub use transverse::{transverse_angles, transverse_moment, TransverseAngles, TransverseOptions};

/// `U3(theta, phi, lambda) = Rz(phi_post) Ry(theta) Rz(lambda_pre)` up to phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerAngles {
    pub lambda_pre: f64,
    pub theta: f64,
    pub phi_post: f64,
}

/// Euler angles of a U3 (or Rz) gate, wrapped to `(-pi, pi]`.
///
/// Panics on gates other than U3 and Rz.
pub fn euler_zyz(g: &Gate) -> EulerAngles {
    match *g {
        Gate::U3 {
            theta, phi, lambda, ..
        } => EulerAngles {
            lambda_pre: wrap(lambda),
            theta: wrap(theta),
            phi_post: wrap(phi),
        },
        Gate::Rz { lambda, .. } => EulerAngles {
            lambda_pre: wrap(lambda),
            theta: 0.0,
            phi_post: 0.0,
        },
        ref other => panic!("euler_zyz expects a single-qubit gate, got {other:?}"),
    }
}

/// Euler angles per qubit of a single-qubit moment, in gate order.
fn single_qubit_params(m: &Moment) -> Vec<(usize, EulerAngles)> {
    m.gates
        .iter()
        .map(|g| match g.operands() {
            crate::circuit::Operands::One(q) => (q, euler_zyz(g)),
            _ => panic!("single-qubit moment expected, got {g:?}"),
        })
        .collect()
}

fn rz_layer(angles: impl IntoIterator<Item = (usize, f64)>) -> Moment {
    Moment::new(
        angles
            .into_iter()
            .map(|(q, a)| (q, wrap(a)))
            .filter(|(_, a)| a.abs() >= ANGLE_TOL)
            .map(|(qubit, lambda)| Gate::Rz { qubit, lambda })
            .collect(),
    )
}

/// Axial decomposition: Rz(lambda), GR(pi/2, 0), Rz(theta), GR(-pi/2, 0), Rz(phi).
///
/// The two GR pulses cancel on qubits absent from the moment. The net pulse
/// area is always pi, even for moments with no rotation off the z axis.
pub fn axial_moment(m: &Moment, _n: usize) -> Vec<Moment> {
    if m.is_empty() {
        return Vec::new();
    }
    let params = single_qubit_params(m);
    let mut out = vec![
        rz_layer(params.iter().map(|(q, e)| (*q, e.lambda_pre))),
        Moment::new(vec![Gate::Gr {
            theta: FRAC_PI_2,
            phi: 0.0,
        }]),
        rz_layer(params.iter().map(|(q, e)| (*q, e.theta))),
        Moment::new(vec![Gate::Gr {
            theta: -FRAC_PI_2,
            phi: 0.0,
        }]),
        rz_layer(params.iter().map(|(q, e)| (*q, e.phi_post))),
    ];
    out.retain(|m| !m.is_empty());
    out
}

/// Single-qubit decomposition strategy.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Axial,
    #[default]
    Transverse,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Axial => "axial",
            Strategy::Transverse => "transverse",
        })
    }
}

impl FromStr for Strategy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "axial" => Ok(Strategy::Axial),
            "transverse" => Ok(Strategy::Transverse),
            _ => Err(format!("unknown decomposition `{s}` (expected axial or transverse)")),
        }
    }
}

/// Lowers one moment. Two-qubit moments without SWAP and GR moments pass through.
pub fn decompose_moment(m: &Moment, n: usize, strategy: Strategy) -> Vec<Moment> {
    match m.kind() {
        None if m.is_empty() => Vec::new(),
        Some(MomentKind::SingleQubit) => match strategy {
            Strategy::Axial => axial_moment(m, n),
            Strategy::Transverse => transverse_moment(m, n, &TransverseOptions::default()),
        },
        _ if m.gates.iter().any(|g| matches!(g, Gate::Swap { .. })) => swap::swap_moment(m),
        _ => vec![m.clone()],
    }
}

/// Lowers every moment of a circuit to native gates, moment by moment.
///
/// SWAP gates always use the fixed 21-gate template regardless of strategy.
/// The result is not post-processed; see [`postprocess`].
pub fn decompose(c: &Circuit, strategy: Strategy) -> Circuit {
    Circuit {
        num_qubits: c.num_qubits,
        moments: c
            .moments
            .iter()
            .flat_map(|m| decompose_moment(m, c.num_qubits, strategy))
            .collect(),
    }
}

/// Sum of `|theta|` over GR gates.
pub fn gr_area(c: &Circuit) -> f64 {
    c.gates()
        .map(|g| match *g {
            Gate::Gr { theta, .. } => theta.abs(),
            _ => 0.0,
        })
        .sum()
}

#[cfg(test)]
mod tests;
