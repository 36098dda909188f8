use std::f64::consts::FRAC_PI_2;

use crate::angle::{sign, wrap, ANGLE_TOL};
use crate::circuit::{Gate, Moment};

use super::{rz_layer, single_qubit_params, EulerAngles};

/// Sign conventions for the transverse decomposition.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TransverseOptions {
    /// Use `theta_max = -max |theta_j|` instead of `+max |theta_j|`.
    pub negative_theta_max: bool,
    /// Per-qubit sign `sigma_j`; qubits without an entry use `+1`.
    pub sigma: Vec<f64>,
}

impl TransverseOptions {
    fn sigma(&self, q: usize) -> f64 {
        match self.sigma.get(q) {
            Some(&s) if s < 0.0 => -1.0,
            _ => 1.0,
        }
    }
}

/// Angles of one qubit in a transverse decomposition.
///
/// The qubit sees, in time order, `Rz(gamma_plus)`, `GR(-theta_max/2, pi/2)`,
/// `Rz(chi)`, `GR(theta_max/2, pi/2)`, `Rz(gamma_minus)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransverseAngles {
    pub theta_max: f64,
    pub gamma_minus: f64,
    pub gamma_plus: f64,
    pub chi: f64,
    pub sigma: f64,
    pub alpha: f64,
    pub beta: f64,
    /// `None` encodes `kappa = infinity`.
    pub kappa: Option<f64>,
}

/// Solves for the angles of one qubit given the shared `theta_max`.
///
/// Requires `|e.theta| <= |theta_max|` and `theta_max != 0`.
pub fn transverse_angles(e: &EulerAngles, theta_max: f64, sigma: f64) -> TransverseAngles {
    let theta = e.theta;
    let s2 = (theta / 2.0).sin().powi(2);
    let big2 = (theta_max / 2.0).sin().powi(2);
    let kappa = if (theta.abs() - theta_max.abs()).abs() < ANGLE_TOL || big2 - s2 <= 0.0 {
        None
    } else {
        Some((s2 / (big2 - s2)).sqrt())
    };
    let (alpha, atan_kappa) = match kappa {
        // Any alpha works when cos(theta_max/2) = 0; pi/2 keeps one branch.
        None => (FRAC_PI_2, FRAC_PI_2),
        Some(k) => (((theta_max / 2.0).cos() * k).atan(), k.atan()),
    };
    let beta = sign(theta) * sign(theta_max) * FRAC_PI_2;
    let chi = sigma * 2.0 * atan_kappa;
    TransverseAngles {
        theta_max,
        gamma_minus: wrap(e.phi_post - sigma * (alpha - beta)),
        gamma_plus: wrap(e.lambda_pre - sigma * (alpha + beta)),
        chi: wrap(chi),
        sigma,
        alpha,
        beta,
        kappa,
    }
}

/// Transverse decomposition of a single-qubit moment.
///
/// All qubits share one pair of GR pulses of area `max |theta_j|` each half;
/// per-qubit Rz layers around and between them select each qubit's rotation.
/// A moment with no rotation away from the z axis lowers to a single Rz layer.
pub fn transverse_moment(m: &Moment, _n: usize, opts: &TransverseOptions) -> Vec<Moment> {
    let params = single_qubit_params(m);
    let max = params.iter().map(|(_, e)| e.theta.abs()).fold(0.0, f64::max);
    let mut out = Vec::new();
    if max < ANGLE_TOL {
        out.push(rz_layer(params.iter().map(|(q, e)| (*q, e.lambda_pre + e.phi_post))));
        out.retain(|m| !m.is_empty());
        return out;
    }
    let theta_max = if opts.negative_theta_max { -max } else { max };
    let angles: Vec<(usize, TransverseAngles)> = params
        .iter()
        .map(|(q, e)| (*q, transverse_angles(e, theta_max, opts.sigma(*q))))
        .collect();
    out.push(rz_layer(angles.iter().map(|(q, a)| (*q, a.gamma_plus))));
    out.push(Moment::new(vec![Gate::Gr {
        theta: wrap(-theta_max / 2.0),
        phi: FRAC_PI_2,
    }]));
    out.push(rz_layer(angles.iter().map(|(q, a)| (*q, a.chi))));
    out.push(Moment::new(vec![Gate::Gr {
        theta: wrap(theta_max / 2.0),
        phi: FRAC_PI_2,
    }]));
    out.push(rz_layer(angles.iter().map(|(q, a)| (*q, a.gamma_minus))));
    out.retain(|m| !m.is_empty());
    out
}
