use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use num_complex::Complex64 as C;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::oracle::{apply, StateVector};

use super::noise::{NoiseParams, Pauli};

/// Largest register the trajectory simulator accepts.
pub const MAX_SIM_QUBITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationOptions {
    pub states: usize,
    pub trajectories: usize,
    pub seed: u64,
}

impl Default for SimulationOptions {
    fn default() -> Self {
        Self {
            states: 100,
            trajectories: 20,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trajectories: usize,
    pub initial_states: usize,
}

/// Haar-random pure state: normalised i.i.d. complex Gaussians.
pub fn haar_state(n: usize, rng: &mut impl Rng) -> StateVector {
    let mut s = StateVector::zero(n);
    for a in s.amplitudes.iter_mut() {
        *a = C::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
    }
    s.normalize();
    s
}

/// One noisy run of `c` from `psi0`. Every qubit dephases for the full
/// length of every moment, as given by `moment_durations`.
pub fn sample_trajectory(
    c: &Circuit,
    moment_durations: &[f64],
    noise: &NoiseParams,
    psi0: &StateVector,
    rng: &mut impl Rng,
) -> StateVector {
    trajectory(c, moment_durations, noise, psi0, rng).0
}

/// Noisy run plus whether any error fired.
fn trajectory(
    c: &Circuit,
    moment_durations: &[f64],
    noise: &NoiseParams,
    psi0: &StateVector,
    rng: &mut impl Rng,
) -> (StateVector, bool) {
    let n = c.num_qubits;
    let mut fired = false;
    let z = Pauli::Z.matrix();
    let mut psi = psi0.clone();
    for (m, &t) in c.moments.iter().zip(moment_durations) {
        for g in &m.gates {
            psi.apply_gate(g, n);
            fired |= noise.after_gate(g, n, &mut psi, rng);
        }
        let p = noise.idle_probability(t);
        if p > 0.0 {
            for q in 0..n {
                if rng.random::<f64>() < p {
                    psi.apply_1q(q, &z);
                    fired = true;
                }
            }
        }
    }
    (psi, fired)
}

fn check_inputs(c: &Circuit, moment_durations: &[f64], noise: &NoiseParams) -> Result<()> {
    noise.validate()?;
    if c.num_qubits > MAX_SIM_QUBITS {
        return Err(Error::TooManyQubits {
            qubits: c.num_qubits,
            cap: MAX_SIM_QUBITS,
        });
    }
    if moment_durations.len() != c.moments.len() {
        return Err(Error::DimensionMismatch {
            expected: c.moments.len(),
            found: moment_durations.len(),
        });
    }
    if let Some(g) = c.gates().find(|g| matches!(g, Gate::U3 { .. } | Gate::Swap { .. })) {
        return Err(Error::InvalidCircuit(format!("simulation expects native gates, found {g:?}")));
    }
    Ok(())
}

fn summarise(samples: &[f64], states: usize, trajectories: usize) -> FidelityEstimate {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = if samples.len() > 1 {
        samples.iter().map(|f| (f - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    FidelityEstimate {
        mean,
        std_error: (var / n).sqrt(),
        trajectories,
        initial_states: states,
    }
}

fn run_state(
    c: &Circuit,
    moment_durations: &[f64],
    noise: &NoiseParams,
    psi0: &StateVector,
    trajectories: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<f64>> {
    let ideal = apply(c, psi0)?;
    Ok((0..trajectories)
        .map(|_| match trajectory(c, moment_durations, noise, psi0, rng) {
            // An error-free run reproduces the ideal state exactly.
            (_, false) => 1.0,
            (psi, true) => psi.fidelity(&ideal),
        })
        .collect())
}

/// Average fidelity between noisy and ideal runs over Haar-random inputs.
///
/// Initial state `i` and its trajectories draw from ChaCha stream `i` of
/// `opts.seed`, and the per-state results are reduced in order, so the
/// estimate does not depend on thread count.
pub fn estimate_fidelity(
    c: &Circuit,
    moment_durations: &[f64],
    noise: &NoiseParams,
    opts: &SimulationOptions,
) -> Result<FidelityEstimate> {
    check_inputs(c, moment_durations, noise)?;
    if opts.states == 0 || opts.trajectories == 0 {
        return Err(Error::InvalidNoise("need at least one state and one trajectory".into()));
    }
    let per_state: Vec<Vec<f64>> = (0..opts.states)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(i as u64);
            let psi0 = haar_state(c.num_qubits, &mut rng);
            run_state(c, moment_durations, noise, &psi0, opts.trajectories, &mut rng)
        })
        .collect::<Result<_>>()?;
    let samples: Vec<f64> = per_state.into_iter().flatten().collect();
    Ok(summarise(&samples, opts.states, opts.trajectories))
}

/// Like [`estimate_fidelity`] with one fixed initial state.
pub fn estimate_fidelity_from(
    c: &Circuit,
    moment_durations: &[f64],
    noise: &NoiseParams,
    psi0: &StateVector,
    trajectories: usize,
    seed: u64,
) -> Result<FidelityEstimate> {
    check_inputs(c, moment_durations, noise)?;
    if psi0.dim() != 1 << c.num_qubits {
        return Err(Error::DimensionMismatch {
            expected: 1 << c.num_qubits,
            found: psi0.dim(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = run_state(c, moment_durations, noise, psi0, trajectories.max(1), &mut rng)?;
    Ok(summarise(&samples, 1, trajectories.max(1)))
}
