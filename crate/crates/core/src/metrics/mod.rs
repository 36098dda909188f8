//! Parallel packing, execution time and trajectory-based fidelity of
//! compiled circuits.

mod duration;
mod fidelity;
mod grouping;
mod noise;

pub use duration::{duration, gate_duration, DurationReport, GateClass, MomentTiming};
pub use fidelity::{
    estimate_fidelity, estimate_fidelity_from, haar_state, sample_trajectory, FidelityEstimate, SimulationOptions,
    MAX_SIM_QUBITS,
};
pub use grouping::{group_parallel, Placement};
pub use noise::{idle_dephasing, NoiseParams, Pauli, TwoQubitNoise};
