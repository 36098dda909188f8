//! End-to-end compilation: placement, routing, native lowering, packing and
//! timing, plus the reproducible report built from them.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::circuit::{merge_rz, schedule_asap, Circuit, Gate};
use crate::decompose::{decompose, postprocess, PostprocessOptions, Strategy};
use crate::error::Result;
use crate::hardware::{build_connectivity_graph, build_movement_graph, initial_mapping, HardwareModel, Layout};
use crate::metrics::{
    duration, estimate_fidelity, group_parallel, DurationReport, FidelityEstimate, NoiseParams, Placement,
    SimulationOptions,
};
use crate::routing::{apply_displacements, plan_displacements, route, DisplacementStyle, RoutedCircuit, Router, RoutingContext};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineOptions {
    pub hardware: HardwareModel,
    pub router: Router,
    pub strategy: Strategy,
    pub drop_final_rz: bool,
    pub displacement: DisplacementStyle,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self {
            hardware: HardwareModel::a2(),
            router: Router::Move,
            strategy: Strategy::Transverse,
            drop_final_rz: false,
            displacement: DisplacementStyle::Axis,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Compiled {
    pub routed: RoutedCircuit,
    /// Layout including the initial trap displacements.
    pub layout: Layout,
    /// Native, packed circuit.
    pub circuit: Circuit,
    pub duration: DurationReport,
}

/// Runs the full pipeline on a `{U3, Rz, CZ}` circuit.
pub fn compile(c: &Circuit, opts: &PipelineOptions) -> Result<Compiled> {
    let hw = &opts.hardware;
    hw.validate()?;
    let prepared = schedule_asap(&merge_rz(c));
    let layout = hw.layout_for(c.num_qubits)?;
    let cg = build_connectivity_graph(&layout, hw.r_b);
    let mg = build_movement_graph(&layout, hw.d_thr, hw.movement_cutoff());
    let m0 = initial_mapping(&prepared, &layout)?;
    let ctx = RoutingContext {
        layout: &layout,
        connectivity: &cg,
        movement: &mg,
    };
    let mut routed = route(opts.router, &prepared, &m0, ctx)?;
    let mut layout = layout.clone();
    if opts.router == Router::Move {
        let plan = plan_displacements(&routed.switch_log, c.num_qubits, &layout, opts.displacement);
        (routed, layout) = apply_displacements(&routed, &plan, &layout)?;
    }
    let lowered = decompose(&schedule_asap(&routed.circuit), opts.strategy);
    let native = postprocess(
        &lowered,
        &PostprocessOptions {
            drop_final_rz: opts.drop_final_rz,
            ..Default::default()
        },
    );
    let placement = Placement {
        layout: &layout,
        sites: routed.initial_mapping.sites().to_vec(),
        offsets: routed.initial_offsets.clone(),
        r_b: hw.r_b,
        allow_exchange: opts.router == Router::NaiveMove,
    };
    let circuit = group_parallel(&native, placement);
    let duration = duration(&circuit, hw, &layout)?;
    Ok(Compiled {
        routed,
        layout,
        circuit,
        duration,
    })
}

/// Noise model of a hardware preset: default Pauli rates scaled by its
/// error scale.
pub fn noise_for(hw: &HardwareModel) -> NoiseParams {
    NoiseParams::default().with_scale(hw.error_scale)
}

/// Trajectory fidelity of a compiled circuit.
pub fn simulate(compiled: &Compiled, noise: &NoiseParams, opts: &SimulationOptions) -> Result<FidelityEstimate> {
    let times: Vec<f64> = compiled.duration.moments.iter().map(|m| m.duration).collect();
    estimate_fidelity(&compiled.circuit, &times, noise, opts)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCounts {
    pub rz: usize,
    pub gr: usize,
    pub cz: usize,
    #[serde(rename = "move")]
    pub moves: usize,
}

impl GateCounts {
    pub fn of(c: &Circuit) -> Self {
        let mut k = Self::default();
        for g in c.gates() {
            match g {
                Gate::Rz { .. } => k.rz += 1,
                Gate::Gr { .. } => k.gr += 1,
                Gate::Cz { .. } => k.cz += 1,
                Gate::Move { .. } => k.moves += 1,
                Gate::U3 { .. } | Gate::Swap { .. } => {}
            }
        }
        k
    }

    pub fn total(&self) -> usize {
        self.rz + self.gr + self.cz + self.moves
    }
}

/// What was compiled: a generated benchmark or a file, identified by its
/// content hash so reports do not depend on where the file lives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Source {
    Benchmark(crate::benchgen::BenchmarkSpec),
    Input { name: String, sha256: String },
}

/// Every setting that influences a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub source: Source,
    pub pipeline: PipelineOptions,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulation: Option<SimulationConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub noise: NoiseParams,
    pub options: SimulationOptions,
}

impl RunConfig {
    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let text = serde_json::to_string(self).expect("config serialises");
        hex(&Sha256::digest(text.as_bytes()))
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex(&Sha256::digest(bytes))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoutingSummary {
    pub router: Router,
    pub switches: usize,
    pub fallback_switches: usize,
    pub adjustments: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub config_hash: String,
    pub config: RunConfig,
    pub qubits: usize,
    pub gate_counts: GateCounts,
    pub routing: RoutingSummary,
    pub duration: DurationReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fidelity: Option<FidelityEstimate>,
}

impl Report {
    pub fn new(config: RunConfig, compiled: &Compiled, fidelity: Option<FidelityEstimate>) -> Self {
        Self {
            version: env!("CARGO_PKG_VERSION").to_string(),
            config_hash: config.hash(),
            config,
            qubits: compiled.circuit.num_qubits,
            gate_counts: GateCounts::of(&compiled.circuit),
            routing: RoutingSummary {
                router: compiled.routed.router,
                switches: compiled.routed.routing_ops(),
                fallback_switches: compiled.routed.fallback_switches,
                adjustments: compiled.routed.adjustments,
            },
            duration: compiled.duration.clone(),
            fidelity,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

/// Compiles (and optionally simulates) according to `config`.
pub fn run(c: &Circuit, config: RunConfig) -> Result<(Compiled, Report)> {
    let compiled = compile(c, &config.pipeline)?;
    let fidelity = match &config.simulation {
        Some(s) => Some(simulate(&compiled, &s.noise, &s.options)?),
        None => None,
    };
    let report = Report::new(config, &compiled, fidelity);
    Ok((compiled, report))
}
