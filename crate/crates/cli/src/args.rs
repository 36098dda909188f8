use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use natc_core::benchgen::Benchmark;
use natc_core::decompose::Strategy;
use natc_core::routing::Router;

#[derive(Debug, Parser)]
#[command(name = "natc", version, about = "Neutral-atom circuit compiler")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Route, lower and time a circuit; writes a JSON report.
    Compile(CompileArgs),
    /// Compile, then estimate fidelity with noisy trajectories.
    Simulate(SimulateArgs),
    /// Durations of both routers over a range of blockade radii or spacings (CSV).
    Sweep(SweepArgs),
    /// Benchmark circuit utilities.
    Bench {
        #[command(subcommand)]
        command: BenchCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum BenchCommand {
    /// Write a generated benchmark as JSON IR.
    Gen(GenArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Generated benchmark to compile.
    #[arg(long, value_parser = parse_with::<Benchmark>)]
    pub bench: Option<Benchmark>,
    /// OpenQASM 2 file or JSON IR (by `.json` extension).
    #[arg(long, conflicts_with = "bench")]
    pub input: Option<PathBuf>,
    /// Benchmark size.
    #[arg(long)]
    pub n: Option<usize>,
    /// Seed for randomised benchmarks and the simulator.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct HardwareArgs {
    /// `A1`, `A2` or a TOML hardware file.
    #[arg(long, default_value = "A2")]
    pub hw: String,
    /// Blockade radius override (um).
    #[arg(long)]
    pub blockade: Option<f64>,
    /// Grid spacing override (um).
    #[arg(long)]
    pub spacing: Option<f64>,
    /// Minimum trap separation override (um).
    #[arg(long)]
    pub dthr: Option<f64>,
    /// Error-probability multiplier override.
    #[arg(long)]
    pub error_scale: Option<f64>,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    #[arg(long, default_value = "move", value_parser = parse_with::<Router>)]
    pub router: Router,
    #[arg(long, default_value = "transverse", value_parser = parse_with::<Strategy>)]
    pub decomp: Strategy,
    /// Drop Rz gates in the final layer (they do not change measurement outcomes).
    #[arg(long)]
    pub drop_final_rz: bool,
}

#[derive(Debug, Args)]
pub struct CompileArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub hardware: HardwareArgs,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
    /// Report path; stdout when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Also write the compiled circuit and its mapping as JSON.
    #[arg(long)]
    pub emit_circuit: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub compile: CompileArgs,
    /// Haar-random initial states.
    #[arg(long, default_value_t = 100)]
    pub states: usize,
    /// Trajectories per initial state.
    #[arg(long, default_value_t = 20)]
    pub traj: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepAxis {
    /// Blockade radius at fixed spacing.
    Blockade,
    /// Spacing, with the blockade radius held at spacing + 1 um.
    Spacing,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    pub axis: SweepAxis,
    /// Values to visit (um); defaults to 6..=15 for blockade, 3..=11 for spacing.
    #[arg(long, value_delimiter = ',')]
    pub values: Vec<f64>,
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub hardware: HardwareArgs,
    #[arg(long, default_value = "transverse", value_parser = parse_with::<Strategy>)]
    pub decomp: Strategy,
    /// CSV path; stdout when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_parser = parse_with::<Benchmark>)]
    pub bench: Benchmark,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

fn parse_with<T: std::str::FromStr<Err = String>>(s: &str) -> Result<T, String> {
    s.parse()
}
