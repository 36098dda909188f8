use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use natc_core::benchgen::{generate, BenchmarkSpec};
use natc_core::circuit::parse_qasm;
use natc_core::decompose::Strategy;
use natc_core::hardware::HardwareModel;
use natc_core::metrics::SimulationOptions;
use natc_core::pipeline::{compile, noise_for, run, sha256_hex, PipelineOptions, RunConfig, SimulationConfig, Source};
use natc_core::routing::Router;
use natc_core::Circuit;
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{BenchCommand, Cli, Command, CompileArgs, GenArgs, HardwareArgs, InputArgs, SimulateArgs, SweepArgs, SweepAxis};
use crate::UsageError;

pub fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Compile(a) => cmd_compile(a, None),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Bench {
            command: BenchCommand::Gen(a),
        } => cmd_gen(a),
    }
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn load_input(a: &InputArgs) -> Result<(Circuit, Source)> {
    match (a.bench, &a.input) {
        (Some(name), None) => {
            let n = a.n.ok_or_else(|| usage("--bench needs --n"))?;
            let spec = BenchmarkSpec { name, n, seed: a.seed };
            Ok((generate(&spec)?, Source::Benchmark(spec)))
        }
        (None, Some(path)) => {
            let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
            let text = String::from_utf8(bytes.clone()).map_err(|_| usage(format!("{} is not UTF-8", path.display())))?;
            let circuit = if path.extension().is_some_and(|e| e == "json") {
                Circuit::from_json(&text)?
            } else {
                parse_qasm(&text)?
            };
            let name = path.file_name().map_or_else(String::new, |f| f.to_string_lossy().into_owned());
            Ok((
                circuit,
                Source::Input {
                    name,
                    sha256: sha256_hex(&bytes),
                },
            ))
        }
        (None, None) => Err(usage("no input: give --bench NAME --n N or --input FILE")),
        (Some(_), Some(_)) => Err(usage("give only one of --bench and --input")),
    }
}

fn load_hardware(a: &HardwareArgs) -> Result<HardwareModel> {
    let mut hw = match HardwareModel::preset(&a.hw) {
        Some(hw) => hw,
        None => {
            let text = fs::read_to_string(&a.hw).with_context(|| format!("--hw `{}` is neither A1, A2 nor a readable file", a.hw))?;
            HardwareModel::from_toml_str(&text)?
        }
    };
    if let Some(v) = a.blockade {
        hw.r_b = v;
    }
    if let Some(v) = a.spacing {
        hw.spacing = v;
    }
    if let Some(v) = a.dthr {
        hw.d_thr = v;
    }
    if let Some(v) = a.error_scale {
        hw.error_scale = v;
    }
    hw.validate()?;
    Ok(hw)
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                out.write_all(b"\n")?;
            }
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct Emitted<'a> {
    circuit: &'a Circuit,
    mapping: natc_core::routing::MappingSidecar<'a>,
}

fn cmd_compile(a: CompileArgs, sim: Option<SimulationOptions>) -> Result<()> {
    let (circuit, source) = load_input(&a.input)?;
    let hw = load_hardware(&a.hardware)?;
    let simulation = sim.map(|options| SimulationConfig {
        noise: noise_for(&hw),
        options,
    });
    let config = RunConfig {
        source,
        pipeline: PipelineOptions {
            hardware: hw,
            router: a.pipeline.router,
            strategy: a.pipeline.decomp,
            drop_final_rz: a.pipeline.drop_final_rz,
            ..Default::default()
        },
        simulation,
    };
    let (compiled, report) = run(&circuit, config)?;
    if let Some(path) = &a.emit_circuit {
        let doc = Emitted {
            circuit: &compiled.circuit,
            mapping: compiled.routed.sidecar(),
        };
        write_out(Some(path), &serde_json::to_string_pretty(&doc)?)?;
    }
    write_out(a.output.as_deref(), &report.to_json())
}

fn cmd_simulate(a: SimulateArgs) -> Result<()> {
    if a.states == 0 || a.traj == 0 {
        return Err(usage("--states and --traj must be positive"));
    }
    let options = SimulationOptions {
        states: a.states,
        trajectories: a.traj,
        seed: a.compile.input.seed,
    };
    cmd_compile(a.compile, Some(options))
}

#[derive(Debug, Serialize)]
struct SweepRow {
    axis: &'static str,
    value: f64,
    r_b: f64,
    spacing: f64,
    router: Router,
    total: f64,
    gr_time: f64,
    rz_time: f64,
    cz_time: f64,
    move_time: f64,
    moments: usize,
    routing_ops: usize,
}

fn cmd_sweep(a: SweepArgs) -> Result<()> {
    let (circuit, _) = load_input(&a.input)?;
    let base = load_hardware(&a.hardware)?;
    let (axis, default): (&str, Vec<f64>) = match a.axis {
        SweepAxis::Blockade => ("blockade", (6..=15).map(f64::from).collect()),
        SweepAxis::Spacing => ("spacing", (3..=11).map(f64::from).collect()),
    };
    let values = if a.values.is_empty() { default } else { a.values.clone() };
    let points: Vec<HardwareModel> = values
        .iter()
        .map(|&v| {
            let mut hw = base.clone();
            match a.axis {
                SweepAxis::Blockade => hw.r_b = v,
                SweepAxis::Spacing => {
                    hw.spacing = v;
                    hw.r_b = v + 1.0;
                }
            }
            if hw.r_b.is_nan() || hw.r_b <= hw.spacing {
                return Err(usage(format!("{axis} {v}: blockade radius {} must exceed spacing {}", hw.r_b, hw.spacing)));
            }
            hw.validate().map_err(|e| usage(format!("{axis} {v}: {e}")))?;
            Ok(hw)
        })
        .collect::<Result<_>>()?;
    let strategy: Strategy = a.decomp;
    let rows: Vec<Vec<SweepRow>> = points
        .par_iter()
        .zip(&values)
        .map(|(hw, &value)| {
            [Router::Swaps, Router::Move]
                .into_iter()
                .map(|router| {
                    let opts = PipelineOptions {
                        hardware: hw.clone(),
                        router,
                        strategy,
                        ..Default::default()
                    };
                    let c = compile(&circuit, &opts)?;
                    let d = &c.duration;
                    Ok(SweepRow {
                        axis,
                        value,
                        r_b: hw.r_b,
                        spacing: hw.spacing,
                        router,
                        total: d.total,
                        gr_time: d.gr_time,
                        rz_time: d.rz_time,
                        cz_time: d.cz_time,
                        move_time: d.move_time,
                        moments: d.moment_count,
                        routing_ops: c.routed.routing_ops(),
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows.iter().flatten() {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| anyhow::anyhow!("csv: {e}"))?;
    write_out(a.output.as_deref(), &String::from_utf8(bytes)?)
}

fn cmd_gen(a: GenArgs) -> Result<()> {
    let c = generate(&BenchmarkSpec {
        name: a.bench,
        n: a.n,
        seed: a.seed,
    })?;
    write_out(a.output.as_deref(), &c.to_json_pretty())
}
