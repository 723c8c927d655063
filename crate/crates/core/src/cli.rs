// Copyright 2026 The qcs-nmr Authors
// SPDX-License-Identifier: Apache-2.0

//! The `qcs` command line: `run`, `compile` and `reproduce`.
//!
//! Exit status is 0 when the command succeeds and every requested check
//! passes, 1 when a check fails and 2 for invalid input.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::error::{QcsError, Result};
use crate::linalg::COMPILED_TOL;
use crate::nmr::{
    compile_gate, compile_network, ideal_network, physical_form, program_propagator, GateSpec, NoiseParams,
    PulseProgram, SpinSystem,
};
use crate::pipeline::run_nmr;
use crate::protocol::{run_qcs, ProtocolParams};
use crate::report::{reproduce, SCHEMA_VERSION};
use crate::tomography::MatrixJson;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "qcs", version, about = "Quantum clock synchronization on an ideal register and a simulated NMR register")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one synchronization experiment and print a JSON report.
    Run(RunArgs),
    /// Emit the pulse program of a gate or of the whole network.
    Compile(CompileArgs),
    /// Run the four experiments through both layers and write a report.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Ideal,
    Nmr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Network {
    Qcs,
}

#[derive(Debug, Args)]
pub struct PhaseArgs {
    /// Experiment index k: omega*Delta = k/4.
    #[arg(long, conflicts_with = "omega_delta")]
    pub phi_k: Option<usize>,
    /// Dimensionless omega*Delta.
    #[arg(long, allow_negative_numbers = true)]
    pub omega_delta: Option<f64>,
}

impl PhaseArgs {
    fn omega_delta(&self) -> Result<f64> {
        match (self.phi_k, self.omega_delta) {
            (Some(k), None) if k <= 3 => Ok(k as f64 / 4.0),
            (Some(k), None) => Err(QcsError::InvalidParams(format!("--phi-k must be 0..=3, got {k}"))),
            (None, Some(x)) => Ok(x),
            _ => Err(QcsError::InvalidParams("one of --phi-k or --omega-delta is required".into())),
        }
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, value_enum, default_value = "ideal")]
    pub mode: Mode,
    /// Working qubits.
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[command(flatten)]
    pub phase: PhaseArgs,
    /// Tick rate; Delta is reported as omega*Delta / omega.
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    #[arg(long, value_enum, default_value = "off")]
    pub noise: Switch,
    /// Dephasing rate in 1/s applied to every spin when noise is on.
    #[arg(long, default_value_t = 1.0)]
    pub dephasing: f64,
    /// Systematic fractional pulse-angle error when noise is on.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub pulse_error: f64,
    /// Standard deviation of the random fractional pulse-angle error.
    #[arg(long, default_value_t = 0.0)]
    pub jitter: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Spin-system config file (key=value).
    #[arg(long)]
    pub spin_system: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Fail (exit 1) if the NMR fidelity is below this value.
    #[arg(long)]
    pub min_fidelity: Option<f64>,
}

#[derive(Debug, Args)]
pub struct CompileArgs {
    /// Gate name: h12, h2, h1, phase11, rx1, ry1, rx2, ry2, rx3, ry3.
    #[arg(long, conflicts_with = "network", required_unless_present = "network")]
    pub gate: Option<String>,
    #[arg(long, value_enum)]
    pub network: Option<Network>,
    #[command(flatten)]
    pub phase: PhaseArgs,
    #[arg(long)]
    pub spin_system: Option<PathBuf>,
    /// Expand selective delays and z rotations into hard pulses.
    #[arg(long)]
    pub physical: bool,
    /// Re-simulate the program and report its deviation from the ideal gate.
    #[arg(long)]
    pub verify: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// Markdown report path; the JSON sidecar goes next to it.
    #[arg(long, default_value = "reproduce.md")]
    pub output: PathBuf,
    #[arg(long)]
    pub spin_system: Option<PathBuf>,
}

/// Validated settings of one `run`.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub mode: Mode,
    pub params: ProtocolParams,
    pub noise: Option<NoiseParams>,
    pub spin_system: SpinSystem,
    pub output: Option<PathBuf>,
    pub min_fidelity: Option<f64>,
}

fn load_system(path: Option<&Path>) -> Result<SpinSystem> {
    match path {
        Some(p) => SpinSystem::from_config_file(p),
        None => Ok(SpinSystem::default()),
    }
}

impl RunConfig {
    pub fn from_args(a: &RunArgs) -> Result<Self> {
        match a.mode {
            Mode::Nmr if a.m != 2 => {
                return Err(QcsError::InvalidParams(format!("--mode nmr runs the m = 2 network, got --m {}", a.m)))
            }
            Mode::Ideal if !(1..=6).contains(&a.m) => {
                return Err(QcsError::InvalidParams(format!("--mode ideal accepts m in 1..=6, got {}", a.m)))
            }
            _ => {}
        }
        if !(a.omega > 0.0 && a.omega.is_finite()) {
            return Err(QcsError::InvalidParams(format!("--omega must be positive, got {}", a.omega)));
        }
        let params = ProtocolParams::new(a.m, a.omega, a.phase.omega_delta()? / a.omega)?;
        let spin_system = load_system(a.spin_system.as_deref())?;
        let noise = match a.noise {
            Switch::Off => None,
            Switch::On => {
                let nz = NoiseParams {
                    dephasing_rates: vec![a.dephasing; spin_system.num_spins()],
                    pulse_angle_error: a.pulse_error,
                    pulse_angle_jitter: a.jitter,
                    seed: a.seed,
                };
                nz.validate(spin_system.num_spins())?;
                Some(nz)
            }
        };
        if noise.is_some() && a.mode == Mode::Ideal {
            return Err(QcsError::InvalidParams("noise applies to --mode nmr only".into()));
        }
        Ok(Self { mode: a.mode, params, noise, spin_system, output: a.output.clone(), min_fidelity: a.min_fidelity })
    }
}

fn write_output(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| io_error(p, e)),
        None => writeln!(out, "{text}").map_err(|e| QcsError::InvalidParams(format!("cannot write output: {e}"))),
    }
}

fn io_error(p: &Path, e: std::io::Error) -> QcsError {
    QcsError::InvalidParams(format!("cannot write {}: {e}", p.display()))
}

/// Executes `run` and returns the JSON report and whether the checks passed.
pub fn cmd_run(cfg: &RunConfig) -> Result<(serde_json::Value, bool)> {
    let p = &cfg.params;
    let mut report = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "run",
        "mode": cfg.mode,
        "m": p.m(),
        "omega": p.omega(),
        "omega_delta": p.omega_delta(),
        "delta": p.delta(),
    });
    let outcome_json = |o: &crate::protocol::QcsOutcome| {
        json!({
            "distribution": o.distribution,
            "j_peak": o.j_peak,
            "peak_state": o.peak_label(p.m()),
            "peak_probability": o.peak_probability(),
            "delta_estimate": o.delta_estimate,
            "exact": o.exact,
        })
    };
    let mut pass = true;
    match cfg.mode {
        Mode::Ideal => {
            report["outcome"] = outcome_json(&run_qcs(p)?);
        }
        Mode::Nmr => {
            let run = run_nmr(p, &cfg.spin_system, cfg.noise.as_ref())?;
            report["outcome"] = outcome_json(&run.outcome);
            report["nmr"] = json!({
                "fidelity": run.fidelity,
                "prep_residual": run.prep.normalized_distance,
                "prep_scale": run.prep.scale,
                "noise": cfg.noise.as_ref().map(|nz| json!({
                    "dephasing_rates": nz.dephasing_rates,
                    "pulse_angle_error": nz.pulse_angle_error,
                    "pulse_angle_jitter": nz.pulse_angle_jitter,
                    "seed": nz.seed,
                })),
                "final_matrix": MatrixJson::from(&run.rho_final),
                "reconstructed_matrix": MatrixJson::from(&run.rho_exp),
                "theory_matrix": MatrixJson::from(&run.rho_theory),
            });
            if let Some(min) = cfg.min_fidelity {
                pass = run.fidelity.c >= min;
                report["checks"] = json!({ "min_fidelity": min, "pass": pass });
            }
        }
    }
    Ok((report, pass))
}

/// Deviation of a compiled program from its target, before and after a
/// text round trip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verification {
    pub deviation: f64,
    pub reparsed_deviation: f64,
}

impl Verification {
    pub fn pass(&self) -> bool {
        self.deviation <= COMPILED_TOL && self.deviation.to_bits() == self.reparsed_deviation.to_bits()
    }
}

pub fn verify_program(
    program: &PulseProgram,
    ideal: &crate::linalg::ComplexMatrix,
    sys: &SpinSystem,
) -> Result<Verification> {
    let deviation = program_propagator(program, sys)?.phase_aligned_distance(ideal);
    let reparsed = PulseProgram::parse(&program.to_string())?;
    let reparsed_deviation = program_propagator(&reparsed, sys)?.phase_aligned_distance(ideal);
    Ok(Verification { deviation, reparsed_deviation })
}

/// Executes `compile`; returns the program and, with `--verify`, its check.
pub fn cmd_compile(a: &CompileArgs) -> Result<(PulseProgram, Option<Verification>)> {
    let sys = load_system(a.spin_system.as_deref())?;
    let (program, ideal) = match (&a.gate, a.network) {
        (Some(name), None) => {
            let g: GateSpec = name.parse()?;
            (compile_gate(g, &sys)?, g.ideal())
        }
        (None, Some(Network::Qcs)) => {
            let params = ProtocolParams::from_omega_delta(2, a.phase.omega_delta()?)?;
            (compile_network(&params, &sys)?, ideal_network(&params))
        }
        _ => return Err(QcsError::InvalidParams("give exactly one of --gate or --network".into())),
    };
    let program = if a.physical { physical_form(&program, &sys)? } else { program };
    let check = if a.verify { Some(verify_program(&program, &ideal, &sys)?) } else { None };
    Ok((program, check))
}

fn sidecar_path(md: &Path) -> PathBuf {
    md.with_extension("json")
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let status = |pass: bool| if pass { EXIT_OK } else { EXIT_CHECK_FAILED };
    let ignore = |_: std::io::Result<()>| ();
    match cli.command {
        Command::Run(a) => {
            let cfg = RunConfig::from_args(&a)?;
            let (report, pass) = cmd_run(&cfg)?;
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            write_output(cfg.output.as_deref(), &text, out)?;
            Ok(status(pass))
        }
        Command::Compile(a) => {
            let (program, check) = cmd_compile(&a)?;
            write_output(a.output.as_deref(), program.to_string().trim_end(), out)?;
            match check {
                Some(v) => {
                    ignore(writeln!(
                        err,
                        "verify: max deviation {:.3e} (tolerance {:.0e}); after text round trip {:.3e}; {}",
                        v.deviation,
                        COMPILED_TOL,
                        v.reparsed_deviation,
                        if v.pass() { "PASS" } else { "FAIL" }
                    ));
                    Ok(status(v.pass()))
                }
                None => Ok(EXIT_OK),
            }
        }
        Command::Reproduce(a) => {
            let sys = load_system(a.spin_system.as_deref())?;
            let report = reproduce(&sys)?;
            std::fs::write(&a.output, report.to_markdown()).map_err(|e| io_error(&a.output, e))?;
            let sidecar = sidecar_path(&a.output);
            std::fs::write(&sidecar, report.to_json()).map_err(|e| io_error(&sidecar, e))?;
            for r in &report.experiments {
                ignore(writeln!(
                    out,
                    "k={} expected |{}> ideal |{}> nmr |{}> fidelity {:.6} {}",
                    r.k,
                    r.expected_state,
                    r.ideal_peak_state,
                    r.nmr_peak_state,
                    r.nmr_fidelity,
                    if r.pass { "PASS" } else { "FAIL" }
                ));
            }
            ignore(writeln!(
                out,
                "report: {} (+ {}): {}",
                a.output.display(),
                sidecar.display(),
                if report.pass { "PASS" } else { "FAIL" }
            ));
            Ok(status(report.pass))
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_INVALID;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INVALID
        }
    }
}
