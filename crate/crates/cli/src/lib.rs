//! Batch front end for the Λ-system STIRAP library: argument surface,
//! command implementations and the CSV/SVG output layers behind the
//! `stirap` binary.

pub mod commands;
pub mod csv;
pub mod svg;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use stirap_core::stability::PhaseKernel;

#[derive(Parser)]
#[command(
    name = "stirap",
    version,
    about = "Simulate and analyze STIRAP population transfer in linear and atom-molecule three-level systems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Integrate the population dynamics and write trajectory outputs.
    Simulate(SimulateArgs),
    /// Tabulate adiabaticity parameters over an analysis window (Δ = 0).
    Adiabaticity(AdiabaticityArgs),
    /// Enumerate fixed points of the frozen mean-field flow (Δ = 0).
    FixedPoints(FixedPointsArgs),
    /// Sweep peak amplitude and pulse delay; one CSV row per grid point.
    Sweep(SweepArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Linear,
    Nonlinear,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum KernelArg {
    /// Accumulate the kernel phase as the mode frequencies drift.
    Accumulated,
    /// Freeze the mode frequencies at the evaluation time.
    Frozen,
}

impl From<KernelArg> for PhaseKernel {
    fn from(value: KernelArg) -> Self {
        match value {
            KernelArg::Accumulated => PhaseKernel::Accumulated,
            KernelArg::Frozen => PhaseKernel::Frozen,
        }
    }
}

#[derive(Args, Clone)]
pub struct PulseArgs {
    /// Peak Rabi frequency of both Gaussian pulses (inverse pulse widths).
    #[arg(long, default_value_t = 5.0)]
    pub omega0: f64,
    /// Pump-pulse center; STIRAP ordering needs --t-dump < --t-pump.
    #[arg(long = "t-pump", default_value_t = 3.8)]
    pub t_pump: f64,
    /// Dump-pulse center.
    #[arg(long = "t-dump", default_value_t = 3.0)]
    pub t_dump: f64,
    /// One-photon detuning of the excited level.
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
}

#[derive(Args, Clone)]
pub struct IntegrationArgs {
    /// Start of the integration window.
    #[arg(long, default_value_t = 0.0)]
    pub t0: f64,
    /// End of the integration window.
    #[arg(long, default_value_t = 8.0)]
    pub t1: f64,
    /// Integration step.
    #[arg(long, default_value_t = 1e-3)]
    pub step: f64,
    /// Keep every k-th sample in the outputs.
    #[arg(long = "record-every", default_value_t = 1)]
    pub record_every: usize,
}

fn parse_window(text: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err("expected start,end".into());
    }
    let start: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|e| format!("bad window start: {e}"))?;
    let end: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|e| format!("bad window end: {e}"))?;
    Ok((start, end))
}

#[derive(Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub pulses: PulseArgs,
    #[command(flatten)]
    pub integration: IntegrationArgs,
    /// Which model to integrate.
    #[arg(long, value_enum, default_value_t = Mode::Nonlinear)]
    pub mode: Mode,
    /// Output formats (comma separated).
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Format::Csv, Format::Json, Format::Svg])]
    pub format: Vec<Format>,
    /// Output path prefix; files get .csv/.json/.svg extensions.
    #[arg(long, default_value = "population")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct AdiabaticityArgs {
    #[command(flatten)]
    pub pulses: PulseArgs,
    /// Analysis window start,end; keep it inside the pulse support.
    #[arg(long, value_parser = parse_window, default_value = "0.5,7.5")]
    pub window: (f64, f64),
    /// Grid step of the trace.
    #[arg(long, default_value_t = 1e-3)]
    pub step: f64,
    /// Keep every k-th row in the outputs.
    #[arg(long = "record-every", default_value_t = 1)]
    pub record_every: usize,
    /// Oscillatory-kernel treatment for the amplitude quadrature.
    #[arg(long, value_enum, default_value_t = KernelArg::Accumulated)]
    pub kernel: KernelArg,
    /// Output formats (comma separated).
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Format::Csv, Format::Json, Format::Svg])]
    pub format: Vec<Format>,
    /// Output path prefix.
    #[arg(long, default_value = "adiabaticity")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct FixedPointsArgs {
    /// Pump Rabi frequency.
    #[arg(long = "omega-p")]
    pub omega_p: f64,
    /// Dump Rabi frequency.
    #[arg(long = "omega-d")]
    pub omega_d: f64,
    /// Emit JSON instead of the table.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args)]
pub struct SweepArgs {
    /// Peak amplitudes to sweep (comma separated).
    #[arg(long = "omega0-list", value_delimiter = ',', default_value = "5")]
    pub omega0_list: Vec<f64>,
    /// Pulse delays t_pump − t_dump to sweep (comma separated).
    #[arg(long = "delay-list", value_delimiter = ',', default_value = "0.8")]
    pub delay_list: Vec<f64>,
    /// Dump-pulse center; the pump center is t_dump + delay.
    #[arg(long = "t-dump", default_value_t = 3.0)]
    pub t_dump: f64,
    /// One-photon detuning.
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
    /// Which model the transfer column reports.
    #[arg(long, value_enum, default_value_t = Mode::Nonlinear)]
    pub mode: Mode,
    #[command(flatten)]
    pub integration: IntegrationArgs,
    /// Analysis window for the peak adiabaticity columns.
    #[arg(long, value_parser = parse_window, default_value = "0.5,7.5")]
    pub window: (f64, f64),
    /// Worker threads for sweep points (0 = all cores).
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Output path prefix.
    #[arg(long, default_value = "sweep")]
    pub out: PathBuf,
}

pub fn run(cli: &Cli) -> anyhow::Result<()> {
    match &cli.command {
        Command::Simulate(args) => commands::simulate(args),
        Command::Adiabaticity(args) => commands::adiabaticity(args),
        Command::FixedPoints(args) => commands::fixed_points(args),
        Command::Sweep(args) => commands::sweep(args),
    }
}
