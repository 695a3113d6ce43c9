//! Implementations behind the CLI subcommands.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::Serialize;

use stirap_core::integrate::{integrate, IntegrationConfig, TimeGrid, Trajectory};
use stirap_core::linear::{linear_rhs, r_lin};
use stirap_core::model::{
    GaussianPulsePair, PulseSample, PulseSchedule, StateVector, SystemParams,
};
use stirap_core::nonlinear::{
    atom_number, enumerate_fixed_points, meanfield_rhs, stationary_residual, FixedPointFamily,
};
use stirap_core::stability::{adiabaticity_trace, r_nl_closed, AdiabaticitySample, PhaseKernel};

use crate::csv::{fmt_f64, Csv};
use crate::svg::{Chart, Series};
use crate::{
    AdiabaticityArgs, FixedPointsArgs, Format, IntegrationArgs, Mode, PulseArgs, SimulateArgs,
    SweepArgs,
};

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Linear => "linear",
            Mode::Nonlinear => "nonlinear",
        }
    }

    /// Transferred population: |ψ_g|² for the linear system, 2|ψ_g|² for
    /// the nonlinear one (a molecule carries two atoms).
    fn transfer(self, state: &StateVector) -> f64 {
        match self {
            Mode::Linear => state.psi_g.norm_sqr(),
            Mode::Nonlinear => 2.0 * state.psi_g.norm_sqr(),
        }
    }

    /// The conserved normalization of this model.
    fn norm(self, state: &StateVector) -> f64 {
        match self {
            Mode::Linear => state.norm_sqr(),
            Mode::Nonlinear => atom_number(state),
        }
    }
}

impl PulseArgs {
    pub fn validate(&self) -> Result<(GaussianPulsePair, SystemParams)> {
        if !(self.omega0 > 0.0 && self.omega0.is_finite()) {
            bail!("--omega0 must be positive and finite");
        }
        if !(self.t_pump.is_finite() && self.t_dump.is_finite()) {
            bail!("--t-pump and --t-dump must be finite");
        }
        if !self.delta.is_finite() {
            bail!("--delta must be finite");
        }
        Ok((
            GaussianPulsePair::new(self.omega0, self.t_pump, self.t_dump),
            SystemParams::new(self.delta),
        ))
    }
}

impl IntegrationArgs {
    pub fn validate(&self) -> Result<IntegrationConfig> {
        if !self.t0.is_finite() || !self.t1.is_finite() || self.t1 <= self.t0 {
            bail!("--t1 must exceed --t0");
        }
        if !(self.step > 0.0 && self.step <= self.t1 - self.t0) {
            bail!("--step must be positive and no larger than the window");
        }
        if self.record_every == 0 {
            bail!("--record-every must be at least 1");
        }
        Ok(IntegrationConfig::new(
            self.t0,
            self.t1,
            self.step,
            self.record_every,
        ))
    }
}

fn run_trajectory(
    mode: Mode,
    pulses: &GaussianPulsePair,
    params: &SystemParams,
    config: &IntegrationConfig,
) -> Result<Trajectory> {
    let initial = StateVector::all_atoms();
    let trajectory = match mode {
        Mode::Linear => integrate(
            |t, s| linear_rhs(s, &pulses.sample(t), params),
            initial,
            config,
        ),
        Mode::Nonlinear => integrate(
            |t, s| meanfield_rhs(s, &pulses.sample(t), params),
            initial,
            config,
        ),
    };
    trajectory.map_err(Into::into)
}

fn write_output(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn with_extension(prefix: &Path, ext: &str) -> PathBuf {
    let mut name = prefix.file_name().unwrap_or_default().to_os_string();
    name.push(".");
    name.push(ext);
    prefix.with_file_name(name)
}

#[derive(Serialize)]
struct SimulateSummary {
    final_pop_a: f64,
    final_pop_e: f64,
    final_pop_g: f64,
    transfer_efficiency: f64,
    max_norm_drift: f64,
}

#[derive(Serialize)]
struct RunMetadata {
    mode: &'static str,
    omega0: f64,
    t_pump: f64,
    t_dump: f64,
    delta: f64,
    t0: f64,
    t1: f64,
    step: f64,
    record_every: usize,
}

#[derive(Serialize)]
struct SimulateReport {
    summary: SimulateSummary,
    metadata: RunMetadata,
}

pub fn simulate(args: &SimulateArgs) -> Result<()> {
    let (pulses, params) = args.pulses.validate()?;
    let config = args.integration.validate()?;
    let trajectory = run_trajectory(args.mode, &pulses, &params, &config)?;

    if args.format.contains(&Format::Csv) {
        let mut csv = Csv::new(vec![
            "t", "re_psi_a", "im_psi_a", "re_psi_e", "im_psi_e", "re_psi_g", "im_psi_g", "pop_a",
            "pop_e", "pop_g", "transfer",
        ]);
        for sample in trajectory.samples() {
            let s = &sample.state;
            csv.push_row(vec![
                fmt_f64(sample.t),
                fmt_f64(s.psi_a.re),
                fmt_f64(s.psi_a.im),
                fmt_f64(s.psi_e.re),
                fmt_f64(s.psi_e.im),
                fmt_f64(s.psi_g.re),
                fmt_f64(s.psi_g.im),
                fmt_f64(sample.pop_a()),
                fmt_f64(sample.pop_e()),
                fmt_f64(sample.pop_g()),
                fmt_f64(args.mode.transfer(s)),
            ]);
        }
        write_output(&with_extension(&args.out, "csv"), &csv.emit())?;
    }

    if args.format.contains(&Format::Json) {
        let last = trajectory.last();
        let report = SimulateReport {
            summary: SimulateSummary {
                final_pop_a: last.pop_a(),
                final_pop_e: last.pop_e(),
                final_pop_g: last.pop_g(),
                transfer_efficiency: args.mode.transfer(&last.state),
                max_norm_drift: trajectory.max_drift(|s| args.mode.norm(s)),
            },
            metadata: RunMetadata {
                mode: args.mode.as_str(),
                omega0: pulses.omega0,
                t_pump: pulses.t_p,
                t_dump: pulses.t_d,
                delta: params.delta,
                t0: config.t0,
                t1: config.t1,
                step: config.step,
                record_every: config.record_every,
            },
        };
        let mut text = serde_json::to_string_pretty(&report)?;
        text.push('\n');
        write_output(&with_extension(&args.out, "json"), &text)?;
    }

    if args.format.contains(&Format::Svg) {
        let pick = |f: fn(&stirap_core::TrajectorySample) -> f64| {
            trajectory
                .samples()
                .iter()
                .map(|s| (s.t, f(s)))
                .collect::<Vec<_>>()
        };
        let mode = args.mode;
        let chart = Chart {
            title: format!("Population dynamics ({})", mode.as_str()),
            x_label: "t (pulse widths)".into(),
            y_label: "population".into(),
            log_y: false,
            series: vec![
                Series {
                    label: "|psi_a|^2".into(),
                    dashed: false,
                    points: pick(|s| s.pop_a()),
                },
                Series {
                    label: "|psi_e|^2".into(),
                    dashed: false,
                    points: pick(|s| s.pop_e()),
                },
                Series {
                    label: "transfer".into(),
                    dashed: true,
                    points: trajectory
                        .samples()
                        .iter()
                        .map(|s| (s.t, mode.transfer(&s.state)))
                        .collect(),
                },
            ],
        };
        write_output(&with_extension(&args.out, "svg"), &chart.render())?;
    }
    Ok(())
}

#[derive(Serialize)]
struct AdiabaticityPeaks {
    peak_r_lin: f64,
    peak_r_nl_closed: f64,
    peak_r_nl_exact: f64,
    peak_r_nl_ode: f64,
}

#[derive(Serialize)]
struct AdiabaticityReport {
    summary: AdiabaticityPeaks,
    metadata: AdiabaticityMetadata,
}

#[derive(Serialize)]
struct AdiabaticityMetadata {
    omega0: f64,
    t_pump: f64,
    t_dump: f64,
    delta: f64,
    window_start: f64,
    window_end: f64,
    step: f64,
    kernel: &'static str,
}

pub fn adiabaticity(args: &AdiabaticityArgs) -> Result<()> {
    let (pulses, params) = args.pulses.validate()?;
    let (start, end) = args.window;
    if !start.is_finite() || !end.is_finite() || end <= start {
        bail!("--window must be an increasing pair start,end");
    }
    if !(args.step > 0.0 && args.step <= end - start) {
        bail!("--step must be positive and no larger than the window");
    }
    if args.record_every == 0 {
        bail!("--record-every must be at least 1");
    }
    let grid = TimeGrid::from_step(start, end, args.step);
    let kernel = args.kernel.into();
    let trace = adiabaticity_trace(&pulses, &params, &grid, kernel)?;

    let kept: Vec<&AdiabaticitySample> = trace
        .iter()
        .enumerate()
        .filter(|(k, _)| k % args.record_every == 0 || *k == trace.len() - 1)
        .map(|(_, row)| row)
        .collect();

    if args.format.contains(&Format::Csv) {
        let mut csv = Csv::new(vec![
            "t",
            "re_c_plus",
            "im_c_plus",
            "re_c_minus",
            "im_c_minus",
            "r_nl_exact",
            "r_nl_ode",
            "r_nl_closed",
            "r_lin",
        ]);
        for row in &kept {
            csv.push_row(vec![
                fmt_f64(row.t),
                fmt_f64(row.c_plus.re),
                fmt_f64(row.c_plus.im),
                fmt_f64(row.c_minus.re),
                fmt_f64(row.c_minus.im),
                fmt_f64(row.r_nl_exact),
                fmt_f64(row.r_nl_ode),
                fmt_f64(row.r_nl_closed),
                fmt_f64(row.r_lin),
            ]);
        }
        write_output(&with_extension(&args.out, "csv"), &csv.emit())?;
    }

    if args.format.contains(&Format::Json) {
        let peak = |f: fn(&AdiabaticitySample) -> f64| trace.iter().map(f).fold(0.0f64, f64::max);
        let report = AdiabaticityReport {
            summary: AdiabaticityPeaks {
                peak_r_lin: peak(|r| r.r_lin),
                peak_r_nl_closed: peak(|r| r.r_nl_closed),
                peak_r_nl_exact: peak(|r| r.r_nl_exact),
                peak_r_nl_ode: peak(|r| r.r_nl_ode),
            },
            metadata: AdiabaticityMetadata {
                omega0: pulses.omega0,
                t_pump: pulses.t_p,
                t_dump: pulses.t_d,
                delta: params.delta,
                window_start: start,
                window_end: end,
                step: grid.step(),
                kernel: match kernel {
                    PhaseKernel::Accumulated => "accumulated",
                    PhaseKernel::Frozen => "frozen",
                },
            },
        };
        let mut text = serde_json::to_string_pretty(&report)?;
        text.push('\n');
        write_output(&with_extension(&args.out, "json"), &text)?;
    }

    if args.format.contains(&Format::Svg) {
        let pick = |f: fn(&AdiabaticitySample) -> f64| {
            kept.iter().map(|r| (r.t, f(r))).collect::<Vec<_>>()
        };
        let chart = Chart {
            title: "Adiabaticity parameters".into(),
            x_label: "t (pulse widths)".into(),
            y_label: "r".into(),
            log_y: true,
            series: vec![
                Series {
                    label: "r_lin".into(),
                    dashed: false,
                    points: pick(|r| r.r_lin),
                },
                Series {
                    label: "r_nl closed".into(),
                    dashed: false,
                    points: pick(|r| r.r_nl_closed),
                },
                Series {
                    label: "r_nl quadrature".into(),
                    dashed: true,
                    points: pick(|r| r.r_nl_exact),
                },
                Series {
                    label: "r_nl ode".into(),
                    dashed: true,
                    points: pick(|r| r.r_nl_ode),
                },
            ],
        };
        write_output(&with_extension(&args.out, "svg"), &chart.render())?;
    }
    Ok(())
}

#[derive(Serialize)]
struct FixedPointJson {
    family: &'static str,
    frequency: f64,
    psi_a: [f64; 2],
    psi_e: [f64; 2],
    psi_g: [f64; 2],
    residual: f64,
    atom_number: f64,
}

fn family_name(family: FixedPointFamily) -> &'static str {
    match family {
        FixedPointFamily::Cpt => "cpt",
        FixedPointFamily::MolecularPair => "molecular-pair",
        FixedPointFamily::MixedPair => "mixed-pair",
    }
}

pub fn fixed_points(args: &FixedPointsArgs) -> Result<()> {
    if !(args.omega_p > 0.0 && args.omega_p.is_finite()) {
        bail!("--omega-p must be positive and finite");
    }
    if !(args.omega_d > 0.0 && args.omega_d.is_finite()) {
        bail!("--omega-d must be positive and finite");
    }
    let sample = PulseSample::constant(args.omega_p, args.omega_d);
    let params = SystemParams::resonant();
    let points = enumerate_fixed_points(&sample, &params)?;

    let entries: Vec<FixedPointJson> = points
        .iter()
        .map(|p| FixedPointJson {
            family: family_name(p.family),
            frequency: p.frequency,
            psi_a: [p.state.psi_a.re, p.state.psi_a.im],
            psi_e: [p.state.psi_e.re, p.state.psi_e.im],
            psi_g: [p.state.psi_g.re, p.state.psi_g.im],
            residual: stationary_residual(&p.state, p.frequency, &sample, &params),
            atom_number: atom_number(&p.state),
        })
        .collect();

    if args.json {
        let report = serde_json::json!({
            "omega_p": args.omega_p,
            "omega_d": args.omega_d,
            "count": entries.len(),
            "points": entries,
        });
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!(
            "{} fixed points at omega_p = {}, omega_d = {}:",
            entries.len(),
            fmt_f64(args.omega_p),
            fmt_f64(args.omega_d)
        );
        println!(
            "{:<15} {:>12} {:>12} {:>12} {:>12} {:>11} {:>12}",
            "family", "frequency", "psi_a", "psi_e", "psi_g", "residual", "atom_number"
        );
        for e in &entries {
            println!(
                "{:<15} {:>12.6} {:>12.6} {:>12.6} {:>12.6} {:>11.2e} {:>12.6}",
                e.family,
                e.frequency,
                e.psi_a[0],
                e.psi_e[0],
                e.psi_g[0],
                e.residual,
                e.atom_number
            );
        }
    }
    Ok(())
}

struct SweepPoint {
    omega0: f64,
    delay: f64,
}

struct SweepOutcome {
    transfer: Option<f64>,
    peak_r_nl: Option<f64>,
    peak_r_lin: Option<f64>,
    error: String,
}

fn sweep_point(args: &SweepArgs, point: &SweepPoint) -> SweepOutcome {
    let mut errors: Vec<String> = Vec::new();
    let pulses = GaussianPulsePair::new(point.omega0, args.t_dump + point.delay, args.t_dump);
    let params = SystemParams::new(args.delta);

    let transfer = match args
        .integration
        .validate()
        .and_then(|config| run_trajectory(args.mode, &pulses, &params, &config))
    {
        Ok(trajectory) => Some(args.mode.transfer(&trajectory.last().state)),
        Err(e) => {
            errors.push(format!("transfer: {e}"));
            None
        }
    };

    let (start, end) = args.window;
    let grid = TimeGrid::from_step(start, end, args.integration.step);
    let mut peak_r_nl = Some(0.0f64);
    let mut peak_r_lin = Some(0.0f64);
    for t in grid.iter() {
        let sample = pulses.sample(t);
        if let Some(peak) = peak_r_nl.as_mut() {
            match r_nl_closed(&sample, &params) {
                Ok(r) => *peak = peak.max(r),
                Err(e) => {
                    errors.push(format!("peak_r_nl: {e}"));
                    peak_r_nl = None;
                }
            }
        }
        if let Some(peak) = peak_r_lin.as_mut() {
            match r_lin(&sample) {
                Ok(r) => *peak = peak.max(r),
                Err(e) => {
                    errors.push(format!("peak_r_lin: {e}"));
                    peak_r_lin = None;
                }
            }
        }
        if peak_r_nl.is_none() && peak_r_lin.is_none() {
            break;
        }
    }

    // Keep the error cell CSV-safe.
    let error = errors.join(" | ").replace([',', '\n'], ";");
    SweepOutcome {
        transfer,
        peak_r_nl,
        peak_r_lin,
        error,
    }
}

pub fn sweep(args: &SweepArgs) -> Result<()> {
    if args.omega0_list.is_empty() || args.delay_list.is_empty() {
        bail!("sweep grids must be nonempty");
    }
    for &omega0 in &args.omega0_list {
        if !(omega0 > 0.0 && omega0.is_finite()) {
            bail!("--omega0-list entries must be positive and finite");
        }
    }
    args.integration.validate()?;
    let (start, end) = args.window;
    if !start.is_finite() || !end.is_finite() || end <= start {
        bail!("--window must be an increasing pair start,end");
    }

    let points: Vec<SweepPoint> = args
        .omega0_list
        .iter()
        .flat_map(|&omega0| {
            args.delay_list
                .iter()
                .map(move |&delay| SweepPoint { omega0, delay })
        })
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .context("building the sweep thread pool")?;
    let outcomes: Vec<SweepOutcome> =
        pool.install(|| points.par_iter().map(|p| sweep_point(args, p)).collect());

    let mut csv = Csv::new(vec![
        "omega0",
        "delay",
        "mode",
        "transfer_efficiency",
        "peak_r_nl",
        "peak_r_lin",
        "error",
    ]);
    let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
    for (point, outcome) in points.iter().zip(&outcomes) {
        csv.push_row(vec![
            fmt_f64(point.omega0),
            fmt_f64(point.delay),
            args.mode.as_str().to_owned(),
            opt(outcome.transfer),
            opt(outcome.peak_r_nl),
            opt(outcome.peak_r_lin),
            outcome.error.clone(),
        ]);
    }
    write_output(&with_extension(&args.out, "csv"), &csv.emit())
}
