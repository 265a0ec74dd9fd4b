//! `pdc-coupler` command line.
//!
//! Exit codes: 0 success, 1 validation error, 2 degenerate or infeasible
//! computation, 3 I/O error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::config::{Simulation, SimulationConfig};
use crate::design_search::{optimize, write_trace_csv};
use crate::dispersion::{nm_from_omega, omega_from_nm};
use crate::error::Error;
use crate::observables::{evaluate_at_cross_pump, pump_scan, write_scan_csv};
use crate::pdc_state::{build_eigen_state, restrict_channels, to_waveguide_basis, ModePair};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_COMPUTATION: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "pdc-coupler", version, about = "Two-photon N00N states from a nonlinear directional coupler")]
pub struct Cli {
    /// Configuration file (TOML). Defaults to the bundled stock design.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Worker threads: a number or `auto`.
    #[arg(long, global = true, default_value = "auto")]
    pub threads: String,

    /// Suppress informational messages on stderr.
    #[arg(long, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasisArg {
    Eigen,
    Waveguide,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the four-channel joint spectral amplitude as CSV.
    Jsa {
        /// Pump center wavelength; defaults to the configured pump.
        #[arg(long)]
        pump_nm: Option<f64>,
        #[arg(long, value_enum, default_value = "waveguide")]
        basis: BasisArg,
        /// Keep only these supermode channels, e.g. `SA,AS`.
        #[arg(long, value_delimiter = ',')]
        channels: Option<Vec<String>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scan the pump wavelength and write coincidence probabilities as CSV.
    Scan {
        #[arg(long)]
        start_nm: f64,
        #[arg(long)]
        stop_nm: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the fidelity at the cross-pair pump.
    Fidelity {
        #[arg(long, value_delimiter = ',')]
        channels: Option<Vec<String>>,
    },
    /// Search the design space for the highest fidelity.
    Optimize {
        #[arg(long, default_value_t = 200)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out_trace: Option<PathBuf>,
        #[arg(long)]
        out_design: Option<PathBuf>,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e.root() {
            Error::Config { .. } => EXIT_VALIDATION,
            Error::Io { .. } => EXIT_IO,
            _ => EXIT_COMPUTATION,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn validation(key: &str, reason: impl Into<String>) -> Failure {
    Error::Config {
        key: key.into(),
        reason: reason.into(),
    }
    .into()
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
    .into()
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let sink: &mut dyn Write = if code == EXIT_OK { stdout } else { stderr };
            let _ = write!(sink, "{e}");
            return code;
        }
    };
    match execute(&cli, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn configure_threads(spec: &str) -> Result<(), Failure> {
    let threads = if spec == "auto" {
        0
    } else {
        spec.parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| validation("--threads", "expected a positive integer or `auto`"))?
    };
    #[cfg(feature = "parallel")]
    if threads > 0 {
        // A pool may already exist when the CLI runs more than once in-process.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(())
}

fn load(cli: &Cli) -> Result<(SimulationConfig, Simulation), Failure> {
    let cfg = match &cli.config {
        Some(path) => SimulationConfig::load(path)?,
        None => SimulationConfig::default_design(),
    };
    let sim = cfg.validate()?;
    Ok((cfg, sim))
}

fn parse_channels(names: &Option<Vec<String>>) -> Result<Option<Vec<ModePair>>, Failure> {
    let Some(names) = names else {
        return Ok(None);
    };
    let pairs = names
        .iter()
        .map(|n| {
            ModePair::parse(n)
                .ok_or_else(|| validation("--channels", format!("unknown channel `{n}` (use SS, SA, AS, AA)")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if pairs.is_empty() {
        return Err(validation("--channels", "no channels given"));
    }
    Ok(Some(pairs))
}

/// Checks that every grid a pump center would produce lies inside the
/// dispersion windows.
fn check_pump_range(sim: &Simulation, centers: &[f64]) -> Result<(), Failure> {
    let photon = sim.design.dispersion.window();
    let pump = sim.pump.dispersion.window();
    for &center in centers {
        let grid = sim.grid.grid_for(&sim.pump.recentered(center))?;
        let inside = photon.contains(grid.omega_min)
            && photon.contains(grid.omega_max)
            && pump.contains(2.0 * grid.omega_min)
            && pump.contains(2.0 * grid.omega_max);
        if !inside {
            return Err(validation(
                "pump wavelength",
                format!(
                    "{:.4} nm needs photon frequencies outside the dispersion validity windows",
                    nm_from_omega(center)
                ),
            ));
        }
    }
    Ok(())
}

fn emit(path: Option<&Path>, contents: &[u8], stdout: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, contents).map_err(|e| io_failure(p, e)),
        None => stdout
            .write_all(contents)
            .map_err(|e| io_failure(Path::new("<stdout>"), e)),
    }
}

fn output_path(flag: &Option<PathBuf>, configured: Option<&String>) -> Option<PathBuf> {
    flag.clone().or_else(|| configured.map(PathBuf::from))
}

fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    configure_threads(&cli.threads)?;
    let (cfg, sim) = load(cli)?;
    let outputs = cfg.output.clone().unwrap_or_default();
    let info = |stderr: &mut dyn Write, msg: String| {
        if !cli.quiet {
            let _ = writeln!(stderr, "{msg}");
        }
    };

    match &cli.command {
        Command::Jsa {
            pump_nm,
            basis,
            channels,
            out,
        } => {
            let keep = parse_channels(channels)?;
            let center = match pump_nm {
                Some(nm) if *nm > 0.0 && nm.is_finite() => omega_from_nm(*nm),
                Some(_) => return Err(validation("--pump-nm", "must be positive")),
                None => sim.pump.center,
            };
            check_pump_range(&sim, &[center])?;
            let pump = sim.pump.recentered(center);
            let grid = sim.grid.grid_for(&pump)?;
            let mut state = build_eigen_state(&sim.design, &pump, &grid)?;
            if let Some(keep) = &keep {
                state = restrict_channels(&state, keep)?;
            }
            if *basis == BasisArg::Waveguide {
                state = to_waveguide_basis(&state)?;
            }
            let mut buf = Vec::new();
            state
                .write_csv(&mut buf)
                .map_err(|e| io_failure(Path::new("<buffer>"), e))?;
            let path = output_path(out, outputs.jsa.as_ref());
            emit(path.as_deref(), &buf, stdout)?;
            info(stderr, format!("wrote {} rows", 4 * grid.n * grid.n));
        }
        Command::Scan {
            start_nm,
            stop_nm,
            steps,
            out,
        } => {
            if !(start_nm.is_finite() && stop_nm.is_finite() && *start_nm > 0.0 && start_nm < stop_nm) {
                return Err(validation("--start-nm", "need 0 < start < stop"));
            }
            if *steps < 2 {
                return Err(validation("--steps", "need at least 2 samples"));
            }
            check_pump_range(&sim, &[omega_from_nm(*start_nm), omega_from_nm(*stop_nm)])?;
            let records = pump_scan(&sim.design, &sim.pump, &sim.grid, *start_nm, *stop_nm, *steps)?;
            let mut buf = Vec::new();
            write_scan_csv(&records, &mut buf).map_err(|e| io_failure(Path::new("<buffer>"), e))?;
            let path = output_path(out, outputs.scan.as_ref());
            emit(path.as_deref(), &buf, stdout)?;
            info(stderr, format!("wrote {} scan samples", records.len()));
        }
        Command::Fidelity { channels } => {
            let keep = parse_channels(channels)?;
            let report = evaluate_at_cross_pump(&sim.design, &sim.pump, &sim.grid, keep.as_deref())?;
            let text = format!(
                "pump_wavelength_nm={:.17}\np_coinc_wg1={:.17}\np_coinc_wg2={:.17}\np_coinc_cross={:.17e}\nfidelity={:.17}\n",
                report.pump_wavelength_nm,
                report.probs.p11,
                report.probs.p22,
                report.probs.p12,
                report.fidelity
            );
            emit(None, text.as_bytes(), stdout)?;
        }
        Command::Optimize {
            budget,
            seed,
            out_trace,
            out_design,
        } => {
            let space = sim
                .search
                .as_ref()
                .ok_or_else(|| validation("search", "optimize needs a [search] table"))?;
            if *budget < 10 {
                return Err(validation("--budget", "need at least 10 evaluations"));
            }
            let result = optimize(space, *budget, *seed)?;
            let (design, pump) = space.realize(&result.best)?;

            let mut trace = Vec::new();
            write_trace_csv(&result.trace, &mut trace).map_err(|e| io_failure(Path::new("<buffer>"), e))?;
            let fragment = format!(
                "# Best design from `optimize --budget {budget} --seed {seed}`.\n\
                 # fidelity at the cross-pair pump = {:.17}\n\n{}",
                result.best_fidelity,
                cfg.with_design(&design, pump.sigma, pump.center).to_toml_string()
            );
            if let Some(p) = output_path(out_trace, outputs.trace.as_ref()) {
                emit(Some(&p), &trace, stdout)?;
            }
            if let Some(p) = output_path(out_design, outputs.design.as_ref()) {
                emit(Some(&p), fragment.as_bytes(), stdout)?;
            }
            let report = format!(
                "evaluations={}\nbest_length_m={:.17e}\nbest_coupling_rad_m={:.17e}\nbest_sigma_rad_s={:.17e}\nbest_poling_period_m={:.17e}\nbest_fidelity={:.17}\n",
                result.trace.len(),
                result.best.length,
                result.best.coupling,
                result.best.sigma,
                result.best_poling_period,
                result.best_fidelity
            );
            emit(None, report.as_bytes(), stdout)?;
        }
    }
    Ok(())
}
