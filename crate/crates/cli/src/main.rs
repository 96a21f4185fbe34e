//! Command-line driver for the bandwave spectral solver.
//!
//! Exit codes: 0 success, 2 configuration/validation failure, 3 failed
//! numerical check (oracle discrepancy above tolerance, split mismatch),
//! 1 anything else. Errors are emitted to stderr as single-line JSON.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use bandwave::config::{parse_times, parse_window, FilterConfig, SimConfig};
use bandwave::{
    build_counterexample, cross_validate, fit_decay, io, project, propagate_state, resolvent_solve,
    scenario, trajectory_ledger, verify_split, Component, Error, FilterSpectrum64,
    ProjectionFilter, SpectralState64,
};

#[derive(Parser)]
#[command(
    name = "bandwave",
    version,
    about = "Spectral solver for the 1D wave equation with frequency-filtered damping",
    after_help = "Exit codes: 0 success, 2 config validation failure, 3 numerical-check failure."
)]
struct Cli {
    /// Suppress progress messages on stderr.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Propagate a configured state and dump grid snapshots plus the energy ledger.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Comma list (0,1,2.5) or inclusive range start:step:end.
        #[arg(long)]
        times: String,
        #[arg(long)]
        out: PathBuf,
        /// Synthesis grid size.
        #[arg(long, default_value_t = 256)]
        grid_n: usize,
    },
    /// Cross-validate the closed-form propagator against the RK4 oracle.
    Validate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        dt: f64,
        /// Fail (exit 3) when the discrepancy exceeds this bound.
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
    },
    /// Print the energy ledger CSV on stdout.
    Energy {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        t_end: f64,
        /// Number of uniform steps (steps+1 ledger rows).
        #[arg(long)]
        steps: usize,
    },
    /// Verify the dissipative/conservative splitting (indicator filters only).
    Split {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        times: String,
    },
    /// Fit an exponential decay rate along the trajectory.
    Decay {
        #[arg(long)]
        config: PathBuf,
        /// Fit window t_lo,t_hi.
        #[arg(long)]
        window: String,
        /// Trajectory samples inside the window.
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Build a certificate refuting the uniform decay bound (gamma, M).
    Counterexample {
        #[arg(long)]
        gamma: f64,
        #[arg(long = "M", visible_alias = "m")]
        m: f64,
        /// Inline filter JSON, e.g. '{"kind":"powertail","exponent":1.0}'.
        #[arg(long)]
        filter: Option<String>,
        #[arg(long, default_value_t = 64)]
        k_max: usize,
        /// Number of witness times.
        #[arg(long, default_value_t = 11)]
        count: usize,
        /// Also write certificate.json and margins.csv under this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve (-Laplace + P + Id) u = h for the u-part of a state file.
    Resolvent {
        #[arg(long)]
        config: PathBuf,
        /// State JSON whose u_hat is the right-hand side.
        #[arg(long)]
        rhs: PathBuf,
    },
    /// Emit a canned demonstration data set.
    Scenario {
        name: ScenarioName,
        #[arg(long)]
        out: PathBuf,
        /// Decay-rate parameter (example34 only).
        #[arg(long, default_value_t = 0.1)]
        gamma: f64,
        /// Bound parameter (example34 only).
        #[arg(long = "M", default_value_t = 10.0)]
        m: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ScenarioName {
    Figure1,
    Example33,
    Example34,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Config(_)
            | Error::InvalidInput(_)
            | Error::GridTooCoarse { .. }
            | Error::HermitianViolation { .. }
            | Error::DimensionMismatch(_)
            | Error::NonIdempotentFilter
            | Error::StabilityBound { .. }
            | Error::FitWindow(_)
            | Error::EmptyProjection
            | Error::NoAdmissibleMode { .. } => 2,
            Error::RealityViolation { .. } | Error::QuadratureNonConvergence { .. } => 3,
            Error::Io(_) => 1,
        };
        Failure::new(code, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let doc = serde_json::json!({ "error": f.message, "exit_code": f.code });
            eprintln!("{doc}");
            ExitCode::from(f.code)
        }
    }
}

fn progress(cli: &Cli, msg: &str) {
    if !cli.quiet {
        eprintln!("bandwave: {msg}");
    }
}

/// Writes a payload to stdout. A broken pipe means the consumer is gone
/// (e.g. piped into `head`); stop quietly instead of panicking.
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout();
    if out.write_all(text.as_bytes()).is_err() || out.flush().is_err() {
        std::process::exit(0);
    }
}

fn emit_line(text: &str) {
    emit(text);
    emit("\n");
}

fn read_config(path: &Path) -> Result<SimConfig, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(2, format!("cannot read config {}: {e}", path.display())))?;
    Ok(SimConfig::from_json(&text)?)
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)
            .map_err(|e| Failure::new(1, format!("cannot create {}: {e}", dir.display())))?;
    }
    fs::write(path, contents)
        .map_err(|e| Failure::new(1, format!("cannot write {}: {e}", path.display())))
}

/// Shortest decimal form of a time for file names: 2 -> "2", 0.5 -> "0.5".
fn time_tag(t: f64) -> String {
    format!("{t}")
}

fn build(config: &SimConfig) -> Result<(SpectralState64, FilterSpectrum64), Failure> {
    Ok((config.build_state()?, config.build_filter()?))
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Simulate {
            config,
            times,
            out,
            grid_n,
        } => {
            let cfg = read_config(config)?;
            let (state0, filter) = build(&cfg)?;
            let times = parse_times(times)?;
            progress(cli, &format!("simulating {} snapshot(s)", times.len()));
            for &t in &times {
                let st = propagate_state(&state0, &filter, t)?;
                let u = st.synthesize_u(*grid_n)?;
                let v = st.synthesize_v(*grid_n)?;
                let csv = io::grid_csv(&u, Some(&v))?;
                write_file(&out.join(format!("snap_t{}.csv", time_tag(t))), &csv)?;
            }
            let ledger = trajectory_ledger(&state0, &filter, &times)?;
            write_file(&out.join("ledger.csv"), &io::ledger_csv(&ledger))?;
            progress(cli, &format!("wrote {}", out.display()));
            Ok(())
        }
        Command::Validate { config, t, dt, tol } => {
            let cfg = read_config(config)?;
            let (state0, filter) = build(&cfg)?;
            let report = cross_validate(&state0, &filter, *t, *dt)?;
            emit_line(&serde_json::to_string_pretty(&report).expect("report serialization"));
            if report.max_discrepancy > *tol {
                return Err(Failure::new(
                    3,
                    format!(
                        "oracle discrepancy {:.3e} exceeds tolerance {:.3e} (worst mode {})",
                        report.max_discrepancy, tol, report.worst_mode
                    ),
                ));
            }
            Ok(())
        }
        Command::Energy {
            config,
            t_end,
            steps,
        } => {
            let cfg = read_config(config)?;
            let (state0, filter) = build(&cfg)?;
            if !(t_end.is_finite() && *t_end > 0.0) || *steps == 0 {
                return Err(Failure::new(2, "need t_end > 0 and steps >= 1"));
            }
            let times: Vec<f64> = (0..=*steps)
                .map(|i| i as f64 * t_end / *steps as f64)
                .collect();
            let ledger = trajectory_ledger(&state0, &filter, &times)?;
            emit(&io::ledger_csv(&ledger));
            Ok(())
        }
        Command::Split { config, times } => {
            let cfg = read_config(config)?;
            let (state0, filter) = build(&cfg)?;
            let pf = ProjectionFilter::new(filter)?;
            let times = parse_times(times)?;
            let report = verify_split(&state0, &pf, &times)?;
            emit_line(&serde_json::to_string_pretty(&report).expect("report serialization"));
            if !report.passed {
                return Err(Failure::new(
                    3,
                    format!(
                        "split mismatch: q_max_err {:.3e}, p_max_err {:.3e}",
                        report.q_max_err, report.p_max_err
                    ),
                ));
            }
            Ok(())
        }
        Command::Decay {
            config,
            window,
            samples,
        } => {
            let cfg = read_config(config)?;
            let (state0, filter) = build(&cfg)?;
            let (lo, hi) = parse_window(window)?;
            if *samples < 5 {
                return Err(Failure::new(2, "need at least 5 samples"));
            }
            // For indicator filters fit the H1 distance to the conservative
            // part; otherwise fit the H1 norm of the displacement itself.
            let indicator = ProjectionFilter::new(filter.clone()).ok();
            let mut series = Vec::with_capacity(*samples);
            for i in 0..*samples {
                let t = lo + (hi - lo) * i as f64 / (*samples - 1) as f64;
                let st = propagate_state(&state0, &filter, t)?;
                let value = match &indicator {
                    Some(pf) => project(&st, pf, Component::Dissipative)
                        .u()
                        .h1_norm_sq(state0.l())
                        .sqrt(),
                    None => st.u().h1_norm_sq(state0.l()).sqrt(),
                };
                series.push((t, value));
            }
            let fit = fit_decay(&series, (lo, hi))?;
            emit_line(&serde_json::to_string_pretty(&fit).expect("fit serialization"));
            Ok(())
        }
        Command::Counterexample {
            gamma,
            m,
            filter,
            k_max,
            count,
            out,
        } => {
            let spectrum = match filter {
                None => FilterSpectrum64::power_tail(*k_max, 1.0)?,
                Some(text) => {
                    let fc: FilterConfig = serde_json::from_str(text)
                        .map_err(|e| Failure::new(2, format!("bad --filter: {e}")))?;
                    let cfg = SimConfig {
                        l: 1.0,
                        k_max: *k_max,
                        filter: fc,
                        initial: bandwave::config::InitialConfig::Random {
                            seed: 0,
                            decay: 1.0,
                        },
                    };
                    cfg.build_filter()?
                }
            };
            let cert = build_counterexample(*gamma, *m, &spectrum, *count)?;
            let json = io::certificate_to_json(&cert);
            if let Some(dir) = out {
                write_file(&dir.join("certificate.json"), &json)?;
                write_file(&dir.join("margins.csv"), &io::margins_csv(&cert))?;
                progress(cli, &format!("wrote {}", dir.display()));
            }
            emit_line(&json);
            Ok(())
        }
        Command::Resolvent { config, rhs } => {
            let cfg = read_config(config)?;
            let filter = cfg.build_filter()?;
            let text = fs::read_to_string(rhs)
                .map_err(|e| Failure::new(2, format!("cannot read rhs {}: {e}", rhs.display())))?;
            let rhs_state = io::state_from_json(&text)?;
            if rhs_state.k_max() != cfg.k_max {
                return Err(Failure::new(
                    2,
                    format!(
                        "rhs K_max = {} does not match config K_max = {}",
                        rhs_state.k_max(),
                        cfg.k_max
                    ),
                ));
            }
            let solution = resolvent_solve(&filter, rhs_state.u(), cfg.l)?;
            let state = SpectralState64::at_rest(cfg.l, solution)?;
            emit_line(&io::state_to_json(&state));
            Ok(())
        }
        Command::Scenario {
            name,
            out,
            gamma,
            m,
        } => run_scenario(cli, *name, out, *gamma, *m),
    }
}

fn run_scenario(
    cli: &Cli,
    name: ScenarioName,
    out: &Path,
    gamma: f64,
    m: f64,
) -> Result<(), Failure> {
    match name {
        ScenarioName::Figure1 => {
            let bundle = scenario::scenario_figure1_default::<f64>()?;
            let dir = out.join("figure1");
            for (t, field) in &bundle.snapshots {
                let csv = io::grid_csv(field, None)?;
                write_file(&dir.join(format!("snap_t{}.csv", time_tag(*t))), &csv)?;
            }
            write_file(
                &dir.join("q_initial.csv"),
                &io::grid_csv(&bundle.initial_conserved, None)?,
            )?;
            write_file(
                &dir.join("distance.csv"),
                &io::series_csv("t,distance_h1", &bundle.distance),
            )?;
            write_file(
                &dir.join("conserved_energy.csv"),
                &io::series_csv("t,energy", &bundle.conserved_energy),
            )?;
            progress(cli, &format!("wrote {}", dir.display()));
            Ok(())
        }
        ScenarioName::Example33 => {
            let bundle = scenario::scenario_example33_default::<f64>()?;
            let dir = out.join("example33");
            write_file(&dir.join("modes.csv"), &io::example33_csv(&bundle))?;
            progress(cli, &format!("wrote {}", dir.display()));
            Ok(())
        }
        ScenarioName::Example34 => {
            let cert = scenario::scenario_example34(gamma, m)?;
            let dir = out.join("example34");
            write_file(
                &dir.join("certificate.json"),
                &io::certificate_to_json(&cert),
            )?;
            write_file(&dir.join("margins.csv"), &io::margins_csv(&cert))?;
            progress(cli, &format!("wrote {}", dir.display()));
            Ok(())
        }
    }
}
