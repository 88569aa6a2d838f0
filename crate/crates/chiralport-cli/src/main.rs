//! Command-line interface for the chiralport transport library.
//!
//! ```text
//! chiralport amplitudes --config device.toml [--delta 0.5 | --omega 1.3]
//! chiralport sweep --config sweep.toml --out data.csv
//! chiralport oracle-verify --points 50 --seed 1 --format json
//! chiralport dump-wavefunction --config device.toml --k1 0.2 --k2 -0.1
//! chiralport check --seed 1
//! ```
//!
//! Exit codes: 0 success, 1 invalid configuration or I/O failure,
//! 2 infeasible design requested without `--allow-infeasible`,
//! 3 verification failure.

use std::path::PathBuf;
use std::process::ExitCode;

use chiralport::scattering::amplitudes_forward;
use chiralport::verify;
use chiralport::Error;
use chiralport_cli::config::{Config, SweepSpec, Target};
use chiralport_cli::output::{Cell, Format, Table};
use chiralport_cli::sweeps;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "chiralport", version, about = "Four-port chiral photon router: amplitudes, design sweeps and verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Configuration file (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output encoding.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Seed for randomized sweeps and verification.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Emit flagged rows instead of failing when the configured design is
    /// infeasible.
    #[arg(long, global = true)]
    allow_infeasible: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Single-photon amplitudes of the configured device at one frequency.
    Amplitudes {
        /// Absolute photon frequency; conflicts with --delta.
        #[arg(long, conflicts_with = "delta")]
        omega: Option<f64>,
        /// Detuning from the emitter resonance in units of the total
        /// waveguide rate (default 0).
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Run the sweep described by the config's [sweep] section.
    Sweep,
    /// Compare closed-form amplitudes with the lattice oracle at random
    /// parameter points.
    OracleVerify {
        /// Number of random points (default 50).
        #[arg(long)]
        points: Option<usize>,
    },
    /// Dump the two-photon wavefunctions of the configured device on a grid.
    DumpWavefunction {
        /// First input wavevector (default: emitter resonance).
        #[arg(long)]
        k1: Option<f64>,
        /// Second input wavevector (default: emitter resonance).
        #[arg(long)]
        k2: Option<f64>,
        /// Half-width of the coordinate grid (default: ten correlation
        /// lengths).
        #[arg(long)]
        extent: Option<f64>,
        /// Grid points per coordinate.
        #[arg(long, default_value_t = 101)]
        count: usize,
        /// Restrict the dump to one component label (e.g. phi_rr).
        #[arg(long)]
        component: Option<String>,
    },
    /// Run the full verification suite and report one line per check.
    Check,
}

/// Failure modes that map to distinct exit codes.
enum Failure {
    /// Invalid config, invalid parameters, I/O problems.
    Config(anyhow::Error),
    /// A design below the rectification threshold without --allow-infeasible.
    Infeasible(anyhow::Error),
    /// The verification suite rejected the build.
    Verification,
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Config(_) => 1,
            Failure::Infeasible(_) => 2,
            Failure::Verification => 3,
        }
    }
}

/// True when the error chain bottoms out in an infeasible-design error.
fn is_infeasible(err: &anyhow::Error) -> bool {
    err.chain().any(|cause| {
        matches!(
            cause.downcast_ref::<Error>(),
            Some(Error::BelowThreshold { .. }) | Some(Error::InfeasibleRectifier { .. })
        )
    })
}

fn classify(err: anyhow::Error) -> Failure {
    if is_infeasible(&err) {
        Failure::Infeasible(err)
    } else {
        Failure::Config(err)
    }
}

fn load_config(cli: &Cli) -> anyhow::Result<Config> {
    match &cli.config {
        Some(path) => Config::load(path),
        None => anyhow::bail!("this command needs --config <path>"),
    }
}

fn emit(cli: &Cli, text: &str) -> anyhow::Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn amplitudes_command(cli: &Cli, omega: Option<f64>, delta: Option<f64>) -> Result<(), Failure> {
    let config = load_config(cli).map_err(Failure::Config)?;
    let columns = vec![
        "omega",
        "feasible",
        "t_re",
        "t_im",
        "r_re",
        "r_im",
        "t_tilde_re",
        "t_tilde_im",
        "r_tilde_re",
        "r_tilde_im",
        "transmission",
        "reflection",
        "transfer_t",
        "transfer_r",
        "flux_sum",
    ];
    let mut table = Table::new(columns);
    match config.resolve_device() {
        Ok(p) => {
            let omega = match (omega, delta) {
                (Some(w), _) => w,
                (None, d) => p.emitter.omega_eg + d.unwrap_or(0.0) * p.gamma_waveguides(),
            };
            let a = amplitudes_forward(&p, omega)
                .map_err(|e| Failure::Config(anyhow::Error::new(e)))?;
            let [refl, trans, tt, tr] = a.probabilities();
            table.push(vec![
                Cell::Num(omega),
                Cell::Bool(true),
                Cell::Num(a.t.re),
                Cell::Num(a.t.im),
                Cell::Num(a.r.re),
                Cell::Num(a.r.im),
                Cell::Num(a.t_tilde.re),
                Cell::Num(a.t_tilde.im),
                Cell::Num(a.r_tilde.re),
                Cell::Num(a.r_tilde.im),
                Cell::Num(trans),
                Cell::Num(refl),
                Cell::Num(tt),
                Cell::Num(tr),
                Cell::Num(a.probability_sum()),
            ]);
        }
        Err(err) if is_infeasible(&err) && cli.allow_infeasible => {
            let mut row = vec![Cell::Empty; table.columns().len()];
            row[1] = Cell::Bool(false);
            table.push(row);
        }
        Err(err) => return Err(classify(err)),
    }
    emit(cli, &table.render(cli.format)).map_err(Failure::Config)
}

fn sweep_command(cli: &Cli) -> Result<(), Failure> {
    let config = load_config(cli).map_err(Failure::Config)?;
    let spec = config.sweep().map_err(Failure::Config)?;
    let table = sweeps::run_sweep(&config, spec, cli.seed).map_err(classify)?;
    emit(cli, &table.render(cli.format)).map_err(Failure::Config)
}

fn oracle_verify_command(cli: &Cli, points: Option<usize>) -> Result<(), Failure> {
    let count = points.unwrap_or(50);
    let table = sweeps::oracle_verify_table(count, cli.seed).map_err(Failure::Config)?;
    emit(cli, &table.render(cli.format)).map_err(Failure::Config)
}

fn dump_command(
    cli: &Cli,
    k1: Option<f64>,
    k2: Option<f64>,
    extent: Option<f64>,
    count: usize,
    component: Option<String>,
) -> Result<(), Failure> {
    let config = load_config(cli).map_err(Failure::Config)?;
    let p = config.resolve_device().map_err(classify)?;
    let mut spec = SweepSpec::for_target(Target::WavefunctionDump);
    let k0 = p.emitter.omega_eg / p.v_g;
    spec.fixed.insert("k1".into(), k1.unwrap_or(k0));
    spec.fixed.insert("k2".into(), k2.unwrap_or(k0));
    if let Some(half) = extent {
        for name in ["x1", "x2"] {
            spec.axis.push(chiralport_cli::AxisSpec::new(
                name,
                -half,
                half,
                count,
                chiralport_cli::Scale::Linear,
            ));
        }
    } else if count != 101 {
        let half = 10.0 * p.v_g / p.gamma_waveguides();
        for name in ["x1", "x2"] {
            spec.axis.push(chiralport_cli::AxisSpec::new(
                name,
                -half,
                half,
                count,
                chiralport_cli::Scale::Linear,
            ));
        }
    }
    spec.component = component;
    let table = sweeps::wavefunction_dump_table(&p, &spec).map_err(Failure::Config)?;
    emit(cli, &table.render(cli.format)).map_err(Failure::Config)
}

fn check_command(cli: &Cli) -> Result<(), Failure> {
    let reports = verify::run_all(cli.seed);
    let mut all_passed = true;
    match cli.format {
        Format::Csv => {
            let mut text = String::new();
            for report in &reports {
                text.push_str(&report.line());
                text.push('\n');
                all_passed &= report.passed;
            }
            let verdict = if all_passed { "PASS" } else { "FAIL" };
            text.push_str(&format!("{verdict} {} checks\n", reports.len()));
            emit(cli, &text).map_err(Failure::Config)?;
        }
        Format::Json => {
            let entries: Vec<serde_json::Value> = reports
                .iter()
                .map(|r| {
                    all_passed &= r.passed;
                    serde_json::json!({
                        "name": r.name,
                        "points": r.points,
                        "max_error": r.max_error,
                        "tolerance": r.tolerance,
                        "passed": r.passed,
                        "details": r.details,
                    })
                })
                .collect();
            let doc = serde_json::json!({ "seed": cli.seed, "checks": entries });
            let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
            text.push('\n');
            emit(cli, &text).map_err(Failure::Config)?;
        }
    }
    if all_passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Config(anyhow::anyhow!("cannot size thread pool: {e}")))?;
    }
    match &cli.command {
        Command::Amplitudes { omega, delta } => amplitudes_command(cli, *omega, *delta),
        Command::Sweep => sweep_command(cli),
        Command::OracleVerify { points } => oracle_verify_command(cli, *points),
        Command::DumpWavefunction {
            k1,
            k2,
            extent,
            count,
            component,
        } => dump_command(cli, *k1, *k2, *extent, *count, component.clone()),
        Command::Check => check_command(cli),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Config(e) => eprintln!("error: {e:#}"),
                Failure::Infeasible(e) => {
                    eprintln!("infeasible design: {e:#} (pass --allow-infeasible to emit flagged rows)")
                }
                Failure::Verification => eprintln!("verification failed"),
            }
            ExitCode::from(failure.exit_code())
        }
    }
}
