use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use jcs::commands::{self, Grid};
use jcs::config::{Overrides, Quantity, RunConfig};
use jcs::{CliError, EXIT_PASS};
use jcs_core::Complex64;

/// Generalized coherent states of the harmonic and Morse oscillators.
///
/// Exit status: 0 all checks passed, 1 a check failed, 2 configuration or
/// output error, 3 numerical failure.
#[derive(Parser)]
#[command(name = "jcs", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suite of the selected model.
    Verify {
        #[command(flatten)]
        common: Overrides,
    },
    /// Write a wavefunction or coefficient table as CSV.
    Tabulate {
        #[command(flatten)]
        common: Overrides,
        /// Quantity to tabulate.
        #[arg(long, value_enum)]
        what: Option<Quantity>,
        #[command(flatten)]
        index: Index,
        /// Left end of the grid.
        #[arg(long, allow_hyphen_values = true)]
        x_min: Option<f64>,
        /// Right end of the grid.
        #[arg(long, allow_hyphen_values = true)]
        x_max: Option<f64>,
        /// Number of grid points.
        #[arg(long)]
        points: Option<usize>,
    },
    /// Compare the Landau reproducing kernel series with its closed form.
    Kernel {
        #[command(flatten)]
        common: Overrides,
        #[command(flatten)]
        index: Index,
        /// Real part of the second argument w (defaults to z).
        #[arg(long, allow_hyphen_values = true)]
        w_re: Option<f64>,
        /// Imaginary part of the second argument w (defaults to z).
        #[arg(long, allow_hyphen_values = true)]
        w_im: Option<f64>,
    },
    /// Distance between Morse and harmonic states as β shrinks at fixed ω.
    LimitStudy {
        #[command(flatten)]
        common: Overrides,
        #[command(flatten)]
        index: Index,
        /// Comma-separated β values.
        #[arg(long, value_delimiter = ',')]
        beta_path: Option<Vec<f64>>,
    },
}

#[derive(Args)]
struct Index {
    /// State index m.
    #[arg(long)]
    m: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("jcs: {e}");
            e.exit_code()
        }
    }
}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Verify { common } => {
            let cfg = load(&common)?;
            let report = commands::verify(&cfg)?;
            Ok(commands::exit_status(&report))
        }
        Command::Tabulate { common, what, index, x_min, x_max, points } => {
            let cfg = load(&common)?;
            let t = &cfg.tabulate;
            let what = what.or(t.what).unwrap_or(Quantity::Phi);
            let m = index.m.or(t.m).unwrap_or(0);
            let grid = Grid { x_min: x_min.or(t.x_min), x_max: x_max.or(t.x_max), points: points.or(t.points) };
            commands::tabulate_to_output(&cfg, what, m, grid)?;
            Ok(EXIT_PASS)
        }
        Command::Kernel { common, index, w_re, w_im } => {
            let cfg = load(&common)?;
            let k = &cfg.kernel;
            let z = cfg.harmonic.z;
            let w = Complex64::new(w_re.or(k.w_re).unwrap_or(z.re), w_im.or(k.w_im).unwrap_or(z.im));
            let m = index.m.or(k.m).unwrap_or(0);
            let report = commands::kernel(&cfg, w, m)?;
            Ok(commands::exit_status(&report))
        }
        Command::LimitStudy { common, index, beta_path } => {
            let mut cfg = load(&common)?;
            let s = &mut cfg.morse;
            s.limit_z = Complex64::new(common.z_re.unwrap_or(s.limit_z.re), common.z_im.unwrap_or(s.limit_z.im));
            s.limit_omega = common.omega.unwrap_or(s.limit_omega);
            if let Some(p) = beta_path {
                s.beta_path = p;
            }
            let m = index.m.unwrap_or(cfg.limit_m);
            let report = commands::limit_study(&cfg, m)?;
            Ok(commands::exit_status(&report))
        }
    }
}

fn load(ov: &Overrides) -> Result<RunConfig, CliError> {
    let cfg = RunConfig::load(ov)?;
    commands::check_output(cfg.output_path.as_deref())?;
    Ok(cfg)
}
