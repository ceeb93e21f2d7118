//! The four subcommands.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use jcs_core::harmonic::{self, GcsLabel};
use jcs_core::morse;
use jcs_core::suite::{self, Check, Group};
use jcs_core::Complex64;
use rayon::prelude::*;

use crate::config::{Model, Quantity, RunConfig};
use crate::report::{Outcome, Report};
use crate::{CliError, EXIT_CHECK_FAILED, EXIT_NUMERICAL, EXIT_PASS};

fn run_groups<S: Sync>(groups: &[Group<S>], settings: &S) -> Vec<Check> {
    // indexed collect keeps registry order
    let per_group: Vec<Vec<Check>> = groups.par_iter().map(|g| (g.run)(settings)).collect();
    per_group.into_iter().flatten().collect()
}

/// Exit status for a finished report.
pub fn exit_status(report: &Report) -> u8 {
    match report.outcome() {
        Outcome::Passed => EXIT_PASS,
        Outcome::CheckFailed => EXIT_CHECK_FAILED,
        Outcome::NumericalFailure => EXIT_NUMERICAL,
    }
}

fn emit(report: &Report, cfg: &RunConfig, table_to: &mut dyn Write) -> Result<(), CliError> {
    if let Some(out) = &cfg.output_path {
        report.write(out)?;
    }
    table_to.write_all(report.to_table().as_bytes())?;
    Ok(())
}

/// Runs the full check suite of the selected model.
pub fn verify(cfg: &RunConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    let start = Instant::now();
    let checks = match cfg.model {
        Model::Harmonic => run_groups(&suite::harmonic_groups(), &cfg.harmonic),
        Model::Morse => run_groups(&suite::morse_groups(), &cfg.morse),
    };
    let report = Report::new(&checks, start.elapsed().as_secs_f64());
    emit(&report, cfg, &mut io::stdout())?;
    Ok(report)
}

/// Sampling grid of `tabulate`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Grid {
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    pub points: Option<usize>,
}

const DEFAULT_POINTS: usize = 201;
const DEFAULT_COEFFICIENTS: usize = 40;

fn num(x: f64) -> String {
    // shortest representation that round-trips; no negative zero
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:e}")
}

fn csv_row(coord: f64, v: Complex64) -> String {
    format!("{},{},{},{}\n", num(coord), num(v.re), num(v.im), num(v.norm()))
}

/// Writes one row per grid point (or per coefficient index): coordinate,
/// real part, imaginary part, modulus.
pub fn tabulate(cfg: &RunConfig, what: Quantity, m: usize, grid: Grid, sink: &mut dyn Write) -> Result<(), CliError> {
    cfg.validate()?;
    let numerical = |e: jcs_core::Error| CliError::Numerical(e.to_string());
    let mut header = vec![format!("# jcs tabulate {}", quantity_name(what))];
    let mut rows: Vec<(f64, Complex64)> = Vec::new();
    let n_coeff = cfg.n_max.unwrap_or(DEFAULT_COEFFICIENTS);

    let sample = |lo: f64, hi: f64| -> Result<Vec<f64>, CliError> {
        let lo = grid.x_min.unwrap_or(lo);
        let hi = grid.x_max.unwrap_or(hi);
        let n = grid.points.unwrap_or(DEFAULT_POINTS);
        if !(lo.is_finite() && hi.is_finite() && lo < hi) || n < 2 {
            return Err(CliError::Config(format!("invalid grid [{lo}, {hi}] with {n} points")));
        }
        Ok((0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect())
    };

    match cfg.model {
        Model::Harmonic => {
            let s = &cfg.harmonic;
            let p = s.params().map_err(numerical)?;
            let label = GcsLabel::new(s.z, m, p);
            header.push(format!(
                "# model=harmonic z_re={} z_im={} omega={} m={m}",
                num(s.z.re),
                num(s.z.im),
                num(s.omega)
            ));
            let half = (6.0 + (2.0 * m as f64 + 1.0).sqrt()) / s.omega.sqrt();
            match what {
                Quantity::Phi | Quantity::Glauber => {
                    let l = if what == Quantity::Glauber { label.with_m(0) } else { label };
                    header.push(format!("# Φ_{}^{{z,ω}}(ξ), displaced number state", l.m));
                    for x in sample(l.center() - half, l.center() + half)? {
                        rows.push((x, harmonic::gcs_phi(&l, x)));
                    }
                }
                Quantity::Psi => {
                    header.push(format!("# ψ_{m}(ξ), eigenfunction with energy mω"));
                    for x in sample(-half, half)? {
                        rows.push((x, Complex64::new(harmonic::eigenfunction_psi(m, p, x), 0.0)));
                    }
                }
                Quantity::Coefficients => {
                    header.push(format!("# C_s with Φ_{m}^{{z,ω}} = Σ_s C_s ψ_s"));
                    for s_idx in 0..n_coeff {
                        rows.push((s_idx as f64, harmonic::expansion_coefficient(&label, s_idx)));
                    }
                }
            }
        }
        Model::Morse => {
            let s = &cfg.morse;
            let label = s.label().map_err(numerical)?;
            let gamma = s.gamma().map_err(numerical)?;
            let params = label.params;
            header.push(format!(
                "# model=morse z_re={} z_im={} v0={} beta={} D={} gamma={} m={m}",
                num(s.z.re),
                num(s.z.im),
                num(s.v0),
                num(s.beta),
                num(params.d),
                num(gamma)
            ));
            match what {
                Quantity::Phi => {
                    header.push(format!("# φ_{m}(x), generalized coherent state"));
                    let (lo, hi) = label.x_window(m);
                    for x in sample(lo, hi)? {
                        rows.push((x, morse::gcs_phi_morse(&label, m, x).map_err(numerical)?));
                    }
                }
                Quantity::Psi => {
                    if m >= params.n_bound {
                        return Err(CliError::Config(format!(
                            "bound state {m} requested but the well holds {} levels",
                            params.n_bound
                        )));
                    }
                    header.push(format!("# ψ_{m}(x), bound state with energy ε_{m}"));
                    let (lo, hi) = params.x_window(2.0 * params.d - 2.0 * m as f64, m);
                    for x in sample(lo, hi)? {
                        rows.push((x, Complex64::new(morse::bound_state(&params, m, x).map_err(numerical)?, 0.0)));
                    }
                }
                Quantity::Glauber => {
                    header.push("# Glauber state, eigenfunction of the lowering operator".to_string());
                    let (lo, hi) = label.x_window(0);
                    for x in sample(lo, hi)? {
                        rows.push((x, morse::glauber_cs(&label, gamma, x).map_err(numerical)?));
                    }
                }
                Quantity::Coefficients => {
                    header.push("# Glauber state coefficients in the g_n basis".to_string());
                    for n in 0..n_coeff {
                        rows.push((n as f64, morse::glauber_coefficients(&label, gamma, n).map_err(numerical)?));
                    }
                }
            }
        }
    }
    let coord = if what == Quantity::Coefficients { "n" } else { "x" };
    let mut text = header.join("\n");
    text.push('\n');
    text.push_str(&format!("{coord},re,im,modulus\n"));
    for (x, v) in rows {
        text.push_str(&csv_row(x, v));
    }
    sink.write_all(text.as_bytes())?;
    Ok(())
}

fn quantity_name(q: Quantity) -> &'static str {
    match q {
        Quantity::Phi => "phi",
        Quantity::Psi => "psi",
        Quantity::Glauber => "glauber",
        Quantity::Coefficients => "coefficients",
    }
}

/// Writes the tabulation to `<out>.csv`, or to stdout without `--out`.
pub fn tabulate_to_output(cfg: &RunConfig, what: Quantity, m: usize, grid: Grid) -> Result<(), CliError> {
    match &cfg.output_path {
        Some(out) => {
            let mut buf = Vec::new();
            tabulate(cfg, what, m, grid, &mut buf)?;
            std::fs::write(out.with_extension("csv"), buf)?;
            Ok(())
        }
        None => tabulate(cfg, what, m, grid, &mut io::stdout().lock()),
    }
}

/// Landau kernel: partial sum of N terms against the closed form.
pub fn kernel(cfg: &RunConfig, w: Complex64, m: usize) -> Result<Report, CliError> {
    if cfg.model != Model::Harmonic {
        return Err(CliError::Config("the kernel is defined for the harmonic model".into()));
    }
    cfg.validate()?;
    let s = &cfg.harmonic;
    if s.omega != 1.0 {
        return Err(CliError::Config("the Landau kernel is defined at ω = 1".into()));
    }
    let n = cfg.n_max.unwrap_or(s.trunc.kernel_terms);
    if n == 0 {
        return Err(CliError::Config("the kernel series needs at least one term".into()));
    }
    if !(w.re.is_finite() && w.im.is_finite()) {
        return Err(CliError::Config("w must be finite".into()));
    }
    let start = Instant::now();
    let (series, closed) = harmonic::landau_kernel(s.z, w, m, n);
    let gap = (series - closed).norm() / closed.norm();
    let check = Check::compare_err(
        &format!("kernel.m={m}.N={n}"),
        "Σ_s C_s(z) conj(C_s(w))/π = π^{-1} e^{z w̄} L_m(|z-w|²), relative gap",
        closed,
        series,
        gap,
        s.tol.landau,
    );
    let report = Report::new(&[check], start.elapsed().as_secs_f64());
    emit(&report, cfg, &mut io::stdout())?;
    Ok(report)
}

/// Harmonic-limit study for φ_m along the configured β path. Rows go to
/// `<out>.csv` (or stdout) as they are computed; the report follows.
pub fn limit_study(cfg: &RunConfig, m: usize) -> Result<Report, CliError> {
    cfg.validate_limit()?;
    let s = &cfg.morse;
    let start = Instant::now();
    let mut sink: Box<dyn Write> = match &cfg.output_path {
        Some(out) => Box::new(BufWriter::new(File::create(out.with_extension("csv"))?)),
        None => Box::new(io::stdout()),
    };
    writeln!(sink, "# jcs limit-study: phase-aligned distance between φ_{m} and Φ_{m}^{{-z̄,ω}}")?;
    writeln!(
        sink,
        "# z_re={} z_im={} omega={} V0=omega^2/(2 beta^2)",
        num(s.limit_z.re),
        num(s.limit_z.im),
        num(s.limit_omega)
    )?;
    writeln!(sink, "beta,distance,phase")?;
    let qspec = morse::morse_quadrature(s.tol.quadrature);
    let mut points = Vec::new();
    let mut failure = None;
    for &beta in &s.beta_path {
        match morse::harmonic_limit_study(s.limit_z, s.limit_omega, m, &[beta], &qspec) {
            Ok(p) => {
                writeln!(sink, "{},{},{}", num(beta), num(p[0].distance), num(p[0].phase))?;
                sink.flush()?;
                points.push(p[0]);
            }
            Err(e) => {
                writeln!(sink, "# stopped at beta={}: {e}", num(beta))?;
                failure = Some(e);
                break;
            }
        }
    }
    sink.flush()?;
    drop(sink);
    let mut checks = suite::limit_checks(m, &points, &s.tol);
    if let Some(e) = failure {
        checks.push(Check::errored(&format!("morse.limit.m={m}"), "harmonic limit study", s.tol.limit_distance, &e));
    }
    let report = Report::new(&checks, start.elapsed().as_secs_f64());
    if let Some(out) = &cfg.output_path {
        report.write(out)?;
        io::stdout().write_all(report.to_table().as_bytes())?;
    } else {
        io::stderr().write_all(report.to_table().as_bytes())?;
    }
    Ok(report)
}

/// Checks that `path` is not an existing directory before anything is written.
pub fn check_output(path: Option<&Path>) -> Result<(), CliError> {
    if let Some(p) = path {
        if p.is_dir() {
            return Err(CliError::Config(format!("{} is a directory", p.display())));
        }
    }
    Ok(())
}
