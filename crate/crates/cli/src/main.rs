//! Command-line front end for the Steklov laboratory.
//!
//! Runs one named experiment, prints a pass/fail line per verdict and exits
//! zero only when every verdict passed. Optional outputs: a CSV of all
//! measurement rows, an SVG convergence plot, and a text dump of the finest
//! mesh.

use clap::Parser;
use std::path::PathBuf;
use std::process::ExitCode;
use steklov_core::geometry::mesh_to_text;
use steklov_core::lab::{emit_outputs, run_experiment, Experiment, ExperimentConfig};

#[derive(Parser)]
#[command(name = "steklovlab", version, about = "Weighted Steklov eigenvalue laboratory")]
struct Cli {
    /// Experiment to run: disk-validate, annulus-validate, catenoid-weighted,
    /// homogenise-converge, pairing-decay or bound-check.
    experiment: Experiment,

    /// JSON configuration file; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Inner radius.
    #[arg(long)]
    r: Option<f64>,

    /// Outer radius.
    #[arg(long = "R")]
    big_r: Option<f64>,

    /// Comma-delimited ascending tooth counts.
    #[arg(long, value_delimiter = ',')]
    teeth: Option<Vec<usize>>,

    /// Finest angular resolution.
    #[arg(long)]
    n_theta: Option<usize>,

    /// Finest radial resolution.
    #[arg(long)]
    n_radial: Option<usize>,

    /// Number of refinement levels.
    #[arg(long)]
    levels: Option<usize>,

    /// Highest eigenvalue index.
    #[arg(long)]
    k_max: Option<usize>,

    /// Write measurement rows to this CSV file.
    #[arg(long)]
    csv: Option<PathBuf>,

    /// Write a convergence plot to this SVG file.
    #[arg(long)]
    svg: Option<PathBuf>,

    /// Write the finest mesh in text form to this file.
    #[arg(long)]
    dump_mesh: Option<PathBuf>,
}

fn build_config(cli: &Cli) -> steklov_core::Result<ExperimentConfig> {
    let mut config = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::new(cli.experiment),
    };
    config.experiment = cli.experiment;
    if let Some(r) = cli.r {
        config.r = Some(r);
    }
    if let Some(big_r) = cli.big_r {
        config.big_r = Some(big_r);
    }
    if let Some(teeth) = &cli.teeth {
        config.teeth = teeth.clone();
    }
    if let Some(n_theta) = cli.n_theta {
        config.n_theta = n_theta;
    }
    if let Some(n_radial) = cli.n_radial {
        config.n_radial = n_radial;
    }
    if let Some(levels) = cli.levels {
        config.levels = levels;
    }
    if let Some(k_max) = cli.k_max {
        config.k_max = k_max;
    }
    config.validate()?;
    Ok(config)
}

fn run(cli: &Cli) -> steklov_core::Result<bool> {
    let config = build_config(cli)?;
    let report = run_experiment(&config)?;
    emit_outputs(&report, cli.csv.as_deref(), cli.svg.as_deref())?;
    if let Some(path) = &cli.dump_mesh {
        match &report.final_mesh {
            Some(mesh) => std::fs::write(path, mesh_to_text(mesh)).map_err(|e| {
                steklov_core::Error::IOFailure(format!("writing {}: {e}", path.display()))
            })?,
            None => eprintln!(
                "note: {} produces no mesh, skipping --dump-mesh",
                config.experiment
            ),
        }
    }
    for v in &report.verdicts {
        let status = if v.passed { "PASS" } else { "FAIL" };
        println!(
            "{} {:<22} {} (tol {:.3e}) {}",
            status, v.name, config.experiment, v.tolerance, v.detail
        );
    }
    Ok(report.all_passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
