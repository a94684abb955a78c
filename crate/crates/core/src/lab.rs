//! Named experiment suites with machine-checkable verdicts.
//!
//! Each experiment runs a fixed pipeline, records one row per computed
//! eigenvalue (or per pairing test function) and judges itself against
//! analytic targets: the disk and annulus suites validate the solver
//! against closed-form spectra, the catenoid suite checks the weighted
//! annulus that saturates the first normalised eigenvalue, the
//! homogenisation suite builds sawtooth domains for a ladder of tooth
//! counts and tracks their convergence to the weighted target, the pairing
//! suite measures the weak-* convergence rate of the boundary measures,
//! and the bound check sweeps every suite against the universal bound
//! σ̄_k ≤ 8πk. Verdicts carry their tolerances so a report is
//! self-describing.

use crate::density::{catenoid_density, BoundaryDensity, ComponentDensity};
use crate::error::{Error, Result};
use crate::fem::{steklov_spectrum, Spectrum};
use crate::geometry::{mesh_domain, AnnularDomain, BoundaryComponent, TriMesh};
use crate::homogenise::{homogenise_domain, pairing_defect, HomogenisationSpec, TestFunction};
use crate::oracle;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

/// The experiment suites the laboratory knows how to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Experiment {
    #[serde(rename = "disk-validate")]
    DiskValidate,
    #[serde(rename = "annulus-validate")]
    AnnulusValidate,
    #[serde(rename = "catenoid-weighted")]
    CatenoidWeighted,
    #[serde(rename = "homogenise-converge")]
    HomogeniseConverge,
    #[serde(rename = "pairing-decay")]
    PairingDecay,
    #[serde(rename = "bound-check")]
    BoundCheck,
}

impl Experiment {
    pub const ALL: [Experiment; 6] = [
        Experiment::DiskValidate,
        Experiment::AnnulusValidate,
        Experiment::CatenoidWeighted,
        Experiment::HomogeniseConverge,
        Experiment::PairingDecay,
        Experiment::BoundCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::DiskValidate => "disk-validate",
            Experiment::AnnulusValidate => "annulus-validate",
            Experiment::CatenoidWeighted => "catenoid-weighted",
            Experiment::HomogeniseConverge => "homogenise-converge",
            Experiment::PairingDecay => "pairing-decay",
            Experiment::BoundCheck => "bound-check",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Experiment::ALL.iter().map(|e| e.name()).collect();
                Error::ConfigInvalid(format!(
                    "unknown experiment '{s}', expected one of: {}",
                    names.join(", ")
                ))
            })
    }
}

/// Full configuration of a run. Every field has a default, so a JSON
/// config may set only what it needs; unknown keys are rejected.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    /// Inner radius of annular domains.
    pub r: Option<f64>,
    /// Outer radius; defaults to the critical ratio times r (or 1 for the disk).
    #[serde(rename = "R")]
    pub big_r: Option<f64>,
    /// Ascending tooth counts for the homogenisation suites.
    pub teeth: Vec<usize>,
    /// Finest angular resolution.
    pub n_theta: usize,
    /// Finest radial resolution.
    pub n_radial: usize,
    /// Number of mesh refinement levels ending at (n_theta, n_radial).
    pub levels: usize,
    /// Highest eigenvalue index computed.
    pub k_max: usize,
    pub samples_per_tooth: usize,
    /// Sample count of the base boundary circles.
    pub curve_samples: usize,
    pub inner_density: Option<ComponentDensity>,
    pub outer_density: Option<ComponentDensity>,
    /// Relative accuracy demanded of validated eigenvalues at the finest level.
    pub rel_tol: f64,
    /// Absolute ceiling for the zero eigenvalue.
    pub sigma0_tol: f64,
    /// Relative accuracy demanded of the final homogenisation step.
    pub final_rel_tol: f64,
    /// Slack allowed above the homogenisation target.
    pub overshoot_tol: f64,
    /// Minimum acceptable log-log decay slope of pairing defects.
    pub slope_min: f64,
    /// Absolute slack on the universal bound.
    pub bound_slack: f64,
    /// Tolerance of the annulus-versus-cylinder oracle comparison.
    pub crosscheck_tol: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            experiment: Experiment::DiskValidate,
            r: None,
            big_r: None,
            teeth: vec![8, 16, 32, 64, 128],
            n_theta: 512,
            n_radial: 64,
            levels: 3,
            k_max: 6,
            samples_per_tooth: 8,
            curve_samples: 64,
            inner_density: None,
            outer_density: None,
            rel_tol: 1e-3,
            sigma0_tol: 1e-8,
            final_rel_tol: 5e-2,
            overshoot_tol: 1e-3,
            slope_min: 0.9,
            bound_slack: 1e-6,
            crosscheck_tol: 1e-10,
        }
    }
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        Self {
            experiment,
            ..Self::default()
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text)
            .map_err(|e| Error::ConfigInvalid(format!("bad config JSON: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::IOFailure(format!("reading {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.teeth.is_empty() {
            return Err(Error::ConfigInvalid("teeth list is empty".into()));
        }
        if !self.teeth.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::ConfigInvalid(format!(
                "teeth list must be strictly ascending, got {:?}",
                self.teeth
            )));
        }
        if self.n_theta < 8 {
            return Err(Error::ConfigInvalid(format!("n_theta {} too small", self.n_theta)));
        }
        if self.n_radial < 2 {
            return Err(Error::ConfigInvalid(format!("n_radial {} too small", self.n_radial)));
        }
        if self.levels == 0 {
            return Err(Error::ConfigInvalid("levels must be at least 1".into()));
        }
        if self.k_max == 0 {
            return Err(Error::ConfigInvalid("k_max must be at least 1".into()));
        }
        if self.curve_samples < 8 {
            return Err(Error::ConfigInvalid(format!(
                "curve_samples {} too small",
                self.curve_samples
            )));
        }
        if let Some(r) = self.r {
            if !r.is_finite() || r <= 0.0 {
                return Err(Error::ConfigInvalid(format!("r must be positive, got {r}")));
            }
        }
        if let Some(big_r) = self.big_r {
            if !big_r.is_finite() || big_r <= 0.0 {
                return Err(Error::ConfigInvalid(format!("R must be positive, got {big_r}")));
            }
        }
        if let (Some(r), Some(big_r)) = (self.r, self.big_r) {
            if r >= big_r {
                return Err(Error::ConfigInvalid(format!("need r < R, got r={r}, R={big_r}")));
            }
        }
        for (name, tol) in [
            ("rel_tol", self.rel_tol),
            ("sigma0_tol", self.sigma0_tol),
            ("final_rel_tol", self.final_rel_tol),
            ("overshoot_tol", self.overshoot_tol),
            ("slope_min", self.slope_min),
            ("bound_slack", self.bound_slack),
            ("crosscheck_tol", self.crosscheck_tol),
        ] {
            if !tol.is_finite() || tol <= 0.0 {
                return Err(Error::ConfigInvalid(format!("{name} must be positive, got {tol}")));
            }
        }
        Ok(())
    }
}

/// One measurement row, mirrored exactly by the CSV output.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub experiment: String,
    pub eps: f64,
    pub teeth: usize,
    pub n_theta: usize,
    pub n_radial: usize,
    pub k: usize,
    pub sigma: f64,
    pub sigma_bar: f64,
    pub target: f64,
    pub rel_err: f64,
    pub residual: f64,
    pub wall_ms: f64,
}

pub const CSV_HEADER: &str =
    "experiment,eps,teeth,n_theta,n_radial,k,sigma,sigma_bar,target,rel_err,residual,wall_ms";

impl Row {
    fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.experiment,
            self.eps,
            self.teeth,
            self.n_theta,
            self.n_radial,
            self.k,
            self.sigma,
            self.sigma_bar,
            self.target,
            self.rel_err,
            self.residual,
            self.wall_ms
        )
    }
}

/// Serializes rows to CSV. Floats print in shortest round-trip form, so
/// parsing the output reproduces the rows bit for bit.
pub fn rows_to_csv(rows: &[Row]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.csv_line());
        out.push('\n');
    }
    out
}

pub fn parse_csv(text: &str) -> Result<Vec<Row>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header == CSV_HEADER => {}
        other => {
            return Err(Error::IOFailure(format!(
                "unexpected CSV header: {:?}",
                other.unwrap_or("")
            )))
        }
    }
    let mut rows = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 12 {
            return Err(Error::IOFailure(format!(
                "line {}: expected 12 fields, got {}",
                lineno + 2,
                fields.len()
            )));
        }
        let parse_f = |s: &str| -> Result<f64> {
            s.parse()
                .map_err(|e| Error::IOFailure(format!("line {}: {e}", lineno + 2)))
        };
        let parse_u = |s: &str| -> Result<usize> {
            s.parse()
                .map_err(|e| Error::IOFailure(format!("line {}: {e}", lineno + 2)))
        };
        rows.push(Row {
            experiment: fields[0].to_string(),
            eps: parse_f(fields[1])?,
            teeth: parse_u(fields[2])?,
            n_theta: parse_u(fields[3])?,
            n_radial: parse_u(fields[4])?,
            k: parse_u(fields[5])?,
            sigma: parse_f(fields[6])?,
            sigma_bar: parse_f(fields[7])?,
            target: parse_f(fields[8])?,
            rel_err: parse_f(fields[9])?,
            residual: parse_f(fields[10])?,
            wall_ms: parse_f(fields[11])?,
        });
    }
    Ok(rows)
}

/// A named boolean check with the tolerance it was judged at.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    pub tolerance: f64,
    pub detail: String,
}

impl Verdict {
    fn new(name: &str, passed: bool, tolerance: f64, detail: String) -> Self {
        Self {
            name: name.into(),
            passed,
            tolerance,
            detail,
        }
    }
}

/// Everything a run produced: rows, verdicts, and the finest mesh when the
/// experiment has one.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub experiment: Experiment,
    pub rows: Vec<Row>,
    pub verdicts: Vec<Verdict>,
    pub final_mesh: Option<TriMesh>,
}

impl RunReport {
    pub fn all_passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<RunReport> {
    config.validate()?;
    match config.experiment {
        Experiment::DiskValidate => run_disk(config),
        Experiment::AnnulusValidate => run_annulus(config),
        Experiment::CatenoidWeighted => run_catenoid(config),
        Experiment::HomogeniseConverge => run_homogenise(config),
        Experiment::PairingDecay => run_pairing(config),
        Experiment::BoundCheck => run_bound_check(config),
    }
}

fn mesh_ladder(config: &ExperimentConfig) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::with_capacity(config.levels);
    for i in 0..config.levels {
        let div = 1usize << (config.levels - 1 - i);
        if !config.n_theta.is_multiple_of(div) || !config.n_radial.is_multiple_of(div) {
            return Err(Error::ConfigInvalid(format!(
                "levels={} needs n_theta and n_radial divisible by {div}",
                config.levels
            )));
        }
        let nt = config.n_theta / div;
        let nr = config.n_radial / div;
        if !nt.is_multiple_of(config.curve_samples) {
            return Err(Error::ConfigInvalid(format!(
                "level resolution {nt} is not a multiple of curve_samples {}",
                config.curve_samples
            )));
        }
        if nr < 2 {
            return Err(Error::ConfigInvalid(format!(
                "levels={} drives n_radial below 2",
                config.levels
            )));
        }
        out.push((nt, nr));
    }
    Ok(out)
}

fn constant_density(density: &Option<ComponentDensity>, fallback: f64, what: &str) -> Result<f64> {
    match density {
        None => Ok(fallback),
        Some(ComponentDensity::Constant(c)) => Ok(*c),
        Some(ComponentDensity::Samples(_)) => Err(Error::ConfigInvalid(format!(
            "{what} density must be a constant for this experiment"
        ))),
    }
}

/// Whether rows compare raw eigenvalues or normalised ones to the target.
#[derive(Clone, Copy, PartialEq)]
enum CompareOn {
    Raw,
    Normalised,
}

struct SpectrumRows {
    rows: Vec<Row>,
    spectrum: Spectrum,
}

#[allow(clippy::too_many_arguments)]
fn spectrum_rows(
    config: &ExperimentConfig,
    domain: &AnnularDomain,
    density: &BoundaryDensity,
    nt: usize,
    nr: usize,
    targets: &[f64],
    compare: CompareOn,
    eps: f64,
    teeth: usize,
) -> Result<SpectrumRows> {
    let start = Instant::now();
    let spectrum = steklov_spectrum(domain, density, nt, nr, config.k_max)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let mut rows = Vec::with_capacity(spectrum.raw.len());
    for (k, &target) in targets.iter().enumerate().take(spectrum.raw.len()) {
        let value = match compare {
            CompareOn::Raw => spectrum.raw[k],
            CompareOn::Normalised => spectrum.normalised[k],
        };
        let rel_err = if target != 0.0 {
            ((value - target) / target).abs()
        } else {
            value.abs()
        };
        rows.push(Row {
            experiment: config.experiment.name().into(),
            eps,
            teeth,
            n_theta: nt,
            n_radial: nr,
            k,
            sigma: spectrum.raw[k],
            sigma_bar: spectrum.normalised[k],
            target,
            rel_err,
            residual: spectrum.max_residual,
            wall_ms,
        });
    }
    Ok(SpectrumRows { rows, spectrum })
}

fn level_max_rel_err(rows: &[Row]) -> f64 {
    rows.iter()
        .filter(|r| r.k >= 1)
        .map(|r| r.rel_err)
        .fold(0.0, f64::max)
}

fn sigma0_verdict(rows: &[Row], tol: f64) -> Verdict {
    let worst = rows
        .iter()
        .filter(|r| r.k == 0)
        .map(|r| r.sigma.abs())
        .fold(0.0, f64::max);
    Verdict::new(
        "sigma0-null",
        worst <= tol,
        tol,
        format!("largest |sigma_0| = {worst:.3e}"),
    )
}

fn monotone_verdict(level_errs: &[f64]) -> Verdict {
    let decreasing = level_errs.windows(2).all(|w| w[1] < w[0]);
    let passed = level_errs.len() < 2 || decreasing;
    let detail = level_errs
        .iter()
        .map(|e| format!("{e:.3e}"))
        .collect::<Vec<_>>()
        .join(" -> ");
    Verdict::new("monotone-convergence", passed, 0.0, detail)
}

fn final_mesh(domain: &AnnularDomain, nt: usize, nr: usize) -> Result<TriMesh> {
    mesh_domain(&domain.refined(nt)?, nt, nr)
}

fn run_disk(config: &ExperimentConfig) -> Result<RunReport> {
    if config.inner_density.is_some() {
        return Err(Error::ConfigInvalid(
            "disk-validate has no inner boundary".into(),
        ));
    }
    let radius = config.big_r.unwrap_or(1.0);
    let beta = constant_density(&config.outer_density, 1.0, "outer")?;
    let domain = AnnularDomain::disk(radius, config.curve_samples)?;
    let density = BoundaryDensity::new(ComponentDensity::Constant(beta), None)?;
    let targets: Vec<f64> = oracle::disk_spectrum(config.k_max)
        .iter()
        .map(|s| s / (beta * radius))
        .collect();

    let ladder = mesh_ladder(config)?;
    let mut rows = Vec::new();
    let mut level_errs = Vec::new();
    let mut finest: Option<SpectrumRows> = None;
    for &(nt, nr) in &ladder {
        let level = spectrum_rows(
            config,
            &domain,
            &density,
            nt,
            nr,
            &targets,
            CompareOn::Raw,
            0.0,
            0,
        )?;
        level_errs.push(level_max_rel_err(&level.rows));
        rows.extend(level.rows.clone());
        finest = Some(level);
    }
    let finest = finest.expect("ladder is nonempty");

    let finest_err = *level_errs.last().unwrap();
    let sigma1_bar = finest.spectrum.normalised[1];
    let weinstock_target = 2.0 * std::f64::consts::PI;
    let weinstock_err = (sigma1_bar - weinstock_target).abs() / weinstock_target;

    let verdicts = vec![
        sigma0_verdict(&rows, config.sigma0_tol),
        monotone_verdict(&level_errs),
        Verdict::new(
            "finest-accuracy",
            finest_err <= config.rel_tol,
            config.rel_tol,
            format!("max rel err {finest_err:.3e} over k = 1..={}", config.k_max),
        ),
        Verdict::new(
            "weinstock",
            weinstock_err <= config.rel_tol,
            config.rel_tol,
            format!("sigma_bar_1 = {sigma1_bar:.12} vs 2*pi"),
        ),
    ];

    let &(nt, nr) = ladder.last().unwrap();
    Ok(RunReport {
        experiment: config.experiment,
        rows,
        verdicts,
        final_mesh: Some(final_mesh(&domain, nt, nr)?),
    })
}

fn annulus_radii(config: &ExperimentConfig) -> Result<(f64, f64)> {
    let constants = oracle::solve_t1();
    let r = config.r.unwrap_or(1.0);
    let big_r = config.big_r.unwrap_or(r * constants.radius_ratio);
    if !big_r.is_finite() || big_r <= r {
        return Err(Error::ConfigInvalid(format!("need r < R, got r={r}, R={big_r}")));
    }
    Ok((r, big_r))
}

fn run_annulus(config: &ExperimentConfig) -> Result<RunReport> {
    let (r, big_r) = annulus_radii(config)?;
    let beta_in = constant_density(&config.inner_density, 1.0, "inner")?;
    let beta_out = constant_density(&config.outer_density, 1.0, "outer")?;
    let domain = AnnularDomain::annulus(r, big_r, config.curve_samples)?;
    let density = BoundaryDensity::new(
        ComponentDensity::Constant(beta_out),
        Some(ComponentDensity::Constant(beta_in)),
    )?;
    let targets = oracle::annulus_spectrum(r, big_r, beta_in, beta_out, config.k_max)?;

    let ladder = mesh_ladder(config)?;
    let mut rows = Vec::new();
    let mut level_errs = Vec::new();
    for &(nt, nr) in &ladder {
        let level = spectrum_rows(
            config,
            &domain,
            &density,
            nt,
            nr,
            &targets,
            CompareOn::Raw,
            0.0,
            0,
        )?;
        level_errs.push(level_max_rel_err(&level.rows));
        rows.extend(level.rows);
    }
    let finest_err = *level_errs.last().unwrap();

    let verdicts = vec![
        sigma0_verdict(&rows, config.sigma0_tol),
        monotone_verdict(&level_errs),
        Verdict::new(
            "finest-accuracy",
            finest_err <= config.rel_tol,
            config.rel_tol,
            format!("max rel err {finest_err:.3e} over k = 1..={}", config.k_max),
        ),
    ];

    let &(nt, nr) = ladder.last().unwrap();
    Ok(RunReport {
        experiment: config.experiment,
        rows,
        verdicts,
        final_mesh: Some(final_mesh(&domain, nt, nr)?),
    })
}

fn run_catenoid(config: &ExperimentConfig) -> Result<RunReport> {
    if config.inner_density.is_some() || config.outer_density.is_some() {
        return Err(Error::ConfigInvalid(
            "catenoid-weighted fixes its density to R/r inside and 1 outside".into(),
        ));
    }
    let constants = oracle::solve_t1();
    let (r, big_r) = annulus_radii(config)?;
    let domain = AnnularDomain::annulus(r, big_r, config.curve_samples)?;
    let density = catenoid_density(r, big_r)?;
    let targets = oracle::annulus_spectrum(r, big_r, big_r / r, 1.0, config.k_max)?;

    let ladder = mesh_ladder(config)?;
    let mut rows = Vec::new();
    let mut level_errs = Vec::new();
    let mut finest: Option<SpectrumRows> = None;
    for &(nt, nr) in &ladder {
        let level = spectrum_rows(
            config,
            &domain,
            &density,
            nt,
            nr,
            &targets,
            CompareOn::Raw,
            0.0,
            0,
        )?;
        let sigma1_err = level
            .rows
            .iter()
            .find(|row| row.k == 1)
            .map(|row| row.rel_err)
            .unwrap_or(f64::INFINITY);
        level_errs.push(sigma1_err);
        rows.extend(level.rows.clone());
        finest = Some(level);
    }
    let finest = finest.expect("ladder is nonempty");
    let finest_err = *level_errs.last().unwrap();

    let sigma1_bar = finest.spectrum.normalised[1];
    let saturation_err = (sigma1_bar - constants.target).abs() / constants.target;

    // The annulus with weights (R/r, 1) is conformally a flat cylinder of
    // half-length ln(R/r)/2; normalised eigenvalues must agree exactly.
    let t = 0.5 * (big_r / r).ln();
    let cylinder = oracle::cylinder_spectrum(t, config.k_max)?;
    let annulus_weighted_length = 4.0 * std::f64::consts::PI * big_r;
    let cylinder_weighted_length = 4.0 * std::f64::consts::PI;
    let mut crosscheck_err = 0.0_f64;
    for k in 0..=config.k_max {
        let bar_annulus = targets[k] * annulus_weighted_length;
        let bar_cylinder = cylinder[k] * cylinder_weighted_length;
        let err = (bar_annulus - bar_cylinder).abs() / bar_cylinder.abs().max(1.0);
        crosscheck_err = crosscheck_err.max(err);
    }

    let verdicts = vec![
        sigma0_verdict(&rows, config.sigma0_tol),
        monotone_verdict(&level_errs),
        Verdict::new(
            "finest-accuracy",
            finest_err <= config.rel_tol,
            config.rel_tol,
            format!("sigma_1 rel err {finest_err:.3e}"),
        ),
        Verdict::new(
            "saturation-value",
            saturation_err <= config.rel_tol,
            config.rel_tol,
            format!("sigma_bar_1 = {sigma1_bar:.12} vs {:.12}", constants.target),
        ),
        Verdict::new(
            "conformal-crosscheck",
            crosscheck_err <= config.crosscheck_tol,
            config.crosscheck_tol,
            format!("max oracle disagreement {crosscheck_err:.3e}"),
        ),
    ];

    let &(nt, nr) = ladder.last().unwrap();
    Ok(RunReport {
        experiment: config.experiment,
        rows,
        verdicts,
        final_mesh: Some(final_mesh(&domain, nt, nr)?),
    })
}

/// Smallest multiple of `unit` that is at least `floor`.
fn round_up_multiple(floor: usize, unit: usize) -> usize {
    unit * floor.div_ceil(unit)
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

fn run_homogenise(config: &ExperimentConfig) -> Result<RunReport> {
    let (r, big_r) = annulus_radii(config)?;
    let beta_in = constant_density(&config.inner_density, big_r / r, "inner")?;
    let beta_out = constant_density(&config.outer_density, 1.0, "outer")?;
    if beta_out != 1.0 {
        return Err(Error::ConfigInvalid(format!(
            "homogenise-converge builds teeth on the inner circle only, so the \
             outer density must stay 1, got {beta_out}"
        )));
    }
    let base = AnnularDomain::annulus(r, big_r, config.curve_samples)?;
    let base_density = BoundaryDensity::new(
        ComponentDensity::Constant(beta_out),
        Some(ComponentDensity::Constant(beta_in)),
    )?;
    let raw_targets = oracle::annulus_spectrum(r, big_r, beta_in, beta_out, config.k_max)?;
    let weighted_length = std::f64::consts::TAU * (r * beta_in + big_r * beta_out);
    let targets: Vec<f64> = raw_targets.iter().map(|s| s * weighted_length).collect();
    let target1 = targets[1];

    let mut rows = Vec::new();
    let mut sigma1_bars = Vec::new();
    let mut last: Option<(AnnularDomain, usize, usize)> = None;
    for &n in &config.teeth {
        let spec = HomogenisationSpec::new(
            n,
            config.samples_per_tooth,
            vec![BoundaryComponent::Inner],
        )?;
        let hom = homogenise_domain(&base, &base_density, &spec)?;
        let perturbed_density = BoundaryDensity::uniform_for(&hom.domain);
        let eps = hom.reports[0].epsilon;
        let n_in = n * config.samples_per_tooth;
        let nt = round_up_multiple(config.n_theta, lcm(n_in, config.curve_samples));
        let nr = config.n_radial;
        let level = spectrum_rows(
            config,
            &hom.domain,
            &perturbed_density,
            nt,
            nr,
            &targets,
            CompareOn::Normalised,
            eps,
            n,
        )?;
        sigma1_bars.push(level.spectrum.normalised[1]);
        rows.extend(level.rows);
        last = Some((hom.domain, nt, nr));
    }

    let gaps: Vec<f64> = sigma1_bars.iter().map(|s| (s - target1).abs()).collect();
    let decreasing = gaps.windows(2).all(|w| w[1] < w[0]);
    let final_rel = gaps.last().unwrap() / target1;
    let overshoot = sigma1_bars
        .iter()
        .map(|s| s - target1)
        .fold(f64::NEG_INFINITY, f64::max);

    let gap_list = gaps
        .iter()
        .map(|g| format!("{g:.3e}"))
        .collect::<Vec<_>>()
        .join(" -> ");
    let verdicts = vec![
        sigma0_verdict(&rows, config.sigma0_tol),
        Verdict::new(
            "strict-decrease",
            sigma1_bars.len() < 2 || decreasing,
            0.0,
            format!("|sigma_bar_1 - target| per teeth count: {gap_list}"),
        ),
        Verdict::new(
            "final-rel",
            final_rel <= config.final_rel_tol,
            config.final_rel_tol,
            format!("final relative gap {final_rel:.3e}"),
        ),
        Verdict::new(
            "no-overshoot",
            overshoot <= config.overshoot_tol,
            config.overshoot_tol,
            format!("worst overshoot {overshoot:.3e}"),
        ),
    ];

    let (domain, nt, nr) = last.expect("teeth list is nonempty");
    Ok(RunReport {
        experiment: config.experiment,
        rows,
        verdicts,
        final_mesh: Some(final_mesh(&domain, nt, nr)?),
    })
}

fn default_pairing_density(config: &ExperimentConfig, r: f64, big_r: f64) -> Result<BoundaryDensity> {
    let outer = config
        .outer_density
        .clone()
        .unwrap_or(ComponentDensity::Constant(1.0));
    let inner = match &config.inner_density {
        Some(d) => d.clone(),
        None => {
            // A symmetric construction pairs to zero against odd moments, so
            // the default density carries both first harmonics; their
            // amplitudes keep beta well above one.
            let beta = big_r / r;
            let n = config.curve_samples;
            let samples: Vec<f64> = (0..n)
                .map(|j| {
                    let theta = std::f64::consts::TAU * j as f64 / n as f64;
                    beta * (1.0 + 0.2 * theta.cos() + 0.15 * theta.sin())
                })
                .collect();
            ComponentDensity::Samples(samples)
        }
    };
    BoundaryDensity::new(outer, Some(inner))
}

fn log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.max(1e-300).ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..xs.len() {
        num += (lx[i] - mx) * (ly[i] - my);
        den += (lx[i] - mx) * (lx[i] - mx);
    }
    num / den
}

fn run_pairing(config: &ExperimentConfig) -> Result<RunReport> {
    let (r, big_r) = annulus_radii(config)?;
    let base = AnnularDomain::annulus(r, big_r, config.curve_samples)?;
    let density = default_pairing_density(config, r, big_r)?;

    let mut rows = Vec::new();
    let mut eps_list = Vec::new();
    let mut defects: Vec<Vec<f64>> = vec![Vec::new(); TestFunction::ALL.len()];
    for &n in &config.teeth {
        let spec = HomogenisationSpec::new(
            n,
            config.samples_per_tooth,
            vec![BoundaryComponent::Inner],
        )?;
        let start = Instant::now();
        let hom = homogenise_domain(&base, &density, &spec)?;
        let eps = hom.reports[0].epsilon;
        eps_list.push(eps);
        let n_in = n * config.samples_per_tooth;
        let mut batch = Vec::with_capacity(TestFunction::ALL.len());
        for (ki, f) in TestFunction::ALL.iter().enumerate() {
            let defect = pairing_defect(&base, &hom.domain, &density, *f)?;
            defects[ki].push(defect.abs());
            batch.push(Row {
                experiment: config.experiment.name().into(),
                eps,
                teeth: n,
                n_theta: n_in,
                n_radial: 0,
                k: ki,
                sigma: defect,
                sigma_bar: defect.abs(),
                target: 0.0,
                rel_err: defect.abs(),
                residual: 0.0,
                wall_ms: 0.0,
            });
        }
        let wall_ms = start.elapsed().as_secs_f64() * 1e3;
        for row in &mut batch {
            row.wall_ms = wall_ms;
        }
        rows.extend(batch);
    }

    let mut verdicts = Vec::new();
    for (name, ki) in [("slope-one", 0usize), ("slope-x", 1), ("slope-y", 2)] {
        let slope = log_slope(&eps_list, &defects[ki]);
        verdicts.push(Verdict::new(
            name,
            slope >= config.slope_min,
            config.slope_min,
            format!("log-log decay slope {slope:.3}"),
        ));
    }

    Ok(RunReport {
        experiment: config.experiment,
        rows,
        verdicts,
        final_mesh: None,
    })
}

fn run_bound_check(config: &ExperimentConfig) -> Result<RunReport> {
    let (r, big_r) = annulus_radii(config)?;
    let nt = round_up_multiple((config.n_theta / 4).max(64), config.curve_samples);
    let nr = (config.n_radial / 4).max(8);
    let eight_pi = 8.0 * std::f64::consts::PI;

    struct Case {
        domain: AnnularDomain,
        density: BoundaryDensity,
        nt: usize,
        teeth: usize,
        eps: f64,
    }

    let mut cases = Vec::new();
    let disk = AnnularDomain::disk(1.0, config.curve_samples)?;
    cases.push(Case {
        density: BoundaryDensity::uniform_for(&disk),
        domain: disk,
        nt,
        teeth: 0,
        eps: 0.0,
    });
    let annulus = AnnularDomain::annulus(1.0, 2.0, config.curve_samples)?;
    cases.push(Case {
        density: BoundaryDensity::uniform_for(&annulus),
        domain: annulus,
        nt,
        teeth: 0,
        eps: 0.0,
    });
    let weighted = AnnularDomain::annulus(r, big_r, config.curve_samples)?;
    cases.push(Case {
        density: catenoid_density(r, big_r)?,
        domain: weighted,
        nt,
        teeth: 0,
        eps: 0.0,
    });
    {
        let base = AnnularDomain::annulus(r, big_r, config.curve_samples)?;
        let base_density = catenoid_density(r, big_r)?;
        let n = config.teeth[config.teeth.len() / 2];
        let spec = HomogenisationSpec::new(
            n,
            config.samples_per_tooth,
            vec![BoundaryComponent::Inner],
        )?;
        let hom = homogenise_domain(&base, &base_density, &spec)?;
        let eps = hom.reports[0].epsilon;
        let n_in = n * config.samples_per_tooth;
        cases.push(Case {
            density: BoundaryDensity::uniform_for(&hom.domain),
            domain: hom.domain,
            nt: round_up_multiple(nt, lcm(n_in, config.curve_samples)),
            teeth: n,
            eps,
        });
    }

    let mut rows = Vec::new();
    let mut worst_margin = f64::NEG_INFINITY;
    for case in &cases {
        let start = Instant::now();
        let spectrum = steklov_spectrum(&case.domain, &case.density, case.nt, nr, config.k_max)?;
        let wall_ms = start.elapsed().as_secs_f64() * 1e3;
        for k in 0..spectrum.raw.len() {
            let bound = eight_pi * k as f64;
            let margin = spectrum.normalised[k] - bound;
            worst_margin = worst_margin.max(margin);
            rows.push(Row {
                experiment: config.experiment.name().into(),
                eps: case.eps,
                teeth: case.teeth,
                n_theta: case.nt,
                n_radial: nr,
                k,
                sigma: spectrum.raw[k],
                sigma_bar: spectrum.normalised[k],
                target: bound,
                rel_err: if bound > 0.0 {
                    spectrum.normalised[k] / bound
                } else {
                    spectrum.normalised[k].abs()
                },
                residual: spectrum.max_residual,
                wall_ms,
            });
        }
    }

    let verdicts = vec![Verdict::new(
        "universal-bound",
        worst_margin <= config.bound_slack,
        config.bound_slack,
        format!("worst sigma_bar_k - 8*pi*k = {worst_margin:.3e}"),
    )];

    Ok(RunReport {
        experiment: config.experiment,
        rows,
        verdicts,
        final_mesh: None,
    })
}

/// Renders the run's headline series as a small standalone SVG: one point
/// per run on a logarithmic x axis and a dashed horizontal target line.
pub fn render_svg(report: &RunReport) -> String {
    let plot_k = match report.experiment {
        Experiment::PairingDecay => 0,
        _ => 1,
    };
    let series: Vec<&Row> = report.rows.iter().filter(|r| r.k == plot_k).collect();
    let use_teeth = series.iter().any(|r| r.teeth > 0);
    let xs: Vec<f64> = series
        .iter()
        .map(|r| {
            if use_teeth {
                r.teeth as f64
            } else {
                r.n_theta as f64
            }
        })
        .collect();
    let ys: Vec<f64> = series.iter().map(|r| r.sigma_bar).collect();
    let target = series.first().map(|r| r.target).unwrap_or(0.0);

    let (width, height) = (640.0, 420.0);
    let (left, right, top, bottom) = (70.0, 20.0, 30.0, 50.0);
    let plot_w = width - left - right;
    let plot_h = height - top - bottom;

    let log_y = {
        let positive = ys.iter().all(|&y| y > 0.0);
        let ratio = if positive {
            let max = ys.iter().cloned().fold(f64::MIN, f64::max);
            let min = ys.iter().cloned().fold(f64::MAX, f64::min);
            max / min
        } else {
            1.0
        };
        positive && ratio > 50.0
    };
    let ty = |y: f64| if log_y { y.ln() } else { y };

    let mut y_lo = f64::INFINITY;
    let mut y_hi = f64::NEG_INFINITY;
    for &y in &ys {
        y_lo = y_lo.min(ty(y));
        y_hi = y_hi.max(ty(y));
    }
    if target > 0.0 && !log_y {
        y_lo = y_lo.min(target);
        y_hi = y_hi.max(target);
    }
    if !(y_hi - y_lo).is_finite() || y_hi <= y_lo {
        y_hi = y_lo + 1.0;
    }
    let pad = 0.08 * (y_hi - y_lo);
    y_lo -= pad;
    y_hi += pad;

    let x_lo = xs.iter().cloned().fold(f64::MAX, f64::min).ln();
    let x_hi = xs.iter().cloned().fold(f64::MIN, f64::max).ln();
    let x_span = if x_hi > x_lo { x_hi - x_lo } else { 1.0 };

    let px = |x: f64| left + (x.ln() - x_lo) / x_span * plot_w;
    let py = |y: f64| top + (y_hi - ty(y)) / (y_hi - y_lo) * plot_h;

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n"
    ));
    out.push_str(&format!(
        "<text x=\"{}\" y=\"20\" font-size=\"14\" font-family=\"sans-serif\">{}</text>\n",
        left,
        report.experiment.name()
    ));
    // Axes.
    out.push_str(&format!(
        "<line x1=\"{left}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        top + plot_h,
        left + plot_w,
        top + plot_h
    ));
    out.push_str(&format!(
        "<line x1=\"{left}\" y1=\"{top}\" x2=\"{left}\" y2=\"{}\" stroke=\"black\"/>\n",
        top + plot_h
    ));
    if target > 0.0 {
        let yt = py(target);
        if yt.is_finite() && yt >= top && yt <= top + plot_h {
            out.push_str(&format!(
                "<line x1=\"{left}\" y1=\"{yt}\" x2=\"{}\" y2=\"{yt}\" stroke=\"gray\" stroke-dasharray=\"6 4\"/>\n",
                left + plot_w
            ));
            out.push_str(&format!(
                "<text x=\"{}\" y=\"{}\" font-size=\"11\" font-family=\"sans-serif\" fill=\"gray\">target {target:.6}</text>\n",
                left + 4.0,
                yt - 4.0
            ));
        }
    }
    if !xs.is_empty() {
        let points: Vec<String> = xs
            .iter()
            .zip(&ys)
            .map(|(&x, &y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        out.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\"/>\n",
            points.join(" ")
        ));
        for (&x, &y) in xs.iter().zip(&ys) {
            out.push_str(&format!(
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"steelblue\"/>\n",
                px(x),
                py(y)
            ));
            out.push_str(&format!(
                "<text x=\"{:.2}\" y=\"{}\" font-size=\"11\" font-family=\"sans-serif\" text-anchor=\"middle\">{}</text>\n",
                px(x),
                top + plot_h + 16.0,
                x
            ));
        }
    }
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"12\" font-family=\"sans-serif\" text-anchor=\"middle\">{}</text>\n",
        left + plot_w / 2.0,
        height - 12.0,
        if use_teeth { "teeth" } else { "n_theta" }
    ));
    out.push_str("</svg>\n");
    out
}

/// Writes the CSV and SVG outputs that were requested.
pub fn emit_outputs(
    report: &RunReport,
    csv_path: Option<&Path>,
    svg_path: Option<&Path>,
) -> Result<()> {
    if let Some(path) = csv_path {
        std::fs::write(path, rows_to_csv(&report.rows))
            .map_err(|e| Error::IOFailure(format!("writing {}: {e}", path.display())))?;
    }
    if let Some(path) = svg_path {
        std::fs::write(path, render_svg(report))
            .map_err(|e| Error::IOFailure(format!("writing {}: {e}", path.display())))?;
    }
    Ok(())
}
