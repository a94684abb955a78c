//! steklov-core: a numerical laboratory for weighted Steklov eigenvalues of
//! planar domains.
//!
//! The crate computes the spectrum of the problem
//!
//! ```text
//! Δu = 0 in Ω,    ∂u/∂ν = σ β u on ∂Ω,
//! ```
//!
//! where Ω is a disk or an annulus-like domain bounded by radial graphs and
//! β ≥ 1 is a piecewise-linear weight on the boundary. Eigenvalues are
//! reported both raw and normalised by the weighted boundary length, which
//! makes them scale invariant in two dimensions.
//!
//! Modules:
//! - [`geometry`]: radial curves, annular domains, transfinite triangulation,
//!   Hausdorff distance, mesh validation and the text dump format.
//! - [`density`]: boundary weights and weighted boundary lengths.
//! - [`homogenise`]: sawtooth boundary perturbations whose oscillating
//!   boundary measure converges weakly to β times the base measure, plus the
//!   pairing probe measuring that convergence.
//! - [`fem`]: P1 assembly, Schur-complement reduction to a discrete
//!   Dirichlet-to-Neumann matrix on boundary nodes, and the symmetric pencil
//!   eigensolve.
//! - [`oracle`]: closed-form spectra (disk, weighted circular annulus, flat
//!   cylinder) and the critical-catenoid constants.
//! - [`lab`]: experiment driver, CSV/SVG emission, and verdicts.

pub mod density;
pub mod error;
pub mod fem;
pub mod geometry;
pub mod homogenise;
pub mod lab;
pub mod linalg;
pub mod oracle;

pub use density::{BoundaryDensity, ComponentDensity};
pub use error::{Error, Result};
pub use fem::{steklov_spectrum, AssembledSystem, Spectrum};
pub use geometry::{AnnularDomain, BoundaryComponent, MeshReport, RadialCurve, TriMesh};
pub use homogenise::{HomogenisationSpec, HomogenisedDomain, TestFunction, ToothLayout};
pub use lab::{run_experiment, Experiment, ExperimentConfig, Row, RunReport, Verdict};
pub use oracle::CatenoidConstants;
