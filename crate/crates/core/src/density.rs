//! Boundary densities β ≥ 1 and weighted boundary lengths.
//!
//! The spectral problem carries a weight β on the boundary: the eigenvalue
//! condition reads ∂_ν u = σ β u, and eigenvalues are normalised by the
//! weighted length ∫_∂Ω β ds. A density is given per boundary component,
//! either as a constant or as samples at uniform angles interpolated
//! piecewise-linearly and periodically in θ, exactly like the radii of a
//! [`crate::geometry::RadialCurve`].
//!
//! Weighted lengths integrate β against the boundary polyline. Along one
//! chord the arc-length parameter is an affine function of θ, so the exact
//! integral of a piecewise-linear β over a chord is the chord length times
//! the θ-average of β over the chord's angular interval. That average is
//! evaluated with integer segment arithmetic, splitting at density
//! breakpoints, which keeps the result bitwise reproducible and makes the
//! weighted length agree exactly with the assembled boundary mass matrix.

use crate::error::{Error, Result};
use crate::geometry::{AnnularDomain, BoundaryComponent, RadialCurve};
use serde::{Deserialize, Serialize};

/// Density on a single boundary component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComponentDensity {
    Constant(f64),
    Samples(Vec<f64>),
}

impl ComponentDensity {
    fn validate(&self) -> Result<()> {
        match self {
            ComponentDensity::Constant(c) => {
                if !c.is_finite() || *c < 1.0 {
                    return Err(Error::BetaBelowOne(*c));
                }
            }
            ComponentDensity::Samples(v) => {
                if v.is_empty() {
                    return Err(Error::ConfigInvalid(
                        "density sample list is empty".into(),
                    ));
                }
                for &b in v {
                    if !b.is_finite() || b < 1.0 {
                        return Err(Error::BetaBelowOne(b));
                    }
                }
            }
        }
        Ok(())
    }

    /// Value at the angle 2π·index/denominator with integer segment
    /// arithmetic; exact at sample breakpoints.
    pub fn value_at_fraction(&self, index: usize, denominator: usize) -> f64 {
        match self {
            ComponentDensity::Constant(c) => *c,
            ComponentDensity::Samples(v) => {
                let m = v.len();
                let pos = (index % denominator) * m;
                let seg = pos / denominator;
                let rem = pos % denominator;
                if rem == 0 {
                    return v[seg % m];
                }
                let frac = rem as f64 / denominator as f64;
                (1.0 - frac) * v[seg % m] + frac * v[(seg + 1) % m]
            }
        }
    }

    /// Value at an arbitrary angle (radians), wrapping modulo 2π.
    pub fn value_at(&self, theta: f64) -> f64 {
        match self {
            ComponentDensity::Constant(c) => *c,
            ComponentDensity::Samples(v) => {
                let m = v.len() as f64;
                let tau = std::f64::consts::TAU;
                let mut u = theta.rem_euclid(tau) / tau * m;
                if u >= m {
                    u -= m;
                }
                let j = u.floor() as usize;
                let frac = u - j as f64;
                (1.0 - frac) * v[j % v.len()] + frac * v[(j + 1) % v.len()]
            }
        }
    }

    /// Exact θ-average over the angular interval [i/n, (i+1)/n] (in turns),
    /// splitting the trapezoid rule at density breakpoints so the result is
    /// the true integral of the piecewise-linear density.
    pub fn average_over_edge(&self, i: usize, n: usize) -> f64 {
        match self {
            ComponentDensity::Constant(c) => *c,
            ComponentDensity::Samples(v) => {
                let m = v.len();
                let d = n * m;
                let start = (i % n) * m;
                let end = start + m;
                let mut acc = 0.0;
                let mut p = start;
                while p < end {
                    let q = ((p / n + 1) * n).min(end);
                    let b0 = self.value_at_fraction(p, d);
                    let b1 = self.value_at_fraction(q, d);
                    acc += (q - p) as f64 * 0.5 * (b0 + b1);
                    p = q;
                }
                acc * n as f64 / d as f64
            }
        }
    }

    /// Copy with all values multiplied by c (the result must stay ≥ 1).
    pub fn scaled(&self, c: f64) -> Result<Self> {
        let out = match self {
            ComponentDensity::Constant(b) => ComponentDensity::Constant(b * c),
            ComponentDensity::Samples(v) => {
                ComponentDensity::Samples(v.iter().map(|b| b * c).collect())
            }
        };
        out.validate()?;
        Ok(out)
    }
}

/// Density for a whole domain boundary: always an outer component, plus an
/// inner one exactly when the domain is an annulus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryDensity {
    outer: ComponentDensity,
    inner: Option<ComponentDensity>,
}

impl BoundaryDensity {
    pub fn new(outer: ComponentDensity, inner: Option<ComponentDensity>) -> Result<Self> {
        outer.validate()?;
        if let Some(ref d) = inner {
            d.validate()?;
        }
        Ok(Self { outer, inner })
    }

    /// β ≡ 1 on every boundary component of the given domain.
    pub fn uniform_for(domain: &AnnularDomain) -> Self {
        Self {
            outer: ComponentDensity::Constant(1.0),
            inner: domain.inner().map(|_| ComponentDensity::Constant(1.0)),
        }
    }

    pub fn outer(&self) -> &ComponentDensity {
        &self.outer
    }

    pub fn inner(&self) -> Option<&ComponentDensity> {
        self.inner.as_ref()
    }

    pub fn component(&self, component: BoundaryComponent) -> Result<&ComponentDensity> {
        match component {
            BoundaryComponent::Outer => Ok(&self.outer),
            BoundaryComponent::Inner => self
                .inner
                .as_ref()
                .ok_or_else(|| Error::UnknownComponent("density has no inner component".into())),
        }
    }

    /// Checks that the density has an inner component exactly when the
    /// domain does.
    pub fn matches(&self, domain: &AnnularDomain) -> Result<()> {
        match (domain.inner().is_some(), self.inner.is_some()) {
            (true, false) => Err(Error::ComponentMismatch(
                "domain has an inner boundary but the density does not".into(),
            )),
            (false, true) => Err(Error::ComponentMismatch(
                "density has an inner component but the domain is a disk".into(),
            )),
            _ => Ok(()),
        }
    }

    /// Copy with every component multiplied by c.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Ok(Self {
            outer: self.outer.scaled(c)?,
            inner: match &self.inner {
                Some(d) => Some(d.scaled(c)?),
                None => None,
            },
        })
    }
}

/// Evaluates the density of one component at an angle. Fails when the
/// component is absent.
pub fn eval_density(
    density: &BoundaryDensity,
    component: BoundaryComponent,
    theta: f64,
) -> Result<f64> {
    Ok(density.component(component)?.value_at(theta))
}

/// Weighted boundary length ∫_∂Ω β ds over the domain's sample polylines.
/// Exact for the piecewise-linear β and polyline boundary.
pub fn weighted_boundary_length(domain: &AnnularDomain, density: &BoundaryDensity) -> Result<f64> {
    density.matches(domain)?;
    let mut total = 0.0;
    for component in domain.components() {
        let curve = domain.curve(component)?;
        let beta = density.component(component)?;
        total += weighted_curve_length(curve, beta);
    }
    Ok(total)
}

fn weighted_curve_length(curve: &RadialCurve, beta: &ComponentDensity) -> f64 {
    let pts = curve.points();
    let n = pts.len();
    (0..n)
        .map(|i| {
            let a = pts[i];
            let b = pts[(i + 1) % n];
            let h = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
            h * beta.average_over_edge(i, n)
        })
        .sum()
}

/// Density that makes an annulus r < ρ < R isospectral to a symmetric flat
/// cylinder after normalisation: β = R/r on the inner circle and β = 1 on
/// the outer one.
pub fn catenoid_density(r: f64, big_r: f64) -> Result<BoundaryDensity> {
    if !(r > 0.0 && big_r > r) || !r.is_finite() || !big_r.is_finite() {
        return Err(Error::BadRadii(format!(
            "catenoid density needs 0 < r < R, got r={r}, R={big_r}"
        )));
    }
    BoundaryDensity::new(
        ComponentDensity::Constant(1.0),
        Some(ComponentDensity::Constant(big_r / r)),
    )
}
