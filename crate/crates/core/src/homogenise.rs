//! Sawtooth boundary perturbations that homogenise to a weighted problem.
//!
//! Attaching a periodic family of thin triangular teeth to a boundary
//! component stretches its length by the factor √(1 + |w′|²α²·...) carried
//! by the tooth slopes, and in the fine-tooth limit the unweighted spectral
//! problem on the perturbed domain converges to the weighted problem on the
//! base domain. The construction here works in arc length along the base
//! polyline: a component of length L with n teeth uses cells of pitch
//! ε = L/n, a tent displacement profile of height ε and half-width ε/2
//! (slope magnitude exactly 2), and a pointwise amplitude α(θ) chosen so
//! that the stretched length density reproduces the target β(θ), namely
//! β = √(1 + (2α)²). Teeth always point into the domain: inward from the
//! outer boundary, outward from the inner one.
//!
//! Convergence is measured by pairing the boundary measures against test
//! functions: the defect ∫_{∂Ω_n} f ds − ∫_{∂Ω} f β ds decays linearly in ε.

use crate::density::{BoundaryDensity, ComponentDensity};
use crate::error::{Error, Result};
use crate::geometry::{
    boundary_curve_length, build_annular_domain, AnnularDomain, BoundaryComponent, RadialCurve,
};

/// Uniform partition of a boundary component into tooth cells, in arc
/// length along the component polyline.
#[derive(Debug, Clone, PartialEq)]
pub struct ToothLayout {
    /// Arc positions of the tooth peaks, at multiples of the pitch.
    pub centers: Vec<f64>,
    /// Half-width of every tooth cell (half the pitch).
    pub half_widths: Vec<f64>,
    /// Right edge of each cell, midway between consecutive peaks.
    pub cell_edges: Vec<f64>,
    /// Polyline length of the component.
    pub total_length: f64,
}

impl ToothLayout {
    /// Layout with exactly n uniform cells on a component of the given length.
    pub fn uniform(n: usize, total_length: f64) -> Self {
        let pitch = total_length / n as f64;
        let half = 0.5 * pitch;
        Self {
            centers: (0..n).map(|j| j as f64 * pitch).collect(),
            half_widths: vec![half; n],
            cell_edges: (0..n).map(|j| j as f64 * pitch + half).collect(),
            total_length,
        }
    }

    pub fn tooth_count(&self) -> usize {
        self.centers.len()
    }

    /// Cell pitch, the homogenisation parameter ε.
    pub fn pitch(&self) -> f64 {
        self.total_length / self.tooth_count() as f64
    }
}

/// Partitions a curve into the largest number of cells of pitch at least ε.
/// The separation ε may not exceed a quarter of the curve length, so every
/// layout has at least 4 teeth. An ε that divides the length exactly (up to
/// roundoff) yields exactly length/ε cells.
pub fn sample_separated_points(curve: &RadialCurve, eps: f64) -> Result<ToothLayout> {
    let length = boundary_curve_length(curve);
    if !eps.is_finite() || eps <= 0.0 || eps >= length / 4.0 {
        return Err(Error::EpsilonTooLarge { eps, length });
    }
    let n = (length / eps * (1.0 + 1e-12)).floor() as usize;
    Ok(ToothLayout::uniform(n, length))
}

/// Tent displacement of height `eps` at arc position s: the profile peaks
/// at each cell center and vanishes at cell edges, with slope magnitude
/// eps / half_width (exactly 2 when eps equals the pitch).
pub fn tent_profile(layout: &ToothLayout, eps: f64, s: f64) -> f64 {
    let pitch = layout.pitch();
    let half = 0.5 * pitch;
    let u = s / pitch;
    let d = (u - u.round()).abs() * pitch;
    eps * (1.0 - d / half).max(0.0)
}

/// Tooth amplitude α reproducing a target density value: a displacement
/// α·w with tent slope |w′| stretches arc length by √(1 + α²|w′|²), so
/// α = √(β² − 1) / |w′|.
pub fn amplitude(beta_value: f64, tent_slope: f64) -> Result<f64> {
    if !beta_value.is_finite() || beta_value < 1.0 {
        return Err(Error::BetaBelowOne(beta_value));
    }
    if !tent_slope.is_finite() || tent_slope <= 0.0 {
        return Err(Error::ConfigInvalid(format!(
            "tent slope must be positive, got {tent_slope}"
        )));
    }
    Ok((beta_value * beta_value - 1.0).sqrt() / tent_slope)
}

/// Which components to perturb and how finely.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogenisationSpec {
    pub teeth: usize,
    pub samples_per_tooth: usize,
    pub components: Vec<BoundaryComponent>,
}

impl HomogenisationSpec {
    /// Validates tooth counts: at least 4 teeth, an even number of at least
    /// 8 samples per tooth (even counts put valleys on output samples), and
    /// a non-empty component list without repeats.
    pub fn new(
        teeth: usize,
        samples_per_tooth: usize,
        components: Vec<BoundaryComponent>,
    ) -> Result<Self> {
        if teeth < 4 {
            return Err(Error::ConfigInvalid(format!(
                "need at least 4 teeth, got {teeth}"
            )));
        }
        if samples_per_tooth < 8 || !samples_per_tooth.is_multiple_of(2) {
            return Err(Error::ConfigInvalid(format!(
                "samples_per_tooth must be even and at least 8, got {samples_per_tooth}"
            )));
        }
        if components.is_empty() {
            return Err(Error::ConfigInvalid("no components to perturb".into()));
        }
        if components.len() > 2
            || (components.len() == 2 && components[0] == components[1])
        {
            return Err(Error::ConfigInvalid("repeated component in spec".into()));
        }
        Ok(Self {
            teeth,
            samples_per_tooth,
            components,
        })
    }

    /// Default spec for a domain: perturb every component with 8 samples
    /// per tooth.
    pub fn for_domain(domain: &AnnularDomain, teeth: usize) -> Result<Self> {
        Self::new(teeth, 8, domain.components())
    }
}

/// Per-component record of an applied perturbation.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentReport {
    pub component: BoundaryComponent,
    pub layout: ToothLayout,
    /// Cell pitch ε of this component.
    pub epsilon: f64,
    /// Largest amplitude α(θ) used on this component.
    pub max_amplitude: f64,
}

/// A perturbed domain together with the layouts that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogenisedDomain {
    pub domain: AnnularDomain,
    pub reports: Vec<ComponentReport>,
}

/// Cumulative polyline arc length of a curve, pulled back to the uniform
/// angular grid with `den` samples by linear interpolation in θ inside each
/// polyline segment. Exact at the curve's own sample angles.
fn arc_position(curve: &RadialCurve, cumulative: &[f64], index: usize, den: usize) -> f64 {
    let n = curve.sample_count();
    let pos = (index % den) * n;
    let seg = pos / den;
    let rem = pos % den;
    if rem == 0 {
        return cumulative[seg];
    }
    let frac = rem as f64 / den as f64;
    (1.0 - frac) * cumulative[seg] + frac * cumulative[seg + 1]
}

fn cumulative_lengths(curve: &RadialCurve) -> Vec<f64> {
    let pts = curve.points();
    let n = pts.len();
    let mut acc = Vec::with_capacity(n + 1);
    acc.push(0.0);
    let mut total = 0.0;
    for i in 0..n {
        let a = pts[i];
        let b = pts[(i + 1) % n];
        total += ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
        acc.push(total);
    }
    acc
}

/// Builds the sawtooth-perturbed domain.
///
/// Each listed component is resampled at teeth × samples_per_tooth uniform
/// angles and displaced radially into the domain by α(θ)·w(s(θ)), where w
/// is the tent profile of its layout and α(θ) matches the component's
/// density. Components not listed keep their curves. Fails with
/// `SelfIntersection` if a displaced radius leaves the positive range, or
/// `CurveIntersection` if the perturbed curves cross each other.
pub fn homogenise_domain(
    domain: &AnnularDomain,
    density: &BoundaryDensity,
    spec: &HomogenisationSpec,
) -> Result<HomogenisedDomain> {
    density.matches(domain)?;
    let n_out = spec.teeth * spec.samples_per_tooth;
    let mut outer = domain.outer().clone();
    let mut inner = domain.inner().cloned();
    let mut reports = Vec::new();

    for &component in &spec.components {
        let curve = domain.curve(component)?;
        let beta = density.component(component)?;
        let cumulative = cumulative_lengths(curve);
        let length = cumulative[curve.sample_count()];
        let layout = ToothLayout::uniform(spec.teeth, length);
        let eps = layout.pitch();
        let slope = eps / layout.half_widths[0];
        let sign = match component {
            BoundaryComponent::Inner => 1.0,
            BoundaryComponent::Outer => -1.0,
        };

        let mut samples = Vec::with_capacity(n_out);
        let mut max_alpha = 0.0_f64;
        for i in 0..n_out {
            let rho = curve.radius_at_fraction(i, n_out);
            let beta_i = beta.value_at_fraction(i, n_out);
            let alpha = amplitude(beta_i, slope)?;
            max_alpha = max_alpha.max(alpha);
            let s = arc_position(curve, &cumulative, i, n_out);
            let w = tent_profile(&layout, eps, s);
            let new_rho = rho + sign * alpha * w;
            if !new_rho.is_finite() || new_rho <= 0.0 {
                return Err(Error::SelfIntersection(format!(
                    "perturbed {} radius {new_rho} at angle index {i}/{n_out}",
                    component.name()
                )));
            }
            samples.push(new_rho);
        }
        let perturbed = RadialCurve::new(samples)?;
        match component {
            BoundaryComponent::Inner => inner = Some(perturbed),
            BoundaryComponent::Outer => outer = perturbed,
        }
        reports.push(ComponentReport {
            component,
            layout,
            epsilon: eps,
            max_amplitude: max_alpha,
        });
    }

    let domain = build_annular_domain(outer, inner)?;
    Ok(HomogenisedDomain { domain, reports })
}

/// Test functions for pairing boundary measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestFunction {
    One,
    X,
    Y,
    XSquared,
    Radial,
}

impl TestFunction {
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "one" => Ok(TestFunction::One),
            "x" => Ok(TestFunction::X),
            "y" => Ok(TestFunction::Y),
            "x2" | "x^2" => Ok(TestFunction::XSquared),
            "radial" => Ok(TestFunction::Radial),
            other => Err(Error::UnknownTestFunction(other.into())),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TestFunction::One => "one",
            TestFunction::X => "x",
            TestFunction::Y => "y",
            TestFunction::XSquared => "x2",
            TestFunction::Radial => "radial",
        }
    }

    pub fn eval(self, p: [f64; 2]) -> f64 {
        match self {
            TestFunction::One => 1.0,
            TestFunction::X => p[0],
            TestFunction::Y => p[1],
            TestFunction::XSquared => p[0] * p[0],
            TestFunction::Radial => (p[0] * p[0] + p[1] * p[1]).sqrt(),
        }
    }

    pub const ALL: [TestFunction; 5] = [
        TestFunction::One,
        TestFunction::X,
        TestFunction::Y,
        TestFunction::XSquared,
        TestFunction::Radial,
    ];
}

fn curve_pairing(curve: &RadialCurve, f: TestFunction, beta: Option<&ComponentDensity>) -> f64 {
    let pts = curve.points();
    let n = pts.len();
    let vals: Vec<f64> = pts
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let b = beta.map_or(1.0, |b| b.value_at_fraction(i, n));
            f.eval(*p) * b
        })
        .collect();
    (0..n)
        .map(|i| {
            let a = pts[i];
            let b = pts[(i + 1) % n];
            let h = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
            h * 0.5 * (vals[i] + vals[(i + 1) % n])
        })
        .sum()
}

/// Pairing defect ∫_{∂Ω'} f ds − ∫_{∂Ω} f β ds between a perturbed domain
/// Ω' and a weighted base domain Ω, summed over boundary components.
///
/// Each base curve is refined to its perturbed partner's sample count
/// before integrating. The refined base is exactly the unperturbed twin of
/// the sawtooth (the perturbation samples the base curve the same way), so
/// the defect isolates the effect of the teeth rather than mixing in the
/// resolution difference between the two polylines.
pub fn pairing_defect(
    base: &AnnularDomain,
    perturbed: &AnnularDomain,
    density: &BoundaryDensity,
    f: TestFunction,
) -> Result<f64> {
    density.matches(base)?;
    if base.component_count() != perturbed.component_count() {
        return Err(Error::ComponentMismatch(format!(
            "base has {} boundary components, perturbed has {}",
            base.component_count(),
            perturbed.component_count()
        )));
    }
    let mut defect = 0.0;
    for component in base.components() {
        let b = base.curve(component)?;
        let p = perturbed.curve(component)?;
        let b = b.refine(p.sample_count())?;
        let beta = density.component(component)?;
        defect += curve_pairing(p, f, None) - curve_pairing(&b, f, Some(beta));
    }
    Ok(defect)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::weighted_boundary_length;

    #[test]
    fn layout_from_unit_epsilon() {
        let circle = RadialCurve::constant(1.0, 64).unwrap();
        let layout = sample_separated_points(&circle, 1.0).unwrap();
        assert_eq!(layout.tooth_count(), 6);
        assert!((layout.pitch() - 1.0469).abs() < 1e-3);
        assert_eq!(layout.centers[0], 0.0);
        assert!((layout.cell_edges[0] - 0.5 * layout.pitch()).abs() < 1e-15);
    }

    #[test]
    fn exact_divisor_gives_exact_count() {
        let circle = RadialCurve::constant(1.0, 64).unwrap();
        let length = boundary_curve_length(&circle);
        let layout = sample_separated_points(&circle, length / 8.0).unwrap();
        assert_eq!(layout.tooth_count(), 8);
        assert_eq!(layout.pitch(), length / 8.0);
    }

    #[test]
    fn epsilon_too_large_rejected() {
        let circle = RadialCurve::constant(1.0, 64).unwrap();
        let length = boundary_curve_length(&circle);
        assert!(matches!(
            sample_separated_points(&circle, length / 4.0),
            Err(Error::EpsilonTooLarge { .. })
        ));
        assert!(matches!(
            sample_separated_points(&circle, 0.0),
            Err(Error::EpsilonTooLarge { .. })
        ));
    }

    #[test]
    fn tent_slope_is_two_at_matching_epsilon() {
        let circle = RadialCurve::constant(1.0, 64).unwrap();
        let length = boundary_curve_length(&circle);
        let eps = length / 8.0;
        let layout = sample_separated_points(&circle, eps).unwrap();
        let rho = layout.half_widths[0];
        let c = layout.centers[3];
        assert_eq!(tent_profile(&layout, eps, c), eps);
        assert_eq!(tent_profile(&layout, eps, c + rho), 0.0);
        let slope = (tent_profile(&layout, eps, c) - tent_profile(&layout, eps, c + rho)) / rho;
        assert_eq!(slope, 2.0);
        // Halfway down one side.
        let mid = tent_profile(&layout, eps, c + 0.5 * rho);
        assert!((mid - 0.5 * eps).abs() < 1e-15 * eps);
        // Periodic wrap: just left of the first peak.
        let wrapped = tent_profile(&layout, eps, layout.total_length - 0.5 * rho);
        assert!((wrapped - 0.5 * eps).abs() < 1e-12 * eps);
    }

    #[test]
    fn amplitude_examples() {
        assert!((amplitude(2.0_f64.sqrt(), 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(amplitude(1.0, 2.0).unwrap(), 0.0);
        let beta = 11.016093846685423_f64;
        let alpha = amplitude(beta, 2.0).unwrap();
        let back = (1.0 + 4.0 * alpha * alpha).sqrt();
        assert!((back - beta).abs() < 1e-12 * beta);
        assert!(matches!(amplitude(0.9, 2.0), Err(Error::BetaBelowOne(_))));
    }

    #[test]
    fn unit_density_leaves_curves_unchanged() {
        let annulus = AnnularDomain::annulus(1.0, 3.0, 16).unwrap();
        let density = BoundaryDensity::uniform_for(&annulus);
        let spec = HomogenisationSpec::new(
            8,
            8,
            vec![BoundaryComponent::Inner, BoundaryComponent::Outer],
        )
        .unwrap();
        let out = homogenise_domain(&annulus, &density, &spec).unwrap();
        // α = 0 everywhere, so the output curves are exact refinements.
        let expect_inner = annulus.inner().unwrap().refine(64).unwrap();
        let expect_outer = annulus.outer().refine(64).unwrap();
        assert_eq!(out.domain.inner().unwrap(), &expect_inner);
        assert_eq!(out.domain.outer(), &expect_outer);
        for r in &out.reports {
            assert_eq!(r.max_amplitude, 0.0);
        }
    }

    #[test]
    fn perturbed_length_converges_to_weighted_length() {
        let disk = AnnularDomain::disk(1.0, 64).unwrap();
        let density = BoundaryDensity::new(ComponentDensity::Constant(2.0), None).unwrap();
        let mut previous = f64::INFINITY;
        for teeth in [16, 128, 1024] {
            let spec =
                HomogenisationSpec::new(teeth, 16, vec![BoundaryComponent::Outer]).unwrap();
            let out = homogenise_domain(&disk, &density, &spec).unwrap();
            let length = boundary_curve_length(out.domain.outer());
            let twin = disk.refined(teeth * 16).unwrap();
            let target = weighted_boundary_length(&twin, &density).unwrap();
            let rel = ((length - target) / target).abs();
            assert!(rel < previous, "teeth={teeth}: {rel} not below {previous}");
            previous = rel;
        }
        assert!(previous < 1e-3, "finest relative defect {previous}");
    }

    #[test]
    fn pairing_defect_one_matches_length_defect() {
        let disk = AnnularDomain::disk(1.0, 64).unwrap();
        let density = BoundaryDensity::new(ComponentDensity::Constant(2.0), None).unwrap();
        let spec = HomogenisationSpec::new(32, 8, vec![BoundaryComponent::Outer]).unwrap();
        let out = homogenise_domain(&disk, &density, &spec).unwrap();
        let defect = pairing_defect(&disk, &out.domain, &density, TestFunction::One).unwrap();
        let twin = disk.refined(32 * 8).unwrap();
        let direct = boundary_curve_length(out.domain.outer())
            - weighted_boundary_length(&twin, &density).unwrap();
        assert!((defect - direct).abs() < 1e-12 * direct.abs());
    }

    #[test]
    fn symmetric_construction_has_null_first_moments() {
        let big_r = 11.016093846685423_f64;
        let annulus = AnnularDomain::annulus(1.0, big_r, 64).unwrap();
        let density = crate::density::catenoid_density(1.0, big_r).unwrap();
        let spec = HomogenisationSpec::for_domain(&annulus, 16).unwrap();
        let out = homogenise_domain(&annulus, &density, &spec).unwrap();
        let scale = weighted_boundary_length(&annulus, &density).unwrap();
        for f in [TestFunction::X, TestFunction::Y] {
            let defect = pairing_defect(&annulus, &out.domain, &density, f).unwrap();
            assert!(
                defect.abs() < 1e-10 * scale,
                "{}: defect {defect} not null",
                f.name()
            );
        }
    }

    #[test]
    fn oversized_teeth_self_intersect() {
        let disk = AnnularDomain::disk(1.0, 64).unwrap();
        let density = BoundaryDensity::new(ComponentDensity::Constant(3.0), None).unwrap();
        let spec = HomogenisationSpec::new(4, 8, vec![BoundaryComponent::Outer]).unwrap();
        assert!(matches!(
            homogenise_domain(&disk, &density, &spec),
            Err(Error::SelfIntersection(_))
        ));
    }

    #[test]
    fn test_function_names_round_trip() {
        for f in TestFunction::ALL {
            assert_eq!(TestFunction::from_name(f.name()).unwrap(), f);
        }
        assert!(matches!(
            TestFunction::from_name("cubic"),
            Err(Error::UnknownTestFunction(_))
        ));
    }

    #[test]
    fn spec_validation() {
        assert!(matches!(
            HomogenisationSpec::new(3, 8, vec![BoundaryComponent::Outer]),
            Err(Error::ConfigInvalid(_))
        ));
        assert!(matches!(
            HomogenisationSpec::new(8, 7, vec![BoundaryComponent::Outer]),
            Err(Error::ConfigInvalid(_))
        ));
        assert!(matches!(
            HomogenisationSpec::new(8, 8, vec![]),
            Err(Error::ConfigInvalid(_))
        ));
    }
}
