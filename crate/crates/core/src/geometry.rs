//! Radially parametrized planar domains and their triangulations.
//!
//! A boundary curve is a radial graph: radii ρ_i > 0 sampled at N uniform
//! angles θ_i = 2πi/N, interpolated piecewise-linearly in θ and closed
//! periodically. The polyline through the sample points is the ground truth
//! for all geometric quantities (length, area, distance); the smooth curve
//! it approximates never enters any computation. A domain is bounded by one
//! such curve (disk) or two (annulus with the inner curve strictly inside
//! the outer one).
//!
//! Meshing uses transfinite interpolation between the boundary curves:
//! nodes sit at ρ(θ_i, s_j) = (1−s_j) ρ_in(θ_i) + s_j ρ_out(θ_i) with
//! s_j = j/n_radial, each quad split into two counterclockwise triangles.
//! For the disk the innermost ring collapses to a single center node with a
//! fan around it. Requiring n_theta to be a multiple of each curve's sample
//! count puts every curve kink on a mesh vertex, which P1 convergence
//! needs.

use crate::error::{Error, Result};

/// Tag for one of the (up to two) boundary components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryComponent {
    Inner,
    Outer,
}

impl BoundaryComponent {
    pub fn name(self) -> &'static str {
        match self {
            BoundaryComponent::Inner => "inner",
            BoundaryComponent::Outer => "outer",
        }
    }
}

/// Closed curve given by radii at uniformly spaced angles, piecewise-linear
/// in θ and periodic. The polyline through the samples is the curve.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialCurve {
    samples: Vec<f64>,
}

impl RadialCurve {
    /// Builds a curve from radius samples at θ_i = 2πi/N. Requires N ≥ 8
    /// and strictly positive radii.
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        if samples.len() < 8 {
            return Err(Error::ResolutionMismatch(format!(
                "a radial curve needs at least 8 samples, got {}",
                samples.len()
            )));
        }
        for &r in &samples {
            if !r.is_finite() || r <= 0.0 {
                return Err(Error::NonPositiveRadius(r));
            }
        }
        Ok(Self { samples })
    }

    /// Circle of the given radius, sampled n times.
    pub fn constant(radius: f64, n: usize) -> Result<Self> {
        Self::new(vec![radius; n])
    }

    pub fn sample_count(&self) -> usize {
        self.samples.len()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Radius at the angle 2π·index/denominator, computed with integer
    /// segment arithmetic so that angles landing on samples reproduce them
    /// bitwise. `index` may be any value; it wraps modulo `denominator`.
    pub fn radius_at_fraction(&self, index: usize, denominator: usize) -> f64 {
        let n = self.samples.len();
        let pos = (index % denominator) * n;
        let seg = pos / denominator;
        let rem = pos % denominator;
        if rem == 0 {
            return self.samples[seg % n];
        }
        let frac = rem as f64 / denominator as f64;
        let a = self.samples[seg % n];
        let b = self.samples[(seg + 1) % n];
        (1.0 - frac) * a + frac * b
    }

    /// Radius at an arbitrary angle (radians), wrapping modulo 2π.
    pub fn radius_at(&self, theta: f64) -> f64 {
        let n = self.samples.len() as f64;
        let tau = std::f64::consts::TAU;
        let mut u = (theta.rem_euclid(tau)) / tau * n;
        if u >= n {
            u -= n;
        }
        let j = u.floor() as usize;
        let frac = u - j as f64;
        let a = self.samples[j % self.samples.len()];
        let b = self.samples[(j + 1) % self.samples.len()];
        (1.0 - frac) * a + frac * b
    }

    /// Vertex i of the polyline, at angle 2πi/N.
    pub fn point(&self, i: usize) -> [f64; 2] {
        let n = self.samples.len();
        let theta = std::f64::consts::TAU * (i % n) as f64 / n as f64;
        let r = self.samples[i % n];
        [r * theta.cos(), r * theta.sin()]
    }

    /// All polyline vertices in angular order.
    pub fn points(&self) -> Vec<[f64; 2]> {
        (0..self.samples.len()).map(|i| self.point(i)).collect()
    }

    /// Resamples the curve at `n` uniform angles. `n` must be a positive
    /// multiple of the sample count so every kink stays on a sample.
    pub fn refine(&self, n: usize) -> Result<Self> {
        if n == 0 || !n.is_multiple_of(self.samples.len()) {
            return Err(Error::ResolutionMismatch(format!(
                "refinement count {n} is not a multiple of the sample count {}",
                self.samples.len()
            )));
        }
        let samples = (0..n).map(|i| self.radius_at_fraction(i, n)).collect();
        Self::new(samples)
    }

    /// Dilated copy with all radii multiplied by c > 0.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.samples.iter().map(|r| r * c).collect())
    }
}

/// Exact polyline length: the sum of chord lengths between consecutive
/// sample points, closing the loop.
pub fn boundary_curve_length(curve: &RadialCurve) -> f64 {
    let pts = curve.points();
    let n = pts.len();
    (0..n)
        .map(|i| {
            let a = pts[i];
            let b = pts[(i + 1) % n];
            ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt()
        })
        .sum()
}

/// Signed shoelace area of the sample polygon; positive because radial
/// graphs are traversed counterclockwise.
pub fn polygon_area(curve: &RadialCurve) -> f64 {
    let pts = curve.points();
    let n = pts.len();
    0.5 * (0..n)
        .map(|i| {
            let a = pts[i];
            let b = pts[(i + 1) % n];
            a[0] * b[1] - b[0] * a[1]
        })
        .sum::<f64>()
}

fn point_segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let ap = [p[0] - a[0], p[1] - a[1]];
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    let t = if len2 > 0.0 {
        ((ap[0] * ab[0] + ap[1] * ab[1]) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let q = [a[0] + t * ab[0], a[1] + t * ab[1]];
    ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt()
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn directed_hausdorff(from: &[[f64; 2]], to: &[[f64; 2]]) -> f64 {
    let m = to.len();
    let mut worst = 0.0_f64;
    for &p in from {
        let mut best = f64::INFINITY;
        for i in 0..m {
            let d = point_segment_distance(p, to[i], to[(i + 1) % m]);
            if d < best {
                best = d;
            }
        }
        if best > worst {
            worst = best;
        }
    }
    worst
}

/// Symmetric Hausdorff distance between two curve polylines. Both curves
/// are refined to the least common multiple of their sample counts, then the
/// distance is taken point-to-segment in both directions.
pub fn hausdorff_distance(a: &RadialCurve, b: &RadialCurve) -> f64 {
    let na = a.sample_count();
    let nb = b.sample_count();
    let l = na / gcd(na, nb) * nb;
    let ra = a.refine(l).expect("lcm is a multiple").points();
    let rb = b.refine(l).expect("lcm is a multiple").points();
    directed_hausdorff(&ra, &rb).max(directed_hausdorff(&rb, &ra))
}

/// Planar domain bounded by one radial curve (disk) or two (annulus).
#[derive(Debug, Clone, PartialEq)]
pub struct AnnularDomain {
    outer: RadialCurve,
    inner: Option<RadialCurve>,
}

/// Validates and builds a domain. With an inner curve present, the curves
/// are compared on their common angular refinement and must satisfy
/// ρ_inner(θ) < ρ_outer(θ) strictly at every refined sample.
pub fn build_annular_domain(outer: RadialCurve, inner: Option<RadialCurve>) -> Result<AnnularDomain> {
    if let Some(ref inner_curve) = inner {
        let no = outer.sample_count();
        let ni = inner_curve.sample_count();
        let l = no / gcd(no, ni) * ni;
        for i in 0..l {
            let ri = inner_curve.radius_at_fraction(i, l);
            let ro = outer.radius_at_fraction(i, l);
            if ri >= ro {
                return Err(Error::CurveIntersection(format!(
                    "inner radius {ri} >= outer radius {ro} at angle index {i}/{l}"
                )));
            }
        }
    }
    Ok(AnnularDomain { outer, inner })
}

impl AnnularDomain {
    /// Disk of the given radius with an n-sample boundary circle.
    pub fn disk(radius: f64, n: usize) -> Result<Self> {
        build_annular_domain(RadialCurve::constant(radius, n)?, None)
    }

    /// Circular annulus r < ρ < R, both circles sampled n times.
    pub fn annulus(r: f64, big_r: f64, n: usize) -> Result<Self> {
        if !(r > 0.0 && big_r > r) {
            return Err(Error::BadRadii(format!("need 0 < r < R, got r={r}, R={big_r}")));
        }
        build_annular_domain(
            RadialCurve::constant(big_r, n)?,
            Some(RadialCurve::constant(r, n)?),
        )
    }

    pub fn outer(&self) -> &RadialCurve {
        &self.outer
    }

    pub fn inner(&self) -> Option<&RadialCurve> {
        self.inner.as_ref()
    }

    /// Number of boundary components: 1 for a disk, 2 for an annulus.
    pub fn component_count(&self) -> usize {
        if self.inner.is_some() {
            2
        } else {
            1
        }
    }

    /// Components present, inner first when it exists.
    pub fn components(&self) -> Vec<BoundaryComponent> {
        match self.inner {
            Some(_) => vec![BoundaryComponent::Inner, BoundaryComponent::Outer],
            None => vec![BoundaryComponent::Outer],
        }
    }

    pub fn curve(&self, component: BoundaryComponent) -> Result<&RadialCurve> {
        match component {
            BoundaryComponent::Outer => Ok(&self.outer),
            BoundaryComponent::Inner => self
                .inner
                .as_ref()
                .ok_or_else(|| Error::UnknownComponent("domain has no inner boundary".into())),
        }
    }

    /// Replaces one boundary curve, revalidating the domain.
    pub fn with_curve(&self, component: BoundaryComponent, curve: RadialCurve) -> Result<Self> {
        match component {
            BoundaryComponent::Outer => {
                build_annular_domain(curve, self.inner.clone())
            }
            BoundaryComponent::Inner => {
                if self.inner.is_none() {
                    return Err(Error::UnknownComponent(
                        "domain has no inner boundary".into(),
                    ));
                }
                build_annular_domain(self.outer.clone(), Some(curve))
            }
        }
    }

    /// Dilated copy with all radii multiplied by c > 0.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        let outer = self.outer.scaled(c)?;
        let inner = match &self.inner {
            Some(curve) => Some(curve.scaled(c)?),
            None => None,
        };
        build_annular_domain(outer, inner)
    }

    /// Area of the sample polygon (outer polygon minus inner polygon).
    pub fn area(&self) -> f64 {
        let outer = polygon_area(&self.outer);
        match &self.inner {
            Some(inner) => outer - polygon_area(inner),
            None => outer,
        }
    }

    /// Copy with every curve refined to n_theta samples.
    pub fn refined(&self, n_theta: usize) -> Result<Self> {
        let outer = self.outer.refine(n_theta)?;
        let inner = match &self.inner {
            Some(curve) => Some(curve.refine(n_theta)?),
            None => None,
        };
        build_annular_domain(outer, inner)
    }
}

/// Oriented boundary edge with its component tag and the boundary parameter
/// θ of each endpoint (the second θ of the closing edge is 2π, not 0).
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryEdge {
    pub nodes: [usize; 2],
    pub component: BoundaryComponent,
    pub thetas: [f64; 2],
}

/// Triangulation with tagged boundary edges.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    pub nodes: Vec<[f64; 2]>,
    pub triangles: Vec<[usize; 3]>,
    pub boundary_edges: Vec<BoundaryEdge>,
    pub n_theta: usize,
    pub n_radial: usize,
}

fn signed_area(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
}

/// Transfinite triangulation of the domain.
///
/// n_theta must be a positive multiple of each boundary curve's sample
/// count (kinks land on grid lines) and n_radial must be at least 2 (so at
/// least one interior node ring exists). Triangles are counterclockwise;
/// any inverted triangle aborts with an error.
pub fn mesh_domain(domain: &AnnularDomain, n_theta: usize, n_radial: usize) -> Result<TriMesh> {
    if n_radial < 2 {
        return Err(Error::ResolutionMismatch(format!(
            "n_radial must be at least 2, got {n_radial}"
        )));
    }
    let outer = domain.outer();
    if n_theta == 0 || !n_theta.is_multiple_of(outer.sample_count()) {
        return Err(Error::ResolutionMismatch(format!(
            "n_theta {n_theta} is not a multiple of the outer sample count {}",
            outer.sample_count()
        )));
    }
    if let Some(inner) = domain.inner() {
        if !n_theta.is_multiple_of(inner.sample_count()) {
            return Err(Error::ResolutionMismatch(format!(
                "n_theta {n_theta} is not a multiple of the inner sample count {}",
                inner.sample_count()
            )));
        }
    }

    let tau = std::f64::consts::TAU;
    let thetas: Vec<f64> = (0..n_theta).map(|i| tau * i as f64 / n_theta as f64).collect();
    let cos_sin: Vec<[f64; 2]> = thetas.iter().map(|t| [t.cos(), t.sin()]).collect();
    let rho_out: Vec<f64> = (0..n_theta)
        .map(|i| outer.radius_at_fraction(i, n_theta))
        .collect();
    let rho_in: Vec<f64> = match domain.inner() {
        Some(inner) => (0..n_theta)
            .map(|i| inner.radius_at_fraction(i, n_theta))
            .collect(),
        None => vec![0.0; n_theta],
    };
    let is_disk = domain.inner().is_none();

    let mut nodes: Vec<[f64; 2]> = Vec::new();
    if is_disk {
        nodes.push([0.0, 0.0]);
    }
    let first_ring = if is_disk { 1 } else { 0 };
    for j in first_ring..=n_radial {
        let s = j as f64 / n_radial as f64;
        for i in 0..n_theta {
            let rho = (1.0 - s) * rho_in[i] + s * rho_out[i];
            nodes.push([rho * cos_sin[i][0], rho * cos_sin[i][1]]);
        }
    }

    let node_index = |i: usize, j: usize| -> usize {
        let i = i % n_theta;
        if is_disk {
            if j == 0 {
                0
            } else {
                1 + (j - 1) * n_theta + i
            }
        } else {
            j * n_theta + i
        }
    };

    let mut triangles: Vec<[usize; 3]> = Vec::new();
    if is_disk {
        for i in 0..n_theta {
            triangles.push([0, node_index(i, 1), node_index(i + 1, 1)]);
        }
    }
    let first_quad_ring = if is_disk { 1 } else { 0 };
    for j in first_quad_ring..n_radial {
        for i in 0..n_theta {
            let p00 = node_index(i, j);
            let p10 = node_index(i + 1, j);
            let p11 = node_index(i + 1, j + 1);
            let p01 = node_index(i, j + 1);
            triangles.push([p00, p01, p11]);
            triangles.push([p00, p11, p10]);
        }
    }

    for (idx, tri) in triangles.iter().enumerate() {
        let area = signed_area(nodes[tri[0]], nodes[tri[1]], nodes[tri[2]]);
        if area <= 0.0 {
            return Err(Error::DegenerateElement(format!(
                "triangle {idx} has signed area {area}"
            )));
        }
    }

    let mut boundary_edges = Vec::new();
    let edge_thetas = |i: usize| -> [f64; 2] {
        let t0 = tau * i as f64 / n_theta as f64;
        let t1 = tau * (i + 1) as f64 / n_theta as f64;
        [t0, t1]
    };
    if !is_disk {
        for i in 0..n_theta {
            boundary_edges.push(BoundaryEdge {
                nodes: [node_index(i, 0), node_index(i + 1, 0)],
                component: BoundaryComponent::Inner,
                thetas: edge_thetas(i),
            });
        }
    }
    for i in 0..n_theta {
        boundary_edges.push(BoundaryEdge {
            nodes: [node_index(i, n_radial), node_index(i + 1, n_radial)],
            component: BoundaryComponent::Outer,
            thetas: edge_thetas(i),
        });
    }

    Ok(TriMesh {
        nodes,
        triangles,
        boundary_edges,
        n_theta,
        n_radial,
    })
}

/// Diagnostic summary of a mesh. Produced by [`validate_mesh`], which never
/// fails; consumers read quality and topology off the report.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshReport {
    /// Smallest interior angle over all triangles, in degrees.
    pub min_angle_deg: f64,
    /// Largest ratio of longest edge to twice the inradius (√3 for an
    /// equilateral triangle).
    pub max_aspect_ratio: f64,
    pub euler_characteristic: i64,
    /// Number of closed boundary cycles found by walking boundary edges.
    pub boundary_component_count: usize,
    /// Sum of triangle areas; equals the sampled polygon area to roundoff.
    pub total_area: f64,
    /// Polyline length of each boundary component present in the mesh.
    pub boundary_lengths: Vec<(BoundaryComponent, f64)>,
    /// Most negative (or smallest) triangle signed area; positive for valid meshes.
    pub min_signed_area: f64,
}

/// Computes the mesh report: quality measures, Euler characteristic
/// (vertices − edges + triangles), boundary cycle count, and areas.
pub fn validate_mesh(mesh: &TriMesh) -> MeshReport {
    let mut min_angle = f64::INFINITY;
    let mut max_aspect = 0.0_f64;
    let mut total_area = 0.0;
    let mut min_area = f64::INFINITY;

    for tri in &mesh.triangles {
        let p = [mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]]];
        let area = signed_area(p[0], p[1], p[2]);
        total_area += area;
        min_area = min_area.min(area);

        let mut edge_len = [0.0_f64; 3];
        for v in 0..3 {
            let a = p[(v + 1) % 3];
            let b = p[(v + 2) % 3];
            edge_len[v] = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
        }
        let perimeter: f64 = edge_len.iter().sum();
        let longest = edge_len.iter().cloned().fold(0.0, f64::max);
        if area > 0.0 {
            max_aspect = max_aspect.max(longest * perimeter / (4.0 * area));
        } else {
            max_aspect = f64::INFINITY;
        }
        for v in 0..3 {
            // Law of cosines at vertex v.
            let (a, b, c) = (edge_len[v], edge_len[(v + 1) % 3], edge_len[(v + 2) % 3]);
            let cos = ((b * b + c * c - a * a) / (2.0 * b * c)).clamp(-1.0, 1.0);
            min_angle = min_angle.min(cos.acos().to_degrees());
        }
    }

    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(3 * mesh.triangles.len());
    for tri in &mesh.triangles {
        for v in 0..3 {
            let a = tri[v];
            let b = tri[(v + 1) % 3];
            edges.push((a.min(b), a.max(b)));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let euler =
        mesh.nodes.len() as i64 - edges.len() as i64 + mesh.triangles.len() as i64;

    // Walk boundary edges along their successor map to count closed cycles.
    let mut next = std::collections::HashMap::new();
    for e in &mesh.boundary_edges {
        next.insert(e.nodes[0], e.nodes[1]);
    }
    let mut visited = std::collections::HashSet::new();
    let mut cycles = 0;
    for e in &mesh.boundary_edges {
        let start = e.nodes[0];
        if visited.contains(&start) {
            continue;
        }
        let mut cur = start;
        loop {
            visited.insert(cur);
            match next.get(&cur) {
                Some(&n) if n == start => {
                    cycles += 1;
                    break;
                }
                Some(&n) if !visited.contains(&n) => cur = n,
                _ => break,
            }
        }
    }

    let mut boundary_lengths: Vec<(BoundaryComponent, f64)> = Vec::new();
    for component in [BoundaryComponent::Inner, BoundaryComponent::Outer] {
        let len: f64 = mesh
            .boundary_edges
            .iter()
            .filter(|e| e.component == component)
            .map(|e| {
                let a = mesh.nodes[e.nodes[0]];
                let b = mesh.nodes[e.nodes[1]];
                ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt()
            })
            .sum();
        if len > 0.0 {
            boundary_lengths.push((component, len));
        }
    }

    MeshReport {
        min_angle_deg: min_angle,
        max_aspect_ratio: max_aspect,
        euler_characteristic: euler,
        boundary_component_count: cycles,
        total_area,
        boundary_lengths,
        min_signed_area: min_area,
    }
}

/// Serializes a mesh to the plain-text dump format:
///
/// ```text
/// nodes <count>
/// <x> <y>            (one line per node)
/// triangles <count>
/// <i> <j> <k>        (0-based node indices)
/// boundary_edges <count>
/// <i> <j> <tag> <theta_i> <theta_j>
/// ```
pub fn mesh_to_text(mesh: &TriMesh) -> String {
    let mut out = String::new();
    out.push_str(&format!("nodes {}\n", mesh.nodes.len()));
    for p in &mesh.nodes {
        out.push_str(&format!("{} {}\n", p[0], p[1]));
    }
    out.push_str(&format!("triangles {}\n", mesh.triangles.len()));
    for t in &mesh.triangles {
        out.push_str(&format!("{} {} {}\n", t[0], t[1], t[2]));
    }
    out.push_str(&format!("boundary_edges {}\n", mesh.boundary_edges.len()));
    for e in &mesh.boundary_edges {
        out.push_str(&format!(
            "{} {} {} {} {}\n",
            e.nodes[0],
            e.nodes[1],
            e.component.name(),
            e.thetas[0],
            e.thetas[1]
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn curve_validation() {
        assert!(matches!(
            RadialCurve::new(vec![1.0; 4]),
            Err(Error::ResolutionMismatch(_))
        ));
        assert!(matches!(
            RadialCurve::new(vec![1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, -0.5]),
            Err(Error::NonPositiveRadius(_))
        ));
        assert!(RadialCurve::constant(2.0, 8).is_ok());
    }

    #[test]
    fn interpolation_hits_samples_exactly() {
        let samples: Vec<f64> = (0..8).map(|i| 1.0 + 0.1 * i as f64).collect();
        let curve = RadialCurve::new(samples.clone()).unwrap();
        let refined = curve.refine(32).unwrap();
        for (i, &sample) in samples.iter().enumerate() {
            assert_eq!(refined.samples()[4 * i], sample);
        }
        // Midpoint of a segment interpolates linearly.
        assert_eq!(refined.samples()[2], 0.5 * (samples[0] + samples[1]));
    }

    #[test]
    fn circle_length_converges_to_circumference() {
        let fine = RadialCurve::constant(1.0, 4096).unwrap();
        assert!((boundary_curve_length(&fine) - 2.0 * PI).abs() < 1e-5);
        // Polyline length of an N-gon is exactly 2N sin(π/N).
        let coarse = RadialCurve::constant(1.0, 8).unwrap();
        let expected = 16.0 * (PI / 8.0).sin();
        assert!((boundary_curve_length(&coarse) - expected).abs() < 1e-14);
    }

    #[test]
    fn length_scales_linearly() {
        let c1 = RadialCurve::constant(1.0, 64).unwrap();
        let c3 = c1.scaled(3.0).unwrap();
        assert!(
            (boundary_curve_length(&c3) - 3.0 * boundary_curve_length(&c1)).abs() < 1e-12
        );
    }

    #[test]
    fn length_invariant_under_sample_rotation() {
        let samples: Vec<f64> = (0..16).map(|i| 1.5 + 0.2 * ((i * 3) % 5) as f64).collect();
        let curve = RadialCurve::new(samples.clone()).unwrap();
        let mut rotated = samples;
        rotated.rotate_left(5);
        // Shifting the sample list rotates the polygon rigidly by 5 steps.
        let shifted = RadialCurve::new(rotated).unwrap();
        assert!(
            (boundary_curve_length(&curve) - boundary_curve_length(&shifted)).abs() < 1e-12
        );
    }

    #[test]
    fn hausdorff_basics() {
        let a = RadialCurve::constant(1.0, 16).unwrap();
        let b = RadialCurve::constant(1.1, 16).unwrap();
        assert_eq!(hausdorff_distance(&a, &a), 0.0);
        let d = hausdorff_distance(&a, &b);
        assert!((d - 0.1).abs() < 1e-12, "got {d}");
        // Symmetry.
        assert_eq!(d, hausdorff_distance(&b, &a));
    }

    #[test]
    fn domain_validation_rejects_crossing() {
        let outer = RadialCurve::constant(1.0, 8).unwrap();
        let inner = RadialCurve::constant(2.0, 8).unwrap();
        assert!(matches!(
            build_annular_domain(outer, Some(inner)),
            Err(Error::CurveIntersection(_))
        ));
    }

    #[test]
    fn disk_mesh_topology_and_area() {
        let disk = AnnularDomain::disk(1.0, 8).unwrap();
        let mesh = mesh_domain(&disk, 64, 16).unwrap();
        let report = validate_mesh(&mesh);
        assert_eq!(report.euler_characteristic, 1);
        assert_eq!(report.boundary_component_count, 1);
        assert!(report.min_signed_area > 0.0);
        // Mesh area equals the regular 64-gon area exactly, which sits
        // (2π/64)²/6 relatively below π.
        let polygon = 0.5 * 64.0 * (std::f64::consts::TAU / 64.0).sin();
        assert!((report.total_area - polygon).abs() < 1e-12);
        let deficit = (std::f64::consts::TAU / 64.0).powi(2) / 6.0;
        assert!((report.total_area - PI).abs() < 1.1 * PI * deficit);
    }

    #[test]
    fn annulus_mesh_topology() {
        let annulus = AnnularDomain::annulus(1.0, 2.0, 8).unwrap();
        let mesh = mesh_domain(&annulus, 64, 8).unwrap();
        let report = validate_mesh(&mesh);
        assert_eq!(report.euler_characteristic, 0);
        assert_eq!(report.boundary_component_count, 2);
        assert_eq!(report.boundary_lengths.len(), 2);
        // Mesh area equals the polygon area of the refined domain exactly.
        let refined = annulus.refined(64).unwrap();
        assert!((report.total_area - refined.area()).abs() < 1e-12 * report.total_area);
    }

    #[test]
    fn mesh_resolution_checks() {
        let annulus = AnnularDomain::annulus(1.0, 2.0, 8).unwrap();
        assert!(matches!(
            mesh_domain(&annulus, 60, 8),
            Err(Error::ResolutionMismatch(_))
        ));
        assert!(matches!(
            mesh_domain(&annulus, 64, 1),
            Err(Error::ResolutionMismatch(_))
        ));
    }

    #[test]
    fn mesh_dump_format() {
        let disk = AnnularDomain::disk(1.0, 8).unwrap();
        let mesh = mesh_domain(&disk, 8, 2).unwrap();
        let text = mesh_to_text(&mesh);
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), format!("nodes {}", mesh.nodes.len()));
        let body: Vec<&str> = text.lines().collect();
        let tri_header = body
            .iter()
            .position(|l| l.starts_with("triangles "))
            .unwrap();
        assert_eq!(body[tri_header], format!("triangles {}", mesh.triangles.len()));
        let be_header = body
            .iter()
            .position(|l| l.starts_with("boundary_edges "))
            .unwrap();
        assert_eq!(
            body[be_header],
            format!("boundary_edges {}", mesh.boundary_edges.len())
        );
        // Boundary edge lines carry the tag and both parameter values.
        let sample = body[be_header + 1];
        assert!(sample.split_whitespace().count() == 5);
        assert!(sample.contains("outer"));
        // The closing edge ends at θ = 2π, not 0.
        let last = body.last().unwrap();
        let theta_j: f64 = last.split_whitespace().last().unwrap().parse().unwrap();
        assert!((theta_j - std::f64::consts::TAU).abs() < 1e-15);
    }
}
