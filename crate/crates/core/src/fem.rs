//! P1 finite elements for the weighted spectral boundary problem.
//!
//! On a triangulated domain the harmonic extension turns the boundary
//! problem into a generalized matrix pencil: with K the full stiffness
//! matrix and M the boundary mass matrix weighted by β, eigenpairs satisfy
//! K u = σ M u where M is supported on boundary nodes only. Eliminating the
//! interior block by a Schur complement gives the discrete
//! Dirichlet-to-Neumann operator S = K_BB − K_BI K_II⁻¹ K_IB acting on
//! boundary values alone, and the reduced pencil S v = σ M_B v has the same
//! finite eigenvalues. The interior solve uses the band Cholesky from
//! [`crate::linalg`]; ring-major node ordering keeps the interior bandwidth
//! at one ring of nodes.
//!
//! Stiffness entries are the exact P1 integrals K_ij = (e_i · e_j)/(4A)
//! with e_i the edge vector opposite vertex i. Boundary mass entries
//! integrate β against products of the two hat functions on each boundary
//! edge, splitting the edge at density breakpoints so piecewise-linear
//! densities are integrated exactly (two-point Gauss per linear piece).
//! The zero eigenvalue of S (constants) is floored to exactly 0 when it
//! comes out as roundoff-negative; anything more negative is left alone so
//! genuine failures stay visible.

use crate::density::{weighted_boundary_length, BoundaryDensity, ComponentDensity};
use crate::error::{Error, Result};
use crate::geometry::{mesh_domain, AnnularDomain, BoundaryComponent, TriMesh};
use crate::linalg::BandMatrix;
use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};

/// Symmetric sparse matrix in compressed row storage. Both triangles are
/// stored so rows can be scanned directly.
#[derive(Debug, Clone)]
pub struct SparseSym {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseSym {
    /// Builds from (row, col, value) triplets, summing duplicates.
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, f64)>) -> Self {
        triplets.sort_unstable_by_key(|t| (t.0, t.1));
        let mut row_counts = vec![0usize; n + 1];
        let mut col_idx: Vec<usize> = Vec::new();
        let mut values: Vec<f64> = Vec::new();
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(c);
                values.push(v);
                row_counts[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..n {
            row_counts[i + 1] += row_counts[i];
        }
        Self {
            n,
            row_ptr: row_counts,
            col_idx,
            values,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let lo = self.row_ptr[i];
        let hi = self.row_ptr[i + 1];
        self.col_idx[lo..hi]
            .iter()
            .copied()
            .zip(self.values[lo..hi].iter().copied())
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (i, slot) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (j, v) in self.row(i) {
                acc += v * x[j];
            }
            *slot = acc;
        }
        out
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                out[(i, j)] += v;
            }
        }
        out
    }
}

/// Stiffness and weighted boundary mass of one mesh.
#[derive(Debug, Clone)]
pub struct AssembledSystem {
    pub stiffness: SparseSym,
    /// Boundary mass on boundary nodes, ordered as `boundary_nodes`.
    pub boundary_mass: DMatrix<f64>,
    /// Sorted node indices lying on the boundary.
    pub boundary_nodes: Vec<usize>,
    pub n_nodes: usize,
}

const GAUSS2: [f64; 2] = [-0.577_350_269_189_625_8, 0.577_350_269_189_625_8];

/// Local boundary mass block of one edge of length h, the i-th of n edges
/// on its component, against the hat functions of its two endpoints.
fn edge_mass_block(beta: &ComponentDensity, i: usize, n: usize, h: f64) -> [[f64; 2]; 2] {
    let m = match beta {
        ComponentDensity::Constant(_) => 1,
        ComponentDensity::Samples(v) => v.len(),
    };
    let den = n * m;
    let start = (i % n) * m;
    let end = start + m;
    let mut block = [[0.0; 2]; 2];
    let mut p = start;
    while p < end {
        let q = ((p / n + 1) * n).min(end);
        let ua = (p - start) as f64 / m as f64;
        let ub = (q - start) as f64 / m as f64;
        let ba = beta.value_at_fraction(p, den);
        let bb = beta.value_at_fraction(q, den);
        let mid = 0.5 * (ua + ub);
        let half = 0.5 * (ub - ua);
        for g in GAUSS2 {
            let u = mid + g * half;
            let bu = ba + (bb - ba) * (u - ua) / (ub - ua);
            let phi = [1.0 - u, u];
            for r in 0..2 {
                for c in 0..2 {
                    block[r][c] += half * bu * phi[r] * phi[c];
                }
            }
        }
        p = q;
    }
    for row in &mut block {
        for entry in row {
            *entry *= h;
        }
    }
    block
}

/// Assembles the P1 stiffness matrix and the β-weighted boundary mass.
pub fn assemble(mesh: &TriMesh, density: &BoundaryDensity) -> Result<AssembledSystem> {
    let mesh_has_inner = mesh
        .boundary_edges
        .iter()
        .any(|e| e.component == BoundaryComponent::Inner);
    if mesh_has_inner != density.inner().is_some() {
        return Err(Error::ComponentMismatch(format!(
            "mesh inner boundary present: {mesh_has_inner}, density inner component present: {}",
            density.inner().is_some()
        )));
    }

    let n = mesh.nodes.len();
    let mut triplets = Vec::with_capacity(9 * mesh.triangles.len());
    for (idx, tri) in mesh.triangles.iter().enumerate() {
        let p = [mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]]];
        let e = [
            [p[2][0] - p[1][0], p[2][1] - p[1][1]],
            [p[0][0] - p[2][0], p[0][1] - p[2][1]],
            [p[1][0] - p[0][0], p[1][1] - p[0][1]],
        ];
        let area = 0.5 * (e[2][0] * (-e[1][1]) - e[2][1] * (-e[1][0]));
        if !area.is_finite() || area <= 0.0 {
            return Err(Error::DegenerateTriangle { index: idx, area });
        }
        let scale = 1.0 / (4.0 * area);
        for r in 0..3 {
            for c in 0..3 {
                triplets.push((tri[r], tri[c], scale * (e[r][0] * e[c][0] + e[r][1] * e[c][1])));
            }
        }
    }
    let stiffness = SparseSym::from_triplets(n, triplets);

    let mut boundary_nodes: Vec<usize> = mesh
        .boundary_edges
        .iter()
        .flat_map(|e| e.nodes)
        .collect();
    boundary_nodes.sort_unstable();
    boundary_nodes.dedup();
    let mut bpos = vec![usize::MAX; n];
    for (k, &b) in boundary_nodes.iter().enumerate() {
        bpos[b] = k;
    }

    let edges_per_component = |component: BoundaryComponent| {
        mesh.boundary_edges
            .iter()
            .filter(|e| e.component == component)
            .count()
    };
    let n_inner_edges = edges_per_component(BoundaryComponent::Inner);
    let n_outer_edges = edges_per_component(BoundaryComponent::Outer);

    let m = boundary_nodes.len();
    let mut boundary_mass = DMatrix::zeros(m, m);
    let mut counters = [0usize; 2];
    for edge in &mesh.boundary_edges {
        let (edge_count, counter_slot) = match edge.component {
            BoundaryComponent::Inner => (n_inner_edges, 0),
            BoundaryComponent::Outer => (n_outer_edges, 1),
        };
        let i_edge = counters[counter_slot];
        counters[counter_slot] += 1;
        let beta = density.component(edge.component)?;
        let a = mesh.nodes[edge.nodes[0]];
        let b = mesh.nodes[edge.nodes[1]];
        let h = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
        let block = edge_mass_block(beta, i_edge, edge_count, h);
        let pa = bpos[edge.nodes[0]];
        let pb = bpos[edge.nodes[1]];
        boundary_mass[(pa, pa)] += block[0][0];
        boundary_mass[(pa, pb)] += block[0][1];
        boundary_mass[(pb, pa)] += block[1][0];
        boundary_mass[(pb, pb)] += block[1][1];
    }

    Ok(AssembledSystem {
        stiffness,
        boundary_mass,
        boundary_nodes,
        n_nodes: n,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 4];
    let mut ca = a.chunks_exact(4);
    let mut cb = b.chunks_exact(4);
    for (xa, xb) in (&mut ca).zip(&mut cb) {
        acc[0] += xa[0] * xb[0];
        acc[1] += xa[1] * xb[1];
        acc[2] += xa[2] * xb[2];
        acc[3] += xa[3] * xb[3];
    }
    let mut tail = 0.0;
    for (x, y) in ca.remainder().iter().zip(cb.remainder()) {
        tail += x * y;
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

/// Reduces the assembled pencil to the boundary: S = K_BB − K_BI K_II⁻¹ K_IB.
///
/// The interior block is factored with a band Cholesky; each boundary
/// column is forward-substituted only (never back-substituted), and the
/// correction K_BI K_II⁻¹ K_IB = ZᵀZ is built from the resulting columns,
/// whose leading zeros are skipped. The upper triangle is computed and
/// mirrored, so the result is exactly symmetric.
pub fn dtn_matrix(system: &AssembledSystem) -> Result<DMatrix<f64>> {
    let n = system.n_nodes;
    let bnodes = &system.boundary_nodes;
    let m = bnodes.len();
    let mut is_boundary = vec![false; n];
    for &b in bnodes {
        is_boundary[b] = true;
    }
    let interior: Vec<usize> = (0..n).filter(|&i| !is_boundary[i]).collect();
    let ni = interior.len();

    let mut bpos = vec![usize::MAX; n];
    for (k, &b) in bnodes.iter().enumerate() {
        bpos[b] = k;
    }
    let mut s = DMatrix::zeros(m, m);
    for &b in bnodes {
        for (j, v) in system.stiffness.row(b) {
            if is_boundary[j] {
                s[(bpos[b], bpos[j])] += v;
            }
        }
    }
    if ni == 0 {
        return Ok(s);
    }

    let mut ipos = vec![usize::MAX; n];
    for (k, &i) in interior.iter().enumerate() {
        ipos[i] = k;
    }
    let mut bandwidth = 0usize;
    for &i in &interior {
        for (j, _) in system.stiffness.row(i) {
            if !is_boundary[j] {
                bandwidth = bandwidth.max(ipos[i].abs_diff(ipos[j]));
            }
        }
    }
    let mut a_ii = BandMatrix::zeros(ni, bandwidth);
    for &i in &interior {
        for (j, v) in system.stiffness.row(i) {
            if !is_boundary[j] && ipos[j] <= ipos[i] {
                a_ii.add(ipos[i], ipos[j], v);
            }
        }
    }
    let chol = a_ii
        .cholesky()
        .map_err(|e| Error::SingularInterior(format!("interior stiffness block: {e}")))?;

    let mut scratch = vec![0.0f64; ni];
    let mut columns: Vec<(usize, Vec<f64>)> = Vec::with_capacity(m);
    for &b in bnodes {
        let mut start = ni;
        for (j, v) in system.stiffness.row(b) {
            if !is_boundary[j] {
                let p = ipos[j];
                scratch[p] = v;
                start = start.min(p);
            }
        }
        if start == ni {
            columns.push((ni, Vec::new()));
            continue;
        }
        chol.solve_lower_from(&mut scratch, start);
        let tail = scratch[start..].to_vec();
        for x in &mut scratch[start..] {
            *x = 0.0;
        }
        columns.push((start, tail));
    }

    for c2 in 0..m {
        let (s2, v2) = &columns[c2];
        for c1 in 0..=c2 {
            let (s1, v1) = &columns[c1];
            let lo = (*s1).max(*s2);
            if lo >= ni {
                continue;
            }
            let correction = dot(&v1[lo - s1..], &v2[lo - s2..]);
            s[(c1, c2)] -= correction;
        }
    }
    for c2 in 0..m {
        for c1 in 0..c2 {
            s[(c2, c1)] = s[(c1, c2)];
        }
    }
    Ok(s)
}

/// Eigenpairs of the reduced pencil S v = σ M v.
#[derive(Debug, Clone)]
pub struct PencilSolution {
    /// Ascending eigenvalues, the first k_max + 1 of them.
    pub values: Vec<f64>,
    /// Matching eigenvectors as columns, in the boundary node ordering.
    pub vectors: DMatrix<f64>,
    /// Largest ‖S v − σ M v‖ / ‖v‖ over the returned pairs.
    pub max_residual: f64,
}

/// Solves the symmetric generalized pencil by a Cholesky congruence:
/// with M = L Lᵀ the problem becomes the ordinary symmetric eigenproblem
/// for C = L⁻¹ S L⁻ᵀ, and eigenvectors pull back through Lᵀ.
pub fn solve_pencil(s: &DMatrix<f64>, mass: &DMatrix<f64>, k_max: usize) -> Result<PencilSolution> {
    assert_eq!(s.nrows(), s.ncols());
    assert_eq!(s.nrows(), mass.nrows());
    let m = s.nrows();
    let chol = Cholesky::new(mass.clone()).ok_or_else(|| {
        Error::NotPositiveDefinite("boundary mass matrix is not positive definite".into())
    })?;
    let l = chol.l();
    let x = l
        .solve_lower_triangular(s)
        .ok_or_else(|| Error::NotPositiveDefinite("singular mass factor".into()))?;
    let xt = x.transpose();
    let mut c = l
        .solve_lower_triangular(&xt)
        .ok_or_else(|| Error::NotPositiveDefinite("singular mass factor".into()))?;
    let ct = c.transpose();
    c = 0.5 * (c + ct);

    let eig = SymmetricEigen::try_new(c, f64::EPSILON, 100 * m.max(30)).ok_or_else(|| {
        Error::ConvergenceFailure(format!("symmetric eigensolver stalled at size {m}"))
    })?;

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let count = (k_max + 1).min(m);
    let lambda_scale = order
        .iter()
        .map(|&i| eig.eigenvalues[i].abs())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);

    let mut values = Vec::with_capacity(count);
    let mut y = DMatrix::zeros(m, count);
    for (k, &i) in order.iter().take(count).enumerate() {
        let mut v = eig.eigenvalues[i];
        if v < 0.0 && v > -1e-9 * lambda_scale {
            v = 0.0;
        }
        values.push(v);
        y.set_column(k, &eig.eigenvectors.column(i));
    }
    let vectors = l.tr_solve_lower_triangular(&y).ok_or_else(|| {
        Error::NotPositiveDefinite("singular mass factor".into())
    })?;

    let mut max_residual = 0.0f64;
    for (k, &value) in values.iter().enumerate().take(count) {
        let v: DVector<f64> = vectors.column(k).clone_owned();
        let r = s * &v - value * (mass * &v);
        let vn = v.norm();
        if vn > 0.0 {
            max_residual = max_residual.max(r.norm() / vn);
        }
    }

    Ok(PencilSolution {
        values,
        vectors,
        max_residual,
    })
}

/// Full spectral result of one resolved run.
#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Eigenvalues σ_0 ≤ σ_1 ≤ … as computed.
    pub raw: Vec<f64>,
    /// Length-normalised eigenvalues σ̄_k = σ_k · ∫_∂Ω β ds.
    pub normalised: Vec<f64>,
    pub weighted_length: f64,
    pub area: f64,
    pub n_nodes: usize,
    pub n_boundary: usize,
    pub max_residual: f64,
    pub k_max: usize,
}

/// End-to-end solve: refine the domain curves to the mesh resolution, mesh,
/// assemble, reduce to the boundary, and solve the pencil. Residuals above
/// 1e−9 of the operator scale fail the run rather than returning bad data.
pub fn steklov_spectrum(
    domain: &AnnularDomain,
    density: &BoundaryDensity,
    n_theta: usize,
    n_radial: usize,
    k_max: usize,
) -> Result<Spectrum> {
    density.matches(domain)?;
    let refined = domain.refined(n_theta)?;
    let mesh = mesh_domain(&refined, n_theta, n_radial)?;
    let system = assemble(&mesh, density)?;
    let s = dtn_matrix(&system)?;
    let s_scale = s.norm();
    let solution = solve_pencil(&s, &system.boundary_mass, k_max)?;
    if solution.max_residual > 1e-9 * s_scale {
        return Err(Error::ConvergenceFailure(format!(
            "residual {} exceeds 1e-9 of the operator scale {}",
            solution.max_residual, s_scale
        )));
    }
    let weighted_length = weighted_boundary_length(&refined, density)?;
    let area = refined.area();
    let normalised = solution.values.iter().map(|v| v * weighted_length).collect();
    Ok(Spectrum {
        raw: solution.values,
        normalised,
        weighted_length,
        area,
        n_nodes: mesh.nodes.len(),
        n_boundary: system.boundary_nodes.len(),
        max_residual: solution.max_residual,
        k_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BoundaryEdge;
    use std::f64::consts::TAU;

    fn unit_triangle_mesh() -> TriMesh {
        TriMesh {
            nodes: vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
            triangles: vec![[0, 1, 2]],
            boundary_edges: vec![
                BoundaryEdge {
                    nodes: [0, 1],
                    component: BoundaryComponent::Outer,
                    thetas: [0.0, TAU / 3.0],
                },
                BoundaryEdge {
                    nodes: [1, 2],
                    component: BoundaryComponent::Outer,
                    thetas: [TAU / 3.0, 2.0 * TAU / 3.0],
                },
                BoundaryEdge {
                    nodes: [2, 0],
                    component: BoundaryComponent::Outer,
                    thetas: [2.0 * TAU / 3.0, TAU],
                },
            ],
            n_theta: 3,
            n_radial: 1,
        }
    }

    fn unit_density() -> BoundaryDensity {
        BoundaryDensity::new(ComponentDensity::Constant(1.0), None).unwrap()
    }

    #[test]
    fn single_triangle_stiffness() {
        let system = assemble(&unit_triangle_mesh(), &unit_density()).unwrap();
        let k = system.stiffness.to_dense();
        let expect = [
            [1.0, -0.5, -0.5],
            [-0.5, 0.5, 0.0],
            [-0.5, 0.0, 0.5],
        ];
        for i in 0..3 {
            for j in 0..3 {
                assert!(
                    (k[(i, j)] - expect[i][j]).abs() < 1e-15,
                    "K[{i}][{j}] = {}",
                    k[(i, j)]
                );
            }
        }
    }

    #[test]
    fn edge_mass_blocks() {
        // Unit edge, β ≡ 1: the classic h/6 · [[2, 1], [1, 2]] block.
        let block = edge_mass_block(&ComponentDensity::Constant(1.0), 0, 4, 1.0);
        assert!((block[0][0] - 1.0 / 3.0).abs() < 1e-15);
        assert!((block[0][1] - 1.0 / 6.0).abs() < 1e-15);
        assert!((block[1][0] - 1.0 / 6.0).abs() < 1e-15);
        assert!((block[1][1] - 1.0 / 3.0).abs() < 1e-15);

        // β linear from 1 to 3 along the edge of a 2-sample density on a
        // 2-edge component: (h/12)[[3β₀+β₁, β₀+β₁], [β₀+β₁, β₀+3β₁]].
        let beta = ComponentDensity::Samples(vec![1.0, 3.0]);
        let block = edge_mass_block(&beta, 0, 2, 1.0);
        assert!((block[0][0] - 6.0 / 12.0).abs() < 1e-15);
        assert!((block[0][1] - 4.0 / 12.0).abs() < 1e-15);
        assert!((block[1][1] - 10.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn boundary_mass_row_sums_give_weighted_length() {
        let annulus = AnnularDomain::annulus(1.0, 2.0, 16).unwrap();
        let density = BoundaryDensity::new(
            ComponentDensity::Samples(vec![1.0, 2.0, 1.5, 2.5]),
            Some(ComponentDensity::Constant(1.3)),
        )
        .unwrap();
        let mesh = mesh_domain(&annulus, 16, 2).unwrap();
        let system = assemble(&mesh, &density).unwrap();
        let ones = DVector::from_element(system.boundary_nodes.len(), 1.0);
        let total = (ones.transpose() * &system.boundary_mass * &ones)[(0, 0)];
        let wl = weighted_boundary_length(&annulus, &density).unwrap();
        assert!((total - wl).abs() < 1e-12 * wl, "mass total {total}, length {wl}");
    }

    #[test]
    fn stiffness_kernel_is_constants() {
        let annulus = AnnularDomain::annulus(1.0, 2.0, 16).unwrap();
        let mesh = mesh_domain(&annulus, 16, 4).unwrap();
        let density = BoundaryDensity::uniform_for(&annulus);
        let system = assemble(&mesh, &density).unwrap();
        let ones = vec![1.0; system.n_nodes];
        let product = system.stiffness.matvec(&ones);
        let scale: f64 = system.stiffness.row(0).map(|(_, v)| v.abs()).sum();
        for (i, r) in product.iter().enumerate() {
            assert!(r.abs() < 1e-12 * scale.max(1.0), "row {i} sum {r}");
        }
    }

    #[test]
    fn assemble_component_mismatch() {
        let annulus = AnnularDomain::annulus(1.0, 2.0, 16).unwrap();
        let mesh = mesh_domain(&annulus, 16, 2).unwrap();
        let disk_density = unit_density();
        assert!(matches!(
            assemble(&mesh, &disk_density),
            Err(Error::ComponentMismatch(_))
        ));
    }

    #[test]
    fn dtn_annihilates_constants_and_is_symmetric() {
        let disk = AnnularDomain::disk(1.0, 16).unwrap();
        let mesh = mesh_domain(&disk, 16, 3).unwrap();
        let system = assemble(&mesh, &unit_density()).unwrap();
        let s = dtn_matrix(&system).unwrap();
        let m = s.nrows();
        assert_eq!(m, 16);
        let ones = DVector::from_element(m, 1.0);
        let residual = (&s * &ones).amax();
        let scale = s.amax();
        assert!(residual < 1e-10 * scale, "S·1 = {residual}, scale {scale}");
        for i in 0..m {
            for j in 0..m {
                assert_eq!(s[(i, j)], s[(j, i)]);
            }
        }
    }

    #[test]
    fn solve_pencil_diagonal_example() {
        let s = DMatrix::from_diagonal(&DVector::from_vec(vec![0.0, 1.0, 2.0]));
        let mass = DMatrix::identity(3, 3);
        let sol = solve_pencil(&s, &mass, 2).unwrap();
        assert_eq!(sol.values.len(), 3);
        assert!((sol.values[0] - 0.0).abs() < 1e-14);
        assert!((sol.values[1] - 1.0).abs() < 1e-14);
        assert!((sol.values[2] - 2.0).abs() < 1e-14);
        assert!(sol.max_residual < 1e-12);
    }

    #[test]
    fn solve_pencil_rejects_indefinite_mass() {
        let s = DMatrix::identity(3, 3);
        let mass = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, -1.0, 1.0]));
        assert!(matches!(
            solve_pencil(&s, &mass, 1),
            Err(Error::NotPositiveDefinite(_))
        ));
    }

    #[test]
    fn coarse_disk_spectrum_is_roughly_integer() {
        let disk = AnnularDomain::disk(1.0, 16).unwrap();
        let density = unit_density();
        let spectrum = steklov_spectrum(&disk, &density, 16, 3, 4).unwrap();
        let expect = [0.0, 1.0, 1.0, 2.0, 2.0];
        assert!(spectrum.raw[0].abs() < 1e-8);
        for (k, &target) in expect.iter().enumerate().skip(1) {
            let rel = (spectrum.raw[k] - target).abs() / target;
            assert!(rel < 0.1, "sigma_{k} = {} vs {target}", spectrum.raw[k]);
        }
    }

    #[test]
    fn disk_spectrum_converges_with_resolution() {
        let disk = AnnularDomain::disk(1.0, 32).unwrap();
        let density = unit_density();
        let oracle = crate::oracle::disk_spectrum(4);
        let mut previous = f64::INFINITY;
        for (nt, nr) in [(32, 4), (64, 8), (128, 16)] {
            let spectrum = steklov_spectrum(&disk, &density, nt, nr, 4).unwrap();
            let err: f64 = (1..5)
                .map(|k| ((spectrum.raw[k] - oracle[k]) / oracle[k]).abs())
                .fold(0.0, f64::max);
            assert!(err < previous, "({nt},{nr}): {err} vs {previous}");
            previous = err;
        }
        assert!(previous < 2e-3, "finest error {previous}");
    }

    #[test]
    fn annulus_spectrum_converges_to_oracle() {
        let annulus = AnnularDomain::annulus(1.0, 2.0, 32).unwrap();
        let density = BoundaryDensity::uniform_for(&annulus);
        let oracle = crate::oracle::annulus_spectrum(1.0, 2.0, 1.0, 1.0, 4).unwrap();
        let mut previous = f64::INFINITY;
        for (nt, nr) in [(32, 4), (64, 8), (128, 16)] {
            let spectrum = steklov_spectrum(&annulus, &density, nt, nr, 4).unwrap();
            let err: f64 = (1..5)
                .map(|k| ((spectrum.raw[k] - oracle[k]) / oracle[k]).abs())
                .fold(0.0, f64::max);
            assert!(err < previous, "({nt},{nr}): {err} vs {previous}");
            previous = err;
        }
        assert!(previous < 2e-3, "finest error {previous}");
    }

    #[test]
    fn dilation_invariance_of_normalised_values() {
        let annulus = AnnularDomain::annulus(1.0, 2.0, 16).unwrap();
        let density = BoundaryDensity::uniform_for(&annulus);
        let base = steklov_spectrum(&annulus, &density, 64, 8, 3).unwrap();
        let scaled_domain = annulus.scaled(3.0).unwrap();
        let scaled = steklov_spectrum(&scaled_domain, &density, 64, 8, 3).unwrap();
        for k in 1..4 {
            let rel = (scaled.normalised[k] - base.normalised[k]).abs() / base.normalised[k];
            assert!(rel < 1e-10, "normalised sigma_{k} drifts by {rel}");
            let raw_rel = (scaled.raw[k] * 3.0 - base.raw[k]).abs() / base.raw[k];
            assert!(raw_rel < 1e-10, "raw sigma_{k} drifts by {raw_rel}");
        }
    }

    #[test]
    fn density_scaling_inverts_eigenvalues() {
        let annulus = AnnularDomain::annulus(1.0, 2.0, 16).unwrap();
        let density = BoundaryDensity::new(
            ComponentDensity::Samples(vec![1.0, 1.5, 2.0, 1.25]),
            Some(ComponentDensity::Constant(1.5)),
        )
        .unwrap();
        let scaled_density = density.scaled(1.7).unwrap();
        let base = steklov_spectrum(&annulus, &density, 64, 8, 3).unwrap();
        let scaled = steklov_spectrum(&annulus, &scaled_density, 64, 8, 3).unwrap();
        for k in 1..4 {
            let rel = (scaled.raw[k] * 1.7 - base.raw[k]).abs() / base.raw[k];
            assert!(rel < 1e-10, "raw sigma_{k} drifts by {rel}");
            let norm_rel = (scaled.normalised[k] - base.normalised[k]).abs() / base.normalised[k];
            assert!(norm_rel < 1e-10, "normalised sigma_{k} drifts by {norm_rel}");
        }
    }
}
