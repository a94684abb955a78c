//! Banded symmetric positive definite solves.
//!
//! The interior stiffness block of a structured ring-major mesh has small
//! bandwidth (one ring of nodes plus the wrap-around), so its Cholesky
//! factor fits in band storage and factorizes in O(n·b²) time instead of
//! the O(n³) of a dense factorization. Only the lower triangle is stored,
//! column-major: column j occupies the slice [j·(b+1), (j+1)·(b+1)) and
//! holds rows j through j+b, zero-padded past the matrix edge.
//!
//! Forward substitution runs column-oriented so memory access stays
//! contiguous, and it can start at the first nonzero row of the right-hand
//! side, which makes solves against sparse columns supported near the end
//! of the index range nearly free.

use crate::error::{Error, Result};

/// Symmetric matrix in lower band storage.
#[derive(Debug, Clone)]
pub struct BandMatrix {
    n: usize,
    bandwidth: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, bandwidth: usize) -> Self {
        Self {
            n,
            bandwidth,
            data: vec![0.0; n * (bandwidth + 1)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    /// Adds v at (i, j), given in either triangle; entries outside the band
    /// are a programming error.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let (row, col) = if i >= j { (i, j) } else { (j, i) };
        let k = row - col;
        assert!(k <= self.bandwidth, "entry ({i}, {j}) outside band {}", self.bandwidth);
        self.data[col * (self.bandwidth + 1) + k] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (row, col) = if i >= j { (i, j) } else { (j, i) };
        let k = row - col;
        if k > self.bandwidth || row >= self.n {
            0.0
        } else {
            self.data[col * (self.bandwidth + 1) + k]
        }
    }

    /// In-place band Cholesky A = L Lᵀ.
    pub fn cholesky(mut self) -> Result<BandCholesky> {
        let n = self.n;
        let b = self.bandwidth;
        let w = b + 1;
        let data = &mut self.data;
        for j in 0..n {
            let maxk = b.min(n - 1 - j);
            let d = data[j * w];
            if !d.is_finite() || d <= 0.0 {
                return Err(Error::NotPositiveDefinite(format!(
                    "pivot {d} at column {j} of {n}"
                )));
            }
            let l = d.sqrt();
            data[j * w] = l;
            let inv = 1.0 / l;
            for k in 1..=maxk {
                data[j * w + k] *= inv;
            }
            for t in 1..=maxk {
                let ljt = data[j * w + t];
                if ljt == 0.0 {
                    continue;
                }
                let (head, tail) = data.split_at_mut((j + t) * w);
                let src = &head[j * w + t..j * w + maxk + 1];
                let dst = &mut tail[..maxk + 1 - t];
                for (d_entry, s_entry) in dst.iter_mut().zip(src) {
                    *d_entry -= ljt * *s_entry;
                }
            }
        }
        Ok(BandCholesky {
            n,
            bandwidth: b,
            data: self.data,
        })
    }
}

/// Lower band Cholesky factor.
#[derive(Debug, Clone)]
pub struct BandCholesky {
    n: usize,
    bandwidth: usize,
    data: Vec<f64>,
}

impl BandCholesky {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Solves L x = rhs in place when rhs[..start] is zero; the solution is
    /// then also zero on that range.
    pub fn solve_lower_from(&self, rhs: &mut [f64], start: usize) {
        let w = self.bandwidth + 1;
        for j in start..self.n {
            let xj = rhs[j] / self.data[j * w];
            rhs[j] = xj;
            if xj == 0.0 {
                continue;
            }
            let maxk = self.bandwidth.min(self.n - 1 - j);
            let col = &self.data[j * w + 1..j * w + maxk + 1];
            let out = &mut rhs[j + 1..j + maxk + 1];
            for (o, c) in out.iter_mut().zip(col) {
                *o -= xj * *c;
            }
        }
    }

    pub fn solve_lower(&self, rhs: &mut [f64]) {
        self.solve_lower_from(rhs, 0);
    }

    /// Solves Lᵀ x = rhs in place.
    pub fn solve_transpose(&self, rhs: &mut [f64]) {
        let w = self.bandwidth + 1;
        for j in (0..self.n).rev() {
            let maxk = self.bandwidth.min(self.n - 1 - j);
            let col = &self.data[j * w + 1..j * w + maxk + 1];
            let mut acc = rhs[j];
            for (c, r) in col.iter().zip(&rhs[j + 1..j + maxk + 1]) {
                acc -= *c * *r;
            }
            rhs[j] = acc / self.data[j * w];
        }
    }

    /// Solves A x = rhs in place.
    pub fn solve(&self, rhs: &mut [f64]) {
        self.solve_lower(rhs);
        self.solve_transpose(rhs);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    struct Lcg(u64);

    impl Lcg {
        fn next_f64(&mut self) -> f64 {
            self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (self.0 >> 11) as f64 / (1u64 << 53) as f64
        }
    }

    fn random_spd_band(n: usize, b: usize, seed: u64) -> BandMatrix {
        let mut rng = Lcg(seed);
        let mut m = BandMatrix::zeros(n, b);
        let mut row_sums = vec![0.0_f64; n];
        for j in 0..n {
            for i in j + 1..=(j + b).min(n - 1) {
                let v = 2.0 * rng.next_f64() - 1.0;
                m.add(i, j, v);
                row_sums[i] += v.abs();
                row_sums[j] += v.abs();
            }
        }
        for (i, s) in row_sums.iter().enumerate() {
            m.add(i, i, s + 1.0 + rng.next_f64());
        }
        m
    }

    fn to_dense(m: &BandMatrix) -> DMatrix<f64> {
        DMatrix::from_fn(m.n(), m.n(), |i, j| m.get(i, j))
    }

    #[test]
    fn factor_matches_dense_cholesky() {
        for (n, b, seed) in [(12, 3, 7), (40, 5, 11), (60, 1, 3), (25, 24, 5)] {
            let band = random_spd_band(n, b, seed);
            let dense = to_dense(&band);
            let expect = nalgebra::Cholesky::new(dense.clone()).unwrap();
            let got = band.cholesky().unwrap();
            let el = expect.l();
            for j in 0..n {
                for i in j..(j + b + 1).min(n) {
                    let g = got.data[j * (b + 1) + (i - j)];
                    assert!(
                        (g - el[(i, j)]).abs() < 1e-10 * (1.0 + el[(i, j)].abs()),
                        "L[{i}][{j}] band {g} vs dense {}",
                        el[(i, j)]
                    );
                }
            }
        }
    }

    #[test]
    fn solve_matches_dense() {
        let band = random_spd_band(50, 4, 99);
        let dense = to_dense(&band);
        let mut rng = Lcg(123);
        let rhs: Vec<f64> = (0..50).map(|_| rng.next_f64() - 0.5).collect();
        let expect = nalgebra::Cholesky::new(dense)
            .unwrap()
            .solve(&nalgebra::DVector::from_column_slice(&rhs));
        let chol = band.cholesky().unwrap();
        let mut x = rhs.clone();
        chol.solve(&mut x);
        for i in 0..50 {
            assert!((x[i] - expect[i]).abs() < 1e-10, "x[{i}]");
        }
    }

    #[test]
    fn forward_solve_with_start_skips_leading_zeros() {
        let band = random_spd_band(64, 6, 42);
        let chol = band.cholesky().unwrap();
        let mut full = vec![0.0; 64];
        for (i, slot) in full.iter_mut().enumerate().skip(50) {
            *slot = (i as f64).sin();
        }
        let mut skipped = full.clone();
        chol.solve_lower(&mut full);
        chol.solve_lower_from(&mut skipped, 50);
        assert_eq!(full, skipped);
        // Leading entries stay exactly zero.
        assert!(full[..50].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn indefinite_matrix_rejected() {
        let mut m = BandMatrix::zeros(4, 1);
        m.add(0, 0, 1.0);
        m.add(1, 1, -2.0);
        m.add(2, 2, 1.0);
        m.add(3, 3, 1.0);
        assert!(matches!(
            m.cholesky(),
            Err(Error::NotPositiveDefinite(_))
        ));
    }
}
