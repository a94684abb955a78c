//! Closed-form reference spectra for the weighted Steklov problem
//!
//! ```text
//! Δu = 0 in Ω,    ∂u/∂ν = σ β u on ∂Ω,
//! ```
//!
//! on the three geometries where separation of variables works: the unit
//! disk, the circular annulus r < ρ < R with a constant weight on each
//! circle, and the flat cylinder [−T, T] × S¹. These provide ground truth
//! for the finite-element pipeline and the convergence targets.
//!
//! The critical-catenoid constants are derived from the unique root t₁ of
//! coth t = t. At T = t₁ the cylinder modes 1/T and tanh(T) coincide, the
//! first normalised eigenvalue saturates at 4π/t₁ ≈ 10.4748, and the
//! conformally equivalent annulus has radius ratio R/r = e^{2t₁} ≈ 11.016.

use crate::error::{Error, Result};

/// Constants of the critical catenoid, all derived from the root of coth t = t.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatenoidConstants {
    /// Unique positive root of coth t = t (equivalently t·tanh t = 1).
    pub t1: f64,
    /// Saturation value of the first normalised eigenvalue, 4π/t₁.
    pub target: f64,
    /// Radius ratio e^{2t₁} of the conformally equivalent annulus.
    pub radius_ratio: f64,
}

fn coth(t: f64) -> f64 {
    1.0 / t.tanh()
}

/// Solves coth t = t by bisection on [1, 2] to an interval width of 1e−13.
///
/// h(t) = coth t − t is strictly decreasing on [1, 2] with h(1) > 0 > h(2),
/// so plain bisection is safe and fully deterministic.
pub fn solve_t1() -> CatenoidConstants {
    let mut lo = 1.0_f64;
    let mut hi = 2.0_f64;
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if coth(mid) - mid > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t1 = 0.5 * (lo + hi);
    CatenoidConstants {
        t1,
        target: 4.0 * std::f64::consts::PI / t1,
        radius_ratio: (2.0 * t1).exp(),
    }
}

/// Steklov eigenvalues of the unit disk with β ≡ 1: σ_k = ceil(k/2),
/// i.e. 0, 1, 1, 2, 2, 3, 3, … (each positive value is a cos/sin pair).
pub fn disk_spectrum(k_max: usize) -> Vec<f64> {
    (0..=k_max).map(|k| k.div_ceil(2) as f64).collect()
}

/// Both roots of the mode-k boundary-condition determinant on the annulus.
///
/// Substituting u = (a ρ^k + b ρ^{−k})·(cos kθ or sin kθ) into the two
/// boundary conditions (outward normal is −∂_ρ at ρ = r and +∂_ρ at ρ = R)
/// gives a 2×2 homogeneous system in (a, b). A nontrivial solution exists
/// iff its determinant vanishes, which is a quadratic A σ² + B σ + C = 0
/// with
///     A = β_in β_out q,
///     B = −k [ β_in (R^{k−1} r^{−k} + R^{−k−1} r^k)
///            + β_out (R^k r^{−k−1} + R^{−k} r^{k−1}) ],
///     C = k² q / (R r),
/// where q = (R/r)^k − (r/R)^k > 0. Both roots are real and positive
/// (the discrete pencil behind them is symmetric), and they appear in the
/// spectrum with multiplicity 2 each.
fn annulus_mode_roots(r: f64, big_r: f64, beta_in: f64, beta_out: f64, k: usize) -> (f64, f64) {
    let kf = k as f64;
    let ratio = big_r / r;
    let q = ratio.powi(k as i32) - ratio.powi(-(k as i32));
    let a = beta_in * beta_out * q;
    let b = -kf
        * (beta_in * (big_r.powi(k as i32 - 1) * r.powi(-(k as i32))
            + big_r.powi(-(k as i32) - 1) * r.powi(k as i32))
            + beta_out
                * (big_r.powi(k as i32) * r.powi(-(k as i32) - 1)
                    + big_r.powi(-(k as i32)) * r.powi(k as i32 - 1)));
    let c = kf * kf * q / (big_r * r);
    let disc = (b * b - 4.0 * a * c).max(0.0);
    let sq = disc.sqrt();
    // -b > 0, so -b + sq is well conditioned; get the small root from the product.
    let big = (-b + sq) / (2.0 * a);
    let small = c / (a * big);
    (small, big)
}

/// Steklov spectrum of the annulus r < ρ < R with constant weight β_in on
/// the inner circle and β_out on the outer circle. Returns the first
/// k_max + 1 eigenvalues, ascending.
///
/// Mode k = 0 uses u = a + b·log ρ, contributing σ = 0 and the positive root
/// σ = (β_out/r + β_in/R) / (β_in β_out log(R/r)); every mode k ≥ 1
/// contributes its two quadratic roots with multiplicity 2. Per-mode
/// smallest roots increase with k, so the scan stops once the candidate
/// (k_max+1)-th value is at or below the next mode's smaller root; the loop
/// still verifies this defensively instead of assuming it.
pub fn annulus_spectrum(
    r: f64,
    big_r: f64,
    beta_in: f64,
    beta_out: f64,
    k_max: usize,
) -> Result<Vec<f64>> {
    if !(r > 0.0 && big_r > r) {
        return Err(Error::BadRadii(format!(
            "need 0 < r < R, got r={r}, R={big_r}"
        )));
    }
    if beta_in < 1.0 {
        return Err(Error::BetaBelowOne(beta_in));
    }
    if beta_out < 1.0 {
        return Err(Error::BetaBelowOne(beta_out));
    }

    let k0_positive = (beta_out / r + beta_in / big_r) / (beta_in * beta_out * (big_r / r).ln());
    let mut values = vec![0.0, k0_positive];

    let needed = k_max + 1;
    let mut k = 1;
    loop {
        let (small, big) = annulus_mode_roots(r, big_r, beta_in, beta_out, k);
        values.extend_from_slice(&[small, small, big, big]);

        values.sort_by(|x, y| x.total_cmp(y));
        let (next_small, _) = annulus_mode_roots(r, big_r, beta_in, beta_out, k + 1);
        if values.len() >= needed && values[needed - 1] <= next_small {
            break;
        }
        k += 1;
        if k > 4 * k_max + 64 {
            return Err(Error::ConvergenceFailure(format!(
                "annulus mode scan did not settle after {k} modes"
            )));
        }
    }
    values.truncate(needed);
    Ok(values)
}

/// Steklov spectrum of the flat cylinder [−T, T] × S¹ with β ≡ 1.
///
/// Harmonic functions separate as (cosh kt or sinh kt)·(cos kθ or sin kθ),
/// giving eigenvalues {0, 1/T} ∪ {k·tanh(kT), k·coth(kT) : k ≥ 1} with the
/// k ≥ 1 values doubled. Returns the first k_max + 1, ascending.
pub fn cylinder_spectrum(t: f64, k_max: usize) -> Result<Vec<f64>> {
    if t <= 0.0 {
        return Err(Error::BadRadii(format!("cylinder half-length must be positive, got {t}")));
    }
    let needed = k_max + 1;
    let mut values = vec![0.0, 1.0 / t];
    let mut k = 1_usize;
    loop {
        let kf = k as f64;
        let even = kf * (kf * t).tanh();
        let odd = kf * coth(kf * t);
        values.extend_from_slice(&[even, even, odd, odd]);

        values.sort_by(|x, y| x.total_cmp(y));
        let next_small = (kf + 1.0) * ((kf + 1.0) * t).tanh();
        if values.len() >= needed && values[needed - 1] <= next_small {
            break;
        }
        k += 1;
        if k > 4 * k_max + 64 {
            return Err(Error::ConvergenceFailure(format!(
                "cylinder mode scan did not settle after {k} modes"
            )));
        }
    }
    values.truncate(needed);
    Ok(values)
}
