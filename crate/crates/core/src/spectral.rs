//! Lowest eigenvalue of `H_a - φ` on the circle, where
//! `H_a = -(d/ds + ia)²`, and the two consequences of the sharp constant:
//! the Keller-Lieb-Thirring bound `λ₁(H_a - φ) ≥ -α_{a,p}(‖φ‖_q)` and the
//! Hardy constant `τ`.
//!
//! In the basis `e^{iks}`, `|k| ≤ K`, the operator is the Hermitian matrix
//! `(a+k)² δ_{jk} - φ̂(j-k)`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::circle::{fourier, lp_norm, resample, RealFunction};
use crate::error::{Error, Result};
use crate::forms::ProblemParams;
use crate::shooting::{alpha_inverse_with, mu, solve_branch, ShootingConfig};

/// Starting cutoff for [`lambda1_converged`].
pub const DEFAULT_CUTOFF: usize = 128;
/// Largest cutoff tried before giving up (a 1025 × 1025 dense eigensolve).
pub const MAX_CUTOFF: usize = 512;
/// Change in `λ₁` under doubling of `K` accepted as converged.
pub const CUTOFF_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct PotentialOperator {
    pub a: f64,
    pub cutoff: usize,
    /// Row/column `i` is the mode `k = i - K`.
    pub matrix: DMatrix<Complex64>,
}

impl PotentialOperator {
    /// `max |M - M*|`.
    pub fn hermitian_defect(&self) -> f64 {
        let m = &self.matrix;
        let n = m.nrows();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn lowest_eigenvalue(&self) -> f64 {
        self.matrix
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

/// `φ̂(m)` for `|m| ≤ 2K`, resampling `φ` by trigonometric interpolation if
/// its grid is too coarse to list them without aliasing.
fn potential_coefficients(phi: &RealFunction, cutoff: usize) -> Result<Vec<Complex64>> {
    let need = 4 * cutoff + 1;
    let mut n = phi.len();
    while n < need {
        n *= 2;
    }
    let fine = if n == phi.len() { phi.clone() } else { resample(phi, n)? };
    Ok(fourier(&fine, 2 * cutoff)?.coeffs().to_vec())
}

/// Galerkin matrix of `H_a - φ` on the modes `|k| ≤ K`.
pub fn assemble(a: f64, phi: &RealFunction, cutoff: usize) -> Result<PotentialOperator> {
    if !a.is_finite() {
        return Err(Error::InvalidParams(format!("flux must be finite, got {a}")));
    }
    if 2 * cutoff + 1 > phi.len() {
        return Err(Error::InvalidInput(format!(
            "cutoff {cutoff} needs at least {} samples of the potential, got {}",
            2 * cutoff + 1,
            phi.len()
        )));
    }
    let coeffs = potential_coefficients(phi, cutoff)?;
    let k_max = cutoff as i64;
    let dim = 2 * cutoff + 1;
    let matrix = DMatrix::from_fn(dim, dim, |i, j| {
        // φ̂(j - k) with j the row mode and k the column mode.
        let diff = i as i64 - j as i64;
        let mut entry = -coeffs[(diff + 2 * k_max) as usize];
        if i == j {
            let w = a + (i as i64 - k_max) as f64;
            entry += w * w;
        }
        entry
    });
    Ok(PotentialOperator { a, cutoff, matrix })
}

/// `λ₁` at a fixed cutoff.
pub fn lambda1(a: f64, phi: &RealFunction, cutoff: usize) -> Result<f64> {
    Ok(assemble(a, phi, cutoff)?.lowest_eigenvalue())
}

/// `λ₁` with `K` doubled from [`DEFAULT_CUTOFF`] (or the largest cutoff the
/// grid supports, if smaller) until it moves by at most [`CUTOFF_TOL`].
/// Returns the value and the cutoff that produced it.
pub fn lambda1_converged(a: f64, phi: &RealFunction) -> Result<(f64, usize)> {
    let mut k = DEFAULT_CUTOFF.min((phi.len() - 1) / 2);
    let mut prev = lambda1(a, phi, k)?;
    let fine = resample(phi, (4 * MAX_CUTOFF + 2).next_power_of_two().max(phi.len()))?;
    while k < MAX_CUTOFF {
        k = (2 * k).min(MAX_CUTOFF);
        let next = lambda1(a, &fine, k)?;
        if (next - prev).abs() <= CUTOFF_TOL {
            return Ok((next, k));
        }
        prev = next;
    }
    Err(Error::NotConverged(format!(
        "lowest eigenvalue still moving at cutoff {MAX_CUTOFF}"
    )))
}

fn check_potential(phi: &RealFunction) -> Result<()> {
    if let Some(j) = phi.values().iter().position(|&v| v < 0.0) {
        return Err(Error::InvalidInput(format!(
            "potential must be non-negative, negative at node {j}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KltReport {
    pub lambda1: f64,
    /// `-α_{a,p}(‖φ‖_q)`.
    pub bound: f64,
    /// `lambda1 - bound`; the inequality says this is non-negative.
    pub margin: f64,
    pub q_norm: f64,
    /// Whether `4a² + ‖φ‖_q(p-2) ≤ 1`, where constants attain the bound.
    pub closed_form_regime: bool,
    pub cutoff: usize,
}

impl KltReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.margin >= -tol
    }
}

/// Evaluates both sides of the Keller-Lieb-Thirring inequality for `φ ≥ 0`.
/// A negative margin is reported, not raised.
pub fn klt_check(params: &ProblemParams, phi: &RealFunction) -> Result<KltReport> {
    klt_check_with(params, phi, &ShootingConfig::default())
}

pub fn klt_check_with(
    params: &ProblemParams,
    phi: &RealFunction,
    cfg: &ShootingConfig,
) -> Result<KltReport> {
    check_potential(phi)?;
    let (a, p) = (params.a(), params.p());
    let q_norm = lp_norm(phi, params.q())?;
    let bound = -alpha_inverse_with(a, p, q_norm, cfg)?;
    let (lambda1, cutoff) = lambda1_converged(a, phi)?;
    Ok(KltReport {
        lambda1,
        bound,
        margin: lambda1 - bound,
        q_norm,
        closed_form_regime: 4.0 * a * a + q_norm * (p - 2.0) <= 1.0,
        cutoff,
    })
}

/// Candidate extremal potential `φ = μ u^{p-2} / ‖u‖_p^{p-2}` built from the
/// optimal profile `u = |ψ|` at `params`.
///
/// The Euler-Lagrange equation reads `(H_a - φ)ψ = -αψ` with this `φ`, and
/// `‖φ‖_q = μ_{a,p}(α)`, so `λ₁(H_a - φ) ≤ -α = -α_{a,p}(‖φ‖_q)`: the
/// Keller-Lieb-Thirring margin of the result is zero up to discretization.
/// Past the bifurcation this `φ` is non-constant.
pub fn extremal_potential(params: &ProblemParams) -> Result<RealFunction> {
    let branch = solve_branch(params)?;
    let p = params.p();
    let scale = branch.mu / lp_norm(&branch.profile, p)?.powf(p - 2.0);
    branch.profile.map(|u| scale * u.powf(p - 2.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardyReport {
    pub tau: f64,
    pub q_norm: f64,
    /// `μ_{a,p}(0)`; `τ‖φ‖_q` equals it.
    pub mu_at_zero: f64,
    /// Whether `4a² + ‖φ‖_q(p-2) ≤ 1`.
    pub closed_form_regime: bool,
    /// `a² / ‖φ‖_q`.
    pub closed_form_value: f64,
}

/// Root `τ` of `α_{a,p}(τ‖φ‖_q) = 0`.
///
/// Since `α_{a,p}` inverts `α ↦ μ_{a,p}(α)`, the root is `τ‖φ‖_q = μ_{a,p}(0)`,
/// so a single solve at `α = 0` gives it; callers can confirm the root with
/// [`crate::shooting::alpha_inverse`]. For `a = 0` the root is `τ = 0`.
pub fn hardy_tau(params: &ProblemParams, phi: &RealFunction) -> Result<HardyReport> {
    check_potential(phi)?;
    let (a, p) = (params.a(), params.p());
    let q_norm = lp_norm(phi, params.q())?;
    if !(q_norm > 0.0) {
        return Err(Error::InvalidInput("potential has zero L^q norm".into()));
    }
    let mu_at_zero = if a == 0.0 { 0.0 } else { mu(&ProblemParams::new(a, p, 0.0)?)? };
    Ok(HardyReport {
        tau: mu_at_zero / q_norm,
        q_norm,
        mu_at_zero,
        closed_form_regime: 4.0 * a * a + q_norm * (p - 2.0) <= 1.0,
        closed_form_value: a * a / q_norm,
    })
}
