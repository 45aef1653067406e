//! Seeded band-limited test functions.

use num_complex::Complex64;
use rand::Rng;

use crate::circle::{ComplexFunction, Grid, RealFunction};

/// `Σ_{k=0}^{degree} (a_k cos ks + b_k sin ks)` with coefficients uniform in
/// `[-1, 1]` and damped like `1/(1+k)`.
pub fn random_trig<R: Rng>(grid: Grid, rng: &mut R, degree: usize) -> RealFunction {
    let coeffs: Vec<(f64, f64)> = (0..=degree)
        .map(|k| {
            let damp = 1.0 / (1.0 + k as f64);
            (damp * rng.gen_range(-1.0..=1.0), damp * rng.gen_range(-1.0..=1.0))
        })
        .collect();
    grid.sample(|s| {
        coeffs
            .iter()
            .enumerate()
            .map(|(k, (a, b))| a * (k as f64 * s).cos() + b * (k as f64 * s).sin())
            .sum::<f64>()
    })
    .expect("finite samples")
}

/// `0.2 + t²` for a random trigonometric `t` of degree `degree / 2`, so the
/// result has degree at most `degree` and minimum at least `0.2`.
pub fn random_positive<R: Rng>(grid: Grid, rng: &mut R, degree: usize) -> RealFunction {
    let t = random_trig(grid, rng, (degree / 2).max(1));
    t.map(|v| 0.2 + v * v).expect("finite samples")
}

/// Non-negative potential `c · t²` rescaled to `‖φ‖_q = q_norm`.
pub fn random_potential<R: Rng>(grid: Grid, rng: &mut R, degree: usize, q: f64, q_norm: f64) -> RealFunction {
    let t = random_trig(grid, rng, (degree / 2).max(1));
    let phi = t.map(|v| v * v + 1e-3).expect("finite samples");
    let norm = crate::circle::lp_norm(&phi, q).expect("valid exponent");
    phi.scale(q_norm / norm)
}

/// Complex band-limited function with modes `|k| ≤ degree`, coefficients
/// uniform in the unit square and damped like `1/(1+|k|)`.
pub fn random_complex<R: Rng>(grid: Grid, rng: &mut R, degree: usize) -> ComplexFunction {
    let d = degree as i64;
    let coeffs: Vec<(i64, Complex64)> = (-d..=d)
        .map(|k| {
            let damp = 1.0 / (1.0 + k.unsigned_abs() as f64);
            (k, damp * Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)))
        })
        .collect();
    grid.sample(|s| {
        coeffs
            .iter()
            .map(|(k, c)| c * Complex64::from_polar(1.0, *k as f64 * s))
            .sum::<Complex64>()
    })
    .expect("finite samples")
}
