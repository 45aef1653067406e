#![allow(dead_code)]

use magring::circle::{Grid, RealFunction};
use magring::ComplexFunction;
use num_complex::Complex64;
use proptest::prelude::*;

/// Cosine/sine coefficients `(a_k, b_k)` for `k = 0..=degree`.
pub fn trig_coeffs(degree: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), degree + 1)
}

pub fn trig(grid: Grid, coeffs: &[(f64, f64)]) -> RealFunction {
    grid.sample(|s| {
        coeffs
            .iter()
            .enumerate()
            .map(|(k, (a, b))| a * (k as f64 * s).cos() + b * (k as f64 * s).sin())
            .sum::<f64>()
    })
    .unwrap()
}

/// `floor + t²` for the trigonometric polynomial `t`.
pub fn positive(grid: Grid, coeffs: &[(f64, f64)], floor: f64) -> RealFunction {
    trig(grid, coeffs).map(|v| floor + v * v).unwrap()
}

/// Complex coefficients for modes `-degree..=degree`.
pub fn complex_coeffs(degree: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 2 * degree + 1)
}

pub fn complex(grid: Grid, coeffs: &[(f64, f64)]) -> ComplexFunction {
    let d = (coeffs.len() / 2) as i64;
    grid.sample(|s| {
        coeffs
            .iter()
            .enumerate()
            .map(|(i, &(re, im))| {
                Complex64::new(re, im) * Complex64::from_polar(1.0, (i as i64 - d) as f64 * s)
            })
            .sum::<Complex64>()
    })
    .unwrap()
}

pub fn grid(n: usize) -> Grid {
    Grid::new(n).unwrap()
}
