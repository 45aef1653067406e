//! Single-case checks used by the property suites.

use num_complex::Complex64;

use crate::circle::{derivative, integrate, lp_norm, rearrange_decreasing, ComplexFunction, Grid, RealFunction};
use crate::error::{Error, Result};
use crate::forms::{magnetic_form, quotient_cal_q, ProblemParams};

/// `(∫(f²+g²)^{p/2} dσ, same with f*, g*)` for non-negative `f`, `g` and `p ≥ 2`.
pub fn rearrangement_check(f: &RealFunction, g: &RealFunction, p: f64) -> Result<(f64, f64)> {
    if !(p >= 2.0) {
        return Err(Error::InvalidParams(format!("rearrangement check needs p >= 2, got {p}")));
    }
    if f.grid() != g.grid() {
        return Err(Error::InvalidGrid("f and g live on different grids".into()));
    }
    let fs = rearrange_decreasing(f)?;
    let gs = rearrange_decreasing(g)?;
    let joint = |x: &RealFunction, y: &RealFunction| -> f64 {
        x.values()
            .iter()
            .zip(y.values())
            .map(|(a, b)| (a * a + b * b).powf(0.5 * p))
            .sum::<f64>()
            / x.len() as f64
    };
    Ok((joint(f, g), joint(&fs, &gs)))
}

/// `(‖|ψ|'‖₂, ‖ψ' + iaψ‖₂)`. The left side uses forward differences of `|ψ|`,
/// which stay well defined at zeros of `ψ` and are biased low.
pub fn diamagnetic_check(psi: &ComplexFunction, a: f64) -> (f64, f64) {
    let n = psi.len();
    let h = psi.grid().spacing();
    let m: Vec<f64> = psi.values().iter().map(|z| z.norm()).collect();
    let lhs = ((0..n)
        .map(|j| {
            let d = (m[(j + 1) % n] - m[j]) / h;
            d * d
        })
        .sum::<f64>()
        / n as f64)
        .sqrt();
    (lhs, magnetic_form(psi, a).sqrt())
}

/// Step sizes for [`taylor_coefficient_check`].
pub const TAYLOR_EPSILONS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

/// Grid used by [`taylor_coefficient_check`]; `1 + ε(1 + cos s)` is resolved
/// exactly.
pub const TAYLOR_GRID: usize = 256;

/// Measured `ε²` coefficient of `𝒬[1 + ε(1 + cos s)] - (a² + α)`.
///
/// The quotient is zero-homogeneous and even under `cos → -cos`, so the
/// difference quotient `g(ε)` has the expansion `C - 2Cε + O(ε²)`; two levels
/// of Richardson extrapolation over the halving sequence remove both
/// correction terms.
pub fn taylor_coefficient_check(params: &ProblemParams) -> Result<f64> {
    let grid = Grid::new(TAYLOR_GRID)?;
    let base = params.constant_value();
    let mut g = [0.0; 3];
    for (gi, &eps) in g.iter_mut().zip(&TAYLOR_EPSILONS) {
        let u = grid.sample(|s| 1.0 + eps * (1.0 + s.cos()))?;
        *gi = (quotient_cal_q(&u, params)? - base) / (eps * eps);
    }
    let r1 = [2.0 * g[1] - g[0], 2.0 * g[2] - g[1]];
    Ok((4.0 * r1[1] - r1[0]) / 3.0)
}

/// `1 - a²(p+2) - α(p-2)`, the coefficient the rigidity argument states for
/// [`taylor_coefficient_check`].
pub fn taylor_coefficient_formula(params: &ProblemParams) -> f64 {
    1.0 - params.stability_index()
}

/// `‖u'‖² + β‖u‖₂² - β‖u‖_p²`; non-negative for `β ∈ (0, 1/(p-2)]`.
pub fn interp_zero_margin(u: &RealFunction, p: f64, beta: f64) -> Result<f64> {
    let du = derivative(u);
    let kinetic = integrate(&du.map(|d| d * d)?);
    let l2 = lp_norm(u, 2.0)?;
    let lp = lp_norm(u, p)?;
    Ok(kinetic + beta * (l2 * l2 - lp * lp))
}

/// `‖u'‖² + ¼(∫u⁻² dσ)⁻¹ - ¼‖u‖₂²` for positive `u`; non-negative, zero on
/// constants.
pub fn interp_zero2_margin(u: &RealFunction) -> Result<f64> {
    let du = derivative(u);
    let kinetic = integrate(&du.map(|d| d * d)?);
    let inv = lp_norm(u, -2.0)?;
    let l2 = lp_norm(u, 2.0)?;
    Ok(kinetic + 0.25 * (inv * inv - l2 * l2))
}

/// `|ψ|` as a real function.
pub fn modulus(psi: &ComplexFunction) -> RealFunction {
    psi.map(|z: Complex64| z.norm()).expect("finite samples")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rearrangement_examples() {
        let grid = Grid::new(128).unwrap();
        let f = grid.sample(|s| 1.0 + (s - 1.0).cos()).unwrap();
        let g = grid.sample(|s| (2.0 * s).sin().abs()).unwrap();
        let (l, r) = rearrangement_check(&f, &g, 2.0).unwrap();
        assert!((l - r).abs() <= 1e-14 * l);
        let (l, r) = rearrangement_check(&f, &g, 4.0).unwrap();
        assert!(l <= r + 1e-10);
        let fs = grid.sample(|s| 1.0 + s.cos()).unwrap();
        let gs = grid.sample(|s| (-s * s).exp()).unwrap();
        let (l, r) = rearrangement_check(&fs, &gs, 4.0).unwrap();
        assert!((l - r).abs() <= 1e-14 * l);
        let neg = grid.sample(|s| s.cos()).unwrap();
        assert!(rearrangement_check(&neg, &gs, 4.0).is_err());
    }

    #[test]
    fn diamagnetic_examples() {
        let grid = Grid::new(256).unwrap();
        let one = grid.sample(|_| Complex64::new(1.0, 0.0)).unwrap();
        let (l, r) = diamagnetic_check(&one, 0.3);
        assert_eq!(l, 0.0);
        assert!((r - 0.3).abs() < 1e-15);
        let pos = grid.sample(|s| Complex64::new(2.0 + s.cos(), 0.0)).unwrap();
        let (l, r) = diamagnetic_check(&pos, 0.0);
        assert!(l <= r && r - l < 1e-3, "{l} {r}");
    }

    #[test]
    fn taylor_coefficient_is_half_the_stated_one() {
        // Expanding 𝒬 by hand gives (1 - a²(p+2) - α(p-2))/2 for the ε² term.
        for (a, p, alpha, expected) in [(0.0, 4.0, 0.25, 0.25), (0.2, 4.0, 1.0, -0.62), (0.45, 4.0, -0.1075, 0.0)] {
            let params = ProblemParams::new(a, p, alpha).unwrap();
            let c = taylor_coefficient_check(&params).unwrap();
            assert!((c - expected).abs() < 1e-5, "({a},{p},{alpha}): {c}");
            assert!((taylor_coefficient_formula(&params) - 2.0 * expected).abs() < 1e-12);
        }
    }

    #[test]
    fn static_inequalities_on_examples() {
        let grid = Grid::new(128).unwrap();
        let c = grid.sample(|_| 1.3).unwrap();
        assert!(interp_zero_margin(&c, 4.0, 0.5).unwrap().abs() < 1e-12);
        assert!(interp_zero2_margin(&c).unwrap().abs() < 1e-12);
        let u = grid.sample(|s| 1.0 + 0.5 * s.cos()).unwrap();
        assert!(interp_zero_margin(&u, 4.0, 0.5).unwrap() > 0.0);
        assert!(interp_zero2_margin(&u).unwrap() > 0.0);
    }
}
