//! Problem parameters, flux reduction, the magnetic quadratic form and the two
//! Rayleigh quotients.
//!
//! For a constant flux `a` the magnetic energy is diagonal in Fourier space:
//! `‖ψ' + iaψ‖² = Σ_k (a + k)² |ψ_k|²`. Both quotients are zero-homogeneous.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::circle::{
    antiderivative, apply_multiplier, derivative, integrate, lp_norm, spectrum, wavenumber,
    ComplexFunction, GridFunction, RealFunction,
};
use crate::error::{Error, Result};

/// Relative level below which a sample counts as a zero of `u`.
pub const VANISH_THRESHOLD: f64 = 1e-8;

/// Admissible `(a, p, α)` with `a` reduced to `[0, 1/2]`, `p > 2`, `α > -a²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemParams {
    a: f64,
    p: f64,
    alpha: f64,
    q: f64,
}

impl ProblemParams {
    /// Reduces `a_raw` with [`reduce_flux`] and validates the rest.
    pub fn new(a_raw: f64, p: f64, alpha: f64) -> Result<Self> {
        if !a_raw.is_finite() || !p.is_finite() || !alpha.is_finite() {
            return Err(Error::InvalidParams("parameters must be finite".into()));
        }
        if p <= 2.0 {
            return Err(Error::InvalidParams(format!("exponent p must exceed 2, got {p}")));
        }
        let a = reduce_flux(a_raw);
        if alpha <= -a * a {
            return Err(Error::InvalidParams(format!(
                "alpha = {alpha} is not above -a^2 = {}",
                -a * a
            )));
        }
        Ok(Self {
            a,
            p,
            alpha,
            q: p / (p - 2.0),
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Dual exponent `q = p / (p - 2)`, so that `1/q + 2/p = 1`.
    pub fn q(&self) -> f64 {
        self.q
    }

    /// Same `(a, p)` with a different `α`.
    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(self.a, self.p, alpha)
    }

    /// `a² + α`: the quotient of any constant function.
    pub fn constant_value(&self) -> f64 {
        self.a * self.a + self.alpha
    }

    /// Height of the constant solution of the Euler-Lagrange equation,
    /// `(a² + α)^{1/(p-2)}`.
    pub fn lambda_const(&self) -> f64 {
        self.constant_value().powf(1.0 / (self.p - 2.0))
    }

    /// `a²(p+2) + α(p-2)`; constants are optimal iff this is at most 1.
    pub fn stability_index(&self) -> f64 {
        self.a * self.a * (self.p + 2.0) + self.alpha * (self.p - 2.0)
    }

    pub fn in_rigidity_region(&self) -> bool {
        self.stability_index() <= 1.0
    }
}

/// Threshold `α* = (1 - a²(p+2)) / (p-2)` where constants lose stability.
pub fn bifurcation_threshold(a: f64, p: f64) -> f64 {
    (1.0 - a * a * (p + 2.0)) / (p - 2.0)
}

/// Distance from `a_raw` to the nearest integer, in `[0, 1/2]`.
pub fn reduce_flux(a_raw: f64) -> f64 {
    (a_raw - a_raw.round()).abs()
}

/// Mean of a variable vector potential; only this average (the flux) matters
/// after a gauge change.
pub fn flux_average(a_fn: &RealFunction) -> f64 {
    integrate(a_fn)
}

/// `Σ_k (a + k)² |ψ_k|²` over the grid modes `k ∈ [-n/2, n/2)`.
pub fn magnetic_form(psi: &ComplexFunction, a: f64) -> f64 {
    let n = psi.len();
    spectrum(psi.values())
        .iter()
        .enumerate()
        .map(|(idx, c)| {
            let w = a + wavenumber(idx, n) as f64;
            w * w * c.norm_sqr()
        })
        .sum()
}

/// Samples of `-(d/ds + ia)² ψ`, the operator behind [`magnetic_form`].
pub fn apply_magnetic(psi: &[Complex64], a: f64) -> Vec<Complex64> {
    apply_multiplier(psi, |k| {
        let w = a + k as f64;
        Complex64::new(w * w, 0.0)
    })
}

fn check_nonzero<T: crate::circle::Scalar>(f: &GridFunction<T>) -> Result<()> {
    if f.values().iter().all(|v| v.modulus() == 0.0) {
        return Err(Error::InvalidInput("quotient of the zero function".into()));
    }
    Ok(())
}

/// `(‖v'‖² + α‖v‖²) / ‖v‖_p²` for a periodic `v`.
pub fn quotient_q(v: &ComplexFunction, p: f64, alpha: f64) -> Result<f64> {
    quotient_q_twisted(v, 0.0, p, alpha)
}

/// [`quotient_q`] for `v` obeying `v(s + 2π) = e^{2πi·twist} v(s)`.
///
/// The samples on `(-π, π]` are demodulated to the periodic `ψ = e^{-i·twist·s} v`,
/// whose twisted energy equals `‖v'‖²`. With `twist = 1/2` this handles
/// functions vanishing at `±π` (antiperiodic extension) without a kink.
pub fn quotient_q_twisted(v: &ComplexFunction, twist: f64, p: f64, alpha: f64) -> Result<f64> {
    check_nonzero(v)?;
    let kinetic = if twist == 0.0 {
        magnetic_form(v, 0.0)
    } else {
        magnetic_form(&demodulate(v, twist), twist)
    };
    let l2 = lp_norm(v, 2.0)?;
    let lp = lp_norm(v, p)?;
    Ok((kinetic + alpha * l2 * l2) / (lp * lp))
}

/// `e^{-i·twist·s} v(s)` on the grid.
pub fn demodulate(v: &ComplexFunction, twist: f64) -> ComplexFunction {
    let grid = v.grid();
    let values = grid
        .nodes()
        .zip(v.values())
        .map(|(s, &z)| z * Complex64::from_polar(1.0, -twist * s))
        .collect();
    GridFunction::new(grid, values).expect("demodulation keeps samples finite")
}

/// The reduced quotient
/// `(‖u'‖² + a² (∫u⁻² dσ)⁻¹ + α‖u‖²) / ‖u‖_p²` for real `u`.
///
/// When `min|u| ≤ VANISH_THRESHOLD · max|u|` the middle term is dropped and the
/// value is [`quotient_q`]`(u, p, α)`.
pub fn quotient_cal_q(u: &RealFunction, params: &ProblemParams) -> Result<f64> {
    check_nonzero(u)?;
    let (p, alpha, a) = (params.p(), params.alpha(), params.a());
    if vanishes(u) {
        return quotient_q(&u.to_complex(), p, alpha);
    }
    let du = derivative(u);
    let kinetic = integrate(&du.map(|d| d * d)?);
    let l2sq = integrate(&u.map(|x| x * x)?);
    let inv_mass = 1.0 / integrate(&u.map(|x| x.powi(-2))?);
    let lp = lp_norm(u, p)?;
    Ok((kinetic + a * a * inv_mass + alpha * l2sq) / (lp * lp))
}

/// Whether `u` takes the vanishing convention in [`quotient_cal_q`].
pub fn vanishes(u: &RealFunction) -> bool {
    let min_abs = u.values().iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min);
    min_abs <= VANISH_THRESHOLD * u.sup_norm()
}

/// Phase `φ` with `φ' = L / u²`, `φ(-π) = 0` and total increment `2π(a + k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseData {
    pub winding: i64,
    pub phase: RealFunction,
    pub multiplier: f64,
    /// `φ(π) - φ(-π)` from the full-period quadrature.
    pub increment: f64,
}

/// Rebuilds the phase of an optimal `v = u e^{iφ}` from its modulus.
pub fn phase_reconstruct(u: &RealFunction, a: f64, k: i64) -> Result<PhaseData> {
    if u.values().iter().any(|&x| x <= 0.0) {
        return Err(Error::InvalidInput(
            "phase reconstruction needs a positive modulus".into(),
        ));
    }
    let inv_sq = u.map(|x| x.powi(-2))?;
    let mass = integrate(&inv_sq);
    let flux = a + k as f64;
    let multiplier = flux / mass;
    let phase = antiderivative(&inv_sq).scale(multiplier);
    Ok(PhaseData {
        winding: k,
        phase,
        multiplier,
        increment: multiplier * 2.0 * PI * mass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::Grid;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn grid(n: usize) -> Grid {
        Grid::new(n).unwrap()
    }

    #[test]
    fn flux_reduction() {
        assert_abs_diff_eq!(reduce_flux(0.7), 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(reduce_flux(2.3), 0.3, epsilon = 1e-15);
        assert_eq!(reduce_flux(-0.5), 0.5);
        assert_eq!(reduce_flux(0.5), 0.5);
        for a in [-3.7, -0.2, 0.0, 0.49, 1.5, 12.25] {
            let r = reduce_flux(a);
            assert!((0.0..=0.5).contains(&r));
            assert_eq!(reduce_flux(r), r);
        }
    }

    #[test]
    fn params_validation() {
        assert!(ProblemParams::new(0.3, 2.0, 0.0).is_err());
        assert!(ProblemParams::new(0.3, 4.0, -0.09).is_err());
        assert!(ProblemParams::new(0.3, 4.0, f64::NAN).is_err());
        let pp = ProblemParams::new(1.3, 6.0, -0.05).unwrap();
        assert_abs_diff_eq!(pp.a(), 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(1.0 / pp.q() + 2.0 / pp.p(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn flux_average_examples() {
        let g = grid(64);
        assert_abs_diff_eq!(flux_average(&g.sample(|_| 0.3).unwrap()), 0.3, epsilon = 1e-15);
        let f = g.sample(|s| 0.3 + s.sin()).unwrap();
        assert_abs_diff_eq!(flux_average(&f), 0.3, epsilon = 1e-14);
        let f = g.sample(|s| 0.2 + 0.1 * (3.0 * s).cos()).unwrap();
        assert_abs_diff_eq!(flux_average(&f), 0.2, epsilon = 1e-14);
    }

    #[test]
    fn magnetic_form_examples() {
        let g = grid(32);
        let one = g.sample(|_| Complex64::new(1.0, 0.0)).unwrap();
        assert_abs_diff_eq!(magnetic_form(&one, 0.3), 0.09, epsilon = 1e-14);
        let e = g.sample(|s| Complex64::from_polar(1.0, -s)).unwrap();
        assert_abs_diff_eq!(magnetic_form(&e, 0.3), 0.49, epsilon = 1e-14);
        let two = g.sample(|s| 1.0 + Complex64::from_polar(1.0, s)).unwrap();
        assert_abs_diff_eq!(magnetic_form(&two, 0.3), 1.78, epsilon = 1e-13);
    }

    #[test]
    fn quotient_q_constants_and_scaling() {
        let g = grid(64);
        let one = g.sample(|_| Complex64::new(1.0, 0.0)).unwrap();
        assert_abs_diff_eq!(quotient_q(&one, 4.0, 0.2).unwrap(), 0.2, epsilon = 1e-15);
        let v = g.sample(|s| Complex64::new(1.0 + 0.3 * s.cos(), 0.2 * s.sin())).unwrap();
        let q1 = quotient_q(&v, 4.0, 0.7).unwrap();
        let q3 = quotient_q(&v.scale(3.0), 4.0, 0.7).unwrap();
        assert_relative_eq!(q1, q3, max_relative = 1e-14);
        let zero = g.sample(|_| Complex64::new(0.0, 0.0)).unwrap();
        assert!(quotient_q(&zero, 4.0, 0.0).is_err());
    }

    #[test]
    fn twisted_quotient_of_half_cosine() {
        // cos(s/2) vanishes at ±π; its antiperiodic extension is smooth.
        // Closed form at p = 4, α = 0: (1/8) / sqrt(3/8).
        let exact = 0.125 / 0.375f64.sqrt();
        let at = |n: usize| {
            let v = grid(n).sample(|s| Complex64::new((s / 2.0).cos(), 0.0)).unwrap();
            quotient_q_twisted(&v, 0.5, 4.0, 0.0).unwrap()
        };
        let reference = at(4096);
        assert_abs_diff_eq!(reference, exact, epsilon = 1e-13);
        assert_abs_diff_eq!(at(512), reference, epsilon = 1e-10);
        assert_abs_diff_eq!(at(1024), reference, epsilon = 1e-10);
    }

    #[test]
    fn cal_q_constants() {
        let g = grid(64);
        let pp = ProblemParams::new(0.3, 4.0, 0.1).unwrap();
        for c in [0.2, 1.0, 7.5] {
            let u = g.sample(|_| c).unwrap();
            assert_abs_diff_eq!(quotient_cal_q(&u, &pp).unwrap(), 0.19, epsilon = 1e-14);
        }
    }

    #[test]
    fn cal_q_vanishing_convention() {
        let g = grid(64);
        let pp = ProblemParams::new(0.3, 4.0, 0.1).unwrap();
        let u = g.sample(|s| 1.0 + s.cos()).unwrap(); // zero at the node s = -π
        assert!(vanishes(&u));
        assert_eq!(
            quotient_cal_q(&u, &pp).unwrap(),
            quotient_q(&u.to_complex(), 4.0, 0.1).unwrap()
        );
    }

    #[test]
    fn cal_q_self_converges() {
        let pp = ProblemParams::new(0.3, 4.0, 0.0).unwrap();
        let at = |n: usize| {
            let u = grid(n).sample(|s| 1.0 + 0.5 * s.cos()).unwrap();
            quotient_cal_q(&u, &pp).unwrap()
        };
        let reference = at(4096);
        assert_abs_diff_eq!(at(512), reference, epsilon = 1e-10);
        assert_abs_diff_eq!(at(1024), reference, epsilon = 1e-10);
    }

    #[test]
    fn phase_examples() {
        let g = grid(128);
        let one = g.sample(|_| 1.0).unwrap();
        let ph = phase_reconstruct(&one, 0.3, 0).unwrap();
        assert_abs_diff_eq!(ph.multiplier, 0.3, epsilon = 1e-15);
        let linear = g.sample(|s| 0.3 * (s + PI)).unwrap();
        assert!(ph.phase.sup_distance(&linear) < 1e-12);
        let ph = phase_reconstruct(&one, 0.5, 0).unwrap();
        assert_abs_diff_eq!(ph.increment, PI, epsilon = 1e-14);

        let u = g.sample(|s| 1.0 + 0.5 * s.cos()).unwrap();
        let ph = phase_reconstruct(&u, 0.3, 0).unwrap();
        assert_abs_diff_eq!(ph.increment, 2.0 * PI * 0.3, epsilon = 1e-10);
        let mass = integrate(&u.map(|x| x.powi(-2)).unwrap());
        assert_abs_diff_eq!(ph.multiplier * mass * 2.0 * PI, 2.0 * PI * 0.3, epsilon = 1e-10);
        // the last node is one step short of π: φ(π - h) = increment - L h / u(π)²
        let last = *ph.phase.values().last().unwrap();
        let expected = ph.increment - ph.multiplier * g.spacing() / 0.25;
        assert_abs_diff_eq!(last, expected, epsilon = 1e-2 * g.spacing());
        assert!(phase_reconstruct(&g.sample(f64::cos).unwrap(), 0.3, 0).is_err());
    }
}
