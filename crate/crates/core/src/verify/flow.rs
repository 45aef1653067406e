//! The nonlinear flow `u_t = u'' + (p-1) u'²/u`, which preserves `∫u^p dσ`
//! and along which
//! `F[u] = ‖u'‖² + (‖u‖₂² - ‖u‖_p²)/(p-2)` does not increase.

use crate::circle::{derivative, integrate, lp_norm, second_derivative, RealFunction};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct FlowState {
    pub u: RealFunction,
    pub time: f64,
    pub functional_value: f64,
    /// `∫ u^p dσ`.
    pub mass_p: f64,
}

/// `‖u'‖² + (‖u‖₂² - ‖u‖_p²)/(p-2)`.
pub fn flow_functional(u: &RealFunction, p: f64) -> Result<f64> {
    check_exponent(p)?;
    let du = derivative(u);
    let kinetic = integrate(&du.map(|d| d * d)?);
    let l2 = integrate(&u.map(|v| v * v)?);
    let lp = lp_norm(u, p)?;
    Ok(kinetic + (l2 - lp * lp) / (p - 2.0))
}

fn check_exponent(p: f64) -> Result<()> {
    if !(p > 2.0 && p.is_finite()) {
        return Err(Error::InvalidParams(format!("flow exponent must be finite and > 2, got {p}")));
    }
    Ok(())
}

/// Largest stable step for the explicit integrator: `h²/4` with `h = 2π/n`.
pub fn default_step(u: &RealFunction) -> f64 {
    let h = u.grid().spacing();
    0.25 * h * h
}

fn rhs(u: &RealFunction, p: f64, time: f64) -> Result<RealFunction> {
    if let Some(j) = u.values().iter().position(|&v| !(v > 0.0)) {
        return Err(Error::PositivityLost {
            s: u.grid().node(j),
            lambda: time,
            mass: u.values()[j],
        });
    }
    let d1 = derivative(u);
    let d2 = second_derivative(u);
    let values = d2
        .values()
        .iter()
        .zip(d1.values())
        .zip(u.values())
        .map(|((&uss, &us), &v)| uss + (p - 1.0) * us * us / v)
        .collect();
    RealFunction::new(u.grid(), values)
}

fn axpy(u: &RealFunction, c: f64, k: &RealFunction) -> Result<RealFunction> {
    let values = u.values().iter().zip(k.values()).map(|(a, b)| a + c * b).collect();
    RealFunction::new(u.grid(), values)
}

fn state(u: RealFunction, time: f64, p: f64) -> Result<FlowState> {
    let functional_value = flow_functional(&u, p)?;
    let mass_p = integrate(&u.map(|v| v.powf(p))?);
    Ok(FlowState { u, time, functional_value, mass_p })
}

/// Integrates the flow with classical RK4 and spectral derivatives from
/// `u0 > 0` up to `t_end`, returning every step (including the initial state).
/// The last step is shortened to land on `t_end`.
///
/// Explicit Euler at `dt ~ h²/2` is unstable for the stiff `u''` term; RK4's
/// real stability interval reaches `2.78/k²_max`, so `dt ≤ h²/4` is safe.
/// Fails with [`Error::PositivityLost`] if any stage leaves the positive cone
/// (the `lambda` field carries the time).
pub fn bakry_emery_flow(u0: &RealFunction, p: f64, dt: f64, t_end: f64) -> Result<Vec<FlowState>> {
    check_exponent(p)?;
    if !(dt > 0.0 && t_end >= 0.0 && dt.is_finite() && t_end.is_finite()) {
        return Err(Error::InvalidParams(format!("need dt > 0 and t_end >= 0, got {dt}, {t_end}")));
    }
    let h = u0.grid().spacing();
    if dt > 0.35 * h * h {
        return Err(Error::InvalidParams(format!(
            "dt = {dt} exceeds the RK4 stability limit ~ {:.3e}",
            0.35 * h * h
        )));
    }
    let steps = (t_end / dt).ceil() as usize;
    let mut out = Vec::with_capacity(steps + 1);
    let mut u = u0.clone();
    let mut time = 0.0;
    out.push(state(u.clone(), time, p)?);
    for i in 0..steps {
        let step = if i + 1 == steps { t_end - time } else { dt };
        let k1 = rhs(&u, p, time)?;
        let k2 = rhs(&axpy(&u, 0.5 * step, &k1)?, p, time)?;
        let k3 = rhs(&axpy(&u, 0.5 * step, &k2)?, p, time)?;
        let k4 = rhs(&axpy(&u, step, &k3)?, p, time)?;
        let values = u
            .values()
            .iter()
            .enumerate()
            .map(|(j, v)| {
                v + step / 6.0
                    * (k1.values()[j] + 2.0 * k2.values()[j] + 2.0 * k3.values()[j] + k4.values()[j])
            })
            .collect();
        u = RealFunction::new(u.grid(), values)?;
        time = if i + 1 == steps { t_end } else { time + step };
        if let Some(j) = u.values().iter().position(|&v| !(v > 0.0)) {
            return Err(Error::PositivityLost { s: u.grid().node(j), lambda: time, mass: u.values()[j] });
        }
        out.push(state(u.clone(), time, p)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::Grid;

    #[test]
    fn constants_are_stationary() {
        let grid = Grid::new(64).unwrap();
        let u = grid.sample(|_| 1.7).unwrap();
        let states = bakry_emery_flow(&u, 4.0, default_step(&u), 0.1).unwrap();
        let last = states.last().unwrap();
        assert!(last.u.sup_distance(&u) < 1e-14);
        assert!((last.time - 0.1).abs() < 1e-15);
        assert!(last.functional_value.abs() < 1e-12);
    }

    #[test]
    fn functional_decreases_and_mass_is_kept() {
        let grid = Grid::new(64).unwrap();
        let u = grid.sample(|s| 1.0 + 0.3 * s.cos() + 0.1 * (2.0 * s).sin()).unwrap();
        let states = bakry_emery_flow(&u, 4.0, default_step(&u), 3.0).unwrap();
        for w in states.windows(2) {
            assert!(w[1].functional_value <= w[0].functional_value + 1e-12);
        }
        let m0 = states[0].mass_p;
        let m1 = states.last().unwrap().mass_p;
        assert!((m1 - m0).abs() <= 1e-10 * m0);
        // Relaxation towards the constant with the same L^p norm.
        let last = &states.last().unwrap().u;
        assert!(last.max() - last.min() < 0.1 * (u.max() - u.min()));
    }

    #[test]
    fn rejects_unstable_steps() {
        let grid = Grid::new(64).unwrap();
        let u = grid.sample(|_| 1.0).unwrap();
        assert!(bakry_emery_flow(&u, 4.0, 0.01, 1.0).is_err());
        assert!(bakry_emery_flow(&u, 2.0, 1e-4, 1.0).is_err());
    }
}
