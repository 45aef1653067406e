//! Shooting solver for the Euler-Lagrange equation
//!
//! `u'' = a² / (u³ M²) + αu - u^{p-1}`,   `M = ∫ u⁻² dσ`,
//!
//! started from `u(0) = λ`, `u'(0) = 0`. A trajectory whose first critical
//! point lands at `s = π` reflects evenly to a `2π`-periodic profile. The
//! nonlocal mass `M` is found by damped fixed-point iteration around an inner
//! root-find on `λ`, and `μ = ‖u‖_p^{p-2}`.
//!
//! The Dirichlet limit `-u'' + αu = |u|^{p-2}u`, `u(π) = 0`, gives `ν_p(α)`,
//! which is the value of `μ` at `a = 1/2`.

use std::f64::consts::PI;
use std::fmt;

use crate::circle::{
    integrate, lp_norm, second_derivative, twisted_second_derivative, Grid, GridFunction,
    RealFunction,
};
use crate::error::{Error, Result};
use crate::forms::{bifurcation_threshold, ProblemParams};
use crate::par;

/// Integration horizon for the critical-point search.
pub const S_MAX: f64 = 4.0 * PI;

/// Relative amplitude below which a converged profile counts as constant.
pub const AMPLITUDE_FLOOR: f64 = 1e-6;

/// Solver knobs. The defaults reproduce every number quoted in the tests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingConfig {
    /// RK4 steps on `[0, π]`; the step is `π / half_steps`. Must be a power of
    /// two so that the reflected profile subsamples onto power-of-two grids.
    pub half_steps: usize,
    /// Damping `θ` in `M ← (1-θ)M + θ∫u⁻²dσ`.
    pub damping: f64,
    pub max_outer: usize,
    /// Stop when `|∫u⁻²dσ - M| / M` falls below this.
    pub mass_tol: f64,
    /// Bisection tolerance on `λ` (relative to `max(1, λ)`).
    pub lambda_tol: f64,
    pub scan_points: usize,
    /// The `λ` scan covers `[c(1 + 1e-4), span·c]` around the local center `c`.
    pub scan_span: f64,
    /// Smallest grid for the returned profile.
    pub grid_n: usize,
    /// Target sup-norm residual of the returned profile.
    pub residual_tol: f64,
    /// Upper limit for `half_steps` when the residual target forces refinement.
    pub max_half_steps: usize,
}

impl Default for ShootingConfig {
    fn default() -> Self {
        Self {
            half_steps: 2048,
            damping: 0.5,
            max_outer: 200,
            mass_tol: 1e-10,
            lambda_tol: 1e-10,
            scan_points: 64,
            scan_span: 10.0,
            grid_n: 512,
            residual_tol: 1e-7,
            max_half_steps: 65536,
        }
    }
}

/// Which solution a [`ShootingResult`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Constant,
    Nonconstant,
    Dirichlet,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Constant => "constant",
            Branch::Nonconstant => "nonconstant",
            Branch::Dirichlet => "dirichlet",
        })
    }
}

/// Counters describing how a branch was found.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Diagnostics {
    /// `λ` roots of `ρ(λ) = π` on the first successful scan.
    pub roots_found: usize,
    /// How many of those led to a converged nonconstant branch.
    pub branches_converged: usize,
    /// Outer fixed-point iterations of the returned branch.
    pub outer_iterations: usize,
    /// RK4 steps on `[0, π]` used for the returned profile.
    pub half_steps: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShootingResult {
    /// `u(0)`.
    pub lambda: f64,
    /// `∫ u⁻² dσ`; infinite for the Dirichlet branch.
    pub mass: f64,
    /// Even profile on the full circle.
    pub profile: RealFunction,
    pub mu: f64,
    /// Sup norm of the equation evaluated on `profile` with spectral `u''`.
    pub residual_ode: f64,
    /// `|∫u⁻²dσ - M| / M` at exit; `|u(π)|` for the Dirichlet branch.
    pub residual_fixedpoint: f64,
    pub branch: Branch,
    pub diagnostics: Diagnostics,
}

impl ShootingResult {
    /// `(max u - min u) / max u`.
    pub fn relative_amplitude(&self) -> f64 {
        let (lo, hi) = (self.profile.min(), self.profile.max());
        (hi - lo) / hi
    }
}

/// Samples of a trajectory from [`integrate_el`].
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub s: Vec<f64>,
    pub u: Vec<f64>,
    pub du: Vec<f64>,
    /// First positive critical point, if one was bracketed before [`S_MAX`].
    pub critical: Option<f64>,
}

/// Right-hand side `u'' = c₂/u³ + αu - |u|^{p-2}u` with `c₂ = a²/M²`.
#[derive(Debug, Clone, Copy)]
struct Field {
    c2: f64,
    alpha: f64,
    p: f64,
    int_p: Option<i32>,
}

impl Field {
    fn new(c2: f64, alpha: f64, p: f64) -> Self {
        let int_p = (p.fract() == 0.0 && p < 64.0).then_some(p as i32);
        Self { c2, alpha, p, int_p }
    }

    fn el(params: &ProblemParams, mass: f64) -> Self {
        let a = params.a();
        Self::new(a * a / (mass * mass), params.alpha(), params.p())
    }

    fn dirichlet(p: f64, alpha: f64) -> Self {
        Self::new(0.0, alpha, p)
    }

    #[inline]
    fn nonlinearity(&self, u: f64) -> f64 {
        match self.int_p {
            Some(k) => u.abs().powi(k - 2) * u,
            None => u.abs().powf(self.p - 2.0) * u,
        }
    }

    #[inline]
    fn accel(&self, u: f64) -> f64 {
        let wall = if self.c2 == 0.0 { 0.0 } else { self.c2 / (u * u * u) };
        wall + self.alpha * u - self.nonlinearity(u)
    }

    fn scale(&self, u: f64) -> f64 {
        let wall = if self.c2 == 0.0 { 0.0 } else { self.c2 / (u * u * u).abs() };
        wall + (self.alpha * u).abs() + self.nonlinearity(u).abs()
    }

    #[inline]
    fn step(&self, (u, v): (f64, f64), h: f64) -> (f64, f64) {
        let h2 = 0.5 * h;
        let k1v = self.accel(u);
        let k2u = v + h2 * k1v;
        let k2v = self.accel(u + h2 * v);
        let k3u = v + h2 * k2v;
        let k3v = self.accel(u + h2 * k2u);
        let k4u = v + h * k3v;
        let k4v = self.accel(u + h * k3u);
        (
            u + h / 6.0 * (v + 2.0 * k2u + 2.0 * k3u + k4u),
            v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
        )
    }

    fn is_equilibrium(&self, lambda: f64) -> bool {
        self.accel(lambda).abs() <= 1e-13 * self.scale(lambda)
    }

    /// Positive root of `accel`, i.e. of `u^{p+2} - αu⁴ - c₂ = 0`.
    fn center(&self) -> Option<f64> {
        if self.c2 == 0.0 {
            return (self.alpha > 0.0).then(|| self.alpha.powf(1.0 / (self.p - 2.0)));
        }
        let g = |u: f64| u.powf(self.p + 2.0) - self.alpha * u.powi(4) - self.c2;
        let (mut lo, mut hi) = (1e-300_f64.max(self.c2.powf(1.0 / (self.p + 2.0)) * 1e-6), 1.0);
        while g(hi) <= 0.0 {
            hi *= 2.0;
            if hi > 1e100 {
                return None;
            }
        }
        while g(lo) > 0.0 {
            lo *= 0.5;
        }
        for _ in 0..200 {
            let mid = (lo * hi).sqrt();
            if g(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 1e-15 * hi {
                break;
            }
        }
        Some(0.5 * (lo + hi))
    }

    /// Shrinks the last step to the sign change of `g` to within 1e-14.
    fn refine(&self, y: (f64, f64), h: f64, g: impl Fn((f64, f64)) -> f64) -> f64 {
        let (mut lo, mut hi) = (0.0, h);
        while hi - lo > 1e-14 {
            let mid = 0.5 * (lo + hi);
            if g(self.step(y, mid)) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// First positive zero of `u'`, or `None` past `s_max`.
    fn first_critical(&self, lambda: f64, h: f64, s_max: f64, mass: f64) -> Result<Option<f64>> {
        if self.is_equilibrium(lambda) {
            return Err(Error::ConstantStart(lambda));
        }
        let dir = self.accel(lambda).signum();
        let mut y = (lambda, 0.0);
        let mut s = 0.0;
        while s < s_max {
            let next = self.step(y, h);
            if self.c2 != 0.0 && !(next.0 > 0.0) {
                return Err(Error::PositivityLost { s: s + h, lambda, mass });
            }
            if !next.0.is_finite() || !next.1.is_finite() {
                return Err(Error::NotConverged(format!("trajectory blew up at s = {s}")));
            }
            if next.1 * dir <= 0.0 {
                return Ok(Some(s + self.refine(y, h, |z| z.1 * dir)));
            }
            y = next;
            s += h;
        }
        Ok(None)
    }

    /// First positive zero of `u`, or `None` past `s_max`.
    fn first_zero(&self, lambda: f64, h: f64, s_max: f64) -> Result<Option<f64>> {
        let mut y = (lambda, 0.0);
        let mut s = 0.0;
        while s < s_max {
            let next = self.step(y, h);
            if !next.0.is_finite() || !next.1.is_finite() {
                return Err(Error::NotConverged(format!("trajectory blew up at s = {s}")));
            }
            if next.0 <= 0.0 {
                return Ok(Some(s + self.refine(y, h, |z| z.0)));
            }
            y = next;
            s += h;
        }
        Ok(None)
    }

    /// `u` at the `steps + 1` nodes `jπ/steps`, `j = 0..=steps`.
    fn half_profile(&self, lambda: f64, steps: usize, mass: f64) -> Result<Vec<f64>> {
        let h = PI / steps as f64;
        let mut out = Vec::with_capacity(steps + 1);
        let mut y = (lambda, 0.0);
        out.push(lambda);
        for j in 1..=steps {
            y = self.step(y, h);
            if self.c2 != 0.0 && !(y.0 > 0.0) {
                return Err(Error::PositivityLost { s: j as f64 * h, lambda, mass });
            }
            out.push(y.0);
        }
        Ok(out)
    }
}

/// `∫ u⁻² dσ` from half-profile nodes (trapezoid on `[0, π]`, which equals the
/// rectangle rule for the even extension).
fn half_mass(half: &[f64]) -> f64 {
    let steps = half.len() - 1;
    let inner: f64 = half[1..steps].iter().map(|u| u.powi(-2)).sum();
    (inner + 0.5 * (half[0].powi(-2) + half[steps].powi(-2))) / steps as f64
}

/// Even extension of half-profile nodes to the `2·steps` circle nodes.
fn reflect(half: &[f64]) -> Vec<f64> {
    let steps = half.len() - 1;
    (0..2 * steps).map(|j| half[j.abs_diff(steps)]).collect()
}

fn subsample(full: &[f64], n: usize) -> Result<RealFunction> {
    let stride = full.len() / n;
    let values = full.iter().step_by(stride).copied().collect();
    GridFunction::new(Grid::new(n)?, values)
}

/// Sup norm of `-u'' + a²/(u³M²) + αu - u^{p-1}` with `M` taken from `u`.
pub fn el_residual(u: &RealFunction, params: &ProblemParams) -> Result<f64> {
    let mass = integrate(&u.map(|v: f64| v.powi(-2))?);
    let field = Field::el(params, mass);
    let d2 = second_derivative(u);
    Ok(u
        .values()
        .iter()
        .zip(d2.values())
        .map(|(&v, &d)| (d - field.accel(v)).abs())
        .fold(0.0, f64::max))
}

/// Sup norm of `-u'' + αu - |u|^{p-2}u` for the antiperiodic continuation of `u`.
pub fn dirichlet_residual(u: &RealFunction, p: f64, alpha: f64) -> f64 {
    let v = u;
    let field = Field::dirichlet(p, alpha);
    let d2 = twisted_second_derivative(v, 0.5);
    v.values()
        .iter()
        .zip(d2.values())
        .map(|(&x, &d)| (d - field.accel(x)).abs())
        .fold(0.0, f64::max)
}

fn check_step(step: f64) -> Result<()> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::InvalidInput(format!("step must be positive, got {step}")));
    }
    Ok(())
}

/// Integrates the equation from `u(0) = λ`, `u'(0) = 0` with fixed-step RK4
/// until `u'` changes sign (the last sample is the refined critical point) or
/// `s` reaches [`S_MAX`]. From the equilibrium the trajectory is constant and
/// runs to `S_MAX`.
pub fn integrate_el(
    lambda: f64,
    mass: f64,
    params: &ProblemParams,
    step: f64,
) -> Result<Trajectory> {
    if !(lambda > 0.0) || !(mass > 0.0) {
        return Err(Error::InvalidInput(format!(
            "need lambda > 0 and mass > 0, got {lambda}, {mass}"
        )));
    }
    check_step(step)?;
    let field = Field::el(params, mass);
    let equilibrium = field.is_equilibrium(lambda);
    let dir = field.accel(lambda).signum();
    let mut traj = Trajectory {
        s: vec![0.0],
        u: vec![lambda],
        du: vec![0.0],
        critical: None,
    };
    let mut y = (lambda, 0.0);
    let mut s = 0.0;
    while s < S_MAX {
        let next = field.step(y, step);
        if field.c2 != 0.0 && !(next.0 > 0.0) {
            return Err(Error::PositivityLost { s: s + step, lambda, mass });
        }
        if !equilibrium && next.1 * dir <= 0.0 {
            let tau = field.refine(y, step, |z| z.1 * dir);
            let last = field.step(y, tau);
            traj.s.push(s + tau);
            traj.u.push(last.0);
            traj.du.push(last.1);
            traj.critical = Some(s + tau);
            return Ok(traj);
        }
        y = next;
        s += step;
        traj.s.push(s);
        traj.u.push(y.0);
        traj.du.push(y.1);
    }
    Ok(traj)
}

/// First positive critical point `ρ(λ)` of the trajectory, `Ok(None)` if
/// there is none before [`S_MAX`]. Uses the default step `π/2048`.
pub fn rho(lambda: f64, mass: f64, params: &ProblemParams) -> Result<Option<f64>> {
    rho_with_step(lambda, mass, params, PI / ShootingConfig::default().half_steps as f64)
}

pub fn rho_with_step(
    lambda: f64,
    mass: f64,
    params: &ProblemParams,
    step: f64,
) -> Result<Option<f64>> {
    if !(lambda > 0.0) || !(mass > 0.0) {
        return Err(Error::InvalidInput(format!(
            "need lambda > 0 and mass > 0, got {lambda}, {mass}"
        )));
    }
    check_step(step)?;
    Field::el(params, mass).first_critical(lambda, step, S_MAX, mass)
}

/// Center of oscillation `c(M)`: the positive equilibrium of the equation with
/// the mass frozen at `M`.
pub fn local_center(params: &ProblemParams, mass: f64) -> Option<f64> {
    Field::el(params, mass).center()
}

/// Root-finding in `λ` for a frozen field.
struct Shooter<'a> {
    field: Field,
    mass: f64,
    h: f64,
    cfg: &'a ShootingConfig,
}

impl Shooter<'_> {
    /// `ρ(λ) - π`, with "no critical point" read as `+∞` and failures as `None`.
    fn gap(&self, lambda: f64) -> Option<f64> {
        match self.field.first_critical(lambda, self.h, S_MAX, self.mass) {
            Ok(Some(r)) => Some(r - PI),
            Ok(None) => Some(f64::INFINITY),
            Err(_) => None,
        }
    }

    fn bisect(&self, mut lo: f64, mut hi: f64) -> Option<f64> {
        let g_lo = self.gap(lo)?;
        let positive_lo = g_lo > 0.0;
        while hi - lo > self.cfg.lambda_tol * hi.max(1.0) {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if (self.gap(mid)? > 0.0) == positive_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(0.5 * (lo + hi))
    }

    /// Maximizes the gap on `[lo, hi]` by golden-section search.
    fn peak(&self, mut lo: f64, mut hi: f64) -> Option<(f64, f64)> {
        let r = 0.5 * (5f64.sqrt() - 1.0);
        let mut x1 = hi - r * (hi - lo);
        let mut x2 = lo + r * (hi - lo);
        let mut g1 = self.gap(x1)?;
        let mut g2 = self.gap(x2)?;
        while hi - lo > 1e-12 * hi {
            if g1 > 0.0 {
                return Some((x1, g1));
            }
            if g2 > 0.0 {
                return Some((x2, g2));
            }
            if g1 < g2 {
                lo = x1;
                x1 = x2;
                g1 = g2;
                x2 = lo + r * (hi - lo);
                g2 = self.gap(x2)?;
            } else {
                hi = x2;
                x2 = x1;
                g2 = g1;
                x1 = hi - r * (hi - lo);
                g1 = self.gap(x1)?;
            }
        }
        Some(if g1 > g2 { (x1, g1) } else { (x2, g2) })
    }

    fn roots_on(&self, pts: &[f64], out: &mut Vec<f64>) {
        let gaps: Vec<Option<f64>> = pts.iter().map(|&l| self.gap(l)).collect();
        for i in 0..pts.len() - 1 {
            if let (Some(g0), Some(g1)) = (gaps[i], gaps[i + 1]) {
                if (g0 > 0.0) != (g1 > 0.0) {
                    if let Some(r) = self.bisect(pts[i], pts[i + 1]) {
                        out.push(r);
                    }
                }
            }
        }
        // A narrow hump of ρ can cross π between two scan points.
        for i in 1..pts.len() - 1 {
            let (Some(gl), Some(gm), Some(gr)) = (gaps[i - 1], gaps[i], gaps[i + 1]) else {
                continue;
            };
            if gm < 0.0 && gm >= gl && gm >= gr {
                if let Some((top, g_top)) = self.peak(pts[i - 1], pts[i + 1]) {
                    if g_top > 0.0 {
                        out.extend(self.bisect(pts[i - 1], top));
                        out.extend(self.bisect(top, pts[i + 1]));
                    }
                }
            }
        }
    }

    /// All roots of `ρ(λ) = π` found by scanning above the center, then below.
    fn roots(&self, center: f64) -> Vec<f64> {
        let n = self.cfg.scan_points.max(4);
        let span = self.cfg.scan_span;
        let geom = |lo: f64, hi: f64| -> Vec<f64> {
            (0..n)
                .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
                .collect()
        };
        let mut out = Vec::new();
        self.roots_on(&geom(center * (1.0 + 1e-4), center * span), &mut out);
        if out.is_empty() {
            self.roots_on(&geom(center / span, center * (1.0 - 1e-4)), &mut out);
        }
        out.sort_by(f64::total_cmp);
        out.dedup_by(|x, y| (*x - *y).abs() <= 1e-9 * y.abs());
        out
    }

    /// The root closest to `prev`, searched by an expanding bracket first.
    fn root_near(&self, prev: f64) -> Option<f64> {
        let g0 = self.gap(prev)?;
        if g0 == 0.0 {
            return Some(prev);
        }
        let mut delta = 1e-4 * prev;
        while delta <= 0.05 * prev {
            let mut found: Option<f64> = None;
            for cand in [prev - delta, prev + delta] {
                if let Some(g) = self.gap(cand) {
                    if (g > 0.0) != (g0 > 0.0) {
                        let (lo, hi) = if cand < prev { (cand, prev) } else { (prev, cand) };
                        if let Some(r) = self.bisect(lo, hi) {
                            found = match found {
                                Some(f) if (f - prev).abs() <= (r - prev).abs() => Some(f),
                                _ => Some(r),
                            };
                        }
                    }
                }
            }
            if found.is_some() {
                return found;
            }
            delta *= 2.0;
        }
        let center = self.field.center()?;
        self.roots(center)
            .into_iter()
            .filter(|r| (r - prev).abs() <= 0.2 * prev)
            .min_by(|x, y| (x - prev).abs().total_cmp(&(y - prev).abs()))
    }
}

/// A converged `(λ, M)` pair used to seed the next solve along a curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WarmStart {
    pub lambda: f64,
    pub mass: f64,
}

impl From<&ShootingResult> for WarmStart {
    fn from(r: &ShootingResult) -> Self {
        Self { lambda: r.lambda, mass: r.mass }
    }
}

struct Converged {
    lambda: f64,
    mass: f64,
    half: Vec<f64>,
    fixedpoint: f64,
    iterations: usize,
}

/// Damped fixed point on `M`, tracking the `λ` root that starts at `lambda`.
fn track(
    params: &ProblemParams,
    cfg: &ShootingConfig,
    steps: usize,
    mut lambda: f64,
    mut mass: f64,
) -> Result<Converged> {
    let h = PI / steps as f64;
    let mut history = vec![mass];
    for it in 1..=cfg.max_outer {
        let field = Field::el(params, mass);
        let half = field.half_profile(lambda, steps, mass)?;
        let t = half_mass(&half);
        let fixedpoint = (t - mass).abs() / mass;
        if fixedpoint <= cfg.mass_tol {
            return Ok(Converged { lambda, mass, half, fixedpoint, iterations: it });
        }
        mass = (1.0 - cfg.damping) * mass + cfg.damping * t;
        history.push(mass);
        if !mass.is_finite() || mass > 1e4 * history[0] {
            return Err(Error::FixedPointDiverged { iterations: it, mass_history: history });
        }
        let shooter = Shooter { field: Field::el(params, mass), mass, h, cfg };
        lambda = shooter.root_near(lambda).ok_or_else(|| {
            Error::NoBranch(format!("lost the lambda bracket at mass {mass} (iteration {it})"))
        })?;
    }
    Err(Error::FixedPointDiverged { iterations: cfg.max_outer, mass_history: history })
}

/// Newton's method on `(λ, log M)` for `ρ(λ, M) = π`, `∫u⁻²dσ = M`, with a
/// forward-difference Jacobian and backtracking. Unlike the damped iteration
/// this does not care on which side of the fold in `M` the solution lies.
fn newton(
    params: &ProblemParams,
    cfg: &ShootingConfig,
    steps: usize,
    lambda: f64,
    mass: f64,
) -> Result<Converged> {
    newton_to(params, cfg, steps, lambda, mass, 1e-11)
}

fn newton_to(
    params: &ProblemParams,
    cfg: &ShootingConfig,
    steps: usize,
    lambda: f64,
    mass: f64,
    rho_tol: f64,
) -> Result<Converged> {
    let h = PI / steps as f64;
    let eval = |l: f64, log_m: f64| -> Option<[f64; 2]> {
        let m = log_m.exp();
        let field = Field::el(params, m);
        let r = field.first_critical(l, h, S_MAX, m).ok()??;
        let t = half_mass(&field.half_profile(l, steps, m).ok()?);
        Some([r - PI, (t / m).ln()])
    };
    let norm = |g: &[f64; 2]| g[0].hypot(g[1]);
    let (mut l, mut lm) = (lambda, mass.ln());
    let mut g = eval(l, lm).ok_or_else(|| Error::NoBranch(format!("bad Newton seed ({lambda}, {mass})")))?;
    for it in 1..=cfg.max_outer {
        if g[0].abs() <= rho_tol && g[1].abs() <= 0.5 * cfg.mass_tol {
            let m = lm.exp();
            let half = Field::el(params, m).half_profile(l, steps, m)?;
            let fixedpoint = (half_mass(&half) - m).abs() / m;
            return Ok(Converged { lambda: l, mass: m, half, fixedpoint, iterations: it });
        }
        let (dl, dm) = (1e-7 * l, 1e-7);
        let gl = eval(l + dl, lm).ok_or_else(|| Error::NotConverged("Newton probe failed".into()))?;
        let gm = eval(l, lm + dm).ok_or_else(|| Error::NotConverged("Newton probe failed".into()))?;
        let j = [
            [(gl[0] - g[0]) / dl, (gm[0] - g[0]) / dm],
            [(gl[1] - g[1]) / dl, (gm[1] - g[1]) / dm],
        ];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 || !det.is_finite() {
            return Err(Error::NotConverged("singular Newton Jacobian".into()));
        }
        let sl = -(j[1][1] * g[0] - j[0][1] * g[1]) / det;
        let sm = -(-j[1][0] * g[0] + j[0][0] * g[1]) / det;
        let mut t = 1.0;
        loop {
            let trial = (l + t * sl, lm + t * sm);
            if trial.0 > 0.0 {
                if let Some(gt) = eval(trial.0, trial.1) {
                    if norm(&gt) < norm(&g) {
                        (l, lm, g) = (trial.0, trial.1, gt);
                        break;
                    }
                }
            }
            t *= 0.5;
            if t < 1e-10 {
                return Err(Error::NotConverged(format!(
                    "Newton line search stalled at lambda = {l}, mass = {}",
                    lm.exp()
                )));
            }
        }
    }
    Err(Error::NotConverged("Newton iteration limit".into()))
}

/// Tightens `ρ(λ) = π` to near machine precision. Where `ρ` is steep in `λ`
/// the working tolerance leaves `u'(π)` large enough that the even reflection
/// has a visible kink.
fn polish(params: &ProblemParams, cfg: &ShootingConfig, steps: usize, c: Converged) -> Converged {
    if params.a() == 0.0 {
        return c;
    }
    let tight = newton_to(params, cfg, steps, c.lambda, c.mass, 1e-13)
        .or_else(|_| newton_to(params, cfg, steps, c.lambda, c.mass, 1e-12));
    match tight {
        Ok(p) => Converged { iterations: c.iterations + p.iterations, ..p },
        Err(_) => c,
    }
}

/// `(λ, M)` seeds from a warm start, if it still brackets a root.
fn warm_candidates(
    params: &ProblemParams,
    cfg: &ShootingConfig,
    h: f64,
    warm: WarmStart,
) -> Vec<(f64, f64)> {
    let shooter = Shooter { field: Field::el(params, warm.mass), mass: warm.mass, h, cfg };
    shooter.root_near(warm.lambda).map(|l| vec![(l, warm.mass)]).unwrap_or_default()
}

/// `(λ, M)` seeds: the roots at the first mass, growing geometrically from
/// `λ_c⁻²`, where the scan finds any.
fn cold_candidates(params: &ProblemParams, cfg: &ShootingConfig, h: f64) -> Vec<(f64, f64)> {
    let mut mass = params.lambda_const().powi(-2);
    for _ in 0..80 {
        let field = Field::el(params, mass);
        if let Some(center) = field.center() {
            let roots = Shooter { field, mass, h, cfg }.roots(center);
            if !roots.is_empty() {
                return roots.into_iter().map(|l| (l, mass)).collect();
            }
        }
        if params.a() == 0.0 {
            break;
        }
        mass *= 1.5;
    }
    Vec::new()
}

fn assemble_el(
    params: &ProblemParams,
    cfg: &ShootingConfig,
    c: &Converged,
    diagnostics: Diagnostics,
) -> Result<ShootingResult> {
    let full = reflect(&c.half);
    let p = params.p();
    let mu = (full.iter().map(|u| u.powf(p)).sum::<f64>() / full.len() as f64).powf((p - 2.0) / p);
    let (profile, residual_ode) = choose_grid(&full, cfg.grid_n, cfg.residual_tol, |u| {
        let mu_n = lp_norm(u, p)?.powf(p - 2.0);
        Ok((el_residual(u, params)?, (mu_n - mu).abs() <= 1e-10 * mu))
    })?;
    Ok(ShootingResult {
        lambda: c.lambda,
        mass: c.mass,
        profile,
        mu,
        residual_ode,
        residual_fixedpoint: c.fixedpoint,
        branch: Branch::Nonconstant,
        diagnostics,
    })
}

/// Coarsest power-of-two subsampling of `full` (at least `n0` nodes) whose
/// residual is below `tol` and which passes `check`, or the full resolution.
fn choose_grid(
    full: &[f64],
    n0: usize,
    tol: f64,
    residual: impl Fn(&RealFunction) -> Result<(f64, bool)>,
) -> Result<(RealFunction, f64)> {
    let mut n = n0.min(full.len());
    loop {
        let u = subsample(full, n)?;
        let (r, ok) = residual(&u)?;
        if (r <= tol && ok) || n >= full.len() {
            return Ok((u, r));
        }
        n *= 2;
    }
}

fn constant_result(params: &ProblemParams, cfg: &ShootingConfig) -> Result<ShootingResult> {
    let lambda = params.lambda_const();
    let profile = Grid::new(cfg.grid_n)?.sample(|_| lambda)?;
    Ok(ShootingResult {
        lambda,
        mass: lambda.powi(-2),
        residual_ode: el_residual(&profile, params)?,
        profile,
        mu: params.constant_value(),
        residual_fixedpoint: 0.0,
        branch: Branch::Constant,
        diagnostics: Diagnostics { half_steps: cfg.half_steps, ..Default::default() },
    })
}

/// Searches for nonconstant solutions and returns the one with the smallest
/// `μ`, or `None` if no candidate converges to a profile with relative
/// amplitude above [`AMPLITUDE_FLOOR`]. Errors only report why candidates
/// failed when at least one was found.
pub fn find_nonconstant(
    params: &ProblemParams,
    cfg: &ShootingConfig,
    warm: Option<WarmStart>,
) -> Result<Option<ShootingResult>> {
    validate_config(cfg)?;
    if params.a() >= 0.5 {
        return Err(Error::InvalidParams(
            "a = 1/2 has no finite nonlocal mass; use dirichlet_nu".into(),
        ));
    }
    let mut steps = cfg.half_steps;
    let mut warm = warm;
    loop {
        let h = PI / steps as f64;
        let mut attempt = warm.map(|w| warm_candidates(params, cfg, h, w)).unwrap_or_default();
        let mut outcome = run_candidates(params, cfg, steps, &attempt, true);
        if outcome.best.is_none() {
            attempt = cold_candidates(params, cfg, h);
            outcome = run_candidates(params, cfg, steps, &attempt, false);
        }
        let Some(c) = outcome.best else {
            // Near-touchdown profiles can make a coarse step jump through
            // u = 0 during the scan; retry finer before giving up.
            if params.stability_index() > 1.0 && steps * 2 <= cfg.max_half_steps.min(16384) {
                steps *= 2;
                warm = None;
                continue;
            }
            return match outcome.last_err {
                Some(e) if params.stability_index() > 1.0 => Err(e),
                _ => Ok(None),
            };
        };
        let diagnostics = Diagnostics {
            roots_found: attempt.len(),
            branches_converged: outcome.converged,
            outer_iterations: c.iterations,
            half_steps: steps,
        };
        let r = assemble_el(params, cfg, &c, diagnostics)?;
        if r.residual_ode <= cfg.residual_tol || steps * 2 > cfg.max_half_steps {
            return Ok(Some(r));
        }
        warm = Some(WarmStart::from(&r));
        steps *= 2;
    }
}

struct Outcome {
    best: Option<Converged>,
    converged: usize,
    last_err: Option<Error>,
}

/// Runs the fixed point from each seed and keeps the nonconstant solution
/// with the smallest `μ`.
fn run_candidates(
    params: &ProblemParams,
    cfg: &ShootingConfig,
    steps: usize,
    seeds: &[(f64, f64)],
    warm: bool,
) -> Outcome {
    let p = params.p();
    let mut out = Outcome { best: None, converged: 0, last_err: None };
    for &(lambda, mass) in seeds.iter().take(4) {
        let result = if params.a() == 0.0 {
            Field::el(params, mass).half_profile(lambda, steps, mass).map(|half| Converged {
                lambda,
                mass: half_mass(&half),
                half,
                fixedpoint: 0.0,
                iterations: 0,
            })
        } else {
            if warm {
                newton(params, cfg, steps, lambda, mass)
                    .or_else(|_| track(params, cfg, steps, lambda, mass))
            } else {
                track(params, cfg, steps, lambda, mass)
                    .or_else(|_| newton(params, cfg, steps, lambda, mass))
            }
        };
        match result.map(|c| polish(params, cfg, steps, c)) {
            Ok(c) => {
                let hi = c.half.iter().copied().fold(f64::MIN, f64::max);
                let lo = c.half.iter().copied().fold(f64::MAX, f64::min);
                // Without the u⁻³ barrier (a = 0) shooting can land on
                // sign-changing periodic solutions; those are not minimizers.
                if lo <= 0.0 || (hi - lo) / hi <= AMPLITUDE_FLOOR {
                    continue;
                }
                out.converged += 1;
                if out.best.as_ref().is_none_or(|b| half_mu(&c.half, p) < half_mu(&b.half, p)) {
                    out.best = Some(c);
                }
            }
            Err(e) => out.last_err = Some(e),
        }
    }
    out
}

fn half_mu(half: &[f64], p: f64) -> f64 {
    let steps = half.len() - 1;
    let inner: f64 = half[1..steps].iter().map(|u| u.powf(p)).sum();
    let m = (inner + 0.5 * (half[0].powf(p) + half[steps].powf(p))) / steps as f64;
    m.powf((p - 2.0) / p)
}

fn validate_config(cfg: &ShootingConfig) -> Result<()> {
    let ok = cfg.half_steps.is_power_of_two()
        && cfg.grid_n.is_power_of_two()
        && cfg.grid_n >= 8
        && cfg.grid_n <= 2 * cfg.half_steps
        && cfg.damping > 0.0
        && cfg.damping <= 1.0
        && cfg.scan_points >= 4
        && cfg.scan_span > 1.0;
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("inconsistent shooting config {cfg:?}")))
    }
}

/// Minimizing profile for `params` with the default configuration.
pub fn solve_branch(params: &ProblemParams) -> Result<ShootingResult> {
    solve_branch_with(params, &ShootingConfig::default(), None)
}

/// Minimizing profile: the nonconstant branch when one exists with `μ` below
/// `a² + α`, otherwise the constant. At `a = 1/2` this is the Dirichlet
/// solution. Outside the rigidity region a failure to find the branch is an
/// error rather than a silent fallback to the constant.
pub fn solve_branch_with(
    params: &ProblemParams,
    cfg: &ShootingConfig,
    warm: Option<WarmStart>,
) -> Result<ShootingResult> {
    if params.a() >= 0.5 {
        return dirichlet_nu_with(params.p(), params.alpha(), cfg);
    }
    match find_nonconstant(params, cfg, warm)? {
        Some(r) if r.mu < params.constant_value() => Ok(r),
        _ if params.stability_index() > 1.0 => Err(Error::NoBranch(format!(
            "a = {}, p = {}, alpha = {} is past the threshold but no branch below a^2 + alpha was found",
            params.a(),
            params.p(),
            params.alpha()
        ))),
        _ => constant_result(params, cfg),
    }
}

/// `μ_{a,p}(α)`.
pub fn mu(params: &ProblemParams) -> Result<f64> {
    Ok(solve_branch(params)?.mu)
}

/// Positive solution of `-u'' + αu = u^{p-1}` on `(-π, π)` with zero boundary
/// values, and `ν_p(α) = ‖u‖_p^{p-2}`.
pub fn dirichlet_nu(p: f64, alpha: f64) -> Result<ShootingResult> {
    dirichlet_nu_with(p, alpha, &ShootingConfig::default())
}

pub fn dirichlet_nu_with(p: f64, alpha: f64, cfg: &ShootingConfig) -> Result<ShootingResult> {
    if !(p > 2.0) || !p.is_finite() || !alpha.is_finite() || alpha <= -0.25 {
        return Err(Error::InvalidParams(format!(
            "Dirichlet problem needs p > 2 and alpha > -1/4, got p = {p}, alpha = {alpha}"
        )));
    }
    validate_config(cfg)?;
    let field = Field::dirichlet(p, alpha);
    let mut steps = cfg.half_steps;
    loop {
        let h = PI / steps as f64;
        // z(λ) - π, with "no zero" as +∞; z decreases in λ.
        let gap = |l: f64| -> Result<f64> {
            Ok(field.first_zero(l, h, 2.0 * PI)?.map_or(f64::INFINITY, |z| z - PI))
        };
        let mut lo = 1e-3;
        while gap(lo)? <= 0.0 {
            lo *= 0.5;
            if lo < 1e-12 {
                return Err(Error::NoBranch("Dirichlet zero stays left of pi".into()));
            }
        }
        let mut hi = lo;
        while gap(hi)? > 0.0 {
            lo = hi;
            hi *= 2.0;
            if hi > 1e8 {
                return Err(Error::NoBranch("Dirichlet zero stays right of pi".into()));
            }
        }
        while hi - lo > 1e-13 * hi.max(1.0) {
            let mid = 0.5 * (lo + hi);
            if gap(mid)? > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let lambda = 0.5 * (lo + hi);
        let mut half = field.half_profile(lambda, steps, f64::INFINITY)?;
        let boundary = half[steps].abs();
        half[steps] = 0.0;
        let full = reflect(&half);
        let nu = (full.iter().map(|u| u.abs().powf(p)).sum::<f64>() / full.len() as f64)
            .powf((p - 2.0) / p);
        let (profile, residual_ode) =
            choose_grid(&full, cfg.grid_n, cfg.residual_tol, |u| {
                Ok((dirichlet_residual(u, p, alpha), true))
            })?;
        if residual_ode <= cfg.residual_tol || steps * 2 > cfg.max_half_steps {
            return Ok(ShootingResult {
                lambda,
                mass: f64::INFINITY,
                profile,
                mu: nu,
                residual_ode,
                residual_fixedpoint: boundary,
                branch: Branch::Dirichlet,
                diagnostics: Diagnostics { half_steps: steps, ..Default::default() },
            });
        }
        steps *= 2;
    }
}

/// One sample of `α ↦ μ_{a,p}(α)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MuRow {
    pub alpha: f64,
    pub mu_constant: f64,
    pub mu_branch: Option<f64>,
    /// `min(mu_constant, mu_branch)`; NaN when the row failed.
    pub mu: f64,
    pub branch: Branch,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MuCurve {
    pub a: f64,
    pub p: f64,
    pub rows: Vec<MuRow>,
}

/// How a curve sweep seeds each solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    /// Sequential; each row starts from the previous nonconstant `(λ, M)`.
    Continuation,
    /// Independent cold starts, run on the worker pool when `parallel` is set
    /// and the `parallel` feature is enabled.
    ColdStart { parallel: bool },
}

impl MuCurve {
    /// Largest `|μ|` difference between rows with matching `α`.
    pub fn max_difference(&self, other: &MuCurve) -> f64 {
        self.rows
            .iter()
            .zip(&other.rows)
            .map(|(x, y)| {
                if x.alpha != y.alpha {
                    f64::INFINITY
                } else {
                    (x.mu - y.mu).abs()
                }
            })
            .fold(0.0, f64::max)
    }

    pub fn failures(&self) -> impl Iterator<Item = &MuRow> {
        self.rows.iter().filter(|r| r.error.is_some())
    }

    /// Row-level invariant violations: `μ` must be the smaller of the two
    /// candidates, `α` strictly increasing, `μ` nondecreasing and concave
    /// (second differences at most `tol`, for a uniform `α` step).
    pub fn violations(&self, tol: f64) -> Vec<String> {
        let mut out = Vec::new();
        for r in &self.rows {
            if r.error.is_some() {
                continue;
            }
            let expect = r.mu_branch.map_or(r.mu_constant, |b| b.min(r.mu_constant));
            if r.mu != expect {
                out.push(format!("alpha = {}: mu is not the smaller candidate", r.alpha));
            }
        }
        for w in self.rows.windows(2) {
            if !(w[1].alpha > w[0].alpha) {
                out.push(format!("alpha not increasing at {}", w[1].alpha));
            }
            if w[1].mu < w[0].mu - tol {
                out.push(format!("mu decreases between alpha = {} and {}", w[0].alpha, w[1].alpha));
            }
        }
        for w in self.rows.windows(3) {
            let d2 = w[0].mu - 2.0 * w[1].mu + w[2].mu;
            if d2 > tol {
                out.push(format!("concavity fails at alpha = {} (second difference {d2:.3e})", w[1].alpha));
            }
        }
        out
    }
}

fn curve_row(a: f64, p: f64, alpha: f64, cfg: &ShootingConfig, warm: Option<WarmStart>) -> (MuRow, Option<WarmStart>) {
    let mut row = MuRow {
        alpha,
        mu_constant: a * a + alpha,
        mu_branch: None,
        mu: f64::NAN,
        branch: Branch::Constant,
        error: None,
    };
    let solved = ProblemParams::new(a, p, alpha).and_then(|params| solve_branch_with(&params, cfg, warm));
    match solved {
        Ok(r) => {
            row.mu = r.mu;
            row.branch = r.branch;
            if r.branch != Branch::Constant {
                row.mu_branch = Some(r.mu);
                row.mu = r.mu.min(row.mu_constant);
                return (row, (r.branch == Branch::Nonconstant).then(|| WarmStart::from(&r)));
            }
            (row, None)
        }
        Err(e) => {
            row.error = Some(e.to_string());
            (row, None)
        }
    }
}

/// Continuation sweep over `steps` uniformly spaced `α` in `[alpha_min, alpha_max]`.
pub fn mu_curve(a: f64, p: f64, alpha_min: f64, alpha_max: f64, steps: usize) -> Result<MuCurve> {
    mu_curve_with(a, p, alpha_min, alpha_max, steps, SweepMode::Continuation, &ShootingConfig::default())
}

pub fn mu_curve_with(
    a: f64,
    p: f64,
    alpha_min: f64,
    alpha_max: f64,
    steps: usize,
    mode: SweepMode,
    cfg: &ShootingConfig,
) -> Result<MuCurve> {
    let head = ProblemParams::new(a, p, alpha_min)?;
    if steps < 2 || !(alpha_max > alpha_min) || !alpha_max.is_finite() {
        return Err(Error::InvalidInput(format!(
            "need steps >= 2 and alpha_max > alpha_min, got {steps}, [{alpha_min}, {alpha_max}]"
        )));
    }
    let a = head.a();
    let alphas: Vec<f64> = (0..steps)
        .map(|i| alpha_min + (alpha_max - alpha_min) * i as f64 / (steps - 1) as f64)
        .collect();
    let rows = match mode {
        SweepMode::Continuation => {
            let mut warm = None;
            alphas
                .iter()
                .map(|&alpha| {
                    let (row, next) = curve_row(a, p, alpha, cfg, warm);
                    warm = next;
                    row
                })
                .collect()
        }
        SweepMode::ColdStart { parallel } => {
            par::map(&alphas, parallel, |&alpha| curve_row(a, p, alpha, cfg, None).0)
        }
    };
    Ok(MuCurve { a, p, rows })
}

/// Threshold where the nonconstant branch appears.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bifurcation {
    /// `(1 - a²(p+2)) / (p-2)`.
    pub formula: f64,
    /// Onset of a nonconstant branch located by bisection; `None` at `a = 1/2`,
    /// where every admissible `α` lies past the threshold.
    pub empirical: Option<f64>,
    pub discrepancy: Option<f64>,
}

/// Width of the final bisection bracket for the empirical onset.
pub const ONSET_TOL: f64 = 2e-4;

/// Whether a nonconstant branch with `μ < a² + α` exists at `(a, p, α)`.
pub fn has_nonconstant_branch(params: &ProblemParams, cfg: &ShootingConfig) -> bool {
    matches!(
        find_nonconstant(params, cfg, None),
        Ok(Some(r)) if r.mu < params.constant_value()
    )
}

pub fn bifurcation_alpha(a: f64, p: f64) -> Result<Bifurcation> {
    bifurcation_alpha_with(a, p, &ShootingConfig::default())
}

pub fn bifurcation_alpha_with(a: f64, p: f64, cfg: &ShootingConfig) -> Result<Bifurcation> {
    let a = ProblemParams::new(a, p, f64::MAX.sqrt())?.a();
    let formula = bifurcation_threshold(a, p);
    if a >= 0.5 {
        return Ok(Bifurcation { formula, empirical: None, discrepancy: None });
    }
    let exists = |alpha: f64| -> Result<bool> {
        Ok(has_nonconstant_branch(&ProblemParams::new(a, p, alpha)?, cfg))
    };
    let floor = -a * a;
    let mut d = 0.01;
    let mut hi = formula + d;
    while !exists(hi)? {
        d *= 2.0;
        hi = formula + d;
        if d > 64.0 {
            return Err(Error::NoBranch(format!("no branch up to alpha = {hi}")));
        }
    }
    let mut d = 0.01;
    let mut lo = formula - d;
    loop {
        if lo <= floor {
            lo = 0.5 * (floor + formula.max(floor));
            if lo <= floor || exists(lo)? {
                lo = floor + 1e-9;
            }
            break;
        }
        if !exists(lo)? {
            break;
        }
        hi = lo;
        d *= 2.0;
        lo = formula - d;
    }
    while hi - lo > ONSET_TOL {
        let mid = 0.5 * (lo + hi);
        if exists(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let empirical = 0.5 * (lo + hi);
    Ok(Bifurcation {
        formula,
        empirical: Some(empirical),
        discrepancy: Some((empirical - formula).abs()),
    })
}

/// Tolerance on `α` for [`alpha_inverse`].
pub const ALPHA_TOL: f64 = 1e-8;

/// The inverse `α_{a,p}` of `α ↦ μ_{a,p}(α)`.
///
/// Closed form `μ - a²` when `4a² + μ(p-2) ≤ 1`; otherwise a bracketed
/// regula falsi (Illinois variant) in `α`, starting from the lower bound
/// `μ - a²` and warm-starting each solve from the previous branch.
pub fn alpha_inverse(a: f64, p: f64, mu_target: f64) -> Result<f64> {
    alpha_inverse_with(a, p, mu_target, &ShootingConfig::default())
}

pub fn alpha_inverse_with(a: f64, p: f64, mu_target: f64, cfg: &ShootingConfig) -> Result<f64> {
    if !(mu_target >= 0.0) || !mu_target.is_finite() {
        return Err(Error::InvalidInput(format!("mu_target must be >= 0, got {mu_target}")));
    }
    let a = ProblemParams::new(a, p, f64::MAX.sqrt())?.a();
    let a2 = a * a;
    if mu_target == 0.0 {
        return Ok(-a2);
    }
    if 4.0 * a2 + mu_target * (p - 2.0) <= 1.0 {
        return Ok(mu_target - a2);
    }
    let mut warm: Option<WarmStart> = None;
    let mut g = |alpha: f64| -> Result<f64> {
        let params = ProblemParams::new(a, p, alpha)?;
        let r = solve_branch_with(&params, cfg, warm)?;
        if r.branch == Branch::Nonconstant {
            warm = Some(WarmStart::from(&r));
        }
        Ok(r.mu - mu_target)
    };
    // μ(α) ≤ a² + α, so α = μ - a² is never above the root.
    let mut lo = mu_target - a2;
    let mut g_lo = g(lo)?;
    if g_lo >= 0.0 {
        return Ok(lo);
    }
    let mut step = 0.25 * mu_target.max(0.1);
    let mut hi = lo + step;
    let mut g_hi = g(hi)?;
    while g_hi < 0.0 {
        lo = hi;
        g_lo = g_hi;
        step *= 2.0;
        hi = lo + step;
        g_hi = g(hi)?;
        if step > 1e6 {
            return Err(Error::NotConverged(format!("no upper bracket for mu = {mu_target}")));
        }
    }
    let mut side = 0i8;
    for _ in 0..200 {
        if hi - lo <= ALPHA_TOL {
            break;
        }
        let mut x = (lo * g_hi - hi * g_lo) / (g_hi - g_lo);
        // Keep strictly inside, and force progress if regula falsi stalls.
        let width = hi - lo;
        x = x.clamp(lo + 1e-3 * width, hi - 1e-3 * width);
        let gx = g(x)?;
        if gx == 0.0 {
            return Ok(x);
        }
        if gx < 0.0 {
            lo = x;
            g_lo = gx;
            if side == -1 {
                g_hi *= 0.5;
            }
            side = -1;
        } else {
            hi = x;
            g_hi = gx;
            if side == 1 {
                g_lo *= 0.5;
            }
            side = 1;
        }
    }
    if hi - lo > ALPHA_TOL {
        return Err(Error::NotConverged(format!(
            "alpha bracket [{lo}, {hi}] for mu = {mu_target} did not shrink"
        )));
    }
    Ok(0.5 * (lo + hi))
}
