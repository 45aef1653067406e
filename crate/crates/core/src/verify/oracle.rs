//! Direct minimization of the Rayleigh quotients, independent of the shooting
//! solver: preconditioned gradient descent with Armijo backtracking on the
//! zero-homogeneous quotient, from several seeded starts.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::circle::{apply_multiplier, ComplexFunction, Grid, GridFunction, RealFunction};
use crate::error::{Error, Result};
use crate::forms::{apply_magnetic, demodulate, magnetic_form, ProblemParams};
use crate::verify::random::{random_complex, random_positive};

/// Function space for [`direct_minimize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    /// Complex periodic `ψ` with the magnetic energy `Σ (a+k)²|ψ_k|²`.
    ComplexPeriodic,
    /// Positive periodic `u` with the reduced quotient carrying `a²(∫u⁻²)⁻¹`.
    RealPositive,
    /// Real `v` vanishing at `±π` (stored through its antiperiodic
    /// continuation; the node at `-π` is pinned to zero). `a` is ignored.
    Dirichlet,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub max_iterations: usize,
    pub gradient_tol: f64,
    pub restarts: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { max_iterations: 100_000, gradient_tol: 1e-7, restarts: 5 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub mu_hat: f64,
    /// `|ψ|` for the complex space, the function itself otherwise; scaled to
    /// unit `L^p` norm.
    pub minimizer: RealFunction,
    /// The complex minimizer (real for the real spaces).
    pub field: ComplexFunction,
    pub iterations: usize,
    /// Preconditioned (`H⁻¹`-type) norm of the quotient gradient at the
    /// returned point, with the point at unit `L^p` norm.
    pub gradient_norm: f64,
    /// Quotient values along the accepted descent steps of the best restart.
    pub history: Vec<f64>,
    /// Final quotient of every restart, in order.
    pub restart_values: Vec<f64>,
}

impl OracleResult {
    /// `(max - min) / max` of the minimizer modulus.
    pub fn relative_oscillation(&self) -> f64 {
        (self.minimizer.max() - self.minimizer.min()) / self.minimizer.max()
    }
}

struct Problem {
    space: Space,
    a: f64,
    p: f64,
    alpha: f64,
    grid: Grid,
}

fn dot(x: &[Complex64], y: &[Complex64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a.conj() * b).re).sum::<f64>() / x.len() as f64
}

impl Problem {
    /// Kinetic weight of mode `k`.
    fn weight(&self, k: i64) -> f64 {
        let w = match self.space {
            Space::ComplexPeriodic => self.a + k as f64,
            Space::RealPositive => k as f64,
            Space::Dirichlet => k as f64 + 0.5,
        };
        w * w
    }

    fn twist(&self) -> f64 {
        if self.space == Space::Dirichlet {
            0.5
        } else {
            0.0
        }
    }

    fn function(&self, x: &[Complex64]) -> ComplexFunction {
        GridFunction::new(self.grid, x.to_vec()).expect("finite iterate")
    }

    /// `(Σ w_k |ψ_k|², 2 L x)` for the kinetic part.
    fn kinetic(&self, x: &[Complex64]) -> (f64, Vec<Complex64>) {
        match self.space {
            Space::ComplexPeriodic => {
                let f = self.function(x);
                let lx = apply_magnetic(x, self.a);
                (magnetic_form(&f, self.a), lx.into_iter().map(|z| 2.0 * z).collect())
            }
            Space::RealPositive => {
                let f = self.function(x);
                let lx = apply_magnetic(x, 0.0);
                (magnetic_form(&f, 0.0), lx.into_iter().map(|z| Complex64::new(2.0 * z.re, 0.0)).collect())
            }
            Space::Dirichlet => {
                let psi = demodulate(&self.function(x), 0.5);
                let energy = magnetic_form(&psi, 0.5);
                let lpsi = apply_magnetic(psi.values(), 0.5);
                let g = self
                    .grid
                    .nodes()
                    .zip(lpsi)
                    .map(|(s, z)| Complex64::new(2.0 * (Complex64::from_polar(1.0, 0.5 * s) * z).re, 0.0))
                    .collect();
                (energy, g)
            }
        }
    }

    fn admissible(&self, x: &[Complex64]) -> bool {
        match self.space {
            Space::RealPositive => x.iter().all(|z| z.re > 0.0),
            _ => x.iter().any(|z| z.norm() > 0.0),
        }
    }

    /// Quotient and its `L²(dσ)` gradient.
    fn evaluate(&self, x: &[Complex64]) -> (f64, Vec<Complex64>) {
        let n = x.len() as f64;
        let (kin, mut num_grad) = self.kinetic(x);
        let l2 = x.iter().map(|z| z.norm_sqr()).sum::<f64>() / n;
        let mut num = kin + self.alpha * l2;
        for (g, z) in num_grad.iter_mut().zip(x) {
            *g += 2.0 * self.alpha * z;
        }
        if self.space == Space::RealPositive && self.a != 0.0 {
            let mass = x.iter().map(|z| z.re.powi(-2)).sum::<f64>() / n;
            let a2 = self.a * self.a;
            num += a2 / mass;
            for (g, z) in num_grad.iter_mut().zip(x) {
                *g += 2.0 * a2 * z.re.powi(-3) / (mass * mass);
            }
        }
        let lp_int = x.iter().map(|z| z.norm().powf(self.p)).sum::<f64>() / n;
        let den = lp_int.powf(2.0 / self.p);
        let q = num / den;
        let c = 2.0 * lp_int.powf(2.0 / self.p - 1.0);
        let grad = num_grad
            .iter()
            .zip(x)
            .map(|(gn, z)| (gn - q * c * z.norm().powf(self.p - 2.0) * z) / den)
            .collect();
        (q, grad)
    }

    fn project(&self, g: &mut [Complex64]) {
        match self.space {
            Space::ComplexPeriodic => {}
            Space::RealPositive => g.iter_mut().for_each(|z| z.im = 0.0),
            Space::Dirichlet => {
                g.iter_mut().for_each(|z| z.im = 0.0);
                g[0] = Complex64::new(0.0, 0.0);
            }
        }
    }

    /// `(1 + w_k)⁻¹` in the (twisted) Fourier basis.
    fn smooth(&self, g: &[Complex64]) -> Vec<Complex64> {
        let t = self.twist();
        let demod: Vec<Complex64> = self
            .grid
            .nodes()
            .zip(g)
            .map(|(s, z)| z * Complex64::from_polar(1.0, -t * s))
            .collect();
        let smooth = apply_multiplier(&demod, |k| Complex64::new(1.0 / (1.0 + self.weight(k)), 0.0));
        self.grid
            .nodes()
            .zip(smooth)
            .map(|(s, z)| z * Complex64::from_polar(1.0, t * s))
            .collect()
    }

    /// Preconditioned descent direction. For the Dirichlet space the pinned
    /// node is enforced by projecting in the preconditioner's metric, which
    /// keeps the conditioning of the unconstrained problem.
    fn precondition(&self, g: &[Complex64]) -> Vec<Complex64> {
        let mut out = self.smooth(g);
        if self.space == Space::Dirichlet {
            let mut e0 = vec![Complex64::new(0.0, 0.0); g.len()];
            e0[0] = Complex64::new(1.0, 0.0);
            let z = self.smooth(&e0);
            let c = out[0].re / z[0].re;
            out.iter_mut().zip(&z).for_each(|(o, zi)| *o -= c * zi);
        }
        self.project(&mut out);
        out
    }

    fn normalize(&self, x: &mut [Complex64]) {
        let n = x.len() as f64;
        let norm = (x.iter().map(|z| z.norm().powf(self.p)).sum::<f64>() / n).powf(1.0 / self.p);
        x.iter_mut().for_each(|z| *z /= norm);
    }

    /// One descent run; returns (point, quotient, gradient norm, iterations, history).
    fn descend(&self, mut x: Vec<Complex64>, cfg: &OracleConfig) -> Result<Run> {
        self.normalize(&mut x);
        let (mut q, mut g) = self.evaluate(&x);
        self.project(&mut g);
        let mut pg = self.precondition(&g);
        let mut gn2 = dot(&g, &pg);
        let mut history = vec![q];
        let mut t: f64 = 1.0;
        let mut it = 0;
        while it < cfg.max_iterations && gn2.sqrt() > cfg.gradient_tol {
            it += 1;
            t = (2.0 * t).min(1e3);
            let accepted = loop {
                let trial: Vec<Complex64> = x.iter().zip(&pg).map(|(xi, d)| xi - t * d).collect();
                if self.admissible(&trial) {
                    let mut trial = trial;
                    self.normalize(&mut trial);
                    let (qt, gt) = self.evaluate(&trial);
                    if qt <= q - 1e-4 * t * gn2 {
                        break Some((trial, qt, gt));
                    }
                }
                t *= 0.5;
                if t < 1e-14 {
                    break None;
                }
            };
            let Some((xn, qn, mut gnew)) = accepted else {
                break;
            };
            if qn > q {
                return Err(Error::NotConverged(format!(
                    "descent increased the quotient from {q} to {qn}"
                )));
            }
            self.project(&mut gnew);
            x = xn;
            q = qn;
            g = gnew;
            pg = self.precondition(&g);
            gn2 = dot(&g, &pg);
            history.push(q);
        }
        Ok(Run { x, q, gradient_norm: gn2.max(0.0).sqrt(), iterations: it, history })
    }

    fn starts(&self, restarts: usize, seed: u64) -> Vec<Vec<Complex64>> {
        let grid = self.grid;
        let mut out = Vec::with_capacity(restarts);
        let first: Vec<Complex64> = grid
            .nodes()
            .map(|s| match self.space {
                Space::Dirichlet => (0.5 * s).cos() + 1e-3 * (1.5 * s).cos(),
                _ => 1.0 + 1e-3 * s.cos(),
            })
            .map(|v| Complex64::new(v, 0.0))
            .collect();
        out.push(first);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 1..restarts {
            let x: Vec<Complex64> = match self.space {
                Space::ComplexPeriodic => {
                    let f = random_complex(grid, &mut rng, 8);
                    f.values().iter().map(|z| z + 1.5).collect()
                }
                Space::RealPositive => {
                    random_positive(grid, &mut rng, 8).values().iter().map(|&v| v.into()).collect()
                }
                Space::Dirichlet => {
                    let w = random_positive(grid, &mut rng, 8);
                    grid.nodes()
                        .zip(w.values())
                        .map(|(s, &v)| Complex64::new((0.5 * s).cos() * v, 0.0))
                        .collect()
                }
            };
            out.push(x);
        }
        if self.space == Space::Dirichlet {
            for x in &mut out {
                x[0] = Complex64::new(0.0, 0.0);
            }
        }
        out
    }
}

struct Run {
    x: Vec<Complex64>,
    q: f64,
    gradient_norm: f64,
    iterations: usize,
    history: Vec<f64>,
}

/// Minimizes the quotient of `space` on an `n`-node grid from the
/// near-constant start plus `restarts - 1` seeded random starts, keeping the
/// smallest value. Fails if the best run did not reach the gradient tolerance.
pub fn direct_minimize(params: &ProblemParams, space: Space, n: usize, seed: u64) -> Result<OracleResult> {
    direct_minimize_with(params, space, n, seed, &OracleConfig::default())
}

pub fn direct_minimize_with(
    params: &ProblemParams,
    space: Space,
    n: usize,
    seed: u64,
    cfg: &OracleConfig,
) -> Result<OracleResult> {
    if !n.is_power_of_two() || n < 128 {
        return Err(Error::InvalidGrid(format!("oracle grid must be a power of two >= 128, got {n}")));
    }
    if space == Space::Dirichlet && params.alpha() <= -0.25 {
        return Err(Error::InvalidParams("Dirichlet quotient needs alpha > -1/4".into()));
    }
    let problem = Problem {
        space,
        a: params.a(),
        p: params.p(),
        alpha: params.alpha(),
        grid: Grid::new(n)?,
    };
    let mut best: Option<Run> = None;
    let mut restart_values = Vec::with_capacity(cfg.restarts);
    for start in problem.starts(cfg.restarts.max(1), seed) {
        let run = problem.descend(start, cfg)?;
        restart_values.push(run.q);
        if best.as_ref().is_none_or(|b| run.q < b.q) {
            best = Some(run);
        }
    }
    let best = best.expect("at least one restart");
    if best.gradient_norm > cfg.gradient_tol {
        return Err(Error::NotConverged(format!(
            "oracle stopped at gradient norm {:.3e} after {} iterations (quotient {})",
            best.gradient_norm, best.iterations, best.q
        )));
    }
    let field = GridFunction::new(problem.grid, best.x)?;
    let minimizer = field.map(|z: Complex64| z.norm())?;
    Ok(OracleResult {
        mu_hat: best.q,
        minimizer,
        field,
        iterations: best.iterations,
        gradient_norm: best.gradient_norm,
        history: best.history,
        restart_values,
    })
}

/// Largest upward step along a quotient history (zero for a monotone run).
pub fn max_increase(history: &[f64]) -> f64 {
    history.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
}
