//! Independent oracles and randomized property suites.
//!
//! [`direct_minimize`] minimizes the quotients by gradient descent, with no
//! knowledge of the Euler-Lagrange equation, and serves as the cross-check for
//! the shooting solver. The suites in [`run_all`] are seeded and reproducible;
//! cases are spread over [`crate::par::map`].

mod checks;
mod flow;
mod oracle;
pub mod random;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use checks::{
    diamagnetic_check, interp_zero2_margin, interp_zero_margin, modulus, rearrangement_check,
    taylor_coefficient_check, taylor_coefficient_formula, TAYLOR_EPSILONS, TAYLOR_GRID,
};
pub use flow::{bakry_emery_flow, default_step, flow_functional, FlowState};
pub use oracle::{direct_minimize, direct_minimize_with, max_increase, OracleConfig, OracleResult, Space};

use crate::circle::Grid;
use crate::error::Result;
use crate::forms::ProblemParams;
use crate::par;

/// Tolerances of the property suites.
pub mod tol {
    /// Allowed excess of `‖|ψ|'‖` over `‖ψ' + iaψ‖`.
    pub const DIAMAGNETIC: f64 = 1e-6;
    /// Allowed excess of the left side in the rearrangement inequality.
    pub const REARRANGEMENT: f64 = 1e-10;
    /// Relative mismatch allowed in the `p = 2` equality case.
    pub const REARRANGEMENT_EQUALITY: f64 = 1e-12;
    /// Largest per-step increase of the flow functional.
    pub const FLOW_STEP: f64 = 1e-10;
    /// Relative drift of `∫u^p` over the whole run.
    pub const FLOW_MASS: f64 = 1e-8;
    /// Relative agreement of the measured Taylor coefficient with the formula.
    pub const TAYLOR: f64 = 1e-2;
    /// Allowed negative margin in the static inequalities.
    pub const INTERP: f64 = 1e-12;
    /// Equality on constants in the `p = -2` inequality.
    pub const INTERP_EQUALITY: f64 = 1e-10;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub parallel: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { seed: 20_240_601, parallel: true }
    }
}

impl SuiteConfig {
    fn rng(&self, suite: u64, case: usize) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ (suite << 40) ^ case as u64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub passed: usize,
    /// Smallest slack over all cases (negative means violated, before tolerance).
    pub worst_margin: f64,
    pub detail: String,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.passed == self.cases
    }
}

struct Case {
    margin: f64,
    ok: bool,
}

fn report(name: &'static str, cases: &[Case], detail: String) -> SuiteReport {
    SuiteReport {
        name,
        cases: cases.len(),
        passed: cases.iter().filter(|c| c.ok).count(),
        worst_margin: cases.iter().map(|c| c.margin).fold(f64::INFINITY, f64::min),
        detail,
    }
}

fn failed(_: &crate::Error) -> Case {
    Case { margin: f64::NEG_INFINITY, ok: false }
}

/// `‖|ψ|'‖₂ ≤ ‖ψ' + iaψ‖₂` on 100 random band-limited `ψ`, `a = 0.25`.
pub fn diamagnetic_suite(cfg: &SuiteConfig) -> SuiteReport {
    let grid = Grid::new(256).expect("valid grid");
    let idx: Vec<usize> = (0..100).collect();
    let cases = par::map(&idx, cfg.parallel, |&i| {
        let psi = random::random_complex(grid, &mut cfg.rng(1, i), 8);
        let (lhs, rhs) = diamagnetic_check(&psi, 0.25);
        Case { margin: rhs - lhs, ok: lhs <= rhs + tol::DIAMAGNETIC }
    });
    report("diamagnetic", &cases, format!("a = 0.25, n = 256, tolerance {:e}", tol::DIAMAGNETIC))
}

/// Rearrangement inequality at `p = 4` on 100 random non-negative pairs, and
/// equality at `p = 2` on the same pairs.
pub fn rearrangement_suite(cfg: &SuiteConfig) -> SuiteReport {
    let grid = Grid::new(256).expect("valid grid");
    let idx: Vec<usize> = (0..100).collect();
    let per_pair = par::map(&idx, cfg.parallel, |&i| -> Result<[Case; 2]> {
        let mut rng = cfg.rng(2, i);
        let f = random::random_trig(grid, &mut rng, 8).map(f64::abs)?;
        let g = random::random_positive(grid, &mut rng, 8);
        let (l4, r4) = rearrangement_check(&f, &g, 4.0)?;
        let (l2, r2) = rearrangement_check(&f, &g, 2.0)?;
        let eq = (l2 - r2).abs();
        Ok([
            Case { margin: r4 - l4, ok: l4 <= r4 + tol::REARRANGEMENT },
            Case { margin: -eq, ok: eq <= tol::REARRANGEMENT_EQUALITY * l2 },
        ])
    });
    let cases: Vec<Case> = per_pair
        .into_iter()
        .flat_map(|r| match r {
            Ok(c) => c.into_iter().collect::<Vec<_>>(),
            Err(e) => vec![failed(&e), failed(&e)],
        })
        .collect();
    report("rearrangement", &cases, "100 pairs at p = 4, same pairs for p = 2 equality".into())
}

/// The flow from 20 random positive data: per-step monotonicity of the
/// functional, conservation of `∫u^p`, and `F[u0] ≥ 0`.
pub fn flow_suite(cfg: &SuiteConfig) -> SuiteReport {
    let grid = Grid::new(128).expect("valid grid");
    let exponents = [3.0, 4.0, 6.0];
    let idx: Vec<usize> = (0..20).collect();
    let results = par::map(&idx, cfg.parallel, |&i| -> Result<(f64, f64, f64)> {
        let p = exponents[i % exponents.len()];
        let t = random::random_trig(grid, &mut cfg.rng(3, i), 8);
        let amp = t.sup_norm().max(f64::MIN_POSITIVE);
        let u0 = t.map(|v| 1.0 + 0.3 * v / amp)?;
        let states = bakry_emery_flow(&u0, p, default_step(&u0), 0.5)?;
        let values: Vec<f64> = states.iter().map(|s| s.functional_value).collect();
        let m0 = states[0].mass_p;
        let drift = states.iter().map(|s| (s.mass_p - m0).abs()).fold(0.0, f64::max) / m0;
        Ok((values[0], max_increase(&values), drift))
    });
    let mut worst_step: f64 = 0.0;
    let mut worst_drift: f64 = 0.0;
    let cases: Vec<Case> = results
        .iter()
        .map(|r| match r {
            Ok((f0, inc, drift)) => {
                worst_step = worst_step.max(*inc);
                worst_drift = worst_drift.max(*drift);
                Case {
                    margin: f0.min(-inc),
                    ok: *inc <= tol::FLOW_STEP && *drift <= tol::FLOW_MASS && *f0 >= -tol::INTERP,
                }
            }
            Err(e) => failed(e),
        })
        .collect();
    report(
        "flow",
        &cases,
        format!("max step increase {worst_step:.2e}, max relative mass drift {worst_drift:.2e}"),
    )
}

/// Parameter points for [`taylor_suite`]; all keep `|1 - a²(p+2) - α(p-2)| ≥ 0.1`.
pub const TAYLOR_POINTS: [(f64, f64, f64); 10] = [
    (0.0, 4.0, 0.25),
    (0.2, 4.0, 1.0),
    (0.1, 3.0, 0.5),
    (0.3, 4.0, 0.0),
    (0.45, 4.0, 0.5),
    (0.0, 6.0, 0.1),
    (0.25, 6.0, 0.5),
    (0.4, 3.0, -0.1),
    (0.15, 5.0, 2.0),
    (0.35, 2.5, 2.0),
];

/// The measured `ε²` coefficient of `𝒬[1 + ε(1+cos s)]` against
/// `1 - a²(p+2) - α(p-2)` at [`TAYLOR_POINTS`].
pub fn taylor_suite(cfg: &SuiteConfig) -> SuiteReport {
    let results = par::map(&TAYLOR_POINTS, cfg.parallel, |&(a, p, alpha)| -> Result<(f64, f64)> {
        let params = ProblemParams::new(a, p, alpha)?;
        Ok((taylor_coefficient_check(&params)?, taylor_coefficient_formula(&params)))
    });
    let mut ratios = Vec::new();
    let mut signs_agree = true;
    let cases: Vec<Case> = results
        .iter()
        .map(|r| match r {
            Ok((measured, stated)) => {
                ratios.push(measured / stated);
                signs_agree &= measured.signum() == stated.signum();
                let rel = (measured - stated).abs() / stated.abs();
                Case { margin: tol::TAYLOR - rel, ok: rel <= tol::TAYLOR }
            }
            Err(e) => failed(e),
        })
        .collect();
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    report(
        "taylor",
        &cases,
        format!("measured/stated ratio in [{lo:.6}, {hi:.6}], signs agree: {signs_agree}"),
    )
}

/// `‖u'‖² + β‖u‖₂² ≥ β‖u‖_p²` for 100 random `u` (half of them sign-changing),
/// `p ∈ {3, 4, 6}`, `β` uniform in `(0, 1/(p-2)]`.
pub fn interp_zero_suite(cfg: &SuiteConfig) -> SuiteReport {
    let grid = Grid::new(256).expect("valid grid");
    let exponents = [3.0, 4.0, 6.0];
    let idx: Vec<usize> = (0..100).collect();
    let cases = par::map(&idx, cfg.parallel, |&i| {
        let mut rng = cfg.rng(5, i);
        let p = exponents[i % exponents.len()];
        let beta = (1.0 - rng.gen::<f64>()) / (p - 2.0);
        let u = if i % 2 == 0 {
            random::random_trig(grid, &mut rng, 8)
        } else {
            random::random_positive(grid, &mut rng, 8)
        };
        match interp_zero_margin(&u, p, beta) {
            Ok(m) => Case { margin: m, ok: m >= -tol::INTERP },
            Err(e) => failed(&e),
        }
    });
    report("interp_zero", &cases, "p in {3,4,6}, beta in (0, 1/(p-2)]".into())
}

/// `‖u'‖² + ¼(∫u⁻²)⁻¹ ≥ ¼‖u‖₂²` for 100 random positive `u`, with equality on
/// five constants.
pub fn interp_zero2_suite(cfg: &SuiteConfig) -> SuiteReport {
    let grid = Grid::new(256).expect("valid grid");
    let idx: Vec<usize> = (0..105).collect();
    let cases = par::map(&idx, cfg.parallel, |&i| {
        if i >= 100 {
            let c = 0.5 * (i - 99) as f64;
            let u = grid.sample(|_| c).expect("finite");
            return match interp_zero2_margin(&u) {
                Ok(m) => Case { margin: -m.abs(), ok: m.abs() <= tol::INTERP_EQUALITY },
                Err(e) => failed(&e),
            };
        }
        let u = random::random_positive(grid, &mut cfg.rng(6, i), 8);
        match interp_zero2_margin(&u) {
            Ok(m) => Case { margin: m, ok: m >= -tol::INTERP },
            Err(e) => failed(&e),
        }
    });
    report("interp_zero2", &cases, "100 random positive u plus 5 constants".into())
}

/// Every property suite, in a fixed order.
pub fn run_all(cfg: &SuiteConfig) -> Vec<SuiteReport> {
    vec![
        diamagnetic_suite(cfg),
        rearrangement_suite(cfg),
        flow_suite(cfg),
        taylor_suite(cfg),
        interp_zero_suite(cfg),
        interp_zero2_suite(cfg),
    ]
}
