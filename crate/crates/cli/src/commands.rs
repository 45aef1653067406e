//! Subcommand bodies. Each writes its report to `out` and returns an error
//! carrying the exit status on failure.

use std::io::Write;

use magring::circle::Grid;
use magring::shooting::{
    bifurcation_alpha_with, dirichlet_nu_with, mu_curve_with, solve_branch_with, ShootingConfig, SweepMode,
};
use magring::spectral::{hardy_tau, klt_check_with};
use magring::verify::{run_all, SuiteConfig};
use magring::{ProblemParams, RealFunction};

use crate::error::{CliError, CliResult};
use crate::format::{g12, write_csv};

fn bool_field(b: bool) -> String {
    b.to_string()
}

pub struct CurveArgs {
    pub a: f64,
    pub p: f64,
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub steps: usize,
    pub parallel: bool,
}

/// `alpha,mu_constant,mu_branch,mu,branch`. Every row is a cold start, so the
/// bytes do not depend on `parallel`. Failed rows print `nan`/`error` and turn
/// the exit status numeric after the whole curve is written.
pub fn mu_curve(args: &CurveArgs, cfg: &ShootingConfig, out: &mut dyn Write) -> CliResult<()> {
    let curve = mu_curve_with(
        args.a,
        args.p,
        args.alpha_min,
        args.alpha_max,
        args.steps,
        SweepMode::ColdStart { parallel: args.parallel },
        cfg,
    )?;
    let rows: Vec<Vec<String>> = curve
        .rows
        .iter()
        .map(|r| {
            vec![
                g12(r.alpha),
                g12(r.mu_constant),
                r.mu_branch.map(g12).unwrap_or_default(),
                g12(r.mu),
                if r.error.is_some() { "error".into() } else { r.branch.to_string() },
            ]
        })
        .collect();
    write_csv(out, &["alpha", "mu_constant", "mu_branch", "mu", "branch"], &rows)?;
    let failures: Vec<String> = curve
        .failures()
        .map(|r| format!("alpha = {}: {}", r.alpha, r.error.as_deref().unwrap_or_default()))
        .collect();
    if !failures.is_empty() {
        return Err(CliError::Numeric(failures.join("\n")));
    }
    Ok(())
}

/// Keeps every `n / m`-th sample; both grids start at `-π`.
fn subsample(f: &RealFunction, m: usize) -> Vec<f64> {
    let stride = f.len() / m;
    f.values().iter().step_by(stride).copied().collect()
}

/// `s,u` for the minimizer, plus `u_limit` (the Dirichlet limit profile) when
/// `limit` is set. The two profiles are reported on the coarser grid.
pub fn profile(params: &ProblemParams, limit: bool, cfg: &ShootingConfig, out: &mut dyn Write) -> CliResult<()> {
    let main = solve_branch_with(params, cfg, None)?.profile;
    let lim = if limit { Some(dirichlet_nu_with(params.p(), params.alpha(), cfg)?.profile) } else { None };
    let n = lim.as_ref().map_or(main.len(), |l| l.len().min(main.len()));
    let grid = Grid::new(n)?;
    let u = subsample(&main, n);
    let ul = lim.map(|l| subsample(&l, n));
    let rows: Vec<Vec<String>> = grid
        .nodes()
        .enumerate()
        .map(|(j, s)| {
            let mut row = vec![g12(s), g12(u[j])];
            if let Some(ul) = &ul {
                row.push(g12(ul[j]));
            }
            row
        })
        .collect();
    let header: &[&str] = if ul.is_some() { &["s", "u", "u_limit"] } else { &["s", "u"] };
    write_csv(out, header, &rows)
}

pub fn bifurcation(a: f64, p: f64, cfg: &ShootingConfig, out: &mut dyn Write) -> CliResult<()> {
    let b = bifurcation_alpha_with(a, p, cfg)?;
    let opt = |x: Option<f64>| x.map(g12).unwrap_or_default();
    write_csv(
        out,
        &["alpha_star_formula", "alpha_star_empirical", "discrepancy"],
        &[vec![g12(b.formula), opt(b.empirical), opt(b.discrepancy)]],
    )
}

pub fn nu(p: f64, alpha: f64, cfg: &ShootingConfig, out: &mut dyn Write) -> CliResult<()> {
    let r = dirichlet_nu_with(p, alpha, cfg)?;
    write_csv(out, &["p", "alpha", "nu"], &[vec![g12(p), g12(alpha), g12(r.mu)]])
}

/// The potential problems only use `(a, p)`; `α` is irrelevant there.
fn potential_params(a: f64, p: f64) -> CliResult<ProblemParams> {
    Ok(ProblemParams::new(a, p, 1.0)?)
}

pub fn klt(a: f64, p: f64, phi: &RealFunction, cfg: &ShootingConfig, out: &mut dyn Write) -> CliResult<()> {
    let r = klt_check_with(&potential_params(a, p)?, phi, cfg)?;
    write_csv(
        out,
        &["lambda1", "bound", "margin", "q_norm", "closed_form_regime", "cutoff"],
        &[vec![
            g12(r.lambda1),
            g12(r.bound),
            g12(r.margin),
            g12(r.q_norm),
            bool_field(r.closed_form_regime),
            r.cutoff.to_string(),
        ]],
    )
}

pub fn hardy(a: f64, p: f64, phi: &RealFunction, out: &mut dyn Write) -> CliResult<()> {
    let r = hardy_tau(&potential_params(a, p)?, phi)?;
    write_csv(
        out,
        &["tau", "q_norm", "mu_at_zero", "closed_form_regime", "closed_form_value"],
        &[vec![
            g12(r.tau),
            g12(r.q_norm),
            g12(r.mu_at_zero),
            bool_field(r.closed_form_regime),
            g12(r.closed_form_value),
        ]],
    )
}

/// One line per suite; numeric failure unless every suite passes.
pub fn verify(cfg: &SuiteConfig, out: &mut dyn Write) -> CliResult<()> {
    let reports = run_all(cfg);
    for r in &reports {
        writeln!(
            out,
            "{} {:<14} {}/{} worst_margin={} {}",
            if r.ok() { "PASS" } else { "FAIL" },
            r.name,
            r.passed,
            r.cases,
            g12(r.worst_margin),
            r.detail
        )?;
    }
    let failed: Vec<&str> = reports.iter().filter(|r| !r.ok()).map(|r| r.name).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Numeric(format!("suites failed: {}", failed.join(", "))))
    }
}
