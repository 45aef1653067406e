//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails. Tolerances are the constants below.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use magring::circle::{lp_norm, Grid};
use magring::par;
use magring::shooting::{alpha_inverse, dirichlet_nu, mu_curve_with, solve_branch, ShootingConfig, SweepMode};
use magring::spectral::{hardy_tau, klt_check, lambda1};
use magring::verify::random::random_potential;
use magring::verify::{direct_minimize, Space};
use magring::{ProblemParams, RealFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BIFURCATION_TOL: f64 = 1e-3;
const BIFURCATION_TIME: Duration = Duration::from_secs(60);
const RIGID_TOL: f64 = 1e-5;
const RIGID_OSCILLATION: f64 = 1e-4;
const AGREEMENT_TOL: f64 = 1e-4;
const LIMIT_GAP: f64 = 1e-2;
const PROFILE_GAP: f64 = 0.05;
const KLT_TOL: f64 = 1e-8;
const HARDY_TOL: f64 = 1e-8;
const SUITE_TIME: Duration = Duration::from_secs(300);
const CUTOFF_TOL: f64 = 1e-8;
const QUADRATURE_TOL: f64 = 1e-10;
const CURVE_TOL: f64 = 1e-9;
const ORACLE_N: usize = 128;

struct Outcome {
    pass: bool,
    summary: String,
}

fn params(a: f64, p: f64, alpha: f64) -> ProblemParams {
    ProblemParams::new(a, p, alpha).expect("admissible parameters")
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_magring"))
}

fn bifurcation() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (a, p, stated) in [(0.45, 4.0, -0.1075), (0.2, 4.0, 0.38)] {
        let t = Instant::now();
        let out = bin()
            .args(["bifurcation", "--a", &a.to_string(), "--p", &p.to_string()])
            .output()
            .expect("run binary");
        let elapsed = t.elapsed();
        let text = String::from_utf8_lossy(&out.stdout);
        let fields: Vec<f64> = text
            .lines()
            .nth(1)
            .map(|l| l.split(',').filter_map(|x| x.parse().ok()).collect())
            .unwrap_or_default();
        let ok = out.status.success()
            && fields.len() == 3
            && (fields[0] - stated).abs() <= 1e-12
            && fields[2] <= BIFURCATION_TOL
            && elapsed <= BIFURCATION_TIME;
        pass &= ok;
        parts.push(format!(
            "({a},{p}): {} in {:.1}s",
            text.lines().nth(1).unwrap_or("no output"),
            elapsed.as_secs_f64()
        ));
    }
    Outcome { pass, summary: parts.join("; ") }
}

const RIGID_POINTS: [(f64, f64, f64); 20] = [
    (0.0, 3.0, 0.5),
    (0.0, 4.0, 0.25),
    (0.0, 6.0, 0.1),
    (0.1, 3.0, 0.9),
    (0.1, 4.0, 0.3),
    (0.1, 6.0, 0.2),
    (0.2, 3.0, 0.7),
    (0.2, 4.0, 0.2),
    (0.2, 6.0, 0.05),
    (0.25, 3.0, 0.6),
    (0.25, 4.0, 0.1),
    (0.25, 6.0, 0.0),
    (0.3, 3.0, 0.5),
    (0.3, 4.0, 0.0),
    (0.3, 6.0, -0.05),
    (0.35, 4.0, -0.05),
    (0.4, 3.0, 0.1),
    (0.4, 4.0, -0.1),
    (0.45, 3.0, -0.05),
    (0.45, 4.0, -0.15),
];

fn rigidity() -> Outcome {
    let out = par::map(&RIGID_POINTS, true, |&(a, p, alpha)| {
        let pr = params(a, p, alpha);
        assert!(pr.in_rigidity_region());
        let c = pr.constant_value();
        let shoot = solve_branch(&pr).map(|r| r.mu).unwrap_or(f64::NAN);
        let (oracle, osc) = direct_minimize(&pr, Space::ComplexPeriodic, ORACLE_N, 1)
            .map(|r| (r.mu_hat, r.relative_oscillation()))
            .unwrap_or((f64::NAN, f64::NAN));
        ((shoot - c).abs().max((oracle - c).abs()), osc)
    });
    let worst = out.iter().map(|x| x.0).fold(0.0, f64::max);
    let worst_osc = out.iter().map(|x| x.1).fold(0.0, f64::max);
    let pass = out.iter().all(|&(d, o)| d <= RIGID_TOL && o <= RIGID_OSCILLATION);
    Outcome {
        pass,
        summary: format!(
            "{} points, max |mu - (a^2+alpha)| = {worst:.2e}, max oracle oscillation = {worst_osc:.2e}",
            out.len()
        ),
    }
}

const PAST_POINTS: [(f64, f64, f64); 10] = [
    (0.2, 4.0, 1.0),
    (0.2, 4.0, 0.6),
    (0.45, 4.0, 0.0),
    (0.45, 4.0, 0.5),
    (0.1, 6.0, 0.5),
    (0.3, 6.0, 0.3),
    (0.0, 6.0, 0.6),
    (0.35, 3.0, 1.2),
    (0.1, 3.0, 1.5),
    (0.4, 4.0, 0.3),
];

fn agreement() -> Outcome {
    let out = par::map(&PAST_POINTS, true, |&(a, p, alpha)| {
        let pr = params(a, p, alpha);
        assert!(!pr.in_rigidity_region());
        let shoot = solve_branch(&pr).map(|r| r.mu).unwrap_or(f64::NAN);
        let oracle = direct_minimize(&pr, Space::ComplexPeriodic, ORACLE_N, 2).map(|r| r.mu_hat).unwrap_or(f64::NAN);
        ((shoot - oracle).abs(), pr.constant_value() - shoot.max(oracle))
    });
    let worst = out.iter().map(|x| x.0).fold(0.0, f64::max);
    let margin = out.iter().map(|x| x.1).fold(f64::INFINITY, f64::min);
    let pass = out.iter().all(|&(d, m)| d <= AGREEMENT_TOL && m > 0.0);
    Outcome {
        pass,
        summary: format!("{} points, max |shoot - oracle| = {worst:.2e}, min (a^2+alpha) - mu = {margin:.4}", out.len()),
    }
}

fn dirichlet_limit() -> Outcome {
    let nu = dirichlet_nu(4.0, 0.0).map(|r| r.mu).unwrap_or(f64::NAN);
    let flux = [0.45, 0.47, 0.49, 0.499];
    let mus: Vec<f64> = flux
        .iter()
        .map(|&a| solve_branch(&params(a, 4.0, 0.0)).map(|r| r.mu).unwrap_or(f64::NAN))
        .collect();
    let oracle = direct_minimize(&params(0.5, 4.0, 0.0), Space::Dirichlet, ORACLE_N, 3)
        .map(|r| r.mu_hat)
        .unwrap_or(f64::NAN);
    let increasing = mus.windows(2).all(|w| w[0] < w[1]);
    let gap = nu - mus[3];
    let pass = increasing && gap.abs() <= LIMIT_GAP && (nu - oracle).abs() <= AGREEMENT_TOL;
    Outcome {
        pass,
        summary: format!(
            "mu(a) = {:?}, nu = {nu:.9}, nu - mu(0.499) = {gap:.2e}, |nu - oracle| = {:.2e}",
            mus.iter().map(|m| format!("{m:.9}")).collect::<Vec<_>>(),
            (nu - oracle).abs()
        ),
    }
}

fn sup_distance_coarse(f: &RealFunction, g: &RealFunction) -> f64 {
    let n = f.len().min(g.len());
    let (sf, sg) = (f.len() / n, g.len() / n);
    (0..n).map(|j| (f.values()[j * sf] - g.values()[j * sg]).abs()).fold(0.0, f64::max)
}

fn profiles() -> Outcome {
    let Ok(limit) = dirichlet_nu(4.0, 0.0) else {
        return Outcome { pass: false, summary: "Dirichlet solve failed".into() };
    };
    let dists: Vec<f64> = (0..10)
        .map(|i| {
            let a = 0.40 + 0.01 * i as f64;
            solve_branch(&params(a, 4.0, 0.0))
                .map(|r| sup_distance_coarse(&r.profile, &limit.profile))
                .unwrap_or(f64::NAN)
        })
        .collect();
    let decreasing = dists.windows(2).all(|w| w[1] < w[0]);
    let pass = decreasing && dists[9] <= PROFILE_GAP;
    Outcome {
        pass,
        summary: format!("sup distances a = 0.40..0.49: {:?}", dists.iter().map(|d| format!("{d:.4}")).collect::<Vec<_>>()),
    }
}

fn klt() -> Outcome {
    let grid = Grid::new(256).expect("grid");
    let mut cases = Vec::new();
    for a in [0.2, 0.45] {
        for i in 0..100u64 {
            cases.push((a, i));
        }
    }
    let margins = par::map(&cases, true, |&(a, i)| {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + i);
        let q_norm = rng.gen_range(0.05..1.5);
        let phi = random_potential(grid, &mut rng, 8, 2.0, q_norm);
        klt_check(&params(a, 4.0, 1.0), &phi).map(|r| r.margin).unwrap_or(f64::NAN)
    });
    let worst = margins.iter().copied().fold(f64::INFINITY, f64::min);
    let random_ok = margins.iter().all(|&m| m >= -KLT_TOL);
    let mut tight = 0.0f64;
    let mut tight_ok = true;
    for (a, c) in [(0.2, 0.1), (0.2, 0.3), (0.45, 0.04), (0.3, 0.05)] {
        let phi = grid.sample(|_| c).expect("finite");
        match klt_check(&params(a, 4.0, 1.0), &phi) {
            Ok(r) => {
                tight_ok &= r.closed_form_regime && r.margin.abs() <= KLT_TOL;
                tight = tight.max(r.margin.abs());
            }
            Err(_) => tight_ok = false,
        }
    }
    Outcome {
        pass: random_ok && tight_ok,
        summary: format!(
            "{} random potentials, min margin = {worst:.3e}; constant potentials max |margin| = {tight:.2e}",
            margins.len()
        ),
    }
}

fn hardy() -> Outcome {
    let grid = Grid::new(256).expect("grid");
    let potentials: Vec<(f64, RealFunction, &str)> = vec![
        (0.2, grid.sample(|_| 0.1).unwrap(), "0.1"),
        (0.3, grid.sample(|s| 0.2 * (1.0 + 0.5 * s.cos())).unwrap(), "0.2(1+cos/2)"),
        (0.4, grid.sample(|_| 0.05).unwrap(), "0.05"),
        (0.45, grid.sample(|_| 0.05).unwrap(), "0.05"),
        (0.45, grid.sample(|s| 0.8 + 0.3 * s.cos()).unwrap(), "0.8+0.3cos"),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (a, phi, label) in &potentials {
        let Ok(h) = hardy_tau(&params(*a, 4.0, 1.0), phi) else {
            pass = false;
            parts.push(format!("a={a}, phi={label}: solve failed"));
            continue;
        };
        let root = alpha_inverse(*a, 4.0, h.tau * h.q_norm).unwrap_or(f64::NAN);
        pass &= root.abs() <= HARDY_TOL;
        if h.closed_form_regime {
            let dev = (h.tau - h.closed_form_value).abs();
            pass &= dev <= HARDY_TOL;
            parts.push(format!(
                "a={a}, phi={label}: tau={:.9} vs a^2/|phi|_q={:.9} (dev {dev:.2e}), alpha(tau|phi|)={root:.1e}",
                h.tau, h.closed_form_value
            ));
        } else {
            parts.push(format!("a={a}, phi={label}: outside regime, tau={:.9}, alpha(tau|phi|)={root:.1e}", h.tau));
        }
    }
    Outcome { pass, summary: parts.join("; ") }
}

fn suites() -> Outcome {
    let t = Instant::now();
    let out = bin().arg("verify").output().expect("run binary");
    let elapsed = t.elapsed();
    let text = String::from_utf8_lossy(&out.stdout);
    for line in text.lines() {
        println!("      {line}");
    }
    Outcome {
        pass: out.status.success() && elapsed <= SUITE_TIME,
        summary: format!("verify exit code {:?} in {:.1}s", out.status.code(), elapsed.as_secs_f64()),
    }
}

fn hygiene() -> Outcome {
    let grid = Grid::new(4096).expect("grid");
    let mut cutoff = 0.0f64;
    for (i, a) in [0.0, 0.2, 0.45].into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(77 + i as u64);
        let phi = random_potential(grid, &mut rng, 8, 2.0, 1.0);
        let (l1, l2) = (lambda1(a, &phi, 128), lambda1(a, &phi, 256));
        cutoff = cutoff.max(match (l1, l2) {
            (Ok(x), Ok(y)) => (x - y).abs(),
            _ => f64::INFINITY,
        });
    }
    // Quadrature: the reported μ and ∫u⁻² from the profile against its
    // half-resolution subsample.
    let mut quad = 0.0f64;
    for (a, p, alpha) in [(0.2, 4.0, 1.0), (0.45, 4.0, 0.0), (0.3, 6.0, 0.3)] {
        let pr = params(a, p, alpha);
        match solve_branch(&pr) {
            Ok(r) => {
                let half = RealFunction::new(
                    Grid::new(r.profile.len() / 2).unwrap(),
                    r.profile.values().iter().step_by(2).copied().collect(),
                )
                .unwrap();
                let m_full = lp_norm(&r.profile, p).unwrap().powf(p - 2.0);
                let m_half = lp_norm(&half, p).unwrap().powf(p - 2.0);
                let inv_full = lp_norm(&r.profile, -2.0).unwrap();
                let inv_half = lp_norm(&half, -2.0).unwrap();
                quad = quad
                    .max((m_full - r.mu).abs() / r.mu)
                    .max((m_full - m_half).abs() / m_full)
                    .max((inv_full - inv_half).abs() / inv_full);
            }
            Err(_) => quad = f64::INFINITY,
        }
    }
    let cfg = ShootingConfig::default();
    let mut curve_notes = Vec::new();
    let mut curves_ok = true;
    for (a, lo, hi, steps) in [(0.45, -0.2, 1.0, 120), (0.2, -0.04, 1.2, 63)] {
        match mu_curve_with(a, 4.0, lo, hi, steps, SweepMode::ColdStart { parallel: true }, &cfg) {
            Ok(c) => {
                let v = c.violations(CURVE_TOL);
                let failures = c.failures().count();
                curves_ok &= v.is_empty() && failures == 0;
                curve_notes.push(format!("a={a}: {} violations, {failures} failed rows", v.len()));
            }
            Err(e) => {
                curves_ok = false;
                curve_notes.push(format!("a={a}: {e}"));
            }
        }
    }
    Outcome {
        pass: cutoff <= CUTOFF_TOL && quad <= QUADRATURE_TOL && curves_ok,
        summary: format!(
            "K-doubling {cutoff:.2e}, n-doubling {quad:.2e}, curves: {}",
            curve_notes.join(", ")
        ),
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("bifurcation values", bifurcation),
        ("rigidity region", rigidity),
        ("solver/oracle agreement past the threshold", agreement),
        ("limit a -> 1/2", dirichlet_limit),
        ("profiles approach the Dirichlet limit", profiles),
        ("Keller-Lieb-Thirring bound", klt),
        ("Hardy constant", hardy),
        ("property suites", suites),
        ("numerical hygiene", hygiene),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        println!(
            "{} {}. {name}: {} [{:.1}s]",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.summary,
            t.elapsed().as_secs_f64()
        );
        if !o.pass {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
