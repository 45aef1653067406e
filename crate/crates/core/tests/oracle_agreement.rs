use magring::forms::bifurcation_threshold;
use magring::par;
use magring::shooting::{dirichlet_nu, mu};
use magring::verify::{direct_minimize, max_increase, Space};
use magring::ProblemParams;

#[test]
fn oracle_matches_the_shooting_solver() {
    let mut cases = Vec::new();
    for a in [0.1, 0.3, 0.45] {
        for p in [4.0, 6.0] {
            let star = bifurcation_threshold(a, p);
            for d in [-0.04, 0.2, 0.6, 1.2] {
                cases.push((a, p, star + d));
            }
        }
    }
    let out = par::map(&cases, true, |&(a, p, alpha)| {
        let params = ProblemParams::new(a, p, alpha).unwrap();
        let shoot = mu(&params).unwrap();
        let oracle = direct_minimize(&params, Space::ComplexPeriodic, 128, 11).unwrap();
        (params, shoot, oracle)
    });
    for (params, shoot, oracle) in out {
        assert_eq!(max_increase(&oracle.history), 0.0);
        assert!(oracle.gradient_norm <= 1e-7);
        assert!((shoot - oracle.mu_hat).abs() <= 1e-4, "{params:?}: shooting {shoot}, oracle {}", oracle.mu_hat);
    }
}

#[test]
fn reduced_oracle_agrees_past_the_threshold() {
    let params = ProblemParams::new(0.2, 4.0, 1.0).unwrap();
    let r = direct_minimize(&params, Space::RealPositive, 256, 3).unwrap();
    assert!(r.mu_hat < 1.04);
    assert!((r.mu_hat - mu(&params).unwrap()).abs() <= 1e-4);
    assert!(r.relative_oscillation() > 0.1);
}

#[test]
fn dirichlet_oracle_matches_the_limit_problem() {
    for alpha in [0.0, 0.5] {
        let params = ProblemParams::new(0.5, 4.0, alpha).unwrap();
        let r = direct_minimize(&params, Space::Dirichlet, 128, 5).unwrap();
        let nu = dirichlet_nu(4.0, alpha).unwrap().mu;
        assert!((r.mu_hat - nu).abs() <= 1e-4, "alpha = {alpha}: {} vs {nu}", r.mu_hat);
        assert_eq!(r.minimizer.values()[0], 0.0);
    }
}
