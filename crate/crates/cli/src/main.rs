//! `magring`: sharp magnetic interpolation constants on the circle from the
//! command line. CSV goes to standard output (or `--output`), diagnostics to
//! standard error. Exit status: 0 success, 2 usage error, 3 numerical failure.

mod commands;
mod error;
mod format;
mod potential;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use magring::shooting::ShootingConfig;
use magring::verify::SuiteConfig;
use magring::{ProblemParams, RealFunction};

use crate::commands::CurveArgs;
use crate::error::{CliError, CliResult};

#[derive(Parser, Debug)]
#[command(name = "magring", version, about = "Sharp constants of the magnetic interpolation inequality on the circle")]
struct Cli {
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Worker threads for parallel sweeps and suites.
    #[arg(long, env = "MAGRING_THREADS", global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct SolverOpts {
    /// Smallest grid for returned profiles (power of two).
    #[arg(long, default_value_t = 512)]
    grid_n: usize,
    /// Target sup-norm residual of the Euler-Lagrange equation.
    #[arg(long, default_value_t = 1e-7)]
    residual_tol: f64,
    /// RK4 steps on [0, π] (power of two).
    #[arg(long, default_value_t = 2048)]
    half_steps: usize,
}

impl SolverOpts {
    fn config(&self) -> ShootingConfig {
        ShootingConfig {
            grid_n: self.grid_n,
            residual_tol: self.residual_tol,
            half_steps: self.half_steps,
            max_half_steps: ShootingConfig::default().max_half_steps.max(self.half_steps),
            ..ShootingConfig::default()
        }
    }
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct PotentialInput {
    /// Cosine coefficients "c0,c1,..." of φ(s) = Σ c_k cos(ks).
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<String>,
    /// Two-column CSV `s,phi` sampled on the grid nodes -π + 2πj/n.
    #[arg(long)]
    phi_file: Option<PathBuf>,
}

impl PotentialInput {
    fn load(&self, n: usize) -> CliResult<RealFunction> {
        match (&self.phi, &self.phi_file) {
            (Some(spec), _) => potential::from_cosine_series(spec, n),
            (None, Some(path)) => potential::from_csv(path),
            (None, None) => Err(CliError::Usage("give --phi or --phi-file".into())),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// CSV of α ↦ μ_{a,p}(α) with the constant and branch candidates.
    MuCurve {
        /// Magnetic flux; reduced to [0, 1/2] by periodicity and reflection.
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        /// Exponent p > 2.
        #[arg(long)]
        p: f64,
        /// First α of the sweep.
        #[arg(long, allow_hyphen_values = true)]
        alpha_min: f64,
        /// Last α of the sweep.
        #[arg(long, allow_hyphen_values = true)]
        alpha_max: f64,
        /// Number of α values, evenly spaced with both ends included.
        #[arg(long, default_value_t = 50)]
        steps: usize,
        /// Solve the rows on the worker pool (output is identical).
        #[arg(long)]
        parallel: bool,
        #[command(flatten)]
        solver: SolverOpts,
    },
    /// CSV `s,u` of the optimal profile, optionally with the Dirichlet limit.
    Profile {
        /// Magnetic flux; reduced to [0, 1/2] by periodicity and reflection.
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        /// Exponent p > 2.
        #[arg(long)]
        p: f64,
        /// Spectral shift α > -a².
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        /// Add the `u_limit` column: the profile of the limit problem a → 1/2.
        #[arg(long)]
        limit: bool,
        #[command(flatten)]
        solver: SolverOpts,
    },
    /// Threshold where the nonconstant branch appears, formula and measured.
    Bifurcation {
        /// Magnetic flux; reduced to [0, 1/2] by periodicity and reflection.
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        /// Exponent p > 2.
        #[arg(long)]
        p: f64,
        #[command(flatten)]
        solver: SolverOpts,
    },
    /// ν_p(α), the constant of the Dirichlet problem on (-π, π).
    Nu {
        /// Exponent p > 2.
        #[arg(long)]
        p: f64,
        /// Spectral shift α > -a².
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[command(flatten)]
        solver: SolverOpts,
    },
    /// λ₁(H_a - φ) against the Keller-Lieb-Thirring bound -α_{a,p}(‖φ‖_q).
    Klt {
        /// Magnetic flux; reduced to [0, 1/2] by periodicity and reflection.
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        /// Exponent p > 2.
        #[arg(long)]
        p: f64,
        #[command(flatten)]
        potential: PotentialInput,
        /// Grid for an inline cosine series.
        #[arg(long, default_value_t = 256)]
        n: usize,
        #[command(flatten)]
        solver: SolverOpts,
    },
    /// Hardy constant τ with α_{a,p}(τ‖φ‖_q) = 0.
    Hardy {
        /// Magnetic flux; reduced to [0, 1/2] by periodicity and reflection.
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        /// Exponent p > 2.
        #[arg(long)]
        p: f64,
        #[command(flatten)]
        potential: PotentialInput,
        /// Grid for an inline cosine series.
        #[arg(long, default_value_t = 256)]
        n: usize,
    },
    /// Runs every property suite; exit status 0 iff all pass.
    Verify {
        /// Seed for the random test functions.
        #[arg(long, default_value_t = SuiteConfig::default().seed)]
        seed: u64,
        /// Run cases one at a time.
        #[arg(long)]
        sequential: bool,
    },
}

fn run(cli: &Cli, out: &mut dyn Write) -> CliResult<()> {
    match &cli.command {
        Command::MuCurve { a, p, alpha_min, alpha_max, steps, parallel, solver } => {
            let args = CurveArgs {
                a: *a,
                p: *p,
                alpha_min: *alpha_min,
                alpha_max: *alpha_max,
                steps: *steps,
                parallel: *parallel,
            };
            commands::mu_curve(&args, &solver.config(), out)
        }
        Command::Profile { a, p, alpha, limit, solver } => {
            commands::profile(&ProblemParams::new(*a, *p, *alpha)?, *limit, &solver.config(), out)
        }
        Command::Bifurcation { a, p, solver } => commands::bifurcation(*a, *p, &solver.config(), out),
        Command::Nu { p, alpha, solver } => commands::nu(*p, *alpha, &solver.config(), out),
        Command::Klt { a, p, potential, n, solver } => {
            commands::klt(*a, *p, &potential.load(*n)?, &solver.config(), out)
        }
        Command::Hardy { a, p, potential, n } => commands::hardy(*a, *p, &potential.load(*n)?, out),
        Command::Verify { seed, sequential } => {
            commands::verify(&SuiteConfig { seed: *seed, parallel: !sequential }, out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(n) = cli.threads {
        magring::par::init_threads(n);
    }
    let result = match &cli.output {
        Some(path) => File::create(path).map_err(CliError::from).and_then(|f| {
            let mut w = BufWriter::new(f);
            run(&cli, &mut w)?;
            w.flush()?;
            Ok(())
        }),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            run(&cli, &mut lock)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is_broken_pipe() => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("magring: {e}");
            e.exit_code()
        }
    }
}
