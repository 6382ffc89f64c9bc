//! `smoothdiv`: evaluate the smooth generator and its divergences, sweep the
//! l1 limits, check the conjugate duality and run the LASSO surrogate demo.

mod failure;
mod input;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use smoothdiv::{
    d_new, d_phi, d_tv, empirical_log_mgf, format_number, linear_grid, make_problem, phi_tv,
    run_sweep, solve_lasso_with, surrogate_report, weighted_l1, write_csv, CTilde, DualityReport,
    LaplaceDual, MgfEstimate, Params64, PosVector, SolverOptions, Surrogate, SweepMode, SweepSpec,
    Vector,
};

use failure::Failure;
use input::{grid_from, read_values};

#[derive(Parser)]
#[command(
    name = "smoothdiv",
    version,
    about = "Smooth surrogates of l1 distances"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the generator at a point, or a divergence between vectors.
    Eval(EvalArgs),
    /// Tabulate a divergence against its l1 limit over a parameter grid.
    Sweep(SweepArgs),
    /// Compare the numerical conjugate of the cumulant function with the
    /// generator.
    DualityCheck(DualityArgs),
    /// Solve a synthetic LASSO problem and sweep the surrogates of its l1
    /// norm.
    LassoDemo(LassoArgs),
}

#[derive(Args)]
struct GenFlags {
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long, default_value_t = 1.0)]
    ctilde: f64,
}

impl GenFlags {
    fn params(&self) -> Result<Params64, Failure> {
        Params64::new(self.alpha, self.beta, self.ctilde).map_err(|e| {
            let flag = match &e {
                smoothdiv::Error::InvalidParameter { name, .. } => *name,
                _ => "alpha",
            };
            Failure::from_lib(flag, e)
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EvalKind {
    /// sum p phi(q/p), or phi(t)
    #[value(alias = "d_phi")]
    Phi,
    /// sum p phi((q - q*)/(p sigma) + 1)
    #[value(alias = "d_new")]
    New,
    /// sum |q - p|, or |t - 1|
    #[value(alias = "d_tv")]
    Tv,
    /// sum |q - q*| / sigma
    #[value(alias = "weighted_l1")]
    WeightedL1,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    generator: GenFlags,
    /// Scalar argument of the generator.
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["q", "p", "qstar", "sigma"])]
    t: Option<f64>,
    /// File with the vector q.
    #[arg(long)]
    q: Option<PathBuf>,
    /// File with the positive reference/weight vector p.
    #[arg(long)]
    p: Option<PathBuf>,
    /// File with the shift q* (defaults to zeros).
    #[arg(long)]
    qstar: Option<PathBuf>,
    /// File with the positive scales sigma (defaults to ones).
    #[arg(long)]
    sigma: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "phi")]
    divergence: EvalKind,
    /// Shorthand for `--divergence new`.
    #[arg(long, conflicts_with = "divergence")]
    shift: bool,
}

#[derive(Args)]
struct GridFlags {
    /// Comma-separated values of the varying parameter.
    #[arg(long, visible_alias = "beta-grid", allow_negative_numbers = true)]
    grid: Option<String>,
    /// Geometric grid `lo:hi:n` for the varying parameter.
    #[arg(long)]
    log_grid: Option<String>,
    /// Comma-separated values of the family parameter.
    #[arg(long, visible_alias = "m-family", allow_negative_numbers = true)]
    family: Option<String>,
    /// Geometric grid `lo:hi:n` for the family parameter.
    #[arg(long)]
    log_family: Option<String>,
}

#[derive(Args)]
struct SweepArgs {
    /// alpha-to-zero (grid: alpha, family: beta), alpha-over-beta-to-zero
    /// (grid: beta with c~ = 1/beta, family: m) or p-to-zero (grid: m,
    /// family: beta).
    #[arg(long, default_value = "alpha-over-beta-to-zero", value_parser = clap::value_parser!(SweepMode))]
    mode: SweepMode,
    /// d_phi or d_new.
    #[arg(long, default_value = "d_phi", value_parser = clap::value_parser!(Surrogate))]
    divergence: Surrogate,
    #[arg(long)]
    q: PathBuf,
    #[arg(long)]
    qstar: Option<PathBuf>,
    #[arg(long)]
    sigma: Option<PathBuf>,
    /// Base weights (reference point for d_phi), divided by m in the
    /// vanishing-weight modes. Defaults to ones.
    #[arg(long)]
    weights: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// A positive number or `inverse-beta`.
    #[arg(long, default_value = "1")]
    ctilde: String,
    #[command(flatten)]
    grids: GridFlags,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DualityArgs {
    #[command(flatten)]
    generator: GenFlags,
    /// Total mass of the weight vector.
    #[arg(long, default_value_t = 1.0)]
    mp: f64,
    #[arg(long, default_value_t = -10.0, allow_negative_numbers = true)]
    t_min: f64,
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    t_max: f64,
    #[arg(long, default_value_t = 201)]
    grid_n: usize,
    /// Monte-Carlo draws of W; 0 skips the sampling section.
    #[arg(long, default_value_t = 0)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct LassoArgs {
    #[arg(long, default_value_t = 200)]
    n: usize,
    #[arg(long, default_value_t = 50)]
    k: usize,
    #[arg(long, default_value_t = 5)]
    sparsity: usize,
    #[arg(long, default_value_t = 0.1)]
    noise_sd: f64,
    #[arg(long, default_value_t = 10.0)]
    lambda: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, default_value_t = 100_000)]
    max_iter: usize,
    /// Solve on unit-norm columns and rescale the coefficients.
    #[arg(long)]
    standardize: bool,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[command(flatten)]
    grids: GridFlags,
    /// CSV destination; appended to standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = match cli.command {
        Command::Eval(a) => run_eval(&a, &mut out),
        Command::Sweep(a) => run_sweep_cmd(&a, &mut out),
        Command::DualityCheck(a) => run_duality(&a, &mut out),
        Command::LassoDemo(a) => run_lasso(&a, &mut out),
    };
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            f.exit_code()
        }
    }
}

fn vector(flag: &str, path: &Path) -> Result<Vector<f64>, Failure> {
    Vector::new(read_values(flag, path)?).map_err(|e| Failure::from_lib(flag, e))
}

fn pos_vector(flag: &str, path: &Path) -> Result<PosVector<f64>, Failure> {
    PosVector::new(read_values(flag, path)?).map_err(|e| Failure::from_lib(flag, e))
}

fn opt_vector(flag: &str, path: Option<&PathBuf>) -> Result<Option<Vector<f64>>, Failure> {
    path.map(|p| vector(flag, p)).transpose()
}

fn opt_pos_vector(flag: &str, path: Option<&PathBuf>) -> Result<Option<PosVector<f64>>, Failure> {
    path.map(|p| pos_vector(flag, p)).transpose()
}

fn require<'a>(flag: &str, path: Option<&'a PathBuf>) -> Result<&'a PathBuf, Failure> {
    path.ok_or_else(|| Failure::usage(format!("--{flag} is required")))
}

fn run_eval(a: &EvalArgs, out: &mut impl Write) -> Result<(), Failure> {
    let params = a.generator.params()?;
    let kind = if a.shift { EvalKind::New } else { a.divergence };
    let value = if let Some(t) = a.t {
        match kind {
            EvalKind::Phi => params.phi(t).map_err(|e| Failure::from_lib("t", e))?,
            EvalKind::Tv => phi_tv(t).map_err(|e| Failure::from_lib("t", e))?,
            _ => return Err(Failure::usage("--t only supports --divergence phi or tv")),
        }
    } else {
        let q = vector("q", require("q", a.q.as_ref())?)?;
        let mismatch = |e| Failure::from_lib("q", e);
        match kind {
            EvalKind::Phi | EvalKind::Tv => {
                if a.qstar.is_some() || a.sigma.is_some() {
                    return Err(Failure::usage(
                        "--qstar/--sigma require --divergence new or weighted-l1",
                    ));
                }
                let p = pos_vector("p", require("p", a.p.as_ref())?)?;
                if kind == EvalKind::Phi {
                    d_phi(&params, &q, &p).map_err(mismatch)?
                } else {
                    d_tv(&q, &p).map_err(mismatch)?
                }
            }
            EvalKind::New | EvalKind::WeightedL1 => {
                let k = q.len();
                let qstar = opt_vector("qstar", a.qstar.as_ref())?
                    .unwrap_or(Vector::zeros(k).map_err(mismatch)?);
                let sigma = opt_pos_vector("sigma", a.sigma.as_ref())?
                    .unwrap_or(PosVector::ones(k).map_err(mismatch)?);
                if kind == EvalKind::New {
                    let p = pos_vector("p", require("p", a.p.as_ref())?)?;
                    d_new(&params, &q, &qstar, &p, &sigma).map_err(mismatch)?
                } else {
                    weighted_l1(&q, &qstar, &sigma).map_err(mismatch)?
                }
            }
        }
    };
    writeln!(out, "{}", format_number(value))?;
    Ok(())
}

fn run_sweep_cmd(a: &SweepArgs, out: &mut impl Write) -> Result<(), Failure> {
    let q = vector("q", &a.q)?;
    let ctilde = match a.ctilde.as_str() {
        "inverse-beta" | "inverse_beta" => CTilde::InverseBeta,
        s => match s.parse::<f64>() {
            Ok(v) if v.is_finite() && v > 0.0 => CTilde::Fixed(v),
            _ => {
                return Err(Failure::usage(format!(
                    "--ctilde: expected a positive number or `inverse-beta`, got `{s}`"
                )))
            }
        },
    };
    if !(a.alpha.is_finite() && a.alpha > 0.0) {
        return Err(Failure::usage(format!(
            "--alpha: must be positive and finite, got {}",
            a.alpha
        )));
    }
    let g = &a.grids;
    let grid = grid_from(
        "grid",
        g.grid.as_deref(),
        "log-grid",
        g.log_grid.as_deref(),
        &[],
    )?;
    if grid.is_empty() {
        return Err(Failure::usage("--grid or --log-grid is required"));
    }
    let family = grid_from(
        "family",
        g.family.as_deref(),
        "log-family",
        g.log_family.as_deref(),
        &[1.0],
    )?;
    let spec = SweepSpec {
        mode: a.mode,
        surrogate: a.divergence,
        grid,
        family,
        alpha: a.alpha,
        ctilde,
        q,
        qstar: opt_vector("qstar", a.qstar.as_ref())?,
        sigma: opt_pos_vector("sigma", a.sigma.as_ref())?,
        weights: opt_pos_vector("weights", a.weights.as_ref())?,
    };
    let rows = run_sweep(&spec).map_err(|e| {
        let flag = match &e {
            smoothdiv::Error::InvalidGrid { name, .. } => name,
            _ => "q",
        };
        Failure::from_lib(flag, e)
    })?;
    match &a.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| {
                Failure::usage(format!("--out: cannot create {}: {e}", path.display()))
            })?;
            let mut w = BufWriter::new(file);
            write_csv(&rows, &mut w)?;
            w.flush()?;
        }
        None => write_csv(&rows, out)?,
    }
    Ok(())
}

/// Points, as fractions of the rate, where the sampled log-MGF is compared
/// with the cumulant function. The estimator variance is finite only for
/// `|z| < rate / 2`.
const MGF_FRACTIONS: [f64; 5] = [-0.4, -0.2, 0.1, 0.2, 0.4];

#[derive(Serialize)]
struct MgfCheck {
    #[serde(flatten)]
    estimate: MgfEstimate,
    cumulant: f64,
    pass: bool,
}

#[derive(Serialize)]
struct MonteCarlo {
    samples: usize,
    seed: u64,
    mean: f64,
    mean_std_error: f64,
    mean_pass: bool,
    mgf: Vec<MgfCheck>,
    pass: bool,
}

#[derive(Serialize)]
struct DualityOutput {
    params: Params64,
    m_p: f64,
    shape: f64,
    rate: f64,
    #[serde(flatten)]
    report: DualityReport<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    monte_carlo: Option<MonteCarlo>,
}

fn monte_carlo(dual: &LaplaceDual<f64>, samples: usize, seed: u64) -> Result<MonteCarlo, Failure> {
    let draws = dual.sample(samples, seed);
    let n = samples as f64;
    let mean = draws.iter().sum::<f64>() / n;
    let var = draws.iter().map(|w| (w - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    let mean_std_error = (var / n).sqrt();
    let mean_pass = (mean - 1.0).abs() <= 4.0 * mean_std_error;
    let mgf = MGF_FRACTIONS
        .iter()
        .map(|f| {
            let z = f * dual.rate();
            let cumulant = dual
                .cumulant(z)
                .map_err(|e| Failure::from_lib("samples", e))?;
            let estimate = empirical_log_mgf(&draws, z);
            let pass = (estimate.log_mgf - cumulant).abs() <= 3.0 * estimate.std_error;
            Ok(MgfCheck {
                estimate,
                cumulant,
                pass,
            })
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    let pass = mean_pass && mgf.iter().all(|m| m.pass);
    Ok(MonteCarlo {
        samples,
        seed,
        mean,
        mean_std_error,
        mean_pass,
        mgf,
        pass,
    })
}

fn run_duality(a: &DualityArgs, out: &mut impl Write) -> Result<(), Failure> {
    let params = a.generator.params()?;
    let dual = LaplaceDual::new(params, a.mp).map_err(|e| Failure::from_lib("mp", e))?;
    if a.grid_n < 2 {
        return Err(Failure::usage(format!(
            "--grid-n: must be at least 2, got {}",
            a.grid_n
        )));
    }
    for (flag, v) in [("t-min", a.t_min), ("t-max", a.t_max)] {
        if !v.is_finite() {
            return Err(Failure::usage(format!("--{flag}: must be finite, got {v}")));
        }
    }
    if a.t_min > a.t_max {
        return Err(Failure::usage("--t-min must not exceed --t-max"));
    }
    let grid = linear_grid(a.t_min, a.t_max, a.grid_n);
    let report = dual
        .verify(&grid)
        .map_err(|e| Failure::from_lib("grid-n", e))?;
    let mc = match a.samples {
        0 => None,
        1 => return Err(Failure::usage("--samples: need 0 or at least 2")),
        n => Some(monte_carlo(&dual, n, a.seed)?),
    };
    let pass = report.pass && mc.as_ref().is_none_or(|m| m.pass);
    let output = DualityOutput {
        params,
        m_p: dual.m_p(),
        shape: dual.shape(),
        rate: dual.rate(),
        report,
        monte_carlo: mc,
    };
    serde_json::to_writer_pretty(&mut *out, &output).map_err(io::Error::from)?;
    writeln!(out)?;
    if pass {
        Ok(())
    } else {
        Err(Failure::numeric("duality check failed"))
    }
}

#[derive(Serialize)]
struct LassoOutput<'a> {
    n: usize,
    k: usize,
    sparsity: usize,
    noise_sd: f64,
    seed: u64,
    lambda: f64,
    lambda_max: f64,
    #[serde(flatten)]
    solution: &'a smoothdiv::LassoSolution<f64>,
    certified: bool,
}

fn run_lasso(a: &LassoArgs, out: &mut impl Write) -> Result<(), Failure> {
    if !(a.lambda.is_finite() && a.lambda >= 0.0) {
        return Err(Failure::usage(format!(
            "--lambda: must be finite and >= 0, got {}",
            a.lambda
        )));
    }
    if !(a.tol.is_finite() && a.tol > 0.0) {
        return Err(Failure::usage(format!(
            "--tol: must be positive and finite, got {}",
            a.tol
        )));
    }
    if !(a.alpha.is_finite() && a.alpha > 0.0) {
        return Err(Failure::usage(format!(
            "--alpha: must be positive and finite, got {}",
            a.alpha
        )));
    }
    let g = &a.grids;
    let beta_grid = grid_from(
        "beta-grid",
        g.grid.as_deref(),
        "log-grid",
        g.log_grid.as_deref(),
        &[1e1, 1e2, 1e3, 1e4],
    )?;
    let m_family = grid_from(
        "m-family",
        g.family.as_deref(),
        "log-family",
        g.log_family.as_deref(),
        &[1e4],
    )?;
    let synthetic = make_problem(a.n, a.k, a.sparsity, a.noise_sd, a.seed)
        .map_err(|e| Failure::from_lib("n", e))?;
    let problem = synthetic
        .problem
        .with_lambda(a.lambda)
        .map_err(|e| Failure::from_lib("lambda", e))?;
    let opts = SolverOptions {
        tol: a.tol,
        max_iter: a.max_iter,
        standardize: a.standardize,
    };
    let solution = solve_lasso_with(&problem, &opts).map_err(|e| Failure::from_lib("tol", e))?;
    let rows = surrogate_report(&solution, a.alpha, &beta_grid, &m_family).map_err(|e| {
        let flag = match &e {
            smoothdiv::Error::InvalidGrid { name, .. } => name,
            _ => "alpha",
        };
        Failure::from_lib(flag, e)
    })?;
    let certified = solution.certified(a.lambda);
    let output = LassoOutput {
        n: a.n,
        k: a.k,
        sparsity: a.sparsity,
        noise_sd: a.noise_sd,
        seed: a.seed,
        lambda: a.lambda,
        lambda_max: problem.lambda_max(),
        solution: &solution,
        certified,
    };
    serde_json::to_writer_pretty(&mut *out, &output).map_err(io::Error::from)?;
    writeln!(out)?;
    match &a.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| {
                Failure::usage(format!("--out: cannot create {}: {e}", path.display()))
            })?;
            let mut w = BufWriter::new(file);
            write_csv(&rows, &mut w)?;
            w.flush()?;
        }
        None => write_csv(&rows, &mut *out)?,
    }
    if solution.converged && certified {
        Ok(())
    } else {
        Err(Failure::numeric(format!(
            "solver stopped after {} iterations without meeting the stopping rule or certificate",
            solution.iterations
        )))
    }
}
