//! Cyclic coordinate descent for the LASSO and the smooth surrogates of its
//! solution's l1 norm.
//!
//! The objective is the unscaled
//!
//! ```text
//! sum_i (y_i - sum_k x_ik q_k)^2 + lambda * ||q||_1
//! ```
//!
//! (no `1/(2n)`; `lambda` here equals `2n` times the `lambda` of the
//! `(1/(2n)) RSS` convention). The exact single-coordinate minimizer is
//! `S(x_k . r_k, lambda/2) / ||x_k||^2` with `r_k` the partial residual and
//! `S` the soft-threshold.

use rand::seq::index::sample as sample_indices;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::{beta_sweep_phi, beta_sweep_shift, SweepRow};
use crate::scalar::Scalar;
use crate::vector::{pairwise_sum, PosVector, Vector};

/// Certificate threshold: a solution is accepted when its KKT residual is
/// at most `KKT_TOLERANCE * (1 + lambda)`.
pub const KKT_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LassoProblem<F> {
    pub n: usize,
    pub k: usize,
    pub lambda: F,
    /// Row-major `n x k` design.
    pub x: Vec<F>,
    pub y: Vec<F>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LassoSolution<F> {
    pub q_hat: Vector<F>,
    pub objective: F,
    /// Achieved residual sum of squares; the `epsilon` for which `q_hat` also
    /// solves the constrained basis-pursuit-denoising form.
    pub rss: F,
    pub l1: F,
    pub kkt_residual: F,
    pub iterations: usize,
    /// The coordinate-change stopping rule was met before `max_iter`.
    pub converged: bool,
}

impl<F: Scalar> LassoSolution<F> {
    /// `kkt_residual <= 1e-6 * (1 + lambda)`.
    pub fn certified(&self, lambda: F) -> bool {
        self.kkt_residual <= F::lit(KKT_TOLERANCE) * (F::one() + lambda)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticProblem<F> {
    pub problem: LassoProblem<F>,
    pub q_true: Vec<F>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions<F> {
    pub tol: F,
    pub max_iter: usize,
    /// Solve on unit-norm columns and map the coefficients back. The KKT
    /// residual then refers to the standardized problem.
    pub standardize: bool,
}

impl<F: Scalar> Default for SolverOptions<F> {
    fn default() -> Self {
        Self {
            tol: F::lit(1e-12),
            max_iter: 100_000,
            standardize: false,
        }
    }
}

fn soft_threshold<F: Scalar>(x: F, level: F) -> F {
    if x > level {
        x - level
    } else if x < -level {
        x + level
    } else {
        F::zero()
    }
}

impl<F: Scalar> LassoProblem<F> {
    pub fn new(n: usize, k: usize, x: Vec<F>, y: Vec<F>, lambda: F) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidProblem(m));
        if n == 0 || k == 0 {
            return bad(format!("need n >= 1 and k >= 1, got n={n}, k={k}"));
        }
        if x.len() != n * k {
            return bad(format!(
                "design has {} entries, expected {}",
                x.len(),
                n * k
            ));
        }
        if y.len() != n {
            return bad(format!("response has {} entries, expected {n}", y.len()));
        }
        if x.iter().chain(&y).any(|v| !v.is_finite()) {
            return bad("non-finite entry in design or response".into());
        }
        if !(lambda.is_finite() && lambda >= F::zero()) {
            return bad(format!("lambda must be finite and >= 0, got {lambda}"));
        }
        Ok(Self { n, k, lambda, x, y })
    }

    pub fn with_lambda(mut self, lambda: F) -> Result<Self> {
        if !(lambda.is_finite() && lambda >= F::zero()) {
            return Err(Error::InvalidProblem(format!(
                "lambda must be finite and >= 0, got {lambda}"
            )));
        }
        self.lambda = lambda;
        Ok(self)
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = F> + '_ {
        (0..self.n).map(move |i| self.x[i * self.k + j])
    }

    /// `y - X q`
    pub fn residual(&self, q: &[F]) -> Vec<F> {
        (0..self.n)
            .map(|i| {
                let row = &self.x[i * self.k..(i + 1) * self.k];
                let fit: Vec<F> = row.iter().zip(q).map(|(&a, &b)| a * b).collect();
                self.y[i] - pairwise_sum(&fit)
            })
            .collect()
    }

    pub fn rss(&self, q: &[F]) -> F {
        let sq: Vec<F> = self.residual(q).iter().map(|&r| r * r).collect();
        pairwise_sum(&sq)
    }

    pub fn objective(&self, q: &[F]) -> F {
        let l1: Vec<F> = q.iter().map(|v| v.abs()).collect();
        self.rss(q) + self.lambda * pairwise_sum(&l1)
    }

    /// Smallest `lambda` with `q = 0` optimal: `2 max_k |x_k . y|`.
    pub fn lambda_max(&self) -> F {
        (0..self.k)
            .map(|j| {
                let prods: Vec<F> = self.column(j).zip(&self.y).map(|(a, &b)| a * b).collect();
                pairwise_sum(&prods).abs()
            })
            .fold(F::zero(), F::max)
            * F::lit(2.0)
    }

    /// Maximal violation of the stationarity conditions at `q`:
    /// `|2 x_k . r - lambda sign(q_k)|` on the support and
    /// `max(0, |2 x_k . r| - lambda)` off it, with `r = y - X q`.
    pub fn kkt_residual(&self, q: &[F]) -> F {
        let r = self.residual(q);
        let two = F::lit(2.0);
        (0..self.k)
            .map(|j| {
                let prods: Vec<F> = self.column(j).zip(&r).map(|(a, &b)| a * b).collect();
                let grad = two * pairwise_sum(&prods);
                if q[j] != F::zero() {
                    (grad - self.lambda * q[j].signum()).abs()
                } else {
                    (grad.abs() - self.lambda).max(F::zero())
                }
            })
            .fold(F::zero(), F::max)
    }
}

/// Draws a reproducible regression instance: standard-normal design,
/// `sparsity` nonzero coefficients with random sign and magnitude in
/// `[1, 3)`, and `y = X q_true + noise_sd * N(0, 1)`. `lambda` is left at 0.
pub fn make_problem<F: Scalar>(
    n: usize,
    k: usize,
    sparsity: usize,
    noise_sd: F,
    seed: u64,
) -> Result<SyntheticProblem<F>> {
    if n == 0 || k == 0 || sparsity > k {
        return Err(Error::InvalidProblem(format!(
            "need n >= 1, k >= 1 and sparsity <= k, got n={n}, k={k}, sparsity={sparsity}"
        )));
    }
    if !(noise_sd.is_finite() && noise_sd >= F::zero()) {
        return Err(Error::InvalidProblem(format!(
            "noise_sd must be finite and >= 0, got {noise_sd}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x: Vec<F> = (0..n * k)
        .map(|_| F::lit(rng.sample::<f64, _>(StandardNormal)))
        .collect();
    let mut q_true = vec![F::zero(); k];
    let mut support = sample_indices(&mut rng, k, sparsity).into_vec();
    support.sort_unstable();
    for j in support {
        let magnitude = rng.random_range(1.0..3.0);
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        q_true[j] = F::lit(sign * magnitude);
    }
    let y: Vec<F> = (0..n)
        .map(|i| {
            let row = &x[i * k..(i + 1) * k];
            let fit: Vec<F> = row.iter().zip(&q_true).map(|(&a, &b)| a * b).collect();
            pairwise_sum(&fit) + noise_sd * F::lit(rng.sample::<f64, _>(StandardNormal))
        })
        .collect();
    let problem = LassoProblem::new(n, k, x, y, F::zero())?;
    Ok(SyntheticProblem { problem, q_true })
}

/// Coordinate-descent state; one call to [`CoordinateDescent::sweep`]
/// updates every coordinate once in index order.
pub struct CoordinateDescent<'a, F> {
    problem: &'a LassoProblem<F>,
    /// Column-major copy of the design.
    columns: Vec<Vec<F>>,
    sq_norms: Vec<F>,
    q: Vec<F>,
    residual: Vec<F>,
}

impl<'a, F: Scalar> CoordinateDescent<'a, F> {
    pub fn new(problem: &'a LassoProblem<F>) -> Self {
        let columns: Vec<Vec<F>> = (0..problem.k)
            .map(|j| problem.column(j).collect())
            .collect();
        let sq_norms = columns
            .iter()
            .map(|c| pairwise_sum(&c.iter().map(|&v| v * v).collect::<Vec<_>>()))
            .collect();
        Self {
            problem,
            columns,
            sq_norms,
            q: vec![F::zero(); problem.k],
            residual: problem.y.clone(),
        }
    }

    pub fn coefficients(&self) -> &[F] {
        &self.q
    }

    pub fn objective(&self) -> F {
        self.problem.objective(&self.q)
    }

    /// Returns the largest absolute coordinate change.
    pub fn sweep(&mut self) -> F {
        let half_lambda = self.problem.lambda * F::lit(0.5);
        let mut max_change = F::zero();
        for j in 0..self.problem.k {
            let norm = self.sq_norms[j];
            if norm == F::zero() {
                continue;
            }
            let col = &self.columns[j];
            let old = self.q[j];
            let dot: F = col
                .iter()
                .zip(&self.residual)
                .fold(F::zero(), |acc, (&a, &b)| acc + a * b);
            let new = soft_threshold(dot + norm * old, half_lambda) / norm;
            let delta = new - old;
            if delta != F::zero() {
                for (r, &a) in self.residual.iter_mut().zip(col) {
                    *r -= a * delta;
                }
                self.q[j] = new;
                max_change = max_change.max(delta.abs());
            }
        }
        max_change
    }
}

pub fn solve_lasso<F: Scalar>(
    problem: &LassoProblem<F>,
    tol: F,
    max_iter: usize,
) -> Result<LassoSolution<F>> {
    solve_lasso_with(
        problem,
        &SolverOptions {
            tol,
            max_iter,
            standardize: false,
        },
    )
}

pub fn solve_lasso_with<F: Scalar>(
    problem: &LassoProblem<F>,
    opts: &SolverOptions<F>,
) -> Result<LassoSolution<F>> {
    if !(opts.tol.is_finite() && opts.tol > F::zero()) {
        return Err(Error::InvalidParameter {
            name: "tol",
            value: opts.tol.as_f64(),
        });
    }
    if opts.standardize {
        return solve_standardized(problem, opts);
    }
    let mut cd = CoordinateDescent::new(problem);
    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iter {
        iterations += 1;
        if cd.sweep() <= opts.tol {
            converged = true;
            break;
        }
    }
    finish(problem, cd.q, iterations, converged)
}

fn finish<F: Scalar>(
    problem: &LassoProblem<F>,
    q: Vec<F>,
    iterations: usize,
    converged: bool,
) -> Result<LassoSolution<F>> {
    let rss = problem.rss(&q);
    let kkt_residual = problem.kkt_residual(&q);
    let q_hat = Vector::new(q)?;
    let l1 = crate::divergence::l1_norm(&q_hat);
    Ok(LassoSolution {
        objective: rss + problem.lambda * l1,
        rss,
        l1,
        kkt_residual,
        iterations,
        converged,
        q_hat,
    })
}

fn solve_standardized<F: Scalar>(
    problem: &LassoProblem<F>,
    opts: &SolverOptions<F>,
) -> Result<LassoSolution<F>> {
    let scales: Vec<F> = (0..problem.k)
        .map(|j| {
            let norm = problem
                .column(j)
                .map(|v| v * v)
                .fold(F::zero(), |a, b| a + b)
                .sqrt();
            if norm > F::zero() {
                norm
            } else {
                F::one()
            }
        })
        .collect();
    let x: Vec<F> = problem
        .x
        .iter()
        .enumerate()
        .map(|(idx, &v)| v / scales[idx % problem.k])
        .collect();
    let scaled = LassoProblem::new(problem.n, problem.k, x, problem.y.clone(), problem.lambda)?;
    let inner = solve_lasso_with(
        &scaled,
        &SolverOptions {
            standardize: false,
            ..*opts
        },
    )?;
    let q: Vec<F> = inner
        .q_hat
        .iter()
        .zip(&scales)
        .map(|(&c, &s)| c / s)
        .collect();
    let mut sol = finish(problem, q, inner.iterations, inner.converged)?;
    sol.kkt_residual = inner.kkt_residual;
    Ok(sol)
}

/// Both smooth surrogates of `||q_hat||_1` over `beta_grid x m_family`:
/// `D_{phi_{alpha,beta,1/beta}}(q_hat, (1/m) 1)` (rows tagged `d_phi`) and
/// `D^new_{phi_{alpha,beta,1/beta}, (1/m) 1, 1}(q_hat, 0)` (rows tagged
/// `d_new`). In every row `gap = ||q_hat||_1 - surrogate`.
pub fn surrogate_report<F: Scalar>(
    solution: &LassoSolution<F>,
    alpha: F,
    beta_grid: &[F],
    m_family: &[F],
) -> Result<Vec<SweepRow<F>>> {
    let q = &solution.q_hat;
    let k = q.len();
    let mut rows = beta_sweep_phi(q, beta_grid, m_family, alpha)?;
    rows.extend(beta_sweep_shift(
        q,
        &Vector::zeros(k)?,
        &PosVector::ones(k)?,
        beta_grid,
        m_family,
        alpha,
    )?);
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::Surrogate;

    #[test]
    fn soft_threshold_cases() {
        assert_eq!(soft_threshold(3.0, 1.0), 2.0);
        assert_eq!(soft_threshold(-3.0, 1.0), -2.0);
        assert_eq!(soft_threshold(0.5, 1.0), 0.0);
        assert_eq!(soft_threshold(-1.0, 1.0), 0.0);
    }

    #[test]
    fn problem_validation() {
        assert!(LassoProblem::new(0, 1, vec![], vec![], 0.0).is_err());
        assert!(LassoProblem::new(2, 1, vec![1.0], vec![1.0, 2.0], 0.0).is_err());
        assert!(LassoProblem::new(1, 1, vec![1.0], vec![1.0, 2.0], 0.0).is_err());
        assert!(LassoProblem::new(1, 1, vec![1.0], vec![f64::NAN], 0.0).is_err());
        assert!(LassoProblem::new(1, 1, vec![1.0], vec![1.0], -1.0).is_err());
        assert!(make_problem::<f64>(10, 3, 4, 0.0, 1).is_err());
        assert!(make_problem::<f64>(10, 3, 1, -0.1, 1).is_err());
        let tol_err = solve_lasso(
            &LassoProblem::new(1, 1, vec![1.0], vec![1.0], 0.0).unwrap(),
            0.0,
            10,
        );
        assert!(tol_err.is_err());
    }

    #[test]
    fn zero_signal_gives_zero_solution() {
        let sp = make_problem::<f64>(100, 20, 0, 0.0, 1).unwrap();
        assert!(sp.problem.y.iter().all(|&v| v == 0.0));
        let prob = sp.problem.with_lambda(1.0).unwrap();
        let sol = solve_lasso(&prob, 1e-12, 100).unwrap();
        assert!(sol.q_hat.iter().all(|&v| v == 0.0));
        assert_eq!(sol.l1, 0.0);
        assert!(sol.converged && sol.certified(1.0));
    }

    #[test]
    fn generator_is_deterministic() {
        let a = make_problem::<f64>(200, 50, 5, 0.1, 7).unwrap();
        let b = make_problem::<f64>(200, 50, 5, 0.1, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.q_true.iter().filter(|&&v| v != 0.0).count(), 5);
        let wide = make_problem::<f64>(50, 100, 3, 0.0, 3).unwrap();
        assert_eq!((wide.problem.n, wide.problem.k), (50, 100));
    }

    #[test]
    fn large_lambda_deactivates_everything() {
        let sp = make_problem::<f64>(60, 10, 4, 0.5, 11).unwrap();
        let lmax = sp.problem.lambda_max();
        let prob = sp.problem.with_lambda(lmax * (1.0 + 1e-12)).unwrap();
        // oracle: the KKT conditions hold at q = 0
        assert_eq!(prob.kkt_residual(&vec![0.0; 10]), 0.0);
        let sol = solve_lasso(&prob, 1e-12, 1000).unwrap();
        assert!(sol.q_hat.iter().all(|&v| v == 0.0));
        let below = prob.clone().with_lambda(0.999 * lmax).unwrap();
        let sol = solve_lasso(&below, 1e-12, 1000).unwrap();
        assert_eq!(sol.q_hat.iter().filter(|&&v| v != 0.0).count(), 1);
    }

    #[test]
    fn scalar_problem_matches_soft_threshold() {
        let x = vec![0.5, -1.0, 2.0, 0.3];
        let y = vec![1.0, 0.2, 3.0, -0.7];
        let xy: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let xx: f64 = x.iter().map(|a| a * a).sum();
        for lambda in [0.0, 0.5, 3.0, 2.0 * xy.abs() - 1e-9, 100.0] {
            let prob = LassoProblem::new(4, 1, x.clone(), y.clone(), lambda).unwrap();
            let sol = solve_lasso(&prob, 1e-14, 10).unwrap();
            let expect = soft_threshold(xy, lambda / 2.0) / xx;
            assert!((sol.q_hat[0] - expect).abs() <= 1e-14 * (1.0 + expect.abs()));
        }
    }

    #[test]
    fn objective_never_increases() {
        let sp = make_problem::<f64>(80, 120, 6, 0.3, 5).unwrap();
        let lambda = 0.05 * sp.problem.lambda_max();
        let prob = sp.problem.with_lambda(lambda).unwrap();
        let mut cd = CoordinateDescent::new(&prob);
        let mut prev = cd.objective();
        for _ in 0..200 {
            cd.sweep();
            let obj = cd.objective();
            assert!(obj <= prev + 1e-12 * (1.0 + prev.abs()), "{obj} > {prev}");
            prev = obj;
        }
    }

    #[test]
    fn standardized_solve_is_certified_on_scaled_columns() {
        let sp = make_problem::<f64>(100, 8, 3, 0.1, 9).unwrap();
        let mut prob = sp.problem;
        for (idx, v) in prob.x.iter_mut().enumerate() {
            *v *= (1 + idx % 8) as f64;
        }
        let prob = prob.with_lambda(5.0).unwrap();
        let opts = SolverOptions {
            standardize: true,
            ..SolverOptions::default()
        };
        let sol = solve_lasso_with(&prob, &opts).unwrap();
        assert!(sol.converged && sol.certified(5.0));
        // the mapped coefficients fit the original design
        assert!((prob.rss(sol.q_hat.as_slice()) - sol.rss).abs() < 1e-9);
    }

    #[test]
    fn surrogates_of_zero_solution() {
        let sp = make_problem::<f64>(30, 6, 0, 0.0, 2).unwrap();
        let prob = sp.problem.with_lambda(1.0).unwrap();
        let sol = solve_lasso(&prob, 1e-12, 100).unwrap();
        let rows = surrogate_report(&sol, 1.0, &[1.0, 1e2], &[10.0, 1e3]).unwrap();
        assert_eq!(rows.len(), 8);
        for r in &rows {
            assert_eq!(r.limit_target, 0.0);
            match r.surrogate {
                Surrogate::Shift => assert_eq!(r.divergence_value, 0.0),
                Surrogate::Phi => {
                    assert!(r.divergence_value > 0.0 && r.divergence_value <= 6.0 / r.family)
                }
            }
        }
    }
}
