//! Smooth surrogates of l1-type distances.
//!
//! The generator `phi_{alpha,beta,c}` is a convex, nonnegative function with
//! `phi(1) = 0` that tends to `c * beta * |t - 1|` as `alpha -> 0` or
//! `alpha / beta -> 0`. Plugged into a phi-divergence it gives smooth
//! approximations of the total variation distance and of (weighted) l1
//! norms. The crate also provides the Gamma-difference variable whose
//! cumulant generating function is the convex conjugate of `phi`, limit
//! sweeps and certification, and a coordinate-descent LASSO solver whose
//! solutions can be fed through the surrogates.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`); the aliases below
//! fix the common `f64` instantiation.

pub mod divergence;
pub mod duality;
pub mod error;
pub mod generator;
pub mod lasso;
pub mod limits;
pub mod numfmt;
pub mod scalar;
pub mod vector;

pub use divergence::{d_new, d_new_terms, d_phi, d_phi_terms, d_tv, l1_norm, weighted_l1};
pub use duality::{
    conjugate, cumulant, empirical_log_mgf, linear_grid, sample_w, verify_duality, DualityReport,
    LaplaceDual, MgfEstimate,
};
pub use error::{Error, Result};
pub use generator::{phi, phi_limit_gap, phi_prime, phi_tv, GeneratorParams, GeneratorValue};
pub use lasso::{
    make_problem, solve_lasso, solve_lasso_with, surrogate_report, CoordinateDescent, LassoProblem,
    LassoSolution, SolverOptions, SyntheticProblem,
};
pub use limits::{
    check_claim, check_limits, claims_for, heterogeneous_weights, run_sweep, validate_grid,
    write_csv, CTilde, Claim, ClaimResult, LimitInstance, LimitReport, LimitSchedule, RatioRoute,
    Surrogate, SweepMode, SweepRow, SweepSpec, TracePoint, WeightPath,
};
pub use numfmt::format_number;
pub use scalar::Scalar;
pub use vector::{pairwise_sum, PosVector, Vector};

pub type Params64 = GeneratorParams<f64>;
pub type Params32 = GeneratorParams<f32>;
pub type Vector64 = Vector<f64>;
pub type PosVector64 = PosVector<f64>;
pub type LaplaceDual64 = LaplaceDual<f64>;
pub type LassoProblem64 = LassoProblem<f64>;
pub type LassoSolution64 = LassoSolution<f64>;
pub type SweepRow64 = SweepRow<f64>;
pub type SweepSpec64 = SweepSpec<f64>;
