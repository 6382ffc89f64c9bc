//! Convergence sweeps of the smooth divergences towards their l1 limits.
//!
//! Three limit regimes are covered:
//!
//! | mode | varying | family | parameters | target |
//! |------|---------|--------|------------|--------|
//! | [`SweepMode::AlphaToZero`] | `alpha` | `beta` | `ctilde` fixed (or `1/beta`), weights `p` | `ctilde*beta*||q - p||_1` resp. `ctilde*beta*sum |q - q*|/sigma` |
//! | [`SweepMode::AlphaOverBetaToZero`] | `beta` | `m` | `alpha` fixed, `ctilde = 1/beta`, weights `p/m` | `||q||_1` resp. `sum |q - q*|/sigma` |
//! | [`SweepMode::PToZero`] | `m` | `beta` | `alpha`, `ctilde` fixed, weights `p/m` | `ctilde*beta*||q||_1` resp. `ctilde*beta*sum |q - q*|/sigma` |
//!
//! Rows come out family-major, grid-minor, independent of how the cells
//! are scheduled. Gaps are `target - divergence` and keep their sign.
//!
//! [`check_limits`] certifies every limit at the terminal point of a
//! [`LimitSchedule`] and reports per-claim results.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::divergence::{d_new, d_phi, d_tv, l1_norm, weighted_l1};
use crate::error::{Error, Result};
use crate::generator::GeneratorParams;
use crate::numfmt::format_number;
use crate::scalar::Scalar;
use crate::vector::{same_len, PosVector, Vector};

pub const CSV_HEADER: &str = "mode,varying,family,divergence,target,gap";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMode {
    AlphaToZero,
    AlphaOverBetaToZero,
    PToZero,
}

impl SweepMode {
    pub fn label(self) -> &'static str {
        match self {
            SweepMode::AlphaToZero => "alpha_to_zero",
            SweepMode::AlphaOverBetaToZero => "alpha_over_beta_to_zero",
            SweepMode::PToZero => "p_to_zero",
        }
    }
}

impl FromStr for SweepMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.replace('-', "_").as_str() {
            "alpha_to_zero" => Ok(SweepMode::AlphaToZero),
            "alpha_over_beta_to_zero" => Ok(SweepMode::AlphaOverBetaToZero),
            "p_to_zero" => Ok(SweepMode::PToZero),
            _ => Err(format!("unknown sweep mode `{s}`")),
        }
    }
}

/// Which smooth divergence a sweep evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Surrogate {
    /// `D_phi(q, p)`
    Phi,
    /// `D^new_{phi, p, sigma}(q, q*)`
    Shift,
}

impl Surrogate {
    pub fn label(self) -> &'static str {
        match self {
            Surrogate::Phi => "d_phi",
            Surrogate::Shift => "d_new",
        }
    }
}

impl FromStr for Surrogate {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "phi" | "d_phi" => Ok(Surrogate::Phi),
            "new" | "shift" | "d_new" => Ok(Surrogate::Shift),
            _ => Err(format!("unknown divergence `{s}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CTilde<F> {
    Fixed(F),
    InverseBeta,
}

#[derive(Clone, Debug)]
pub struct SweepSpec<F> {
    pub mode: SweepMode,
    pub surrogate: Surrogate,
    pub grid: Vec<F>,
    pub family: Vec<F>,
    /// Used by the modes that keep `alpha` fixed.
    pub alpha: F,
    /// Ignored by [`SweepMode::AlphaOverBetaToZero`], which forces `1/beta`.
    pub ctilde: CTilde<F>,
    pub q: Vector<F>,
    /// Defaults to zero.
    pub qstar: Option<Vector<F>>,
    /// Defaults to ones.
    pub sigma: Option<PosVector<F>>,
    /// Base weights, divided by `m` in the vanishing-weight modes. Defaults
    /// to ones.
    pub weights: Option<PosVector<F>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepRow<F> {
    pub mode: SweepMode,
    pub surrogate: Surrogate,
    pub varying: F,
    pub family: F,
    pub divergence_value: F,
    pub limit_target: F,
    pub gap: F,
}

impl<F: Scalar> SweepRow<F> {
    /// `mode:surrogate`, the value of the CSV `mode` column.
    pub fn tag(&self) -> String {
        format!("{}:{}", self.mode.label(), self.surrogate.label())
    }
}

pub fn validate_grid<F: Scalar>(name: &'static str, grid: &[F]) -> Result<()> {
    let bad = |reason: String| Err(Error::InvalidGrid { name, reason });
    if grid.is_empty() {
        return bad("empty".into());
    }
    if let Some(v) = grid.iter().find(|v| !(v.is_finite() && **v > F::zero())) {
        return bad(format!("value {v} is not positive and finite"));
    }
    let up = grid.windows(2).all(|w| w[0] < w[1]);
    let down = grid.windows(2).all(|w| w[0] > w[1]);
    if !(up || down) {
        return bad("values must be strictly monotone".into());
    }
    Ok(())
}

struct Resolved<F> {
    qstar: Vector<F>,
    sigma: PosVector<F>,
    weights: PosVector<F>,
}

impl<F: Scalar> SweepSpec<F> {
    fn resolve(&self) -> Result<Resolved<F>> {
        validate_grid("grid", &self.grid)?;
        validate_grid("family", &self.family)?;
        if !(self.alpha.is_finite() && self.alpha > F::zero()) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: self.alpha.as_f64(),
            });
        }
        let k = self.q.len();
        let qstar = match &self.qstar {
            Some(v) => v.clone(),
            None => Vector::zeros(k)?,
        };
        let sigma = match &self.sigma {
            Some(v) => v.clone(),
            None => PosVector::ones(k)?,
        };
        let weights = match &self.weights {
            Some(v) => v.clone(),
            None => PosVector::ones(k)?,
        };
        same_len(k, qstar.len())?;
        same_len(k, sigma.len())?;
        same_len(k, weights.len())?;
        Ok(Resolved {
            qstar,
            sigma,
            weights,
        })
    }

    fn cell(&self, r: &Resolved<F>, family: F, varying: F) -> Result<SweepRow<F>> {
        let (alpha, beta, m) = match self.mode {
            SweepMode::AlphaToZero => (varying, family, None),
            SweepMode::AlphaOverBetaToZero => (self.alpha, varying, Some(family)),
            SweepMode::PToZero => (self.alpha, family, Some(varying)),
        };
        let ctilde = match (self.mode, self.ctilde) {
            (SweepMode::AlphaOverBetaToZero, _) | (_, CTilde::InverseBeta) => F::one() / beta,
            (_, CTilde::Fixed(c)) => c,
        };
        let params = GeneratorParams::new(alpha, beta, ctilde)?;
        let p = match m {
            Some(m) => r.weights.scaled(F::one() / m)?,
            None => r.weights.clone(),
        };
        let (value, base) = match self.surrogate {
            Surrogate::Phi => {
                let value = d_phi(&params, &self.q, &p)?;
                let base = match self.mode {
                    SweepMode::AlphaToZero => d_tv(&self.q, &p)?,
                    _ => l1_norm(&self.q),
                };
                (value, base)
            }
            Surrogate::Shift => (
                d_new(&params, &self.q, &r.qstar, &p, &r.sigma)?,
                weighted_l1(&self.q, &r.qstar, &r.sigma)?,
            ),
        };
        let target = match self.mode {
            SweepMode::AlphaOverBetaToZero => base,
            _ => params.slope() * base,
        };
        Ok(SweepRow {
            mode: self.mode,
            surrogate: self.surrogate,
            varying,
            family,
            divergence_value: value,
            limit_target: target,
            gap: target - value,
        })
    }
}

/// Evaluates every `(family, grid)` cell; `|family| * |grid|` rows.
pub fn run_sweep<F: Scalar>(spec: &SweepSpec<F>) -> Result<Vec<SweepRow<F>>> {
    let resolved = spec.resolve()?;
    let cells: Vec<(F, F)> = spec
        .family
        .iter()
        .flat_map(|&f| spec.grid.iter().map(move |&g| (f, g)))
        .collect();
    cells
        .par_iter()
        .map(|&(f, g)| spec.cell(&resolved, f, g))
        .collect()
}

/// `D_{phi_{alpha,beta,1/beta}}(q, (1/m) 1)` against `||q||_1` over a
/// `beta` grid with `m` as the family parameter.
pub fn beta_sweep_phi<F: Scalar>(
    q: &Vector<F>,
    beta_grid: &[F],
    m_family: &[F],
    alpha: F,
) -> Result<Vec<SweepRow<F>>> {
    run_sweep(&SweepSpec {
        mode: SweepMode::AlphaOverBetaToZero,
        surrogate: Surrogate::Phi,
        grid: beta_grid.to_vec(),
        family: m_family.to_vec(),
        alpha,
        ctilde: CTilde::InverseBeta,
        q: q.clone(),
        qstar: None,
        sigma: None,
        weights: None,
    })
}

/// `D^new_{phi_{alpha,beta,1/beta}, (1/m) 1, sigma}(q, q*)` against
/// `sum |q - q*|/sigma` over a `beta` grid with `m` as the family parameter.
pub fn beta_sweep_shift<F: Scalar>(
    q: &Vector<F>,
    qstar: &Vector<F>,
    sigma: &PosVector<F>,
    beta_grid: &[F],
    m_family: &[F],
    alpha: F,
) -> Result<Vec<SweepRow<F>>> {
    run_sweep(&SweepSpec {
        mode: SweepMode::AlphaOverBetaToZero,
        surrogate: Surrogate::Shift,
        grid: beta_grid.to_vec(),
        family: m_family.to_vec(),
        alpha,
        ctilde: CTilde::InverseBeta,
        q: q.clone(),
        qstar: Some(qstar.clone()),
        sigma: Some(sigma.clone()),
        weights: None,
    })
}

pub fn write_csv<F: Scalar, W: Write>(rows: &[SweepRow<F>], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.tag(),
            format_number(r.varying.as_f64()),
            format_number(r.family.as_f64()),
            format_number(r.divergence_value.as_f64()),
            format_number(r.limit_target.as_f64()),
            format_number(r.gap.as_f64()),
        )?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Limit certification
// ---------------------------------------------------------------------------

/// How the ratio `alpha / beta` is driven to zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RatioRoute {
    /// `alpha = r * beta` with `beta` fixed.
    AlphaDown,
    /// `beta = alpha / r` with `alpha` fixed.
    BetaUp,
}

/// How the weight vector is driven to zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightPath {
    /// `p / m`
    Scaled,
    /// `(1/m) 1`
    Uniform,
    /// `p_k * m^(-gamma_k)` with per-coordinate exponents.
    Heterogeneous,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "claim", content = "path", rename_all = "snake_case")]
pub enum Claim {
    /// `phi_{alpha,beta,c}(t) -> c*beta*|t - 1|` as `alpha -> 0`, at every `t_k = q_k/p_k`.
    GeneratorAlpha,
    /// `phi_{alpha,beta,1/beta}(t) -> |t - 1|` as `alpha/beta -> 0`.
    GeneratorRatio(RatioRoute),
    /// `D_phi(q, p) -> c*beta*||q - p||_1` as `alpha -> 0`.
    DistanceAlpha,
    /// `D_{phi_{alpha,beta,1/beta}}(q, p) -> ||q - p||_1` as `alpha/beta -> 0`.
    DistanceRatio(RatioRoute),
    /// `D_phi(q, P_m) -> c*beta*||q||_1` as `P_m -> 0`.
    NormVanishingWeights(WeightPath),
    /// `D^new(q, q*) -> c*beta*sum |q - q*|/sigma` as `alpha -> 0`.
    ShiftAlpha,
    /// `D^new_{phi_{alpha,beta,1/beta}}(q, q*) -> sum |q - q*|/sigma` as `alpha/beta -> 0`.
    ShiftRatio(RatioRoute),
    /// `D^new_{phi, P_m, sigma}(q, q*) -> c*beta*sum |q - q*|/sigma` as `P_m -> 0`.
    ShiftVanishingWeights(WeightPath),
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let route = |r: &RatioRoute| match r {
            RatioRoute::AlphaDown => "alpha_down",
            RatioRoute::BetaUp => "beta_up",
        };
        let path = |p: &WeightPath| match p {
            WeightPath::Scaled => "scaled",
            WeightPath::Uniform => "uniform",
            WeightPath::Heterogeneous => "heterogeneous",
        };
        match self {
            Claim::GeneratorAlpha => write!(f, "generator/alpha"),
            Claim::GeneratorRatio(r) => write!(f, "generator/ratio/{}", route(r)),
            Claim::DistanceAlpha => write!(f, "distance/alpha"),
            Claim::DistanceRatio(r) => write!(f, "distance/ratio/{}", route(r)),
            Claim::NormVanishingWeights(p) => write!(f, "norm/weights/{}", path(p)),
            Claim::ShiftAlpha => write!(f, "shift/alpha"),
            Claim::ShiftRatio(r) => write!(f, "shift/ratio/{}", route(r)),
            Claim::ShiftVanishingWeights(p) => write!(f, "shift/weights/{}", path(p)),
        }
    }
}

/// Schedules driving each limit, plus the terminal acceptance bound.
#[derive(Clone, Debug)]
pub struct LimitSchedule<F> {
    /// Decreasing `alpha` values.
    pub alpha: Vec<F>,
    /// Decreasing `alpha / beta` values.
    pub ratio: Vec<F>,
    /// Increasing `m` values for the vanishing-weight limits.
    pub m: Vec<F>,
    /// Per-coordinate exponents for [`WeightPath::Heterogeneous`]; that path
    /// is skipped when `None`.
    pub decay: Option<Vec<F>>,
    /// A claim passes when `|gap| <= rel_bound * (1 + |target|)` at the last
    /// schedule point.
    pub rel_bound: F,
}

impl<F: Scalar> Default for LimitSchedule<F> {
    /// Ratio-10 geometric schedules ending at `alpha = alpha/beta = 1e-8`
    /// and `m = 1e10`, with terminal bound `1e-6`. The weight limits
    /// converge like `(alpha/beta) ln(m) / m`, hence the longer `m` range.
    fn default() -> Self {
        let down: Vec<F> = (0..=8).map(|i| F::lit(10f64.powi(-i))).collect();
        let up: Vec<F> = (0..=10).map(|i| F::lit(10f64.powi(i))).collect();
        Self {
            alpha: down.clone(),
            ratio: down,
            m: up,
            decay: None,
            rel_bound: F::lit(1e-6),
        }
    }
}

/// One limit instance. `params` supplies `beta` and `ctilde` for the
/// `alpha -> 0` limits and `alpha` for the others.
#[derive(Clone, Debug)]
pub struct LimitInstance<F> {
    pub params: GeneratorParams<F>,
    pub q: Vector<F>,
    pub p: PosVector<F>,
    pub qstar: Vector<F>,
    pub sigma: PosVector<F>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TracePoint<F> {
    pub parameter: F,
    pub value: F,
    pub target: F,
    pub gap: F,
    /// `|gap| / (1 + |target|)`
    pub rel_gap: F,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimResult<F> {
    pub claim: Claim,
    pub trace: Vec<TracePoint<F>>,
    pub bound: F,
    /// Whether `rel_gap` was non-increasing along the schedule. Recorded,
    /// not required.
    pub monotone: bool,
    pub pass: bool,
}

impl<F: Scalar> ClaimResult<F> {
    pub fn terminal(&self) -> &TracePoint<F> {
        self.trace.last().expect("schedules are non-empty")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitReport<F> {
    pub claims: Vec<ClaimResult<F>>,
    pub pass: bool,
}

impl<F: Scalar> LimitReport<F> {
    pub fn get(&self, claim: Claim) -> Option<&ClaimResult<F>> {
        self.claims.iter().find(|c| c.claim == claim)
    }
}

fn point<F: Scalar>(parameter: F, value: F, target: F) -> TracePoint<F> {
    let gap = target - value;
    TracePoint {
        parameter,
        value,
        target,
        gap,
        rel_gap: gap.abs() / (F::one() + target.abs()),
    }
}

/// Weights `p_k * m^(-gamma_k)`.
pub fn heterogeneous_weights<F: Scalar>(
    p: &PosVector<F>,
    m: F,
    decay: &[F],
) -> Result<PosVector<F>> {
    same_len(p.len(), decay.len())?;
    PosVector::new(
        p.iter()
            .zip(decay)
            .map(|(&pk, &g)| pk * m.powf(-g))
            .collect(),
    )
}

impl<F: Scalar> LimitInstance<F> {
    fn validate(&self) -> Result<()> {
        let k = self.q.len();
        same_len(k, self.p.len())?;
        same_len(k, self.qstar.len())?;
        same_len(k, self.sigma.len())
    }

    fn ratio_params(&self, route: RatioRoute, r: F) -> Result<GeneratorParams<F>> {
        match route {
            RatioRoute::AlphaDown => {
                let beta = self.params.beta();
                GeneratorParams::inverse_beta(r * beta, beta)
            }
            RatioRoute::BetaUp => {
                let alpha = self.params.alpha();
                GeneratorParams::inverse_beta(alpha, alpha / r)
            }
        }
    }

    fn alpha_params(&self, alpha: F) -> Result<GeneratorParams<F>> {
        GeneratorParams::new(alpha, self.params.beta(), self.params.ctilde())
    }

    fn weights(&self, path: WeightPath, m: F, decay: Option<&[F]>) -> Result<PosVector<F>> {
        match path {
            WeightPath::Scaled => self.p.scaled(F::one() / m),
            WeightPath::Uniform => PosVector::constant(self.q.len(), F::one() / m),
            WeightPath::Heterogeneous => {
                heterogeneous_weights(&self.p, m, decay.expect("decay exponents present"))
            }
        }
    }

    /// Worst coordinate of the pointwise generator limit.
    fn pointwise(&self, params: &GeneratorParams<F>, slope: F) -> (F, F) {
        let mut worst = (F::zero(), F::zero());
        let mut worst_rel = F::neg_infinity();
        for (&qk, &pk) in self.q.iter().zip(self.p.iter()) {
            let d = (qk - pk) / pk;
            let value = params.phi_offset(d);
            let target = slope * d.abs();
            let rel = (target - value).abs() / (F::one() + target);
            if rel > worst_rel {
                worst_rel = rel;
                worst = (value, target);
            }
        }
        worst
    }

    fn evaluate(&self, claim: Claim, parameter: F, decay: Option<&[F]>) -> Result<TracePoint<F>> {
        let q = &self.q;
        let tv = || d_tv(q, &self.p);
        let wl1 = || weighted_l1(q, &self.qstar, &self.sigma);
        let (value, target) = match claim {
            Claim::GeneratorAlpha => {
                let g = self.alpha_params(parameter)?;
                self.pointwise(&g, g.slope())
            }
            Claim::GeneratorRatio(route) => {
                let g = self.ratio_params(route, parameter)?;
                self.pointwise(&g, F::one())
            }
            Claim::DistanceAlpha => {
                let g = self.alpha_params(parameter)?;
                (d_phi(&g, q, &self.p)?, g.slope() * tv()?)
            }
            Claim::DistanceRatio(route) => {
                let g = self.ratio_params(route, parameter)?;
                (d_phi(&g, q, &self.p)?, tv()?)
            }
            Claim::NormVanishingWeights(path) => {
                let pm = self.weights(path, parameter, decay)?;
                let g = &self.params;
                (d_phi(g, q, &pm)?, g.slope() * l1_norm(q))
            }
            Claim::ShiftAlpha => {
                let g = self.alpha_params(parameter)?;
                (
                    d_new(&g, q, &self.qstar, &self.p, &self.sigma)?,
                    g.slope() * wl1()?,
                )
            }
            Claim::ShiftRatio(route) => {
                let g = self.ratio_params(route, parameter)?;
                (d_new(&g, q, &self.qstar, &self.p, &self.sigma)?, wl1()?)
            }
            Claim::ShiftVanishingWeights(path) => {
                let pm = self.weights(path, parameter, decay)?;
                let g = &self.params;
                (
                    d_new(g, q, &self.qstar, &pm, &self.sigma)?,
                    g.slope() * wl1()?,
                )
            }
        };
        Ok(point(parameter, value, target))
    }
}

fn claim_schedule<F: Scalar>(claim: Claim, s: &LimitSchedule<F>) -> &[F] {
    match claim {
        Claim::GeneratorAlpha | Claim::DistanceAlpha | Claim::ShiftAlpha => &s.alpha,
        Claim::GeneratorRatio(_) | Claim::DistanceRatio(_) | Claim::ShiftRatio(_) => &s.ratio,
        Claim::NormVanishingWeights(_) | Claim::ShiftVanishingWeights(_) => &s.m,
    }
}

/// Every claim applicable to `schedule`, in reporting order.
pub fn claims_for<F: Scalar>(schedule: &LimitSchedule<F>) -> Vec<Claim> {
    use RatioRoute::*;
    let mut paths = vec![WeightPath::Scaled, WeightPath::Uniform];
    if schedule.decay.is_some() {
        paths.push(WeightPath::Heterogeneous);
    }
    let mut claims = vec![
        Claim::GeneratorAlpha,
        Claim::GeneratorRatio(AlphaDown),
        Claim::GeneratorRatio(BetaUp),
        Claim::DistanceAlpha,
        Claim::DistanceRatio(AlphaDown),
        Claim::DistanceRatio(BetaUp),
    ];
    claims.extend(paths.iter().map(|&p| Claim::NormVanishingWeights(p)));
    claims.extend([
        Claim::ShiftAlpha,
        Claim::ShiftRatio(AlphaDown),
        Claim::ShiftRatio(BetaUp),
    ]);
    claims.extend(paths.iter().map(|&p| Claim::ShiftVanishingWeights(p)));
    claims
}

/// Runs a single claim along its schedule.
pub fn check_claim<F: Scalar>(
    instance: &LimitInstance<F>,
    schedule: &LimitSchedule<F>,
    claim: Claim,
) -> Result<ClaimResult<F>> {
    instance.validate()?;
    let points = claim_schedule(claim, schedule);
    validate_grid("schedule", points)?;
    let decay = schedule.decay.as_deref();
    if let Some(d) = decay {
        same_len(instance.q.len(), d.len())?;
    }
    let trace = points
        .iter()
        .map(|&x| instance.evaluate(claim, x, decay))
        .collect::<Result<Vec<_>>>()?;
    let monotone = trace.windows(2).all(|w| w[1].rel_gap <= w[0].rel_gap);
    let last = trace.last().expect("validated non-empty");
    let pass = last.rel_gap.is_finite() && last.rel_gap <= schedule.rel_bound;
    Ok(ClaimResult {
        claim,
        trace,
        bound: schedule.rel_bound,
        monotone,
        pass,
    })
}

/// Certifies every generator, distance, norm and shift limit for one
/// instance.
pub fn check_limits<F: Scalar>(
    instance: &LimitInstance<F>,
    schedule: &LimitSchedule<F>,
) -> Result<LimitReport<F>> {
    let claims = claims_for(schedule)
        .into_iter()
        .map(|c| check_claim(instance, schedule, c))
        .collect::<Result<Vec<_>>>()?;
    let pass = claims.iter().all(|c| c.pass);
    Ok(LimitReport { claims, pass })
}
