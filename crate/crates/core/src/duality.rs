//! The generator as a convex conjugate of a cumulant function.
//!
//! With `M = sum_i p_i`, `shape = M*ctilde*alpha` and `rate = M*ctilde*beta`,
//! let `W = 1 + Z1 - Z2` with `Z1, Z2` independent `Gamma(shape, rate)`
//! (rate parametrization, mean `shape/rate`). Its cumulant function is
//!
//! ```text
//! Lambda(z) = z - shape * ln(1 - z^2 / rate^2),   |z| < rate
//! ```
//!
//! and its Legendre transform `sup_z (z t - Lambda(z))` equals
//! `M * phi_{alpha,beta,ctilde}(t)` for every real `t`. The conjugate here is
//! computed by bisection on `Lambda'(z) = t`, independently of the
//! generator's closed form, so [`LaplaceDual::verify`] is a genuine check of
//! the identity and of the Gamma parametrization.
//!
//! `E[W] = 1` and `Var[W] = 2 shape / rate^2`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generator::GeneratorParams;
use crate::scalar::Scalar;
use crate::vector::PosVector;

/// Relative width at which the conjugate bisection stops.
pub const BISECTION_REL_WIDTH: f64 = 1e-14;
/// Pass threshold of [`LaplaceDual::verify`].
pub const DUALITY_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LaplaceDual<F> {
    params: GeneratorParams<F>,
    m_p: F,
    shape: F,
    rate: F,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualityReport<F> {
    pub grid_size: usize,
    pub max_rel_error: F,
    /// Grid point where `max_rel_error` was attained.
    pub worst_t: F,
    pub pass: bool,
}

impl<F: Scalar> LaplaceDual<F> {
    pub fn new(params: GeneratorParams<F>, m_p: F) -> Result<Self> {
        if !(m_p.is_finite() && m_p > F::zero()) {
            return Err(Error::InvalidParameter {
                name: "m_p",
                value: m_p.as_f64(),
            });
        }
        let scale = m_p * params.ctilde();
        Ok(Self {
            params,
            m_p,
            shape: scale * params.alpha(),
            rate: scale * params.beta(),
        })
    }

    /// Uses the total mass of `p`.
    pub fn for_weights(params: GeneratorParams<F>, p: &PosVector<F>) -> Result<Self> {
        Self::new(params, p.mass())
    }

    pub fn params(&self) -> &GeneratorParams<F> {
        &self.params
    }

    pub fn m_p(&self) -> F {
        self.m_p
    }

    pub fn shape(&self) -> F {
        self.shape
    }

    pub fn rate(&self) -> F {
        self.rate
    }

    pub fn mean(&self) -> F {
        F::one()
    }

    pub fn variance(&self) -> F {
        F::lit(2.0) * self.shape / (self.rate * self.rate)
    }

    fn check_domain(&self, z: F) -> Result<F> {
        if z.is_finite() && z.abs() < self.rate {
            Ok(z / self.rate)
        } else {
            Err(Error::OutsideCumulantDomain {
                z: z.as_f64(),
                rate: self.rate.as_f64(),
            })
        }
    }

    /// `Lambda(z) = ln E[exp(z W)]`, finite on `(-rate, rate)`.
    pub fn cumulant(&self, z: F) -> Result<F> {
        let x = self.check_domain(z)?;
        Ok(z - self.shape * ((-x).ln_1p() + x.ln_1p()))
    }

    /// `Lambda'(z) = 1 + shape * (1/(rate - z) - 1/(rate + z))`.
    pub fn cumulant_derivative(&self, z: F) -> Result<F> {
        self.check_domain(z)?;
        Ok(self.derivative_unchecked(z))
    }

    fn derivative_unchecked(&self, z: F) -> F {
        F::one() + self.shape * (F::one() / (self.rate - z) - F::one() / (self.rate + z))
    }

    fn objective(&self, z: F, t: F) -> F {
        let x = z / self.rate;
        z * t - (z - self.shape * ((-x).ln_1p() + x.ln_1p()))
    }

    /// Maximizer `z*` of `z t - Lambda(z)`, i.e. the root of
    /// `Lambda'(z) = t`, found by bisection.
    pub fn conjugate_argmax(&self, t: F) -> Result<F> {
        if !t.is_finite() {
            return Err(Error::NonFinite {
                name: "t",
                value: t.as_f64(),
            });
        }
        let guard = F::lit(1e-15).max(F::lit(2.0) * F::epsilon());
        let edge = self.rate * (F::one() - guard);
        let width = self.rate * F::lit(BISECTION_REL_WIDTH).max(F::lit(4.0) * F::epsilon());
        let (mut lo, mut hi) = (-edge, edge);
        for _ in 0..256 {
            let mid = lo + (hi - lo) * F::lit(0.5);
            let g = self.derivative_unchecked(mid) - t;
            if g == F::zero() {
                return Ok(mid);
            }
            if g < F::zero() {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= width {
                break;
            }
        }
        Ok(lo + (hi - lo) * F::lit(0.5))
    }

    /// `sup_z (z t - Lambda(z))`.
    pub fn conjugate(&self, t: F) -> Result<F> {
        let z = self.conjugate_argmax(t)?;
        // z = 0 is feasible with objective 0, so the supremum is >= 0.
        Ok(self.objective(z, t).max(F::zero()))
    }

    /// Max over the grid of `|conjugate(t) - M phi(t)| / (1 + M phi(t))`.
    pub fn verify(&self, t_grid: &[F]) -> Result<DualityReport<F>> {
        if t_grid.is_empty() {
            return Err(Error::InvalidGrid {
                name: "t_grid",
                reason: "empty".into(),
            });
        }
        let mut max_rel_error = F::zero();
        let mut worst_t = t_grid[0];
        for &t in t_grid {
            let direct = self.m_p * self.params.phi(t)?;
            let err = (self.conjugate(t)? - direct).abs() / (F::one() + direct);
            if err > max_rel_error || err.is_nan() {
                max_rel_error = err;
                worst_t = t;
            }
        }
        Ok(DualityReport {
            grid_size: t_grid.len(),
            max_rel_error,
            worst_t,
            pass: max_rel_error <= F::lit(DUALITY_TOLERANCE),
        })
    }

    /// `n` draws of `W = 1 + Z1 - Z2`. Draw `i` uses its own ChaCha8 stream
    /// (`seed`, stream `i`), so the output does not depend on how the work
    /// is split across threads.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<F> {
        let gamma = Gamma::new(self.shape.as_f64(), 1.0 / self.rate.as_f64())
            .expect("shape and rate are positive and finite");
        (0..n)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i as u64);
                let z1 = gamma.sample(&mut rng);
                let z2 = gamma.sample(&mut rng);
                F::lit(1.0 + z1 - z2)
            })
            .collect()
    }
}

pub fn cumulant<F: Scalar>(dual: &LaplaceDual<F>, z: F) -> Result<F> {
    dual.cumulant(z)
}

pub fn conjugate<F: Scalar>(dual: &LaplaceDual<F>, t: F) -> Result<F> {
    dual.conjugate(t)
}

pub fn sample_w<F: Scalar>(dual: &LaplaceDual<F>, n: usize, seed: u64) -> Vec<F> {
    dual.sample(n, seed)
}

pub fn verify_duality<F: Scalar>(dual: &LaplaceDual<F>, t_grid: &[F]) -> Result<DualityReport<F>> {
    dual.verify(t_grid)
}

/// `n` equally spaced points on `[lo, hi]` (endpoints included).
pub fn linear_grid<F: Scalar>(lo: F, hi: F, n: usize) -> Vec<F> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / F::from_usize(n - 1).expect("grid size fits");
            (0..n)
                .map(|i| {
                    if i + 1 == n {
                        hi
                    } else {
                        lo + step * F::from_usize(i).expect("index fits")
                    }
                })
                .collect()
        }
    }
}

/// Monte-Carlo estimate of `ln E[exp(z W)]` with its delta-method standard
/// error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MgfEstimate {
    pub z: f64,
    pub log_mgf: f64,
    pub std_error: f64,
}

/// Exponentials are taken relative to the sample maximum so that the
/// estimate stays finite.
pub fn empirical_log_mgf<F: Scalar>(samples: &[F], z: f64) -> MgfEstimate {
    let n = samples.len() as f64;
    let zs: Vec<f64> = samples.iter().map(|w| z * w.as_f64()).collect();
    let shift = zs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = zs.iter().map(|x| (x - shift).exp()).collect();
    let mean = e.iter().sum::<f64>() / n;
    let var = e.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    MgfEstimate {
        z,
        log_mgf: mean.ln() + shift,
        std_error: (var / n).sqrt() / mean,
    }
}
