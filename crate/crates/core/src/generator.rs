//! The smooth divergence generator and the total-variation generator.
//!
//! For a parameter triple `(alpha, beta, ctilde)` the generator is
//!
//! ```text
//! phi(t) = ctilde * alpha * { s - 1 + ln(2 / (s + 1)) },
//!     u = beta * (t - 1) / alpha,   s = sqrt(1 + u^2)
//! ```
//!
//! which is the closed form of `s - 1 + ln(2 (s - 1) / u^2)` after using
//! `(s - 1)(s + 1) = u^2`. It is finite at `t = 1`, vanishes there together
//! with its derivative, has slopes `-ctilde*beta` and `+ctilde*beta` at
//! minus and plus infinity, and stays strictly below `ctilde*beta*|t - 1|`
//! away from `t = 1`.
//!
//! Evaluation goes through the offset `d = t - 1` so that callers holding
//! `d` directly (the divergences do) never round through `1 + d`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Parameters `(alpha, beta, ctilde)` of the smooth generator.
///
/// Validated once at construction; evaluation does no further checks on
/// the parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GeneratorParams<F> {
    alpha: F,
    beta: F,
    ctilde: F,
}

/// One evaluation of the generator with its internal decomposition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneratorValue<F> {
    pub value: F,
    /// `beta * (t - 1) / alpha`
    pub u: F,
    /// `sqrt(1 + u^2)`; equal to `|u|` in the asymptotic regime.
    pub s: F,
}

fn check_positive<F: Scalar>(name: &'static str, value: F) -> Result<F> {
    if value.is_finite() && value > F::zero() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value: value.as_f64(),
        })
    }
}

fn check_finite<F: Scalar>(name: &'static str, value: F) -> Result<F> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite {
            name,
            value: value.as_f64(),
        })
    }
}

impl<F: Scalar> GeneratorParams<F> {
    pub fn new(alpha: F, beta: F, ctilde: F) -> Result<Self> {
        Ok(Self {
            alpha: check_positive("alpha", alpha)?,
            beta: check_positive("beta", beta)?,
            ctilde: check_positive("ctilde", ctilde)?,
        })
    }

    /// The normalized family `ctilde = 1 / beta`, whose limit slope is 1.
    pub fn inverse_beta(alpha: F, beta: F) -> Result<Self> {
        let beta = check_positive("beta", beta)?;
        Self::new(alpha, beta, F::one() / beta)
    }

    pub fn alpha(&self) -> F {
        self.alpha
    }

    pub fn beta(&self) -> F {
        self.beta
    }

    pub fn ctilde(&self) -> F {
        self.ctilde
    }

    /// `ctilde * beta`: the asymptotic slope and the factor in front of every
    /// l1 limit.
    pub fn slope(&self) -> F {
        self.ctilde * self.beta
    }

    /// Evaluates `phi(1 + d)` together with `u` and `s`. `d` must be finite.
    pub fn eval_offset(&self, d: F) -> GeneratorValue<F> {
        let one = F::one();
        let ratio = self.beta / self.alpha;
        let u = ratio * d;
        let au = u.abs();
        if au > F::asymptotic_switch() {
            // s - 1 + ln 2 - ln(1 + s) with s replaced by |u|; the neglected
            // terms are O(1/|u|).
            let scale = one - F::LN_2();
            let value = if au.is_finite() {
                self.ctilde * self.alpha * (au - scale - au.ln_1p())
            } else {
                // |u| overflowed: keep the leading term in the form
                // ctilde*beta*|d| and take ln|u| piecewise.
                let ln_u = ratio.ln() + d.abs().ln();
                self.ctilde * (self.beta * d.abs()) - self.ctilde * self.alpha * (scale + ln_u)
            };
            return GeneratorValue { value, u, s: au };
        }
        let s = one.hypot(u);
        // s - 1 without cancellation for small |u|.
        let sm1 = if au < one { u * u / (one + s) } else { s - one };
        // ln(2 / (s + 1)) = -ln(1 + (s - 1) / 2)
        let half = F::lit(0.5);
        let value = self.ctilde * self.alpha * (sm1 - (half * sm1).ln_1p());
        GeneratorValue { value, u, s }
    }

    /// `phi(1 + d)` for a finite offset `d`.
    #[inline]
    pub fn phi_offset(&self, d: F) -> F {
        self.eval_offset(d).value
    }

    pub fn eval(&self, t: F) -> Result<GeneratorValue<F>> {
        let t = check_finite("t", t)?;
        Ok(self.eval_offset(t - F::one()))
    }

    pub fn phi(&self, t: F) -> Result<F> {
        Ok(self.eval(t)?.value)
    }

    /// Exact derivative `ctilde * beta * u / (1 + sqrt(1 + u^2))`.
    pub fn phi_prime(&self, t: F) -> Result<F> {
        let t = check_finite("t", t)?;
        Ok(self.phi_prime_offset(t - F::one()))
    }

    pub fn phi_prime_offset(&self, d: F) -> F {
        let u = self.beta / self.alpha * d;
        if !u.is_finite() {
            return self.slope() * u.signum();
        }
        self.slope() * (u / (F::one() + F::one().hypot(u)))
    }

    /// `phi(t) - ctilde*beta*|t - 1|`, which is `<= 0` with equality only
    /// at `t = 1`.
    pub fn limit_gap(&self, t: F) -> Result<F> {
        let t = check_finite("t", t)?;
        let d = t - F::one();
        Ok(self.phi_offset(d) - self.slope() * d.abs())
    }
}

pub fn phi<F: Scalar>(params: &GeneratorParams<F>, t: F) -> Result<F> {
    params.phi(t)
}

pub fn phi_prime<F: Scalar>(params: &GeneratorParams<F>, t: F) -> Result<F> {
    params.phi_prime(t)
}

pub fn phi_limit_gap<F: Scalar>(params: &GeneratorParams<F>, t: F) -> Result<F> {
    params.limit_gap(t)
}

/// Total-variation generator `|t - 1|`.
pub fn phi_tv<F: Scalar>(t: F) -> Result<F> {
    let t = check_finite("t", t)?;
    Ok((t - F::one()).abs())
}
