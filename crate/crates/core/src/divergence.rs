//! Vector divergences built on the smooth generator.
//!
//! * [`d_phi`]: `sum_k p_k phi(q_k / p_k)`, the generalized phi-divergence.
//! * [`d_new`]: `sum_k p_k phi((q_k - q*_k) / (p_k sigma_k) + 1)`, the scaled
//!   shift divergence, where `p` acts as a weight rather than a reference
//!   point.
//! * [`d_tv`], [`weighted_l1`], [`l1_norm`]: their l1 limits.
//!
//! Every smooth term goes through [`GeneratorParams::phi_offset`] with the
//! offset `t - 1` formed directly: `(q_k - p_k) / p_k` for `d_phi` and
//! `(q_k - q*_k) / (p_k sigma_k)` for `d_new`. With `q* = p` and `sigma = 1`
//! both routes produce bit-identical terms. Sums use [`pairwise_sum`].

use crate::error::Result;
use crate::generator::GeneratorParams;
use crate::scalar::Scalar;
use crate::vector::{pairwise_sum, same_len, PosVector, Vector};

/// Per-coordinate terms `p_k phi(q_k / p_k)`.
pub fn d_phi_terms<F: Scalar>(
    params: &GeneratorParams<F>,
    q: &Vector<F>,
    p: &PosVector<F>,
) -> Result<Vec<F>> {
    same_len(q.len(), p.len())?;
    Ok(q.iter()
        .zip(p.iter())
        .map(|(&qk, &pk)| pk * params.phi_offset((qk - pk) / pk))
        .collect())
}

pub fn d_phi<F: Scalar>(params: &GeneratorParams<F>, q: &Vector<F>, p: &PosVector<F>) -> Result<F> {
    Ok(pairwise_sum(&d_phi_terms(params, q, p)?))
}

/// `sum_k |p_k - q_k|`.
pub fn d_tv<F: Scalar>(q: &Vector<F>, p: &PosVector<F>) -> Result<F> {
    same_len(q.len(), p.len())?;
    let terms: Vec<F> = q
        .iter()
        .zip(p.iter())
        .map(|(&qk, &pk)| (pk - qk).abs())
        .collect();
    Ok(pairwise_sum(&terms))
}

/// Per-coordinate terms `p_k phi((q_k - q*_k) / (p_k sigma_k) + 1)`.
pub fn d_new_terms<F: Scalar>(
    params: &GeneratorParams<F>,
    q: &Vector<F>,
    qstar: &Vector<F>,
    p: &PosVector<F>,
    sigma: &PosVector<F>,
) -> Result<Vec<F>> {
    same_len(q.len(), qstar.len())?;
    same_len(q.len(), p.len())?;
    same_len(q.len(), sigma.len())?;
    Ok(q.iter()
        .zip(qstar.iter())
        .zip(p.iter().zip(sigma.iter()))
        .map(|((&qk, &sk), (&pk, &wk))| pk * params.phi_offset((qk - sk) / (pk * wk)))
        .collect())
}

pub fn d_new<F: Scalar>(
    params: &GeneratorParams<F>,
    q: &Vector<F>,
    qstar: &Vector<F>,
    p: &PosVector<F>,
    sigma: &PosVector<F>,
) -> Result<F> {
    Ok(pairwise_sum(&d_new_terms(params, q, qstar, p, sigma)?))
}

/// `sum_k |q_k - q*_k| / sigma_k`; with `q* = 0` the weighted l1 norm.
pub fn weighted_l1<F: Scalar>(q: &Vector<F>, qstar: &Vector<F>, sigma: &PosVector<F>) -> Result<F> {
    same_len(q.len(), qstar.len())?;
    same_len(q.len(), sigma.len())?;
    let terms: Vec<F> = q
        .iter()
        .zip(qstar.iter())
        .zip(sigma.iter())
        .map(|((&qk, &sk), &wk)| (qk - sk).abs() / wk)
        .collect();
    Ok(pairwise_sum(&terms))
}

pub fn l1_norm<F: Scalar>(q: &Vector<F>) -> F {
    let terms: Vec<F> = q.iter().map(|v| v.abs()).collect();
    pairwise_sum(&terms)
}
