//! Conjectural partition function of the principal chiral model on the unit
//! circle, assembled from one spherical oscillator (`d = 2`, `omega = 2k`) per
//! level `k` and a free boson:
//!
//! ```text
//! Z(t) = (e^t prod_k sum_{m,n} mult(m,n) exp(-t (lambda_{k,m,n} - 2k)))^2 / eta(e^{-4t})^2
//! lambda_{k,m,n} = m^2 + m + m(n + sqrt(n^2 + 16k^2)) + (n + 1)(n + sqrt(n^2 + 16k^2))/2 - 2k
//! ```
//!
//! `lambda_{k,m,n}` is the shifted `d = 2` eigenvalue at `omega = 2k`, so the
//! level sum with exponent `lambda_{k,m,n}` is the `d = 2` partition function.
//! [`ExponentMode::Verbatim`] keeps the additional `-2k` of the displayed
//! exponent, which makes each level factor at least `e^{2kt}` and the product
//! over levels divergent; [`ExponentMode::Shifted`] drops it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::partition::{partition_function, TruncatedSum};
use crate::special::{dedekind_eta_from_q, ETA_FACTOR_CUTOFF};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ExponentMode {
    /// Exponent `lambda_{k,m,n} - 2k` exactly as displayed.
    #[default]
    Verbatim,
    /// Exponent `lambda_{k,m,n}`, the shifted oscillator eigenvalue.
    Shifted,
}

/// Level-`k` eigenvalue `lambda_{k,m,n}`.
pub fn lambda_kmn(k: u32, m: u32, n: u32) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidArgument("level k must be at least 1".into()));
    }
    let (k, m, n) = (f64::from(k), f64::from(m), f64::from(n));
    let root = n.hypot(4.0 * k);
    Ok(m * m + m + m * (n + root) + (n + 1.0) * (n + root) / 2.0 - 2.0 * k)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChiralPartition {
    pub t: f64,
    pub k_max: u32,
    pub mode: ExponentMode,
    pub value: f64,
    /// Relative error bound from the level-sum tails and the eta truncation.
    pub rel_error_bound: f64,
    /// `factor(k_max) - 1`, the size of the last level factor relative to 1.
    pub level_truncation: f64,
    /// Whether `level_truncation` is within the requested tolerance.
    pub converged: bool,
    /// Level sums `sum mult exp(-t lambda_{k,m,n})`, `k = 1..=k_max`.
    pub level_sums: Vec<TruncatedSum>,
    pub eta: f64,
}

/// Evaluate the conjectural partition product truncated at level `k_max`.
pub fn chiral_partition(t: f64, k_max: u32, abs_tol: f64, mode: ExponentMode) -> Result<ChiralPartition> {
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be at least 1".into()));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("t must be positive, got {t}")));
    }
    let level_sums = (1..=k_max)
        .map(|k| partition_function(&ModelParams::new(2, 2.0 * f64::from(k))?, t, abs_tol))
        .collect::<Result<Vec<_>>>()?;

    let mut product = 1.0;
    let mut rel = 0.0;
    let mut last_factor = 1.0;
    for (k, level) in (1..=k_max).zip(&level_sums) {
        let factor = match mode {
            ExponentMode::Verbatim => (2.0 * f64::from(k) * t).exp() * level.value,
            ExponentMode::Shifted => level.value,
        };
        product *= factor;
        rel += level.tail_bound / level.value;
        last_factor = factor;
    }
    let q = (-4.0 * t).exp();
    let eta = dedekind_eta_from_q(q)?;
    let eta_rel = ETA_FACTOR_CUTOFF / (1.0 - q) + 64.0 * f64::EPSILON;
    let numerator = t.exp() * product;
    let value = numerator * numerator / (eta * eta);
    if !value.is_finite() {
        return Err(Error::Overflow(format!("partition product at t={t}, k_max={k_max}")));
    }
    // squared numerator over squared eta
    let rel_error_bound = (1.0 + rel).powi(2) * (1.0 + eta_rel).powi(2) - 1.0;
    let level_truncation = last_factor - 1.0;
    Ok(ChiralPartition {
        t,
        k_max,
        mode,
        value,
        rel_error_bound,
        level_truncation,
        converged: level_truncation.abs() <= abs_tol,
        level_sums,
        eta,
    })
}
