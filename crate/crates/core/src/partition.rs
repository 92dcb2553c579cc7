//! Heat-trace partition functions `tr exp(-t L)` of the shifted oscillator.
//!
//! Every sum is truncated with a one-sided geometric majorant. For a block
//! of terms `exp(-t ((delta k + c)^2 - C^2))`, `k > K`, the inequality
//! `x^2 >= x0^2 + 2 x0 (x - x0)` gives
//!
//! ```text
//! sum_{k > K} <= exp(-t (x0^2 - C^2)) / (1 - exp(-2 t delta x0)),  x0 = delta (K + 1) + c.
//! ```
//!
//! Blocks of angular degree `n` are majorized by `mult(n) exp(-t((n+h)^2 - c_0^2)) / (1 - exp(-2t(n+h)))`
//! with `h = (d-1)/2`, and the remaining blocks by a ratio test whose ratio
//! is nonincreasing in `n`. The reported `tail_bound` also carries a
//! floating-point rounding bound, so the true series lies within
//! `tail_bound` of `value`.

use std::f64::consts::PI;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::special::{bernoulli, sphere_volume, Rational};
use crate::spectrum::{ground_state, radial_offset};

/// Maximum number of series terms evaluated by one partition sum.
pub const TERM_CAP: u64 = 10_000_000;

/// Condition number above which a least-squares fit is rejected.
pub const FIT_CONDITION_LIMIT: f64 = 1e10;

/// A truncated positive series with a certified bound on what was left out.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncatedSum {
    pub value: f64,
    pub tail_bound: f64,
    pub terms_used: u64,
    pub t: f64,
}

/// Coefficients of an asymptotic series in powers of `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticCoeffs {
    pub order: usize,
    pub coefficients: Vec<f64>,
    /// Exact values when known (Mulholland coefficients); empty for fits.
    pub exact: Vec<Rational>,
    /// Condition number of the least-squares design matrix, for fits.
    pub condition_number: Option<f64>,
}

/// Neumaier-compensated sum of nonnegative terms with a running rounding bound.
#[derive(Debug, Default, Clone, Copy)]
struct Accumulator {
    sum: f64,
    comp: f64,
    rounding: f64,
    terms: u64,
}

impl Accumulator {
    /// `term` with an estimate of its own relative evaluation error.
    fn add(&mut self, term: f64, rel_err: f64) {
        let t = self.sum + term;
        if self.sum.abs() >= term.abs() {
            self.comp += (self.sum - t) + term;
        } else {
            self.comp += (term - t) + self.sum;
        }
        self.sum = t;
        self.rounding += term * rel_err;
        self.terms += 1;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }

    fn rounding_bound(&self) -> f64 {
        self.rounding + 4.0 * f64::EPSILON * self.value().abs()
    }
}

fn check_t(t: f64, abs_tol: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("t must be positive and finite, got {t}")));
    }
    if !(abs_tol > 0.0 && abs_tol.is_finite()) {
        return Err(Error::InvalidArgument(format!("abs_tol must be positive, got {abs_tol}")));
    }
    Ok(())
}

/// Majorant for `sum_{k>K} exp(-t ((delta k + c)^2 - shift2))` given `x0 = delta (K+1) + c > 0`.
fn gaussian_tail(t: f64, x0: f64, delta: f64, shift2: f64) -> f64 {
    let denom = -(-2.0 * t * delta * x0).exp_m1();
    (-t * (x0 * x0 - shift2)).exp() / denom
}

fn finish(acc: Accumulator, truncation: f64, t: f64, abs_tol: f64) -> Result<TruncatedSum> {
    let rounding = acc.rounding_bound();
    let tail_bound = truncation + rounding;
    if rounding > abs_tol {
        return Err(Error::ToleranceBelowRoundoff { tol: abs_tol, floor: rounding });
    }
    if tail_bound > abs_tol {
        return Err(Error::BudgetExceeded { cap: TERM_CAP, tol: abs_tol, tail: tail_bound });
    }
    Ok(TruncatedSum { value: acc.value(), tail_bound, terms_used: acc.terms, t })
}

/// Relative error of `exp(-t u v)` when `u`, `v` carry absolute errors `du`, `dv`.
fn term_rel_err(t: f64, u: f64, v: f64, du: f64, dv: f64) -> f64 {
    f64::EPSILON * (2.0 + 4.0 * t * (u * v).abs()) + t * (v.abs() * du + u.abs() * dv)
}

/// Terms of one Gaussian block: `weight exp(-t ((delta k + c)^2 - shift^2))`.
#[derive(Debug, Clone, Copy)]
struct GaussianBlock {
    delta: f64,
    c: f64,
    shift: f64,
    weight: f64,
    /// Absolute errors of `c - shift` and `c + shift` as computed.
    err_minus: f64,
    err_plus: f64,
}

impl GaussianBlock {
    /// Add terms `k >= k0` to `acc` until the majorant of the rest is at
    /// most `allowance`; returns that majorant.
    fn sum_into(&self, acc: &mut Accumulator, t: f64, k0: u64, allowance: f64) -> Result<f64> {
        let mut k = k0;
        loop {
            if acc.terms >= TERM_CAP {
                return Err(Error::BudgetExceeded { cap: TERM_CAP, tol: allowance, tail: f64::INFINITY });
            }
            let h = self.delta * k as f64;
            // (h + c)^2 - shift^2 = (h + c - shift)(h + c + shift)
            let u = h + (self.c - self.shift);
            let v = h + (self.c + self.shift);
            acc.add(self.weight * (-t * u * v).exp(), term_rel_err(t, u, v, self.err_minus, self.err_plus));
            let x0 = self.delta * (k + 1) as f64 + self.c;
            let rest = self.weight * gaussian_tail(t, x0, self.delta, self.shift * self.shift);
            if rest <= allowance {
                return Ok(rest);
            }
            k += 1;
        }
    }
}

fn multiplicity_f64(d: u32, n: u32) -> f64 {
    if n == 0 {
        return 1.0;
    }
    if d == 2 {
        return 2.0;
    }
    // (2n + d - 2)/(n + d - 2) * C(n + d - 2, d - 2)
    let nf = f64::from(n);
    let mut binom = 1.0;
    for i in 1..=(d - 2) {
        binom *= (nf + f64::from(i)) / f64::from(i);
    }
    (2.0 * nf + f64::from(d) - 2.0) / (nf + f64::from(d) - 2.0) * binom
}

/// Budget errors from a block carry the block's share of the tolerance;
/// report the caller's instead.
fn report_tol(e: Error, abs_tol: f64) -> Error {
    match e {
        Error::BudgetExceeded { cap, tail, .. } => Error::BudgetExceeded { cap, tol: abs_tol, tail },
        other => other,
    }
}

/// Certified `tr exp(-t L_shifted)` for any `d >= 1`, `omega >= 0`.
pub fn partition_function(params: &ModelParams, t: f64, abs_tol: f64) -> Result<TruncatedSum> {
    check_t(t, abs_tol)?;
    let eps = f64::EPSILON;
    let mut acc = Accumulator::default();
    if params.d() == 1 {
        let truncation = if params.omega() == 0.0 {
            // sum over n in Z of exp(-t n^2) = 1 + 2 sum_{n >= 1}
            let block =
                GaussianBlock { delta: 1.0, c: 0.0, shift: 0.0, weight: 2.0, err_minus: 0.0, err_plus: 0.0 };
            acc.add(1.0, 0.0);
            block.sum_into(&mut acc, t, 1, 0.25 * abs_tol).map_err(|e| report_tol(e, abs_tol))?
        } else {
            // shifted eigenvalues (m/2 + eta)^2 - eta^2
            let eta = ground_state(params).exponent;
            let block = GaussianBlock {
                delta: 0.5,
                c: eta,
                shift: eta,
                weight: 1.0,
                err_minus: 0.0,
                err_plus: 8.0 * eps * eta,
            };
            block.sum_into(&mut acc, t, 0, 0.25 * abs_tol).map_err(|e| report_tol(e, abs_tol))?
        };
        return finish(acc, truncation, t, abs_tol);
    }

    let d = params.d();
    let h = 0.5 * (f64::from(d) - 1.0);
    let c0 = radial_offset(params, 0);
    let c02 = c0 * c0;
    let block_majorant = |n: u32| {
        let x = f64::from(n) + h;
        multiplicity_f64(d, n) * gaussian_tail(t, x, 1.0, c02)
    };
    let mut m_tails = 0.0;
    let mut n: u32 = 0;
    loop {
        let cn = radial_offset(params, n);
        let c_err = 4.0 * eps * (cn + c0);
        let block = GaussianBlock {
            delta: 1.0,
            c: cn,
            shift: c0,
            weight: multiplicity_f64(d, n),
            // c_n - c_0 is exactly zero for n = 0
            err_minus: if n == 0 { 0.0 } else { c_err },
            err_plus: c_err,
        };
        let allowance = 0.25 * abs_tol / ((f64::from(n) + 1.0) * (f64::from(n) + 2.0));
        m_tails += block.sum_into(&mut acc, t, 0, allowance).map_err(|e| report_tol(e, abs_tol))?;

        // remaining blocks n' > n
        let next = n + 1;
        let ratio = multiplicity_f64(d, next + 1) / multiplicity_f64(d, next)
            * (-t * (2.0 * (f64::from(next) + h) + 1.0)).exp();
        let n_tail = if ratio < 1.0 { block_majorant(next) / (1.0 - ratio) } else { f64::INFINITY };
        let truncation = m_tails + n_tail;
        let rounding = acc.rounding_bound();
        if rounding > abs_tol {
            return Err(Error::ToleranceBelowRoundoff { tol: abs_tol, floor: rounding });
        }
        if truncation + rounding <= abs_tol {
            return finish(acc, truncation, t, abs_tol);
        }
        if acc.terms >= TERM_CAP || n == u32::MAX - 2 {
            return Err(Error::BudgetExceeded { cap: TERM_CAP, tol: abs_tol, tail: truncation });
        }
        n = next;
    }
}

/// `sqrt(pi/t) (1 + 2 sum_{n>=1} exp(-pi^2 n^2 / t))`, the Poisson dual of the
/// `d = 1`, `omega = 0` trace.
pub fn poisson_dual_d1(t: f64) -> Result<f64> {
    check_t(t, 1.0)?;
    let mut s = 0.0;
    let mut n = 1.0f64;
    loop {
        let term = (-PI * PI * n * n / t).exp();
        if term < 1e-18 {
            break;
        }
        s += term;
        n += 1.0;
    }
    Ok((PI / t).sqrt() * (1.0 + 2.0 * s))
}

/// `S(t) = sum_{n>=0} (2n+1) exp(-t (n + 1/2)^2)` with a certified tail.
pub fn mulholland_sum(t: f64, abs_tol: f64) -> Result<TruncatedSum> {
    check_t(t, abs_tol)?;
    let f = |n: f64| (2.0 * n + 1.0) * (-t * (n + 0.5) * (n + 0.5)).exp();
    let mut acc = Accumulator::default();
    let mut n = 0u64;
    loop {
        let x = n as f64;
        acc.add(f(x), f64::EPSILON * (3.0 + 4.0 * t * (x + 0.5) * (x + 0.5)));
        // ratio f(k+1)/f(k) is decreasing in k
        let next = x + 1.0;
        let ratio = (2.0 * next + 3.0) / (2.0 * next + 1.0) * (-t * (2.0 * next + 2.0)).exp();
        if ratio < 1.0 {
            let tail = f(next) / (1.0 - ratio);
            if tail + acc.rounding_bound() <= abs_tol {
                return finish(acc, tail, t, abs_tol);
            }
        }
        if acc.terms >= TERM_CAP {
            return Err(Error::BudgetExceeded { cap: TERM_CAP, tol: abs_tol, tail: f64::INFINITY });
        }
        n += 1;
    }
}

/// Exact small-`t` coefficients `a_n = (-1)^n B_{2n+2} (1 - 2^(-2n-1)) / (n + 1)`, `n = 0..=order`,
/// of `S(t) ~ 1/t + a_0 + a_1 t + ...`.
pub fn mulholland_coeffs(order: usize) -> Result<AsymptoticCoeffs> {
    if order > 20 {
        return Err(Error::InvalidArgument(format!("order must be at most 20, got {order}")));
    }
    let mut exact = Vec::with_capacity(order + 1);
    for n in 0..=order {
        let b = bernoulli(2 * n as u32 + 2)?;
        let two_pow = Rational::from_integer((1u64 << (2 * n + 1)).into());
        let factor = (Rational::from_integer(1.into()) - Rational::from_integer(1.into()) / two_pow)
            / Rational::from_integer((n as u64 + 1).into());
        let sign = if n % 2 == 0 { 1 } else { -1 };
        exact.push(b * factor * Rational::from_integer(sign.into()));
    }
    let coefficients = exact.iter().map(|r| r.to_f64().unwrap_or(f64::NAN)).collect();
    Ok(AsymptoticCoeffs { order, coefficients, exact, condition_number: None })
}

/// Relative tolerance used for the partition sums behind the heat-trace checks.
const HEAT_REL_TOL: f64 = 1e-12;

fn leading_term(params: &ModelParams, t: f64) -> f64 {
    let d = f64::from(params.d());
    sphere_volume(params.d()) / (4.0 * PI * t).powf(d / 2.0)
}

/// `tr exp(-t L) (4 pi t)^(d/2) / vol(S^d)` for each `t`; tends to 1 as `t -> 0`.
pub fn heat_trace_leading_check(params: &ModelParams, t_grid: &[f64]) -> Result<Vec<f64>> {
    t_grid
        .iter()
        .map(|&t| {
            check_t(t, 1.0)?;
            let lead = leading_term(params, t);
            let z = partition_function(params, t, HEAT_REL_TOL * lead.max(1.0))?;
            Ok(z.value / lead)
        })
        .collect()
}

/// Geometric grid `0.4 * 2^(-j)`, `j = 0..order+4`.
pub fn default_fit_grid(order: usize) -> Vec<f64> {
    (0..order + 4).map(|j| 0.4 * 0.5f64.powi(j as i32)).collect()
}

/// Least-squares fit of the normalized heat trace to a polynomial in `t`.
pub fn fit_asymptotic_coeffs(params: &ModelParams, order: usize, t_grid: &[f64]) -> Result<AsymptoticCoeffs> {
    if t_grid.len() < order + 3 {
        return Err(Error::InvalidArgument(format!(
            "need at least {} grid points for order {order}",
            order + 3
        )));
    }
    let ratios = heat_trace_leading_check(params, t_grid)?;
    let cols = order + 1;
    let design = nalgebra::DMatrix::from_fn(t_grid.len(), cols, |i, j| t_grid[i].powi(j as i32));
    let rhs = nalgebra::DVector::from_column_slice(&ratios);
    let svd = design.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if cond > FIT_CONDITION_LIMIT {
        return Err(Error::IllConditioned(cond));
    }
    let sol =
        svd.solve(&rhs, 0.0).map_err(|e| Error::InvalidArgument(format!("least squares failed: {e}")))?;
    Ok(AsymptoticCoeffs {
        order,
        coefficients: sol.iter().copied().collect(),
        exact: Vec::new(),
        condition_number: Some(cond),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(d: u32, w: f64) -> ModelParams {
        ModelParams::new(d, w).unwrap()
    }

    #[test]
    fn d1_zero_frequency_matches_poisson() {
        for t in [0.1, 1.0, 5.0] {
            let z = partition_function(&p(1, 0.0), t, 1e-14).unwrap();
            let dual = poisson_dual_d1(t).unwrap();
            assert!((z.value - dual).abs() <= 1e-13 * dual, "t={t}");
        }
    }

    #[test]
    fn large_t_is_ground_state_only() {
        for (d, w) in [(1, 0.0), (1, 2.0), (2, 0.0), (2, 1.0), (3, 0.5), (5, 2.0)] {
            let z = partition_function(&p(d, w), 60.0, 1e-12).unwrap();
            assert!((z.value - 1.0).abs() < 1e-12, "d={d} w={w}: {}", z.value);
        }
    }

    #[test]
    fn d2_zero_frequency_brute_force() {
        let t = 1.0;
        let brute: f64 = (0..=100).map(|n| (2.0 * n as f64 + 1.0) * (-t * (n * n + n) as f64).exp()).sum();
        let z = partition_function(&p(2, 0.0), t, 1e-14).unwrap();
        assert!((z.value - brute).abs() < 1e-13);
        assert!(z.tail_bound <= 1e-14);
    }

    #[test]
    fn d2_prefactor_identity() {
        for t in [0.05, 0.3, 1.0, 4.0] {
            let z = partition_function(&p(2, 0.0), t, 1e-13).unwrap();
            let s = mulholland_sum(t, 1e-13).unwrap();
            let rhs = (t / 4.0).exp() * s.value;
            assert!((z.value - rhs).abs() <= 1e-13 * z.value.max(1.0) + z.tail_bound + s.tail_bound);
        }
    }

    #[test]
    fn invalid_arguments() {
        assert!(partition_function(&p(2, 1.0), 0.0, 1e-10).is_err());
        assert!(partition_function(&p(2, 1.0), 1.0, 0.0).is_err());
        assert!(poisson_dual_d1(-1.0).is_err());
        assert!(mulholland_coeffs(21).is_err());
        assert!(fit_asymptotic_coeffs(&p(2, 0.0), 3, &[0.1, 0.2]).is_err());
    }

    #[test]
    fn budget_exceeded_for_tiny_t() {
        let r = partition_function(&p(3, 1.0), 1e-7, 1.0);
        assert!(matches!(r, Err(Error::BudgetExceeded { .. })), "{r:?}");
    }

    #[test]
    fn roundoff_floor_reported() {
        let r = partition_function(&p(2, 0.0), 0.01, 1e-20);
        assert!(matches!(r, Err(Error::ToleranceBelowRoundoff { .. })), "{r:?}");
    }

    #[test]
    fn mulholland_exact_values() {
        let c = mulholland_coeffs(3).unwrap();
        assert_eq!(c.exact[0].to_string(), "1/12");
        assert_eq!(c.exact[1].to_string(), "7/480");
        assert_eq!(c.exact.len(), 4);
        let c = mulholland_coeffs(10).unwrap();
        assert!(c.coefficients.iter().all(|&a| a > 0.0));
    }

    #[test]
    fn heat_trace_ratios() {
        let r = heat_trace_leading_check(&p(1, 0.0), &[0.01]).unwrap();
        assert!((r[0] - 1.0).abs() < 1e-10);
        let r = heat_trace_leading_check(&p(2, 0.0), &[0.01]).unwrap();
        assert!((r[0] - 1.0).abs() < 0.01);
    }

    #[test]
    fn fit_d2_zero_frequency() {
        // e^{t/4} (1 + t/12 + 7 t^2/480 + ...) = 1 + t/3 + t^2/15 + ...
        let c = fit_asymptotic_coeffs(&p(2, 0.0), 2, &default_fit_grid(2)).unwrap();
        assert!((c.coefficients[0] - 1.0).abs() < 0.02);
        assert!((c.coefficients[1] - 1.0 / 3.0).abs() < 0.02 / 3.0, "{:?}", c.coefficients);
        assert!(c.condition_number.unwrap() < FIT_CONDITION_LIMIT);
    }

    #[test]
    fn fit_d1_zero_frequency_is_flat() {
        let c = fit_asymptotic_coeffs(&p(1, 0.0), 3, &default_fit_grid(3)).unwrap();
        assert!((c.coefficients[0] - 1.0).abs() < 1e-8);
        for &a in &c.coefficients[1..] {
            assert!(a.abs() < 1e-7, "{:?}", c.coefficients);
        }
    }
}
