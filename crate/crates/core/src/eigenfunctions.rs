//! Closed-form radial eigenfunctions
//!
//! ```text
//! g(r) = r^n (1 + r^2)^(-s) F(a, b; n + d/2; -r^2)
//! ```
//!
//! with `b = -m` terminating the hypergeometric series, so `F` is a
//! degree-`m` polynomial in `z = -r^2`. Writing `X = m + c_n` for the square
//! root appearing in the eigenvalue, `sqrt((d-1)^2 + 4 omega^2 + 4 lambda) = 2X`,
//! the decay exponent is `s = X - (d-1)/2` and `a = -m - sqrt((2n+d-2)^2 + 16 omega^2)/2`.
//!
//! Profiles are stored unnormalized (`F(0) = 1`); the weighted norm
//! `int_0^inf g^2 (1+r^2)^(-d) r^(d-1) dr` is computed separately.

use crate::error::{Error, Result};
use crate::params::{ModeIndex, ModelParams};
use crate::quadrature::integrate;
use crate::special::HypergeometricParams;
use crate::spectrum::{eigenvalue, radial_offset};

/// Quadrature tolerance for norms and inner products.
pub const NORM_REL_TOL: f64 = 1e-10;

/// A radial profile `r^n (1 + r^2)^(-s) P(-r^2)` together with the
/// eigenvalue it is meant to solve the radial equation for.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    pub d: u32,
    pub n: u32,
    pub omega: f64,
    pub lambda: f64,
    pub decay_exponent: f64,
    /// Coefficients of `P` in powers of `z = -r^2`, constant term first.
    pub poly_coeffs: Vec<f64>,
}

/// Radial eigenfunction for mode `(m, n)` plus its weighted L2 norm.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialEigenfunction {
    pub params: ModelParams,
    pub mode: ModeIndex,
    pub profile: RadialProfile,
    pub normalization: f64,
}

/// Value and first two derivatives of a profile at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub g: f64,
    pub dg: f64,
    pub d2g: f64,
}

fn poly_eval(coeffs: &[f64], z: f64) -> (f64, f64, f64) {
    // value, first and second derivative by Horner
    let (mut p, mut dp, mut d2p) = (0.0, 0.0, 0.0);
    for &c in coeffs.iter().rev() {
        d2p = d2p * z + 2.0 * dp;
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp, d2p)
}

impl RadialProfile {
    pub fn degree(&self) -> usize {
        self.poly_coeffs.len() - 1
    }

    /// `4s - 2n - 4m + d - 1`: the power of `u = 1/r` in the norm integrand
    /// near infinity. Square integrability requires it to exceed `-1`.
    pub fn tail_exponent(&self) -> f64 {
        4.0 * self.decay_exponent - 2.0 * f64::from(self.n) - 4.0 * self.degree() as f64 + f64::from(self.d)
            - 1.0
    }

    /// `2n + 4m + d - 2 < 2 sqrt((d-1)^2 + 4 omega^2 + 4 lambda)`.
    pub fn is_square_integrable(&self) -> bool {
        self.tail_exponent() > -1.0
    }

    /// `g`, `g'`, `g''` at `r > 0` by the product rule.
    pub fn jet(&self, r: f64) -> Jet {
        let n = f64::from(self.n);
        let s = self.decay_exponent;
        let r2 = r * r;
        let one_r2 = 1.0 + r2;
        let pre = (n * r.ln() - s * r2.ln_1p()).exp();
        let (p, dp, d2p) = poly_eval(&self.poly_coeffs, -r2);
        // logarithmic derivative of the prefactor r^n (1+r^2)^(-s)
        let l1 = n / r - 2.0 * s * r / one_r2;
        let l1p = -n / r2 - 2.0 * s * (1.0 - r2) / (one_r2 * one_r2);
        // derivatives of P(-r^2) in r
        let q = p;
        let q1 = -2.0 * r * dp;
        let q2 = 4.0 * r2 * d2p - 2.0 * dp;
        Jet { g: pre * q, dg: pre * (l1 * q + q1), d2g: pre * ((l1p + l1 * l1) * q + 2.0 * l1 * q1 + q2) }
    }

    pub fn value(&self, r: f64) -> f64 {
        self.jet(r).g
    }

    /// Left-hand side of the radial equation
    /// `r^2 g'' + (1 + (d-2)(1-r^2)/(1+r^2)) r g' + (-n(n+d-2) + 4(-omega^2 r^4 + lambda r^2)/(1+r^2)^2) g`.
    pub fn ode_lhs(&self, r: f64, lambda: f64) -> f64 {
        let j = self.jet(r);
        let d = f64::from(self.d);
        let n = f64::from(self.n);
        let r2 = r * r;
        let one_r2 = 1.0 + r2;
        let drift = 1.0 + (d - 2.0) * (1.0 - r2) / one_r2;
        let w2 = self.omega * self.omega;
        let pot = -n * (n + d - 2.0) + 4.0 * (-w2 * r2 * r2 + lambda * r2) / (one_r2 * one_r2);
        r2 * j.d2g + drift * r * j.dg + pot * j.g
    }

    /// Integrand of the weighted inner product written in `u = 1/r` on `(0, 1]`,
    /// using the reversed polynomial so nothing overflows as `u -> 0`.
    fn tail_factor(&self, u: f64) -> f64 {
        let m = self.degree();
        let u2 = u * u;
        // u^(2m) P(-1/u^2) = sum_l c_l (-1)^l u^(2(m-l))
        let mut q = 0.0;
        for (l, &c) in self.poly_coeffs.iter().enumerate() {
            let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
            q += sign * c * u2.powi((m - l) as i32);
        }
        let expo = 2.0 * self.decay_exponent - f64::from(self.n) - 2.0 * m as f64;
        // g(1/u) = u^expo (1+u^2)^(-s) q
        (expo * u.ln() - self.decay_exponent * u2.ln_1p()).exp() * q
    }
}

fn check_compatible(f: &RadialProfile, g: &RadialProfile) -> Result<()> {
    if f.d != g.d || f.n != g.n {
        return Err(Error::InvalidArgument("inner product needs profiles with the same d and n".into()));
    }
    Ok(())
}

/// `int_0^R f g (1+r^2)^(-d) r^(d-1) dr`, split at `r = 1` with `u = 1/r` beyond.
pub fn weighted_inner_product_to(
    f: &RadialProfile,
    g: &RadialProfile,
    r_max: f64,
    abs_tol: f64,
) -> Result<f64> {
    check_compatible(f, g)?;
    let d = f64::from(f.d);
    let dm1 = f.d as i32 - 1;
    let inner = |r: f64| f.value(r) * g.value(r) * (1.0 + r * r).powf(-d) * r.powi(dm1);
    let head = integrate(inner, 0.0, r_max.min(1.0), abs_tol, NORM_REL_TOL)?;
    if r_max <= 1.0 {
        return Ok(head.value);
    }
    // with r = 1/u the weight and Jacobian collapse to (1+u^2)^(-d) u^(d-1)
    let outer = |u: f64| f.tail_factor(u) * g.tail_factor(u) * (1.0 + u * u).powf(-d) * u.powi(dm1);
    let u_min = if r_max.is_finite() { 1.0 / r_max } else { 0.0 };
    let tail = integrate(outer, u_min, 1.0, abs_tol, NORM_REL_TOL)?;
    Ok(head.value + tail.value)
}

/// Weighted inner product over `(0, inf)`; both profiles must be square integrable.
pub fn weighted_inner_product(f: &RadialProfile, g: &RadialProfile, abs_tol: f64) -> Result<f64> {
    for p in [f, g] {
        if !p.is_square_integrable() {
            return Err(Error::NotIntegrable(format!("tail exponent {} <= -1", p.tail_exponent())));
        }
    }
    weighted_inner_product_to(f, g, f64::INFINITY, abs_tol)
}

fn profile_norm(p: &RadialProfile) -> Result<f64> {
    let n2 = weighted_inner_product(p, p, 0.0)?;
    Ok(n2.sqrt())
}

/// Build the closed-form radial eigenfunction of mode `(m, n)` for `d >= 2`.
pub fn build_eigenfunction(params: &ModelParams, mode: ModeIndex) -> Result<RadialEigenfunction> {
    params.check_mode(mode)?;
    if params.d() < 2 {
        return Err(Error::InvalidArgument(
            "closed-form radial eigenfunctions are only provided for d >= 2".into(),
        ));
    }
    let d = f64::from(params.d());
    let w = params.omega();
    let n = f64::from(mode.n);
    let lambda = eigenvalue(params, mode)?;
    let x = f64::from(mode.m) + radial_offset(params, mode.n);
    let root_n = (2.0 * n + d - 2.0).hypot(4.0 * w);
    let b = -f64::from(mode.m);
    let a = b - root_n / 2.0;
    let hyp = HypergeometricParams::new(a, b, n + d / 2.0)?;
    let profile = RadialProfile {
        d: params.d(),
        n: mode.n,
        omega: w,
        lambda,
        decay_exponent: x - (d - 1.0) / 2.0,
        poly_coeffs: hyp.coefficients(),
    };
    if !profile.is_square_integrable() {
        return Err(Error::NotIntegrable(format!("mode {mode} fails the integrability condition")));
    }
    let normalization = profile_norm(&profile)?;
    Ok(RadialEigenfunction { params: *params, mode, profile, normalization })
}

/// Radial profile from the discarded branch (`a = -m`, `b > 0`) in `d = 2`,
/// whose eigenvalue is `(m + (n + 1 - sqrt(n^2 + 4 omega^2))/2)^2 - omega^2 - 1/4`.
///
/// It solves the radial equation formally but is not square integrable.
/// Returns an error when the branch does not exist for these parameters.
pub fn rejected_branch_candidate(omega: f64, mode: ModeIndex) -> Result<RadialProfile> {
    let n = f64::from(mode.n);
    let m = f64::from(mode.m);
    let root = n.hypot(2.0 * omega);
    let x = m + 0.5 * (n + 1.0 - root);
    if x < 0.0 {
        return Err(Error::InvalidArgument("branch requires m + (n + 1 - root)/2 >= 0".into()));
    }
    let lambda = x * x - omega * omega - 0.25;
    let a = -m;
    let b = a + root;
    if b <= 0.0 {
        return Err(Error::InvalidArgument("branch requires b > 0".into()));
    }
    let hyp = HypergeometricParams::new(a, b, n + 1.0)?;
    Ok(RadialProfile {
        d: 2,
        n: mode.n,
        omega,
        lambda,
        decay_exponent: x - 0.5,
        poly_coeffs: hyp.coefficients(),
    })
}

/// `max |LHS(r)| / (1 + |lambda g(r)|)` over the grid.
pub fn ode_residual(f: &RadialEigenfunction, r_grid: &[f64]) -> Result<f64> {
    profile_ode_residual(&f.profile, f.profile.lambda, r_grid)
}

/// Residual of `profile` against the radial equation with eigenvalue `lambda`.
pub fn profile_ode_residual(profile: &RadialProfile, lambda: f64, r_grid: &[f64]) -> Result<f64> {
    if r_grid.is_empty() {
        return Err(Error::InvalidArgument("empty grid".into()));
    }
    let mut worst = 0.0f64;
    for &r in r_grid {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidArgument(format!("grid point {r} not in (0, inf)")));
        }
        let lhs = profile.ode_lhs(r, lambda);
        worst = worst.max(lhs.abs() / (1.0 + (lambda * profile.value(r)).abs()));
    }
    Ok(worst)
}

/// Weighted L2 norm `sqrt(int_0^inf g^2 (1+r^2)^(-d) r^(d-1) dr)`.
pub fn l2_norm(f: &RadialEigenfunction) -> Result<f64> {
    profile_norm(&f.profile)
}

/// Rayleigh quotient of the profile under the quadratic form
/// `int |grad g|^2 + n(n+d-2) g^2 / sin^2(phi) + omega^2 r^2 g^2` on the sphere,
/// written in stereographic `r`.
pub fn rayleigh_quotient(p: &RadialProfile) -> Result<f64> {
    if !p.is_square_integrable() {
        return Err(Error::NotIntegrable(format!("tail exponent {}", p.tail_exponent())));
    }
    let d = f64::from(p.d);
    let n = f64::from(p.n);
    let ang = n * (n + d - 2.0);
    let w2 = p.omega * p.omega;
    let energy = |r: f64| {
        let j = p.jet(r);
        let one_r2 = 1.0 + r * r;
        let metric = one_r2 * one_r2 / 4.0;
        let e = j.dg * j.dg * metric + ang * metric / (r * r) * j.g * j.g + w2 * r * r * j.g * j.g;
        e * one_r2.powf(-d) * r.powf(d - 1.0)
    };
    let mass = |r: f64| {
        let g = p.value(r);
        g * g * (1.0 + r * r).powf(-d) * r.powf(d - 1.0)
    };
    let split = |f: &dyn Fn(f64) -> f64| -> Result<f64> {
        let head = integrate(f, 0.0, 1.0, 0.0, 1e-11)?;
        let tail =
            integrate(|u: f64| if u == 0.0 { 0.0 } else { f(1.0 / u) / (u * u) }, 0.0, 1.0, 0.0, 1e-11)?;
        Ok(head.value + tail.value)
    };
    Ok(split(&energy)? / split(&mass)?)
}
