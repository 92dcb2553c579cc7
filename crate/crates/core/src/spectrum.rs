//! Closed-form spectrum of `L_omega = Laplacian(S^d) + omega^2 r^2`.
//!
//! For `d >= 2` the eigenvalues are
//!
//! ```text
//! lambda(m, n) = (m + c_n)^2 - omega^2 - (d - 1)^2 / 4,
//! c_n          = (sqrt((2n + d - 2)^2 + 16 omega^2) + d + 2n) / 4,
//! ```
//!
//! with multiplicity equal to the dimension of degree-`n` spherical harmonics
//! on `S^(d-1)`. The ground state is mode `(0, 0)` and the shifted operator
//! has eigenvalues `(m + c_n)^2 - c_0^2`.
//!
//! For `d = 1` and `omega > 0` the operator on the circle minus the point at
//! infinity is a Poschl-Teller problem with simple eigenvalues
//! `(m/2 + eta)^2 - omega^2`, where `eta = (1 + sqrt(1 + 16 omega^2)) / 4` is
//! the ground-state exponent. For `d = 1`, `omega = 0` it is the circle
//! Laplacian: `m^2` with multiplicity 2 for `m > 0`.

use crate::error::{Error, Result};
use crate::params::{DegeneracyGroup, EigenvalueRecord, GroundState, ModeIndex, ModelParams};
use crate::special::binomial;

/// Default absolute tolerance for merging eigenvalues into one degeneracy group.
pub const DEFAULT_GROUPING_TOL: f64 = 1e-9;

/// Relative slack when comparing eigenvalues against a cutoff.
const CUTOFF_SLACK: f64 = 1e-12;

fn d_f(params: &ModelParams) -> f64 {
    f64::from(params.d())
}

/// `c_n` for `d >= 2`: the offset of the radial quantum number in the
/// square `(m + c_n)^2`.
pub(crate) fn radial_offset(params: &ModelParams, n: u32) -> f64 {
    let d = d_f(params);
    let w = params.omega();
    let k = 2.0 * f64::from(n) + d - 2.0;
    (k.hypot(4.0 * w) + d + 2.0 * f64::from(n)) / 4.0
}

/// Ground-state decay exponent `eta` and energy `d eta / 2`.
pub fn ground_state(params: &ModelParams) -> GroundState {
    let d = d_f(params);
    let w = params.omega();
    if w == 0.0 {
        // negative root for d <= 2, positive for d >= 2; both give eta = 0
        return GroundState { exponent: 0.0, energy: 0.0 };
    }
    let exponent = ((d - 2.0).hypot(4.0 * w) - (d - 2.0)) / 4.0;
    GroundState { exponent, energy: d * exponent / 2.0 }
}

/// Eigenvalue `lambda(m, n)` of `L_omega`.
pub fn eigenvalue(params: &ModelParams, mode: ModeIndex) -> Result<f64> {
    params.check_mode(mode)?;
    let w = params.omega();
    let m = f64::from(mode.m);
    if params.d() == 1 {
        if w == 0.0 {
            return Ok(m * m);
        }
        let eta = ground_state(params).exponent;
        let x = 0.5 * m + eta;
        return Ok(x * x - w * w);
    }
    let d = d_f(params);
    let x = m + radial_offset(params, mode.n);
    Ok(x * x - w * w - 0.25 * (d - 1.0) * (d - 1.0))
}

/// Eigenvalue of the shifted operator (ground-state energy removed).
pub fn eigenvalue_shifted(params: &ModelParams, mode: ModeIndex) -> Result<f64> {
    params.check_mode(mode)?;
    let m = f64::from(mode.m);
    if params.d() == 1 {
        if params.omega() == 0.0 {
            return Ok(m * m);
        }
        let eta = ground_state(params).exponent;
        let h = 0.5 * m;
        return Ok(h * (h + 2.0 * eta));
    }
    // (m + c_n)^2 - c_0^2 factored so that mode (0, 0) gives exactly 0
    let c0 = radial_offset(params, 0);
    let cn = radial_offset(params, mode.n);
    Ok((m + cn - c0) * (m + cn + c0))
}

/// Dimension of the degree-`n` spherical harmonics on `S^(d-1)`.
pub(crate) fn harmonic_dimension(d: u32, n: u32) -> Result<u64> {
    if d == 1 {
        return Ok(u64::from(n <= 1));
    }
    if n == 0 {
        return Ok(1);
    }
    let (d, n) = (i64::from(d), i64::from(n));
    let hi = binomial(n + d - 1, d - 1);
    let lo = binomial(n + d - 3, d - 1);
    match (hi, lo) {
        (Some(hi), Some(lo)) => {
            u64::try_from(hi - lo).map_err(|_| Error::Overflow(format!("multiplicity for d={d}, n={n}")))
        }
        _ => Err(Error::Overflow(format!("multiplicity for d={d}, n={n}"))),
    }
}

/// Multiplicity of `lambda(m, n)` counted by the angular factor alone.
pub fn multiplicity(params: &ModelParams, mode: ModeIndex) -> Result<u64> {
    params.check_mode(mode)?;
    if params.d() == 1 {
        return Ok(if params.omega() == 0.0 && mode.m > 0 { 2 } else { 1 });
    }
    harmonic_dimension(params.d(), mode.n)
}

fn record(params: &ModelParams, mode: ModeIndex) -> Result<EigenvalueRecord> {
    Ok(EigenvalueRecord {
        mode,
        lambda: eigenvalue(params, mode)?,
        lambda_shifted: eigenvalue_shifted(params, mode)?,
        multiplicity: multiplicity(params, mode)?,
    })
}

fn sort_records(records: &mut [EigenvalueRecord]) {
    records.sort_by(|a, b| a.lambda.total_cmp(&b.lambda).then(a.mode.cmp(&b.mode)));
}

/// All eigenvalue records with `lambda <= lambda_max`, ascending.
///
/// Completeness relies on `lambda(m, n)` being strictly increasing in both
/// `m` and `n`: the scan over `n` stops at the first degree whose `m = 0`
/// eigenvalue exceeds the cutoff, and likewise for `m`.
pub fn enumerate_spectrum(params: &ModelParams, lambda_max: f64) -> Result<Vec<EigenvalueRecord>> {
    if !lambda_max.is_finite() {
        return Err(Error::InvalidArgument("lambda_max must be finite".into()));
    }
    let ground = eigenvalue(params, ModeIndex::GROUND)?;
    let limit = lambda_max + CUTOFF_SLACK * lambda_max.abs().max(1.0);
    if limit < ground {
        return Err(Error::InvalidArgument(format!(
            "lambda_max = {lambda_max} lies below the ground eigenvalue {ground}"
        )));
    }
    let mut out = Vec::new();
    let max_n = if params.d() == 1 { 0 } else { u32::MAX };
    for n in 0..=max_n {
        if eigenvalue(params, ModeIndex::new(0, n))? > limit {
            break;
        }
        for m in 0.. {
            let mode = ModeIndex::new(m, n);
            let rec = record(params, mode)?;
            if rec.lambda > limit {
                break;
            }
            out.push(rec);
        }
    }
    sort_records(&mut out);
    Ok(out)
}

/// The `count` smallest eigenvalue records (ties broken by mode).
pub fn lowest_records(params: &ModelParams, count: usize) -> Result<Vec<EigenvalueRecord>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let ground = eigenvalue(params, ModeIndex::GROUND)?;
    let mut span = 1.0f64.max(ground.abs());
    loop {
        let mut recs = enumerate_spectrum(params, ground + span)?;
        if recs.len() >= count {
            recs.truncate(count);
            return Ok(recs);
        }
        span *= 2.0;
    }
}

/// Merge adjacent records whose eigenvalues differ by at most `tol`.
pub fn group_degeneracies(records: &[EigenvalueRecord], tol: f64) -> Vec<DegeneracyGroup> {
    let mut sorted = records.to_vec();
    sort_records(&mut sorted);
    let mut groups: Vec<(Vec<f64>, DegeneracyGroup)> = Vec::new();
    let mut last = f64::NAN;
    for rec in sorted {
        match groups.last_mut() {
            Some((values, g)) if (rec.lambda - last).abs() <= tol => {
                values.push(rec.lambda);
                g.members.push(rec.mode);
                g.total_multiplicity += rec.multiplicity;
            }
            _ => groups.push((
                vec![rec.lambda],
                DegeneracyGroup {
                    value: rec.lambda,
                    members: vec![rec.mode],
                    total_multiplicity: rec.multiplicity,
                },
            )),
        }
        last = rec.lambda;
    }
    groups
        .into_iter()
        .map(|(values, mut g)| {
            g.value = values.iter().sum::<f64>() / values.len() as f64;
            g
        })
        .collect()
}

const SCAN_INTERVALS: usize = 2000;

/// Search `[lo, hi]` for a frequency at which two modes share an eigenvalue.
///
/// The difference `lambda(mode1) - lambda(mode2)` is sampled on a uniform
/// grid; the first sign change is refined by bisection until
/// `|difference| <= 1e-12 max(1, |lambda|)` or the bracket collapses.
pub fn find_degenerate_omega(
    d: u32,
    mode1: ModeIndex,
    mode2: ModeIndex,
    omega_range: (f64, f64),
) -> Result<Option<f64>> {
    let (lo, hi) = omega_range;
    if mode1 == mode2 {
        return Err(Error::InvalidArgument("modes must differ".into()));
    }
    if !(lo.is_finite() && hi.is_finite() && lo >= 0.0 && lo < hi) {
        return Err(Error::InvalidArgument(format!("bad omega range [{lo}, {hi}]")));
    }
    let eval = |w: f64| -> Result<(f64, f64)> {
        let p = ModelParams::new(d, w)?;
        let a = eigenvalue(&p, mode1)?;
        let b = eigenvalue(&p, mode2)?;
        Ok((a - b, a.abs().max(b.abs()).max(1.0)))
    };
    let converged = |diff: f64, scale: f64| diff.abs() <= 1e-12 * scale;

    let step = (hi - lo) / SCAN_INTERVALS as f64;
    let mut a = lo;
    let (mut fa, sa) = eval(a)?;
    if fa == 0.0 || converged(fa, sa) {
        return Ok(Some(a));
    }
    for i in 1..=SCAN_INTERVALS {
        let b = if i == SCAN_INTERVALS { hi } else { lo + step * i as f64 };
        let (fb, sb) = eval(b)?;
        if fb == 0.0 {
            return Ok(Some(b));
        }
        if fa.signum() != fb.signum() {
            let (mut x0, mut x1, mut f0) = (a, b, fa);
            let mut best = if fa.abs() < fb.abs() { (a, fa.abs(), sa) } else { (b, fb.abs(), sb) };
            for _ in 0..200 {
                let mid = 0.5 * (x0 + x1);
                if mid <= x0 || mid >= x1 {
                    break;
                }
                let (fm, sm) = eval(mid)?;
                if fm.abs() < best.1 {
                    best = (mid, fm.abs(), sm);
                }
                if fm == 0.0 || converged(fm, sm) && (x1 - x0) <= 1e-14 * x1.max(1.0) {
                    break;
                }
                if fm.signum() == f0.signum() {
                    x0 = mid;
                    f0 = fm;
                } else {
                    x1 = mid;
                }
            }
            if converged(best.1, best.2) {
                return Ok(Some(best.0));
            }
            // a sign change without an approximate root is a jump, not a crossing
        }
        a = b;
        fa = fb;
    }
    Ok(None)
}
