use crate::error::{Error, Result};

/// Factors `1 - q^n` are dropped once `q^n` falls below this threshold.
pub const ETA_FACTOR_CUTOFF: f64 = 1e-17;

fn check_nome(q: f64) -> Result<()> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidArgument(format!("nome must lie in (0, 1), got {q}")));
    }
    Ok(())
}

/// `ln eta(q) = ln(q)/24 + sum_n ln(1 - q^n)`, truncated when `q^n < 1e-17`.
pub fn log_dedekind_eta_from_q(q: f64) -> Result<f64> {
    check_nome(q)?;
    let mut sum = 0.0;
    let mut qn = q;
    while qn >= ETA_FACTOR_CUTOFF {
        sum += (-qn).ln_1p();
        qn *= q;
    }
    Ok(q.ln() / 24.0 + sum)
}

/// Dedekind eta as a function of the nome, `q^(1/24) prod_{n>=1} (1 - q^n)`.
pub fn dedekind_eta_from_q(q: f64) -> Result<f64> {
    check_nome(q)?;
    let mut prod = 1.0;
    let mut qn = q;
    while qn >= ETA_FACTOR_CUTOFF {
        prod *= 1.0 - qn;
        qn *= q;
    }
    Ok(q.powf(1.0 / 24.0) * prod)
}
