//! Special functions used throughout the crate: terminating Gauss
//! hypergeometric polynomials, exact Bernoulli numbers, the Dedekind eta
//! product and sphere volumes.

mod bernoulli;
mod eta;
mod hypergeometric;

pub use bernoulli::{bernoulli, Rational};
pub use eta::{dedekind_eta_from_q, log_dedekind_eta_from_q, ETA_FACTOR_CUTOFF};
pub use hypergeometric::{hyp2f1_terminating, HypergeometricParams};

use std::f64::consts::PI;

/// Surface volume of the unit `d`-sphere, `2 pi^((d+1)/2) / Gamma((d+1)/2)`.
pub fn sphere_volume(d: u32) -> f64 {
    assert!(d >= 1, "sphere_volume needs d >= 1");
    let k = d + 1; // Gamma(k/2)
    let gamma_half_k = if k.is_multiple_of(2) {
        (1..k / 2).map(f64::from).product::<f64>()
    } else {
        // Gamma(j + 1/2) = (j - 1/2) Gamma(j - 1/2), Gamma(1/2) = sqrt(pi)
        let mut g = PI.sqrt();
        for j in 1..=(k / 2) {
            g *= f64::from(j) - 0.5;
        }
        g
    };
    2.0 * PI.powf(f64::from(k) / 2.0) / gamma_half_k
}

/// Binomial coefficient `C(n, k)` with the convention that it vanishes for
/// `n < 0` or `k < 0` or `k > n`. `None` on `u128` overflow.
pub fn binomial(n: i64, k: i64) -> Option<u128> {
    if n < 0 || k < 0 || k > n {
        return Some(0);
    }
    let k = k.min(n - k) as u128;
    let n = n as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) after multiplying
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_volumes() {
        assert!((sphere_volume(1) - 2.0 * PI).abs() < 1e-14);
        assert!((sphere_volume(2) - 4.0 * PI).abs() < 1e-13);
        assert!((sphere_volume(3) - 2.0 * PI * PI).abs() < 1e-13);
        // S^4: 8 pi^2 / 3
        assert!((sphere_volume(4) - 8.0 * PI * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), Some(10));
        assert_eq!(binomial(0, 0), Some(1));
        assert_eq!(binomial(3, 5), Some(0));
        assert_eq!(binomial(-1, 2), Some(0));
        assert_eq!(binomial(4, -1), Some(0));
        assert_eq!(binomial(60, 30), Some(118264581564861424));
    }
}
