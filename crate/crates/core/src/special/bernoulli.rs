use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact rational number backed by arbitrary-precision integers.
pub type Rational = BigRational;

const MAX_INDEX: usize = 64;

fn table() -> &'static [Rational] {
    static TABLE: OnceLock<Vec<Rational>> = OnceLock::new();
    TABLE.get_or_init(|| {
        // sum_{j=0}^{k} C(k+1, j) B_j = 0 with B_0 = 1
        let mut b: Vec<Rational> = Vec::with_capacity(MAX_INDEX + 1);
        b.push(Rational::one());
        for k in 1..=MAX_INDEX {
            let mut binom = BigInt::one(); // C(k+1, 0)
            let mut acc = Rational::zero();
            for (j, bj) in b.iter().enumerate() {
                acc += Rational::from_integer(binom.clone()) * bj;
                binom = binom * BigInt::from(k + 1 - j) / BigInt::from(j + 1);
            }
            // binom is now C(k+1, k) = k + 1
            b.push(-acc / Rational::from_integer(binom));
        }
        b
    })
}

/// Exact even-index Bernoulli number `B_k`, `2 <= k <= 64`, with `B_2 = 1/6`.
pub fn bernoulli(k: u32) -> Result<Rational> {
    if !k.is_multiple_of(2) || k < 2 || k as usize > MAX_INDEX {
        return Err(Error::InvalidArgument(format!(
            "bernoulli index must be even and in [2, {MAX_INDEX}], got {k}"
        )));
    }
    Ok(table()[k as usize].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn small_values() {
        assert_eq!(bernoulli(2).unwrap(), rat(1, 6));
        assert_eq!(bernoulli(4).unwrap(), rat(-1, 30));
        assert_eq!(bernoulli(6).unwrap(), rat(1, 42));
        assert_eq!(bernoulli(8).unwrap(), rat(-1, 30));
        assert_eq!(bernoulli(10).unwrap(), rat(5, 66));
        assert_eq!(bernoulli(12).unwrap(), rat(-691, 2730));
    }

    #[test]
    fn rejects_odd_and_out_of_range() {
        assert!(bernoulli(1).is_err());
        assert!(bernoulli(0).is_err());
        assert!(bernoulli(7).is_err());
        assert!(bernoulli(66).is_err());
        assert!(bernoulli(64).is_ok());
    }

    #[test]
    fn reduced_with_positive_denominator() {
        for k in (2..=64).step_by(2) {
            let b = bernoulli(k).unwrap();
            assert!(b.denom() > &BigInt::zero());
            let g = num_integer_gcd(b.numer().clone(), b.denom().clone());
            assert_eq!(g, BigInt::one());
        }
    }

    fn num_integer_gcd(mut a: BigInt, mut b: BigInt) -> BigInt {
        if a < BigInt::zero() {
            a = -a;
        }
        while !b.is_zero() {
            let r = &a % &b;
            a = b;
            b = r;
        }
        a
    }

    /// zeta(k) by direct summation plus an Euler-Maclaurin tail.
    fn zeta(k: u32) -> f64 {
        let n = 1000u32;
        let kf = f64::from(k);
        let mut s = 0.0;
        for j in (1..n).rev() {
            s += f64::from(j).powf(-kf);
        }
        let nf = f64::from(n);
        s + nf.powf(1.0 - kf) / (kf - 1.0) + 0.5 * nf.powf(-kf) + kf / 12.0 * nf.powf(-kf - 1.0)
    }

    #[test]
    fn agrees_with_zeta_identity() {
        let two_pi = 2.0 * std::f64::consts::PI;
        for k in (2..=20).step_by(2) {
            let exact = bernoulli(k).unwrap().to_f64().unwrap();
            let sign = if (k / 2) % 2 == 1 { 1.0 } else { -1.0 };
            let fact: f64 = (1..=k).map(f64::from).product();
            let via_zeta = sign * 2.0 * fact * zeta(k) / two_pi.powi(k as i32);
            assert!(((exact - via_zeta) / exact).abs() < 1e-12, "k={k}: {exact} vs {via_zeta}");
        }
    }
}
