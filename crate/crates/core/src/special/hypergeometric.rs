use crate::error::{Error, Result};

/// Parameters of a terminating `2F1(a, b; c; z)`: one of `a`, `b` equals `-M`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypergeometricParams {
    a: f64,
    b: f64,
    c: f64,
    termination_order: u32,
}

fn nonpositive_integer(x: f64) -> Option<u32> {
    if x <= 0.0 && x.fract() == 0.0 && x > -(u32::MAX as f64) {
        Some((-x) as u32)
    } else {
        None
    }
}

impl HypergeometricParams {
    /// Validates that the series terminates and that no denominator
    /// `(c)_l`, `l <= M`, vanishes.
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(Error::InvalidArgument("non-finite hypergeometric parameter".into()));
        }
        let order = match (nonpositive_integer(a), nonpositive_integer(b)) {
            (Some(x), Some(y)) => x.min(y),
            (Some(x), None) | (None, Some(x)) => x,
            (None, None) => {
                return Err(Error::InvalidArgument(format!("2F1({a}, {b}; {c}; z) does not terminate")))
            }
        };
        if let Some(k) = nonpositive_integer(c) {
            if order > 0 && k < order {
                return Err(Error::InvalidArgument(format!(
                    "c = {c} makes a denominator vanish before order {order}"
                )));
            }
        }
        Ok(Self { a, b, c, termination_order: order })
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn termination_order(&self) -> u32 {
        self.termination_order
    }

    /// Coefficients `(a)_l (b)_l / ((c)_l l!)` for `l = 0..=M`.
    pub fn coefficients(&self) -> Vec<f64> {
        let m = self.termination_order as usize;
        let mut out = Vec::with_capacity(m + 1);
        let mut term = 1.0;
        out.push(term);
        for l in 0..m {
            let lf = l as f64;
            term *= (self.a + lf) * (self.b + lf) / ((self.c + lf) * (lf + 1.0));
            out.push(term);
        }
        out
    }
}

/// Terminating Gauss hypergeometric polynomial evaluated at `z`.
pub fn hyp2f1_terminating(p: &HypergeometricParams, z: f64) -> f64 {
    let coeffs = p.coefficients();
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * z + c)
}
