//! Parameter and record types shared by every module.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dimension `d` of the sphere and oscillator frequency `omega`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    d: u32,
    omega: f64,
}

impl ModelParams {
    pub fn new(d: u32, omega: f64) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParams("dimension must be at least 1".into()));
        }
        if !omega.is_finite() || omega < 0.0 {
            return Err(Error::InvalidParams(format!("omega must be finite and nonnegative, got {omega}")));
        }
        Ok(Self { d, omega })
    }

    #[inline]
    pub fn d(&self) -> u32 {
        self.d
    }

    #[inline]
    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Check that `mode` is admissible in this dimension.
    pub fn check_mode(&self, mode: ModeIndex) -> Result<()> {
        if self.d == 1 && mode.n != 0 {
            return Err(Error::InvalidMode {
                d: self.d,
                m: mode.m,
                n: mode.n,
                reason: "the angular degree must be 0 when d = 1",
            });
        }
        Ok(())
    }
}

/// Radial index `m` and angular degree `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ModeIndex {
    pub m: u32,
    pub n: u32,
}

impl ModeIndex {
    pub const GROUND: ModeIndex = ModeIndex { m: 0, n: 0 };

    pub const fn new(m: u32, n: u32) -> Self {
        Self { m, n }
    }
}

impl std::fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.m, self.n)
    }
}

/// One eigenvalue of the oscillator together with its shifted value and multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueRecord {
    pub mode: ModeIndex,
    pub lambda: f64,
    pub lambda_shifted: f64,
    pub multiplicity: u64,
}

/// Decay exponent and energy of the ground state `(1 + r^2)^(-exponent)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroundState {
    pub exponent: f64,
    pub energy: f64,
}

/// Records sharing (within a tolerance) one eigenvalue.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegeneracyGroup {
    pub value: f64,
    pub members: Vec<ModeIndex>,
    pub total_multiplicity: u64,
}
