//! Finite-difference eigensolver for the radial problem
//! `-(p g')' + q g = lambda w g` on `phi in (0, pi)`, `r = tan(phi / 2)`, with
//!
//! ```text
//! p = w = sin^{d-1}(phi),   q = [n(n+d-2)/sin^2(phi) + omega^2 tan^2(phi/2)] w.
//! ```
//!
//! Nodes sit at cell centres so neither endpoint is ever evaluated. Used to
//! cross-check the closed-form spectrum; accuracy is a few digits, not more.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{ModeIndex, ModelParams};
use crate::spectrum::{eigenvalue, multiplicity};

use std::f64::consts::PI;

pub const MIN_GRID_SIZE: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum DomainMap {
    #[default]
    TangentHalfAngle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Dirichlet,
    Neumann,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscretizationConfig {
    pub grid_size: usize,
    pub angular_degree: u32,
    pub params: ModelParams,
    pub domain_map: DomainMap,
    /// Condition at `phi = pi`. Only matters for `d = 1`; for `d >= 2` the
    /// flux coefficient vanishes there.
    pub far_boundary: Boundary,
}

impl DiscretizationConfig {
    /// Default boundary handling: Dirichlet at `pi` when `omega > 0`, Neumann
    /// otherwise.
    pub fn new(params: ModelParams, angular_degree: u32, grid_size: usize) -> Result<Self> {
        let far_boundary = if params.omega() > 0.0 { Boundary::Dirichlet } else { Boundary::Neumann };
        let config =
            Self { grid_size, angular_degree, params, domain_map: DomainMap::TangentHalfAngle, far_boundary };
        config.validate()?;
        Ok(config)
    }

    pub fn with_far_boundary(mut self, far_boundary: Boundary) -> Self {
        self.far_boundary = far_boundary;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.grid_size < MIN_GRID_SIZE {
            return Err(Error::InvalidArgument(format!(
                "grid size {} below minimum {MIN_GRID_SIZE}",
                self.grid_size
            )));
        }
        self.params.check_mode(ModeIndex::new(0, self.angular_degree))
    }
}

/// Symmetric tridiagonal matrix: `diag[i]` and `off[i]` coupling `i`, `i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues strictly below `x` (Sturm count via LDL^T).
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut piv = 1.0;
        for (i, &a) in self.diag.iter().enumerate() {
            let coupling = if i == 0 { 0.0 } else { self.off[i - 1] * self.off[i - 1] / piv };
            piv = a - x - coupling;
            if piv == 0.0 {
                piv = -f64::MIN_POSITIVE;
            }
            if piv < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.len() {
            let left = if i == 0 { 0.0 } else { self.off[i - 1].abs() };
            let right = self.off.get(i).map_or(0.0, |e| e.abs());
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }
}

/// Discretized radial operator. Usually a single block; `d = 1, omega = 0`
/// splits into even and odd sectors on the half circle.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProblem {
    pub blocks: Vec<SymTridiagonal>,
    pub spacing: f64,
}

impl RadialProblem {
    pub fn count_below(&self, x: f64) -> usize {
        self.blocks.iter().map(|b| b.count_below(x)).sum()
    }

    pub fn dimension(&self) -> usize {
        self.blocks.iter().map(SymTridiagonal::len).sum()
    }

    /// The `count` smallest eigenvalues, by bisection on the Sturm count.
    pub fn lowest(&self, count: usize) -> Vec<f64> {
        let (lo, hi) = self
            .blocks
            .iter()
            .map(SymTridiagonal::gershgorin)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), (c, d)| (a.min(c), b.max(d)));
        (0..count.min(self.dimension()))
            .map(|k| {
                let (mut a, mut b) = (lo, hi);
                loop {
                    let mid = 0.5 * (a + b);
                    if mid <= a || mid >= b {
                        break mid;
                    }
                    if self.count_below(mid) > k {
                        b = mid;
                    } else {
                        a = mid;
                    }
                }
            })
            .collect()
    }
}

/// Build the symmetric tridiagonal form `W^{-1/2} A W^{-1/2}` of the
/// cell-centred discretization.
pub fn assemble_radial_problem(config: &DiscretizationConfig) -> Result<RadialProblem> {
    config.validate()?;
    let d = config.params.d();
    let omega = config.params.omega();
    let n = config.grid_size;
    if d == 1 {
        if omega > 0.0 {
            // whole line: phi in (-pi, pi)
            let block = assemble_block(-PI, PI, n, 1, 0, omega, Boundary::Dirichlet, config.far_boundary)?;
            return Ok(RadialProblem { blocks: vec![block], spacing: 2.0 * PI / n as f64 });
        }
        // free circle: cosines and sines separately on (0, pi)
        let even = assemble_block(0.0, PI, n, 1, 0, 0.0, Boundary::Neumann, Boundary::Neumann)?;
        let odd = assemble_block(0.0, PI, n, 1, 0, 0.0, Boundary::Dirichlet, Boundary::Dirichlet)?;
        return Ok(RadialProblem { blocks: vec![even, odd], spacing: PI / n as f64 });
    }
    let block =
        assemble_block(0.0, PI, n, d, config.angular_degree, omega, Boundary::Neumann, config.far_boundary)?;
    Ok(RadialProblem { blocks: vec![block], spacing: PI / n as f64 })
}

#[allow(clippy::too_many_arguments)]
fn assemble_block(
    a: f64,
    b: f64,
    size: usize,
    d: u32,
    n: u32,
    omega: f64,
    left: Boundary,
    right: Boundary,
) -> Result<SymTridiagonal> {
    let h = (b - a) / size as f64;
    let h2 = h * h;
    let p = |phi: f64| {
        if d == 1 {
            1.0
        } else if phi <= 0.0 || phi >= PI {
            0.0
        } else {
            phi.sin().powi(d as i32 - 1)
        }
    };
    let angular = f64::from(n) * (f64::from(n) + f64::from(d) - 2.0);
    let mut diag = Vec::with_capacity(size);
    let mut weights = Vec::with_capacity(size);
    for i in 0..size {
        let phi = a + (i as f64 + 0.5) * h;
        let w = p(phi);
        let s = phi.sin();
        let centrifugal = if angular > 0.0 { angular / (s * s) } else { 0.0 };
        let potential = centrifugal + omega * omega * (phi / 2.0).tan().powi(2);
        if !potential.is_finite() {
            return Err(Error::Overflow(format!("potential at node phi={phi}")));
        }
        let face = |x: f64, end: Boundary| match end {
            Boundary::Neumann => 0.0,
            Boundary::Dirichlet => 2.0 * p(x),
        };
        let west = if i == 0 { face(a, left) } else { p(phi - 0.5 * h) };
        let east = if i + 1 == size { face(b, right) } else { p(phi + 0.5 * h) };
        diag.push((west + east) / (h2 * w) + potential);
        weights.push(w);
    }
    let off = (0..size - 1)
        .map(|i| {
            let face = a + (i + 1) as f64 * h;
            -p(face) / (h2 * (weights[i] * weights[i + 1]).sqrt())
        })
        .collect();
    Ok(SymTridiagonal { diag, off })
}

/// Lowest `count` eigenvalues of the discrete problem on the configured grid.
pub fn discrete_eigenvalues(config: &DiscretizationConfig, count: usize) -> Result<Vec<f64>> {
    check_count(config, count)?;
    Ok(assemble_radial_problem(config)?.lowest(count))
}

fn check_count(config: &DiscretizationConfig, count: usize) -> Result<()> {
    if count == 0 || count > config.grid_size / 10 {
        return Err(Error::InvalidArgument(format!(
            "count must be in 1..={} for grid size {}",
            config.grid_size / 10,
            config.grid_size
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSpectrum {
    pub eigenvalues: Vec<f64>,
    pub n: u32,
    pub estimated_error: Vec<f64>,
}

/// Lowest `count` eigenvalues, extrapolated from grids `N` and `2N`.
pub fn lowest_eigenvalues(config: &DiscretizationConfig, count: usize) -> Result<OracleSpectrum> {
    let coarse = discrete_eigenvalues(config, count)?;
    let fine_config = DiscretizationConfig { grid_size: 2 * config.grid_size, ..*config };
    let fine = discrete_eigenvalues(&fine_config, count)?;
    let mut pairs: Vec<(f64, f64)> =
        coarse.iter().zip(&fine).map(|(&c, &f)| ((4.0 * f - c) / 3.0, (f - c).abs() / 3.0)).collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(OracleSpectrum {
        eigenvalues: pairs.iter().map(|p| p.0).collect(),
        n: config.angular_degree,
        estimated_error: pairs.iter().map(|p| p.1).collect(),
    })
}

/// Closed-form eigenvalues the oracle should reproduce for degree `n`:
/// `lambda_{m,n}` for `m = 0, 1, ...`, repeated by multiplicity when `d = 1`.
pub fn closed_form_levels(params: &ModelParams, n: u32, count: usize) -> Result<Vec<f64>> {
    params.check_mode(ModeIndex::new(0, n))?;
    let mut levels = Vec::with_capacity(count);
    let mut m = 0;
    while levels.len() < count {
        let mode = ModeIndex::new(m, n);
        let copies = if params.d() == 1 { multiplicity(params, mode)? } else { 1 };
        let value = eigenvalue(params, mode)?;
        for _ in 0..copies {
            levels.push(value);
        }
        m += 1;
    }
    levels.truncate(count);
    Ok(levels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::ground_state;

    fn config(d: u32, omega: f64, n: u32, grid: usize) -> DiscretizationConfig {
        DiscretizationConfig::new(ModelParams::new(d, omega).unwrap(), n, grid).unwrap()
    }

    #[test]
    fn legendre_spectrum() {
        let s = lowest_eigenvalues(&config(2, 0.0, 0, 2000), 3).unwrap();
        for (x, want) in s.eigenvalues.iter().zip([0.0, 2.0, 6.0]) {
            assert!((x - want).abs() < 1e-3, "{x} vs {want}");
        }
        let s = lowest_eigenvalues(&config(2, 0.0, 1, 2000), 1).unwrap();
        assert!((s.eigenvalues[0] - 2.0).abs() < 1e-3);
    }

    #[test]
    fn constant_mode_is_exact() {
        let e = discrete_eigenvalues(&config(2, 0.0, 0, 400), 1).unwrap();
        assert!(e[0].abs() < 1e-9);
    }

    #[test]
    fn line_ground_state() {
        let p = ModelParams::new(1, 1.0).unwrap();
        let s = lowest_eigenvalues(&config(1, 1.0, 0, 2000), 1).unwrap();
        let want = ground_state(&p).energy;
        assert!(((s.eigenvalues[0] - want) / want).abs() < 1e-3);
        assert!((want - (17f64.sqrt() + 1.0) / 8.0).abs() < 1e-14);
    }

    #[test]
    fn free_circle_has_doubled_levels() {
        let s = lowest_eigenvalues(&config(1, 0.0, 0, 1000), 5).unwrap();
        for (x, want) in s.eigenvalues.iter().zip([0.0, 1.0, 1.0, 4.0, 4.0]) {
            assert!((x - want).abs() < 1e-4);
        }
    }

    #[test]
    fn degenerate_level_44() {
        let s = lowest_eigenvalues(&config(2, 2.0 * 3f64.sqrt(), 1, 4000), 4).unwrap();
        assert!((s.eigenvalues[3] - 44.0).abs() < 0.05 * 44.0);
    }

    #[test]
    fn three_sphere_matches_closed_form() {
        let p = ModelParams::new(3, 1.0).unwrap();
        let s = lowest_eigenvalues(&config(3, 1.0, 0, 4000), 2).unwrap();
        for (m, x) in s.eigenvalues.iter().enumerate() {
            let want = eigenvalue(&p, ModeIndex::new(m as u32, 0)).unwrap();
            assert!(((x - want) / want).abs() < 1e-3, "{x} vs {want}");
        }
    }

    #[test]
    fn second_order_convergence() {
        let e1 = discrete_eigenvalues(&config(2, 0.0, 1, 400), 3).unwrap();
        let e2 = discrete_eigenvalues(&config(2, 0.0, 1, 800), 3).unwrap();
        for (k, want) in [2.0, 6.0, 12.0].into_iter().enumerate() {
            let ratio = (e1[k] - want).abs() / (e2[k] - want).abs();
            assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
        }
    }

    #[test]
    fn sturm_count_brackets() {
        let prob = assemble_radial_problem(&config(2, 1.0, 0, 200)).unwrap();
        let e = prob.lowest(3);
        assert_eq!(prob.count_below(e[0] - 1e-6), 0);
        assert_eq!(prob.count_below(e[2] + 1e-6), 3);
        assert!(e.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn invalid_configs() {
        let p = ModelParams::new(2, 1.0).unwrap();
        assert!(DiscretizationConfig::new(p, 0, 50).is_err());
        let c = DiscretizationConfig::new(p, 0, 100).unwrap();
        assert!(lowest_eigenvalues(&c, 11).is_err());
        assert!(lowest_eigenvalues(&c, 0).is_err());
        let line = ModelParams::new(1, 1.0).unwrap();
        assert!(DiscretizationConfig::new(line, 1, 200).is_err());
    }

    #[test]
    fn reference_levels() {
        let circle = closed_form_levels(&ModelParams::new(1, 0.0).unwrap(), 0, 4).unwrap();
        assert_eq!(circle, vec![0.0, 1.0, 1.0, 4.0]);
        let sphere = closed_form_levels(&ModelParams::new(2, 0.0).unwrap(), 1, 3).unwrap();
        assert_eq!(sphere, vec![2.0, 6.0, 12.0]);
        assert!(closed_form_levels(&ModelParams::new(1, 1.0).unwrap(), 1, 3).is_err());
    }

    #[test]
    fn deterministic() {
        let c = config(3, 2.0, 2, 500);
        assert_eq!(lowest_eigenvalues(&c, 5).unwrap(), lowest_eigenvalues(&c, 5).unwrap());
    }
}
