use serde::{Deserialize, Serialize};

use sphosc_core::chiral::{chiral_partition, ExponentMode};
use sphosc_core::oracle::{closed_form_levels, lowest_eigenvalues, DiscretizationConfig};
use sphosc_core::partition::{mulholland_coeffs, partition_function, poisson_dual_d1};
use sphosc_core::spectrum::{enumerate_spectrum, group_degeneracies, lowest_records};
use sphosc_core::{DegeneracyGroup, EigenvalueRecord, Error, ModelParams, Result};

use crate::args::{ChiralArgs, Command, MulhollandArgs, PartitionArgs, SpectrumArgs, VerifyArgs};

/// Oracle agreement threshold reported by `verify`.
pub const VERIFY_REL_TOL: f64 = 1e-3;

/// Everything one invocation produces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub command: String,
    pub version: String,
    pub parameters: Command,
    pub results: Results,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Results {
    Spectrum { records: Vec<EigenvalueRecord>, groups: Vec<DegeneracyGroup> },
    Partition { tol: f64, rows: Vec<PartitionRow>, max_poisson_deviation: Option<f64> },
    Verify { rows: Vec<VerifyRow>, max_rel_error: f64, within_tolerance: bool },
    Mulholland { coefficients: Vec<MulhollandRow> },
    Chiral(ChiralSummary),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionRow {
    pub t: f64,
    pub value: f64,
    pub tail_bound: f64,
    pub terms_used: u64,
    pub poisson_dual: Option<f64>,
    pub rel_deviation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyRow {
    pub n: u32,
    pub index: usize,
    pub closed_form: f64,
    pub oracle: f64,
    pub estimated_error: f64,
    pub rel_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MulhollandRow {
    pub n: usize,
    pub exact: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChiralSummary {
    pub t: f64,
    pub k_max: u32,
    pub mode: ExponentMode,
    pub value: f64,
    pub rel_error_bound: f64,
    pub level_truncation: f64,
    pub converged: bool,
    pub eta: f64,
    pub levels: Vec<ChiralLevel>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChiralLevel {
    pub k: u32,
    pub level_sum: f64,
    pub tail_bound: f64,
}

/// Run a parsed command. `echo` is the command line as typed.
pub fn execute(command: &Command, echo: String) -> Result<OutputRecord> {
    let results = match command {
        Command::Spectrum(a) => spectrum(a)?,
        Command::Partition(a) => partition(a)?,
        Command::Verify(a) => verify(a)?,
        Command::Mulholland(a) => mulholland(a)?,
        Command::Chiral(a) => chiral(a)?,
    };
    Ok(OutputRecord {
        command: echo,
        version: env!("CARGO_PKG_VERSION").to_string(),
        parameters: command.clone(),
        results,
    })
}

fn spectrum(a: &SpectrumArgs) -> Result<Results> {
    let params = ModelParams::new(a.model.d, a.model.omega)?;
    let records = match (a.lambda_max, a.count) {
        (Some(top), _) => enumerate_spectrum(&params, top)?,
        (None, Some(count)) => lowest_records(&params, count)?,
        (None, None) => return Err(Error::InvalidArgument("need --lambda-max or --count".into())),
    };
    if a.group_tol.is_nan() || a.group_tol < 0.0 {
        return Err(Error::InvalidArgument(format!("bad grouping tolerance {}", a.group_tol)));
    }
    let groups = group_degeneracies(&records, a.group_tol);
    Ok(Results::Spectrum { records, groups })
}

fn partition(a: &PartitionArgs) -> Result<Results> {
    let params = ModelParams::new(a.model.d, a.model.omega)?;
    if a.check_poisson && !(params.d() == 1 && params.omega() == 0.0) {
        return Err(Error::InvalidArgument("--check-poisson needs d = 1 and omega = 0".into()));
    }
    let mut rows = Vec::with_capacity(a.t.len());
    for &t in &a.t {
        let z = partition_function(&params, t, a.tol)?;
        let (poisson_dual, rel_deviation) = if a.check_poisson {
            let dual = poisson_dual_d1(t)?;
            (Some(dual), Some(((z.value - dual) / dual).abs()))
        } else {
            (None, None)
        };
        rows.push(PartitionRow {
            t,
            value: z.value,
            tail_bound: z.tail_bound,
            terms_used: z.terms_used,
            poisson_dual,
            rel_deviation,
        });
    }
    let max_poisson_deviation = rows.iter().filter_map(|r| r.rel_deviation).reduce(f64::max);
    Ok(Results::Partition { tol: a.tol, rows, max_poisson_deviation })
}

fn verify(a: &VerifyArgs) -> Result<Results> {
    let params = ModelParams::new(a.model.d, a.model.omega)?;
    let mut rows = Vec::new();
    for &n in &a.n {
        let config = DiscretizationConfig::new(params, n, a.grid)?;
        let oracle = lowest_eigenvalues(&config, a.count)?;
        let exact = closed_form_levels(&params, n, a.count)?;
        for (index, ((&x, &err), &want)) in
            oracle.eigenvalues.iter().zip(&oracle.estimated_error).zip(&exact).enumerate()
        {
            rows.push(VerifyRow {
                n,
                index,
                closed_form: want,
                oracle: x,
                estimated_error: err,
                rel_error: (x - want).abs() / want.abs().max(1.0),
            });
        }
    }
    let max_rel_error = rows.iter().map(|r| r.rel_error).fold(0.0, f64::max);
    Ok(Results::Verify { rows, max_rel_error, within_tolerance: max_rel_error <= VERIFY_REL_TOL })
}

fn mulholland(a: &MulhollandArgs) -> Result<Results> {
    let c = mulholland_coeffs(a.order)?;
    let coefficients = c
        .exact
        .iter()
        .zip(&c.coefficients)
        .enumerate()
        .map(|(n, (exact, &value))| MulhollandRow { n, exact: exact.to_string(), value })
        .collect();
    Ok(Results::Mulholland { coefficients })
}

fn chiral(a: &ChiralArgs) -> Result<Results> {
    let c = chiral_partition(a.t, a.k_max, a.tol, a.exponent_mode.into())?;
    let levels = c
        .level_sums
        .iter()
        .zip(1..)
        .map(|(s, k)| ChiralLevel { k, level_sum: s.value, tail_bound: s.tail_bound })
        .collect();
    Ok(Results::Chiral(ChiralSummary {
        t: c.t,
        k_max: c.k_max,
        mode: c.mode,
        value: c.value,
        rel_error_bound: c.rel_error_bound,
        level_truncation: c.level_truncation,
        converged: c.converged,
        eta: c.eta,
        levels,
    }))
}
