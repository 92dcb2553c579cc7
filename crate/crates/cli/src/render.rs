use std::io::{self, Write};

use serde_json::ser::Formatter;

use crate::record::{OutputRecord, Results};

/// Significant digits for machine-readable output; enough to round-trip.
pub const EXACT_DIGITS: usize = 17;
/// Significant digits in tables.
pub const TABLE_DIGITS: usize = 10;

/// `printf("%.{digits}g")`.
pub fn format_sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mantissa}e{sign}{:02}", exp.abs());
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Compact JSON with every float at [`EXACT_DIGITS`] significant digits.
struct SigFormatter;

impl Formatter for SigFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            writer.write_all(format_sig(value, EXACT_DIGITS).as_bytes())
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

pub fn to_json(record: &OutputRecord) -> io::Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigFormatter);
    serde::Serialize::serialize(record, &mut ser).map_err(io::Error::other)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes utf-8"))
}

/// A titled block of rows; the first section of a result is its primary table.
struct Section {
    title: &'static str,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

fn opt(x: Option<f64>, digits: usize) -> String {
    x.map(|v| format_sig(v, digits)).unwrap_or_default()
}

fn sections(results: &Results, digits: usize) -> (Vec<(&'static str, String)>, Vec<Section>) {
    let f = |x: f64| format_sig(x, digits);
    match results {
        Results::Spectrum { records, groups } => {
            let groups_section = Section {
                title: "levels",
                header: vec!["lambda", "multiplicity", "degenerate", "modes"],
                rows: groups
                    .iter()
                    .map(|g| {
                        let modes = g.members.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
                        vec![
                            f(g.value),
                            g.total_multiplicity.to_string(),
                            (g.members.len() > 1).to_string(),
                            modes,
                        ]
                    })
                    .collect(),
            };
            let modes_section = Section {
                title: "modes",
                header: vec!["m", "n", "lambda", "lambda_shifted", "multiplicity"],
                rows: records
                    .iter()
                    .map(|r| {
                        vec![
                            r.mode.m.to_string(),
                            r.mode.n.to_string(),
                            f(r.lambda),
                            f(r.lambda_shifted),
                            r.multiplicity.to_string(),
                        ]
                    })
                    .collect(),
            };
            (Vec::new(), vec![groups_section, modes_section])
        }
        Results::Partition { tol, rows, max_poisson_deviation } => {
            let mut summary = vec![("tolerance", f(*tol))];
            if let Some(dev) = max_poisson_deviation {
                summary.push(("max Poisson deviation", f(*dev)));
            }
            let section = Section {
                title: "partition function",
                header: vec!["t", "value", "tail_bound", "terms", "poisson_dual", "rel_deviation"],
                rows: rows
                    .iter()
                    .map(|r| {
                        vec![
                            f(r.t),
                            f(r.value),
                            f(r.tail_bound),
                            r.terms_used.to_string(),
                            opt(r.poisson_dual, digits),
                            opt(r.rel_deviation, digits),
                        ]
                    })
                    .collect(),
            };
            (summary, vec![section])
        }
        Results::Verify { rows, max_rel_error, within_tolerance } => {
            let summary = vec![
                ("max relative error", f(*max_rel_error)),
                ("within tolerance", within_tolerance.to_string()),
            ];
            let section = Section {
                title: "closed form vs oracle",
                header: vec!["n", "index", "closed_form", "oracle", "estimated_error", "rel_error"],
                rows: rows
                    .iter()
                    .map(|r| {
                        vec![
                            r.n.to_string(),
                            r.index.to_string(),
                            f(r.closed_form),
                            f(r.oracle),
                            f(r.estimated_error),
                            f(r.rel_error),
                        ]
                    })
                    .collect(),
            };
            (summary, vec![section])
        }
        Results::Mulholland { coefficients } => {
            let section = Section {
                title: "coefficients",
                header: vec!["n", "exact", "value"],
                rows: coefficients
                    .iter()
                    .map(|c| vec![c.n.to_string(), c.exact.clone(), f(c.value)])
                    .collect(),
            };
            (Vec::new(), vec![section])
        }
        Results::Chiral(c) => {
            let mode = match c.mode {
                sphosc_core::chiral::ExponentMode::Verbatim => "verbatim",
                sphosc_core::chiral::ExponentMode::Shifted => "shifted",
            };
            let summary_section = Section {
                title: "product",
                header: vec![
                    "t",
                    "k_max",
                    "exponent_mode",
                    "value",
                    "rel_error_bound",
                    "level_truncation",
                    "converged",
                    "eta",
                ],
                rows: vec![vec![
                    f(c.t),
                    c.k_max.to_string(),
                    mode.to_string(),
                    f(c.value),
                    f(c.rel_error_bound),
                    f(c.level_truncation),
                    c.converged.to_string(),
                    f(c.eta),
                ]],
            };
            let levels = Section {
                title: "levels",
                header: vec!["k", "level_sum", "tail_bound"],
                rows: c
                    .levels
                    .iter()
                    .map(|l| vec![l.k.to_string(), f(l.level_sum), f(l.tail_bound)])
                    .collect(),
            };
            (Vec::new(), vec![summary_section, levels])
        }
    }
}

/// Header row plus the primary section's records.
pub fn to_csv(record: &OutputRecord) -> io::Result<String> {
    let (_, sections) = sections(&record.results, EXACT_DIGITS);
    let primary = &sections[0];
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&primary.header)?;
    for row in &primary.rows {
        w.write_record(row)?;
    }
    let bytes = w.into_inner().map_err(|e| io::Error::other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
}

pub fn to_table(record: &OutputRecord) -> String {
    let (summary, sections) = sections(&record.results, TABLE_DIGITS);
    let mut out = format!("# {}\n", record.command);
    for (key, value) in summary {
        out.push_str(&format!("{key}: {value}\n"));
    }
    for s in sections {
        out.push_str(&format!("\n[{}]\n", s.title));
        let mut widths: Vec<usize> = s.header.iter().map(|h| h.len()).collect();
        for row in &s.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let line = |cells: Vec<&str>| {
            let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
            padded.join("  ").trim_end().to_string() + "\n"
        };
        out.push_str(&line(s.header.clone()));
        for row in &s.rows {
            out.push_str(&line(row.iter().map(String::as_str).collect()));
        }
    }
    out
}
