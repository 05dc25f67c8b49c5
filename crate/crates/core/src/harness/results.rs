use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tfim::Variant;

/// One (variant, repetition) result. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultRecord {
    pub variant: Variant,
    pub n_qubits: usize,
    pub repetition: usize,
    pub mag: f64,
    pub sx: f64,
    pub sy: f64,
    pub sz: f64,
    pub ideal: f64,
    pub fragments: usize,
    pub two_qubit_gates: usize,
    pub wall_ms: f64,
}

const CSV_HEADER: [&str; 11] = [
    "variant",
    "n_qubits",
    "repetition",
    "mag",
    "sx",
    "sy",
    "sz",
    "ideal",
    "fragments",
    "two_qubit_gates",
    "wall_ms",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::invalid(format!(
                "unknown format {s:?}, expected csv or json"
            ))),
        }
    }
}

pub fn results_to_string(records: &[ResultRecord], format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => Ok(serde_json::to_string_pretty(records)? + "\n"),
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            // serde only emits a header alongside the first record
            if records.is_empty() {
                w.write_record(CSV_HEADER)?;
            }
            for r in records {
                w.serialize(r)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::invalid(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
    }
}

pub fn emit_results(records: &[ResultRecord], format: OutputFormat, path: &Path) -> Result<()> {
    let text = results_to_string(records, format)?;
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn parse_results(text: &str, format: OutputFormat) -> Result<Vec<ResultRecord>> {
    match format {
        OutputFormat::Json => Ok(serde_json::from_str(text)?),
        OutputFormat::Csv => {
            let mut r = csv::Reader::from_reader(text.as_bytes());
            let header = r.headers()?;
            if !header.iter().eq(CSV_HEADER) {
                return Err(Error::invalid(format!(
                    "unexpected CSV header {:?}",
                    header.iter().collect::<Vec<_>>()
                )));
            }
            Ok(r.deserialize()
                .collect::<std::result::Result<Vec<_>, _>>()?)
        }
    }
}

/// Reads a results file, taking the format from a `.json` extension or a
/// leading `[`.
pub fn read_results(path: &Path) -> Result<Vec<ResultRecord>> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let json = path.extension().is_some_and(|e| e == "json") || text.trim_start().starts_with('[');
    let format = if json {
        OutputFormat::Json
    } else {
        OutputFormat::Csv
    };
    parse_results(&text, format).map_err(|e| e.context(path.display()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub variant: Variant,
    pub n_qubits: usize,
    pub count: usize,
    pub mean: f64,
    /// Sample standard deviation (`n - 1`); 0 for a single record.
    pub std: f64,
    pub ideal: f64,
    pub abs_error: f64,
}

/// Per (n_qubits, variant) statistics, ordered by qubit count then variant.
pub fn report_summary(records: &[ResultRecord]) -> Vec<SummaryRow> {
    let mut groups: BTreeMap<(usize, Variant), Vec<&ResultRecord>> = BTreeMap::new();
    for r in records {
        groups.entry((r.n_qubits, r.variant)).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|((n_qubits, variant), rs)| {
            // Welford: the mean of equal values is exactly that value
            let (mut mean, mut m2) = (0.0, 0.0);
            for (i, r) in rs.iter().enumerate() {
                let d = r.mag - mean;
                mean += d / (i + 1) as f64;
                m2 += d * (r.mag - mean);
            }
            let k = rs.len() as f64;
            let std = if rs.len() > 1 {
                (m2 / (k - 1.0)).sqrt()
            } else {
                0.0
            };
            let ideal = rs.iter().map(|r| r.ideal).sum::<f64>() / k;
            SummaryRow {
                variant,
                n_qubits,
                count: rs.len(),
                mean,
                std,
                ideal,
                abs_error: (mean - ideal).abs(),
            }
        })
        .collect()
}

pub fn render_summary(rows: &[SummaryRow]) -> String {
    let mut s = format!(
        "{:<16} {:>8} {:>5} {:>10} {:>10} {:>10} {:>10}\n",
        "variant", "n_qubits", "reps", "mean", "std", "ideal", "abs_error"
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{:<16} {:>8} {:>5} {:>10.6} {:>10.6} {:>10.6} {:>10.6}",
            r.variant.as_str(),
            r.n_qubits,
            r.count,
            r.mean,
            r.std,
            r.ideal,
            r.abs_error
        );
    }
    s
}
