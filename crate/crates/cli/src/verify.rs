//! Recompute golden tables and compare them cell by cell.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use crate::commands::all_tables;
use crate::{CliError, ExperimentConfig};

/// Name of the config file inside a golden directory.
pub const GOLDEN_CONFIG: &str = "experiment.conf";

pub const FLOAT_RTOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum Mismatch {
    Missing {
        path: PathBuf,
    },
    Shape {
        file: PathBuf,
        message: String,
    },
    Cell {
        file: PathBuf,
        /// 1-based data row; 0 is the header comment or the column header.
        row: usize,
        column: String,
        expected: String,
        actual: String,
    },
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mismatch::Missing { path } => write!(f, "FAIL missing {}", path.display()),
            Mismatch::Shape { file, message } => write!(f, "FAIL {}: {message}", file.display()),
            Mismatch::Cell {
                file,
                row,
                column,
                expected,
                actual,
            } => write!(
                f,
                "FAIL {} row {row} column {column}: expected {expected:?}, got {actual:?}",
                file.display()
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyReport {
    pub checked: Vec<PathBuf>,
    pub mismatches: Vec<Mismatch>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.mismatches {
            writeln!(f, "{m}")?;
        }
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{verdict}: {} files checked, {} mismatches",
            self.checked.len(),
            self.mismatches.len()
        )
    }
}

/// Integers and `num/den` cells compare exactly; other numeric cells to a
/// relative tolerance; anything else as text.
pub fn cells_match(expected: &str, actual: &str) -> bool {
    if expected == actual {
        return true;
    }
    let exact = |s: &str| s.contains('/') || s.parse::<i128>().is_ok();
    if exact(expected) || exact(actual) {
        return false;
    }
    match (expected.parse::<f64>(), actual.parse::<f64>()) {
        (Ok(a), Ok(b)) if a.is_finite() && b.is_finite() => {
            (a - b).abs() <= FLOAT_RTOL * a.abs().max(b.abs())
        }
        _ => false,
    }
}

fn split_table(text: &str) -> (String, Vec<Vec<String>>) {
    let (comment, body) = text.split_once('\n').unwrap_or((text, ""));
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(body.as_bytes());
    let rows = reader
        .records()
        .map(|r| r.map(|rec| rec.iter().map(String::from).collect()).unwrap_or_default())
        .collect();
    (comment.to_string(), rows)
}

/// Compares rendered tables; `file` labels the findings.
pub fn compare(file: &Path, expected: &str, actual: &str) -> Vec<Mismatch> {
    let (ec, erows) = split_table(expected);
    let (ac, arows) = split_table(actual);
    let mut out = Vec::new();
    if ec != ac {
        out.push(Mismatch::Cell {
            file: file.to_path_buf(),
            row: 0,
            column: "#".into(),
            expected: ec,
            actual: ac,
        });
    }
    let (Some(eh), Some(ah)) = (erows.first(), arows.first()) else {
        if erows.len() != arows.len() {
            out.push(Mismatch::Shape {
                file: file.to_path_buf(),
                message: "missing column header".into(),
            });
        }
        return out;
    };
    if eh != ah {
        out.push(Mismatch::Shape {
            file: file.to_path_buf(),
            message: format!("columns differ: expected {}, got {}", eh.join(","), ah.join(",")),
        });
        return out;
    }
    if erows.len() != arows.len() {
        out.push(Mismatch::Shape {
            file: file.to_path_buf(),
            message: format!("expected {} rows, got {}", erows.len() - 1, arows.len() - 1),
        });
    }
    for (i, (er, ar)) in erows.iter().zip(&arows).enumerate().skip(1) {
        for (j, column) in eh.iter().enumerate() {
            let e = er.get(j).map_or("", String::as_str);
            let a = ar.get(j).map_or("", String::as_str);
            if !cells_match(e, a) {
                out.push(Mismatch::Cell {
                    file: file.to_path_buf(),
                    row: i,
                    column: column.clone(),
                    expected: e.into(),
                    actual: a.into(),
                });
            }
        }
    }
    out
}

/// Recomputes every table from `golden_dir/experiment.conf` and compares
/// against the CSV files stored beside it.
pub fn cmd_verify(golden_dir: &Path) -> Result<VerifyReport, CliError> {
    let cfg_path = golden_dir.join(GOLDEN_CONFIG);
    if !cfg_path.is_file() {
        return Ok(VerifyReport {
            checked: vec![],
            mismatches: vec![Mismatch::Missing { path: cfg_path }],
        });
    }
    let cfg = ExperimentConfig::load(&cfg_path)?;
    let mut report = VerifyReport::default();
    for table in all_tables(&cfg)? {
        let path = golden_dir.join(table.file_name());
        match fs::read_to_string(&path) {
            Ok(expected) => {
                let actual = table.render(&cfg.header_comment());
                report.mismatches.extend(compare(&path, &expected, &actual));
                report.checked.push(path);
            }
            Err(_) => report.mismatches.push(Mismatch::Missing { path }),
        }
    }
    Ok(report)
}
