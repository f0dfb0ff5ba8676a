//! Result rows, CSV and plot-data output.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt::Write as _;
use std::path::Path;

/// Denominators below this are excluded from ratios.
pub const RATIO_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowFlag {
    Ok,
    /// rhs below the ratio floor.
    Excluded,
    /// The row could not be computed.
    Error,
    /// Computed, but a checked property failed.
    Flagged,
}

/// One (function, p, parameter) evaluation of both sides of a relation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceRow {
    pub experiment: String,
    pub function: String,
    pub p: String,
    pub param: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: Option<f64>,
    pub flag: RowFlag,
}

impl EquivalenceRow {
    /// Classifies the pair; `violated` marks a failed side condition.
    pub fn new(experiment: &str, function: &str, p: &str, param: f64, lhs: f64, rhs: f64, violated: bool) -> Self {
        let mut row = Self {
            experiment: experiment.to_string(),
            function: function.to_string(),
            p: p.to_string(),
            param,
            lhs,
            rhs,
            ratio: None,
            flag: RowFlag::Ok,
        };
        if !(lhs >= 0.0) || !(rhs >= 0.0) || lhs.is_nan() || rhs.is_nan() {
            row.flag = RowFlag::Error;
        } else if rhs > RATIO_FLOOR {
            row.ratio = Some(lhs / rhs);
            if violated {
                row.flag = RowFlag::Flagged;
            }
        } else {
            row.flag = if violated { RowFlag::Flagged } else { RowFlag::Excluded };
        }
        row
    }

    pub fn error(experiment: &str, function: &str, p: &str, param: f64) -> Self {
        Self {
            experiment: experiment.to_string(),
            function: function.to_string(),
            p: p.to_string(),
            param,
            lhs: f64::NAN,
            rhs: f64::NAN,
            ratio: None,
            flag: RowFlag::Error,
        }
    }

    pub fn is_failure(&self) -> bool {
        matches!(self.flag, RowFlag::Error | RowFlag::Flagged)
    }
}

fn p_key(p: &str) -> f64 {
    if p == "inf" {
        f64::INFINITY
    } else {
        p.parse().unwrap_or(f64::NAN)
    }
}

fn row_order(a: &EquivalenceRow, b: &EquivalenceRow) -> Ordering {
    a.experiment
        .cmp(&b.experiment)
        .then_with(|| a.function.cmp(&b.function))
        .then_with(|| p_key(&a.p).total_cmp(&p_key(&b.p)))
        .then_with(|| a.p.cmp(&b.p))
        .then_with(|| a.param.total_cmp(&b.param))
}

/// Sorts by experiment, function, p, param.
pub fn sort_rows(rows: &mut [EquivalenceRow]) {
    rows.sort_by(row_order);
}

pub const CSV_HEADER: [&str; 8] = ["experiment", "function", "p", "param", "lhs", "rhs", "ratio", "flag"];

pub fn to_csv(rows: &[EquivalenceRow]) -> Result<String> {
    if rows.is_empty() {
        return Err(Error::Config("no rows to report".into()));
    }
    let mut sorted = rows.to_vec();
    sort_rows(&mut sorted);
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &sorted {
        w.serialize(r).map_err(|e| Error::Io(std::io::Error::other(e)))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(std::io::Error::other(e)))
}

pub fn from_csv(text: &str) -> Result<Vec<EquivalenceRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = r
        .headers()
        .map_err(|e| Error::Config(format!("bad rows file: {e}")))?
        .iter()
        .map(str::to_string)
        .collect();
    if header != CSV_HEADER {
        return Err(Error::Config(format!("unexpected header {header:?}")));
    }
    r.deserialize()
        .map(|row| row.map_err(|e| Error::Config(format!("bad rows file: {e}"))))
        .collect()
}

/// Log-log series, one block per (experiment, function, p, side), blocks
/// separated by two blank lines. Nonpositive values are skipped.
pub fn to_plotdata(rows: &[EquivalenceRow]) -> Result<String> {
    if rows.is_empty() {
        return Err(Error::Config("no rows to report".into()));
    }
    let mut sorted = rows.to_vec();
    sort_rows(&mut sorted);
    let mut out = String::new();
    let mut start = 0;
    while start < sorted.len() {
        let head = &sorted[start];
        let end = start
            + sorted[start..]
                .iter()
                .take_while(|r| r.experiment == head.experiment && r.function == head.function && r.p == head.p)
                .count();
        for side in ["lhs", "rhs"] {
            let _ = writeln!(out, "# experiment={} function={} p={} series={side}", head.experiment, head.function, head.p);
            for r in &sorted[start..end] {
                let v = if side == "lhs" { r.lhs } else { r.rhs };
                if r.param > 0.0 && v > 0.0 && v.is_finite() {
                    let _ = writeln!(out, "{} {}", r.param.log10(), v.log10());
                }
            }
            out.push_str("\n\n");
        }
        start = end;
    }
    Ok(out)
}

pub fn write_report(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(Error::Io)
}

/// (min, max) of the ratios of successful rows.
pub fn ratio_band<'a>(rows: impl IntoIterator<Item = &'a EquivalenceRow>) -> Option<(f64, f64)> {
    rows.into_iter()
        .filter(|r| r.flag == RowFlag::Ok)
        .filter_map(|r| r.ratio)
        .fold(None, |acc, v| match acc {
            None => Some((v, v)),
            Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
        })
}

/// Least-squares slope of log y against log x over positive pairs.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> =
        points.iter().filter(|(x, y)| *x > 0.0 && *y > 0.0).map(|(x, y)| (x.ln(), y.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows() -> Vec<EquivalenceRow> {
        vec![
            EquivalenceRow::new("b", "f", "2", 16.0, 0.3, 0.1, false),
            EquivalenceRow::new("a", "f", "inf", 8.0, 1.0 / 3.0, 0.7, false),
            EquivalenceRow::new("a", "f", "1", 8.0, 0.0, 0.0, false),
            EquivalenceRow::error("a", "g", "2", 4.0),
        ]
    }

    #[test]
    fn classification() {
        let r = rows();
        assert_eq!(r[0].flag, RowFlag::Ok);
        assert_eq!(r[2].flag, RowFlag::Excluded);
        assert_eq!(r[2].ratio, None);
        assert!(r[3].is_failure());
        assert_eq!(EquivalenceRow::new("a", "f", "1", 1.0, 2.0, 1.0, true).flag, RowFlag::Flagged);
    }

    #[test]
    fn csv_round_trip_and_order() {
        let text = to_csv(&rows()).unwrap();
        assert!(text.starts_with("experiment,function,p,param,lhs,rhs,ratio,flag\n"));
        let back = from_csv(&text).unwrap();
        assert_eq!(back[0].p, "1");
        assert_eq!(back[1].p, "inf");
        assert_eq!(back[2].function, "g");
        assert_eq!(back[3].experiment, "b");
        for r in &back {
            if let Some(q) = r.ratio {
                assert!((q - r.lhs / r.rhs).abs() <= 1e-12 * q.abs());
            }
        }
        assert_eq!(to_csv(&back).unwrap(), text);
        assert!(to_csv(&[]).is_err());
    }

    #[test]
    fn plotdata_and_fits() {
        let text = to_plotdata(&rows()).unwrap();
        assert!(text.contains("# experiment=a function=f p=inf series=lhs"));
        assert!((loglog_slope(&[(1.0, 1.0), (10.0, 100.0), (100.0, 1e4)]).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(ratio_band(&rows()), Some(((1.0 / 3.0) / 0.7, 0.3 / 0.1)));
    }
}
