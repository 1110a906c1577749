//! CSV row layouts and table comparison.
//!
//! Column order is fixed by the field order of each row type. Floats are written with the
//! shortest representation that round-trips, so rewriting a table from the same numbers
//! gives the same bytes.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};
use std::path::Path;

/// One analytic sweep point (success probability, capacity or meta-moment).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub scheme: String,
    pub env: String,
    pub h: f64,
    pub theta_db: f64,
    pub value: f64,
    pub est_error: f64,
}

/// A simulated sweep point. `est_error` is the standard error of the estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimRow {
    pub scheme: String,
    pub env: String,
    pub h: f64,
    pub theta_db: f64,
    pub value: f64,
    pub est_error: f64,
    pub trials: u64,
    pub ci_halfwidth: f64,
    pub seed: u64,
}

/// One point of a meta-distribution curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetaRow {
    pub scheme: String,
    pub env: String,
    pub h: f64,
    pub theta_db: f64,
    pub x: f64,
    pub value: f64,
    pub raw: f64,
    pub path: String,
}

/// One packet size of a delay table. Queue columns are empty when the queue is unstable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DelayRow {
    pub scheme: String,
    pub env: String,
    pub h: f64,
    pub packet_bits: f64,
    pub s_p: f64,
    pub stable: bool,
    pub q_l: Option<f64>,
    pub q_w_slots: Option<f64>,
    pub q_w_seconds: Option<f64>,
}

/// One point of a speed or bandwidth sweep. `variable` names the swept quantity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyRow {
    pub scheme: String,
    pub variable: String,
    pub x: f64,
    pub p_t: f64,
    pub e_slot: f64,
    pub ee_uav: f64,
    pub ee_device: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "N")]
    pub n: u64,
    pub analytic_exact: f64,
    pub analytic_jensen: f64,
    pub simulated_mean: f64,
    pub trials: u64,
}

/// Write rows with a header line.
pub fn write_csv<W: Write, T: Serialize>(out: W, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv_file<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let f = std::fs::File::create(path)?;
    write_csv(std::io::BufWriter::new(f), rows)
}

/// Raw table: header plus string cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

pub fn read_table<R: Read>(input: R) -> Result<Table> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.iter().map(str::to_owned).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        rows.push(rec?.iter().map(str::to_owned).collect());
    }
    Ok(Table { header, rows })
}

pub fn read_table_file(path: &Path) -> Result<Table> {
    read_table(std::fs::File::open(path)?)
}

/// Per-column comparison of two tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnDiff {
    pub column: String,
    pub numeric: bool,
    pub max_abs: f64,
    pub max_rel: f64,
    /// Cells that differ as text (non-numeric columns) or where only one side is empty.
    pub mismatches: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffReport {
    pub rows: usize,
    pub columns: Vec<ColumnDiff>,
}

impl DiffReport {
    /// Largest absolute difference over numeric columns, ignoring `skip`.
    pub fn max_abs(&self, skip: &[&str]) -> f64 {
        self.columns
            .iter()
            .filter(|c| c.numeric && !skip.contains(&c.column.as_str()))
            .map(|c| c.max_abs)
            .fold(0.0, f64::max)
    }

    pub fn mismatches(&self) -> usize {
        self.columns.iter().map(|c| c.mismatches).sum()
    }
}

/// Compare two tables cell by cell. Headers and row counts must agree.
pub fn diff_tables(a: &Table, b: &Table) -> Result<DiffReport> {
    if a.header != b.header {
        return Err(Error::Schema(format!("headers differ: {:?} vs {:?}", a.header, b.header)));
    }
    if a.rows.len() != b.rows.len() {
        return Err(Error::Schema(format!("row counts differ: {} vs {}", a.rows.len(), b.rows.len())));
    }
    let mut columns = Vec::with_capacity(a.header.len());
    for (j, name) in a.header.iter().enumerate() {
        let mut col = ColumnDiff { column: name.clone(), numeric: true, max_abs: 0.0, max_rel: 0.0, mismatches: 0 };
        for (ra, rb) in a.rows.iter().zip(&b.rows) {
            let (x, y) = (ra[j].as_str(), rb[j].as_str());
            if x.is_empty() || y.is_empty() {
                col.mismatches += usize::from(x != y);
                continue;
            }
            match (x.parse::<f64>(), y.parse::<f64>()) {
                (Ok(u), Ok(v)) => {
                    let d = (u - v).abs();
                    if d > 0.0 {
                        col.max_abs = col.max_abs.max(d);
                        col.max_rel = col.max_rel.max(d / u.abs().max(v.abs()));
                    }
                }
                _ => {
                    col.numeric = false;
                    col.mismatches += usize::from(x != y);
                }
            }
        }
        columns.push(col);
    }
    Ok(DiffReport { rows: a.rows.len(), columns })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_diff() {
        let rows = vec![
            SweepRow { scheme: "urdc".into(), env: "suburban".into(), h: 30.0, theta_db: 0.0, value: 0.1, est_error: 1e-9 },
            SweepRow { scheme: "urdc".into(), env: "suburban".into(), h: 30.0, theta_db: 1.0, value: 1.0 / 3.0, est_error: 0.0 },
        ];
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("scheme,env,h,theta_db,value,est_error\n"));
        let t = read_table(buf.as_slice()).unwrap();
        assert_eq!(t.rows[1][4].parse::<f64>().unwrap(), 1.0 / 3.0);
        let d = diff_tables(&t, &t).unwrap();
        assert_eq!(d.max_abs(&[]), 0.0);
        assert_eq!(d.mismatches(), 0);

        let mut other = t.clone();
        other.rows[0][4] = "0.15".into();
        let d = diff_tables(&t, &other).unwrap();
        assert!((d.max_abs(&[]) - 0.05).abs() < 1e-15);
        other.header.pop();
        assert!(matches!(diff_tables(&t, &other), Err(Error::Schema(_))));
    }

    #[test]
    fn unstable_delay_cells_are_empty() {
        let row = DelayRow {
            scheme: "suc".into(),
            env: "urban".into(),
            h: 30.0,
            packet_bits: 1e6,
            s_p: 0.1,
            stable: false,
            q_l: None,
            q_w_slots: None,
            q_w_seconds: None,
        };
        let mut buf = Vec::new();
        write_csv(&mut buf, &[row]).unwrap();
        assert!(String::from_utf8(buf).unwrap().ends_with("0.1,false,,,\n"));
    }
}
