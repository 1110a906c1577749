//! Run manifests and manifest comparison.

use crate::experiment::{ExperimentSpec, Kind, OutputFile};
use serde::{Deserialize, Serialize};
use std::path::Path;
use uplink_core::config::ScenarioFile;
use uplink_core::report::{diff_tables, read_table_file, ColumnDiff, Table};
use uplink_core::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;
pub const MANIFEST_NAME: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub tool: String,
    pub tool_version: String,
    pub kind: Kind,
    pub seed: u64,
    pub spec: ExperimentSpec,
    /// Fully resolved scenario, overrides applied.
    pub scenario: ScenarioFile,
    pub outputs: Vec<OutputFile>,
    pub wall_time_s: f64,
}

impl Manifest {
    pub fn write(&self, dir: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).map_err(|e| Error::Schema(e.to_string()))?;
        std::fs::write(dir.join(MANIFEST_NAME), text + "\n")?;
        Ok(())
    }

    /// Read a manifest from a file, or from `manifest.json` inside a directory.
    pub fn read(path: &Path) -> Result<(Manifest, std::path::PathBuf)> {
        let file = if path.is_dir() { path.join(MANIFEST_NAME) } else { path.to_path_buf() };
        let text = std::fs::read_to_string(&file)?;
        let m: Manifest = serde_json::from_str(&text).map_err(|e| Error::Schema(format!("{}: {e}", file.display())))?;
        if m.schema_version != SCHEMA_VERSION {
            return Err(Error::Schema(format!("manifest schema {} is not {SCHEMA_VERSION}", m.schema_version)));
        }
        let dir = file.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((m, dir))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FileDiff {
    pub file_a: String,
    pub file_b: String,
    pub rows: usize,
    pub columns: Vec<ColumnDiff>,
    /// Rows where `|value_a - value_b|` exceeds the interval bound, in interval mode.
    pub rows_outside_ci: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunDiff {
    pub kind_a: Kind,
    pub kind_b: Kind,
    pub files: Vec<FileDiff>,
    pub max_abs: f64,
    pub within_tolerance: bool,
}

/// How to judge a comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffOptions {
    /// Largest allowed absolute difference in any compared numeric column.
    pub tolerance: f64,
    /// Compare `value` against `k * max(ci_a, ci_b)` row by row instead, and leave the
    /// seed and interval columns out of the tolerance check.
    pub ci_multiple: Option<f64>,
    pub skip: Vec<String>,
}

fn project(t: &Table, cols: &[String]) -> Table {
    let idx: Vec<usize> = cols.iter().map(|c| t.header.iter().position(|h| h == c).expect("column present")).collect();
    Table {
        header: cols.to_vec(),
        rows: t.rows.iter().map(|r| idx.iter().map(|&i| r[i].clone()).collect()).collect(),
    }
}

fn column(t: &Table, name: &str) -> Option<Vec<f64>> {
    let i = t.header.iter().position(|h| h == name)?;
    t.rows.iter().map(|r| r[i].parse().ok()).collect()
}

/// Compare the outputs of two runs. Runs must be of the same kind, except that an analytic
/// success sweep may be compared with a simulation on their shared columns.
pub fn diff_runs(a: &Path, b: &Path, opts: &DiffOptions) -> Result<RunDiff> {
    let (ma, da) = Manifest::read(a)?;
    let (mb, db) = Manifest::read(b)?;
    let mixed = matches!((ma.kind, mb.kind), (Kind::SuccessSweep, Kind::Simulate) | (Kind::Simulate, Kind::SuccessSweep));
    if ma.kind != mb.kind && !mixed {
        return Err(Error::Schema(format!("cannot compare a {} run with a {} run", ma.kind.as_str(), mb.kind.as_str())));
    }
    if ma.outputs.len() != mb.outputs.len() {
        return Err(Error::Schema("runs wrote different numbers of files".into()));
    }
    let mut skip: Vec<String> = opts.skip.clone();
    if opts.ci_multiple.is_some() {
        skip.extend(["seed", "ci_halfwidth", "est_error", "value"].map(String::from));
    }
    let mut files = Vec::new();
    let mut max_abs: f64 = 0.0;
    let mut ok = true;
    for (oa, ob) in ma.outputs.iter().zip(&mb.outputs) {
        let mut ta = read_table_file(&da.join(&oa.file))?;
        let mut tb = read_table_file(&db.join(&ob.file))?;
        // taken before projection: an analytic run has no interval column, so its half-width is 0
        let (ca, cb) = (column(&ta, "ci_halfwidth"), column(&tb, "ci_halfwidth"));
        if mixed {
            let shared: Vec<String> = ta.header.iter().filter(|h| tb.header.contains(h)).cloned().collect();
            ta = project(&ta, &shared);
            tb = project(&tb, &shared);
            skip.push("est_error".into());
        }
        let d = diff_tables(&ta, &tb)?;
        let refs: Vec<&str> = skip.iter().map(String::as_str).collect();
        let m = d.max_abs(&refs);
        max_abs = max_abs.max(m);
        let text_mismatch = d.columns.iter().filter(|c| !refs.contains(&c.column.as_str())).any(|c| c.mismatches > 0);
        ok &= m <= opts.tolerance && !text_mismatch;

        let mut outside = None;
        if let Some(k) = opts.ci_multiple {
            let (va, vb) = (column(&ta, "value"), column(&tb, "value"));
            let ci = match (ca, cb) {
                (Some(a), Some(b)) => Some(a.iter().zip(&b).map(|(x, y)| x.max(*y)).collect::<Vec<_>>()),
                (Some(c), None) | (None, Some(c)) => Some(c),
                (None, None) => None,
            };
            match (va, vb, ci) {
                (Some(va), Some(vb), Some(ci)) => {
                    let n = (0..va.len()).filter(|&i| (va[i] - vb[i]).abs() > k * ci[i]).count();
                    ok &= n == 0;
                    outside = Some(n);
                }
                _ => return Err(Error::Schema("interval comparison needs value and ci_halfwidth columns".into())),
            }
        }
        files.push(FileDiff { file_a: oa.file.clone(), file_b: ob.file.clone(), rows: d.rows, columns: d.columns, rows_outside_ci: outside });
    }
    Ok(RunDiff { kind_a: ma.kind, kind_b: mb.kind, files, max_abs, within_tolerance: ok })
}
