//! On-disk formats: JSONL snapshot logs and CSV summaries.
//!
//! Both formats are schema-versioned and re-parseable by this module; files
//! are written whole (no appends) so reruns replace rather than accumulate.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

pub const SNAPSHOT_SCHEMA: &str = "bbm.snapshots.v1";
pub const SUMMARY_SCHEMA: &str = "bbm.summary.v1";

/// First line of every snapshot log.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SnapshotHeader {
    pub schema: String,
    pub seed: u64,
    pub replicates: u64,
}

/// One record per (replicate, record_time).
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SnapshotRow {
    pub replicate: u64,
    pub time: f64,
    pub n: usize,
    pub y: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub z: Option<f64>,
    pub m: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub x1: Option<f64>,
    pub origin_kills: u64,
    pub right_kills: u64,
    /// Emitted only under `--full-positions`; dominates file size otherwise.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub positions: Option<Vec<f64>>,
}

pub fn write_snapshots(path: &Path, header: &SnapshotHeader, rows: &[SnapshotRow]) -> Result<()> {
    let file = File::create(path)
        .with_context(|| format!("cannot create {}", path.display()))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer(&mut w, header)?;
    w.write_all(b"\n")?;
    for row in rows {
        serde_json::to_writer(&mut w, row)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_snapshots(path: &Path) -> Result<(SnapshotHeader, Vec<SnapshotRow>)> {
    let file = File::open(path)
        .with_context(|| format!("cannot open {}", path.display()))?;
    let mut lines = BufReader::new(file).lines();
    let header_line = lines
        .next()
        .context("snapshot log is empty")??;
    let header: SnapshotHeader =
        serde_json::from_str(&header_line).context("bad snapshot header")?;
    if header.schema != SNAPSHOT_SCHEMA {
        bail!("unsupported snapshot schema `{}`", header.schema);
    }
    let mut rows = Vec::new();
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        rows.push(serde_json::from_str(&line).context("bad snapshot row")?);
    }
    Ok((header, rows))
}

/// One aggregated row per record time.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SummaryRow {
    pub time: f64,
    pub replicates: u64,
    pub surviving: u64,
    pub n_mean: f64,
    pub n_stderr: f64,
    pub y_mean: f64,
    pub y_stderr: f64,
    pub z_mean: Option<f64>,
    pub z_stderr: Option<f64>,
    pub m_mean: f64,
    pub m_stderr: f64,
    /// Over surviving replicates only.
    pub x1_mean: Option<f64>,
    pub x1_stderr: Option<f64>,
}

pub fn write_summary(path: &Path, rows: &[SummaryRow]) -> Result<()> {
    let file = File::create(path)
        .with_context(|| format!("cannot create {}", path.display()))?;
    let mut raw = BufWriter::new(file);
    writeln!(raw, "# {SUMMARY_SCHEMA}")?;
    let mut w = csv::Writer::from_writer(raw);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_summary(path: &Path) -> Result<Vec<SummaryRow>> {
    let file = File::open(path)
        .with_context(|| format!("cannot open {}", path.display()))?;
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(BufReader::new(file));
    let mut rows = Vec::new();
    for rec in rdr.deserialize() {
        rows.push(rec?);
    }
    Ok(rows)
}

/// Generic two-column (plus extras) table writer for `density-table` and
/// `windows`.
pub fn write_table(path: &Path, schema: &str, columns: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let file = File::create(path)
        .with_context(|| format!("cannot create {}", path.display()))?;
    let mut raw = BufWriter::new(file);
    writeln!(raw, "# {schema}")?;
    let mut w = csv::Writer::from_writer(raw);
    w.write_record(columns)?;
    for row in rows {
        w.write_record(row.iter().map(|v| format!("{v}")))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snapshot_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("snap.jsonl");
        let header = SnapshotHeader {
            schema: SNAPSHOT_SCHEMA.into(),
            seed: 5,
            replicates: 2,
        };
        let rows = vec![
            SnapshotRow {
                replicate: 0,
                time: 1.0,
                n: 2,
                y: 3.5,
                z: Some(1.2),
                m: 4.0,
                x1: Some(1.9),
                origin_kills: 1,
                right_kills: 0,
                positions: Some(vec![1.9, 0.3]),
            },
            SnapshotRow {
                replicate: 1,
                time: 1.0,
                n: 0,
                y: 0.0,
                z: Some(0.0),
                m: 0.0,
                x1: None,
                origin_kills: 3,
                right_kills: 1,
                positions: None,
            },
        ];
        write_snapshots(&path, &header, &rows).unwrap();
        let (h2, r2) = read_snapshots(&path).unwrap();
        assert_eq!(header, h2);
        assert_eq!(rows, r2);
    }

    #[test]
    fn summary_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("summary.csv");
        let rows = vec![SummaryRow {
            time: 1.0,
            replicates: 100,
            surviving: 93,
            n_mean: 2.4,
            n_stderr: 0.1,
            y_mean: 8.0,
            y_stderr: 0.4,
            z_mean: None,
            z_stderr: None,
            m_mean: 4.1,
            m_stderr: 0.2,
            x1_mean: Some(2.2),
            x1_stderr: Some(0.05),
        }];
        write_summary(&path, &rows).unwrap();
        let back = read_summary(&path).unwrap();
        assert_eq!(rows, back);
    }

    #[test]
    fn rejects_foreign_schema() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("snap.jsonl");
        std::fs::write(&path, "{\"schema\":\"other.v9\",\"seed\":0,\"replicates\":0}\n").unwrap();
        assert!(read_snapshots(&path).is_err());
    }
}
