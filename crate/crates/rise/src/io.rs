//! CSV/JSON input and output.
//!
//! Observation CSV: one observation per row of comma-separated decimal
//! floats, with an optional header (auto-detected: first row non-numeric).
//! Distance CSV: an N x N matrix in the same format. Reports serialize to
//! CSV with a fixed column set or to JSON.

use crate::error::{Result, RiseError};
use crate::geometry::{validate_distance_matrix, DistanceMatrix, ObservationSet};
use crate::graph::GraphSequence;
use crate::rank::RankMatrix;
use crate::sim::PowerReport;
use std::io::Write;
use std::path::Path;

fn read_numeric_rows(path: &Path) -> Result<Vec<Vec<f64>>> {
    let ctx = || format!("reading {}", path.display());
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|source| RiseError::Csv {
            context: ctx(),
            source,
        })?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let record = record.map_err(|source| RiseError::Csv {
            context: ctx(),
            source,
        })?;
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, usize> = record
            .iter()
            .enumerate()
            .map(|(col, f)| f.parse::<f64>().map_err(|_| col))
            .collect();
        match parsed {
            Ok(row) => rows.push(row),
            Err(col) => {
                // a non-numeric first row is an auto-detected header
                if idx == 0 && rows.is_empty() {
                    continue;
                }
                return Err(RiseError::Parse(format!(
                    "{}: non-numeric field at row {idx}, column {col}",
                    path.display()
                )));
            }
        }
    }
    if rows.is_empty() {
        return Err(RiseError::Parse(format!(
            "{}: no numeric rows",
            path.display()
        )));
    }
    Ok(rows)
}

/// Read an observation matrix (optionally headed) from CSV.
pub fn read_observations_csv(path: &Path) -> Result<Vec<Vec<f64>>> {
    read_numeric_rows(path)
}

/// Read two observation CSVs and pool them, X rows first.
pub fn read_pooled_observations(x: &Path, y: &Path) -> Result<(ObservationSet, usize, usize)> {
    let mut rows = read_observations_csv(x)?;
    let m = rows.len();
    let y_rows = read_observations_csv(y)?;
    let n = y_rows.len();
    if let (Some(a), Some(b)) = (rows.first(), y_rows.first()) {
        if a.len() != b.len() {
            return Err(RiseError::Parse(format!(
                "observation width mismatch: {} has {} columns, {} has {}",
                x.display(),
                a.len(),
                y.display(),
                b.len()
            )));
        }
    }
    rows.extend(y_rows);
    Ok((ObservationSet::from_rows(&rows)?, m, n))
}

/// Read and validate a precomputed distance matrix from CSV.
pub fn read_distance_csv(path: &Path) -> Result<DistanceMatrix> {
    let rows = read_numeric_rows(path)?;
    validate_distance_matrix(&rows)
}

/// Dump a graph sequence as edge-list CSV (columns i, j, layer, dist).
pub fn write_graph_csv<W: Write>(mut w: W, g: &GraphSequence) -> Result<()> {
    let ctx = || "writing graph csv".to_string();
    let io_err = |source| RiseError::Io {
        context: ctx(),
        source,
    };
    writeln!(w, "i,j,layer,dist").map_err(io_err)?;
    for e in g.edges() {
        writeln!(w, "{},{},{},{}", e.i, e.j, e.layer, fmt_f64(e.dist)).map_err(io_err)?;
    }
    Ok(())
}

/// Dump a rank matrix as dense CSV (N rows x N columns).
pub fn write_rank_csv<W: Write>(mut w: W, r: &RankMatrix) -> Result<()> {
    let io_err = |source| RiseError::Io {
        context: "writing rank csv".to_string(),
        source,
    };
    for i in 0..r.n() {
        let line = r
            .row(i)
            .iter()
            .map(|&v| fmt_f64(v))
            .collect::<Vec<_>>()
            .join(",");
        writeln!(w, "{line}").map_err(io_err)?;
    }
    Ok(())
}

/// Serialize power reports as CSV with the fixed column set.
pub fn write_power_csv<W: Write>(mut w: W, reports: &[PowerReport]) -> Result<()> {
    let io_err = |source| RiseError::Io {
        context: "writing power csv".to_string(),
        source,
    };
    writeln!(
        w,
        "setting,variant,d,m,n,graph,rank,k,alpha,reps,power,stderr,errors,seconds"
    )
    .map_err(io_err)?;
    for r in reports {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.setting,
            r.variant,
            r.d,
            r.m,
            r.n,
            r.graph.name(),
            r.rank.name(),
            r.k,
            fmt_f64(r.alpha),
            r.reps,
            fmt_f64(r.power),
            fmt_f64(r.stderr),
            r.errors,
            r.seconds.map(fmt_f64).unwrap_or_default(),
        )
        .map_err(io_err)?;
    }
    Ok(())
}

/// Shortest decimal form that round-trips.
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_temp(content: &str) -> std::path::PathBuf {
        use std::sync::atomic::{AtomicU64, Ordering};
        static COUNTER: AtomicU64 = AtomicU64::new(0);
        let id = COUNTER.fetch_add(1, Ordering::Relaxed);
        let path =
            std::env::temp_dir().join(format!("rise-io-test-{}-{id}.csv", std::process::id()));
        let mut f = std::fs::File::create(&path).unwrap();
        f.write_all(content.as_bytes()).unwrap();
        path
    }

    #[test]
    fn header_is_autodetected() {
        let path = write_temp("x1,x2\n0.0,1.0\n2.0,3.0\n4.0,5.0\n6.0,7.0\n");
        let rows = read_observations_csv(&path).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0], vec![0.0, 1.0]);
        std::fs::remove_file(path).ok();
    }

    #[test]
    fn headerless_numeric_first_row() {
        let path = write_temp("0.5,1.5\n2.0,3.0\n1.0,1.0\n9.0,9.0\n");
        let rows = read_observations_csv(&path).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0], vec![0.5, 1.5]);
        std::fs::remove_file(path).ok();
    }

    #[test]
    fn non_numeric_interior_is_error() {
        let path = write_temp("0.5,1.5\nfoo,3.0\n");
        assert!(read_observations_csv(&path).is_err());
        std::fs::remove_file(path).ok();
    }

    #[test]
    fn empty_file_is_error() {
        let path = write_temp("");
        assert!(read_observations_csv(&path).is_err());
        std::fs::remove_file(path).ok();
    }

    #[test]
    fn float_formatting_roundtrips() {
        for v in [0.1, 1.0, 0.05, 1e-12, 123456.789, 0.6827] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(fmt_f64(1.0), "1");
        assert_eq!(fmt_f64(0.05), "0.05");
    }
}
