//! Result files: per-run records, aggregated summary, and per-noise-kind
//! plot data (one column per K, one row per noise level).
//!
//! Scores are written with six decimals; files are byte-stable for a given
//! input, and `parse_records` / `parse_summary` read them back for the
//! `report` command.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::noise::NoiseKind;

use super::{level_key, AggregateRow, ExperimentError, ResultTable, StabilityRecord};

pub const RECORDS_HEADER: &str =
    "noise_kind,noise_level,k,corpus_seed,lda_seed,achieved_wer,agreement_score";
pub const SUMMARY_HEADER: &str = "noise_kind,noise_level,k,mean_score,std_dev,n_runs";

pub fn records_to_csv(records: &[StabilityRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(RECORDS_HEADER);
    out.push('\n');
    for r in records {
        writeln!(
            out,
            "{},{:.6},{},{},{},{:.6},{:.6}",
            r.noise_kind, r.noise_level, r.k, r.corpus_seed, r.lda_seed, r.achieved_wer,
            r.agreement_score
        )
        .expect("write to string");
    }
    out
}

pub fn summary_to_csv(table: &ResultTable) -> String {
    let mut out = String::with_capacity(48 * (table.rows.len() + 1));
    out.push_str(SUMMARY_HEADER);
    out.push('\n');
    for row in &table.rows {
        writeln!(
            out,
            "{},{:.6},{},{:.6},{:.6},{}",
            row.noise_kind, row.noise_level, row.k, row.mean_score, row.std_dev, row.n_runs
        )
        .expect("write to string");
    }
    out
}

/// Plot data for one noise kind: `noise_level,k5,k10,...` with the mean
/// score per cell.
pub fn plot_data_to_csv(table: &ResultTable, kind: NoiseKind) -> String {
    let ks: BTreeSet<usize> = table
        .rows
        .iter()
        .filter(|r| r.noise_kind == kind)
        .map(|r| r.k)
        .collect();
    let levels: BTreeSet<u64> = table
        .rows
        .iter()
        .filter(|r| r.noise_kind == kind)
        .map(|r| level_key(r.noise_level))
        .collect();
    let mut out = String::new();
    out.push_str("noise_level");
    for k in &ks {
        write!(out, ",k{k}").expect("write to string");
    }
    out.push('\n');
    for level_bits in levels {
        let level = f64::from_bits(level_bits);
        write!(out, "{level:.6}").expect("write to string");
        for k in &ks {
            let cell = table.rows.iter().find(|r| {
                r.noise_kind == kind && level_key(r.noise_level) == level_bits && r.k == *k
            });
            match cell {
                Some(row) => write!(out, ",{:.6}", row.mean_score),
                None => write!(out, ","),
            }
            .expect("write to string");
        }
        out.push('\n');
    }
    out
}

/// Write records.csv, summary.csv, and plot_<kind>.csv files into
/// `output_dir`, returning the paths written. An empty record set still
/// produces headers-only files.
pub fn emit_outputs(
    table: &ResultTable,
    records: &[StabilityRecord],
    output_dir: &Path,
) -> Result<Vec<PathBuf>, ExperimentError> {
    std::fs::create_dir_all(output_dir).map_err(|source| ExperimentError::Io {
        path: output_dir.to_path_buf(),
        source,
    })?;
    let mut written = Vec::new();
    let write = |name: &str, contents: String| -> Result<PathBuf, ExperimentError> {
        let path = output_dir.join(name);
        std::fs::write(&path, contents).map_err(|source| ExperimentError::Io {
            path: path.clone(),
            source,
        })?;
        Ok(path)
    };
    written.push(write("records.csv", records_to_csv(records))?);
    written.push(write("summary.csv", summary_to_csv(table))?);
    let kinds: BTreeSet<NoiseKind> = table.rows.iter().map(|r| r.noise_kind).collect();
    for kind in kinds {
        written.push(write(
            &format!("plot_{kind}.csv"),
            plot_data_to_csv(table, kind),
        )?);
    }
    Ok(written)
}

/// Read back a records.csv file.
pub fn parse_records(path: &Path) -> Result<Vec<StabilityRecord>, ExperimentError> {
    let text = std::fs::read_to_string(path).map_err(|source| ExperimentError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_records_str(&text).map_err(|detail| ExperimentError::Parse {
        path: path.to_path_buf(),
        detail,
    })
}

pub(crate) fn parse_records_str(text: &str) -> Result<Vec<StabilityRecord>, String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty file")?;
    if header != RECORDS_HEADER {
        return Err(format!("unexpected header {header:?}"));
    }
    let mut records = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(format!("line {}: expected 7 fields", lineno + 2));
        }
        let parse = |s: &str| -> Result<f64, String> {
            s.parse().map_err(|_| format!("bad number {s:?}"))
        };
        records.push(StabilityRecord {
            noise_kind: NoiseKind::from_str(fields[0]).map_err(|e| e.to_string())?,
            noise_level: parse(fields[1])?,
            k: fields[2].parse().map_err(|_| "bad k")?,
            corpus_seed: fields[3].parse().map_err(|_| "bad corpus_seed")?,
            lda_seed: fields[4].parse().map_err(|_| "bad lda_seed")?,
            achieved_wer: parse(fields[5])?,
            agreement_score: parse(fields[6])?,
        });
    }
    Ok(records)
}

/// Read back a summary.csv file.
pub fn parse_summary(path: &Path) -> Result<ResultTable, ExperimentError> {
    let text = std::fs::read_to_string(path).map_err(|source| ExperimentError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_summary_str(&text).map_err(|detail| ExperimentError::Parse {
        path: path.to_path_buf(),
        detail,
    })
}

pub(crate) fn parse_summary_str(text: &str) -> Result<ResultTable, String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty file")?;
    if header != SUMMARY_HEADER {
        return Err(format!("unexpected header {header:?}"));
    }
    let mut rows = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(format!("line {}: expected 6 fields", lineno + 2));
        }
        let parse = |s: &str| -> Result<f64, String> {
            s.parse().map_err(|_| format!("bad number {s:?}"))
        };
        rows.push(AggregateRow {
            noise_kind: NoiseKind::from_str(fields[0]).map_err(|e| e.to_string())?,
            noise_level: parse(fields[1])?,
            k: fields[2].parse().map_err(|_| "bad k")?,
            mean_score: parse(fields[3])?,
            std_dev: parse(fields[4])?,
            n_runs: fields[5].parse().map_err(|_| "bad n_runs")?,
        });
    }
    Ok(ResultTable { rows })
}
