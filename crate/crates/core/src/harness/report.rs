use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::run::RunRecord;
use super::spec::{Cell, ExperimentSpec};
use crate::error::{Error, Result};
use crate::reservoir::EngineKind;

pub const RECORD_COLUMNS: [&str; 11] = [
    "task",
    "engine",
    "N",
    "L",
    "alpha",
    "gamma",
    "reseed",
    "trial_count",
    "metric_name",
    "mean",
    "std",
];

/// Stochastic cells too large for the FPGA board the design was built for.
pub fn board_infeasible(cell: &Cell) -> bool {
    match (cell.engine, cell.stream_len) {
        (EngineKind::Stochastic, Some(l)) => (cell.nodes >= 40 && l >= 128) || (cell.nodes >= 50 && l >= 64),
        _ => false,
    }
}

fn opt<T: std::fmt::Debug>(v: Option<T>) -> String {
    v.map_or("NA".into(), |x| format!("{x:?}"))
}

fn reseed(cell: &Cell) -> String {
    match cell.reseed {
        Some(true) => "on".into(),
        Some(false) => "off".into(),
        None => "NA".into(),
    }
}

fn key_fields(r: &RunRecord) -> Vec<String> {
    vec![
        r.task.clone(),
        r.cell.engine.name().into(),
        r.cell.nodes.to_string(),
        r.cell.stream_len.map_or("NA".into(), |l| l.to_string()),
        opt(r.cell.alpha),
        opt(r.cell.gamma),
        reseed(&r.cell),
    ]
}

/// One row per record with [`RECORD_COLUMNS`].
pub fn records_csv(records: &[RunRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(RECORD_COLUMNS)?;
    for r in records {
        let mut row = key_fields(r);
        row.extend([
            r.scores.len().to_string(),
            r.metric.clone(),
            format!("{:?}", r.mean),
            format!("{:?}", r.std),
        ]);
        w.write_record(&row)?;
    }
    finish(w)
}

/// One row per (record, trial).
pub fn trials_csv(records: &[RunRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "task",
        "engine",
        "N",
        "L",
        "alpha",
        "gamma",
        "reseed",
        "metric_name",
        "trial",
        "seed",
        "config_hash",
        "train_score",
        "score",
    ])?;
    for r in records {
        for (k, score) in r.scores.iter().enumerate() {
            let mut row = key_fields(r);
            row.extend([
                r.metric.clone(),
                k.to_string(),
                r.seeds[k].to_string(),
                r.config_hash.clone(),
                r.train_scores.get(k).map_or("NA".into(), |t| format!("{t:?}")),
                format!("{score:?}"),
            ]);
            w.write_record(&row)?;
        }
    }
    finish(w)
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w
        .into_inner()
        .map_err(|e| Error::io("<csv>", e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Aligned plain-text table of means and standard deviations.
pub fn summary_table(records: &[RunRecord]) -> String {
    let header = [
        "task", "engine", "N", "L", "alpha", "gamma", "reseed", "trials", "metric", "mean", "std", "note",
    ];
    let mut rows: Vec<Vec<String>> = vec![header.iter().map(|s| s.to_string()).collect()];
    for r in records {
        let mut row = key_fields(r);
        row.extend([
            r.scores.len().to_string(),
            r.metric.clone(),
            format!("{:.6}", r.mean),
            format!("{:.6}", r.std),
            if board_infeasible(&r.cell) { "board-infeasible".into() } else { String::new() },
        ]);
        rows.push(row);
    }
    let widths: Vec<usize> = (0..header.len())
        .map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in rows {
        let line: Vec<String> = row.iter().zip(&widths).map(|(v, w)| format!("{v:<w$}")).collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

/// Gnuplot data: one block per (engine, metric, re-seeding), separated by
/// two blank lines so `index` selects a series.
pub fn gnuplot_data(records: &[RunRecord]) -> String {
    let mut out = String::from("# N L alpha gamma mean std\n");
    let mut last: Option<(EngineKind, &str, Option<bool>)> = None;
    for r in records {
        let key = (r.cell.engine, r.metric.as_str(), r.cell.reseed);
        if last != Some(key) {
            if last.is_some() {
                out.push_str("\n\n");
            }
            let _ = writeln!(out, "# engine={} metric={} reseed={}", r.cell.engine, r.metric, reseed(&r.cell));
            last = Some(key);
        }
        let _ = writeln!(
            out,
            "{} {} {} {} {:?} {:?}",
            r.cell.nodes,
            r.cell.stream_len.map_or("NaN".into(), |l| l.to_string()),
            r.cell.alpha.map_or("NaN".into(), |a| format!("{a:?}")),
            r.cell.gamma.map_or("NaN".into(), |g| format!("{g:?}")),
            r.mean,
            r.std
        );
    }
    out
}

/// Resolved spec followed by one comment line per record hash.
pub fn manifest(spec: &ExperimentSpec, records: &[RunRecord]) -> String {
    let mut out = spec.to_text();
    out.push_str("# records\n");
    for r in records {
        let _ = writeln!(
            out,
            "# {} engine={} N={} L={} alpha={} gamma={} reseed={} metric={}{}",
            r.config_hash,
            r.cell.engine,
            r.cell.nodes,
            r.cell.stream_len.map_or("NA".into(), |l| l.to_string()),
            opt(r.cell.alpha),
            opt(r.cell.gamma),
            reseed(&r.cell),
            r.metric,
            if board_infeasible(&r.cell) { " board-infeasible" } else { "" }
        );
    }
    out
}

fn timing(records: &[RunRecord]) -> String {
    let mut out = String::from("config_hash engine metric seconds\n");
    for r in records {
        let _ = writeln!(
            out,
            "{} {} {} {:.3}",
            r.config_hash,
            r.cell.engine,
            r.metric,
            r.duration.as_secs_f64()
        );
    }
    out
}

/// Write `records.csv`, `trials.csv`, `summary.txt`, `manifest.txt`,
/// `records.dat` and `timing.txt` into `dir`. Only the timing file varies
/// between identical runs.
pub fn emit_report(records: &[RunRecord], spec: &ExperimentSpec, dir: &Path) -> Result<Vec<PathBuf>> {
    if records.is_empty() {
        return Err(Error::InvalidArgument("no records to report".into()));
    }
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let files = [
        ("records.csv", records_csv(records)?),
        ("trials.csv", trials_csv(records)?),
        ("summary.txt", summary_table(records)),
        ("manifest.txt", manifest(spec, records)),
        ("records.dat", gnuplot_data(records)),
        ("timing.txt", timing(records)),
    ];
    let mut written = Vec::new();
    for (name, text) in files {
        let path = dir.join(name);
        fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}
