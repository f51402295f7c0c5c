//! Seeded replication over a set of instance files, written as CSV.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::instance::read_instance_file;
use super::report::RunRecord;
use crate::error::Result;
use crate::evfw::evfw_run;
use crate::params::{BrkgaParams, EvfwParams};

/// Column order of the results file. The two `_sample_std` columns are
/// filled on summary rows only and use the n-1 denominator.
pub const CSV_HEADER: [&str; 12] = [
    "instance_id",
    "seed",
    "cost",
    "buy_none_cost",
    "delta_c_percent",
    "gap_percent",
    "wall_seconds",
    "iterations",
    "heuristic_calls",
    "cost_sample_std",
    "wall_sample_std",
    "error",
];

#[derive(Debug, Clone, Default)]
pub struct BatchOptions {
    /// Known optima by instance id, used for the gap column.
    pub optima: BTreeMap<String, f64>,
    /// Writes 0 for wall times, making the output reproducible byte for byte.
    pub no_timing: bool,
}

/// Means over the successful runs of one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub instance_id: String,
    pub runs: usize,
    pub cost: f64,
    pub buy_none_cost: f64,
    pub delta_c_percent: f64,
    pub gap_percent: Option<f64>,
    pub wall_seconds: f64,
    pub iterations: f64,
    pub heuristic_calls: f64,
    pub cost_sample_std: Option<f64>,
    pub wall_sample_std: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BatchRow {
    Run(RunRecord),
    Summary(Summary),
    /// `seed` is `None` when the instance itself could not be loaded.
    Failure {
        instance_id: String,
        seed: Option<u64>,
        error: String,
    },
}

/// Identifier of an instance file: its name without extension.
pub fn instance_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample standard deviation; `None` below two values.
fn sample_std(values: &[f64]) -> Option<f64> {
    if values.len() < 2 {
        return None;
    }
    let m = mean(values);
    let ss: f64 = values.iter().map(|v| (v - m) * (v - m)).sum();
    Some((ss / (values.len() - 1) as f64).sqrt())
}

fn summarize(instance_id: &str, records: &[&RunRecord]) -> Option<Summary> {
    if records.is_empty() {
        return None;
    }
    let col = |f: fn(&RunRecord) -> f64| records.iter().map(|r| f(r)).collect::<Vec<_>>();
    let costs = col(|r| r.cost);
    let walls = col(|r| r.wall_seconds);
    let gaps: Option<Vec<f64>> = records.iter().map(|r| r.gap_percent).collect();
    Some(Summary {
        instance_id: instance_id.to_string(),
        runs: records.len(),
        cost: mean(&costs),
        buy_none_cost: mean(&col(|r| r.buy_none_cost)),
        delta_c_percent: mean(&col(|r| r.delta_c_percent)),
        gap_percent: gaps.map(|g| mean(&g)),
        wall_seconds: mean(&walls),
        iterations: mean(&col(|r| f64::from(r.iterations))),
        heuristic_calls: mean(&col(|r| r.heuristic_calls as f64)),
        cost_sample_std: sample_std(&costs),
        wall_sample_std: sample_std(&walls),
    })
}

/// Runs every (instance, seed) pair, in parallel, and returns the rows in
/// input order: per instance its runs by seed, then a summary row. Failures
/// become rows and never stop the batch.
pub fn run_batch_rows(
    paths: &[PathBuf],
    seeds: &[u64],
    evfw: &EvfwParams,
    brkga: &BrkgaParams,
    options: &BatchOptions,
) -> Vec<BatchRow> {
    if seeds.is_empty() {
        return Vec::new();
    }
    let loaded: Vec<_> = paths.par_iter().map(|p| (instance_id(p), read_instance_file(p))).collect();
    let jobs: Vec<(usize, u64)> = loaded
        .iter()
        .enumerate()
        .filter(|(_, (_, inst))| inst.is_ok())
        .flat_map(|(i, _)| seeds.iter().map(move |&s| (i, s)))
        .collect();
    let mut results = jobs
        .par_iter()
        .map(|&(i, seed)| {
            let (id, inst) = &loaded[i];
            let inst = inst.as_ref().expect("filtered above");
            let record = evfw_run(inst, evfw, brkga, seed).and_then(|out| out.record(id, seed, options.optima.get(id).copied()));
            (i, seed, record)
        })
        .collect::<Vec<_>>()
        .into_iter();

    let mut rows = Vec::new();
    for (i, (id, inst)) in loaded.iter().enumerate() {
        if let Err(e) = inst {
            rows.push(BatchRow::Failure {
                instance_id: id.clone(),
                seed: None,
                error: e.to_string(),
            });
            continue;
        }
        let start = rows.len();
        for (j, seed, record) in results.by_ref().take(seeds.len()) {
            debug_assert_eq!(j, i);
            rows.push(match record {
                Ok(mut r) => {
                    if options.no_timing {
                        r.wall_seconds = 0.0;
                    }
                    BatchRow::Run(r)
                }
                Err(e) => BatchRow::Failure {
                    instance_id: id.clone(),
                    seed: Some(seed),
                    error: e.to_string(),
                },
            });
        }
        let ok: Vec<&RunRecord> = rows[start..]
            .iter()
            .filter_map(|r| match r {
                BatchRow::Run(r) => Some(r),
                _ => None,
            })
            .collect();
        if let Some(summary) = summarize(id, &ok) {
            rows.push(BatchRow::Summary(summary));
        }
    }
    rows
}

fn real(x: f64) -> String {
    format!("{:.4}", x + 0.0)
}

fn opt_real(x: Option<f64>) -> String {
    x.map(real).unwrap_or_default()
}

/// Writes the header and one line per row; reals carry 4 decimals.
pub fn write_batch_csv<W: Write>(rows: &[BatchRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        let fields: [String; 12] = match row {
            BatchRow::Run(r) => [
                r.instance_id.clone(),
                r.seed.to_string(),
                real(r.cost),
                real(r.buy_none_cost),
                real(r.delta_c_percent),
                opt_real(r.gap_percent),
                real(r.wall_seconds),
                r.iterations.to_string(),
                r.heuristic_calls.to_string(),
                String::new(),
                String::new(),
                String::new(),
            ],
            BatchRow::Summary(s) => [
                s.instance_id.clone(),
                "summary".into(),
                real(s.cost),
                real(s.buy_none_cost),
                real(s.delta_c_percent),
                opt_real(s.gap_percent),
                real(s.wall_seconds),
                real(s.iterations),
                real(s.heuristic_calls),
                opt_real(s.cost_sample_std),
                opt_real(s.wall_sample_std),
                String::new(),
            ],
            BatchRow::Failure {
                instance_id,
                seed,
                error,
            } => {
                let mut f: [String; 12] = Default::default();
                f[0] = instance_id.clone();
                f[1] = seed.map(|s| s.to_string()).unwrap_or_default();
                f[11] = error.clone();
                f
            }
        };
        w.write_record(&fields)?;
    }
    w.flush()?;
    Ok(())
}

/// Runs the batch and writes the results file at `output`.
pub fn run_batch(
    paths: &[PathBuf],
    seeds: &[u64],
    evfw: &EvfwParams,
    brkga: &BrkgaParams,
    options: &BatchOptions,
    output: &Path,
) -> Result<Vec<BatchRow>> {
    let rows = run_batch_rows(paths, seeds, evfw, brkga, options);
    let file = std::fs::File::create(output)?;
    write_batch_csv(&rows, std::io::BufWriter::new(file))?;
    Ok(rows)
}
