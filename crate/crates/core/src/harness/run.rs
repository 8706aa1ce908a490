use std::cmp::Ordering;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::evaluate::{evaluate_task, ModelConfig};
use super::spec::{Cell, ExperimentSpec, Workload};
use crate::error::{Error, Result};
use crate::readout::quality_metrics;
use crate::reservoir::EngineKind;
use crate::tasks::TaskDataset;

/// Scores of one (cell, metric) over all trials.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub task: String,
    pub cell: Cell,
    pub metric: String,
    pub config_hash: String,
    pub seeds: Vec<u64>,
    /// Test-split (or metric) score per trial.
    pub scores: Vec<f64>,
    /// Training-split score per trial; empty for KQ/GR.
    pub train_scores: Vec<f64>,
    pub mean: f64,
    /// Sample standard deviation; 0 for a single trial.
    pub std: f64,
    /// Summed wall-clock time of the trials.
    pub duration: Duration,
}

pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn engine_rank(e: EngineKind) -> u8 {
    match e {
        EngineKind::Stochastic => 0,
        EngineKind::Fixed => 1,
        EngineKind::Float => 2,
        EngineKind::Esn => 3,
    }
}

fn cmp_opt_f64(a: Option<f64>, b: Option<f64>) -> Ordering {
    match (a, b) {
        (Some(x), Some(y)) => x.total_cmp(&y),
        _ => a.is_some().cmp(&b.is_some()),
    }
}

/// Emission order: engine, N, L, alpha, gamma, re-seeding (on first), metric.
pub fn sort_records(records: &mut [RunRecord]) {
    records.sort_by(|a, b| {
        let (x, y) = (&a.cell, &b.cell);
        engine_rank(x.engine)
            .cmp(&engine_rank(y.engine))
            .then(x.nodes.cmp(&y.nodes))
            .then(x.stream_len.cmp(&y.stream_len))
            .then(cmp_opt_f64(x.alpha, y.alpha))
            .then(cmp_opt_f64(x.gamma, y.gamma))
            .then(y.reseed.cmp(&x.reseed))
            .then(a.metric.cmp(&b.metric))
    });
}

struct TrialOutput {
    /// (metric, train score, score)
    scores: Vec<(&'static str, Option<f64>, f64)>,
    elapsed: Duration,
}

fn run_trial(spec: &ExperimentSpec, cell: &Cell, seed: u64, ds: Option<&TaskDataset>) -> Result<TrialOutput> {
    let start = Instant::now();
    let model = spec.model(cell, seed);
    let scores = match (spec.workload, ds) {
        (Workload::Metrics, _) => {
            let ModelConfig::Tdr(cfg) = model else {
                return Err(Error::Config("KQ/GR are defined for TDR engines only".into()));
            };
            let q = quality_metrics(&cfg, &spec.metrics)?;
            vec![("KQ", None, q.kq), ("GR", None, q.gr), ("KQ-GR", None, q.difference())]
        }
        (Workload::Task(_), Some(ds)) => {
            let s = evaluate_task(ds, &model, spec.ridge)?;
            vec![(s.metric, Some(s.train), s.test)]
        }
        (Workload::Task(t), None) => {
            return Err(Error::Dataset(format!("no dataset generated for {t}")));
        }
    };
    Ok(TrialOutput {
        scores,
        elapsed: start.elapsed(),
    })
}

/// Run every (cell, trial) pair of the sweep and fold the trials into one
/// record per (cell, metric). Trials run on a pool of `spec.threads`
/// workers; results do not depend on the thread count or schedule.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<RunRecord>> {
    spec.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    pool.install(|| run_in_pool(spec))
}

fn run_in_pool(spec: &ExperimentSpec) -> Result<Vec<RunRecord>> {
    let cells = spec.cells();
    let seeds: Vec<u64> = (0..spec.trials).map(|k| spec.trial_seed(k)).collect();
    let datasets = (0..spec.trials)
        .into_par_iter()
        .map(|k| spec.dataset(k))
        .collect::<Result<Vec<_>>>()?;
    let jobs: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..spec.trials).map(move |k| (c, k)))
        .collect();
    let outputs = jobs
        .par_iter()
        .map(|&(c, k)| run_trial(spec, &cells[c], seeds[k], datasets[k].as_ref()))
        .collect::<Result<Vec<_>>>()?;

    let mut records = Vec::new();
    for (c, cell) in cells.iter().enumerate() {
        let trials = &outputs[c * spec.trials..(c + 1) * spec.trials];
        for (m, &(metric, _, _)) in trials[0].scores.iter().enumerate() {
            let scores: Vec<f64> = trials.iter().map(|t| t.scores[m].2).collect();
            let train_scores: Vec<f64> = trials.iter().filter_map(|t| t.scores[m].1).collect();
            let (mean, std) = mean_std(&scores);
            records.push(RunRecord {
                task: spec.workload.name().to_string(),
                cell: cell.clone(),
                metric: metric.to_string(),
                config_hash: spec.cell_hash(cell),
                seeds: seeds.clone(),
                scores,
                train_scores,
                mean,
                std,
                duration: trials.iter().map(|t| t.elapsed).sum(),
            });
        }
    }
    sort_records(&mut records);
    Ok(records)
}

/// KQ, GR and KQ-GR over the (alpha, gamma) or L / re-seeding grid of a
/// metrics spec.
pub fn run_metrics_grid(spec: &ExperimentSpec) -> Result<Vec<RunRecord>> {
    if spec.workload != Workload::Metrics {
        return Err(Error::Config(format!(
            "metrics grid needs task = metrics, got {}",
            spec.workload.name()
        )));
    }
    run_experiment(spec)
}
