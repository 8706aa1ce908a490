//! Kernel quality and generalization rank: the numerical rank of a matrix
//! whose columns are final reservoir states after distinct (KQ) or nearly
//! identical (GR) random drives.

use std::io::Write;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::rank::{numerical_rank, DEFAULT_RANK_TOL};
use crate::error::{Error, Result};
use crate::reservoir::{EngineKind, Reservoir, TdrConfig};
use crate::stochastic::splitmix64;

/// Upper end of the raw drive range, matching the NARMA10 inputs.
const RAW_INPUT_MAX: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsConfig {
    /// Length of every drive sequence.
    pub m: usize,
    pub runs: usize,
    /// GR perturbation: uniform in `[-noise_amp, noise_amp]` on the raw drive.
    pub noise_amp: f64,
    pub rank_tol: f64,
}

impl Default for MetricsConfig {
    fn default() -> Self {
        MetricsConfig {
            m: 50,
            runs: 10,
            noise_amp: 0.05,
            rank_tol: DEFAULT_RANK_TOL,
        }
    }
}

impl MetricsConfig {
    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.runs == 0 {
            return Err(Error::Config("metric sequence length and runs must be >= 1".into()));
        }
        if !(self.noise_amp > 0.0 && self.noise_amp.is_finite()) {
            return Err(Error::Config(format!("noise amplitude must be > 0, got {}", self.noise_amp)));
        }
        if !(self.rank_tol > 0.0 && self.rank_tol < 1.0) {
            return Err(Error::Config(format!("rank tolerance must be in (0, 1), got {}", self.rank_tol)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QualityScores {
    pub kq: f64,
    pub gr: f64,
    pub kq_runs: Vec<usize>,
    pub gr_runs: Vec<usize>,
}

impl QualityScores {
    pub fn difference(&self) -> f64 {
        self.kq - self.gr
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Drive {
    Distinct,
    Perturbed,
}

fn scale(raw: f64) -> f64 {
    (2.0 * raw / RAW_INPUT_MAX - 1.0).clamp(-1.0, 1.0)
}

/// Scaled drive sequences for one run, one per column.
fn drives(seed: u64, run: usize, columns: usize, mcfg: &MetricsConfig, kind: Drive) -> Vec<Vec<f64>> {
    let tag = match kind {
        Drive::Distinct => 0x4b51,
        Drive::Perturbed => 0x4752,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(splitmix64(seed ^ tag) ^ run as u64));
    let draw = |rng: &mut ChaCha8Rng| rng.gen_range(0.0..=RAW_INPUT_MAX);
    match kind {
        Drive::Distinct => (0..columns)
            .map(|_| (0..mcfg.m).map(|_| scale(draw(&mut rng))).collect())
            .collect(),
        Drive::Perturbed => {
            let base: Vec<f64> = (0..mcfg.m).map(|_| draw(&mut rng)).collect();
            (0..columns)
                .map(|_| {
                    base.iter()
                        .map(|&b| {
                            let noise = rng.gen_range(-mcfg.noise_amp..=mcfg.noise_amp);
                            scale((b + noise).clamp(0.0, RAW_INPUT_MAX))
                        })
                        .collect()
                })
                .collect()
        }
    }
}

/// Columns are the final states after each drive, starting from zero state.
fn state_columns(res: &mut Reservoir, drives: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let n = res.nodes();
    let mut m = DMatrix::zeros(n, drives.len());
    for (c, seq) in drives.iter().enumerate() {
        res.reset_state();
        let mut last: &[f64] = &[];
        for &u in seq {
            last = res.step(u)?;
        }
        m.column_mut(c).copy_from_slice(last);
    }
    Ok(m)
}

/// Mean numerical rank over `mcfg.runs` matrices produced by `build(run)`.
/// Runs are evaluated in parallel; the result does not depend on their order.
pub fn average_rank<F>(mcfg: &MetricsConfig, build: F) -> Result<(f64, Vec<usize>)>
where
    F: Fn(usize) -> Result<DMatrix<f64>> + Sync,
{
    mcfg.validate()?;
    let ranks = (0..mcfg.runs)
        .into_par_iter()
        .map(|run| build(run).map(|m| numerical_rank(&m, mcfg.rank_tol)))
        .collect::<Result<Vec<_>>>()?;
    let mean = ranks.iter().sum::<usize>() as f64 / ranks.len() as f64;
    Ok((mean, ranks))
}

fn rank_for(cfg: &TdrConfig, mcfg: &MetricsConfig, kind: Drive) -> Result<(f64, Vec<usize>)> {
    if cfg.engine == EngineKind::Esn {
        return Err(Error::Config("KQ/GR are defined for TDR engines".into()));
    }
    average_rank(mcfg, |run| {
        let mut res = Reservoir::from_config(cfg)?;
        state_columns(&mut res, &drives(cfg.seed, run, cfg.nodes, mcfg, kind))
    })
}

pub fn kernel_quality(cfg: &TdrConfig, mcfg: &MetricsConfig) -> Result<f64> {
    Ok(rank_for(cfg, mcfg, Drive::Distinct)?.0)
}

pub fn generalization_rank(cfg: &TdrConfig, mcfg: &MetricsConfig) -> Result<f64> {
    Ok(rank_for(cfg, mcfg, Drive::Perturbed)?.0)
}

/// KQ and GR on the same reservoir configuration and seeds.
pub fn quality_metrics(cfg: &TdrConfig, mcfg: &MetricsConfig) -> Result<QualityScores> {
    let (kq, kq_runs) = rank_for(cfg, mcfg, Drive::Distinct)?;
    let (gr, gr_runs) = rank_for(cfg, mcfg, Drive::Perturbed)?;
    Ok(QualityScores {
        kq,
        gr,
        kq_runs,
        gr_runs,
    })
}

/// One row of the metrics table.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRow {
    pub alpha: f64,
    pub gamma: f64,
    /// Stream length; `None` for engines without streams.
    pub stream_len: Option<usize>,
    pub nodes: usize,
    pub engine: EngineKind,
    pub reseed: bool,
    pub scores: QualityScores,
}

impl MetricsRow {
    pub fn new(cfg: &TdrConfig, scores: QualityScores) -> Self {
        MetricsRow {
            alpha: cfg.alpha,
            gamma: cfg.gamma,
            stream_len: (cfg.engine == EngineKind::Stochastic).then_some(cfg.stream_len),
            nodes: cfg.nodes,
            engine: cfg.engine,
            reseed: cfg.reseed,
            scores,
        }
    }
}

/// CSV columns `alpha,gamma,L,N,engine,reseed,KQ,GR,KQ-GR,KQ_norm,GR_norm`;
/// the last two are divided by `N`.
pub fn write_metrics_csv<W: Write>(rows: &[MetricsRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "alpha", "gamma", "L", "N", "engine", "reseed", "KQ", "GR", "KQ-GR", "KQ_norm", "GR_norm",
    ])?;
    for r in rows {
        let n = r.nodes as f64;
        w.write_record([
            format!("{:?}", r.alpha),
            format!("{:?}", r.gamma),
            r.stream_len.map_or("NA".into(), |l| l.to_string()),
            r.nodes.to_string(),
            r.engine.to_string(),
            if r.reseed { "on" } else { "off" }.into(),
            format!("{:?}", r.scores.kq),
            format!("{:?}", r.scores.gr),
            format!("{:?}", r.scores.difference()),
            format!("{:?}", r.scores.kq / n),
            format!("{:?}", r.scores.gr / n),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}
