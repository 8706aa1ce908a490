use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{TaskDataset, TaskKind};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SineSquareParams {
    /// Signals in each of the training and test splits.
    pub signals: usize,
    pub points: usize,
    pub period: usize,
    pub washout: usize,
}

impl Default for SineSquareParams {
    fn default() -> Self {
        SineSquareParams {
            signals: 20,
            points: 1000,
            period: 12,
            washout: 50,
        }
    }
}

fn sine(k: usize, period: usize) -> f64 {
    (2.0 * PI * k as f64 / period as f64).sin()
}

/// `+1` on the first half of the period, `-1` on the second.
fn square(k: usize, period: usize) -> f64 {
    if 2 * k < period {
        1.0
    } else {
        -1.0
    }
}

/// Signals built from randomly chosen one-period segments, label `+1` on
/// square samples and `-1` on sine samples. Training and test signals are
/// concatenated into one series, preceded by `washout` warm-up samples.
pub fn gen_sine_square(params: &SineSquareParams, seed: u64) -> Result<TaskDataset> {
    if params.period < 4 || params.period % 2 != 0 {
        return Err(Error::Config(format!(
            "sine/square period must be even and >= 4, got {}",
            params.period
        )));
    }
    if params.signals == 0 || params.points == 0 {
        return Err(Error::Config("sine/square needs signals and points >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total = params.washout + 2 * params.signals * params.points;
    let mut inputs = Vec::with_capacity(total);
    let mut labels = Vec::with_capacity(total);
    let segment = |rng: &mut ChaCha8Rng, inputs: &mut Vec<f64>, labels: &mut Vec<f64>, n: usize| {
        while inputs.len() < n {
            let is_square = rng.gen::<bool>();
            for k in 0..params.period {
                if inputs.len() == n {
                    break;
                }
                inputs.push(if is_square { square(k, params.period) } else { sine(k, params.period) });
                labels.push(if is_square { 1.0 } else { -1.0 });
            }
        }
    };
    segment(&mut rng, &mut inputs, &mut labels, params.washout);
    for s in 0..2 * params.signals {
        segment(&mut rng, &mut inputs, &mut labels, params.washout + (s + 1) * params.points);
    }
    let train_end = params.washout + params.signals * params.points;
    Ok(TaskDataset::new(TaskKind::SineSquare, inputs, labels, params.washout, train_end)?
        .param("seed", seed)
        .param("signals", params.signals)
        .param("points", params.points)
        .param("period", params.period))
}
