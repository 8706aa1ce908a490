use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{scale_inputs, TaskDataset, TaskKind};
use crate::error::{Error, Result};

const MAX_ATTEMPTS: u64 = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct Narma10Params {
    pub washout: usize,
    pub train: usize,
    pub test: usize,
    /// Use `1.5 u(t)^2` in place of `1.5 u(t-9) u(t)`.
    pub literal: bool,
}

impl Default for Narma10Params {
    fn default() -> Self {
        Narma10Params {
            washout: 50,
            train: 1000,
            test: 1000,
            literal: false,
        }
    }
}

/// `y(t+1) = 0.3 y(t) + 0.05 y(t) sum_{k=0}^{9} y(t-k) + 1.5 u(t-9) u(t) + 0.1`
/// from zero history. Entry `t` of the result is `y(t+1)`.
pub fn narma10_series(u: &[f64], literal: bool) -> Vec<f64> {
    let mut y = vec![0.0; u.len() + 1];
    for t in 0..u.len() {
        let window: f64 = y[t.saturating_sub(9)..=t].iter().sum();
        let drive = if literal {
            u[t] * u[t]
        } else if t >= 9 {
            u[t - 9] * u[t]
        } else {
            0.0
        };
        y[t + 1] = 0.3 * y[t] + 0.05 * y[t] * window + 1.5 * drive + 0.1;
    }
    y.remove(0);
    y
}

/// Inputs uniform in `[0, 0.5]`, target `y(t+1)`, inputs scaled to `[-1, 1]`.
/// A draw whose output leaves `[-1, 1]` is redrawn with the next seed.
pub fn gen_narma10(params: &Narma10Params, seed: u64) -> Result<TaskDataset> {
    let len = params.washout + params.train + params.test;
    if len < 20 {
        return Err(Error::Config(format!("NARMA10 needs at least 20 points, got {len}")));
    }
    for attempt in 0..MAX_ATTEMPTS {
        let s = seed.wrapping_add(attempt);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let u: Vec<f64> = (0..len).map(|_| rng.gen_range(0.0..=0.5)).collect();
        let y = narma10_series(&u, params.literal);
        if y.iter().all(|v| v.abs() <= 1.0) {
            let ds = TaskDataset::new(TaskKind::Narma10, u, y, params.washout, params.washout + params.train)?
                .param("seed", seed)
                .param("effective_seed", s)
                .param("literal", params.literal);
            return scale_inputs(ds, -1.0, 1.0);
        }
    }
    Err(Error::Numerical(format!(
        "NARMA10 diverged for {MAX_ATTEMPTS} consecutive seeds from {seed}"
    )))
}
