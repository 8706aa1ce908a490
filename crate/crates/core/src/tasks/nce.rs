use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::{scale_inputs_symmetric, TaskDataset, TaskKind};
use crate::error::{Error, Result};
use crate::readout::SYMBOLS;

/// Channel taps for `d(n+2), d(n+1), ..., d(n-7)`.
pub const NCE_TAPS: [f64; 10] = [0.08, -0.12, 1.0, 0.18, -0.1, 0.091, -0.05, 0.04, 0.03, 0.01];
const LEAD: usize = 2;
const LAG: usize = 7;

#[derive(Debug, Clone, PartialEq)]
pub struct NceParams {
    pub washout: usize,
    pub train: usize,
    pub test: usize,
    /// Additive Gaussian noise at this signal-to-noise ratio; `None` is noiseless.
    pub snr_db: Option<f64>,
}

impl Default for NceParams {
    fn default() -> Self {
        NceParams {
            washout: 50,
            train: 1000,
            test: 1000,
            snr_db: None,
        }
    }
}

/// Linear channel output `q(n)` for every `n` with full tap support, i.e.
/// `n = 7 .. symbols.len() - 2`.
pub fn nce_channel(symbols: &[f64]) -> Vec<f64> {
    if symbols.len() < LEAD + LAG + 1 {
        return Vec::new();
    }
    (LAG..symbols.len() - LEAD)
        .map(|n| {
            NCE_TAPS
                .iter()
                .enumerate()
                .map(|(i, c)| c * symbols[n + LEAD - i])
                .sum()
        })
        .collect()
}

/// `u = q + 0.036 q^2 - 0.011 q^3`.
pub fn nce_nonlinearity(q: f64) -> f64 {
    q + 0.036 * q * q - 0.011 * q * q * q
}

/// Symbols uniform over {-3, -1, 1, 3}; input is the received signal scaled
/// by its largest training magnitude, target the sent symbol.
pub fn gen_nce(params: &NceParams, seed: u64) -> Result<TaskDataset> {
    let len = params.washout + params.train + params.test;
    if len < 100 {
        return Err(Error::Config(format!("NCE needs at least 100 symbols, got {len}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d: Vec<f64> = (0..len + LEAD + LAG)
        .map(|_| SYMBOLS[rng.gen_range(0..SYMBOLS.len())])
        .collect();
    let mut u: Vec<f64> = nce_channel(&d).into_iter().map(nce_nonlinearity).collect();
    if let Some(snr) = params.snr_db {
        let power = u.iter().map(|x| x * x).sum::<f64>() / u.len() as f64;
        let sigma = (power / 10f64.powf(snr / 10.0)).sqrt();
        let normal = Normal::new(0.0, sigma).map_err(|e| Error::Config(format!("noise: {e}")))?;
        u.iter_mut().for_each(|x| *x += normal.sample(&mut rng));
    }
    let targets = d[LAG..LAG + len].to_vec();
    let snr = params.snr_db.map_or("none".to_string(), |s| s.to_string());
    let ds = TaskDataset::new(TaskKind::Nce, u, targets, params.washout, params.washout + params.train)?
        .param("seed", seed)
        .param("snr_db", snr);
    scale_inputs_symmetric(ds)
}
