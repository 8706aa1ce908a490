use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{short_hash, EngineKind};
use super::matrix::StateMatrix;
use crate::error::{Error, Result};
use crate::stochastic::splitmix64;

/// Echo-state-network baseline with logistic-sigmoid neurons.
#[derive(Debug, Clone, PartialEq)]
pub struct EsnConfig {
    pub nodes: usize,
    pub spectral_radius: f64,
    /// Input weights are uniform in `[-input_scaling, input_scaling]`.
    pub input_scaling: f64,
    /// Bias entries are uniform in `[-bias_scaling, bias_scaling]`.
    pub bias_scaling: f64,
    pub seed: u64,
    pub washout: usize,
}

impl EsnConfig {
    pub fn new(nodes: usize, seed: u64) -> Self {
        EsnConfig {
            nodes,
            spectral_radius: 0.9,
            input_scaling: 0.5,
            bias_scaling: 0.0,
            seed,
            washout: 50,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes == 0 {
            return Err(Error::Config("ESN needs at least one neuron".into()));
        }
        for (what, v) in [
            ("spectral radius", self.spectral_radius),
            ("input scaling", self.input_scaling),
            ("bias scaling", self.bias_scaling),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Config(format!("{what} must be finite and >= 0, got {v}")));
            }
        }
        Ok(())
    }

    pub fn to_key_values(&self) -> String {
        format!(
            "engine=esn\nnodes={}\nspectral_radius={:?}\ninput_scaling={:?}\nbias_scaling={:?}\nseed={}\nwashout={}\n",
            self.nodes, self.spectral_radius, self.input_scaling, self.bias_scaling, self.seed, self.washout
        )
    }

    pub fn config_hash(&self) -> String {
        short_hash(&self.to_key_values())
    }
}

/// Largest eigenvalue modulus of a square matrix.
pub fn spectral_radius(w: &DMatrix<f64>) -> f64 {
    w.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[derive(Debug, Clone)]
pub struct Esn {
    w_res: DMatrix<f64>,
    w_in: DVector<f64>,
    bias: DVector<f64>,
    state: DVector<f64>,
    output: Vec<f64>,
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

impl Esn {
    pub fn new(cfg: &EsnConfig) -> Result<Self> {
        cfg.validate()?;
        let n = cfg.nodes;
        let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(cfg.seed ^ 0x6573_6E00));
        let mut w_res = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..=1.0));
        let w_in = DVector::from_fn(n, |_, _| cfg.input_scaling * rng.gen_range(-1.0..=1.0));
        let bias = DVector::from_fn(n, |_, _| cfg.bias_scaling * rng.gen_range(-1.0..=1.0));
        let rho = spectral_radius(&w_res);
        if cfg.spectral_radius == 0.0 {
            w_res.fill(0.0);
        } else if rho > 0.0 {
            w_res *= cfg.spectral_radius / rho;
        } else {
            return Err(Error::Numerical("random recurrent matrix is nilpotent".into()));
        }
        Ok(Self::from_parts(w_res, w_in, bias))
    }

    pub fn from_parts(w_res: DMatrix<f64>, w_in: DVector<f64>, bias: DVector<f64>) -> Self {
        let n = w_in.len();
        Esn {
            w_res,
            w_in,
            bias,
            state: DVector::zeros(n),
            output: vec![0.0; n],
        }
    }

    pub fn nodes(&self) -> usize {
        self.w_in.len()
    }

    pub fn w_res(&self) -> &DMatrix<f64> {
        &self.w_res
    }

    pub fn reset_state(&mut self) {
        self.state.fill(0.0);
    }

    /// `x(t) = sigmoid(W x(t-1) + w_in u(t) + b)`.
    pub fn step(&mut self, u: f64) -> Result<&[f64]> {
        if !u.is_finite() {
            return Err(Error::InvalidArgument(format!("ESN input {u} is not finite")));
        }
        let pre = &self.w_res * &self.state + &self.w_in * u + &self.bias;
        self.state = pre.map(sigmoid);
        self.output.copy_from_slice(self.state.as_slice());
        Ok(&self.output)
    }
}

pub fn run_esn(cfg: &EsnConfig, inputs: &[f64]) -> Result<StateMatrix> {
    if inputs.len() <= cfg.washout {
        return Err(Error::InvalidArgument(format!(
            "input length {} does not exceed washout {}",
            inputs.len(),
            cfg.washout
        )));
    }
    let mut esn = Esn::new(cfg)?;
    let mut m = StateMatrix::with_capacity(cfg.nodes, inputs.len() - cfg.washout, EngineKind::Esn, cfg.config_hash());
    for (t, &u) in inputs.iter().enumerate() {
        let row = esn.step(u)?;
        if t >= cfg.washout {
            m.push_row(row)?;
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaled_to_requested_radius() {
        let cfg = EsnConfig::new(50, 4);
        let esn = Esn::new(&cfg).unwrap();
        assert!((spectral_radius(esn.w_res()) - 0.9).abs() < 1e-6);
    }

    #[test]
    fn radius_of_known_matrix() {
        // Rotation by 90 degrees scaled by 2: eigenvalues +-2i.
        let w = DMatrix::from_row_slice(2, 2, &[0.0, -2.0, 2.0, 0.0]);
        assert!((spectral_radius(&w) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn zero_drive_gives_half_after_first_step() {
        let cfg = EsnConfig::new(10, 1);
        let mut esn = Esn::new(&cfg).unwrap();
        assert!(esn.step(0.0).unwrap().iter().all(|&x| x == 0.5));

        let mut cfg = EsnConfig::new(10, 1);
        cfg.spectral_radius = 0.0;
        let mut esn = Esn::new(&cfg).unwrap();
        for _ in 0..5 {
            assert!(esn.step(0.0).unwrap().iter().all(|&x| x == 0.5));
        }
    }

    #[test]
    fn zero_radius_is_memoryless() {
        let mut cfg = EsnConfig::new(8, 2);
        cfg.spectral_radius = 0.0;
        cfg.bias_scaling = 0.3;
        let mut esn = Esn::new(&cfg).unwrap();
        let a = esn.step(0.7).unwrap().to_vec();
        esn.step(-0.2).unwrap();
        esn.step(0.1).unwrap();
        assert_eq!(esn.step(0.7).unwrap(), &a[..]);
    }

    #[test]
    fn run_shape() {
        let cfg = EsnConfig::new(5, 1);
        let m = run_esn(&cfg, &vec![0.1; 51]).unwrap();
        assert_eq!((m.rows(), m.cols()), (1, 5));
        assert!(run_esn(&cfg, &[0.1; 50]).is_err());
    }
}
