use super::config::{FloatActivation, TdrConfig};
use super::state::NodeEngine;
use crate::activation::{fit_bernstein, ActivationSpec, BernsteinCoeffs};
use crate::error::Result;

#[derive(Debug, Clone)]
enum Activation {
    Analytic(ActivationSpec),
    Bernstein(BernsteinCoeffs),
}

/// Floating-point engine: the probability algebra of the stochastic wiring
/// evaluated exactly.
#[derive(Debug, Clone)]
pub struct FloatNode {
    alpha: f64,
    bias_prob: f64,
    mask: Vec<i8>,
    activation: Activation,
}

impl FloatNode {
    pub fn new(cfg: &TdrConfig) -> Result<Self> {
        let spec = ActivationSpec::new(cfg.gamma)?;
        let activation = match cfg.float_activation {
            FloatActivation::Analytic => Activation::Analytic(spec),
            FloatActivation::Bernstein => {
                Activation::Bernstein(fit_bernstein(&spec, cfg.order, cfg.fit)?)
            }
        };
        Ok(FloatNode {
            alpha: cfg.alpha,
            bias_prob: (cfg.theta + 1.0) / 2.0,
            mask: cfg.mask.weights().to_vec(),
            activation,
        })
    }

    /// Mixed argument `s` of the non-linear node.
    pub fn argument(&self, index: usize, u: f64, delayed: f64) -> f64 {
        let p_wu = (f64::from(self.mask[index]) * u + 1.0) / 2.0;
        let p_in = 0.5 * p_wu + 0.5 * self.bias_prob;
        self.alpha * p_in + (1.0 - self.alpha) * delayed
    }
}

impl NodeEngine for FloatNode {
    fn node(&mut self, index: usize, u: f64, delayed: f64) -> Result<f64> {
        let s = self.argument(index, u, delayed).clamp(0.0, 1.0);
        Ok(match &self.activation {
            Activation::Analytic(spec) => spec.eval(s),
            Activation::Bernstein(c) => crate::activation::eval_bernstein(c, s)?,
        })
    }
}
