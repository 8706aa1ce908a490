use super::config::TdrConfig;
use super::state::NodeEngine;
use crate::activation::{build_pwl, fx_add, fx_mul, fx_neg, ActivationSpec, FixedPointValue, PwlTable};
use crate::error::Result;

/// 8-bit fixed-point engine: the float dataflow with every intermediate in
/// Q1.7 and the activation replaced by a piecewise-linear table.
#[derive(Debug, Clone)]
pub struct FixedNode {
    alpha: FixedPointValue,
    one_minus_alpha: FixedPointValue,
    bias_prob: FixedPointValue,
    mask: Vec<i8>,
    table: PwlTable,
}

impl FixedNode {
    pub fn new(cfg: &TdrConfig) -> Result<Self> {
        let spec = ActivationSpec::new(cfg.gamma)?;
        Ok(FixedNode {
            alpha: FixedPointValue::from_f64(cfg.alpha),
            one_minus_alpha: FixedPointValue::from_f64(1.0 - cfg.alpha),
            bias_prob: FixedPointValue::from_f64((cfg.theta + 1.0) / 2.0),
            mask: cfg.mask.weights().to_vec(),
            table: build_pwl(&spec, cfg.pwl_segments)?,
        })
    }

    pub fn table(&self) -> &PwlTable {
        &self.table
    }

    pub fn node_fixed(&self, index: usize, u: FixedPointValue, delayed: FixedPointValue) -> FixedPointValue {
        let half = FixedPointValue::HALF;
        let wu = if self.mask[index] > 0 { u } else { fx_neg(u) };
        let p_wu = fx_add(fx_mul(wu, half), half);
        let p_in = fx_add(fx_mul(half, p_wu), fx_mul(half, self.bias_prob));
        let s = fx_add(fx_mul(self.alpha, p_in), fx_mul(self.one_minus_alpha, delayed));
        self.table.eval_fixed(s)
    }
}

impl NodeEngine for FixedNode {
    fn node(&mut self, index: usize, u: f64, delayed: f64) -> Result<f64> {
        let x = self.node_fixed(
            index,
            FixedPointValue::from_f64(u),
            FixedPointValue::from_f64(delayed),
        );
        Ok(x.to_f64())
    }
}
