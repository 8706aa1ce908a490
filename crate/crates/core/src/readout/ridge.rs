use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::reservoir::StateMatrix;

pub const DEFAULT_RIDGE: f64 = 1e-8;

/// Affine readout: `y = w[..N] . x + w[N]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReadoutModel {
    weights: Vec<f64>,
}

impl ReadoutModel {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() || weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::Numerical("readout weights must be finite and nonempty".into()));
        }
        Ok(ReadoutModel { weights })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn inputs(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn bias(&self) -> f64 {
        self.weights[self.weights.len() - 1]
    }

    pub fn predict_row(&self, row: &[f64]) -> f64 {
        row.iter().zip(&self.weights).map(|(x, w)| x * w).sum::<f64>() + self.bias()
    }
}

fn design(states: &StateMatrix) -> DMatrix<f64> {
    let n = states.cols();
    DMatrix::from_fn(states.rows(), n + 1, |r, c| if c < n { states.get(r, c) } else { 1.0 })
}

/// Ridge regression on `[states | 1]` through the SVD,
/// `w = V diag(s / (s^2 + lambda)) U^T y`. With `lambda = 0` singular
/// directions below round-off are dropped, giving the minimum-norm solution.
pub fn train_readout(states: &StateMatrix, targets: &[f64], lambda: f64) -> Result<ReadoutModel> {
    if states.rows() != targets.len() {
        return Err(Error::LengthMismatch {
            what: "readout targets",
            expected: states.rows(),
            actual: targets.len(),
        });
    }
    if states.rows() == 0 {
        return Err(Error::InvalidArgument("no training rows".into()));
    }
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(Error::InvalidArgument(format!("ridge parameter must be >= 0, got {lambda}")));
    }
    let x = design(states);
    let y = DVector::from_column_slice(targets);
    let dims = x.nrows().max(x.ncols());
    let svd = x.svd(true, true);
    let (u, v_t) = match (&svd.u, &svd.v_t) {
        (Some(u), Some(v_t)) => (u, v_t),
        _ => return Err(Error::Numerical("SVD did not return singular vectors".into())),
    };
    let s = &svd.singular_values;
    let max = s.iter().copied().fold(0.0, f64::max);
    let cutoff = max * f64::EPSILON * dims as f64;
    let uty = u.transpose() * &y;
    let scaled = DVector::from_fn(s.len(), |i, _| {
        let si = s[i];
        if lambda == 0.0 && si <= cutoff {
            0.0
        } else {
            si / (si * si + lambda) * uty[i]
        }
    });
    let w = v_t.transpose() * scaled;
    ReadoutModel::new(w.iter().copied().collect())
}

pub fn predict(model: &ReadoutModel, states: &StateMatrix) -> Result<Vec<f64>> {
    if states.cols() != model.inputs() {
        return Err(Error::LengthMismatch {
            what: "readout inputs",
            expected: model.inputs(),
            actual: states.cols(),
        });
    }
    Ok((0..states.rows()).map(|r| model.predict_row(states.row(r))).collect())
}
