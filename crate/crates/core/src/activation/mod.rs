//! The non-linear node: analytic `sin^2(gamma * s)` on the unit square, its
//! Bernstein-polynomial form for the stochastic engine, and its piecewise
//! linear 8-bit form for the fixed-point engine.

mod bernstein;
mod fixed;
mod pwl;

pub use bernstein::{bernstein_basis, eval_bernstein, fit_bernstein, BernsteinCoeffs, FitMethod};
pub use fixed::{fx_add, fx_mul, fx_neg, FixedPointValue};
pub use pwl::{build_pwl, PwlTable};

use crate::error::{check_range, Error, Result};

/// Activation `g(s) = sin^2(gamma * s)` restricted to `s` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActivationSpec {
    gamma: f64,
}

impl ActivationSpec {
    pub fn new(gamma: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "activation frequency must be finite and >= 0, got {gamma}"
            )));
        }
        Ok(ActivationSpec { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Unchecked evaluation for callers that already guarantee `s` in `[0, 1]`.
    #[inline]
    pub fn eval(&self, s: f64) -> f64 {
        let v = (self.gamma * s).sin();
        v * v
    }
}

pub fn eval_activation(spec: &ActivationSpec, s: f64) -> Result<f64> {
    check_range("activation argument", s, 0.0, 1.0)?;
    Ok(spec.eval(s))
}
