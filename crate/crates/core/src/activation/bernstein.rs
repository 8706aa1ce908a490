use nalgebra::{DMatrix, DVector};

use super::ActivationSpec;
use crate::error::{check_range, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FitMethod {
    /// `beta_k = g(k / n)`.
    #[default]
    Sample,
    /// Least-squares fit on a dense grid, clipped to `[0, 1]`.
    LeastSquares,
}

impl std::str::FromStr for FitMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sample" => Ok(FitMethod::Sample),
            "least-squares" | "lsq" => Ok(FitMethod::LeastSquares),
            other => Err(Error::Config(format!("unknown fit method {other:?}"))),
        }
    }
}

/// Coefficients `beta_0 ..= beta_n` of an order-`n` Bernstein polynomial,
/// each a probability so it can be encoded as a stream.
#[derive(Debug, Clone, PartialEq)]
pub struct BernsteinCoeffs {
    beta: Vec<f64>,
}

impl BernsteinCoeffs {
    pub fn new(beta: Vec<f64>) -> Result<Self> {
        if beta.len() < 2 {
            return Err(Error::InvalidArgument(
                "Bernstein polynomial needs order >= 1".into(),
            ));
        }
        for &b in &beta {
            check_range("Bernstein coefficient", b, 0.0, 1.0)?;
        }
        Ok(BernsteinCoeffs { beta })
    }

    pub fn order(&self) -> usize {
        self.beta.len() - 1
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    /// One coefficient per line, in order.
    pub fn to_text(&self) -> String {
        self.beta.iter().map(|b| format!("{b:.17e}\n")).collect()
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let beta = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| {
                l.parse::<f64>()
                    .map_err(|e| Error::InvalidArgument(format!("bad coefficient {l:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(beta)
    }
}

/// `C(n, k) s^k (1 - s)^(n - k)` for `k = 0..=n`.
pub fn bernstein_basis(n: usize, s: f64) -> Vec<f64> {
    let mut out = vec![0.0; n + 1];
    let mut binom = 1.0;
    for (k, slot) in out.iter_mut().enumerate() {
        if k > 0 {
            binom = binom * (n - k + 1) as f64 / k as f64;
        }
        *slot = binom * s.powi(k as i32) * (1.0 - s).powi((n - k) as i32);
    }
    out
}

pub fn eval_bernstein(coeffs: &BernsteinCoeffs, s: f64) -> Result<f64> {
    check_range("Bernstein argument", s, 0.0, 1.0)?;
    Ok(eval_unchecked(coeffs, s))
}

pub(crate) fn eval_unchecked(coeffs: &BernsteinCoeffs, s: f64) -> f64 {
    bernstein_basis(coeffs.order(), s)
        .iter()
        .zip(&coeffs.beta)
        .map(|(b, beta)| b * beta)
        .sum()
}

const LSQ_GRID: usize = 2001;

pub fn fit_bernstein(spec: &ActivationSpec, n: usize, method: FitMethod) -> Result<BernsteinCoeffs> {
    if n == 0 {
        return Err(Error::InvalidArgument("Bernstein order must be >= 1".into()));
    }
    let beta = match method {
        FitMethod::Sample => (0..=n).map(|k| spec.eval(k as f64 / n as f64)).collect(),
        FitMethod::LeastSquares => {
            let grid: Vec<f64> = (0..LSQ_GRID).map(|i| i as f64 / (LSQ_GRID - 1) as f64).collect();
            let design = DMatrix::from_fn(LSQ_GRID, n + 1, |i, k| bernstein_basis(n, grid[i])[k]);
            let target = DVector::from_iterator(LSQ_GRID, grid.iter().map(|&s| spec.eval(s)));
            let svd = design.svd(true, true);
            let sol = svd
                .solve(&target, 1e-12)
                .map_err(|e| Error::Numerical(format!("Bernstein least squares: {e}")))?;
            sol.iter().map(|b| b.clamp(0.0, 1.0)).collect()
        }
    };
    BernsteinCoeffs::new(beta)
}
