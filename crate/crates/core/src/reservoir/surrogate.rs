//! Expectation propagation through the stochastic wiring: each gate is
//! replaced by the probability of a one at its output, and the Bernstein
//! unit by the expected coefficient under the distribution of the adder count.

use super::config::TdrConfig;
use super::state::NodeEngine;
use crate::activation::{fit_bernstein, ActivationSpec, BernsteinCoeffs};
use crate::error::{check_range, Result};

fn xnor(a: f64, b: f64) -> f64 {
    a * b + (1.0 - a) * (1.0 - b)
}

fn mux(sel: f64, a: f64, b: f64) -> f64 {
    sel * a + (1.0 - sel) * b
}

/// Probability distribution of the number of ones among `n` independent
/// copies of a stream with ones-probability `s`.
fn count_distribution(n: usize, s: f64) -> Vec<f64> {
    let mut dist = vec![0.0; n + 1];
    dist[0] = 1.0;
    for copy in 0..n {
        for k in (0..=copy + 1).rev() {
            let stay = dist[k] * (1.0 - s);
            let rise = if k > 0 { dist[k - 1] * s } else { 0.0 };
            dist[k] = stay + rise;
        }
    }
    dist
}

/// Expected output probability of one stochastic node for infinitely long
/// streams with independent delayed copies.
pub fn expected_node_value(
    coeffs: &BernsteinCoeffs,
    alpha: f64,
    theta: f64,
    weight: i8,
    u: f64,
    delayed: f64,
) -> Result<f64> {
    check_range("reservoir input", u, -1.0, 1.0)?;
    check_range("delayed state", delayed, 0.0, 1.0)?;
    let p_u = (u + 1.0) / 2.0;
    let p_w = (f64::from(weight) + 1.0) / 2.0;
    let p_bias = (theta + 1.0) / 2.0;
    let weighted = xnor(p_u, p_w);
    let with_bias = mux(0.5, weighted, p_bias);
    let s = mux(alpha, with_bias, delayed);
    Ok(count_distribution(coeffs.order(), s)
        .iter()
        .zip(coeffs.beta())
        .map(|(p, b)| p * b)
        .sum())
}

#[derive(Debug, Clone)]
pub struct ExpectationNode {
    alpha: f64,
    theta: f64,
    mask: Vec<i8>,
    coeffs: BernsteinCoeffs,
}

impl ExpectationNode {
    pub fn new(cfg: &TdrConfig) -> Result<Self> {
        Ok(ExpectationNode {
            alpha: cfg.alpha,
            theta: cfg.theta,
            mask: cfg.mask.weights().to_vec(),
            coeffs: fit_bernstein(&ActivationSpec::new(cfg.gamma)?, cfg.order, cfg.fit)?,
        })
    }
}

impl NodeEngine for ExpectationNode {
    fn node(&mut self, index: usize, u: f64, delayed: f64) -> Result<f64> {
        expected_node_value(&self.coeffs, self.alpha, self.theta, self.mask[index], u, delayed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reservoir::{FloatActivation, FloatNode, Tdr};

    #[test]
    fn count_distribution_is_binomial() {
        let d = count_distribution(4, 0.3);
        let expect = [0.2401, 0.4116, 0.2646, 0.0756, 0.0081];
        for (a, b) in d.iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn matches_float_bernstein_engine() {
        let mut cfg = TdrConfig::new(25, 8);
        cfg.float_activation = FloatActivation::Bernstein;
        let mut float = Tdr::new(cfg.nodes, FloatNode::new(&cfg).unwrap());
        let mut surrogate = Tdr::new(cfg.nodes, ExpectationNode::new(&cfg).unwrap());
        for t in 0..100 {
            let u = ((t * 7919) % 2001) as f64 / 1000.0 - 1.0;
            let a = float.step(u).unwrap().to_vec();
            let b = surrogate.step(u).unwrap();
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).abs() <= 1e-12);
            }
        }
    }
}
