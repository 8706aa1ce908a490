//! Time-delay reservoir engines sharing one wiring diagram, plus a small
//! echo-state-network baseline.
//!
//! Per virtual node `i` with held input `u` and the delay-line value `x_del`
//! written `tau = N + 1` ticks earlier:
//!
//! ```text
//! p_wu = (w_i * u + 1) / 2                 XNOR weighting
//! p_in = 1/2 * p_wu + 1/2 * (theta + 1) / 2  bias MUX
//! s    = alpha * p_in + (1 - alpha) * x_del  feedback MUX
//! x_i  = g(s)                                non-linear node
//! ```
//!
//! Node states are probabilities in `[0, 1]`.

mod config;
mod esn;
mod fixed;
mod float;
mod matrix;
mod state;
mod stochastic;
mod surrogate;

pub use config::{EngineKind, FloatActivation, Mask, TdrConfig};
pub(crate) use config::short_hash;
pub use esn::{run_esn, spectral_radius, Esn, EsnConfig};
pub use fixed::FixedNode;
pub use float::FloatNode;
pub use matrix::StateMatrix;
pub use state::{NodeEngine, Tdr, TdrState};
pub use stochastic::{NodeStreams, StochasticNode};
pub use surrogate::{expected_node_value, ExpectationNode};

use crate::error::{Error, Result};

/// A reservoir of any engine kind, stepped one input sample at a time.
#[derive(Debug, Clone)]
pub enum Reservoir {
    Float(Tdr<FloatNode>),
    Stochastic(Tdr<StochasticNode>),
    Fixed(Tdr<FixedNode>),
    Esn(Esn),
}

impl Reservoir {
    /// Build the TDR engine selected by `cfg.engine`. ESN configs are built
    /// through [`Reservoir::from_esn`].
    pub fn from_config(cfg: &TdrConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(match cfg.engine {
            EngineKind::Float => Reservoir::Float(Tdr::new(cfg.nodes, FloatNode::new(cfg)?)),
            EngineKind::Stochastic => {
                Reservoir::Stochastic(Tdr::new(cfg.nodes, StochasticNode::new(cfg)?))
            }
            EngineKind::Fixed => Reservoir::Fixed(Tdr::new(cfg.nodes, FixedNode::new(cfg)?)),
            EngineKind::Esn => {
                return Err(Error::Config(
                    "ESN reservoirs are built from an EsnConfig".into(),
                ))
            }
        })
    }

    pub fn from_esn(cfg: &EsnConfig) -> Result<Self> {
        Ok(Reservoir::Esn(Esn::new(cfg)?))
    }

    pub fn nodes(&self) -> usize {
        match self {
            Reservoir::Float(t) => t.nodes(),
            Reservoir::Stochastic(t) => t.nodes(),
            Reservoir::Fixed(t) => t.nodes(),
            Reservoir::Esn(e) => e.nodes(),
        }
    }

    pub fn kind(&self) -> EngineKind {
        match self {
            Reservoir::Float(_) => EngineKind::Float,
            Reservoir::Stochastic(_) => EngineKind::Stochastic,
            Reservoir::Fixed(_) => EngineKind::Fixed,
            Reservoir::Esn(_) => EngineKind::Esn,
        }
    }

    /// Zero the reservoir state. Free-running stochastic generators keep
    /// their position.
    pub fn reset_state(&mut self) {
        match self {
            Reservoir::Float(t) => t.reset_state(),
            Reservoir::Stochastic(t) => t.reset_state(),
            Reservoir::Fixed(t) => t.reset_state(),
            Reservoir::Esn(e) => e.reset_state(),
        }
    }

    pub fn step(&mut self, u: f64) -> Result<&[f64]> {
        match self {
            Reservoir::Float(t) => t.step(u),
            Reservoir::Stochastic(t) => t.step(u),
            Reservoir::Fixed(t) => t.step(u),
            Reservoir::Esn(e) => e.step(u),
        }
    }

    /// Drive the reservoir over `inputs`, keeping rows after `washout`.
    pub fn run(&mut self, inputs: &[f64], washout: usize, config_hash: &str) -> Result<StateMatrix> {
        if inputs.is_empty() {
            return Err(Error::InvalidArgument("input series is empty".into()));
        }
        if inputs.len() <= washout {
            return Err(Error::InvalidArgument(format!(
                "input length {} does not exceed washout {washout}",
                inputs.len()
            )));
        }
        let mut m = StateMatrix::with_capacity(
            self.nodes(),
            inputs.len() - washout,
            self.kind(),
            config_hash.to_string(),
        );
        for (t, &u) in inputs.iter().enumerate() {
            let row = self.step(u)?;
            if t >= washout {
                m.push_row(row)?;
            }
        }
        Ok(m)
    }
}

/// Run the TDR configured by `cfg` from a zero state, discarding
/// `cfg.washout` rows.
pub fn run_reservoir(cfg: &TdrConfig, inputs: &[f64]) -> Result<StateMatrix> {
    let mut r = Reservoir::from_config(cfg)?;
    r.run(inputs, cfg.washout, &cfg.config_hash())
}
