use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::activation::FitMethod;
use crate::error::{check_range, Error, Result};
use crate::stochastic::splitmix64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EngineKind {
    Float,
    Stochastic,
    Fixed,
    Esn,
}

impl EngineKind {
    pub fn name(self) -> &'static str {
        match self {
            EngineKind::Float => "float",
            EngineKind::Stochastic => "stochastic",
            EngineKind::Fixed => "fixed",
            EngineKind::Esn => "esn",
        }
    }
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EngineKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "float" => Ok(EngineKind::Float),
            "stochastic" => Ok(EngineKind::Stochastic),
            "fixed" => Ok(EngineKind::Fixed),
            "esn" => Ok(EngineKind::Esn),
            other => Err(Error::Config(format!("unknown engine {other:?}"))),
        }
    }
}

/// Activation used by the floating-point engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FloatActivation {
    /// `sin^2(gamma * s)`: the infinite-order, infinite-length limit.
    #[default]
    Analytic,
    /// The same Bernstein polynomial the stochastic engine realises, making
    /// the float engine its exact expectation.
    Bernstein,
}

impl FromStr for FloatActivation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "analytic" => Ok(FloatActivation::Analytic),
            "bernstein" => Ok(FloatActivation::Bernstein),
            other => Err(Error::Config(format!("unknown float activation {other:?}"))),
        }
    }
}

/// Per-node input weights, each exactly -1 or +1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mask(Vec<i8>);

impl Mask {
    pub fn new(weights: Vec<i8>) -> Result<Self> {
        if weights.is_empty() || weights.iter().any(|&w| w != 1 && w != -1) {
            return Err(Error::Config("mask entries must be +1 or -1".into()));
        }
        Ok(Mask(weights))
    }

    /// I.i.d. uniform signs drawn from `seed`.
    pub fn random(nodes: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ 0x6D61_736B));
        Mask((0..nodes).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect())
    }

    pub fn weights(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Hyper-parameters of a time-delay reservoir; the delay is always
/// `tau = nodes + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TdrConfig {
    pub nodes: usize,
    /// Bit-stream length `L` of the stochastic engine.
    pub stream_len: usize,
    pub alpha: f64,
    pub gamma: f64,
    pub theta: f64,
    pub mask: Mask,
    /// Bernstein order `n`.
    pub order: usize,
    pub fit: FitMethod,
    pub engine: EngineKind,
    /// Master seed for the mask and the per-node LFSR seed table.
    pub seed: u64,
    pub washout: usize,
    /// Restore every node's generators to its own seeds before each evaluation.
    pub reseed: bool,
    /// Shift-register spacing between the Bernstein argument copies.
    pub copy_delay: usize,
    pub pwl_segments: usize,
    pub float_activation: FloatActivation,
}

impl TdrConfig {
    pub const DEFAULT_COPY_DELAY: usize = 1;

    pub fn new(nodes: usize, seed: u64) -> Self {
        TdrConfig {
            nodes,
            stream_len: 128,
            alpha: 0.6,
            gamma: 2.0,
            theta: 0.6,
            mask: Mask::random(nodes, seed),
            order: 10,
            fit: FitMethod::Sample,
            engine: EngineKind::Float,
            seed,
            washout: 50,
            reseed: true,
            copy_delay: Self::DEFAULT_COPY_DELAY,
            pwl_segments: 16,
            float_activation: FloatActivation::Analytic,
        }
    }

    pub fn with_engine(mut self, engine: EngineKind) -> Self {
        self.engine = engine;
        self
    }

    pub fn tau(&self) -> usize {
        self.nodes + 1
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes == 0 {
            return Err(Error::Config("reservoir needs at least one node".into()));
        }
        if self.mask.len() != self.nodes {
            return Err(Error::Config(format!(
                "mask has {} entries for {} nodes",
                self.mask.len(),
                self.nodes
            )));
        }
        check_range("alpha", self.alpha, 0.0, 1.0)?;
        check_range("theta", self.theta, -1.0, 1.0)?;
        if !self.gamma.is_finite() || self.gamma < 0.0 {
            return Err(Error::Config(format!("gamma must be >= 0, got {}", self.gamma)));
        }
        if self.order == 0 {
            return Err(Error::Config("Bernstein order must be >= 1".into()));
        }
        if self.engine == EngineKind::Stochastic && (self.stream_len == 0 || self.copy_delay == 0) {
            return Err(Error::Config(
                "stochastic engine needs stream length and copy delay >= 1".into(),
            ));
        }
        Ok(())
    }

    /// Canonical `key=value` lines; everything needed to rebuild the reservoir.
    pub fn to_key_values(&self) -> String {
        let mask: String = self
            .mask
            .weights()
            .iter()
            .map(|&w| if w > 0 { '+' } else { '-' })
            .collect();
        format!(
            "engine={}\nnodes={}\nstream_len={}\nalpha={:?}\ngamma={:?}\ntheta={:?}\norder={}\nfit={:?}\nseed={}\nwashout={}\nreseed={}\ncopy_delay={}\npwl_segments={}\nfloat_activation={:?}\nmask={}\n",
            self.engine,
            self.nodes,
            self.stream_len,
            self.alpha,
            self.gamma,
            self.theta,
            self.order,
            self.fit,
            self.seed,
            self.washout,
            self.reseed,
            self.copy_delay,
            self.pwl_segments,
            self.float_activation,
            mask
        )
    }

    pub fn config_hash(&self) -> String {
        short_hash(&self.to_key_values())
    }
}

/// First 16 hex digits of the SHA-256 of `text`.
pub(crate) fn short_hash(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = TdrConfig::new(50, 1);
        assert_eq!(c.tau(), 51);
        assert_eq!((c.alpha, c.gamma, c.theta, c.order), (0.6, 2.0, 0.6, 10));
        assert!(c.validate().is_ok());
        assert!(c.mask.weights().iter().all(|w| w.abs() == 1));
    }

    #[test]
    fn mask_is_seeded_and_balanced() {
        assert_eq!(Mask::random(200, 3), Mask::random(200, 3));
        assert_ne!(Mask::random(200, 3), Mask::random(200, 4));
        let plus = Mask::random(10_000, 9).weights().iter().filter(|&&w| w > 0).count();
        assert!((4_800..5_200).contains(&plus));
        assert!(Mask::new(vec![1, 0, -1]).is_err());
    }

    #[test]
    fn validation() {
        let mut c = TdrConfig::new(10, 1);
        c.alpha = 1.5;
        assert!(c.validate().is_err());
        let mut c = TdrConfig::new(10, 1);
        c.theta = -1.2;
        assert!(c.validate().is_err());
        let mut c = TdrConfig::new(10, 1).with_engine(EngineKind::Stochastic);
        c.stream_len = 0;
        assert!(c.validate().is_err());
        let mut c = TdrConfig::new(10, 1);
        c.mask = Mask::random(9, 1);
        assert!(c.validate().is_err());
    }

    #[test]
    fn hash_tracks_content() {
        let a = TdrConfig::new(10, 1);
        let mut b = a.clone();
        assert_eq!(a.config_hash(), b.config_hash());
        b.gamma = 2.5;
        assert_ne!(a.config_hash(), b.config_hash());
        assert_eq!(a.config_hash().len(), 16);
    }
}
