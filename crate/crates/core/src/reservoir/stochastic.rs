//! Bit-exact stochastic-logic engine.
//!
//! Each node evaluation builds `L + (n - 1) * d` ticks of the argument stream
//! (input B2S, XNOR with the weight stream, bias MUX, feedback MUX) so that
//! the `n` delayed copies feeding the Bernstein unit all have real history,
//! then selects among `n + 1` coefficient streams of length `L`.
//!
//! With re-seeding on, every generator is restored to the node's own seed
//! before the node is evaluated. The variates each role produces are then the
//! same on every evaluation of that node, so they are generated once and
//! cached; this is bit-identical to re-seeding the registers.

use super::config::TdrConfig;
use super::state::NodeEngine;
use crate::activation::{fit_bernstein, ActivationSpec, BernsteinCoeffs};
use crate::error::Result;
use crate::stochastic::{
    b2s, b2s_unipolar, delayed_copies, s2b_unipolar, sc_bernstein, sc_mul, sc_mux, BipolarValue,
    BitStream, Lfsr, ProbValue, Role, SeedTable,
};

/// Every stream entering one node evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeStreams {
    pub input: BitStream,
    pub weight: BitStream,
    pub bias: BitStream,
    pub half_select: BitStream,
    pub alpha_select: BitStream,
    pub feedback: BitStream,
    pub coeffs: Vec<BitStream>,
}

impl NodeStreams {
    /// The mixed Bernstein argument, including history ticks.
    pub fn argument(&self) -> Result<BitStream> {
        argument(self, &self.input, &self.feedback)
    }

    pub fn output(&self, delay: usize) -> Result<BitStream> {
        output(self, &self.input, &self.feedback, delay)
    }
}

/// Argument built from the constant streams of `c` with the given input and
/// feedback streams.
fn argument(c: &NodeStreams, input: &BitStream, feedback: &BitStream) -> Result<BitStream> {
    let weighted = sc_mul(input, &c.weight)?;
    let with_bias = sc_mux(&c.half_select, &weighted, &c.bias)?;
    sc_mux(&c.alpha_select, &with_bias, feedback)
}

fn output(c: &NodeStreams, input: &BitStream, feedback: &BitStream, delay: usize) -> Result<BitStream> {
    let copies = delayed_copies(&argument(c, input, feedback)?, c.coeffs.len() - 1, delay)?;
    sc_bernstein(&copies, &c.coeffs)
}

trait GeneratorSource {
    fn generator(&mut self, role: Role) -> Result<&mut Lfsr>;
}

/// Registers freshly loaded with one node's seeds.
struct Reseeder<'a> {
    seeds: &'a SeedTable,
    node: usize,
    current: Option<Lfsr>,
}

impl GeneratorSource for Reseeder<'_> {
    fn generator(&mut self, role: Role) -> Result<&mut Lfsr> {
        let g = Lfsr::maximal16(self.seeds.seed(self.node, role)?)?;
        Ok(self.current.insert(g))
    }
}

impl GeneratorSource for Vec<Lfsr> {
    fn generator(&mut self, role: Role) -> Result<&mut Lfsr> {
        Ok(&mut self[role.index()])
    }
}

#[derive(Debug, Clone)]
struct Wiring {
    len: usize,
    extended: usize,
    delay: usize,
    alpha: f64,
    theta: f64,
    mask: Vec<i8>,
    coeffs: BernsteinCoeffs,
}

impl Wiring {
    fn streams(
        &self,
        i: usize,
        u: f64,
        delayed: f64,
        src: &mut impl GeneratorSource,
    ) -> Result<NodeStreams> {
        let ext = self.extended;
        let input = b2s(BipolarValue::new(u)?, src.generator(Role::Input)?, ext)?;
        let weight = b2s(BipolarValue::new(f64::from(self.mask[i]))?, src.generator(Role::Weight)?, ext)?;
        let bias = b2s(BipolarValue::new(self.theta)?, src.generator(Role::Bias)?, ext)?;
        let half_select = b2s_unipolar(ProbValue::new(0.5)?, src.generator(Role::HalfSelect)?, ext)?;
        let alpha_select =
            b2s_unipolar(ProbValue::new(self.alpha)?, src.generator(Role::AlphaSelect)?, ext)?;
        let feedback = b2s_unipolar(ProbValue::new(delayed)?, src.generator(Role::Feedback)?, ext)?;
        let coeffs = self
            .coeffs
            .beta()
            .iter()
            .enumerate()
            .map(|(k, &beta)| {
                b2s_unipolar(ProbValue::new(beta)?, src.generator(Role::Coefficient(k))?, self.len)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(NodeStreams {
            input,
            weight,
            bias,
            half_select,
            alpha_select,
            feedback,
            coeffs,
        })
    }
}

#[derive(Debug, Clone)]
struct NodeCache {
    input_states: Vec<u32>,
    feedback_states: Vec<u32>,
    /// Streams from a reference evaluation; only input and feedback vary.
    template: NodeStreams,
}

#[derive(Debug, Clone)]
enum Generators {
    Reseeded(Vec<NodeCache>),
    FreeRunning(Vec<Lfsr>),
}

#[derive(Debug, Clone)]
pub struct StochasticNode {
    wiring: Wiring,
    seeds: SeedTable,
    generators: Generators,
}

impl StochasticNode {
    pub fn new(cfg: &TdrConfig) -> Result<Self> {
        let coeffs = fit_bernstein(&ActivationSpec::new(cfg.gamma)?, cfg.order, cfg.fit)?;
        let seeds = SeedTable::new(cfg.seed, cfg.nodes, Role::count(cfg.order))?;
        let wiring = Wiring {
            len: cfg.stream_len,
            extended: cfg.stream_len + (cfg.order - 1) * cfg.copy_delay,
            delay: cfg.copy_delay,
            alpha: cfg.alpha,
            theta: cfg.theta,
            mask: cfg.mask.weights().to_vec(),
            coeffs,
        };
        let generators = if cfg.reseed {
            let cache = (0..cfg.nodes)
                .map(|i| build_cache(&wiring, &seeds, i))
                .collect::<Result<_>>()?;
            Generators::Reseeded(cache)
        } else {
            // Seeded once at construction, then free-running across nodes,
            // samples and reservoir resets.
            let gens = (0..Role::count(cfg.order))
                .map(|r| {
                    let role = role_at(r);
                    Lfsr::maximal16(seeds.seed(0, role)?)
                })
                .collect::<Result<_>>()?;
            Generators::FreeRunning(gens)
        };
        Ok(StochasticNode {
            wiring,
            seeds,
            generators,
        })
    }

    pub fn coeffs(&self) -> &BernsteinCoeffs {
        &self.wiring.coeffs
    }

    pub fn seeds(&self) -> &SeedTable {
        &self.seeds
    }

    pub fn stream_len(&self) -> usize {
        self.wiring.len
    }

    pub fn copy_delay(&self) -> usize {
        self.wiring.delay
    }

    pub fn reseeding(&self) -> bool {
        matches!(self.generators, Generators::Reseeded(_))
    }

    /// Streams for node `i` produced by registers freshly loaded with the
    /// node's seeds, bypassing the cache.
    pub fn reseeded_streams(&self, i: usize, u: f64, delayed: f64) -> Result<NodeStreams> {
        let mut src = Reseeder {
            seeds: &self.seeds,
            node: i,
            current: None,
        };
        self.wiring.streams(i, u, delayed, &mut src)
    }

    /// Streams the engine feeds node `i`; free-running generators advance.
    pub fn streams(&mut self, i: usize, u: f64, delayed: f64) -> Result<NodeStreams> {
        match &mut self.generators {
            Generators::Reseeded(cache) => {
                let (input, feedback) = cached_streams(&cache[i], u, delayed)?;
                Ok(NodeStreams {
                    input,
                    feedback,
                    ..cache[i].template.clone()
                })
            }
            Generators::FreeRunning(gens) => self.wiring.streams(i, u, delayed, gens),
        }
    }
}

/// Input and feedback streams rebuilt from the cached register states.
fn cached_streams(c: &NodeCache, u: f64, delayed: f64) -> Result<(BitStream, BitStream)> {
    let reference = Lfsr::maximal16(1)?;
    let ut = reference.bipolar_threshold(BipolarValue::new(u)?.get());
    let pt = reference.unipolar_threshold(ProbValue::new(delayed)?.get());
    let input = BitStream::from_fn(c.input_states.len(), |t| c.input_states[t] <= ut)?;
    let feedback = BitStream::from_fn(c.feedback_states.len(), |t| c.feedback_states[t] <= pt)?;
    Ok((input, feedback))
}

fn build_cache(wiring: &Wiring, seeds: &SeedTable, i: usize) -> Result<NodeCache> {
    let states = |role: Role| -> Result<Vec<u32>> {
        let mut g = Lfsr::maximal16(seeds.seed(i, role)?)?;
        Ok((0..wiring.extended).map(|_| g.step()).collect())
    };
    let mut src = Reseeder {
        seeds,
        node: i,
        current: None,
    };
    Ok(NodeCache {
        input_states: states(Role::Input)?,
        feedback_states: states(Role::Feedback)?,
        template: wiring.streams(i, 0.0, 0.0, &mut src)?,
    })
}

fn role_at(index: usize) -> Role {
    match index {
        0 => Role::Input,
        1 => Role::Weight,
        2 => Role::Bias,
        3 => Role::HalfSelect,
        4 => Role::AlphaSelect,
        5 => Role::Feedback,
        k => Role::Coefficient(k - 6),
    }
}

impl NodeEngine for StochasticNode {
    fn node(&mut self, index: usize, u: f64, delayed: f64) -> Result<f64> {
        let delay = self.wiring.delay;
        let out = match &self.generators {
            Generators::Reseeded(cache) => {
                let c = &cache[index];
                let (input, feedback) = cached_streams(c, u, delayed)?;
                output(&c.template, &input, &feedback, delay)?
            }
            Generators::FreeRunning(_) => self.streams(index, u, delayed)?.output(delay)?,
        };
        Ok(s2b_unipolar(&out).get())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reservoir::{EngineKind, FloatActivation, FloatNode, Tdr};

    fn cfg(nodes: usize, len: usize, reseed: bool) -> TdrConfig {
        let mut c = TdrConfig::new(nodes, 77).with_engine(EngineKind::Stochastic);
        c.stream_len = len;
        c.reseed = reseed;
        c
    }

    #[test]
    fn cache_matches_literal_reseeding() {
        let mut node = StochasticNode::new(&cfg(6, 100, true)).unwrap();
        for (k, &(u, d)) in [(-1.0, 0.0), (0.3, 0.25), (1.0, 1.0), (-0.42, 0.7)].iter().enumerate() {
            let i = k % 6;
            let cached = node.streams(i, u, d).unwrap();
            let literal = node.reseeded_streams(i, u, d).unwrap();
            assert_eq!(cached, literal);
        }
    }

    #[test]
    fn zero_alpha_zero_state_is_exactly_zero() {
        for reseed in [true, false] {
            let mut c = cfg(10, 64, reseed);
            c.alpha = 0.0;
            let mut tdr = Tdr::new(c.nodes, StochasticNode::new(&c).unwrap());
            for t in 0..30 {
                let u = (t as f64 * 0.9).sin();
                assert!(tdr.step(u).unwrap().iter().all(|&x| x == 0.0));
            }
        }
    }

    #[test]
    fn deterministic_given_seeds() {
        let c = cfg(8, 64, false);
        let run = || {
            let mut tdr = Tdr::new(c.nodes, StochasticNode::new(&c).unwrap());
            (0..20)
                .flat_map(|t| tdr.step((t as f64 * 0.37).sin()).unwrap().to_vec())
                .collect::<Vec<_>>()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn reseeding_repeats_and_free_running_does_not() {
        let mut on = StochasticNode::new(&cfg(4, 64, true)).unwrap();
        let a = on.node(2, 0.3, 0.4).unwrap();
        let b = on.node(2, 0.3, 0.4).unwrap();
        assert_eq!(a, b);

        let mut off = StochasticNode::new(&cfg(4, 64, false)).unwrap();
        let values: Vec<f64> = (0..10).map(|_| off.node(2, 0.3, 0.4).unwrap()).collect();
        assert!(values.windows(2).any(|w| w[0] != w[1]));
    }

    #[test]
    fn tracks_bernstein_expectation_at_long_streams() {
        let len = 4096;
        let tol = 5.0 / (len as f64).sqrt();
        let base = cfg(1, len, true);
        let mut fc = base.clone();
        fc.float_activation = FloatActivation::Bernstein;
        let mut float = FloatNode::new(&fc).unwrap();
        let (u, d) = (0.35, 0.6);
        let expected = float.node(0, u, d).unwrap();
        let mut hits = 0;
        for draw in 0..100u64 {
            let mut c = base.clone();
            c.seed = 1000 + draw;
            c.mask = fc.mask.clone();
            let mut node = StochasticNode::new(&c).unwrap();
            if (node.node(0, u, d).unwrap() - expected).abs() <= tol {
                hits += 1;
            }
        }
        assert!(hits >= 95, "{hits}/100");
    }
}
