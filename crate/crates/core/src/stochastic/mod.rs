//! Stochastic-logic primitives: value encodings, LFSR generators, per-node
//! seed tables and gate-level bit-stream arithmetic.
//!
//! Every operation is a pure function of its inputs and generator states, so
//! identical seeds give bit-identical streams.

mod lfsr;
mod seeds;
mod stream;
mod value;

pub use lfsr::{Lfsr, MAXIMAL_TAPS_16};
pub use seeds::{splitmix64, Role, SeedTable};
pub use stream::{
    b2s, b2s_unipolar, delayed_copies, s2b_bipolar, s2b_unipolar, sc_bernstein, sc_mul, sc_mux,
    sc_neg, transition_density, BitStream,
};
pub use value::{from_prob, to_prob, BipolarValue, ProbValue};
