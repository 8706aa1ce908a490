//! Simulator for a time-delay reservoir built from stochastic logic.
//!
//! Three engines share one wiring diagram: a floating-point reference, a
//! bit-exact stochastic bit-stream engine driven by 16-bit LFSRs, and an
//! 8-bit saturating fixed-point engine. Around them sit the readout trainer,
//! kernel-quality / generalization-rank metrics, the four benchmark tasks and
//! a batch experiment harness.

pub mod activation;
pub mod error;
pub mod harness;
pub mod readout;
pub mod reservoir;
pub mod stochastic;
pub mod tasks;

pub use error::{Error, Result};
