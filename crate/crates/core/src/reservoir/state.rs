use std::collections::VecDeque;

use crate::error::{check_range, Result};

/// Computes one virtual node from the held input and the delayed state.
pub trait NodeEngine {
    fn node(&mut self, index: usize, u: f64, delayed: f64) -> Result<f64>;
}

/// Delay line of `tau = N + 1` node values plus a global tick counter.
#[derive(Debug, Clone, PartialEq)]
pub struct TdrState {
    delay_line: VecDeque<f64>,
    tick: u64,
}

impl TdrState {
    pub fn new(tau: usize) -> Self {
        TdrState {
            delay_line: VecDeque::from(vec![0.0; tau]),
            tick: 0,
        }
    }

    pub fn tau(&self) -> usize {
        self.delay_line.len()
    }

    pub fn tick(&self) -> u64 {
        self.tick
    }

    /// Value written `tau` ticks ago.
    pub fn delayed(&self) -> f64 {
        self.delay_line[0]
    }

    pub fn push(&mut self, x: f64) {
        self.delay_line.pop_front();
        self.delay_line.push_back(x);
        self.tick += 1;
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.delay_line.iter().copied()
    }
}

/// A time-delay reservoir: the delay line plus a node engine.
#[derive(Debug, Clone)]
pub struct Tdr<E> {
    nodes: usize,
    state: TdrState,
    engine: E,
    output: Vec<f64>,
}

impl<E: NodeEngine> Tdr<E> {
    pub fn new(nodes: usize, engine: E) -> Self {
        Tdr {
            nodes,
            state: TdrState::new(nodes + 1),
            engine,
            output: vec![0.0; nodes],
        }
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn state(&self) -> &TdrState {
        &self.state
    }

    pub fn engine(&self) -> &E {
        &self.engine
    }

    pub fn reset_state(&mut self) {
        self.state = TdrState::new(self.nodes + 1);
        self.output.iter_mut().for_each(|x| *x = 0.0);
    }

    /// Sample-and-hold `u` for `N` ticks and return the `N` new node values.
    pub fn step(&mut self, u: f64) -> Result<&[f64]> {
        check_range("reservoir input", u, -1.0, 1.0)?;
        for i in 0..self.nodes {
            let x = self.engine.node(i, u, self.state.delayed())?;
            self.state.push(x);
            self.output[i] = x;
        }
        Ok(&self.output)
    }
}
