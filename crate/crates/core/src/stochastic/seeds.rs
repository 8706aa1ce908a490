use std::collections::HashSet;

use crate::error::{Error, Result};

/// One step of the SplitMix64 generator, used as a seed-derivation hash.
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generator roles inside one node evaluation. Each role owns its own LFSR so
/// the streams it produces are independent of every other role's.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Input,
    Weight,
    Bias,
    HalfSelect,
    AlphaSelect,
    Feedback,
    Coefficient(usize),
}

impl Role {
    const FIXED: usize = 6;

    pub fn index(self) -> usize {
        match self {
            Role::Input => 0,
            Role::Weight => 1,
            Role::Bias => 2,
            Role::HalfSelect => 3,
            Role::AlphaSelect => 4,
            Role::Feedback => 5,
            Role::Coefficient(k) => Self::FIXED + k,
        }
    }

    /// Number of roles needed for a Bernstein unit of order `n`.
    pub fn count(order: usize) -> usize {
        Self::FIXED + order + 1
    }
}

/// Nonzero, pairwise-distinct 16-bit seeds for every `(node, role)` pair,
/// derived from a master seed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedTable {
    master: u64,
    nodes: usize,
    roles: usize,
    seeds: Vec<u16>,
}

impl SeedTable {
    pub fn new(master: u64, nodes: usize, roles: usize) -> Result<Self> {
        let total = nodes
            .checked_mul(roles)
            .filter(|&t| t < u16::MAX as usize)
            .ok_or_else(|| {
                Error::Config(format!(
                    "{nodes} nodes x {roles} roles exceeds the 16-bit seed space"
                ))
            })?;
        let mut used = HashSet::with_capacity(total);
        let mut seeds = Vec::with_capacity(total);
        for node in 0..nodes {
            for role in 0..roles {
                let mut h = splitmix64(master ^ splitmix64(((node as u64) << 20) | role as u64));
                loop {
                    let candidate = (h & 0xFFFF) as u16;
                    if candidate != 0 && used.insert(candidate) {
                        seeds.push(candidate);
                        break;
                    }
                    h = splitmix64(h);
                }
            }
        }
        Ok(SeedTable {
            master,
            nodes,
            roles,
            seeds,
        })
    }

    pub fn master(&self) -> u64 {
        self.master
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn roles(&self) -> usize {
        self.roles
    }

    pub fn seed(&self, node: usize, role: Role) -> Result<u16> {
        let r = role.index();
        if node >= self.nodes || r >= self.roles {
            return Err(Error::Config(format!(
                "no seed for node {node}, role {role:?} (table is {} x {})",
                self.nodes, self.roles
            )));
        }
        Ok(self.seeds[node * self.roles + r])
    }
}
