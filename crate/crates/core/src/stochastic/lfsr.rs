//! Fibonacci linear feedback shift register.
//!
//! The register shifts right each step; the parity of the tapped bits enters
//! at the most significant position. Tap `t` (1-based, counted from the input
//! end as in the usual polynomial notation `x^16 + x^15 + x^13 + x^4 + 1`)
//! reads register bit `width - t`.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Maximal-length taps for a 16-bit register.
pub const MAXIMAL_TAPS_16: [u32; 4] = [16, 15, 13, 4];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lfsr {
    width: u32,
    tap_mask: u32,
    /// Precomputed state sequence, present for the maximal 16-bit register.
    orbit: Option<&'static Orbit>,
    state: u32,
}

impl Lfsr {
    pub fn new(width: u32, taps: &[u32], seed: u32) -> Result<Self> {
        if !(2..=32).contains(&width) {
            return Err(Error::InvalidArgument(format!("LFSR width {width} not in 2..=32")));
        }
        let mut tap_mask = 0u32;
        for &t in taps {
            if t == 0 || t > width {
                return Err(Error::InvalidArgument(format!(
                    "tap {t} outside 1..={width}"
                )));
            }
            tap_mask |= 1 << (width - t);
        }
        if tap_mask & 1 == 0 {
            return Err(Error::InvalidArgument(format!(
                "taps must include the register length {width}"
            )));
        }
        let state = seed & Self::mask_for(width);
        if state == 0 {
            return Err(Error::InvalidArgument(
                "LFSR seed must be nonzero within the register width".into(),
            ));
        }
        Ok(Lfsr {
            width,
            tap_mask,
            orbit: None,
            state,
        })
    }

    /// 16-bit register with taps {16, 15, 13, 4} (period 65535).
    pub fn maximal16(seed: u16) -> Result<Self> {
        let mut g = Self::new(16, &MAXIMAL_TAPS_16, u32::from(seed))?;
        g.orbit = Some(orbit16());
        Ok(g)
    }

    /// The next `len` register states, advancing the generator by `len` steps.
    pub fn take_states(&mut self, len: usize) -> Vec<u32> {
        match self.orbit {
            Some(orbit) => {
                let period = orbit.sequence.len();
                let mut pos = orbit.position[self.state as usize] as usize;
                let mut out = Vec::with_capacity(len);
                while out.len() < len {
                    let start = (pos + 1) % period;
                    let take = (len - out.len()).min(period - start);
                    out.extend(orbit.sequence[start..start + take].iter().map(|&s| u32::from(s)));
                    pos = start + take - 1;
                }
                self.state = u32::from(orbit.sequence[pos]);
                out
            }
            None => (0..len).map(|_| self.step()).collect(),
        }
    }

    fn mask_for(width: u32) -> u32 {
        if width == 32 {
            u32::MAX
        } else {
            (1 << width) - 1
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn state(&self) -> u32 {
        self.state
    }

    /// Restore the register to `seed`.
    pub fn reseed(&mut self, seed: u32) -> Result<()> {
        let state = seed & Self::mask_for(self.width);
        if state == 0 {
            return Err(Error::InvalidArgument("LFSR seed must be nonzero".into()));
        }
        self.state = state;
        Ok(())
    }

    /// Advance one step and return the new register value.
    #[inline]
    pub fn step(&mut self) -> u32 {
        let feedback = (self.state & self.tap_mask).count_ones() & 1;
        self.state = (self.state >> 1) | (feedback << (self.width - 1));
        self.state
    }

    /// Advance one step and return the new state mapped onto `[-1, 1)`.
    ///
    /// The map is `r = state / 2^(width-1) - 1`. Since the state is never
    /// zero, `r` never equals -1, and it is always below 1.
    #[inline]
    pub fn next_bipolar(&mut self) -> f64 {
        let s = self.step();
        self.bipolar_of(s)
    }

    /// Advance one step and return the new state mapped onto `(0, 1)` as
    /// `state / 2^width`, which equals `(r + 1) / 2` for the bipolar variate.
    #[inline]
    pub fn next_unipolar(&mut self) -> f64 {
        let s = self.step();
        f64::from(s) / self.scale()
    }

    /// Largest register state whose bipolar variate is `<= q`, or 0 when
    /// none is. Comparing raw states against it reproduces `next_bipolar() <= q`.
    pub fn bipolar_threshold(&self, q: f64) -> u32 {
        self.threshold(q, |s| self.bipolar_of(s))
    }

    /// Largest register state whose unipolar variate is `<= p`, or 0.
    pub fn unipolar_threshold(&self, p: f64) -> u32 {
        self.threshold(p, |s| f64::from(s) / self.scale())
    }

    fn threshold(&self, x: f64, variate: impl Fn(u32) -> f64) -> u32 {
        let max = Self::mask_for(self.width);
        if variate(1) > x {
            return 0;
        }
        if variate(max) <= x {
            return max;
        }
        // variate is increasing in the state: binary search the last state <= x.
        let (mut lo, mut hi) = (1u32, max);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if variate(mid) <= x {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    #[inline]
    fn bipolar_of(&self, state: u32) -> f64 {
        2.0 * f64::from(state) / self.scale() - 1.0
    }

    #[inline]
    fn scale(&self) -> f64 {
        (1u64 << self.width) as f64
    }
}

/// Every state of a maximal register in stepping order, plus the inverse map.
#[derive(Debug, PartialEq, Eq)]
struct Orbit {
    sequence: Vec<u16>,
    position: Vec<u16>,
}

fn orbit16() -> &'static Orbit {
    static ORBIT: OnceLock<Orbit> = OnceLock::new();
    ORBIT.get_or_init(|| {
        let mut g = Lfsr::new(16, &MAXIMAL_TAPS_16, 1).expect("valid taps");
        let mut sequence = Vec::with_capacity(65535);
        let mut position = vec![0u16; 65536];
        for k in 0..65535u16 {
            let s = g.state;
            sequence.push(s as u16);
            position[s as usize] = k;
            g.step();
        }
        Orbit { sequence, position }
    })
}
