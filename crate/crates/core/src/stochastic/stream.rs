//! Packed Bernoulli bit streams and the gate-level operations on them.

use std::fmt;
use std::str::FromStr;

use super::lfsr::Lfsr;
use super::value::{BipolarValue, ProbValue};
use crate::error::{Error, Result};

/// A finite bit stream of length `L >= 1`, packed 64 ticks per word.
/// Tick `t` lives in bit `t % 64` of word `t / 64`; bits past the end are zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitStream {
    words: Vec<u64>,
    len: usize,
}

impl BitStream {
    pub fn zeros(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::InvalidArgument("bit stream length must be >= 1".into()));
        }
        Ok(BitStream {
            words: vec![0; len.div_ceil(64)],
            len,
        })
    }

    pub fn ones(len: usize) -> Result<Self> {
        let mut s = Self::zeros(len)?;
        s.words.iter_mut().for_each(|w| *w = !0);
        s.clear_tail();
        Ok(s)
    }

    /// Build a stream from a per-tick predicate.
    pub fn from_fn(len: usize, mut bit: impl FnMut(usize) -> bool) -> Result<Self> {
        let mut s = Self::zeros(len)?;
        for (w, chunk) in s.words.iter_mut().enumerate() {
            let base = w * 64;
            let end = (base + 64).min(len);
            let mut acc = 0u64;
            for t in base..end {
                acc |= u64::from(bit(t)) << (t - base);
            }
            *chunk = acc;
        }
        Ok(s)
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        Self::from_fn(bits.len(), |t| bits[t])
    }

    fn from_words(words: Vec<u64>, len: usize) -> Self {
        let mut s = BitStream { words, len };
        s.clear_tail();
        s
    }

    fn clear_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    /// Always false; streams hold at least one bit.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, t: usize) -> bool {
        assert!(t < self.len, "tick {t} out of range for length {}", self.len);
        (self.words[t / 64] >> (t % 64)) & 1 == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |t| self.get(t))
    }

    /// Bits `start .. start + len` as a new stream.
    pub fn window(&self, start: usize, len: usize) -> Result<Self> {
        if len == 0 || start + len > self.len {
            return Err(Error::InvalidArgument(format!(
                "window {start}..{} outside stream of length {}",
                start + len,
                self.len
            )));
        }
        let shift = start % 64;
        let first = start / 64;
        let n_words = len.div_ceil(64);
        let words = (0..n_words)
            .map(|j| {
                let lo = self.words[first + j] >> shift;
                let hi = if shift == 0 {
                    0
                } else {
                    self.words
                        .get(first + j + 1)
                        .map_or(0, |&w| w << (64 - shift))
                };
                lo | hi
            })
            .collect();
        Ok(Self::from_words(words, len))
    }

    fn check_len(&self, other: &BitStream) -> Result<()> {
        if self.len != other.len {
            return Err(Error::LengthMismatch {
                what: "bit streams",
                expected: self.len,
                actual: other.len,
            });
        }
        Ok(())
    }
}

impl fmt::Debug for BitStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitStream({self})")
    }
}

/// ASCII dump, one character per tick in time order.
impl fmt::Display for BitStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitStream {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidArgument(format!(
                    "invalid bit character {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bits(&bits)
    }
}

/// Binary-to-stochastic conversion: bit `t` is 1 iff the generator's bipolar
/// variate at tick `t` is `<= q`.
pub fn b2s(q: BipolarValue, gen: &mut Lfsr, len: usize) -> Result<BitStream> {
    let t = gen.bipolar_threshold(q.get());
    let states = gen.take_states(len);
    BitStream::from_fn(len, |i| states[i] <= t)
}

/// Unipolar conversion: bit `t` is 1 iff the unipolar variate `(r + 1) / 2`
/// is `<= p`. Equivalent to `b2s` on `2p - 1` but without the rounding of the
/// affine map.
pub fn b2s_unipolar(p: ProbValue, gen: &mut Lfsr, len: usize) -> Result<BitStream> {
    let t = gen.unipolar_threshold(p.get());
    let states = gen.take_states(len);
    BitStream::from_fn(len, |i| states[i] <= t)
}

/// Up/down counter result normalised by the stream length: `(ones - zeros) / L`.
pub fn s2b_bipolar(stream: &BitStream) -> BipolarValue {
    let ones = stream.count_ones() as f64;
    let len = stream.len() as f64;
    BipolarValue::new((2.0 * ones - len) / len).expect("ones <= len")
}

pub fn s2b_unipolar(stream: &BitStream) -> ProbValue {
    ProbValue::new(stream.count_ones() as f64 / stream.len() as f64).expect("ones <= len")
}

/// Bipolar multiplication (XNOR).
pub fn sc_mul(a: &BitStream, b: &BitStream) -> Result<BitStream> {
    a.check_len(b)?;
    let words = a.words.iter().zip(&b.words).map(|(x, y)| !(x ^ y)).collect();
    Ok(BitStream::from_words(words, a.len))
}

/// Bipolar negation (inverter).
pub fn sc_neg(a: &BitStream) -> BitStream {
    BitStream::from_words(a.words.iter().map(|w| !w).collect(), a.len)
}

/// Multiplexer: `a` where `sel` is 1, `b` elsewhere.
pub fn sc_mux(sel: &BitStream, a: &BitStream, b: &BitStream) -> Result<BitStream> {
    sel.check_len(a)?;
    sel.check_len(b)?;
    let words = sel
        .words
        .iter()
        .zip(a.words.iter().zip(&b.words))
        .map(|(s, (x, y))| (s & x) | (!s & y))
        .collect();
    Ok(BitStream::from_words(words, sel.len))
}

/// Delayed copies of a stream, as produced by a shift register tapped every
/// `delay` stages.
///
/// `source` is the ongoing stream including `(n - 1) * delay` ticks of
/// history ahead of the evaluation window; each copy has length
/// `source.len() - (n - 1) * delay`. Copy 0 is the most recent window and copy
/// `k` lags it by `k * delay` ticks, so tick `t` of copy `k` is
/// `source[t + (n - 1 - k) * delay]`.
pub fn delayed_copies(source: &BitStream, n: usize, delay: usize) -> Result<Vec<BitStream>> {
    if n == 0 || delay == 0 {
        return Err(Error::InvalidArgument(
            "copy count and delay must be >= 1".into(),
        ));
    }
    let history = (n - 1) * delay;
    if history >= source.len() {
        return Err(Error::InvalidArgument(format!(
            "stream of length {} cannot hold {history} ticks of history",
            source.len()
        )));
    }
    let len = source.len() - history;
    (0..n)
        .map(|k| source.window((n - 1 - k) * delay, len))
        .collect()
}

/// Bernstein-polynomial unit: an adder counts the ones among the `n` argument
/// copies at each tick and the count selects one of the `n + 1` coefficient
/// streams.
pub fn sc_bernstein(copies: &[BitStream], coeffs: &[BitStream]) -> Result<BitStream> {
    let n = copies.len();
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one argument copy".into()));
    }
    if coeffs.len() != n + 1 {
        return Err(Error::LengthMismatch {
            what: "Bernstein coefficient streams",
            expected: n + 1,
            actual: coeffs.len(),
        });
    }
    let len = copies[0].len;
    for s in copies.iter().chain(coeffs) {
        copies[0].check_len(s)?;
    }
    let width = (usize::BITS - n.leading_zeros()) as usize;
    let mut slices = vec![0u64; width];
    let mut words = Vec::with_capacity(copies[0].words.len());
    for w in 0..copies[0].words.len() {
        slices.iter_mut().for_each(|s| *s = 0);
        // Bit-sliced ripple-carry count of the copies at 64 ticks at once.
        for c in copies {
            let mut carry = c.words[w];
            for slice in slices.iter_mut() {
                if carry == 0 {
                    break;
                }
                let sum = *slice ^ carry;
                carry &= *slice;
                *slice = sum;
            }
        }
        let mut out = 0u64;
        for (k, coeff) in coeffs.iter().enumerate() {
            let mut eq = coeff.words[w];
            for (b, slice) in slices.iter().enumerate() {
                eq &= if (k >> b) & 1 == 1 { *slice } else { !*slice };
            }
            out |= eq;
        }
        words.push(out);
    }
    Ok(BitStream::from_words(words, len))
}

/// Fraction of adjacent tick pairs whose bits differ.
pub fn transition_density(a: &BitStream) -> Result<f64> {
    if a.len < 2 {
        return Err(Error::InvalidArgument(
            "transition density needs at least two ticks".into(),
        ));
    }
    let shifted = a.window(1, a.len - 1)?;
    let head = a.window(0, a.len - 1)?;
    let flips: usize = head
        .words
        .iter()
        .zip(&shifted.words)
        .map(|(x, y)| (x ^ y).count_ones() as usize)
        .sum();
    Ok(flips as f64 / (a.len - 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stochastic::to_prob;
    use proptest::prelude::*;

    fn bs(s: &str) -> BitStream {
        s.parse().unwrap()
    }

    fn q(v: f64) -> BipolarValue {
        BipolarValue::new(v).unwrap()
    }

    fn gen(seed: u16) -> Lfsr {
        Lfsr::maximal16(seed).unwrap()
    }

    #[test]
    fn s2b_examples() {
        assert_eq!(s2b_bipolar(&bs("00101000")).get(), -0.5);
        assert_eq!(s2b_bipolar(&bs("11111111")).get(), 1.0);
        assert_eq!(s2b_bipolar(&bs("0101")).get(), 0.0);
        assert_eq!(s2b_unipolar(&bs("00101000")).get(), 0.25);
        assert_eq!(s2b_unipolar(&bs("0000")).get(), 0.0);
        assert_eq!(s2b_unipolar(&bs("0101")).get(), 0.5);
    }

    #[test]
    fn empty_stream_rejected() {
        assert!(BitStream::zeros(0).is_err());
        assert!("".parse::<BitStream>().is_err());
        assert!("01x".parse::<BitStream>().is_err());
    }

    #[test]
    fn ascii_round_trip_across_word_boundary() {
        let text: String = (0..150).map(|i| if i % 3 == 0 { '1' } else { '0' }).collect();
        let s = bs(&text);
        assert_eq!(s.to_string(), text);
        assert_eq!(s.count_ones(), 50);
    }

    #[test]
    fn b2s_endpoints_are_exact() {
        let mut g = gen(321);
        assert_eq!(b2s(q(1.0), &mut g, 1000).unwrap().count_ones(), 1000);
        assert_eq!(b2s(q(-1.0), &mut g, 1000).unwrap().count_ones(), 0);
        let p1 = ProbValue::new(1.0).unwrap();
        let p0 = ProbValue::new(0.0).unwrap();
        assert_eq!(b2s_unipolar(p1, &mut g, 777).unwrap().count_ones(), 777);
        assert_eq!(b2s_unipolar(p0, &mut g, 777).unwrap().count_ones(), 0);
    }

    #[test]
    fn b2s_quarter_probability() {
        let mut g = gen(4242);
        let s = b2s(q(-0.5), &mut g, 65_535).unwrap();
        // A full period visits every state once: exactly floor(0.5 * 2^15) states pass.
        assert_eq!(s.count_ones(), 16_384);
        let frac = s2b_unipolar(&s).get();
        assert!((frac - 0.25).abs() < 1e-4);
    }

    #[test]
    fn b2s_is_deterministic() {
        let a = b2s(q(0.3), &mut gen(55), 4096).unwrap();
        let b = b2s(q(0.3), &mut gen(55), 4096).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn round_trip_concentration() {
        let len = 4096;
        let tol = 5.0 / (len as f64).sqrt();
        for step in 0..=20 {
            let value = -1.0 + 0.1 * step as f64;
            let value = value.clamp(-1.0, 1.0);
            let mut hits = 0;
            for trial in 0..100u16 {
                let mut g = gen(1 + trial * 613 + step as u16 * 7);
                let back = s2b_bipolar(&b2s(q(value), &mut g, len).unwrap()).get();
                if (back - value).abs() <= tol {
                    hits += 1;
                }
            }
            assert!(hits >= 95, "q={value}: {hits}/100");
        }
    }

    #[test]
    fn mul_identities() {
        let b = bs("0110100111010");
        let ones = BitStream::ones(b.len()).unwrap();
        let zeros = BitStream::zeros(b.len()).unwrap();
        assert_eq!(sc_mul(&ones, &b).unwrap(), b);
        assert_eq!(sc_mul(&b, &ones).unwrap(), b);
        assert_eq!(sc_mul(&zeros, &b).unwrap(), sc_neg(&b));
        assert!(sc_mul(&b, &bs("01")).is_err());
    }

    #[test]
    fn mul_statistical() {
        let len = 4096;
        let a = b2s(q(0.5), &mut gen(1111), len).unwrap();
        let b = b2s(q(-0.5), &mut gen(40_000), len).unwrap();
        let out = s2b_bipolar(&sc_mul(&a, &b).unwrap()).get();
        assert!((out + 0.25).abs() <= 0.05, "{out}");
    }

    #[test]
    fn neg_examples() {
        assert_eq!(sc_neg(&bs("0101")), bs("1010"));
        let ones = BitStream::ones(70).unwrap();
        assert_eq!(sc_neg(&ones), BitStream::zeros(70).unwrap());
        let a = bs("110010111");
        assert_eq!(sc_neg(&sc_neg(&a)), a);
        assert_eq!(s2b_bipolar(&sc_neg(&a)).get(), -s2b_bipolar(&a).get());
    }

    #[test]
    fn mux_examples() {
        let a = bs("10110");
        let b = bs("01101");
        assert_eq!(sc_mux(&BitStream::ones(5).unwrap(), &a, &b).unwrap(), a);
        assert_eq!(sc_mux(&BitStream::zeros(5).unwrap(), &a, &b).unwrap(), b);
        assert_eq!(sc_mux(&bs("10101"), &a, &b).unwrap(), bs("11100"));

        let len = 4096;
        let half = b2s_unipolar(ProbValue::new(0.5).unwrap(), &mut gen(9), len).unwrap();
        let out = sc_mux(&half, &BitStream::ones(len).unwrap(), &BitStream::zeros(len).unwrap())
            .unwrap();
        assert!(s2b_bipolar(&out).get().abs() <= 0.05);

        let sel = b2s_unipolar(ProbValue::new(0.6).unwrap(), &mut gen(2024), len).unwrap();
        let a = b2s(q(0.5), &mut gen(31_000), len).unwrap();
        let b = b2s(q(-0.5), &mut gen(17), len).unwrap();
        let v = s2b_bipolar(&sc_mux(&sel, &a, &b).unwrap()).get();
        assert!((v - 0.1).abs() <= 0.05, "{v}");
    }

    /// Exact expectation over every pair of 4-bit streams, each bit an
    /// independent Bernoulli draw.
    fn exhaustive_expectation(
        probs: &[f64],
        f: impl Fn(&[BitStream]) -> BitStream,
    ) -> f64 {
        let k = probs.len();
        let mut total = 0.0;
        for code in 0u32..(1 << (4 * k)) {
            let mut weight = 1.0;
            let streams: Vec<BitStream> = (0..k)
                .map(|i| {
                    let bits: Vec<bool> = (0..4).map(|t| (code >> (4 * i + t)) & 1 == 1).collect();
                    for &b in &bits {
                        weight *= if b { probs[i] } else { 1.0 - probs[i] };
                    }
                    BitStream::from_bits(&bits).unwrap()
                })
                .collect();
            total += weight * s2b_unipolar(&f(&streams)).get();
        }
        total
    }

    #[test]
    fn xnor_algebra_by_enumeration() {
        for &(pa, pb) in &[(0.1, 0.7), (0.5, 0.5), (0.9, 0.2), (0.25, 0.0)] {
            let e = exhaustive_expectation(&[pa, pb], |s| sc_mul(&s[0], &s[1]).unwrap());
            let expected = (2.0 * pa - 1.0) * (2.0 * pb - 1.0);
            assert!(((2.0 * e - 1.0) - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn mux_algebra_by_enumeration() {
        for &(ps, pa, pb) in &[(0.6, 0.75, 0.25), (0.1, 0.3, 0.9), (0.5, 1.0, 0.0)] {
            let e = exhaustive_expectation(&[ps, pa, pb], |s| sc_mux(&s[0], &s[1], &s[2]).unwrap());
            assert!((e - (ps * pa + (1.0 - ps) * pb)).abs() < 1e-12);
        }
    }

    #[test]
    fn delayed_copy_shapes() {
        let a = bs("1011001110001011");
        let one = delayed_copies(&a, 1, 1).unwrap();
        assert_eq!(one, vec![a.clone()]);

        let copies = delayed_copies(&a, 2, 1).unwrap();
        assert_eq!(copies[0], a.window(1, 15).unwrap());
        assert_eq!(copies[1], a.window(0, 15).unwrap());
        for t in 1..15 {
            assert_eq!(copies[1].get(t), copies[0].get(t - 1));
        }
        assert!(delayed_copies(&a, 17, 1).is_err());
        assert!(delayed_copies(&a, 2, 0).is_err());
    }

    #[test]
    fn delayed_copies_are_decorrelated_at_half() {
        let len = 4096;
        let src = b2s_unipolar(ProbValue::new(0.5).unwrap(), &mut gen(3), len + 1).unwrap();
        let copies = delayed_copies(&src, 2, 1).unwrap();
        let x: Vec<f64> = copies[0].iter().map(f64::from).collect();
        let y: Vec<f64> = copies[1].iter().map(f64::from).collect();
        let n = len as f64;
        let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
        let cov: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum::<f64>() / n;
        let vx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum::<f64>() / n;
        let vy: f64 = y.iter().map(|b| (b - my).powi(2)).sum::<f64>() / n;
        let rho = cov / (vx * vy).sqrt();
        assert!(rho.abs() <= 0.05, "rho = {rho}");
    }

    #[test]
    fn bernstein_selects_by_count() {
        let copies = vec![bs("0111"), bs("0011"), bs("0101")];
        // counts per tick: 0, 2, 2, 3
        let coeffs = vec![bs("1000"), bs("0000"), bs("0100"), bs("0001")];
        assert_eq!(sc_bernstein(&copies, &coeffs).unwrap(), bs("1101"));
        assert!(sc_bernstein(&copies, &coeffs[..3]).is_err());
        assert!(sc_bernstein(&[], &coeffs[..1]).is_err());
    }

    #[test]
    fn bernstein_zero_argument_passes_coefficient_zero() {
        let zeros = BitStream::zeros(300).unwrap();
        let copies = vec![zeros.clone(); 5];
        let coeffs: Vec<BitStream> = (0..6)
            .map(|k| b2s_unipolar(ProbValue::new(0.1 * k as f64 + 0.2).unwrap(), &mut gen(100 + k), 300).unwrap())
            .collect();
        assert_eq!(sc_bernstein(&copies, &coeffs).unwrap(), coeffs[0]);
        let c = coeffs[3].clone();
        let same = vec![c.clone(); 6];
        let arg = b2s_unipolar(ProbValue::new(0.4).unwrap(), &mut gen(7), 300).unwrap();
        let out = sc_bernstein(&vec![arg; 5], &same).unwrap();
        assert_eq!(out, c);
    }

    /// E[out] for beta_k = k/n equals p for independent copies: enumerate all
    /// 2^n count patterns at n = 3.
    #[test]
    fn bernstein_identity_by_enumeration() {
        let n = 3;
        for step in 0..=10 {
            let p = step as f64 / 10.0;
            let mut e = 0.0;
            for pattern in 0u32..(1 << n) {
                let k = pattern.count_ones() as i32;
                let w = p.powi(k) * (1.0 - p).powi(n - k);
                e += w * f64::from(k) / f64::from(n);
            }
            assert!((e - p).abs() < 1e-12);
        }
    }

    #[test]
    fn transition_density_examples() {
        assert_eq!(transition_density(&bs("0101010101")).unwrap(), 1.0);
        assert_eq!(transition_density(&bs("0000011111")).unwrap(), 1.0 / 9.0);
        assert_eq!(transition_density(&BitStream::ones(200).unwrap()).unwrap(), 0.0);
        assert!(transition_density(&bs("1")).is_err());
    }

    proptest! {
        #[test]
        fn window_matches_bitwise(bits in proptest::collection::vec(any::<bool>(), 1..300), start in 0usize..300, len in 1usize..300) {
            let s = BitStream::from_bits(&bits).unwrap();
            if start + len <= bits.len() {
                let w = s.window(start, len).unwrap();
                for t in 0..len {
                    prop_assert_eq!(w.get(t), bits[start + t]);
                }
                prop_assert_eq!(w.count_ones(), bits[start..start + len].iter().filter(|b| **b).count());
            } else {
                prop_assert!(s.window(start, len).is_err());
            }
        }

        #[test]
        fn neg_is_involution_and_mul_by_ones_is_identity(bits in proptest::collection::vec(any::<bool>(), 1..200)) {
            let s = BitStream::from_bits(&bits).unwrap();
            prop_assert_eq!(&sc_neg(&sc_neg(&s)), &s);
            prop_assert_eq!(&sc_mul(&s, &BitStream::ones(bits.len()).unwrap()).unwrap(), &s);
        }

        #[test]
        fn bernstein_matches_scalar_reference(
            rows in proptest::collection::vec(proptest::collection::vec(any::<bool>(), 4), 70..140)
        ) {
            // rows[t] holds 3 copies + ... ; build 3 copies and 4 coefficient streams.
            let len = rows.len();
            let copies: Vec<BitStream> = (0..3).map(|c| BitStream::from_fn(len, |t| rows[t][c]).unwrap()).collect();
            let coeffs: Vec<BitStream> = (0..4).map(|k| BitStream::from_fn(len, |t| rows[(t + k * 5) % len][3]).unwrap()).collect();
            let out = sc_bernstein(&copies, &coeffs).unwrap();
            for t in 0..len {
                let k = (0..3).filter(|&c| copies[c].get(t)).count();
                prop_assert_eq!(out.get(t), coeffs[k].get(t));
            }
        }
    }

    #[test]
    fn to_prob_matches_stream_fraction() {
        let mut g = gen(5150);
        let s = b2s(q(0.2), &mut g, 65_535).unwrap();
        let expected = to_prob(q(0.2)).get();
        assert!((s2b_unipolar(&s).get() - expected).abs() < 1e-4);
    }
}
