use super::{ActivationSpec, FixedPointValue};
use crate::error::{Error, Result};

/// Piecewise-linear table over the fixed-point input range `[0, 127/128]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PwlTable {
    points: Vec<(FixedPointValue, FixedPointValue)>,
}

/// Uniform breakpoints with `g` quantized to Q1.7 at each one.
pub fn build_pwl(spec: &ActivationSpec, segments: usize) -> Result<PwlTable> {
    if !(2..=127).contains(&segments) {
        return Err(Error::InvalidArgument(format!(
            "PWL segment count must be in 2..=127, got {segments}"
        )));
    }
    let points = (0..=segments)
        .map(|k| {
            let raw = ((127 * k) as f64 / segments as f64).round() as i8;
            let s = FixedPointValue::from_raw(raw);
            (s, FixedPointValue::from_f64(spec.eval(s.to_f64())))
        })
        .collect();
    PwlTable::new(points)
}

impl PwlTable {
    pub fn new(points: Vec<(FixedPointValue, FixedPointValue)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidArgument("PWL table needs two breakpoints".into()));
        }
        if points.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidArgument(
                "PWL breakpoints must be strictly increasing".into(),
            ));
        }
        Ok(PwlTable { points })
    }

    pub fn points(&self) -> &[(FixedPointValue, FixedPointValue)] {
        &self.points
    }

    pub fn segments(&self) -> usize {
        self.points.len() - 1
    }

    fn segment_for(&self, raw: i8) -> usize {
        self.points
            .windows(2)
            .position(|w| raw <= w[1].0.raw())
            .unwrap_or(self.points.len() - 2)
    }

    /// Integer interpolation; inputs outside the table clamp to its ends.
    pub fn eval_fixed(&self, s: FixedPointValue) -> FixedPointValue {
        let first = self.points[0];
        let last = self.points[self.points.len() - 1];
        if s <= first.0 {
            return first.1;
        }
        if s >= last.0 {
            return last.1;
        }
        let k = self.segment_for(s.raw());
        let (s0, g0) = self.points[k];
        let (s1, g1) = self.points[k + 1];
        let num = (i32::from(g1.raw()) - i32::from(g0.raw())) * (i32::from(s.raw()) - i32::from(s0.raw()));
        let den = i32::from(s1.raw()) - i32::from(s0.raw());
        let step = (2 * num.abs() + den) / (2 * den);
        let step = if num < 0 { -step } else { step };
        FixedPointValue::from_raw((i32::from(g0.raw()) + step).clamp(-128, 127) as i8)
    }

    /// Real-valued interpolation through the quantized breakpoints.
    pub fn eval_real(&self, s: f64) -> f64 {
        let first = self.points[0];
        let last = self.points[self.points.len() - 1];
        if s <= first.0.to_f64() {
            return first.1.to_f64();
        }
        if s >= last.0.to_f64() {
            return last.1.to_f64();
        }
        let k = self
            .points
            .windows(2)
            .position(|w| s <= w[1].0.to_f64())
            .expect("s inside table");
        let (s0, g0) = (self.points[k].0.to_f64(), self.points[k].1.to_f64());
        let (s1, g1) = (self.points[k + 1].0.to_f64(), self.points[k + 1].1.to_f64());
        g0 + (g1 - g0) * (s - s0) / (s1 - s0)
    }

    /// `s_raw g_raw` per line.
    pub fn to_text(&self) -> String {
        self.points
            .iter()
            .map(|(s, g)| format!("{} {}\n", s.raw(), g.raw()))
            .collect()
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let parse = |tok: Option<&str>, line: &str| -> Result<i8> {
            tok.and_then(|t| t.parse::<i8>().ok())
                .ok_or_else(|| Error::InvalidArgument(format!("bad PWL line {line:?}")))
        };
        let points = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| {
                let mut it = l.split_whitespace();
                let s = parse(it.next(), l)?;
                let g = parse(it.next(), l)?;
                Ok((FixedPointValue::from_raw(s), FixedPointValue::from_raw(g)))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(points)
    }
}
