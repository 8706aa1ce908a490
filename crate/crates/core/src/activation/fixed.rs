//! Q1.7 signed fixed point: `raw / 128` with `raw` in `[-128, 127]`.
//! All arithmetic saturates.

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FixedPointValue(i8);

impl FixedPointValue {
    pub const ZERO: Self = FixedPointValue(0);
    pub const HALF: Self = FixedPointValue(64);
    pub const MAX: Self = FixedPointValue(i8::MAX);
    pub const MIN: Self = FixedPointValue(i8::MIN);

    pub const fn from_raw(raw: i8) -> Self {
        FixedPointValue(raw)
    }

    pub const fn raw(self) -> i8 {
        self.0
    }

    /// Nearest representable value (ties away from zero), saturating.
    pub fn from_f64(x: f64) -> Self {
        if x.is_nan() {
            return Self::ZERO;
        }
        FixedPointValue(saturate((x * 128.0).round() as i32))
    }

    pub fn to_f64(self) -> f64 {
        f64::from(self.0) / 128.0
    }
}

#[inline]
fn saturate(v: i32) -> i8 {
    v.clamp(i32::from(i8::MIN), i32::from(i8::MAX)) as i8
}

pub fn fx_add(a: FixedPointValue, b: FixedPointValue) -> FixedPointValue {
    FixedPointValue(a.0.saturating_add(b.0))
}

pub fn fx_neg(a: FixedPointValue) -> FixedPointValue {
    FixedPointValue(a.0.saturating_neg())
}

/// `(a * b) >> 7`, rounded to nearest with ties away from zero, saturated.
pub fn fx_mul(a: FixedPointValue, b: FixedPointValue) -> FixedPointValue {
    let p = i32::from(a.0) * i32::from(b.0);
    let mag = (p.abs() + 64) >> 7;
    FixedPointValue(saturate(if p < 0 { -mag } else { mag }))
}
