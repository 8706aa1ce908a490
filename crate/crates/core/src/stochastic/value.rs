use crate::error::{check_range, Result};

/// Signal value in the bipolar range `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BipolarValue(f64);

/// Probability of a 1-bit, in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ProbValue(f64);

impl BipolarValue {
    pub fn new(q: f64) -> Result<Self> {
        check_range("bipolar value", q, -1.0, 1.0)?;
        Ok(BipolarValue(q))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl ProbValue {
    pub fn new(p: f64) -> Result<Self> {
        check_range("probability", p, 0.0, 1.0)?;
        Ok(ProbValue(p))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// `p = (q + 1) / 2`.
pub fn to_prob(q: BipolarValue) -> ProbValue {
    ProbValue((q.0 + 1.0) / 2.0)
}

/// `q = 2p - 1`.
pub fn from_prob(p: ProbValue) -> BipolarValue {
    BipolarValue(2.0 * p.0 - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn worked_mapping() {
        assert_eq!(to_prob(BipolarValue::new(-0.5).unwrap()).get(), 0.25);
        assert_eq!(to_prob(BipolarValue::new(0.0).unwrap()).get(), 0.5);
        assert_eq!(to_prob(BipolarValue::new(1.0).unwrap()).get(), 1.0);
        assert_eq!(from_prob(ProbValue::new(0.25).unwrap()).get(), -0.5);
        assert_eq!(from_prob(ProbValue::new(0.5).unwrap()).get(), 0.0);
        assert_eq!(from_prob(ProbValue::new(0.0).unwrap()).get(), -1.0);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(BipolarValue::new(1.0001).is_err());
        assert!(BipolarValue::new(f64::NAN).is_err());
        assert!(ProbValue::new(-1e-9).is_err());
    }

    proptest! {
        #[test]
        fn round_trip(p in 0.0f64..=1.0) {
            let back = to_prob(from_prob(ProbValue::new(p).unwrap())).get();
            prop_assert!((back - p).abs() <= f64::EPSILON);
        }
    }
}
