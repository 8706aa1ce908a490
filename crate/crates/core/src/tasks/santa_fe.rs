use std::path::Path;

use super::{scale_inputs, TaskDataset, TaskKind};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SantaFeParams {
    pub washout: usize,
    pub train: usize,
    pub test: usize,
}

impl Default for SantaFeParams {
    fn default() -> Self {
        SantaFeParams {
            washout: 50,
            train: 9000,
            test: 1000,
        }
    }
}

/// One sample per line; blank lines and `#` comments are skipped.
pub fn parse_santa_fe(text: &str) -> Result<Vec<f64>> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(i, l)| {
            l.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Dataset(format!("line {}: bad sample {l:?}", i + 1)))
        })
        .collect()
}

/// One-step-ahead prediction: input `x(t)`, target `x(t+1)`. The first
/// `train` samples train the readout (the first `washout` of them only warm
/// up the reservoir); inputs are scaled to `[0, 1]` on the training split.
pub fn load_santa_fe(path: &Path, params: &SantaFeParams) -> Result<TaskDataset> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    from_samples(parse_santa_fe(&text)?, params)
}

pub(crate) fn from_samples(raw: Vec<f64>, params: &SantaFeParams) -> Result<TaskDataset> {
    let need = params.train + params.test + 1;
    if raw.len() < need {
        return Err(Error::Dataset(format!(
            "Santa Fe series has {} samples, need {need}",
            raw.len()
        )));
    }
    if params.washout >= params.train {
        return Err(Error::Config("washout must be shorter than the training split".into()));
    }
    let inputs = raw[..need - 1].to_vec();
    let targets = raw[1..need].to_vec();
    let ds = TaskDataset::new(TaskKind::SantaFe, inputs, targets, params.washout, params.train)?;
    if ds.train_targets().iter().all(|&y| y == ds.train_targets()[0]) {
        return Err(Error::Dataset("Santa Fe training targets are constant".into()));
    }
    scale_inputs(ds, 0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_reject() {
        assert_eq!(parse_santa_fe("# laser\n86\n\n141\n 95 \n").unwrap(), vec![86.0, 141.0, 95.0]);
        assert!(parse_santa_fe("1\nabc\n").is_err());
    }

    #[test]
    fn constant_and_short_series_fail() {
        assert!(from_samples(vec![5.0; 10_001], &SantaFeParams::default()).is_err());
        assert!(from_samples((0..10_000).map(f64::from).collect(), &SantaFeParams::default()).is_err());
    }

    #[test]
    fn ramp_scales_train_to_unit_interval() {
        let d = from_samples((0..10_001).map(f64::from).collect(), &SantaFeParams::default()).unwrap();
        let s = d.scaled_inputs();
        assert_eq!(s[0], 0.0);
        assert_eq!(s[8999], 1.0);
        assert!(s[9000..].iter().all(|&x| x == 1.0));
        for t in [0usize, 17, 4000, 9999] {
            assert_eq!(d.targets[t], d.inputs[t] + 1.0);
        }
    }

    #[test]
    fn missing_file_is_io_error() {
        let e = load_santa_fe(Path::new("/nonexistent/santafe.dat"), &SantaFeParams::default()).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }
}
