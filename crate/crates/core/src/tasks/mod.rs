//! Benchmark datasets: NARMA10, sine/square discrimination, the Santa Fe
//! laser series and non-linear channel equalization.
//!
//! A dataset is one continuous series. Rows `0..washout` only warm up the
//! reservoir, `washout..train_end` train the readout and the rest is the
//! test split.

mod narma;
mod nce;
mod santa_fe;
mod sine_square;

use std::fmt;
use std::io::Write;
use std::str::FromStr;

pub use narma::{gen_narma10, narma10_series, Narma10Params};
pub use nce::{gen_nce, nce_channel, nce_nonlinearity, NceParams, NCE_TAPS};
pub use santa_fe::{load_santa_fe, parse_santa_fe, SantaFeParams};
pub use sine_square::{gen_sine_square, SineSquareParams};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TaskKind {
    Narma10,
    SineSquare,
    SantaFe,
    Nce,
}

impl TaskKind {
    pub fn name(self) -> &'static str {
        match self {
            TaskKind::Narma10 => "narma10",
            TaskKind::SineSquare => "sine-square",
            TaskKind::SantaFe => "santa-fe",
            TaskKind::Nce => "nce",
        }
    }

    /// Score reported for the task.
    pub fn metric(self) -> &'static str {
        match self {
            TaskKind::Narma10 | TaskKind::SantaFe => "nmse",
            TaskKind::SineSquare => "classification_error",
            TaskKind::Nce => "ser",
        }
    }
}

impl fmt::Display for TaskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TaskKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "narma10" => Ok(TaskKind::Narma10),
            "sine-square" => Ok(TaskKind::SineSquare),
            "santa-fe" => Ok(TaskKind::SantaFe),
            "nce" => Ok(TaskKind::Nce),
            other => Err(Error::Config(format!("unknown task {other:?}"))),
        }
    }
}

/// Affine input map `y = scale * x + offset`, clamped to `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaling {
    pub scale: f64,
    pub offset: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Scaling {
    pub const IDENTITY: Scaling = Scaling {
        scale: 1.0,
        offset: 0.0,
        lo: -1.0,
        hi: 1.0,
    };

    /// Map `[min, max]` onto `[lo, hi]`.
    pub fn fit(min: f64, max: f64, lo: f64, hi: f64) -> Result<Self> {
        if !(max > min) || !min.is_finite() || !max.is_finite() {
            return Err(Error::Dataset(format!(
                "cannot scale constant or non-finite training inputs [{min}, {max}]"
            )));
        }
        if !(hi > lo) {
            return Err(Error::InvalidArgument(format!("empty target range [{lo}, {hi}]")));
        }
        let scale = (hi - lo) / (max - min);
        Ok(Scaling {
            scale,
            offset: lo - scale * min,
            lo,
            hi,
        })
    }

    pub fn apply(&self, x: f64) -> f64 {
        (self.scale * x + self.offset).clamp(self.lo, self.hi)
    }

    pub fn invert(&self, y: f64) -> f64 {
        (y - self.offset) / self.scale
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaskDataset {
    pub kind: TaskKind,
    /// Raw series before scaling.
    pub inputs: Vec<f64>,
    pub targets: Vec<f64>,
    pub washout: usize,
    pub train_end: usize,
    pub scaling: Scaling,
    /// Generator parameters, in insertion order.
    pub params: Vec<(String, String)>,
}

impl TaskDataset {
    pub(crate) fn new(
        kind: TaskKind,
        inputs: Vec<f64>,
        targets: Vec<f64>,
        washout: usize,
        train_end: usize,
    ) -> Result<Self> {
        if inputs.len() != targets.len() {
            return Err(Error::LengthMismatch {
                what: "task targets",
                expected: inputs.len(),
                actual: targets.len(),
            });
        }
        if !(washout < train_end && train_end < inputs.len()) {
            return Err(Error::Dataset(format!(
                "split {washout}/{train_end}/{} leaves an empty segment",
                inputs.len()
            )));
        }
        Ok(TaskDataset {
            kind,
            inputs,
            targets,
            washout,
            train_end,
            scaling: Scaling::IDENTITY,
            params: Vec::new(),
        })
    }

    pub(crate) fn param(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    pub fn scaled_inputs(&self) -> Vec<f64> {
        self.inputs.iter().map(|&x| self.scaling.apply(x)).collect()
    }

    pub fn train_targets(&self) -> &[f64] {
        &self.targets[self.washout..self.train_end]
    }

    pub fn test_targets(&self) -> &[f64] {
        &self.targets[self.train_end..]
    }

    pub fn split_of(&self, index: usize) -> &'static str {
        if index < self.washout {
            "washout"
        } else if index < self.train_end {
            "train"
        } else {
            "test"
        }
    }

    /// Generator parameters and the input map as `key=value` lines.
    pub fn manifest(&self) -> String {
        let mut out = format!("task={}\n", self.kind);
        for (k, v) in &self.params {
            out.push_str(&format!("{k}={v}\n"));
        }
        out.push_str(&format!(
            "length={}\nwashout={}\ntrain_end={}\nscale={:?}\noffset={:?}\nrange={:?},{:?}\n",
            self.len(),
            self.washout,
            self.train_end,
            self.scaling.scale,
            self.scaling.offset,
            self.scaling.lo,
            self.scaling.hi
        ));
        out
    }

    /// CSV with columns `index,raw_input,scaled_input,target,split`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["index", "raw_input", "scaled_input", "target", "split"])?;
        for (i, (&x, &y)) in self.inputs.iter().zip(&self.targets).enumerate() {
            w.write_record([
                i.to_string(),
                format!("{x:?}"),
                format!("{:?}", self.scaling.apply(x)),
                format!("{y:?}"),
                self.split_of(i).to_string(),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }
}

/// Fit the min/max map onto `[lo, hi]` on rows `0..train_end` and attach it.
/// Test inputs outside the training range are clamped to the bounds.
pub fn scale_inputs(mut ds: TaskDataset, lo: f64, hi: f64) -> Result<TaskDataset> {
    let train = &ds.inputs[..ds.train_end];
    let min = train.iter().copied().fold(f64::INFINITY, f64::min);
    let max = train.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    ds.scaling = Scaling::fit(min, max, lo, hi)?;
    Ok(ds)
}

/// Divide by the largest training magnitude so inputs land in `[-1, 1]`.
pub fn scale_inputs_symmetric(mut ds: TaskDataset) -> Result<TaskDataset> {
    let m = ds.inputs[..ds.train_end].iter().fold(0.0f64, |a, x| a.max(x.abs()));
    ds.scaling = Scaling::fit(-m, m, -1.0, 1.0)?;
    Ok(ds)
}
