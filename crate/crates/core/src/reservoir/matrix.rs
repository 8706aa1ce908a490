use std::io::Write;

use nalgebra::DMatrix;

use super::config::EngineKind;
use crate::error::{Error, Result};

/// Reservoir readings, one row per retained input sample.
#[derive(Debug, Clone, PartialEq)]
pub struct StateMatrix {
    cols: usize,
    data: Vec<f64>,
    engine: EngineKind,
    config_hash: String,
}

impl StateMatrix {
    pub fn with_capacity(cols: usize, rows: usize, engine: EngineKind, config_hash: String) -> Self {
        StateMatrix {
            cols,
            data: Vec::with_capacity(rows * cols),
            engine,
            config_hash,
        }
    }

    /// Append one reading. TDR rows must lie in `[0, 1]`, ESN rows be finite.
    pub fn push_row(&mut self, row: &[f64]) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::LengthMismatch {
                what: "state row",
                expected: self.cols,
                actual: row.len(),
            });
        }
        let bad = match self.engine {
            EngineKind::Esn => row.iter().find(|x| !x.is_finite()),
            _ => row.iter().find(|x| !(0.0..=1.0).contains(*x)),
        };
        if let Some(x) = bad {
            return Err(Error::Numerical(format!("{} state value {x} out of range", self.engine)));
        }
        self.data.extend_from_slice(row);
        Ok(())
    }

    pub fn rows(&self) -> usize {
        if self.cols == 0 {
            0
        } else {
            self.data.len() / self.cols
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn last_row(&self) -> Option<&[f64]> {
        self.rows().checked_sub(1).map(|r| self.row(r))
    }

    pub fn engine(&self) -> EngineKind {
        self.engine
    }

    pub fn config_hash(&self) -> &str {
        &self.config_hash
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.rows(), self.cols, &self.data)
    }

    /// Rows `start..end` as a new matrix with the same metadata.
    pub fn slice_rows(&self, start: usize, end: usize) -> Result<StateMatrix> {
        if start > end || end > self.rows() {
            return Err(Error::InvalidArgument(format!(
                "row range {start}..{end} outside 0..{}",
                self.rows()
            )));
        }
        Ok(StateMatrix {
            cols: self.cols,
            data: self.data[start * self.cols..end * self.cols].to_vec(),
            engine: self.engine,
            config_hash: self.config_hash.clone(),
        })
    }

    /// CSV with header `sample,x_1,..,x_N,engine,config_hash`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["sample".to_string()];
        header.extend((1..=self.cols).map(|i| format!("x_{i}")));
        header.push("engine".into());
        header.push("config_hash".into());
        w.write_record(&header)?;
        for r in 0..self.rows() {
            let mut rec = vec![r.to_string()];
            rec.extend(self.row(r).iter().map(|x| format!("{x:?}")));
            rec.push(self.engine.to_string());
            rec.push(self.config_hash.clone());
            w.write_record(&rec)?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }
}
