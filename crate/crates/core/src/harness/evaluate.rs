use crate::error::Result;
use crate::readout::{classification_error, nmse, predict, ser, train_readout};
use crate::reservoir::{EngineKind, EsnConfig, Reservoir, StateMatrix, TdrConfig};
use crate::tasks::{TaskDataset, TaskKind};

/// A reservoir of any kind, ready to be built for one trial.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelConfig {
    Tdr(TdrConfig),
    Esn(EsnConfig),
}

impl ModelConfig {
    pub fn engine(&self) -> EngineKind {
        match self {
            ModelConfig::Tdr(c) => c.engine,
            ModelConfig::Esn(_) => EngineKind::Esn,
        }
    }

    pub fn nodes(&self) -> usize {
        match self {
            ModelConfig::Tdr(c) => c.nodes,
            ModelConfig::Esn(c) => c.nodes,
        }
    }

    pub fn config_hash(&self) -> String {
        match self {
            ModelConfig::Tdr(c) => c.config_hash(),
            ModelConfig::Esn(c) => c.config_hash(),
        }
    }

    pub fn to_key_values(&self) -> String {
        match self {
            ModelConfig::Tdr(c) => c.to_key_values(),
            ModelConfig::Esn(c) => c.to_key_values(),
        }
    }

    pub fn build(&self) -> Result<Reservoir> {
        match self {
            ModelConfig::Tdr(c) => Reservoir::from_config(c),
            ModelConfig::Esn(c) => Reservoir::from_esn(c),
        }
    }
}

/// Test-split score of a readout trained on the dataset's training split.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskScore {
    pub metric: &'static str,
    pub train: f64,
    pub test: f64,
}

/// Drive the reservoir over the whole scaled series (dropping the washout
/// rows), fit the readout on the training rows and score both splits.
pub fn evaluate_task(ds: &TaskDataset, model: &ModelConfig, ridge: f64) -> Result<TaskScore> {
    let mut res = model.build()?;
    let states = res.run(&ds.scaled_inputs(), ds.washout, &model.config_hash())?;
    score_states(ds, &states, ridge)
}

pub fn score_states(ds: &TaskDataset, states: &StateMatrix, ridge: f64) -> Result<TaskScore> {
    let split = ds.train_end - ds.washout;
    let train = states.slice_rows(0, split)?;
    let test = states.slice_rows(split, states.rows())?;
    let model = train_readout(&train, ds.train_targets(), ridge)?;
    let score = |y: &[f64], m: &StateMatrix| -> Result<f64> {
        let yhat = predict(&model, m)?;
        match ds.kind {
            TaskKind::Narma10 | TaskKind::SantaFe => nmse(y, &yhat),
            TaskKind::SineSquare => classification_error(y, &yhat, 0.0),
            TaskKind::Nce => ser(y, &yhat),
        }
    };
    Ok(TaskScore {
        metric: ds.kind.metric(),
        train: score(ds.train_targets(), &train)?,
        test: score(ds.test_targets(), &test)?,
    })
}
