//! Linear readout training, task scores and reservoir-quality metrics.

mod quality;
mod rank;
mod ridge;
mod scores;

pub use quality::{
    average_rank, generalization_rank, kernel_quality, quality_metrics, write_metrics_csv,
    MetricsConfig, MetricsRow, QualityScores,
};
pub use rank::{numerical_rank, DEFAULT_RANK_TOL};
pub use ridge::{predict, train_readout, ReadoutModel, DEFAULT_RIDGE};
pub use scores::{classification_error, decode_symbol, nmse, ser, SYMBOLS};
