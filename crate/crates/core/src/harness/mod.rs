//! Batch experiments: sweep specs, seeded trials, and report files.

mod evaluate;
mod report;
mod run;
mod spec;

pub use evaluate::{evaluate_task, score_states, ModelConfig, TaskScore};
pub use report::{
    board_infeasible, emit_report, gnuplot_data, manifest, records_csv, summary_table, trials_csv,
    RECORD_COLUMNS,
};
pub use run::{mean_std, run_experiment, run_metrics_grid, sort_records, RunRecord};
pub use spec::{Cell, ExperimentSpec, Workload};
