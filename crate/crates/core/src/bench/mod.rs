//! Data handling and the benchmark protocol.

mod csv_io;
mod dataset;
mod experiment;
mod metrics;
mod normalize;
mod report;
mod split;
mod synth;

pub use csv_io::{load_csv, write_csv, ColumnRef, CsvOptions};
pub use dataset::Dataset;
pub use experiment::{
    assemble_report, evaluate_fold, run_experiment, run_experiment_on, train_fold, DataSource, ExperimentConfig, FoldRun,
    Mode, Setting, TrainedFold,
    CONFIG_KEYS,
};
pub use metrics::{mean_std, nrmse};
pub use normalize::{normalize_features, MinMaxScaler};
pub use report::{parse_run_nrmse, RunRecord, RunReport, RunTraces, RUNS_HEADER};
pub use split::{kfold_split, label_split, Fold};
pub use synth::{synth_generate, synth_means, synth_stds, synth_target, SYNTH_DEFAULT_N, SYNTH_DIM};
