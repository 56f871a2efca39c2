use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use ndarray::Array1;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use super::csv_io::{load_csv, ColumnRef, CsvOptions};
use super::dataset::Dataset;
use super::metrics::nrmse;
use super::normalize::normalize_features;
use super::report::{RunRecord, RunReport, RunTraces};
use super::split::{kfold_split, label_split, Fold};
use super::synth::{synth_generate, SYNTH_DEFAULT_N};
use crate::admm::{dfcm_run, dicr_run, shard_dataset, AdmmConfig, AgentState, StructureRows, Topology, Trace};
use crate::error::{Error, Result};
use crate::fuzzy::{
    csfr_solve, fcm_fit, fuzzy_sigmas, hidden_matrix, icr_augment, icr_matrix, ridge_solve, Antecedent,
    ConsequentWeights, FcmConfig,
};
use crate::model::FuzzyModel;
use crate::rng::{derive_seed, stream};
use crate::scalar::Real;

/// Which learner is trained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Labeled rows only, for both structure and weights.
    Fr,
    /// Structure from all rows, weights by ridge on labeled rows.
    SSfr,
    /// Structure from all rows, weights with interpolation consistency.
    SfrIcr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Setting {
    Centralized,
    Distributed,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Fr => "fr",
            Mode::SSfr => "ssfr",
            Mode::SfrIcr => "sfr-icr",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fr" => Ok(Mode::Fr),
            "ssfr" | "s-sfr" => Ok(Mode::SSfr),
            "sfr-icr" | "sfricr" => Ok(Mode::SfrIcr),
            other => Err(Error::InvalidConfig(format!("mode: unknown value {other:?}"))),
        }
    }
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Setting::Centralized => "central",
            Setting::Distributed => "distributed",
        })
    }
}

impl FromStr for Setting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "central" | "centralized" => Ok(Setting::Centralized),
            "distributed" | "dist" => Ok(Setting::Distributed),
            other => Err(Error::InvalidConfig(format!("dist: unknown value {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    /// The artificial benchmark, generated from the experiment seed.
    Synthetic { n: usize, noise: bool },
    Csv { path: PathBuf, options: CsvOptions },
}

/// Everything needed to reproduce a benchmark.
///
/// `admm.seed` is ignored: every job derives its own seeds from `seed`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig<T> {
    pub source: DataSource,
    pub mode: Mode,
    pub setting: Setting,
    pub agents: usize,
    pub labeled_count: usize,
    pub folds: usize,
    pub repeats: usize,
    pub admm: AdmmConfig<T>,
    /// Center-shift tolerance and cap of centralized fuzzy c-means.
    pub fcm_tol: T,
    pub fcm_max_iter: usize,
    pub seed: u64,
}

impl<T: Real> Default for ExperimentConfig<T> {
    fn default() -> Self {
        Self {
            source: DataSource::Synthetic {
                n: SYNTH_DEFAULT_N,
                noise: true,
            },
            mode: Mode::SfrIcr,
            setting: Setting::Distributed,
            agents: 5,
            labeled_count: 50,
            folds: 5,
            repeats: 10,
            admm: AdmmConfig::default(),
            fcm_tol: T::of(1e-6),
            fcm_max_iter: 300,
            seed: 0,
        }
    }
}

/// Keys accepted by [`ExperimentConfig::set`], in echo order.
pub const CONFIG_KEYS: &[&str] = &[
    "dataset",
    "synth_n",
    "synth_noise",
    "target_col",
    "has_header",
    "drop_cols",
    "mode",
    "dist",
    "agents",
    "rules",
    "labeled",
    "folds",
    "repeats",
    "alpha",
    "rho_s",
    "rho_p",
    "mu",
    "gamma",
    "eps1",
    "eps2",
    "param_tol",
    "max_iter_structure",
    "max_iter_parameter",
    "m_interp",
    "beta_a",
    "beta_b",
    "freeze_augmentation",
    "fcm_tol",
    "fcm_max_iter",
    "seed",
];

fn parse<V: FromStr>(key: &str, value: &str) -> Result<V> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::InvalidConfig(format!("{key}: cannot parse {value:?}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.trim().to_ascii_lowercase().as_str() {
        "true" | "1" | "yes" | "on" => Ok(true),
        "false" | "0" | "no" | "off" => Ok(false),
        _ => Err(Error::InvalidConfig(format!("{key}: expected a boolean, got {value:?}"))),
    }
}

impl<T: Real> ExperimentConfig<T> {
    fn csv_options(&mut self) -> Result<&mut CsvOptions> {
        match &mut self.source {
            DataSource::Csv { options, .. } => Ok(options),
            DataSource::Synthetic { .. } => Err(Error::InvalidConfig(
                "target_col/has_header/drop_cols need a CSV dataset".into(),
            )),
        }
    }

    /// Applies one `key=value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key {
            "dataset" => {
                self.source = if v.eq_ignore_ascii_case("synthetic") {
                    match self.source {
                        DataSource::Synthetic { .. } => self.source.clone(),
                        _ => DataSource::Synthetic {
                            n: SYNTH_DEFAULT_N,
                            noise: true,
                        },
                    }
                } else {
                    let options = match &self.source {
                        DataSource::Csv { options, .. } => options.clone(),
                        _ => CsvOptions::default(),
                    };
                    DataSource::Csv {
                        path: PathBuf::from(v),
                        options,
                    }
                }
            }
            "synth_n" | "synth_noise" => match &mut self.source {
                DataSource::Synthetic { n, noise } => {
                    if key == "synth_n" {
                        *n = parse(key, v)?;
                    } else {
                        *noise = parse_bool(key, v)?;
                    }
                }
                DataSource::Csv { .. } => {
                    return Err(Error::InvalidConfig(format!("{key} only applies to the synthetic dataset")))
                }
            },
            "target_col" => {
                self.csv_options()?.target = if v.eq_ignore_ascii_case("last") {
                    None
                } else {
                    Some(v.parse().expect("infallible"))
                }
            }
            "has_header" => self.csv_options()?.has_header = parse_bool(key, v)?,
            "drop_cols" => {
                self.csv_options()?.drop = v
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<ColumnRef>().expect("infallible"))
                    .collect()
            }
            "mode" => self.mode = v.parse()?,
            "dist" => self.setting = v.parse()?,
            "agents" => self.agents = parse(key, v)?,
            "rules" => self.admm.rules = parse(key, v)?,
            "labeled" => self.labeled_count = parse(key, v)?,
            "folds" => self.folds = parse(key, v)?,
            "repeats" => self.repeats = parse(key, v)?,
            "alpha" => self.admm.fuzziness = parse(key, v)?,
            "rho_s" => self.admm.rho_s = parse(key, v)?,
            "rho_p" => self.admm.rho_p = parse(key, v)?,
            "mu" => self.admm.mu = parse(key, v)?,
            "gamma" => self.admm.gamma = parse(key, v)?,
            "eps1" => self.admm.eps1 = parse(key, v)?,
            "eps2" => self.admm.eps2 = parse(key, v)?,
            "param_tol" => self.admm.param_tol = parse(key, v)?,
            "max_iter_structure" => self.admm.max_iter_structure = parse(key, v)?,
            "max_iter_parameter" => self.admm.max_iter_parameter = parse(key, v)?,
            "m_interp" => self.admm.m_interp = parse(key, v)?,
            "beta_a" => self.admm.beta_a = parse(key, v)?,
            "beta_b" => self.admm.beta_b = parse(key, v)?,
            "freeze_augmentation" => self.admm.freeze_augmentation = parse_bool(key, v)?,
            "fcm_tol" => self.fcm_tol = parse(key, v)?,
            "fcm_max_iter" => self.fcm_max_iter = parse(key, v)?,
            "seed" => self.seed = parse(key, v)?,
            other => return Err(Error::InvalidConfig(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    /// Applies a flat `key = value` text; blank lines and `#` comments are
    /// ignored.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::InvalidConfig(format!("line {}: expected key=value", i + 1)))?;
            self.set(k.trim(), v)?;
        }
        Ok(())
    }

    /// The fully resolved configuration in [`CONFIG_KEYS`] order.
    pub fn to_pairs(&self) -> Vec<(String, String)> {
        let mut out: Vec<(String, String)> = Vec::new();
        let mut put = |k: &str, v: String| out.push((k.to_string(), v));
        match &self.source {
            DataSource::Synthetic { n, noise } => {
                put("dataset", "synthetic".into());
                put("synth_n", n.to_string());
                put("synth_noise", noise.to_string());
            }
            DataSource::Csv { path, options } => {
                put("dataset", path.display().to_string());
                put(
                    "target_col",
                    options.target.as_ref().map_or("last".into(), |c| c.to_string()),
                );
                put("has_header", options.has_header.to_string());
                let drop: Vec<String> = options.drop.iter().map(|c| c.to_string()).collect();
                put("drop_cols", drop.join(","));
            }
        }
        let a = &self.admm;
        put("mode", self.mode.to_string());
        put("dist", self.setting.to_string());
        put("agents", self.agents.to_string());
        put("rules", a.rules.to_string());
        put("labeled", self.labeled_count.to_string());
        put("folds", self.folds.to_string());
        put("repeats", self.repeats.to_string());
        put("alpha", a.fuzziness.to_string());
        put("rho_s", a.rho_s.to_string());
        put("rho_p", a.rho_p.to_string());
        put("mu", a.mu.to_string());
        put("gamma", a.gamma.to_string());
        put("eps1", a.eps1.to_string());
        put("eps2", a.eps2.to_string());
        put("param_tol", a.param_tol.to_string());
        put("max_iter_structure", a.max_iter_structure.to_string());
        put("max_iter_parameter", a.max_iter_parameter.to_string());
        put("m_interp", a.m_interp.to_string());
        put("beta_a", a.beta_a.to_string());
        put("beta_b", a.beta_b.to_string());
        put("freeze_augmentation", a.freeze_augmentation.to_string());
        put("fcm_tol", self.fcm_tol.to_string());
        put("fcm_max_iter", self.fcm_max_iter.to_string());
        put("seed", self.seed.to_string());
        out
    }

    /// First 16 hex digits of the SHA-256 of the resolved configuration,
    /// seed excluded.
    pub fn config_hash(&self) -> String {
        let mut h = Sha256::new();
        for (k, v) in self.to_pairs() {
            if k != "seed" {
                h.update(format!("{k}={v}\n").as_bytes());
            }
        }
        h.finalize().iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    pub fn validate(&self) -> Result<()> {
        self.admm.validate()?;
        if self.folds < 2 {
            return Err(Error::InvalidConfig(format!("folds: need at least 2, got {}", self.folds)));
        }
        if self.repeats == 0 {
            return Err(Error::InvalidConfig("repeats: must be at least 1".into()));
        }
        if self.labeled_count == 0 {
            return Err(Error::InvalidConfig("labeled: must be at least 1".into()));
        }
        if self.setting == Setting::Distributed {
            if self.agents == 0 {
                return Err(Error::InvalidConfig("agents: must be at least 1".into()));
            }
            if self.labeled_count < self.agents {
                return Err(Error::InvalidConfig(format!(
                    "labeled: {} labeled samples cannot cover {} agents",
                    self.labeled_count, self.agents
                )));
            }
        }
        if !(self.fcm_tol >= T::zero()) {
            return Err(Error::InvalidConfig("fcm_tol: must be >= 0".into()));
        }
        if let DataSource::Synthetic { n, .. } = self.source {
            if n == 0 {
                return Err(Error::InvalidConfig("synth_n: must be at least 1".into()));
            }
        }
        Ok(())
    }

    pub fn load_dataset(&self) -> Result<Dataset<T>> {
        match &self.source {
            DataSource::Synthetic { n, noise } => Ok(synth_generate(*n, *noise, self.seed)),
            DataSource::Csv { path, options } => load_csv(path, options),
        }
    }

    /// Seed of the label mask, shards and model of one `(repeat, fold)` job.
    pub fn job_seed(&self, purpose: u64, repeat: usize, fold: usize) -> u64 {
        derive_seed(self.seed, &[purpose, repeat as u64, fold as u64])
    }

    pub fn fold_seed(&self, repeat: usize) -> u64 {
        derive_seed(self.seed, &[stream::FOLDS, repeat as u64])
    }
}

/// A model trained on one fold together with its convergence record.
#[derive(Debug, Clone)]
pub struct TrainedFold<T> {
    pub model: FuzzyModel<T>,
    pub n_labeled: usize,
    pub n_unlabeled: usize,
    pub structure_iterations: usize,
    pub structure_converged: bool,
    pub parameter_iterations: usize,
    pub parameter_converged: bool,
    /// Present for distributed runs only.
    pub structure_trace: Option<Trace>,
    pub parameter_trace: Option<Trace>,
    pub warnings: Vec<String>,
}

struct Fitted<T> {
    antecedent: Antecedent<T>,
    weights: Array1<T>,
    structure_iterations: usize,
    structure_converged: bool,
    parameter_iterations: usize,
    parameter_converged: bool,
    structure_trace: Option<Trace>,
    parameter_trace: Option<Trace>,
}

fn fit_centralized<T: Real>(train: &Dataset<T>, cfg: &ExperimentConfig<T>, seed: u64) -> Result<Fitted<T>> {
    let a = &cfg.admm;
    let rows = match cfg.mode {
        Mode::Fr => train.labeled_features(),
        Mode::SSfr | Mode::SfrIcr => train.features().to_owned(),
    };
    let fcm = fcm_fit(
        rows.view(),
        &FcmConfig {
            rules: a.rules,
            fuzziness: a.fuzziness,
            tol: cfg.fcm_tol,
            max_iter: cfg.fcm_max_iter,
            seed,
        },
    )?;
    let sigmas = fuzzy_sigmas(rows.view(), &fcm.memberships, fcm.centers.view())?;
    let antecedent = Antecedent::new(fcm.centers, sigmas)?;
    let h = hidden_matrix(train.labeled_features().view(), &antecedent)?;
    let y = train.labeled_targets();
    let weights = match cfg.mode {
        Mode::SfrIcr if a.gamma > T::zero() => {
            let batch = icr_augment(
                train.unlabeled_features().view(),
                a.m_interp,
                a.beta_a,
                a.beta_b,
                derive_seed(seed, &[stream::ICR]),
            )?;
            let b = icr_matrix(&antecedent, &batch)?;
            csfr_solve(h.view(), y.view(), b.view(), a.mu, a.gamma)?
        }
        _ => ridge_solve(h.view(), y.view(), a.mu)?,
    };
    Ok(Fitted {
        antecedent,
        weights,
        structure_iterations: fcm.iterations,
        structure_converged: fcm.converged,
        parameter_iterations: 0,
        parameter_converged: true,
        structure_trace: None,
        parameter_trace: None,
    })
}

fn fit_distributed<T: Real>(
    train: &Dataset<T>,
    cfg: &ExperimentConfig<T>,
    seed: u64,
    shard_seed: u64,
) -> Result<Fitted<T>> {
    let mut admm = cfg.admm.clone();
    admm.seed = seed;
    if cfg.mode != Mode::SfrIcr {
        admm.gamma = T::zero();
    }
    let rows = match cfg.mode {
        Mode::Fr => StructureRows::LabeledOnly,
        Mode::SSfr | Mode::SfrIcr => StructureRows::All,
    };
    let topology = Topology::fully_connected(cfg.agents)?;
    let mut agents = shard_dataset(train, cfg.agents, shard_seed)?
        .into_iter()
        .enumerate()
        .map(|(id, shard)| AgentState::new(id, shard, admm.rules, rows))
        .collect::<Result<Vec<_>>>()?;
    let structure = dfcm_run(&mut agents, &topology, &admm)?;
    let antecedent = structure.global.antecedent()?;
    let params = dicr_run(&mut agents, &topology, &admm, &antecedent)?;
    Ok(Fitted {
        antecedent,
        weights: params.z,
        structure_iterations: structure.trace.iterations(),
        structure_converged: structure.trace.converged,
        parameter_iterations: params.trace.iterations(),
        parameter_converged: params.trace.converged,
        structure_trace: Some(structure.trace),
        parameter_trace: Some(params.trace),
    })
}

/// Trains on the training rows of `fold` only: normalization, label split
/// and both learning phases never see the test rows.
pub fn train_fold<T: Real>(
    cfg: &ExperimentConfig<T>,
    data: &Dataset<T>,
    fold: &Fold,
    repeat: usize,
    fold_index: usize,
) -> Result<TrainedFold<T>> {
    let train = data.select(&fold.train);
    let (train, scaler, mut warnings) = normalize_features(&train)?;
    let train = label_split(&train, cfg.labeled_count, cfg.job_seed(stream::LABELS, repeat, fold_index))?;
    let model_seed = cfg.job_seed(stream::STRUCTURE, repeat, fold_index);
    let fitted = match cfg.setting {
        Setting::Centralized => fit_centralized(&train, cfg, model_seed)?,
        Setting::Distributed => fit_distributed(
            &train,
            cfg,
            model_seed,
            cfg.job_seed(stream::SHARDS, repeat, fold_index),
        )?,
    };
    for t in [&fitted.structure_trace, &fitted.parameter_trace].into_iter().flatten() {
        warnings.extend(t.warning.iter().cloned());
    }
    let weights = ConsequentWeights::new(fitted.weights, fitted.antecedent.rule_count(), fitted.antecedent.dim())?;
    Ok(TrainedFold {
        model: FuzzyModel::new(fitted.antecedent, weights, Some(scaler))?,
        n_labeled: train.labeled_count(),
        n_unlabeled: train.unlabeled_count(),
        structure_iterations: fitted.structure_iterations,
        structure_converged: fitted.structure_converged,
        parameter_iterations: fitted.parameter_iterations,
        parameter_converged: fitted.parameter_converged,
        structure_trace: fitted.structure_trace,
        parameter_trace: fitted.parameter_trace,
        warnings,
    })
}

/// One evaluated `(repeat, fold)` job.
#[derive(Debug, Clone)]
pub struct FoldRun<T> {
    pub record: RunRecord,
    pub traces: RunTraces,
    pub warnings: Vec<String>,
    /// `None` when training failed.
    pub model: Option<FuzzyModel<T>>,
}

/// Trains on `fold` and scores the model on its test rows. Errors end up
/// in the record instead of being returned.
pub fn evaluate_fold<T: Real>(
    cfg: &ExperimentConfig<T>,
    data: &Dataset<T>,
    fold: &Fold,
    repeat: usize,
    fold_index: usize,
) -> FoldRun<T> {
    let mut record = RunRecord {
        repeat,
        fold: fold_index,
        n_train: fold.train.len(),
        n_test: fold.test.len(),
        ..RunRecord::default()
    };
    let mut traces = RunTraces {
        repeat,
        fold: fold_index,
        structure: None,
        parameter: None,
    };
    let start = Instant::now();
    let trained = train_fold(cfg, data, fold, repeat, fold_index);
    record.train_time_s = start.elapsed().as_secs_f64();
    let tag = format!("repeat {repeat} fold {fold_index}");
    let trained = match trained {
        Ok(t) => t,
        Err(e) => {
            record.error = Some(e.to_string());
            return FoldRun {
                record,
                traces,
                warnings: vec![format!("{tag}: {e}")],
                model: None,
            };
        }
    };
    record.n_labeled = trained.n_labeled;
    record.structure_iterations = trained.structure_iterations;
    record.structure_converged = trained.structure_converged;
    record.parameter_iterations = trained.parameter_iterations;
    record.parameter_converged = trained.parameter_converged;
    let test = data.select(&fold.test);
    match trained
        .model
        .predict(test.features())
        .and_then(|p| nrmse(p.view(), test.targets()))
    {
        Ok(v) => record.nrmse = Some(v.to_f64_lossy()),
        Err(e) => record.error = Some(e.to_string()),
    }
    traces.structure = trained.structure_trace;
    traces.parameter = trained.parameter_trace;
    let warnings = trained.warnings.into_iter().map(|w| format!("{tag}: {w}")).collect();
    FoldRun {
        record,
        traces,
        warnings,
        model: Some(trained.model),
    }
}

/// Runs every `repeat x fold` job (in parallel) and assembles the report.
/// Folds are redrawn for every repeat. Failures of single jobs are recorded
/// in the report rather than returned.
pub fn run_experiment<T: Real>(cfg: &ExperimentConfig<T>) -> Result<RunReport> {
    cfg.validate()?;
    let data = cfg.load_dataset()?;
    run_experiment_on(cfg, &data)
}

/// As [`run_experiment`], with the dataset supplied by the caller.
pub fn run_experiment_on<T: Real>(cfg: &ExperimentConfig<T>, data: &Dataset<T>) -> Result<RunReport> {
    cfg.validate()?;
    let start = Instant::now();
    let mut jobs = Vec::with_capacity(cfg.repeats * cfg.folds);
    for r in 0..cfg.repeats {
        for (f, fold) in kfold_split(data.len(), cfg.folds, cfg.fold_seed(r))?.into_iter().enumerate() {
            jobs.push((r, f, fold));
        }
    }
    let results: Vec<_> = jobs
        .par_iter()
        .map(|(r, f, fold)| evaluate_fold(cfg, data, fold, *r, *f))
        .collect();
    Ok(assemble_report(cfg, results, start.elapsed().as_secs_f64()))
}

/// Collects finished jobs into a report carrying the resolved config.
pub fn assemble_report<T: Real>(cfg: &ExperimentConfig<T>, runs: Vec<FoldRun<T>>, total_time_s: f64) -> RunReport {
    let mut report = RunReport {
        config: cfg.to_pairs(),
        config_hash: cfg.config_hash(),
        seed: cfg.seed,
        runs: Vec::with_capacity(runs.len()),
        traces: Vec::with_capacity(runs.len()),
        warnings: Vec::new(),
        total_time_s,
    };
    for run in runs {
        report.runs.push(run.record);
        report.traces.push(run.traces);
        report.warnings.extend(run.warnings);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_round_trip_through_set() {
        let mut cfg = ExperimentConfig::<f64>::default();
        cfg.set("gamma", "0.25").unwrap();
        cfg.set("mode", "ssfr").unwrap();
        cfg.set("seed", "17").unwrap();
        let mut other = ExperimentConfig::<f64>::default();
        for (k, v) in cfg.to_pairs() {
            other.set(&k, &v).unwrap();
        }
        assert_eq!(other, cfg);
        assert_eq!(other.config_hash(), cfg.config_hash());
    }

    #[test]
    fn hash_ignores_seed_only() {
        let a = ExperimentConfig::<f64>::default();
        let mut b = a.clone();
        b.seed = 99;
        assert_eq!(a.config_hash(), b.config_hash());
        b.admm.mu = 0.2;
        assert_ne!(a.config_hash(), b.config_hash());
        assert_eq!(a.config_hash().len(), 16);
    }

    #[test]
    fn csv_keys_need_csv_source() {
        let mut cfg = ExperimentConfig::<f64>::default();
        assert!(cfg.set("target_col", "3").is_err());
        cfg.set("dataset", "data.csv").unwrap();
        cfg.set("target_col", "PE").unwrap();
        cfg.set("drop_cols", "0, time").unwrap();
        let DataSource::Csv { options, .. } = &cfg.source else { panic!() };
        assert_eq!(options.target, Some(ColumnRef::Name("PE".into())));
        assert_eq!(options.drop, vec![ColumnRef::Index(0), ColumnRef::Name("time".into())]);
    }

    #[test]
    fn text_config_and_errors() {
        let mut cfg = ExperimentConfig::<f64>::default();
        cfg.apply_text("# comment\nagents = 3\n\nrho_s=0.5\n").unwrap();
        assert_eq!((cfg.agents, cfg.admm.rho_s), (3, 0.5));
        assert!(cfg.apply_text("nonsense").is_err());
        assert!(cfg.set("bogus", "1").is_err());
        assert!(cfg.set("agents", "x").is_err());
    }

    #[test]
    fn labeled_must_cover_agents() {
        let mut cfg = ExperimentConfig::<f64>::default();
        cfg.labeled_count = 4;
        assert!(cfg.validate().is_err());
        cfg.setting = Setting::Centralized;
        assert!(cfg.validate().is_ok());
    }
}
