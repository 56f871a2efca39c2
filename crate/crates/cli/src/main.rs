use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use tsfuzzy::bench::{
    assemble_report, evaluate_fold, kfold_split, write_csv, synth_generate, DataSource, ExperimentConfig, RunReport,
    CONFIG_KEYS, SYNTH_DEFAULT_N,
};
use tsfuzzy::Error;

#[derive(Parser)]
#[command(name = "tsfuzzy", version, about = "Distributed semi-supervised Takagi-Sugeno fuzzy regression")]
struct Cli {
    /// Print the resolved configuration and progress to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the artificial benchmark dataset as CSV.
    Synth {
        #[arg(long, default_value_t = SYNTH_DEFAULT_N)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Corrupt 15% of the labels.
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set, value_name = "BOOL")]
        noise: bool,
        #[arg(long, default_value = "synthetic.csv")]
        out: PathBuf,
    },
    /// Train on one cross-validation fold, report its test NRMSE and save the model.
    Fit {
        #[command(flatten)]
        config: ConfigArgs,
        /// Fold of the first repeat's split to train on.
        #[arg(long, default_value_t = 0)]
        fold: usize,
        /// Output directory for model.txt and report.txt.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Run every repeat and fold, writing the report and residual traces.
    Benchmark {
        #[command(flatten)]
        config: ConfigArgs,
        /// Output directory for report.txt and traces/.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

/// Every configuration key has a flag twin; flags win over `--config`.
#[derive(Args, Default)]
struct ConfigArgs {
    /// Flat `key = value` file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// CSV path or `synthetic`.
    #[arg(long)]
    dataset: Option<String>,
    #[arg(long)]
    synth_n: Option<usize>,
    #[arg(long, value_name = "BOOL")]
    synth_noise: Option<bool>,
    /// Target column by 0-based index or header name; `last` by default.
    #[arg(long)]
    target_col: Option<String>,
    #[arg(long, value_name = "BOOL")]
    has_header: Option<bool>,
    /// Comma-separated columns to ignore.
    #[arg(long)]
    drop_cols: Option<String>,
    /// fr, ssfr or sfr-icr.
    #[arg(long)]
    mode: Option<String>,
    /// central or distributed.
    #[arg(long)]
    dist: Option<String>,
    #[arg(long)]
    agents: Option<usize>,
    #[arg(long)]
    rules: Option<usize>,
    /// Labeled samples per training fold.
    #[arg(long)]
    labeled: Option<usize>,
    #[arg(long)]
    folds: Option<usize>,
    #[arg(long)]
    repeats: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    rho_s: Option<f64>,
    #[arg(long)]
    rho_p: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    eps1: Option<f64>,
    #[arg(long)]
    eps2: Option<f64>,
    #[arg(long)]
    param_tol: Option<f64>,
    #[arg(long)]
    max_iter_structure: Option<usize>,
    #[arg(long)]
    max_iter_parameter: Option<usize>,
    #[arg(long)]
    m_interp: Option<usize>,
    #[arg(long)]
    beta_a: Option<f64>,
    #[arg(long)]
    beta_b: Option<f64>,
    #[arg(long, value_name = "BOOL", num_args = 0..=1, default_missing_value = "true")]
    freeze_augmentation: Option<bool>,
    #[arg(long)]
    fcm_tol: Option<f64>,
    #[arg(long)]
    fcm_max_iter: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

impl ConfigArgs {
    fn flag(&self, key: &str) -> Option<String> {
        fn s<V: ToString>(v: &Option<V>) -> Option<String> {
            v.as_ref().map(ToString::to_string)
        }
        match key {
            "dataset" => self.dataset.clone(),
            "synth_n" => s(&self.synth_n),
            "synth_noise" => s(&self.synth_noise),
            "target_col" => self.target_col.clone(),
            "has_header" => s(&self.has_header),
            "drop_cols" => self.drop_cols.clone(),
            "mode" => self.mode.clone(),
            "dist" => self.dist.clone(),
            "agents" => s(&self.agents),
            "rules" => s(&self.rules),
            "labeled" => s(&self.labeled),
            "folds" => s(&self.folds),
            "repeats" => s(&self.repeats),
            "alpha" => s(&self.alpha),
            "rho_s" => s(&self.rho_s),
            "rho_p" => s(&self.rho_p),
            "mu" => s(&self.mu),
            "gamma" => s(&self.gamma),
            "eps1" => s(&self.eps1),
            "eps2" => s(&self.eps2),
            "param_tol" => s(&self.param_tol),
            "max_iter_structure" => s(&self.max_iter_structure),
            "max_iter_parameter" => s(&self.max_iter_parameter),
            "m_interp" => s(&self.m_interp),
            "beta_a" => s(&self.beta_a),
            "beta_b" => s(&self.beta_b),
            "freeze_augmentation" => s(&self.freeze_augmentation),
            "fcm_tol" => s(&self.fcm_tol),
            "fcm_max_iter" => s(&self.fcm_max_iter),
            "seed" => s(&self.seed),
            _ => None,
        }
    }

    /// Defaults, then the config file, then flags.
    fn resolve(&self) -> Result<ExperimentConfig<f64>, Usage> {
        let mut cfg = ExperimentConfig::<f64>::default();
        if let Some(path) = &self.config {
            let text = fs::read_to_string(path).map_err(|e| Usage(format!("config: cannot read {}: {e}", path.display())))?;
            cfg.apply_text(&text).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
        }
        for key in CONFIG_KEYS {
            if let Some(v) = self.flag(key) {
                cfg.set(key, &v).map_err(|e| Usage(format!("--{}: {e}", key.replace('_', "-"))))?;
            }
        }
        if let DataSource::Csv { path, .. } = &cfg.source {
            if !path.is_file() {
                return Err(Usage(format!("dataset: no such file {}", path.display())));
            }
        }
        cfg.validate().map_err(|e| match e {
            Error::InvalidParameter { name, reason } => Usage(format!("{name}: {reason}")),
            other => Usage(other.to_string()),
        })?;
        Ok(cfg)
    }
}

/// A configuration problem; exits with status 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn echo(cfg: &ExperimentConfig<f64>) {
    eprintln!("# seed={} config_hash={}", cfg.seed, cfg.config_hash());
    for (k, v) in cfg.to_pairs() {
        eprintln!("{k} = {v}");
    }
}

fn write_file(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn synth(n: usize, seed: u64, noise: bool, out: &Path) -> anyhow::Result<bool> {
    let cfg = ExperimentConfig::<f64> {
        source: DataSource::Synthetic { n, noise },
        seed,
        ..ExperimentConfig::default()
    };
    let ds = synth_generate::<f64>(n, noise, seed);
    let comments = [
        format!("seed={seed} config_hash={}", cfg.config_hash()),
        format!("synthetic n={n} noise={noise}"),
    ];
    write_csv(&ds, out, &comments).with_context(|| format!("cannot write {}", out.display()))?;
    println!("wrote {n} rows to {}", out.display());
    Ok(true)
}

fn fit(cfg: &ExperimentConfig<f64>, fold_index: usize, out: &Path, verbose: bool) -> anyhow::Result<bool> {
    if fold_index >= cfg.folds {
        return Err(Usage(format!("fold: {fold_index} out of range for {} folds", cfg.folds)).into());
    }
    let data = cfg.load_dataset()?;
    let start = Instant::now();
    let fold = kfold_split(data.len(), cfg.folds, cfg.fold_seed(0))?.swap_remove(fold_index);
    let mut run = evaluate_fold(cfg, &data, &fold, 0, fold_index);
    let model = run.model.take();
    let report = assemble_report(cfg, vec![run], start.elapsed().as_secs_f64());
    fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))?;
    if let Some(model) = model {
        let path = out.join("model.txt");
        model
            .save(&path, &report.provenance())
            .with_context(|| format!("cannot write {}", path.display()))?;
        if verbose {
            eprintln!("model written to {}", path.display());
        }
    }
    write_file(&out.join("report.txt"), &report.render(true))?;
    let rec = &report.runs[0];
    match (rec.nrmse, &rec.error) {
        (Some(v), _) => println!("fold {fold_index}: test nrmse {v:.6} ({} train rows, {} labeled)", rec.n_train, rec.n_labeled),
        (None, err) => println!("fold {fold_index}: failed: {}", err.as_deref().unwrap_or("unknown error")),
    }
    Ok(report.is_complete())
}

fn write_traces(report: &RunReport, dir: &Path) -> anyhow::Result<()> {
    let provenance = report.provenance();
    for t in &report.traces {
        for (name, trace) in [("structure", &t.structure), ("parameter", &t.parameter)] {
            let Some(trace) = trace else { continue };
            fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
            let path = dir.join(format!("r{}_f{}_{name}.csv", t.repeat, t.fold));
            let file = fs::File::create(&path).with_context(|| format!("cannot write {}", path.display()))?;
            let mut w = BufWriter::new(file);
            trace.write_csv(&mut w, &provenance)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn benchmark(cfg: &ExperimentConfig<f64>, out: &Path) -> anyhow::Result<bool> {
    let data = cfg.load_dataset()?;
    let report = tsfuzzy::bench::run_experiment_on(cfg, &data)?;
    fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))?;
    write_file(&out.join("report.txt"), &report.render(true))?;
    write_traces(&report, &out.join("traces"))?;
    let (mean, std) = report.summary();
    println!(
        "{} {}: nrmse {mean:.4} ± {std:.4} over {} runs ({} failed)",
        cfg.mode,
        cfg.setting,
        report.runs.len() - report.failed_runs(),
        report.failed_runs()
    );
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    Ok(report.is_complete())
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Synth { n, seed, noise, out } => {
            if n == 0 {
                bail!(Usage("n: must be at least 1".into()));
            }
            synth(n, seed, noise, &out)
        }
        Command::Fit { config, fold, out } => {
            let cfg = config.resolve()?;
            if cli.verbose {
                echo(&cfg);
            }
            fit(&cfg, fold, &out, cli.verbose)
        }
        Command::Benchmark { config, out } => {
            let cfg = config.resolve()?;
            if cli.verbose {
                echo(&cfg);
            }
            benchmark(&cfg, &out)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<Usage>() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
