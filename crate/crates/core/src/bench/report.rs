use std::fmt::Write as _;

use super::metrics::mean_std;
use crate::admm::Trace;

/// Outcome of one `(repeat, fold)` job.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunRecord {
    pub repeat: usize,
    pub fold: usize,
    pub nrmse: Option<f64>,
    pub train_time_s: f64,
    pub n_train: usize,
    pub n_labeled: usize,
    pub n_test: usize,
    pub structure_iterations: usize,
    pub structure_converged: bool,
    pub parameter_iterations: usize,
    pub parameter_converged: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct RunTraces {
    pub repeat: usize,
    pub fold: usize,
    pub structure: Option<Trace>,
    pub parameter: Option<Trace>,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub config: Vec<(String, String)>,
    pub config_hash: String,
    pub seed: u64,
    pub runs: Vec<RunRecord>,
    pub traces: Vec<RunTraces>,
    pub warnings: Vec<String>,
    pub total_time_s: f64,
}

pub const RUNS_HEADER: &str = "repeat,fold,nrmse,train_time_s,n_train,n_labeled,n_test,\
structure_iterations,structure_converged,parameter_iterations,parameter_converged,error";

impl RunReport {
    pub fn nrmse_values(&self) -> Vec<f64> {
        self.runs.iter().filter_map(|r| r.nrmse).collect()
    }

    /// Mean and sample standard deviation of the completed runs.
    pub fn summary(&self) -> (f64, f64) {
        mean_std(&self.nrmse_values())
    }

    pub fn failed_runs(&self) -> usize {
        self.runs.iter().filter(|r| r.nrmse.is_none()).count()
    }

    pub fn is_complete(&self) -> bool {
        self.failed_runs() == 0
    }

    pub fn mean_train_time_s(&self) -> f64 {
        if self.runs.is_empty() {
            return 0.0;
        }
        self.runs.iter().map(|r| r.train_time_s).sum::<f64>() / self.runs.len() as f64
    }

    /// Header comment lines carried by every file derived from this run.
    pub fn provenance(&self) -> Vec<String> {
        vec![format!("seed={} config_hash={}", self.seed, self.config_hash)]
    }

    /// The human-readable report. With `timing == false` wall-clock fields
    /// are written as `-`, which makes reruns comparable byte for byte.
    pub fn render(&self, timing: bool) -> String {
        let time = |v: f64| if timing { format!("{v:.6}") } else { "-".to_string() };
        let mut s = String::new();
        s.push_str("# tsfuzzy run report v1\n");
        for p in self.provenance() {
            let _ = writeln!(s, "# {p}");
        }
        s.push_str("\n[config]\n");
        for (k, v) in &self.config {
            let _ = writeln!(s, "{k} = {v}");
        }
        let (mean, std) = self.summary();
        s.push_str("\n[summary]\n");
        let _ = writeln!(s, "runs = {}", self.runs.len());
        let _ = writeln!(s, "completed = {}", self.runs.len() - self.failed_runs());
        let _ = writeln!(s, "failed = {}", self.failed_runs());
        let _ = writeln!(s, "partial = {}", !self.is_complete());
        let _ = writeln!(s, "mean_nrmse = {mean}");
        let _ = writeln!(s, "std_nrmse = {std}");
        let _ = writeln!(s, "mean_train_time_s = {}", time(self.mean_train_time_s()));
        let _ = writeln!(s, "total_time_s = {}", time(self.total_time_s));
        if !self.warnings.is_empty() {
            s.push_str("\n[warnings]\n");
            for w in &self.warnings {
                let _ = writeln!(s, "{w}");
            }
        }
        s.push_str("\n[runs]\n");
        s.push_str(RUNS_HEADER);
        s.push('\n');
        for r in &self.runs {
            let nrmse = r.nrmse.map_or(String::new(), |v| v.to_string());
            let error = r.error.as_deref().unwrap_or("").replace([',', '\n'], ";");
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                r.repeat,
                r.fold,
                nrmse,
                time(r.train_time_s),
                r.n_train,
                r.n_labeled,
                r.n_test,
                r.structure_iterations,
                r.structure_converged,
                r.parameter_iterations,
                r.parameter_converged,
                error
            );
        }
        s
    }
}

/// Reads the `nrmse` column back out of a rendered report; failed runs are
/// skipped.
pub fn parse_run_nrmse(report: &str) -> Vec<f64> {
    report
        .lines()
        .skip_while(|l| *l != RUNS_HEADER)
        .skip(1)
        .filter_map(|l| l.split(',').nth(2)?.parse().ok())
        .collect()
}
