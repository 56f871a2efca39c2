use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tsfuzzy::bench::{kfold_split, load_csv, synth_generate, train_fold, CsvOptions, ExperimentConfig};
use tsfuzzy::FuzzyModel;

fn tsfuzzy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tsfuzzy")).args(args).output().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

const SMALL: &[&str] = &["--synth-n", "400", "--folds", "3", "--repeats", "2", "--m-interp", "60", "--max-iter-parameter", "150"];

/// Report text with wall-clock fields blanked.
fn untimed(report: &str) -> String {
    let mut in_runs = false;
    report
        .lines()
        .map(|l| {
            if l.starts_with("mean_train_time_s") || l.starts_with("total_time_s") {
                return String::new();
            }
            if l == "[runs]" {
                in_runs = true;
            }
            if in_runs && l.chars().next().is_some_and(|c| c.is_ascii_digit()) {
                let mut cells: Vec<&str> = l.split(',').collect();
                cells[3] = "-";
                return cells.join(",");
            }
            l.to_string()
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn synth_writes_header_and_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let out = tsfuzzy(&["synth", "--n", "10", "--seed", "5", "--out", p(&path)]);
    assert!(out.status.success());
    let text = fs::read_to_string(&path).unwrap();
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data.len(), 11);
    assert_eq!(data[0], "x1,x2,x3,x4,x5,x6,x7,x8,y");
    assert!(text.starts_with("# seed=5 config_hash="));
    let loaded = load_csv::<f64>(&path, &CsvOptions::default()).unwrap();
    assert_eq!(loaded, synth_generate::<f64>(10, true, 5));
}

#[test]
fn synth_reports_unwritable_path() {
    let out = tsfuzzy(&["synth", "--n", "5", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent-dir/x.csv"));
}

#[test]
fn missing_dataset_is_a_usage_error() {
    let out = tsfuzzy(&["fit", "--dataset", "/no/such/file.csv"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dataset"));
    let out = tsfuzzy(&["benchmark", "--mode", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--mode"));
}

#[test]
fn fit_saves_a_model_that_reproduces_training() {
    let dir = tempfile::tempdir().unwrap();
    let out = tsfuzzy(&[&["fit", "--fold", "1", "--seed", "4", "--out", p(dir.path())], SMALL].concat());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("test nrmse"));
    let saved = FuzzyModel::<f64>::load(&dir.path().join("model.txt")).unwrap();

    let mut cfg = ExperimentConfig::<f64>::default();
    for pair in SMALL.chunks(2) {
        cfg.set(&pair[0][2..].replace('-', "_"), pair[1]).unwrap();
    }
    cfg.seed = 4;
    let data = cfg.load_dataset().unwrap();
    let fold = &kfold_split(data.len(), cfg.folds, cfg.fold_seed(0)).unwrap()[1];
    let direct = train_fold(&cfg, &data, fold, 0, 1).unwrap().model;
    let probes = synth_generate::<f64>(100, false, 9);
    let a = saved.predict(probes.features()).unwrap();
    let b = direct.predict(probes.features()).unwrap();
    assert!(a.iter().zip(b.iter()).all(|(x, y)| x.to_bits() == y.to_bits()));
    let report = fs::read_to_string(dir.path().join("report.txt")).unwrap();
    assert!(report.contains(&format!("config_hash={}", cfg.config_hash())));
}

#[test]
fn interpolation_free_fully_labeled_fit_equals_supervised_fit() {
    let body = |mode: &str| {
        let dir = tempfile::tempdir().unwrap();
        let args = ["fit", "--mode", mode, "--gamma", "0", "--synth-n", "300", "--folds", "3", "--labeled", "200", "--out", p(dir.path())];
        assert!(tsfuzzy(&args).status.success());
        let text = fs::read_to_string(dir.path().join("model.txt")).unwrap();
        text.lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>().join("\n")
    };
    assert_eq!(body("sfr-icr"), body("fr"));
}

#[test]
fn benchmark_writes_report_and_traces() {
    let dir = tempfile::tempdir().unwrap();
    let out = tsfuzzy(&[&["benchmark", "--out", p(dir.path())], SMALL].concat());
    assert!(out.status.success());
    let report = fs::read_to_string(dir.path().join("report.txt")).unwrap();
    let runs = report.split("[runs]").nth(1).unwrap().lines().filter(|l| !l.is_empty()).count() - 1;
    assert_eq!(runs, 6);
    let header = report.lines().nth(1).unwrap().to_string();
    for r in 0..2 {
        for f in 0..3 {
            for phase in ["structure", "parameter"] {
                let text = fs::read_to_string(dir.path().join(format!("traces/r{r}_f{f}_{phase}.csv"))).unwrap();
                assert_eq!(text.lines().next().unwrap(), header);
                let iters: Vec<usize> = text
                    .lines()
                    .filter(|l| l.chars().next().is_some_and(|c| c.is_ascii_digit()))
                    .map(|l| l.split(',').next().unwrap().parse().unwrap())
                    .collect();
                assert!(!iters.is_empty());
                assert!(iters.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }
}

#[test]
fn benchmark_reruns_match_apart_from_timing() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        assert!(tsfuzzy(&[&["benchmark", "--seed", "8", "--out", p(d.path())], SMALL].concat()).status.success());
    }
    let ra = fs::read_to_string(a.path().join("report.txt")).unwrap();
    let rb = fs::read_to_string(b.path().join("report.txt")).unwrap();
    assert_eq!(untimed(&ra), untimed(&rb));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    fs::write(&conf, "# test\nagents = 3\nrules = 4\nfreeze_augmentation = true\n").unwrap();
    let args = ["benchmark", "--config", p(&conf), "--agents", "2", "--repeats", "1", "--synth-n", "300", "--folds", "3", "--m-interp", "60", "--out", p(dir.path())];
    let out = tsfuzzy(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = fs::read_to_string(dir.path().join("report.txt")).unwrap();
    assert!(report.contains("agents = 2\n"));
    assert!(report.contains("rules = 4\n"));
    assert!(report.contains("freeze_augmentation = true\n"));
    assert!(report.contains("repeats = 1\n"));
}

#[test]
fn failed_runs_give_non_zero_exit() {
    let dir = tempfile::tempdir().unwrap();
    // One labeled row per agent cannot place five supervised rules.
    let out = tsfuzzy(&["benchmark", "--mode", "fr", "--labeled", "5", "--synth-n", "200", "--repeats", "1", "--out", p(dir.path())]);
    assert_eq!(out.status.code(), Some(1));
    let report = fs::read_to_string(dir.path().join("report.txt")).unwrap();
    assert!(report.contains("partial = true"));
}
