use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use keyterm_core::wordnet::fixture::MiniWordNet;

fn mini_corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data/mini-corpus")
}

fn keyterm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_keyterm"))
        .args(args)
        .env_remove("WNSEARCHDIR")
        .env("RUST_LOG", "info")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn stem_prints_one_stem_per_line() {
    let o = keyterm(&["stem", "caresses", "agreed", "sky"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "caress\nagre\nsky\n");
}

#[test]
fn stem_rejects_non_words() {
    let o = keyterm(&["stem", "r2d2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn lex_reads_the_database_directory() {
    let dir = tempfile::tempdir().unwrap();
    MiniWordNet::standard().write(dir.path()).unwrap();
    let o = keyterm(&[
        "lex",
        "washington",
        "zzzzqx",
        "--wordnet-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("washington\tnoun.location"));
    assert!(text.contains("washington\tnoun.person"));
    assert!(text.contains("zzzzqx\t-"));
}

#[test]
fn lex_without_database_is_a_usage_error() {
    let o = keyterm(&["lex", "dog"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("WNSEARCHDIR"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(keyterm(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(keyterm(&["select", "--no-such-flag"]).status.code(), Some(1));
    assert_eq!(keyterm(&[]).status.code(), Some(1));
    assert!(keyterm(&["--help"]).status.success());
}

#[test]
fn stats_reports_dataset_counts() {
    let o = keyterm(&["stats", mini_corpus().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("mini-corpus"), "{text}");
    assert!(text.contains("20"));
}

#[test]
fn preprocess_dumps_triplets() {
    let o = keyterm(&["preprocess", mini_corpus().to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    let first = text.lines().next().unwrap();
    assert_eq!(first.split(',').count(), 3);
    assert!(first.starts_with("grain/01.txt,"));
    assert!(text
        .lines()
        .all(|l| l.rsplit(',').next().unwrap().parse::<u64>().unwrap() >= 1));
}

#[test]
fn weigh_writes_one_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = keyterm(&[
        "weigh",
        mini_corpus().to_str().unwrap(),
        "--scheme",
        "tf2",
        "--out",
        out,
        "--format",
        "triplet",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let path = dir.path().join("matrix_tf2.triplets");
    assert!(path.is_file());
    assert_eq!(stdout(&o).trim(), path.to_str().unwrap());
}

#[test]
fn select_with_zero_thresholds_keeps_everything() {
    let dir = tempfile::tempdir().unwrap();
    let o = keyterm(&[
        "select",
        mini_corpus().to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
        "--alpha",
        "0",
        "--beta",
        "0",
        "--gamma",
        "0",
        "--wordnet-policy",
        "off",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("report.csv")).unwrap();
    let rows: Vec<_> = csv.lines().filter(|l| l.starts_with("mini-corpus,tf")).collect();
    assert_eq!(rows.len(), 3, "{csv}");
    assert!(rows.iter().all(|r| r.ends_with(",0.00")), "{csv}");
}

#[test]
fn select_logs_stages_in_order() {
    let dir = tempfile::tempdir().unwrap();
    let o = keyterm(&[
        "select",
        mini_corpus().to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let log = stderr(&o);
    let positions: Vec<usize> = (1..=7)
        .filter(|&n| n != 4)
        .map(|n| {
            log.find(&format!("stage step {n} "))
                .unwrap_or_else(|| panic!("step {n} missing:\n{log}"))
        })
        .collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]));
    // no database configured, so step 4 is skipped with a warning
    assert!(!log.contains("stage step 4"));
    assert!(log.contains("skipping step 4"));
}

#[test]
fn missing_corpus_names_the_stage() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope");
    let o = keyterm(&[
        "select",
        missing.to_str().unwrap(),
        "--out",
        dir.path().join("o").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("load_corpus"), "{err}");
    assert!(err.contains("nope"), "{err}");
}

#[test]
fn config_file_drives_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    let out = dir.path().join("out");
    std::fs::write(
        &conf,
        format!(
            "corpus = {}\nout = {}\nwordnet_policy = off\nlog_base = 10\n",
            mini_corpus().display(),
            out.display()
        ),
    )
    .unwrap();
    let o = keyterm(&["select", "--config", conf.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let meta = std::fs::read_to_string(out.join("metadata.json")).unwrap();
    assert!(meta.contains("\"log_base\": \"10\""), "{meta}");
}
