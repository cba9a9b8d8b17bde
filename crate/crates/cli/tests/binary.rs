use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const SMALL: &str =
    "n_paths = 2000\n[grid]\nk = 8\n[checks]\ntrials = 10\nconvergence_paths = 500\n";

fn chaoskit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chaoskit"))
        .args(args)
        .env("CHAOSKIT_THREADS", "2")
        .output()
        .unwrap()
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("run.toml");
    fs::write(&p, text).unwrap();
    p
}

fn run_dirs(out: &Path) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = fs::read_dir(out)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    v.sort();
    v
}

#[test]
fn passing_suite_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = dir.path().join("reports");
    let o = chaoskit(&[
        "fock",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{stdout}{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(stdout.contains("pass"));
    assert_eq!(run_dirs(&out).len(), 1);
}

#[test]
fn a_failing_record_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        &format!("{SMALL}[tolerances]\nalgebraic = 1e-300\n"),
    );
    let out = dir.path().join("reports");
    let o = chaoskit(&[
        "fock",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("FAIL fock."));
    let d = &run_dirs(&out)[0];
    let csv = fs::read_to_string(d.join("records.csv")).unwrap();
    assert!(csv.contains("\"fail\""));
}

#[test]
fn configuration_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("reports");
    let bad = write_config(dir.path(), "unknown_field = 3\n");
    let o = chaoskit(&[
        "fock",
        "--config",
        bad.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("invalid configuration"));

    let huge = write_config(dir.path(), "d = 200\nm = 40\n");
    assert_eq!(
        chaoskit(&[
            "fock",
            "--config",
            huge.to_str().unwrap(),
            "--out",
            out.to_str().unwrap()
        ])
        .status
        .code(),
        Some(2)
    );
    let missing = dir.path().join("nope.toml");
    assert_eq!(
        chaoskit(&["fock", "--config", missing.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    // no suite on the command line or in the file
    let plain = write_config(dir.path(), SMALL);
    assert_eq!(
        chaoskit(&[
            "--config",
            plain.to_str().unwrap(),
            "--out",
            out.to_str().unwrap()
        ])
        .status
        .code(),
        Some(2)
    );
    assert!(!out.exists());
}

#[test]
fn reruns_are_byte_identical_in_fresh_directories() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &format!("suite = \"sim\"\n{SMALL}"));
    let out = dir.path().join("reports");
    for threads in ["1", "3"] {
        let o = Command::new(env!("CARGO_BIN_EXE_chaoskit"))
            .args([
                "--config",
                cfg.to_str().unwrap(),
                "--out",
                out.to_str().unwrap(),
                "--seed",
                "9",
                "--paths",
                "1500",
            ])
            .env("CHAOSKIT_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(
            o.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&o.stdout)
        );
    }
    let dirs = run_dirs(&out);
    assert_eq!(dirs.len(), 2);
    for f in [
        "records.jsonl",
        "records.csv",
        "summary.txt",
        "manifest.json",
        "config.toml",
    ] {
        assert_eq!(
            fs::read(dirs[0].join(f)).unwrap(),
            fs::read(dirs[1].join(f)).unwrap(),
            "{f}"
        );
    }
    let cfg_back = fs::read_to_string(dirs[0].join("config.toml")).unwrap();
    assert!(
        cfg_back.contains("seed = 9") && cfg_back.contains("n_paths = 1500"),
        "{cfg_back}"
    );
}

#[test]
fn a_different_seed_changes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = dir.path().join("reports");
    for seed in ["1", "2"] {
        chaoskit(&[
            "sim",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--seed",
            seed,
            "--format",
            "jsonl",
        ]);
    }
    let dirs = run_dirs(&out);
    assert_ne!(
        fs::read(dirs[0].join("records.jsonl")).unwrap(),
        fs::read(dirs[1].join("records.jsonl")).unwrap()
    );
}
