//! Report emission: records as JSON lines and CSV, a summary table, a run
//! manifest and a timings sidecar, all in a fresh timestamped directory.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::record::CheckRecord;

pub const ARTIFACT: &str = "chaoskit";
pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Jsonl,
    Csv,
    Both,
}

impl Format {
    fn jsonl(self) -> bool {
        matches!(self, Format::Jsonl | Format::Both)
    }

    fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }
}

/// Pass counts per suite and overall.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub per_suite: BTreeMap<String, (usize, usize)>,
    pub passed: usize,
    pub total: usize,
}

impl Summary {
    pub fn of(records: &[CheckRecord]) -> Self {
        let mut s = Summary::default();
        for r in records {
            let e = s.per_suite.entry(r.suite.clone()).or_default();
            e.1 += 1;
            s.total += 1;
            if r.passed() {
                e.0 += 1;
                s.passed += 1;
            }
        }
        s
    }

    pub fn all_passed(&self) -> bool {
        self.passed == self.total
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .per_suite
            .keys()
            .map(|k| k.len())
            .max()
            .unwrap_or(0)
            .max(5);
        writeln!(f, "{:<width$}  result", "suite")?;
        for (suite, (p, n)) in &self.per_suite {
            writeln!(f, "{suite:<width$}  {p}/{n} pass")?;
        }
        write!(
            f,
            "{:<width$}  {}/{} pass",
            "total", self.passed, self.total
        )
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    artifact: &'a str,
    version: &'a str,
    suite: &'a str,
    seed: u64,
    n_paths: usize,
    config_hash: String,
    chaos_format: &'a str,
    chaos_format_version: u32,
    records: usize,
    passed: usize,
    files: BTreeMap<String, String>,
}

#[derive(Serialize)]
struct Timing<'a> {
    suite: &'a str,
    check_id: &'a str,
    runtime_ms: f64,
}

#[derive(Serialize)]
struct Timings<'a> {
    written_at: String,
    checks: Vec<Timing<'a>>,
}

/// Paths of everything written for one run.
#[derive(Clone, Debug)]
pub struct RunArtifacts {
    pub dir: PathBuf,
    pub files: Vec<PathBuf>,
    pub summary: Summary,
}

pub fn to_jsonl(records: &[CheckRecord]) -> Result<String> {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).map_err(|e| CliError::Encoding(e.to_string()))?);
        out.push('\n');
    }
    Ok(out)
}

pub fn to_csv(records: &[CheckRecord]) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .quote_style(csv::QuoteStyle::NonNumeric)
        .from_writer(Vec::new());
    for r in records {
        w.serialize(r)
            .map_err(|e| CliError::Encoding(e.to_string()))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Encoding(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Encoding(e.to_string()))
}

fn write(dir: &Path, name: &str, body: &str, files: &mut Vec<PathBuf>) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, body).map_err(|e| CliError::Io(path.clone(), e))?;
    files.push(path);
    Ok(())
}

/// Creates `<out>/<suite>-<UTC timestamp>`, adding a counter if that already exists.
fn fresh_dir(out: &Path, suite: &str) -> Result<PathBuf> {
    fs::create_dir_all(out).map_err(|e| CliError::Io(out.to_path_buf(), e))?;
    let stamp = chrono::Utc::now().format("%Y%m%dT%H%M%S%.3fZ");
    let base = format!("{suite}-{stamp}");
    for k in 0.. {
        let name = if k == 0 {
            base.clone()
        } else {
            format!("{base}-{k}")
        };
        let dir = out.join(name);
        match fs::create_dir(&dir) {
            Ok(()) => return Ok(dir),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => continue,
            Err(e) => return Err(CliError::Io(dir, e)),
        }
    }
    unreachable!()
}

/// Writes the report files for `records` under `config.out_dir`.
pub fn emit_report(
    records: &[CheckRecord],
    config: &RunConfig,
    suite: &str,
    format: Format,
) -> Result<RunArtifacts> {
    if records.is_empty() {
        return Err(CliError::EmptyReport);
    }
    let dir = fresh_dir(&config.out_dir, suite)?;
    let mut files = Vec::new();
    let mut hashes = BTreeMap::new();
    let mut body = |name: &str, text: String, files: &mut Vec<PathBuf>| -> Result<()> {
        hashes.insert(
            name.to_string(),
            hex::encode(Sha256::digest(text.as_bytes())),
        );
        write(&dir, name, &text, files)
    };
    if format.jsonl() {
        body("records.jsonl", to_jsonl(records)?, &mut files)?;
    }
    if format.csv() {
        body("records.csv", to_csv(records)?, &mut files)?;
    }
    let summary = Summary::of(records);
    body("summary.txt", format!("{summary}\n"), &mut files)?;
    body("config.toml", config.to_toml(), &mut files)?;
    let manifest = Manifest {
        artifact: ARTIFACT,
        version: ARTIFACT_VERSION,
        suite,
        seed: config.seed,
        n_paths: config.n_paths,
        config_hash: config.hash(),
        chaos_format: chaoskit::malliavin::CHAOS_FORMAT,
        chaos_format_version: chaoskit::malliavin::CHAOS_FORMAT_VERSION,
        records: summary.total,
        passed: summary.passed,
        files: hashes,
    };
    let text = serde_json::to_string_pretty(&manifest)
        .map_err(|e| CliError::Encoding(e.to_string()))?
        + "\n";
    write(&dir, "manifest.json", &text, &mut files)?;
    let timings = Timings {
        written_at: chrono::Utc::now().to_rfc3339(),
        checks: records
            .iter()
            .map(|r| Timing {
                suite: &r.suite,
                check_id: &r.check_id,
                runtime_ms: r.runtime_ms,
            })
            .collect(),
    };
    let text = serde_json::to_string_pretty(&timings)
        .map_err(|e| CliError::Encoding(e.to_string()))?
        + "\n";
    write(&dir, "timings.json", &text, &mut files)?;
    Ok(RunArtifacts {
        dir,
        files,
        summary,
    })
}
