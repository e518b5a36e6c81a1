//! Run reports, manifests, verdict thresholds and sample dumps.

use crate::{Complex64, Error, Result};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};

/// Version stamp written into every report and manifest.
pub const REPORT_VERSION: &str = "1";

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "BARNES_OUT_DIR";

/// Verdict tolerances. Every field defaults to the acceptance value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Thresholds {
    /// Multiple gamma identity residuals.
    pub multigamma: f64,
    /// Mellin transform against the Lévy–Khinchine route.
    pub levy_khinchine: f64,
    /// Product and integral routes of the atom mass.
    pub atom: f64,
    /// Integer moments against exp(log η(k)).
    pub moments: f64,
    /// Finite gamma products against the Mellin transform at integers.
    pub moment_bridge: f64,
    /// Morris law at λ = 0 against its closed form.
    pub morris_lambda_zero: f64,
    /// Involution and self-duality residuals.
    pub duality: f64,
    /// Factor-wise Mellin products against the closed forms.
    pub decomposition: f64,
    /// Quasi-Monte Carlo agreement, in standard errors.
    pub qmc_sigmas: f64,
    /// Empirical Mellin transforms of samplers, in standard errors.
    pub sampler_sigmas: f64,
    /// Relative error of the leading SUPER asymptotic.
    pub super_asymptotic: f64,
    /// Residual of the exponential-functional identity.
    pub identity: f64,
    /// Accepted range of the log N drift coefficient.
    pub drift_c1: [f64; 2],
    /// Relative β ↔ 1/β residual of the freezing table.
    pub freezing: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            multigamma: 1e-7,
            levy_khinchine: 1e-7,
            atom: 1e-8,
            moments: 1e-9,
            moment_bridge: 1e-9,
            morris_lambda_zero: 1e-10,
            duality: 1e-8,
            decomposition: 1e-8,
            qmc_sigmas: 3.0,
            sampler_sigmas: 4.0,
            super_asymptotic: 0.05,
            identity: 1e-8,
            drift_c1: [1.6, 2.4],
            freezing: 1e-8,
        }
    }
}

impl Thresholds {
    /// Reads a JSON file; missing fields keep their defaults.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn and(self, other: Verdict) -> Verdict {
        Verdict::from_bool(self == Verdict::Pass && other == Verdict::Pass)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        }
    }
}

/// A complex number as JSON: a plain number when the imaginary part is zero,
/// otherwise `[re, im]`.
pub fn complex_json(z: Complex64) -> Value {
    if z.im == 0.0 {
        Value::from(z.re)
    } else {
        Value::from(vec![z.re, z.im])
    }
}

/// Hex SHA-256 of the canonical JSON of `config`.
pub fn config_hash<T: Serialize>(config: &T) -> Result<String> {
    let v = canonical(serde_json::to_value(config)?);
    Ok(hex(&Sha256::digest(serde_json::to_vec(&v)?)))
}

// Object keys sorted at every level.
fn canonical(v: Value) -> Value {
    match v {
        Value::Object(m) => {
            let mut entries: Vec<(String, Value)> = m.into_iter().map(|(k, v)| (k, canonical(v))).collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(entries.into_iter().collect())
        }
        Value::Array(xs) => Value::Array(xs.into_iter().map(canonical).collect()),
        other => other,
    }
}

pub fn file_sha256(path: &Path) -> Result<String> {
    Ok(hex(&Sha256::digest(fs::read(path)?)))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Machine-readable outcome of one command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub version: String,
    pub package_version: String,
    pub seed: u64,
    pub threads: usize,
    pub config_hash: String,
    pub verdict: Option<Verdict>,
    /// File name of the manifest, when files were written.
    pub manifest: Option<String>,
    #[serde(flatten)]
    pub result: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str, seed: u64, threads: usize, config_hash: String) -> Self {
        Report {
            command: command.to_string(),
            version: REPORT_VERSION.to_string(),
            package_version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            threads,
            config_hash,
            verdict: None,
            manifest: None,
            result: Map::new(),
        }
    }

    pub fn insert<T: Serialize>(&mut self, key: &str, value: T) -> Result<()> {
        self.result.insert(key.to_string(), serde_json::to_value(value)?);
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputFile {
    pub path: String,
    pub sha256: String,
}

/// Provenance of a run: everything needed to reproduce its files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    pub config_hash: String,
    pub seed: u64,
    pub threads: usize,
    pub versions: Map<String, Value>,
    pub wall_time_seconds: f64,
    pub verdict: Option<Verdict>,
    pub outputs: Vec<OutputFile>,
}

impl RunManifest {
    pub fn new(command_line: Vec<String>, report: &Report, wall_time_seconds: f64) -> Self {
        let mut versions = Map::new();
        versions.insert("barnes-beta".into(), Value::from(env!("CARGO_PKG_VERSION")));
        versions.insert("report".into(), Value::from(REPORT_VERSION));
        RunManifest {
            command_line,
            config_hash: report.config_hash.clone(),
            seed: report.seed,
            threads: report.threads,
            versions,
            wall_time_seconds,
            verdict: report.verdict,
            outputs: Vec::new(),
        }
    }

    pub fn record(&mut self, path: &Path) -> Result<()> {
        self.outputs.push(OutputFile { path: path.display().to_string(), sha256: file_sha256(path)? });
        Ok(())
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_file(path, (serde_json::to_string_pretty(self)? + "\n").as_bytes())
    }
}

/// `<stem>.manifest.json` beside `path`.
pub fn manifest_path(path: &Path) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}.manifest.json"))
}

/// Output directory from the environment, else the working directory.
pub fn default_out_dir() -> PathBuf {
    std::env::var_os(OUT_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, bytes)?;
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// Sample dump with header `index,value`.
pub fn write_samples_csv(path: &Path, values: &[f64]) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["index", "value"]).map_err(csv_error)?;
    for (i, v) in values.iter().enumerate() {
        w.write_record([i.to_string(), v.to_string()]).map_err(csv_error)?;
    }
    write_file(path, &w.into_inner().map_err(|e| csv_error(e.into_error().into()))?)
}

/// Grouped sample dump with header `n,index,value`.
pub fn write_grouped_csv(path: &Path, groups: &[(usize, &[f64])]) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "index", "value"]).map_err(csv_error)?;
    for (n, values) in groups {
        for (i, v) in values.iter().enumerate() {
            w.write_record([n.to_string(), i.to_string(), v.to_string()]).map_err(csv_error)?;
        }
    }
    write_file(path, &w.into_inner().map_err(|e| csv_error(e.into_error().into()))?)
}

pub fn write_report(path: &Path, report: &Report) -> Result<()> {
    write_file(path, report.to_json()?.as_bytes())
}
