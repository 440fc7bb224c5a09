//! Batch front end: configuration loading, scenario runs, and output files.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};
use spinbeam::scenario::{run_scenario, write_csv, Prepared};
use spinbeam::{Config, ScenarioKind, SystemMatrices};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Model(#[from] spinbeam::Error),

    #[error("cannot read config {path}: {source}")]
    ReadConfig { path: PathBuf, source: std::io::Error },

    #[error("invalid config {path}: {message}")]
    ParseConfig { path: PathBuf, message: String },

    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },

    #[error("cannot serialize {what}: {source}")]
    Json { what: &'static str, source: serde_json::Error },
}

impl CliError {
    /// 2 configuration, 3 numerical failure, 4 control authority, 1 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Model(e) => match e {
                spinbeam::Error::Config { .. } | spinbeam::Error::Domain(_) => 2,
                spinbeam::Error::AuthorityLoss { .. } => 4,
                spinbeam::Error::BlowUp { .. }
                | spinbeam::Error::SpinDestabilized { .. }
                | spinbeam::Error::Consistency(_) => 3,
            },
            CliError::ReadConfig { .. } | CliError::ParseConfig { .. } => 2,
            CliError::Write { .. } | CliError::Json { .. } => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Reads a TOML configuration; absent sections and keys take their defaults.
pub fn load_config(path: &Path) -> Result<Config> {
    let text = fs::read_to_string(path).map_err(|source| CliError::ReadConfig {
        path: path.to_owned(),
        source,
    })?;
    let config = parse_config(&text).map_err(|e| match e {
        CliError::ParseConfig { message, .. } => CliError::ParseConfig {
            path: path.to_owned(),
            message,
        },
        other => other,
    })?;
    Ok(config)
}

pub fn parse_config(text: &str) -> Result<Config> {
    let config: Config = toml::from_str(text).map_err(|e| CliError::ParseConfig {
        path: PathBuf::new(),
        message: e.to_string(),
    })?;
    config.validate()?;
    Ok(config)
}

/// SHA-256 over the little-endian bytes of every matrix entry.
pub fn matrices_checksum(matrices: &SystemMatrices) -> String {
    let mut hasher = Sha256::new();
    for v in matrices.flat_values() {
        hasher.update(v.to_le_bytes());
    }
    hex::encode(hasher.finalize())
}

/// Output file names, relative to the output directory.
#[derive(Debug, Clone, Serialize)]
pub struct OutputPaths {
    pub csv: PathBuf,
    pub metrics: PathBuf,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference_csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest<'a> {
    pub scenario: ScenarioKind,
    pub controller: &'static str,
    pub config: &'a Config,
    pub matrices_sha256: String,
    pub outputs: OutputPaths,
}

/// Manifest file name and output file names for one run.
pub fn output_paths(kind: ScenarioKind, controlled: bool) -> (PathBuf, OutputPaths) {
    let stem = format!("{}_{}", kind.name(), if controlled { "on" } else { "off" });
    let reference_csv =
        (kind == ScenarioKind::Disturbance && controlled).then(|| PathBuf::from(format!("{stem}_reference.csv")));
    (
        PathBuf::from(format!("{stem}.manifest.json")),
        OutputPaths {
            csv: PathBuf::from(format!("{stem}.csv")),
            metrics: PathBuf::from(format!("{stem}.metrics.json")),
            reference_csv,
        },
    )
}

fn write_json<T: Serialize>(path: &Path, what: &'static str, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|source| CliError::Json { what, source })?;
    text.push('\n');
    fs::write(path, text).map_err(|source| CliError::Write {
        path: path.to_owned(),
        source,
    })
}

fn write_trajectory(path: &Path, trajectory: &spinbeam::Trajectory) -> Result<()> {
    let file = fs::File::create(path).map_err(|source| CliError::Write {
        path: path.to_owned(),
        source,
    })?;
    let mut w = std::io::BufWriter::new(file);
    write_csv(trajectory, &mut w)
        .and_then(|_| std::io::Write::flush(&mut w))
        .map_err(|source| CliError::Write {
            path: path.to_owned(),
            source,
        })
}

/// Writes the manifest, simulates, then writes CSV and metrics.
pub fn execute(config: &Config, prepared: &Prepared, kind: ScenarioKind, controlled: bool, out: &Path) -> Result<()> {
    let (manifest_name, outputs) = output_paths(kind, controlled);
    let manifest = RunManifest {
        scenario: kind,
        controller: if controlled { "on" } else { "off" },
        config,
        matrices_sha256: matrices_checksum(&prepared.matrices),
        outputs: outputs.clone(),
    };
    write_json(&out.join(manifest_name), "manifest", &manifest)?;

    let run = run_scenario(config, prepared, kind, controlled)?;
    write_trajectory(&out.join(&outputs.csv), &run.trajectory)?;
    if let (Some(name), Some(reference)) = (&outputs.reference_csv, &run.reference) {
        write_trajectory(&out.join(name), reference)?;
    }
    write_json(&out.join(&outputs.metrics), "metrics", &run.trajectory.metrics)?;
    Ok(())
}

pub fn export_matrices(matrices: &SystemMatrices, path: &Path) -> Result<()> {
    let file = fs::File::create(path).map_err(|source| CliError::Write {
        path: path.to_owned(),
        source,
    })?;
    matrices
        .write_text(std::io::BufWriter::new(file))
        .map_err(|source| CliError::Write {
            path: path.to_owned(),
            source,
        })
}
