//! Run configuration: spec-level defaults, optional TOML config file
//! (`[global]` plus one section per subcommand), command-line overrides.
//! Precedence: defaults < file < flags.

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use std::path::{Path, PathBuf};

pub const DEFAULT_DT: f64 = 1e-3;
pub const DEFAULT_LYAPUNOV_T: f64 = 2e4;
pub const DEFAULT_LAMBDA_THRESHOLD: f64 = 5e-3;
pub const DEFAULT_RENORM_INTERVAL: f64 = 1.0;
pub const DEFAULT_D0: f64 = 1e-8;
pub const DEFAULT_SAMPLES: usize = 32;
pub const DEFAULT_REL_TOL: f64 = 0.02;
pub const DEFAULT_BRACKET_LO: f64 = 0.1;
pub const DEFAULT_N_MAX: usize = 30;

/// Minimum chaotic votes among the sampled orbits for "chaos shows up" in
/// the threshold scan. A single vote tracks isolated sticky layers that
/// exist far below the section-visible threshold; three of 32 reproduces the
/// energy at which chaotic orbits spread over the sections.
pub const DEFAULT_CHAOS_VOTES: usize = 3;

fn load_file(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config file {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("parsing config file {}", path.display()))
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub global: Option<GlobalSection>,
    pub simulate: Option<SimulateSection>,
    pub poincare: Option<PoincareSection>,
    pub lyapunov: Option<LyapunovSection>,
    #[serde(rename = "scan-threshold")]
    pub scan_threshold: Option<ScanSection>,
    #[serde(rename = "quantum-compare")]
    pub quantum_compare: Option<QuantumSection>,
    #[serde(rename = "oneloop-check")]
    pub oneloop_check: Option<OneloopSection>,
}

impl FileConfig {
    pub fn load(path: Option<&PathBuf>) -> Result<FileConfig> {
        match path {
            Some(p) => load_file(p),
            None => Ok(FileConfig::default()),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GlobalSection {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub json: Option<bool>,
    pub threads: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateSection {
    pub kind: Option<String>,
    pub gamma: Option<f64>,
    pub eps: Option<f64>,
    pub ic: Option<String>,
    pub t: Option<f64>,
    pub dt: Option<f64>,
    pub stride: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoincareSection {
    pub kind: Option<String>,
    pub gamma: Option<f64>,
    pub eps: Option<f64>,
    pub ic: Option<String>,
    pub t: Option<f64>,
    pub dt: Option<f64>,
    pub plane: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LyapunovSection {
    pub kind: Option<String>,
    pub gamma: Option<f64>,
    pub eps: Option<f64>,
    pub ic: Option<String>,
    pub t: Option<f64>,
    pub dt: Option<f64>,
    pub renorm: Option<f64>,
    pub d0: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSection {
    pub gammas: Option<String>,
    pub samples: Option<usize>,
    pub rel_tol: Option<f64>,
    pub t: Option<f64>,
    pub dt: Option<f64>,
    pub lambda_threshold: Option<f64>,
    pub renorm: Option<f64>,
    pub d0: Option<f64>,
    pub bracket_lo: Option<f64>,
    pub convention: Option<String>,
    pub chaos_votes: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantumSection {
    pub gamma: Option<f64>,
    pub eps: Option<f64>,
    pub ic: Option<String>,
    pub t: Option<f64>,
    pub dt: Option<f64>,
    pub sample_dt: Option<f64>,
    pub n_max: Option<usize>,
    pub strict_cutoff: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OneloopSection {
    pub rhos: Option<String>,
    pub amplitude: Option<f64>,
    pub coupling: Option<f64>,
    pub const_curvature: Option<f64>,
    pub const_halfwidth: Option<f64>,
}

/// Comma-separated list of reals, e.g. `0,0.1,0.5,1`.
pub fn parse_f64_list(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .with_context(|| format!("invalid number {part:?}"))
        })
        .collect()
}

/// `q1,q2,p1,p2`.
pub fn parse_ic(text: &str) -> Result<semiclassica_core::model::PhaseState> {
    let parts = parse_f64_list(text)?;
    if parts.len() != 4 {
        bail!("initial condition must have four components q1,q2,p1,p2");
    }
    Ok(semiclassica_core::model::PhaseState::new(
        parts[0], parts[1], parts[2], parts[3],
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kind {
    Classical,
    Effective,
}

pub fn parse_kind(text: &str) -> Result<Kind> {
    match text {
        "classical" => Ok(Kind::Classical),
        "effective" => Ok(Kind::Effective),
        other => bail!("unknown kind {other:?}; expected classical or effective"),
    }
}
