//! Solver selection and versioned JSON config files.

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};
use std::path::Path;

use pcp_core::solvers::admm::AdmmConfig;
use pcp_core::solvers::alm::AlmConfig;
use pcp_core::solvers::pspg::PspgConfig;
use pcp_core::solvers::DecompositionResult;
use pcp_core::{Instance, Result as CoreResult};

pub const CONFIG_VERSION: u16 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SolverKind {
    Eadm,
    Iadm,
    Alm,
    Pspg,
}

impl SolverKind {
    pub fn name(&self) -> &'static str {
        match self {
            SolverKind::Eadm => "eadm",
            SolverKind::Iadm => "iadm",
            SolverKind::Alm => "alm",
            SolverKind::Pspg => "pspg",
        }
    }

    pub fn from_name(name: &str) -> anyhow::Result<Self> {
        match name {
            "eadm" => Ok(SolverKind::Eadm),
            "iadm" => Ok(SolverKind::Iadm),
            "alm" => Ok(SolverKind::Alm),
            "pspg" => Ok(SolverKind::Pspg),
            other => bail!("unknown solver '{other}'"),
        }
    }
}

/// A solver paired with its full configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "solver", content = "config", rename_all = "snake_case")]
pub enum SolverConfig {
    Eadm(AdmmConfig),
    Iadm(AdmmConfig),
    Alm(AlmConfig),
    Pspg(PspgConfig),
}

/// On-disk config file: `{"version": 1, "solver": ..., "config": {...}}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct ConfigFile {
    pub version: u16,
    #[serde(flatten)]
    pub solver: SolverConfig,
}

impl SolverConfig {
    /// Defaults appropriate for the solver and instance (ALM switches its
    /// continuation reference on the observation pattern).
    pub fn defaults_for(kind: SolverKind, instance: &Instance) -> Self {
        match kind {
            SolverKind::Eadm => SolverConfig::Eadm(AdmmConfig::eadm_defaults()),
            SolverKind::Iadm => SolverConfig::Iadm(AdmmConfig::iadm_defaults()),
            SolverKind::Alm => {
                if instance.mask.is_full() {
                    SolverConfig::Alm(AlmConfig::full_defaults())
                } else {
                    SolverConfig::Alm(AlmConfig::missing_data_defaults())
                }
            }
            SolverKind::Pspg => SolverConfig::Pspg(PspgConfig::paper_defaults()),
        }
    }

    pub fn kind(&self) -> SolverKind {
        match self {
            SolverConfig::Eadm(_) => SolverKind::Eadm,
            SolverConfig::Iadm(_) => SolverKind::Iadm,
            SolverConfig::Alm(_) => SolverKind::Alm,
            SolverConfig::Pspg(_) => SolverKind::Pspg,
        }
    }

    pub fn run(&self, instance: &Instance) -> CoreResult<DecompositionResult> {
        match self {
            SolverConfig::Eadm(cfg) => pcp_core::solvers::admm::solve_eadm(instance, cfg),
            SolverConfig::Iadm(cfg) => pcp_core::solvers::admm::solve_iadm(instance, cfg),
            SolverConfig::Alm(cfg) => pcp_core::solvers::alm::solve_alm(instance, cfg),
            SolverConfig::Pspg(cfg) => pcp_core::solvers::pspg::solve_pspg(instance, cfg),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("solver configs serialize")
    }
}

pub fn load_config_file(path: &Path, expect: SolverKind) -> anyhow::Result<SolverConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    let file: ConfigFile = serde_json::from_str(&text)
        .with_context(|| format!("parsing config {}", path.display()))?;
    if file.version != CONFIG_VERSION {
        bail!("config version {} unsupported (expected {CONFIG_VERSION})", file.version);
    }
    if file.solver.kind() != expect {
        bail!(
            "config file is for solver '{}' but '{}' was requested",
            file.solver.kind().name(),
            expect.name()
        );
    }
    Ok(file.solver)
}

pub fn config_to_file_json(config: &SolverConfig) -> anyhow::Result<String> {
    let file = ConfigFile {
        version: CONFIG_VERSION,
        solver: config.clone(),
    };
    Ok(serde_json::to_string_pretty(&file)?)
}
