//! Experiment configuration and its validation.
//!
//! Configs are TOML files with four tables:
//!
//! ```toml
//! [room]        # geometry and optics, plus [[room.aps]] entries
//! [power]       # per-node energy constants
//! [harvest]     # lux → watts coefficient
//! [experiment]  # population, seed, horizons, sweeps
//! ```

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::energy::{HarvestModel, PowerProfile};
use crate::error::ConfigError;
use crate::geometry::RoomScenario;
use crate::metrics::DEFAULT_BIN_WIDTH_S;
use crate::scheduler::TIME_EPS;

fn default_bin_width() -> f64 {
    DEFAULT_BIN_WIDTH_S
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentParams {
    pub node_count: usize,
    #[serde(default)]
    pub node_plane_z_m: f64,
    pub rng_seed: u64,
    /// The first entry is the horizon of a single run.
    pub horizons_s: Vec<f64>,
    #[serde(default)]
    pub sweep_node_counts: Vec<usize>,
    /// Explicit `(node_id, T_s)` pairs forming one cluster; bypasses the
    /// illumination pipeline.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub override_t_s: Option<Vec<(u32, f64)>>,
    #[serde(default = "default_bin_width")]
    pub bin_width_s: f64,
    #[serde(default)]
    pub parallel: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(rename = "room")]
    pub scenario: RoomScenario,
    #[serde(rename = "power")]
    pub profile: PowerProfile,
    #[serde(default)]
    pub harvest: HarvestModel,
    pub experiment: ExperimentParams,
}

impl ExperimentConfig {
    /// Reference room with 36 randomly placed nodes over 24 h.
    pub fn reference() -> Self {
        Self {
            scenario: RoomScenario::reference(),
            profile: PowerProfile::reference(),
            harvest: HarvestModel::default(),
            experiment: ExperimentParams {
                node_count: 36,
                node_plane_z_m: 0.0,
                rng_seed: 42,
                horizons_s: vec![24.0 * 3600.0],
                sweep_node_counts: vec![],
                override_t_s: None,
                bin_width_s: DEFAULT_BIN_WIDTH_S,
                parallel: false,
            },
        }
    }

    /// Reference room with the five-node cluster `T_s = [306, 235, 666, 505, 546]`.
    pub fn reference_cluster() -> Self {
        let mut c = Self::reference();
        c.experiment.node_count = 5;
        c.experiment.override_t_s = Some(vec![
            (1, 306.0),
            (2, 235.0),
            (3, 666.0),
            (4, 505.0),
            (5, 546.0),
        ]);
        c
    }

    pub fn from_toml_str(s: &str) -> Result<Self, ConfigError> {
        Ok(toml::from_str(s)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config is always representable as TOML")
    }

    /// Horizon of a single run.
    pub fn horizon_s(&self) -> f64 {
        self.experiment.horizons_s.first().copied().unwrap_or(f64::NAN)
    }

    /// Static checks: geometry, positivity and parameter ranges. Does not
    /// place nodes or schedule anything.
    pub fn check(&self) -> Vec<Finding> {
        let mut out = Vec::new();
        for msg in self.scenario.violations() {
            out.push(Finding::error(Category::Scenario, msg));
        }
        for msg in self.profile.violations() {
            out.push(Finding::error(Category::Scenario, msg));
        }
        if !(self.harvest.lux_to_watts > 0.0 && self.harvest.lux_to_watts.is_finite()) {
            out.push(Finding::error(
                Category::Scenario,
                format!("lux_to_watts must be positive, got {}", self.harvest.lux_to_watts),
            ));
        }

        let e = &self.experiment;
        if e.node_count == 0 {
            out.push(Finding::error(Category::Parameter, "node_count must be positive"));
        }
        if e.horizons_s.is_empty() {
            out.push(Finding::error(Category::Parameter, "horizons_s is empty"));
        }
        for &h in &e.horizons_s {
            if !(h > 0.0 && h.is_finite()) {
                out.push(Finding::error(
                    Category::Parameter,
                    format!("horizon must be positive, got {h}"),
                ));
            }
        }
        if e.sweep_node_counts.contains(&0) {
            out.push(Finding::error(
                Category::Parameter,
                "sweep_node_counts contains 0",
            ));
        }
        if !(e.bin_width_s > 0.0 && e.bin_width_s.is_finite()) {
            out.push(Finding::error(
                Category::Parameter,
                format!("bin_width_s must be positive, got {}", e.bin_width_s),
            ));
        }
        if !(e.node_plane_z_m >= 0.0 && e.node_plane_z_m < self.scenario.height_m) {
            out.push(Finding::error(
                Category::Scenario,
                format!(
                    "node_plane_z_m {} must lie in [0, {})",
                    e.node_plane_z_m, self.scenario.height_m
                ),
            ));
        }
        if let Some(pairs) = &e.override_t_s {
            if pairs.is_empty() {
                out.push(Finding::error(Category::Parameter, "override_t_s is empty"));
            }
            let mut seen = BTreeSet::new();
            for &(id, t_s) in pairs {
                if !seen.insert(id) {
                    out.push(Finding::error(
                        Category::Parameter,
                        format!("override_t_s repeats node {id}"),
                    ));
                }
                if !(t_s > 0.0 && t_s.is_finite()) {
                    out.push(Finding::error(
                        Category::Parameter,
                        format!("override_t_s node {id} has non-positive T_s {t_s}"),
                    ));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Warning,
    Error,
}

/// What a finding is about; drives the CLI exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    Scenario,
    Parameter,
    Energy,
    Schedule,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub severity: Severity,
    pub category: Category,
    pub message: String,
}

impl Finding {
    pub fn error(category: Category, message: impl Into<String>) -> Self {
        Self {
            severity: Severity::Error,
            category,
            message: message.into(),
        }
    }

    pub fn warning(category: Category, message: impl Into<String>) -> Self {
        Self {
            severity: Severity::Warning,
            category,
            message: message.into(),
        }
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "{sev} [{:?}]: {}", self.category, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn has_errors(&self) -> bool {
        self.findings.iter().any(|f| f.severity == Severity::Error)
    }

    pub fn first_error(&self) -> Option<&Finding> {
        self.findings.iter().find(|f| f.severity == Severity::Error)
    }
}

/// Full validation: [`ExperimentConfig::check`], then (if that is clean of
/// errors) node placement, clustering and sleep times, reporting infeasible
/// nodes and clusters whose period is shorter than a duty-cycle.
pub fn validate(config: &ExperimentConfig) -> ValidationReport {
    let mut findings = config.check();
    if findings.iter().any(|f| f.severity == Severity::Error) {
        return ValidationReport { findings };
    }
    match crate::runner::prepare_clusters(config, config.experiment.node_count) {
        Err(e) => findings.push(Finding::error(Category::Scenario, e.to_string())),
        Ok(prep) => {
            for bad in &prep.infeasible {
                findings.push(Finding::warning(
                    Category::Energy,
                    format!("node {} is infeasible: {}", bad.node_id, bad.reason),
                ));
            }
            for (cluster_id, nodes) in &prep.clusters {
                if let Ok(per) = crate::scheduler::ideal_period(nodes) {
                    if per < config.profile.duty_dur_s - TIME_EPS {
                        findings.push(Finding::warning(
                            Category::Schedule,
                            format!(
                                "cluster {cluster_id}: period {per:.3} s with {} nodes is shorter than the {} s duty-cycle; transmissions may overlap",
                                nodes.len(),
                                config.profile.duty_dur_s
                            ),
                        ));
                    }
                }
            }
        }
    }
    ValidationReport { findings }
}
