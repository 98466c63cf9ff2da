//! Plot-ready CSV and JSON artifacts.
//!
//! Files are written deterministically: rows are ordered, JSON maps are
//! sorted, and nothing time-dependent is recorded, so rerunning a command
//! reproduces byte-identical output.

use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::RunError;
use crate::geometry::IlluminanceGrid;
use crate::metrics::{EmpiricalCdf, IntervalStats};
use crate::runner::{ExperimentResult, InfeasibleNode, NodeEnergy, SweepPoint};
use crate::scheduler::{DutyCycleEvent, Schedule, ScheduleWarning, Scheduler};

pub fn write_grid_csv(path: &Path, grid: &IlluminanceGrid) -> Result<(), RunError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["x", "y", "lux"])?;
    for (x, y, lux) in grid.cells() {
        w.write_record([x.to_string(), y.to_string(), lux.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// All events of the given schedules merged into one `node_id,start_s`
/// table sorted by start time.
pub fn write_schedule_csv<'a>(
    path: &Path,
    schedules: impl IntoIterator<Item = &'a Schedule>,
) -> Result<(), RunError> {
    let mut events: Vec<DutyCycleEvent> = schedules.into_iter().flat_map(|s| s.events.iter().copied()).collect();
    events.sort_by(|a, b| a.start_s.total_cmp(&b.start_s).then(a.node_id.cmp(&b.node_id)));
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["node_id", "start_s"])?;
    for e in events {
        w.write_record([e.node_id.to_string(), e.start_s.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_cdf_csv(path: &Path, cdf: &EmpiricalCdf) -> Result<(), RunError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["interval_s", "cum_fraction"])?;
    for &(x, f) in &cdf.points {
        w.write_record([x.to_string(), f.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_sweep_csv(path: &Path, points: &[SweepPoint]) -> Result<(), RunError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record([
        "parameter",
        "value",
        "cluster_id",
        "scheduler",
        "cluster_nodes",
        "period_s",
        "events",
        "mode_s",
        "fraction_at_per",
        "min_gap_s",
        "max_gap_s",
        "mean_gap_s",
    ])?;
    for p in points {
        for r in &p.rows {
            w.write_record([
                r.parameter.name().to_string(),
                r.parameter.value().to_string(),
                r.cluster_id.to_string(),
                r.scheduler.tag().to_string(),
                r.cluster_nodes.to_string(),
                r.period_s.to_string(),
                r.events.to_string(),
                opt(r.mode_s),
                opt(r.fraction_at_per),
                opt(r.min_gap_s),
                opt(r.max_gap_s),
                opt(r.mean_gap_s),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<(), RunError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// Interval statistics without the raw interval and CDF arrays.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsSummary {
    pub intervals: usize,
    pub mode_s: f64,
    pub mode_bin_width_s: f64,
    pub fraction_at_per: f64,
    pub min_gap_s: f64,
    pub max_gap_s: f64,
    pub mean_gap_s: f64,
}

impl From<&IntervalStats> for StatsSummary {
    fn from(s: &IntervalStats) -> Self {
        Self {
            intervals: s.intervals_s.len(),
            mode_s: s.mode_s,
            mode_bin_width_s: s.mode_bin_width_s,
            fraction_at_per: s.fraction_at_per,
            min_gap_s: s.min_gap_s,
            max_gap_s: s.max_gap_s,
            mean_gap_s: s.mean_gap_s,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScheduleMeta {
    pub scheduler: Scheduler,
    pub period_s: f64,
    pub horizon_s: f64,
    pub duty_dur_s: f64,
    pub events: usize,
    pub warnings: Vec<ScheduleWarning>,
    pub stats: Option<StatsSummary>,
}

impl ScheduleMeta {
    pub fn new(s: &Schedule, stats: Option<&IntervalStats>) -> Self {
        Self {
            scheduler: s.scheduler,
            period_s: s.period_s,
            horizon_s: s.horizon_s,
            duty_dur_s: s.duty_dur_s,
            events: s.len(),
            warnings: s.warnings.clone(),
            stats: stats.map(StatsSummary::from),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterSummary {
    pub cluster_id: u32,
    pub nodes: Vec<(u32, f64)>,
    pub schedules: Vec<ScheduleMeta>,
}

/// BST-TDMA minus U-STDMA, per statistic.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonDelta {
    pub cluster_id: u32,
    pub period_s: f64,
    pub mode_s: Option<f64>,
    pub fraction_at_per: Option<f64>,
    pub min_gap_s: Option<f64>,
    pub max_gap_s: Option<f64>,
    pub mean_gap_s: Option<f64>,
}

impl ComparisonDelta {
    pub fn new(cluster_id: u32, period_s: f64, bst: Option<&IntervalStats>, ust: Option<&IntervalStats>) -> Self {
        let diff = |f: fn(&IntervalStats) -> f64| match (bst, ust) {
            (Some(a), Some(b)) => Some(f(a) - f(b)),
            _ => None,
        };
        Self {
            cluster_id,
            period_s,
            mode_s: diff(|s| s.mode_s),
            fraction_at_per: diff(|s| s.fraction_at_per),
            min_gap_s: diff(|s| s.min_gap_s),
            max_gap_s: diff(|s| s.max_gap_s),
            mean_gap_s: diff(|s| s.mean_gap_s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary<'a, O: Serialize> {
    pub rng_seed: u64,
    pub rng_algorithm: &'a str,
    pub horizon_s: f64,
    pub bin_width_s: f64,
    pub overrides: &'a O,
    pub clusters: Vec<ClusterSummary>,
    pub infeasible: &'a [InfeasibleNode],
    pub config: &'a ExperimentConfig,
}

pub fn run_summary<'a, O: Serialize>(
    config: &'a ExperimentConfig,
    result: &'a ExperimentResult,
    overrides: &'a O,
    schedulers: &[Scheduler],
) -> RunSummary<'a, O> {
    let clusters = result
        .clusters
        .iter()
        .map(|c| ClusterSummary {
            cluster_id: c.cluster_id,
            nodes: c.nodes.entries().iter().map(|n| (n.node_id, n.sleep_s)).collect(),
            schedules: schedulers
                .iter()
                .map(|&w| ScheduleMeta::new(c.schedule(w), c.stats(w)))
                .collect(),
        })
        .collect();
    RunSummary {
        rng_seed: result.rng_seed,
        rng_algorithm: &result.rng_algorithm,
        horizon_s: result.horizon_s,
        bin_width_s: result.bin_width_s,
        overrides,
        clusters,
        infeasible: &result.infeasible,
        config,
    }
}

/// Write schedule CSVs, per-cluster CDF CSVs, `energy.json` and
/// `summary.json` for the given schedulers into `out`.
pub fn write_results<O: Serialize>(
    out: &Path,
    config: &ExperimentConfig,
    result: &ExperimentResult,
    overrides: &O,
    schedulers: &[Scheduler],
) -> Result<(), RunError> {
    fs::create_dir_all(out)?;
    for &which in schedulers {
        let tag = which.tag();
        write_schedule_csv(
            &out.join(format!("schedule_{tag}.csv")),
            result.clusters.iter().map(|c| c.schedule(which)),
        )?;
        for c in &result.clusters {
            if let Some(st) = c.stats(which) {
                write_cdf_csv(&out.join(format!("cdf_{tag}_c{}.csv", c.cluster_id)), &st.cdf)?;
            }
        }
    }
    let energy: Vec<&NodeEnergy> = result.energy().filter(|e| schedulers.contains(&e.scheduler)).collect();
    write_json(&out.join("energy.json"), &energy)?;
    write_json(&out.join("summary.json"), &run_summary(config, result, overrides, schedulers))?;
    Ok(())
}
