//! Command-line front end. The binary only parses arguments and calls
//! [`main_with`]; everything else lives here so it can be tested in-process.
//!
//! Exit codes: 0 success, 1 validation findings, 2 config I/O,
//! 3 invalid scenario, 4 invalid parameters, 5 output I/O.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::config::{validate, Category, ExperimentConfig};
use crate::error::{ConfigError, RunError};
use crate::geometry::illuminance_grid;
use crate::output::{self, ComparisonDelta, ScheduleMeta};
use crate::runner::{run_experiment, run_sweep};
use crate::scheduler::Scheduler;

pub const DEFAULT_RESOLUTION_M: f64 = 0.1;

#[derive(Debug, Parser)]
#[command(name = "liot-sched", version, about = "Duty-cycle scheduling for batteryless light-powered IoT nodes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Illuminance grid over the room footprint.
    IllumMap(CommonArgs),
    /// One scheduler over every cluster.
    Schedule(CommonArgs),
    /// BST-TDMA and U-STDMA on identical inputs.
    Compare(CommonArgs),
    /// Horizon and node-count sweeps.
    Sweep(CommonArgs),
    /// Check a config without running anything.
    Validate(CommonArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SchedulerArg {
    Bst,
    Ustdma,
}

impl From<SchedulerArg> for Scheduler {
    fn from(a: SchedulerArg) -> Self {
        match a {
            SchedulerArg::Bst => Scheduler::BstTdma,
            SchedulerArg::Ustdma => Scheduler::UStdma,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub nodes: Option<usize>,
    #[arg(long = "horizon-s", allow_negative_numbers = true)]
    pub horizon_s: Option<f64>,
    #[arg(long, value_enum)]
    pub scheduler: Option<SchedulerArg>,
    #[arg(long = "bin-width-s", allow_negative_numbers = true)]
    pub bin_width_s: Option<f64>,
    #[arg(long = "plane-z", allow_negative_numbers = true)]
    pub plane_z: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub resolution: Option<f64>,
    #[arg(long)]
    pub parallel: bool,
}

/// Command-line overrides, echoed into every `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Overrides {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scheduler: Option<SchedulerArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bin_width_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plane_z: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution: Option<f64>,
    pub parallel: bool,
}

impl From<&CommonArgs> for Overrides {
    fn from(a: &CommonArgs) -> Self {
        Self {
            seed: a.seed,
            nodes: a.nodes,
            horizon_s: a.horizon_s,
            scheduler: a.scheduler,
            bin_width_s: a.bin_width_s,
            plane_z: a.plane_z,
            resolution: a.resolution,
            parallel: a.parallel,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("invalid scenario: {0}")]
    Scenario(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("cannot write output: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Scenario(_) => 3,
            CliError::Parameter(_) => 4,
            CliError::Output(_) => 5,
        }
    }
}

impl From<RunError> for CliError {
    fn from(e: RunError) -> Self {
        match e {
            RunError::Geometry(_) | RunError::Energy(_) => CliError::Scenario(e.to_string()),
            RunError::Schedule(_) | RunError::Metrics(_) | RunError::Parameter(_) => {
                CliError::Parameter(e.to_string())
            }
            RunError::Io(_) | RunError::Csv(_) | RunError::Json(_) => CliError::Output(e.to_string()),
        }
    }
}

impl CommonArgs {
    /// Load the config and fold numeric overrides into it.
    pub fn load(&self) -> Result<ExperimentConfig, CliError> {
        let mut c = ExperimentConfig::load(&self.config)?;
        let e = &mut c.experiment;
        if let Some(s) = self.seed {
            e.rng_seed = s;
        }
        if let Some(n) = self.nodes {
            e.node_count = n;
        }
        if let Some(h) = self.horizon_s {
            e.horizons_s = vec![h];
        }
        if let Some(w) = self.bin_width_s {
            e.bin_width_s = w;
        }
        if let Some(z) = self.plane_z {
            e.node_plane_z_m = z;
        }
        if self.parallel {
            e.parallel = true;
        }
        Ok(c)
    }

    fn resolution(&self) -> f64 {
        self.resolution.unwrap_or(DEFAULT_RESOLUTION_M)
    }
}

/// Reject configs with hard errors, mapping the first one to an exit code.
fn require_valid(config: &ExperimentConfig) -> Result<(), CliError> {
    let findings = config.check();
    match findings.iter().find(|f| f.severity == crate::config::Severity::Error) {
        None => Ok(()),
        Some(f) if f.category == Category::Parameter => Err(CliError::Parameter(f.message.clone())),
        Some(f) => Err(CliError::Scenario(f.message.clone())),
    }
}

fn check_resolution(r: f64) -> Result<(), CliError> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(CliError::Parameter(format!("resolution must be positive, got {r}")))
    }
}

fn make_out(out: &Path) -> Result<(), CliError> {
    fs::create_dir_all(out).map_err(|e| CliError::Output(format!("{}: {e}", out.display())))
}

#[derive(Serialize)]
struct GridSummary<'a> {
    #[serde(flatten)]
    grid: GridStats,
    overrides: &'a Overrides,
}

#[derive(Serialize)]
struct GridStats {
    plane_z_m: f64,
    resolution_m: f64,
    nx: usize,
    ny: usize,
    min_lux: f64,
    max_lux: f64,
    mean_lux: f64,
    max_at: [f64; 2],
}

fn write_grid(config: &ExperimentConfig, args: &CommonArgs, file: &str) -> Result<GridStats, CliError> {
    let res = args.resolution();
    check_resolution(res)?;
    let z = config.experiment.node_plane_z_m;
    let grid = illuminance_grid(&config.scenario, z, res).map_err(|e| match e {
        crate::error::GeometryError::BadResolution(_) => CliError::Parameter(e.to_string()),
        _ => CliError::Scenario(e.to_string()),
    })?;
    output::write_grid_csv(&args.out.join(file), &grid)?;
    let (mx, my, _) = grid.argmax();
    Ok(GridStats {
        plane_z_m: z,
        resolution_m: res,
        nx: grid.xs.len(),
        ny: grid.ys.len(),
        min_lux: grid.min(),
        max_lux: grid.max(),
        mean_lux: grid.mean(),
        max_at: [mx, my],
    })
}

pub fn cmd_illum_map(args: &CommonArgs) -> Result<i32, CliError> {
    let config = args.load()?;
    require_valid(&config)?;
    make_out(&args.out)?;
    let g = write_grid(&config, args, "illum_grid.csv")?;
    let overrides = Overrides::from(args);
    println!(
        "illuminance {}×{} cells at z={} m: min {:.2} lux, max {:.2} lux, mean {:.2} lux",
        g.nx, g.ny, g.plane_z_m, g.min_lux, g.max_lux, g.mean_lux
    );
    let summary = GridSummary {
        grid: g,
        overrides: &overrides,
    };
    output::write_json(&args.out.join("summary.json"), &summary)?;
    Ok(0)
}
#[derive(Serialize)]
struct ClusterMeta {
    cluster_id: u32,
    #[serde(flatten)]
    meta: ScheduleMeta,
}

fn run_and_write(args: &CommonArgs, schedulers: &[Scheduler]) -> Result<(ExperimentConfig, crate::runner::ExperimentResult), CliError> {
    let config = args.load()?;
    require_valid(&config)?;
    make_out(&args.out)?;
    let result = run_experiment(&config)?;
    let overrides = Overrides::from(args);
    output::write_results(&args.out, &config, &result, &overrides, schedulers)?;
    write_grid(&config, args, "illum_grid.csv")?;
    for &which in schedulers {
        let metas: Vec<ClusterMeta> = result
            .clusters
            .iter()
            .map(|c| ClusterMeta {
                cluster_id: c.cluster_id,
                meta: ScheduleMeta::new(c.schedule(which), c.stats(which)),
            })
            .collect();
        output::write_json(&args.out.join(format!("schedule_{}.json", which.tag())), &metas)?;
    }
    for bad in &result.infeasible {
        eprintln!("node {} excluded: {}", bad.node_id, bad.reason);
    }
    Ok((config, result))
}

pub fn cmd_schedule(args: &CommonArgs) -> Result<i32, CliError> {
    let which: Scheduler = args.scheduler.unwrap_or(SchedulerArg::Bst).into();
    let (_, result) = run_and_write(args, &[which])?;
    for c in &result.clusters {
        let s = c.schedule(which);
        println!(
            "cluster {}: {} nodes, per {:.3} s, {} {} events",
            c.cluster_id,
            c.nodes.len(),
            s.period_s,
            s.len(),
            which
        );
        for w in &s.warnings {
            println!("  warning: {w}");
        }
    }
    Ok(0)
}

pub fn cmd_compare(args: &CommonArgs) -> Result<i32, CliError> {
    let (_, result) = run_and_write(args, &Scheduler::ALL)?;
    let deltas: Vec<ComparisonDelta> = result
        .clusters
        .iter()
        .map(|c| ComparisonDelta::new(c.cluster_id, c.bst.period_s, c.bst_stats.as_ref(), c.ustdma_stats.as_ref()))
        .collect();
    output::write_json(&args.out.join("comparison.json"), &deltas)?;
    println!("cluster  per[s]  scheduler  mode[s]  at_per  min_gap[s]  max_gap[s]");
    for c in &result.clusters {
        for which in Scheduler::ALL {
            match c.stats(which) {
                Some(st) => println!(
                    "{:>7}  {:>6.2}  {:<9}  {:>7.1}  {:>6.3}  {:>10.3}  {:>10.3}",
                    c.cluster_id, c.bst.period_s, which.tag(), st.mode_s, st.fraction_at_per, st.min_gap_s, st.max_gap_s
                ),
                None => println!("{:>7}  {:>6.2}  {:<9}  (fewer than two events)", c.cluster_id, c.bst.period_s, which.tag()),
            }
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct SweepSummary<'a> {
    rng_seed: u64,
    rng_algorithm: &'a str,
    points: usize,
    failed: Vec<String>,
    overrides: &'a Overrides,
    config: &'a ExperimentConfig,
}

pub fn cmd_sweep(args: &CommonArgs) -> Result<i32, CliError> {
    let config = args.load()?;
    require_valid(&config)?;
    make_out(&args.out)?;
    let points = run_sweep(&config);
    output::write_sweep_csv(&args.out.join("sweep.csv"), &points)?;
    output::write_json(&args.out.join("sweep.json"), &points)?;
    let overrides = Overrides::from(args);
    let failed: Vec<String> = points
        .iter()
        .filter_map(|p| p.error.as_ref().map(|e| format!("{}={}: {e}", p.parameter.name(), p.parameter.value())))
        .collect();
    for f in &failed {
        eprintln!("sweep point failed: {f}");
    }
    let summary = SweepSummary {
        rng_seed: config.experiment.rng_seed,
        rng_algorithm: crate::runner::RNG_ALGORITHM,
        points: points.len(),
        failed,
        overrides: &overrides,
        config: &config,
    };
    output::write_json(&args.out.join("summary.json"), &summary)?;
    println!("{} sweep points written to {}", points.len(), args.out.display());
    Ok(0)
}

pub fn cmd_validate(args: &CommonArgs) -> Result<i32, CliError> {
    let config = args.load()?;
    let report = validate(&config);
    if report.is_clean() {
        println!("{}: clean", args.config.display());
        return Ok(0);
    }
    for f in &report.findings {
        println!("{f}");
    }
    Ok(1)
}

pub fn run(cli: &Cli) -> Result<i32, CliError> {
    match &cli.command {
        Command::IllumMap(a) => cmd_illum_map(a),
        Command::Schedule(a) => cmd_schedule(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Validate(a) => cmd_validate(a),
    }
}

/// Run and turn the outcome into a process exit code, reporting errors on
/// stderr.
pub fn main_with(cli: &Cli) -> i32 {
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
