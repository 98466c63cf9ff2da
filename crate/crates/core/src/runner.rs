//! End-to-end pipeline: place nodes, cluster them, derive sleep times, run
//! both schedulers per cluster and summarise the results.

use std::collections::BTreeMap;

use log::warn;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::energy::{energy_feasible, harvested_power, sleep_time, FeasibilityReport};
use crate::error::RunError;
use crate::geometry::{assign_clusters, total_illuminance, NodePosition, Vec3};
use crate::metrics::IntervalStats;
use crate::scheduler::{schedule, ClusterNode, ClusterNodes, Schedule, Scheduler};

/// Cluster id used for an explicit `override_t_s` node set.
pub const OVERRIDE_CLUSTER_ID: u32 = 0;

/// Buffer levels down to this many joules below zero count as feasible.
pub const ENERGY_TOLERANCE_J: f64 = 1e-9;

/// Name of the generator behind [`place_nodes`].
pub const RNG_ALGORITHM: &str = "ChaCha8";

/// `count` nodes drawn uniformly over the room footprint at the configured
/// plane height. Node ids run `1..=count`. Placements for a smaller count
/// are a prefix of those for a larger one under the same seed.
pub fn place_nodes_n(config: &ExperimentConfig, count: usize) -> Vec<NodePosition> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.experiment.rng_seed);
    let (w, l) = (config.scenario.width_m, config.scenario.length_m);
    (1..=count as u32)
        .map(|node_id| {
            let x = rng.random_range(0.0..w);
            let y = rng.random_range(0.0..l);
            NodePosition {
                node_id,
                position: Vec3::new(x, y, config.experiment.node_plane_z_m),
            }
        })
        .collect()
}

pub fn place_nodes(config: &ExperimentConfig) -> Vec<NodePosition> {
    place_nodes_n(config, config.experiment.node_count)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfeasibleNode {
    pub node_id: u32,
    pub cluster_id: u32,
    pub illuminance_lux: f64,
    pub p_harv_w: f64,
    pub reason: String,
}

/// Everything up to (not including) scheduling.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedClusters {
    pub positions: Vec<NodePosition>,
    /// Cluster id → feasible members in node-id order. Clusters without a
    /// feasible node are omitted.
    pub clusters: BTreeMap<u32, ClusterNodes>,
    pub illuminance: BTreeMap<u32, f64>,
    pub harvest_w: BTreeMap<u32, f64>,
    pub sleep_times: BTreeMap<u32, f64>,
    pub infeasible: Vec<InfeasibleNode>,
}

/// Placement → clustering → illuminance → harvested power → `T_s`, or the
/// override set as a single cluster. `count` is the node population (or
/// the number of override entries to use).
pub fn prepare_clusters(config: &ExperimentConfig, count: usize) -> Result<PreparedClusters, RunError> {
    if let Some(pairs) = &config.experiment.override_t_s {
        if count > pairs.len() {
            return Err(RunError::Parameter(format!(
                "{count} nodes requested but override_t_s has {}",
                pairs.len()
            )));
        }
        let pairs = &pairs[..count];
        let nodes = ClusterNodes::from_pairs(pairs.iter().copied())?;
        let harvest_w = pairs
            .iter()
            .map(|&(id, t_s)| (id, config.profile.harvest_for_sleep_time(t_s)))
            .collect();
        return Ok(PreparedClusters {
            positions: Vec::new(),
            clusters: BTreeMap::from([(OVERRIDE_CLUSTER_ID, nodes)]),
            illuminance: BTreeMap::new(),
            harvest_w,
            sleep_times: pairs.iter().copied().collect(),
            infeasible: Vec::new(),
        });
    }

    let positions = place_nodes_n(config, count);
    let set = assign_clusters(&config.scenario, &positions)?;
    let mut illuminance = BTreeMap::new();
    let mut harvest_w = BTreeMap::new();
    let mut sleep_times = BTreeMap::new();
    let mut infeasible = Vec::new();
    for node in &positions {
        let lux = total_illuminance(&config.scenario, node)?;
        let p_harv = harvested_power(&config.harvest, lux)?;
        illuminance.insert(node.node_id, lux);
        harvest_w.insert(node.node_id, p_harv);
        match sleep_time(&config.profile, p_harv) {
            Ok(t_s) => {
                sleep_times.insert(node.node_id, t_s);
            }
            Err(e) => {
                warn!("node {} excluded from scheduling: {e}", node.node_id);
                infeasible.push(InfeasibleNode {
                    node_id: node.node_id,
                    cluster_id: set.serving[&node.node_id],
                    illuminance_lux: lux,
                    p_harv_w: p_harv,
                    reason: e.to_string(),
                });
            }
        }
    }

    let mut clusters = BTreeMap::new();
    for (&ap_id, members) in &set.clusters {
        let entries: Vec<ClusterNode> = members
            .iter()
            .filter_map(|id| sleep_times.get(id).map(|&t_s| ClusterNode { node_id: *id, sleep_s: t_s }))
            .collect();
        if !entries.is_empty() {
            clusters.insert(ap_id, ClusterNodes::new(entries)?);
        }
    }

    Ok(PreparedClusters {
        positions,
        clusters,
        illuminance,
        harvest_w,
        sleep_times,
        infeasible,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeEnergy {
    pub node_id: u32,
    pub cluster_id: u32,
    pub scheduler: Scheduler,
    pub p_harv_w: f64,
    pub cycles: usize,
    pub report: FeasibilityReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterResult {
    pub cluster_id: u32,
    pub nodes: ClusterNodes,
    pub bst: Schedule,
    pub ustdma: Schedule,
    /// `None` when the schedule has fewer than two events.
    pub bst_stats: Option<IntervalStats>,
    pub ustdma_stats: Option<IntervalStats>,
    pub energy: Vec<NodeEnergy>,
}

impl ClusterResult {
    pub fn schedule(&self, which: Scheduler) -> &Schedule {
        match which {
            Scheduler::BstTdma => &self.bst,
            Scheduler::UStdma => &self.ustdma,
        }
    }

    pub fn stats(&self, which: Scheduler) -> Option<&IntervalStats> {
        match which {
            Scheduler::BstTdma => self.bst_stats.as_ref(),
            Scheduler::UStdma => self.ustdma_stats.as_ref(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub rng_seed: u64,
    pub rng_algorithm: String,
    pub horizon_s: f64,
    pub bin_width_s: f64,
    pub positions: Vec<NodePosition>,
    pub clusters: Vec<ClusterResult>,
    pub sleep_times: BTreeMap<u32, f64>,
    pub illuminance: BTreeMap<u32, f64>,
    pub infeasible: Vec<InfeasibleNode>,
}

impl ExperimentResult {
    pub fn cluster(&self, id: u32) -> Option<&ClusterResult> {
        self.clusters.iter().find(|c| c.cluster_id == id)
    }

    /// Every per-node energy check across clusters and schedulers.
    pub fn energy(&self) -> impl Iterator<Item = &NodeEnergy> {
        self.clusters.iter().flat_map(|c| c.energy.iter())
    }

    pub fn summary_rows(&self, parameter: SweepParameter) -> Vec<SweepRow> {
        let mut rows = Vec::new();
        for c in &self.clusters {
            for which in Scheduler::ALL {
                let s = c.schedule(which);
                let st = c.stats(which);
                rows.push(SweepRow {
                    parameter,
                    cluster_id: c.cluster_id,
                    scheduler: which,
                    cluster_nodes: c.nodes.len(),
                    period_s: s.period_s,
                    events: s.len(),
                    mode_s: st.map(|s| s.mode_s),
                    fraction_at_per: st.map(|s| s.fraction_at_per),
                    min_gap_s: st.map(|s| s.min_gap_s),
                    max_gap_s: st.map(|s| s.max_gap_s),
                    mean_gap_s: st.map(|s| s.mean_gap_s),
                });
            }
        }
        rows
    }
}

fn run_cluster(
    config: &ExperimentConfig,
    prep: &PreparedClusters,
    cluster_id: u32,
    nodes: &ClusterNodes,
    horizon_s: f64,
) -> Result<ClusterResult, RunError> {
    let dur = config.profile.duty_dur_s;
    let bin = config.experiment.bin_width_s;
    let bst = schedule(Scheduler::BstTdma, nodes, horizon_s, dur)?;
    let ustdma = schedule(Scheduler::UStdma, nodes, horizon_s, dur)?;
    for w in &bst.warnings {
        warn!("cluster {cluster_id}: {w}");
    }
    let bst_stats = IntervalStats::from_schedule(&bst, bin).ok();
    let ustdma_stats = IntervalStats::from_schedule(&ustdma, bin).ok();

    let mut energy = Vec::new();
    for sched in [&bst, &ustdma] {
        for node_id in nodes.node_ids() {
            let p_harv_w = prep.harvest_w[&node_id];
            let starts = sched.starts_of(node_id);
            let report = energy_feasible(&config.profile, p_harv_w, &starts, horizon_s, ENERGY_TOLERANCE_J)?;
            energy.push(NodeEnergy {
                node_id,
                cluster_id,
                scheduler: sched.scheduler,
                p_harv_w,
                cycles: starts.len(),
                report,
            });
        }
    }

    Ok(ClusterResult {
        cluster_id,
        nodes: nodes.clone(),
        bst,
        ustdma,
        bst_stats,
        ustdma_stats,
        energy,
    })
}

fn run_prepared(
    config: &ExperimentConfig,
    prep: PreparedClusters,
    horizon_s: f64,
) -> Result<ExperimentResult, RunError> {
    if !(horizon_s > 0.0 && horizon_s.is_finite()) {
        return Err(RunError::Parameter(format!("horizon must be positive, got {horizon_s}")));
    }
    let work: Vec<(u32, &ClusterNodes)> = prep.clusters.iter().map(|(&id, n)| (id, n)).collect();
    // collect() keeps cluster order whichever way the work is spread
    let clusters: Result<Vec<ClusterResult>, RunError> = if config.experiment.parallel {
        work.par_iter()
            .map(|&(id, nodes)| run_cluster(config, &prep, id, nodes, horizon_s))
            .collect()
    } else {
        work.iter()
            .map(|&(id, nodes)| run_cluster(config, &prep, id, nodes, horizon_s))
            .collect()
    };
    let clusters = clusters?;
    Ok(ExperimentResult {
        rng_seed: config.experiment.rng_seed,
        rng_algorithm: RNG_ALGORITHM.to_string(),
        horizon_s,
        bin_width_s: config.experiment.bin_width_s,
        positions: prep.positions,
        clusters,
        sleep_times: prep.sleep_times,
        illuminance: prep.illuminance,
        infeasible: prep.infeasible,
    })
}

/// Run at an explicit horizon and population.
pub fn run_experiment_with(
    config: &ExperimentConfig,
    node_count: usize,
    horizon_s: f64,
) -> Result<ExperimentResult, RunError> {
    let prep = prepare_clusters(config, node_count)?;
    run_prepared(config, prep, horizon_s)
}

/// Run the configured population at the first configured horizon.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult, RunError> {
    run_experiment_with(config, config.experiment.node_count, config.horizon_s())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "parameter", content = "value", rename_all = "snake_case")]
pub enum SweepParameter {
    HorizonS(f64),
    NodeCount(usize),
}

impl SweepParameter {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParameter::HorizonS(_) => "horizon_s",
            SweepParameter::NodeCount(_) => "node_count",
        }
    }

    pub fn value(&self) -> f64 {
        match *self {
            SweepParameter::HorizonS(h) => h,
            SweepParameter::NodeCount(n) => n as f64,
        }
    }
}

/// One tidy row: one scheduler on one cluster at one sweep point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub parameter: SweepParameter,
    pub cluster_id: u32,
    pub scheduler: Scheduler,
    pub cluster_nodes: usize,
    pub period_s: f64,
    pub events: usize,
    pub mode_s: Option<f64>,
    pub fraction_at_per: Option<f64>,
    pub min_gap_s: Option<f64>,
    pub max_gap_s: Option<f64>,
    pub mean_gap_s: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub parameter: SweepParameter,
    pub rows: Vec<SweepRow>,
    /// Set when this point failed; other points still run.
    pub error: Option<String>,
}

/// One point per configured horizon (at `node_count` nodes), then one per
/// entry of `sweep_node_counts` (at the first horizon). Node-count points
/// share one seeded placement, so smaller populations are subsets of larger
/// ones. Points come back in that order regardless of parallelism.
pub fn run_sweep(config: &ExperimentConfig) -> Vec<SweepPoint> {
    let e = &config.experiment;
    let mut params: Vec<SweepParameter> = e.horizons_s.iter().map(|&h| SweepParameter::HorizonS(h)).collect();
    params.extend(e.sweep_node_counts.iter().map(|&n| SweepParameter::NodeCount(n)));

    let point = |p: &SweepParameter| {
        let (count, horizon) = match *p {
            SweepParameter::HorizonS(h) => (e.node_count, h),
            SweepParameter::NodeCount(n) => (n, config.horizon_s()),
        };
        match run_experiment_with(config, count, horizon) {
            Ok(r) => SweepPoint {
                parameter: *p,
                rows: r.summary_rows(*p),
                error: None,
            },
            Err(err) => {
                warn!("sweep point {}={} failed: {err}", p.name(), p.value());
                SweepPoint {
                    parameter: *p,
                    rows: Vec::new(),
                    error: Some(err.to_string()),
                }
            }
        }
    };

    if e.parallel {
        params.par_iter().map(point).collect()
    } else {
        params.iter().map(point).collect()
    }
}
