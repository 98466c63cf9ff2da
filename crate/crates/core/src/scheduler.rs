//! Per-cluster duty-cycle schedulers.
//!
//! [`schedule_bst_tdma`] enforces a minimum spacing `per` between any two
//! duty-cycle starts in a cluster, where `per = min(T_s) / cluster size`.
//! Nodes are served round-robin, one new cycle per node per pass; a node's
//! candidate start is its previous start plus `T_s + dur`, pushed later
//! until it clears every existing start by at least `per`.
//!
//! [`schedule_u_stdma`] is the uncoordinated baseline: every node simply
//! repeats at its own `T_s + dur` cadence.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ScheduleError;

/// Tolerance for every time comparison, in seconds.
pub const TIME_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClusterNode {
    pub node_id: u32,
    /// Sleep time `T_s` (s).
    pub sleep_s: f64,
}

/// Nodes sharing one spatial cluster, in scheduling order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<ClusterNode>", into = "Vec<ClusterNode>")]
pub struct ClusterNodes {
    entries: Vec<ClusterNode>,
}

impl ClusterNodes {
    pub fn new(entries: Vec<ClusterNode>) -> Result<Self, ScheduleError> {
        let mut seen = HashMap::with_capacity(entries.len());
        for e in &entries {
            if seen.insert(e.node_id, ()).is_some() {
                return Err(ScheduleError::DuplicateNode(e.node_id));
            }
            if !(e.sleep_s > 0.0 && e.sleep_s.is_finite()) {
                return Err(ScheduleError::BadSleepTime {
                    node_id: e.node_id,
                    t_s: e.sleep_s,
                });
            }
        }
        Ok(Self { entries })
    }

    /// Build from `(node_id, T_s)` pairs.
    pub fn from_pairs<I: IntoIterator<Item = (u32, f64)>>(pairs: I) -> Result<Self, ScheduleError> {
        Self::new(
            pairs
                .into_iter()
                .map(|(node_id, sleep_s)| ClusterNode { node_id, sleep_s })
                .collect(),
        )
    }

    pub fn entries(&self) -> &[ClusterNode] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn node_ids(&self) -> impl Iterator<Item = u32> + '_ {
        self.entries.iter().map(|e| e.node_id)
    }

    pub fn sleep_of(&self, node_id: u32) -> Option<f64> {
        self.entries.iter().find(|e| e.node_id == node_id).map(|e| e.sleep_s)
    }
}

impl TryFrom<Vec<ClusterNode>> for ClusterNodes {
    type Error = ScheduleError;

    fn try_from(v: Vec<ClusterNode>) -> Result<Self, Self::Error> {
        Self::new(v)
    }
}

impl From<ClusterNodes> for Vec<ClusterNode> {
    fn from(c: ClusterNodes) -> Self {
        c.entries
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DutyCycleEvent {
    pub node_id: u32,
    pub start_s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Scheduler {
    #[serde(rename = "bst")]
    BstTdma,
    #[serde(rename = "ustdma")]
    UStdma,
}

impl Scheduler {
    pub const ALL: [Scheduler; 2] = [Scheduler::BstTdma, Scheduler::UStdma];

    /// Short tag used in file names.
    pub fn tag(self) -> &'static str {
        match self {
            Scheduler::BstTdma => "bst",
            Scheduler::UStdma => "ustdma",
        }
    }
}

impl fmt::Display for Scheduler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheduler::BstTdma => "BST-TDMA",
            Scheduler::UStdma => "U-STDMA",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScheduleWarning {
    /// Starts are spaced by `per`, but a cycle lasts longer, so consecutive
    /// transmissions may physically overlap.
    PeriodShorterThanDuty { period_s: f64, duty_dur_s: f64 },
}

impl fmt::Display for ScheduleWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScheduleWarning::PeriodShorterThanDuty {
                period_s,
                duty_dur_s,
            } => write!(
                f,
                "period {period_s:.3} s is shorter than the {duty_dur_s} s duty-cycle; transmissions may overlap"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub scheduler: Scheduler,
    /// Sorted by start time, then node id.
    pub events: Vec<DutyCycleEvent>,
    pub horizon_s: f64,
    pub period_s: f64,
    pub duty_dur_s: f64,
    pub warnings: Vec<ScheduleWarning>,
}

impl Schedule {
    pub fn starts(&self) -> impl Iterator<Item = f64> + '_ {
        self.events.iter().map(|e| e.start_s)
    }

    /// Start times of one node, ascending.
    pub fn starts_of(&self, node_id: u32) -> Vec<f64> {
        self.events
            .iter()
            .filter(|e| e.node_id == node_id)
            .map(|e| e.start_s)
            .collect()
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }
}

/// `min(T_s) / cluster size`.
pub fn ideal_period(cluster: &ClusterNodes) -> Result<f64, ScheduleError> {
    if cluster.is_empty() {
        return Err(ScheduleError::EmptyCluster);
    }
    let min = cluster
        .entries
        .iter()
        .map(|e| e.sleep_s)
        .fold(f64::INFINITY, f64::min);
    Ok(min / cluster.len() as f64)
}

fn too_close(a: f64, b: f64, per: f64) -> bool {
    (a - b).abs() < per - TIME_EPS
}

/// True iff some scheduled start lies strictly within `per` of `candidate`.
pub fn has_conflict(events: &[DutyCycleEvent], candidate: f64, per: f64) -> bool {
    events.iter().any(|e| too_close(e.start_s, candidate, per))
}

/// Sorted start times of a cluster under construction.
#[derive(Debug, Default)]
struct Timeline {
    starts: Vec<f64>,
}

impl Timeline {
    /// Distance to the nearest start within `per` of `t`, if any.
    fn nearest_conflict(&self, t: f64, per: f64) -> Option<f64> {
        let lo = self.starts.partition_point(|&s| s <= t - per);
        self.starts[lo..]
            .iter()
            .take_while(|&&s| s < t + per)
            .filter(|&&s| too_close(s, t, per))
            .map(|&s| (s - t).abs())
            .reduce(f64::min)
    }

    fn insert(&mut self, t: f64) {
        let at = self.starts.partition_point(|&s| s <= t);
        self.starts.insert(at, t);
    }

    /// Push `candidate` later until it is conflict-free. `None` once it
    /// passes the horizon.
    fn resolve(&self, mut candidate: f64, per: f64, horizon: f64) -> Option<f64> {
        while candidate <= horizon {
            match self.nearest_conflict(candidate, per) {
                None => return Some(candidate),
                Some(d) => candidate += (per - d).max(TIME_EPS),
            }
        }
        None
    }
}

fn check_inputs(cluster: &ClusterNodes, horizon_s: f64, duty_dur_s: f64) -> Result<f64, ScheduleError> {
    let per = ideal_period(cluster)?;
    if !(horizon_s > 0.0 && horizon_s.is_finite()) {
        return Err(ScheduleError::BadHorizon(horizon_s));
    }
    if !(duty_dur_s > 0.0 && duty_dur_s.is_finite()) {
        return Err(ScheduleError::BadDuration(duty_dur_s));
    }
    if !(per > 0.0) {
        return Err(ScheduleError::BadPeriod(per));
    }
    Ok(per)
}

fn finish(
    scheduler: Scheduler,
    mut events: Vec<DutyCycleEvent>,
    horizon_s: f64,
    period_s: f64,
    duty_dur_s: f64,
) -> Schedule {
    events.sort_by(|a, b| a.start_s.total_cmp(&b.start_s).then(a.node_id.cmp(&b.node_id)));
    let mut warnings = Vec::new();
    if scheduler == Scheduler::BstTdma && period_s < duty_dur_s - TIME_EPS {
        warnings.push(ScheduleWarning::PeriodShorterThanDuty {
            period_s,
            duty_dur_s,
        });
    }
    Schedule {
        scheduler,
        events,
        horizon_s,
        period_s,
        duty_dur_s,
        warnings,
    }
}

/// Balanced space/time TDMA for one cluster.
///
/// Each node's first cycle is placed by resolving a candidate at `t = T_s`
/// (the node starts empty), in cluster order. After that, passes over the
/// cluster add at most one cycle per node until a pass adds nothing.
pub fn schedule_bst_tdma(
    cluster: &ClusterNodes,
    horizon_s: f64,
    duty_dur_s: f64,
) -> Result<Schedule, ScheduleError> {
    let per = check_inputs(cluster, horizon_s, duty_dur_s)?;
    let mut timeline = Timeline::default();
    let mut events = Vec::new();
    let mut last: Vec<Option<f64>> = vec![None; cluster.len()];

    for (slot, node) in cluster.entries.iter().enumerate() {
        if let Some(t) = timeline.resolve(node.sleep_s, per, horizon_s) {
            timeline.insert(t);
            events.push(DutyCycleEvent {
                node_id: node.node_id,
                start_s: t,
            });
            last[slot] = Some(t);
        }
    }

    loop {
        let mut updated = false;
        for (slot, node) in cluster.entries.iter().enumerate() {
            let Some(prev) = last[slot] else { continue };
            let candidate = prev + node.sleep_s + duty_dur_s;
            if let Some(t) = timeline.resolve(candidate, per, horizon_s) {
                timeline.insert(t);
                events.push(DutyCycleEvent {
                    node_id: node.node_id,
                    start_s: t,
                });
                last[slot] = Some(t);
                updated = true;
            }
        }
        if !updated {
            break;
        }
    }

    Ok(finish(Scheduler::BstTdma, events, horizon_s, per, duty_dur_s))
}

/// Unbalanced baseline: node `i` fires at `T_s`, then every `T_s + dur`,
/// with no regard for the rest of the cluster.
pub fn schedule_u_stdma(
    cluster: &ClusterNodes,
    horizon_s: f64,
    duty_dur_s: f64,
) -> Result<Schedule, ScheduleError> {
    let per = check_inputs(cluster, horizon_s, duty_dur_s)?;
    let mut events = Vec::new();
    for node in &cluster.entries {
        let mut t = node.sleep_s;
        while t <= horizon_s {
            events.push(DutyCycleEvent {
                node_id: node.node_id,
                start_s: t,
            });
            t = t + node.sleep_s + duty_dur_s;
        }
    }
    Ok(finish(Scheduler::UStdma, events, horizon_s, per, duty_dur_s))
}

pub fn schedule(
    scheduler: Scheduler,
    cluster: &ClusterNodes,
    horizon_s: f64,
    duty_dur_s: f64,
) -> Result<Schedule, ScheduleError> {
    match scheduler {
        Scheduler::BstTdma => schedule_bst_tdma(cluster, horizon_s, duty_dur_s),
        Scheduler::UStdma => schedule_u_stdma(cluster, horizon_s, duty_dur_s),
    }
}
