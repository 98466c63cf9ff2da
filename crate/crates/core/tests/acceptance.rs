//! Acceptance criteria. Each test prints one `[PASS]`/`[FAIL]` line; run with
//! `cargo test --test acceptance -- --nocapture --test-threads=1` to see them.

use std::cell::Cell;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

use liot_sched::energy::{energy_feasible, PowerProfile};
use liot_sched::geometry::{assign_clusters, lambertian_index, total_illuminance, NodePosition, RoomScenario, Vec3};
use liot_sched::metrics::{bin_index, combined_intervals, IntervalStats};
use liot_sched::runner::{run_experiment, run_experiment_with, ENERGY_TOLERANCE_J};
use liot_sched::scheduler::{ideal_period, schedule_bst_tdma, schedule_u_stdma, ClusterNodes, Schedule, TIME_EPS};
use liot_sched::ExperimentConfig;
use proptest::prelude::*;
use proptest::test_runner::{Config as PropConfig, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FIVE_NODES: [(u32, f64); 5] = [(1, 306.0), (2, 235.0), (3, 666.0), (4, 505.0), (5, 546.0)];
const DUR: f64 = 4.45;
const HOUR: f64 = 3600.0;

fn report(id: &str, pass: bool, detail: impl AsRef<str>) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("[{tag}] {id}: {}", detail.as_ref());
}

fn five_node_cluster() -> ClusterNodes {
    ClusterNodes::from_pairs(FIVE_NODES).unwrap()
}

fn stats(s: &Schedule) -> IntervalStats {
    IntervalStats::from_schedule(s, 1.0).unwrap()
}

#[test]
fn c1_ideal_period_of_five_node_set() {
    let per = ideal_period(&five_node_cluster()).unwrap();
    let pass = per == 47.0;
    report("C1", pass, format!("ideal_period([306,235,666,505,546]) = {per}"));
    assert!(pass);
}

#[test]
fn c2_bst_fraction_at_per_over_24h() {
    let t0 = Instant::now();
    let s = schedule_bst_tdma(&five_node_cluster(), 24.0 * HOUR, DUR).unwrap();
    let iv = combined_intervals(&s);
    let in_bin = iv.iter().filter(|&&x| (47.0 - TIME_EPS..48.0).contains(&x)).count();
    let frac = in_bin as f64 / iv.len() as f64;
    let st = stats(&s);
    let elapsed = t0.elapsed();
    let pass = frac >= 0.50 && st.fraction_at_per == frac && elapsed < Duration::from_secs(1);
    report(
        "C2",
        pass,
        format!(
            "{in_bin}/{} intervals in [47,48) = {frac:.4} (need ≥ 0.50), {:?}",
            iv.len(),
            elapsed
        ),
    );
    assert!(pass);
}

/// Mode of the gaps between consecutive cycles of the same node. Not one of
/// the criteria; printed to show which reading of the baseline's mode grows
/// past 5·per.
fn per_node_gap_mode(s: &Schedule) -> f64 {
    let mut ids: Vec<u32> = s.events.iter().map(|e| e.node_id).collect();
    ids.sort_unstable();
    ids.dedup();
    let gaps: Vec<f64> = ids
        .iter()
        .flat_map(|&id| {
            let st = s.starts_of(id);
            st.windows(2).map(|w| w[1] - w[0]).collect::<Vec<_>>()
        })
        .collect();
    liot_sched::metrics::interval_mode(&gaps, 1.0).unwrap()
}

#[test]
fn c3_mode_versus_horizon() {
    let t0 = Instant::now();
    let cluster = five_node_cluster();
    let per_bin = bin_index(47.0, 1.0);
    let mut bst_ok = true;
    let mut ust_ok = true;
    let mut ust_modes = Vec::new();
    let mut per_node_modes = Vec::new();
    for h in 1..=60 {
        let horizon = h as f64 * HOUR;
        let bst = stats(&schedule_bst_tdma(&cluster, horizon, DUR).unwrap());
        if (bin_index(bst.mode_s, 1.0) - per_bin).abs() > 1 {
            bst_ok = false;
            println!("  BST-TDMA mode {} at {h} h outside the per bin", bst.mode_s);
        }
        let ust_sched = schedule_u_stdma(&cluster, horizon, DUR).unwrap();
        let ust = stats(&ust_sched);
        // crossing may sit anywhere in 7..=11 h
        if h < 7 && ust.mode_s > 5.0 * 47.0 || h > 11 && ust.mode_s <= 5.0 * 47.0 {
            ust_ok = false;
        }
        ust_modes.push((h, ust.mode_s));
        per_node_modes.push((h, per_node_gap_mode(&ust_sched)));
    }
    let elapsed = t0.elapsed();
    report("C3a", bst_ok, "BST-TDMA combined-interval mode in the per=47 bin (±1) for 1..60 h");
    report(
        "C3b",
        ust_ok,
        format!(
            "U-STDMA combined-interval mode > 235 s beyond 11 h; observed modes at 6/12/24/48 h: {:?}",
            [6, 12, 24, 48].map(|h| ust_modes[h - 1].1)
        ),
    );
    println!(
        "  (diagnostic) U-STDMA same-node gap mode at 6/12/24/48 h: {:?}",
        [6, 12, 24, 48].map(|h| per_node_modes[h - 1].1)
    );
    let fast = elapsed < Duration::from_secs(30);
    report("C3", bst_ok && ust_ok && fast, format!("C3a {bst_ok}, C3b {ust_ok}, runtime {elapsed:?} (limit 30 s)"));
    assert!(bst_ok, "BST-TDMA side");
    assert!(ust_ok, "U-STDMA side: combined-interval mode never exceeds 5·per");
    assert!(fast);
}

/// Sleep times for `n` nodes dropped uniformly into the centre AP's cell
/// of the reference room, through the illuminance and energy models.
fn pipeline_sleep_times(rng: &mut ChaCha8Rng, n: u32) -> Vec<(u32, f64)> {
    let room = RoomScenario::reference();
    let profile = PowerProfile::reference();
    let harvest = liot_sched::HarvestModel::default();
    (1..=n)
        .map(|id| {
            let node = NodePosition {
                node_id: id,
                position: Vec3::new(rng.random_range(3.0..6.0), rng.random_range(3.0..6.0), 0.0),
            };
            let lux = total_illuminance(&room, &node).unwrap();
            let p = liot_sched::energy::harvested_power(&harvest, lux).unwrap();
            (id, liot_sched::energy::sleep_time(&profile, p).unwrap())
        })
        .collect()
}

fn mode_misses(mut draw: impl FnMut(&mut ChaCha8Rng, u32) -> Vec<(u32, f64)>) -> (usize, Vec<(u64, u32, f64, f64)>) {
    let mut checked = 0;
    let mut misses = Vec::new();
    for seed in 0..10u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for n in 2..=40u32 {
            let cluster = ClusterNodes::from_pairs(draw(&mut rng, n)).unwrap();
            let s = schedule_bst_tdma(&cluster, 24.0 * HOUR, DUR).unwrap();
            let st = stats(&s);
            checked += 1;
            if !st.mode_bin_contains(s.period_s) {
                misses.push((seed, n, s.period_s, st.mode_s));
            }
        }
    }
    (checked, misses)
}

#[test]
fn c4_mode_tracks_per_across_node_counts() {
    let t0 = Instant::now();
    let (checked, misses) = mode_misses(pipeline_sleep_times);
    let elapsed = t0.elapsed();
    let pass = misses.is_empty() && elapsed < Duration::from_secs(60);
    report(
        "C4",
        pass,
        format!("{checked} clusters (10 seeds × n=2..40, T_s from nodes placed in one AP cell, 24 h), misses {misses:?}, {elapsed:?}"),
    );
    // Wider, non-physical spread: a pair whose sleep times differ by more than
    // 2× is dominated by the faster node's own gaps.
    let (wide, wide_misses) = mode_misses(|rng, n| (1..=n).map(|id| (id, rng.random_range(235.0..666.0))).collect());
    println!("  (diagnostic) T_s ~ U[235,666) s: {} of {wide} clusters miss: {wide_misses:?}", wide_misses.len());
    assert!(pass);
}

/// Both scheduler invariants, checked without the scheduler's own index.
fn check_invariants(cluster: &ClusterNodes, s: &Schedule) -> Result<(), String> {
    let per = s.period_s;
    let mut starts: Vec<f64> = s.starts().collect();
    starts.sort_by(f64::total_cmp);
    // for sorted values the closest pair is adjacent
    if let Some(w) = starts.windows(2).find(|w| w[1] - w[0] < per - TIME_EPS) {
        return Err(format!("starts {} and {} closer than per={per}", w[0], w[1]));
    }
    for node in cluster.entries() {
        let own = s.starts_of(node.node_id);
        if let Some(&first) = own.first() {
            if first < node.sleep_s - TIME_EPS {
                return Err(format!("node {} first cycle at {first} before T_s", node.node_id));
            }
        }
        if let Some(w) = own.windows(2).find(|w| w[1] - w[0] < node.sleep_s + s.duty_dur_s - TIME_EPS) {
            return Err(format!("node {} cycles {} and {} too close", node.node_id, w[0], w[1]));
        }
    }
    if s.starts().any(|t| t > s.horizon_s) {
        return Err("event past horizon".into());
    }
    Ok(())
}

fn random_cluster() -> impl Strategy<Value = (Vec<f64>, f64, f64)> {
    (
        prop::collection::vec(20.0f64..1000.0, 1..=12),
        0.5f64..10.0,
        100.0f64..20_000.0,
    )
}

fn cluster_of(ts: &[f64]) -> ClusterNodes {
    ClusterNodes::from_pairs(ts.iter().enumerate().map(|(i, &t)| (i as u32 + 1, t))).unwrap()
}

#[test]
fn c5_scheduler_invariants_on_random_clusters() {
    let mut runner = TestRunner::new_with_rng(
        PropConfig {
            cases: 200,
            ..PropConfig::default()
        },
        proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha),
    );
    let cases = Cell::new(0usize);
    let result = runner.run(&random_cluster(), |(ts, dur, horizon)| {
        cases.set(cases.get() + 1);
        let c = cluster_of(&ts);
        let a = schedule_bst_tdma(&c, horizon, dur).unwrap();
        let b = schedule_bst_tdma(&c, horizon, dur).unwrap();
        prop_assert_eq!(&a, &b);
        check_invariants(&c, &a).map_err(TestCaseError::fail)?;
        Ok(())
    });
    let cases = cases.get();
    let pass = result.is_ok() && cases >= 200;
    report(
        "C5",
        pass,
        format!("{cases} random clusters: separation ≥ per − 1e-9, node spacing ≥ T_s + dur − 1e-9, deterministic; {result:?}"),
    );
    assert!(pass);
}

fn all_feasible(profile: &PowerProfile, cluster: &ClusterNodes, s: &Schedule) -> Result<f64, String> {
    let mut worst = f64::INFINITY;
    for node in cluster.entries() {
        let p_harv = profile.harvest_for_sleep_time(node.sleep_s);
        let r = energy_feasible(profile, p_harv, &s.starts_of(node.node_id), s.horizon_s, ENERGY_TOLERANCE_J)
            .map_err(|e| e.to_string())?;
        worst = worst.min(r.min_buffer_j);
        if r.min_buffer_j < -1e-9 {
            return Err(format!("node {} dips to {} J", node.node_id, r.min_buffer_j));
        }
    }
    Ok(worst)
}

#[test]
fn c6_every_scheduled_node_is_energy_feasible() {
    let mut checked = 0usize;
    let mut worst = f64::INFINITY;
    let mut failures = Vec::new();

    // the five-node set under both schedulers
    let profile = PowerProfile::reference();
    let c = five_node_cluster();
    for s in [
        schedule_bst_tdma(&c, 24.0 * HOUR, DUR).unwrap(),
        schedule_u_stdma(&c, 24.0 * HOUR, DUR).unwrap(),
    ] {
        match all_feasible(&profile, &c, &s) {
            Ok(w) => worst = worst.min(w),
            Err(e) => failures.push(e),
        }
        checked += c.len();
    }

    // the full illumination pipeline, harvest taken from each node's lux
    let r = run_experiment(&ExperimentConfig::reference()).unwrap();
    for e in r.energy() {
        checked += 1;
        worst = worst.min(e.report.min_buffer_j);
        if e.report.min_buffer_j < -1e-9 {
            failures.push(format!("pipeline node {} ({:?})", e.node_id, e.scheduler));
        }
    }

    // random clusters with varied energy constants
    let mut runner = TestRunner::new_with_rng(
        PropConfig {
            cases: 200,
            ..PropConfig::default()
        },
        proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha),
    );
    let random_checked = Cell::new(0usize);
    let res = runner.run(&(random_cluster(), 0.01f64..1.0, 0.0f64..1e-3), |((ts, dur, horizon), e_dev, p_sleep)| {
        let profile = PowerProfile {
            e_dev_j: e_dev,
            duty_dur_s: dur,
            p_sleep_w: p_sleep,
            ..PowerProfile::reference()
        };
        let c = cluster_of(&ts);
        for s in [
            schedule_bst_tdma(&c, horizon, dur).unwrap(),
            schedule_u_stdma(&c, horizon, dur).unwrap(),
        ] {
            all_feasible(&profile, &c, &s).map_err(TestCaseError::fail)?;
            random_checked.set(random_checked.get() + c.len());
        }
        Ok(())
    });
    if let Err(e) = res {
        failures.push(e.to_string());
    }
    checked += random_checked.get();

    let pass = failures.is_empty();
    report(
        "C6",
        pass,
        format!("{checked} node schedules with E_buf = 0, lowest buffer {worst:.3e} J, failures {failures:?}"),
    );
    assert!(pass);
}

/// Illuminance evaluated straight from the Lambertian formulas: index from
/// the semi-angle, distance vector AP − node, incidence angle through arccos
/// against the downward emission axis, then a nine-term sum.
fn oracle_total_lux(s: &RoomScenario, p: [f64; 3]) -> f64 {
    let m = -(2f64.ln()) / (s.semi_angle_deg * PI / 180.0).cos().ln();
    let axis = [0.0, 0.0, 1.0]; // −R, R = [0, 0, −1]
    let mut sum = 0.0;
    for ap in &s.aps {
        let q = [ap.position.x, ap.position.y, ap.position.z];
        let d = [q[0] - p[0], q[1] - p[1], q[2] - p[2]];
        let dist = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
        let phi = ((axis[0] * d[0] + axis[1] * d[1] + axis[2] * d[2]) / dist).acos();
        sum += s.luminous_flux_lm * (m + 1.0) / (2.0 * PI * dist * dist) * phi.cos().powf(m).abs();
    }
    sum
}

#[test]
fn c7_illumination_matches_oracle() {
    let s = RoomScenario::reference();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for i in 0..25 {
        let p = [
            rng.random_range(0.0..9.0),
            rng.random_range(0.0..9.0),
            rng.random_range(0.0..2.5),
        ];
        let node = NodePosition {
            node_id: i,
            position: Vec3::new(p[0], p[1], p[2]),
        };
        let got = total_illuminance(&s, &node).unwrap();
        let want = oracle_total_lux(&s, p);
        worst = worst.max((got / want - 1.0).abs());
    }
    // 4.818841679306418009164808661624872912337 (mpmath, 40 digits)
    let m30 = lambertian_index(30.0).unwrap();
    let m45 = lambertian_index(45.0).unwrap();
    let m60 = lambertian_index(60.0).unwrap();
    let m_ok = (m30 - 4.818_841_679_306_418).abs() < 1e-12 && (m45 - 2.0).abs() < 1e-12 && (m60 - 1.0).abs() < 1e-12;
    let pass = worst < 1e-9 && m_ok;
    report(
        "C7",
        pass,
        format!("25 points, worst relative error {worst:.2e}; m(30°)={m30}, m(45°)={m45}, m(60°)={m60}"),
    );
    assert!(pass);
}

#[test]
fn c8_clustering_matches_nearest_centroid() {
    let s = RoomScenario::reference();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let nodes: Vec<NodePosition> = (1..=1000)
        .map(|node_id| NodePosition {
            node_id,
            position: Vec3::new(rng.random_range(0.0..9.0), rng.random_range(0.0..9.0), 0.0),
        })
        .collect();
    let set = assign_clusters(&s, &nodes).unwrap();
    let centroids: BTreeMap<u32, (f64, f64)> = s.aps.iter().map(|a| (a.id, (a.position.x, a.position.y))).collect();
    let mut disagreements = 0;
    for n in &nodes {
        let mut best = (f64::INFINITY, 0u32);
        for (&id, &(cx, cy)) in &centroids {
            let d = ((n.position.x - cx).powi(2) + (n.position.y - cy).powi(2)).sqrt();
            if d < best.0 {
                best = (d, id);
            }
        }
        if set.serving[&n.node_id] != best.1 {
            disagreements += 1;
        }
    }
    let pass = disagreements == 0;
    report("C8", pass, format!("1000 nodes, {disagreements} disagreements with brute-force nearest centroid"));
    assert!(pass);
}

#[test]
fn c9_short_horizon_schedule_shape() {
    let s = schedule_bst_tdma(&five_node_cluster(), 30.0 * 60.0, DUR).unwrap();
    let present: Vec<u32> = FIVE_NODES
        .iter()
        .map(|&(id, _)| id)
        .filter(|&id| !s.starts_of(id).is_empty())
        .collect();
    let uneven: Vec<u32> = FIVE_NODES
        .iter()
        .map(|&(id, _)| id)
        .filter(|&id| {
            let gaps: Vec<f64> = s.starts_of(id).windows(2).map(|w| w[1] - w[0]).collect();
            gaps.windows(2).any(|g| (g[0] - g[1]).abs() > TIME_EPS)
        })
        .collect();
    let pass = present.len() == 5 && !uneven.is_empty();
    report(
        "C9",
        pass,
        format!("nodes present {present:?}; nodes with unequal gaps {uneven:?}; {} events", s.len()),
    );
    assert!(pass);
}

#[test]
fn pipeline_override_reproduces_period() {
    let r = run_experiment_with(&ExperimentConfig::reference_cluster(), 5, 30.0 * 60.0).unwrap();
    assert_eq!(r.clusters[0].bst.period_s, 47.0);
}
