use liot_sched::runner::{run_experiment_with, run_sweep, SweepParameter};
use liot_sched::scheduler::Scheduler;
use liot_sched::{run_experiment, ExperimentConfig};

fn small() -> ExperimentConfig {
    let mut c = ExperimentConfig::reference();
    c.experiment.node_count = 20;
    c.experiment.horizons_s = vec![3600.0, 7200.0];
    c.experiment.sweep_node_counts = vec![5, 10, 20];
    c
}

#[test]
fn runs_are_reproducible() {
    let c = small();
    assert_eq!(run_experiment(&c).unwrap(), run_experiment(&c).unwrap());
    let mut other = c.clone();
    other.experiment.rng_seed += 1;
    assert_ne!(run_experiment(&c).unwrap().positions, run_experiment(&other).unwrap().positions);
}

#[test]
fn sweep_is_reproducible_and_parallel_safe() {
    let c = small();
    let a = run_sweep(&c);
    assert_eq!(a, run_sweep(&c));
    let mut par = c.clone();
    par.experiment.parallel = true;
    assert_eq!(a, run_sweep(&par));
    let params: Vec<SweepParameter> = a.iter().map(|p| p.parameter).collect();
    assert_eq!(
        params,
        [
            SweepParameter::HorizonS(3600.0),
            SweepParameter::HorizonS(7200.0),
            SweepParameter::NodeCount(5),
            SweepParameter::NodeCount(10),
            SweepParameter::NodeCount(20),
        ]
    );
}

#[test]
fn sweep_point_matches_single_run() {
    let c = small();
    let points = run_sweep(&c);
    let single = run_experiment_with(&c, 10, 3600.0).unwrap();
    let p = points.iter().find(|p| p.parameter == SweepParameter::NodeCount(10)).unwrap();
    assert_eq!(p.rows, single.summary_rows(SweepParameter::NodeCount(10)));
}

/// Smaller populations are prefixes of larger ones under the same seed.
#[test]
fn node_count_points_share_placements() {
    let c = small();
    let big = run_experiment_with(&c, 20, 3600.0).unwrap();
    let few = run_experiment_with(&c, 5, 3600.0).unwrap();
    assert_eq!(few.positions[..], big.positions[..5]);
}

#[test]
fn every_feasible_node_is_scheduled_once_per_scheduler() {
    let r = run_experiment(&small()).unwrap();
    let mut ids: Vec<u32> = r.clusters.iter().flat_map(|c| c.nodes.node_ids()).collect();
    ids.sort_unstable();
    let expected: Vec<u32> = (1..=20).filter(|id| !r.infeasible.iter().any(|b| b.node_id == *id)).collect();
    assert_eq!(ids, expected);
    for c in &r.clusters {
        for which in Scheduler::ALL {
            let s = c.schedule(which);
            assert!(s.events.iter().all(|e| c.nodes.sleep_of(e.node_id).is_some()));
        }
    }
}

#[test]
fn failed_sweep_point_does_not_stop_the_sweep() {
    let mut c = small();
    c.experiment.override_t_s = Some(vec![(1, 300.0), (2, 400.0)]);
    c.experiment.node_count = 2;
    c.experiment.sweep_node_counts = vec![1, 5];
    let points = run_sweep(&c);
    assert_eq!(points.len(), 4);
    assert!(points[2].error.is_none());
    assert!(points[3].error.is_some());
}
