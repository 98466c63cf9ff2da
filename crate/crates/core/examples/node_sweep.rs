//! Node-count sweep over the full room: nodes are placed at random, cluster
//! around their nearest AP, and each cluster is scheduled for 24 h.
//!
//! Placements are shared between points, so a smaller population is always
//! a subset of a larger one.

use liot_sched::runner::run_sweep;
use liot_sched::scheduler::Scheduler;
use liot_sched::ExperimentConfig;

fn main() {
    let mut config = ExperimentConfig::reference();
    config.experiment.horizons_s = vec![86_400.0];
    config.experiment.sweep_node_counts = (1..=10).map(|k| k * 9).collect();
    config.experiment.parallel = true;

    println!("{:>6} {:>9} {:>12} {:>12} {:>12}", "nodes", "clusters", "mean per[s]", "bst min[s]", "u min[s]");
    for point in run_sweep(&config).into_iter().skip(1) {
        let rows = |w: Scheduler| point.rows.iter().filter(move |r| r.scheduler == w);
        let clusters = rows(Scheduler::BstTdma).count();
        let mean_per = rows(Scheduler::BstTdma).map(|r| r.period_s).sum::<f64>() / clusters as f64;
        let min_gap = |w| rows(w).filter_map(|r| r.min_gap_s).fold(f64::INFINITY, f64::min);
        println!(
            "{:>6} {clusters:>9} {mean_per:>12.2} {:>12.2} {:>12.3}",
            point.parameter.value(),
            min_gap(Scheduler::BstTdma),
            min_gap(Scheduler::UStdma)
        );
    }
}
