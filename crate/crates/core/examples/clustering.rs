//! Random placement, nearest-AP clustering and per-node sleep times for one
//! seeded population.

use liot_sched::runner::prepare_clusters;
use liot_sched::ExperimentConfig;

fn main() {
    let mut config = ExperimentConfig::reference();
    config.experiment.node_count = 27;
    let prep = prepare_clusters(&config, config.experiment.node_count).unwrap();

    for (ap, nodes) in &prep.clusters {
        let ap_pos = config.scenario.aps.iter().find(|a| a.id == *ap).unwrap().position;
        println!("AP {ap} at ({}, {}): {} nodes", ap_pos.x, ap_pos.y, nodes.len());
        for n in nodes.entries() {
            let p = prep.positions.iter().find(|p| p.node_id == n.node_id).unwrap().position;
            println!(
                "  node {:>2} ({:.2}, {:.2})  {:>6.1} lux  T_s {:>6.1} s",
                n.node_id, p.x, p.y, prep.illuminance[&n.node_id], n.sleep_s
            );
        }
    }
    for bad in &prep.infeasible {
        println!("node {} left out: {}", bad.node_id, bad.reason);
    }
}
