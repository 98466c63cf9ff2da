//! How the interval mode and the share of gaps at `per` evolve as the
//! scheduling horizon grows from one hour to 60 hours.

use liot_sched::runner::{run_sweep, SweepParameter};
use liot_sched::ExperimentConfig;

fn main() {
    let mut config = ExperimentConfig::reference_cluster();
    config.experiment.horizons_s = [1, 2, 6, 12, 24, 48, 60].iter().map(|h| *h as f64 * 3600.0).collect();
    config.experiment.parallel = true;

    println!("{:>6} {:<7} {:>7} {:>8} {:>8}", "hours", "sched", "events", "mode[s]", "at_per");
    for point in run_sweep(&config) {
        let SweepParameter::HorizonS(h) = point.parameter else { continue };
        for r in &point.rows {
            println!(
                "{:>6} {:<7} {:>7} {:>8.1} {:>8.3}",
                h / 3600.0,
                r.scheduler.tag(),
                r.events,
                r.mode_s.unwrap_or(f64::NAN),
                r.fraction_at_per.unwrap_or(f64::NAN)
            );
        }
    }
}
