//! From light level to sleep time, and a check that a node's buffer never
//! runs dry over a day of U-STDMA cycles.

use liot_sched::energy::{energy_feasible, harvested_power, sleep_time};
use liot_sched::scheduler::{schedule_u_stdma, ClusterNodes};
use liot_sched::{HarvestModel, PowerProfile};

fn main() {
    let profile = PowerProfile::reference();
    let harvest = HarvestModel::default();

    println!("{:>8} {:>12} {:>10}", "lux", "P_harv [mW]", "T_s [s]");
    for lux in [50.0, 100.0, 200.0, 329.0, 400.0, 800.0] {
        let p = harvested_power(&harvest, lux).unwrap();
        match sleep_time(&profile, p) {
            Ok(t) => println!("{lux:>8.0} {:>12.4} {t:>10.1}", p * 1e3),
            Err(e) => println!("{lux:>8.0} {:>12.4}   {e}", p * 1e3),
        }
    }

    let p = harvested_power(&harvest, 329.0).unwrap();
    let t_s = sleep_time(&profile, p).unwrap();
    let cluster = ClusterNodes::from_pairs([(1, t_s)]).unwrap();
    let s = schedule_u_stdma(&cluster, 86_400.0, profile.duty_dur_s).unwrap();
    let starts: Vec<f64> = s.starts().collect();
    let report = energy_feasible(&profile, p, &starts, 86_400.0, 1e-9).unwrap();
    println!(
        "\n{} cycles in 24 h at 329 lux: feasible={}, lowest buffer {:.2e} J at t={:.1} s",
        starts.len(),
        report.feasible,
        report.min_buffer_j,
        report.min_at_s
    );
}
