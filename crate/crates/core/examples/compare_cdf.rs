//! BST-TDMA vs. U-STDMA on the same cluster over 24 h: the empirical CDF of
//! the gaps between consecutive duty-cycles, sampled at a few points.

use liot_sched::metrics::IntervalStats;
use liot_sched::scheduler::{schedule, ClusterNodes, Scheduler};

fn main() {
    let cluster = ClusterNodes::from_pairs([(1, 306.0), (2, 235.0), (3, 666.0), (4, 505.0), (5, 546.0)]).unwrap();
    let stats: Vec<(Scheduler, IntervalStats)> = Scheduler::ALL
        .iter()
        .map(|&w| {
            let s = schedule(w, &cluster, 86_400.0, 4.45).unwrap();
            (w, IntervalStats::from_schedule(&s, 1.0).unwrap())
        })
        .collect();

    print!("{:>10}", "gap ≤ [s]");
    for (w, _) in &stats {
        print!("{:>10}", w.tag());
    }
    println!();
    for x in [1.0, 10.0, 30.0, 46.0, 47.0, 48.0, 60.0, 100.0, 200.0, 400.0] {
        print!("{x:>10.0}");
        for (_, st) in &stats {
            print!("{:>10.3}", st.cdf.eval(x));
        }
        println!();
    }
    println!();
    for (w, st) in &stats {
        println!(
            "{:<7} intervals {:>5}  mode {:>6.1} s  at per {:.3}  min {:.2} s  max {:.2} s",
            w.tag(),
            st.intervals_s.len(),
            st.mode_s,
            st.fraction_at_per,
            st.min_gap_s,
            st.max_gap_s
        );
    }
}
