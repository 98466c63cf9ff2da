//! BST-TDMA on a five-node cluster over half an hour, drawn as a timeline.

use liot_sched::scheduler::{schedule_bst_tdma, ClusterNodes};

fn main() {
    let cluster = ClusterNodes::from_pairs([(1, 306.0), (2, 235.0), (3, 666.0), (4, 505.0), (5, 546.0)]).unwrap();
    let horizon = 1800.0;
    let s = schedule_bst_tdma(&cluster, horizon, 4.45).unwrap();
    println!("per = {:.2} s, {} duty-cycles", s.period_s, s.len());

    let cols = 90;
    for id in cluster.node_ids() {
        let mut row = vec!['·'; cols];
        for t in s.starts_of(id) {
            row[((t / horizon) * (cols - 1) as f64) as usize] = '█';
        }
        println!("node {id} {}", row.into_iter().collect::<String>());
    }
    println!();
    for id in cluster.node_ids() {
        let starts = s.starts_of(id);
        let gaps: Vec<String> = starts.windows(2).map(|w| format!("{:.1}", w[1] - w[0])).collect();
        println!("node {id}: starts {:?}", starts.iter().map(|t| (t * 10.0).round() / 10.0).collect::<Vec<_>>());
        println!("        gaps   [{}]", gaps.join(", "));
    }
}
