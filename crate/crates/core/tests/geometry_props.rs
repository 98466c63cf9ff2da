use liot_sched::geometry::{
    ap_illuminance, assign_clusters, total_illuminance, AccessPoint, NodePosition, RoomScenario, Vec3,
};
use liot_sched::runner::place_nodes_n;
use liot_sched::ExperimentConfig;
use proptest::prelude::*;

fn node(x: f64, y: f64, z: f64) -> NodePosition {
    NodePosition { node_id: 1, position: Vec3::new(x, y, z) }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// Straight below an AP, lux falls off with the square of the height.
    #[test]
    fn inverse_square_on_axis(z1 in 0.0f64..2.5, z2 in 0.0f64..2.5) {
        let room = RoomScenario::reference();
        let ap = room.aps[4];
        let i1 = ap_illuminance(&room, &ap, &node(4.5, 4.5, z1)).unwrap();
        let i2 = ap_illuminance(&room, &ap, &node(4.5, 4.5, z2)).unwrap();
        let (d1, d2) = (3.0 - z1, 3.0 - z2);
        prop_assert!((i1 * d1 * d1 - i2 * d2 * d2).abs() < 1e-9 * i1 * d1 * d1);
    }

    #[test]
    fn ap_order_does_not_matter(x in 0.0f64..9.0, y in 0.0f64..9.0, rot in 0usize..9) {
        let room = RoomScenario::reference();
        let mut shuffled = room.clone();
        shuffled.aps.rotate_left(rot);
        shuffled.aps.reverse();
        let a = total_illuminance(&room, &node(x, y, 0.0)).unwrap();
        let b = total_illuminance(&shuffled, &node(x, y, 0.0)).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a);
    }

    /// The reference layout is symmetric about both mid-lines and the diagonal.
    #[test]
    fn reference_room_symmetry(x in 0.0f64..9.0, y in 0.0f64..9.0) {
        let room = RoomScenario::reference();
        let lux = |x: f64, y: f64| total_illuminance(&room, &node(x, y, 0.0)).unwrap();
        let base = lux(x, y);
        for other in [lux(9.0 - x, y), lux(x, 9.0 - y), lux(y, x)] {
            prop_assert!((base - other).abs() <= 1e-9 * base);
        }
    }

    #[test]
    fn clusters_partition_nodes(pts in prop::collection::vec((0.0f64..=9.0, 0.0f64..=9.0), 0..60)) {
        let room = RoomScenario::reference();
        let nodes: Vec<NodePosition> = pts.iter().enumerate()
            .map(|(i, &(x, y))| NodePosition { node_id: i as u32, position: Vec3::new(x, y, 0.0) })
            .collect();
        let set = assign_clusters(&room, &nodes).unwrap();
        let total: usize = set.clusters.values().map(Vec::len).sum();
        prop_assert_eq!(total, nodes.len());
        for n in &nodes {
            let ap_id = set.serving[&n.node_id];
            let d = |ap: &AccessPoint| (ap.position.x - n.position.x).powi(2) + (ap.position.y - n.position.y).powi(2);
            let mine = d(room.aps.iter().find(|a| a.id == ap_id).unwrap());
            prop_assert!(room.aps.iter().all(|a| mine <= d(a)));
        }
    }
}

/// Uniform placement puts about a ninth of the nodes in each cell.
#[test]
fn placement_fills_cells_evenly() {
    let mut config = ExperimentConfig::reference();
    config.experiment.rng_seed = 7;
    let n = 9000;
    let nodes = place_nodes_n(&config, n);
    let set = assign_clusters(&config.scenario, &nodes).unwrap();
    let p = 1.0 / 9.0;
    let sigma = (n as f64 * p * (1.0 - p)).sqrt();
    for (ap, members) in &set.clusters {
        let dev = (members.len() as f64 - n as f64 * p).abs();
        assert!(dev < 4.0 * sigma, "cell {ap}: {} nodes", members.len());
    }
}
