//! Illuminance over the floor of the reference room, printed as a coarse
//! ASCII heat map.
//!
//! ```text
//! cargo run --example illum_map
//! ```

use liot_sched::geometry::{illuminance_grid, RoomScenario};

fn main() {
    let room = RoomScenario::reference();
    let grid = illuminance_grid(&room, 0.0, 0.5).expect("reference room is valid");
    let shades = [' ', '.', ':', '-', '=', '+', '*', '#', '%', '@'];
    let (lo, hi) = (grid.min(), grid.max());
    for row in grid.lux.iter().rev() {
        let line: String = row
            .iter()
            .map(|&l| shades[(((l - lo) / (hi - lo)) * 9.0).round() as usize])
            .collect();
        println!("{line}");
    }
    let (x, y, peak) = grid.argmax();
    println!(
        "{}×{} cells; min {lo:.1} lux, mean {:.1} lux, max {peak:.1} lux at ({x}, {y})",
        grid.xs.len(),
        grid.ys.len(),
        grid.mean()
    );
}
