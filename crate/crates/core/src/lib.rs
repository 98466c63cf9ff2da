//! Duty-cycle scheduling for batteryless, light-powered IoT nodes.
//!
//! The pipeline runs from ceiling lights to schedules:
//!
//! 1. [`geometry`]: Lambertian illuminance at each node from every access
//!    point, and clustering of nodes by nearest access point.
//! 2. [`energy`]: illuminance → harvested power → sleep time, plus a
//!    buffer simulation that checks a node can afford its schedule.
//! 3. [`scheduler`]: BST-TDMA, which spaces all duty-cycle starts in a
//!    cluster by at least `per = min(T_s) / n`, and the uncoordinated
//!    U-STDMA baseline.
//! 4. [`metrics`]: combined-interval CDF, binned mode and blind gaps.
//! 5. [`runner`]: seeded end-to-end experiments and parameter sweeps.
//!
//! [`config`] loads TOML experiment files, [`output`] writes CSV/JSON
//! artifacts and [`cli`] backs the `liot-sched` binary.

pub mod cli;
pub mod config;
pub mod energy;
pub mod error;
pub mod geometry;
pub mod metrics;
pub mod output;
pub mod runner;
pub mod scheduler;

pub use config::{ExperimentConfig, ExperimentParams};
pub use energy::{HarvestModel, PowerProfile};
pub use geometry::{AccessPoint, NodePosition, RoomScenario, Vec3};
pub use metrics::IntervalStats;
pub use runner::{run_experiment, run_sweep, ExperimentResult};
pub use scheduler::{ClusterNodes, DutyCycleEvent, Schedule, Scheduler};
