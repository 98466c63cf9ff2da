use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("semi-angle {0}° outside (0, 90)")]
    SemiAngleOutOfRange(f64),
    #[error("access point {ap_id} and node {node_id} occupy the same position")]
    CoincidentPositions { ap_id: u32, node_id: u32 },
    #[error("scenario has no access points")]
    NoAccessPoints,
    #[error("node {node_id} at ({x}, {y}) lies outside the room footprint")]
    NodeOutsideRoom { node_id: u32, x: f64, y: f64 },
    #[error("duplicate node id {0}")]
    DuplicateNode(u32),
    #[error("grid resolution must be positive, got {0}")]
    BadResolution(f64),
    #[error("plane height {plane_z} outside [0, {height})")]
    BadPlane { plane_z: f64, height: f64 },
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnergyError {
    #[error("illuminance must be non-negative, got {0}")]
    NegativeIlluminance(f64),
    #[error("harvested power {p_harv} W does not exceed sleep power {p_sleep} W")]
    CannotRecharge { p_harv: f64, p_sleep: f64 },
    #[error("sleep time {t_s} s exceeds cap {cap} s")]
    SleepAboveCap { t_s: f64, cap: f64 },
    #[error("malformed schedule: {0}")]
    MalformedSchedule(String),
    #[error("invalid power profile: {0}")]
    InvalidProfile(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScheduleError {
    #[error("cluster has no nodes")]
    EmptyCluster,
    #[error("duplicate node id {0} in cluster")]
    DuplicateNode(u32),
    #[error("node {node_id} has non-positive sleep time {t_s}")]
    BadSleepTime { node_id: u32, t_s: f64 },
    #[error("period must be positive, got {0}")]
    BadPeriod(f64),
    #[error("horizon must be positive, got {0}")]
    BadHorizon(f64),
    #[error("duty-cycle duration must be positive, got {0}")]
    BadDuration(f64),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("need at least two events, got {0}")]
    TooFewEvents(usize),
    #[error("empty interval list")]
    Empty,
    #[error("bin width must be positive, got {0}")]
    BadBinWidth(f64),
}

/// Failures of a whole experiment run.
#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Energy(#[from] EnergyError),
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse config: {0}")]
    Parse(#[from] toml::de::Error),
}
