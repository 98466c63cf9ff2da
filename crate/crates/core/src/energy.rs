//! Producer–consumer energy balance for a batteryless node.
//!
//! A node harvests `P_harv` continuously, draws `P_sleep` while asleep and
//! spends `E_dev` over each duty-cycle of length `dur`. The sleep time that
//! exactly refills one duty-cycle's energy is `T_s = E_dev / (P_harv − P_sleep)`.

use serde::{Deserialize, Serialize};

use crate::error::EnergyError;

const EPS_S: f64 = 1e-9;

fn default_max_sleep() -> f64 {
    24.0 * 3600.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerProfile {
    /// Energy spent per duty-cycle (J).
    pub e_dev_j: f64,
    /// Duty-cycle duration (s).
    pub duty_dur_s: f64,
    /// Sleep power (W).
    pub p_sleep_w: f64,
    /// Initial buffer energy (J).
    #[serde(default)]
    pub e_buf_j: f64,
    /// Sleep times above this are treated as infeasible.
    #[serde(default = "default_max_sleep")]
    pub max_sleep_s: f64,
    /// Optional supercapacitor capacity (J); unbounded when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub buffer_capacity_j: Option<f64>,
}

impl PowerProfile {
    /// Measured constants of the reference node: 0.2233 J per 4.45 s
    /// duty-cycle, 0.28 mW asleep, empty buffer.
    pub fn reference() -> Self {
        Self {
            e_dev_j: 0.2233,
            duty_dur_s: 4.45,
            p_sleep_w: 0.28e-3,
            e_buf_j: 0.0,
            max_sleep_s: default_max_sleep(),
            buffer_capacity_j: None,
        }
    }

    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.e_dev_j > 0.0 && self.e_dev_j.is_finite()) {
            out.push(format!("e_dev_j must be positive, got {}", self.e_dev_j));
        }
        if !(self.duty_dur_s > 0.0 && self.duty_dur_s.is_finite()) {
            out.push(format!("duty_dur_s must be positive, got {}", self.duty_dur_s));
        }
        if !(self.p_sleep_w >= 0.0 && self.p_sleep_w.is_finite()) {
            out.push(format!("p_sleep_w must be non-negative, got {}", self.p_sleep_w));
        }
        if !(self.e_buf_j >= 0.0 && self.e_buf_j.is_finite()) {
            out.push(format!("e_buf_j must be non-negative, got {}", self.e_buf_j));
        }
        if !(self.max_sleep_s > 0.0) {
            out.push(format!("max_sleep_s must be positive, got {}", self.max_sleep_s));
        }
        if let Some(cap) = self.buffer_capacity_j {
            if !(cap > 0.0) || cap < self.e_buf_j {
                out.push(format!(
                    "buffer_capacity_j must be positive and ≥ e_buf_j, got {cap}"
                ));
            }
        }
        out
    }

    fn active_power(&self) -> f64 {
        self.e_dev_j / self.duty_dur_s
    }

    /// Harvested power for which [`sleep_time`] returns `t_s`.
    pub fn harvest_for_sleep_time(&self, t_s: f64) -> f64 {
        self.p_sleep_w + self.e_dev_j / t_s
    }
}

impl Default for PowerProfile {
    fn default() -> Self {
        Self::reference()
    }
}

/// Linear illuminance → harvested power mapping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarvestModel {
    /// Watts per lux.
    pub lux_to_watts: f64,
}

impl HarvestModel {
    /// Default coefficient. Not a measured value: chosen so a node lit by a
    /// single reference AP from 3 m (≈329 lux) sleeps ≈235 s.
    pub const DEFAULT_LUX_TO_WATTS: f64 = 3.74e-6;
}

impl Default for HarvestModel {
    fn default() -> Self {
        Self {
            lux_to_watts: Self::DEFAULT_LUX_TO_WATTS,
        }
    }
}

pub fn harvested_power(model: &HarvestModel, illuminance: f64) -> Result<f64, EnergyError> {
    if !(illuminance >= 0.0) {
        return Err(EnergyError::NegativeIlluminance(illuminance));
    }
    Ok(model.lux_to_watts * illuminance)
}

/// Sleep time needed to recharge one duty-cycle's worth of energy.
pub fn sleep_time(profile: &PowerProfile, p_harv: f64) -> Result<f64, EnergyError> {
    let net = p_harv - profile.p_sleep_w;
    if !(net > 0.0) {
        return Err(EnergyError::CannotRecharge {
            p_harv,
            p_sleep: profile.p_sleep_w,
        });
    }
    let t_s = profile.e_dev_j / net;
    if !t_s.is_finite() || t_s > profile.max_sleep_s {
        return Err(EnergyError::SleepAboveCap {
            t_s,
            cap: profile.max_sleep_s,
        });
    }
    Ok(t_s)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub feasible: bool,
    /// Lowest buffer level reached over the simulated span (J).
    pub min_buffer_j: f64,
    /// Start of the segment where the minimum was reached (s).
    pub min_at_s: f64,
    pub final_buffer_j: f64,
}

/// Simulate one node's buffer over `[0, max(horizon, last cycle end)]` and
/// report whether it ever goes negative.
///
/// `starts` are the node's duty-cycle start times in ascending order. During
/// a cycle the node draws `E_dev / dur`, otherwise `P_sleep`; harvesting never
/// stops. The buffer is piecewise linear, so checking segment endpoints is exact.
/// Buffer levels within `tolerance_j` of zero count as feasible.
pub fn energy_feasible(
    profile: &PowerProfile,
    p_harv: f64,
    starts: &[f64],
    horizon_s: f64,
    tolerance_j: f64,
) -> Result<FeasibilityReport, EnergyError> {
    if let Some(v) = profile.violations().into_iter().next() {
        return Err(EnergyError::InvalidProfile(v));
    }
    for w in starts.windows(2) {
        if w[1] < w[0] + profile.duty_dur_s - EPS_S {
            return Err(EnergyError::MalformedSchedule(format!(
                "cycle at {} s starts before the cycle at {} s ends",
                w[1], w[0]
            )));
        }
    }
    if let Some(&first) = starts.first() {
        if first < 0.0 {
            return Err(EnergyError::MalformedSchedule(format!(
                "negative start time {first}"
            )));
        }
    }

    let sleep_net = p_harv - profile.p_sleep_w;
    let active_net = p_harv - profile.active_power();
    let cap = profile.buffer_capacity_j.unwrap_or(f64::INFINITY);

    let mut level = profile.e_buf_j;
    let mut t = 0.0;
    let mut min = (level, 0.0);
    let mut advance = |level: &mut f64, t: &mut f64, until: f64, net: f64| {
        if until > *t {
            *level = (*level + net * (until - *t)).min(cap);
            *t = until;
        }
        if *level < min.0 {
            min = (*level, *t);
        }
    };

    for &s in starts {
        advance(&mut level, &mut t, s, sleep_net);
        advance(&mut level, &mut t, s + profile.duty_dur_s, active_net);
    }
    advance(&mut level, &mut t, horizon_s, sleep_net);

    Ok(FeasibilityReport {
        feasible: min.0 >= -tolerance_j,
        min_buffer_j: min.0,
        min_at_s: min.1,
        final_buffer_j: level,
    })
}
