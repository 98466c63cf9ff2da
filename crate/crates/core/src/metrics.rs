//! Interval statistics over a cluster's combined schedule.
//!
//! Intervals are gaps between consecutive duty-cycle *starts* after merging
//! every node's events. Modes use fixed-width bins `[k·w, (k+1)·w)`; values
//! are nudged by [`TIME_EPS`] before binning so a gap computed as
//! `46.999999999999` lands in the same bin as `47`.

use serde::{Deserialize, Serialize};

use crate::error::MetricsError;
use crate::scheduler::{Schedule, TIME_EPS};

pub const DEFAULT_BIN_WIDTH_S: f64 = 1.0;

/// Successive differences of the sorted start times. Empty for fewer than
/// two events.
pub fn combined_intervals(schedule: &Schedule) -> Vec<f64> {
    let mut starts: Vec<f64> = schedule.starts().collect();
    starts.sort_by(f64::total_cmp);
    starts.windows(2).map(|w| w[1] - w[0]).collect()
}

/// Right-continuous empirical CDF.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalCdf {
    /// Distinct values ascending, each with the fraction of samples `≤` it.
    pub points: Vec<(f64, f64)>,
    pub n: usize,
}

impl EmpiricalCdf {
    /// Fraction of samples `≤ x`.
    pub fn eval(&self, x: f64) -> f64 {
        let idx = self.points.partition_point(|&(v, _)| v <= x);
        if idx == 0 {
            0.0
        } else {
            self.points[idx - 1].1
        }
    }
}

pub fn empirical_cdf(intervals: &[f64]) -> Result<EmpiricalCdf, MetricsError> {
    if intervals.is_empty() {
        return Err(MetricsError::Empty);
    }
    let mut xs = intervals.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    let mut points: Vec<(f64, f64)> = Vec::new();
    for (i, &x) in xs.iter().enumerate() {
        let frac = (i + 1) as f64 / n as f64;
        match points.last_mut() {
            Some(last) if last.0 == x => last.1 = frac,
            _ => points.push((x, frac)),
        }
    }
    // exact 1.0 at the top regardless of rounding in the division
    if let Some(last) = points.last_mut() {
        last.1 = 1.0;
    }
    Ok(EmpiricalCdf { points, n })
}

/// Index of the bin holding `x`.
pub fn bin_index(x: f64, bin_width_s: f64) -> i64 {
    ((x + TIME_EPS) / bin_width_s).floor() as i64
}

/// Centre of the most populated bin; ties go to the smallest bin.
pub fn interval_mode(intervals: &[f64], bin_width_s: f64) -> Result<f64, MetricsError> {
    if !(bin_width_s > 0.0 && bin_width_s.is_finite()) {
        return Err(MetricsError::BadBinWidth(bin_width_s));
    }
    if intervals.is_empty() {
        return Err(MetricsError::Empty);
    }
    let mut bins: Vec<i64> = intervals.iter().map(|&x| bin_index(x, bin_width_s)).collect();
    bins.sort_unstable();
    let mut best = (bins[0], 0usize);
    let mut i = 0;
    while i < bins.len() {
        let j = i + bins[i..].partition_point(|&b| b == bins[i]);
        if j - i > best.1 {
            best = (bins[i], j - i);
        }
        i = j;
    }
    Ok((best.0 as f64 + 0.5) * bin_width_s)
}

/// `(max, mean)` of the combined intervals: the longest and average spans
/// with nobody sensing.
pub fn blind_gaps(schedule: &Schedule) -> Result<(f64, f64), MetricsError> {
    let iv = combined_intervals(schedule);
    if iv.is_empty() {
        return Err(MetricsError::TooFewEvents(schedule.len()));
    }
    let max = iv.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean = iv.iter().sum::<f64>() / iv.len() as f64;
    Ok((max, mean))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalStats {
    pub intervals_s: Vec<f64>,
    pub cdf: EmpiricalCdf,
    pub mode_s: f64,
    pub mode_bin_width_s: f64,
    pub min_gap_s: f64,
    pub max_gap_s: f64,
    pub mean_gap_s: f64,
    /// Fraction of intervals falling in the bin that contains `per`.
    pub fraction_at_per: f64,
}

impl IntervalStats {
    pub fn from_schedule(schedule: &Schedule, bin_width_s: f64) -> Result<Self, MetricsError> {
        if !(bin_width_s > 0.0 && bin_width_s.is_finite()) {
            return Err(MetricsError::BadBinWidth(bin_width_s));
        }
        let mut intervals_s = combined_intervals(schedule);
        if intervals_s.is_empty() {
            return Err(MetricsError::TooFewEvents(schedule.len()));
        }
        let (max_gap_s, mean_gap_s) = blind_gaps(schedule)?;
        let mode_s = interval_mode(&intervals_s, bin_width_s)?;
        let cdf = empirical_cdf(&intervals_s)?;
        let per_bin = bin_index(schedule.period_s, bin_width_s);
        let at_per = intervals_s
            .iter()
            .filter(|&&x| bin_index(x, bin_width_s) == per_bin)
            .count();
        intervals_s.sort_by(f64::total_cmp);
        Ok(Self {
            min_gap_s: intervals_s[0],
            fraction_at_per: at_per as f64 / intervals_s.len() as f64,
            intervals_s,
            cdf,
            mode_s,
            mode_bin_width_s: bin_width_s,
            max_gap_s,
            mean_gap_s,
        })
    }

    /// Whether the mode bin is the bin containing `t`.
    pub fn mode_bin_contains(&self, t: f64) -> bool {
        bin_index(self.mode_s, self.mode_bin_width_s) == bin_index(t, self.mode_bin_width_s)
    }
}
