//! Scalar summaries of a tip-deflection trajectory.
//!
//! Everything here is a function of the sampled `(t, w_tip, v_p)` columns and
//! the first-mode period, so the values can be recomputed from a CSV file.

use serde::{Deserialize, Serialize};

/// Settling band as a fraction of the peak tip deflection.
pub const SETTLING_FRACTION: f64 = 0.01;
/// Number of first-mode periods the tip must stay inside the band.
pub const SETTLING_PERIODS: f64 = 5.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    /// First sample after the last excursion of `|w_tip|` above 1% of its
    /// peak, provided at least five first-mode periods of record follow it.
    pub settling_time_s: Option<f64>,
    pub peak_tip_m: f64,
    /// RMS of `w_tip` over samples with `t >= transient_end_s`.
    pub rms_tip_after_transient_m: f64,
    #[serde(rename = "peak_voltage_V")]
    pub peak_voltage_v: f64,
    /// Start of the steady-state window, half the final time.
    pub transient_end_s: f64,
    pub first_mode_period_s: f64,
    /// `20 log10(uncontrolled RMS / controlled RMS)`, disturbance runs only.
    pub attenuation_db: Option<f64>,
}

impl Metrics {
    pub fn compute(times: &[f64], tip_w: &[f64], voltage: &[f64], first_period: f64) -> Self {
        let peak_tip_m = tip_w.iter().fold(0.0f64, |m, w| m.max(w.abs()));
        let peak_voltage_v = voltage.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let t_end = times.last().copied().unwrap_or(0.0);
        let transient_end_s = 0.5 * t_end;

        let mut sum = 0.0;
        let mut count = 0usize;
        for (t, w) in times.iter().zip(tip_w) {
            if *t >= transient_end_s {
                sum += w * w;
                count += 1;
            }
        }
        let rms_tip_after_transient_m = if count > 0 { (sum / count as f64).sqrt() } else { 0.0 };

        let threshold = SETTLING_FRACTION * peak_tip_m;
        let settle_index = match tip_w.iter().rposition(|w| w.abs() >= threshold) {
            Some(last) if peak_tip_m > 0.0 => last + 1,
            _ => 0,
        };
        let settling_time_s = times
            .get(settle_index)
            .copied()
            .filter(|t| t_end - t >= SETTLING_PERIODS * first_period);

        Self {
            settling_time_s,
            peak_tip_m,
            rms_tip_after_transient_m,
            peak_voltage_v,
            transient_end_s,
            first_mode_period_s: first_period,
            attenuation_db: None,
        }
    }
}

/// `20 log10(reference / controlled)`.
pub fn attenuation_db(reference_rms: f64, controlled_rms: f64) -> f64 {
    20.0 * (reference_rms / controlled_rms).log10()
}
