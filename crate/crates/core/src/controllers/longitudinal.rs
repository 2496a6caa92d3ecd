use serde::{Deserialize, Serialize};

use super::clamp_steering;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LongitudinalConfig {
    /// Cutoff constant: offset and aggressiveness of the command.
    pub k_tau: f64,
    /// Steering limit, radians.
    pub delta_lim: f64,
    /// Speed limit, m/s.
    pub v_lim: f64,
}

impl Default for LongitudinalConfig {
    fn default() -> Self {
        Self {
            k_tau: 0.5,
            delta_lim: 1.22,
            v_lim: 69.44,
        }
    }
}

impl LongitudinalConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.k_tau) {
            return Err(Error::InvalidConfig(format!(
                "longitudinal.k_tau must be in [0, 1], got {}",
                self.k_tau
            )));
        }
        if !(self.delta_lim > 0.0 && self.v_lim > 0.0) {
            return Err(Error::InvalidConfig(
                "longitudinal.delta_lim and v_lim must be > 0".into(),
            ));
        }
        Ok(())
    }
}

/// Throttle (positive) or brake (negative) command coupled to the current
/// speed and the commanded steering angle.
pub fn longitudinal_step(cfg: &LongitudinalConfig, v: f64, steering: f64) -> f64 {
    let steering = clamp_steering(steering, cfg.delta_lim);
    let bracket = (cfg.v_lim - v) / cfg.v_lim - steering.abs() / cfg.delta_lim;
    (cfg.k_tau + bracket * (1.0 - cfg.k_tau)).clamp(-1.0, 1.0)
}
