use serde::{Deserialize, Serialize};

use super::clamp_steering;
use crate::error::{Error, Result};
use crate::trajectory::{compute_errors_near, Path, Reference, SearchWindow, TrackingErrors};
use crate::vehicle::VehicleState;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StanleyConfig {
    /// Crosstrack gain.
    pub k_cross: f64,
    /// Velocity gain.
    pub kv: f64,
    /// Softening term keeping the crosstrack correction finite at low speed.
    pub ks: f64,
}

impl Default for StanleyConfig {
    fn default() -> Self {
        Self {
            k_cross: 1.5,
            kv: 1.3,
            ks: 1e-5,
        }
    }
}

impl StanleyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.ks.is_nan() || self.ks <= 0.0 || !self.k_cross.is_finite() || !self.kv.is_finite() {
            return Err(Error::InvalidConfig(
                "stanley.ks must be > 0 and gains finite".into(),
            ));
        }
        Ok(())
    }
}

/// Steering from heading and crosstrack error at the front axle.
pub fn stanley_step(
    cfg: &StanleyConfig,
    state: &VehicleState,
    path: &Path,
    wheelbase: f64,
    limit: f64,
    window: Option<SearchWindow>,
) -> f64 {
    let (errors, _) = compute_errors_near(state, path, Reference::FrontAxle { wheelbase }, window);
    stanley_law(cfg, errors, state.v, limit)
}

#[inline]
pub(crate) fn stanley_law(cfg: &StanleyConfig, errors: TrackingErrors, v: f64, limit: f64) -> f64 {
    // crosstrack is left-positive, so a positive offset steers right
    let correction = (cfg.k_cross * errors.crosstrack / (cfg.ks + cfg.kv * v)).atan();
    clamp_steering(errors.heading - correction, limit)
}
