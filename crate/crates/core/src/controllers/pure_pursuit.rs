use serde::{Deserialize, Serialize};

use super::clamp_steering;
use crate::angle::wrap_angle;
use crate::error::{Error, Result};
use crate::trajectory::{lookahead_index, Path};
use crate::vehicle::VehicleState;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PurePursuitConfig {
    pub wheelbase: f64,
    /// Lookahead seconds: `ld = kv * v`.
    pub kv: f64,
    /// Speed used in place of `v` below this value, m/s.
    pub min_speed_floor: f64,
}

impl Default for PurePursuitConfig {
    fn default() -> Self {
        Self {
            wheelbase: 2.89,
            kv: 0.9,
            min_speed_floor: 1.0,
        }
    }
}

impl PurePursuitConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.wheelbase > 0.0 && self.kv > 0.0 && self.min_speed_floor > 0.0) {
            return Err(Error::InvalidConfig(
                "pure_pursuit wheelbase, kv and min_speed_floor must be > 0".into(),
            ));
        }
        Ok(())
    }
}

/// Steering toward the waypoint `kv * v` ahead of the rear axle.
///
/// `search_start` is the first path index considered for the lookahead
/// point (normally the vehicle's closest index).
pub fn pure_pursuit_step(
    cfg: &PurePursuitConfig,
    state: &VehicleState,
    path: &Path,
    search_start: usize,
    limit: f64,
) -> f64 {
    let speed = state.v.max(cfg.min_speed_floor);
    let ld = cfg.kv * speed;
    let pos = state.position();
    let lp = path.waypoints()[lookahead_index(pos, path, ld, search_start)];
    let alpha = wrap_angle((lp.y - pos.y).atan2(lp.x - pos.x) - state.theta);
    pure_pursuit_law(cfg, alpha, speed, limit)
}

#[inline]
pub(crate) fn pure_pursuit_law(cfg: &PurePursuitConfig, alpha: f64, speed: f64, limit: f64) -> f64 {
    let delta = (2.0 * cfg.wheelbase * alpha.sin() / (cfg.kv * speed)).atan();
    clamp_steering(delta, limit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trajectory::{densify_path, Waypoint};

    #[test]
    fn law_values() {
        let cfg = PurePursuitConfig::default();
        assert_eq!(pure_pursuit_law(&cfg, 0.0, 10.0, 1.22), 0.0);
        let expected = (2.0 * 2.89 * 0.1f64.sin() / 9.0).atan();
        assert!((expected - 0.0640).abs() < 5e-5);
        assert_eq!(pure_pursuit_law(&cfg, 0.1, 10.0, 1.22), expected);
        assert_eq!(
            pure_pursuit_law(&cfg, -0.1, 10.0, 1.22),
            -pure_pursuit_law(&cfg, 0.1, 10.0, 1.22)
        );
    }

    #[test]
    fn dead_ahead_on_straight_path() {
        let sparse = Path::new(vec![Waypoint::new(0.0, 0.0), Waypoint::new(50.0, 0.0)]).unwrap();
        let path = densify_path(&sparse, 0.01).unwrap();
        let s = VehicleState::new(0.0, 0.0, 0.0, 10.0);
        assert_eq!(
            pure_pursuit_step(&PurePursuitConfig::default(), &s, &path, 0, 1.22),
            0.0
        );
    }

    #[test]
    fn steers_toward_path_on_left() {
        let sparse = Path::new(vec![Waypoint::new(0.0, 1.0), Waypoint::new(50.0, 1.0)]).unwrap();
        let path = densify_path(&sparse, 0.01).unwrap();
        let s = VehicleState::new(0.0, 0.0, 0.0, 5.0);
        assert!(pure_pursuit_step(&PurePursuitConfig::default(), &s, &path, 0, 1.22) > 0.0);
    }
}
