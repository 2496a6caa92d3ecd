//! Proximally optimal predictive steering.
//!
//! Each tick the controller lays a uniform grid of candidate steering angles
//! over `[prev - nbd, prev + nbd]`, predicts where the vehicle will be after
//! `predict_dt` under each candidate, and keeps the candidate whose predicted
//! location lands closest to the lookahead point. The lookahead distance
//! grows with speed: `ld = ld_min + kv * v`.

use serde::{Deserialize, Serialize};

use super::clamp_steering;
use crate::error::{Error, Result};
use crate::trajectory::{closest_index, euclidean_distance, lookahead_index, Path};
use crate::vehicle::{predict_location, VehicleState};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PopConfig {
    /// Lookahead seconds added per m/s of speed.
    pub kv: f64,
    /// Lookahead distance at standstill, meters.
    pub ld_min: f64,
    /// Half-width of the steering neighborhood, radians.
    pub nbd: f64,
    /// Number of candidates; odd so the previous command is on the grid.
    pub resolution: usize,
    /// Prediction horizon, seconds.
    pub predict_dt: f64,
}

impl Default for PopConfig {
    fn default() -> Self {
        Self {
            kv: 0.2,
            ld_min: 2.0,
            nbd: 3.0f64.to_radians(),
            resolution: 21,
            predict_dt: 0.05,
        }
    }
}

impl PopConfig {
    pub fn validate(&self) -> Result<()> {
        if self.resolution < 3 || self.resolution.is_multiple_of(2) {
            return Err(Error::InvalidConfig(format!(
                "pop.resolution must be odd and >= 3, got {}",
                self.resolution
            )));
        }
        if !(self.nbd > 0.0 && self.nbd.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "pop.nbd must be > 0, got {}",
                self.nbd
            )));
        }
        if !(self.ld_min >= 0.0 && self.ld_min.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "pop.ld_min must be >= 0, got {}",
                self.ld_min
            )));
        }
        if !(self.predict_dt > 0.0 && self.predict_dt.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "pop.predict_dt must be > 0, got {}",
                self.predict_dt
            )));
        }
        if !self.kv.is_finite() {
            return Err(Error::InvalidConfig("pop.kv must be finite".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PopState {
    pub prev_steering: f64,
    /// Lookahead scans start here; never moves backwards.
    pub search_start: usize,
}

/// Candidate `k` of the grid around `prev`.
///
/// The offset numerator `2k - (n - 1)` is antisymmetric in `k`, so mirrored
/// grids are exact negations of each other.
#[inline]
pub fn candidate(prev: f64, nbd: f64, resolution: usize, k: usize, limit: f64) -> f64 {
    let half = (resolution - 1) as f64;
    let offset = nbd * ((2.0 * k as f64 - half) / half);
    clamp_steering(prev + offset, limit)
}

/// The full candidate grid, ascending in offset from `prev`.
pub fn build_candidates(prev: f64, nbd: f64, resolution: usize, limit: f64) -> Vec<f64> {
    (0..resolution)
        .map(|k| candidate(prev, nbd, resolution, k, limit))
        .collect()
}

/// One controller tick.
///
/// `progress` is the vehicle's closest path index if the caller already
/// tracks it; otherwise the whole path is searched.
pub fn pop_step(
    cfg: &PopConfig,
    st: &mut PopState,
    state: &VehicleState,
    path: &Path,
    limit: f64,
    progress: Option<usize>,
) -> f64 {
    let pos = state.position();
    let nearest = progress.unwrap_or_else(|| closest_index(pos, path, None));
    st.search_start = st.search_start.max(nearest).min(path.len() - 1);

    let ld = cfg.ld_min + cfg.kv * state.v;
    let lp = path.waypoints()[lookahead_index(pos, path, ld, st.search_start)];

    let mut best = st.prev_steering;
    let mut best_dist = f64::INFINITY;
    for k in 0..cfg.resolution {
        let delta = candidate(st.prev_steering, cfg.nbd, cfg.resolution, k, limit);
        let dist = euclidean_distance(predict_location(state, delta, cfg.predict_dt), lp);
        if dist < best_dist {
            best = delta;
            best_dist = dist;
        }
    }
    st.prev_steering = best;
    best
}
