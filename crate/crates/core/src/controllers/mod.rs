//! Lateral control laws and the coupled longitudinal law.
//!
//! Each law is available as a free function operating on explicit config and
//! state. [`LateralController`] wraps the four lateral laws behind one
//! stepping interface for the simulator.

mod longitudinal;
mod pid;
mod pop;
mod pure_pursuit;
mod stanley;

use serde::{Deserialize, Serialize};

pub use longitudinal::{longitudinal_step, LongitudinalConfig};
pub use pid::{pid_step, PidConfig, PidState};
pub use pop::{build_candidates, candidate, pop_step, PopConfig, PopState};
pub use pure_pursuit::{pure_pursuit_step, PurePursuitConfig};
pub use stanley::{stanley_step, StanleyConfig};

use crate::error::Result;
use crate::trajectory::{compute_errors_near, Path, Reference, SearchWindow};
use crate::vehicle::VehicleState;

/// Clips a steering angle to `[-limit, limit]`.
#[inline]
pub fn clamp_steering(delta: f64, limit: f64) -> f64 {
    delta.max(-limit).min(limit)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum LateralConfig {
    Pid(PidConfig),
    PurePursuit(PurePursuitConfig),
    Stanley(StanleyConfig),
    Pop(PopConfig),
}

impl LateralConfig {
    pub fn name(&self) -> &'static str {
        match self {
            LateralConfig::Pid(_) => "pid",
            LateralConfig::PurePursuit(_) => "pure_pursuit",
            LateralConfig::Stanley(_) => "stanley",
            LateralConfig::Pop(_) => "pop",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            LateralConfig::Pid(c) => c.validate(),
            LateralConfig::PurePursuit(c) => c.validate(),
            LateralConfig::Stanley(c) => c.validate(),
            LateralConfig::Pop(c) => c.validate(),
        }
    }

    /// The four laws with their tuned default parameters.
    pub fn defaults() -> [LateralConfig; 4] {
        [
            LateralConfig::Pid(PidConfig::default()),
            LateralConfig::PurePursuit(PurePursuitConfig::default()),
            LateralConfig::Stanley(StanleyConfig::default()),
            LateralConfig::Pop(PopConfig::default()),
        ]
    }
}

/// What a lateral controller sees at one tick.
#[derive(Debug, Clone, Copy)]
pub struct SteerInput<'a> {
    pub state: &'a VehicleState,
    pub path: &'a Path,
    pub dt: f64,
    pub steering_limit: f64,
    pub wheelbase: f64,
    /// Closest path index to the rear axle, maintained by the caller.
    pub progress: usize,
    /// Window for local closest-point searches around `progress`.
    pub window: SearchWindow,
}

/// A lateral control law together with its per-run mutable state.
#[derive(Debug, Clone)]
pub enum LateralController {
    Pid(PidConfig, PidState),
    PurePursuit(PurePursuitConfig),
    Stanley(StanleyConfig),
    Pop(PopConfig, PopState),
}

impl LateralController {
    pub fn new(config: &LateralConfig) -> Self {
        match config {
            LateralConfig::Pid(c) => LateralController::Pid(c.clone(), PidState::new(c.buffer_len)),
            LateralConfig::PurePursuit(c) => LateralController::PurePursuit(c.clone()),
            LateralConfig::Stanley(c) => LateralController::Stanley(c.clone()),
            LateralConfig::Pop(c) => LateralController::Pop(c.clone(), PopState::default()),
        }
    }

    pub fn steer(&mut self, input: &SteerInput<'_>) -> f64 {
        let limit = input.steering_limit;
        match self {
            LateralController::Pid(cfg, st) => {
                let (errors, _) = compute_errors_near(
                    input.state,
                    input.path,
                    Reference::RearAxle,
                    Some(input.window),
                );
                // the law acts on the offset of the path from the vehicle
                pid_step(cfg, st, -errors.crosstrack, input.dt, limit)
            }
            LateralController::PurePursuit(cfg) => {
                pure_pursuit_step(cfg, input.state, input.path, input.progress, limit)
            }
            LateralController::Stanley(cfg) => stanley_step(
                cfg,
                input.state,
                input.path,
                input.wheelbase,
                limit,
                Some(input.window),
            ),
            LateralController::Pop(cfg, st) => pop_step(
                cfg,
                st,
                input.state,
                input.path,
                limit,
                Some(input.progress),
            ),
        }
    }
}
