//! Kinematic bicycle model: the one-step location predictor used by the
//! predictive controller, and the closed-loop plant driven by the simulator.
//!
//! The pose refers to the rear-axle center. Motion over a step follows the
//! direction `theta + steering`.

use serde::{Deserialize, Serialize};

use crate::angle::wrap_angle;
use crate::error::{Error, Result};
use crate::trajectory::Waypoint;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VehicleState {
    pub x: f64,
    pub y: f64,
    /// Yaw, radians.
    pub theta: f64,
    /// Linear speed, m/s.
    #[serde(default)]
    pub v: f64,
    /// Yaw rate, rad/s.
    #[serde(default)]
    pub omega: f64,
}

impl VehicleState {
    pub fn new(x: f64, y: f64, theta: f64, v: f64) -> Self {
        Self {
            x,
            y,
            theta,
            v,
            omega: 0.0,
        }
    }

    pub fn position(&self) -> Waypoint {
        Waypoint::new(self.x, self.y)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite()
            && self.y.is_finite()
            && self.theta.is_finite()
            && self.v.is_finite()
            && self.omega.is_finite()
    }
}

/// Lateral and longitudinal actuation for one step.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ControlCommand {
    /// Steering angle, radians.
    pub steering: f64,
    /// Throttle in `[-1, 1]`; negative values brake.
    pub throttle: f64,
}

/// Input to the raw state-transition model: the steering angle that sets the
/// direction of motion plus the additive increments applied to `v` and
/// `omega`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PredictionInput {
    pub steering: f64,
    pub dv: f64,
    pub domega: f64,
}

impl PredictionInput {
    pub fn steering(steering: f64) -> Self {
        Self {
            steering,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlantParams {
    /// Wheelbase, meters.
    pub wheelbase: f64,
    /// Steering limit, radians.
    pub steering_limit: f64,
    /// Acceleration at full throttle, m/s^2.
    pub max_accel: f64,
    /// Deceleration at full brake, m/s^2.
    pub max_decel: f64,
    /// Speed ceiling, m/s.
    pub v_cap: f64,
}

impl Default for PlantParams {
    fn default() -> Self {
        Self {
            wheelbase: 2.89,
            steering_limit: 1.22,
            max_accel: 3.0,
            max_decel: 8.0,
            v_cap: 69.44,
        }
    }
}

impl PlantParams {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("wheelbase", self.wheelbase),
            ("steering_limit", self.steering_limit),
            ("max_accel", self.max_accel),
            ("max_decel", self.max_decel),
            ("v_cap", self.v_cap),
        ];
        for (name, value) in fields {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::InvalidConfig(format!(
                    "plant.{name} must be > 0, got {value}"
                )));
            }
        }
        if self.steering_limit > std::f64::consts::FRAC_PI_2 {
            return Err(Error::InvalidConfig(format!(
                "plant.steering_limit must be <= pi/2, got {}",
                self.steering_limit
            )));
        }
        Ok(())
    }

    /// Acceleration produced by a throttle command.
    pub fn acceleration(&self, throttle: f64) -> f64 {
        if throttle >= 0.0 {
            throttle * self.max_accel
        } else {
            throttle * self.max_decel
        }
    }
}

/// Location reached after `dt` when moving at the current speed along
/// `theta + steering`.
#[inline]
pub fn predict_location(state: &VehicleState, steering: f64, dt: f64) -> Waypoint {
    let phi = state.theta + steering;
    let step = state.v * dt;
    Waypoint::new(state.x + step * phi.cos(), state.y + step * phi.sin())
}

/// Full state transition of the raw model: position advances along
/// `theta + steering`, yaw integrates the current yaw rate, and the input
/// increments add directly to speed and yaw rate.
pub fn predict_state(state: &VehicleState, input: PredictionInput, dt: f64) -> VehicleState {
    let p = predict_location(state, input.steering, dt);
    VehicleState {
        x: p.x,
        y: p.y,
        theta: wrap_angle(state.theta + state.omega * dt),
        v: state.v + input.dv,
        omega: state.omega + input.domega,
    }
}

/// Advances the plant by one step.
///
/// Yaw rate comes from the steering geometry, `v / L * tan(steering)`;
/// throttle maps to acceleration through the plant's accel/brake scales and
/// the new speed is clamped to `[0, v_cap]`.
pub fn plant_step(
    state: &VehicleState,
    cmd: ControlCommand,
    dt: f64,
    params: &PlantParams,
) -> VehicleState {
    let steering = cmd
        .steering
        .clamp(-params.steering_limit, params.steering_limit);
    let throttle = cmd.throttle.clamp(-1.0, 1.0);
    let omega = state.v / params.wheelbase * steering.tan();
    let p = predict_location(state, steering, dt);
    let v = (state.v + params.acceleration(throttle) * dt).clamp(0.0, params.v_cap);
    VehicleState {
        x: p.x,
        y: p.y,
        theta: wrap_angle(state.theta + omega * dt),
        v,
        omega,
    }
}
