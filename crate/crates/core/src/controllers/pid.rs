use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::clamp_steering;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PidConfig {
    pub kp: f64,
    pub ki: f64,
    pub kd: f64,
    /// Number of most recent errors summed by the integral term.
    pub buffer_len: usize,
}

impl Default for PidConfig {
    fn default() -> Self {
        Self {
            kp: 0.25,
            ki: 0.01,
            kd: 0.2,
            buffer_len: 500,
        }
    }
}

impl PidConfig {
    pub fn validate(&self) -> Result<()> {
        if self.buffer_len == 0 {
            return Err(Error::InvalidConfig("pid.buffer_len must be >= 1".into()));
        }
        if ![self.kp, self.ki, self.kd].iter().all(|g| g.is_finite()) {
            return Err(Error::InvalidConfig("pid gains must be finite".into()));
        }
        Ok(())
    }
}

/// Error history for the windowed integral.
///
/// Holds at most `capacity` errors; pushing onto a full buffer evicts the
/// oldest.
#[derive(Debug, Clone, PartialEq)]
pub struct PidState {
    buffer: VecDeque<f64>,
    capacity: usize,
    pub prev_error: f64,
}

impl PidState {
    pub fn new(capacity: usize) -> Self {
        let capacity = capacity.max(1);
        Self {
            buffer: VecDeque::with_capacity(capacity),
            capacity,
            prev_error: 0.0,
        }
    }

    pub fn push(&mut self, error: f64) {
        if self.buffer.len() == self.capacity {
            self.buffer.pop_front();
        }
        self.buffer.push_back(error);
    }

    /// Buffered errors, oldest first.
    pub fn buffer(&self) -> impl Iterator<Item = f64> + '_ {
        self.buffer.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.buffer.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buffer.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn integral(&self) -> f64 {
        self.buffer.iter().sum()
    }
}

/// One PID update on `error`; the output is clipped to `[-limit, limit]`.
pub fn pid_step(cfg: &PidConfig, st: &mut PidState, error: f64, dt: f64, limit: f64) -> f64 {
    st.push(error);
    let derivative = (error - st.prev_error) / dt;
    st.prev_error = error;
    let raw = cfg.kp * error + cfg.ki * st.integral() + cfg.kd * derivative;
    clamp_steering(raw, limit)
}
