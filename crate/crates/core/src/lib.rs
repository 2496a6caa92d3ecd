//! Lateral path-tracking control for steered vehicles.
//!
//! The crate provides four lateral control laws (PID, Pure-Pursuit, Stanley
//! and a proximally optimal predictive controller), a coupled longitudinal
//! throttle law, a kinematic bicycle plant and a deterministic fixed-step
//! simulator that scores each controller by crosstrack/heading error and
//! per-step latency.
//!
//! ```
//! use poptrack::prelude::*;
//!
//! let sparse = TrackSpec::Straight { length: 50.0 }.generate(1.0).unwrap();
//! let scenario = Scenario::new(sparse, LateralConfig::Pop(PopConfig::default()));
//! let log = run_scenario(&scenario).unwrap();
//! let metrics = compute_metrics(&log).unwrap();
//! assert!(metrics.max_abs_crosstrack < 0.05);
//! ```

pub mod angle;
pub mod controllers;
pub mod error;
pub mod sim;
pub mod tracks;
pub mod trajectory;
pub mod vehicle;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::angle::wrap_angle;
    pub use crate::controllers::{
        build_candidates, clamp_steering, longitudinal_step, pid_step, pop_step, pure_pursuit_step,
        stanley_step, LateralConfig, LateralController, LongitudinalConfig, PidConfig, PidState,
        PopConfig, PopState, PurePursuitConfig, StanleyConfig,
    };
    pub use crate::error::{Error, Result};
    pub use crate::sim::{
        compare, compute_metrics, compute_metrics_from, latency_stats, run_on_path, run_scenario,
        Comparison, ComparisonRow, LatencyStats, RunLog, Scenario, StepRecord, StopRule,
        Termination, TrackingMetrics,
    };
    pub use crate::tracks::TrackSpec;
    pub use crate::trajectory::{
        closest_index, compute_errors, densify_path, euclidean_distance, lookahead_index,
        LookaheadResult, Path, Reference, SearchWindow, TrackingErrors, Waypoint,
    };
    pub use crate::vehicle::{
        plant_step, predict_location, predict_state, ControlCommand, PlantParams, PredictionInput,
        VehicleState,
    };
}
