//! Deterministic fixed-timestep closed-loop runner.
//!
//! Each tick measures the tracking errors of the current state, calls the
//! lateral controller (timed), derives throttle from the longitudinal law
//! and advances the plant. Apart from the latency column, a run is a pure
//! function of its [`Scenario`].

mod compare;
mod log;
mod metrics;

use std::path::PathBuf;
use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use compare::{compare, compare_on_path, compare_with_logs, Comparison, ComparisonRow};
pub use log::{write_run_csv, RUN_CSV_HEADER};
pub use metrics::{
    compute_metrics, compute_metrics_from, compute_metrics_trimmed, latency_stats, LatencyStats,
    TrackingMetrics, DEFAULT_TRIM_SECONDS,
};

use crate::angle::wrap_angle;
use crate::controllers::{
    longitudinal_step, LateralConfig, LateralController, LongitudinalConfig, SteerInput,
};
use crate::error::{Error, Result};
use crate::tracks::{load_track, TrackSpec};
use crate::trajectory::{
    closest_index, compute_errors_near, densify_path, euclidean_distance, Path, Reference,
    SearchWindow, TrackingErrors, DEFAULT_RESOLUTION,
};
use crate::vehicle::{plant_step, ControlCommand, PlantParams, VehicleState};

/// Where the sparse reference track comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum TrackSource {
    Waypoints(Path),
    Csv(PathBuf),
    Generated { spec: TrackSpec, spacing: f64 },
}

impl TrackSource {
    pub fn resolve(&self) -> Result<Path> {
        match self {
            TrackSource::Waypoints(p) => Ok(p.clone()),
            TrackSource::Csv(file) => load_track(file),
            TrackSource::Generated { spec, spacing } => spec.generate(*spacing),
        }
    }
}

impl From<Path> for TrackSource {
    fn from(p: Path) -> Self {
        TrackSource::Waypoints(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StopRule {
    pub max_steps: usize,
    /// Stop once the rear axle is this close to the final waypoint near the
    /// end of the track. `None` disables the check.
    pub goal_radius: Option<f64>,
}

impl Default for StopRule {
    fn default() -> Self {
        Self {
            max_steps: 20_000,
            goal_radius: Some(2.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    /// Label used in comparisons; defaults to the controller name.
    pub name: Option<String>,
    pub track: TrackSource,
    pub densify_resolution: f64,
    pub dt: f64,
    pub controller: LateralConfig,
    pub longitudinal: LongitudinalConfig,
    pub plant: PlantParams,
    pub spawn: VehicleState,
    pub stop: StopRule,
    /// Runs end as diverged once |crosstrack| exceeds this, meters.
    pub divergence_limit: f64,
    /// Half-width of local closest-point searches, meters of arc.
    pub search_window: f64,
    /// When false every latency sample is recorded as zero.
    pub record_latency: bool,
}

impl Scenario {
    pub fn new(track: impl Into<TrackSource>, controller: LateralConfig) -> Self {
        Self {
            name: None,
            track: track.into(),
            densify_resolution: DEFAULT_RESOLUTION,
            dt: 0.05,
            controller,
            longitudinal: LongitudinalConfig::default(),
            plant: PlantParams::default(),
            spawn: VehicleState::default(),
            stop: StopRule::default(),
            divergence_limit: 50.0,
            search_window: 20.0,
            record_latency: true,
        }
    }

    /// Top speed of the benchmark vehicle, m/s.
    pub const BENCHMARK_V_CAP: f64 = 30.0;

    /// The benchmark course with a 1 m lateral spawn offset and a vehicle
    /// limited to [`Self::BENCHMARK_V_CAP`].
    pub fn benchmark(controller: LateralConfig) -> Self {
        let mut s = Self::new(
            TrackSource::Generated {
                spec: TrackSpec::benchmark(),
                spacing: 1.0,
            },
            controller,
        );
        s.spawn = VehicleState::new(0.0, 1.0, 0.0, 0.0);
        s.plant.v_cap = Self::BENCHMARK_V_CAP;
        s
    }

    pub fn label(&self) -> String {
        self.name
            .clone()
            .unwrap_or_else(|| self.controller.name().to_string())
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("dt", self.dt),
            ("densify_resolution", self.densify_resolution),
            ("divergence_limit", self.divergence_limit),
            ("search_window", self.search_window),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidConfig(format!("{name} must be > 0, got {v}")));
            }
        }
        if self.stop.max_steps == 0 {
            return Err(Error::InvalidConfig("stop.max_steps must be >= 1".into()));
        }
        if let Some(r) = self.stop.goal_radius {
            if r.is_nan() || r <= 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "stop.goal_radius must be > 0, got {r}"
                )));
            }
        }
        if !self.spawn.is_finite() || self.spawn.v < 0.0 {
            return Err(Error::InvalidConfig(
                "spawn must be finite with v >= 0".into(),
            ));
        }
        self.controller.validate()?;
        self.longitudinal.validate()?;
        self.plant.validate()
    }

    /// Stable fingerprint of everything that determines the run.
    pub fn digest(&self) -> String {
        let text = format!(
            "{:?}|{}|{}|{:?}|{:?}|{:?}|{:?}|{:?}|{}|{}",
            self.track,
            self.densify_resolution,
            self.dt,
            self.controller,
            self.longitudinal,
            self.plant,
            self.spawn,
            self.stop,
            self.divergence_limit,
            self.search_window,
        );
        format!("{:016x}", fnv1a(text.as_bytes()))
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepRecord {
    pub t: f64,
    pub state: VehicleState,
    pub command: ControlCommand,
    pub errors: TrackingErrors,
    /// Wall-clock time of the lateral controller call, microseconds.
    pub controller_latency: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    GoalReached,
    MaxSteps,
    Diverged,
}

impl Termination {
    pub fn as_str(&self) -> &'static str {
        match self {
            Termination::GoalReached => "goal_reached",
            Termination::MaxSteps => "max_steps",
            Termination::Diverged => "diverged",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunLog {
    pub digest: String,
    pub controller: String,
    pub records: Vec<StepRecord>,
    pub termination: Termination,
    /// Time spent loading and densifying the track, microseconds.
    pub preprocess_latency: f64,
}

/// Loads and densifies the track, then runs the scenario on it.
pub fn run_scenario(scenario: &Scenario) -> Result<RunLog> {
    scenario.validate()?;
    let start = Instant::now();
    let dense = densify_path(&scenario.track.resolve()?, scenario.densify_resolution)?;
    let preprocess = if scenario.record_latency {
        start.elapsed().as_secs_f64() * 1e6
    } else {
        0.0
    };
    let mut log = run_on_path(scenario, &dense)?;
    log.preprocess_latency = preprocess;
    Ok(log)
}

/// Runs the scenario on an already densified path, ignoring
/// `scenario.track`.
pub fn run_on_path(scenario: &Scenario, path: &Path) -> Result<RunLog> {
    scenario.validate()?;
    let dt = scenario.dt;
    let plant = &scenario.plant;
    let radius = path.index_span(scenario.search_window);
    let mut controller = LateralController::new(&scenario.controller);
    let mut state = VehicleState {
        theta: wrap_angle(scenario.spawn.theta),
        ..scenario.spawn
    };
    let mut progress = closest_index(state.position(), path, None);
    let mut records = Vec::with_capacity(scenario.stop.max_steps.min(100_000));
    let mut termination = Termination::MaxSteps;

    for k in 0..scenario.stop.max_steps {
        if !state.is_finite() {
            termination = Termination::Diverged;
            break;
        }
        let window = SearchWindow::new(progress, radius);
        let (errors, nearest) =
            compute_errors_near(&state, path, Reference::RearAxle, Some(window));
        progress = nearest;
        if !(errors.crosstrack.abs() <= scenario.divergence_limit && errors.heading.is_finite()) {
            termination = Termination::Diverged;
            break;
        }
        if k > 0 && goal_reached(&state, path, progress, scenario.stop.goal_radius) {
            termination = Termination::GoalReached;
            break;
        }

        let input = SteerInput {
            state: &state,
            path,
            dt,
            steering_limit: plant.steering_limit,
            wheelbase: plant.wheelbase,
            progress,
            window,
        };
        let started = Instant::now();
        let steering = controller.steer(&input);
        let latency = if scenario.record_latency {
            started.elapsed().as_secs_f64() * 1e6
        } else {
            0.0
        };
        let throttle = longitudinal_step(&scenario.longitudinal, state.v, steering);
        let command = ControlCommand { steering, throttle };

        records.push(StepRecord {
            t: k as f64 * dt,
            state,
            command,
            errors,
            controller_latency: latency,
        });
        state = plant_step(&state, command, dt, plant);
    }

    Ok(RunLog {
        digest: scenario.digest(),
        controller: scenario.label(),
        records,
        termination,
        preprocess_latency: 0.0,
    })
}

fn goal_reached(state: &VehicleState, path: &Path, progress: usize, radius: Option<f64>) -> bool {
    if progress + 1 == path.len() {
        return true;
    }
    match radius {
        Some(r) => {
            euclidean_distance(state.position(), path.last()) <= r
                && path.arc_length_at(progress) >= path.total_length() - 2.0 * r
        }
        None => false,
    }
}
