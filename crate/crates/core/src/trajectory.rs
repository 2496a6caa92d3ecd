//! Waypoint geometry: distances, densification, lookahead selection and
//! tracking-error measurement.

use serde::{Deserialize, Serialize};

use crate::angle::wrap_angle;
use crate::error::{Error, Result};
use crate::vehicle::VehicleState;

/// Default distance approximation threshold for lookahead matching (meters).
pub const DEFAULT_EPSILON: f64 = 0.01;

/// Default re-discretization resolution (meters).
pub const DEFAULT_RESOLUTION: f64 = 0.01;

// Relative slack when deciding whether a segment already satisfies the
// target spacing; keeps densification idempotent under rounding.
const SPACING_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Waypoint {
    pub x: f64,
    pub y: f64,
}

impl Waypoint {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl From<(f64, f64)> for Waypoint {
    fn from((x, y): (f64, f64)) -> Self {
        Self { x, y }
    }
}

/// Straight-line distance between two points.
#[inline]
pub fn euclidean_distance(a: Waypoint, b: Waypoint) -> f64 {
    let dx = b.x - a.x;
    let dy = b.y - a.y;
    (dx * dx + dy * dy).sqrt()
}

/// An ordered, immutable waypoint sequence.
///
/// Construction validates the waypoints (at least two, all finite, no two
/// consecutive ones coincident) and precomputes cumulative arc length.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    waypoints: Vec<Waypoint>,
    arc_length: Vec<f64>,
    resolution: f64,
    epsilon: f64,
    closed: bool,
}

impl Path {
    /// Builds a path whose `resolution` is the largest consecutive spacing.
    pub fn new(waypoints: Vec<Waypoint>) -> Result<Self> {
        Self::with_params(waypoints, None, DEFAULT_EPSILON)
    }

    pub fn with_params(
        waypoints: Vec<Waypoint>,
        resolution: Option<f64>,
        epsilon: f64,
    ) -> Result<Self> {
        if waypoints.len() < 2 {
            return Err(Error::InvalidPath(format!(
                "need at least 2 waypoints, got {}",
                waypoints.len()
            )));
        }
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidPath(format!(
                "epsilon must be > 0, got {epsilon}"
            )));
        }
        if let Some(i) = waypoints.iter().position(|w| !w.is_finite()) {
            return Err(Error::InvalidPath(format!("waypoint {i} is not finite")));
        }
        let mut arc_length = Vec::with_capacity(waypoints.len());
        arc_length.push(0.0);
        let mut max_spacing: f64 = 0.0;
        for (i, pair) in waypoints.windows(2).enumerate() {
            let d = euclidean_distance(pair[0], pair[1]);
            if d <= 0.0 {
                return Err(Error::InvalidPath(format!(
                    "waypoints {i} and {} coincide",
                    i + 1
                )));
            }
            max_spacing = max_spacing.max(d);
            arc_length.push(arc_length[i] + d);
        }
        let resolution = match resolution {
            Some(r) if r > 0.0 && r.is_finite() => r,
            Some(r) => {
                return Err(Error::InvalidPath(format!(
                    "resolution must be > 0, got {r}"
                )))
            }
            None => max_spacing,
        };
        Ok(Self {
            waypoints,
            arc_length,
            resolution,
            epsilon,
            closed: false,
        })
    }

    /// Marks the path as a closed loop: lookahead scans wrap past the end.
    pub fn closed(mut self, closed: bool) -> Self {
        self.closed = closed;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidPath(format!(
                "epsilon must be > 0, got {epsilon}"
            )));
        }
        self.epsilon = epsilon;
        Ok(self)
    }

    pub fn waypoints(&self) -> &[Waypoint] {
        &self.waypoints
    }

    pub fn len(&self) -> usize {
        self.waypoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.waypoints.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<Waypoint> {
        self.waypoints.get(index).copied()
    }

    pub fn last(&self) -> Waypoint {
        self.waypoints[self.waypoints.len() - 1]
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Arc length from the first waypoint to waypoint `index`.
    pub fn arc_length_at(&self, index: usize) -> f64 {
        self.arc_length[index]
    }

    pub fn total_length(&self) -> f64 {
        self.arc_length[self.arc_length.len() - 1]
    }

    pub fn max_spacing(&self) -> f64 {
        self.arc_length
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }

    /// Number of waypoints spanning roughly `meters` of arc at this path's
    /// resolution.
    pub fn index_span(&self, meters: f64) -> usize {
        (meters / self.resolution).ceil().max(1.0) as usize
    }

    /// Direction of the segment used as the local tangent at `index`.
    pub fn tangent_at(&self, index: usize) -> f64 {
        let (a, b) = self.segment_at(index);
        (b.y - a.y).atan2(b.x - a.x)
    }

    fn segment_at(&self, index: usize) -> (Waypoint, Waypoint) {
        let i = index.min(self.len() - 2);
        (self.waypoints[i], self.waypoints[i + 1])
    }
}

/// Re-discretizes `sparse` by linear interpolation so that no two
/// consecutive waypoints are further apart than `resolution`.
///
/// Original waypoints are kept, in order. Segments that already meet the
/// spacing are copied through unchanged.
pub fn densify_path(sparse: &Path, resolution: f64) -> Result<Path> {
    if !(resolution > 0.0 && resolution.is_finite()) {
        return Err(Error::InvalidPath(format!(
            "resolution must be > 0, got {resolution}"
        )));
    }
    let wps = sparse.waypoints();
    let mut out = Vec::with_capacity(wps.len() + (sparse.total_length() / resolution) as usize);
    out.push(wps[0]);
    for pair in wps.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let len = euclidean_distance(a, b);
        let n = if len <= resolution * (1.0 + SPACING_SLACK) {
            1
        } else {
            (len / resolution).ceil() as usize
        };
        for k in 1..n {
            let f = k as f64 / n as f64;
            out.push(Waypoint::new(a.x + (b.x - a.x) * f, a.y + (b.y - a.y) * f));
        }
        out.push(b);
    }
    Ok(Path::with_params(out, Some(resolution), sparse.epsilon())?.closed(sparse.is_closed()))
}

/// Restricts a closest-point search to `[center - radius, center + radius]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchWindow {
    pub center: usize,
    pub radius: usize,
}

impl SearchWindow {
    pub fn new(center: usize, radius: usize) -> Self {
        Self { center, radius }
    }

    fn bounds(&self, len: usize) -> (usize, usize) {
        let lo = self.center.saturating_sub(self.radius).min(len - 1);
        let hi = self.center.saturating_add(self.radius).min(len - 1);
        (lo, hi)
    }
}

/// Index of the waypoint nearest to `position`; ties go to the lower index.
///
/// Without a window the whole path is scanned.
pub fn closest_index(position: Waypoint, path: &Path, window: Option<SearchWindow>) -> usize {
    let (lo, hi) = match window {
        Some(w) => w.bounds(path.len()),
        None => (0, path.len() - 1),
    };
    let mut best = lo;
    let mut best_d2 = f64::INFINITY;
    for (i, w) in path.waypoints()[lo..=hi].iter().enumerate() {
        let dx = w.x - position.x;
        let dy = w.y - position.y;
        let d2 = dx * dx + dy * dy;
        if d2 < best_d2 {
            best_d2 = d2;
            best = lo + i;
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LookaheadResult {
    pub index: usize,
    pub point: Waypoint,
    pub lookahead_distance: f64,
}

/// Scans forward from `start` for the first waypoint whose distance from
/// `position` is within `path.epsilon()` of `ld`.
///
/// Returns the final index when no waypoint qualifies. On closed paths the
/// scan wraps around once before falling back.
pub fn lookahead_index(position: Waypoint, path: &Path, ld: f64, start: usize) -> usize {
    let wps = path.waypoints();
    let start = start.min(wps.len() - 1);
    let eps = path.epsilon();
    let hit = |i: &usize| (euclidean_distance(position, wps[*i]) - ld).abs() <= eps;
    let found = if path.is_closed() {
        (start..wps.len()).chain(0..start).find(hit)
    } else {
        (start..wps.len()).find(hit)
    };
    found.unwrap_or(wps.len() - 1)
}

pub fn lookahead_point(position: Waypoint, path: &Path, ld: f64, start: usize) -> LookaheadResult {
    let index = lookahead_index(position, path, ld, start);
    LookaheadResult {
        index,
        point: path.waypoints()[index],
        lookahead_distance: ld,
    }
}

/// Point on the vehicle at which tracking errors are measured.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "point")]
pub enum Reference {
    /// Rear-axle center, which is the pose of [`VehicleState`].
    RearAxle,
    FrontAxle {
        wheelbase: f64,
    },
    /// Midpoint between the axles.
    Center {
        wheelbase: f64,
    },
}

impl Reference {
    pub fn locate(&self, state: &VehicleState) -> Waypoint {
        let offset = match *self {
            Reference::RearAxle => return Waypoint::new(state.x, state.y),
            Reference::FrontAxle { wheelbase } => wheelbase,
            Reference::Center { wheelbase } => 0.5 * wheelbase,
        };
        Waypoint::new(
            state.x + offset * state.theta.cos(),
            state.y + offset * state.theta.sin(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TrackingErrors {
    /// Signed perpendicular offset, positive left of the path direction.
    pub crosstrack: f64,
    /// Path tangent minus vehicle yaw, in `(-PI, PI]`.
    pub heading: f64,
}

/// Crosstrack and heading error of `state` relative to `path`.
pub fn compute_errors(state: &VehicleState, path: &Path, reference: Reference) -> TrackingErrors {
    compute_errors_near(state, path, reference, None).0
}

/// Like [`compute_errors`], restricting the closest-point search to `window`.
/// Also returns the closest index used.
pub fn compute_errors_near(
    state: &VehicleState,
    path: &Path,
    reference: Reference,
    window: Option<SearchWindow>,
) -> (TrackingErrors, usize) {
    let p = reference.locate(state);
    let idx = closest_index(p, path, window);
    let (a, b) = path.segment_at(idx);
    let dx = b.x - a.x;
    let dy = b.y - a.y;
    let len = (dx * dx + dy * dy).sqrt();
    let crosstrack = (dx * (p.y - a.y) - dy * (p.x - a.x)) / len;
    let heading = wrap_angle(dy.atan2(dx) - state.theta);
    (
        TrackingErrors {
            crosstrack,
            heading,
        },
        idx,
    )
}
