#![allow(dead_code)]

use poptrack::prelude::*;
use proptest::prelude::*;

/// A sparse polyline heading roughly along +x with bounded turns.
pub fn sparse_path() -> impl Strategy<Value = Path> {
    (
        -50.0..50.0f64,
        -50.0..50.0f64,
        -3.0..3.0f64,
        prop::collection::vec((1.0..6.0f64, -0.6..0.6f64), 2..6),
    )
        .prop_map(|(x0, y0, h0, steps)| {
            let mut pts = vec![Waypoint::new(x0, y0)];
            let mut h = h0;
            for (len, turn) in steps {
                h += turn;
                let last = *pts.last().unwrap();
                pts.push(Waypoint::new(
                    last.x + len * h.cos(),
                    last.y + len * h.sin(),
                ));
            }
            Path::new(pts).unwrap()
        })
}

pub fn dense_path() -> impl Strategy<Value = Path> {
    sparse_path().prop_map(|p| densify_path(&p, 0.05).unwrap())
}

/// A vehicle state near the path's first third.
pub fn state_near(path: &Path) -> impl Strategy<Value = VehicleState> {
    let n = path.len();
    let wps = path.waypoints().to_vec();
    (
        0..n / 3 + 1,
        -2.0..2.0f64,
        -2.0..2.0f64,
        -3.1..3.1f64,
        0.5..40.0f64,
    )
        .prop_map(move |(i, dx, dy, theta, v)| {
            VehicleState::new(wps[i].x + dx, wps[i].y + dy, theta, v)
        })
}

pub fn path_and_state() -> impl Strategy<Value = (Path, VehicleState)> {
    dense_path().prop_flat_map(|p| {
        let s = state_near(&p);
        (Just(p), s)
    })
}

pub fn mirror_path(path: &Path) -> Path {
    let wps = path
        .waypoints()
        .iter()
        .map(|w| Waypoint::new(w.x, -w.y))
        .collect();
    Path::with_params(wps, Some(path.resolution()), path.epsilon()).unwrap()
}

pub fn mirror_state(s: &VehicleState) -> VehicleState {
    VehicleState {
        x: s.x,
        y: -s.y,
        theta: -s.theta,
        v: s.v,
        omega: -s.omega,
    }
}
