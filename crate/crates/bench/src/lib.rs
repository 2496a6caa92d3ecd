//! Shared fixtures for the criterion benches.

use poptrack::prelude::*;

/// The benchmark course, sparse at 1 m and densified to 0.01 m.
pub fn benchmark_paths() -> (Path, Path) {
    let sparse = TrackSpec::benchmark()
        .generate(1.0)
        .expect("benchmark track");
    let dense = densify_path(&sparse, 0.01).expect("densify");
    (sparse, dense)
}

/// States sampled along the dense path with a small lateral offset and
/// yaw error, at cruising speed.
pub fn sample_states(path: &Path, count: usize) -> Vec<VehicleState> {
    let stride = (path.len() / count.max(1)).max(1);
    (0..count)
        .map(|k| {
            let i = (k * stride).min(path.len() - 2);
            let w = path.waypoints()[i];
            let heading = path.tangent_at(i);
            let offset = if k % 2 == 0 { 0.3 } else { -0.3 };
            VehicleState::new(
                w.x - offset * heading.sin(),
                w.y + offset * heading.cos(),
                heading + 0.02,
                20.0,
            )
        })
        .collect()
}
