use std::f64::consts::{PI, TAU};

/// Wraps an angle into `(-PI, PI]`.
///
/// Values already inside the interval are returned untouched, and the
/// reduction is odd-symmetric (`wrap_angle(-a) == -wrap_angle(a)`) everywhere
/// except at the `±PI` boundary itself.
pub fn wrap_angle(a: f64) -> f64 {
    if a > -PI && a <= PI {
        return a;
    }
    let mut r = a - TAU * (a / TAU).round();
    if r <= -PI {
        r += TAU;
    } else if r > PI {
        r -= TAU;
    }
    r
}

pub fn deg_to_rad(deg: f64) -> f64 {
    deg.to_radians()
}
