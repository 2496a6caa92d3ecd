//! Synthetic reference tracks and the `x,y` track CSV format.
//!
//! Generated tracks are built from straight and circular-arc pieces joined
//! with continuous heading, then sampled uniformly by arc length.

use std::f64::consts::{PI, TAU};
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trajectory::{Path, Waypoint};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TrackSpec {
    /// Along +x from the origin.
    Straight { length: f64 },
    /// Closed stadium loop: straight, half circle, straight, half circle.
    Oval { straight_length: f64, radius: f64 },
    /// Closed loop of two tangent circles, left then right.
    FigureEight { radius: f64 },
    /// Straight with a lateral S-bend out and back.
    Chicane {
        length: f64,
        offset: f64,
        bend_radius: f64,
    },
    /// Open course: straight, left half circle, straight with a chicane,
    /// tighter left half circle, then a lead-out straight parallel to the
    /// start but laterally clear of it.
    OvalChicane {
        straight_length: f64,
        radius: f64,
        return_radius: f64,
        chicane_offset: f64,
        chicane_bend_radius: f64,
        lead_out: f64,
    },
}

impl TrackSpec {
    /// The bundled benchmark course (about 1.18 km).
    pub fn benchmark() -> Self {
        TrackSpec::OvalChicane {
            straight_length: 300.0,
            radius: 60.0,
            return_radius: 45.0,
            chicane_offset: 3.5,
            chicane_bend_radius: 40.0,
            lead_out: 250.0,
        }
    }

    pub fn is_closed(&self) -> bool {
        matches!(self, TrackSpec::Oval { .. } | TrackSpec::FigureEight { .. })
    }

    /// Samples the track at (about) `spacing` meters of arc.
    pub fn generate(&self, spacing: f64) -> Result<Path> {
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::InvalidTrack(format!(
                "spacing must be > 0, got {spacing}"
            )));
        }
        let pieces = self.pieces()?;
        let total: f64 = pieces.iter().map(Piece::length).sum();
        let closed = self.is_closed();
        let samples: Vec<f64> = if closed {
            let n = (total / spacing).round().max(2.0) as usize;
            (0..n).map(|k| total * k as f64 / n as f64).collect()
        } else {
            let n = (total / spacing - 1e-9).ceil().max(1.0) as usize;
            (0..=n).map(|k| total * k as f64 / n as f64).collect()
        };
        let points = sample_pieces(&pieces, &samples);
        Ok(Path::new(points)?.closed(closed))
    }

    fn pieces(&self) -> Result<Vec<Piece>> {
        let pieces = match *self {
            TrackSpec::Straight { length } => {
                positive("length", length)?;
                vec![Piece::Line(length)]
            }
            TrackSpec::Oval {
                straight_length,
                radius,
            } => {
                positive("straight_length", straight_length)?;
                positive("radius", radius)?;
                vec![
                    Piece::Line(straight_length),
                    Piece::arc(radius, PI),
                    Piece::Line(straight_length),
                    Piece::arc(radius, PI),
                ]
            }
            TrackSpec::FigureEight { radius } => {
                positive("radius", radius)?;
                vec![Piece::arc(radius, TAU), Piece::arc(radius, -TAU)]
            }
            TrackSpec::Chicane {
                length,
                offset,
                bend_radius,
            } => chicane(length, offset, bend_radius)?,
            TrackSpec::OvalChicane {
                straight_length,
                radius,
                return_radius,
                chicane_offset,
                chicane_bend_radius,
                lead_out,
            } => {
                positive("straight_length", straight_length)?;
                positive("radius", radius)?;
                positive("return_radius", return_radius)?;
                positive("lead_out", lead_out)?;
                if return_radius >= radius {
                    return Err(Error::InvalidTrack(
                        "return_radius must be smaller than radius so the lead-out clears the start"
                            .into(),
                    ));
                }
                let mut p = vec![Piece::Line(straight_length), Piece::arc(radius, PI)];
                p.extend(chicane(
                    straight_length,
                    chicane_offset,
                    chicane_bend_radius,
                )?);
                p.push(Piece::arc(return_radius, PI));
                p.push(Piece::Line(lead_out));
                p
            }
        };
        Ok(pieces)
    }
}

fn positive(name: &str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidTrack(format!(
            "{name} must be > 0, got {value}"
        )))
    }
}

/// Lead-in, S-bend out, middle straight, S-bend back, lead-out; the three
/// straights share whatever length the bends leave.
fn chicane(length: f64, offset: f64, bend_radius: f64) -> Result<Vec<Piece>> {
    positive("length", length)?;
    positive("offset", offset)?;
    positive("bend_radius", bend_radius)?;
    if offset >= 2.0 * bend_radius {
        return Err(Error::InvalidTrack(format!(
            "chicane offset {offset} needs bend_radius > {}",
            offset / 2.0
        )));
    }
    // an arc pair (+g, -g) of radius r shifts sideways by 2r(1 - cos g)
    let gamma = (1.0 - offset / (2.0 * bend_radius)).acos();
    let bend_extent = 2.0 * bend_radius * gamma.sin();
    let straight = (length - 2.0 * bend_extent) / 3.0;
    if straight <= 0.0 {
        return Err(Error::InvalidTrack(format!(
            "chicane length {length} too short for its bends ({:.3} m needed)",
            2.0 * bend_extent
        )));
    }
    Ok(vec![
        Piece::Line(straight),
        Piece::arc(bend_radius, gamma),
        Piece::arc(bend_radius, -gamma),
        Piece::Line(straight),
        Piece::arc(bend_radius, -gamma),
        Piece::arc(bend_radius, gamma),
        Piece::Line(straight),
    ])
}

#[derive(Debug, Clone, Copy)]
enum Piece {
    Line(f64),
    /// Positive angle turns left.
    Arc {
        radius: f64,
        angle: f64,
    },
}

impl Piece {
    fn arc(radius: f64, angle: f64) -> Self {
        Piece::Arc { radius, angle }
    }

    fn length(&self) -> f64 {
        match *self {
            Piece::Line(l) => l,
            Piece::Arc { radius, angle } => radius * angle.abs(),
        }
    }

    /// Pose reached after travelling `u` along the piece from `start`.
    fn advance(&self, start: Pose, u: f64) -> Pose {
        match *self {
            Piece::Line(_) => Pose {
                x: start.x + u * start.heading.cos(),
                y: start.y + u * start.heading.sin(),
                heading: start.heading,
            },
            Piece::Arc { radius, angle } => {
                let kappa = angle.signum() / radius;
                let h = start.heading + kappa * u;
                Pose {
                    x: start.x + (h.sin() - start.heading.sin()) / kappa,
                    y: start.y - (h.cos() - start.heading.cos()) / kappa,
                    heading: h,
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Pose {
    x: f64,
    y: f64,
    heading: f64,
}

/// Evaluates the centerline at ascending arc-length `samples`.
fn sample_pieces(pieces: &[Piece], samples: &[f64]) -> Vec<Waypoint> {
    let mut out = Vec::with_capacity(samples.len());
    let mut piece = 0;
    let mut piece_start = 0.0;
    let mut start = Pose::default();
    for &s in samples {
        while piece + 1 < pieces.len() && s > piece_start + pieces[piece].length() {
            let len = pieces[piece].length();
            start = pieces[piece].advance(start, len);
            piece_start += len;
            piece += 1;
        }
        let p = pieces[piece].advance(start, s - piece_start);
        out.push(Waypoint::new(p.x, p.y));
    }
    out
}

/// Reads a track CSV with header `x,y`, one waypoint per row in travel order.
pub fn read_track_csv<R: Read>(reader: R) -> std::result::Result<Vec<Waypoint>, String> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers().map_err(|e| e.to_string())?.clone();
    if headers.len() != 2 || &headers[0] != "x" || &headers[1] != "y" {
        return Err(format!(
            "expected header `x,y`, found `{}`",
            headers.iter().collect::<Vec<_>>().join(",")
        ));
    }
    let mut points = Vec::new();
    for (row, record) in rdr.deserialize::<Waypoint>().enumerate() {
        // header is line 1
        let w = record.map_err(|e| format!("line {}: {e}", row + 2))?;
        points.push(w);
    }
    Ok(points)
}

pub fn load_track(path: &std::path::Path) -> Result<Path> {
    let file = std::fs::File::open(path).map_err(|source| Error::TrackIo {
        path: path.to_path_buf(),
        source,
    })?;
    let points = read_track_csv(file).map_err(|message| Error::TrackParse {
        path: path.to_path_buf(),
        message,
    })?;
    Path::new(points).map_err(|e| Error::TrackParse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

pub fn write_track_csv<W: Write>(writer: W, path: &Path) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(["x", "y"])?;
    for w in path.waypoints() {
        wtr.write_record([w.x.to_string(), w.y.to_string()])?;
    }
    wtr.flush().map_err(csv::Error::from)?;
    Ok(())
}
