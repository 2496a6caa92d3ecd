use std::io::Write;

use super::RunLog;
use crate::error::Result;

pub const RUN_CSV_HEADER: [&str; 10] = [
    "t",
    "x",
    "y",
    "theta",
    "v",
    "steering",
    "throttle",
    "crosstrack",
    "heading_err",
    "latency_us",
];

/// Writes one row per step. Floats use the shortest round-trip
/// representation, so identical logs produce identical bytes.
pub fn write_run_csv<W: Write>(writer: W, log: &RunLog) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(RUN_CSV_HEADER)?;
    for r in &log.records {
        let row = [
            r.t,
            r.state.x,
            r.state.y,
            r.state.theta,
            r.state.v,
            r.command.steering,
            r.command.throttle,
            r.errors.crosstrack,
            r.errors.heading,
            r.controller_latency,
        ];
        wtr.write_record(row.iter().map(f64::to_string))?;
    }
    wtr.flush().map_err(csv::Error::from)?;
    Ok(())
}
