use serde::{Deserialize, Serialize};

use super::{RunLog, StepRecord};
use crate::error::{Error, Result};

/// Startup transient dropped by [`compute_metrics_trimmed`] by default.
pub const DEFAULT_TRIM_SECONDS: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrackingMetrics {
    /// meters
    pub mean_abs_crosstrack: f64,
    /// radians
    pub mean_abs_heading: f64,
    /// meters
    pub max_abs_crosstrack: f64,
    /// microseconds
    pub mean_latency: f64,
    /// microseconds
    pub p99_latency: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatencyStats {
    pub mean: f64,
    pub p50: f64,
    pub p99: f64,
    pub count: usize,
}

/// Mean and nearest-rank percentiles of latency samples.
pub fn latency_stats(samples: &[f64]) -> Option<LatencyStats> {
    if samples.is_empty() {
        return None;
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let rank = |p: f64| {
        let r = (p * sorted.len() as f64).ceil() as usize;
        sorted[r.clamp(1, sorted.len()) - 1]
    };
    Some(LatencyStats {
        mean: samples.iter().sum::<f64>() / samples.len() as f64,
        p50: rank(0.50),
        p99: rank(0.99),
        count: samples.len(),
    })
}

pub fn compute_metrics(log: &RunLog) -> Result<TrackingMetrics> {
    compute_metrics_from(&log.records)
}

/// Metrics over the records at or after `skip_seconds`.
pub fn compute_metrics_trimmed(log: &RunLog, skip_seconds: f64) -> Result<TrackingMetrics> {
    let first = log.records.partition_point(|r| r.t < skip_seconds);
    compute_metrics_from(&log.records[first..])
}

pub fn compute_metrics_from(records: &[StepRecord]) -> Result<TrackingMetrics> {
    if records.is_empty() {
        return Err(Error::EmptyLog);
    }
    let n = records.len() as f64;
    let mut sum_ct = 0.0;
    let mut sum_hd = 0.0;
    let mut max_ct: f64 = 0.0;
    for r in records {
        let ct = r.errors.crosstrack.abs();
        sum_ct += ct;
        sum_hd += r.errors.heading.abs();
        max_ct = max_ct.max(ct);
    }
    let latencies: Vec<f64> = records.iter().map(|r| r.controller_latency).collect();
    let lat = latency_stats(&latencies).expect("non-empty");
    Ok(TrackingMetrics {
        mean_abs_crosstrack: sum_ct / n,
        mean_abs_heading: sum_hd / n,
        max_abs_crosstrack: max_ct,
        mean_latency: lat.mean,
        p99_latency: lat.p99,
        steps: records.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trajectory::TrackingErrors;

    fn record(t: f64, crosstrack: f64, heading: f64, latency: f64) -> StepRecord {
        StepRecord {
            t,
            state: Default::default(),
            command: Default::default(),
            errors: TrackingErrors {
                crosstrack,
                heading,
            },
            controller_latency: latency,
        }
    }

    #[test]
    fn zero_errors() {
        let recs: Vec<_> = (0..4).map(|k| record(k as f64, 0.0, 0.0, 0.0)).collect();
        let m = compute_metrics_from(&recs).unwrap();
        assert_eq!(m.mean_abs_crosstrack, 0.0);
        assert_eq!(m.mean_abs_heading, 0.0);
        assert_eq!(m.steps, 4);
    }

    #[test]
    fn absolute_mean() {
        let recs = [record(0.0, 0.2, 0.0, 0.0), record(0.05, -0.2, 0.0, 0.0)];
        assert_eq!(
            compute_metrics_from(&recs).unwrap().mean_abs_crosstrack,
            0.2
        );
    }

    #[test]
    fn empty_rejected() {
        assert!(matches!(compute_metrics_from(&[]), Err(Error::EmptyLog)));
    }

    #[test]
    fn percentiles_nearest_rank() {
        let samples: Vec<f64> = (1..=100).map(f64::from).collect();
        let s = latency_stats(&samples).unwrap();
        assert_eq!(s.p50, 50.0);
        assert_eq!(s.p99, 99.0);
        assert_eq!(s.mean, 50.5);
        let one = latency_stats(&[7.0]).unwrap();
        assert_eq!((one.p50, one.p99), (7.0, 7.0));
        assert!(latency_stats(&[]).is_none());
    }
}
