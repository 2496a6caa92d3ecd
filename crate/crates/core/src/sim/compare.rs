use serde::Serialize;

use super::{
    compute_metrics, compute_metrics_trimmed, run_on_path, RunLog, Scenario, Termination,
    TrackingMetrics, DEFAULT_TRIM_SECONDS,
};
use crate::error::{Error, Result};
use crate::trajectory::{densify_path, Path};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub name: String,
    pub controller: String,
    /// 1-based, by mean absolute crosstrack error.
    pub rank: usize,
    pub termination: Termination,
    pub metrics: TrackingMetrics,
    /// Metrics with the startup transient removed, if any steps remain.
    pub trimmed_metrics: Option<TrackingMetrics>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    /// In input order.
    pub rows: Vec<ComparisonRow>,
    /// Row names, best first.
    pub ranking: Vec<String>,
    pub trim_seconds: f64,
}

impl Comparison {
    pub fn winner(&self) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.rank == 1)
    }

    pub fn row(&self, name: &str) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.name == name)
    }
}

/// Runs every scenario on their shared track and ranks them.
///
/// All scenarios must agree on everything except the lateral controller and
/// the label. Up to `threads` runs execute at once; results do not depend on
/// the thread count (apart from latency figures).
pub fn compare(scenarios: &[Scenario], threads: usize) -> Result<Comparison> {
    let first = scenarios
        .first()
        .ok_or_else(|| Error::Heterogeneous("nothing to compare".into()))?;
    check_homogeneous(scenarios)?;
    for s in scenarios {
        s.validate()?;
    }
    let dense = densify_path(&first.track.resolve()?, first.densify_resolution)?;
    compare_on_path(scenarios, &dense, threads)
}

pub fn compare_on_path(scenarios: &[Scenario], path: &Path, threads: usize) -> Result<Comparison> {
    Ok(compare_with_logs(scenarios, path, threads)?.0)
}

/// Like [`compare_on_path`], also returning each run's log in input order.
pub fn compare_with_logs(
    scenarios: &[Scenario],
    path: &Path,
    threads: usize,
) -> Result<(Comparison, Vec<RunLog>)> {
    check_homogeneous(scenarios)?;
    let threads = threads.max(1);
    let mut logs = Vec::with_capacity(scenarios.len());
    for chunk in scenarios.chunks(threads) {
        let results: Vec<_> = std::thread::scope(|scope| {
            let handles: Vec<_> = chunk
                .iter()
                .map(|s| scope.spawn(move || run_on_path(s, path)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("simulation thread panicked"))
                .collect()
        });
        for r in results {
            logs.push(r?);
        }
    }

    let mut rows = Vec::with_capacity(logs.len());
    for (s, log) in scenarios.iter().zip(&logs) {
        rows.push(ComparisonRow {
            name: s.label(),
            controller: s.controller.name().to_string(),
            rank: 0,
            termination: log.termination,
            metrics: compute_metrics(log)?,
            trimmed_metrics: compute_metrics_trimmed(log, DEFAULT_TRIM_SECONDS).ok(),
        });
    }
    let mut order: Vec<usize> = (0..rows.len()).collect();
    // stable: equal errors keep input order
    order.sort_by(|&a, &b| {
        rows[a]
            .metrics
            .mean_abs_crosstrack
            .total_cmp(&rows[b].metrics.mean_abs_crosstrack)
    });
    for (rank, &i) in order.iter().enumerate() {
        rows[i].rank = rank + 1;
    }
    let comparison = Comparison {
        ranking: order.iter().map(|&i| rows[i].name.clone()).collect(),
        rows,
        trim_seconds: DEFAULT_TRIM_SECONDS,
    };
    Ok((comparison, logs))
}

fn check_homogeneous(scenarios: &[Scenario]) -> Result<()> {
    let Some(first) = scenarios.first() else {
        return Err(Error::Heterogeneous("nothing to compare".into()));
    };
    for (i, s) in scenarios.iter().enumerate().skip(1) {
        let mismatch = if s.track != first.track {
            Some("track")
        } else if s.densify_resolution != first.densify_resolution {
            Some("densify_resolution")
        } else if s.dt != first.dt {
            Some("dt")
        } else if s.longitudinal != first.longitudinal {
            Some("longitudinal")
        } else if s.plant != first.plant {
            Some("plant")
        } else if s.spawn != first.spawn {
            Some("spawn")
        } else if s.stop != first.stop {
            Some("stop")
        } else if s.divergence_limit != first.divergence_limit {
            Some("divergence_limit")
        } else if s.search_window != first.search_window {
            Some("search_window")
        } else {
            None
        };
        if let Some(field) = mismatch {
            return Err(Error::Heterogeneous(format!(
                "entry {i} ({}) differs from entry 0 in `{field}`",
                s.label()
            )));
        }
    }
    let mut names: Vec<String> = scenarios.iter().map(Scenario::label).collect();
    names.sort();
    if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::Heterogeneous(format!(
            "duplicate entry name `{}`",
            w[0]
        )));
    }
    Ok(())
}
