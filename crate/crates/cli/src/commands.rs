//! The four subcommands. Each returns the text to print on success.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path as FsPath, PathBuf};

use poptrack::prelude::*;
use poptrack::sim::{compare_with_logs, write_run_csv};
use poptrack::tracks::write_track_csv;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::scenario::{parse_generator, LoadedScenario};
use crate::svg::{decimate, render, Panel, Series};

/// Environment variable capping the number of parallel runs in `compare`.
pub const THREADS_ENV: &str = "POP_TRACK_THREADS";

const MAX_PLOT_POINTS: usize = 4000;
const SVG_WIDTH: f64 = 900.0;

fn create_dir(dir: &FsPath) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| {
        CliError::io(
            format!("cannot create output directory {}", dir.display()),
            e,
        )
    })
}

fn write_file(path: &FsPath, contents: &str) -> CliResult<()> {
    fs::write(path, contents)
        .map_err(|e| CliError::io(format!("cannot write {}", path.display()), e))
}

fn write_json<T: Serialize>(path: &FsPath, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::io(format!("cannot serialize {}", path.display()), e))?;
    text.push('\n');
    write_file(path, &text)
}

fn dense_track(scenario: &Scenario) -> CliResult<Path> {
    Ok(densify_path(
        &scenario.track.resolve()?,
        scenario.densify_resolution,
    )?)
}

fn xy(path: &Path) -> Vec<(f64, f64)> {
    path.waypoints().iter().map(|w| (w.x, w.y)).collect()
}

fn driven(log: &RunLog) -> Vec<(f64, f64)> {
    log.records.iter().map(|r| (r.state.x, r.state.y)).collect()
}

fn diverged_message(log: &RunLog) -> String {
    match log.records.last() {
        Some(r) => format!(
            "{} diverged at t = {:.2} s (crosstrack {:.3} m)",
            log.controller, r.t, r.errors.crosstrack
        ),
        None => format!("{} diverged before its first step", log.controller),
    }
}

/// Runs a single-controller scenario and writes `run.csv`, `metrics.json`
/// and (unless disabled) `trajectory.svg`.
pub fn simulate(
    scenario_path: &FsPath,
    out: Option<&FsPath>,
    deterministic: bool,
) -> CliResult<String> {
    let loaded = LoadedScenario::from_path(scenario_path)?;
    let mut scenarios = loaded.scenarios(deterministic)?;
    if scenarios.len() != 1 {
        return Err(CliError::Usage(format!(
            "{} lists {} controllers; use `compare`",
            scenario_path.display(),
            scenarios.len()
        )));
    }
    let scenario = scenarios.remove(0);
    let dir = loaded.output_dir(out);
    let path = dense_track(&scenario)?;
    let log = run_on_path(&scenario, &path)?;
    if log.records.is_empty() {
        return Err(CliError::Diverged(diverged_message(&log)));
    }
    let metrics = compute_metrics(&log)?;

    create_dir(&dir)?;
    let csv_path = dir.join("run.csv");
    let file = File::create(&csv_path)
        .map_err(|e| CliError::io(format!("cannot write {}", csv_path.display()), e))?;
    write_run_csv(BufWriter::new(file), &log)?;
    write_json(&dir.join("metrics.json"), &metrics)?;
    if loaded.file.outputs.svg {
        let steering: Vec<_> = log
            .records
            .iter()
            .map(|r| (r.t, r.command.steering))
            .collect();
        let panels = [
            Panel {
                title: format!("{}: driven path over reference [m]", log.controller),
                series: vec![
                    Series::reference(decimate(&xy(&path), MAX_PLOT_POINTS)),
                    Series::new(
                        log.controller.clone(),
                        decimate(&driven(&log), MAX_PLOT_POINTS),
                        0,
                    ),
                ],
                equal_aspect: true,
                height: 600.0,
            },
            Panel {
                title: "steering [rad] over time [s]".into(),
                series: vec![Series::new(
                    "steering",
                    decimate(&steering, MAX_PLOT_POINTS),
                    1,
                )],
                equal_aspect: false,
                height: 250.0,
            },
        ];
        write_file(&dir.join("trajectory.svg"), &render(&panels, SVG_WIDTH))?;
    }

    if log.termination == Termination::Diverged {
        return Err(CliError::Diverged(diverged_message(&log)));
    }
    Ok(format!(
        "{}: {} after {} steps, mean |crosstrack| {:.4} m, mean |heading| {:.4} rad, outputs in {}",
        log.controller,
        log.termination.as_str(),
        metrics.steps,
        metrics.mean_abs_crosstrack,
        metrics.mean_abs_heading,
        dir.display()
    ))
}

pub fn compare_threads() -> CliResult<usize> {
    let available = std::thread::available_parallelism().map_or(1, |n| n.get());
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n.min(available.max(1))),
            _ => Err(CliError::Usage(format!(
                "{THREADS_ENV} must be a positive integer, got `{v}`"
            ))),
        },
        Err(_) => Ok(available),
    }
}

/// Runs every controller of the scenario on the shared track and writes
/// `comparison.json` and (unless disabled) `comparison.svg`.
pub fn compare(
    scenario_path: &FsPath,
    out: Option<&FsPath>,
    deterministic: bool,
) -> CliResult<String> {
    let loaded = LoadedScenario::from_path(scenario_path)?;
    let scenarios = loaded.scenarios(deterministic)?;
    let dir = loaded.output_dir(out);
    let path = dense_track(&scenarios[0])?;
    let (comparison, logs) = compare_with_logs(&scenarios, &path, compare_threads()?)?;

    create_dir(&dir)?;
    write_json(&dir.join("comparison.json"), &comparison)?;
    if loaded.file.outputs.svg {
        let mut series = vec![Series::reference(decimate(&xy(&path), MAX_PLOT_POINTS))];
        for (i, log) in logs.iter().enumerate() {
            series.push(Series::new(
                log.controller.clone(),
                decimate(&driven(log), MAX_PLOT_POINTS),
                i,
            ));
        }
        let panel = Panel {
            title: "driven paths over reference [m]".into(),
            series,
            equal_aspect: true,
            height: 700.0,
        };
        write_file(&dir.join("comparison.svg"), &render(&[panel], SVG_WIDTH))?;
    }

    let diverged: Vec<_> = logs
        .iter()
        .filter(|l| l.termination == Termination::Diverged)
        .map(diverged_message)
        .collect();
    if !diverged.is_empty() {
        return Err(CliError::Diverged(diverged.join("; ")));
    }

    let mut report = String::new();
    for name in &comparison.ranking {
        let row = comparison.row(name).expect("ranked rows exist");
        report.push_str(&format!(
            "{}. {:<14} mean |crosstrack| {:.4} m  mean |heading| {:.4} rad  ({})\n",
            row.rank,
            row.name,
            row.metrics.mean_abs_crosstrack,
            row.metrics.mean_abs_heading,
            row.termination.as_str()
        ));
    }
    report.push_str(&format!("outputs in {}", dir.display()));
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchEntry {
    pub name: String,
    pub controller: String,
    pub iterations: usize,
    pub samples: usize,
    pub mean_us: f64,
    pub p50_us: f64,
    pub p99_us: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub iterations: usize,
    pub entries: Vec<BenchEntry>,
}

/// Latency statistics for each controller of the scenario, pooled over all
/// steps of `iterations` runs.
pub fn bench_scenario(
    loaded: &LoadedScenario,
    iterations: usize,
) -> CliResult<(BenchReport, Vec<String>)> {
    if iterations == 0 {
        return Err(CliError::Usage("iterations must be >= 1".into()));
    }
    let scenarios = loaded.scenarios(false)?;
    let path = dense_track(&scenarios[0])?;
    let mut entries = Vec::new();
    let mut diverged = Vec::new();
    for s in &scenarios {
        let mut samples = Vec::new();
        for _ in 0..iterations {
            let log = run_on_path(s, &path)?;
            if log.termination == Termination::Diverged {
                diverged.push(diverged_message(&log));
            }
            samples.extend(log.records.iter().map(|r| r.controller_latency));
        }
        let stats = latency_stats(&samples)
            .ok_or_else(|| CliError::Diverged(format!("{} produced no steps", s.label())))?;
        entries.push(BenchEntry {
            name: s.label(),
            controller: s.controller.name().to_string(),
            iterations,
            samples: stats.count,
            mean_us: stats.mean,
            p50_us: stats.p50,
            p99_us: stats.p99,
        });
    }
    diverged.dedup();
    Ok((
        BenchReport {
            iterations,
            entries,
        },
        diverged,
    ))
}

/// Times the lateral controller and writes `bench.json`.
pub fn bench(scenario_path: &FsPath, iterations: usize, out: Option<&FsPath>) -> CliResult<String> {
    let loaded = LoadedScenario::from_path(scenario_path)?;
    let (report, diverged) = bench_scenario(&loaded, iterations)?;
    let dir = loaded.output_dir(out);
    create_dir(&dir)?;
    write_json(&dir.join("bench.json"), &report)?;
    if !diverged.is_empty() {
        return Err(CliError::Diverged(diverged.join("; ")));
    }
    let lines: Vec<String> = report
        .entries
        .iter()
        .map(|e| {
            format!(
                "{:<14} mean {:.2} us  p50 {:.2} us  p99 {:.2} us  ({} steps over {} iterations)",
                e.name, e.mean_us, e.p50_us, e.p99_us, e.samples, e.iterations
            )
        })
        .collect();
    Ok(lines.join("\n"))
}

/// Resolves the `gen-track` argument: `benchmark`, an inline JSON document,
/// or a path to one.
fn generator_spec(spec: &str) -> CliResult<(TrackSpec, f64)> {
    if spec == "benchmark" {
        return Ok((TrackSpec::benchmark(), 1.0));
    }
    let text = if spec.trim_start().starts_with('{') {
        spec.to_string()
    } else {
        fs::read_to_string(spec)
            .map_err(|e| CliError::io(format!("cannot read track spec {spec}"), e))?
    };
    let g = parse_generator(&text).map_err(|e| CliError::Usage(format!("track spec: {e}")))?;
    Ok((g.generator, g.spacing))
}

/// Writes the generated sparse track as an `x,y` CSV.
pub fn gen_track(spec: &str, out: &FsPath) -> CliResult<String> {
    let (spec, spacing) = generator_spec(spec)?;
    let path = spec.generate(spacing)?;
    let file = File::create(out)
        .map_err(|e| CliError::io(format!("cannot write {}", out.display()), e))?;
    let mut w = BufWriter::new(file);
    write_track_csv(&mut w, &path)?;
    w.flush()
        .map_err(|e| CliError::io(format!("cannot write {}", out.display()), e))?;
    Ok(format!(
        "{} waypoints, {:.1} m, written to {}",
        path.len(),
        path.total_length(),
        out.display()
    ))
}

/// Path of the scenario bundled with this crate.
pub fn bundled_benchmark() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios/benchmark.json")
}
