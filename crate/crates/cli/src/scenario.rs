//! JSON scenario files.
//!
//! A scenario file describes one track and one or more lateral controllers
//! sharing every other setting. Units are meters, seconds and radians;
//! `nbd_deg` is the only degree-valued key. Unknown keys are rejected.

use std::path::{Path as FsPath, PathBuf};

use poptrack::prelude::*;
use poptrack::sim::TrackSource;
use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: Option<String>,
    pub track: TrackEntry,
    #[serde(default = "default_resolution")]
    pub densify_resolution: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    pub controller: Option<ControllerEntry>,
    pub controllers: Option<Vec<ControllerEntry>>,
    #[serde(default)]
    pub longitudinal: LongitudinalConfig,
    #[serde(default)]
    pub plant: PlantParams,
    #[serde(default)]
    pub spawn: VehicleState,
    #[serde(default)]
    pub stop: StopRule,
    pub divergence_limit: Option<f64>,
    pub search_window: Option<f64>,
    #[serde(default)]
    pub outputs: Outputs,
}

fn default_resolution() -> f64 {
    0.01
}

fn default_dt() -> f64 {
    0.05
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    /// Output directory used when `-o` is not given; relative to the
    /// scenario file.
    pub dir: Option<PathBuf>,
    pub svg: bool,
}

impl Default for Outputs {
    fn default() -> Self {
        Self {
            dir: None,
            svg: true,
        }
    }
}

/// Either `{"csv": "file.csv"}` or `{"generator": {...}, "spacing": 1.0}`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrackEntry {
    /// Track CSV, relative to the scenario file.
    pub csv: Option<PathBuf>,
    pub generator: Option<TrackSpec>,
    /// Sparse generator spacing, meters; defaults to 1.
    pub spacing: Option<f64>,
}

impl TrackEntry {
    fn source(&self, base: &FsPath) -> CliResult<TrackSource> {
        match (&self.csv, &self.generator) {
            (Some(csv), None) => {
                if self.spacing.is_some() {
                    return Err(CliError::Usage(
                        "track: `spacing` only applies to `generator` tracks".into(),
                    ));
                }
                Ok(TrackSource::Csv(base.join(csv)))
            }
            (None, Some(spec)) => Ok(TrackSource::Generated {
                spec: spec.clone(),
                spacing: self.spacing.unwrap_or(1.0),
            }),
            _ => Err(CliError::Usage(
                "track: give exactly one of `csv` or `generator`".into(),
            )),
        }
    }
}

/// One lateral controller; omitted parameters take their defaults.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ControllerEntry {
    Pid(PidEntry),
    PurePursuit(PurePursuitEntry),
    Stanley(StanleyEntry),
    Pop(PopEntry),
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PidEntry {
    pub name: Option<String>,
    pub kp: Option<f64>,
    pub ki: Option<f64>,
    pub kd: Option<f64>,
    pub buffer_len: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PurePursuitEntry {
    pub name: Option<String>,
    pub wheelbase: Option<f64>,
    pub kv: Option<f64>,
    pub min_speed_floor: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StanleyEntry {
    pub name: Option<String>,
    pub k_cross: Option<f64>,
    pub kv: Option<f64>,
    pub ks: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PopEntry {
    pub name: Option<String>,
    pub kv: Option<f64>,
    pub ld_min: Option<f64>,
    pub nbd: Option<f64>,
    pub nbd_deg: Option<f64>,
    pub resolution: Option<usize>,
    pub predict_dt: Option<f64>,
}

impl ControllerEntry {
    pub fn name(&self) -> Option<&str> {
        match self {
            ControllerEntry::Pid(e) => e.name.as_deref(),
            ControllerEntry::PurePursuit(e) => e.name.as_deref(),
            ControllerEntry::Stanley(e) => e.name.as_deref(),
            ControllerEntry::Pop(e) => e.name.as_deref(),
        }
    }

    pub fn to_config(&self) -> CliResult<LateralConfig> {
        Ok(match self {
            ControllerEntry::Pid(e) => {
                let d = PidConfig::default();
                LateralConfig::Pid(PidConfig {
                    kp: e.kp.unwrap_or(d.kp),
                    ki: e.ki.unwrap_or(d.ki),
                    kd: e.kd.unwrap_or(d.kd),
                    buffer_len: e.buffer_len.unwrap_or(d.buffer_len),
                })
            }
            ControllerEntry::PurePursuit(e) => {
                let d = PurePursuitConfig::default();
                LateralConfig::PurePursuit(PurePursuitConfig {
                    wheelbase: e.wheelbase.unwrap_or(d.wheelbase),
                    kv: e.kv.unwrap_or(d.kv),
                    min_speed_floor: e.min_speed_floor.unwrap_or(d.min_speed_floor),
                })
            }
            ControllerEntry::Stanley(e) => {
                let d = StanleyConfig::default();
                LateralConfig::Stanley(StanleyConfig {
                    k_cross: e.k_cross.unwrap_or(d.k_cross),
                    kv: e.kv.unwrap_or(d.kv),
                    ks: e.ks.unwrap_or(d.ks),
                })
            }
            ControllerEntry::Pop(e) => {
                let d = PopConfig::default();
                let nbd = match (e.nbd, e.nbd_deg) {
                    (Some(_), Some(_)) => {
                        return Err(CliError::Usage(
                            "pop: give either `nbd` (radians) or `nbd_deg`, not both".into(),
                        ))
                    }
                    (Some(rad), None) => rad,
                    (None, Some(deg)) => deg.to_radians(),
                    (None, None) => d.nbd,
                };
                LateralConfig::Pop(PopConfig {
                    kv: e.kv.unwrap_or(d.kv),
                    ld_min: e.ld_min.unwrap_or(d.ld_min),
                    nbd,
                    resolution: e.resolution.unwrap_or(d.resolution),
                    predict_dt: e.predict_dt.unwrap_or(d.predict_dt),
                })
            }
        })
    }
}

/// A parsed scenario file together with the directory it was read from.
#[derive(Debug, Clone)]
pub struct LoadedScenario {
    pub file: ScenarioFile,
    pub base_dir: PathBuf,
}

impl LoadedScenario {
    pub fn from_path(path: &FsPath) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::io(format!("cannot read scenario {}", path.display()), e))?;
        let file = parse_scenario(&text)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        let base_dir = path.parent().map(FsPath::to_path_buf).unwrap_or_default();
        Ok(Self { file, base_dir })
    }

    pub fn entries(&self) -> CliResult<Vec<&ControllerEntry>> {
        match (&self.file.controller, &self.file.controllers) {
            (Some(_), Some(_)) => Err(CliError::Usage(
                "give either `controller` or `controllers`, not both".into(),
            )),
            (None, None) => Err(CliError::Usage(
                "missing `controller` (or `controllers`)".into(),
            )),
            (Some(c), None) => Ok(vec![c]),
            (None, Some(list)) if list.is_empty() => {
                Err(CliError::Usage("`controllers` is empty".into()))
            }
            (None, Some(list)) => Ok(list.iter().collect()),
        }
    }

    /// One core scenario per controller entry, validated.
    pub fn scenarios(&self, deterministic: bool) -> CliResult<Vec<Scenario>> {
        let f = &self.file;
        let mut out = Vec::new();
        for entry in self.entries()? {
            let mut s = Scenario::new(f.track.source(&self.base_dir)?, entry.to_config()?);
            s.name = entry.name().map(str::to_string);
            s.densify_resolution = f.densify_resolution;
            s.dt = f.dt;
            s.longitudinal = f.longitudinal.clone();
            s.plant = f.plant;
            s.spawn = f.spawn;
            s.stop = f.stop;
            if let Some(v) = f.divergence_limit {
                s.divergence_limit = v;
            }
            if let Some(v) = f.search_window {
                s.search_window = v;
            }
            s.record_latency = !deterministic;
            s.validate()?;
            out.push(s);
        }
        Ok(out)
    }

    pub fn output_dir(&self, flag: Option<&FsPath>) -> PathBuf {
        match (flag, &self.file.outputs.dir) {
            (Some(dir), _) => dir.to_path_buf(),
            (None, Some(dir)) => self.base_dir.join(dir),
            (None, None) => PathBuf::from("."),
        }
    }
}

/// Parses scenario JSON. Error messages carry the line and column, and name
/// the offending key for unknown fields.
pub fn parse_scenario(text: &str) -> Result<ScenarioFile, serde_json::Error> {
    serde_json::from_str(text)
}

/// A `gen-track` document: `{"generator": {...}, "spacing": 1.0}`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorFile {
    pub generator: TrackSpec,
    #[serde(default = "default_spacing")]
    pub spacing: f64,
}

fn default_spacing() -> f64 {
    1.0
}

pub fn parse_generator(text: &str) -> Result<GeneratorFile, serde_json::Error> {
    serde_json::from_str(text)
}
