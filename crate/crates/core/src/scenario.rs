//! Scenario files.
//!
//! A scenario is a JSON document with four sections:
//!
//! ```json
//! {
//!   "name": "scenario01",
//!   "link": { "capacity_mbps": 622.0, "mam_overprovision": true },
//!   "classes": [ { "class": 0, "bc_mbps": 622.0 }, { "class": 1, "bc_mbps": 435.4 } ],
//!   "generators": [ { "class": 1, "mean_interarrival_s": 4.0, "start_delay_s": 300.0,
//!                     "bandwidth_min_mbps": 5.0, "bandwidth_max_mbps": 20.0,
//!                     "mean_holding_s": 150.0 } ],
//!   "simulation": { "total_lsps": 1000, "seed": 1 }
//! }
//! ```
//!
//! `classes` must be listed in index order. An optional top-level `models`
//! array (default: all three) restricts which models the constraints are
//! validated for. The seed is mandatory. Errors name the offending field
//! path, e.g. `generators[1].mean_holding_s`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::model::{ClassConfig, Model, MAX_CLASSES};
use crate::units::Bandwidth;
use crate::workload::{GeneratorSpec, ScenarioSpec};
use crate::{Error, Result};

const SCENARIO01: &str = include_str!("../scenarios/scenario01.json");
const SCENARIO02: &str = include_str!("../scenarios/scenario02.json");

/// Names of the bundled scenarios.
pub const PRESETS: [&str; 2] = ["scenario01", "scenario02"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    description: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    models: Option<Vec<Model>>,
    link: LinkSection,
    classes: Vec<ClassSection>,
    generators: Vec<GeneratorSpec>,
    simulation: SimulationSection,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LinkSection {
    capacity_mbps: Bandwidth,
    #[serde(default)]
    mam_overprovision: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassSection {
    class: usize,
    bc_mbps: Bandwidth,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimulationSection {
    total_lsps: usize,
    seed: u64,
}

/// A validated scenario.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub spec: ScenarioSpec,
    /// Models the class constraints were validated for.
    pub models: Vec<Model>,
    pub description: Option<String>,
}

impl Scenario {
    pub fn name(&self) -> &str {
        &self.spec.name
    }

    pub fn class_config(&self) -> &ClassConfig {
        &self.spec.class_config
    }

    pub fn supports(&self, model: Model) -> bool {
        self.models.contains(&model)
    }
}

/// Returns the bundled JSON of a preset.
pub fn preset_source(name: &str) -> Option<&'static str> {
    match name {
        "scenario01" => Some(SCENARIO01),
        "scenario02" => Some(SCENARIO02),
        _ => None,
    }
}

pub fn preset(name: &str) -> Option<Scenario> {
    preset_source(name).map(|src| parse_scenario(src).expect("bundled presets are valid"))
}

/// Loads a preset by name, or otherwise a scenario file from disk.
pub fn load_scenario(path_or_preset: &str) -> Result<Scenario> {
    if let Some(src) = preset_source(path_or_preset) {
        return parse_scenario(src);
    }
    let path = Path::new(path_or_preset);
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_scenario(&text)
}

pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: ScenarioFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::Scenario {
            path: if path == "." { "<root>".into() } else { path },
            message: e.into_inner().to_string(),
        }
    })?;
    validate(file)
}

fn at(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Scenario {
        path: path.into(),
        message: message.into(),
    }
}

fn validate(file: ScenarioFile) -> Result<Scenario> {
    if file.name.trim().is_empty() {
        return Err(at("name", "must not be empty"));
    }
    if !file.link.capacity_mbps.is_positive() {
        return Err(at("link.capacity_mbps", "must be positive"));
    }
    if file.classes.is_empty() || file.classes.len() > MAX_CLASSES {
        return Err(at("classes", format!("expected 1..={MAX_CLASSES} classes")));
    }
    for (i, c) in file.classes.iter().enumerate() {
        if c.class != i {
            return Err(at(
                format!("classes[{i}].class"),
                format!("expected {i}, found {}", c.class),
            ));
        }
        if !c.bc_mbps.is_positive() {
            return Err(at(format!("classes[{i}].bc_mbps"), "must be positive"));
        }
    }
    let cfg = ClassConfig {
        bc: file.classes.iter().map(|c| c.bc_mbps).collect(),
        link_capacity: file.link.capacity_mbps,
        mam_overprovision: file.link.mam_overprovision,
    };

    let models = file.models.unwrap_or_else(|| Model::ALL.to_vec());
    if models.is_empty() {
        return Err(at("models", "must list at least one model"));
    }
    for model in &models {
        if model.is_nested() {
            if cfg.bc[0] != cfg.link_capacity {
                return Err(at(
                    "classes[0].bc_mbps",
                    format!("{model} requires BC_0 = link capacity ({})", cfg.link_capacity),
                ));
            }
            if let Some(k) = (1..cfg.class_count()).find(|&k| cfg.bc[k] > cfg.bc[k - 1]) {
                return Err(at(
                    format!("classes[{k}].bc_mbps"),
                    format!("{model} requires nested constraints, but BC_{k} > BC_{}", k - 1),
                ));
            }
        }
    }
    if models.contains(&Model::Mam) {
        if let Some(i) = (0..cfg.class_count()).find(|&i| cfg.bc[i] > cfg.link_capacity) {
            return Err(at(
                format!("classes[{i}].bc_mbps"),
                "mam requires BC_i <= link capacity",
            ));
        }
    }
    for model in &models {
        cfg.validate(*model).map_err(|e| at("classes", e.to_string()))?;
    }

    if file.generators.is_empty() {
        return Err(at("generators", "at least one generator is required"));
    }
    let mut seen = vec![false; cfg.class_count()];
    for (i, g) in file.generators.iter().enumerate() {
        let path = |field: &str| format!("generators[{i}].{field}");
        if g.class >= cfg.class_count() {
            return Err(at(path("class"), format!("no class {} in `classes`", g.class)));
        }
        if std::mem::replace(&mut seen[g.class], true) {
            return Err(at(path("class"), format!("duplicate generator for class {}", g.class)));
        }
        if !(g.mean_interarrival_s.is_finite() && g.mean_interarrival_s > 0.0) {
            return Err(at(path("mean_interarrival_s"), "must be > 0"));
        }
        if !(g.start_delay_s.is_finite() && g.start_delay_s >= 0.0) {
            return Err(at(path("start_delay_s"), "must be >= 0"));
        }
        if !(g.mean_holding_s.is_finite() && g.mean_holding_s > 0.0) {
            return Err(at(path("mean_holding_s"), "must be > 0"));
        }
        if !g.bandwidth_min_mbps.is_positive() {
            return Err(at(path("bandwidth_min_mbps"), "must be positive"));
        }
        if g.bandwidth_max_mbps < g.bandwidth_min_mbps {
            return Err(at(path("bandwidth_max_mbps"), "must be >= bandwidth_min_mbps"));
        }
    }
    if file.simulation.total_lsps == 0 {
        return Err(at("simulation.total_lsps", "must be > 0"));
    }

    let spec = ScenarioSpec {
        name: file.name,
        class_config: cfg,
        generators: file.generators,
        total_lsps: file.simulation.total_lsps,
        seed: file.simulation.seed,
    };
    spec.validate().map_err(|e| at("<root>", e.to_string()))?;
    Ok(Scenario {
        spec,
        models,
        description: file.description,
    })
}
