//! Batch front end behind the `bamsim` binary.
//!
//! [`cmd_run`] replays one generated trace under every selected model and
//! writes, per repetition directory:
//!
//! | file | columns |
//! |------|---------|
//! | `trace.csv` | trace file format, see [`crate::workload`] |
//! | `timeseries_<model>.csv` | `time_s,total_load,load_tc0..load_tcN` |
//! | `events_<model>.csv` | `time_s,event,lsp_id,class,bandwidth,outcome,victims` |
//! | `summary_<model>.csv` | `scope,requested,granted,blocked,preempted,granted_traffic,peak_load,mean_load` |
//!
//! [`cmd_compare`] additionally writes `compare.csv`. With more than one
//! repetition every repetition gets its own `rep-<i>` directory and seed
//! `seed + i - 1`.

mod output;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

pub use output::{
    read_compare, read_events, read_summary, read_timeseries, write_compare, write_events, write_summary,
    write_timeseries, CompareRow,
};

use crate::model::Model;
use crate::scenario::{load_scenario, Scenario};
use crate::sim::{run, summarize, MetricsRecord, Summary};
use crate::units::Bandwidth;
use crate::workload::{generate_trace, write_trace, write_trace_file, WorkloadTrace};
use crate::{Error, Result};

/// Which models a command runs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelSelector {
    /// Every model the scenario was validated for.
    All,
    List(Vec<Model>),
}

impl std::str::FromStr for ModelSelector {
    type Err = Error;

    /// `all`, a single model name, or a comma-separated list.
    fn from_str(s: &str) -> Result<Self> {
        if s.trim().eq_ignore_ascii_case("all") {
            return Ok(ModelSelector::All);
        }
        let mut models = Vec::new();
        for name in s.split(',') {
            let model: Model = name.trim().parse()?;
            if models.contains(&model) {
                return Err(Error::Usage(format!("model {model} listed twice")));
            }
            models.push(model);
        }
        Ok(ModelSelector::List(models))
    }
}

impl ModelSelector {
    pub fn resolve(&self, scenario: &Scenario) -> Result<Vec<Model>> {
        match self {
            ModelSelector::All => Ok(Model::ALL.into_iter().filter(|m| scenario.supports(*m)).collect()),
            ModelSelector::List(models) => {
                if let Some(m) = models.iter().find(|m| !scenario.supports(**m)) {
                    return Err(Error::Usage(format!(
                        "scenario {} does not enable model {m}",
                        scenario.name()
                    )));
                }
                Ok(models.clone())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    /// Preset name or path to a scenario file.
    pub scenario: String,
    pub models: ModelSelector,
    pub out_dir: PathBuf,
    /// Replaces the scenario's seed when set.
    pub seed: Option<u64>,
    pub repetitions: u32,
}

impl RunConfig {
    pub fn new(scenario: impl Into<String>, out_dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            scenario: scenario.into(),
            models: ModelSelector::All,
            out_dir: out_dir.into(),
            seed: None,
            repetitions: 1,
        }
    }

    pub fn with_models(mut self, models: ModelSelector) -> Self {
        self.models = models;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_repetitions(mut self, repetitions: u32) -> Self {
        self.repetitions = repetitions;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::Usage("repetitions must be at least 1".into()));
        }
        if matches!(&self.models, ModelSelector::List(m) if m.is_empty()) {
            return Err(Error::Usage("no model selected".into()));
        }
        Ok(())
    }
}

/// One model's result on one repetition.
#[derive(Clone, Debug)]
pub struct ModelRun {
    pub model: Model,
    pub metrics: MetricsRecord,
    pub summary: Summary,
}

#[derive(Clone, Debug)]
pub struct Repetition {
    pub seed: u64,
    pub dir: PathBuf,
    pub trace: WorkloadTrace,
    pub runs: Vec<ModelRun>,
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub scenario: Scenario,
    pub repetitions: Vec<Repetition>,
}

/// Runs the selected models over one shared trace per repetition and writes
/// the CSV artifacts.
pub fn cmd_run(cfg: &RunConfig) -> Result<RunReport> {
    cfg.validate()?;
    let scenario = load_scenario(&cfg.scenario)?;
    let models = cfg.models.resolve(&scenario)?;
    let base_seed = cfg.seed.unwrap_or(scenario.spec.seed);

    let mut repetitions = Vec::with_capacity(cfg.repetitions as usize);
    for rep in 0..cfg.repetitions {
        let seed = base_seed.wrapping_add(u64::from(rep));
        let dir = if cfg.repetitions == 1 {
            cfg.out_dir.clone()
        } else {
            cfg.out_dir.join(format!("rep-{}", rep + 1))
        };
        std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;

        let trace = generate_trace(&scenario.spec.clone().with_seed(seed))?;
        write_trace_file(&trace, &dir.join("trace.csv"))?;

        let runs = std::thread::scope(|s| {
            let handles: Vec<_> = models
                .iter()
                .map(|&model| {
                    let trace = &trace;
                    let class_cfg = scenario.class_config();
                    s.spawn(move || run(trace, model, class_cfg))
                })
                .collect();
            handles
                .into_iter()
                .zip(&models)
                .map(|(h, &model)| {
                    let metrics = h.join().expect("simulation thread panicked")?;
                    Ok(ModelRun {
                        model,
                        summary: summarize(&metrics),
                        metrics,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })?;

        for r in &runs {
            write_model_artifacts(&dir, r)?;
        }
        repetitions.push(Repetition { seed, dir, trace, runs });
    }
    Ok(RunReport { scenario, repetitions })
}

fn write_model_artifacts(dir: &Path, r: &ModelRun) -> Result<()> {
    let m = &r.metrics;
    write_timeseries(
        &dir.join(format!("timeseries_{}.csv", r.model)),
        m.class_count(),
        &m.samples,
    )?;
    write_events(&dir.join(format!("events_{}.csv", r.model)), &m.events)?;
    write_summary(&dir.join(format!("summary_{}.csv", r.model)), &r.summary.rows)
}

/// [`cmd_run`] plus a `compare.csv` per repetition, with deltas against the
/// first selected model.
pub fn cmd_compare(cfg: &RunConfig) -> Result<(RunReport, Vec<Vec<CompareRow>>)> {
    cfg.validate()?;
    if let ModelSelector::List(m) = &cfg.models {
        if m.len() < 2 {
            return Err(Error::Usage("compare needs at least two models".into()));
        }
    }
    let report = cmd_run(cfg)?;
    let mut tables = Vec::with_capacity(report.repetitions.len());
    for rep in &report.repetitions {
        if rep.runs.len() < 2 {
            return Err(Error::Usage("compare needs at least two models".into()));
        }
        let summaries: Vec<Summary> = rep.runs.iter().map(|r| r.summary.clone()).collect();
        let rows = compare(&summaries);
        write_compare(&rep.dir.join("compare.csv"), &rows)?;
        tables.push(rows);
    }
    Ok((report, tables))
}

/// Lines up every summary against the first one, scope by scope.
pub fn compare(summaries: &[Summary]) -> Vec<CompareRow> {
    let Some(base) = summaries.first() else {
        return Vec::new();
    };
    let mut rows = Vec::new();
    for s in summaries {
        for row in &s.rows {
            let b = base
                .rows
                .iter()
                .find(|b| b.scope == row.scope)
                .expect("summaries of one scenario have the same scopes");
            rows.push(CompareRow {
                model: s.model,
                baseline: base.model,
                row: row.clone(),
                delta_granted: row.granted as i64 - b.granted as i64,
                delta_blocked: row.blocked as i64 - b.blocked as i64,
                delta_preempted: row.preempted as i64 - b.preempted as i64,
                delta_granted_traffic: row.granted_traffic - b.granted_traffic,
                delta_peak_load: row.peak_load - b.peak_load,
                delta_mean_load: (output::milli(row.mean_load) - output::milli(b.mean_load)) as f64 / 1000.0,
            });
        }
    }
    rows
}

/// Fixed-width text rendering of a comparison, for terminals.
pub fn render_compare(rows: &[CompareRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<8} {:<6} {:>9} {:>8} {:>8} {:>9} {:>12} {:>9} {:>9} {:>12}",
        "model", "scope", "requested", "granted", "blocked", "preempted", "traffic", "peak", "mean", "d_traffic"
    );
    for c in rows {
        let r = &c.row;
        let _ = writeln!(
            out,
            "{:<8} {:<6} {:>9} {:>8} {:>8} {:>9} {:>12} {:>9} {:>9.3} {:>12}",
            c.model.to_string(),
            r.scope.to_string(),
            r.requested,
            r.granted,
            r.blocked,
            r.preempted,
            r.granted_traffic.to_string(),
            r.peak_load.to_string(),
            r.mean_load,
            c.delta_granted_traffic.to_string(),
        );
    }
    out
}

/// Generates a scenario's trace; writes it to `out`, or to stdout if `None`.
pub fn cmd_gen_trace(scenario: &str, seed: Option<u64>, out: Option<&Path>) -> Result<WorkloadTrace> {
    let scenario = load_scenario(scenario)?;
    let seed = seed.unwrap_or(scenario.spec.seed);
    let trace = generate_trace(&scenario.spec.with_seed(seed))?;
    match out {
        Some(path) => write_trace_file(&trace, path)?,
        None => write_trace(&trace, std::io::stdout().lock()).map_err(|e| Error::io("<stdout>", e))?,
    }
    Ok(trace)
}

/// Loads and validates a scenario without running it.
pub fn cmd_validate(scenario: &str) -> Result<Scenario> {
    load_scenario(scenario)
}

impl Repetition {
    pub fn run_of(&self, model: Model) -> Option<&ModelRun> {
        self.runs.iter().find(|r| r.model == model)
    }

    pub fn granted_traffic(&self, model: Model) -> Option<Bandwidth> {
        self.run_of(model).map(|r| r.metrics.granted_traffic)
    }
}
