//! Sweeps of the assembled coloring over spaces and scales.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use treegraded::forge::{gen_free_product_model, gen_random, FreeProductSpec, ForgeSpec};
use treegraded::format::parse_space;
use treegraded::nagata::Assembler;
use treegraded::piece_coloring::{color_components, magnitude_of_components};
use treegraded::{ChainMode, Color, GradedSpace, Space, Vertex};

use crate::error::LabError;
use crate::lemmas::{chain_suite, coloring_suite, structural_suite, LemmaResult, SuiteConfig};
use crate::pipeline::{check_kinds, prepare, ColorRequest, KindStrategies};

/// Multiplier of `f(r)` in the magnitude bound.
pub const BOUND_FACTOR: u64 = 300;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "lowercase")]
pub enum SpaceSource {
    File { path: PathBuf },
    Random { spec: ForgeSpec },
    Freeprod { spec: FreeProductSpec },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceEntry {
    pub name: String,
    #[serde(flatten)]
    pub source: SpaceSource,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    pub report: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

fn strict() -> ChainMode {
    ChainMode::Strict
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub spaces: Vec<SpaceEntry>,
    pub r_list: Vec<u32>,
    #[serde(default = "strict")]
    pub chain_mode: ChainMode,
    /// Strategy rules per piece kind.
    #[serde(default)]
    pub strategies: KindStrategies,
    /// Additive slack of the pass flag; `2r` when absent.
    #[serde(default)]
    pub slack: Option<u32>,
    #[serde(default)]
    pub color_period: Option<u64>,
    /// Property suites to run; skipped when absent.
    #[serde(default)]
    pub lemmas: Option<SuiteConfig>,
    #[serde(default)]
    pub outputs: Outputs,
    /// Worker threads; all cores when absent.
    #[serde(default)]
    pub parallelism: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(spaces: Vec<SpaceEntry>, r_list: Vec<u32>) -> Self {
        ExperimentConfig {
            spaces,
            r_list,
            chain_mode: ChainMode::Strict,
            strategies: KindStrategies::new(),
            slack: None,
            color_period: None,
            lemmas: None,
            outputs: Outputs::default(),
            parallelism: None,
        }
    }

    /// Reads a JSON config; relative space and output paths are taken
    /// relative to the config file.
    pub fn load(path: &Path) -> Result<Self, LabError> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
        let mut config: ExperimentConfig = serde_json::from_str(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        let rebase = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        for entry in &mut config.spaces {
            if let SpaceSource::File { path } = &mut entry.source {
                rebase(path);
            }
        }
        config.outputs.report.as_mut().map(rebase);
        config.outputs.csv.as_mut().map(rebase);
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), LabError> {
        let fail = |m: String| Err(LabError::Config(m));
        if self.r_list.is_empty() {
            return fail("r_list is empty".into());
        }
        if let Some(r) = self.r_list.iter().find(|&&r| r < 2) {
            return fail(format!("scale {r} is below 2"));
        }
        if self.spaces.is_empty() {
            return fail("no spaces".into());
        }
        let names: BTreeSet<&str> = self.spaces.iter().map(|e| e.name.as_str()).collect();
        if names.len() != self.spaces.len() {
            return fail("space names must be unique".into());
        }
        if self.parallelism == Some(0) {
            return fail("parallelism must be positive".into());
        }
        if self.color_period == Some(0) {
            return fail("color period must be positive".into());
        }
        check_kinds(&self.strategies)
    }

    /// Replaces generator seeds by `base + index` of the entry.
    pub fn override_seeds(&mut self, base: u64) {
        for (i, entry) in self.spaces.iter_mut().enumerate() {
            let seed = base.wrapping_add(i as u64);
            match &mut entry.source {
                SpaceSource::Random { spec } => spec.seed = seed,
                SpaceSource::Freeprod { spec } => spec.seed = seed,
                SpaceSource::File { .. } => {}
            }
        }
    }
}

pub fn load_space(source: &SpaceSource) -> Result<Space, LabError> {
    match source {
        SpaceSource::File { path } => {
            let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
            parse_space(&text).map_err(|e| LabError::Parse { path: path.clone(), source: e })
        }
        SpaceSource::Random { spec } => Ok(gen_random(spec)?),
        SpaceSource::Freeprod { spec } => Ok(gen_free_product_model(spec)?),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellReport {
    pub space: String,
    pub vertices: usize,
    pub pieces: usize,
    pub r: u32,
    pub n: u32,
    pub colors_used: usize,
    pub f_r: u32,
    pub color_period: u64,
    pub magnitude: u32,
    pub witness: Option<(Vertex, Vertex)>,
    pub bound: u64,
    pub slack: u32,
    pub pass: bool,
    pub pass_zero_slack: bool,
    pub lemmas: Vec<LemmaResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CellReport {
    fn failed(space: &str, r: u32, slack: u32, error: String) -> Self {
        CellReport {
            space: space.to_string(),
            vertices: 0,
            pieces: 0,
            r,
            n: 0,
            colors_used: 0,
            f_r: 0,
            color_period: 0,
            magnitude: 0,
            witness: None,
            bound: 0,
            slack,
            pass: false,
            pass_zero_slack: false,
            lemmas: Vec::new(),
            error: Some(error),
        }
    }
}

/// Suites that depend on the space alone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceReport {
    pub space: String,
    pub vertices: usize,
    pub pieces: usize,
    pub lemmas: Vec<LemmaResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub cells: usize,
    pub passed: usize,
    pub passed_zero_slack: usize,
    pub errors: usize,
    pub lemma_checks: u64,
    pub lemma_violations: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub total_ms: f64,
    /// Milliseconds per cell, in cell order.
    pub cells_ms: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub r_list: Vec<u32>,
    pub chain_mode: ChainMode,
    pub spaces: Vec<SpaceReport>,
    pub cells: Vec<CellReport>,
    pub summary: Summary,
    /// Wall-clock measurements; outside the reproducibility contract.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl Report {
    pub fn without_timing(&self) -> Report {
        Report { timing: None, ..self.clone() }
    }

    /// Every cell passes with slack, no errors, no lemma violations.
    pub fn all_passed(&self) -> bool {
        self.summary.passed == self.summary.cells && self.summary.errors == 0 && self.summary.lemma_violations == 0
    }

    pub fn to_json(&self) -> Result<String, LabError> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    /// One row per cell: `space,r,f_r,magnitude,bound,pass`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), LabError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["space", "r", "f_r", "magnitude", "bound", "pass"])?;
        for c in &self.cells {
            w.write_record([
                c.space.clone(),
                c.r.to_string(),
                c.f_r.to_string(),
                c.magnitude.to_string(),
                c.bound.to_string(),
                c.pass.to_string(),
            ])?;
        }
        w.flush().map_err(|e| LabError::io("csv", e))?;
        Ok(())
    }

    /// All lemma results, space-level first, grouped by suite name.
    pub fn lemma_totals(&self) -> Vec<LemmaResult> {
        let mut totals: Vec<LemmaResult> = Vec::new();
        let all = self.spaces.iter().flat_map(|s| &s.lemmas).chain(self.cells.iter().flat_map(|c| &c.lemmas));
        for l in all {
            match totals.iter_mut().find(|t| t.lemma == l.lemma) {
                Some(t) => {
                    t.checked += l.checked;
                    t.violations += l.violations;
                    if t.witnesses.len() < 5 {
                        t.witnesses.extend(l.witnesses.iter().take(5 - t.witnesses.len()).cloned());
                    }
                }
                None => totals.push(LemmaResult { note: None, ..l.clone() }),
            }
        }
        totals
    }
}

fn lemma_seed(base: u64, space: usize, r: u32) -> u64 {
    base ^ (space as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ u64::from(r).wrapping_mul(0xbf58_476d_1ce4_e5b9)
}

/// Runs every `(space, r)` cell. Instance failures are recorded in the
/// report; only configuration problems are errors.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Report, LabError> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.parallelism.unwrap_or(0))
        .build()
        .map_err(|e| LabError::Config(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| run_in_pool(config)))
}

fn run_in_pool(config: &ExperimentConfig) -> Report {
    let start = Instant::now();
    let loaded: Vec<Result<GradedSpace, String>> = config
        .spaces
        .par_iter()
        .map(|e| {
            let space = load_space(&e.source).map_err(|err| err.to_string())?;
            GradedSpace::new(space).map_err(|err| err.to_string())
        })
        .collect();

    let spaces: Vec<SpaceReport> = loaded
        .par_iter()
        .enumerate()
        .map(|(i, gs)| {
            let name = config.spaces[i].name.clone();
            match gs {
                Ok(gs) => SpaceReport {
                    space: name,
                    vertices: gs.graph().vertex_count(),
                    pieces: gs.piece_count(),
                    lemmas: config.lemmas.map_or_else(Vec::new, |cfg| structural_suite(gs, &cfg, lemma_seed(cfg.seed, i, 0))),
                    error: None,
                },
                Err(e) => SpaceReport { space: name, vertices: 0, pieces: 0, lemmas: Vec::new(), error: Some(e.clone()) },
            }
        })
        .collect();

    let jobs: Vec<(usize, u32)> =
        (0..config.spaces.len()).flat_map(|i| config.r_list.iter().map(move |&r| (i, r))).collect();
    let results: Vec<(CellReport, f64)> = jobs
        .par_iter()
        .map(|&(i, r)| {
            let t = Instant::now();
            let name = &config.spaces[i].name;
            let slack = config.slack.unwrap_or(2 * r);
            let cell = match &loaded[i] {
                Ok(gs) => run_cell(gs, name, r, slack, config, i)
                    .unwrap_or_else(|e| CellReport::failed(name, r, slack, e.to_string())),
                Err(e) => CellReport::failed(name, r, slack, e.clone()),
            };
            (cell, t.elapsed().as_secs_f64() * 1e3)
        })
        .collect();
    let (cells, cells_ms): (Vec<CellReport>, Vec<f64>) = results.into_iter().unzip();

    let lemma_iter = || spaces.iter().flat_map(|s| &s.lemmas).chain(cells.iter().flat_map(|c| &c.lemmas));
    let summary = Summary {
        cells: cells.len(),
        passed: cells.iter().filter(|c| c.pass).count(),
        passed_zero_slack: cells.iter().filter(|c| c.pass_zero_slack).count(),
        errors: cells.iter().filter(|c| c.error.is_some()).count() + spaces.iter().filter(|s| s.error.is_some()).count(),
        lemma_checks: lemma_iter().map(|l| l.checked).sum(),
        lemma_violations: lemma_iter().map(|l| l.violations).sum(),
    };
    Report {
        r_list: config.r_list.clone(),
        chain_mode: config.chain_mode,
        spaces,
        cells,
        summary,
        timing: Some(Timing { total_ms: start.elapsed().as_secs_f64() * 1e3, cells_ms }),
    }
}

fn run_cell(
    gs: &GradedSpace,
    name: &str,
    r: u32,
    slack: u32,
    config: &ExperimentConfig,
    index: usize,
) -> Result<CellReport, LabError> {
    let req = ColorRequest {
        r,
        chain: Some(config.chain_mode),
        kinds: config.strategies.clone(),
        period: config.color_period,
        ..ColorRequest::default()
    };
    let prepared = prepare(gs, &req)?;
    let setup = prepared.setup;
    let asm = Assembler::new(gs, &setup, &prepared.pieces);
    let colors = asm.color_all().colors;
    let components = color_components(gs.graph(), &colors, setup.chain);
    let report = magnitude_of_components(gs.graph(), &colors, &components);
    let lemmas = match config.lemmas {
        Some(cfg) => {
            let seed = lemma_seed(cfg.seed, index, r);
            let mut out = vec![chain_suite(gs, r, &cfg, seed)];
            out.extend(coloring_suite(&asm, &colors, &components, &cfg, seed.wrapping_add(1)));
            out
        }
        None => Vec::new(),
    };
    let bound = BOUND_FACTOR * u64::from(setup.f_r);
    let magnitude = u64::from(report.magnitude);
    Ok(CellReport {
        space: name.to_string(),
        vertices: gs.graph().vertex_count(),
        pieces: gs.piece_count(),
        r,
        n: setup.n,
        colors_used: colors.iter().collect::<BTreeSet<&Color>>().len(),
        f_r: setup.f_r,
        color_period: setup.color_period(),
        magnitude: report.magnitude,
        witness: report.witness,
        bound,
        slack,
        pass: magnitude <= bound + u64::from(slack),
        pass_zero_slack: magnitude <= bound,
        lemmas,
        error: None,
    })
}
