use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use treegraded::forge::{gen_free_product_model, gen_random, subdivide, ForgeSpec, FreeProductSpec, PieceTemplate, WeightedTemplate};
use treegraded::format::{parse_coloring, parse_space, write_coloring, write_space};
use treegraded::nagata::{Assembler, Variant};
use treegraded::piece_coloring::{magnitude, Strategy};
use treegraded::{ChainMode, ChainPredicate, Color, ColoringError, GradedSpace, PieceId, Space};

use tglab::oracle::{geodesic_invariance, min_magnitude};
use tglab::pipeline::{check_kinds, prepare, ColorRequest, KindStrategies, StrategyRule};
use tglab::{run_experiment, seed_from_env, ExperimentConfig, LabError};

/// Exit code 1: the input was read but fails a check.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct Semantic(String);

#[derive(Parser)]
#[command(name = "tglab", version, about = "Colorings of tree-graded graph spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the tree-graded axioms of a tgspace file.
    Validate { file: PathBuf },
    /// Generate a space.
    #[command(subcommand)]
    Gen(Gen),
    /// Replace every edge by a path of `k` edges.
    Subdivide {
        file: PathBuf,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Color a space at scale `r`.
    Color(ColorArgs),
    /// Magnitude of a coloring at scale `r`, as JSON.
    Measure {
        space: PathBuf,
        coloring: PathBuf,
        #[arg(long)]
        r: u32,
        #[arg(long, default_value = "strict")]
        chain: ChainMode,
    },
    /// Run a sweep described by a JSON config.
    Experiment {
        config: PathBuf,
        /// Report path; overrides the config.
        #[arg(long)]
        report: Option<PathBuf>,
        /// CSV summary path; overrides the config.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Omit timing so reports compare byte for byte.
        #[arg(long)]
        no_timing: bool,
    },
    /// Exhaustive checks on tiny spaces.
    #[command(subcommand)]
    Oracle(Oracle),
}

#[derive(Subcommand)]
enum Gen {
    /// Random gluing of template pieces.
    Random {
        /// Comma-separated `kind:arg[@weight]`, e.g. `path:5@2,grid:3x4`.
        #[arg(long, value_delimiter = ',', required = true)]
        templates: Vec<WeightedTemplate>,
        #[arg(long)]
        budget: usize,
        #[arg(long, default_value_t = 8)]
        max_depth: u32,
        #[arg(long, default_value_t = 1)]
        spacing: u32,
        #[arg(long, default_value_t = 2)]
        branch_cap: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        subdivide: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coset-tree model of a free product.
    Freeprod {
        #[arg(long)]
        left: PieceTemplate,
        #[arg(long)]
        right: PieceTemplate,
        #[arg(long)]
        depth: u32,
        #[arg(long, default_value_t = 1)]
        spacing: u32,
        #[arg(long, default_value_t = 2)]
        branch_cap: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ColorArgs {
    space: PathBuf,
    #[arg(long)]
    r: u32,
    /// Colors are `0..=n`; the strategies' need when absent.
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, default_value = "strict")]
    chain: ChainMode,
    /// `KIND=RULE`, e.g. `grid=brick:2r`; repeatable.
    #[arg(long = "strategy", value_parser = parse_kind_rule)]
    strategies: Vec<(String, StrategyRule)>,
    /// `P=FILE`: tgcolor file holding the raw coloring of piece P.
    #[arg(long = "piece-coloring", value_parser = parse_piece_file)]
    piece_colorings: Vec<(PieceId, PathBuf)>,
    /// Declared piece bound; piece colorings above it are rejected.
    #[arg(long)]
    f: Option<u32>,
    #[arg(long, default_value = "cstar")]
    variant: Variant,
    #[arg(long)]
    period: Option<u64>,
    /// Print the formula breakdown for these vertices to stderr.
    #[arg(long)]
    explain: Vec<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Oracle {
    /// Compare the formula over every geodesic from the base point.
    GeodesicInvariance {
        space: PathBuf,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        period: Option<u64>,
        #[arg(long, default_value = "strict")]
        chain: ChainMode,
        #[arg(long, default_value_t = 12)]
        max_vertices: usize,
    },
    /// Least magnitude over all colorings with `n + 1` colors.
    MinMagnitude {
        space: PathBuf,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = "weak")]
        chain: ChainMode,
        #[arg(long, default_value_t = 14)]
        max_vertices: usize,
    },
}

fn parse_kind_rule(s: &str) -> Result<(String, StrategyRule), String> {
    let (kind, rule) = s.split_once('=').ok_or("expected KIND=RULE")?;
    Ok((kind.to_string(), rule.parse()?))
}

fn parse_piece_file(s: &str) -> Result<(PieceId, PathBuf), String> {
    let (p, file) = s.split_once('=').ok_or("expected PIECE=FILE")?;
    let p = p.parse().map_err(|_| format!("`{p}` is not a piece id"))?;
    Ok((p, PathBuf::from(file)))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_space(path: &Path) -> Result<Space> {
    parse_space(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn graded(space: Space) -> Result<GradedSpace> {
    let report = space.validate();
    if !report.ok() {
        return Err(Semantic(format!("space is not tree-graded:\n{report}")).into());
    }
    Ok(GradedSpace::new(space)?)
}

fn read_colors(path: &Path, vertices: usize) -> Result<Vec<Color>> {
    let entries = parse_coloring(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    if entries.len() != vertices || entries.iter().enumerate().any(|(i, &(v, _))| i != v) {
        bail!("{}: expected one color for each of vertices 0..{vertices}", path.display());
    }
    Ok(entries.into_iter().map(|(_, c)| c).collect())
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => Ok(std::io::stdout().write_all(text.as_bytes())?),
    }
}

fn validate(file: &Path) -> Result<()> {
    let report = read_space(file)?.validate();
    print!("{report}");
    if report.ok() {
        Ok(())
    } else {
        Err(Semantic(format!("{} violation(s)", report.violations.len())).into())
    }
}

fn gen(cmd: Gen) -> Result<()> {
    let (space, meta, out) = match cmd {
        Gen::Random { templates, budget, max_depth, spacing, branch_cap, seed, subdivide, out } => {
            let spec = ForgeSpec {
                templates,
                piece_budget: budget,
                max_tree_depth: max_depth,
                attach_spacing: spacing,
                branch_cap,
                seed,
                subdivide,
            };
            (gen_random(&spec)?, spec.metadata(), out)
        }
        Gen::Freeprod { left, right, depth, spacing, branch_cap, seed, out } => {
            let spec = FreeProductSpec { left, right, depth, attach_spacing: spacing, branch_cap, seed };
            (gen_free_product_model(&spec)?, spec.metadata(), out)
        }
    };
    emit(out.as_deref(), &write_space(&space, &meta))
}

fn color(args: ColorArgs) -> Result<()> {
    let gs = graded(read_space(&args.space)?)?;
    let mut kinds = KindStrategies::new();
    kinds.extend(args.strategies);
    check_kinds(&kinds)?;
    let mut pieces = Vec::new();
    for (p, file) in &args.piece_colorings {
        gs.space().check_piece(*p)?;
        let entries = parse_coloring(&read(file)?).with_context(|| format!("parsing {}", file.display()))?;
        let members = gs.piece(*p);
        if entries.len() != members.len() || entries.iter().zip(members).any(|(&(v, _), &m)| v != m) {
            bail!("{}: expected one color for each vertex of piece {p}", file.display());
        }
        pieces.push((*p, Strategy::Custom(entries.into_iter().map(|(_, c)| c).collect())));
    }
    let req = ColorRequest {
        r: args.r,
        chain: Some(args.chain),
        n: args.n,
        kinds,
        pieces,
        declared_f: args.f,
        period: args.period,
    };
    let prepared = prepare(&gs, &req).map_err(|e| match e {
        e @ ColoringError::Uncertified { .. } => anyhow::Error::new(Semantic(e.to_string())),
        e => e.into(),
    })?;
    let asm = Assembler::new(&gs, &prepared.setup, &prepared.pieces);
    for &v in &args.explain {
        gs.graph().check_vertex(v)?;
        let term = asm.evaluate(&asm.trace(v)?, args.variant);
        eprintln!("{}", serde_json::to_string(&term)?);
    }
    let coloring = asm.color_with(args.variant);
    emit(args.out.as_deref(), &write_coloring(coloring.colors.into_iter().enumerate()))
}

fn measure(space: &Path, coloring: &Path, r: u32, chain: ChainMode) -> Result<()> {
    let space = read_space(space)?;
    let colors = read_colors(coloring, space.graph().vertex_count())?;
    let report = magnitude(space.graph(), &colors, ChainPredicate { mode: chain, r });
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}

fn experiment(path: &Path, report: Option<PathBuf>, csv: Option<PathBuf>, no_timing: bool) -> Result<()> {
    let mut config = ExperimentConfig::load(path)?;
    if let Some(base) = seed_from_env() {
        config.override_seeds(base);
    }
    config.validate()?;
    let mut result = run_experiment(&config)?;
    if no_timing {
        result = result.without_timing();
    }
    let json = result.to_json()?;
    match report.or(config.outputs.report.clone()) {
        Some(p) => fs::write(&p, &json).map_err(|e| LabError::Io { path: p, source: e })?,
        None => print!("{json}"),
    }
    if let Some(p) = csv.or(config.outputs.csv.clone()) {
        let file = fs::File::create(&p).map_err(|e| LabError::Io { path: p, source: e })?;
        result.write_csv(file)?;
    }
    let s = &result.summary;
    eprintln!(
        "{}/{} cells pass ({} with zero slack), {} errors, {}/{} lemma checks violated",
        s.passed, s.cells, s.passed_zero_slack, s.errors, s.lemma_violations, s.lemma_checks
    );
    if result.all_passed() {
        Ok(())
    } else {
        Err(Semantic("some cells failed".into()).into())
    }
}

fn oracle(cmd: Oracle) -> Result<()> {
    match cmd {
        Oracle::GeodesicInvariance { space, r, period, chain, max_vertices } => {
            let gs = graded(read_space(&space)?)?;
            let req = ColorRequest { r, chain: Some(chain), period, ..ColorRequest::default() };
            let prepared = prepare(&gs, &req)?;
            let asm = Assembler::new(&gs, &prepared.setup, &prepared.pieces);
            let report = geodesic_invariance(&asm, max_vertices)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            if !report.invariant {
                return Err(Semantic("colors depend on the geodesic".into()).into());
            }
        }
        Oracle::MinMagnitude { space, r, n, chain, max_vertices } => {
            let space = read_space(&space)?;
            let best = min_magnitude(space.graph(), n, ChainPredicate { mode: chain, r }, max_vertices)?;
            println!("{}", best.magnitude);
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Validate { file } => validate(&file),
        Command::Gen(cmd) => gen(cmd),
        Command::Subdivide { file, k, out } => {
            let space = subdivide(&read_space(&file)?, k)?;
            emit(out.as_deref(), &write_space(&space, &[("subdivide".into(), k.to_string())]))
        }
        Command::Color(args) => color(args),
        Command::Measure { space, coloring, r, chain } => measure(&space, &coloring, r, chain),
        Command::Experiment { config, report, csv, no_timing } => experiment(&config, report, csv, no_timing),
        Command::Oracle(cmd) => oracle(cmd),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<Semantic>() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
