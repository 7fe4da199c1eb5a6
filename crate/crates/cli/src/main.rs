//! Command-line front end for the egonet toolkit.
//!
//! Five subcommands cover the whole pipeline: `score` ranks the neighbors
//! of one network, `evaluate` measures precision over a labeled corpus,
//! `generate` synthesizes corpora, `export-features` writes model-ready
//! CSVs, and `sweep` searches the parametric score's exponent grid.
//!
//! Exit codes are part of the contract: 0 on success, 2 when input could
//! not be parsed or an option is invalid, 3 when well-formed input is
//! semantically unusable (say, a center with no neighbors). All outputs
//! are deterministic for fixed flags, independent of worker count.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use egonet::corpus::{load_corpus, read_edge_list, report_json, save_corpus, RunConfig};
use egonet::dispersion::{ParametricParams, DEFAULT_RECURSIVE_ITERATIONS};
use egonet::distances::DistanceSpec;
use egonet::features::{corpus_features, transform};
use egonet::ranking::{evaluate, rank, sweep_parametric, Instance, MeasureSpec, Slice};
use egonet::synthgen::{generate_corpus, GenParams};
use egonet::{EgoNetwork, Error, Result};

#[derive(Parser)]
#[command(
    name = "egonet",
    version,
    about = "Tie-strength scoring, evaluation, and corpus tooling for ego networks"
)]
struct Cli {
    /// Worker threads for batch commands (overrides DISPERSION_WORKERS).
    #[arg(long, global = true, value_name = "N")]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score every neighbor of one network and print the ranking as TSV.
    Score(ScoreArgs),
    /// Rank a labeled corpus and report precision at the first position.
    Evaluate(EvaluateArgs),
    /// Synthesize a labeled corpus of focus-structured networks.
    Generate(GenerateArgs),
    /// Export per-neighbor structural features as CSV plus a schema file.
    ExportFeatures(ExportArgs),
    /// Grid-search the parametric score and report precision per cell.
    Sweep(SweepArgs),
}

/// Measure selection shared by `score` and `evaluate`.
#[derive(Args)]
struct MeasureArgs {
    /// One of: emb, disp, norm, parametric, rec, betweenness, constraint.
    #[arg(long, value_name = "NAME")]
    measure: String,

    /// Pair distance: threshold:2|3|4, component, community, or
    /// spring[:iters=N,seed=S].
    #[arg(long, default_value = "threshold:3", value_name = "SPEC")]
    distance: String,

    /// Exponent for --measure parametric.
    #[arg(long, default_value_t = ParametricParams::default().alpha)]
    alpha: f64,

    /// Numerator offset for --measure parametric.
    #[arg(long, default_value_t = ParametricParams::default().b)]
    b: f64,

    /// Denominator offset for --measure parametric.
    #[arg(long, default_value_t = ParametricParams::default().c)]
    c: f64,

    /// Iteration count for --measure rec.
    #[arg(long, default_value_t = DEFAULT_RECURSIVE_ITERATIONS, value_name = "K")]
    iterations: u32,
}

impl MeasureArgs {
    fn spec(&self) -> Result<MeasureSpec> {
        let distance = DistanceSpec::parse(&self.distance)?;
        let params = ParametricParams {
            alpha: self.alpha,
            b: self.b,
            c: self.c,
        };
        MeasureSpec::from_name(&self.measure, distance, params, self.iterations)
    }
}

/// Optional corpus-level size filter, applied after loading.
#[derive(Args)]
struct FilterArgs {
    /// Drop instances whose network has fewer neighbors than this.
    #[arg(long, value_name = "N")]
    min_neighbors: Option<usize>,

    /// Drop instances whose network has more neighbors than this.
    #[arg(long, value_name = "N")]
    max_neighbors: Option<usize>,
}

impl FilterArgs {
    fn apply(&self, corpus: Vec<Instance>) -> Vec<Instance> {
        if self.min_neighbors.is_none() && self.max_neighbors.is_none() {
            return corpus;
        }
        corpus
            .into_iter()
            .filter(|i| {
                let n = i.network().neighbor_count();
                self.min_neighbors.is_none_or(|lo| n >= lo)
                    && self.max_neighbors.is_none_or(|hi| n <= hi)
            })
            .collect()
    }

    fn record(&self, config: &mut RunConfig) {
        if let Some(lo) = self.min_neighbors {
            config.params.insert("min_neighbors".into(), lo.to_string());
        }
        if let Some(hi) = self.max_neighbors {
            config.params.insert("max_neighbors".into(), hi.to_string());
        }
    }
}

#[derive(Args)]
struct ScoreArgs {
    /// Edge-list file: one `src<TAB>dst` per line, `#` starts a comment.
    #[arg(long, value_name = "FILE")]
    graph: PathBuf,

    /// External id of the network's center node.
    #[arg(long, value_name = "ID")]
    center: String,

    #[command(flatten)]
    measure: MeasureArgs,
}

#[derive(Args)]
struct EvaluateArgs {
    /// JSON Lines corpus manifest.
    #[arg(long, value_name = "FILE")]
    manifest: PathBuf,

    #[command(flatten)]
    measure: MeasureArgs,

    /// Also count a top pick that lands on a family member as correct.
    #[arg(long)]
    hitset: bool,

    /// Add a report row for the tag=value subset (repeatable).
    #[arg(long = "slice", value_name = "TAG=VALUE", value_parser = parse_slice)]
    slices: Vec<Slice>,

    /// Also write the full report as JSON to this path.
    #[arg(long, value_name = "FILE")]
    json: Option<PathBuf>,

    #[command(flatten)]
    filter: FilterArgs,
}

#[derive(Args)]
struct GenerateArgs {
    /// Named parameter bundle to start from.
    #[arg(long, default_value = "paper-like", value_name = "NAME")]
    preset: String,

    /// Number of instances to generate.
    #[arg(long, value_name = "N")]
    count: usize,

    /// Root seed; instance i uses a seed derived from (seed, i).
    #[arg(long, value_name = "S")]
    seed: Option<u64>,

    /// Output directory; receives manifest.jsonl plus graphs/.
    #[arg(long, value_name = "DIR")]
    out: PathBuf,

    /// Override: number of social foci per network.
    #[arg(long, value_name = "N")]
    n_foci: Option<u32>,

    /// Override: smallest focus size.
    #[arg(long, value_name = "N")]
    focus_min: Option<u32>,

    /// Override: largest focus size.
    #[arg(long, value_name = "N")]
    focus_max: Option<u32>,

    /// Override: link probability within a focus.
    #[arg(long, value_name = "P")]
    p_in: Option<f64>,

    /// Override: link probability across foci.
    #[arg(long, value_name = "P")]
    p_out: Option<f64>,

    /// Override: number of foci the planted partner spans.
    #[arg(long, value_name = "N")]
    partner_foci: Option<u32>,

    /// Override: partner's link probability inside its chosen foci.
    #[arg(long, value_name = "P")]
    partner_attach: Option<f64>,
}

impl GenerateArgs {
    fn params(&self) -> Result<GenParams> {
        let mut p = GenParams::preset(&self.preset)?;
        if let Some(v) = self.n_foci {
            p.n_foci = v;
        }
        if let Some(v) = self.focus_min {
            p.focus_min = v;
        }
        if let Some(v) = self.focus_max {
            p.focus_max = v;
        }
        if let Some(v) = self.p_in {
            p.p_in = v;
        }
        if let Some(v) = self.p_out {
            p.p_out = v;
        }
        if let Some(v) = self.partner_foci {
            p.partner_foci = v;
        }
        if let Some(v) = self.partner_attach {
            p.partner_attach = v;
        }
        if let Some(v) = self.seed {
            p.seed = v;
        }
        Ok(p)
    }
}

#[derive(Args)]
struct ExportArgs {
    /// JSON Lines corpus manifest.
    #[arg(long, value_name = "FILE")]
    manifest: PathBuf,

    /// CSV output path; a `<out>.schema.json` sidecar is written next to it.
    #[arg(long, value_name = "FILE")]
    out: PathBuf,

    /// Also derive z-score, rank, and rank-fraction columns per feature.
    #[arg(long)]
    transformed: bool,

    #[command(flatten)]
    filter: FilterArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// JSON Lines corpus manifest.
    #[arg(long, value_name = "FILE")]
    manifest: PathBuf,

    /// Pair distance for the underlying dispersion.
    #[arg(long, default_value = "threshold:3", value_name = "SPEC")]
    distance: String,

    /// Exponent grid: LO:HI:STEP, a comma list, or one value.
    #[arg(long, value_name = "GRID", value_parser = parse_grid)]
    alpha: Grid,

    /// Numerator-offset grid, same forms as --alpha.
    #[arg(long, value_name = "GRID", value_parser = parse_grid)]
    b: Grid,

    /// Denominator-offset grid, same forms as --alpha.
    #[arg(long, value_name = "GRID", value_parser = parse_grid)]
    c: Grid,

    /// Write the per-exponent best-precision curve as TSV to this path.
    #[arg(long, value_name = "FILE")]
    curve: Option<PathBuf>,

    /// Also write the full sweep as JSON to this path.
    #[arg(long, value_name = "FILE")]
    json: Option<PathBuf>,

    #[command(flatten)]
    filter: FilterArgs,
}

/// A parsed `--alpha/--b/--c` grid: the original text plus its values.
#[derive(Clone, Debug)]
struct Grid {
    text: String,
    values: Vec<f64>,
}

fn parse_grid(text: &str) -> std::result::Result<Grid, String> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err("grid is empty".to_owned());
    }
    let parse_one = |s: &str| -> std::result::Result<f64, String> {
        let v: f64 = s
            .trim()
            .parse()
            .map_err(|_| format!("`{s}` is not a number"))?;
        if !v.is_finite() {
            return Err(format!("`{s}` is not finite"));
        }
        Ok(v)
    };
    let values = if let Some((lo, rest)) = trimmed.split_once(':') {
        let (hi, step) = rest
            .split_once(':')
            .ok_or_else(|| format!("`{trimmed}` must be LO:HI:STEP"))?;
        let (lo, hi, step) = (parse_one(lo)?, parse_one(hi)?, parse_one(step)?);
        if step <= 0.0 {
            return Err(format!("step must be positive, got {step}"));
        }
        if hi < lo {
            return Err(format!("range is empty: {hi} < {lo}"));
        }
        // Compute points as lo + i*step so long ranges do not drift, and
        // absorb float fuzz at the upper endpoint.
        let mut values = Vec::new();
        let mut i = 0u64;
        loop {
            let v = lo + (i as f64) * step;
            if v > hi + step * 1e-9 {
                break;
            }
            values.push(v);
            i += 1;
        }
        values
    } else if trimmed.contains(',') {
        trimmed
            .split(',')
            .map(parse_one)
            .collect::<std::result::Result<Vec<_>, _>>()?
    } else {
        vec![parse_one(trimmed)?]
    };
    Ok(Grid {
        text: trimmed.to_owned(),
        values,
    })
}

fn parse_slice(text: &str) -> std::result::Result<Slice, String> {
    match text.split_once('=') {
        Some((tag, value)) if !tag.is_empty() => Ok(Slice::new(tag, value)),
        _ => Err(format!("`{text}` must be TAG=VALUE")),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })
}

fn run_score(args: &ScoreArgs) -> Result<()> {
    let edges = read_edge_list(&args.graph)?;
    let g = EgoNetwork::build(&args.center, &edges)?;
    let spec = args.measure.spec()?;
    let table = spec.score(&g)?;
    let prediction = rank(&g, &table, spec.direction());
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for (id, score) in &prediction.ranked {
        writeln!(out, "{id}\t{score}").map_err(|e| Error::Io {
            path: "<stdout>".to_owned(),
            source: e,
        })?;
    }
    Ok(())
}

fn run_evaluate(args: &EvaluateArgs) -> Result<()> {
    let spec = args.measure.spec()?;
    let corpus = args.filter.apply(load_corpus(&args.manifest)?);
    let report = evaluate(&corpus, &spec, &args.slices)?;

    let mut config = RunConfig::new("evaluate");
    config.measure = Some(spec.label());
    config.direction = Some(spec.direction().as_str().to_owned());
    config.slices = args.slices.iter().map(|s| s.name()).collect();
    config
        .params
        .insert("manifest".into(), args.manifest.display().to_string());
    if args.hitset {
        config.params.insert("hitset".into(), "true".into());
    }
    args.filter.record(&mut config);

    print!("{}{}", config.to_header(), report.to_text(args.hitset));
    if let Some(path) = &args.json {
        write_file(path, &report_json(&config, &report))?;
    }
    Ok(())
}

fn run_generate(args: &GenerateArgs) -> Result<()> {
    let params = args.params()?;
    let corpus = generate_corpus(&params, args.count)?;
    save_corpus(&args.out, &corpus)?;
    println!(
        "wrote {} instances under {}",
        corpus.len(),
        args.out.display()
    );
    Ok(())
}

fn run_export(args: &ExportArgs) -> Result<()> {
    let corpus = args.filter.apply(load_corpus(&args.manifest)?);
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut matrix = corpus_features(&corpus)?;
    if args.transformed {
        matrix = transform(&matrix);
    }
    write_file(&args.out, &matrix.to_csv())?;
    let schema_path = PathBuf::from(format!("{}.schema.json", args.out.display()));
    write_file(&schema_path, &matrix.schema_json())?;
    println!(
        "wrote {} rows x {} feature columns to {}",
        matrix.row_count(),
        matrix.columns.len(),
        args.out.display()
    );
    Ok(())
}

fn run_sweep(args: &SweepArgs) -> Result<()> {
    let spec = DistanceSpec::parse(&args.distance)?;
    let corpus = args.filter.apply(load_corpus(&args.manifest)?);
    let report = sweep_parametric(
        &corpus,
        &spec,
        &args.alpha.values,
        &args.b.values,
        &args.c.values,
    )?;

    let mut config = RunConfig::new("sweep");
    config.measure = Some(format!("parametric:{}", spec.label()));
    config.direction = Some("max".to_owned());
    config
        .params
        .insert("manifest".into(), args.manifest.display().to_string());
    config.params.insert("alpha".into(), args.alpha.text.clone());
    config.params.insert("b".into(), args.b.text.clone());
    config.params.insert("c".into(), args.c.text.clone());
    args.filter.record(&mut config);

    print!("{}{}", config.to_header(), report.to_text());
    if let Some(path) = &args.curve {
        write_file(path, &report.curve_to_text())?;
    }
    if let Some(path) = &args.json {
        write_file(path, &report_json(&config, &report))?;
    }
    Ok(())
}

/// Resolves the worker-thread count: `--workers` wins, then the
/// DISPERSION_WORKERS variable; 0 or unset means one thread per core.
fn init_workers(flag: Option<usize>) -> std::result::Result<(), String> {
    let n = match flag {
        Some(n) => Some(n),
        None => match std::env::var("DISPERSION_WORKERS") {
            Ok(raw) => Some(raw.trim().parse::<usize>().map_err(|_| {
                format!("DISPERSION_WORKERS must be a non-negative integer, got `{raw}`")
            })?),
            Err(_) => None,
        },
    };
    if let Some(n) = n {
        if n > 0 {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| e.to_string())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(message) = init_workers(cli.workers) {
        eprintln!("error: {message}");
        return ExitCode::from(2);
    }
    let result = match &cli.command {
        Command::Score(args) => run_score(args),
        Command::Evaluate(args) => run_evaluate(args),
        Command::Generate(args) => run_generate(args),
        Command::ExportFeatures(args) => run_export(args),
        Command::Sweep(args) => run_sweep(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        // A reader that stops early (score ... | head) closes our pipe;
        // ending quietly is the polite Unix behavior, not an error.
        Err(Error::Io { source, .. }) if source.kind() == std::io::ErrorKind::BrokenPipe => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_usage() { 2 } else { 3 })
        }
    }
}
