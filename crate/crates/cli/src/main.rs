use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hwm_core::acceptance::{run_criterion, CRITERIA};
use hwm_core::closures::{hwm_hadamard, hwm_sum, normalize_closed_graph, ClosureError};
use hwm_core::config::{RunConfig, SEED_ENV};
use hwm_core::crosswords::{crossword_combine_hwm, crossword_row_col_hwm, encode_crossword, CrosswordError};
use hwm_core::encodings::{
    circular_trace_hwm, encode_anbn_graph, encode_circular, encode_rooted_circular, encode_string,
    encode_string_bare, encode_tree, lift_string_series, lift_string_series_iota_eq_tau,
    lift_tree_series, parse_tree, rooted_circular_hwm, word, EncodeError,
};
use hwm_core::engine::{eval, Engine, EvalError};
use hwm_core::hypergraph::Hypergraph;
use hwm_core::io::{
    emit_graph, emit_model, parse_crossword, parse_graph, parse_model, parse_string_rep,
    parse_tensor, parse_tree_rep, to_json, IoError,
};
use hwm_core::numeric::{is_effectively_real, C64, DEFAULT_TOLERANCE};
use hwm_core::random;
use hwm_core::tiling::{find_tilings, is_tiling_free, scaled_tiling_hwm, tiling_hwm, TilingError};
use serde_json::json;

const EXIT_FAILED: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_SCHEMA: u8 = 4;

#[derive(Debug)]
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn validation(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_VALIDATION,
            message: message.into(),
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        let code = if e.is_schema() { EXIT_SCHEMA } else { EXIT_VALIDATION };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        let code = match e {
            EvalError::BudgetExceeded { .. } => EXIT_BUDGET,
            _ => EXIT_VALIDATION,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<TilingError> for CliError {
    fn from(e: TilingError) -> Self {
        match e {
            TilingError::BudgetExceeded { .. } => Self {
                code: EXIT_BUDGET,
                message: e.to_string(),
            },
            TilingError::Eval(e) => e.into(),
            other => Self::validation(other.to_string()),
        }
    }
}

macro_rules! validation_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                Self::validation(e.to_string())
            }
        }
    )*};
}
validation_from!(EncodeError, ClosureError, CrosswordError, hwm_core::config::ConfigError);

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        if e.kind() == io::ErrorKind::BrokenPipe {
            // The reader went away; nothing left to report.
            return Self {
                code: EXIT_FAILED,
                message: String::new(),
            };
        }
        Self::validation(format!("i/o error: {e}"))
    }
}

type CliResult = Result<u8, CliError>;

/// Hypergraph weighted models: encode, evaluate, compose and test.
#[derive(Parser)]
#[command(name = "hwm", version)]
struct Cli {
    /// JSON run configuration (engine, budgets, tolerance, workers, seed).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Seed; the HWM_SEED variable takes precedence.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a document.
    Validate {
        kind: DocKind,
        file: PathBuf,
    },
    /// Evaluate a model on a graph.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        engine: Option<Engine>,
        /// Term budget.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        intermediate_budget: Option<u64>,
    },
    /// Build the graph of a string, tree, circular string, or crossword.
    Encode {
        kind: EncodeKind,
        /// The word or tree; a file path for crosswords.
        #[arg(long)]
        input: String,
        #[command(flatten)]
        out: Output,
    },
    /// Lift a linear representation to a model.
    Lift {
        kind: LiftKind,
        /// Representation file; `rooted` takes several.
        #[arg(long, required = true)]
        rep: Vec<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Model computing the sum of two series on connected graphs.
    Sum {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Model computing the pointwise product of two series.
    Hadamard {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Rewrite a model under the identity product for closed binary graphs.
    Normalize {
        a: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Crossword models.
    #[command(subcommand)]
    Crossword(CrosswordCommand),
    /// Tilings, tiling models and tiling-free families.
    #[command(subcommand)]
    Tiling(TilingCommand),
    /// Run the acceptance suite.
    Selftest {
        /// Run only these criteria.
        #[arg(long)]
        criterion: Vec<usize>,
        /// Replace every pinned tolerance.
        #[arg(long)]
        tolerance: Option<f64>,
        /// Term and intermediate budget.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Time the engines on random ring-shaped graphs.
    Bench {
        #[arg(long, default_value_t = 8)]
        vertices: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 5)]
        repeats: usize,
    },
}

#[derive(Subcommand)]
enum CrosswordCommand {
    /// Combine two arity-2 models into one on crossword graphs.
    Combine {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Row and column string series as one crossword model.
    RowCol {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Subcommand)]
enum TilingCommand {
    /// Tiling model of a template, optionally scaled to a value on it.
    Build {
        template: PathBuf,
        /// `re` or `re,im`.
        #[arg(long)]
        value: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Whether a graph tiles the template.
    Check { graph: PathBuf, template: PathBuf },
    /// Number of tiling maps onto the template.
    Count { graph: PathBuf, template: PathBuf },
    /// Whether no graph tiles another with fewer vertices.
    Free {
        #[arg(required = true)]
        graphs: Vec<PathBuf>,
    },
}

#[derive(Args)]
struct Output {
    /// Output file; standard output when omitted or `-`.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DocKind {
    Graph,
    Model,
    Tensor,
    StringRep,
    TreeRep,
    Crossword,
}

#[derive(Clone, Copy, ValueEnum)]
enum EncodeKind {
    String,
    Bare,
    Tree,
    Circular,
    Rooted,
    Anbn,
    Crossword,
}

#[derive(Clone, Copy, ValueEnum)]
enum LiftKind {
    String,
    IotaTau,
    Tree,
    Circular,
    Rooted,
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    if path == Path::new("-") {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf)?;
        return Ok(buf);
    }
    fs::read(path).map_err(|e| CliError::validation(format!("{}: {e}", path.display())))
}

fn write(out: &Output, bytes: &[u8]) -> Result<(), CliError> {
    match &out.output {
        Some(p) if p != Path::new("-") => {
            fs::write(p, bytes).map_err(|e| CliError::validation(format!("{}: {e}", p.display())))
        }
        _ => Ok(io::stdout().write_all(bytes)?),
    }
}

fn print_json(v: &serde_json::Value) -> Result<(), CliError> {
    io::stdout().write_all(&to_json(v))?;
    Ok(())
}

fn graph(path: &Path) -> Result<Hypergraph, CliError> {
    Ok(parse_graph(&read(path)?)?)
}

fn model(path: &Path) -> Result<hwm_core::engine::Hwm, CliError> {
    Ok(parse_model(&read(path)?)?)
}

fn complex_json(z: C64) -> serde_json::Value {
    json!({"re": z.re, "im": z.im})
}

fn parse_complex(s: &str) -> Result<C64, CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| {
        t.parse::<f64>()
            .map_err(|_| CliError::validation(format!("{s:?} is not a number or `re,im` pair")))
    };
    match parts.as_slice() {
        [re] => Ok(C64::new(num(re)?, 0.0)),
        [re, im] => Ok(C64::new(num(re)?, num(im)?)),
        _ => Err(CliError::validation(format!("{s:?} is not a number or `re,im` pair"))),
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(p) => serde_json::from_slice::<RunConfig>(&read(p)?).map_err(|e| CliError {
            code: EXIT_SCHEMA,
            message: format!("{}: {e}", p.display()),
        })?,
        None => RunConfig::default(),
    };
    if let Some(w) = cli.workers {
        cfg.workers = Some(w);
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    let cfg = cfg.with_seed_override(std::env::var(SEED_ENV).ok())?;
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> CliResult {
    let mut cfg = load_config(&cli)?;
    if let Some(n) = cfg.workers {
        // Only fails if a global pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match cli.command {
        Command::Validate { kind, file } => {
            let bytes = read(&file)?;
            let summary = match kind {
                DocKind::Graph => {
                    let g = parse_graph(&bytes)?;
                    json!({"kind": "graph", "vertices": g.vertex_count(), "hyperedges": g.edge_count(), "ports": g.port_count()})
                }
                DocKind::Model => {
                    let m = parse_model(&bytes)?;
                    json!({"kind": "model", "symbols": m.alphabet().len(), "dim": m.dim()})
                }
                DocKind::Tensor => {
                    let t = parse_tensor(&bytes)?;
                    json!({"kind": "tensor", "order": t.order(), "nnz": t.nnz()})
                }
                DocKind::StringRep => {
                    let r = parse_string_rep(&bytes)?;
                    json!({"kind": "string_rep", "d": r.dim()})
                }
                DocKind::TreeRep => {
                    let r = parse_tree_rep(&bytes)?;
                    json!({"kind": "tree_rep", "d": r.dim()})
                }
                DocKind::Crossword => {
                    let w = parse_crossword(&bytes)?;
                    json!({"kind": "crossword", "rows": w.rows(), "cols": w.cols()})
                }
            };
            print_json(&json!({"valid": true, "document": summary}))?;
        }
        Command::Eval {
            model: m,
            graph: g,
            engine,
            budget,
            intermediate_budget,
        } => {
            if let Some(b) = budget {
                cfg.term_budget = b;
            }
            if let Some(b) = intermediate_budget {
                cfg.intermediate_budget = b;
            }
            cfg.validate()?;
            let (m, g) = (model(&m)?, graph(&g)?);
            let r = eval(&m, &g, engine.unwrap_or(cfg.engine), &cfg.eval_config())?;
            let tol = cfg.tolerance_or(DEFAULT_TOLERANCE);
            let real = is_effectively_real(r.value, tol).then_some(r.value.re);
            print_json(&json!({
                "value": complex_json(r.value),
                "real": real,
                "engine": r.engine.name(),
                "terms": r.terms,
            }))?;
        }
        Command::Encode { kind, input, out } => {
            let g = match kind {
                EncodeKind::String => encode_string(&word(&input))?,
                EncodeKind::Bare => encode_string_bare(&word(&input))?,
                EncodeKind::Tree => encode_tree(&parse_tree(&input)?)?,
                EncodeKind::Circular => encode_circular(&word(&input))?,
                EncodeKind::Rooted => encode_rooted_circular(&word(&input))?,
                EncodeKind::Anbn => encode_anbn_graph(&word(&input))?,
                EncodeKind::Crossword => encode_crossword(&parse_crossword(&read(Path::new(&input))?)?),
            };
            write(&out, &emit_graph(&g))?;
        }
        Command::Lift { kind, rep, out } => {
            let m = match kind {
                LiftKind::Tree => lift_tree_series(&parse_tree_rep(&read(&rep[0])?)?),
                _ => {
                    let reps = rep
                        .iter()
                        .map(|p| Ok(parse_string_rep(&read(p)?)?))
                        .collect::<Result<Vec<_>, CliError>>()?;
                    let first = &reps[0];
                    match kind {
                        LiftKind::String => lift_string_series(first),
                        LiftKind::IotaTau => lift_string_series_iota_eq_tau(first, cfg.seed)?.model,
                        LiftKind::Circular => circular_trace_hwm(first.matrices())?,
                        LiftKind::Rooted => {
                            if reps.iter().any(|r| r.matrices() != first.matrices()) {
                                return Err(CliError::validation(
                                    "rooted lifts need representations sharing their matrices",
                                ));
                            }
                            let pairs: Vec<_> =
                                reps.iter().map(|r| (r.iota().clone(), r.tau().clone())).collect();
                            rooted_circular_hwm(first.matrices(), &pairs)?
                        }
                        LiftKind::Tree => unreachable!("handled above"),
                    }
                }
            };
            write(&out, &emit_model(&m))?;
        }
        Command::Sum { a, b, out } => {
            write(&out, &emit_model(&hwm_sum(&model(&a)?, &model(&b)?)?))?;
            eprintln!(
                "warning: the sum model equals r_A + r_B on connected graphs only; \
                 on a disconnected graph it gives the product over components of r_A + r_B"
            );
        }
        Command::Hadamard { a, b, out } => {
            write(&out, &emit_model(&hwm_hadamard(&model(&a)?, &model(&b)?)?))?
        }
        Command::Normalize { a, tol, out } => {
            write(&out, &emit_model(&normalize_closed_graph(&model(&a)?, tol)?))?
        }
        Command::Crossword(CrosswordCommand::Combine { a, b, out }) => {
            write(&out, &emit_model(&crossword_combine_hwm(&model(&a)?, &model(&b)?)?))?
        }
        Command::Crossword(CrosswordCommand::RowCol { a, b, out }) => {
            let ra = parse_string_rep(&read(&a)?)?;
            let rb = parse_string_rep(&read(&b)?)?;
            write(&out, &emit_model(&crossword_row_col_hwm(&ra, &rb, cfg.seed)?))?
        }
        Command::Tiling(t) => return tiling(t),
        Command::Selftest {
            criterion,
            tolerance,
            budget,
        } => {
            if tolerance.is_some() {
                cfg.tolerance = tolerance;
            }
            if let Some(b) = budget {
                cfg.term_budget = b;
                cfg.intermediate_budget = b;
            }
            cfg.validate()?;
            if let Some(bad) = criterion.iter().find(|&&id| !CRITERIA.iter().any(|c| c.id == id)) {
                return Err(CliError::validation(format!(
                    "no criterion {bad}; criteria are 1..={}",
                    CRITERIA.len()
                )));
            }
            let mut all_passed = true;
            let mut out = io::stdout().lock();
            for c in CRITERIA.iter().filter(|c| criterion.is_empty() || criterion.contains(&c.id)) {
                let r = run_criterion(c, &cfg);
                writeln!(out, "{r}")?;
                for f in &r.failures {
                    writeln!(out, "    {f}")?;
                }
                all_passed &= r.passed;
            }
            let verdict = if all_passed { "all criteria pass" } else { "FAILED" };
            writeln!(out, "seed {}: {verdict}", cfg.seed)?;
            return Ok(if all_passed { 0 } else { EXIT_FAILED });
        }
        Command::Bench {
            vertices,
            dim,
            repeats,
        } => bench(&cfg, vertices, dim, repeats)?,
    }
    Ok(0)
}

fn tiling(cmd: TilingCommand) -> CliResult {
    match cmd {
        TilingCommand::Build {
            template,
            value,
            out,
        } => {
            let hat = graph(&template)?;
            let m = match value {
                Some(v) => scaled_tiling_hwm(&hat, parse_complex(&v)?)?,
                None => tiling_hwm(&hat, C64::new(1.0, 0.0)),
            };
            write(&out, &emit_model(&m))?;
        }
        TilingCommand::Check { graph: g, template } => {
            let r = find_tilings(&graph(&g)?, &graph(&template)?, 1)?;
            let map = r.maps.first().map(|m| &m.f);
            print_json(&json!({"tiling": r.is_tiling(), "map": map}))?;
        }
        TilingCommand::Count { graph: g, template } => {
            let hat = graph(&template)?;
            let r = find_tilings(&graph(&g)?, &hat, usize::MAX)?;
            print_json(&json!({"count": r.maps.len(), "fiber_sizes": r.fiber_sizes}))?;
        }
        TilingCommand::Free { graphs } => {
            let family = graphs.iter().map(|p| graph(p)).collect::<Result<Vec<_>, _>>()?;
            let witness = is_tiling_free(&family)?.map(|w| {
                json!({
                    "tiling": graphs[w.tiling].display().to_string(),
                    "template": graphs[w.template].display().to_string(),
                    "map": w.map.f,
                })
            });
            print_json(&json!({"tiling_free": witness.is_none(), "witness": witness}))?;
        }
    }
    Ok(0)
}

/// Ring of `n` arity-2 vertices under a random identity model.
fn bench(cfg: &RunConfig, n: usize, dim: usize, repeats: usize) -> Result<(), CliError> {
    if n == 0 || dim == 0 {
        return Err(CliError::validation("vertices and dim must be positive"));
    }
    let w: Vec<&str> = (0..n).map(|i| if i % 2 == 0 { "a" } else { "b" }).collect();
    let g = encode_circular(&w)?;
    let mut rng = random::rng(cfg.seed);
    let m = random::identity_hwm(&mut rng, g.alphabet(), dim, true);
    let ec = cfg.eval_config();
    let mut rows = Vec::new();
    for engine in Engine::ALL {
        let start = Instant::now();
        let mut last = None;
        for _ in 0..repeats.max(1) {
            last = Some(eval(&m, &g, engine, &ec));
        }
        let secs = start.elapsed().as_secs_f64() / repeats.max(1) as f64;
        rows.push(match last.expect("at least one run") {
            Ok(r) => json!({"engine": engine.name(), "seconds": secs, "terms": r.terms, "value": complex_json(r.value)}),
            Err(e) => json!({"engine": engine.name(), "error": e.to_string()}),
        });
    }
    print_json(&json!({"vertices": n, "dim": dim, "results": rows}))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            if !e.message.is_empty() {
                eprintln!("error: {}", e.message);
            }
            ExitCode::from(e.code)
        }
    }
}
