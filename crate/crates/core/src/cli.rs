//! The `crw` command line.
//!
//! Every run that writes to `--out` also writes `<out>.manifest.json`, a
//! [`RunManifest`] holding what is needed to repeat it. Without `--out` the
//! result goes to stdout and no manifest is written.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::boost::{max_boost, min_boost, srw_probability, BoostParams, EventSpec};
use crate::error::CrwError;
use crate::exact::{cover_mdp, lazyconv_horizon, lazyconv_search, optimal_hitting, spectral};
use crate::graph::{
    gen_bull, gen_complete, gen_cycle, gen_gnp, gen_grid, gen_path, gen_random_regular, gen_random_subcubic,
    gen_random_tree, gen_torus, Graph, VertexSet,
};
use crate::harness::{
    compare_table, estimate_cover, estimate_hitting, rows_to_csv, table1_strategies, table1_sweep, CompareRow,
    CoverStrategy, EstimateReport, Family, NamedRule, StartPolicy, TrialConfig,
};
use crate::rng::DEFAULT_SEED;
use crate::strategies::{distance_halving_strategy, greedy_toward, torus_product_strategy, tree_sigma_strategy};
use crate::walk::{transitions_from_alpha, StrategyTable, UniformChoice};

#[derive(Debug, Parser)]
#[command(name = "crw", version, about = "Choice random walks", arg_required_else_help = true)]
struct Cli {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads for Monte-Carlo runs.
    #[arg(long, global = true)]
    threads: Option<NonZeroUsize>,
    /// Output format; sweeps default to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Output file; a manifest is written next to it.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GenFamily {
    /// path N
    Path,
    /// cycle N
    Cycle,
    /// complete N
    Complete,
    /// bull
    Bull,
    /// torus K D
    Torus,
    /// grid K D
    Grid,
    /// tree N DMAX
    Tree,
    /// regular N D
    Regular,
    /// gnp N P
    Gnp,
    /// subcubic N EXTRA
    Subcubic,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StrategyName {
    /// Optimal hitting strategy for --target.
    Optimal,
    /// Prefer the BFS parent toward --target.
    Greedy,
    /// Dimension priority toward --target (tori and grids).
    TorusProduct,
    /// Distance-halving weighting toward --target.
    DistanceHalving,
    /// Tree strategy for crossing --x to --y, rooted at --root.
    TreeSigma,
    /// Every pair at 1/2.
    Uniform,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BoostMode {
    Max,
    Min,
    Srw,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a graph.
    Gen {
        #[arg(value_enum)]
        family: GenFamily,
        /// Family parameters, e.g. `torus 10 2`.
        params: Vec<String>,
        /// Write the plain `n m` edge list instead of JSON.
        #[arg(long)]
        edge_list: bool,
    },
    /// Monte-Carlo hitting or cover time of a strategy.
    Simulate {
        #[arg(long)]
        graph: PathBuf,
        /// Strategy name or a strategy JSON file.
        #[arg(long, default_value = "srw")]
        strategy: String,
        #[arg(long, default_value_t = 0)]
        start: usize,
        /// Target set, e.g. `4` or `0,3`.
        #[arg(long, required_unless_present = "cover", conflicts_with = "cover")]
        target: Option<String>,
        /// Estimate the cover time instead of a hitting time.
        #[arg(long)]
        cover: bool,
        #[arg(long, default_value_t = 10_000_000)]
        steps_cap: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Build a preference table.
    Strategy {
        #[arg(value_enum)]
        name: StrategyName,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        target: Option<String>,
        #[arg(long)]
        root: Option<usize>,
        #[arg(long)]
        x: Option<usize>,
        #[arg(long)]
        y: Option<usize>,
    },
    /// Exact optimal hitting times and strategy.
    HitExact {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        target: String,
    },
    /// Exact optimal expected cover time (small graphs).
    CoverMdp {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 0)]
        start: usize,
        /// Vertices already covered besides the start.
        #[arg(long)]
        covered: Option<String>,
    },
    /// Spectral gap, relaxation time and an optional lazyconv search.
    Spectrum {
        #[arg(long)]
        graph: PathBuf,
        /// Start for the lazyconv search (needs --set).
        #[arg(long, requires = "set")]
        x: Option<usize>,
        #[arg(long)]
        set: Option<String>,
    },
    /// Optimal CRW event probability against the SRW.
    Boost {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 0)]
        start: usize,
        /// `hit:<set>:<t>` or `at:<set>:<t>`.
        #[arg(long)]
        event: String,
        #[arg(long, value_enum, default_value = "max")]
        mode: BoostMode,
    },
    /// Cover and hitting estimates over a family sweep.
    Bench {
        #[arg(long, value_delimiter = ',', required = true)]
        family: Vec<Family>,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "srw,greedy-uncovered")]
        strategies: Vec<CoverStrategy>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 10_000_000)]
        steps_cap: usize,
        #[arg(long, default_value_t = 0)]
        start: usize,
    },
    /// The standard sweep: every family against every cover strategy.
    Table1 {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 10_000_000)]
        steps_cap: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Gen { .. } => "gen",
            Command::Simulate { .. } => "simulate",
            Command::Strategy { .. } => "strategy",
            Command::HitExact { .. } => "hit-exact",
            Command::CoverMdp { .. } => "cover-mdp",
            Command::Spectrum { .. } => "spectrum",
            Command::Boost { .. } => "boost",
            Command::Bench { .. } => "bench",
            Command::Table1 { .. } => "table1",
        }
    }

    fn default_format(&self) -> Format {
        match self {
            Command::Bench { .. } | Command::Table1 { .. } => Format::Csv,
            _ => Format::Json,
        }
    }
}

/// Everything needed to repeat a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// The full argument vector, program name excluded.
    pub args: Vec<String>,
    pub seed: u64,
    pub threads: Option<usize>,
    pub format: Format,
    pub version: String,
    /// Unix time at start, in seconds.
    pub started_at: u64,
    pub wall_clock_secs: f64,
    pub outputs: Vec<PathBuf>,
}

impl RunManifest {
    /// Where the manifest for `output` lives.
    pub fn path_for(output: &Path) -> PathBuf {
        let mut name = output.as_os_str().to_owned();
        name.push(".manifest.json");
        PathBuf::from(name)
    }
}

enum Failure {
    Usage(String),
    Module(CrwError),
}

impl From<CrwError> for Failure {
    fn from(e: CrwError) -> Self {
        Failure::Module(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Runs the command line and returns the process exit code: 0 on success,
/// 2 for usage errors, 1 when a library call fails.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let args = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match run(cli, args) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\nFor more information, try '--help'.");
            2
        }
        Err(Failure::Module(e)) => {
            eprintln!("{}", json!({ "error": e.kind(), "message": e.to_string() }));
            1
        }
    }
}

struct Ctx {
    command: &'static str,
    args: Vec<String>,
    seed: u64,
    threads: Option<usize>,
    format: Format,
    out: Option<PathBuf>,
    started_at: u64,
    clock: Instant,
}

impl Ctx {
    fn trial_config(&self, trials: usize, cap: usize, start: usize) -> TrialConfig {
        TrialConfig::new(trials, cap)
            .seed(self.seed)
            .threads(self.threads)
            .start(StartPolicy::Fixed(start))
    }

    fn emit(&self, body: &str) -> Outcome<()> {
        let Some(out) = &self.out else {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body.as_bytes()).map_err(CrwError::from)?;
            return Ok(());
        };
        fs::write(out, body).map_err(CrwError::from)?;
        let manifest = RunManifest {
            command: self.command.into(),
            args: self.args.clone(),
            seed: self.seed,
            threads: self.threads,
            format: self.format,
            version: env!("CARGO_PKG_VERSION").into(),
            started_at: self.started_at,
            wall_clock_secs: self.clock.elapsed().as_secs_f64(),
            outputs: vec![out.clone()],
        };
        let text = serde_json::to_string_pretty(&manifest).map_err(CrwError::from)?;
        fs::write(RunManifest::path_for(out), text + "\n").map_err(CrwError::from)?;
        Ok(())
    }

    fn emit_json(&self, value: &impl Serialize) -> Outcome<()> {
        let text = serde_json::to_string_pretty(value).map_err(CrwError::from)?;
        self.emit(&(text + "\n"))
    }
}

fn run(cli: Cli, args: Vec<String>) -> Outcome<()> {
    let ctx = Ctx {
        command: cli.command.name(),
        args,
        seed: cli.seed,
        threads: cli.threads.map(NonZeroUsize::get),
        format: cli.format.unwrap_or_else(|| cli.command.default_format()),
        out: cli.out,
        started_at: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
        clock: Instant::now(),
    };
    match cli.command {
        Command::Gen {
            family,
            params,
            edge_list,
        } => cmd_gen(&ctx, family, &params, edge_list),
        Command::Simulate {
            graph,
            strategy,
            start,
            target,
            cover,
            steps_cap,
            trials,
        } => cmd_simulate(
            &ctx,
            &graph,
            &strategy,
            start,
            target.as_deref(),
            cover,
            steps_cap,
            trials,
        ),
        Command::Strategy {
            name,
            graph,
            target,
            root,
            x,
            y,
        } => cmd_strategy(&ctx, name, &graph, target.as_deref(), root, x, y),
        Command::HitExact { graph, target } => cmd_hit_exact(&ctx, &graph, &target),
        Command::CoverMdp { graph, start, covered } => cmd_cover_mdp(&ctx, &graph, start, covered.as_deref()),
        Command::Spectrum { graph, x, set } => cmd_spectrum(&ctx, &graph, x, set.as_deref()),
        Command::Boost {
            graph,
            start,
            event,
            mode,
        } => cmd_boost(&ctx, &graph, start, &event, mode),
        Command::Bench {
            family,
            sizes,
            strategies,
            trials,
            steps_cap,
            start,
        } => {
            let sweep: Vec<_> = family.into_iter().map(|f| (f, sizes.clone())).collect();
            let cfg = ctx.trial_config(trials, steps_cap, start);
            let rows = compare_table(&sweep, &strategies, &cfg)?;
            emit_rows(&ctx, &rows)
        }
        Command::Table1 { trials, steps_cap } => {
            let cfg = ctx.trial_config(trials, steps_cap, 0);
            let rows = compare_table(&table1_sweep(), &table1_strategies(), &cfg)?;
            emit_rows(&ctx, &rows)
        }
    }
}

fn emit_rows(ctx: &Ctx, rows: &[CompareRow]) -> Outcome<()> {
    match ctx.format {
        Format::Csv => ctx.emit(&rows_to_csv(rows)?),
        Format::Json => ctx.emit_json(&rows),
    }
}

fn to_csv<T: Serialize>(rows: impl IntoIterator<Item = T>) -> Outcome<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CrwError::Parse(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CrwError::Parse(e.to_string()))?;
    Ok(String::from_utf8(bytes).map_err(|e| CrwError::Parse(e.to_string()))?)
}

/// Loads a graph from JSON or the plain edge-list format, whatever the extension.
pub fn load_graph(path: &Path) -> crate::Result<Graph> {
    let text = fs::read_to_string(path)?;
    if text.trim_start().starts_with('{') {
        Graph::from_json(&text)
    } else {
        Graph::from_edge_list(&text)
    }
}

fn parse_param<T: FromStr>(params: &[String], i: usize, what: &str) -> Outcome<T> {
    let raw = params
        .get(i)
        .ok_or_else(|| usage(format!("missing parameter {what}")))?;
    raw.parse().map_err(|_| usage(format!("invalid {what}: {raw:?}")))
}

fn cmd_gen(ctx: &Ctx, family: GenFamily, params: &[String], edge_list: bool) -> Outcome<()> {
    let arity = match family {
        GenFamily::Bull => 0,
        GenFamily::Path | GenFamily::Cycle | GenFamily::Complete => 1,
        _ => 2,
    };
    if params.len() != arity {
        return Err(usage(format!(
            "{family:?} takes {arity} parameter(s), got {}",
            params.len()
        )));
    }
    let p = |i, what| parse_param::<usize>(params, i, what);
    let g = match family {
        GenFamily::Path => gen_path(p(0, "N")?)?,
        GenFamily::Cycle => gen_cycle(p(0, "N")?)?,
        GenFamily::Complete => gen_complete(p(0, "N")?)?,
        GenFamily::Bull => gen_bull(),
        GenFamily::Torus => gen_torus(p(0, "K")?, p(1, "D")?)?,
        GenFamily::Grid => gen_grid(p(0, "K")?, p(1, "D")?)?,
        GenFamily::Tree => gen_random_tree(p(0, "N")?, p(1, "DMAX")?, ctx.seed)?,
        GenFamily::Regular => gen_random_regular(p(0, "N")?, p(1, "D")?, ctx.seed)?,
        GenFamily::Gnp => gen_gnp(p(0, "N")?, parse_param::<f64>(params, 1, "P")?, ctx.seed)?,
        GenFamily::Subcubic => gen_random_subcubic(p(0, "N")?, p(1, "EXTRA")?, ctx.seed)?,
    };
    if edge_list {
        return ctx.emit(&g.to_edge_list());
    }
    match ctx.format {
        Format::Json => ctx.emit(&(g.to_json()? + "\n")),
        Format::Csv => {
            #[derive(Serialize)]
            struct Edge {
                u: usize,
                v: usize,
            }
            ctx.emit(&to_csv(g.edges().map(|(u, v)| Edge { u, v }))?)
        }
    }
}

fn parse_set(g: &Graph, text: &str) -> Outcome<VertexSet> {
    VertexSet::parse(g.n(), text).map_err(|e| usage(e.to_string()))
}

fn single(set: &VertexSet, what: &str) -> Outcome<usize> {
    match set.as_slice() {
        [v] => Ok(*v),
        _ => Err(usage(format!("{what} needs a single target vertex"))),
    }
}

fn load_table(g: &Graph, path: &Path) -> Outcome<StrategyTable> {
    let table = StrategyTable::from_json(&fs::read_to_string(path).map_err(CrwError::from)?)?;
    let fits = table.n() == g.n() && (0..g.n()).all(|v| table.neighbours(v) == g.neighbours(v));
    if !fits {
        return Err(CrwError::AlphaMismatch("table neighbourhoods differ from the graph".into()).into());
    }
    Ok(table)
}

fn hitting_rule(g: &Graph, name: &str, target: &VertexSet) -> Outcome<NamedRule> {
    if Path::new(name).is_file() {
        return Ok(NamedRule::Table(Arc::new(load_table(g, Path::new(name))?)));
    }
    let table = match name {
        "srw" => return Ok(NamedRule::Uniform(UniformChoice)),
        "optimal" => optimal_hitting(g, target)?.strategy,
        "greedy" => greedy_toward(g, single(target, name)?)?,
        "torus-product" => torus_product_strategy(g, single(target, name)?)?,
        "distance-halving" => distance_halving_strategy(g, single(target, name)?)?,
        other => return Err(usage(format!("unknown hitting strategy {other:?}"))),
    };
    Ok(NamedRule::Table(Arc::new(table)))
}

fn cover_rule(g: &Graph, name: &str, start: usize) -> Outcome<NamedRule> {
    if Path::new(name).is_file() {
        return Ok(NamedRule::Table(Arc::new(load_table(g, Path::new(name))?)));
    }
    let strategy = CoverStrategy::from_str(name).map_err(|e| usage(e.to_string()))?;
    Ok(strategy.rule(g, start)?)
}

#[derive(Serialize)]
struct SimulateOutput<'a> {
    metric: &'a str,
    strategy: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    target: Option<Vec<usize>>,
    #[serde(flatten)]
    report: EstimateReport,
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    ctx: &Ctx,
    graph: &Path,
    strategy: &str,
    start: usize,
    target: Option<&str>,
    cover: bool,
    cap: usize,
    trials: usize,
) -> Outcome<()> {
    let g = load_graph(graph)?;
    g.check_vertex(start)?;
    let cfg = ctx.trial_config(trials, cap, start);
    let (metric, target, report) = if cover {
        let rule = cover_rule(&g, strategy, start)?;
        ("cover", None, estimate_cover(&g, || rule.clone(), &cfg)?)
    } else {
        let set = parse_set(&g, target.expect("clap requires --target without --cover"))?;
        let rule = hitting_rule(&g, strategy, &set)?;
        let r = estimate_hitting(&g, || rule.clone(), start, &set, &cfg)?;
        ("hit", Some(set.as_slice().to_vec()), r)
    };
    match ctx.format {
        Format::Json => ctx.emit_json(&SimulateOutput {
            metric,
            strategy,
            target,
            report,
        }),
        Format::Csv => {
            #[derive(Serialize)]
            struct Row<'a> {
                metric: &'a str,
                strategy: &'a str,
                start: usize,
                mean: f64,
                std_dev: f64,
                ci_low: f64,
                ci_high: f64,
                trials: usize,
                truncated: usize,
            }
            let r = report;
            ctx.emit(&to_csv([Row {
                metric,
                strategy,
                start: r.start,
                mean: r.mean,
                std_dev: r.std_dev,
                ci_low: r.ci_low,
                ci_high: r.ci_high,
                trials: r.trials,
                truncated: r.truncated,
            }])?)
        }
    }
}

fn cmd_strategy(
    ctx: &Ctx,
    name: StrategyName,
    graph: &Path,
    target: Option<&str>,
    root: Option<usize>,
    x: Option<usize>,
    y: Option<usize>,
) -> Outcome<()> {
    let g = load_graph(graph)?;
    let target_set = || -> Outcome<VertexSet> {
        parse_set(
            &g,
            target.ok_or_else(|| usage("--target is required for this strategy"))?,
        )
    };
    let table = match name {
        StrategyName::Optimal => optimal_hitting(&g, &target_set()?)?.strategy,
        StrategyName::Greedy => greedy_toward(&g, single(&target_set()?, "greedy")?)?,
        StrategyName::TorusProduct => torus_product_strategy(&g, single(&target_set()?, "torus-product")?)?,
        StrategyName::DistanceHalving => distance_halving_strategy(&g, single(&target_set()?, "distance-halving")?)?,
        StrategyName::TreeSigma => {
            let (Some(x), Some(y)) = (x, y) else {
                return Err(usage("tree-sigma needs --x and --y"));
            };
            tree_sigma_strategy(&g, root.unwrap_or(y), x, y)?
        }
        StrategyName::Uniform => StrategyTable::uniform(&g),
    };
    match ctx.format {
        Format::Json => ctx.emit(&(table.to_json()? + "\n")),
        Format::Csv => {
            #[derive(Serialize)]
            struct Row {
                vertex: usize,
                i: usize,
                j: usize,
                alpha: f64,
            }
            let rows =
                (0..table.n()).flat_map(|v| table.pairs(v).map(move |(i, j, alpha)| Row { vertex: v, i, j, alpha }));
            ctx.emit(&to_csv(rows)?)
        }
    }
}

/// Renders `p` as a fraction over `d²` when it is one (as transition
/// probabilities of a CRW on a simple graph usually are), otherwise as a
/// reduced fraction with a small denominator, otherwise in decimal.
pub fn probability_label(p: f64, degree: usize) -> String {
    const TOL: f64 = 1e-9;
    if (p - 1.0).abs() < TOL {
        return "1".into();
    }
    if p.abs() < TOL {
        return "0".into();
    }
    let dd = (degree * degree) as f64;
    let k = p * dd;
    if (k - k.round()).abs() < TOL * dd {
        return format!("{}/{}", k.round() as u64, degree * degree);
    }
    for den in 2..=10_000u64 {
        let num = p * den as f64;
        if (num - num.round()).abs() < TOL * den as f64 {
            return format!("{}/{den}", num.round() as u64);
        }
    }
    format!("{p}")
}

#[derive(Serialize)]
struct ArcRow {
    from: usize,
    to: usize,
    p: f64,
    label: String,
}

fn cmd_hit_exact(ctx: &Ctx, graph: &Path, target: &str) -> Outcome<()> {
    let g = load_graph(graph)?;
    let set = parse_set(&g, target)?;
    let sol = optimal_hitting(&g, &set)?;
    let p = transitions_from_alpha(&g, &sol.strategy)?;
    let arcs: Vec<ArcRow> = (0..g.n())
        .filter(|&v| !set.contains(v))
        .flat_map(|v| g.neighbours(v).iter().map(move |&u| (v, u)))
        .map(|(v, u)| {
            let q = p.get(v, u);
            ArcRow {
                from: v,
                to: u,
                p: q,
                label: probability_label(q, g.degree(v)),
            }
        })
        .collect();
    match ctx.format {
        Format::Json => ctx.emit_json(&json!({
            "target": set.as_slice(),
            "h": sol.h,
            "ordering": sol.ordering,
            "iterations": sol.iterations,
            "residual": sol.residual,
            "transitions": arcs,
            "strategy": sol.strategy.to_file(),
        })),
        Format::Csv => ctx.emit(&to_csv(arcs)?),
    }
}

fn cmd_cover_mdp(ctx: &Ctx, graph: &Path, start: usize, covered: Option<&str>) -> Outcome<()> {
    let g = load_graph(graph)?;
    let covered = match covered {
        Some(text) => parse_set(&g, text)?,
        None => VertexSet::new(g.n(), [])?,
    };
    let cv = cover_mdp(&g, start, &covered)?;
    let mask = cv.initial_mask();
    #[derive(Serialize)]
    struct Row {
        start: usize,
        initial_mask: u32,
        expected_cover: f64,
        layers: usize,
    }
    let row = Row {
        start,
        initial_mask: mask,
        expected_cover: cv.expected_cover(),
        layers: cv.layers(),
    };
    match ctx.format {
        Format::Json => ctx.emit_json(&json!({
            "start": row.start,
            "covered": covered.as_slice(),
            "initial_mask": row.initial_mask,
            "expected_cover": row.expected_cover,
            "layers": row.layers,
            "first_step_preference": cv.preference(&g, start, mask),
        })),
        Format::Csv => ctx.emit(&to_csv([row])?),
    }
}

fn cmd_spectrum(ctx: &Ctx, graph: &Path, x: Option<usize>, set: Option<&str>) -> Outcome<()> {
    let g = load_graph(graph)?;
    let report = spectral(&g)?;
    let horizon = lazyconv_horizon(&report);
    let search = match set {
        Some(text) => {
            let s = parse_set(&g, text)?;
            let x = x.unwrap_or(0);
            let (t, p) = lazyconv_search(&g, &report, x, &s)?;
            Some(json!({ "x": x, "set": s.as_slice(), "t": t, "p": p, "threshold": report.pi_of(&s) / 3.0 }))
        }
        None => None,
    };
    match ctx.format {
        Format::Json => {
            let mut v = serde_json::to_value(&report).map_err(CrwError::from)?;
            v["lazyconv_horizon"] = json!(horizon);
            if let Some(s) = search {
                v["lazyconv"] = s;
            }
            ctx.emit_json(&v)
        }
        Format::Csv => {
            #[derive(Serialize)]
            struct Row {
                lambda2: f64,
                t_rel: f64,
                lazyconv_horizon: usize,
            }
            ctx.emit(&to_csv([Row {
                lambda2: report.lambda2,
                t_rel: report.t_rel,
                lazyconv_horizon: horizon,
            }])?)
        }
    }
}

fn cmd_boost(ctx: &Ctx, graph: &Path, start: usize, event: &str, mode: BoostMode) -> Outcome<()> {
    let g = load_graph(graph)?;
    let spec = EventSpec::parse(g.n(), event).map_err(|e| usage(e.to_string()))?;
    let params = BoostParams::for_graph(&g);
    let p = srw_probability(&g, start, spec.clone())?;
    let (q, bound, margin) = match mode {
        BoostMode::Max => {
            let q = max_boost(&g, start, spec)?.0;
            let bound = p.powf(params.gamma);
            (q, bound, q - bound)
        }
        BoostMode::Min => {
            let q = min_boost(&g, start, spec)?.0;
            let bound = p * p;
            (q, bound, bound - q)
        }
        BoostMode::Srw => (p, p, 0.0),
    };
    #[derive(Serialize)]
    struct Row<'a> {
        event: &'a str,
        mode: &'a str,
        start: usize,
        q: f64,
        p: f64,
        dmax: usize,
        gamma: f64,
        bound: f64,
        margin: f64,
    }
    let row = Row {
        event,
        mode: match mode {
            BoostMode::Max => "max",
            BoostMode::Min => "min",
            BoostMode::Srw => "srw",
        },
        start,
        q,
        p,
        dmax: params.dmax,
        gamma: params.gamma,
        bound,
        margin,
    };
    match ctx.format {
        Format::Json => ctx.emit_json(&row),
        Format::Csv => ctx.emit(&to_csv([row])?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels() {
        assert_eq!(probability_label(5.0 / 9.0, 3), "5/9");
        assert_eq!(probability_label(1.0 / 3.0, 3), "3/9");
        assert_eq!(probability_label(0.75, 2), "3/4");
        assert_eq!(probability_label(1.0, 1), "1");
        assert_eq!(probability_label(0.3, 3), "3/10");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(dispatch(["crw"]), 2);
        assert_eq!(dispatch(["crw", "frobnicate"]), 2);
        assert_eq!(dispatch(["crw", "gen", "complete"]), 2);
        assert_eq!(dispatch(["crw", "gen", "complete", "3", "--bogus"]), 2);
        assert_eq!(dispatch(["crw", "--help"]), 0);
    }
}
