//! Command-line front end: set-complexity measures, distance matrices,
//! Boolean-network sweeps, graph scores, and the reproducible experiment
//! curves, all as seeded CSV-producing batch subcommands.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use setcx::bitstring::read_string_set;
use setcx::compression::CompressorSpec;
use setcx::dist::{calibrate, distance_matrix, Calibration};
use setcx::error::{Error, Result};
use setcx::experiments::{
    adjusted_experiment, noise_experiment, substitution_experiment, ExperimentConfig,
};
use setcx::graph::{
    graph_csv_header, graph_csv_row, graph_psi, maximize_psi, read_graph, write_graph,
    Graph, PsiMode,
};
use setcx::measures::{report, Kernel, MeasureReport, Norm, StringSet};
use setcx::rbn::{bias_grid, sweep, SweepConfig};
use setcx::seed::seeded_rng;

#[derive(Parser)]
#[command(
    name = "setcx",
    version,
    about = "Set complexity of strings, Boolean-network trajectories, and graphs",
    long_about = "Estimates information content by compression, computes calibrated \
                  normalized compression distances, and scores string sets, Boolean-network \
                  trajectories, and graphs with the d(1-d) set-complexity kernel. Every \
                  subcommand is deterministic for a given --seed and emits CSV with \
                  reproducibility headers."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pairwise distance matrix (CSV i,j,d) of a string-set file
    Ncd(SetArgs),
    /// Set-complexity report (CSV) of a string-set file
    Psi(SetArgs),
    /// Full measure report plus per-pair contributions
    Measures(SetArgs),
    /// Bias sweep over random Boolean networks (CSV, one row per bias)
    RbnSweep(SweepArgs),
    /// Set complexity of a graph file
    GraphPsi(GraphArgs),
    /// Hill-climb search for a maximally complex graph
    GraphMax(SearchArgs),
    /// Noise curve: calibrated complexity under progressive bit flips
    Fig1(CurveArgs),
    /// Substitution curve: raw complexity as strings are replaced by random ones
    Fig2(CurveArgs),
    /// Adjusted noise curve: fixed calibration from substitution endpoints
    Fig3(CurveArgs),
    /// Boolean-network criticality sweep (same as rbn-sweep)
    Fig4(SweepArgs),
    /// Graph comparison: two-clique baseline, its conjugate, and the search optimum
    Fig5(SearchArgs),
}

/// Flags shared by every subcommand.
#[derive(Args)]
struct Common {
    /// Write output here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Master seed for all randomness
    #[arg(long)]
    seed: Option<u64>,
    /// Cap the rayon thread pool (results are thread-count independent)
    #[arg(long)]
    threads: Option<usize>,
    /// Flat `key = value` config file; command-line flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct SetArgs {
    #[command(flatten)]
    common: Common,
    /// String-set file: one '0'/'1' string per line
    #[arg(long)]
    input: PathBuf,
    /// Calibrate distances from the set (self-distance floor, permuted-copy ceiling)
    #[arg(long)]
    calibrate: bool,
    /// Pair-sum normalization
    #[arg(long, value_parser = ["xi", "pairs-mean"])]
    norm: Option<String>,
    /// Distance kernel for the complexity sum
    #[arg(long, value_parser = ["d1d", "d", "1d", "dlnd", "1dln1d"])]
    kernel: Option<String>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    /// Nodes per network
    #[arg(long)]
    n: Option<usize>,
    /// Inputs per node
    #[arg(long)]
    k: Option<usize>,
    /// First bias value
    #[arg(long)]
    p_min: Option<f64>,
    /// Last bias value
    #[arg(long)]
    p_max: Option<f64>,
    /// Bias grid step
    #[arg(long)]
    p_step: Option<f64>,
    /// Networks per bias value
    #[arg(long)]
    networks: Option<usize>,
    /// Recorded states per trajectory
    #[arg(long)]
    traj_len: Option<usize>,
    /// Discarded update steps before recording
    #[arg(long)]
    burn_in: Option<usize>,
}

#[derive(Args)]
struct GraphArgs {
    #[command(flatten)]
    common: Common,
    /// Graph file: dense 0/1 matrix or `i j` edge list
    #[arg(long)]
    input: PathBuf,
    /// Normalization mode
    #[arg(long, value_parser = ["product", "pairmax"])]
    mode: Option<String>,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    common: Common,
    /// Node count of the searched graphs
    #[arg(long)]
    n: Option<usize>,
    /// Independent hill-climb restarts
    #[arg(long)]
    restarts: Option<usize>,
    /// Maximum accepted moves per restart
    #[arg(long)]
    iterations: Option<usize>,
    /// Normalization mode
    #[arg(long, value_parser = ["product", "pairmax"])]
    mode: Option<String>,
    /// Also write the best graph found to this file (dense format)
    #[arg(long)]
    graph_out: Option<PathBuf>,
}

#[derive(Args)]
struct CurveArgs {
    #[command(flatten)]
    common: Common,
    /// Strings per set (config key N or set_size)
    #[arg(long)]
    set_size: Option<usize>,
    /// Bits per string (config key L or length)
    #[arg(long)]
    length: Option<usize>,
    /// Flip steps for the noise curves (default: length/2)
    #[arg(long)]
    steps: Option<usize>,
    /// Independent replicates averaged into the curve
    #[arg(long)]
    replicates: Option<usize>,
    /// Record every k-th step (endpoints always recorded)
    #[arg(long)]
    record_every: Option<usize>,
    /// Pair-sum normalization
    #[arg(long, value_parser = ["xi", "pairs-mean"])]
    norm: Option<String>,
}

/// Parsed `key = value` config file with line numbers for diagnostics.
struct ConfigFile {
    entries: HashMap<String, (usize, String)>,
}

const VALID_CONFIG_KEYS: &[&str] = &[
    "seed", "threads", "norm", "kernel", "calibrate", "mode", "N", "set_size", "L",
    "length", "steps", "replicates", "record_every", "n", "k", "p_min", "p_max",
    "p_step", "networks", "traj_len", "burn_in", "restarts", "iterations",
];

impl ConfigFile {
    fn empty() -> Self {
        ConfigFile { entries: HashMap::new() }
    }

    fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let mut entries = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::parse(lineno, format!("expected `key = value`, found {line:?}"))
            })?;
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if !VALID_CONFIG_KEYS.contains(&key.as_str()) {
                return Err(Error::parse(
                    lineno,
                    format!(
                        "unknown config key {key:?}; valid keys: {}",
                        VALID_CONFIG_KEYS.join(", ")
                    ),
                ));
            }
            if entries.insert(key.clone(), (lineno, value)).is_some() {
                return Err(Error::parse(lineno, format!("duplicate key {key:?}")));
            }
        }
        Ok(ConfigFile { entries })
    }

    fn raw(&self, keys: &[&str]) -> Option<&(usize, String)> {
        keys.iter().find_map(|k| self.entries.get(*k))
    }

    fn parsed<T: std::str::FromStr>(&self, keys: &[&str]) -> Result<Option<T>> {
        match self.raw(keys) {
            None => Ok(None),
            Some((lineno, value)) => value.parse().map(Some).map_err(|_| {
                Error::parse(
                    *lineno,
                    format!("invalid value {value:?} for {}", keys[0]),
                )
            }),
        }
    }

    fn flag(&self, key: &str) -> Result<bool> {
        match self.raw(&[key]) {
            None => Ok(false),
            Some((lineno, value)) => match value.as_str() {
                "true" | "1" | "yes" => Ok(true),
                "false" | "0" | "no" => Ok(false),
                other => Err(Error::parse(
                    *lineno,
                    format!("invalid boolean {other:?} for {key}"),
                )),
            },
        }
    }
}

/// Flag value if given, else config value, else default.
fn resolve<T: Copy + std::str::FromStr>(
    flag: Option<T>,
    cfg: &ConfigFile,
    keys: &[&str],
    default: T,
) -> Result<T> {
    match flag {
        Some(v) => Ok(v),
        None => Ok(cfg.parsed(keys)?.unwrap_or(default)),
    }
}

fn resolve_norm(flag: &Option<String>, cfg: &ConfigFile) -> Result<Norm> {
    match flag {
        Some(s) => Norm::parse(s),
        None => match cfg.raw(&["norm"]) {
            Some((_, v)) => Norm::parse(v),
            None => Ok(Norm::default()),
        },
    }
}

fn resolve_kernel(flag: &Option<String>, cfg: &ConfigFile) -> Result<Kernel> {
    match flag {
        Some(s) => Kernel::parse(s),
        None => match cfg.raw(&["kernel"]) {
            Some((_, v)) => Kernel::parse(v),
            None => Ok(Kernel::default()),
        },
    }
}

fn resolve_mode(flag: &Option<String>, cfg: &ConfigFile) -> Result<PsiMode> {
    match flag {
        Some(s) => PsiMode::parse(s),
        None => match cfg.raw(&["mode"]) {
            Some((_, v)) => PsiMode::parse(v),
            None => Ok(PsiMode::default()),
        },
    }
}

/// Everything resolved from the shared flags.
struct Context {
    out: Option<PathBuf>,
    seed: u64,
    config: ConfigFile,
}

impl Context {
    fn build(common: &Common) -> Result<Self> {
        let config = match &common.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::empty(),
        };
        let seed = resolve(common.seed, &config, &["seed"], 0)?;
        let threads = resolve(common.threads, &config, &["threads"], 0)?;
        if threads > 0 {
            // Ignore the error if a pool already exists (tests call run()
            // repeatedly in one process); worst case is the default pool.
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global();
        }
        Ok(Context { out: common.out.clone(), seed, config })
    }

    /// Reproducibility header: version, seed, compression backend, norm.
    fn header(&self, norm: Norm) -> String {
        format!(
            "#version={}\n#seed={}\n#compressor={}\n#norm={}\n",
            env!("CARGO_PKG_VERSION"),
            self.seed,
            CompressorSpec::default().id_string(),
            norm.id()
        )
    }

    fn emit(&self, header: &str, payload: &str) -> Result<()> {
        match &self.out {
            Some(path) => {
                let mut f = fs::File::create(path)?;
                f.write_all(header.as_bytes())?;
                f.write_all(payload.as_bytes())?;
            }
            None => {
                let stdout = std::io::stdout();
                let mut lock = stdout.lock();
                lock.write_all(header.as_bytes())?;
                lock.write_all(payload.as_bytes())?;
            }
        }
        Ok(())
    }
}

fn load_set(path: &Path) -> Result<StringSet> {
    let file = read_string_set(path)?;
    StringSet::new(file.strings, CompressorSpec::default(), file.encoding)
}

fn maybe_calibration(
    set: &StringSet,
    requested: bool,
    seed: u64,
) -> Result<Option<Calibration>> {
    if requested {
        let mut rng = seeded_rng(seed);
        Ok(Some(calibrate(set, &mut rng)?))
    } else {
        Ok(None)
    }
}

fn cmd_ncd(args: &SetArgs) -> Result<()> {
    let ctx = Context::build(&args.common)?;
    let norm = resolve_norm(&args.norm, &ctx.config)?;
    let calibrated = args.calibrate || ctx.config.flag("calibrate")?;
    let set = load_set(&args.input)?;
    let cal = maybe_calibration(&set, calibrated, ctx.seed)?;
    let matrix = distance_matrix(&set, cal.as_ref())?;
    let mut payload = Vec::new();
    matrix.write_csv(&mut payload)?;
    ctx.emit(&ctx.header(norm), &String::from_utf8_lossy(&payload))
}

fn measure_of(args: &SetArgs, with_pairs: bool) -> Result<(Context, Norm, StringSet, MeasureReport)> {
    let ctx = Context::build(&args.common)?;
    let norm = resolve_norm(&args.norm, &ctx.config)?;
    let kernel = resolve_kernel(&args.kernel, &ctx.config)?;
    let calibrated = args.calibrate || ctx.config.flag("calibrate")?;
    let set = load_set(&args.input)?;
    let cal = maybe_calibration(&set, calibrated, ctx.seed)?;
    let matrix = distance_matrix(&set, cal.as_ref())?;
    let rep = report(&set, &matrix, &kernel, norm, with_pairs)?;
    Ok((ctx, norm, set, rep))
}

fn cmd_psi(args: &SetArgs) -> Result<()> {
    let (ctx, norm, _, rep) = measure_of(args, false)?;
    let payload = format!("{}\n{}\n", MeasureReport::csv_header(), rep.csv_row());
    ctx.emit(&ctx.header(norm), &payload)
}

fn cmd_measures(args: &SetArgs) -> Result<()> {
    let (ctx, norm, _, rep) = measure_of(args, true)?;
    let mut payload = format!("{}\n{}\n", MeasureReport::csv_header(), rep.csv_row());
    payload.push_str("#pairs\ni,j,c_max,d,contribution\n");
    for p in rep.per_pair.as_deref().unwrap_or(&[]) {
        payload.push_str(&format!(
            "{},{},{},{},{}\n",
            p.i, p.j, p.c_max, p.d, p.contribution
        ));
    }
    ctx.emit(&ctx.header(norm), &payload)
}

fn cmd_sweep(args: &SweepArgs) -> Result<()> {
    let ctx = Context::build(&args.common)?;
    let cfg = &ctx.config;
    let p_min = resolve(args.p_min, cfg, &["p_min"], 0.05)?;
    let p_max = resolve(args.p_max, cfg, &["p_max"], 0.50)?;
    let p_step = resolve(args.p_step, cfg, &["p_step"], 0.01)?;
    let sweep_config = SweepConfig {
        n: resolve(args.n, cfg, &["n"], 1000)?,
        k: resolve(args.k, cfg, &["k"], 3)?,
        p_values: bias_grid(p_min, p_max, p_step)?,
        networks_per_p: resolve(args.networks, cfg, &["networks"], 50)?,
        burn_in: resolve(args.burn_in, cfg, &["burn_in"], 100)?,
        traj_len: resolve(args.traj_len, cfg, &["traj_len"], 20)?,
        seed: ctx.seed,
        spec: CompressorSpec::default(),
        encoding: Default::default(),
    };
    let result = sweep(&sweep_config)?;
    ctx.emit(&ctx.header(Norm::Xi), &result.to_csv())
}

fn cmd_graph_psi(args: &GraphArgs) -> Result<()> {
    let ctx = Context::build(&args.common)?;
    let mode = resolve_mode(&args.mode, &ctx.config)?;
    let graph = read_graph(&args.input)?;
    let psi = graph_psi(&graph, mode)?;
    let payload = format!("{}\n{}\n", graph_csv_header(), graph_csv_row(&graph, psi, mode));
    ctx.emit(&ctx.header(Norm::default()), &payload)
}

fn cmd_graph_max(args: &SearchArgs) -> Result<()> {
    let ctx = Context::build(&args.common)?;
    let cfg = &ctx.config;
    let mode = resolve_mode(&args.mode, cfg)?;
    let n = resolve(args.n, cfg, &["n"], 10)?;
    let restarts = resolve(args.restarts, cfg, &["restarts"], 20)?;
    let iterations = resolve(args.iterations, cfg, &["iterations"], 500)?;
    let found = maximize_psi(n, iterations, restarts, ctx.seed, mode)?;
    if let Some(path) = &args.graph_out {
        write_graph(path, &found.graph)?;
    }
    let payload = format!(
        "{}\n{}\n",
        graph_csv_header(),
        graph_csv_row(&found.graph, found.psi, mode)
    );
    ctx.emit(&ctx.header(Norm::default()), &payload)
}

fn experiment_config(args: &CurveArgs, ctx: &Context) -> Result<(ExperimentConfig, Norm)> {
    let cfg = &ctx.config;
    let norm = resolve_norm(&args.norm, cfg)?;
    let defaults = ExperimentConfig::new(ctx.seed);
    let mut config = ExperimentConfig {
        set_size: resolve(args.set_size, cfg, &["N", "set_size"], defaults.set_size)?,
        length: resolve(args.length, cfg, &["L", "length"], defaults.length)?,
        replicates: resolve(args.replicates, cfg, &["replicates"], defaults.replicates)?,
        record_every: resolve(
            args.record_every,
            cfg,
            &["record_every"],
            defaults.record_every,
        )?,
        norm,
        ..defaults
    };
    config.steps = match args.steps {
        Some(s) => Some(s),
        None => cfg.parsed(&["steps"])?,
    };
    Ok((config, norm))
}

fn cmd_curve(
    args: &CurveArgs,
    run: fn(&ExperimentConfig) -> Result<setcx::experiments::Curve>,
) -> Result<()> {
    let ctx = Context::build(&args.common)?;
    let (config, norm) = experiment_config(args, &ctx)?;
    let curve = run(&config)?;
    ctx.emit(&ctx.header(norm), &curve.to_csv())
}

fn cmd_fig5(args: &SearchArgs) -> Result<()> {
    let ctx = Context::build(&args.common)?;
    let cfg = &ctx.config;
    let mode = resolve_mode(&args.mode, cfg)?;
    let restarts = resolve(args.restarts, cfg, &["restarts"], 20)?;
    let iterations = resolve(args.iterations, cfg, &["iterations"], 500)?;

    let baseline = Graph::two_five_cliques();
    let conjugate = baseline.conjugate();
    let found = maximize_psi(10, iterations, restarts, ctx.seed, mode)?;
    if let Some(path) = &args.graph_out {
        write_graph(path, &found.graph)?;
    }

    let mut payload = format!("label,{}\n", graph_csv_header());
    for (label, graph, psi) in [
        ("two-cliques", &baseline, graph_psi(&baseline, mode)?),
        ("two-cliques-conjugate", &conjugate, graph_psi(&conjugate, mode)?),
        ("search-best", &found.graph, found.psi),
    ] {
        payload.push_str(&format!("{label},{}\n", graph_csv_row(graph, psi, mode)));
    }
    ctx.emit(&ctx.header(Norm::default()), &payload)
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Ncd(args) => cmd_ncd(args),
        Command::Psi(args) => cmd_psi(args),
        Command::Measures(args) => cmd_measures(args),
        Command::RbnSweep(args) | Command::Fig4(args) => cmd_sweep(args),
        Command::GraphPsi(args) => cmd_graph_psi(args),
        Command::GraphMax(args) => cmd_graph_max(args),
        Command::Fig1(args) => cmd_curve(args, noise_experiment),
        Command::Fig2(args) => cmd_curve(args, substitution_experiment),
        Command::Fig3(args) => cmd_curve(args, adjusted_experiment),
        Command::Fig5(args) => cmd_fig5(args),
    }
}

fn main() -> ExitCode {
    // clap itself exits with code 2 on usage errors.
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
