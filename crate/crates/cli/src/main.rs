//! `fpplab`: first-passage percolation experiments from the command line.
//!
//! Every subcommand prints its resolved configuration as `# key=value`
//! lines before any result. Exit codes: 0 success, 1 usage or input error,
//! 2 numeric failure, 3 infeasible request.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use fpplab::branching::{extinction_frequency, tail_exponent_probe, tail_rate, write_probe_csv, OffspringLaw};
use fpplab::degree::{core_theory, parse_offspring, theory_constants, LawDescriptor, PhaseBounds, SizeBiasedLaw};
use fpplab::fpp::{explore_replay, DiameterMode};
use fpplab::graph::{write_dump, Seed};
use fpplab::peel::{core_statistics, k_core};
use fpplab::sweep::{
    aggregate, run_sweep, size_contexts, trial_graph, trial_seed, try_trial, write_csv, write_outputs, GraphMode,
    SizeContext, SweepConfig,
};
use fpplab::Error;

/// Directory searched for a relative sweep config that does not exist as given.
const CONFIG_DIR_VAR: &str = "FPPLAB_CONFIG_DIR";

#[derive(Parser)]
#[command(name = "fpplab", version = concat!(env!("CARGO_PKG_VERSION"), " (", env!("CARGO_PKG_NAME"), ")"))]
#[command(about = "First-passage percolation on configuration-model graphs with Exp(1) edge weights")]
struct Cli {
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Constants of a degree law: mu, nu, the extinction probability lambda,
    /// lambda* = phi_q'(lambda), Gamma(d_min), and the limits of
    /// diam_w/ln n = 1/(nu-1) + 2/Gamma and flood_w/ln n = 1/(nu-1) + 1/Gamma.
    Theory(TheoryArgs),
    /// Weighted diameter diam_w and flooding time flood_w of one sampled graph,
    /// with 2-core statistics and the phase times T(alpha_n), T(beta_n).
    Fpp(FppArgs),
    /// Sweep over an n grid from a TOML config; per-trial diam_w/ln n and
    /// flood_w/ln n as CSV, plus JSON lines and per-n aggregates.
    Sweep(SweepArgs),
    /// 2-core (or k-core) of one sampled graph: size ratio, edge ratio and the
    /// empirical q~_1, against the limits h_1(p^), mu p^2/2 and lambda*.
    Core(CoreArgs),
    /// Branching process of an offspring law: extinction probability lambda,
    /// tail rate g(xi_min, k), and the split-time tail probe
    /// P(inf > T_n^k >= (x + 1/(f'(1)-1)) ln n) as CSV.
    Bp(BpArgs),
    /// Samples one weighted graph and writes it as a dump (`n m simple_flag`, then `u v w` lines).
    Gen(GenArgs),
}

#[derive(Args)]
struct LawArg {
    /// Law descriptor (`regular 3`, `poisson 2 auto`, `explicit 1:0.5 3:0.5`) or a law file.
    #[arg(required = true, num_args = 1..)]
    law: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphModeArg {
    Simple,
    Multigraph,
    Gnp,
    Gnm,
}

impl From<GraphModeArg> for GraphMode {
    fn from(m: GraphModeArg) -> Self {
        match m {
            GraphModeArg::Simple => GraphMode::Simple,
            GraphModeArg::Multigraph => GraphMode::Multigraph,
            GraphModeArg::Gnp => GraphMode::Gnp,
            GraphModeArg::Gnm => GraphMode::Gnm,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DiameterModeArg {
    Exact,
    AllSources,
    AnchoredLb,
}

impl From<DiameterModeArg> for DiameterMode {
    fn from(m: DiameterModeArg) -> Self {
        match m {
            DiameterModeArg::Exact => DiameterMode::Exact,
            DiameterModeArg::AllSources => DiameterMode::AllSources,
            DiameterModeArg::AnchoredLb => DiameterMode::AnchoredLowerBound,
        }
    }
}

#[derive(Args)]
struct GraphArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value = "simple")]
    graph_mode: GraphModeArg,
    /// Multigraphs drawn before a simple-graph request gives up.
    #[arg(long, default_value_t = fpplab::graph::DEFAULT_MAX_ATTEMPTS)]
    max_attempts: usize,
}

#[derive(Args)]
struct TheoryArgs {
    #[command(flatten)]
    law: LawArg,
    /// Also print alpha_n = ln^3 n and beta_n = 3 sqrt(mu/(nu-1) n ln n).
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args)]
struct FppArgs {
    #[command(flatten)]
    law: LawArg,
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, value_enum, default_value = "exact")]
    diameter_mode: DiameterModeArg,
    /// Slack in the ball-growth event R''.
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    /// Sources for the phase times.
    #[arg(long, default_value_t = 8)]
    phase_sources: usize,
    /// Writes the exploration trace from the smallest vertex of the largest
    /// component, one `i T d_hat S_hat X S gamma` line per step.
    #[arg(long)]
    trace_dump: Option<PathBuf>,
    /// One JSON object instead of key=value lines.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SweepArgs {
    config: PathBuf,
    /// Overrides `output.csv`; `-` streams the CSV to stdout.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct CoreArgs {
    #[command(flatten)]
    law: LawArg,
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, default_value_t = 2)]
    k: u32,
}

#[derive(Args)]
struct BpArgs {
    /// Offspring table (`offspring 0:0.25 2:0.75`), or a degree law with `--size-biased`.
    #[arg(required = true, num_args = 1..)]
    law: Vec<String>,
    /// Read the law as a degree law and use its size-biased offspring law.
    #[arg(long)]
    size_biased: bool,
    /// Label written in the `law_id` column.
    #[arg(long)]
    law_id: Option<String>,
    /// Initial particles.
    #[arg(long, default_value_t = 1)]
    k: u32,
    #[arg(long, value_delimiter = ',')]
    x: Vec<f64>,
    #[arg(long = "steps", value_delimiter = ',')]
    ns: Vec<usize>,
    /// Chains per probe cell.
    #[arg(long, default_value_t = 100_000)]
    runs: u64,
    /// Chains for the extinction estimate; 0 skips it.
    #[arg(long, default_value_t = 0)]
    extinction_runs: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Probe CSV path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    law: LawArg,
    #[command(flatten)]
    graph: GraphArgs,
    /// Dump path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Core(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Core(Error::Io(e))
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Core(e) => match e {
                Error::NoConvergence { .. } | Error::Subcritical { .. } | Error::RejectionFailure { .. } => 2,
                Error::Infeasible { .. } => 3,
                _ => 1,
            },
        }
    }
}

type CliResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Some(w) = cli.workers {
        if w == 0 {
            eprintln!("error: --workers must be at least 1");
            return ExitCode::from(1);
        }
        rayon::ThreadPoolBuilder::new().num_threads(w).build_global().expect("pool is built once");
    }
    let workers = rayon::current_num_threads();
    let result = match cli.command {
        Command::Theory(a) => theory(a, workers),
        Command::Fpp(a) => fpp(a, workers),
        Command::Sweep(a) => sweep(a, workers),
        Command::Core(a) => core(a, workers),
        Command::Bp(a) => bp(a, workers),
        Command::Gen(a) => gen(a, workers),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) => eprintln!("error: {m}"),
                Failure::Core(e) => eprintln!("error: {e}"),
            }
            ExitCode::from(f.exit_code())
        }
    }
}

/// A single existing path is read as a law file; otherwise the tokens form the descriptor.
fn law_text(tokens: &[String]) -> Result<String, Failure> {
    if let [single] = tokens {
        let p = Path::new(single);
        if p.is_file() {
            return Ok(std::fs::read_to_string(p)?);
        }
    }
    Ok(tokens.join(" "))
}

fn parse_law(tokens: &[String]) -> Result<LawDescriptor, Failure> {
    Ok(LawDescriptor::parse(&law_text(tokens)?)?)
}

fn print_config<W: Write + ?Sized>(out: &mut W, pairs: &[(&str, String)]) -> io::Result<()> {
    for (k, v) in pairs {
        writeln!(out, "# {k}={v}")?;
    }
    Ok(())
}

fn stdout() -> BufWriter<io::StdoutLock<'static>> {
    BufWriter::new(io::stdout().lock())
}

/// `key=value` lines of a JSON object; nested objects become dotted keys.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(xs) => {
            let parts: Vec<String> = xs.iter().map(scalar).collect();
            out.push((prefix.to_owned(), parts.join(",")));
        }
        _ => out.push((prefix.to_owned(), scalar(v))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "nan".into(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn theory(a: TheoryArgs, workers: usize) -> CliResult {
    let descriptor = parse_law(&a.law.law)?;
    let law = descriptor.resolve(a.n)?;
    let mut out = stdout();
    let mut config = vec![("law", descriptor.to_string()), ("workers", workers.to_string())];
    if let Some(n) = a.n {
        config.push(("n", n.to_string()));
    }
    print_config(&mut out, &config)?;
    let constants = match theory_constants(&law) {
        Ok(c) => c,
        Err(Error::Subcritical { nu, constants }) => {
            write!(out, "{}", constants.to_key_value())?;
            out.flush()?;
            return Err(Error::Subcritical { nu, constants }.into());
        }
        Err(e) => return Err(e.into()),
    };
    write!(out, "{}", constants.to_key_value())?;
    let core = core_theory(&law, &constants)?;
    writeln!(out, "core_p_hat={}", core.p_hat)?;
    writeln!(out, "core_size_ratio={}", core.h1_at_phat)?;
    writeln!(out, "core_edge_ratio={}", core.edge_ratio)?;
    writeln!(out, "core_q1={}", core.tilde_q1)?;
    writeln!(out, "core_nu={}", core.tilde_nu)?;
    if let Some(n) = a.n {
        let b = PhaseBounds::new(&constants, n);
        writeln!(out, "alpha_n={}", b.alpha)?;
        writeln!(out, "beta_n={}", b.beta)?;
    }
    out.flush()?;
    Ok(())
}

fn graph_config(law: &LawDescriptor, g: &GraphArgs) -> SweepConfig {
    let mut c = SweepConfig::new(&law_source(law), vec![g.n], 1, g.seed);
    c.graph_mode = g.graph_mode.into();
    c.max_attempts = g.max_attempts;
    c
}

/// Descriptor text that parses back to `law`.
fn law_source(law: &LawDescriptor) -> String {
    match law {
        LawDescriptor::Explicit(pairs) => {
            let body: Vec<String> = pairs.iter().map(|(k, p)| format!("{k}:{p}")).collect();
            format!("explicit {}", body.join(" "))
        }
        LawDescriptor::Regular(d) => format!("regular {d}"),
        LawDescriptor::Poisson { mu0, cutoff } => format!("poisson {mu0} {cutoff}"),
        LawDescriptor::PowerLaw { tau, cutoff } => format!("powerlaw {tau} {cutoff}"),
    }
}

fn check_graph_args(g: &GraphArgs) -> CliResult {
    if g.n < 2 {
        return Err(Failure::Usage("--n must be at least 2".into()));
    }
    if g.max_attempts == 0 {
        return Err(Failure::Usage("--max-attempts must be at least 1".into()));
    }
    Ok(())
}

fn fpp(a: FppArgs, workers: usize) -> CliResult {
    check_graph_args(&a.graph)?;
    let descriptor = parse_law(&a.law.law)?;
    let mut config = graph_config(&descriptor, &a.graph);
    config.diameter_mode = a.diameter_mode.into();
    config.epsilon = a.epsilon;
    config.phase_sources = a.phase_sources;
    config.validate()?;
    let ctx = SizeContext::new(&descriptor, a.graph.n)?;
    let mut out = stdout();
    let mut pairs = fpp_config(&config);
    pairs.push(("workers", workers.to_string()));
    print_config(&mut out, &pairs)?;
    let record = try_trial(&config, &ctx, 0)?;
    if let Some(path) = &a.trace_dump {
        let (graph, _) = trial_graph(&config, &ctx, &trial_seed(config.master_seed, ctx.n, 0))?;
        let comps = graph.components();
        let giant = comps.giant().expect("graph is nonempty");
        let trace = explore_replay(&graph, comps.members(giant)[0], None);
        std::fs::write(path, trace.dump())?;
    }
    let value = serde_json::to_value(&record).expect("records serialize");
    if a.json {
        writeln!(out, "{value}")?;
    } else {
        let mut lines = Vec::new();
        flatten("", &value, &mut lines);
        for (k, v) in lines.into_iter().filter(|(k, _)| k != "error") {
            writeln!(out, "{k}={v}")?;
        }
    }
    out.flush()?;
    Ok(())
}

fn fpp_config(c: &SweepConfig) -> Vec<(&'static str, String)> {
    c.resolved()
        .into_iter()
        .filter(|(k, _)| !matches!(*k, "trials" | "record_wall_time") && !k.starts_with("output."))
        .map(|(k, v)| match k {
            "n_grid" => ("n", v),
            "master_seed" => ("seed", v),
            _ => (k, v),
        })
        .collect()
}

fn resolve_config_path(p: &Path) -> PathBuf {
    if p.is_relative() && !p.exists() {
        if let Some(dir) = std::env::var_os(CONFIG_DIR_VAR) {
            let candidate = Path::new(&dir).join(p);
            if candidate.exists() {
                return candidate;
            }
        }
    }
    p.to_path_buf()
}

fn sweep(a: SweepArgs, workers: usize) -> CliResult {
    let path = resolve_config_path(&a.config);
    let mut config = SweepConfig::from_file(&path)?;
    if let Some(s) = a.seed {
        config.master_seed = s;
    }
    let to_stdout = match a.csv {
        Some(p) if p.as_os_str() == "-" => {
            config.output.csv = None;
            true
        }
        Some(p) => {
            config.output.csv = Some(p);
            false
        }
        None => config.output.csv.is_none(),
    };
    let contexts = size_contexts(&config)?;
    {
        // Config lines go to stderr when stdout carries the CSV.
        let mut pairs = vec![("config", path.display().to_string())];
        pairs.extend(config.resolved());
        pairs.push(("workers", workers.to_string()));
        if to_stdout {
            print_config(&mut io::stderr().lock(), &pairs)?;
        } else {
            let mut out = stdout();
            print_config(&mut out, &pairs)?;
            out.flush()?;
        }
    }
    let done: Mutex<BTreeMap<usize, usize>> = Mutex::new(BTreeMap::new());
    let trials = config.trials;
    let records = run_sweep(&config, |r| {
        let mut d = done.lock().expect("progress lock");
        let count = d.entry(r.n).or_insert(0);
        *count += 1;
        if *count == trials {
            eprintln!("n={} trials={trials} done", r.n);
        }
        if let Some(e) = &r.error {
            eprintln!("n={} trial={} failed: {e}", r.n, r.trial);
        }
    })?;
    let aggregates = aggregate(&records, &contexts)?;
    write_outputs(&config, &records, &aggregates)?;
    if to_stdout {
        let mut out = stdout();
        write_csv(&mut out, &records)?;
        out.flush()?;
    }
    Ok(())
}

fn core(a: CoreArgs, workers: usize) -> CliResult {
    check_graph_args(&a.graph)?;
    if a.k < 2 {
        return Err(Failure::Usage("--k must be at least 2".into()));
    }
    let descriptor = parse_law(&a.law.law)?;
    let config = graph_config(&descriptor, &a.graph);
    let ctx = SizeContext::new(&descriptor, a.graph.n)?;
    let mut out = stdout();
    let mut pairs: Vec<(&str, String)> =
        fpp_config(&config).into_iter().filter(|(k, _)| !matches!(*k, "diameter_mode" | "epsilon" | "phase_sources")).collect();
    pairs.push(("k", a.k.to_string()));
    pairs.push(("workers", workers.to_string()));
    print_config(&mut out, &pairs)?;
    let (graph, _) = trial_graph(&config, &ctx, &trial_seed(config.master_seed, ctx.n, 0))?;
    let core = k_core(&graph, a.k, None)?;
    let stats = core_statistics(&core, graph.n());
    writeln!(out, "vertices={}", graph.n())?;
    writeln!(out, "core_size={}", core.size())?;
    writeln!(out, "core_edges={}", core.edges.len())?;
    writeln!(out, "size_ratio={}", stats.size_ratio)?;
    writeln!(out, "edge_ratio={}", stats.edge_ratio)?;
    writeln!(out, "q1_tilde_emp={}", stats.q1_tilde)?;
    let hist: Vec<String> = stats.degree_histogram.iter().map(|c| c.to_string()).collect();
    writeln!(out, "degree_histogram={}", hist.join(","))?;
    if a.k == 2 {
        let theory = core_theory(&ctx.law, &ctx.constants)?;
        writeln!(out, "limit_p_hat={}", theory.p_hat)?;
        writeln!(out, "limit_size_ratio={}", theory.h1_at_phat)?;
        writeln!(out, "limit_edge_ratio={}", theory.edge_ratio)?;
        writeln!(out, "limit_q1_tilde={}", theory.tilde_q1)?;
    }
    out.flush()?;
    Ok(())
}

fn bp(a: BpArgs, workers: usize) -> CliResult {
    let text = law_text(&a.law)?;
    let q = if a.size_biased {
        SizeBiasedLaw::from_degree_law(&LawDescriptor::parse(&text)?.resolve(None)?)?
    } else {
        parse_offspring(&text)?
    };
    let law = OffspringLaw::new(q)?;
    if a.k == 0 {
        return Err(Failure::Usage("--k must be at least 1".into()));
    }
    if a.x.is_empty() != a.ns.is_empty() {
        return Err(Failure::Usage("--x and --steps go together".into()));
    }
    let masses: Vec<String> = law.masses().iter().map(|m| m.to_string()).collect();
    let law_id = a.law_id.clone().unwrap_or_else(|| format!("q[{}]", masses.join(";")));
    let to_stdout = a.out.is_none();
    let xs: Vec<String> = a.x.iter().map(|x| x.to_string()).collect();
    let ns: Vec<String> = a.ns.iter().map(|n| n.to_string()).collect();
    let pairs = vec![
        ("offspring", masses.join(",")),
        ("law_id", law_id.clone()),
        ("k", a.k.to_string()),
        ("x", xs.join(",")),
        ("steps", ns.join(",")),
        ("runs", a.runs.to_string()),
        ("extinction_runs", a.extinction_runs.to_string()),
        ("seed", a.seed.to_string()),
        ("out", a.out.as_ref().map_or("-".into(), |p| p.display().to_string())),
        ("workers", workers.to_string()),
    ];
    let mut err = io::stderr().lock();
    let mut out = stdout();
    // Summary lines share the stream with the config; the probe CSV may take stdout.
    let info: &mut dyn Write = if to_stdout && !a.x.is_empty() { &mut err } else { &mut out };
    print_config(info, &pairs)?;
    writeln!(info, "# mean={}", law.mean())?;
    writeln!(info, "# xi_min={}", law.xi_min())?;
    writeln!(info, "# lambda={}", law.extinction_probability()?)?;
    writeln!(info, "# lambda_star={}", law.lambda_star()?)?;
    if law.is_supercritical() {
        writeln!(info, "# tail_rate={}", tail_rate(&law, a.k)?)?;
    }
    let seed = Seed::new(a.seed);
    if a.extinction_runs > 0 {
        let est = extinction_frequency(&law, a.k, a.extinction_runs, usize::MAX, &seed.derive("extinction", 0))?;
        writeln!(info, "# extinction_frequency={}", est.frequency)?;
        writeln!(info, "# extinction_se={}", est.standard_error)?;
    }
    info.flush()?;
    if a.x.is_empty() {
        return Ok(());
    }
    let rows = tail_exponent_probe(&law, &law_id, a.k, &a.x, &a.ns, a.runs, &seed.derive("probe", 0))?;
    match &a.out {
        Some(p) => {
            let mut f = BufWriter::new(File::create(p)?);
            write_probe_csv(&rows, &mut f)?;
            f.flush()?;
        }
        None => {
            write_probe_csv(&rows, &mut out)?;
            out.flush()?;
        }
    }
    Ok(())
}

fn gen(a: GenArgs, workers: usize) -> CliResult {
    check_graph_args(&a.graph)?;
    let descriptor = parse_law(&a.law.law)?;
    let config = graph_config(&descriptor, &a.graph);
    let ctx = SizeContext::new(&descriptor, a.graph.n)?;
    let mut pairs: Vec<(&str, String)> =
        fpp_config(&config).into_iter().filter(|(k, _)| !matches!(*k, "diameter_mode" | "epsilon" | "phase_sources")).collect();
    pairs.push(("out", a.out.as_ref().map_or("-".into(), |p| p.display().to_string())));
    pairs.push(("workers", workers.to_string()));
    let (graph, attempts) = trial_graph(&config, &ctx, &trial_seed(config.master_seed, ctx.n, 0))?;
    pairs.push(("attempts", attempts.to_string()));
    match &a.out {
        Some(p) => {
            let mut out = stdout();
            print_config(&mut out, &pairs)?;
            out.flush()?;
            let mut f = BufWriter::new(File::create(p)?);
            write_dump(&graph, &mut f)?;
            f.flush()?;
        }
        None => {
            print_config(&mut io::stderr().lock(), &pairs)?;
            let mut out = stdout();
            write_dump(&graph, &mut out)?;
            out.flush()?;
        }
    }
    Ok(())
}
