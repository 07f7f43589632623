//! The `seqalloc` command-line frontend.
//!
//! Machine output goes to standard output or `--out`; a one-line human
//! summary goes to standard error. Exit codes: 0 success, 2 usage, 3 I/O,
//! 4 invalid input, 5 resource limit, 6 a checked bound does not hold.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::analysis::{bench_sweep, check_state_bounds, write_csv, BoundReport, SweepConfig};
use crate::dp::{DpConfig, Representation};
use crate::error::{Error, Result};
use crate::generators::{
    gen_clique_reduction, gen_mcc_reduction, gen_tight_family, generate, GraphInput, RandomSpec,
};
use crate::ilp::{build_model, export_lp};
use crate::instance::Instance;
use crate::simulate::{profile_metrics, simulate, truthful_utility};
use crate::solver::{solve, Algorithm, SolveOptions};

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_INVALID: i32 = 4;
pub const EXIT_LIMIT: i32 = 5;
pub const EXIT_BOUND: i32 = 6;

#[derive(Debug, Parser)]
#[command(name = "seqalloc", version, about = "Optimal manipulation of sequential allocation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Find an optimal reported ranking for agent 0.
    Solve(SolveArgs),
    /// Replay a reported ranking and print the resulting allocation.
    Simulate(SimulateArgs),
    /// Write a generated instance.
    Generate(GenerateArgs),
    /// Write the integer program in LP format.
    ExportIlp(IoArgs),
    /// Check the 2x utility bound and the state-count bounds.
    Check(CheckArgs),
    /// Run a benchmark sweep and write CSV.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct IoArgs {
    /// Instance JSON file; standard input when omitted or `-`.
    input: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DpArgs {
    /// Worker threads for the dynamic program (0 or 1: single-threaded).
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// State encoding: auto, agent or item.
    #[arg(long, default_value = "auto", value_parser = parse_representation)]
    representation: Representation,
    /// Abort the dynamic program beyond this many states.
    #[arg(long, default_value_t = 20_000_000)]
    max_states: usize,
}

impl DpArgs {
    fn config(&self) -> DpConfig {
        DpConfig {
            representation: self.representation,
            max_states: self.max_states,
            threads: self.threads,
            ..DpConfig::default()
        }
    }
}

#[derive(Debug, Args)]
struct LimitArgs {
    #[command(flatten)]
    dp: DpArgs,
    /// Maximum number of candidate bundles for subset enumeration.
    #[arg(long, default_value_t = 10_000_000)]
    subset_budget: u128,
    /// Maximum item count for the brute-force and ILP solvers.
    #[arg(long, default_value_t = 8)]
    max_items: usize,
}

impl LimitArgs {
    fn options(&self) -> SolveOptions {
        SolveOptions {
            dp: self.dp.config(),
            subset_budget: self.subset_budget,
            brute_max_items: self.max_items,
            ilp_max_items: self.max_items,
        }
    }
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    io: IoArgs,
    #[arg(long, default_value = "dp")]
    algo: Algorithm,
    #[command(flatten)]
    limits: LimitArgs,
    /// Include wall-clock time in the solver stats.
    #[arg(long)]
    timings: bool,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    io: IoArgs,
    /// Comma-separated item names or 0-based indices. A prefix is completed
    /// with the remaining items in truthful order. Truthful when omitted.
    #[arg(long)]
    ranking: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenType {
    Random,
    Correlated,
    Tight,
    Clique,
    Mcc,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long = "type", value_enum)]
    kind: GenType,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of agents.
    #[arg(short = 'n', long)]
    agents: Option<usize>,
    /// Number of items.
    #[arg(short = 'm', long)]
    items: Option<usize>,
    /// Number of manipulator picks.
    #[arg(long)]
    mu: Option<usize>,
    /// Maximum item range among the non-manipulators.
    #[arg(long)]
    target_rg: Option<usize>,
    /// Largest utility of the tight family.
    #[arg(long, default_value_t = 1000)]
    scale: u64,
    /// Edge-list graph file for the reductions.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Clique size (or number of colors) for the reductions.
    #[arg(short = 'k')]
    k: Option<usize>,
    /// Write generator metadata JSON here.
    #[arg(long)]
    meta: Option<PathBuf>,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[command(flatten)]
    io: IoArgs,
    #[command(flatten)]
    dp: DpArgs,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Sweep configuration JSON.
    config: PathBuf,
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Runs in parallel; overrides the `threads` entry of the configuration.
    #[arg(long)]
    jobs: Option<usize>,
    #[command(flatten)]
    limits: LimitArgs,
}

fn parse_representation(s: &str) -> std::result::Result<Representation, String> {
    match s {
        "auto" => Ok(Representation::Auto),
        "agent" => Ok(Representation::Agent),
        "item" => Ok(Representation::Item),
        _ => Err(format!("unknown representation `{s}` (expected auto, agent or item)")),
    }
}

/// Failure of a subcommand, carrying its exit code.
enum Failure {
    Lib(Error),
    Bound(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => EXIT_IO,
        e if e.is_resource_limit() => EXIT_LIMIT,
        _ => EXIT_INVALID,
    }
}

pub fn main() -> i32 {
    run(std::env::args_os())
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
        Err(Failure::Bound(msg)) => {
            eprintln!("bound violated: {msg}");
            EXIT_BOUND
        }
    }
}

fn dispatch(command: Command) -> std::result::Result<(), Failure> {
    match command {
        Command::Solve(a) => cmd_solve(a)?,
        Command::Simulate(a) => cmd_simulate(a)?,
        Command::Generate(a) => cmd_generate(a)?,
        Command::ExportIlp(a) => {
            let inst = read_instance(a.input.as_deref())?;
            let model = build_model(&inst);
            eprintln!(
                "{} variables, {} rows",
                model.num_vars(),
                model.eq_rows.len() + model.greedy_rows.len()
            );
            write_output(a.out.as_deref(), export_lp(&model).as_bytes())?;
        }
        Command::Check(a) => return cmd_check(a),
        Command::Bench(a) => cmd_bench(a)?,
    }
    Ok(())
}

fn read_input(path: Option<&Path>) -> Result<String> {
    match path {
        Some(p) if p != Path::new("-") => std::fs::read_to_string(p)
            .map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn read_instance(path: Option<&Path>) -> Result<Instance> {
    Instance::from_json(&read_input(path)?)
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}

fn json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s.into_bytes()
}

fn names(inst: &Instance, items: &[usize]) -> Vec<String> {
    items.iter().map(|&i| inst.item_names()[i].clone()).collect()
}

fn cmd_solve(a: SolveArgs) -> Result<()> {
    let inst = read_instance(a.io.input.as_deref())?;
    let mut result = solve(&inst, a.algo, &a.limits.options())?;
    if !a.timings {
        result.stats.set_elapsed_ms(None);
    }
    let ut = truthful_utility(&inst);
    eprintln!(
        "{}: optimal utility {} (truthful {}), bundle {{{}}}",
        a.algo,
        result.optimal_utility,
        ut,
        names(&inst, &result.bundle).join(", ")
    );
    write_output(a.io.out.as_deref(), &json_bytes(&result.report(&inst, ut)))
}

/// Resolves a comma-separated ranking; missing items follow in truthful order.
fn parse_ranking(inst: &Instance, text: &str) -> Result<Vec<usize>> {
    let m = inst.num_items();
    let mut ranking = Vec::new();
    for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let item = inst
            .item_index(tok)
            .or_else(|| tok.parse::<usize>().ok().filter(|&i| i < m))
            .ok_or_else(|| Error::UnknownItem(tok.to_string()))?;
        if ranking.contains(&item) {
            return Err(Error::RankingNotPermutation);
        }
        ranking.push(item);
    }
    let rest: Vec<usize> = inst
        .truthful_ranking()
        .iter()
        .copied()
        .filter(|i| !ranking.contains(i))
        .collect();
    ranking.extend(rest);
    Ok(ranking)
}

#[derive(Serialize)]
struct SimPick<'a> {
    step: usize,
    agent: &'a str,
    item: &'a str,
}

#[derive(Serialize)]
struct SimBundle<'a> {
    agent: &'a str,
    items: Vec<String>,
}

#[derive(Serialize)]
struct SimulationReport<'a> {
    ranking: Vec<String>,
    manipulator_utility: u64,
    truthful_utility: u64,
    bundles: Vec<SimBundle<'a>>,
    picks: Vec<SimPick<'a>>,
}

fn cmd_simulate(a: SimulateArgs) -> Result<()> {
    let inst = read_instance(a.io.input.as_deref())?;
    let ranking = match &a.ranking {
        Some(text) => parse_ranking(&inst, text)?,
        None => inst.truthful_ranking().to_vec(),
    };
    let alloc = simulate(&inst, &ranking)?;
    let agents = inst.agent_names();
    let items = inst.item_names();
    let utility = inst.bundle_utility(alloc.manipulator_bundle().iter().copied());
    let report = SimulationReport {
        ranking: names(&inst, &ranking),
        manipulator_utility: utility,
        truthful_utility: truthful_utility(&inst),
        bundles: alloc
            .bundles
            .iter()
            .enumerate()
            .map(|(ag, b)| SimBundle {
                agent: &agents[ag],
                items: names(&inst, b),
            })
            .collect(),
        picks: alloc
            .pick_log
            .iter()
            .map(|p| SimPick {
                step: p.step + 1,
                agent: &agents[p.agent],
                item: &items[p.item],
            })
            .collect(),
    };
    eprintln!(
        "manipulator receives {{{}}} worth {utility}",
        names(&inst, alloc.manipulator_bundle()).join(", ")
    );
    write_output(a.io.out.as_deref(), &json_bytes(&report))
}

fn require<T>(value: Option<T>, flag: &str, kind: &str) -> Result<T> {
    value.ok_or_else(|| Error::InvalidParameters(format!("--type {kind} needs {flag}")))
}

fn read_graph(a: &GenerateArgs, kind: &str) -> Result<GraphInput> {
    let path = require(a.graph.as_deref(), "--graph", kind)?;
    GraphInput::parse(&read_input(Some(path))?)
}

fn cmd_generate(a: GenerateArgs) -> Result<()> {
    let (inst, meta) = match a.kind {
        GenType::Random | GenType::Correlated => {
            let kind = if a.kind == GenType::Random { "random" } else { "correlated" };
            let target = match a.kind {
                GenType::Correlated => Some(require(a.target_rg, "--target-rg", kind)?),
                _ => a.target_rg,
            };
            let spec = RandomSpec {
                agents: require(a.agents, "-n", kind)?,
                items: require(a.items, "-m", kind)?,
                manipulator_picks: a.mu,
                target_range: target,
            };
            let inst = generate(a.seed, &spec)?;
            let metrics = profile_metrics(&inst);
            let meta = json!({
                "type": kind,
                "seed": a.seed,
                "agents": spec.agents,
                "items": spec.items,
                "mu_target": spec.manipulator_picks,
                "target_range_max": spec.target_range,
                "mu": inst.manipulator_picks(),
                "realized_range_max": metrics.range_max,
            });
            (inst, meta)
        }
        GenType::Tight => {
            let inst = gen_tight_family(a.scale)?;
            (inst, json!({ "type": "tight", "scale": a.scale }))
        }
        GenType::Clique => {
            let graph = read_graph(&a, "clique")?;
            let (inst, meta) = gen_clique_reduction(&graph, require(a.k, "-k", "clique")?)?;
            (inst, json!({ "type": "clique", "metadata": meta }))
        }
        GenType::Mcc => {
            let graph = read_graph(&a, "mcc")?;
            let (inst, meta) = gen_mcc_reduction(&graph, require(a.k, "-k", "mcc")?)?;
            (inst, json!({ "type": "mcc", "metadata": meta }))
        }
    };
    eprintln!(
        "{} agents, {} items, {} steps for agent 0",
        inst.num_agents(),
        inst.num_items(),
        inst.manipulator_picks()
    );
    if let Some(path) = &a.meta {
        write_output(Some(path), &json_bytes(&meta))?;
    }
    let mut text = inst.to_json();
    text.push('\n');
    write_output(a.out.as_deref(), text.as_bytes())
}

fn violations(report: &BoundReport) -> Vec<String> {
    let mut out = Vec::new();
    if !report.bound_ok {
        out.push(format!(
            "u_opt = {} is at least twice u_T = {}",
            report.u_optimal, report.u_truthful
        ));
    }
    for c in report.state_bounds.iter().filter(|c| !c.holds) {
        out.push(format!(
            "{} distinct sets exceed the {} bound {}",
            report.distinct_sets, c.name, c.bound
        ));
    }
    if let Some(l) = report.lemmas.as_ref().filter(|l| !l.holds()) {
        out.push(format!(
            "per-set checks failed (membership {}, spread {}, window {})",
            l.delta_violations, l.rank_spread_violations, l.window_violations
        ));
    }
    out
}

fn cmd_check(a: CheckArgs) -> std::result::Result<(), Failure> {
    let inst = read_instance(a.io.input.as_deref())?;
    let report = check_state_bounds(&inst, &a.dp.config())?;
    write_output(a.io.out.as_deref(), &json_bytes(&report))?;
    let ratio = report.ratio.map_or_else(|| "undefined".to_string(), |r| r.to_string());
    eprintln!(
        "u_opt/u_T = {ratio}, {} distinct sets in {} states",
        report.distinct_sets, report.states
    );
    let bad = violations(&report);
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Failure::Bound(bad.join("; ")))
    }
}

fn cmd_bench(a: BenchArgs) -> Result<()> {
    let mut config = SweepConfig::from_json(&read_input(Some(&a.config))?)?;
    if let Some(t) = a.jobs {
        config.threads = t;
    }
    let rows = bench_sweep(&config, &a.limits.options())?;
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf)?;
    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    eprintln!("{} runs, {failed} failed", rows.len());
    write_output(a.out.as_deref(), &buf)
}
