// SPDX-License-Identifier: Apache-2.0

//! The `fitcut` command line: `gen`, `cut`, `bench` and `oracle`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::generators::{gen_adder, gen_bv, gen_hwea, gen_supremacy, parse_secret};
use crate::graph::circuit_gate_graph;
use crate::oracle::{brute_balanced_schedule, brute_max_modularity, brute_min_cuts};
use crate::pipeline::{run_many, CutPlan, MultiRun, NcStats, RunRecord};
use crate::schedule::WorkerPool;

/// Environment variable holding the default worker pool path.
pub const WORKERS_ENV: &str = "FITCUT_WORKERS";

#[derive(Parser, Debug)]
#[command(name = "fitcut", version, about = "Capacity-aware wire cutting for quantum circuits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a benchmark circuit in the text format
    Gen(GenCmd),
    /// Search for a cut plan over a worker pool
    Cut(CutCmd),
    /// Run a suite of cut searches and tabulate the statistics
    Bench(BenchCmd),
    /// Exhaustive reference solvers for small instances
    Oracle(OracleCmd),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Bv,
    Adder,
    Hwea,
    Supremacy,
}

/// Generator parameters shared by every subcommand that builds circuits.
#[derive(Args, Debug, Clone)]
pub struct GenOpts {
    /// Circuit width (bv, adder, hwea)
    #[arg(long)]
    pub qubits: Option<usize>,
    /// BV secret: `ones`, `zeros` or an explicit bitstring
    #[arg(long, default_value = "ones")]
    pub secret: String,
    /// HWEA entangling layers
    #[arg(long, default_value_t = 1)]
    pub layers: usize,
    /// Supremacy grid rows
    #[arg(long)]
    pub rows: Option<usize>,
    /// Supremacy grid columns
    #[arg(long)]
    pub cols: Option<usize>,
    /// Supremacy entangling layers
    #[arg(long, default_value_t = 8)]
    pub depth: usize,
}

impl Default for GenOpts {
    fn default() -> Self {
        Self {
            qubits: None,
            secret: "ones".into(),
            layers: 1,
            rows: None,
            cols: None,
            depth: 8,
        }
    }
}

#[derive(Args, Debug)]
pub struct GenCmd {
    pub family: Family,
    #[command(flatten)]
    pub opts: GenOpts,
    /// Supremacy single-qubit gate seed
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file (stdout when absent)
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

/// Where a worker pool comes from.
#[derive(Args, Debug, Clone, Default)]
pub struct PoolOpts {
    /// Worker pool file (JSON or TOML list of {id, capacity})
    #[arg(long, env = WORKERS_ENV)]
    pub workers: Option<PathBuf>,
    /// Inline pool as comma-separated capacities, named W1, W2, ...
    #[arg(long, value_delimiter = ',', conflicts_with = "workers")]
    pub capacities: Option<Vec<u32>>,
}

impl PoolOpts {
    pub fn resolve(&self) -> anyhow::Result<WorkerPool> {
        match (&self.capacities, &self.workers) {
            (Some(caps), _) => Ok(WorkerPool::from_capacities(caps)?),
            (None, Some(path)) => {
                WorkerPool::load(path).with_context(|| format!("loading worker pool {}", path.display()))
            }
            (None, None) => bail!("no worker pool: pass --workers, --capacities or set {WORKERS_ENV}"),
        }
    }
}

/// A circuit read from a file or generated on the fly.
#[derive(Args, Debug, Clone, Default)]
pub struct SourceOpts {
    /// Circuit file in the text format
    #[arg(long, conflicts_with = "gen")]
    pub circuit: Option<PathBuf>,
    /// Generate the circuit instead of reading one
    #[arg(long = "gen", value_enum)]
    pub gen: Option<Family>,
    #[command(flatten)]
    pub opts: GenOpts,
    /// Supremacy single-qubit gate seed
    #[arg(long, default_value_t = 0)]
    pub circuit_seed: u64,
}

impl SourceOpts {
    pub fn load(&self) -> anyhow::Result<Circuit> {
        match (&self.circuit, self.gen) {
            (Some(path), _) => read_circuit(path),
            (None, Some(family)) => Ok(generate(family, &self.opts, self.circuit_seed)?),
            (None, None) => bail!("no circuit: pass --circuit FILE or --gen FAMILY"),
        }
    }
}

#[derive(Args, Debug)]
pub struct CutCmd {
    #[command(flatten)]
    pub source: SourceOpts,
    #[command(flatten)]
    pub pool: PoolOpts,
    /// First detection seed
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of seeds to try (seed, seed+1, ...)
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub runs: u64,
    /// Worker threads for the runs (0 = all cores)
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Plan JSON destination (stdout when absent)
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Also write the run summary as JSON
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// Write the gate graph to PREFIX.json and PREFIX.dot
    #[arg(long, value_name = "PREFIX")]
    pub dump_graph: Option<PathBuf>,
    /// Write each subcircuit in the text format into DIR
    #[arg(long, value_name = "DIR")]
    pub export_subcircuits: Option<PathBuf>,
    /// Suppress the summary on stderr
    #[arg(long, short)]
    pub quiet: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct BenchCmd {
    /// Suite file (TOML, `[[case]]` tables)
    #[arg(long, conflicts_with = "gen")]
    pub suite: Option<PathBuf>,
    /// Sweep this family over --from..=--to instead of reading a suite
    #[arg(long = "gen", value_enum, requires_all = ["from", "to"])]
    pub gen: Option<Family>,
    #[arg(long)]
    pub from: Option<usize>,
    #[arg(long)]
    pub to: Option<usize>,
    #[arg(long, default_value_t = 10)]
    pub step: usize,
    #[command(flatten)]
    pub opts: GenOpts,
    #[command(flatten)]
    pub pool: PoolOpts,
    /// Runs per case (overridden by a case's own `runs`)
    #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
    pub runs: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    pub format: TableFormat,
    /// Table destination (stdout when absent)
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Per-run records as JSON, for plotting
    #[arg(long)]
    pub plot_data: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct OracleCmd {
    #[command(subcommand)]
    pub which: OracleKind,
}

#[derive(Subcommand, Debug)]
pub enum OracleKind {
    /// Fewest wire cuts over every partition of the gate graph
    MinCuts {
        #[command(flatten)]
        source: SourceOpts,
        /// Largest allowed subcircuit width
        #[arg(long)]
        cap: u32,
    },
    /// Highest modularity over every partition of the gate graph
    Modularity {
        #[command(flatten)]
        source: SourceOpts,
    },
    /// Count-balanced schedule with the fewest idle qubit slots
    Schedule {
        #[command(flatten)]
        pool: PoolOpts,
        #[arg(long, value_delimiter = ',', required = true)]
        widths: Vec<u32>,
    },
}

pub fn read_circuit(path: &Path) -> anyhow::Result<Circuit> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Circuit::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn generate(family: Family, opts: &GenOpts, seed: u64) -> crate::error::Result<Circuit> {
    use crate::error::Error;
    let qubits = || {
        opts.qubits
            .ok_or_else(|| Error::Generator("--qubits is required".into()))
    };
    match family {
        Family::Bv => {
            let n = qubits()?;
            let secret = parse_secret(&opts.secret, n)?;
            gen_bv(n, &secret)
        }
        Family::Adder => gen_adder(qubits()?),
        Family::Hwea => gen_hwea(qubits()?, opts.layers),
        Family::Supremacy => {
            let rows = opts.rows.ok_or_else(|| Error::Generator("--rows is required".into()))?;
            let cols = opts.cols.ok_or_else(|| Error::Generator("--cols is required".into()))?;
            gen_supremacy(rows, cols, opts.depth, seed)
        }
    }
}

fn write_output(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

/// Parses `args` (program name first) and runs the command in-process.
pub fn run_from<I, T>(args: I) -> anyhow::Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run(Cli::try_parse_from(args)?)
}

pub fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Gen(cmd) => cmd_gen(&cmd),
        Command::Cut(cmd) => cmd_cut(&cmd),
        Command::Bench(cmd) => cmd_bench(&cmd),
        Command::Oracle(cmd) => cmd_oracle(&cmd),
    }
}

pub fn cmd_gen(cmd: &GenCmd) -> anyhow::Result<()> {
    let circuit = generate(cmd.family, &cmd.opts, cmd.seed)?;
    write_output(cmd.out.as_deref(), &circuit.to_text())
}

/// Timing and spread of one multi-run cut search.
#[derive(Debug, Clone, Serialize)]
pub struct CutSummary {
    pub best_seed: u64,
    pub nc: NcStats,
    pub mean_search_seconds: f64,
    pub wall_seconds: f64,
    pub runs: Vec<RunRecord>,
}

/// Runs the search `runs` times and returns the best plan with its summary.
pub fn search(
    circuit: &Circuit,
    pool: &WorkerPool,
    seed: u64,
    runs: u64,
    jobs: usize,
) -> anyhow::Result<(MultiRun, f64)> {
    let jobs = if jobs == 0 { rayon::current_num_threads() } else { jobs };
    let start = Instant::now();
    let multi = run_many(circuit, pool, seed, runs as usize, jobs)?;
    Ok((multi, start.elapsed().as_secs_f64()))
}

pub fn cmd_cut(cmd: &CutCmd) -> anyhow::Result<()> {
    let circuit = cmd.source.load()?;
    let pool = cmd.pool.resolve()?;
    if let Some(prefix) = &cmd.dump_graph {
        dump_graph(&circuit, prefix)?;
    }
    let (multi, wall) = search(&circuit, &pool, cmd.seed, cmd.runs, cmd.jobs)?;
    let plan = &multi.best;
    if let Some(dir) = &cmd.export_subcircuits {
        export_subcircuits(&circuit, plan, dir)?;
    }
    let summary = CutSummary {
        best_seed: plan.seed,
        nc: multi.nc_stats(),
        mean_search_seconds: multi.mean_search_seconds(),
        wall_seconds: wall,
        runs: multi.runs.clone(),
    };
    if let Some(path) = &cmd.summary {
        let text = serde_json::to_string_pretty(&summary)? + "\n";
        fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    if !cmd.quiet {
        eprint!("{}", render_summary(plan, &summary));
    }
    write_output(cmd.out.as_deref(), &(plan.to_json() + "\n"))
}

pub fn render_summary(plan: &CutPlan, summary: &CutSummary) -> String {
    let mut s = String::new();
    let nc = summary.nc;
    s += &format!(
        "runs {}  nc min {}  median {}  max {}\n",
        summary.runs.len(),
        nc.min,
        nc.median,
        nc.max
    );
    s += &format!(
        "search {:.4} s per run, {:.3} s wall\n",
        summary.mean_search_seconds, summary.wall_seconds
    );
    s += &format!(
        "best seed {}: nc {} ru {}, {} subcircuits, widths {:?}\n",
        plan.seed,
        plan.objectives.nc,
        plan.objectives.ru,
        plan.subcircuits.len(),
        plan.widths()
    );
    let fmt = |u: Option<f64>| u.map_or_else(|| "-".to_string(), |v| format!("{v:.3}"));
    for w in &plan.utilization.workers {
        s += &format!(
            "  {:<8} cap {:>3}  subcircuits {:?}  utilization {}\n",
            w.worker,
            w.capacity,
            w.subcircuits,
            fmt(w.utilization)
        );
    }
    s += &format!("  system utilization {}\n", fmt(plan.utilization.system));
    s
}

fn dump_graph(circuit: &Circuit, prefix: &Path) -> anyhow::Result<()> {
    let graph = circuit_gate_graph(circuit);
    let json = prefix.with_extension("json");
    let dot = prefix.with_extension("dot");
    fs::write(&json, serde_json::to_string(&graph.to_json())? + "\n")
        .with_context(|| format!("writing {}", json.display()))?;
    fs::write(&dot, graph.to_dot()).with_context(|| format!("writing {}", dot.display()))?;
    Ok(())
}

fn export_subcircuits(circuit: &Circuit, plan: &CutPlan, dir: &Path) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for sub in &plan.subcircuits {
        let path = dir.join(format!("subcircuit_{}.txt", sub.id));
        fs::write(&path, sub.to_text(circuit)).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

/// One `[[case]]` of a bench suite. A case names a circuit file or a
/// generator, and optionally its own pool, runs and seed.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchCase {
    pub name: Option<String>,
    pub circuit: Option<PathBuf>,
    pub gen: Option<Family>,
    pub qubits: Option<usize>,
    pub secret: Option<String>,
    pub layers: Option<usize>,
    pub rows: Option<usize>,
    pub cols: Option<usize>,
    pub depth: Option<usize>,
    pub circuit_seed: Option<u64>,
    pub workers: Option<PathBuf>,
    pub capacities: Option<Vec<u32>>,
    pub runs: Option<u64>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchSuite {
    #[serde(default, rename = "case")]
    pub cases: Vec<BenchCase>,
}

impl BenchSuite {
    pub fn parse(text: &str) -> anyhow::Result<Self> {
        Ok(toml::from_str(text)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub name: String,
    pub qubits: usize,
    pub two_qubit_gates: usize,
    pub workers: String,
    pub runs: usize,
    pub nc_min: i64,
    pub nc_median: f64,
    pub nc_max: i64,
    pub best_ru: u64,
    pub mean_seconds: f64,
    pub system_utilization: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PlotRecord {
    pub case: String,
    #[serde(flatten)]
    pub run: RunRecord,
}

/// Resolved inputs of one bench case.
pub struct ResolvedCase {
    pub name: String,
    pub circuit: Circuit,
    pub pool: WorkerPool,
    pub runs: u64,
    pub seed: u64,
}

/// Expands a bench command into concrete cases, relative paths in a suite
/// resolving against the suite's directory.
pub fn bench_cases(cmd: &BenchCmd) -> anyhow::Result<Vec<ResolvedCase>> {
    let default_pool = || cmd.pool.resolve();
    let mut out = Vec::new();
    if let Some(family) = cmd.gen {
        let (from, to) = (cmd.from.unwrap_or(0), cmd.to.unwrap_or(0));
        if cmd.step == 0 {
            bail!("--step must be positive");
        }
        let pool = default_pool()?;
        for n in (from..=to).step_by(cmd.step) {
            let mut opts = cmd.opts.clone();
            opts.qubits = Some(n);
            let circuit = generate(family, &opts, 0)?;
            out.push(ResolvedCase {
                name: format!("{}-{n}", family_name(family)),
                circuit,
                pool: pool.clone(),
                runs: cmd.runs,
                seed: cmd.seed,
            });
        }
        return Ok(out);
    }
    let Some(path) = &cmd.suite else {
        bail!("bench needs --suite FILE or --gen FAMILY --from N --to M");
    };
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let suite = BenchSuite::parse(&text).with_context(|| format!("parsing {}", path.display()))?;
    let base = path.parent().unwrap_or(Path::new("."));
    for (i, case) in suite.cases.iter().enumerate() {
        let circuit = match (&case.circuit, case.gen) {
            (Some(file), _) => read_circuit(&base.join(file))?,
            (None, Some(family)) => {
                let d = GenOpts::default();
                let opts = GenOpts {
                    qubits: case.qubits,
                    secret: case.secret.clone().unwrap_or(d.secret),
                    layers: case.layers.unwrap_or(d.layers),
                    rows: case.rows,
                    cols: case.cols,
                    depth: case.depth.unwrap_or(d.depth),
                };
                generate(family, &opts, case.circuit_seed.unwrap_or(0)).with_context(|| format!("case {i}"))?
            }
            (None, None) => bail!("case {i}: needs `circuit` or `gen`"),
        };
        let pool = match (&case.capacities, &case.workers) {
            (Some(caps), _) => WorkerPool::from_capacities(caps)?,
            (None, Some(file)) => WorkerPool::load(&base.join(file))?,
            (None, None) => default_pool().with_context(|| format!("case {i}"))?,
        };
        let name = case.name.clone().unwrap_or_else(|| match case.gen {
            Some(f) => format!("{}-{}", family_name(f), circuit.num_qubits()),
            None => format!("case-{i}"),
        });
        out.push(ResolvedCase {
            name,
            circuit,
            pool,
            runs: case.runs.unwrap_or(cmd.runs).max(1),
            seed: case.seed.unwrap_or(cmd.seed),
        });
    }
    Ok(out)
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::Bv => "bv",
        Family::Adder => "adder",
        Family::Hwea => "hwea",
        Family::Supremacy => "supremacy",
    }
}

pub fn bench_row(case: &ResolvedCase, jobs: usize) -> anyhow::Result<(BenchRow, Vec<RunRecord>)> {
    let (multi, _) =
        search(&case.circuit, &case.pool, case.seed, case.runs, jobs).with_context(|| format!("case {}", case.name))?;
    let nc = multi.nc_stats();
    let caps: Vec<String> = case.pool.workers().iter().map(|w| w.capacity.to_string()).collect();
    let row = BenchRow {
        name: case.name.clone(),
        qubits: case.circuit.num_qubits(),
        two_qubit_gates: case.circuit.two_qubit_count(),
        workers: caps.join("/"),
        runs: multi.runs.len(),
        nc_min: nc.min,
        nc_median: nc.median,
        nc_max: nc.max,
        best_ru: multi.best.objectives.ru,
        mean_seconds: multi.mean_search_seconds(),
        system_utilization: multi.best.utilization.system,
    };
    Ok((row, multi.runs))
}

pub fn render_table(rows: &[BenchRow], format: TableFormat) -> anyhow::Result<String> {
    match format {
        TableFormat::Json => Ok(serde_json::to_string_pretty(rows)? + "\n"),
        TableFormat::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
            w.write_record([
                "name",
                "qubits",
                "two_qubit_gates",
                "workers",
                "runs",
                "nc_min",
                "nc_median",
                "nc_max",
                "best_ru",
                "mean_seconds",
                "system_utilization",
            ])?;
            for row in rows {
                w.serialize(row)?;
            }
            Ok(String::from_utf8(w.into_inner()?)?)
        }
    }
}

pub fn cmd_bench(cmd: &BenchCmd) -> anyhow::Result<()> {
    let cases = bench_cases(cmd)?;
    let mut rows = Vec::with_capacity(cases.len());
    let mut plot = Vec::new();
    for case in &cases {
        let (row, runs) = bench_row(case, cmd.jobs)?;
        rows.push(row);
        plot.extend(runs.into_iter().map(|run| PlotRecord {
            case: case.name.clone(),
            run,
        }));
    }
    if let Some(path) = &cmd.plot_data {
        fs::write(path, serde_json::to_string_pretty(&plot)? + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
    }
    write_output(cmd.out.as_deref(), &render_table(&rows, cmd.format)?)
}

pub fn cmd_oracle(cmd: &OracleCmd) -> anyhow::Result<()> {
    let value = match &cmd.which {
        OracleKind::MinCuts { source, cap } => {
            let graph = circuit_gate_graph(&source.load()?);
            let r = brute_min_cuts(&graph, *cap)?;
            serde_json::json!({
                "min_cuts": r.optimum,
                "labels": r.witness.labels(),
                "vertices": r.size,
            })
        }
        OracleKind::Modularity { source } => {
            let graph = circuit_gate_graph(&source.load()?);
            let r = brute_max_modularity(&graph)?;
            serde_json::json!({
                "max_modularity": r.optimum,
                "labels": r.witness.labels(),
                "vertices": r.size,
            })
        }
        OracleKind::Schedule { pool, widths } => {
            let pool = pool.resolve()?;
            let r = brute_balanced_schedule(&pool, widths)?;
            serde_json::json!({
                "ru": r.optimum,
                "schedule": r.witness,
                "partitions": r.size,
            })
        }
    };
    write_output(None, &(serde_json::to_string_pretty(&value)? + "\n"))
}

/// Parses the process arguments, runs the command and maps failures to a
/// nonzero exit status.
pub fn main() -> std::process::ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => std::process::ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::ExitCode::FAILURE
        }
    }
}
