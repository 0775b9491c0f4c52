//! `domkernel`: kernelize, verify, approximate, or build representative
//! tables from the command line.
//!
//! Exit codes: 0 kernel emitted (or command succeeded), 1 no-instance
//! certificate, 2 input error, 3 internal invariant failure.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, ValueEnum};

use domkernel::approx::{approx_cds, approx_colored_ds};
use domkernel::boundaried::{enumerate_representatives, RepresentativeTable};
use domkernel::graph::{parse_gr, write_gr};
use domkernel::reducer::{kernelize, IrrelevantMode, Kernel, KernelConfig};
use domkernel::solvers::{is_yes_instance, ColoredInstance};
use domkernel::treedec::{heuristic_decomposition, parse_td, Heuristic, TreeDecomposition};
use domkernel::{Error, Graph, Problem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Kernelize,
    Verify,
    Approx,
    Tables,
}

#[derive(Debug, Parser)]
#[command(name = "domkernel", version, about = "Linear kernels for (connected) dominating set")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Mode::Kernelize)]
    mode: Mode,
    #[arg(long, default_value = "ds", value_parser = parse_problem)]
    problem: Problem,
    /// Order of the excluded topological minor.
    #[arg(long, default_value_t = 5)]
    h: usize,
    /// Solution size parameter.
    #[arg(short = 'k', allow_hyphen_values = true)]
    k: Option<i64>,
    /// Input graph in `.gr` format.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Tree decomposition of the input graph in `.td` format.
    #[arg(long)]
    td: Option<PathBuf>,
    /// Representative table file; built in memory when absent.
    #[arg(long)]
    tables: Option<PathBuf>,
    /// Output prefix (kernelize), trace file (approx) or table file (tables).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Kernel graph to check in verify mode.
    #[arg(long)]
    kernel: Option<PathBuf>,
    /// Parameter of the kernel given with `--kernel`.
    #[arg(long, allow_hyphen_values = true)]
    k_prime: Option<i64>,
    /// Boundary size for built tables.
    #[arg(long, default_value_t = 2)]
    t: usize,
    /// Largest representative order for built tables.
    #[arg(long, default_value_t = 5)]
    size_limit: usize,
    /// Recorded in the stats; the pipeline itself is deterministic.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest input order accepted by verify mode.
    #[arg(long, default_value_t = 24)]
    guard_n: usize,
    /// Largest apex set enumerated by the irrelevant-vertex rule.
    #[arg(long)]
    apex_guard: Option<usize>,
    /// Delete all irrelevant vertices found in one sweep at once.
    #[arg(long)]
    batch_irrelevant: bool,
}

fn parse_problem(s: &str) -> Result<Problem, Error> {
    s.parse()
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Invariant(_) => Failure::Internal(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

type Outcome = Result<ExitCode, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
}

fn required<T: Copy>(value: Option<T>, flag: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::Input(format!("missing {flag}")))
}

fn load_graph(cli: &Cli) -> Result<Graph, Failure> {
    let path = cli.graph.as_deref().ok_or_else(|| Failure::Input("missing --graph".into()))?;
    Ok(parse_gr(&read(path)?)?)
}

fn load_td(cli: &Cli, g: &Graph) -> Result<Option<TreeDecomposition>, Failure> {
    match &cli.td {
        Some(path) => Ok(Some(parse_td(&read(path)?, Arc::new(g.clone()))?)),
        None => Ok(None),
    }
}

fn load_table(cli: &Cli) -> Result<RepresentativeTable, Failure> {
    let table = match &cli.tables {
        Some(path) => RepresentativeTable::from_text(&read(path)?)?,
        None => enumerate_representatives(cli.t, cli.size_limit, cli.problem)?,
    };
    if table.problem() != cli.problem {
        return Err(Failure::Input(format!("table is for {} but --problem is {}", table.problem(), cli.problem)));
    }
    Ok(table)
}

fn kernel_config(cli: &Cli, td: Option<TreeDecomposition>) -> KernelConfig {
    let mut cfg = KernelConfig::new(cli.h);
    cfg.td = td;
    if let Some(guard) = cli.apex_guard {
        cfg.reduce.apex_guard = guard;
    }
    if cli.batch_irrelevant {
        cfg.reduce.irrelevant = IrrelevantMode::Batch;
    }
    cfg
}

fn default_prefix(graph: &Path) -> PathBuf {
    graph.with_extension("kernel")
}

fn run_kernelize(cli: &Cli) -> Outcome {
    let start = Instant::now();
    let g = load_graph(cli)?;
    let k = required(cli.k, "-k")?;
    let td = load_td(cli, &g)?;
    let table = load_table(cli)?;
    let kernel = kernelize(&g, k, &table, &kernel_config(cli, td))?;
    let prefix = match &cli.out {
        Some(p) => p.clone(),
        None => default_prefix(cli.graph.as_deref().expect("graph was loaded")),
    };
    let with_ext = |ext: &str| {
        let mut s = prefix.clone().into_os_string();
        s.push(ext);
        PathBuf::from(s)
    };
    write(&with_ext(".gr"), &write_gr(&kernel.graph))?;
    write(&with_ext(".trace"), &kernel.trace_text())?;
    let mut stats = kernel.stats_text();
    writeln!(stats, "seed={}", cli.seed).unwrap();
    write(&with_ext(".stats"), &stats)?;
    if kernel.stats.refusals > 0 {
        eprintln!("warning: {} replacements refused", kernel.stats.refusals);
    }
    eprintln!("runtime_ms={}", start.elapsed().as_millis());
    Ok(report(&kernel))
}

fn report(kernel: &Kernel) -> ExitCode {
    match &kernel.no_reason {
        Some(reason) => {
            println!("no-instance: {reason}");
            ExitCode::from(1)
        }
        None => {
            println!("kernel n={} m={} k={}", kernel.graph.n(), kernel.graph.m(), kernel.k);
            ExitCode::SUCCESS
        }
    }
}

fn check_guard(cli: &Cli, g: &Graph) -> Result<(), Failure> {
    if g.n() > cli.guard_n {
        return Err(Error::Capacity { what: "graph order for verification", actual: g.n(), limit: cli.guard_n }.into());
    }
    Ok(())
}

fn verdict(yes: bool) -> &'static str {
    if yes {
        "yes"
    } else {
        "no"
    }
}

fn run_verify(cli: &Cli) -> Outcome {
    let g = load_graph(cli)?;
    check_guard(cli, &g)?;
    let problem = cli.problem;
    let mut failures = 0;
    let mut checked = 0;
    if let Some(path) = &cli.kernel {
        let k = required(cli.k, "-k")?;
        let k_prime = required(cli.k_prime, "--k-prime")?;
        let kernel = parse_gr(&read(path)?)?;
        check_guard(cli, &kernel)?;
        let (a, b) = (is_yes_instance(&g, k, problem)?, is_yes_instance(&kernel, k_prime, problem)?);
        checked += 1;
        failures += usize::from(a != b);
        println!("k={k} {} (input {}, kernel {})", if a == b { "PASS" } else { "FAIL" }, verdict(a), verdict(b));
    } else {
        let td = load_td(cli, &g)?;
        let table = load_table(cli)?;
        let cfg = kernel_config(cli, td);
        let ks: Vec<i64> = match cli.k {
            Some(k) => vec![k],
            None => (0..=g.n() as i64).collect(),
        };
        for k in ks {
            let kernel = kernelize(&g, k, &table, &cfg)?;
            let a = is_yes_instance(&g, k, problem)?;
            let b = is_yes_instance(&kernel.graph, kernel.k, problem)?;
            checked += 1;
            failures += usize::from(a != b);
            println!(
                "k={k} {} (input {}, kernel n={} k'={} {})",
                if a == b { "PASS" } else { "FAIL" },
                verdict(a),
                kernel.graph.n(),
                kernel.k,
                verdict(b)
            );
        }
    }
    println!("verify: {}/{checked} PASS", checked - failures);
    if failures == 0 {
        Ok(ExitCode::SUCCESS)
    } else {
        Err(Failure::Internal(format!("{failures} parameter values disagree")))
    }
}

fn run_approx(cli: &Cli) -> Outcome {
    let g = load_graph(cli)?;
    let td = match load_td(cli, &g)? {
        Some(td) => td,
        None => heuristic_decomposition(&g, Heuristic::MinFill),
    };
    let h = cli.h.max(td.adhesion()).max(1);
    let res = match cli.problem {
        Problem::Ds => approx_colored_ds(&ColoredInstance::trivial(g.clone()), &td, h)?,
        Problem::Cds => approx_cds(&g, &td, h)?,
    };
    println!("approx problem={} h={h} size={} certified={}", cli.problem, res.solution.len(), res.factor_certified());
    let ids: Vec<String> = res.solution.iter().map(|v| (v + 1).to_string()).collect();
    println!("solution {}", ids.join(" "));
    if let Some(path) = &cli.out {
        write(path, &res.trace_lines())?;
    }
    Ok(ExitCode::SUCCESS)
}

fn run_tables(cli: &Cli) -> Outcome {
    let table = enumerate_representatives(cli.t, cli.size_limit, cli.problem)?;
    let text = table.to_text();
    let summary = format!(
        "tables problem={} t={} size_limit={} classes={} xi={}",
        cli.problem,
        cli.t,
        cli.size_limit,
        table.len(),
        table.xi()
    );
    match &cli.out {
        Some(path) => {
            write(path, &text)?;
            println!("{summary}");
        }
        None => {
            print!("{text}");
            eprintln!("{summary}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.mode {
        Mode::Kernelize => run_kernelize(&cli),
        Mode::Verify => run_verify(&cli),
        Mode::Approx => run_approx(&cli),
        Mode::Tables => run_tables(&cli),
    };
    match outcome {
        Ok(code) => code,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}
