use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use monoset::approx::{approx_report, ApproxMode, Bipartition};
use monoset::casestudy::{campaign, CampaignConfig, Strategy, MAX_SCENARIOS, MAX_SITES};
use monoset::demos::{default_graph, run_demo, DEMO_NAMES};
use monoset::error::Error;
use monoset::graphs::{sign_split, signed_mincut_oracle, system_dominating, system_st_connected, Graph};
use monoset::rational::{parse_q, Q};
use monoset::setsys::{apply_pipeline, parse_pipeline, SetSystem, Subset};
use monoset::solver::{build_bimonotone_model, build_upper_model, solve, BipModel, ModelDoc, SolveLimits, SolveReport};

#[derive(Parser)]
#[command(
    name = "monoset",
    version,
    about = "Monotone set systems, approximations and exact 0-1 solving"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply an operator pipeline, left to right, and print the result.
    Ops {
        system: PathBuf,
        /// Whitespace-separated operators: up down min max comp ecomp cut cocut flip:I
        pipeline: String,
        /// Write the resulting system here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Inner and outer approximations of a system.
    Approx {
        system: PathBuf,
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Part I of the bipartition as 1-based labels, e.g. 1,3 (bimonotone mode only).
        #[arg(long)]
        split: Option<String>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute a structural correspondence and check it against enumeration.
    Demo {
        name: String,
        /// Graph JSON; defaults to the triangle.
        graph: Option<PathBuf>,
    },
    /// Solve a model file or a built-in graph problem.
    Solve {
        /// Model JSON.
        model: Option<PathBuf>,
        #[arg(long, value_enum, conflicts_with = "model", requires = "graph")]
        problem: Option<Problem>,
        /// Graph JSON for --problem.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        node_limit: Option<u64>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the site-selection campaign over a parameter grid.
    Casestudy {
        /// Site counts, comma separated.
        #[arg(long, default_value = "8")]
        n: String,
        /// Edge densities in (0, 1], comma separated.
        #[arg(long, default_value = "0.3")]
        density: String,
        /// Violation levels in [0, 1), comma separated.
        #[arg(long, default_value = "0.1")]
        eps: String,
        /// Scenario counts, comma separated.
        #[arg(long, default_value = "20")]
        k: String,
        /// Seeds, comma separated.
        #[arg(long, default_value = "1")]
        seeds: String,
        /// Strategies among NoCut, ClqCut, SatCut, AllCut, comma separated.
        #[arg(long, default_value = "NoCut,ClqCut,SatCut,AllCut")]
        strategies: String,
        #[arg(long)]
        node_limit: Option<u64>,
        /// Write the CSV here and print a summary table; without it the CSV goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Upper,
    Lower,
    Interval,
    Bimonotone,
}

#[derive(Clone, Copy, ValueEnum)]
enum Problem {
    /// Minimum vertex-weight dominating set.
    Dominating,
    /// Minimum edge-weight set connecting vertex 1 to vertex n.
    StConnected,
    /// Minimum signed-weight edge cut.
    SignedMincut,
}

enum CliError {
    Usage(String),
    Domain(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Domain(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::Domain(format!("cannot write {}: {e}", path.display())))
}

fn read_system(path: &Path) -> CliResult<SetSystem> {
    serde_json::from_str(&read(path)?).map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> CliResult<Graph> {
    Graph::from_json(&read(path)?).map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))
}

/// Prints `text` or writes it to `out`, printing `summary` instead.
fn emit(text: &str, out: Option<&Path>, summary: impl FnOnce() -> String) -> CliResult<()> {
    match out {
        Some(p) => {
            write(p, text)?;
            println!("{}", summary());
        }
        None => println!("{text}"),
    }
    Ok(())
}

/// Part `I` of a split as 1-based labels, rejecting duplicates and
/// out-of-range labels.
fn parse_split(text: &str, s: &SetSystem) -> CliResult<Bipartition> {
    let mut part_i = Subset::EMPTY;
    for t in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let label: usize = t.parse().or_else(|_| usage(format!("split: {t:?} is not a label")))?;
        let e = Subset::from_one_based(&[label], s.ground()).or_else(|e| usage(format!("split: {e}")))?;
        if part_i.intersects(e) {
            return usage(format!("split: label {label} repeated"));
        }
        part_i = part_i | e;
    }
    Bipartition::from_i(s.ground(), part_i).or_else(|e| usage(e.to_string()))
}

fn cmd_ops(system: &Path, pipeline: &str, out: Option<&Path>) -> CliResult<()> {
    let s = read_system(system)?;
    let ops = parse_pipeline(pipeline, s.ground()).or_else(|e| usage(e.to_string()))?;
    let s = apply_pipeline(&s, &ops)?;
    emit(&s.to_json(), out, || format!("{} members over n = {}", s.len(), s.n()))
}

fn cmd_approx(system: &Path, mode: ModeArg, split: Option<&str>, out: Option<&Path>) -> CliResult<()> {
    if split.is_some() && !matches!(mode, ModeArg::Bimonotone) {
        return usage("--split applies to --mode bimonotone only");
    }
    let s = read_system(system)?;
    let mode = match mode {
        ModeArg::Upper => ApproxMode::Upper,
        ModeArg::Lower => ApproxMode::Lower,
        ModeArg::Interval => ApproxMode::Interval,
        ModeArg::Bimonotone => match split {
            Some(text) => ApproxMode::Bimonotone(parse_split(text, &s)?),
            None => return usage("--mode bimonotone needs --split"),
        },
    };
    let report = approx_report(&s, mode)?;
    emit(&report.to_json(), out, || match &report.inner {
        Some(inner) => format!(
            "{}: inner {} members, outer {} members, exact inner {}, exact outer {}",
            report.mode,
            inner.len(),
            report.outer.len(),
            report.exact_inner == Some(true),
            report.exact_outer
        ),
        None => format!(
            "{}: outer {} members, exact outer {}",
            report.mode,
            report.outer.len(),
            report.exact_outer
        ),
    })
}

fn cmd_demo(name: &str, graph: Option<&Path>) -> CliResult<()> {
    if !DEMO_NAMES.contains(&name) {
        return usage(format!(
            "unknown demo {name:?}; expected one of {}",
            DEMO_NAMES.join(", ")
        ));
    }
    let g = match graph {
        Some(p) => read_graph(p)?,
        None => default_graph(name),
    };
    let report = run_demo(name, &g)?;
    print!("{report}");
    if report.all_equal() {
        Ok(())
    } else {
        Err(CliError::Domain(format!("demo {name} found a mismatch")))
    }
}

fn problem_model(problem: Problem, g: &Graph) -> CliResult<BipModel> {
    Ok(match problem {
        Problem::Dominating => build_upper_model(&system_dominating(g)?, &g.vertex_weights())?,
        Problem::StConnected => {
            if g.n() < 2 {
                return Err(CliError::Domain("st-connected needs at least two vertices".into()));
            }
            build_upper_model(&system_st_connected(g, 0, g.n() - 1)?, &g.weights())?
        }
        Problem::SignedMincut => build_bimonotone_model(&signed_mincut_oracle(g, sign_split(g)?)?, &g.weights())?,
    })
}

fn cmd_solve(
    model: Option<&Path>,
    problem: Option<Problem>,
    graph: Option<&Path>,
    node_limit: Option<u64>,
    out: Option<&Path>,
) -> CliResult<()> {
    let m = match (model, problem) {
        (Some(p), None) => {
            let doc: ModelDoc =
                serde_json::from_str(&read(p)?).map_err(|e| CliError::Domain(format!("{}: {e}", p.display())))?;
            doc.to_model()?
        }
        (None, Some(problem)) => {
            let Some(gp) = graph else {
                return usage("--problem needs --graph");
            };
            problem_model(problem, &read_graph(gp)?)?
        }
        _ => return usage("give either a model file or --problem with --graph"),
    };
    let limits = SolveLimits {
        node_limit,
        ..SolveLimits::default()
    };
    let report: SolveReport = solve(&m, limits)?;
    emit(&report.to_json(), out, || {
        format!(
            "status {:?}, value {}, {} nodes, {} cuts",
            report.status, report.objective_value, report.nodes, report.cuts_added
        )
        .to_lowercase()
    })
}

fn parse_list<T>(text: &str, what: &str, parse: impl Fn(&str) -> Option<T>) -> CliResult<Vec<T>> {
    let items: Vec<&str> = text.split(',').map(str::trim).filter(|t| !t.is_empty()).collect();
    if items.is_empty() {
        return usage(format!("--{what} is empty"));
    }
    items
        .into_iter()
        .map(|t| parse(t).map_or_else(|| usage(format!("--{what}: invalid value {t:?}")), Ok))
        .collect()
}

struct CaseArgs<'a> {
    n: &'a str,
    density: &'a str,
    eps: &'a str,
    k: &'a str,
    seeds: &'a str,
    strategies: &'a str,
    node_limit: Option<u64>,
    out: Option<&'a Path>,
}

fn cmd_casestudy(a: CaseArgs) -> CliResult<()> {
    let ns = parse_list(a.n, "n", |t| {
        t.parse::<usize>().ok().filter(|&n| (2..=MAX_SITES).contains(&n))
    })?;
    let densities = parse_list(a.density, "density", |t| {
        t.parse::<f64>().ok().filter(|&d| d > 0.0 && d <= 1.0)
    })?;
    let epss = parse_list(a.eps, "eps", |t| {
        parse_q(t)
            .ok()
            .filter(|&e| e >= Q::from_integer(0) && e < Q::from_integer(1))
    })?;
    let ks = parse_list(a.k, "k", |t| {
        t.parse::<usize>().ok().filter(|&k| (1..=MAX_SCENARIOS).contains(&k))
    })?;
    let seeds = parse_list(a.seeds, "seeds", |t| t.parse::<u64>().ok())?;
    let strategies = parse_list(a.strategies, "strategies", |t| Strategy::parse(t).ok())?;
    let mut configs = Vec::new();
    for &n in &ns {
        for &density in &densities {
            for &epsilon in &epss {
                for &k in &ks {
                    configs.push(CampaignConfig { n, density, epsilon, k });
                }
            }
        }
    }
    let limits = SolveLimits {
        node_limit: a.node_limit,
        ..SolveLimits::default()
    };
    let report = campaign(&configs, &seeds, &strategies, limits)?;
    let csv = report.to_csv()?;
    match a.out {
        Some(p) => {
            write(p, &csv)?;
            println!(
                "{:<28} {:>5} {:<7} {:<11} {:>7} {:>8} {:>6} {:>8} {:<6}",
                "config", "seed", "strategy", "status", "value", "nodes", "cuts", "millis", "agrees"
            );
            for r in &report.rows {
                println!(
                    "{:<28} {:>5} {:<7} {:<11} {:>7} {:>8} {:>6} {:>8} {:<6}",
                    r.config, r.seed, r.strategy, r.status, r.value, r.nodes, r.cuts, r.millis, r.agrees
                );
            }
            println!(
                "{} rows written to {}; millis are local wall-clock times and are not comparable to published runtimes",
                report.rows.len(),
                p.display()
            );
        }
        None => print!("{csv}"),
    }
    if report.all_agree() {
        Ok(())
    } else {
        Err(CliError::Domain(format!(
            "strategies disagree on {} instance(s)",
            report.disagreements.len()
        )))
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Ops { system, pipeline, out } => cmd_ops(&system, &pipeline, out.as_deref()),
        Command::Approx {
            system,
            mode,
            split,
            out,
        } => cmd_approx(&system, mode, split.as_deref(), out.as_deref()),
        Command::Demo { name, graph } => cmd_demo(&name, graph.as_deref()),
        Command::Solve {
            model,
            problem,
            graph,
            node_limit,
            out,
        } => cmd_solve(model.as_deref(), problem, graph.as_deref(), node_limit, out.as_deref()),
        Command::Casestudy {
            n,
            density,
            eps,
            k,
            seeds,
            strategies,
            node_limit,
            out,
        } => cmd_casestudy(CaseArgs {
            n: &n,
            density: &density,
            eps: &eps,
            k: &k,
            seeds: &seeds,
            strategies: &strategies,
            node_limit,
            out: out.as_deref(),
        }),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
