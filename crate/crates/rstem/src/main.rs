//! Command-line front end: generators, statistics, local search,
//! exhaustive oracles, and end-to-end verification with deterministic,
//! scriptable output.
//!
//! Machine-readable results go to stdout and are byte-stable for fixed
//! inputs and seeds; human diagnostics go to stderr. Exit codes:
//! 0 success, 1 invalid input, 2 budget exceeded, 3 counterexample
//! candidate found.

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use rstem::generate;
use rstem::graph::{format_edge_list, is_connected, is_k1t_free, parse_edge_list, Graph};
use rstem::optimize::{initial_tree, optimize, optimize_all_roots, Strategy};
use rstem::oracle::{min_rstem_leaves, spanning_tree_count, EnumerationBudget, MinStatus};
use rstem::stats::{alpha, sigma, NodeBudget};
use rstem::theorem::{
    scan, verdict_counts, verify_goal, Budgets, Goal, ScanSource, TheoremReport, Verdict,
    REPORT_CSV_HEADER,
};
use rstem::tree::format_tree_list;

#[derive(Parser)]
#[command(
    name = "rstem",
    version,
    about = "Spanning trees with few reducible-stem leaves: generators, \
             statistics, local search, exhaustive oracles, and verification."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph and emit it as an edge list.
    Gen {
        #[command(subcommand)]
        family: GenCommand,
    },
    /// Order, size, connectivity, star-freeness, and degree-sum statistics.
    Stats(StatsArgs),
    /// Local search for a spanning tree with few reducible-stem leaves.
    Optimize(OptimizeArgs),
    /// Exhaustive enumeration: tree counts and exact stem-leaf minima.
    Oracle(OracleArgs),
    /// Check one sufficient condition end to end on one graph.
    Verify(VerifyArgs),
    /// Run the verification pipeline over many seeded instances.
    Scan(ScanArgs),
}

#[derive(Subcommand)]
enum GenCommand {
    /// Three-anchor sharpness family on 6m+4 vertices.
    #[command(alias = "H")]
    H {
        /// Order of each of the six cliques.
        #[arg(long)]
        m: usize,
        /// Output file; stdout when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Ring sharpness family with 2l+2 anchored clique pairs.
    #[command(alias = "G")]
    G {
        /// Half the anchor count, minus one: the family uses k = 2l+1.
        #[arg(long)]
        l: usize,
        /// Order of each clique.
        #[arg(long)]
        m: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Connected Erdős–Rényi sample by rejection.
    Random {
        #[arg(long)]
        n: usize,
        /// Edge probability.
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Uniform random labeled tree.
    Tree {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Line graph of a host graph read from a file or stdin.
    Line {
        /// Host edge-list file; stdin when omitted.
        input: Option<PathBuf>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct StatsArgs {
    /// Graph edge-list file; stdin when omitted.
    input: Option<PathBuf>,
    /// Star size for the induced-star freeness check.
    #[arg(long, default_value_t = 4)]
    t: usize,
    /// Arity of the degree-sum statistic; skipped when absent.
    #[arg(long)]
    p: Option<usize>,
    /// Distance floor for scattered sets.
    #[arg(long = "m-dist", default_value_t = 2)]
    m_dist: usize,
    /// Branch-node budget for each exact search.
    #[arg(long, default_value_t = 10_000_000)]
    nodes: u64,
}

#[derive(Args)]
struct OptimizeArgs {
    /// Graph edge-list file; stdin when omitted.
    input: Option<PathBuf>,
    /// Starting-tree strategy: bfs or dfs.
    #[arg(long, default_value = "bfs")]
    strategy: String,
    /// Root of the starting tree.
    #[arg(long, default_value_t = 0)]
    root: usize,
    /// Try this many (strategy, root) starts and keep the best;
    /// overrides --strategy and --root.
    #[arg(long)]
    restarts: Option<usize>,
    /// Accepted-move cap.
    #[arg(long = "max-steps", default_value_t = 10_000)]
    max_steps: usize,
    /// Write the final tree here instead of stdout.
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Write the fixed-point check table (CSV) here.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    /// Graph edge-list file; stdin when omitted.
    input: Option<PathBuf>,
    /// Enumeration cap.
    #[arg(long = "max-trees", default_value_t = 1_000_000)]
    max_trees: u64,
    /// Wall-clock cap for the enumeration.
    #[arg(long, default_value_t = 60.0)]
    seconds: f64,
    /// Stop once the minimum is proven at most this.
    #[arg(long = "stop-at")]
    stop_at: Option<usize>,
    /// Print only the spanning-tree count.
    #[arg(long = "count-only")]
    count_only: bool,
    /// Write the best tree found here.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct BudgetArgs {
    /// Branch-node budget for degree-sum computations.
    #[arg(long, default_value_t = 10_000_000)]
    nodes: u64,
    /// Enumeration cap for the oracle fallback.
    #[arg(long = "max-trees", default_value_t = 1_000_000)]
    max_trees: u64,
    /// Wall-clock cap for the oracle fallback.
    #[arg(long, default_value_t = 60.0)]
    seconds: f64,
    /// Optimizer step cap per restart.
    #[arg(long = "max-steps", default_value_t = 10_000)]
    max_steps: usize,
    /// Largest order on which the oracle fallback runs.
    #[arg(long = "oracle-limit", default_value_t = 12)]
    oracle_limit: usize,
}

impl BudgetArgs {
    fn to_budgets(&self) -> Budgets {
        Budgets {
            nodes: self.nodes,
            trees: self.max_trees,
            seconds: self.seconds,
            max_steps: self.max_steps,
            oracle_n_limit: self.oracle_limit,
            restarts: None,
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// Graph edge-list file; stdin when omitted.
    input: Option<PathBuf>,
    /// Condition to check: 1 wants a path stem under sigma_7 >= n,
    /// 2 wants at most k stem leaves under sigma_{2k+3} >= n-k+1.
    #[arg(long)]
    theorem: u8,
    /// Stem-leaf bound; required with --theorem 2.
    #[arg(long)]
    k: Option<usize>,
    #[command(flatten)]
    budgets: BudgetArgs,
}

#[derive(Args)]
struct ScanArgs {
    /// Instance distribution: random, line-tree, or line-random.
    #[arg(long)]
    source: String,
    /// Number of instances.
    #[arg(long)]
    trials: usize,
    /// Master seed; per-instance seeds derive from it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Order of random instances.
    #[arg(long)]
    n: Option<usize>,
    /// Edge probability for the random sources.
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    /// Host order for the line-graph sources.
    #[arg(long = "host-n")]
    host_n: Option<usize>,
    /// Condition to check, as in verify.
    #[arg(long, default_value_t = 1)]
    theorem: u8,
    /// Stem-leaf bound; required with --theorem 2.
    #[arg(long)]
    k: Option<usize>,
    /// Worker threads across instances.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Write counterexample candidates here as edge lists.
    #[arg(long = "dump-dir")]
    dump_dir: Option<PathBuf>,
    #[command(flatten)]
    budgets: BudgetArgs,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Gen { family } => cmd_gen(family),
        Command::Stats(args) => cmd_stats(args),
        Command::Optimize(args) => cmd_optimize(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Scan(args) => cmd_scan(args),
    }
}

fn read_graph(input: Option<&PathBuf>) -> Result<Graph> {
    let text = match input {
        Some(path) if path.as_os_str() != "-" => std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?,
        _ => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .context("reading stdin")?;
            buf
        }
    };
    Ok(parse_edge_list(&text)?)
}

fn write_output(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)
            .with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn cmd_gen(family: GenCommand) -> Result<u8> {
    let (graph, comment, out) = match family {
        GenCommand::H { m, out } => {
            if m < 1 {
                bail!("--m must be at least 1");
            }
            (generate::family_h(m), format!("gen h m={m}"), out)
        }
        GenCommand::G { l, m, out } => {
            if l < 1 || m < 1 {
                bail!("--l and --m must be at least 1");
            }
            (generate::family_g(l, m), format!("gen g l={l} m={m}"), out)
        }
        GenCommand::Random { n, p, seed, out } => {
            if n < 1 {
                bail!("--n must be at least 1");
            }
            if !(0.0..=1.0).contains(&p) {
                bail!("--p must lie in [0, 1]");
            }
            let g = generate::random_connected(n, p, seed)?;
            (g, format!("gen random n={n} p={p} seed={seed}"), out)
        }
        GenCommand::Tree { n, seed, out } => {
            if n < 1 {
                bail!("--n must be at least 1");
            }
            let g = generate::random_tree(n, seed);
            (g, format!("gen tree n={n} seed={seed}"), out)
        }
        GenCommand::Line { input, out } => {
            let host = read_graph(input.as_ref())?;
            let g = generate::line_graph(&host)?;
            let comment = format!("gen line host_n={} host_m={}", host.n(), host.edge_count());
            (g, comment, out)
        }
    };
    write_output(out.as_deref(), &format_edge_list(&graph, &[comment]))?;
    Ok(0)
}

fn cmd_stats(args: StatsArgs) -> Result<u8> {
    if args.t < 3 {
        bail!("--t must be at least 3");
    }
    if args.m_dist < 2 {
        bail!("--m-dist must be at least 2");
    }
    if let Some(p) = args.p {
        if p < 2 {
            bail!("--p must be at least 2");
        }
    }
    let g = read_graph(args.input.as_ref())?;
    let mut lines = vec![
        format!("n={}", g.n()),
        format!("m={}", g.edge_count()),
        format!("connected={}", is_connected(&g)),
        format!("k1{}free={}", args.t, is_k1t_free(&g, args.t)),
    ];
    let mut truncated = false;

    let mut budget = NodeBudget::new(args.nodes);
    match alpha(&g, args.m_dist, &mut budget) {
        Ok(set) => lines.push(format!("alpha={}", set.vertices.len())),
        Err(overrun) => {
            lines.push(format!("alpha_partial={}", overrun.partial.vertices.len()));
            truncated = true;
        }
    }
    if let Some(p) = args.p {
        let mut budget = NodeBudget::new(args.nodes);
        match sigma(&g, p, args.m_dist, &mut budget) {
            Ok(result) => lines.push(format!("sigma={}", result.value)),
            Err(overrun) => {
                lines.push(format!("sigma_partial={}", overrun.partial.value));
                truncated = true;
            }
        }
    }
    for line in &lines {
        println!("{line}");
    }
    if truncated {
        eprintln!("node budget of {} exhausted; reported values are partial", args.nodes);
        return Ok(2);
    }
    Ok(0)
}

fn parse_strategy(s: &str) -> Result<Strategy> {
    match s {
        "bfs" => Ok(Strategy::Bfs),
        "dfs" => Ok(Strategy::Dfs),
        other => bail!("unknown strategy '{other}' (expected bfs or dfs)"),
    }
}

fn cmd_optimize(args: OptimizeArgs) -> Result<u8> {
    let g = read_graph(args.input.as_ref())?;
    let (outcome, header) = match args.restarts {
        Some(restarts) => {
            if restarts < 1 {
                bail!("--restarts must be at least 1");
            }
            let search = optimize_all_roots(&g, args.max_steps, Some(restarts))?;
            let header = format!(
                "optimize strategy={} root={} restarts={} steps={} converged={}",
                search.strategy,
                search.root,
                search.restarts,
                search.outcome.steps,
                search.outcome.converged
            );
            (search.outcome, header)
        }
        None => {
            let strategy = parse_strategy(&args.strategy)?;
            if args.root >= g.n() {
                bail!("--root {} out of range for n={}", args.root, g.n());
            }
            let t0 = initial_tree(&g, strategy, args.root)?;
            let outcome = optimize(&g, t0, args.max_steps);
            let header = format!(
                "optimize strategy={strategy} root={} steps={} converged={}",
                args.root, outcome.steps, outcome.converged
            );
            (outcome, header)
        }
    };
    eprintln!(
        "fixed point: {} after {} steps (converged={})",
        outcome.objective, outcome.steps, outcome.converged
    );
    let comments = [header, format!("objective {}", outcome.objective)];
    write_output(args.out.as_deref(), &format_tree_list(&outcome.tree, &comments))?;
    if let Some(report) = &args.report {
        std::fs::write(report, outcome.report.to_csv())
            .with_context(|| format!("writing {}", report.display()))?;
    }
    Ok(if outcome.converged { 0 } else { 2 })
}

fn status_name(status: MinStatus) -> &'static str {
    match status {
        MinStatus::Exact => "exact",
        MinStatus::ReachedTarget => "reached_target",
        MinStatus::Truncated => "truncated",
    }
}

fn cmd_oracle(args: OracleArgs) -> Result<u8> {
    let g = read_graph(args.input.as_ref())?;
    println!("count={}", spanning_tree_count(&g));
    if args.count_only {
        return Ok(0);
    }
    let budget = EnumerationBudget {
        max_trees: args.max_trees,
        seconds: args.seconds,
    };
    let search = min_rstem_leaves(&g, budget, args.stop_at)?;
    println!("min_c0={}", search.min);
    println!("status={}", status_name(search.status));
    println!("trees_seen={}", search.trees_seen);
    if let Some(out) = &args.out {
        let comments = [format!(
            "oracle min_c0={} status={}",
            search.min,
            status_name(search.status)
        )];
        std::fs::write(out, format_tree_list(&search.tree, &comments))
            .with_context(|| format!("writing {}", out.display()))?;
    }
    Ok(if search.status == MinStatus::Truncated { 2 } else { 0 })
}

fn goal_from(theorem: u8, k: Option<usize>) -> Result<Goal> {
    match (theorem, k) {
        (1, None) => Ok(Goal::PathStem),
        (1, Some(_)) => bail!("--k only applies to --theorem 2"),
        (2, Some(k)) if k >= 2 => Ok(Goal::LeafBound { k }),
        (2, Some(_)) => bail!("--k must be at least 2"),
        (2, None) => bail!("--theorem 2 needs --k"),
        _ => bail!("--theorem must be 1 or 2"),
    }
}

fn verdict_code(verdict: Verdict) -> u8 {
    match verdict {
        Verdict::HypothesisFails | Verdict::Verified => 0,
        Verdict::UpperBoundOnly => 2,
        Verdict::CounterexampleCandidate => 3,
    }
}

fn describe(report: &TheoremReport) {
    match report.best_c0 {
        Some(c0) => eprintln!(
            "verdict {}: c0={}{} via {} ({} steps, {} trees)",
            report.verdict,
            c0,
            if report.c0_exact { " exact" } else { "" },
            report.method,
            report.steps,
            report.trees_seen
        ),
        None => eprintln!("verdict {}", report.verdict),
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<u8> {
    let goal = goal_from(args.theorem, args.k)?;
    let g = read_graph(args.input.as_ref())?;
    let report = verify_goal(&g, goal, &args.budgets.to_budgets());
    println!("{REPORT_CSV_HEADER}");
    println!("{}", report.csv_row());
    describe(&report);
    Ok(verdict_code(report.verdict))
}

fn cmd_scan(args: ScanArgs) -> Result<u8> {
    if args.trials < 1 {
        bail!("--trials must be at least 1");
    }
    if args.jobs < 1 {
        bail!("--jobs must be at least 1");
    }
    if !(0.0..=1.0).contains(&args.p) {
        bail!("--p must lie in [0, 1]");
    }
    let source = match args.source.as_str() {
        "random" => {
            let n = args.n.context("--source random needs --n")?;
            if n < 1 {
                bail!("--n must be at least 1");
            }
            ScanSource::RandomConnected { n, p: args.p }
        }
        "line-tree" => {
            let host_n = args.host_n.context("--source line-tree needs --host-n")?;
            if host_n < 2 {
                bail!("--host-n must be at least 2");
            }
            ScanSource::LineOfRandomTree { host_n }
        }
        "line-random" => {
            let host_n = args.host_n.context("--source line-random needs --host-n")?;
            if host_n < 2 {
                bail!("--host-n must be at least 2");
            }
            ScanSource::LineOfRandomConnected { host_n, p: args.p }
        }
        other => bail!("unknown source '{other}' (expected random, line-tree, or line-random)"),
    };
    let goal = goal_from(args.theorem, args.k)?;
    let budgets = args.budgets.to_budgets();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .context("building worker pool")?;
    let rows = pool.install(|| scan(source, goal, args.trials, args.seed, &budgets))?;

    println!("{REPORT_CSV_HEADER}");
    for row in &rows {
        println!("{}", row.report.csv_row());
    }
    let counts = verdict_counts(&rows);
    eprintln!(
        "trials={} hypothesis_fails={} verified={} upper_bound_only={} counterexample_candidates={}",
        rows.len(),
        counts[0].1,
        counts[1].1,
        counts[2].1,
        counts[3].1
    );
    if let Some(dir) = &args.dump_dir {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for row in rows.iter().filter(|r| {
            r.report.verdict == Verdict::CounterexampleCandidate
        }) {
            let path = dir.join(format!("candidate_{:04}.g", row.index));
            let comments = [
                format!("scan candidate index={} seed={}", row.index, row.seed),
                row.report.csv_row(),
            ];
            std::fs::write(&path, format_edge_list(&row.graph, &comments))
                .with_context(|| format!("writing {}", path.display()))?;
            eprintln!("dumped {}", path.display());
        }
    }
    if counts[3].1 > 0 {
        return Ok(3);
    }
    if counts[2].1 > 0 {
        return Ok(2);
    }
    Ok(0)
}
