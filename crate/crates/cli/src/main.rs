//! `graphburn`: command-line front end for burning experiments.
//!
//! Exit codes: 0 = completed with a verdict, 2 = inconclusive or budget
//! exceeded, 1 = usage, parse or domain error.

mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use graphburn::chainlab::{
    compute_l, expand_prec_tree, CertifyOptions, ChainError, DeficiencyCache, NodeStatus,
    SquareForest, TreeBudget, Verdict,
};
use graphburn::pathforest::{
    decide_with_budget, exceptional_clause, n_paths_bound, theorem_predict, t_value,
    verify_linear_bounds, verify_path_forest_bound, PathForest, PathForestError, Prediction,
    DEFAULT_NODE_BUDGET,
};
use graphburn::spider::{
    decide_double_spider, verify_double_spiders, DoubleSpider, SpiderError, SweepMode,
};
use graphburn::{burning_number, is_m_burnable, Graph, SolveError, SolverConfig};

use report::{Outcome, Status};

#[derive(Parser, Serialize)]
#[command(name = "graphburn", version, about = "Graph burning on paths, path forests and (double) spiders")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
    /// Node-expansion budget handed to the search routines.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    budget_nodes: Option<u64>,
    /// Wall-clock budget in seconds.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    budget_secs: Option<u64>,
    /// Seed for sampled sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Append-only deficiency cache shared across runs (chain, ln).
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "name")]
enum Command {
    /// Burning number of a graph, or whether it is m-burnable.
    Burn {
        /// `path:16`, `forest:7,5,2`, `spider:5,5,6`, `dspider:3,3/3`, or an edge-list file.
        graph: String,
        #[arg(long)]
        m: Option<usize>,
    },
    /// Path forests: decide m-burnability, or run a verification sweep.
    Pf(PfArgs),
    /// Double spiders: decide m-burnability, or run a verification sweep.
    Ds(DsArgs),
    /// Expand the extension tree of a deficient forest of square order.
    Chain {
        /// Comma list of path orders summing to a square.
        forest: String,
        /// Nodes at this many rounds are left unexpanded.
        #[arg(long, default_value_t = 200)]
        max_m: usize,
    },
    /// Least L such that n paths of order at least L and square total order are always burnable in time.
    Ln {
        #[arg(long)]
        n: usize,
        /// Seed floor below L (certify through tree expansion instead of direct enumeration).
        #[arg(long)]
        floor: Option<usize>,
        /// Also write the final evidence here as JSON.
        #[arg(long)]
        evidence: Option<PathBuf>,
    },
}

#[derive(Args, Serialize)]
#[command(args_conflicts_with_subcommands = true)]
struct PfArgs {
    #[command(subcommand)]
    action: Option<PfAction>,
    /// Comma list of path orders, e.g. `7,5,2`.
    lengths: Option<String>,
    #[arg(long)]
    m: Option<usize>,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "name")]
enum PfAction {
    /// Exhaustive check of the n-path order bound and its exceptional family.
    Verify {
        #[arg(long)]
        n: usize,
        /// Inclusive range `a..b` or a single value.
        #[arg(long)]
        m: InclusiveRange,
    },
    /// Exhaustive check of the linear order conditions for 2 <= n <= N.
    Linear {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Args, Serialize)]
#[command(args_conflicts_with_subcommands = true)]
struct DsArgs {
    #[command(subcommand)]
    action: Option<DsAction>,
    /// Arms at the two heads, e.g. `5,5/6`.
    spider: Option<String>,
    #[arg(long)]
    m: Option<usize>,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "name")]
enum DsAction {
    /// Every n-arm double spider of order m^2 + n - 2 (or a seeded sample).
    Verify {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// Sample this many instances (seeded by --seed) instead of enumerating.
        #[arg(long)]
        samples: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct InclusiveRange {
    lo: usize,
    hi: usize,
}

impl FromStr for InclusiveRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("`{s}` is not a range a..b"))
        };
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (num(a)?, num(b)?),
            None => (num(s)?, num(s)?),
        };
        if lo > hi {
            return Err(format!("empty range {s}"));
        }
        Ok(InclusiveRange { lo, hi })
    }
}

impl Serialize for InclusiveRange {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}..{}", self.lo, self.hi))
    }
}

impl Cli {
    fn solver(&self) -> SolverConfig {
        SolverConfig {
            node_budget: self.budget_nodes,
            time_budget: self.budget_secs.map(Duration::from_secs),
        }
    }

    fn cache(&self) -> Result<DeficiencyCache> {
        Ok(match &self.cache {
            Some(path) => DeficiencyCache::open(path)?,
            None => DeficiencyCache::in_memory(),
        })
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Some(jobs) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs as usize)
            .build_global();
    }
    match run(&cli) {
        Ok(outcome) => {
            print!("{}", report::render(&cli, &outcome));
            ExitCode::from(outcome.status.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Burn { graph, m } => cmd_burn(cli, graph, *m),
        Command::Pf(args) => match &args.action {
            Some(PfAction::Verify { n, m }) => cmd_pf_verify(cli, *n, *m),
            Some(PfAction::Linear { n }) => cmd_pf_linear(cli, *n),
            None => {
                let lengths = args.lengths.as_deref().context("missing path orders")?;
                let m = args.m.context("--m is required")?;
                cmd_pf(cli, lengths, m)
            }
        },
        Command::Ds(args) => match &args.action {
            Some(DsAction::Verify { m, n, samples }) => cmd_ds_verify(cli, *m, *n, *samples),
            None => {
                let spider = args.spider.as_deref().context("missing double spider")?;
                let m = args.m.context("--m is required")?;
                cmd_ds(cli, spider, m)
            }
        },
        Command::Chain { forest, max_m } => cmd_chain(cli, forest, *max_m),
        Command::Ln {
            n,
            floor,
            evidence,
        } => cmd_ln(cli, *n, *floor, evidence.as_deref()),
    }
}

fn load_graph(spec: &str) -> Result<Graph> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {spec}"))?;
        return Graph::parse_text(&text).with_context(|| format!("parsing {spec}"));
    }
    Ok(Graph::from_shorthand(spec)?)
}

fn sources(seq: &graphburn::BurningSequence) -> String {
    seq.sources()
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_burn(cli: &Cli, spec: &str, m: Option<usize>) -> Result<Outcome> {
    let graph = load_graph(spec)?;
    let cfg = cli.solver();
    let header = ["graph", "m", "burnable", "burning_number", "sequence"];
    let result = match m {
        Some(m) => is_m_burnable(&graph, m, &cfg).map(|w| (Some(m), w.is_some(), None, w)),
        None => burning_number(&graph, &cfg).map(|(b, w)| (None, true, Some(b), Some(w))),
    };
    match result {
        Ok((m, burnable, b, witness)) => {
            let seq = witness.as_ref().map(sources).unwrap_or_default();
            let text = match (m, b) {
                (_, Some(b)) => format!("b({spec}) = {b}\nsequence: {seq}\n"),
                (Some(m), _) if burnable => format!("{spec} is {m}-burnable\nsequence: {seq}\n"),
                (Some(m), _) => format!("{spec} is not {m}-burnable\n"),
                _ => unreachable!(),
            };
            Ok(Outcome {
                status: Status::Completed,
                json: json!({
                    "graph": spec,
                    "vertices": graph.vertex_count(),
                    "m": m,
                    "burnable": burnable,
                    "burning_number": b,
                    "sequence": witness,
                }),
                header: header.to_vec(),
                rows: vec![vec![
                    spec.to_string(),
                    m.map(|m| m.to_string()).unwrap_or_default(),
                    burnable.to_string(),
                    b.map(|b| b.to_string()).unwrap_or_default(),
                    seq,
                ]],
                text,
            })
        }
        Err(SolveError::BudgetExceeded { expanded, bounds }) => {
            let bound_text = bounds
                .map(|(lo, hi)| format!("{lo} <= b <= {hi}"))
                .unwrap_or_else(|| "no bounds".into());
            Ok(Outcome {
                status: Status::Inconclusive,
                json: json!({
                    "graph": spec,
                    "m": m,
                    "budget_exceeded": true,
                    "expanded": expanded,
                    "bounds": bounds,
                }),
                header: header.to_vec(),
                rows: vec![vec![
                    spec.to_string(),
                    m.map(|m| m.to_string()).unwrap_or_default(),
                    String::new(),
                    String::new(),
                    String::new(),
                ]],
                text: format!(
                    "budget exceeded after {expanded} expansions ({bound_text})\n"
                ),
            })
        }
        Err(e) => Err(e.into()),
    }
}

fn pf_budget(cli: &Cli) -> u64 {
    cli.budget_nodes.unwrap_or(DEFAULT_NODE_BUDGET)
}

fn cmd_pf(cli: &Cli, lengths: &str, m: usize) -> Result<Outcome> {
    let forest: PathForest = lengths.parse()?;
    let decision = match decide_with_budget(&forest, m, pf_budget(cli)) {
        Err(PathForestError::BudgetExceeded { expanded }) => {
            return Ok(Outcome::inconclusive(
                json!({ "forest": forest, "m": m, "budget_exceeded": true, "expanded": expanded }),
                format!("budget exceeded after {expanded} expansions\n"),
            ))
        }
        other => other?,
    };
    let clause = exceptional_clause(&forest, m).ok();
    let prediction = match theorem_predict(&forest, m) {
        Prediction::BurnableBy(g) => Some(g.label()),
        Prediction::NotCovered => None,
    };
    let burnable = decision.is_some();
    let sets = decision.as_ref().map(|a| a.sets.clone());
    let sequence = decision.as_ref().map(|a| a.to_burning_sequence(&forest));
    let clause_text = clause.map(|c| format!("{c:?}")).unwrap_or_else(|| "n/a".into());
    let mut text = format!(
        "{forest} is {}{m}-burnable\nexceptional clause: {clause_text}\nguarantee: {}\n",
        if burnable { "" } else { "not " },
        prediction.unwrap_or("none")
    );
    if let Some(sets) = &sets {
        text += &format!("assignment: {sets:?}\n");
    }
    Ok(Outcome {
        status: Status::Completed,
        json: json!({
            "forest": forest,
            "m": m,
            "burnable": burnable,
            "exceptional_clause": clause,
            "guarantee": prediction,
            "t_value": t_value(&forest).0,
            "n_paths_bound": n_paths_bound(&forest, m),
            "assignment": sets,
            "sequence": sequence,
        }),
        header: vec!["forest", "m", "burnable", "clause", "guarantee", "assignment"],
        rows: vec![vec![
            forest.to_string(),
            m.to_string(),
            burnable.to_string(),
            clause_text,
            prediction.unwrap_or("").to_string(),
            sets.map(|s| format!("{s:?}")).unwrap_or_default(),
        ]],
        text,
    })
}

fn cmd_pf_verify(cli: &Cli, n: usize, ms: InclusiveRange) -> Result<Outcome> {
    let mut reports = Vec::new();
    for m in ms.lo..=ms.hi {
        match verify_path_forest_bound(n, m, pf_budget(cli)) {
            Err(PathForestError::BudgetExceeded { expanded }) => {
                return Ok(Outcome::inconclusive(
                    json!({ "n": n, "m": m, "budget_exceeded": true, "expanded": expanded, "completed": reports }),
                    format!("budget exceeded at m = {m} after {expanded} expansions\n"),
                ))
            }
            r => reports.push(r?),
        }
    }
    let mut text = String::new();
    let mut rows = Vec::new();
    for r in &reports {
        text += &format!(
            "n={} m={}: {} forests, {} burnable, {} exceptional, {} violations\n",
            r.n,
            r.m,
            r.checked,
            r.burnable,
            r.exceptional,
            r.violations.len()
        );
        for v in &r.violations {
            text += &format!("  {} m={}: {}\n", v.forest, v.m, v.reason);
        }
        rows.push(vec![
            r.n.to_string(),
            r.m.to_string(),
            r.checked.to_string(),
            r.burnable.to_string(),
            r.exceptional.to_string(),
            r.violations.len().to_string(),
        ]);
    }
    Ok(Outcome {
        status: Status::Completed,
        json: json!({ "reports": reports }),
        header: vec!["n", "m", "checked", "burnable", "exceptional", "violations"],
        rows,
        text,
    })
}

fn cmd_pf_linear(cli: &Cli, n_max: usize) -> Result<Outcome> {
    let reports = match verify_linear_bounds(n_max, pf_budget(cli)) {
        Err(PathForestError::BudgetExceeded { expanded }) => {
            return Ok(Outcome::inconclusive(
                json!({ "n_max": n_max, "budget_exceeded": true, "expanded": expanded }),
                format!("budget exceeded after {expanded} expansions\n"),
            ))
        }
        r => r?,
    };
    let mut text = String::new();
    let mut rows = Vec::new();
    for r in &reports {
        text += &format!(
            "{} n={} ({} rounds): {} forests, {} violations\n",
            r.clause.label(),
            r.n,
            r.rounds,
            r.checked,
            r.violations.len()
        );
        rows.push(vec![
            r.clause.label().to_string(),
            r.n.to_string(),
            r.rounds.to_string(),
            r.checked.to_string(),
            r.violations.len().to_string(),
        ]);
    }
    Ok(Outcome {
        status: Status::Completed,
        json: json!({ "reports": reports }),
        header: vec!["clause", "n", "rounds", "checked", "violations"],
        rows,
        text,
    })
}

fn cmd_ds(cli: &Cli, spec: &str, m: usize) -> Result<Outcome> {
    let ds: DoubleSpider = spec.parse()?;
    let d = match decide_double_spider(&ds, m, &cli.solver(), cli.budget_nodes) {
        Err(SpiderError::Solve(SolveError::BudgetExceeded { expanded, .. })) => {
            return Ok(Outcome::inconclusive(
                json!({ "spider": ds, "m": m, "budget_exceeded": true, "expanded": expanded }),
                format!("budget exceeded after {expanded} expansions\n"),
            ))
        }
        other => other?,
    };
    let basis = serde_json::to_value(d.basis)?;
    let basis = basis.as_str().unwrap_or_default().to_string();
    let seq = d.witness.as_ref().map(sources).unwrap_or_default();
    let mut text = format!(
        "{ds} is {}{m}-burnable ({basis})\n",
        if d.burnable { "" } else { "not " }
    );
    if d.witness.is_some() {
        text += &format!("sequence: {seq}\n");
    }
    Ok(Outcome {
        status: Status::Completed,
        json: json!({
            "spider": ds,
            "m": m,
            "order": ds.order(),
            "burnable": d.burnable,
            "basis": d.basis,
            "sequence": d.witness,
        }),
        header: vec!["spider", "m", "burnable", "basis", "sequence"],
        rows: vec![vec![
            ds.to_string(),
            m.to_string(),
            d.burnable.to_string(),
            basis,
            seq,
        ]],
        text,
    })
}

fn cmd_ds_verify(cli: &Cli, m: usize, n: usize, samples: Option<usize>) -> Result<Outcome> {
    let mode = match samples {
        Some(samples) => SweepMode::Sampled {
            samples,
            seed: cli.seed,
        },
        None => SweepMode::Exhaustive,
    };
    let r = match verify_double_spiders(m, n, mode, &cli.solver()) {
        Err(SpiderError::Solve(SolveError::BudgetExceeded { expanded, .. })) => {
            return Ok(Outcome::inconclusive(
                json!({ "m": m, "n": n, "budget_exceeded": true, "expanded": expanded }),
                format!("budget exceeded after {expanded} expansions\n"),
            ))
        }
        Err(SpiderError::NoWitnessInBudget) => {
            return Ok(Outcome::inconclusive(
                json!({ "m": m, "n": n, "budget_exceeded": true }),
                "head-deadline search ran out of budget\n".into(),
            ))
        }
        other => other?,
    };
    let mut text = format!(
        "m={} n={} order={}: {} instances, {} confirmed, {} violations\n",
        r.m,
        r.n,
        r.order,
        r.instances,
        r.confirmed,
        r.violations.len()
    );
    for v in &r.violations {
        text += &format!("  {}: {}\n", v.spider, v.reason);
    }
    let mode_text = match mode {
        SweepMode::Exhaustive => "exhaustive".to_string(),
        SweepMode::Sampled { samples, seed } => format!("sampled {samples} seed {seed}"),
    };
    Ok(Outcome {
        status: Status::Completed,
        header: vec!["m", "n", "order", "mode", "instances", "confirmed", "violations"],
        rows: vec![vec![
            r.m.to_string(),
            r.n.to_string(),
            r.order.to_string(),
            mode_text,
            r.instances.to_string(),
            r.confirmed.to_string(),
            r.violations.len().to_string(),
        ]],
        json: serde_json::to_value(&r)?,
        text,
    })
}

fn cmd_chain(cli: &Cli, forest: &str, max_m: usize) -> Result<Outcome> {
    let forest: PathForest = forest.parse()?;
    let root = SquareForest::new(forest)?;
    let cache = cli.cache()?;
    let budget = TreeBudget {
        max_nodes: cli.budget_nodes.map_or(1_000_000, |b| b as usize),
        max_m,
        deadline: cli
            .budget_secs
            .map(|s| std::time::Instant::now() + Duration::from_secs(s)),
    };
    let tree = match expand_prec_tree(&root, budget, &cache) {
        Err(ChainError::PreconditionViolated(msg)) => bail!("{msg}: not deficient"),
        other => other?,
    };
    let open = tree.open_leaves().len();
    let chains: Vec<String> = tree
        .chains()
        .iter()
        .map(|c| {
            c.iter()
                .map(|f| f.to_string())
                .collect::<Vec<_>>()
                .join(" < ")
        })
        .collect();
    let mut text = format!(
        "{root}: {} nodes, max m = {}, {} open leaves\n",
        tree.node_count(),
        tree.max_m(),
        open
    );
    for c in &chains {
        text += &format!("  {c}\n");
    }
    let rows = tree
        .nodes()
        .into_iter()
        .map(|node| {
            vec![
                node.forest.forest.to_string(),
                node.forest.m.to_string(),
                match node.status {
                    NodeStatus::Closed => "closed".into(),
                    NodeStatus::OpenBudget => "open-budget".into(),
                },
                node.children.len().to_string(),
            ]
        })
        .collect();
    Ok(Outcome {
        status: if open == 0 {
            Status::Completed
        } else {
            Status::Inconclusive
        },
        json: json!({
            "root": root,
            "nodes": tree.node_count(),
            "max_m": tree.max_m(),
            "open_leaves": tree.open_leaves(),
            "chains": chains,
            "budget": budget,
            "tree": tree,
        }),
        header: vec!["forest", "m", "status", "children"],
        rows,
        text,
    })
}

fn cmd_ln(cli: &Cli, n: usize, floor: Option<usize>, evidence: Option<&Path>) -> Result<Outcome> {
    let cache = cli.cache()?;
    let opts = CertifyOptions {
        seed_floor: floor,
        max_nodes: cli.budget_nodes.map_or(1_000_000, |b| b as usize),
        time_budget: cli.budget_secs.map(Duration::from_secs),
        ..CertifyOptions::default()
    };
    let r = compute_l(n, &opts, &cache)?;
    if let Some(path) = evidence {
        std::fs::write(path, serde_json::to_string_pretty(&r)? + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
    }
    let witness = r
        .witness
        .as_ref()
        .map(|w| w.to_string())
        .unwrap_or_else(|| "none".into());
    let verdict = serde_json::to_value(&r.evidence.verdict)?;
    let verdict = verdict.as_str().unwrap_or_default().to_string();
    let text = match r.value {
        Some(v) => format!(
            "L_{n} = {v}\nwitness at L - 1: {witness}\nthreshold m = {}, levels {}..{}, {} seeds\n",
            r.evidence.threshold_m,
            r.evidence.levels.0,
            r.evidence.levels.1,
            r.evidence.seeds.len()
        ),
        None => format!(
            "inconclusive at L = {} ({} open leaves)\n",
            r.evidence.l,
            r.evidence.frontier.len()
        ),
    };
    Ok(Outcome {
        status: if r.evidence.verdict == Verdict::Certified {
            Status::Completed
        } else {
            Status::Inconclusive
        },
        header: vec!["n", "L", "verdict", "witness", "threshold_m", "seeds"],
        rows: vec![vec![
            n.to_string(),
            r.value.map(|v| v.to_string()).unwrap_or_default(),
            verdict,
            witness,
            r.evidence.threshold_m.to_string(),
            r.evidence.seeds.len().to_string(),
        ]],
        json: serde_json::to_value(&r)?,
        text,
    })
}
