mod cache;
mod input;

use std::fmt;
use std::process::ExitCode;
use std::time::Instant;

use chainrank::group::Limits;
use chainrank::invariants::{self, RankReport, Selection, TreeKind};
use chainrank::oracle;
use chainrank::verify::{self, Suite, VerifyOptions, VerifyOutcome};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

/// Exit status and message of a failed command.
#[derive(Debug)]
pub struct CliError {
    code: u8,
    message: String,
}

const EXIT_VERIFY: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_LIMIT: u8 = 3;

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    pub fn context(mut self, what: &str) -> Self {
        self.message = format!("{what}: {}", self.message);
        self
    }
}

impl From<chainrank::Error> for CliError {
    fn from(e: chainrank::Error) -> Self {
        let code = if e.is_resource_limit() {
            EXIT_LIMIT
        } else {
            EXIT_INPUT
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

#[derive(Parser)]
#[command(
    name = "chainrank",
    version,
    about = "Chain-condition ranks of finite marked groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct GroupArgs {
    /// Group expression such as "S(3) * C(2)", or a generator file path.
    input: String,
    /// Re-mark the group with a seeded shuffle of its enumeration.
    #[arg(long)]
    marking_seed: Option<u64>,
    /// Largest group the input may construct.
    #[arg(long, default_value_t = Limits::default().max_order)]
    max_order: usize,
    /// Largest number of distinct tree states to visit.
    #[arg(long, default_value_t = Limits::default().node_budget)]
    budget: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Compute invariants of a group.
    Rank {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, value_enum, default_value_t = RankInvariant::All)]
        invariant: RankInvariant,
        #[arg(long, value_enum, default_value_t = RankFormat::Json)]
        format: RankFormat,
        /// Ignore the result cache.
        #[arg(long)]
        no_cache: bool,
        /// Record wall-clock time in the report.
        #[arg(long)]
        timings: bool,
    },
    /// Run verification suites over the built-in catalog.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        /// Only catalog groups up to this order.
        #[arg(long, default_value_t = VerifyOptions::default().max_order)]
        max_order: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Print the deduplicated state graph of a tree, or its literal index tree.
    Tree {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, value_enum)]
        invariant: TreeInvariant,
        /// Offset of the decomposition tree; defaults to the group order.
        #[arg(long)]
        offset: Option<usize>,
        #[arg(long, value_enum, default_value_t = TreeFormat::Dot)]
        format: TreeFormat,
        /// Expand the literal tree with child indices below this bound.
        #[arg(long, value_name = "N")]
        explicit: Option<usize>,
    },
    /// Longest subgroup chains by lattice enumeration.
    Oracle {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, value_enum)]
        check: ChainCheck,
    },
    /// Inspect or empty the result cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RankInvariant {
    Cent,
    Max,
    Maxn,
    Xi,
    Deg,
    All,
}

impl RankInvariant {
    fn selection(self) -> Selection {
        let none = Selection::default();
        match self {
            RankInvariant::Cent => Selection {
                centralizer: true,
                ..none
            },
            RankInvariant::Max => Selection {
                subgroup: true,
                ..none
            },
            RankInvariant::Maxn => Selection { maxn: true, ..none },
            RankInvariant::Xi => Selection { xi: true, ..none },
            RankInvariant::Deg => Selection { deg: true, ..none },
            RankInvariant::All => Selection::all(),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RankFormat {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Lemmas,
    Oracle,
    Marking,
    All,
}

impl SuiteArg {
    fn suites(self) -> Vec<Suite> {
        match self {
            SuiteArg::Lemmas => vec![Suite::Lemmas],
            SuiteArg::Oracle => vec![Suite::Oracle],
            SuiteArg::Marking => vec![Suite::Marking],
            SuiteArg::All => Suite::ALL.to_vec(),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TreeInvariant {
    Cent,
    Max,
    Maxn,
    Xi,
}

#[derive(Clone, Copy, ValueEnum)]
enum TreeFormat {
    Dot,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ChainCheck {
    Cent,
    Max,
    Maxn,
}

#[derive(Subcommand)]
enum CacheAction {
    /// Print the cache directory.
    Path,
    /// Delete every cached report.
    Clear,
    /// Count cached reports and their total size.
    Stats,
}

fn json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("output types serialize")
}

fn show(o: &Option<impl fmt::Display>) -> String {
    o.as_ref()
        .map_or_else(|| "-".to_string(), ToString::to_string)
}

fn table(r: &RankReport) -> String {
    let v = &r.invariants;
    let mut rows = Vec::new();
    if let Some(e) = &r.expression {
        rows.push(("expression", e.clone()));
    }
    rows.push(("order", r.group.order.to_string()));
    rows.push(("centralizer_rank", show(&v.centralizer_rank)));
    rows.push(("subgroup_rank", show(&v.subgroup_rank)));
    rows.push(("maxn_length", show(&v.maxn_length)));
    rows.push(("xi", show(&v.xi)));
    rows.push(("deg", show(&v.deg)));
    rows.iter().map(|(k, v)| format!("{k:<18}{v}\n")).collect()
}

fn cmd_rank(
    args: GroupArgs,
    invariant: RankInvariant,
    format: RankFormat,
    no_cache: bool,
    timings: bool,
) -> Result<String, CliError> {
    let start = Instant::now();
    let input = input::load(&args.input, args.max_order)?;
    let m = input::marking(input.group, args.marking_seed);
    let selection = invariant.selection();
    let store = if no_cache { None } else { cache::dir() };
    let key = cache::key(&m, selection, args.budget);
    let cached = store.as_deref().and_then(|d| cache::get(d, &key));
    let mut report = match cached {
        Some(r) => r,
        None => {
            let r = invariants::rank_report(&m, selection, args.budget)?;
            if let Some(d) = &store {
                if let Err(e) = cache::put(d, &key, &r) {
                    eprintln!("warning: cannot write cache entry: {e}");
                }
            }
            r
        }
    };
    report.expression = input.expression;
    if timings {
        report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(match format {
        RankFormat::Json => json(&report) + "\n",
        RankFormat::Table => table(&report),
    })
}

fn cmd_verify(
    suite: SuiteArg,
    max_order: usize,
    seed: u64,
    jobs: usize,
) -> Result<(String, bool), CliError> {
    let opts = VerifyOptions {
        max_order,
        seed,
        ..VerifyOptions::default()
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::input(format!("cannot start worker threads: {e}")))?;
    let outcomes: Vec<VerifyOutcome> = suite
        .suites()
        .into_iter()
        .map(|s| {
            let tasks = verify::tasks(s, &opts);
            // Collecting an indexed parallel iterator keeps task order.
            let results: Vec<_> = pool.install(|| {
                tasks
                    .par_iter()
                    .map(|t| verify::run_task(t, &opts))
                    .collect()
            });
            verify::merge(s, results)
        })
        .collect();
    for o in &outcomes {
        eprintln!(
            "{}: {} cases, {} failures",
            o.suite,
            o.cases,
            o.failures.len()
        );
    }
    let ok = outcomes.iter().all(|o| o.failures.is_empty());
    Ok((json(&outcomes) + "\n", ok))
}

fn cmd_tree(
    args: GroupArgs,
    invariant: TreeInvariant,
    offset: Option<usize>,
    format: TreeFormat,
    explicit: Option<usize>,
) -> Result<String, CliError> {
    let input = input::load(&args.input, args.max_order)?;
    let m = input::marking(input.group, args.marking_seed);
    if offset.is_some() && !matches!(invariant, TreeInvariant::Xi) {
        return Err(CliError::input("--offset applies only to --invariant xi"));
    }
    let kind = match invariant {
        TreeInvariant::Cent => TreeKind::Centralizer,
        TreeInvariant::Max => TreeKind::Subgroup,
        TreeInvariant::Maxn => TreeKind::MaxN,
        TreeInvariant::Xi => TreeKind::Decomposition(offset.unwrap_or(m.carrier().order())),
    };
    let dag = match explicit {
        Some(n) => invariants::tree_explicit(&m, kind, n, args.budget)?.to_dag(),
        None => invariants::tree_dag(&m, kind, args.budget)?,
    };
    Ok(match format {
        TreeFormat::Dot => dag.to_dot(),
        TreeFormat::Json => json(&dag) + "\n",
    })
}

fn cmd_oracle(args: GroupArgs, check: ChainCheck) -> Result<String, CliError> {
    if args.marking_seed.is_some() {
        return Err(CliError::input("chain oracles do not depend on a marking"));
    }
    let input = input::load(&args.input, args.max_order)?;
    let g = &input.group;
    let limits = Limits::default();
    let (name, chain) = match check {
        ChainCheck::Cent => (
            "cent",
            oracle::longest_centralizer_chain(g, limits.lattice_oracle)?,
        ),
        ChainCheck::Max => (
            "max",
            oracle::longest_subgroup_chain(g, limits.subgroup_oracle)?,
        ),
        ChainCheck::Maxn => (
            "maxn",
            oracle::longest_normal_chain(g, limits.lattice_oracle)?,
        ),
    };
    Ok(json(&chain.report(g, name)) + "\n")
}

fn cmd_cache(action: CacheAction) -> Result<String, CliError> {
    let dir =
        cache::dir().ok_or_else(|| CliError::input(format!("{} is not set", cache::ENV_VAR)))?;
    let io = |e: std::io::Error| CliError::input(format!("{}: {e}", dir.display()));
    Ok(match action {
        CacheAction::Path => format!("{}\n", dir.display()),
        CacheAction::Clear => format!("removed {} entries\n", cache::clear(&dir).map_err(io)?),
        CacheAction::Stats => {
            let files = cache::entries(&dir).map_err(io)?;
            let bytes: u64 = files
                .iter()
                .filter_map(|f| f.metadata().ok())
                .map(|m| m.len())
                .sum();
            json(&serde_json::json!({ "path": dir, "entries": files.len(), "bytes": bytes })) + "\n"
        }
    })
}

fn run(cli: Cli) -> Result<(String, bool), CliError> {
    let out = match cli.command {
        Command::Rank {
            group,
            invariant,
            format,
            no_cache,
            timings,
        } => cmd_rank(group, invariant, format, no_cache, timings)?,
        Command::Verify {
            suite,
            max_order,
            seed,
            jobs,
        } => return cmd_verify(suite, max_order, seed, jobs),
        Command::Tree {
            group,
            invariant,
            offset,
            format,
            explicit,
        } => cmd_tree(group, invariant, offset, format, explicit)?,
        Command::Oracle { group, check } => cmd_oracle(group, check)?,
        Command::Cache { action } => cmd_cache(action)?,
    };
    Ok((out, true))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((out, ok)) => {
            print!("{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VERIFY)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
