//! `mcwdst` command-line front end.
//!
//! Exit codes: 0 success, 1 I/O, 2 parse or usage, 3 unknown root/node.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mcwdst::arborescence::{build_mcwdst, PropagationTree};
use mcwdst::io::{
    export_dot, load_twitter15_corpus, parse_edge_list, parse_twitter15_trace, tree_to_edge_list,
    ParseError,
};
use mcwdst::ranking::{bucket_table, rank_tree, HarmReport, PoolMode, TimingStrategy};
use mcwdst::simulate::compare_policies;
use mcwdst::synth::random_digraph;
use mcwdst::{NodeId, WeightedDigraph};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Parser)]
#[command(
    name = "mcwdst",
    version,
    about = "Propagation trees, harmfulness ranking and blocking simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the propagation tree of a source node.
    BuildTree {
        #[command(flatten)]
        input: InputArgs,
        /// Strategy used for the rank labels of DOT output.
        #[arg(long, default_value = "average")]
        strategy: TimingStrategy,
        #[arg(long = "out-format", value_enum, default_value_t = OutFormat::EdgeList)]
        out_format: OutFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score tree members and print the blocking order.
    Rank {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        strategy: TimingStrategy,
        /// Keep only the first k entries of the blocking order.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long = "out-format", value_enum, default_value_t = OutFormat::Json)]
        out_format: OutFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare blocking policies by the number of nodes they save.
    Simulate {
        #[command(flatten)]
        input: InputArgs,
        /// Timing strategies for the ranked policy, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        strategy: Vec<TimingStrategy>,
        /// Blocking budgets, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "5,10,15,20")]
        k: Vec<usize>,
        /// Diffusion time limit; `inf` for none.
        #[arg(long, default_value_t = f64::INFINITY)]
        horizon: f64,
        /// Enables the random baseline with this seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long = "out-format", value_enum, default_value_t = OutFormat::Csv)]
        out_format: OutFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time tree construction and ranking on seeded synthetic graphs.
    Bench {
        /// Graph sizes as `nodes[:edges]`, comma separated.
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "978:10217,5210:49124,10210:89124"
        )]
        sizes: Vec<String>,
        /// Edges per node when a size gives no edge count.
        #[arg(long, default_value_t = 9.0)]
        density: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Top-k rank band table over a directory of Twitter15 traces.
    Buckets {
        /// Directory of `*.txt` trace files.
        #[arg(long)]
        corpus: PathBuf,
        /// `label:tweet_id` file; only traces with `--label` are used.
        #[arg(long)]
        labels: Option<PathBuf>,
        #[arg(long, default_value = "false")]
        label: String,
        #[arg(long, value_delimiter = ',', default_value = "1000,2000,3000")]
        k: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Mode::Pooled)]
        mode: Mode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct InputArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = InputFormat::EdgeList)]
    format: InputFormat,
    /// Source node id; defaults to the ROOT of a Twitter15 trace.
    #[arg(long)]
    root: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InputFormat {
    EdgeList,
    Twitter15,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    EdgeList,
    Json,
    Dot,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Pooled,
    PerTree,
}

enum CliError {
    Io(String),
    Parse(String),
    Usage(String),
    Semantic(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Parse(_) | CliError::Usage(_) => 2,
            CliError::Semantic(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Io(m) | CliError::Parse(m) | CliError::Usage(m) | CliError::Semantic(m) => m,
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        match e {
            ParseError::Io { .. } => CliError::Io(e.to_string()),
            _ => CliError::Parse(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(args: &InputArgs) -> Result<(WeightedDigraph, NodeId), CliError> {
    let text = read(&args.input)?;
    let in_file = |e: ParseError| ParseError::InFile {
        path: args.input.display().to_string(),
        source: Box::new(e),
    };
    let (graph, default_root) = match args.format {
        InputFormat::EdgeList => (parse_edge_list(&text).map_err(in_file)?, None),
        InputFormat::Twitter15 => {
            let trace = parse_twitter15_trace(&text).map_err(in_file)?;
            (trace.graph, Some(trace.root))
        }
    };
    let root = match (&args.root, default_root) {
        (Some(id), _) => graph
            .node(id)
            .ok_or_else(|| CliError::Semantic(format!("root {id:?} is not a node of the graph")))?,
        (None, Some(r)) => r,
        (None, None) => {
            return Err(CliError::Usage(
                "--root is required for edge-list input".into(),
            ))
        }
    };
    Ok((graph, root))
}

fn tree_of(args: &InputArgs) -> Result<(WeightedDigraph, PropagationTree), CliError> {
    let (graph, root) = load(args)?;
    let tree = build_mcwdst(&graph, root).map_err(|e| CliError::Semantic(e.to_string()))?;
    Ok((graph, tree))
}

fn truncated(report: &HarmReport, k: Option<usize>) -> HarmReport {
    let mut r = report.clone();
    if let Some(k) = k {
        r.scores.truncate(k);
    }
    r
}

fn bench(sizes: &[String], density: f64, seed: u64) -> Result<String, CliError> {
    let mut out = String::from("nodes,edges,mcwdst_s,ranking_s\n");
    for (i, spec) in sizes.iter().enumerate() {
        let bad = || CliError::Usage(format!("bad size {spec:?}, expected nodes[:edges]"));
        let (nodes, edges) = match spec.split_once(':') {
            Some((n, m)) => (
                n.trim().parse::<usize>().map_err(|_| bad())?,
                Some(m.trim().parse::<usize>().map_err(|_| bad())?),
            ),
            None => (spec.trim().parse::<usize>().map_err(|_| bad())?, None),
        };
        if nodes == 0 {
            return Err(bad());
        }
        let capacity = nodes * (nodes - 1);
        let edges = edges
            .unwrap_or((nodes as f64 * density).round() as usize)
            .min(capacity);
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
        let graph = random_digraph(nodes, edges, &mut rng);

        let start = Instant::now();
        let tree = build_mcwdst(&graph, NodeId(0)).expect("node 0 exists");
        let build = start.elapsed().as_secs_f64();
        let start = Instant::now();
        let _report = rank_tree(&tree, TimingStrategy::Median);
        let ranking = start.elapsed().as_secs_f64();
        out.push_str(&format!("{nodes},{edges},{build:.6},{ranking:.6}\n"));
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::BuildTree {
            input,
            strategy,
            out_format,
            out,
        } => {
            let (_, tree) = tree_of(&input)?;
            let text = match out_format {
                OutFormat::EdgeList => tree_to_edge_list(&tree),
                OutFormat::Dot => export_dot(&tree, &rank_tree(&tree, strategy)),
                other => {
                    return Err(CliError::Usage(format!(
                        "build-tree writes edge-list or dot, not {other:?}"
                    )))
                }
            };
            emit(out.as_deref(), &text)
        }
        Command::Rank {
            input,
            strategy,
            k,
            out_format,
            out,
        } => {
            let (_, tree) = tree_of(&input)?;
            let report = rank_tree(&tree, strategy);
            let text = match out_format {
                OutFormat::Json => report.to_json(&tree, k),
                OutFormat::Dot => export_dot(&tree, &truncated(&report, k)),
                other => {
                    return Err(CliError::Usage(format!(
                        "rank writes json or dot, not {other:?}"
                    )))
                }
            };
            emit(out.as_deref(), &text)
        }
        Command::Simulate {
            input,
            strategy,
            k,
            horizon,
            seed,
            out_format,
            out,
        } => {
            if out_format != OutFormat::Csv {
                return Err(CliError::Usage("simulate writes csv only".into()));
            }
            if horizon.is_nan() || horizon <= 0.0 {
                return Err(CliError::Usage(format!(
                    "horizon must be positive, got {horizon}"
                )));
            }
            let (graph, root) = load(&input)?;
            let table = compare_policies(&graph, root, &k, &strategy, seed, horizon)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            emit(out.as_deref(), &table.to_csv())
        }
        Command::Bench {
            sizes,
            density,
            seed,
            out,
        } => {
            let text = bench(&sizes, density, seed)?;
            emit(out.as_deref(), &text)
        }
        Command::Buckets {
            corpus,
            labels,
            label,
            k,
            mode,
            out,
        } => {
            let entries =
                load_twitter15_corpus(&corpus, labels.as_deref().map(|p| (p, label.as_str())))?;
            let trees: Vec<PropagationTree> = entries
                .iter()
                .map(|e| {
                    build_mcwdst(&e.trace.graph, e.trace.root)
                        .map_err(|err| CliError::Semantic(err.to_string()))
                })
                .collect::<Result<_, _>>()?;
            let by_strategy: Vec<(TimingStrategy, Vec<HarmReport>)> = TimingStrategy::ALL
                .iter()
                .map(|&s| (s, trees.iter().map(|t| rank_tree(t, s)).collect()))
                .collect();
            let mode = match mode {
                Mode::Pooled => PoolMode::Pooled,
                Mode::PerTree => PoolMode::PerTree,
            };
            emit(out.as_deref(), &bucket_table(&by_strategy, &k, mode))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
