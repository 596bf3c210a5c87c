//! `tempomotif`: count temporal motifs exactly or estimate them by sampling,
//! over files or simulated streams, with repeated-trial benchmarking.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tempomotif_cli::run::{
    parse_ground_truth, run, write_report, Algorithm, GroundTruth, OutputFormat, RunSpec,
};
use tempomotif_cli::synth::{generate, write_triples, SynthModel, SynthSpec};
use tempomotif_cli::{compare, CliError};

#[derive(Parser)]
#[command(
    name = "tempomotif",
    version,
    about = "Count and estimate temporal motifs in timestamped edge lists"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct CommonArgs {
    /// Edge list file: one `src dst time` triple per line.
    #[arg(long)]
    graph: PathBuf,
    /// Motif file: `k l` header, then one `src dst` line per motif edge.
    #[arg(long)]
    motif: PathBuf,
    /// Motif duration bound (same unit as the timestamps).
    #[arg(long)]
    delta: u64,
    /// Base seed; trial `i` uses `seed + i`.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Number of repeated runs, reported individually and averaged.
    #[arg(long, default_value_t = 10)]
    trials: u64,
    /// True count for relative errors: `none`, `auto`, or a number.
    #[arg(long, default_value = "none", value_parser = parse_ground_truth)]
    ground_truth: GroundTruth,
    /// `auto` only computes the exact count up to this many edges.
    #[arg(long, default_value_t = 1_000_000)]
    ground_truth_cap: usize,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StreamArgs {
    /// Reservoir capacity.
    #[arg(long)]
    r: u64,
    /// Record a trajectory point every this many pushes.
    #[arg(long, default_value_t = 1000)]
    report_every: u64,
    /// Drop out-of-order edges with a warning instead of failing.
    #[arg(long)]
    lenient: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> OutputFormat {
        match f {
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Csv => OutputFormat::Csv,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CompareFormatArg {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Uniform,
    Bursty,
    SkewedPairs,
}

impl From<ModelArg> for SynthModel {
    fn from(m: ModelArg) -> SynthModel {
        match m {
            ModelArg::Uniform => SynthModel::Uniform,
            ModelArg::Bursty => SynthModel::Bursty,
            ModelArg::SkewedPairs => SynthModel::SkewedPairs,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact count via anchored backtracking.
    Exact {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Exact count via guarded brute-force enumeration (small inputs).
    Naive {
        #[command(flatten)]
        common: CommonArgs,
        /// Refuse graphs with more edges than this.
        #[arg(long, default_value_t = 10_000)]
        max_edges: usize,
    },
    /// Edge-sampling estimator.
    Es {
        #[command(flatten)]
        common: CommonArgs,
        /// Edge keep probability.
        #[arg(long, default_value_t = 1.0)]
        p: f64,
    },
    /// Edge plus wedge sampling (3-edge stars and triangles only).
    Ews {
        #[command(flatten)]
        common: CommonArgs,
        /// Edge keep probability.
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        /// Wedge keep probability.
        #[arg(long, default_value_t = 1.0)]
        q: f64,
    },
    /// Streaming reservoir estimator; replays the file as a stream.
    Ses {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        stream: StreamArgs,
    },
    /// Streaming reservoir estimator with wedge-sampled counts.
    Sews {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        stream: StreamArgs,
        /// Wedge keep probability.
        #[arg(long, default_value_t = 1.0)]
        q: f64,
    },
    /// Generate a synthetic edge list.
    Gen {
        /// Number of vertices.
        #[arg(long)]
        n: u64,
        /// Number of edges.
        #[arg(long)]
        m: u64,
        /// Timestamps fall in `0..span`.
        #[arg(long)]
        span: u64,
        #[arg(long, value_enum, default_value_t = ModelArg::Uniform)]
        model: ModelArg,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output file (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Join two JSON reports into an error-and-speedup comparison.
    Compare {
        report_a: PathBuf,
        report_b: PathBuf,
        #[arg(long, value_enum, default_value_t = CompareFormatArg::Text)]
        format: CompareFormatArg,
    },
}

fn spec_from(common: &CommonArgs, algorithm: Algorithm) -> RunSpec {
    let mut spec = RunSpec::new(
        algorithm,
        common.graph.clone(),
        common.motif.clone(),
        common.delta,
    );
    spec.seed = common.seed;
    spec.trials = common.trials;
    spec.ground_truth = common.ground_truth;
    spec.ground_truth_cap = common.ground_truth_cap;
    spec
}

fn run_and_write(spec: &RunSpec, common: &CommonArgs) -> Result<(), CliError> {
    let report = run(spec)?;
    write_report(&report, common.format.into(), common.out.as_deref())
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Exact { common } => run_and_write(&spec_from(&common, Algorithm::Exact), &common),
        Cmd::Naive { common, max_edges } => {
            let mut spec = spec_from(&common, Algorithm::Naive);
            spec.naive_max_edges = max_edges;
            run_and_write(&spec, &common)
        }
        Cmd::Es { common, p } => {
            let mut spec = spec_from(&common, Algorithm::Es);
            spec.p = p;
            run_and_write(&spec, &common)
        }
        Cmd::Ews { common, p, q } => {
            let mut spec = spec_from(&common, Algorithm::Ews);
            spec.p = p;
            spec.q = q;
            run_and_write(&spec, &common)
        }
        Cmd::Ses { common, stream } => {
            let mut spec = spec_from(&common, Algorithm::Ses);
            spec.r = Some(stream.r);
            spec.report_every = stream.report_every;
            spec.lenient = stream.lenient;
            run_and_write(&spec, &common)
        }
        Cmd::Sews { common, stream, q } => {
            let mut spec = spec_from(&common, Algorithm::Sews);
            spec.r = Some(stream.r);
            spec.report_every = stream.report_every;
            spec.lenient = stream.lenient;
            spec.q = q;
            run_and_write(&spec, &common)
        }
        Cmd::Gen {
            n,
            m,
            span,
            model,
            seed,
            out,
        } => {
            let spec = SynthSpec {
                n,
                m,
                span,
                model: model.into(),
                seed,
            };
            let triples = generate(&spec)?;
            match out {
                Some(path) => {
                    let f = std::fs::File::create(&path)
                        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
                    write_triples(&triples, std::io::BufWriter::new(f))?;
                }
                None => write_triples(&triples, std::io::stdout().lock())?,
            }
            Ok(())
        }
        Cmd::Compare {
            report_a,
            report_b,
            format,
        } => {
            let load = |path: &PathBuf| -> Result<_, CliError> {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
                serde_json::from_str(&text)
                    .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
            };
            let c = compare::compare(&load(&report_a)?, &load(&report_b)?)?;
            match format {
                CompareFormatArg::Json => print!("{}", compare::to_json(&c)?),
                CompareFormatArg::Text => print!("{}", compare::render_text(&c)),
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Ok(v) = std::env::var("TEMPOMOTIF_THREADS") {
        match v.parse::<usize>() {
            Ok(threads) if threads >= 1 => {
                // Caps every parallel loop in the process.
                if let Err(e) = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build_global()
                {
                    log::warn!("TEMPOMOTIF_THREADS ignored: {e}");
                }
            }
            _ => log::warn!("TEMPOMOTIF_THREADS must be a positive integer, got {v:?}"),
        }
    }
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
