//! Benchmark orchestration: runs one algorithm `trials` times over a graph
//! file and assembles a machine-readable report.

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use tempomotif_core::exact::exact_count;
use tempomotif_core::graph::{load_edge_list, EdgeListStream};
use tempomotif_core::motif::MotifClass;
use tempomotif_core::naive::{naive_count, NaiveLimits};
use tempomotif_core::offline::{es_estimate, ews_estimate, EstimatorConfig};
use tempomotif_core::stream::{StreamConfig, StreamEstimate, StreamMode, StreamState};
use tempomotif_core::{LoaderOptions, TemporalMotif};

use crate::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    /// Exact anchored backtracking count.
    Exact,
    /// Brute-force enumeration (guarded; small inputs only).
    Naive,
    /// Edge sampling.
    Es,
    /// Edge plus wedge sampling.
    Ews,
    /// Streaming reservoir estimator.
    Ses,
    /// Streaming reservoir estimator with wedge-sampled counts.
    Sews,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Exact => "exact",
            Algorithm::Naive => "naive",
            Algorithm::Es => "es",
            Algorithm::Ews => "ews",
            Algorithm::Ses => "ses",
            Algorithm::Sews => "sews",
        }
    }

    pub fn is_streaming(self) -> bool {
        matches!(self, Algorithm::Ses | Algorithm::Sews)
    }
}

/// Where the true count for relative errors comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GroundTruth {
    /// No truth; relative errors omitted.
    None,
    /// Compute exactly first, if the graph is within the cap.
    Auto,
    /// Caller-supplied value.
    Value(f64),
}

pub fn parse_ground_truth(s: &str) -> std::result::Result<GroundTruth, String> {
    match s {
        "none" => Ok(GroundTruth::None),
        "auto" => Ok(GroundTruth::Auto),
        other => other
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite() && *v >= 0.0)
            .map(GroundTruth::Value)
            .ok_or_else(|| {
                format!("expected `none`, `auto`, or a non-negative number, got {other:?}")
            }),
    }
}

/// Everything one invocation needs.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub algorithm: Algorithm,
    pub graph: PathBuf,
    pub motif: PathBuf,
    pub delta: u64,
    pub p: f64,
    pub q: f64,
    /// Reservoir capacity; required by the streaming algorithms.
    pub r: Option<u64>,
    pub seed: u64,
    pub trials: u64,
    /// Streaming trajectory cadence, in pushes.
    pub report_every: u64,
    pub ground_truth: GroundTruth,
    /// `GroundTruth::Auto` computes exactly only up to this many edges.
    pub ground_truth_cap: usize,
    /// Enumeration guard for the naive algorithm.
    pub naive_max_edges: usize,
    /// Drop out-of-order stream edges with a warning instead of failing.
    pub lenient: bool,
}

impl RunSpec {
    pub fn new(algorithm: Algorithm, graph: PathBuf, motif: PathBuf, delta: u64) -> RunSpec {
        RunSpec {
            algorithm,
            graph,
            motif,
            delta,
            p: 1.0,
            q: 1.0,
            r: None,
            seed: 1,
            trials: 10,
            report_every: 1000,
            ground_truth: GroundTruth::None,
            ground_truth_cap: 1_000_000,
            naive_max_edges: 10_000,
            lenient: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(CliError::Usage("--trials must be at least 1".into()));
        }
        if self.report_every < 1 {
            return Err(CliError::Usage("--report-every must be at least 1".into()));
        }
        if !(self.p > 0.0 && self.p <= 1.0) {
            return Err(CliError::Usage(format!("--p {} not in (0, 1]", self.p)));
        }
        if !(self.q > 0.0 && self.q <= 1.0) {
            return Err(CliError::Usage(format!("--q {} not in (0, 1]", self.q)));
        }
        if self.algorithm.is_streaming() && self.r.is_none_or(|r| r < 1) {
            return Err(CliError::Usage(
                "streaming algorithms need --r (reservoir capacity, at least 1)".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetInfo {
    pub name: String,
    pub n: usize,
    pub m: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_span: Option<(u64, u64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MotifInfo {
    pub name: String,
    pub k: usize,
    pub l: usize,
    pub class: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsEcho {
    pub delta: u64,
    pub p: f64,
    pub q: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<u64>,
    pub seed: u64,
    pub trials: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report_every: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub pushes: u64,
    pub timestamp: u64,
    pub estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub trial: u64,
    pub seed: u64,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relative_error: Option<f64>,
    pub elapsed_s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trajectory: Option<Vec<TrajectoryPoint>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub algorithm: Algorithm,
    pub dataset: DatasetInfo,
    pub motif: MotifInfo,
    pub params: ParamsEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ground_truth: Option<f64>,
    pub trials: Vec<TrialResult>,
    pub mean: f64,
    pub sample_variance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_relative_error: Option<f64>,
    pub mean_elapsed_s: f64,
}

fn stem(path: &Path) -> String {
    path.file_stem().map_or_else(
        || path.display().to_string(),
        |s| s.to_string_lossy().into_owned(),
    )
}

fn class_name(class: MotifClass) -> String {
    match class {
        MotifClass::Star33 { center } => format!("star33(center={center})"),
        MotifClass::Triangle => "triangle".into(),
        MotifClass::Generic => "generic".into(),
    }
}

/// Executes `spec.trials` runs with seeds `seed, seed+1, ...`.
pub fn run(spec: &RunSpec) -> Result<EstimateReport> {
    spec.validate()?;
    let motif_text = std::fs::read_to_string(&spec.motif)
        .map_err(|e| CliError::Data(format!("{}: {e}", spec.motif.display())))?;
    let motif = TemporalMotif::parse(&motif_text)
        .map_err(|e| CliError::Data(format!("{}: {e}", spec.motif.display())))?;
    let g = load_edge_list(&spec.graph, &LoaderOptions::new())
        .map_err(|e| CliError::Data(format!("{}: {e}", spec.graph.display())))?;

    let truth = match spec.ground_truth {
        GroundTruth::None => None,
        GroundTruth::Value(v) => Some(v),
        GroundTruth::Auto => {
            if g.m() <= spec.ground_truth_cap {
                Some(exact_count(&g, &motif, spec.delta)? as f64)
            } else {
                log::warn!(
                    "graph has {} edges, above the ground-truth cap {}; relative errors omitted",
                    g.m(),
                    spec.ground_truth_cap
                );
                None
            }
        }
    };
    // A truth of zero leaves relative errors undefined.
    let rel_base = truth.filter(|t| *t > 0.0);

    let limits = NaiveLimits {
        max_edges: spec.naive_max_edges,
        ..NaiveLimits::default()
    };
    let mut trials = Vec::with_capacity(spec.trials as usize);
    for t in 0..spec.trials {
        let seed = spec.seed + t;
        let start = Instant::now();
        let (value, trajectory) = match spec.algorithm {
            Algorithm::Exact => (exact_count(&g, &motif, spec.delta)? as f64, None),
            Algorithm::Naive => (naive_count(&g, &motif, spec.delta, &limits)? as f64, None),
            Algorithm::Es => {
                let cfg = EstimatorConfig::new(spec.delta, spec.p, 1.0, seed);
                (es_estimate(&g, &motif, &cfg)?.value, None)
            }
            Algorithm::Ews => {
                let cfg = EstimatorConfig::new(spec.delta, spec.p, spec.q, seed);
                (ews_estimate(&g, &motif, &cfg)?.value, None)
            }
            Algorithm::Ses | Algorithm::Sews => {
                let (v, traj) = replay_stream(spec, &motif, seed)?;
                (v, Some(traj))
            }
        };
        let elapsed_s = start.elapsed().as_secs_f64();
        trials.push(TrialResult {
            trial: t,
            seed,
            value,
            relative_error: rel_base.map(|truth| (value - truth).abs() / truth),
            elapsed_s,
            trajectory,
        });
    }

    let n = trials.len() as f64;
    let mean = trials.iter().map(|t| t.value).sum::<f64>() / n;
    let sample_variance = if trials.len() < 2 {
        0.0
    } else {
        trials
            .iter()
            .map(|t| (t.value - mean) * (t.value - mean))
            .sum::<f64>()
            / (n - 1.0)
    };
    let rel_errors: Vec<f64> = trials.iter().filter_map(|t| t.relative_error).collect();
    let mean_relative_error = if rel_errors.is_empty() {
        None
    } else {
        Some(rel_errors.iter().sum::<f64>() / rel_errors.len() as f64)
    };
    let mean_elapsed_s = trials.iter().map(|t| t.elapsed_s).sum::<f64>() / n;

    Ok(EstimateReport {
        algorithm: spec.algorithm,
        dataset: DatasetInfo {
            name: stem(&spec.graph),
            n: g.n(),
            m: g.m(),
            time_span: g.time_span(),
        },
        motif: MotifInfo {
            name: stem(&spec.motif),
            k: motif.k(),
            l: motif.l(),
            class: class_name(motif.class()),
        },
        params: ParamsEcho {
            delta: spec.delta,
            p: spec.p,
            q: spec.q,
            r: spec.r.filter(|_| spec.algorithm.is_streaming()),
            seed: spec.seed,
            trials: spec.trials,
            report_every: spec.algorithm.is_streaming().then_some(spec.report_every),
        },
        ground_truth: truth,
        trials,
        mean,
        sample_variance,
        mean_relative_error,
        mean_elapsed_s,
    })
}

/// Replays the graph file as a stream and records the estimate trajectory.
fn replay_stream(
    spec: &RunSpec,
    motif: &TemporalMotif,
    seed: u64,
) -> Result<(f64, Vec<TrajectoryPoint>)> {
    let mode = if spec.algorithm == Algorithm::Ses {
        StreamMode::Ses
    } else {
        StreamMode::Sews
    };
    let q = if mode == StreamMode::Ses { 1.0 } else { spec.q };
    let mut cfg = StreamConfig::new(spec.delta, spec.r.expect("validated"), q, seed);
    if spec.lenient {
        cfg = cfg.lenient();
    }
    let mut st = StreamState::new(motif, mode, cfg)?;
    let file = File::open(&spec.graph)
        .map_err(|e| CliError::Data(format!("{}: {e}", spec.graph.display())))?;
    let mut edges = EdgeListStream::new(BufReader::new(file), LoaderOptions::new());
    let mut trajectory = Vec::new();
    let point = |est: StreamEstimate| TrajectoryPoint {
        pushes: est.m_t,
        timestamp: est.timestamp,
        estimate: est.value,
    };
    let mut last = st.estimate();
    while let Some(edge) = edges.next() {
        let edge = edge.map_err(|e| CliError::Data(format!("{}: {e}", spec.graph.display())))?;
        last = st.push(edge.src, edge.dst, edge.time)?;
        if last.m_t % spec.report_every == 0 {
            trajectory.push(point(last));
        }
    }
    if trajectory.last().is_none_or(|p| p.pushes != last.m_t) {
        trajectory.push(point(last));
    }
    Ok((last.value, trajectory))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

pub fn to_json(report: &EstimateReport) -> Result<String> {
    let mut s = serde_json::to_string_pretty(report)
        .map_err(|e| CliError::Data(format!("serializing report: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// One row per trial; the column set never changes and the header is always
/// written. Streaming trajectories are JSON-only.
pub fn to_csv(report: &EstimateReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "algorithm",
        "dataset",
        "motif",
        "delta",
        "p",
        "q",
        "r",
        "seed",
        "trials",
        "trial",
        "trial_seed",
        "value",
        "relative_error",
        "elapsed_s",
        "n",
        "m",
    ])
    .map_err(|e| CliError::Data(e.to_string()))?;
    let fixed = [
        report.algorithm.name().to_string(),
        report.dataset.name.clone(),
        report.motif.name.clone(),
        report.params.delta.to_string(),
        report.params.p.to_string(),
        report.params.q.to_string(),
        report.params.r.map_or_else(String::new, |r| r.to_string()),
        report.params.seed.to_string(),
        report.params.trials.to_string(),
    ];
    for t in &report.trials {
        let mut row: Vec<String> = fixed.to_vec();
        row.push(t.trial.to_string());
        row.push(t.seed.to_string());
        row.push(t.value.to_string());
        row.push(t.relative_error.map_or_else(String::new, |e| e.to_string()));
        row.push(t.elapsed_s.to_string());
        row.push(report.dataset.n.to_string());
        row.push(report.dataset.m.to_string());
        w.write_record(&row)
            .map_err(|e| CliError::Data(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Data(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Data(e.to_string()))
}

/// Renders to `out` (or stdout when absent) in the chosen format.
pub fn write_report(
    report: &EstimateReport,
    format: OutputFormat,
    out: Option<&Path>,
) -> Result<()> {
    let text = match format {
        OutputFormat::Json => to_json(report)?,
        OutputFormat::Csv => to_csv(report)?,
    };
    match out {
        Some(path) => {
            let mut f = File::create(path)
                .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
            f.write_all(text.as_bytes())?;
        }
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}
