//! Joins two benchmark reports into an error-and-speedup comparison.

use serde::{Deserialize, Serialize};

use crate::run::EstimateReport;
use crate::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SideSummary {
    pub algorithm: String,
    pub mean: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_relative_error: Option<f64>,
    pub mean_elapsed_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub dataset: String,
    pub motif: String,
    pub delta: u64,
    pub a: SideSummary,
    pub b: SideSummary,
    /// `a`'s error over `b`'s, when both are known and `b`'s is nonzero.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error_ratio: Option<f64>,
    /// How many times faster `b` ran than `a`.
    pub speedup: f64,
}

fn summary(r: &EstimateReport) -> SideSummary {
    SideSummary {
        algorithm: r.algorithm.name().to_string(),
        mean: r.mean,
        mean_relative_error: r.mean_relative_error,
        mean_elapsed_s: r.mean_elapsed_s,
    }
}

/// The reports must describe the same (dataset, motif, delta) workload.
pub fn compare(a: &EstimateReport, b: &EstimateReport) -> Result<Comparison> {
    let key_a = (&a.dataset.name, &a.motif.name, a.params.delta);
    let key_b = (&b.dataset.name, &b.motif.name, b.params.delta);
    if key_a != key_b {
        return Err(CliError::Data(format!(
            "reports do not join: ({}, {}, {}) vs ({}, {}, {})",
            key_a.0, key_a.1, key_a.2, key_b.0, key_b.1, key_b.2
        )));
    }
    let error_ratio = match (a.mean_relative_error, b.mean_relative_error) {
        (Some(ea), Some(eb)) if eb > 0.0 => Some(ea / eb),
        _ => None,
    };
    let speedup = if a.mean_elapsed_s == b.mean_elapsed_s {
        1.0
    } else {
        a.mean_elapsed_s / b.mean_elapsed_s
    };
    Ok(Comparison {
        dataset: a.dataset.name.clone(),
        motif: a.motif.name.clone(),
        delta: a.params.delta,
        a: summary(a),
        b: summary(b),
        error_ratio,
        speedup,
    })
}

fn fmt_err(e: Option<f64>) -> String {
    e.map_or_else(|| "-".into(), |e| format!("{e:.4}"))
}

/// Plain-text table, one line per side plus the ratios.
pub fn render_text(c: &Comparison) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "dataset {} motif {} delta {}\n",
        c.dataset, c.motif, c.delta
    ));
    out.push_str(&format!(
        "{:<10} {:>16} {:>12} {:>12}\n",
        "algorithm", "mean", "rel_error", "elapsed_s"
    ));
    for side in [&c.a, &c.b] {
        out.push_str(&format!(
            "{:<10} {:>16.4} {:>12} {:>12.6}\n",
            side.algorithm,
            side.mean,
            fmt_err(side.mean_relative_error),
            side.mean_elapsed_s
        ));
    }
    out.push_str(&format!(
        "error_ratio {} speedup {:.2}\n",
        fmt_err(c.error_ratio),
        c.speedup
    ));
    out
}

pub fn to_json(c: &Comparison) -> Result<String> {
    let mut s = serde_json::to_string_pretty(c)
        .map_err(|e| CliError::Data(format!("serializing comparison: {e}")))?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::run::{self, Algorithm, GroundTruth, RunSpec};
    use std::io::Write as _;

    fn reports() -> (EstimateReport, EstimateReport) {
        let mut graph = tempfile::NamedTempFile::new().unwrap();
        graph
            .write_all(b"0 1 1\n1 2 5\n2 3 8\n0 1 9\n1 2 12\n")
            .unwrap();
        let mut motif = tempfile::NamedTempFile::new().unwrap();
        motif.write_all(b"3 2\n0 1\n1 2\n").unwrap();
        let mut spec = RunSpec::new(
            Algorithm::Exact,
            graph.path().to_path_buf(),
            motif.path().to_path_buf(),
            10,
        );
        spec.trials = 2;
        spec.ground_truth = GroundTruth::Auto;
        let a = run::run(&spec).unwrap();
        spec.algorithm = Algorithm::Es;
        spec.p = 0.9;
        let b = run::run(&spec).unwrap();
        (a, b)
    }

    #[test]
    fn self_comparison_has_unit_speedup() {
        let (a, _) = reports();
        let c = compare(&a, &a).unwrap();
        assert_eq!(c.speedup, 1.0);
        assert_eq!(c.a, c.b);
    }

    #[test]
    fn join_requires_matching_keys() {
        let (a, b) = reports();
        let c = compare(&a, &b).unwrap();
        assert_eq!(c.a.algorithm, "exact");
        assert_eq!(c.b.algorithm, "es");
        assert!(c.speedup > 0.0);

        let mut odd = b.clone();
        odd.params.delta = 99;
        assert!(matches!(compare(&a, &odd), Err(CliError::Data(_))));
    }

    #[test]
    fn text_table_mentions_both_algorithms() {
        let (a, b) = reports();
        let c = compare(&a, &b).unwrap();
        let text = render_text(&c);
        assert!(text.contains("exact"));
        assert!(text.contains("es"));
        assert!(text.contains("speedup"));
    }
}
