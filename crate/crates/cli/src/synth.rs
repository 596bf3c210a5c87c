//! Synthetic edge-list generation. Deterministic for a given spec: the
//! same seed always produces byte-identical output. Edges are emitted in
//! chronological order so the files replay directly as streams.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, Zipf};

use crate::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SynthModel {
    /// Independent uniform endpoints and timestamps.
    Uniform,
    /// Timestamps clustered into short bursts.
    Bursty,
    /// Zipf-weighted vertex pairs: a few pairs carry most of the edges,
    /// uniform timestamps.
    SkewedPairs,
}

#[derive(Debug, Clone, Copy)]
pub struct SynthSpec {
    pub n: u64,
    pub m: u64,
    /// Timestamps fall in `0..span`.
    pub span: u64,
    pub model: SynthModel,
    pub seed: u64,
}

fn uniform_pair(rng: &mut ChaCha8Rng, n: u64) -> (u64, u64) {
    let u = rng.random_range(0..n);
    let mut v = rng.random_range(0..n - 1);
    if v >= u {
        v += 1;
    }
    (u, v)
}

/// Ordered pair with index `idx` in `0..n*(n-1)`, skipping the diagonal.
fn pair_from_index(idx: u64, n: u64) -> (u64, u64) {
    let u = idx / (n - 1);
    let w = idx % (n - 1);
    let v = if w >= u { w + 1 } else { w };
    (u, v)
}

pub fn generate(spec: &SynthSpec) -> Result<Vec<(u64, u64, u64)>> {
    if spec.n < 2 {
        return Err(CliError::Usage(format!(
            "--n must be at least 2, got {}",
            spec.n
        )));
    }
    if spec.m < 1 {
        return Err(CliError::Usage(format!(
            "--m must be at least 1, got {}",
            spec.m
        )));
    }
    if spec.span < 1 {
        return Err(CliError::Usage(format!(
            "--span must be at least 1, got {}",
            spec.span
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut triples: Vec<(u64, u64, u64)> = match spec.model {
        SynthModel::Uniform => (0..spec.m)
            .map(|_| {
                let (u, v) = uniform_pair(&mut rng, spec.n);
                (u, v, rng.random_range(0..spec.span))
            })
            .collect(),
        SynthModel::Bursty => {
            // Bursts of geometrically varied size around random centers.
            let burst = Poisson::new(7.0).expect("fixed positive lambda");
            let width = spec.span / 200 + 1;
            let mut out = Vec::with_capacity(spec.m as usize);
            while (out.len() as u64) < spec.m {
                let center = rng.random_range(0..spec.span);
                let size = 1 + burst.sample(&mut rng) as u64;
                for _ in 0..size {
                    if out.len() as u64 == spec.m {
                        break;
                    }
                    let (u, v) = uniform_pair(&mut rng, spec.n);
                    let t = (center + rng.random_range(0..width)).min(spec.span - 1);
                    out.push((u, v, t));
                }
            }
            out
        }
        SynthModel::SkewedPairs => {
            let pairs = spec.n * (spec.n - 1);
            let zipf = Zipf::new(pairs as f64, 1.5)
                .map_err(|e| CliError::Usage(format!("zipf setup: {e}")))?;
            (0..spec.m)
                .map(|_| {
                    let rank = zipf.sample(&mut rng) as u64;
                    let (u, v) = pair_from_index(rank - 1, spec.n);
                    (u, v, rng.random_range(0..spec.span))
                })
                .collect()
        }
    };
    // Stable: equal timestamps keep generation order.
    triples.sort_by_key(|&(_, _, t)| t);
    Ok(triples)
}

pub fn write_triples<W: Write>(triples: &[(u64, u64, u64)], mut w: W) -> std::io::Result<()> {
    for &(u, v, t) in triples {
        writeln!(w, "{u} {v} {t}")?;
    }
    Ok(())
}

pub fn render(triples: &[(u64, u64, u64)]) -> String {
    let mut out = Vec::new();
    write_triples(triples, &mut out).expect("writing to a Vec cannot fail");
    String::from_utf8(out).expect("ascii only")
}
