//! Convergent cross mapping via simplex projection on delay embeddings.
//!
//! The skill of estimating `y` from the shadow manifold of `x` measures how
//! much information about `y` is recoverable from `x`'s own history, which
//! is the signature of `y` driving `x`. Library points are the first `L`
//! embedded points; skill is always evaluated on the held-out points after
//! the largest library, so curves for different `L` share a test set.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::{is_constant, pearson};

pub const DEFAULT_E: usize = 3;
pub const DEFAULT_TAU: usize = 1;
pub const DEFAULT_LIBRARY_COUNT: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingSpec {
    pub e: usize,
    pub tau: usize,
    pub library_sizes: Vec<usize>,
}

impl EmbeddingSpec {
    /// `count` log-spaced library sizes from 20 up to 80% of the embedded
    /// series length.
    pub fn log_spaced(e: usize, tau: usize, series_len: usize, count: usize) -> Self {
        let embedded = series_len.saturating_sub((e.max(1) - 1) * tau);
        let hi = ((0.8 * embedded as f64).floor() as usize).max(20);
        let (lo_ln, hi_ln) = (20f64.ln(), (hi as f64).ln());
        let mut sizes: Vec<usize> = (0..count.max(1))
            .map(|i| {
                let frac = if count > 1 {
                    i as f64 / (count - 1) as f64
                } else {
                    1.0
                };
                (lo_ln + frac * (hi_ln - lo_ln)).exp().round() as usize
            })
            .collect();
        sizes.dedup();
        Self {
            e,
            tau,
            library_sizes: sizes,
        }
    }

    pub fn default_for(series_len: usize) -> Self {
        Self::log_spaced(DEFAULT_E, DEFAULT_TAU, series_len, DEFAULT_LIBRARY_COUNT)
    }

    pub fn validate(&self, series_len: usize) -> Result<()> {
        if self.e < 2 || self.tau < 1 {
            return Err(Error::InvalidParams(format!(
                "embedding needs E >= 2 and tau >= 1, got E={}, tau={}",
                self.e, self.tau
            )));
        }
        if self.library_sizes.is_empty() || self.library_sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParams(
                "library sizes must be non-empty and strictly increasing".into(),
            ));
        }
        let min_lib = self.library_sizes[0];
        if min_lib < self.e + 2 {
            return Err(Error::InsufficientNeighbors {
                library: min_lib,
                required: self.e + 2,
            });
        }
        let max_lib = *self.library_sizes.last().unwrap();
        if series_len < max_lib + self.e * self.tau {
            return Err(Error::InvalidParams(format!(
                "series length {series_len} shorter than max library {max_lib} + E*tau {}",
                self.e * self.tau
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CcmResult {
    pub library_sizes: Vec<usize>,
    /// Skill of estimating `x` from the manifold of `y`, per library size.
    pub x_to_y: Vec<f64>,
    /// Skill of estimating `y` from the manifold of `x`, per library size.
    pub y_to_x: Vec<f64>,
}

/// Cross-map skill curves in both directions.
pub fn ccm(x: &[f64], y: &[f64], spec: &EmbeddingSpec) -> Result<CcmResult> {
    if x.len() != y.len() {
        return Err(Error::InvalidParams(format!(
            "series lengths differ: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    Ok(CcmResult {
        library_sizes: spec.library_sizes.clone(),
        x_to_y: cross_map_skill(y, x, spec)?,
        y_to_x: cross_map_skill(x, y, spec)?,
    })
}

/// Skill of estimating `target` from the delay embedding of `source`.
pub fn cross_map_skill(source: &[f64], target: &[f64], spec: &EmbeddingSpec) -> Result<Vec<f64>> {
    spec.validate(source.len())?;
    if is_constant(source) || is_constant(target) {
        return Err(Error::DegenerateSeries(
            "cross mapping a constant series".into(),
        ));
    }
    let manifold = Embedding::new(source, spec.e, spec.tau);
    let offset = (spec.e - 1) * spec.tau;
    let aligned = &target[offset..];
    let max_lib = *spec.library_sizes.last().unwrap();
    let held_out: Vec<usize> = (max_lib..manifold.len()).collect();
    let observed: Vec<f64> = held_out.iter().map(|&i| aligned[i]).collect();

    spec.library_sizes
        .par_iter()
        .map(|&lib| {
            let k = spec.e + 1;
            let mut neighbors = Vec::with_capacity(k);
            let estimates: Vec<f64> = held_out
                .iter()
                .map(|&i| {
                    manifold.nearest(i, lib, k, &mut neighbors);
                    simplex_estimate(&neighbors, aligned)
                })
                .collect();
            pearson(&estimates, &observed)
        })
        .collect()
}

/// Exponentially weighted average of neighbor targets, `w = exp(-d / d_min)`.
fn simplex_estimate(neighbors: &[(f64, usize)], target: &[f64]) -> f64 {
    let d_min = neighbors[0].0.sqrt().max(f64::MIN_POSITIVE);
    let (mut num, mut den) = (0.0, 0.0);
    for &(d2, j) in neighbors {
        let w = (-d2.sqrt() / d_min).exp();
        num += w * target[j];
        den += w;
    }
    num / den
}

/// Delay vectors `(s[t], s[t - tau], ..., s[t - (E-1) tau])`, stored flat.
struct Embedding {
    dim: usize,
    points: Vec<f64>,
}

impl Embedding {
    fn new(series: &[f64], e: usize, tau: usize) -> Self {
        let offset = (e - 1) * tau;
        let n = series.len() - offset;
        let mut points = Vec::with_capacity(n * e);
        for i in 0..n {
            let t = i + offset;
            points.extend((0..e).map(|j| series[t - j * tau]));
        }
        Self { dim: e, points }
    }

    fn len(&self) -> usize {
        self.points.len() / self.dim
    }

    fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    /// The `k` library points (indices `< lib`) closest to point `query`,
    /// as `(squared distance, index)` ascending. Equal distances keep the
    /// lower index first.
    fn nearest(&self, query: usize, lib: usize, k: usize, out: &mut Vec<(f64, usize)>) {
        out.clear();
        let q = self.point(query);
        for j in 0..lib {
            let d2: f64 = self
                .point(j)
                .iter()
                .zip(q)
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            if out.len() == k && d2 >= out[k - 1].0 {
                continue;
            }
            let pos = out.partition_point(|&(d, _)| d <= d2);
            if out.len() == k {
                out.pop();
            }
            out.insert(pos, (d2, j));
        }
    }
}
