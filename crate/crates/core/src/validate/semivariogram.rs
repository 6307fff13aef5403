use crate::engine::Locations;
use crate::Error;
use rayon::prelude::*;

/// Binned omnidirectional Matheron estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct Semivariogram {
    pub lag_centers: Vec<f64>,
    /// `None` for bins without pairs.
    pub values: Vec<Option<f64>>,
    pub pair_counts: Vec<u64>,
    pub max_dist: f64,
    pub num_bins: usize,
}

/// Pair-to-bin assignment for a fixed point set, reusable across realizations.
#[derive(Debug, Clone)]
pub struct PairBinning {
    n: usize,
    num_bins: usize,
    max_dist: f64,
    /// `(i, j, bin)` for every pair within `max_dist`, grouped by `i`.
    pairs: Vec<(u32, u32, u16)>,
    /// Offsets into `pairs` at fixed row boundaries, for deterministic parallel sums.
    chunks: Vec<usize>,
    pub pair_counts: Vec<u64>,
    /// Sum of pair distances per bin.
    pub distance_sums: Vec<f64>,
    sub_bins: usize,
    /// Pair counts per sub-bin, `sub_bins` per bin.
    pub sub_counts: Vec<u64>,
}

const ROWS_PER_CHUNK: usize = 32;

impl PairBinning {
    pub fn new(locations: &Locations, num_bins: usize, max_dist: f64) -> Result<Self, Error> {
        let n = locations.len();
        if n < 2 {
            return Err(Error::Input("a semivariogram needs at least two locations".into()));
        }
        if !(max_dist > 0.0) || num_bins == 0 || num_bins > u16::MAX as usize {
            return Err(Error::Input(format!("bad binning: {num_bins} bins up to {max_dist}")));
        }
        if n > u32::MAX as usize {
            return Err(Error::Input("too many locations".into()));
        }
        let width = max_dist / num_bins as f64;
        let sub_bins = 32;
        let row_pairs: Vec<Vec<(u32, u32, u16, f64)>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let si = locations.row(i);
                (i + 1..n)
                    .filter_map(|j| {
                        let h = si.iter().zip(locations.row(j)).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
                        if h > max_dist {
                            return None;
                        }
                        let k = ((h / width) as usize).min(num_bins - 1);
                        Some((i as u32, j as u32, k as u16, h))
                    })
                    .collect()
            })
            .collect();
        let mut pairs = Vec::with_capacity(row_pairs.iter().map(Vec::len).sum());
        let mut chunks = vec![0];
        let mut pair_counts = vec![0u64; num_bins];
        let mut distance_sums = vec![0.0; num_bins];
        let mut sub_counts = vec![0u64; num_bins * sub_bins];
        for (i, row) in row_pairs.into_iter().enumerate() {
            for (a, b, k, h) in row {
                pairs.push((a, b, k));
                pair_counts[k as usize] += 1;
                distance_sums[k as usize] += h;
                let s = ((h / width - k as f64) * sub_bins as f64) as usize;
                sub_counts[k as usize * sub_bins + s.min(sub_bins - 1)] += 1;
            }
            if (i + 1) % ROWS_PER_CHUNK == 0 {
                chunks.push(pairs.len());
            }
        }
        if *chunks.last().expect("non-empty") != pairs.len() {
            chunks.push(pairs.len());
        }
        Ok(Self { n, num_bins, max_dist, pairs, chunks, pair_counts, distance_sums, sub_bins, sub_counts })
    }

    pub fn num_bins(&self) -> usize {
        self.num_bins
    }

    pub fn max_dist(&self) -> f64 {
        self.max_dist
    }

    pub fn lag_centers(&self) -> Vec<f64> {
        let w = self.max_dist / self.num_bins as f64;
        (0..self.num_bins).map(|k| (k as f64 + 0.5) * w).collect()
    }

    /// Matheron estimate for one realization on this point set.
    pub fn estimate(&self, values: &[f64]) -> Result<Semivariogram, Error> {
        if values.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: values.len() });
        }
        let partial: Vec<Vec<f64>> = self
            .chunks
            .par_windows(2)
            .map(|w| {
                let mut s = vec![0.0; self.num_bins];
                for &(i, j, k) in &self.pairs[w[0]..w[1]] {
                    let d = values[i as usize] - values[j as usize];
                    s[k as usize] += d * d;
                }
                s
            })
            .collect();
        let mut sums = vec![0.0; self.num_bins];
        for p in partial {
            for (a, b) in sums.iter_mut().zip(p) {
                *a += b;
            }
        }
        let values = sums
            .iter()
            .zip(&self.pair_counts)
            .map(|(&s, &c)| (c > 0).then(|| s / (2.0 * c as f64)))
            .collect();
        Ok(Semivariogram {
            lag_centers: self.lag_centers(),
            values,
            pair_counts: self.pair_counts.clone(),
            max_dist: self.max_dist,
            num_bins: self.num_bins,
        })
    }

    /// Average of `f(h)` over the pairs of each bin, from sub-bin counts at sub-bin centers.
    pub fn pair_average<F: Fn(f64) -> Result<f64, Error>>(&self, f: F) -> Result<Vec<Option<f64>>, Error> {
        let w = self.max_dist / self.num_bins as f64;
        let sw = w / self.sub_bins as f64;
        (0..self.num_bins)
            .map(|k| {
                if self.pair_counts[k] == 0 {
                    return Ok(None);
                }
                let mut acc = 0.0;
                for s in 0..self.sub_bins {
                    let c = self.sub_counts[k * self.sub_bins + s];
                    if c > 0 {
                        acc += c as f64 * f(k as f64 * w + (s as f64 + 0.5) * sw)?;
                    }
                }
                Ok(Some(acc / self.pair_counts[k] as f64))
            })
            .collect()
    }
}

/// `γ̂(h_k) = Σ_{N_k} (v_i − v_j)² / (2|N_k|)` over `num_bins` equal-width bins up to `max_dist`.
pub fn empirical_semivariogram(
    locations: &Locations,
    values: &[f64],
    num_bins: usize,
    max_dist: f64,
) -> Result<Semivariogram, Error> {
    PairBinning::new(locations, num_bins, max_dist)?.estimate(values)
}
