//! Shot-to-shot phase randomization and single-pass statistics.
//!
//! Phases are drawn uniformly from `[-pi, pi)` with ChaCha8. A run is fixed
//! by `(algorithm_id, seed)`. Parallel runs split the sample range into
//! fixed-size chunks; chunk `k` draws from ChaCha stream `k` of the same seed
//! and the per-chunk statistics are merged in chunk order, so the result does
//! not depend on the number of worker threads.

use std::f64::consts::PI;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;

use crate::{Error, Result};

pub const CHACHA8: &str = "chacha8";
/// Samples per chunk in [`par_ensemble_average`].
pub const DEFAULT_CHUNK: u64 = 1 << 14;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RngSpec {
    algorithm_id: String,
    seed: u64,
}

impl RngSpec {
    pub fn new(algorithm_id: &str, seed: u64) -> Result<Self> {
        if algorithm_id != CHACHA8 {
            return Err(Error::Regime(format!(
                "RNG algorithm {algorithm_id:?}; supported: {CHACHA8:?}"
            )));
        }
        Ok(Self {
            algorithm_id: algorithm_id.to_owned(),
            seed,
        })
    }

    pub fn chacha8(seed: u64) -> Self {
        Self {
            algorithm_id: CHACHA8.to_owned(),
            seed,
        }
    }

    pub fn algorithm_id(&self) -> &str {
        &self.algorithm_id
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn rng(&self) -> ChaCha8Rng {
        self.substream(0)
    }

    /// Independent stream `stream` under the same seed.
    pub fn substream(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

/// Uniform `[0, 1)` from the top 53 bits of one output word.
pub fn unit_f64<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

pub fn uniform_phase<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    let g = -PI + 2.0 * PI * unit_f64(rng);
    if g >= PI {
        -PI
    } else {
        g
    }
}

pub fn sample_uniform_phase<R: RngCore + ?Sized>(rng: &mut R, count: usize) -> Vec<f64> {
    (0..count).map(|_| uniform_phase(rng)).collect()
}

/// Welford accumulator with exact pairwise merging.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RunningStats {
    count: u64,
    mean: f64,
    m2: f64,
}

impl RunningStats {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&mut self, other: &RunningStats) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let (na, nb) = (self.count as f64, other.count as f64);
        let n = na + nb;
        let delta = other.mean - self.mean;
        self.mean += delta * nb / n;
        self.m2 += other.m2 + delta * delta * na * nb / n;
        self.count += other.count;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn m2(&self) -> f64 {
        self.m2
    }

    /// Unbiased sample variance; `None` below two samples.
    pub fn variance(&self) -> Option<f64> {
        (self.count >= 2).then(|| self.m2 / (self.count - 1) as f64)
    }

    pub fn std_dev(&self) -> Option<f64> {
        self.variance().map(f64::sqrt)
    }

    /// Standard error of the mean.
    pub fn std_error(&self) -> Option<f64> {
        self.std_dev().map(|s| s / (self.count as f64).sqrt())
    }
}

impl FromIterator<f64> for RunningStats {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = RunningStats::new();
        for x in iter {
            s.push(x);
        }
        s
    }
}

/// Equal-width histogram on `[lo, hi]`; the last bin is closed.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn new(lo: f64, hi: f64, bins: usize) -> Result<Self> {
        if bins == 0 {
            return Err(Error::param("bins", "bins >= 1", 0.0));
        }
        if !(lo < hi && lo.is_finite() && hi.is_finite()) {
            return Err(Error::param("hi", "lo < hi", hi));
        }
        Ok(Self {
            lo,
            hi,
            counts: vec![0; bins],
        })
    }

    pub fn add(&mut self, x: f64) {
        if !(x >= self.lo && x <= self.hi) {
            return;
        }
        let bins = self.counts.len();
        let k = (((x - self.lo) / (self.hi - self.lo)) * bins as f64) as usize;
        self.counts[k.min(bins - 1)] += 1;
    }

    pub fn bin_width(&self) -> f64 {
        (self.hi - self.lo) / self.counts.len() as f64
    }

    pub fn bin_center(&self, k: usize) -> f64 {
        self.lo + (k as f64 + 0.5) * self.bin_width()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CosGammaResult {
    pub mean: f64,
    pub std_error: f64,
    pub stats: RunningStats,
    pub histogram: Histogram,
}

/// Mean and standard error of `cos gamma` over `count` uniform phases, with
/// a histogram of `cos gamma` on `[-1, 1]`.
pub fn cos_gamma_experiment<R: RngCore + ?Sized>(
    rng: &mut R,
    count: u64,
    bins: usize,
) -> Result<CosGammaResult> {
    if count < 2 {
        return Err(Error::param("count", "count >= 2", count as f64));
    }
    let mut stats = RunningStats::new();
    let mut histogram = Histogram::new(-1.0, 1.0, bins)?;
    for _ in 0..count {
        let c = uniform_phase(rng).cos();
        stats.push(c);
        histogram.add(c);
    }
    Ok(CosGammaResult {
        mean: stats.mean(),
        std_error: stats.std_error().expect("count >= 2"),
        stats,
        histogram,
    })
}

/// Statistics of `f` over `count` draws of `K` independent uniform phases.
pub fn ensemble_average<const K: usize, R, F>(f: F, rng: &mut R, count: u64) -> RunningStats
where
    R: RngCore + ?Sized,
    F: Fn([f64; K]) -> f64,
{
    let mut stats = RunningStats::new();
    for _ in 0..count {
        let phases = std::array::from_fn(|_| uniform_phase(rng));
        stats.push(f(phases));
    }
    stats
}

/// Chunked parallel form of [`ensemble_average`]. Deterministic for a given
/// `(spec, count, chunk)` whatever the thread count.
pub fn par_ensemble_average<const K: usize, F>(
    f: F,
    spec: &RngSpec,
    count: u64,
    chunk: u64,
) -> Result<RunningStats>
where
    F: Fn([f64; K]) -> f64 + Sync,
{
    if chunk == 0 {
        return Err(Error::param("chunk", "chunk >= 1", 0.0));
    }
    let chunks = count.div_ceil(chunk);
    let parts: Vec<RunningStats> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let len = chunk.min(count - k * chunk);
            ensemble_average(&f, &mut spec.substream(k), len)
        })
        .collect();
    let mut total = RunningStats::new();
    for p in &parts {
        total.merge(p);
    }
    Ok(total)
}
