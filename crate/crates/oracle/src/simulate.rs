//! Seeded simple-random-walk simulation, parallel over fixed-size sample blocks.
//!
//! Block `b` draws from ChaCha20 seeded with the user seed on stream `b`, and
//! blocks are reduced in index order, so results do not depend on thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use drg_walk_core::spectral::ProjectedChain;

use crate::error::{OracleError, Result};
use crate::graph::ExplicitGraph;

pub const RNG_NAME: &str = "ChaCha20";
pub const MIN_SAMPLES: u64 = 100;
const BLOCK: u64 = 1000;
/// Environment variable capping the number of worker threads.
pub const THREADS_VAR: &str = "DRG_WALK_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// First time `t >= 1` at `target`.
    Hitting { start: usize, target: usize },
    /// First time every vertex has been seen; the start counts at `t = 0`.
    Cover { start: usize },
    /// Visits to `tracked` during `(0, tau_target^+]`.
    Visits {
        start: usize,
        tracked: usize,
        target: usize,
    },
    /// Distinct vertices other than `target` seen during `(0, tau_target^+]`.
    Distinct { start: usize, target: usize },
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Hitting { .. } => "hitting",
            Mode::Cover { .. } => "cover",
            Mode::Visits { .. } => "visits",
            Mode::Distinct { .. } => "distinct",
        }
    }
}

/// Sample mean, variance and standard error of the mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean: f64,
    pub var: f64,
    pub stderr: f64,
}

impl Summary {
    fn from_sums(count: u64, sum: f64, sum_sq: f64) -> Self {
        let n = count as f64;
        let mean = sum / n;
        let var = if count > 1 {
            (sum_sq - n * mean * mean) / (n - 1.0)
        } else {
            0.0
        };
        let var = var.max(0.0);
        Self {
            mean,
            var,
            stderr: (var / n).sqrt(),
        }
    }

    /// Whether `value` lies within `z` standard errors of the mean.
    pub fn within(&self, value: f64, z: f64) -> bool {
        (self.mean - value).abs() <= z * self.stderr.max(f64::EPSILON)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkSample {
    pub mode: &'static str,
    pub seed: u64,
    pub samples: u64,
    pub rng: &'static str,
    /// Summary of the per-sample record (time, or visit count).
    pub summary: Summary,
    /// Visits mode only: the indicator that `tracked` was seen at all.
    pub visited: Option<Summary>,
}

#[derive(Default, Clone, Copy)]
struct Sums {
    count: u64,
    sum: f64,
    sum_sq: f64,
    hits: f64,
}

impl Sums {
    fn add(&mut self, record: u64) {
        let x = record as f64;
        self.count += 1;
        self.sum += x;
        self.sum_sq += x * x;
        if record > 0 {
            self.hits += 1.0;
        }
    }

    fn merge(self, other: Sums) -> Sums {
        Sums {
            count: self.count + other.count,
            sum: self.sum + other.sum,
            sum_sq: self.sum_sq + other.sum_sq,
            hits: self.hits + other.hits,
        }
    }
}

/// Worker count from `DRG_WALK_THREADS`, if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_VAR).ok()?.parse().ok().filter(|&n| n > 0)
}

fn run_blocks(samples: u64, seed: u64, draw: impl Fn(&mut ChaCha20Rng) -> u64 + Sync) -> Result<Sums> {
    if samples < MIN_SAMPLES {
        return Err(OracleError::InvalidArgument(format!(
            "need at least {MIN_SAMPLES} samples, got {samples}"
        )));
    }
    let blocks = samples.div_ceil(BLOCK);
    let work = || -> Vec<Sums> {
        (0..blocks)
            .into_par_iter()
            .map(|b| {
                let mut rng = ChaCha20Rng::seed_from_u64(seed);
                rng.set_stream(b);
                let size = BLOCK.min(samples - b * BLOCK);
                let mut sums = Sums::default();
                for _ in 0..size {
                    sums.add(draw(&mut rng));
                }
                sums
            })
            .collect()
    };
    let per_block = match thread_cap() {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| OracleError::InvalidArgument(e.to_string()))?
            .install(work),
        None => work(),
    };
    Ok(per_block.into_iter().fold(Sums::default(), Sums::merge))
}

fn step(g: &ExplicitGraph, x: usize, rng: &mut ChaCha20Rng) -> usize {
    let row = g.neighbors(x);
    row[rng.random_range(0..row.len())]
}

fn draw(g: &ExplicitGraph, mode: Mode, rng: &mut ChaCha20Rng) -> u64 {
    match mode {
        Mode::Hitting { start, target } => {
            let mut x = start;
            let mut t = 0;
            loop {
                x = step(g, x, rng);
                t += 1;
                if x == target {
                    return t;
                }
            }
        }
        Mode::Cover { start } => {
            let mut seen = vec![false; g.vertex_count()];
            seen[start] = true;
            let mut left = g.vertex_count() - 1;
            let (mut x, mut t) = (start, 0);
            while left > 0 {
                x = step(g, x, rng);
                t += 1;
                if !seen[x] {
                    seen[x] = true;
                    left -= 1;
                }
            }
            t
        }
        Mode::Visits { start, tracked, target } => {
            let mut x = start;
            let mut visits = 0;
            loop {
                x = step(g, x, rng);
                if x == tracked {
                    visits += 1;
                }
                if x == target {
                    return visits;
                }
            }
        }
        Mode::Distinct { start, target } => {
            let mut seen = vec![false; g.vertex_count()];
            let mut count = 0;
            let mut x = start;
            loop {
                x = step(g, x, rng);
                if x == target {
                    return count;
                }
                if !seen[x] {
                    seen[x] = true;
                    count += 1;
                }
            }
        }
    }
}

pub fn simulate(g: &ExplicitGraph, mode: Mode, samples: u64, seed: u64) -> Result<WalkSample> {
    let n = g.vertex_count();
    let vertices: Vec<usize> = match mode {
        Mode::Hitting { start, target } => vec![start, target],
        Mode::Cover { start } => vec![start],
        Mode::Visits { start, tracked, target } => vec![start, tracked, target],
        Mode::Distinct { start, target } => vec![start, target],
    };
    if let Some(bad) = vertices.iter().find(|&&v| v >= n) {
        return Err(OracleError::InvalidArgument(format!("no vertex {bad}")));
    }
    if let Mode::Visits { tracked, target, .. } = mode {
        if tracked == target {
            return Err(OracleError::InvalidArgument(
                "tracked vertex must differ from the target".into(),
            ));
        }
    }
    let sums = run_blocks(samples, seed, |rng| draw(g, mode, rng))?;
    let visited = matches!(mode, Mode::Visits { .. }).then(|| Summary::from_sums(sums.count, sums.hits, sums.hits));
    Ok(WalkSample {
        mode: mode.name(),
        seed,
        samples,
        rng: RNG_NAME,
        summary: Summary::from_sums(sums.count, sums.sum, sums.sum_sq),
        visited,
    })
}

/// Hitting time of state 0 from `start` for the projected birth-death chain.
pub fn simulate_chain(chain: &ProjectedChain, start: usize, samples: u64, seed: u64) -> Result<WalkSample> {
    let states = chain.states();
    if start == 0 || start >= states {
        return Err(OracleError::InvalidArgument(format!("start must lie in 1..{states}")));
    }
    let probs: Vec<[f64; 3]> = (0..states)
        .map(|i| {
            let p = |j: Option<usize>| {
                j.filter(|&j| j < states)
                    .map_or(0.0, |j| drg_walk_core::rational::to_f64(&chain.kernel(i, j)))
            };
            [p(i.checked_sub(1)), p(Some(i)), p(Some(i + 1))]
        })
        .collect();
    let sums = run_blocks(samples, seed, |rng| {
        let (mut x, mut t) = (start, 0u64);
        while x != 0 {
            let r: f64 = rng.random();
            let [down, stay, _] = probs[x];
            x = if r < down {
                x - 1
            } else if r < down + stay {
                x
            } else {
                x + 1
            };
            t += 1;
        }
        t
    })?;
    Ok(WalkSample {
        mode: "hitting",
        seed,
        samples,
        rng: RNG_NAME,
        summary: Summary::from_sums(sums.count, sums.sum, sums.sum_sq),
        visited: None,
    })
}
