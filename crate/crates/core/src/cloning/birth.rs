//! Stimulated-emission birth process: starting from N photons in the signal mode and none in
//! the orthogonal mode, each new photon joins mode k with probability ∝ n_k + 1 until M photons
//! are present. The mean signal fraction is the cloning fidelity.

use num_traits::{FromPrimitive, Num};
use rand::Rng;
use rayon::prelude::*;

use super::{CloningError, CopyCounts};
use crate::rng::{split_trials, substream};

pub(crate) const MIN_TRIALS: u64 = 10_000;
const PARTITIONS: usize = 8;

/// P(n_signal = N + k) at the end of the process, k = 0..=M−N.
pub fn birth_process_distribution<T: Num + FromPrimitive + Clone>(c: CopyCounts) -> Vec<T> {
    let n = c.inputs();
    let steps = (c.outputs() - n) as usize;
    let int = |x: u64| T::from_u64(x).expect("integer representable in scalar type");
    let mut dist = vec![T::zero(); steps + 1];
    dist[0] = T::one();
    for step in 0..steps {
        // `step` photons added so far; total n + step, both modes get +1 in the weights
        let denom = int(n + step as u64 + 2);
        let mut next = vec![T::zero(); steps + 1];
        for k in 0..=step {
            if dist[k].is_zero() {
                continue;
            }
            let signal = int(n + k as u64 + 1);
            let other = int((step - k) as u64 + 1);
            next[k + 1] = next[k + 1].clone() + dist[k].clone() * signal / denom.clone();
            next[k] = next[k].clone() + dist[k].clone() * other / denom.clone();
        }
        dist = next;
    }
    dist
}

/// Mean signal fraction E[n_signal] / M from the exact distribution.
pub fn birth_process_exact<T: Num + FromPrimitive + Clone>(c: CopyCounts) -> T {
    let n = c.inputs();
    let int = |x: u64| T::from_u64(x).expect("integer representable in scalar type");
    let mean = birth_process_distribution::<T>(c)
        .into_iter()
        .enumerate()
        .fold(T::zero(), |acc, (k, p)| acc + p * int(n + k as u64));
    mean / int(c.outputs())
}

/// Monte Carlo mean fidelity and its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McFidelity {
    pub mean: f64,
    pub std_error: f64,
    pub trials: u64,
}

fn run_partition(c: CopyCounts, trials: u64, seed: u64, index: u64) -> (f64, f64) {
    let mut rng = substream(seed, index);
    let (n, m) = (c.inputs(), c.outputs());
    let (mut sum, mut sum2) = (0.0, 0.0);
    for _ in 0..trials {
        let mut signal = n;
        for total in n..m {
            // P(signal) = (n_s + 1) / (total + 2)
            if rng.random_range(0..total + 2) < signal + 1 {
                signal += 1;
            }
        }
        let f = signal as f64 / m as f64;
        sum += f;
        sum2 += f * f;
    }
    (sum, sum2)
}

/// Seeded simulation of the birth process; `(counts, trials, seed)` fixes the output.
pub fn birth_process_mc(c: CopyCounts, trials: u64, seed: u64) -> Result<McFidelity, CloningError> {
    if trials < MIN_TRIALS {
        return Err(CloningError::Trials(trials));
    }
    let parts: Vec<(f64, f64)> = split_trials(trials, PARTITIONS)
        .par_iter()
        .enumerate()
        .map(|(k, &t)| run_partition(c, t, seed, k as u64))
        .collect();
    let (sum, sum2) = parts.into_iter().fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    let n = trials as f64;
    let mean = sum / n;
    let var = (sum2 / n - mean * mean).max(0.0) * n / (n - 1.0);
    Ok(McFidelity {
        mean,
        std_error: (var / n).sqrt(),
        trials,
    })
}
