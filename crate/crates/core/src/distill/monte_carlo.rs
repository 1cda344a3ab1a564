use rand::Rng;
use rayon::prelude::*;

use super::advantage::{AdOutcome, MAX_BLOCK};
use super::DistillError;
use crate::qkd::{binary_entropy, SymbolDistribution};
use crate::rng::{split_trials, substream};

pub const MIN_TRIALS: u64 = 10_000;

/// Seeded Monte Carlo run; `(seed, trials, partitions)` fixes the output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub trials: u64,
    pub seed: u64,
    pub partitions: usize,
}

impl McConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        Self {
            trials,
            seed,
            partitions: 8,
        }
    }
}

/// Estimates of [`AdOutcome`] with one standard error per field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdEstimate {
    pub estimate: AdOutcome,
    pub accepted: u64,
    pub se_p_accept: f64,
    pub se_eps_post: f64,
    pub se_i_ab: f64,
    pub se_i_ae: f64,
}

#[derive(Debug, Default, Clone, Copy)]
struct Tally {
    accepted: u64,
    errors: u64,
    // Σ h(posterior) and Σ h² over accepted blocks
    sum_h: f64,
    sum_h2: f64,
}

impl Tally {
    fn merge(self, other: Tally) -> Tally {
        Tally {
            accepted: self.accepted + other.accepted,
            errors: self.errors + other.errors,
            sum_h: self.sum_h + other.sum_h,
            sum_h2: self.sum_h2 + other.sum_h2,
        }
    }
}

fn sample_index(cdf: &[f64], u: f64) -> usize {
    cdf.partition_point(|&c| c <= u).min(cdf.len() - 1)
}

fn run_partition(
    p: &SymbolDistribution,
    cdf: &[f64],
    block_size: usize,
    trials: u64,
    seed: u64,
    index: u64,
) -> Tally {
    let k = p.eve_alphabet();
    let mut rng = substream(seed, index);
    let mut tally = Tally::default();
    let mut symbols = vec![(0usize, 0usize, 0usize); block_size];
    for _ in 0..trials {
        let c = usize::from(rng.random::<bool>());
        for slot in symbols.iter_mut() {
            let idx = sample_index(cdf, rng.random::<f64>());
            *slot = (idx / (2 * k), (idx / k) % 2, idx % k);
        }
        let bob_bit = symbols[0].1 ^ symbols[0].0 ^ c;
        let accept = symbols.iter().all(|&(a, b, _)| b ^ a ^ c == bob_bit);
        if !accept {
            continue;
        }
        tally.accepted += 1;
        if bob_bit != c {
            tally.errors += 1;
        }
        // Eve's posterior on c from the announcement m_i = a_i ⊕ c and her symbols
        let mut likelihood = [0.0; 2];
        for (guess, slot) in likelihood.iter_mut().enumerate() {
            for beta in 0..2 {
                let mut prod = 1.0;
                for &(a, _, e) in &symbols {
                    let m = a ^ c;
                    prod *= p.p(guess ^ m, beta ^ m, e);
                }
                *slot += prod;
            }
        }
        let total = likelihood[0] + likelihood[1];
        let h = binary_entropy(likelihood[0].min(likelihood[1]) / total);
        tally.sum_h += h;
        tally.sum_h2 += h * h;
    }
    tally
}

/// Monte Carlo estimate of the repetition-code block statistics.
pub fn ad_monte_carlo(
    p: &SymbolDistribution,
    block_size: usize,
    config: McConfig,
) -> Result<AdEstimate, DistillError> {
    if block_size == 0 || block_size > MAX_BLOCK {
        return Err(DistillError::BlockSize(block_size));
    }
    if config.trials < MIN_TRIALS {
        return Err(DistillError::Trials(config.trials));
    }
    let mut acc = 0.0;
    let cdf: Vec<f64> = p
        .probs()
        .iter()
        .map(|x| {
            acc += x;
            acc
        })
        .collect();

    let shares = split_trials(config.trials, config.partitions);
    let tallies: Vec<Tally> = shares
        .par_iter()
        .enumerate()
        .map(|(k, &n)| run_partition(p, &cdf, block_size, n, config.seed, k as u64))
        .collect();
    let t = tallies.into_iter().fold(Tally::default(), Tally::merge);
    if t.accepted == 0 {
        return Err(DistillError::NoAcceptance);
    }

    let n = config.trials as f64;
    let acc_n = t.accepted as f64;
    let p_accept = acc_n / n;
    let eps_post = t.errors as f64 / acc_n;
    let mean_h = t.sum_h / acc_n;
    let var_h = (t.sum_h2 / acc_n - mean_h * mean_h).max(0.0);
    let se_eps = (eps_post * (1.0 - eps_post) / acc_n).sqrt();
    let slope = if eps_post > 0.0 && eps_post < 1.0 {
        ((1.0 - eps_post) / eps_post).log2().abs()
    } else {
        0.0
    };
    Ok(AdEstimate {
        estimate: AdOutcome {
            block_size,
            p_accept,
            eps_post,
            i_ab: 1.0 - binary_entropy(eps_post),
            i_ae: 1.0 - mean_h,
            h_bob: binary_entropy(eps_post),
            h_eve: mean_h,
        },
        accepted: t.accepted,
        se_p_accept: (p_accept * (1.0 - p_accept) / n).sqrt(),
        se_eps_post: se_eps,
        se_i_ab: slope * se_eps,
        se_i_ae: (var_h / acc_n).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distill::ad_exact;
    use crate::qkd::{symbol_distribution, AttackParams, Basis, EveMeasurement};

    fn table(d: f64) -> SymbolDistribution {
        symbol_distribution(&AttackParams::new(d, EveMeasurement::HelstromBinary).unwrap(), Basis::Z)
            .unwrap()
    }

    #[test]
    fn agrees_with_exact_at_point_two() {
        let p = table(0.2);
        let mc = ad_monte_carlo(&p, 2, McConfig::new(1_000_000, 3)).unwrap();
        let exact = ad_exact(&p, 2).unwrap();
        assert!((mc.estimate.eps_post - 0.04 / 0.68).abs() <= 3.0 * mc.se_eps_post);
        assert!((mc.estimate.p_accept - exact.p_accept).abs() <= 3.0 * mc.se_p_accept);
        assert!((mc.estimate.i_ae - exact.i_ae).abs() <= 3.0 * mc.se_i_ae);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let p = table(0.1);
        let a = ad_monte_carlo(&p, 3, McConfig::new(20_000, 9)).unwrap();
        let b = ad_monte_carlo(&p, 3, McConfig::new(20_000, 9)).unwrap();
        assert_eq!(a, b);
        let c = ad_monte_carlo(&p, 3, McConfig::new(20_000, 10)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn rejects_small_budgets_and_empty_acceptance() {
        let p = table(0.1);
        assert!(matches!(
            ad_monte_carlo(&p, 2, McConfig::new(100, 0)),
            Err(DistillError::Trials(100))
        ));
        // at D = 0.5 a 64-block is accepted with probability 2^-63
        let p = table(0.5);
        assert!(matches!(
            ad_monte_carlo(&p, 64, McConfig::new(10_000, 0)),
            Err(DistillError::NoAcceptance)
        ));
    }
}
