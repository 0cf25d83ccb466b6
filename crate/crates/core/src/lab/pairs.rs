//! Two-path ordering experiments: contrast and the minimal scale `K0` above
//! which the weight products of two paths order them like their cost sums.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng_from_seed;

/// Edge costs of two alternative paths. The shorter list is implicitly
/// padded with zero costs (weight 1), which changes neither sum nor product.
#[derive(Debug, Clone, PartialEq)]
pub struct PathPair {
    pub costs_a: Vec<f64>,
    pub costs_b: Vec<f64>,
}

impl PathPair {
    pub fn new(costs_a: Vec<f64>, costs_b: Vec<f64>) -> Self {
        PathPair { costs_a, costs_b }
    }

    pub fn sums(&self) -> (f64, f64) {
        (self.costs_a.iter().sum(), self.costs_b.iter().sum())
    }

    fn max_abs_cost(&self) -> f64 {
        self.costs_a
            .iter()
            .chain(&self.costs_b)
            .fold(0.0, |m, c| m.max(c.abs()))
    }
}

/// `(sum A - sum B) / (sum A + sum B)`.
pub fn contrast(pair: &PathPair) -> Result<f64> {
    let (a, b) = pair.sums();
    if a + b == 0.0 {
        return Err(Error::ZeroContrastDenominator);
    }
    Ok((a - b) / (a + b))
}

/// Whether the path with the strictly smaller cost sum also has the strictly
/// larger product of `1 - c / k`. Equal sums never count as ordered.
///
/// Products are compared through sums of `ln(1 - c / k)`, which preserves
/// their order and keeps precision when every factor is close to one.
pub fn products_ordered_correctly(pair: &PathPair, k: f64) -> bool {
    let (sum_a, sum_b) = pair.sums();
    if sum_a == sum_b {
        return false;
    }
    let log_product = |costs: &[f64]| -> f64 {
        costs
            .iter()
            .map(|&c| {
                let w = 1.0 - c / k;
                if w > 0.0 {
                    (-c / k).ln_1p()
                } else {
                    f64::NEG_INFINITY
                }
            })
            .sum()
    };
    let (la, lb) = (log_product(&pair.costs_a), log_product(&pair.costs_b));
    if sum_a < sum_b {
        la > lb
    } else {
        lb > la
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct K0Record {
    /// NaN when both sums are zero.
    pub contrast: f64,
    /// `inf` when no ladder rung up to `k_max` orders the pair.
    pub k0: f64,
    pub len_a: usize,
    pub len_b: usize,
    pub seed: u64,
}

/// Lowest scale tried: weights stay positive above the largest cost.
pub fn k0_floor(pair: &PathPair) -> f64 {
    (1.01 * pair.max_abs_cost()).max(1.0)
}

/// Relative bisection precision of [`find_k0`].
pub const K0_PRECISION: f64 = 1e-3;

/// Smallest `K` (to [`K0_PRECISION`]) from which the products order the pair
/// like its sums, on every rung of the doubling ladder up to `k_max`.
///
/// The ladder runs `floor, 2 floor, 4 floor, ...` while `<= k_max`. The first
/// rung after which every rung passes is located, then the gap to the rung
/// below it is bisected. Ordering is not assumed monotone in `K`, hence the
/// check of every higher rung. `None` for equal sums or when the top rung
/// fails.
pub fn find_k0(pair: &PathPair, k_max: f64) -> Option<K0Record> {
    let (sum_a, sum_b) = pair.sums();
    if sum_a == sum_b {
        return None;
    }
    let floor = k0_floor(pair);
    let mut ladder = Vec::new();
    let mut k = floor;
    while k <= k_max {
        ladder.push(k);
        k *= 2.0;
    }
    let passes: Vec<bool> = ladder
        .iter()
        .map(|&k| products_ordered_correctly(pair, k))
        .collect();
    // first rung from which all higher rungs pass
    let first = match passes.iter().rposition(|&p| !p) {
        None if ladder.is_empty() => return None,
        None => 0,
        Some(i) if i + 1 == ladder.len() => return None,
        Some(i) => i + 1,
    };
    let k0 = if first == 0 {
        floor
    } else {
        let (mut lo, mut hi) = (ladder[first - 1], ladder[first]);
        while hi - lo > K0_PRECISION * hi {
            let mid = 0.5 * (lo + hi);
            if products_ordered_correctly(pair, mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    };
    Some(K0Record {
        contrast: contrast(pair).unwrap_or(f64::NAN),
        k0,
        len_a: pair.costs_a.len(),
        len_b: pair.costs_b.len(),
        seed: 0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairExperimentConfig {
    pub lengths: Vec<usize>,
    pub trials_per_combination: usize,
    /// Range of the Gaussian mean, drawn per path and trial.
    pub cost_mean_range: (f64, f64),
    /// Range of the Gaussian standard deviation, drawn per path and trial.
    pub cost_sigma_range: (f64, f64),
    pub k_max: f64,
    pub seed: u64,
}

impl PairExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.into()));
        if self.lengths.is_empty() || self.lengths.contains(&0) {
            return bad("lengths must be non-empty and positive");
        }
        if self.trials_per_combination == 0 {
            return bad("trials_per_combination must be positive");
        }
        let (m0, m1) = self.cost_mean_range;
        let (s0, s1) = self.cost_sigma_range;
        if !(m0 <= m1) || !(0.0 <= s0 && s0 <= s1) || !m0.is_finite() || !m1.is_finite() || !s1.is_finite() {
            return bad("cost mean/sigma ranges must be non-empty and finite, sigma >= 0");
        }
        if !(self.k_max > 0.0) {
            return bad("k_max must be positive");
        }
        Ok(())
    }

    pub fn work_items(&self) -> usize {
        self.lengths.len() * self.lengths.len() * self.trials_per_combination
    }
}

fn draw_path<R: Rng>(rng: &mut R, len: usize, mean: (f64, f64), sigma: (f64, f64)) -> Vec<f64> {
    let m = if mean.0 == mean.1 { mean.0 } else { rng.random_range(mean.0..=mean.1) };
    let s = if sigma.0 == sigma.1 { sigma.0 } else { rng.random_range(sigma.0..=sigma.1) };
    let normal = Normal::new(m, s).expect("validated sigma");
    (0..len).map(|_| normal.sample(rng)).collect()
}

/// Draws one pair per `(L_A, L_B, trial)` and records its contrast and `K0`.
///
/// Work item `i` (ordered by `L_A`, then `L_B`, then trial) uses its own
/// stream seeded with `seed + i`, so the output does not depend on how many
/// threads run it. Pairs whose sums tie exactly are dropped.
pub fn pair_experiment(config: &PairExperimentConfig) -> Result<Vec<K0Record>> {
    config.validate()?;
    let n_len = config.lengths.len();
    let trials = config.trials_per_combination;
    let records = (0..config.work_items())
        .into_par_iter()
        .filter_map(|i| {
            let la = config.lengths[i / (n_len * trials)];
            let lb = config.lengths[(i / trials) % n_len];
            let seed = config.seed.wrapping_add(i as u64);
            let mut rng = rng_from_seed(seed);
            let a = draw_path(&mut rng, la, config.cost_mean_range, config.cost_sigma_range);
            let b = draw_path(&mut rng, lb, config.cost_mean_range, config.cost_sigma_range);
            let pair = PathPair::new(a, b);
            let (sa, sb) = pair.sums();
            if sa == sb {
                return None;
            }
            let record = find_k0(&pair, config.k_max).unwrap_or(K0Record {
                contrast: contrast(&pair).unwrap_or(f64::NAN),
                k0: f64::INFINITY,
                len_a: la,
                len_b: lb,
                seed: 0,
            });
            Some(K0Record { seed, ..record })
        })
        .collect();
    Ok(records)
}
