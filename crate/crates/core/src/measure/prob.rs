use num_rational::Ratio;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Budget, MeasureError};
use crate::exec::{self, ExecMode};
use crate::groups::{FiniteGroup, QuotientTower, TowerLevel};
use crate::words::Word;

/// Samples drawn from one random stream. Chunk `c` of a Monte-Carlo run uses
/// `ChaCha8Rng::seed_from_u64(seed)` switched to stream `c`, so the estimate
/// depends only on `(seed, samples)` and never on the worker count.
pub const MC_CHUNK: u64 = 4096;

/// Two-sided 99% standard normal quantile.
pub const Z_99: f64 = 2.5758293035489004;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactProbability {
    pub satisfied: u64,
    pub total: u64,
}

impl ExactProbability {
    pub fn value(&self) -> Ratio<u64> {
        Ratio::new(self.satisfied, self.total)
    }
}

/// Number of `r`-tuples in `G^r` on which `w` evaluates to the identity.
/// The first coordinate is split across workers.
pub fn count_solutions<G: FiniteGroup>(g: &G, w: &Word, mode: ExecMode) -> u64 {
    let n = g.order();
    let r = w.rank();
    let rest = n.pow(r as u32 - 1);
    exec::sum_range(mode, n, |i| {
        let mut images = vec![g.element_at(i); r];
        let mut count = 0u64;
        for mut idx in 0..rest {
            for slot in images[1..].iter_mut().rev() {
                *slot = g.element_at(idx % n);
                idx /= n;
            }
            count += u64::from(w.is_satisfied_by(&images, g));
        }
        count
    })
}

/// `P(G, w) = |X(G,w)| / |G|^r` exactly.
pub fn prob_exact<G: FiniteGroup>(g: &G, w: &Word, budget: &Budget) -> Result<ExactProbability, MeasureError> {
    let total = budget.tuples(g.order(), w.rank())?;
    let satisfied = count_solutions(g, w, budget.mode);
    Ok(ExactProbability { satisfied, total })
}

/// Fraction of elements of exponent dividing `m`, i.e. `P(G, x1^m)`.
pub fn torsion_fraction<G: FiniteGroup>(g: &G, m: i64, budget: &Budget) -> Result<ExactProbability, MeasureError> {
    prob_exact(g, &Word::generator_power(1, 0, m)?, budget)
}

/// Wilson score interval for `successes` out of `n` at quantile `z`.
pub fn wilson_interval(successes: u64, n: u64, z: f64) -> (f64, f64) {
    let n_f = n as f64;
    let phat = successes as f64 / n_f;
    let z2 = z * z;
    let denom = 1.0 + z2 / n_f;
    let centre = (phat + z2 / (2.0 * n_f)) / denom;
    let half = z * (phat * (1.0 - phat) / n_f + z2 / (4.0 * n_f * n_f)).sqrt() / denom;
    // the bounds are exactly 0 and 1 at the extremes; avoid rounding drift
    let lo = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if successes == n { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MonteCarloEstimate {
    pub samples: u64,
    pub satisfied: u64,
    pub seed: u64,
    pub estimate: f64,
    pub interval_lo: f64,
    pub interval_hi: f64,
}

pub fn prob_montecarlo<G: FiniteGroup>(
    g: &G,
    w: &Word,
    samples: u64,
    seed: u64,
    mode: ExecMode,
) -> Result<MonteCarloEstimate, MeasureError> {
    if samples == 0 {
        return Err(MeasureError::ZeroSamples);
    }
    let chunks = samples.div_ceil(MC_CHUNK);
    let r = w.rank();
    let satisfied = exec::sum_range(mode, chunks, |c| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(c);
        let len = MC_CHUNK.min(samples - c * MC_CHUNK);
        let mut images = vec![g.identity(); r];
        let mut hits = 0u64;
        for _ in 0..len {
            for slot in images.iter_mut() {
                *slot = g.random_element(&mut rng);
            }
            hits += u64::from(w.is_satisfied_by(&images, g));
        }
        hits
    });
    let (interval_lo, interval_hi) = wilson_interval(satisfied, samples, Z_99);
    Ok(MonteCarloEstimate {
        samples,
        satisfied,
        seed,
        estimate: satisfied as f64 / samples as f64,
        interval_lo,
        interval_hi,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Mc,
}

/// One row of a tower probability report (also the CSV row layout).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelProbability {
    pub level: u32,
    pub group_order: u64,
    pub satisfied_count: u64,
    pub total_count: u64,
    pub probability_num: u64,
    pub probability_den: u64,
    pub method: Method,
    pub mc_interval_lo: Option<f64>,
    pub mc_interval_hi: Option<f64>,
}

impl LevelProbability {
    pub fn value(&self) -> Ratio<u64> {
        Ratio::new(self.probability_num, self.probability_den)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbabilityReport {
    pub word: String,
    pub rows: Vec<LevelProbability>,
    /// Smallest per-level value; an upper bound for `P(G, w)` when every row
    /// is exact.
    pub infimum_num: u64,
    pub infimum_den: u64,
}

impl ProbabilityReport {
    pub fn infimum(&self) -> Ratio<u64> {
        Ratio::new(self.infimum_num, self.infimum_den)
    }

    pub fn used_monte_carlo(&self) -> bool {
        self.rows.iter().any(|r| r.method == Method::Mc)
    }

    pub fn values(&self) -> Vec<Ratio<u64>> {
        self.rows.iter().map(LevelProbability::value).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProbConfig {
    pub budget: Budget,
    /// Samples per level when a level is over budget.
    pub mc_samples: u64,
    pub seed: u64,
}

impl Default for ProbConfig {
    fn default() -> Self {
        ProbConfig { budget: Budget::default(), mc_samples: 100_000, seed: 0 }
    }
}

/// Per-level `P(G_k, w)`: exact where the budget allows, Monte Carlo
/// otherwise. Consecutive exact levels must be non-increasing; a violation
/// is reported as an error rather than a result.
pub fn tower_prob<G: TowerLevel>(
    tower: &QuotientTower<G>,
    w: &Word,
    config: &ProbConfig,
) -> Result<ProbabilityReport, MeasureError> {
    let mut rows: Vec<LevelProbability> = Vec::with_capacity(tower.len());
    for g in tower.levels() {
        let row = match prob_exact(g, w, &config.budget) {
            Ok(exact) => {
                let v = exact.value();
                LevelProbability {
                    level: g.level(),
                    group_order: g.order(),
                    satisfied_count: exact.satisfied,
                    total_count: exact.total,
                    probability_num: *v.numer(),
                    probability_den: *v.denom(),
                    method: Method::Exact,
                    mc_interval_lo: None,
                    mc_interval_hi: None,
                }
            }
            Err(MeasureError::BudgetExceeded { .. }) => {
                let est = prob_montecarlo(g, w, config.mc_samples, config.seed, config.budget.mode)?;
                let v = Ratio::new(est.satisfied, est.samples);
                LevelProbability {
                    level: g.level(),
                    group_order: g.order(),
                    satisfied_count: est.satisfied,
                    total_count: est.samples,
                    probability_num: *v.numer(),
                    probability_den: *v.denom(),
                    method: Method::Mc,
                    mc_interval_lo: Some(est.interval_lo),
                    mc_interval_hi: Some(est.interval_hi),
                }
            }
            Err(e) => return Err(e),
        };
        if let Some(prev) = rows.iter().rev().find(|r| r.method == Method::Exact) {
            if row.method == Method::Exact && row.value() > prev.value() {
                return Err(MeasureError::Monotonicity { from: prev.level, to: row.level });
            }
        }
        rows.push(row);
    }
    let inf = rows.iter().map(LevelProbability::value).min().expect("towers are non-empty");
    Ok(ProbabilityReport { word: w.to_string(), rows, infimum_num: *inf.numer(), infimum_den: *inf.denom() })
}
