//! Seeded random instance generator used by `bench`, `check`, and the
//! verification suites. Fully deterministic: the same seed produces the same
//! instances on every run.
//!
//! Distributions:
//! - bids: log-uniform on [0.1, 10]
//! - qualities: log-uniform on [0.5, 2] (pinned to 1 for bid-only ranking)
//! - CTRs: `T[j][p] = base_j * pos_factor_p` with `base_j` uniform on
//!   [0.05, 0.3] and `pos_factor_p = 1 / (1 + 0.25 * (p - 1))`
//! - utility factors: uniform on [-0.5, 1]
//! - hybrid weights: uniform on [-0.5, 1] when requested, else 0
//! - excludable flags: fair coin
//! - reserve price: fixed at 0.05 (below every possible bid)

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use slatepath::model::{Bidder, ObjectiveMode, QueryInstance};
use slatepath::Mask;

pub const MIN_BID: f64 = 0.05;

#[derive(Debug, Clone)]
pub struct GeneratorConfig {
    pub positions: usize,
    pub min_ads: usize,
    pub max_ads: usize,
    /// Controls field distributions: `BidRanked` pins qualities to 1,
    /// `Hybrid` draws nonzero hybrid weights.
    pub mode: ObjectiveMode,
}

impl GeneratorConfig {
    pub fn new(positions: usize, min_ads: usize, max_ads: usize, mode: ObjectiveMode) -> Self {
        assert!(positions >= 1 && min_ads >= 1 && min_ads <= max_ads);
        GeneratorConfig {
            positions,
            min_ads,
            max_ads,
            mode,
        }
    }
}

/// Unvalidated instance data, so benchmarks can time validation and ranking
/// as part of the solve.
#[derive(Debug, Clone)]
pub struct RawQuery {
    pub bidders: Vec<Bidder>,
    pub ctr: Vec<Vec<f64>>,
    pub positions: usize,
    pub min_bid: f64,
}

impl RawQuery {
    pub fn validate(self) -> Result<QueryInstance, slatepath::ModelError> {
        QueryInstance::validate_and_rank(self.bidders, self.ctr, self.positions, self.min_bid)
    }
}

pub struct InstanceGenerator {
    rng: ChaCha8Rng,
    config: GeneratorConfig,
}

impl InstanceGenerator {
    pub fn new(seed: u64, config: GeneratorConfig) -> Self {
        InstanceGenerator {
            rng: ChaCha8Rng::seed_from_u64(seed),
            config,
        }
    }

    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.rng.random::<f64>()
    }

    fn log_uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.uniform(lo.ln(), hi.ln()).exp()
    }

    pub fn next_raw(&mut self) -> RawQuery {
        let n = self.rng.random_range(self.config.min_ads..=self.config.max_ads);
        let m = self.config.positions;
        let mut bidders = Vec::with_capacity(n);
        let mut ctr = Vec::with_capacity(n);
        for i in 0..n {
            let quality = if self.config.mode == ObjectiveMode::BidRanked {
                1.0
            } else {
                self.log_uniform(0.5, 2.0)
            };
            let hybrid_weight = if self.config.mode == ObjectiveMode::Hybrid {
                self.uniform(-0.5, 1.0)
            } else {
                0.0
            };
            bidders.push(Bidder {
                id: format!("ad{i}"),
                bid: self.log_uniform(0.1, 10.0),
                quality,
                utility_factor: self.uniform(-0.5, 1.0),
                hybrid_weight,
                excludable: self.rng.random::<bool>(),
            });
            let base = self.uniform(0.05, 0.3);
            ctr.push(
                (0..m)
                    .map(|p| base / (1.0 + 0.25 * p as f64))
                    .collect::<Vec<f64>>(),
            );
        }
        RawQuery {
            bidders,
            ctr,
            positions: m,
            min_bid: MIN_BID,
        }
    }

    pub fn next_instance(&mut self) -> QueryInstance {
        self.next_raw().validate().expect("generated instance is valid")
    }

    /// Random mask over `n` ranked ads, fair coin per bit.
    pub fn next_mask(&mut self, n: usize) -> Mask {
        Mask::new((0..n).map(|_| self.rng.random::<bool>()).collect())
    }
}
