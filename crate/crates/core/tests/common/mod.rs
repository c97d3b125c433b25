//! Shared helpers for integration tests: a tiny deterministic RNG and a
//! random-instance builder.

use slatepath::model::{Bidder, QueryInstance};

/// splitmix64; deterministic and dependency-free.
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    pub fn log_range(&mut self, lo: f64, hi: f64) -> f64 {
        (self.range(lo.ln(), hi.ln())).exp()
    }

    /// Uniform integer in lo..=hi.
    pub fn int(&mut self, lo: usize, hi: usize) -> usize {
        lo + (self.next_u64() as usize) % (hi - lo + 1)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.unit() < p
    }
}

pub struct InstanceShape {
    pub n: usize,
    pub m: usize,
    /// Unit qualities when false (bid-only ranking stays valid).
    pub with_quality: bool,
    /// Nonzero hybrid weights when true.
    pub with_hybrid: bool,
}

pub fn random_instance(rng: &mut TestRng, shape: &InstanceShape) -> QueryInstance {
    let min_bid = 0.05;
    let bidders: Vec<Bidder> = (0..shape.n)
        .map(|i| {
            let mut b = Bidder::new(format!("ad{i}"), rng.log_range(0.1, 10.0));
            if shape.with_quality {
                b.quality = rng.log_range(0.5, 2.0);
            }
            b.utility_factor = rng.range(-0.5, 1.0);
            if shape.with_hybrid {
                b.hybrid_weight = rng.range(-0.5, 1.0);
            }
            b.excludable = rng.chance(0.5);
            b
        })
        .collect();
    let ctr: Vec<Vec<f64>> = (0..shape.n)
        .map(|_| {
            let base = rng.range(0.05, 0.3);
            (0..shape.m)
                .map(|p| base / (1.0 + 0.25 * p as f64))
                .collect()
        })
        .collect();
    QueryInstance::validate_and_rank(bidders, ctr, shape.m, min_bid).expect("generated instance")
}
