//! Domain types, instance validation and ranking, and direct evaluation of
//! the slate objectives with their per-position prices.
//!
//! Bidders are ranked by descending bid-times-quality product; a slate is a
//! strictly increasing subset of ranks. Each slate member pays a second-price
//! amount derived from the next slate member (scaled by the quality-score
//! ratio), the next-ranked bid when the slate fills every position, or the
//! reserve price when the slate terminates early or ends at the last rank.

use thiserror::Error;

/// One auction participant.
#[derive(Debug, Clone, PartialEq)]
pub struct Bidder {
    /// Opaque external identifier.
    pub id: String,
    /// Bid per click; must be positive.
    pub bid: f64,
    /// Clickability multiplier; must be positive. 1 for bid-only ranking.
    pub quality: f64,
    /// Weight on second-price revenue terms. May be negative (budget duals).
    pub utility_factor: f64,
    /// Weight on first-price terms in the hybrid objective.
    pub hybrid_weight: f64,
    /// True if the ad may be left out of a slate for non-rank reasons.
    pub excludable: bool,
}

impl Bidder {
    pub fn new(id: impl Into<String>, bid: f64) -> Self {
        Bidder {
            id: id.into(),
            bid,
            quality: 1.0,
            utility_factor: 1.0,
            hybrid_weight: 0.0,
            excludable: true,
        }
    }

    pub fn with_quality(mut self, quality: f64) -> Self {
        self.quality = quality;
        self
    }

    pub fn with_utility_factor(mut self, rho: f64) -> Self {
        self.utility_factor = rho;
        self
    }

    pub fn with_hybrid_weight(mut self, mu: f64) -> Self {
        self.hybrid_weight = mu;
        self
    }

    pub fn with_excludable(mut self, excludable: bool) -> Self {
        self.excludable = excludable;
        self
    }

    /// Ranking key: bid times quality.
    pub fn rank_score(&self) -> f64 {
        self.bid * self.quality
    }
}

/// Which slate objective to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObjectiveMode {
    /// Second-price utility with bid-only ranking. Requires unit qualities;
    /// it is the quality-one special case of `RevenueRanked`.
    BidRanked,
    /// Second-price utility with bid-times-quality ranking and
    /// quality-ratio-adjusted prices.
    RevenueRanked,
    /// Weighted sum of first-price and second-price terms.
    Hybrid,
}

impl ObjectiveMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ObjectiveMode::BidRanked => "bid",
            ObjectiveMode::RevenueRanked => "revenue",
            ObjectiveMode::Hybrid => "hybrid",
        }
    }
}

/// Validation failures for instances, slates, and mode preconditions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("bidder list is empty")]
    NoBidders,
    #[error("positions must be at least 1")]
    NoPositions,
    #[error("bidder {id:?}: bid must be positive and finite, got {value}")]
    InvalidBid { id: String, value: f64 },
    #[error("bidder {id:?}: quality must be positive and finite, got {value}")]
    InvalidQuality { id: String, value: f64 },
    #[error("bidder {id:?}: utility factor must be finite, got {value}")]
    InvalidUtilityFactor { id: String, value: f64 },
    #[error("bidder {id:?}: hybrid weight must be finite, got {value}")]
    InvalidHybridWeight { id: String, value: f64 },
    #[error("minimum bid must be positive and finite, got {0}")]
    InvalidMinBid(f64),
    #[error("ctr matrix has {rows} rows, expected one per bidder ({bidders})")]
    CtrRowCount { rows: usize, bidders: usize },
    #[error("ctr row for bidder {id:?} has {cols} entries, expected {positions}")]
    CtrRowLength { id: String, cols: usize, positions: usize },
    #[error("ctr for bidder {id:?} at position {position} is {value}, outside [0, 1]")]
    CtrOutOfRange { id: String, position: usize, value: f64 },
    #[error("minimum bid {min_bid} exceeds the last-ranked bid {last_bid}")]
    MinBidAboveLastBid { min_bid: f64, last_bid: f64 },
    #[error("slate index {index} out of range 1..={bidders}")]
    SlateIndexOutOfRange { index: usize, bidders: usize },
    #[error("slate indices must be strictly increasing")]
    SlateNotIncreasing,
    #[error("slate has {len} entries, more than {positions} positions")]
    SlateTooLong { len: usize, positions: usize },
    #[error("bid-ranked mode requires unit quality scores; bidder {id:?} has quality {value}")]
    BidRankedNeedsUnitQuality { id: String, value: f64 },
}

/// One query's full auction context: ranked bidders, CTR matrix, position
/// count, and reserve price. Immutable once constructed; construction ranks
/// the bidders and checks every invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryInstance {
    bidders: Vec<Bidder>,
    positions: usize,
    /// Row-major n x m, rows in ranked bidder order.
    ctr: Vec<f64>,
    min_bid: f64,
}

impl QueryInstance {
    /// Validates a raw bidder list, sorts it by descending bid-times-quality
    /// (stable, so ties keep input order), permutes the CTR rows in lockstep,
    /// and checks all instance invariants.
    pub fn validate_and_rank(
        bidders: Vec<Bidder>,
        ctr: Vec<Vec<f64>>,
        positions: usize,
        min_bid: f64,
    ) -> Result<Self, ModelError> {
        if bidders.is_empty() {
            return Err(ModelError::NoBidders);
        }
        if positions == 0 {
            return Err(ModelError::NoPositions);
        }
        if !(min_bid > 0.0) || !min_bid.is_finite() {
            return Err(ModelError::InvalidMinBid(min_bid));
        }
        if ctr.len() != bidders.len() {
            return Err(ModelError::CtrRowCount {
                rows: ctr.len(),
                bidders: bidders.len(),
            });
        }
        for (b, row) in bidders.iter().zip(&ctr) {
            if !(b.bid > 0.0) || !b.bid.is_finite() {
                return Err(ModelError::InvalidBid {
                    id: b.id.clone(),
                    value: b.bid,
                });
            }
            if !(b.quality > 0.0) || !b.quality.is_finite() {
                return Err(ModelError::InvalidQuality {
                    id: b.id.clone(),
                    value: b.quality,
                });
            }
            if !b.utility_factor.is_finite() {
                return Err(ModelError::InvalidUtilityFactor {
                    id: b.id.clone(),
                    value: b.utility_factor,
                });
            }
            if !b.hybrid_weight.is_finite() {
                return Err(ModelError::InvalidHybridWeight {
                    id: b.id.clone(),
                    value: b.hybrid_weight,
                });
            }
            if row.len() != positions {
                return Err(ModelError::CtrRowLength {
                    id: b.id.clone(),
                    cols: row.len(),
                    positions,
                });
            }
            for (p, &t) in row.iter().enumerate() {
                if !(0.0..=1.0).contains(&t) || !t.is_finite() {
                    return Err(ModelError::CtrOutOfRange {
                        id: b.id.clone(),
                        position: p + 1,
                        value: t,
                    });
                }
            }
        }

        // Stable sort by descending rank score keeps input order on ties.
        let mut order: Vec<usize> = (0..bidders.len()).collect();
        order.sort_by(|&a, &b| {
            bidders[b]
                .rank_score()
                .partial_cmp(&bidders[a].rank_score())
                .expect("rank scores are finite")
        });

        let mut ranked = Vec::with_capacity(bidders.len());
        let mut flat = Vec::with_capacity(bidders.len() * positions);
        for &i in &order {
            flat.extend_from_slice(&ctr[i]);
        }
        let mut by_index: Vec<Option<Bidder>> = bidders.into_iter().map(Some).collect();
        for &i in &order {
            ranked.push(by_index[i].take().expect("each index moved once"));
        }

        let last_bid = ranked.last().expect("nonempty").bid;
        if min_bid > last_bid {
            return Err(ModelError::MinBidAboveLastBid { min_bid, last_bid });
        }

        Ok(QueryInstance {
            bidders: ranked,
            positions,
            ctr: flat,
            min_bid,
        })
    }

    /// Number of bidders.
    pub fn n(&self) -> usize {
        self.bidders.len()
    }

    /// Maximum slate size.
    pub fn positions(&self) -> usize {
        self.positions
    }

    /// Reserve price.
    pub fn min_bid(&self) -> f64 {
        self.min_bid
    }

    /// Bidder at 1-based rank.
    pub fn bidder(&self, rank: usize) -> &Bidder {
        &self.bidders[rank - 1]
    }

    /// Ranked bidders, best first.
    pub fn bidders(&self) -> &[Bidder] {
        &self.bidders
    }

    /// Click-through rate of the bidder at 1-based `rank` shown at 1-based
    /// `position`.
    pub fn ctr(&self, rank: usize, position: usize) -> f64 {
        self.ctr[(rank - 1) * self.positions + (position - 1)]
    }

    /// CTR matrix rows in ranked order.
    pub fn ctr_rows(&self) -> Vec<Vec<f64>> {
        self.ctr
            .chunks(self.positions)
            .map(|row| row.to_vec())
            .collect()
    }

    /// Checks a mode's precondition against this instance.
    pub fn check_mode(&self, mode: ObjectiveMode) -> Result<(), ModelError> {
        if mode == ObjectiveMode::BidRanked {
            for b in &self.bidders {
                if b.quality != 1.0 {
                    return Err(ModelError::BidRankedNeedsUnitQuality {
                        id: b.id.clone(),
                        value: b.quality,
                    });
                }
            }
        }
        Ok(())
    }

    /// Same instance with the utility factors and hybrid weights replaced,
    /// in ranked order. Ranking is unaffected by either field, so no re-sort
    /// happens. Used by column pricing to install dual-derived weights.
    pub fn with_weights(&self, rhos: &[f64], mus: &[f64]) -> QueryInstance {
        assert_eq!(rhos.len(), self.n());
        assert_eq!(mus.len(), self.n());
        let mut out = self.clone();
        for (i, b) in out.bidders.iter_mut().enumerate() {
            b.utility_factor = rhos[i];
            b.hybrid_weight = mus[i];
        }
        out
    }

    /// Expected cost per click charged to the bidder at `payer` rank when the
    /// bidder at `successor` rank sets the price: the successor's bid scaled
    /// by the quality ratio.
    pub(crate) fn successor_price(&self, payer: usize, successor: usize) -> f64 {
        let s = self.bidder(successor);
        s.bid * s.quality / self.bidder(payer).quality
    }

    /// Objective contribution of the bidder at `rank` occupying `position`
    /// and paying `price` per click.
    pub(crate) fn position_term(
        &self,
        rank: usize,
        position: usize,
        price: f64,
        mode: ObjectiveMode,
    ) -> f64 {
        let b = self.bidder(rank);
        let t = self.ctr(rank, position);
        match mode {
            ObjectiveMode::BidRanked | ObjectiveMode::RevenueRanked => {
                b.utility_factor * price * t
            }
            ObjectiveMode::Hybrid => {
                (b.hybrid_weight * b.bid + b.utility_factor * price) * t
            }
        }
    }
}

/// An ordered, rank-increasing subset of bidders.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slate(Vec<usize>);

impl Slate {
    /// Validates 1-based ranks against an instance: strictly increasing, in
    /// range, and no longer than the position count. An empty slate is valid
    /// as a value; solvers only produce one when explicitly allowed.
    pub fn new(indices: Vec<usize>, instance: &QueryInstance) -> Result<Self, ModelError> {
        if indices.len() > instance.positions() {
            return Err(ModelError::SlateTooLong {
                len: indices.len(),
                positions: instance.positions(),
            });
        }
        for (i, &j) in indices.iter().enumerate() {
            if j < 1 || j > instance.n() {
                return Err(ModelError::SlateIndexOutOfRange {
                    index: j,
                    bidders: instance.n(),
                });
            }
            if i > 0 && indices[i - 1] >= j {
                return Err(ModelError::SlateNotIncreasing);
            }
        }
        Ok(Slate(indices))
    }

    /// 1-based bidder ranks, ascending.
    pub fn ranks(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, rank: usize) -> bool {
        self.0.binary_search(&rank).is_ok()
    }
}

impl std::fmt::Display for Slate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "]")
    }
}

/// A slate plus its objective value and per-position prices.
#[derive(Debug, Clone, PartialEq)]
pub struct SlateSolution {
    pub slate: Slate,
    pub value: f64,
    pub prices: Vec<f64>,
    pub mode: ObjectiveMode,
}

/// Expected cost per click for each occupied position of `slate`.
///
/// Interior members pay the next slate member's quality-adjusted bid. The
/// last member pays the next-ranked quality-adjusted bid when the slate fills
/// all positions and lower-ranked bidders remain; otherwise (last rank, or
/// early termination) it pays the reserve price.
pub fn slate_prices(instance: &QueryInstance, slate: &Slate) -> Result<Vec<f64>, ModelError> {
    // Re-validate so standalone calls cannot be fed a foreign slate.
    let slate = Slate::new(slate.ranks().to_vec(), instance)?;
    let ranks = slate.ranks();
    let k = ranks.len();
    let mut prices = Vec::with_capacity(k);
    for (p, &j) in ranks.iter().enumerate() {
        let price = if p + 1 < k {
            instance.successor_price(j, ranks[p + 1])
        } else if k == instance.positions() && j < instance.n() {
            instance.successor_price(j, j + 1)
        } else {
            instance.min_bid()
        };
        prices.push(price);
    }
    Ok(prices)
}

/// Objective value of `slate` under `mode`: the sum over occupied positions
/// of the position term built from [`slate_prices`].
pub fn slate_utility(
    instance: &QueryInstance,
    slate: &Slate,
    mode: ObjectiveMode,
) -> Result<f64, ModelError> {
    instance.check_mode(mode)?;
    let prices = slate_prices(instance, slate)?;
    let mut value = 0.0;
    for (p, (&j, &price)) in slate.ranks().iter().zip(&prices).enumerate() {
        value += instance.position_term(j, p + 1, price, mode);
    }
    Ok(value)
}

/// Evaluates a slate fully: value plus per-position prices.
pub fn evaluate(
    instance: &QueryInstance,
    slate: &Slate,
    mode: ObjectiveMode,
) -> Result<SlateSolution, ModelError> {
    let prices = slate_prices(instance, slate)?;
    let value = slate_utility(instance, slate, mode)?;
    Ok(SlateSolution {
        slate: slate.clone(),
        value,
        prices,
        mode,
    })
}

/// Relative difference scaled by the larger magnitude (floored at 1).
pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform_instance(bids: &[f64], positions: usize, ctr: f64, min_bid: f64) -> QueryInstance {
        let bidders: Vec<Bidder> = bids
            .iter()
            .enumerate()
            .map(|(i, &b)| Bidder::new(format!("b{}", i + 1), b))
            .collect();
        let rows = vec![vec![ctr; positions]; bids.len()];
        QueryInstance::validate_and_rank(bidders, rows, positions, min_bid).unwrap()
    }

    #[test]
    fn ranks_by_bid_when_qualities_are_unit() {
        let inst = uniform_instance(&[1.0, 2.0], 1, 0.5, 0.1);
        assert_eq!(inst.bidder(1).bid, 2.0);
        assert_eq!(inst.bidder(2).bid, 1.0);
        // CTR rows permuted in lockstep.
        assert_eq!(inst.bidder(1).id, "b2");
    }

    #[test]
    fn rank_rule_uses_bid_times_quality() {
        let bidders = vec![
            Bidder::new("a", 4.0).with_quality(1.0),
            Bidder::new("b", 1.0).with_quality(2.0),
        ];
        let inst =
            QueryInstance::validate_and_rank(bidders, vec![vec![0.5], vec![0.4]], 1, 0.1).unwrap();
        // 4*1 >= 1*2, order unchanged.
        assert_eq!(inst.bidder(1).id, "a");
        assert_eq!(inst.ctr(1, 1), 0.5);
        assert_eq!(inst.ctr(2, 1), 0.4);
    }

    #[test]
    fn rank_ties_are_stable_on_input_order() {
        let bidders = vec![
            Bidder::new("a", 2.0).with_quality(2.0),
            Bidder::new("b", 4.0).with_quality(1.0),
        ];
        let inst =
            QueryInstance::validate_and_rank(bidders, vec![vec![0.5], vec![0.4]], 1, 0.1).unwrap();
        // 4 = 4 tie: stable by input order.
        assert_eq!(inst.bidder(1).id, "a");
        assert_eq!(inst.bidder(2).id, "b");
    }

    #[test]
    fn validation_rejects_bad_inputs() {
        let ok = || vec![Bidder::new("a", 1.0)];
        assert!(matches!(
            QueryInstance::validate_and_rank(vec![], vec![], 1, 0.1),
            Err(ModelError::NoBidders)
        ));
        assert!(matches!(
            QueryInstance::validate_and_rank(ok(), vec![vec![0.5]], 0, 0.1),
            Err(ModelError::NoPositions)
        ));
        assert!(matches!(
            QueryInstance::validate_and_rank(ok(), vec![], 1, 0.1),
            Err(ModelError::CtrRowCount { .. })
        ));
        assert!(matches!(
            QueryInstance::validate_and_rank(ok(), vec![vec![0.5, 0.4]], 1, 0.1),
            Err(ModelError::CtrRowLength { .. })
        ));
        assert!(matches!(
            QueryInstance::validate_and_rank(ok(), vec![vec![1.5]], 1, 0.1),
            Err(ModelError::CtrOutOfRange { .. })
        ));
        assert!(matches!(
            QueryInstance::validate_and_rank(vec![Bidder::new("a", -1.0)], vec![vec![0.5]], 1, 0.1),
            Err(ModelError::InvalidBid { .. })
        ));
        assert!(matches!(
            QueryInstance::validate_and_rank(
                vec![Bidder::new("a", 1.0).with_quality(0.0)],
                vec![vec![0.5]],
                1,
                0.1
            ),
            Err(ModelError::InvalidQuality { .. })
        ));
        assert!(matches!(
            QueryInstance::validate_and_rank(ok(), vec![vec![0.5]], 1, 0.0),
            Err(ModelError::InvalidMinBid(_))
        ));
        // min_bid above the last-ranked bid is rejected, equality allowed.
        assert!(matches!(
            QueryInstance::validate_and_rank(ok(), vec![vec![0.5]], 1, 1.5),
            Err(ModelError::MinBidAboveLastBid { .. })
        ));
        assert!(QueryInstance::validate_and_rank(ok(), vec![vec![0.5]], 1, 1.0).is_ok());
    }

    #[test]
    fn single_bidder_pays_reserve() {
        let inst = uniform_instance(&[1.0], 1, 0.5, 0.1);
        let slate = Slate::new(vec![1], &inst).unwrap();
        assert_eq!(slate_prices(&inst, &slate).unwrap(), vec![0.1]);
    }

    #[test]
    fn full_slate_prices_next_member_then_reserve() {
        let inst = uniform_instance(&[2.0, 1.0], 2, 0.5, 0.1);
        let slate = Slate::new(vec![1, 2], &inst).unwrap();
        // Position 1 pays the next member's bid; the last rank pays reserve.
        assert_eq!(slate_prices(&inst, &slate).unwrap(), vec![1.0, 0.1]);
    }

    #[test]
    fn quality_ratio_scales_prices() {
        let bidders = vec![
            Bidder::new("a", 4.0).with_quality(1.0),
            Bidder::new("b", 1.0).with_quality(2.0),
        ];
        let inst = QueryInstance::validate_and_rank(
            bidders,
            vec![vec![0.5, 0.5], vec![0.5, 0.5]],
            2,
            0.1,
        )
        .unwrap();
        let slate = Slate::new(vec![1, 2], &inst).unwrap();
        assert_eq!(slate_prices(&inst, &slate).unwrap(), vec![2.0, 0.1]);
    }

    #[test]
    fn early_terminated_slate_pays_reserve() {
        let inst = uniform_instance(&[2.0, 1.0], 2, 0.5, 0.1);
        let slate = Slate::new(vec![1], &inst).unwrap();
        // Lower-ranked bidders exist, but the slate ends before position m.
        assert_eq!(slate_prices(&inst, &slate).unwrap(), vec![0.1]);
    }

    #[test]
    fn full_slate_last_member_pays_next_ranked_bid() {
        let inst = uniform_instance(&[3.0, 2.0, 1.0], 2, 0.5, 0.1);
        let slate = Slate::new(vec![1, 2], &inst).unwrap();
        assert_eq!(slate_prices(&inst, &slate).unwrap(), vec![2.0, 1.0]);
    }

    #[test]
    fn utility_single_term() {
        let inst = uniform_instance(&[1.0], 1, 0.5, 0.1);
        let slate = Slate::new(vec![1], &inst).unwrap();
        let u = slate_utility(&inst, &slate, ObjectiveMode::BidRanked).unwrap();
        assert!((u - 0.05).abs() < 1e-15);
    }

    #[test]
    fn utility_two_positions() {
        let inst = uniform_instance(&[2.0, 1.0], 2, 0.5, 0.1);
        let slate = Slate::new(vec![1, 2], &inst).unwrap();
        let u = slate_utility(&inst, &slate, ObjectiveMode::BidRanked).unwrap();
        assert!((u - 0.55).abs() < 1e-15);
    }

    #[test]
    fn hybrid_with_zero_mu_equals_revenue_exactly() {
        let bidders = vec![
            Bidder::new("a", 2.5).with_quality(1.3).with_utility_factor(0.7),
            Bidder::new("b", 1.0).with_quality(0.9).with_utility_factor(-0.4),
        ];
        let inst = QueryInstance::validate_and_rank(
            bidders,
            vec![vec![0.5, 0.2], vec![0.3, 0.1]],
            2,
            0.05,
        )
        .unwrap();
        let slate = Slate::new(vec![1, 2], &inst).unwrap();
        let hybrid = slate_utility(&inst, &slate, ObjectiveMode::Hybrid).unwrap();
        let revenue = slate_utility(&inst, &slate, ObjectiveMode::RevenueRanked).unwrap();
        assert_eq!(hybrid, revenue);
    }

    #[test]
    fn hybrid_inverse_bid_weights_count_clicks() {
        let mut bidders = vec![
            Bidder::new("a", 2.0),
            Bidder::new("b", 0.7),
            Bidder::new("c", 0.3),
        ];
        for b in &mut bidders {
            b.utility_factor = 0.0;
            b.hybrid_weight = 1.0 / b.bid;
        }
        let inst = QueryInstance::validate_and_rank(
            bidders,
            vec![vec![0.5, 0.2], vec![0.3, 0.25], vec![0.2, 0.15]],
            2,
            0.1,
        )
        .unwrap();
        let slate = Slate::new(vec![1, 3], &inst).unwrap();
        let u = slate_utility(&inst, &slate, ObjectiveMode::Hybrid).unwrap();
        let clicks = 0.5 + 0.15;
        assert!(rel_diff(u, clicks) < 1e-12);
    }

    #[test]
    fn bid_ranked_rejects_nonunit_quality() {
        let bidders = vec![Bidder::new("a", 1.0).with_quality(2.0)];
        let inst =
            QueryInstance::validate_and_rank(bidders, vec![vec![0.5]], 1, 0.1).unwrap();
        let slate = Slate::new(vec![1], &inst).unwrap();
        assert!(matches!(
            slate_utility(&inst, &slate, ObjectiveMode::BidRanked),
            Err(ModelError::BidRankedNeedsUnitQuality { .. })
        ));
    }

    #[test]
    fn slate_validation() {
        let inst = uniform_instance(&[3.0, 2.0, 1.0], 2, 0.5, 0.1);
        assert!(matches!(
            Slate::new(vec![2, 1], &inst),
            Err(ModelError::SlateNotIncreasing)
        ));
        assert!(matches!(
            Slate::new(vec![1, 1], &inst),
            Err(ModelError::SlateNotIncreasing)
        ));
        assert!(matches!(
            Slate::new(vec![0], &inst),
            Err(ModelError::SlateIndexOutOfRange { .. })
        ));
        assert!(matches!(
            Slate::new(vec![4], &inst),
            Err(ModelError::SlateIndexOutOfRange { .. })
        ));
        assert!(matches!(
            Slate::new(vec![1, 2, 3], &inst),
            Err(ModelError::SlateTooLong { .. })
        ));
        assert!(Slate::new(vec![], &inst).is_ok());
    }
}
