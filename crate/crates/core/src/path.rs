//! Layered-DAG formulation of the slate problem and its longest-path solver,
//! with optional exclusion-mask arc filtering.
//!
//! Layer `p` holds one node per candidate ad for position `p` plus a chain
//! node that absorbs early-terminated slates; a source and sink close the
//! graph. An edge from ad `i` at layer `p` to ad `j` at layer `p+1` carries
//! the utility of showing `i` at `p` priced by `j`; edges into the chain
//! price the reserve instead. The production solve relaxes successor ranges
//! in place without materializing edges; [`build_network`] materializes the
//! same arc set for inspection and fixtures.

use thiserror::Error;

use crate::model::{
    evaluate, ModelError, ObjectiveMode, QueryInstance, Slate, SlateSolution,
};

/// Errors from the slate solvers (shared by the DP, the path solver, and the
/// enumeration oracle).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("mask has {len} bits, expected one per bidder ({expected})")]
    MaskLength { len: usize, expected: usize },
    #[error("mask bitstring may contain only '0' and '1', got {0:?}")]
    MaskCharacter(char),
    #[error("no admissible slate: the sink is unreachable under this mask")]
    SinkUnreachable,
    #[error("instance has {n} bidders, above the enumeration cap of {cap}")]
    InstanceTooLarge { n: usize, cap: usize },
    #[error("solver value {value} disagrees with re-evaluated slate utility {utility}")]
    ValueMismatch { value: f64, utility: f64 },
}

/// Bit vector over ranked ads: bit set = the ad may be excluded from the
/// slate for non-rank reasons, bit clear = it may not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask {
    bits: Vec<bool>,
}

impl Mask {
    pub fn new(bits: Vec<bool>) -> Self {
        Mask { bits }
    }

    /// Parses a string of `1` (excludable) and `0` (mandatory) characters,
    /// one per ranked ad.
    pub fn from_bitstring(s: &str) -> Result<Self, SolveError> {
        s.chars()
            .map(|c| match c {
                '1' => Ok(true),
                '0' => Ok(false),
                other => Err(SolveError::MaskCharacter(other)),
            })
            .collect::<Result<Vec<bool>, _>>()
            .map(Mask::new)
    }

    /// Mask taken from the per-bidder excludable flags, in rank order.
    pub fn from_instance(instance: &QueryInstance) -> Self {
        Mask::new(instance.bidders().iter().map(|b| b.excludable).collect())
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Whether the ad at 1-based `rank` may be excluded.
    pub fn excludable(&self, rank: usize) -> bool {
        self.bits[rank - 1]
    }

    /// 1-based ranks that cannot be excluded, ascending.
    pub fn mandatory_ranks(&self) -> Vec<usize> {
        self.bits
            .iter()
            .enumerate()
            .filter(|&(_, &b)| !b)
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn bitstring(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    pub(crate) fn check_length(&self, n: usize) -> Result<(), SolveError> {
        if self.bits.len() != n {
            return Err(SolveError::MaskLength {
                len: self.bits.len(),
                expected: n,
            });
        }
        Ok(())
    }
}

/// Successor cutoffs induced by a mask: for each rank, the next mandatory
/// rank after it (the last rank an arc may jump to before stopping).
struct MaskRules {
    /// next[j] = smallest mandatory rank > j, for j = 0..=n. `None` means no
    /// mandatory ad remains, so the chain/sink is reachable from j.
    next: Vec<Option<usize>>,
}

impl MaskRules {
    fn build(n: usize, mask: Option<&Mask>) -> Result<MaskRules, SolveError> {
        let mut next = vec![None; n + 1];
        if let Some(mask) = mask {
            mask.check_length(n)?;
            let mut upcoming = None;
            for j in (1..=n).rev() {
                next[j] = upcoming;
                if !mask.excludable(j) {
                    upcoming = Some(j);
                }
            }
            next[0] = upcoming;
        }
        Ok(MaskRules { next })
    }

    /// Largest rank a slate may start at: the first mandatory ad, or n.
    fn start_cap(&self, n: usize) -> usize {
        self.next[0].unwrap_or(n)
    }

    /// Largest real successor rank reachable from `j`.
    fn successor_cap(&self, j: usize, n: usize) -> usize {
        self.next[j].unwrap_or(n)
    }

    /// Whether the slate may end right after `j` (chain entry, or terminal
    /// edge at the last layer): only when no mandatory ad follows `j`.
    fn may_terminate_after(&self, j: usize) -> bool {
        self.next[j].is_none()
    }

    fn has_mandatory(&self) -> bool {
        self.next[0].is_some()
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SolveOptions {
    /// Allow the empty slate (the source-to-chain path of value 0) as an
    /// answer. Off by default; with a mask it is only admissible when no ad
    /// is mandatory.
    pub allow_empty: bool,
}

/// Node of the layered network. Real ads use `rank` 1..=n; `rank` n+1 is the
/// chain, the source is (0, 0) and the sink is (n+1, m+1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId {
    pub rank: usize,
    pub layer: usize,
}

impl std::fmt::Display for NodeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.rank, self.layer)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub from: NodeId,
    pub to: NodeId,
    pub cost: f64,
}

/// Materialized layered network: the full node set plus the arcs admitted by
/// the mask rules (every arc when no mask is given). Arcs are stored in
/// (from-layer, from-rank, to-rank) order.
#[derive(Debug, Clone)]
pub struct SlateNetwork {
    n: usize,
    positions: usize,
    mode: ObjectiveMode,
    nodes: Vec<NodeId>,
    edges: Vec<Edge>,
}

impl SlateNetwork {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn positions(&self) -> usize {
        self.positions
    }

    pub fn mode(&self) -> ObjectiveMode {
        self.mode
    }

    pub fn source(&self) -> NodeId {
        NodeId { rank: 0, layer: 0 }
    }

    pub fn sink(&self) -> NodeId {
        NodeId {
            rank: self.n + 1,
            layer: self.positions + 1,
        }
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Text edge list, one `(i,p) -> (j,q) : cost` line per arc, in stored
    /// order. Costs carry six decimals.
    pub fn emit_edge_list(&self) -> String {
        let mut out = String::new();
        for e in &self.edges {
            out.push_str(&format!("{} -> {} : {:.6}\n", e.from, e.to, e.cost));
        }
        out
    }
}

/// Strips source, sink, and chain nodes from a node path, leaving the slate.
pub fn path_to_slate(instance: &QueryInstance, path: &[NodeId]) -> Result<Slate, ModelError> {
    let ranks: Vec<usize> = path
        .iter()
        .map(|node| node.rank)
        .filter(|&r| r >= 1 && r <= instance.n())
        .collect();
    Slate::new(ranks, instance)
}

/// Builds the layered network for `mode`, filtering arcs by the mask rules
/// when a mask is given: slates may start no later than the first mandatory
/// ad, an arc may jump past excludable ads but never past a mandatory one,
/// and the chain or sink is reachable only once no mandatory ad remains.
/// Arcs whose tail cannot be reached from the source are not materialized.
pub fn build_network(
    instance: &QueryInstance,
    mode: ObjectiveMode,
    mask: Option<&Mask>,
) -> Result<SlateNetwork, SolveError> {
    instance.check_mode(mode)?;
    let n = instance.n();
    let m = instance.positions();
    let rules = MaskRules::build(n, mask)?;
    let eps = instance.min_bid();
    let chain = n + 1;

    let mut nodes = Vec::new();
    nodes.push(NodeId { rank: 0, layer: 0 });
    for p in 1..=m {
        for j in p..=n {
            nodes.push(NodeId { rank: j, layer: p });
        }
        nodes.push(NodeId { rank: chain, layer: p });
    }
    nodes.push(NodeId {
        rank: chain,
        layer: m + 1,
    });

    // reachable[j] for the current layer; index 0 unused, index n+1 = chain.
    let mut reachable = vec![false; n + 2];
    let mut edges = Vec::new();

    let source = NodeId { rank: 0, layer: 0 };
    for j in 1..=rules.start_cap(n) {
        edges.push(Edge {
            from: source,
            to: NodeId { rank: j, layer: 1 },
            cost: 0.0,
        });
        reachable[j] = true;
    }
    if !rules.has_mandatory() {
        edges.push(Edge {
            from: source,
            to: NodeId { rank: chain, layer: 1 },
            cost: 0.0,
        });
        reachable[chain] = true;
    }

    for p in 1..=m {
        let mut next_reachable = vec![false; n + 2];
        let last_layer = p == m;
        for i in p..=n {
            if !reachable[i] {
                continue;
            }
            let from = NodeId { rank: i, layer: p };
            if last_layer {
                if rules.may_terminate_after(i) {
                    let price = if i < n {
                        instance.successor_price(i, i + 1)
                    } else {
                        eps
                    };
                    edges.push(Edge {
                        from,
                        to: NodeId { rank: chain, layer: m + 1 },
                        cost: instance.position_term(i, p, price, mode),
                    });
                }
                continue;
            }
            for j in (i + 1)..=rules.successor_cap(i, n) {
                edges.push(Edge {
                    from,
                    to: NodeId { rank: j, layer: p + 1 },
                    cost: instance.position_term(i, p, instance.successor_price(i, j), mode),
                });
                next_reachable[j] = true;
            }
            if rules.may_terminate_after(i) {
                edges.push(Edge {
                    from,
                    to: NodeId { rank: chain, layer: p + 1 },
                    cost: instance.position_term(i, p, eps, mode),
                });
                next_reachable[chain] = true;
            }
        }
        if reachable[chain] {
            edges.push(Edge {
                from: NodeId { rank: chain, layer: p },
                to: NodeId {
                    rank: chain,
                    layer: p + 1,
                },
                cost: 0.0,
            });
            next_reachable[chain] = true;
        }
        reachable = next_reachable;
    }

    Ok(SlateNetwork {
        n,
        positions: m,
        mode,
        nodes,
        edges,
    })
}

/// Maximum-cost source-to-sink path by single-pass relaxation in reverse
/// topological order, ties broken toward the smaller node rank. The empty
/// path along the chain is skipped unless allowed via [`longest_path_with`].
pub fn longest_path(network: &SlateNetwork) -> Result<(Vec<NodeId>, f64), SolveError> {
    longest_path_with(network, SolveOptions::default())
}

pub fn longest_path_with(
    network: &SlateNetwork,
    options: SolveOptions,
) -> Result<(Vec<NodeId>, f64), SolveError> {
    use std::collections::HashMap;

    let mut index: HashMap<NodeId, usize> = HashMap::new();
    for (i, &node) in network.nodes.iter().enumerate() {
        index.insert(node, i);
    }
    let source = network.source();
    let sink = network.sink();
    let source_idx = index[&source];
    let sink_idx = index[&sink];

    // Out-edges grouped per node, preserving stored (to-rank ascending)
    // order so ties resolve exactly like the in-place solver.
    let mut adjacency: Vec<Vec<(usize, f64)>> = vec![Vec::new(); network.nodes.len()];
    for e in &network.edges {
        if e.from == source && e.to.rank == network.n + 1 && !options.allow_empty {
            continue;
        }
        adjacency[index[&e.from]].push((index[&e.to], e.cost));
    }

    // Nodes in reverse topological order: layer descending, rank ascending.
    let mut order: Vec<usize> = (0..network.nodes.len()).collect();
    order.sort_by_key(|&i| {
        (
            std::cmp::Reverse(network.nodes[i].layer),
            network.nodes[i].rank,
        )
    });

    let mut value = vec![f64::NEG_INFINITY; network.nodes.len()];
    let mut choice: Vec<Option<usize>> = vec![None; network.nodes.len()];
    value[sink_idx] = 0.0;
    for &i in &order {
        if i == sink_idx {
            continue;
        }
        for &(to, cost) in &adjacency[i] {
            let candidate = cost + value[to];
            if candidate > value[i] {
                value[i] = candidate;
                choice[i] = Some(to);
            }
        }
    }

    if value[source_idx] == f64::NEG_INFINITY {
        return Err(SolveError::SinkUnreachable);
    }

    let mut path = vec![source];
    let mut at = source_idx;
    while let Some(next) = choice[at] {
        path.push(network.nodes[next]);
        at = next;
    }
    debug_assert_eq!(*path.last().unwrap(), sink);
    Ok((path, value[source_idx]))
}

/// Optimal slate via the network formulation. The relaxation filters
/// successor ranges in place instead of materializing an edge list; the
/// result matches `longest_path(build_network(..))` arc for arc.
pub fn solve_slate(
    instance: &QueryInstance,
    mode: ObjectiveMode,
    mask: Option<&Mask>,
) -> Result<SlateSolution, SolveError> {
    solve_slate_with(instance, mode, mask, SolveOptions::default())
}

pub fn solve_slate_with(
    instance: &QueryInstance,
    mode: ObjectiveMode,
    mask: Option<&Mask>,
    options: SolveOptions,
) -> Result<SlateSolution, SolveError> {
    instance.check_mode(mode)?;
    let n = instance.n();
    let m = instance.positions();
    let rules = MaskRules::build(n, mask)?;
    let eps = instance.min_bid();
    let chain = n + 1;

    // value[(p-1)*n + (j-1)]: best cost from ad j at layer p to the sink.
    let mut value = vec![f64::NEG_INFINITY; n * m];
    let mut choice = vec![0usize; n * m];
    let cell = |j: usize, p: usize| (p - 1) * n + (j - 1);

    for p in (1..=m).rev() {
        let last_layer = p == m;
        for j in (p..=n).rev() {
            if last_layer {
                if rules.may_terminate_after(j) {
                    let price = if j < n {
                        instance.successor_price(j, j + 1)
                    } else {
                        eps
                    };
                    value[cell(j, p)] = instance.position_term(j, p, price, mode);
                    choice[cell(j, p)] = chain;
                }
                continue;
            }
            let mut best = f64::NEG_INFINITY;
            let mut pick = 0usize;
            for s in (j + 1)..=rules.successor_cap(j, n) {
                let tail = value[cell(s, p + 1)];
                if tail == f64::NEG_INFINITY {
                    continue;
                }
                let candidate =
                    instance.position_term(j, p, instance.successor_price(j, s), mode) + tail;
                if candidate > best {
                    best = candidate;
                    pick = s;
                }
            }
            if rules.may_terminate_after(j) {
                let candidate = instance.position_term(j, p, eps, mode) + 0.0;
                if candidate > best {
                    best = candidate;
                    pick = chain;
                }
            }
            value[cell(j, p)] = best;
            choice[cell(j, p)] = pick;
        }
    }

    let mut best = f64::NEG_INFINITY;
    let mut start = 0usize;
    for j in 1..=rules.start_cap(n) {
        let v = value[cell(j, 1)];
        if v > best {
            best = v;
            start = j;
        }
    }
    let empty_allowed = options.allow_empty && !rules.has_mandatory();
    if best == f64::NEG_INFINITY && !empty_allowed {
        return Err(SolveError::SinkUnreachable);
    }
    if empty_allowed && 0.0 > best {
        let slate = Slate::new(Vec::new(), instance)?;
        return Ok(SlateSolution {
            slate,
            value: 0.0,
            prices: Vec::new(),
            mode,
        });
    }

    let mut ranks = Vec::new();
    let mut j = start;
    let mut p = 1;
    loop {
        ranks.push(j);
        let next = choice[cell(j, p)];
        if next == chain {
            break;
        }
        j = next;
        p += 1;
    }
    let slate = Slate::new(ranks, instance)?;
    let solution = evaluate(instance, &slate, mode)?;
    let utility = solution.value;
    if crate::model::rel_diff(best, utility) > 1e-12 {
        return Err(SolveError::ValueMismatch {
            value: best,
            utility,
        });
    }
    Ok(SlateSolution {
        value: best,
        ..solution
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Bidder;
    use crate::oracle;

    fn uniform_instance(bids: &[f64], positions: usize, ctr: f64, min_bid: f64) -> QueryInstance {
        let bidders: Vec<Bidder> = bids
            .iter()
            .enumerate()
            .map(|(i, &b)| Bidder::new(format!("b{}", i + 1), b))
            .collect();
        let rows = vec![vec![ctr; positions]; bids.len()];
        QueryInstance::validate_and_rank(bidders, rows, positions, min_bid).unwrap()
    }

    fn edge_set(net: &SlateNetwork) -> Vec<(usize, usize, usize, usize)> {
        net.edges()
            .iter()
            .map(|e| (e.from.rank, e.from.layer, e.to.rank, e.to.layer))
            .collect()
    }

    #[test]
    fn unmasked_two_by_two_edge_table() {
        // Transcribed by hand from the layered construction for n=2, m=2:
        // source feeds every first-layer node including the chain; interior
        // arcs go strictly down-rank; the chain runs to the sink.
        let inst = uniform_instance(&[2.0, 1.0], 2, 0.5, 0.1);
        let net = build_network(&inst, ObjectiveMode::BidRanked, None).unwrap();
        let expected = vec![
            (0, 0, 1, 1),
            (0, 0, 2, 1),
            (0, 0, 3, 1),
            (1, 1, 2, 2),
            (1, 1, 3, 2),
            (2, 1, 3, 2),
            (3, 1, 3, 2),
            (2, 2, 3, 3),
            (3, 2, 3, 3),
        ];
        assert_eq!(edge_set(&net), expected);
        // Spot-check costs: (1,1)->(2,2) prices ad 2's bid, (1,1)->(3,2)
        // prices the reserve, (2,2)->sink is the last-rank reserve edge.
        let cost =
            |f: (usize, usize), t: (usize, usize)| {
                net.edges()
                    .iter()
                    .find(|e| {
                        (e.from.rank, e.from.layer) == f && (e.to.rank, e.to.layer) == t
                    })
                    .unwrap()
                    .cost
            };
        assert_eq!(cost((1, 1), (2, 2)), 0.5);
        assert_eq!(cost((1, 1), (3, 2)), 0.05);
        assert_eq!(cost((2, 2), (3, 3)), 0.05);
        assert_eq!(cost((3, 1), (3, 2)), 0.0);
    }

    #[test]
    fn node_count_matches_closed_form() {
        for (nb, m) in [(2usize, 2usize), (5, 3), (8, 4), (12, 12)] {
            let bids: Vec<f64> = (0..nb).map(|i| (nb - i) as f64).collect();
            let inst = uniform_instance(&bids, m, 0.2, 0.5);
            let net = build_network(&inst, ObjectiveMode::BidRanked, None).unwrap();
            let expected: usize = (1..=m).map(|p| nb + 2 - p).sum::<usize>() + 2;
            assert_eq!(net.node_count(), expected);
        }
    }

    #[test]
    fn all_ones_mask_matches_unmasked_network() {
        let inst = uniform_instance(&[4.0, 3.0, 2.0, 1.0], 3, 0.3, 0.1);
        let unmasked = build_network(&inst, ObjectiveMode::BidRanked, None).unwrap();
        let mask = Mask::new(vec![true; 4]);
        let masked = build_network(&inst, ObjectiveMode::BidRanked, Some(&mask)).unwrap();
        assert_eq!(unmasked.edges(), masked.edges());
    }

    #[test]
    fn mask_rules_restrict_origins_and_successors() {
        // mask = (1,0,1,0,1): ads 2 and 4 are mandatory.
        let inst = uniform_instance(&[5.0, 4.0, 3.0, 2.0, 1.0], 3, 0.2, 0.5);
        let mask = Mask::from_bitstring("10101").unwrap();
        let net = build_network(&inst, ObjectiveMode::BidRanked, Some(&mask)).unwrap();
        let layer1: Vec<usize> = net
            .edges()
            .iter()
            .filter(|e| e.from.layer == 0)
            .map(|e| e.to.rank)
            .collect();
        assert_eq!(layer1, vec![1, 2]);
        let succ = |rank: usize, layer: usize| -> Vec<usize> {
            net.edges()
                .iter()
                .filter(|e| e.from.rank == rank && e.from.layer == layer)
                .map(|e| e.to.rank)
                .collect::<Vec<_>>()
        };
        assert_eq!(succ(1, 1), vec![2]);
        assert_eq!(succ(2, 1), vec![3, 4]);
    }

    #[test]
    fn masked_solution_always_contains_mandatory_ads() {
        let inst = uniform_instance(&[5.0, 4.0, 3.0, 2.0, 1.0], 3, 0.2, 0.5);
        let mask = Mask::from_bitstring("10101").unwrap();
        let sol = solve_slate(&inst, ObjectiveMode::BidRanked, Some(&mask)).unwrap();
        assert!(sol.slate.contains(2));
        assert!(sol.slate.contains(4));
    }

    #[test]
    fn longest_path_trivial_cases() {
        // All rho = 0: every path costs 0.
        let mut bidders = vec![Bidder::new("a", 2.0), Bidder::new("b", 1.0)];
        for b in &mut bidders {
            b.utility_factor = 0.0;
        }
        let inst = QueryInstance::validate_and_rank(
            bidders,
            vec![vec![0.5, 0.5], vec![0.5, 0.5]],
            2,
            0.1,
        )
        .unwrap();
        let net = build_network(&inst, ObjectiveMode::BidRanked, None).unwrap();
        let (_, v) = longest_path(&net).unwrap();
        assert_eq!(v, 0.0);

        // Single ad, single position: one real path worth rho*eps*T.
        let inst = uniform_instance(&[1.0], 1, 0.5, 0.1);
        let net = build_network(&inst, ObjectiveMode::BidRanked, None).unwrap();
        let (path, v) = longest_path(&net).unwrap();
        assert!((v - 0.05).abs() < 1e-15);
        assert_eq!(
            path,
            vec![
                NodeId { rank: 0, layer: 0 },
                NodeId { rank: 1, layer: 1 },
                NodeId { rank: 2, layer: 2 },
            ]
        );
    }

    #[test]
    fn path_matches_dp_on_two_by_two() {
        let inst = uniform_instance(&[2.0, 1.0], 2, 0.5, 0.1);
        let sol = solve_slate(&inst, ObjectiveMode::BidRanked, None).unwrap();
        assert_eq!(sol.slate.ranks(), &[1, 2]);
        assert!((sol.value - 0.55).abs() < 1e-15);
        let dp = crate::dp::solve_backward(&inst, ObjectiveMode::BidRanked).unwrap();
        assert_eq!(dp.value, sol.value);
        assert_eq!(dp.slate, sol.slate);
    }

    #[test]
    fn single_ad_many_positions() {
        let inst = uniform_instance(&[1.0], 3, 0.5, 0.1);
        let sol = solve_slate(&inst, ObjectiveMode::BidRanked, None).unwrap();
        assert_eq!(sol.slate.ranks(), &[1]);
    }

    #[test]
    fn materialized_and_implicit_routes_agree() {
        let inst = uniform_instance(&[5.0, 4.0, 3.0, 2.0, 1.0], 3, 0.2, 0.5);
        for mask in [None, Some(Mask::from_bitstring("10101").unwrap())] {
            let implicit =
                solve_slate(&inst, ObjectiveMode::BidRanked, mask.as_ref()).unwrap();
            let net = build_network(&inst, ObjectiveMode::BidRanked, mask.as_ref()).unwrap();
            let (node_path, v) = longest_path(&net).unwrap();
            assert_eq!(v, implicit.value);
            let slate = path_to_slate(&inst, &node_path).unwrap();
            assert_eq!(slate, implicit.slate);
        }
    }

    #[test]
    fn all_zero_mask_with_more_ads_than_positions_is_infeasible() {
        let inst = uniform_instance(&[4.0, 3.0, 2.0, 1.0], 3, 0.2, 0.5);
        let mask = Mask::new(vec![false; 4]);
        assert_eq!(
            solve_slate(&inst, ObjectiveMode::BidRanked, Some(&mask)),
            Err(SolveError::SinkUnreachable)
        );
        // Enumeration agrees that nothing is admissible.
        assert_eq!(
            oracle::enumerate_best(&inst, ObjectiveMode::BidRanked, Some(&mask)),
            Err(SolveError::SinkUnreachable)
        );
        // With as many positions as ads the forced full slate is fine.
        let inst = uniform_instance(&[4.0, 3.0, 2.0, 1.0], 4, 0.2, 0.5);
        let mask = Mask::new(vec![false; 4]);
        let sol = solve_slate(&inst, ObjectiveMode::BidRanked, Some(&mask)).unwrap();
        assert_eq!(sol.slate.ranks(), &[1, 2, 3, 4]);
    }

    #[test]
    fn mask_length_is_checked() {
        let inst = uniform_instance(&[2.0, 1.0], 2, 0.5, 0.1);
        let mask = Mask::new(vec![true]);
        assert!(matches!(
            solve_slate(&inst, ObjectiveMode::BidRanked, Some(&mask)),
            Err(SolveError::MaskLength { len: 1, expected: 2 })
        ));
    }

    #[test]
    fn empty_slate_only_when_allowed() {
        let mut bidders = vec![Bidder::new("a", 2.0), Bidder::new("b", 1.0)];
        for b in &mut bidders {
            b.utility_factor = -1.0;
        }
        let inst = QueryInstance::validate_and_rank(
            bidders,
            vec![vec![0.5, 0.5], vec![0.5, 0.5]],
            2,
            0.1,
        )
        .unwrap();
        let default = solve_slate(&inst, ObjectiveMode::BidRanked, None).unwrap();
        assert!(!default.slate.is_empty());
        assert!(default.value < 0.0);
        let opts = SolveOptions { allow_empty: true };
        let empty = solve_slate_with(&inst, ObjectiveMode::BidRanked, None, opts).unwrap();
        assert!(empty.slate.is_empty());
        assert_eq!(empty.value, 0.0);
        // Oracle agrees on both settings.
        let best = oracle::enumerate_best(&inst, ObjectiveMode::BidRanked, None).unwrap();
        assert_eq!(best.slate, default.slate);
        assert_eq!(best.value, default.value);
    }

    #[test]
    fn dropping_a_zero_weight_non_price_setter_keeps_the_value() {
        // Bidder 3 has rho = 0 and bids exactly the reserve, so removing it
        // swaps an A_3 price for an equal reserve price.
        let bidders = vec![
            Bidder::new("a", 5.0),
            Bidder::new("b", 4.0).with_utility_factor(1.0),
            Bidder::new("c", 1.0).with_utility_factor(0.0),
        ];
        let rows = vec![vec![0.5, 0.3], vec![0.4, 0.2], vec![0.3, 0.1]];
        let with = QueryInstance::validate_and_rank(bidders.clone(), rows.clone(), 2, 1.0).unwrap();
        let without = QueryInstance::validate_and_rank(
            bidders[..2].to_vec(),
            rows[..2].to_vec(),
            2,
            1.0,
        )
        .unwrap();
        let a = oracle::enumerate_best(&with, ObjectiveMode::BidRanked, None).unwrap();
        let b = oracle::enumerate_best(&without, ObjectiveMode::BidRanked, None).unwrap();
        assert_eq!(a.value, b.value);
        let pa = solve_slate(&with, ObjectiveMode::BidRanked, None).unwrap();
        let pb = solve_slate(&without, ObjectiveMode::BidRanked, None).unwrap();
        assert_eq!(pa.value, pb.value);
    }

    #[test]
    fn masked_solve_matches_masked_oracle_small() {
        let inst = uniform_instance(&[5.0, 4.0, 3.0, 2.0, 1.0], 3, 0.2, 0.5);
        for bits in ["10101", "11111", "01110", "11011", "00111", "11100"] {
            let mask = Mask::from_bitstring(bits).unwrap();
            let a = solve_slate(&inst, ObjectiveMode::BidRanked, Some(&mask));
            let b = oracle::enumerate_best(&inst, ObjectiveMode::BidRanked, Some(&mask));
            match (a, b) {
                (Ok(a), Ok(b)) => {
                    // Accumulation order differs between the solver and the
                    // oracle, so agreement is up to round-off, not bitwise.
                    assert!(
                        crate::model::rel_diff(a.value, b.value) <= 1e-12,
                        "mask {bits}: {} vs {}",
                        a.value,
                        b.value
                    );
                    let optima =
                        oracle::enumerate_optima(&inst, ObjectiveMode::BidRanked, Some(&mask))
                            .unwrap();
                    assert!(optima.contains(&a.slate), "mask {bits}: slate {}", a.slate);
                }
                (a, b) => assert_eq!(a, b, "mask {bits}"),
            }
        }
    }
}
