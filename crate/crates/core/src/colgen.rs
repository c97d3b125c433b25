//! Budget-constrained allocation LP over slate columns, solved by column
//! generation with the path solver as the pricing subroutine.
//!
//! The master problem chooses how often to show each known slate per query,
//! subject to per-bidder budgets and per-query volumes. Pricing turns the
//! budget duals into per-bidder utility factors (revenue objective) or
//! hybrid weights (bid-value objective) and asks the slate solver for a
//! column whose value beats the query's volume dual.

use std::collections::HashSet;

use thiserror::Error;

use crate::model::{slate_prices, ObjectiveMode, QueryInstance, Slate};
use crate::oracle;
use crate::path::{solve_slate, Mask, SolveError};
use crate::simplex::{self, DenseLp, LpError};

/// Reduced costs below this are treated as non-improving.
pub const PRICING_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ColGenError {
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("problem has no queries")]
    NoQueries,
    #[error("query {query}: volume must be finite and nonnegative, got {value}")]
    InvalidVolume { query: usize, value: f64 },
    #[error("budgeted bidder {id:?}: budget must be nonnegative, got {value}")]
    InvalidBudget { id: String, value: f64 },
    #[error("duplicate budgeted bidder id {id:?}")]
    DuplicateBudget { id: String },
    #[error("budgeted bidder {id:?} is not referenced by any query")]
    UnreferencedBudget { id: String },
    #[error("query {query} has positive volume but no column")]
    MissingSeed { query: usize },
    #[error("max_iters must be at least 1")]
    BadIterationCap,
}

impl From<crate::model::ModelError> for ColGenError {
    fn from(e: crate::model::ModelError) -> Self {
        ColGenError::Solve(SolveError::Model(e))
    }
}

/// Master objective flavor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColGenObjective {
    /// Column coefficient = expected revenue of the slate (all bidders'
    /// expected payments).
    Revenue,
    /// Column coefficient = sum of first prices weighted by CTR.
    BidValue,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BudgetedBidder {
    pub id: String,
    /// Total budget; may be infinite (the row never binds).
    pub budget: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ColGenQuery {
    pub instance: QueryInstance,
    /// Expected number of occurrences.
    pub volume: f64,
}

/// The allocation problem: queries with volumes, budgeted bidders (matched
/// into each query by bidder id), and the objective flavor.
#[derive(Debug, Clone)]
pub struct ColGenProblem {
    queries: Vec<ColGenQuery>,
    budgets: Vec<BudgetedBidder>,
    objective: ColGenObjective,
    /// Whether bidders without a budget may be left out of slates. Budgeted
    /// bidders are always excludable; this is the business switch for the
    /// rest.
    unbudgeted_excludable: bool,
    /// budget_map[query][rank-1] = budget row for that bidder, if budgeted.
    budget_map: Vec<Vec<Option<usize>>>,
}

impl ColGenProblem {
    pub fn new(
        queries: Vec<ColGenQuery>,
        budgets: Vec<BudgetedBidder>,
        objective: ColGenObjective,
    ) -> Result<Self, ColGenError> {
        Self::with_unbudgeted_excludable(queries, budgets, objective, false)
    }

    pub fn with_unbudgeted_excludable(
        queries: Vec<ColGenQuery>,
        budgets: Vec<BudgetedBidder>,
        objective: ColGenObjective,
        unbudgeted_excludable: bool,
    ) -> Result<Self, ColGenError> {
        if queries.is_empty() {
            return Err(ColGenError::NoQueries);
        }
        for (i, q) in queries.iter().enumerate() {
            if !q.volume.is_finite() || q.volume < 0.0 {
                return Err(ColGenError::InvalidVolume {
                    query: i,
                    value: q.volume,
                });
            }
        }
        let mut seen = HashSet::new();
        for b in &budgets {
            if b.budget.is_nan() || b.budget < 0.0 {
                return Err(ColGenError::InvalidBudget {
                    id: b.id.clone(),
                    value: b.budget,
                });
            }
            if !seen.insert(b.id.clone()) {
                return Err(ColGenError::DuplicateBudget { id: b.id.clone() });
            }
        }
        let mut referenced = vec![false; budgets.len()];
        let mut budget_map = Vec::with_capacity(queries.len());
        for q in &queries {
            let map: Vec<Option<usize>> = q
                .instance
                .bidders()
                .iter()
                .map(|bidder| budgets.iter().position(|b| b.id == bidder.id))
                .collect();
            for row in map.iter().flatten() {
                referenced[*row] = true;
            }
            budget_map.push(map);
        }
        if let Some(missing) = referenced.iter().position(|&r| !r) {
            return Err(ColGenError::UnreferencedBudget {
                id: budgets[missing].id.clone(),
            });
        }
        Ok(ColGenProblem {
            queries,
            budgets,
            objective,
            unbudgeted_excludable,
            budget_map,
        })
    }

    pub fn queries(&self) -> &[ColGenQuery] {
        &self.queries
    }

    pub fn budgets(&self) -> &[BudgetedBidder] {
        &self.budgets
    }

    pub fn objective(&self) -> ColGenObjective {
        self.objective
    }

    /// Exclusion mask used for every pricing solve of a query: budgeted
    /// bidders may be dropped, unbudgeted ones only if configured.
    pub fn pricing_mask(&self, query: usize) -> Mask {
        let bits = self.budget_map[query]
            .iter()
            .map(|b| b.is_some() || self.unbudgeted_excludable)
            .collect();
        Mask::new(bits)
    }

    fn pricing_mode(&self) -> ObjectiveMode {
        match self.objective {
            ColGenObjective::Revenue => ObjectiveMode::RevenueRanked,
            ColGenObjective::BidValue => ObjectiveMode::Hybrid,
        }
    }

    /// Per-rank weights for a pricing solve given budget duals.
    fn pricing_weights(&self, query: usize, budget_duals: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let n = self.queries[query].instance.n();
        let mut rhos = Vec::with_capacity(n);
        let mut mus = Vec::with_capacity(n);
        for rank in 0..n {
            let pi = self.budget_map[query][rank]
                .map(|row| budget_duals[row])
                .unwrap_or(0.0);
            match self.objective {
                ColGenObjective::Revenue => {
                    rhos.push(1.0 - pi);
                    mus.push(0.0);
                }
                ColGenObjective::BidValue => {
                    rhos.push(-pi);
                    mus.push(1.0);
                }
            }
        }
        (rhos, mus)
    }
}

/// One LP column: a slate for one query, its expected cost to each budgeted
/// bidder per showing, and its objective coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub query: usize,
    pub slate: Slate,
    /// Expected cost per showing, one entry per budgeted bidder.
    pub costs: Vec<f64>,
    pub objective: f64,
}

/// Builds the column for showing `slate` on `query`: per-position expected
/// payments routed to the budgeted bidders, and the objective coefficient
/// for the problem's flavor.
pub fn slate_column(
    problem: &ColGenProblem,
    query: usize,
    slate: &Slate,
) -> Result<Column, ColGenError> {
    let instance = &problem.queries[query].instance;
    let prices = slate_prices(instance, slate)?;
    let mut costs = vec![0.0; problem.budgets.len()];
    let mut objective = 0.0;
    for (p, (&rank, &price)) in slate.ranks().iter().zip(&prices).enumerate() {
        let expected_payment = instance.ctr(rank, p + 1) * price;
        if let Some(row) = problem.budget_map[query][rank - 1] {
            costs[row] += expected_payment;
        }
        match problem.objective {
            ColGenObjective::Revenue => objective += expected_payment,
            ColGenObjective::BidValue => {
                objective += instance.bidder(rank).bid * instance.ctr(rank, p + 1)
            }
        }
    }
    Ok(Column {
        query,
        slate: slate.clone(),
        costs,
        objective,
    })
}

/// Primal/dual solution of the master LP.
#[derive(Debug, Clone, PartialEq)]
pub struct MasterSolution {
    /// Showings per column, aligned with the column list it was solved on.
    pub x: Vec<f64>,
    /// Budget duals, one per budgeted bidder (zero for unbounded budgets).
    pub budget_duals: Vec<f64>,
    /// Inventory duals, one per query.
    pub inventory_duals: Vec<f64>,
    pub objective: f64,
}

/// Solves the master LP over the given columns: maximize total objective
/// subject to budget rows and per-query inventory rows.
pub fn solve_master_lp(
    columns: &[Column],
    problem: &ColGenProblem,
) -> Result<MasterSolution, ColGenError> {
    for (i, q) in problem.queries.iter().enumerate() {
        if q.volume > 0.0 && !columns.iter().any(|c| c.query == i) {
            return Err(ColGenError::MissingSeed { query: i });
        }
    }
    // Budget rows with infinite budget can never bind; drop them.
    let finite_rows: Vec<usize> = problem
        .budgets
        .iter()
        .enumerate()
        .filter(|(_, b)| b.budget.is_finite())
        .map(|(i, _)| i)
        .collect();
    let n_queries = problem.queries.len();
    let mut rows = Vec::with_capacity(finite_rows.len() + n_queries);
    let mut rhs = Vec::with_capacity(finite_rows.len() + n_queries);
    for &b in &finite_rows {
        rows.push(columns.iter().map(|c| c.costs[b]).collect::<Vec<f64>>());
        rhs.push(problem.budgets[b].budget);
    }
    for (i, q) in problem.queries.iter().enumerate() {
        rows.push(
            columns
                .iter()
                .map(|c| if c.query == i { 1.0 } else { 0.0 })
                .collect(),
        );
        rhs.push(q.volume);
    }
    let lp = DenseLp {
        objective: columns.iter().map(|c| c.objective).collect(),
        rows,
        rhs,
    };
    let sol = simplex::solve(&lp)?;
    let mut budget_duals = vec![0.0; problem.budgets.len()];
    for (slot, &b) in finite_rows.iter().enumerate() {
        budget_duals[b] = sol.duals[slot];
    }
    let inventory_duals = sol.duals[finite_rows.len()..].to_vec();
    Ok(MasterSolution {
        x: sol.x,
        budget_duals,
        inventory_duals,
        objective: sol.objective,
    })
}

/// Result of one pricing sweep.
#[derive(Debug, Clone)]
pub struct PricingRound {
    /// Columns whose reduced cost exceeds the tolerance, one per query at
    /// most.
    pub columns: Vec<Column>,
    /// Largest subproblem value minus inventory dual seen across queries.
    pub max_reduced_cost: f64,
}

/// Prices one column per query against the master duals and returns those
/// that can improve the LP (subproblem value above the query's inventory
/// dual).
pub fn price_columns(
    problem: &ColGenProblem,
    duals: &MasterSolution,
) -> Result<PricingRound, ColGenError> {
    price_columns_with_tol(problem, duals, PRICING_TOL)
}

fn price_columns_with_tol(
    problem: &ColGenProblem,
    duals: &MasterSolution,
    tol: f64,
) -> Result<PricingRound, ColGenError> {
    let mut columns = Vec::new();
    let mut max_rc = f64::NEG_INFINITY;
    for (i, q) in problem.queries.iter().enumerate() {
        let (rhos, mus) = problem.pricing_weights(i, &duals.budget_duals);
        let modified = q.instance.with_weights(&rhos, &mus);
        let mask = problem.pricing_mask(i);
        let sub = solve_slate(&modified, problem.pricing_mode(), Some(&mask))?;
        let reduced_cost = sub.value - duals.inventory_duals[i];
        max_rc = max_rc.max(reduced_cost);
        if reduced_cost > tol {
            columns.push(slate_column(problem, i, &sub.slate)?);
        }
    }
    Ok(PricingRound {
        columns,
        max_reduced_cost: max_rc,
    })
}

/// One line of the iteration log.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub iter: usize,
    pub objective: f64,
    pub new_columns: usize,
    pub max_reduced_cost: f64,
}

impl std::fmt::Display for IterationRecord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}, {:.9}, {}, {:.3e}",
            self.iter, self.objective, self.new_columns, self.max_reduced_cost
        )
    }
}

/// Final state of a column-generation run.
#[derive(Debug, Clone)]
pub struct ColGenOutcome {
    pub master: MasterSolution,
    pub columns: Vec<Column>,
    pub log: Vec<IterationRecord>,
    /// False when the iteration cap was hit with improving columns still
    /// outstanding; the master solution is feasible either way.
    pub converged: bool,
}

/// Alternates master solves and pricing until no column improves, or the
/// iteration cap is reached. Seeds with each query's unweighted optimal
/// slate.
pub fn run_colgen(
    problem: &ColGenProblem,
    max_iters: usize,
    tolerance: f64,
) -> Result<ColGenOutcome, ColGenError> {
    if max_iters == 0 {
        return Err(ColGenError::BadIterationCap);
    }
    let mut pool: Vec<Column> = Vec::new();
    let mut seen: HashSet<(usize, Slate)> = HashSet::new();
    for (i, q) in problem.queries.iter().enumerate() {
        let zero_duals = vec![0.0; problem.budgets.len()];
        let (rhos, mus) = problem.pricing_weights(i, &zero_duals);
        let seeded = q.instance.with_weights(&rhos, &mus);
        let mask = problem.pricing_mask(i);
        let sol = solve_slate(&seeded, problem.pricing_mode(), Some(&mask))?;
        if seen.insert((i, sol.slate.clone())) {
            pool.push(slate_column(problem, i, &sol.slate)?);
        }
    }

    let mut log = Vec::new();
    let mut converged = false;
    let mut master = solve_master_lp(&pool, problem)?;
    for iter in 1..=max_iters {
        let round = price_columns_with_tol(problem, &master, tolerance)?;
        let fresh: Vec<Column> = round
            .columns
            .into_iter()
            .filter(|c| seen.insert((c.query, c.slate.clone())))
            .collect();
        log.push(IterationRecord {
            iter,
            objective: master.objective,
            new_columns: fresh.len(),
            max_reduced_cost: round.max_reduced_cost,
        });
        if fresh.is_empty() {
            converged = true;
            break;
        }
        pool.extend(fresh);
        master = solve_master_lp(&pool, problem)?;
    }

    Ok(ColGenOutcome {
        master,
        columns: pool,
        log,
        converged,
    })
}

/// Ground-truth LP over every admissible slate of every query. Only viable
/// for desk-scale problems; used to verify column generation end to end.
pub fn solve_by_full_enumeration(
    problem: &ColGenProblem,
) -> Result<(Vec<Column>, MasterSolution), ColGenError> {
    let mut columns = Vec::new();
    for (i, q) in problem.queries.iter().enumerate() {
        let mask = problem.pricing_mask(i);
        for slate in oracle::admissible_slates(&q.instance, Some(&mask))? {
            columns.push(slate_column(problem, i, &slate)?);
        }
    }
    let master = solve_master_lp(&columns, problem)?;
    Ok((columns, master))
}
