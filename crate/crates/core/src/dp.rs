//! Backward-recursion dynamic program for the optimal slate.
//!
//! The instance is conceptually padded with dummy bidders (zero weight, bid
//! equal to the reserve) so every slate can be treated as if it filled all
//! positions; the table rows for the dummies stay identically zero. The
//! transition at the last layer is the terminal edge of the network
//! formulation: the last member of a full slate pays the next-ranked
//! quality-adjusted bid, or the reserve from the last rank. Masks are not
//! handled here; masked solving belongs to the path solver.

use crate::model::{evaluate, ObjectiveMode, QueryInstance, Slate, SlateSolution};
use crate::path::SolveError;

/// Successor recorded when a slate ends (dummy padding from there on).
const END: usize = usize::MAX;

/// Marginal-value-to-go table: `(n + m) x m` values plus the argmax successor
/// per cell for path reconstruction. Rows `n+1..=n+m` are the dummy bidders.
#[derive(Debug, Clone)]
pub struct ValueTable {
    n: usize,
    positions: usize,
    values: Vec<f64>,
    choices: Vec<usize>,
}

impl ValueTable {
    /// Fills the table backward over positions `m..1` and ranks `n..1`.
    pub fn compute(instance: &QueryInstance, mode: ObjectiveMode) -> Result<Self, SolveError> {
        instance.check_mode(mode)?;
        let n = instance.n();
        let m = instance.positions();
        let eps = instance.min_bid();
        let rows = n + m;
        // Dummy rows are the zero initialization and are never overwritten.
        let mut values = vec![0.0; rows * m];
        let mut choices = vec![END; rows * m];
        let cell = |j: usize, s: usize| (j - 1) * m + (s - 1);

        for s in (1..=m).rev() {
            for j in (1..=n).rev() {
                if s == m {
                    let price = if j < n {
                        instance.successor_price(j, j + 1)
                    } else {
                        eps
                    };
                    values[cell(j, s)] = instance.position_term(j, s, price, mode);
                    choices[cell(j, s)] = END;
                    continue;
                }
                let mut best = f64::NEG_INFINITY;
                let mut pick = END;
                for succ in (j + 1)..=n {
                    let candidate = instance
                        .position_term(j, s, instance.successor_price(j, succ), mode)
                        + values[cell(succ, s + 1)];
                    if candidate > best {
                        best = candidate;
                        pick = succ;
                    }
                }
                // The dummy successor is always available and ends the slate;
                // ties go to the real successor with the smaller rank.
                let candidate = instance.position_term(j, s, eps, mode) + 0.0;
                if candidate > best {
                    best = candidate;
                    pick = END;
                }
                values[cell(j, s)] = best;
                choices[cell(j, s)] = pick;
            }
        }

        Ok(ValueTable {
            n,
            positions: m,
            values,
            choices,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn positions(&self) -> usize {
        self.positions
    }

    /// Value for the bidder at 1-based `rank` (dummies are ranks
    /// `n+1..=n+m`) starting at 1-based `position`.
    pub fn value(&self, rank: usize, position: usize) -> f64 {
        self.values[(rank - 1) * self.positions + (position - 1)]
    }

    fn choice(&self, rank: usize, position: usize) -> usize {
        self.choices[(rank - 1) * self.positions + (position - 1)]
    }

    /// Best first-layer rank (ascending scan, so ties keep the highest
    /// ranked ad) and its value.
    fn best_start(&self) -> (usize, f64) {
        let mut best = f64::NEG_INFINITY;
        let mut start = 0;
        for j in 1..=self.n {
            let v = self.value(j, 1);
            if v > best {
                best = v;
                start = j;
            }
        }
        (start, best)
    }

    /// Slate reconstruction from the recorded choices, dummies stripped.
    fn reconstruct(&self, start: usize) -> Vec<usize> {
        let mut ranks = Vec::new();
        let mut j = start;
        let mut s = 1;
        loop {
            ranks.push(j);
            if s == self.positions {
                break;
            }
            match self.choice(j, s) {
                END => break,
                next => {
                    j = next;
                    s += 1;
                }
            }
        }
        ranks
    }
}

/// Optimal slate by backward recursion in `O(n^2 m)`.
pub fn solve_backward(
    instance: &QueryInstance,
    mode: ObjectiveMode,
) -> Result<SlateSolution, SolveError> {
    let table = ValueTable::compute(instance, mode)?;
    let (start, best) = table.best_start();
    let slate = Slate::new(table.reconstruct(start), instance)?;
    let solution = evaluate(instance, &slate, mode)?;
    if crate::model::rel_diff(best, solution.value) > 1e-12 {
        return Err(SolveError::ValueMismatch {
            value: best,
            utility: solution.value,
        });
    }
    Ok(SlateSolution {
        value: best,
        ..solution
    })
}
