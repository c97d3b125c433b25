//! Dense revised simplex for small LPs of the form
//! `max c'x  s.t.  Ax <= b, x >= 0` with `b >= 0`.
//!
//! The slack basis is immediately feasible, so no phase-one is needed.
//! Entering variables follow Dantzig's rule with a switch to Bland's rule
//! after a run of degenerate pivots; the basis inverse is refactorized from
//! scratch periodically. Problem sizes here are tens of rows, so everything
//! is dense and simple.

use thiserror::Error;

const REDUCED_COST_TOL: f64 = 1e-9;
const RATIO_TOL: f64 = 1e-9;
const DEGENERATE_STEP: f64 = 1e-12;
const DEGENERATE_PIVOT_LIMIT: usize = 50;
const REFACTOR_INTERVAL: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error("constraint matrix has {rows} rows but rhs has {rhs} entries")]
    ShapeMismatch { rows: usize, rhs: usize },
    #[error("constraint row {row} has {cols} entries, expected {vars}")]
    RowLength { row: usize, cols: usize, vars: usize },
    #[error("rhs entry {row} is negative ({value}); the slack basis would be infeasible")]
    NegativeRhs { row: usize, value: f64 },
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("basis matrix is numerically singular")]
    SingularBasis,
    #[error("iteration limit reached ({0} pivots)")]
    IterationLimit(usize),
    #[error("optimality certificate failed: reduced cost {0} above tolerance")]
    CertificateFailed(f64),
}

/// `max c'x  s.t.  rows * x <= rhs, x >= 0`.
#[derive(Debug, Clone)]
pub struct DenseLp {
    pub objective: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    /// Structural variable values.
    pub x: Vec<f64>,
    /// One dual per constraint row, nonnegative at optimality.
    pub duals: Vec<f64>,
    pub objective: f64,
}

pub fn solve(lp: &DenseLp) -> Result<LpSolution, LpError> {
    let m = lp.rows.len();
    let n = lp.objective.len();
    if lp.rhs.len() != m {
        return Err(LpError::ShapeMismatch {
            rows: m,
            rhs: lp.rhs.len(),
        });
    }
    for (i, row) in lp.rows.iter().enumerate() {
        if row.len() != n {
            return Err(LpError::RowLength {
                row: i,
                cols: row.len(),
                vars: n,
            });
        }
    }
    for (i, &b) in lp.rhs.iter().enumerate() {
        if b < 0.0 || !b.is_finite() {
            return Err(LpError::NegativeRhs { row: i, value: b });
        }
    }
    if m == 0 {
        // No constraints: optimum is x = 0 unless some objective
        // coefficient is positive, which would be unbounded.
        if lp.objective.iter().any(|&c| c > REDUCED_COST_TOL) {
            return Err(LpError::Unbounded);
        }
        return Ok(LpSolution {
            x: vec![0.0; n],
            duals: vec![],
            objective: 0.0,
        });
    }

    let mut state = Simplex::new(lp);
    state.run()?;
    state.extract(lp)
}

/// Variable indices 0..n are structural, n..n+m are slacks.
struct Simplex<'a> {
    lp: &'a DenseLp,
    m: usize,
    n: usize,
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    /// Dense inverse of the basis matrix.
    binv: Vec<Vec<f64>>,
    x_basic: Vec<f64>,
    degenerate_run: usize,
    bland: bool,
    pivots: usize,
}

impl<'a> Simplex<'a> {
    fn new(lp: &'a DenseLp) -> Self {
        let m = lp.rows.len();
        let n = lp.objective.len();
        let basis: Vec<usize> = (n..n + m).collect();
        let mut in_basis = vec![false; n + m];
        for &b in &basis {
            in_basis[b] = true;
        }
        let mut binv = vec![vec![0.0; m]; m];
        for (i, row) in binv.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        Simplex {
            lp,
            m,
            n,
            basis,
            in_basis,
            binv,
            x_basic: lp.rhs.clone(),
            degenerate_run: 0,
            bland: false,
            pivots: 0,
        }
    }

    fn cost(&self, var: usize) -> f64 {
        if var < self.n {
            self.lp.objective[var]
        } else {
            0.0
        }
    }

    /// Column of the constraint matrix for a variable (slack = unit vector).
    fn column(&self, var: usize, out: &mut [f64]) {
        if var < self.n {
            for (i, row) in self.lp.rows.iter().enumerate() {
                out[i] = row[var];
            }
        } else {
            out.fill(0.0);
            out[var - self.n] = 1.0;
        }
    }

    /// Row duals y = c_B * B^-1.
    fn duals(&self) -> Vec<f64> {
        let mut y = vec![0.0; self.m];
        for (k, &var) in self.basis.iter().enumerate() {
            let c = self.cost(var);
            if c != 0.0 {
                for i in 0..self.m {
                    y[i] += c * self.binv[k][i];
                }
            }
        }
        y
    }

    fn reduced_cost(&self, var: usize, y: &[f64]) -> f64 {
        if var < self.n {
            let mut dot = 0.0;
            for i in 0..self.m {
                dot += y[i] * self.lp.rows[i][var];
            }
            self.cost(var) - dot
        } else {
            -y[var - self.n]
        }
    }

    fn run(&mut self) -> Result<(), LpError> {
        let limit = 200 * (self.m + self.n).max(50);
        loop {
            if self.pivots > limit {
                return Err(LpError::IterationLimit(self.pivots));
            }
            let y = self.duals();

            // Entering variable: Dantzig (largest reduced cost), or Bland
            // (smallest index) while escaping a degenerate streak.
            let mut entering = None;
            let mut best = REDUCED_COST_TOL;
            for var in 0..self.n + self.m {
                if self.in_basis[var] {
                    continue;
                }
                let rc = self.reduced_cost(var, &y);
                if rc > REDUCED_COST_TOL {
                    if self.bland {
                        entering = Some(var);
                        break;
                    }
                    if rc > best {
                        best = rc;
                        entering = Some(var);
                    }
                }
            }
            let Some(entering) = entering else {
                return Ok(());
            };

            // Direction d = B^-1 * a_e.
            let mut col = vec![0.0; self.m];
            self.column(entering, &mut col);
            let mut dir = vec![0.0; self.m];
            for k in 0..self.m {
                let mut acc = 0.0;
                for i in 0..self.m {
                    acc += self.binv[k][i] * col[i];
                }
                dir[k] = acc;
            }

            // Ratio test; ties go to the smallest basis variable index.
            let mut leaving: Option<(usize, f64)> = None;
            for k in 0..self.m {
                if dir[k] > RATIO_TOL {
                    let ratio = self.x_basic[k] / dir[k];
                    let better = match leaving {
                        None => true,
                        Some((cur, best_ratio)) => {
                            ratio < best_ratio - 1e-12
                                || (ratio <= best_ratio + 1e-12
                                    && self.basis[k] < self.basis[cur])
                        }
                    };
                    if better {
                        leaving = Some((k, ratio));
                    }
                }
            }
            let Some((leave_row, step)) = leaving else {
                return Err(LpError::Unbounded);
            };

            if step < DEGENERATE_STEP {
                self.degenerate_run += 1;
                if self.degenerate_run >= DEGENERATE_PIVOT_LIMIT {
                    self.bland = true;
                }
            } else {
                self.degenerate_run = 0;
                self.bland = false;
            }

            // Pivot: update basic values, swap, update B^-1 by row ops.
            for k in 0..self.m {
                if k != leave_row {
                    self.x_basic[k] -= step * dir[k];
                    if self.x_basic[k] < 0.0 && self.x_basic[k] > -1e-12 {
                        self.x_basic[k] = 0.0;
                    }
                }
            }
            self.x_basic[leave_row] = step;
            self.in_basis[self.basis[leave_row]] = false;
            self.in_basis[entering] = true;
            self.basis[leave_row] = entering;

            let pivot = dir[leave_row];
            for i in 0..self.m {
                self.binv[leave_row][i] /= pivot;
            }
            for k in 0..self.m {
                if k != leave_row && dir[k] != 0.0 {
                    let factor = dir[k];
                    for i in 0..self.m {
                        self.binv[k][i] -= factor * self.binv[leave_row][i];
                    }
                }
            }

            self.pivots += 1;
            if self.pivots % REFACTOR_INTERVAL == 0 {
                self.refactorize()?;
            }
        }
    }

    /// Recomputes B^-1 and the basic values from scratch.
    fn refactorize(&mut self) -> Result<(), LpError> {
        let m = self.m;
        let mut aug = vec![vec![0.0; 2 * m]; m];
        let mut col = vec![0.0; m];
        for (k, &var) in self.basis.iter().enumerate() {
            self.column(var, &mut col);
            for i in 0..m {
                aug[i][k] = col[i];
            }
        }
        for i in 0..m {
            aug[i][m + i] = 1.0;
        }
        // Gauss-Jordan with partial pivoting.
        for c in 0..m {
            let mut pivot_row = c;
            let mut best = aug[c][c].abs();
            for r in c + 1..m {
                if aug[r][c].abs() > best {
                    best = aug[r][c].abs();
                    pivot_row = r;
                }
            }
            if best < 1e-12 {
                return Err(LpError::SingularBasis);
            }
            aug.swap(c, pivot_row);
            let p = aug[c][c];
            for v in aug[c].iter_mut() {
                *v /= p;
            }
            for r in 0..m {
                if r != c && aug[r][c] != 0.0 {
                    let f = aug[r][c];
                    for v in 0..2 * m {
                        aug[r][v] -= f * aug[c][v];
                    }
                }
            }
        }
        // B^-1 maps rows of the identity block, but our binv is indexed by
        // basis slot: binv[k] is the k-th row of B^-1.
        for k in 0..m {
            for i in 0..m {
                self.binv[k][i] = aug[k][m + i];
            }
        }
        for k in 0..m {
            let mut acc = 0.0;
            for i in 0..m {
                acc += self.binv[k][i] * self.lp.rhs[i];
            }
            self.x_basic[k] = if acc < 0.0 && acc > -1e-9 { 0.0 } else { acc };
        }
        Ok(())
    }

    fn extract(&self, lp: &DenseLp) -> Result<LpSolution, LpError> {
        let mut x = vec![0.0; self.n];
        for (k, &var) in self.basis.iter().enumerate() {
            if var < self.n {
                x[var] = self.x_basic[k];
            }
        }
        let mut duals = self.duals();
        // Certify optimality before handing the solution out.
        let mut worst = 0.0f64;
        for var in 0..self.n + self.m {
            if !self.in_basis[var] {
                worst = worst.max(self.reduced_cost(var, &duals));
            }
        }
        if worst > REDUCED_COST_TOL {
            return Err(LpError::CertificateFailed(worst));
        }
        for d in duals.iter_mut() {
            // Duals of <= rows in a max problem are nonnegative; clean up
            // harmless negative round-off.
            if *d < 0.0 && *d > -REDUCED_COST_TOL {
                *d = 0.0;
            }
        }
        let objective = lp
            .objective
            .iter()
            .zip(&x)
            .map(|(c, v)| c * v)
            .sum::<f64>();
        Ok(LpSolution { x, duals, objective })
    }
}
