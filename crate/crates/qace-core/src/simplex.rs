//! Self-contained dense two-phase simplex solver with Bland's rule, sized for
//! the 16-strategy polytope programs of this crate (tens of variables, ~10
//! rows). Bland's rule guarantees termination; determinism matters for
//! regression fixtures.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// minimize objective . z  subject to  constraints z = rhs, z >= 0.
pub(crate) struct StandardLp<T> {
    pub objective: Vec<T>,
    pub constraints: Vec<Vec<T>>,
    pub rhs: Vec<T>,
}

pub(crate) enum LpOutcome<T> {
    Optimal { x: Vec<T>, value: T },
    Infeasible,
}

struct Tableau<T> {
    // rows x (cols + 1); last column is the rhs
    a: Vec<Vec<T>>,
    basis: Vec<usize>,
    cols: usize,
}

impl<T: Scalar> Tableau<T> {
    fn rhs(&self, r: usize) -> T {
        self.a[r][self.cols]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.a[row][col].recip();
        for v in self.a[row].iter_mut() {
            *v *= inv;
        }
        for r in 0..self.a.len() {
            if r == row {
                continue;
            }
            let factor = self.a[r][col];
            if factor == T::zero() {
                continue;
            }
            for c in 0..=self.cols {
                let delta = factor * self.a[row][c];
                self.a[r][c] -= delta;
            }
        }
        self.basis[row] = col;
    }

    /// One simplex phase minimizing `costs . z`, with entering columns
    /// restricted to indices below `allowed`. Bland's rule: entering is the
    /// lowest-index improving column, leaving the lowest-index basic variable
    /// among the tightest ratios. Returns the objective value reached.
    fn run_phase(&mut self, costs: &[T], allowed: usize, max_iters: usize) -> Result<T> {
        let tol = T::lp_tol() * T::lit(1e-2);
        // reduced-cost row for the current basis
        let mut z = vec![T::zero(); self.cols + 1];
        z[..self.cols].copy_from_slice(costs);
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = costs[b];
            if cb == T::zero() {
                continue;
            }
            for c in 0..=self.cols {
                let delta = cb * self.a[r][c];
                z[c] -= delta;
            }
        }
        for _ in 0..max_iters {
            let Some(col) = (0..allowed).find(|&c| z[c] < -tol) else {
                return Ok(-z[self.cols]);
            };
            let mut leave: Option<(usize, T)> = None;
            for r in 0..self.a.len() {
                let coef = self.a[r][col];
                if coef > tol {
                    let ratio = self.rhs(r) / coef;
                    leave = match leave {
                        None => Some((r, ratio)),
                        Some((_, best)) if ratio < best - tol => Some((r, ratio)),
                        Some((br, best))
                            if ratio <= best + tol && self.basis[r] < self.basis[br] =>
                        {
                            Some((r, ratio.min(best)))
                        }
                        keep => keep,
                    };
                }
            }
            let Some((row, _)) = leave else {
                return Err(Error::LpStalled("unbounded phase objective".into()));
            };
            self.pivot(row, col);
            let zc = z[col];
            if zc != T::zero() {
                for c in 0..=self.cols {
                    let delta = zc * self.a[row][c];
                    z[c] -= delta;
                }
            }
        }
        Err(Error::LpStalled("iteration limit reached".into()))
    }
}

pub(crate) fn solve<T: Scalar>(lp: &StandardLp<T>) -> Result<LpOutcome<T>> {
    let m = lp.constraints.len();
    let n = lp.objective.len();
    let cols = n + m; // structural variables plus one artificial per row
    let mut a = Vec::with_capacity(m);
    for (r, row) in lp.constraints.iter().enumerate() {
        assert_eq!(row.len(), n, "constraint row width");
        let flip = if lp.rhs[r] < T::zero() {
            -T::one()
        } else {
            T::one()
        };
        let mut tab_row = vec![T::zero(); cols + 1];
        for (c, v) in row.iter().enumerate() {
            tab_row[c] = *v * flip;
        }
        tab_row[n + r] = T::one();
        tab_row[cols] = lp.rhs[r] * flip;
        a.push(tab_row);
    }
    let basis: Vec<usize> = (n..n + m).collect();
    let mut tab = Tableau { a, basis, cols };
    let max_iters = 200 * (cols + m + 1);

    // phase 1: minimize the sum of artificials over all columns
    let mut phase1_cost = vec![T::zero(); cols];
    for c in n..cols {
        phase1_cost[c] = T::one();
    }
    let infeasibility = tab.run_phase(&phase1_cost, cols, max_iters)?;
    if infeasibility > T::lp_tol() {
        return Ok(LpOutcome::Infeasible);
    }

    // drive artificials still basic at zero out of the basis; rows with no
    // structural coefficient left are redundant and stay pinned at zero
    for r in 0..m {
        if tab.basis[r] >= n {
            let tol = T::lp_tol() * T::lit(1e-2);
            if let Some(c) = (0..n).find(|&c| tab.a[r][c].abs() > tol) {
                tab.pivot(r, c);
            }
        }
    }

    // phase 2: original objective, entering restricted to structural columns
    let mut phase2_cost = vec![T::zero(); cols];
    phase2_cost[..n].copy_from_slice(&lp.objective);
    let value = tab.run_phase(&phase2_cost, n, max_iters)?;

    let mut x = vec![T::zero(); n];
    for (r, &b) in tab.basis.iter().enumerate() {
        if b < n {
            x[b] = tab.rhs(r);
        }
    }
    Ok(LpOutcome::Optimal { x, value })
}
