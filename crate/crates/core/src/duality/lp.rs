//! Dense primal simplex for `max c.y` subject to `A y <= b`, `y >= 0`,
//! `b >= 0`. The origin is feasible, so no phase one is needed. Bland's rule
//! prevents cycling on the degenerate ordering rows.

use crate::error::{Error, Result};

const PIVOT_TOL: f64 = 1e-10;
pub const MAX_DIM: usize = 64;
const MAX_PIVOTS: usize = 50_000;

/// `max objective.y` over nonincreasing nonnegative `y` with
/// `piece.y <= bound` for each constraint.
#[derive(Clone, Debug)]
pub struct OrderedConeLP {
    objective: Vec<f64>,
    constraints: Vec<(Vec<f64>, f64)>,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub value: f64,
    pub y: Vec<f64>,
}

impl OrderedConeLP {
    /// Adds the ordering rows `y_{i+1} - y_i <= 0` to `constraints`.
    pub fn new(objective: Vec<f64>, constraints: Vec<(Vec<f64>, f64)>) -> Result<Self> {
        let n = objective.len();
        if n == 0 {
            return Err(Error::Domain("LP dimension must be at least 1".into()));
        }
        if n > MAX_DIM {
            return Err(Error::TooLarge { n, limit: MAX_DIM });
        }
        for (row, bound) in &constraints {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            if !bound.is_finite() || *bound < 0.0 || row.iter().any(|v| !v.is_finite()) {
                return Err(Error::LinearProgram("constraints must be finite with bounds >= 0".into()));
            }
        }
        if objective.iter().any(|v| !v.is_finite()) {
            return Err(Error::LinearProgram("non-finite objective".into()));
        }
        let mut all = Vec::with_capacity(constraints.len() + n - 1);
        for i in 0..n - 1 {
            let mut row = vec![0.0; n];
            row[i] = -1.0;
            row[i + 1] = 1.0;
            all.push((row, 0.0));
        }
        all.extend(constraints);
        Ok(OrderedConeLP {
            objective,
            constraints: all,
        })
    }

    pub fn solve(&self) -> Result<LpSolution> {
        let n = self.objective.len();
        let m = self.constraints.len();
        let width = n + m + 1;
        let rhs = n + m;

        let mut rows: Vec<Vec<f64>> = self
            .constraints
            .iter()
            .enumerate()
            .map(|(i, (a, b))| {
                let mut row = vec![0.0; width];
                row[..n].copy_from_slice(a);
                row[n + i] = 1.0;
                row[rhs] = *b;
                row
            })
            .collect();
        // Reduced costs; the objective value accumulates in cost[rhs] as -z.
        let mut cost = vec![0.0; width];
        cost[..n].copy_from_slice(&self.objective);
        let mut basis: Vec<usize> = (n..n + m).collect();

        for _ in 0..MAX_PIVOTS {
            let Some(enter) = (0..n + m).find(|&j| cost[j] > PIVOT_TOL) else {
                let mut y = vec![0.0; n];
                for (i, &b) in basis.iter().enumerate() {
                    if b < n {
                        y[b] = rows[i][rhs].max(0.0);
                    }
                }
                let value = self.objective.iter().zip(&y).map(|(c, v)| c * v).sum();
                return Ok(LpSolution { value, y });
            };

            let mut leave: Option<(usize, f64)> = None;
            for (i, row) in rows.iter().enumerate() {
                let a = row[enter];
                if a > PIVOT_TOL {
                    let ratio = row[rhs].max(0.0) / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((li, lr)) => {
                            let tie = (ratio - lr).abs() <= PIVOT_TOL * (1.0 + lr.abs());
                            if ratio < lr && !tie || tie && basis[i] < basis[li] {
                                Some((i, ratio))
                            } else {
                                Some((li, lr))
                            }
                        }
                    };
                }
            }
            let Some((pr, _)) = leave else {
                return Err(Error::LinearProgram("objective is unbounded".into()));
            };

            let pivot = rows[pr][enter];
            rows[pr].iter_mut().for_each(|v| *v /= pivot);
            let prow = rows[pr].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != pr {
                    let f = row[enter];
                    if f != 0.0 {
                        row.iter_mut().zip(&prow).for_each(|(v, p)| *v -= f * p);
                    }
                }
            }
            let f = cost[enter];
            cost.iter_mut().zip(&prow).for_each(|(v, p)| *v -= f * p);
            basis[pr] = enter;
        }
        Err(Error::LinearProgram(format!("no optimum after {MAX_PIVOTS} pivots")))
    }
}
