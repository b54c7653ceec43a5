//! Dense two-phase simplex with Bland's rule.
//!
//! Sized for the final downlink-energy LP (a handful of variables), so a
//! full tableau with no sparsity or revised-form machinery is fine.

use crate::real::Real;

/// Maximize `c . x` subject to `A x <= b` and `l <= x <= u`.
#[derive(Debug, Clone)]
pub struct LinearProgram<R> {
    pub objective: Vec<R>,
    /// Rows `(a, b)` meaning `a . x <= b`.
    pub constraints: Vec<(Vec<R>, R)>,
    /// Per-variable bounds; use `-inf`/`inf` for free sides. Lower bounds
    /// must be finite.
    pub bounds: Vec<(R, R)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpSolution<R> {
    pub x: Vec<R>,
    pub status: LpStatus,
    /// Duals of the user-supplied constraint rows (nonnegative at optimum).
    pub row_duals: Vec<R>,
}

const PIVOT_EPS: f64 = 1e-11;
const FEAS_EPS: f64 = 1e-9;
const MAX_PIVOTS: usize = 20_000;

pub fn lp_solve<R: Real>(lp: &LinearProgram<R>) -> LpSolution<R> {
    let n = lp.objective.len();
    debug_assert_eq!(lp.bounds.len(), n);
    for (row, _) in &lp.constraints {
        debug_assert_eq!(row.len(), n);
    }
    let eps = R::of(PIVOT_EPS);

    // Shift out lower bounds (y = x - l >= 0) and turn finite upper
    // bounds into extra rows.
    let lower: Vec<R> = lp.bounds.iter().map(|(l, _)| *l).collect();
    let mut rows: Vec<(Vec<R>, R)> = Vec::new();
    for (a, b) in &lp.constraints {
        let shift = a
            .iter()
            .zip(&lower)
            .fold(R::zero(), |acc, (ai, li)| acc + *ai * *li);
        rows.push((a.clone(), *b - shift));
    }
    let user_rows = rows.len();
    for (j, (l, u)) in lp.bounds.iter().enumerate() {
        if u.is_finite() {
            let mut a = vec![R::zero(); n];
            a[j] = R::one();
            rows.push((a, *u - *l));
        }
    }

    let m = rows.len();
    // columns: n structural, m slacks, artificials appended as needed
    let mut sign = vec![R::one(); m];
    let mut art_of_row = vec![usize::MAX; m];
    let mut num_art = 0usize;
    for (i, (_, b)) in rows.iter().enumerate() {
        if *b < R::zero() {
            sign[i] = -R::one();
            art_of_row[i] = num_art;
            num_art += 1;
        }
    }
    let total = n + m + num_art;

    let mut tab = vec![vec![R::zero(); total]; m];
    let mut rhs = vec![R::zero(); m];
    let mut basis = vec![0usize; m];
    for i in 0..m {
        for j in 0..n {
            tab[i][j] = sign[i] * rows[i].0[j];
        }
        tab[i][n + i] = sign[i];
        rhs[i] = sign[i] * rows[i].1;
        if art_of_row[i] == usize::MAX {
            basis[i] = n + i;
        } else {
            let col = n + m + art_of_row[i];
            tab[i][col] = R::one();
            basis[i] = col;
        }
    }

    // Phase 1: maximize -(sum of artificials).
    if num_art > 0 {
        let mut obj = vec![R::zero(); total];
        for j in n + m..total {
            obj[j] = -R::one();
        }
        if !simplex(&mut tab, &mut rhs, &mut basis, &obj, n + m, eps) {
            // phase 1 objective is bounded by construction
            unreachable!("phase 1 cannot be unbounded");
        }
        let art_sum = (0..m)
            .filter(|i| basis[*i] >= n + m)
            .fold(R::zero(), |acc, i| acc + rhs[i]);
        if art_sum > R::of(FEAS_EPS) * (R::one() + scale(&rhs)) {
            return LpSolution {
                x: lower,
                status: LpStatus::Infeasible,
                row_duals: vec![R::zero(); user_rows],
            };
        }
        // pivot remaining basic artificials out where possible
        for i in 0..m {
            if basis[i] >= n + m {
                if let Some(j) = (0..n + m).find(|j| tab[i][*j].abs() > eps) {
                    pivot(&mut tab, &mut rhs, &mut basis, i, j);
                }
                // an all-zero row is redundant and its artificial stays
                // basic at level 0
            }
        }
    }

    // Phase 2: the real objective; artificials are barred from entering.
    let mut obj = vec![R::zero(); total];
    obj[..n].copy_from_slice(&lp.objective[..n]);
    if !simplex(&mut tab, &mut rhs, &mut basis, &obj, n + m, eps) {
        return LpSolution {
            x: lower,
            status: LpStatus::Unbounded,
            row_duals: vec![R::zero(); user_rows],
        };
    }

    let mut x = lower.clone();
    for i in 0..m {
        if basis[i] < n {
            x[basis[i]] = x[basis[i]] + rhs[i];
        }
    }
    // duals from the reduced costs of the slack columns
    let mut duals = Vec::with_capacity(user_rows);
    for i in 0..user_rows {
        let col = n + i;
        let z = (0..m).fold(R::zero(), |acc, r| acc + obj[basis[r]] * tab[r][col]);
        duals.push(z / sign[i]);
    }

    LpSolution {
        x,
        status: LpStatus::Optimal,
        row_duals: duals,
    }
}

fn scale<R: Real>(v: &[R]) -> R {
    v.iter().fold(R::zero(), |acc, x| acc.max(x.abs()))
}

/// Bland-rule primal simplex on an updated tableau. Columns at index
/// `>= enter_limit` never enter. Returns false on unboundedness.
fn simplex<R: Real>(
    tab: &mut [Vec<R>],
    rhs: &mut [R],
    basis: &mut [usize],
    obj: &[R],
    enter_limit: usize,
    eps: R,
) -> bool {
    let m = tab.len();
    for _ in 0..MAX_PIVOTS {
        // reduced cost c_j - z_j; Bland: smallest improving index enters
        let mut entering = None;
        for j in 0..enter_limit {
            if basis.contains(&j) {
                continue;
            }
            let z = (0..m).fold(R::zero(), |acc, i| acc + obj[basis[i]] * tab[i][j]);
            if obj[j] - z > eps {
                entering = Some(j);
                break;
            }
        }
        let Some(j) = entering else { return true };

        let mut leave: Option<usize> = None;
        let mut best = R::infinity();
        for i in 0..m {
            if tab[i][j] > eps {
                let ratio = rhs[i] / tab[i][j];
                let better = match leave {
                    None => true,
                    Some(cur) => {
                        ratio < best - eps || (ratio < best + eps && basis[i] < basis[cur])
                    }
                };
                if better {
                    leave = Some(i);
                    best = ratio;
                }
            }
        }
        let Some(i) = leave else { return false };
        pivot(tab, rhs, basis, i, j);
    }
    // Bland's rule terminates; hitting the cap means numerical trouble,
    // treat the current (feasible) point as optimal-enough
    true
}

fn pivot<R: Real>(tab: &mut [Vec<R>], rhs: &mut [R], basis: &mut [usize], row: usize, col: usize) {
    let m = tab.len();
    let p = tab[row][col];
    for v in tab[row].iter_mut() {
        *v = *v / p;
    }
    rhs[row] = rhs[row] / p;
    for i in 0..m {
        if i == row {
            continue;
        }
        let f = tab[i][col];
        if f == R::zero() {
            continue;
        }
        for j in 0..tab[i].len() {
            tab[i][j] = tab[i][j] - f * tab[row][j];
        }
        rhs[i] = rhs[i] - f * rhs[row];
        // clamp tiny negative levels from rounding
        if rhs[i] < R::zero() && rhs[i] > -R::of(1e-12) {
            rhs[i] = R::zero();
        }
    }
    basis[row] = col;
}
