//! Central-cut ellipsoid method for convex minimization with objective
//! and feasibility cuts.

use crate::real::Real;

/// Ellipsoid `{ x : (x-c)^T P^{-1} (x-c) <= 1 }` stored via its center and
/// shape matrix `P` (symmetric positive definite, row-major).
#[derive(Debug, Clone)]
pub struct Ellipsoid<R> {
    pub center: Vec<R>,
    pub shape: Vec<Vec<R>>,
}

impl<R: Real> Ellipsoid<R> {
    /// Ball of radius `r` around `center`.
    pub fn ball(center: Vec<R>, r: R) -> Self {
        let n = center.len();
        let mut shape = vec![vec![R::zero(); n]; n];
        for (i, row) in shape.iter_mut().enumerate() {
            row[i] = r * r;
        }
        Ellipsoid { center, shape }
    }

    /// Axis-aligned ellipsoid with the given semi-axes.
    pub fn axis_aligned(center: Vec<R>, semi_axes: &[R]) -> Self {
        let n = center.len();
        let mut shape = vec![vec![R::zero(); n]; n];
        for i in 0..n {
            shape[i][i] = semi_axes[i] * semi_axes[i];
        }
        Ellipsoid { center, shape }
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }
}

/// Cut returned by the oracle at a query point.
#[derive(Debug, Clone)]
pub enum Cut<R> {
    /// The point is feasible: objective value plus a subgradient.
    Objective { value: R, subgradient: Vec<R> },
    /// The point violates a constraint with the given (nonzero) gradient.
    Feasibility {
        subgradient: Vec<R>,
        constraint: Option<usize>,
    },
}

#[derive(Debug, Clone)]
pub struct EllipsoidOutcome<R> {
    /// Best feasible point seen (the last query point if none was feasible).
    pub point: Vec<R>,
    pub value: R,
    pub iterations: u32,
    pub converged: bool,
}

/// Minimize a convex function over a convex set described by `oracle`.
///
/// Terminates when the duality-gap proxy `sqrt(g^T P g)` of an objective
/// cut drops below `tol * (1 + |value|)`, when the ellipsoid collapses
/// numerically, or after `max_iter` iterations (flagged non-converged).
pub fn ellipsoid_minimize<R, F>(
    mut oracle: F,
    initial: Ellipsoid<R>,
    tol: R,
    max_iter: u32,
) -> EllipsoidOutcome<R>
where
    R: Real,
    F: FnMut(&[R]) -> Cut<R>,
{
    let n = initial.dim();
    let nf = R::of(n as f64);
    let mut center = initial.center;
    let mut shape = initial.shape;

    let mut best_point = center.clone();
    let mut best_value = R::infinity();
    let mut converged = false;
    let mut iterations = 0;

    for it in 0..max_iter {
        iterations = it + 1;
        let cut = oracle(&center);
        let g = match &cut {
            Cut::Objective { value, subgradient } => {
                if *value < best_value {
                    best_value = *value;
                    best_point = center.clone();
                }
                subgradient
            }
            Cut::Feasibility { subgradient, .. } => subgradient,
        };

        // Pg and the cut norm g^T P g.
        let pg: Vec<R> = (0..n)
            .map(|i| (0..n).fold(R::zero(), |acc, j| acc + shape[i][j] * g[j]))
            .collect();
        let gpg = (0..n).fold(R::zero(), |acc, i| acc + g[i] * pg[i]);
        if !(gpg > R::zero()) {
            // collapsed or invalid cut; nothing further to shrink
            converged = best_value.is_finite();
            break;
        }
        let norm = gpg.sqrt();

        if let Cut::Objective { value, .. } = &cut {
            if norm <= tol * (R::one() + value.abs()) {
                converged = true;
                break;
            }
        }

        // central-cut update
        let np1 = nf + R::one();
        for i in 0..n {
            center[i] = center[i] - pg[i] / (np1 * norm);
        }
        if n == 1 {
            // the n^2/(n^2-1) factor degenerates; halve the interval
            shape[0][0] = shape[0][0] / R::of(4.0);
        } else {
            let scale = nf * nf / (nf * nf - R::one());
            let coef = R::of(2.0) / np1;
            for i in 0..n {
                for j in 0..n {
                    shape[i][j] = scale * (shape[i][j] - coef * pg[i] * pg[j] / gpg);
                }
            }
        }
        // re-symmetrize to fight drift
        for i in 0..n {
            for j in 0..i {
                let s = (shape[i][j] + shape[j][i]) / R::of(2.0);
                shape[i][j] = s;
                shape[j][i] = s;
            }
        }
    }

    if best_value.is_infinite() {
        best_point = center;
    }
    EllipsoidOutcome {
        point: best_point,
        value: best_value,
        iterations,
        converged,
    }
}
