//! Real Lambert W on the principal branch.
//!
//! Every chain-coefficient and dual-variable formula in the solvers
//! resolves to the principal branch `W0`: their arguments lie in
//! `[-1/e, inf)` and only `W0 in [-1, inf)` yields nonnegative slot
//! durations. Evaluation is a piecewise initial guess polished by Halley
//! iteration.

use crate::error::{Error, Result};
use crate::real::Real;

/// A Lambert W evaluation request. Only the principal branch is offered.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WQuery<R> {
    pub argument: R,
    pub branch: Branch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Principal,
}

impl<R: Real> WQuery<R> {
    pub fn eval(&self) -> Result<R> {
        match self.branch {
            Branch::Principal => lambert_w0(self.argument),
        }
    }
}

const MAX_HALLEY: usize = 8;

/// Principal-branch Lambert W: the `w >= -1` solving `w e^w = x`.
///
/// Accepts `x >= -1/e - 1e-15`; values within rounding of the branch point
/// are clamped to `-1/e`. Residual `|w e^w - x| <= 1e-12 max(1, |x|)`.
pub fn lambert_w0<R: Real>(x: R) -> Result<R> {
    let inv_e = R::of(std::f64::consts::E).recip();
    if x < -inv_e - R::of(1e-15) {
        return Err(Error::LambertDomain(x.to_f64_lossy()));
    }
    let x = x.max(-inv_e);
    if x == R::zero() {
        return Ok(R::zero());
    }

    let mut w = initial_guess(x);
    // Branch-point series is already at full accuracy and Halley's
    // denominator degenerates as w -> -1.
    if w <= R::of(-0.9999) {
        return Ok(w.max(-R::one()));
    }

    let step_tol = R::of(1e-14);
    for _ in 0..MAX_HALLEY {
        let ew = w.exp();
        let f = w * ew - x;
        let fp = ew * (w + R::one());
        let fpp = ew * (w + R::of(2.0));
        let denom = fp - f * fpp / (R::of(2.0) * fp);
        let step = f / denom;
        w = w - step;
        if step.abs() <= step_tol * w.abs().max(R::one()) {
            break;
        }
    }
    Ok(w)
}

fn initial_guess<R: Real>(x: R) -> R {
    let e = R::of(std::f64::consts::E);
    if x < R::of(-0.25) {
        // series around the branch point in p = sqrt(2(e x + 1))
        let p = (R::of(2.0) * (e * x + R::one())).max(R::zero()).sqrt();
        let c = [
            -1.0,
            1.0,
            -1.0 / 3.0,
            11.0 / 72.0,
            -43.0 / 540.0,
            769.0 / 17280.0,
        ];
        let mut acc = R::zero();
        for k in (0..c.len()).rev() {
            acc = acc * p + R::of(c[k]);
        }
        acc
    } else if x <= R::of(0.25) {
        // Taylor series at 0
        x * (R::one() - x + R::of(1.5) * x * x)
    } else if x <= e {
        // secant between W(1/e) and W(e) = 1, good enough for Halley
        let lo = R::of(0.2784645427610738); // W(1/e)
        let t = (x - e.recip()) / (e - e.recip());
        lo + t * (R::one() - lo)
    } else {
        // asymptotic expansion for large x
        let l1 = x.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    }
    .max(-R::one())
}
