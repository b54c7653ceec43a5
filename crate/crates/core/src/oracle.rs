//! Independent brute-force solver for small instances.
//!
//! Refined grid search over the slot-duration simplex; for each fixed set
//! of durations the downlink energy is the front-loaded greedy profile
//! (optimal at fixed durations because every cumulative energy sum is
//! maximized simultaneously) and the uplink energies take their caps.
//! Used solely to certify the analytic solvers, never as a product path.

use crate::error::{Error, Result};
use crate::model::{user_rate, Allocation, Capacity, SolveReport, SolverId, SystemInstance};
use crate::real::Real;

pub const MAX_ORACLE_USERS: usize = 4;

#[derive(Debug, Clone, Copy)]
pub struct OracleConfig<R> {
    /// Grid points per free duration dimension.
    pub grid_resolution: usize,
    pub refine_rounds: usize,
    /// Slack below which remaining downlink budget is treated as spent.
    pub inner_tol: R,
}

impl<R: Real> Default for OracleConfig<R> {
    fn default() -> Self {
        OracleConfig {
            grid_resolution: 32,
            refine_rounds: 4,
            inner_tol: R::of(1e-12),
        }
    }
}

impl<R: Real> OracleConfig<R> {
    /// Cheaper settings for loose-tolerance bounds inside sweeps.
    pub fn coarse() -> Self {
        OracleConfig {
            grid_resolution: 24,
            refine_rounds: 3,
            inner_tol: R::of(1e-12),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.grid_resolution < 8 || self.refine_rounds < 1 {
            return Err(Error::InvalidSpec(format!(
                "oracle config needs resolution >= 8 and rounds >= 1, got {} / {}",
                self.grid_resolution, self.refine_rounds
            )));
        }
        Ok(())
    }
}

/// Best sum rate found over the duration simplex. With `relax_causality`
/// every user may draw on the whole frame's downlink energy (the
/// non-causal upper bound); the returned allocation then deliberately
/// violates the causality constraints.
pub fn oracle_solve<R: Real>(
    instance: &SystemInstance<R>,
    config: &OracleConfig<R>,
    relax_causality: bool,
) -> Result<SolveReport<R>> {
    instance.validate()?;
    config.validate()?;
    let k = instance.num_users;
    if k > MAX_ORACLE_USERS {
        return Err(Error::OracleTooLarge {
            got: k,
            max: MAX_ORACLE_USERS,
        });
    }

    let res = config.grid_resolution;
    let mut boxes = vec![(R::zero(), R::one()); k]; // free dims tau_0..tau_{K-1}
    let mut best_rate = R::neg_infinity();
    let mut best_tau = vec![R::zero(); k + 1];
    let mut evals: u64 = 0;

    let mut point = vec![R::zero(); k];
    for _ in 0..config.refine_rounds {
        scan(
            instance,
            relax_causality,
            &boxes,
            res,
            0,
            &mut point,
            &mut best_rate,
            &mut best_tau,
            &mut evals,
        );
        // shrink each box around the incumbent
        for (d, b) in boxes.iter_mut().enumerate() {
            let spacing = (b.1 - b.0) / R::of((res - 1) as f64);
            let half = spacing * R::of(1.6);
            b.0 = (best_tau[d] - half).max(R::zero());
            b.1 = (best_tau[d] + half).min(R::one());
        }
    }

    let (rate, dl, ul) = inner_allocate(instance, &best_tau, relax_causality);
    debug_assert!((rate - best_rate).abs() <= R::of(1e-12) * best_rate.abs().max(R::one()));
    let allocation = Allocation {
        tau: best_tau,
        dl_energy: dl,
        ul_energy: ul,
    };
    let mut report = SolveReport::new(instance, allocation, SolverId::Oracle)?;
    if relax_causality {
        // causality violations are intentional here; report the worst of
        // the constraints that still apply
        let feas =
            crate::model::check_feasibility(instance, &report.allocation, R::zero())?;
        report.kkt_residual = [
            -feas.avg_power_slack,
            -feas.peak_power_slack,
            -feas.total_time_slack,
            -feas.capacity_slack,
            -feas.nonneg_slack,
        ]
        .iter()
        .fold(R::zero(), |acc, v| acc.max(*v));
    }
    report.iterations = evals.min(u32::MAX as u64) as u32;
    Ok(report)
}

#[allow(clippy::too_many_arguments)]
fn scan<R: Real>(
    instance: &SystemInstance<R>,
    relax: bool,
    boxes: &[(R, R)],
    res: usize,
    dim: usize,
    point: &mut Vec<R>,
    best_rate: &mut R,
    best_tau: &mut Vec<R>,
    evals: &mut u64,
) {
    let k = instance.num_users;
    if dim == k {
        let used = point.iter().fold(R::zero(), |acc, t| acc + *t);
        let last = R::one() - used;
        if last < -R::of(1e-12) {
            return;
        }
        let mut tau = point.clone();
        tau.push(last.max(R::zero()));
        let (rate, _, _) = inner_allocate(instance, &tau, relax);
        *evals += 1;
        if rate > *best_rate {
            *best_rate = rate;
            *best_tau = tau;
        }
        return;
    }
    let (lo, hi) = boxes[dim];
    let step = (hi - lo) / R::of((res - 1) as f64);
    for i in 0..res {
        let t = lo + step * R::of(i as f64);
        point[dim] = t;
        // prune branches that already overflow the simplex
        let used = point[..=dim].iter().fold(R::zero(), |acc, t| acc + *t);
        if used > R::one() + R::of(1e-12) {
            break;
        }
        scan(
            instance, relax, boxes, res, dim + 1, point, best_rate, best_tau, evals,
        );
    }
}

/// Rate and energies at fixed slot durations: front-loaded downlink,
/// capped uplink.
fn inner_allocate<R: Real>(
    instance: &SystemInstance<R>,
    tau: &[R],
    relax: bool,
) -> (R, Vec<R>, Vec<R>) {
    let k = instance.num_users;
    let mut dl = vec![R::zero(); k + 1];
    let mut rem = instance.avg_power;
    for i in 0..=k {
        let e = (tau[i] * instance.peak_power).min(rem);
        dl[i] = e;
        rem = rem - e;
    }
    let total = instance.avg_power - rem;

    let mut ul = vec![R::zero(); k];
    let mut rate = R::zero();
    let mut cum = R::zero();
    for i in 1..=k {
        cum = cum + dl[i - 1];
        if tau[i] <= R::zero() {
            continue;
        }
        let avail = if relax { total } else { cum };
        let mut cap = instance.harvest_eff[i - 1] * instance.dl_gain[i - 1] * avail;
        if let Capacity::Finite(b) = instance.capacity[i - 1] {
            cap = cap.min(b);
        }
        ul[i - 1] = cap;
        rate = rate
            + user_rate(
                tau[i],
                cap,
                instance.ul_gain[i - 1],
                instance.noise_power[i - 1],
            )
            .expect("tau > 0 checked above");
    }
    (rate, dl, ul)
}
