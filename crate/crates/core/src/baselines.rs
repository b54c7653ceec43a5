//! Reference schemes: equal downlink power with optimized durations,
//! equal slot durations with the greedy energy profile, and the
//! non-causal upper bound.

use serde::{Deserialize, Serialize};

use crate::alg1::{chain_coefficients_with_power, tau_chain};
use crate::error::{Error, Result};
use crate::model::{Allocation, Capacity, SolveReport, SolverId, SystemInstance};
use crate::oracle::{oracle_solve, OracleConfig};
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaselineId {
    EqualPowerTimeOpt,
    EqualTimeEnergyPolicy,
    NoncausalUpperBound,
}

/// Equal power allocation `p_{D,i} = P_A` in every slot with optimal slot
/// durations. The duration chain is the peak-power machinery evaluated at
/// `P_A` with the access point never turning off (`L = K`, `T = 1`).
pub fn solve_equal_power<R: Real>(instance: &SystemInstance<R>) -> Result<SolveReport<R>> {
    instance.validate()?;
    if let Some(i) = instance.capacity.iter().position(|c| c.is_finite()) {
        return Err(Error::FiniteCapacityUnsupported(i + 1));
    }
    let k = instance.num_users;
    let coeffs = chain_coefficients_with_power(instance, instance.avg_power)?;
    let tau = tau_chain(R::one(), k, &coeffs);

    let dl: Vec<R> = tau.iter().map(|t| *t * instance.avg_power).collect();
    let mut ul = vec![R::zero(); k];
    let mut cum = R::zero();
    for i in 1..=k {
        cum = cum + dl[i - 1];
        ul[i - 1] = instance.harvest_eff[i - 1] * instance.dl_gain[i - 1] * cum;
    }
    let allocation = Allocation {
        tau,
        dl_energy: dl,
        ul_energy: ul,
    };
    let mut report = SolveReport::new(instance, allocation, SolverId::EqualPower)?;
    report.turnoff_index = Some(k);
    report.time_split = Some(R::one());
    Ok(report)
}

/// Equal slot durations `tau_i = 1/(K+1)` with the max-power-then-off
/// downlink profile. Full slots carry `P_P/(K+1)` joules, so exhausting
/// the budget takes `floor(P_A (K+1) / P_P)` full slots; the greedy
/// front-load below realizes exactly that profile.
pub fn solve_equal_time<R: Real>(instance: &SystemInstance<R>) -> Result<SolveReport<R>> {
    instance.validate()?;
    let k = instance.num_users;
    let slot = (R::of((k + 1) as f64)).recip();
    let tau = vec![slot; k + 1];

    let mut dl = vec![R::zero(); k + 1];
    let mut rem = instance.avg_power;
    for e in dl.iter_mut() {
        let take = (slot * instance.peak_power).min(rem);
        *e = take;
        rem = rem - take;
    }

    let mut ul = vec![R::zero(); k];
    let mut cum = R::zero();
    for i in 1..=k {
        cum = cum + dl[i - 1];
        let mut e = instance.harvest_eff[i - 1] * instance.dl_gain[i - 1] * cum;
        if let Capacity::Finite(b) = instance.capacity[i - 1] {
            e = e.min(b);
        }
        ul[i - 1] = e;
    }
    let allocation = Allocation {
        tau,
        dl_energy: dl,
        ul_energy: ul,
    };
    SolveReport::new(instance, allocation, SolverId::EqualTime)
}

/// Upper bound from the non-causal relaxation (future downlink energy
/// usable immediately), computed by the grid oracle.
pub fn solve_noncausal_bound<R: Real>(
    instance: &SystemInstance<R>,
    config: &OracleConfig<R>,
) -> Result<SolveReport<R>> {
    if let Some(i) = instance.capacity.iter().position(|c| c.is_finite()) {
        return Err(Error::FiniteCapacityUnsupported(i + 1));
    }
    let mut report = oracle_solve(instance, config, true)?;
    report.solver_id = SolverId::NoncausalBound;
    Ok(report)
}
