//! Domain types, unit conversions and the rate/energy formulas shared by
//! every solver.
//!
//! The frame has unit duration, so average power `P_A` (watts) doubles as
//! the per-frame energy budget (joules). All rates are kept in nats
//! internally; bps/Hz is derived at reporting time by dividing by `ln 2`.

use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;

/// User energy storage capacity in joules. Unbounded storage is a
/// distinct variant rather than a large float so solvers can branch on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Capacity<R> {
    Finite(R),
    Unbounded,
}

impl<R: Real> Capacity<R> {
    pub fn is_finite(&self) -> bool {
        matches!(self, Capacity::Finite(_))
    }

    /// The capacity as a scalar, `inf` for the unbounded variant.
    pub fn value(&self) -> R {
        match self {
            Capacity::Finite(b) => *b,
            Capacity::Unbounded => R::infinity(),
        }
    }
}

impl<R: Real> Serialize for Capacity<R> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Capacity::Finite(b) => s.serialize_f64(b.to_f64_lossy()),
            Capacity::Unbounded => s.serialize_str("unbounded"),
        }
    }
}

impl<'de, R: Real> Deserialize<'de> for Capacity<R> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct CapVisitor<R>(std::marker::PhantomData<R>);

        impl<'de, R: Real> Visitor<'de> for CapVisitor<R> {
            type Value = Capacity<R>;

            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                write!(f, "a capacity in joules or the string \"unbounded\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Capacity<R>, E> {
                if v.is_infinite() {
                    Ok(Capacity::Unbounded)
                } else {
                    Ok(Capacity::Finite(R::of(v)))
                }
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Capacity<R>, E> {
                self.visit_f64(v as f64)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Capacity<R>, E> {
                self.visit_f64(v as f64)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Capacity<R>, E> {
                match v {
                    "unbounded" | "inf" | "infinite" => Ok(Capacity::Unbounded),
                    _ => Err(E::custom(format!("unknown capacity string {v:?}"))),
                }
            }
        }

        d.deserialize_any(CapVisitor(std::marker::PhantomData))
    }
}

/// All physical parameters of one channel realization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "R: Real + Serialize",
    deserialize = "R: Real + Deserialize<'de>"
))]
pub struct SystemInstance<R> {
    /// Number of users `K`.
    pub num_users: usize,
    /// Average power constraint `P_A` at the H-AP, watts.
    pub avg_power: R,
    /// Peak power constraint `P_P` at the H-AP, watts.
    pub peak_power: R,
    /// Energy harvesting efficiencies `eta_i`, length `K`.
    pub harvest_eff: Vec<R>,
    /// Downlink power gains `g_{D,i}`, length `K`.
    pub dl_gain: Vec<R>,
    /// Uplink power gains `g_{U,i}`, length `K`.
    pub ul_gain: Vec<R>,
    /// Noise powers `sigma_i^2` at the H-AP, watts, length `K`.
    pub noise_power: Vec<R>,
    /// Storage capacities `B_i`, joules, length `K`.
    pub capacity: Vec<Capacity<R>>,
}

impl<R: Real> SystemInstance<R> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        avg_power: R,
        peak_power: R,
        harvest_eff: Vec<R>,
        dl_gain: Vec<R>,
        ul_gain: Vec<R>,
        noise_power: Vec<R>,
        capacity: Vec<Capacity<R>>,
    ) -> Result<Self> {
        let inst = SystemInstance {
            num_users: harvest_eff.len(),
            avg_power,
            peak_power,
            harvest_eff,
            dl_gain,
            ul_gain,
            noise_power,
            capacity,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.num_users;
        let bad = |msg: String| Err(Error::InvalidInstance(msg));
        if k < 1 {
            return bad("need at least one user".into());
        }
        for (name, len) in [
            ("harvest_eff", self.harvest_eff.len()),
            ("dl_gain", self.dl_gain.len()),
            ("ul_gain", self.ul_gain.len()),
            ("noise_power", self.noise_power.len()),
            ("capacity", self.capacity.len()),
        ] {
            if len != k {
                return Err(Error::DimensionMismatch(format!(
                    "{name} has length {len}, expected {k}"
                )));
            }
        }
        if !(self.avg_power > R::zero()) {
            return bad(format!("P_A = {} must be positive", self.avg_power));
        }
        if !(self.peak_power > self.avg_power) {
            return bad(format!(
                "P_P = {} must exceed P_A = {}",
                self.peak_power, self.avg_power
            ));
        }
        for i in 0..k {
            if !(self.harvest_eff[i] >= R::zero() && self.harvest_eff[i] <= R::one()) {
                return bad(format!("eta_{i} = {} outside [0,1]", self.harvest_eff[i]));
            }
            if !(self.dl_gain[i] >= R::zero()) {
                return bad(format!("g_D,{i} = {} negative", self.dl_gain[i]));
            }
            if !(self.ul_gain[i] >= R::zero()) {
                return bad(format!("g_U,{i} = {} negative", self.ul_gain[i]));
            }
            if !(self.noise_power[i] > R::zero()) {
                return bad(format!("sigma^2_{i} = {} not positive", self.noise_power[i]));
            }
            if let Capacity::Finite(b) = self.capacity[i] {
                if !(b > R::zero()) {
                    return bad(format!("B_{i} = {b} not positive"));
                }
            }
        }
        Ok(())
    }

    /// Effective SNR coefficient `gamma_i = eta_i g_{D,i} g_{U,i} / sigma_i^2`
    /// for user `i` (1-based), in 1/joule.
    pub fn gamma(&self, user: usize) -> R {
        let i = user - 1;
        self.harvest_eff[i] * self.dl_gain[i] * self.ul_gain[i] / self.noise_power[i]
    }

    /// All `gamma_i`, indexed `0..K` for users `1..=K`.
    pub fn gammas(&self) -> Vec<R> {
        (1..=self.num_users).map(|u| self.gamma(u)).collect()
    }

    /// Uplink SNR-per-joule `g_{U,i}/sigma_i^2` for user `i` (1-based).
    pub fn ul_snr(&self, user: usize) -> R {
        self.ul_gain[user - 1] / self.noise_power[user - 1]
    }

    pub fn all_unbounded(&self) -> bool {
        self.capacity.iter().all(|c| !c.is_finite())
    }

    /// Same instance with every storage made unbounded.
    pub fn with_unbounded_capacity(&self) -> Self {
        let mut inst = self.clone();
        inst.capacity = vec![Capacity::Unbounded; self.num_users];
        inst
    }
}

/// A full decision: slot durations, downlink energies and uplink energies.
///
/// `tau` and `dl_energy` have length `K+1` (slot 0 is WET-only); `ul_energy`
/// has length `K` with entry `i` belonging to user `i+1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Allocation<R> {
    pub tau: Vec<R>,
    pub dl_energy: Vec<R>,
    pub ul_energy: Vec<R>,
}

impl<R: Real> Allocation<R> {
    pub fn zero(num_users: usize) -> Self {
        Allocation {
            tau: vec![R::zero(); num_users + 1],
            dl_energy: vec![R::zero(); num_users + 1],
            ul_energy: vec![R::zero(); num_users],
        }
    }

    pub fn check_dims<S>(&self, instance: &SystemInstance<S>) -> Result<()> {
        let k = instance.num_users;
        if self.tau.len() != k + 1 || self.dl_energy.len() != k + 1 || self.ul_energy.len() != k {
            return Err(Error::DimensionMismatch(format!(
                "allocation sized ({}, {}, {}) does not match K = {k}",
                self.tau.len(),
                self.dl_energy.len(),
                self.ul_energy.len()
            )));
        }
        Ok(())
    }
}

/// Which solver produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverId {
    Alg1,
    Alg2,
    EqualPower,
    EqualTime,
    NoncausalBound,
    Oracle,
}

impl std::fmt::Display for SolverId {
    fn fmt(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
        let s = match self {
            SolverId::Alg1 => "alg1",
            SolverId::Alg2 => "alg2",
            SolverId::EqualPower => "equal_power",
            SolverId::EqualTime => "equal_time",
            SolverId::NoncausalBound => "noncausal",
            SolverId::Oracle => "oracle",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for SolverId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "alg1" => Ok(SolverId::Alg1),
            "alg2" => Ok(SolverId::Alg2),
            "equal_power" => Ok(SolverId::EqualPower),
            "equal_time" => Ok(SolverId::EqualTime),
            "noncausal" => Ok(SolverId::NoncausalBound),
            "oracle" => Ok(SolverId::Oracle),
            _ => Err(format!("unknown solver {s:?}")),
        }
    }
}

/// Solver output: the allocation plus diagnostics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveReport<R> {
    pub allocation: Allocation<R>,
    /// Sum rate in nats per unit frame.
    pub sum_rate_nats: R,
    /// `sum_rate_nats / ln 2`.
    pub sum_rate_bpshz: R,
    /// Turn-off slot index `L*` where known.
    pub turnoff_index: Option<usize>,
    /// Downlink-phase duration `T*` where known.
    pub time_split: Option<R>,
    /// Max constraint/stationarity violation observed at the solution.
    pub kkt_residual: R,
    pub iterations: u32,
    pub solver_id: SolverId,
    pub converged: bool,
}

impl<R: Real> SolveReport<R> {
    pub fn new(
        instance: &SystemInstance<R>,
        allocation: Allocation<R>,
        solver_id: SolverId,
    ) -> Result<Self> {
        let nats = evaluate_sum_rate(instance, &allocation)?;
        let resid = check_feasibility(instance, &allocation, R::zero())?.max_violation();
        Ok(SolveReport {
            allocation,
            sum_rate_nats: nats,
            sum_rate_bpshz: nats / R::of(std::f64::consts::LN_2),
            turnoff_index: None,
            time_split: None,
            kkt_residual: resid,
            iterations: 0,
            solver_id,
            converged: true,
        })
    }
}

/// Energy harvested by `user` (1-based) from a downlink transmission of
/// `dl_power` watts lasting `slot_len`. Noise energy is excluded.
pub fn harvested_energy<R: Real>(
    instance: &SystemInstance<R>,
    user: usize,
    dl_power: R,
    slot_len: R,
) -> Result<R> {
    if user == 0 || user > instance.num_users {
        return Err(Error::UserIndex(user));
    }
    let i = user - 1;
    Ok(instance.harvest_eff[i] * instance.dl_gain[i] * dl_power * slot_len)
}

/// Achievable rate `tau_i ln(1 + (g_{U,i}/sigma_i^2) eps_{U,i}/tau_i)` in
/// nats. The `tau = 0, eps = 0` corner takes the continuity limit 0; a
/// zero-length slot with positive energy is a domain error.
pub fn user_rate<R: Real>(tau_i: R, ul_energy_i: R, ul_gain_i: R, noise_i: R) -> Result<R> {
    if tau_i == R::zero() {
        if ul_energy_i > R::zero() {
            return Err(Error::ZeroSlotPositiveEnergy {
                user: 0,
                energy: ul_energy_i.to_f64_lossy(),
            });
        }
        return Ok(R::zero());
    }
    Ok(tau_i * (R::one() + ul_gain_i / noise_i * ul_energy_i / tau_i).ln())
}

/// Objective of the allocation problem: sum of per-user rates, nats.
pub fn evaluate_sum_rate<R: Real>(
    instance: &SystemInstance<R>,
    allocation: &Allocation<R>,
) -> Result<R> {
    allocation.check_dims(instance)?;
    let mut total = R::zero();
    for i in 1..=instance.num_users {
        total = total
            + user_rate(
                allocation.tau[i],
                allocation.ul_energy[i - 1],
                instance.ul_gain[i - 1],
                instance.noise_power[i - 1],
            )
            .map_err(|e| match e {
                Error::ZeroSlotPositiveEnergy { energy, .. } => {
                    Error::ZeroSlotPositiveEnergy { user: i, energy }
                }
                other => other,
            })?;
    }
    Ok(total)
}

/// Per-constraint-family signed slacks (positive = satisfied with room).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FeasibilityReport<R> {
    /// `P_A - sum eps_D` (constraint on the H-AP energy budget).
    pub avg_power_slack: R,
    /// `min_i (tau_i P_P - eps_{D,i})` (peak power).
    pub peak_power_slack: R,
    /// `1 - sum tau_i` (frame length).
    pub total_time_slack: R,
    /// `min_i (B_i - eps_{U,i})` (storage capacity).
    pub capacity_slack: R,
    /// `min_i (eta_i g_{D,i} sum_{j<i} eps_{D,j} - eps_{U,i})` (causality).
    pub causality_slack: R,
    /// `min` over all sign constraints `tau, eps_D, eps_U >= 0`.
    pub nonneg_slack: R,
    pub tol: R,
}

impl<R: Real> FeasibilityReport<R> {
    /// Worst violation across every family (0 when feasible).
    pub fn max_violation(&self) -> R {
        let z = R::zero();
        [
            self.avg_power_slack,
            self.peak_power_slack,
            self.total_time_slack,
            self.capacity_slack,
            self.causality_slack,
            self.nonneg_slack,
        ]
        .iter()
        .fold(z, |acc, s| acc.max(-*s))
    }

    pub fn is_feasible(&self) -> bool {
        self.max_violation() <= self.tol
    }
}

/// Evaluate the five constraint families of the allocation problem plus
/// sign constraints, reporting the worst slack of each.
pub fn check_feasibility<R: Real>(
    instance: &SystemInstance<R>,
    allocation: &Allocation<R>,
    tol: R,
) -> Result<FeasibilityReport<R>> {
    allocation.check_dims(instance)?;
    let k = instance.num_users;
    let big = R::infinity();

    let dl_sum = allocation
        .dl_energy
        .iter()
        .fold(R::zero(), |acc, e| acc + *e);
    let tau_sum = allocation.tau.iter().fold(R::zero(), |acc, t| acc + *t);

    let mut peak = big;
    for i in 0..=k {
        peak = peak.min(allocation.tau[i] * instance.peak_power - allocation.dl_energy[i]);
    }

    let mut cap = big;
    let mut causal = big;
    let mut cum = R::zero();
    for i in 1..=k {
        cum = cum + allocation.dl_energy[i - 1];
        let eu = allocation.ul_energy[i - 1];
        if let Capacity::Finite(b) = instance.capacity[i - 1] {
            cap = cap.min(b - eu);
        }
        causal = causal.min(instance.harvest_eff[i - 1] * instance.dl_gain[i - 1] * cum - eu);
    }

    let mut nonneg = big;
    for t in &allocation.tau {
        nonneg = nonneg.min(*t);
    }
    for e in allocation.dl_energy.iter().chain(&allocation.ul_energy) {
        nonneg = nonneg.min(*e);
    }

    Ok(FeasibilityReport {
        avg_power_slack: instance.avg_power - dl_sum,
        peak_power_slack: peak,
        total_time_slack: R::one() - tau_sum,
        capacity_slack: cap,
        causality_slack: causal,
        nonneg_slack: nonneg,
        tol,
    })
}

/// `10^((x - 30)/10)` watts.
pub fn dbm_to_watts<R: Real>(dbm: R) -> R {
    R::of(10.0).powf((dbm - R::of(30.0)) / R::of(10.0))
}

pub fn watts_to_dbm<R: Real>(watts: R) -> R {
    R::of(10.0) * watts.log10() + R::of(30.0)
}

pub fn microjoules_to_joules<R: Real>(uj: R) -> R {
    uj * R::of(1e-6)
}

pub fn joules_to_microjoules<R: Real>(j: R) -> R {
    j * R::of(1e6)
}
