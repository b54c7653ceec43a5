//! Monte-Carlo experiment harness: fading channel generation, parameter
//! sweeps over (K, P_A, P_P, B), aggregation into CSV-ready rows.
//!
//! Channel draws come from a counter-mode generator keyed by
//! `(seed, draw_index, user_index, link)`, so adding solvers, reordering
//! parameter points, or changing the worker count never perturbs the
//! channels a given draw sees.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::alg1::solve_infinite;
use crate::alg2::{solve_finite, DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::baselines::{solve_equal_power, solve_equal_time, solve_noncausal_bound};
use crate::error::{Error, Result};
use crate::model::{dbm_to_watts, Capacity, SolverId, SystemInstance};
use crate::oracle::{oracle_solve, OracleConfig, MAX_ORACLE_USERS};

/// Rayleigh fading with a flat average attenuation: every gain is
/// exponential with mean `10^(-pathloss_db/10)`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ChannelModel {
    pub pathloss_db: f64,
    pub seed: u64,
}

impl Default for ChannelModel {
    fn default() -> Self {
        ChannelModel {
            pathloss_db: 30.0,
            seed: 0,
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn counter_hash(seed: u64, draw: u64, user: u64, link: u64) -> u64 {
    let mut h = splitmix64(seed);
    h = splitmix64(h ^ draw);
    h = splitmix64(h ^ user);
    splitmix64(h ^ link)
}

/// Uniform in the open interval (0, 1) from 53 high bits.
fn unit_open(bits: u64) -> f64 {
    ((bits >> 11) as f64 + 0.5) / (1u64 << 53) as f64
}

/// Uniform variate in (0, 1) from the same counter-mode generator the
/// channel draws use; handy wherever reproducible randomness is needed.
pub fn uniform(seed: u64, a: u64, b: u64, c: u64) -> f64 {
    unit_open(counter_hash(seed, a, b, c))
}

/// Independent downlink and uplink gains for one channel draw.
pub fn draw_channels(model: &ChannelModel, k: usize, draw_index: u64) -> (Vec<f64>, Vec<f64>) {
    let mean = 10f64.powf(-model.pathloss_db / 10.0);
    let gain = |user: u64, link: u64| {
        let u = unit_open(counter_hash(model.seed, draw_index, user, link));
        -mean * (1.0 - u).ln()
    };
    let dl = (0..k as u64).map(|i| gain(i, 0)).collect();
    let ul = (0..k as u64).map(|i| gain(i, 1)).collect();
    (dl, ul)
}

/// Peak power as a multiple of the average, or an absolute wattage.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PeakPowerRule {
    MultipleOfAvg(f64),
    Watts(f64),
}

impl PeakPowerRule {
    pub fn apply(&self, avg_power_w: f64) -> f64 {
        match self {
            PeakPowerRule::MultipleOfAvg(m) => m * avg_power_w,
            PeakPowerRule::Watts(w) => *w,
        }
    }
}

fn default_harvest_eff() -> f64 {
    0.7
}
fn default_noise_dbm() -> f64 {
    -50.0
}
fn default_pathloss_db() -> f64 {
    30.0
}

/// A Monte-Carlo experiment: the cartesian product of user counts,
/// average-power points and storage capacities, each evaluated over
/// `num_draws` channel draws per requested solver.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepSpec {
    pub k_values: Vec<usize>,
    pub pa_dbm: Vec<f64>,
    pub pp_rule: PeakPowerRule,
    /// Storage per user in microjoules, or `"unbounded"`.
    pub b_uj: Vec<Capacity<f64>>,
    pub num_draws: u32,
    pub solvers: Vec<SolverId>,
    pub seed: u64,
    #[serde(default = "default_pathloss_db")]
    pub pathloss_db: f64,
    #[serde(default = "default_harvest_eff")]
    pub harvest_eff: f64,
    #[serde(default = "default_noise_dbm")]
    pub noise_dbm: f64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.num_draws < 1 {
            return Err(Error::InvalidSpec("num_draws must be >= 1".into()));
        }
        if self.k_values.is_empty() || self.pa_dbm.is_empty() || self.b_uj.is_empty() {
            return Err(Error::InvalidSpec(
                "k_values, pa_dbm and b_uj must be non-empty".into(),
            ));
        }
        if self.solvers.is_empty() {
            return Err(Error::InvalidSpec("no solvers requested".into()));
        }
        for k in &self.k_values {
            if *k == 0 {
                return Err(Error::InvalidSpec("K must be >= 1".into()));
            }
        }
        Ok(())
    }
}

/// Aggregated rates at one parameter point for one solver.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    pub solver: SolverId,
    pub k: usize,
    pub pa_dbm: f64,
    pub pp_w: f64,
    /// `None` when the solver does not apply at this point (e.g. the
    /// infinite-storage solver at a finite B).
    pub b_uj: Capacity<f64>,
    pub mean_bpshz: f64,
    pub stderr: f64,
    pub draws: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FailureRecord {
    pub solver: SolverId,
    pub k: usize,
    pub pa_dbm: f64,
    pub b_uj: Capacity<f64>,
    pub seed: u64,
    pub draw_index: u64,
    pub message: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub failures: Vec<FailureRecord>,
}

/// Whether a solver can run at a given storage setting and user count.
fn applicable(solver: SolverId, b: &Capacity<f64>, k: usize) -> bool {
    match solver {
        SolverId::Alg1 | SolverId::EqualPower => !b.is_finite(),
        SolverId::NoncausalBound => !b.is_finite() && k <= MAX_ORACLE_USERS,
        SolverId::Oracle => k <= MAX_ORACLE_USERS,
        SolverId::Alg2 | SolverId::EqualTime => true,
    }
}

fn build_instance(
    spec: &SweepSpec,
    k: usize,
    pa_w: f64,
    b: &Capacity<f64>,
    dl: Vec<f64>,
    ul: Vec<f64>,
) -> Result<SystemInstance<f64>> {
    let noise = dbm_to_watts(spec.noise_dbm);
    let cap = match b {
        Capacity::Finite(uj) => Capacity::Finite(uj * 1e-6),
        Capacity::Unbounded => Capacity::Unbounded,
    };
    SystemInstance::new(
        pa_w,
        spec.pp_rule.apply(pa_w),
        vec![spec.harvest_eff; k],
        dl,
        ul,
        vec![noise; k],
        vec![cap; k],
    )
}

fn run_solver(solver: SolverId, inst: &SystemInstance<f64>) -> Result<f64> {
    let report = match solver {
        SolverId::Alg1 => solve_infinite(inst)?,
        SolverId::Alg2 => solve_finite(inst, DEFAULT_TOL, DEFAULT_MAX_ITER)?,
        SolverId::EqualPower => solve_equal_power(inst)?,
        SolverId::EqualTime => solve_equal_time(inst)?,
        SolverId::NoncausalBound => solve_noncausal_bound(inst, &OracleConfig::coarse())?,
        SolverId::Oracle => oracle_solve(inst, &OracleConfig::coarse(), false)?,
    };
    Ok(report.sum_rate_bpshz)
}

/// Run the full sweep. Draws execute on the rayon worker pool; the
/// aggregation is order-independent, so results do not depend on thread
/// count.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let model = ChannelModel {
        pathloss_db: spec.pathloss_db,
        seed: spec.seed,
    };

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for &k in &spec.k_values {
        for &pa_dbm in &spec.pa_dbm {
            let pa_w = dbm_to_watts(pa_dbm);
            for b in &spec.b_uj {
                for &solver in &spec.solvers {
                    if !applicable(solver, b, k) {
                        continue;
                    }
                    let outcomes: Vec<std::result::Result<f64, String>> = (0..spec.num_draws
                        as u64)
                        .into_par_iter()
                        .map(|draw| {
                            let (dl, ul) = draw_channels(&model, k, draw);
                            build_instance(spec, k, pa_w, b, dl, ul)
                                .and_then(|inst| run_solver(solver, &inst))
                                .map_err(|e| e.to_string())
                        })
                        .collect();

                    let mut sum = 0.0;
                    let mut sumsq = 0.0;
                    let mut n = 0u32;
                    for (draw, out) in outcomes.into_iter().enumerate() {
                        match out {
                            Ok(rate) => {
                                sum += rate;
                                sumsq += rate * rate;
                                n += 1;
                            }
                            Err(message) => failures.push(FailureRecord {
                                solver,
                                k,
                                pa_dbm,
                                b_uj: *b,
                                seed: spec.seed,
                                draw_index: draw as u64,
                                message,
                            }),
                        }
                    }
                    let mean = if n > 0 { sum / n as f64 } else { f64::NAN };
                    let stderr = if n > 1 {
                        let var = (sumsq - sum * sum / n as f64) / (n as f64 - 1.0);
                        (var.max(0.0) / n as f64).sqrt()
                    } else {
                        0.0
                    };
                    rows.push(SweepRow {
                        solver,
                        k,
                        pa_dbm,
                        pp_w: spec.pp_rule.apply(pa_w),
                        b_uj: *b,
                        mean_bpshz: mean,
                        stderr,
                        draws: n,
                    });
                }
            }
        }
    }
    Ok(SweepResult { rows, failures })
}

pub const CSV_HEADER: &str = "solver,K,PA_dbm,PP_w,B_uJ,mean_bpshz,stderr,draws";

/// Write the aggregated rows as CSV. `comments` lines, if any, are
/// prefixed with `#` ahead of the header (provenance metadata).
pub fn write_csv<W: Write>(result: &SweepResult, comments: &[String], out: &mut W) -> Result<()> {
    for line in comments {
        writeln!(out, "# {line}")?;
    }
    writeln!(out, "{CSV_HEADER}")?;
    for row in &result.rows {
        let b = match row.b_uj {
            Capacity::Finite(uj) => format!("{uj}"),
            Capacity::Unbounded => "inf".to_string(),
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            row.solver, row.k, row.pa_dbm, row.pp_w, b, row.mean_bpshz, row.stderr, row.draws
        )?;
    }
    Ok(())
}

/// Concave flattening check along an increasing parameter grid: the gap
/// between the last two means is no larger than between the first two.
pub fn saturates(means: &[f64]) -> bool {
    if means.len() < 3 {
        return true;
    }
    let first = means[1] - means[0];
    let last = means[means.len() - 1] - means[means.len() - 2];
    last <= first + 1e-12
}
