//! Acceptance gate: ten end-to-end criteria, one test each. Every test
//! prints a single `[criterion N] PASS/FAIL` line (visible with
//! `cargo test --test acceptance -- --nocapture`) before asserting.

use wpcn::alg1::solve_infinite;
use wpcn::alg2::{dual_value, kkt_residuals, solve_finite, solve_finite_traced, DualPoint};
use wpcn::baselines::{solve_equal_power, solve_equal_time, solve_noncausal_bound};
use wpcn::model::{dbm_to_watts, Capacity, SolverId, SystemInstance};
use wpcn::oracle::{oracle_solve, OracleConfig};
use wpcn::sim::{draw_channels, run_sweep, uniform, ChannelModel, PeakPowerRule, SweepSpec};

const TIGHT_TOL: f64 = 1e-10;
const TIGHT_ITERS: u32 = 50_000;

fn verdict(criterion: u32, pass: bool, detail: &str) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("[criterion {criterion}] {tag} — {detail}");
    assert!(pass, "[criterion {criterion}] FAIL — {detail}");
}

/// Normalized random instance: unit gains and noise, per-user SNR
/// carried by the uplink gain. `k_max` bounds the user count.
fn random_instance(seed: u64, index: u64, k_max: usize) -> SystemInstance<f64> {
    let u = |slot: u64, tag: u64| uniform(seed, index, slot, tag);
    let k = 1 + (u(0, 0) * k_max as f64) as usize;
    let k = k.min(k_max);
    let pa = 0.1 + 0.9 * u(1, 0);
    let pp = pa * (2.0 + 8.0 * u(2, 0));
    let snrs: Vec<f64> = (0..k as u64).map(|j| 0.5 + 3.5 * u(10 + j, 1)).collect();
    SystemInstance::new(
        pa,
        pp,
        vec![1.0; k],
        vec![1.0; k],
        snrs,
        vec![1.0; k],
        vec![Capacity::Unbounded; k],
    )
    .unwrap()
}

fn with_caps(inst: &SystemInstance<f64>, caps: Vec<Capacity<f64>>) -> SystemInstance<f64> {
    let mut out = inst.clone();
    out.capacity = caps;
    out
}

fn mean_of(result: &wpcn::sim::SweepResult, solver: SolverId, k: usize, b: f64) -> f64 {
    result
        .rows
        .iter()
        .find(|r| {
            r.solver == solver
                && r.k == k
                && match r.b_uj {
                    Capacity::Finite(uj) => b.is_finite() && (uj - b).abs() < 1e-9,
                    Capacity::Unbounded => !b.is_finite(),
                }
        })
        .unwrap_or_else(|| panic!("missing row {solver} K={k} B={b}"))
        .mean_bpshz
}

#[test]
fn criterion_01_unbounded_solver_matches_oracle() {
    let mut worst = 0.0f64;
    for i in 0..100 {
        let inst = random_instance(101, i, 3);
        let fast = solve_infinite(&inst).unwrap();
        let brute = oracle_solve(&inst, &OracleConfig::default(), false).unwrap();
        let gap = (fast.sum_rate_nats - brute.sum_rate_nats).abs() / brute.sum_rate_nats;
        worst = worst.max(gap);
    }
    verdict(
        1,
        worst <= 1e-3,
        &format!("closed-form vs grid search over 100 instances: worst relative gap {worst:.2e} (limit 1e-3)"),
    );
}

fn finite_b_instances() -> Vec<SystemInstance<f64>> {
    (0..50)
        .map(|i| {
            let inst = random_instance(202, i, 2);
            let caps = (0..inst.num_users as u64)
                .map(|j| {
                    let u = uniform(202, i, 40 + j, 2);
                    Capacity::Finite((0.1 + 1.9 * u) * inst.avg_power)
                })
                .collect();
            with_caps(&inst, caps)
        })
        .collect()
}

#[test]
fn criterion_02_finite_solver_matches_oracle_with_zero_duality_gap() {
    let mut worst_gap = 0.0f64;
    let mut worst_dual = 0.0f64;
    for inst in finite_b_instances() {
        let (rep, dual) = solve_finite_traced(&inst, TIGHT_TOL, TIGHT_ITERS, None).unwrap();
        let brute = oracle_solve(&inst, &OracleConfig::default(), false).unwrap();
        let gap = (rep.sum_rate_nats - brute.sum_rate_nats).abs() / brute.sum_rate_nats;
        let g = dual_value(&inst, &dual).unwrap();
        let dgap = (g - brute.sum_rate_nats).abs() / (1.0 + brute.sum_rate_nats);
        worst_gap = worst_gap.max(gap);
        worst_dual = worst_dual.max(dgap);
    }
    verdict(
        2,
        worst_gap <= 1e-3 && worst_dual <= 1e-3,
        &format!(
            "dual solver vs grid search over 50 finite-storage instances: worst primal gap {worst_gap:.2e}, worst duality gap {worst_dual:.2e} (limits 1e-3)"
        ),
    );
}

#[test]
fn criterion_03_huge_storage_reduces_to_unbounded_solver() {
    let mut worst = 0.0f64;
    for i in 0..50 {
        let inst = random_instance(303, i, 3);
        let caps = vec![Capacity::Finite(1e3 * inst.avg_power); inst.num_users];
        let finite = with_caps(&inst, caps);
        let rep = solve_finite(&finite, TIGHT_TOL, TIGHT_ITERS).unwrap();
        let reference = solve_infinite(&inst).unwrap();
        let gap = (rep.sum_rate_nats - reference.sum_rate_nats).abs() / reference.sum_rate_nats;
        worst = worst.max(gap);
    }
    verdict(
        3,
        worst <= 1e-4,
        &format!("finite solver at 1000x-budget storage vs unbounded solver, 50 instances: worst relative gap {worst:.2e} (limit 1e-4)"),
    );
}

#[test]
fn criterion_04_unbounded_solution_structure() {
    let mut ok = true;
    let mut detail = String::new();
    for i in 0..100 {
        let inst = random_instance(101, i, 3);
        let rep = solve_infinite(&inst).unwrap();
        let alloc = &rep.allocation;
        let total: f64 = alloc.dl_energy.iter().sum();
        if (total - inst.avg_power).abs() > 1e-9 {
            ok = false;
            detail = format!("instance {i}: downlink energy sums to {total}, budget {}", inst.avg_power);
            break;
        }
        if alloc.tau.iter().any(|t| *t <= 0.0) {
            ok = false;
            detail = format!("instance {i}: non-positive slot duration");
            break;
        }
        // max-power prefix, at most one partial slot, then zero
        let mut seen_partial = false;
        for (i_slot, (&e, &t)) in alloc.dl_energy.iter().zip(&alloc.tau).enumerate() {
            let full = t * inst.peak_power;
            let at_max = (e - full).abs() <= 1e-9 * full.max(1.0);
            let zero = e <= 1e-12;
            if seen_partial && !zero {
                ok = false;
                detail = format!("instance {i}: energy in slot {i_slot} after charging stopped");
                break;
            }
            if !at_max && !zero {
                if seen_partial {
                    ok = false;
                    detail = format!("instance {i}: second partial slot at {i_slot}");
                    break;
                }
                seen_partial = true;
            } else if zero && !seen_partial {
                seen_partial = true; // charging ended exactly on a slot edge
            }
        }
        if !ok {
            break;
        }
    }
    if ok {
        detail = "100 instances: full-power charging prefix, single cutoff, exact budget, all slots active".into();
    }
    verdict(4, ok, &detail);
}

#[test]
fn criterion_05_stationarity_and_complementary_slackness() {
    let mut worst_stat = 0.0f64;
    let mut worst_cs = 0.0f64;
    for inst in finite_b_instances() {
        let (rep, dual) = solve_finite_traced(&inst, TIGHT_TOL, TIGHT_ITERS, None).unwrap();
        let kkt = kkt_residuals(&inst, &dual, &rep);
        worst_stat = worst_stat.max(kkt.worst_stationarity());
        worst_cs = worst_cs.max(kkt.worst_comp_slack() / inst.avg_power);
    }
    verdict(
        5,
        worst_stat <= 1e-5 && worst_cs <= 1e-5,
        &format!(
            "first-order residuals over 50 finite-storage instances: worst stationarity {worst_stat:.2e} (limit 1e-5), worst complementary slackness {worst_cs:.2e} x budget (limit 1e-5)"
        ),
    );
}

#[test]
fn criterion_06_unbounded_sweep_gains_and_upper_bound() {
    let spec = SweepSpec {
        k_values: vec![3, 5],
        pa_dbm: vec![30.0],
        pp_rule: PeakPowerRule::MultipleOfAvg(5.0),
        b_uj: vec![Capacity::Unbounded],
        num_draws: 2000,
        solvers: vec![SolverId::Alg1, SolverId::EqualPower, SolverId::NoncausalBound],
        seed: 1,
        pathloss_db: 30.0,
        harvest_eff: 0.7,
        noise_dbm: -50.0,
    };
    let result = run_sweep(&spec).unwrap();
    assert!(result.failures.is_empty(), "solver failures: {:?}", result.failures);
    let gain = |k: usize| {
        let opt = mean_of(&result, SolverId::Alg1, k, f64::INFINITY);
        let base = mean_of(&result, SolverId::EqualPower, k, f64::INFINITY);
        100.0 * (opt - base) / base
    };
    let g3 = gain(3);
    let g5 = gain(5);
    let opt3 = mean_of(&result, SolverId::Alg1, 3, f64::INFINITY);
    let bound3 = mean_of(&result, SolverId::NoncausalBound, 3, f64::INFINITY);
    let bound_gap = 100.0 * (bound3 - opt3) / bound3;
    let gains_ok = (g3 - 29.0).abs() <= 6.0 && (g5 - 24.0).abs() <= 6.0;
    let bound_ok = opt3 >= 0.95 * bound3;
    verdict(
        6,
        gains_ok && bound_ok,
        &format!(
            "gain over equal-power: {g3:.1}% at K=3 (want 29±6), {g5:.1}% at K=5 (want 24±6); \
             relaxed upper bound exceeds optimum by {bound_gap:.1}% (limit 5%)"
        ),
    );
}

#[test]
fn criterion_07_finite_storage_gain_and_saturation() {
    let spec = SweepSpec {
        k_values: vec![3],
        pa_dbm: vec![30.0],
        pp_rule: PeakPowerRule::MultipleOfAvg(2.0),
        b_uj: vec![Capacity::Finite(50.0)],
        num_draws: 2000,
        solvers: vec![SolverId::Alg2, SolverId::EqualTime],
        seed: 1,
        pathloss_db: 30.0,
        harvest_eff: 0.7,
        noise_dbm: -50.0,
    };
    let result = run_sweep(&spec).unwrap();
    assert!(result.failures.is_empty(), "solver failures: {:?}", result.failures);
    let opt = mean_of(&result, SolverId::Alg2, 3, 50.0);
    let base = mean_of(&result, SolverId::EqualTime, 3, 50.0);
    let gain = 100.0 * (opt - base) / base;

    // storage-limited curve flattens as transmit power grows
    let curve_spec = SweepSpec {
        pa_dbm: vec![10.0, 15.0, 20.0, 25.0, 30.0],
        num_draws: 400,
        solvers: vec![SolverId::Alg2],
        ..spec
    };
    let curve = run_sweep(&curve_spec).unwrap();
    let means: Vec<f64> = curve
        .rows
        .iter()
        .filter(|r| r.solver == SolverId::Alg2)
        .map(|r| r.mean_bpshz)
        .collect();
    let flat = wpcn::sim::saturates(&means);
    verdict(
        7,
        (gain - 30.0).abs() <= 8.0 && flat,
        &format!(
            "gain over equal-time at 50 uJ storage: {gain:.1}% (want 30±8); curve saturates along power grid: {flat}"
        ),
    );
}

#[test]
fn criterion_08_finite_storage_gains_across_user_counts() {
    let spec = SweepSpec {
        k_values: vec![3, 7],
        pa_dbm: vec![30.0],
        pp_rule: PeakPowerRule::MultipleOfAvg(5.0),
        b_uj: vec![Capacity::Finite(50.0)],
        num_draws: 2000,
        solvers: vec![SolverId::Alg2, SolverId::EqualTime],
        seed: 1,
        pathloss_db: 30.0,
        harvest_eff: 0.7,
        noise_dbm: -50.0,
    };
    let result = run_sweep(&spec).unwrap();
    assert!(result.failures.is_empty(), "solver failures: {:?}", result.failures);
    let gain = |k: usize| {
        let opt = mean_of(&result, SolverId::Alg2, k, 50.0);
        let base = mean_of(&result, SolverId::EqualTime, k, 50.0);
        100.0 * (opt - base) / base
    };
    let g3 = gain(3);
    let g7 = gain(7);
    verdict(
        8,
        (g3 - 34.0).abs() <= 8.0 && (g7 - 24.0).abs() <= 8.0,
        &format!("gain over equal-time at 50 uJ: {g3:.1}% at K=3 (want 34±8), {g7:.1}% at K=7 (want 24±8)"),
    );
}

#[test]
fn criterion_09_storage_sweep_reaches_unbounded_performance() {
    let spec = SweepSpec {
        k_values: vec![3],
        pa_dbm: vec![20.0],
        pp_rule: PeakPowerRule::MultipleOfAvg(2.0),
        b_uj: vec![
            Capacity::Finite(10.0),
            Capacity::Finite(25.0),
            Capacity::Finite(50.0),
            Capacity::Finite(75.0),
            Capacity::Finite(100.0),
            Capacity::Finite(150.0),
            Capacity::Finite(200.0),
            Capacity::Finite(300.0),
            Capacity::Unbounded,
        ],
        num_draws: 600,
        solvers: vec![SolverId::Alg2, SolverId::EqualTime],
        seed: 1,
        pathloss_db: 30.0,
        harvest_eff: 0.7,
        noise_dbm: -50.0,
    };
    let result = run_sweep(&spec).unwrap();
    assert!(result.failures.is_empty(), "solver failures: {:?}", result.failures);
    let unbounded = mean_of(&result, SolverId::Alg2, 3, f64::INFINITY);
    let at_150 = mean_of(&result, SolverId::Alg2, 3, 150.0);
    let gap = 100.0 * (unbounded - at_150) / unbounded;
    let best_equal_time = result
        .rows
        .iter()
        .filter(|r| r.solver == SolverId::EqualTime)
        .map(|r| r.mean_bpshz)
        .fold(f64::NEG_INFINITY, f64::max);
    verdict(
        9,
        gap.abs() <= 1.0 && best_equal_time < unbounded,
        &format!(
            "150 uJ storage within {gap:.2}% of unbounded rate (limit 1%); best equal-time {best_equal_time:.3} vs unbounded optimum {unbounded:.3} bps/Hz"
        ),
    );
}

#[test]
fn criterion_10_property_suites() {
    // (a) product-log round trip
    let mut worst_w = 0.0f64;
    for i in 0..10_000u64 {
        let u = uniform(1010, i, 0, 0);
        // arguments spanning the branch point to large magnitudes
        let x = if i % 4 == 0 {
            -(1.0f64.exp().recip()) * u
        } else {
            (30.0 * u).exp_m1()
        };
        let w = wpcn::special::lambert_w0(x).unwrap();
        let resid = (w * w.exp() - x).abs() / x.abs().max(1.0);
        worst_w = worst_w.max(resid);
    }
    let w_ok = worst_w <= 1e-12;

    // (b) per-draw dominance ordering at unbounded storage
    let model = ChannelModel { pathloss_db: 30.0, seed: 7 };
    let pa = dbm_to_watts(30.0);
    let noise = dbm_to_watts(-50.0);
    let mut dom_ok = true;
    let mut dom_detail = String::new();
    for draw in 0..200u64 {
        let (dl, ul) = draw_channels(&model, 3, draw);
        let inst = SystemInstance::new(
            pa,
            2.0 * pa,
            vec![0.7; 3],
            dl,
            ul,
            vec![noise; 3],
            vec![Capacity::Unbounded; 3],
        )
        .unwrap();
        let et = solve_equal_time(&inst).unwrap().sum_rate_nats;
        let ep = solve_equal_power(&inst).unwrap().sum_rate_nats;
        let a2 = solve_finite(&inst, 1e-8, 20_000).unwrap().sum_rate_nats;
        let a1 = solve_infinite(&inst).unwrap().sum_rate_nats;
        let nc = solve_noncausal_bound(&inst, &OracleConfig::coarse())
            .unwrap()
            .sum_rate_nats;
        let slack = 1e-4 * (1.0 + a1);
        if !(et <= a2 + slack && a2 <= a1 + slack && a1 <= nc + slack && ep <= a1 + slack) {
            dom_ok = false;
            dom_detail =
                format!("draw {draw}: et={et:.6} ep={ep:.6} a2={a2:.6} a1={a1:.6} bound={nc:.6}");
            break;
        }
    }

    // (c) per-draw monotonicity in average power and in storage
    let mut mono_ok = true;
    let mut mono_detail = String::new();
    'outer: for draw in 0..20u64 {
        let (dl, ul) = draw_channels(&model, 3, 1000 + draw);
        let mut prev = f64::NEG_INFINITY;
        for pa_dbm in [10.0, 14.0, 18.0, 22.0, 26.0, 30.0] {
            let paw = dbm_to_watts(pa_dbm);
            let inst = SystemInstance::new(
                paw,
                2.0 * paw,
                vec![0.7; 3],
                dl.clone(),
                ul.clone(),
                vec![noise; 3],
                vec![Capacity::Unbounded; 3],
            )
            .unwrap();
            let r = solve_infinite(&inst).unwrap().sum_rate_nats;
            if r < prev - 1e-9 {
                mono_ok = false;
                mono_detail = format!("draw {draw}: rate fell from {prev:.6} at higher power");
                break 'outer;
            }
            prev = r;
        }
        let mut prev_b = f64::NEG_INFINITY;
        for b_uj in [5.0, 10.0, 20.0, 50.0, 100.0, f64::INFINITY] {
            let cap = if b_uj.is_finite() {
                Capacity::Finite(b_uj * 1e-6)
            } else {
                Capacity::Unbounded
            };
            let inst = SystemInstance::new(
                pa,
                2.0 * pa,
                vec![0.7; 3],
                dl.clone(),
                ul.clone(),
                vec![noise; 3],
                vec![cap; 3],
            )
            .unwrap();
            let r = solve_finite(&inst, 1e-8, 20_000).unwrap().sum_rate_nats;
            if r < prev_b - 1e-4 * (1.0 + prev_b) {
                mono_ok = false;
                mono_detail = format!("draw {draw}: rate fell from {prev_b:.6} at larger storage");
                break 'outer;
            }
            prev_b = r;
        }
    }

    // (d) weak duality: every feasible dual point upper-bounds the optimum
    let base = random_instance(404, 0, 3);
    let caps = vec![Capacity::Finite(0.6 * base.avg_power); base.num_users];
    let inst = with_caps(&base, caps);
    let primal = oracle_solve(&inst, &OracleConfig::default(), false)
        .unwrap()
        .sum_rate_nats;
    let mut wd_ok = true;
    let mut wd_detail = String::new();
    for trial in 0..100u64 {
        let k = inst.num_users;
        let nu = uniform(505, trial, 0, 0) * 2.0;
        let beta: Vec<f64> = (0..k as u64)
            .map(|j| uniform(505, trial, 1 + j, 0) * inst.ul_snr(j as usize + 1))
            .collect();
        // smallest lambda keeping the dual objective finite, plus headroom
        let mut zeta_max = 0.0f64;
        for i in 0..k {
            let tail: f64 = (i + 1..k)
                .map(|j| inst.harvest_eff[j] * inst.dl_gain[j] * beta[j])
                .sum();
            zeta_max = zeta_max.max((tail - nu).max(0.0));
        }
        let lambda = inst.peak_power * zeta_max + uniform(505, trial, 50, 0);
        let dual = DualPoint {
            nu,
            lambda,
            beta: beta.clone(),
        };
        let g = dual_value(&inst, &dual).unwrap();
        if g < primal - 1e-6 * (1.0 + primal) {
            wd_ok = false;
            wd_detail = format!("trial {trial}: dual value {g:.6} below optimum {primal:.6}");
            break;
        }
    }

    let ok = w_ok && dom_ok && mono_ok && wd_ok;
    verdict(
        10,
        ok,
        &format!(
            "product-log worst residual {worst_w:.1e} (limit 1e-12); dominance {}; monotonicity {}; weak duality {}",
            if dom_ok { "holds".into() } else { dom_detail },
            if mono_ok { "holds".into() } else { mono_detail },
            if wd_ok { "holds".to_string() } else { wd_detail },
        ),
    );
}
