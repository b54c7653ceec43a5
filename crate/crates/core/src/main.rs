//! Command-line front end: single-instance solves, Monte-Carlo sweeps,
//! figure-style reproduction presets and a self-check suite.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};

use wpcn::alg1::solve_infinite;
use wpcn::alg2::{solve_finite, DEFAULT_MAX_ITER, DEFAULT_TOL};
use wpcn::baselines::{solve_equal_power, solve_equal_time, solve_noncausal_bound};
use wpcn::model::{check_feasibility, Capacity, SolverId, SystemInstance};
use wpcn::oracle::{oracle_solve, OracleConfig};
use wpcn::sim::{run_sweep, uniform, write_csv, PeakPowerRule, SweepResult, SweepSpec};

#[derive(Parser)]
#[command(
    name = "wpcn",
    about = "Sum-rate-optimal energy and time allocation for wireless-powered networks",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a single instance from a JSON file and print the report as JSON
    Solve {
        instance: PathBuf,
        #[arg(long, default_value = "alg1", value_parser = SolverId::from_str)]
        solver: SolverId,
    },
    /// Run a Monte-Carlo sweep described by a JSON spec file
    Sweep {
        spec: PathBuf,
        /// CSV output path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a built-in experiment preset
    Reproduce {
        figure: Figure,
        #[arg(long, default_value_t = 2000)]
        draws: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// CSV output path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-check the analytic solvers against the brute-force oracle
    Verify {
        #[arg(long, default_value_t = 20)]
        instances: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Figure {
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve { instance, solver } => cmd_solve(&instance, solver),
        Command::Sweep { spec, out } => cmd_sweep(&spec, out.as_deref()),
        Command::Reproduce {
            figure,
            draws,
            seed,
            out,
        } => cmd_reproduce(figure, draws, seed, out.as_deref()),
        Command::Verify { instances, seed } => cmd_verify(instances, seed),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn cmd_solve(path: &std::path::Path, solver: SolverId) -> wpcn::error::Result<ExitCode> {
    let text = fs::read_to_string(path)?;
    let instance: SystemInstance<f64> = serde_json::from_str(&text)?;
    let report = match solver {
        SolverId::Alg1 => solve_infinite(&instance)?,
        SolverId::Alg2 => solve_finite(&instance, DEFAULT_TOL, DEFAULT_MAX_ITER)?,
        SolverId::EqualPower => solve_equal_power(&instance)?,
        SolverId::EqualTime => solve_equal_time(&instance)?,
        SolverId::NoncausalBound => solve_noncausal_bound(&instance, &OracleConfig::default())?,
        SolverId::Oracle => oracle_solve(&instance, &OracleConfig::default(), false)?,
    };
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(ExitCode::SUCCESS)
}

fn emit(
    result: &SweepResult,
    comments: &[String],
    out: Option<&std::path::Path>,
) -> wpcn::error::Result<ExitCode> {
    match out {
        Some(path) => {
            let mut f = fs::File::create(path)?;
            write_csv(result, comments, &mut f)?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write_csv(result, comments, &mut lock)?;
            lock.flush()?;
        }
    }
    if result.failures.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        for f in &result.failures {
            eprintln!(
                "solver failure: {} K={} PA={} dBm B={:?} seed={} draw={}: {}",
                f.solver, f.k, f.pa_dbm, f.b_uj, f.seed, f.draw_index, f.message
            );
        }
        Ok(ExitCode::from(1))
    }
}

fn cmd_sweep(path: &std::path::Path, out: Option<&std::path::Path>) -> wpcn::error::Result<ExitCode> {
    let text = fs::read_to_string(path)?;
    let spec: SweepSpec = serde_json::from_str(&text)?;
    let result = run_sweep(&spec)?;
    emit(&result, &[], out)
}

const PA_GRID: [f64; 5] = [10.0, 15.0, 20.0, 25.0, 30.0];

fn preset(figure: Figure, draws: u32, seed: u64) -> (Vec<SweepSpec>, Vec<String>) {
    let base = |pa: Vec<f64>, pp: PeakPowerRule, k: Vec<usize>, b: Vec<Capacity<f64>>, solvers: Vec<SolverId>| {
        SweepSpec {
            k_values: k,
            pa_dbm: pa,
            pp_rule: pp,
            b_uj: b,
            num_draws: draws,
            solvers,
            seed,
            pathloss_db: 30.0,
            harvest_eff: 0.7,
            noise_dbm: -50.0,
        }
    };
    match figure {
        Figure::Fig4 => (
            vec![base(
                PA_GRID.to_vec(),
                PeakPowerRule::MultipleOfAvg(5.0),
                vec![3, 5],
                vec![Capacity::Unbounded],
                vec![SolverId::Alg1, SolverId::EqualPower, SolverId::NoncausalBound],
            )],
            vec![
                "preset fig4: P_P = 5 P_A, K in {3,5}, unbounded storage".into(),
                "noncausal bound omitted at K = 5 (brute-force oracle limited to K <= 4)".into(),
            ],
        ),
        Figure::Fig5 => (
            vec![base(
                PA_GRID.to_vec(),
                PeakPowerRule::MultipleOfAvg(2.0),
                vec![3],
                vec![
                    Capacity::Finite(10.0),
                    Capacity::Finite(50.0),
                    Capacity::Unbounded,
                ],
                vec![SolverId::Alg1, SolverId::Alg2, SolverId::EqualTime],
            )],
            vec![
                "preset fig5: K = 3, P_P = 2 P_A, B in {10, 50, unbounded} uJ".into(),
                "B set {10, 50} uJ is this preset's choice; source caption leaves it open".into(),
            ],
        ),
        Figure::Fig6 => {
            let mk = |mult: f64| {
                base(
                    PA_GRID.to_vec(),
                    PeakPowerRule::MultipleOfAvg(mult),
                    vec![5],
                    vec![Capacity::Finite(50.0)],
                    vec![SolverId::Alg2, SolverId::EqualTime],
                )
            };
            (
                vec![mk(2.0), mk(5.0)],
                vec!["preset fig6: K = 5, B = 50 uJ, P_P in {2, 5} P_A".into()],
            )
        }
        Figure::Fig7 => (
            vec![base(
                PA_GRID.to_vec(),
                PeakPowerRule::MultipleOfAvg(5.0),
                vec![3, 5, 7],
                vec![Capacity::Finite(50.0)],
                vec![SolverId::Alg2, SolverId::EqualTime],
            )],
            vec!["preset fig7: P_P = 5 P_A, B = 50 uJ, K in {3, 5, 7}".into()],
        ),
        Figure::Fig8 => (
            vec![base(
                vec![20.0],
                PeakPowerRule::MultipleOfAvg(2.0),
                vec![3],
                vec![
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
                vec![SolverId::Alg2, SolverId::EqualTime],
            )],
            vec![
                "preset fig8: P_A = 20 dBm, P_P = 2 P_A, K = 3, storage sweep in uJ".into(),
                "B grid {10..300, unbounded} uJ is this preset's choice".into(),
            ],
        ),
    }
}

fn cmd_reproduce(
    figure: Figure,
    draws: u32,
    seed: u64,
    out: Option<&std::path::Path>,
) -> wpcn::error::Result<ExitCode> {
    let (specs, mut comments) = preset(figure, draws, seed);
    comments.push(format!("draws = {draws}, seed = {seed}"));
    let mut merged = SweepResult {
        rows: Vec::new(),
        failures: Vec::new(),
    };
    for spec in &specs {
        let result = run_sweep(spec)?;
        merged.rows.extend(result.rows);
        merged.failures.extend(result.failures);
    }
    emit(&merged, &comments, out)
}

fn cmd_verify(instances: u32, seed: u64) -> wpcn::error::Result<ExitCode> {
    if instances == 0 {
        println!("verify: 0 checks run (trivially passing)");
        return Ok(ExitCode::SUCCESS);
    }

    let mut failures = 0u32;
    let mut report = |name: &str, ok: bool| {
        println!("{} {name}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            failures += 1;
        }
    };

    let mut oracle_ok = true;
    let mut dominance_ok = true;
    let mut feasible_ok = true;
    let mut finite_ok = true;
    for i in 0..instances as u64 {
        let u = |slot: u64| uniform(seed, i, slot, 0);
        let k = 1 + (u(0) * 3.0) as usize; // K in {1,2,3}
        let pa = 0.1 + 0.8 * u(1);
        let pp = pa * (2.0 + 8.0 * u(2));
        let snrs: Vec<f64> = (0..k as u64).map(|j| 0.5 + 4.0 * uniform(seed, i, 10 + j, 1)).collect();
        let inst = SystemInstance::new(
            pa,
            pp,
            vec![1.0; k],
            vec![1.0; k],
            snrs,
            vec![1.0; k],
            vec![Capacity::Unbounded; k],
        )?;

        let opt = solve_infinite(&inst)?;
        let oracle = oracle_solve(&inst, &OracleConfig::default(), false)?;
        if (opt.sum_rate_nats - oracle.sum_rate_nats).abs() > 1e-3 * oracle.sum_rate_nats {
            oracle_ok = false;
        }
        let ep = solve_equal_power(&inst)?;
        let et = solve_equal_time(&inst)?;
        let bound = solve_noncausal_bound(&inst, &OracleConfig::coarse())?;
        let slack = 1e-6 * (1.0 + opt.sum_rate_nats);
        if !(et.sum_rate_nats <= opt.sum_rate_nats + slack
            && ep.sum_rate_nats <= opt.sum_rate_nats + slack
            && opt.sum_rate_nats <= bound.sum_rate_nats + 1e-4 * (1.0 + opt.sum_rate_nats))
        {
            dominance_ok = false;
        }
        if !check_feasibility(&inst, &opt.allocation, 1e-8)?.is_feasible() {
            feasible_ok = false;
        }

        let mut fin = inst.clone();
        fin.capacity = (0..k)
            .map(|j| Capacity::Finite(1e3 * fin.harvest_eff[j] * fin.dl_gain[j] * pa))
            .collect();
        let alg2 = solve_finite(&fin, 1e-6, 4000)?;
        if (alg2.sum_rate_nats - opt.sum_rate_nats).abs() > 1e-3 * (1.0 + opt.sum_rate_nats)
            || !check_feasibility(&fin, &alg2.allocation, 1e-7)?.is_feasible()
        {
            finite_ok = false;
        }
    }
    report(
        &format!("analytic solver matches brute-force oracle ({instances} instances)"),
        oracle_ok,
    );
    report("baselines never beat the optimum; optimum never beats the bound", dominance_ok);
    report("optimal allocations are feasible", feasible_ok);
    report("huge finite storage agrees with the unbounded solver", finite_ok);

    if failures == 0 {
        println!("verify: all checks passed");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("verify: {failures} check(s) failed");
        Ok(ExitCode::from(1))
    }
}
