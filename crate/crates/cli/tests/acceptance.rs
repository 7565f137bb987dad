//! Acceptance criteria, one line per criterion. Runs as a plain binary so
//! the summary is always printed; exits non-zero if any criterion fails.

use std::process::Command;
use std::time::Instant;

use cevian::constants::{metallic, metallic_cf, metallic_hyperbolic, theta, theta_cf, theta_hyperbolic};
use cevian::harness::{well_conditioned_simplex, Suite, TrialPlan};
use cevian::optimize::{
    maximize_corner, maximize_corner_with, maximize_slice, slice_objective,
    slice_objective_derivative,
};
use cevian::ratios::{audit_bound, theorem1_bound, theorem2_value};
use cevian::simplex::build_configuration;
use cevian::stream::{substream, Purpose};
use cevian::{run_suite, run_suite_with, BarycentricPoint, Schedule};
use rand::Rng;
use serde_json::Value;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn c1_constants() -> Outcome {
    let t2 = (theta(2).unwrap() - (3.0 - 5f64.sqrt()) / 2.0).abs();
    let t3 = (theta(3).unwrap() - (2.0 - 3f64.sqrt())).abs();
    let mut worst = 0.0_f64;
    for n in 2..=10 {
        let t = theta(n).unwrap();
        let cf = theta_cf(n, 40).unwrap();
        let hyp = theta_hyperbolic(n).unwrap();
        worst = worst.max((t - cf).abs()).max((t - hyp).abs()).max((cf - hyp).abs());
    }
    for n in 1..=10 {
        let p = metallic(n).unwrap();
        let cf = metallic_cf(n, 40).unwrap();
        let hyp = metallic_hyperbolic(n).unwrap();
        worst = worst.max((p - cf).abs()).max((p - hyp).abs()).max((cf - hyp).abs());
    }
    outcome(
        t2 <= 1e-12 && t3 <= 1e-12 && worst <= 1e-10,
        format!("|θ2 err| {t2:.1e}, |θ3 err| {t3:.1e}, worst three-way gap {worst:.1e}"),
    )
}

fn c2_special_cases() -> Outcome {
    let e2 = rel(theorem2_value(2).unwrap().value, 32.0 / (5f64.sqrt() + 1.0).powi(5));
    let e3 = rel(theorem2_value(3).unwrap().value, 4.0 / (1.0 + 3f64.sqrt()).powi(6));
    outcome(
        e2 <= 1e-12 && e3 <= 1e-12,
        format!("rel err n=2 {e2:.1e}, n=3 {e3:.1e}"),
    )
}

fn c3_theorem1() -> Outcome {
    let started = Instant::now();
    let mut all = true;
    let mut notes = Vec::new();
    for n in 2..=6 {
        let r = run_suite(&TrialPlan::new(Suite::Theorem1, n, 100_000, 1).with_tol(1e-12)).unwrap();
        all &= r.passed && r.max_ratio_observed <= r.bound + 1e-12;
        notes.push(format!("n={n} max {:.6e}/{:.6e}", r.max_ratio_observed, r.bound));
    }
    // Equality at the centroid, by determinants on random simplices.
    let mut rng = substream(3, Purpose::Trial, 0);
    let mut centroid_gap = 0.0_f64;
    for n in 2..=6 {
        for _ in 0..100 {
            let s = well_conditioned_simplex(n, &mut rng).unwrap();
            let cfg = build_configuration(&s, &BarycentricPoint::centroid(n).unwrap()).unwrap();
            let ratio = cfg.cevian_volume() / s.volume();
            centroid_gap = centroid_gap.max((ratio - theorem1_bound(n).unwrap().value).abs());
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    all &= centroid_gap <= 1e-12;
    outcome(
        all,
        format!("{}; centroid gap {centroid_gap:.1e}; {elapsed:.1}s", notes.join(", ")),
    )
}

fn c4_eq2() -> Outcome {
    let started = Instant::now();
    let mut all = true;
    let mut worst = 0.0_f64;
    for n in 2..=5 {
        let r = run_suite(&TrialPlan::new(Suite::Eq2, n, 10_000, 4).with_tol(1e-9)).unwrap();
        all &= r.passed;
        worst = worst.max(r.max_ratio_observed);
    }
    outcome(
        all,
        format!("worst rel err {worst:.2e} (tol 1e-9); {:.1}s", started.elapsed().as_secs_f64()),
    )
}

fn c5_decomposition() -> Outcome {
    // Same seed as the bound check, so the same configurations are drawn.
    let mut all = true;
    let mut worst = 0.0_f64;
    for n in 2..=6 {
        let r = run_suite(&TrialPlan::new(Suite::Decomposition, n, 100_000, 1).with_tol(1e-9))
            .unwrap();
        all &= r.passed;
        worst = worst.max(r.max_ratio_observed);
    }
    outcome(
        all,
        format!("closed-form identity within 1e-12 on every trial; worst combined discrepancy {worst:.2e}"),
    )
}

fn c6_moebius() -> Outcome {
    let r = run_suite(&TrialPlan::new(Suite::Moebius, 2, 100_000, 6).with_tol(1e-10)).unwrap();
    outcome(
        r.passed,
        format!("max |residual|/S³ {:.2e} (tol 1e-10)", r.max_ratio_observed),
    )
}

fn c7_optimization() -> Outcome {
    let started = Instant::now();
    let mut all = true;
    let (mut slice_dev, mut coord_dev, mut value_dev) = (0.0_f64, 0.0_f64, 0.0_f64);
    for n in 2..=8 {
        let t = theta(n).unwrap();
        let best = theorem2_value(n).unwrap().value;
        let s = maximize_slice(n, 1e-10).unwrap();
        slice_dev = slice_dev.max((s.argmax - t).abs());
        let c = maximize_corner(n, 16, 1e-10, 7).unwrap();
        let w = c.argmax.weights();
        for x in &w[..n] {
            coord_dev = coord_dev.max((x - t).abs());
        }
        coord_dev = coord_dev.max((w[n] - (1.0 - n as f64 * t)).abs());
        value_dev = value_dev.max((c.value - best).abs());
        all &= c.converged && s.converged;
    }
    all &= slice_dev <= 1e-8 && coord_dev <= 1e-5 && value_dev <= 1e-9;
    outcome(
        all,
        format!(
            "1-D |x-θ| {slice_dev:.1e}, simplex coord {coord_dev:.1e}, value {value_dev:.1e}; {:.1}s",
            started.elapsed().as_secs_f64()
        ),
    )
}

fn c8_audit() -> Outcome {
    let a2 = audit_bound(2).unwrap();
    let a3 = audit_bound(3).unwrap();
    let mut ok = rel(a2.ratio, 9.0) <= 1e-9 && rel(a3.ratio, 4.0) <= 1e-9;
    ok &= rel(a2.direct_value, 32.0 / (5f64.sqrt() + 1.0).powi(5)) <= 1e-12;
    ok &= rel(a3.direct_value, 4.0 / (1.0 + 3f64.sqrt()).powi(6)) <= 1e-12;
    let mut worst = 0.0_f64;
    for n in 2..=10 {
        let a = audit_bound(n).unwrap();
        worst = worst.max(rel(a.direct_times_power(), ((n - 1) * (n - 1)) as f64));
    }
    ok &= worst <= 1e-10;

    // The CLI table reports the same numbers.
    let out = Command::new(env!("CARGO_BIN_EXE_cevian"))
        .args(["audit-bounds", "--n-max", "10", "--format", "json"])
        .output()
        .expect("run cevian");
    let rows: Value = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    let cli_ok = out.status.success()
        && rows.as_array().is_some_and(|rows| {
            rows.len() == 9
                && rows.iter().all(|r| {
                    let n = r["n"].as_u64().unwrap_or(0) as f64;
                    let dtp = r["direct_times_power"].as_f64().unwrap_or(f64::NAN);
                    rel(dtp, (n - 1.0) * (n - 1.0)) <= 1e-10 && r["flagged"] == Value::Bool(true)
                })
                && rel(rows[0]["ratio"].as_f64().unwrap_or(0.0), 9.0) <= 1e-9
                && rel(rows[1]["ratio"].as_f64().unwrap_or(0.0), 4.0) <= 1e-9
        });
    outcome(
        ok && cli_ok,
        format!(
            "ratio n=2 {:.12}, n=3 {:.12}; max rel err vs (n-1)² {worst:.1e}; cli table {}",
            a2.ratio,
            a3.ratio,
            if cli_ok { "ok" } else { "MISMATCH" }
        ),
    )
}

fn c9_derivative() -> Outcome {
    let mut rng = substream(9, Purpose::Trial, 0);
    let mut worst = 0.0_f64;
    for _ in 0..1000 {
        let n = rng.random_range(2..=10usize);
        let upper = 1.0 / n as f64;
        let x = rng.random_range(0.05 * upper..0.95 * upper);
        let h = 1e-6 * x;
        let fd = (slice_objective(x + h, n).unwrap() - slice_objective(x - h, n).unwrap()) / (2.0 * h);
        worst = worst.max(rel(fd, slice_objective_derivative(x, n).unwrap()));
    }
    outcome(worst <= 1e-6, format!("worst rel err {worst:.2e} over 1000 points"))
}

fn cli_stdout(args: &[&str]) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_cevian"))
        .args(args)
        .output()
        .expect("run cevian");
    (out.status.code(), out.stdout)
}

fn c10_reproducibility() -> Outcome {
    let mut ok = true;
    for suite in Suite::ALL {
        let n = if suite == Suite::Moebius { 2 } else { 4 };
        let plan = TrialPlan::new(suite, n, 2_000, 10);
        let a = run_suite_with(&plan, Schedule::Parallel).unwrap();
        let b = run_suite_with(&plan, Schedule::Parallel).unwrap();
        let c = run_suite_with(&plan, Schedule::Serial).unwrap();
        ok &= a.same_outcome(&b) && a.same_outcome(&c);
    }
    for n in [2, 5] {
        let a = maximize_corner_with(n, 16, 1e-10, 10, Schedule::Parallel).unwrap();
        let b = maximize_corner_with(n, 16, 1e-10, 10, Schedule::Serial).unwrap();
        ok &= a == b;
    }
    let verify = [
        "verify", "--suite", "eq2", "--n", "3", "--trials", "5000", "--seed", "10", "--format", "json",
    ];
    let optimize = ["optimize", "--n", "4", "--seed", "10", "--format", "json"];
    let mut cli_ok = true;
    for args in [&verify[..], &optimize[..]] {
        let first = cli_stdout(args);
        let again = cli_stdout(args);
        let mut serial_args = args.to_vec();
        serial_args.push("--serial");
        let serial = cli_stdout(&serial_args);
        cli_ok &= first.0 == Some(0) && first == again && first == serial;
    }
    outcome(
        ok && cli_ok,
        format!(
            "library reports {}, cli byte-identical {}",
            if ok { "identical" } else { "DIFFER" },
            if cli_ok { "yes" } else { "NO" }
        ),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("constants: θ2, θ3 and three-way agreement", c1_constants),
        ("closed-form f(θn) for n = 2, 3", c2_special_cases),
        ("cevian volume bound n^-n", c3_theorem1),
        ("corner-ratio formula vs determinants", c4_eq2),
        ("decomposition identity", c5_decomposition),
        ("Möbius relation", c6_moebius),
        ("optimization recovers θn", c7_optimization),
        ("bound audit against direct f(θn)", c8_audit),
        ("derivative vs central differences", c9_derivative),
        ("reproducibility", c10_reproducibility),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.passed {
            failed += 1;
        }
        println!(
            "[{}] {:>2}. {name}: {}",
            if o.passed { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
    }
    println!("{} of {} acceptance criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
