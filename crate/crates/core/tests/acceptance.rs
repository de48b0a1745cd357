//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the summary is printed whether or not anything fails.

use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::{rngs::StdRng, Rng, SeedableRng};

use thermowork::protocol::{run_protocol, BipartiteSystem};
use thermowork::rabi::{bs_ground, exact_diag_oracle, ground_state, work_report, RabiParams, WorkReport};
use thermowork::random;
use thermowork::sweep::{run_sweep, SweepConfig};
use thermowork::thermo::{free_energy, thermal_state, Temperature};
use thermowork::toymodel::{toy_closed_form, toy_to_matrices, ToyModelParams};
use thermowork::Operator;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn report(g: f64, detuning: f64) -> WorkReport {
    work_report(RabiParams::from_detuning(detuning, g).unwrap()).unwrap()
}

fn oracle_equivalence() -> Outcome {
    const N_CUT: usize = 200;
    let couplings = [0.05, 0.1, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0];
    let detunings = [-0.5, 0.0, 0.5, 1.0];
    let mut max_de = 0.0f64;
    let mut min_overlap = f64::INFINITY;
    let mut unconverged = 0;
    let start = Instant::now();
    for &d in &detunings {
        for &g in &couplings {
            let p = RabiParams::from_detuning(d, g).unwrap();
            let gs = ground_state(p).unwrap();
            let ed = exact_diag_oracle(p, N_CUT).unwrap();
            if !ed.converged {
                unconverged += 1;
            }
            max_de = max_de.max((gs.e0 - ed.energy).abs());
            min_overlap = min_overlap.min(gs.to_composite(N_CUT).dot(&ed.vector).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        max_de < 1e-8 && 1.0 - min_overlap < 1e-8 && unconverged == 0,
        format!(
            "max |dE0| = {max_de:.2e} (< 1e-8), min 1 - overlap = {:.2e} (< 1e-8), unconverged ED points = {unconverged}, {secs:.1} s",
            1.0 - min_overlap
        ),
    )
}

fn work_asymptote() -> Outcome {
    let rel = |g: f64| {
        let r = report(g, 0.0);
        ((r.work - (g * g + 0.5)) / r.work).abs()
    };
    let devs = [rel(2.0), rel(4.0), rel(6.0)];
    let pass = devs[2] < 0.02 && devs[0] > devs[1] && devs[1] > devs[2];
    outcome(
        pass,
        format!(
            "|W - (g^2 + Delta)| / W at g = 2, 4, 6: {:.3e}, {:.3e}, {:.3e} (last < 0.02, decreasing)",
            devs[0], devs[1], devs[2]
        ),
    )
}

fn efficiency_floor() -> Outcome {
    let rows = run_sweep(&SweepConfig::default()).unwrap();
    let mut min_eta = f64::INFINITY;
    let mut failures = 0;
    for row in rows.iter().filter(|r| r.g >= 0.1 && r.g <= 2.0) {
        match &row.report {
            Ok(r) => min_eta = min_eta.min(r.eta.unwrap_or(f64::NAN)),
            Err(_) => failures += 1,
        }
    }
    let low = report(0.1, 0.0).eta.unwrap();
    let high = report(6.0, 0.0).eta.unwrap();
    let pass = min_eta > 0.5 && failures == 0 && (low - 0.5).abs() < 0.05 && (high - 0.5).abs() < 0.02;
    outcome(
        pass,
        format!(
            "min eta over sweep (g in [0.1, 2]) = {min_eta:.6} (> 0.5), failed rows = {failures}, eta(0.1) = {low:.6}, eta(6) = {high:.6}"
        ),
    )
}

fn bloch_siegert() -> Outcome {
    let p = RabiParams::from_detuning(0.0, 0.1).unwrap();
    let c = ground_state(p).unwrap().c;
    let bs = bs_ground(p).unwrap();
    let head = (0..3).map(|i| (c[i] - bs[i]).abs()).fold(0.0f64, f64::max);
    let rest = c.iter().skip(3).map(|v| v.abs()).fold(0.0f64, f64::max);
    outcome(
        head < 5e-3 && rest < 5e-3,
        format!("max |c - c_BS| on first three = {head:.2e} (< 5e-3), max |c_n| beyond = {rest:.2e} (< 5e-3)"),
    )
}

fn random_toy(rng: &mut StdRng, epsilon: f64) -> ToyModelParams {
    let levels = |rng: &mut StdRng| {
        let mut v: Vec<f64> = vec![0.0];
        for _ in 0..rng.random_range(2..5) {
            let last = *v.last().unwrap();
            v.push(last + rng.random_range(0.2..2.0));
        }
        v
    };
    let a = levels(rng);
    let b = levels(rng);
    let n = rng.random_range(1..a.len());
    let m = rng.random_range(1..b.len());
    let g = rng.random_range(-1.0..0.95) * a[1].min(b[1]);
    ToyModelParams::new(a, b, n, m, g, epsilon).unwrap()
}

fn toy_exactness() -> Outcome {
    let mut rng = StdRng::seed_from_u64(2024);
    let mut max_err = 0.0f64;
    let mut degenerate_ok = true;
    for k in 0..50 {
        let eps = if k % 5 == 0 { 0.0 } else { rng.random_range(1e-3..0.5) };
        let p = random_toy(&mut rng, eps);
        let sys = toy_to_matrices(&p, p.levels_a().len(), p.levels_b().len()).unwrap();
        let l = run_protocol(&sys, Temperature::Zero).unwrap();
        let (w, eta) = toy_closed_form(&p);
        max_err = max_err.max((l.work - w).abs()).max((l.eta.unwrap() - eta).abs());
        if eps == 0.0 {
            degenerate_ok &= (l.work - p.gap() / 2.0).abs() < 1e-9;
            if p.coupling() >= 0.0 {
                degenerate_ok &= (l.eta.unwrap() - 1.0).abs() < 1e-9;
            }
        }
    }
    outcome(
        max_err < 1e-9 && degenerate_ok,
        format!("50 instances: max |protocol - closed form| = {max_err:.2e} (< 1e-9), eps = 0 halving and eta = 1: {degenerate_ok}"),
    )
}

fn protocol_invariants() -> Outcome {
    let mut rng = StdRng::seed_from_u64(6);
    let mut violations = Vec::new();
    let tol = 1e-9;
    for k in 0..200 {
        let d_a = rng.random_range(2..5);
        let d_b = rng.random_range(2..5);
        let scale = rng.random_range(0.05..2.0);
        let sys = BipartiteSystem::new(
            random::hermitian(&mut rng, d_a, 1.0),
            random::hermitian(&mut rng, d_b, 1.0),
            random::hermitian(&mut rng, d_a * d_b, scale),
        )
        .unwrap();
        let t = if k % 2 == 0 { Temperature::finite(rng.random_range(0.2..5.0)).unwrap() } else { Temperature::Zero };
        let l = run_protocol(&sys, t).unwrap();
        let decomposed = l.delta_f_a + l.delta_f_b + t.kt() * l.defect;
        let checks = [
            ("F3 <= F2", l.f3 <= l.f2 + tol),
            ("W = dF_A + dF_B + T D", (l.work - decomposed).abs() <= 1e-8 * l.f1.abs().max(l.f4.abs()).max(1.0)),
            ("W_l <= W", l.local_work <= l.work + tol),
            ("W <= -d<H_I>", l.work <= l.h_i_t2 - l.h_i_t3 + tol),
            ("D >= 0", l.defect >= -tol),
            ("eta <= 1", l.eta.is_none_or(|e| e <= 1.0 + tol)),
        ];
        for (name, ok) in checks {
            if !ok {
                violations.push(format!("system {k}: {name}"));
            }
        }
        let h = sys.total();
        let f_th = free_energy(&thermal_state(&h, t), &h, t).unwrap();
        let d = h.dim();
        for j in 0..100 {
            let rho = if j % 2 == 0 { random::density_matrix(&mut rng, d) } else { random::pure_state(&mut rng, d) };
            if free_energy(&rho, &h, t).unwrap() < f_th - tol {
                violations.push(format!("system {k}: challenger {j} beats the thermal state"));
            }
        }
    }
    outcome(
        violations.is_empty(),
        format!(
            "200 systems x (6 ledger checks + 100 challengers): {} violations{}",
            violations.len(),
            violations.first().map(|v| format!(", first: {v}")).unwrap_or_default()
        ),
    )
}

fn comonotone() -> Outcome {
    let reports: Vec<WorkReport> = (1..=20).map(|k| report(0.05 * k as f64, 0.0)).collect();
    let increasing = |f: &dyn Fn(&WorkReport) -> f64| reports.windows(2).all(|w| f(&w[1]) > f(&w[0]));
    let w_up = increasing(&|r| r.work);
    let s_up = increasing(&|r| r.entanglement_bits);
    outcome(
        w_up && s_up,
        format!("g = 0.05..1.0 at resonance: W strictly increasing: {w_up}, entanglement strictly increasing: {s_up}"),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_thermowork"))
            .args(["rabi-sweep", "--out"])
            .arg(&path)
            .status()
            .unwrap();
        (status.success(), std::fs::read(&path).unwrap_or_default())
    };
    let (ok1, a) = run("first.csv");
    let (ok2, b) = run("second.csv");
    let rows = a.iter().filter(|&&c| c == b'\n').count();
    outcome(
        ok1 && ok2 && !a.is_empty() && a == b,
        format!("two default sweeps: {} bytes, {rows} lines, identical: {}", a.len(), a == b),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("oracle equivalence", oracle_equivalence),
        ("work asymptote", work_asymptote),
        ("efficiency floor", efficiency_floor),
        ("Bloch-Siegert consistency", bloch_siegert),
        ("toy-model exactness", toy_exactness),
        ("protocol invariants", protocol_invariants),
        ("entanglement co-monotonicity", comonotone),
        ("sweep determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!("{} {}. {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
