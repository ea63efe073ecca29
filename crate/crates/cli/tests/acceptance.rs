//! Acceptance criteria, one line each. Runs as its own binary so the summary
//! is printed by `cargo test`; exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use hlzeta::hypfun::{eval_m4, m4_closed_form};
use hlzeta::oracle::oracle_phi;
use hlzeta::quad::{eval_phi_beta_integral_1d, eval_phi_beta_integral_2d, eval_phi_integral_m4};
use hlzeta::zeta::{eval_phi_diagonal, eval_phi_double_series, eval_phi_limit_case, summation_formula_lhs};
use hlzeta::{Complex64, EvalPoint, LimitVariant, ParameterSet, QuadConfig, SeriesConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Tolerances and runtime budgets.
const REDUCTION_LN2_TOL: f64 = 1e-10;
const REDUCTION_ZETA2_TOL: f64 = 1e-8;
const REDUCTION_BUDGET: Duration = Duration::from_secs(1);
const M4_CLOSED_REL_TOL: f64 = 1e-11;
const M4_CLOSED_BUDGET: Duration = Duration::from_secs(5);
const THM1_TOL: f64 = 1e-8;
const THM1_BUDGET: Duration = Duration::from_secs(30);
const BETA_1D_TOL: f64 = 1e-7;
const BETA_2D_TOL: f64 = 1e-6;
const BETA_BUDGET: Duration = Duration::from_secs(60);
const SUMMATION_TOL: f64 = 1e-8;
const SUMMATION_TERMS: usize = 60;
const SUMMATION_BUDGET: Duration = Duration::from_secs(30);
const DIAGONAL_TOL: f64 = 1e-10;
const DIAGONAL_BUDGET: Duration = Duration::from_secs(30);
const LIMIT_RATIO: (f64, f64) = (50.0, 200.0);
const LIMIT_BUDGET: Duration = Duration::from_secs(30);
const SWAP_REL_TOL: f64 = 1e-12;
const SWAP_BUDGET: Duration = Duration::from_secs(10);

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

fn tight() -> SeriesConfig {
    SeriesConfig::with_tol(1e-15)
}

fn series(p: &ParameterSet, pt: &EvalPoint) -> Complex64 {
    eval_phi_double_series(p, pt, &tight()).unwrap().value
}

fn generic() -> ParameterSet {
    ParameterSet::real(2.0, 1.5, 0.5, 1.2, 0.8, 3.0, 2.2, 1.7)
}

/// Real parameters in [0.5, 3], arguments of modulus at most `modulus`.
fn random_point(rng: &mut ChaCha8Rng, modulus: f64) -> (ParameterSet, EvalPoint) {
    let mut u = |lo: f64, hi: f64| rng.gen_range(lo..hi);
    let p = ParameterSet::real(
        u(0.5, 3.0),
        u(0.5, 3.0),
        u(0.5, 3.0),
        u(0.5, 3.0),
        u(0.5, 3.0),
        u(0.5, 3.0),
        u(0.5, 3.0),
        u(0.5, 3.0),
    );
    let pt = EvalPoint::real(u(-modulus, modulus), u(-modulus, modulus), u(0.5, 3.0), u(0.5, 3.0));
    (p, pt)
}

type Check = fn() -> Outcome;

struct Outcome {
    pass: bool,
    detail: String,
}

fn within_budget(ok: bool, elapsed: Duration, budget: Duration, detail: String) -> Outcome {
    let in_time = elapsed <= budget;
    Outcome {
        pass: ok && in_time,
        detail: format!("{detail}; {:.2}s of {}s", elapsed.as_secs_f64(), budget.as_secs()),
    }
}

fn reductions() -> Outcome {
    let p = ParameterSet::real(1.3, 1.0, 1.0, 0.7, 1.6, 1.3, 0.7, 1.6);
    let start = Instant::now();
    let ln2 = series(&p, &EvalPoint::real(0.5, 0.0, 1.0, 1.0));
    let first = start.elapsed();
    let start = Instant::now();
    let zeta2 = series(&p, &EvalPoint::real(1.0, 0.0, 2.0, 1.0));
    let second = start.elapsed();
    let (e1, e2) = ((ln2.re - 2.0 * 2f64.ln()).abs() + ln2.im.abs(), (zeta2.re - PI * PI / 6.0).abs() + zeta2.im.abs());
    within_budget(
        e1 <= REDUCTION_LN2_TOL && e2 <= REDUCTION_ZETA2_TOL && first.max(second) <= REDUCTION_BUDGET,
        first.max(second),
        REDUCTION_BUDGET,
        format!("|Φ - 2ln2| = {e1:.1e}, |Φ - π²/6| = {e2:.1e}"),
    )
}

fn m4_closed_form_grid() -> Outcome {
    const GRID: [f64; 4] = [0.1, 0.3, 0.5, 0.7];
    const EXPONENTS: [f64; 3] = [0.5, 1.0, 2.5];
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for &x in &GRID {
        for &y in &GRID {
            for &eta in &EXPONENTS {
                for &eta_p in &EXPONENTS {
                    let p = ParameterSet::real(1.7, eta, eta_p, 2.3, 0.6, 1.7, 2.3, 0.6);
                    let s = eval_m4(&p, c(x), c(y), &SeriesConfig::with_tol(1e-16)).unwrap().value;
                    worst = worst.max(rel(s, m4_closed_form(c(eta), c(eta_p), c(x), c(y)).unwrap()));
                }
            }
        }
    }
    within_budget(worst <= M4_CLOSED_REL_TOL, start.elapsed(), M4_CLOSED_BUDGET, format!("worst relative {worst:.1e} over 144 points"))
}

fn m4_integral() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let (p, pt) = random_point(&mut rng, 0.5);
        let q = eval_phi_integral_m4(&p, &pt, &QuadConfig::with_tol(1e-10), &SeriesConfig::default()).unwrap().value;
        worst = worst.max((q - series(&p, &pt)).norm());
    }
    within_budget(worst <= THM1_TOL, start.elapsed(), THM1_BUDGET, format!("worst |quad - series| = {worst:.1e} on 10 points"))
}

fn beta_integrals() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let start = Instant::now();
    let (mut worst_1d, mut worst_2d): (f64, f64) = (0.0, 0.0);
    for _ in 0..5 {
        let (mut p, pt) = random_point(&mut rng, 0.5);
        p.nu = p.mu + rng.gen_range(0.3..1.5);
        let want = series(&p, &pt);
        let one = eval_phi_beta_integral_1d(&p, &pt, &QuadConfig::with_tol(1e-9), &SeriesConfig::default()).unwrap();
        let two = eval_phi_beta_integral_2d(&p, &pt, &QuadConfig::with_tol(1e-8)).unwrap();
        worst_1d = worst_1d.max((one.value - want).norm());
        worst_2d = worst_2d.max((two.value - want).norm());
    }
    within_budget(
        worst_1d <= BETA_1D_TOL && worst_2d <= BETA_2D_TOL,
        start.elapsed(),
        BETA_BUDGET,
        format!("worst 1D {worst_1d:.1e}, 2D {worst_2d:.1e} on 5 points"),
    )
}

fn summation_formula() -> Outcome {
    let p = generic();
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for &(x, a) in &[(0.3, 1.5), (0.5, 2.0), (-0.4, 1.2)] {
        let pt = EvalPoint::real(0.4, 0.3, 2.0, a);
        let lhs = summation_formula_lhs(&p, &pt, c(x), SUMMATION_TERMS, &tight()).unwrap().value;
        worst = worst.max((lhs - series(&p, &pt.with_a(c(a - x)))).norm());
    }
    within_budget(worst <= SUMMATION_TOL, start.elapsed(), SUMMATION_BUDGET, format!("worst residual {worst:.1e} at r ≤ {SUMMATION_TERMS}"))
}

fn diagonal_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut worst_tail: f64 = 0.0;
    for _ in 0..20 {
        let (p, pt) = random_point(&mut rng, 0.6);
        let s = series(&p, &pt);
        let d = eval_phi_diagonal(&p, &pt, &tight()).unwrap().value;
        let o = oracle_phi(&p, &pt, 160, 160).unwrap();
        worst_tail = worst_tail.max(o.tail_bound + o.rounding_bound);
        worst = worst.max((s - d).norm()).max((s - o.value).norm()).max((d - o.value).norm());
    }
    within_budget(
        worst <= DIAGONAL_TOL && worst_tail < DIAGONAL_TOL,
        start.elapsed(),
        DIAGONAL_BUDGET,
        format!("worst pairwise {worst:.1e}, oracle certified to {worst_tail:.1e}, 20 points"),
    )
}

fn limit_cases() -> Outcome {
    let p = generic();
    let pt = EvalPoint::real(0.4, 0.3, 2.0, 1.5);
    let start = Instant::now();
    let mut ratios = Vec::new();
    for variant in [LimitVariant::EtaPrimeInf, LimitVariant::MuInf, LimitVariant::MuAndEtaPrimeInf] {
        let limit = eval_phi_limit_case(&p, variant, &pt, &tight()).unwrap().value;
        let errs: Vec<f64> = [1e2, 1e4, 1e6]
            .iter()
            .map(|&big| {
                let (q, z, t) = match variant {
                    LimitVariant::EtaPrimeInf => (ParameterSet { eta_p: c(big), ..p }, pt.z, pt.t / big),
                    LimitVariant::MuInf => (ParameterSet { mu: c(big), ..p }, pt.z / big, pt.t / big),
                    _ => (ParameterSet { mu: c(big), eta_p: c(big), ..p }, pt.z / big, pt.t / (big * big)),
                };
                (series(&q, &EvalPoint { z, t, ..pt }) - limit).norm()
            })
            .collect();
        ratios.extend(errs.windows(2).map(|w| w[0] / w[1]));
    }
    let ok = ratios.iter().all(|r| (LIMIT_RATIO.0..=LIMIT_RATIO.1).contains(r));
    let shown: Vec<String> = ratios.iter().map(|r| format!("{r:.1}")).collect();
    within_budget(ok, start.elapsed(), LIMIT_BUDGET, format!("successive ratios [{}]", shown.join(", ")))
}

fn swap_symmetry() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let (p, pt) = random_point(&mut rng, 0.7);
        worst = worst.max(rel(series(&p, &pt), series(&p.swapped(), &pt.swapped())));
    }
    within_budget(worst <= SWAP_REL_TOL, start.elapsed(), SWAP_BUDGET, format!("worst relative {worst:.1e} on 50 points"))
}

fn cli_contract() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_hlzeta");
    let verify = || Command::new(bin).args(["verify", "--grid", "small", "--seed", "7"]).output().unwrap();
    let (first, second) = (verify(), verify());
    let eval = Command::new(bin).args(["eval", "--z", "0", "--t", "0", "--s", "2", "--a", "4"]).output().unwrap();
    let record: serde_json::Value = serde_json::from_slice(&eval.stdout).unwrap_or_default();
    let value = record["value"]["re"].as_f64();
    let checks = [
        ("verify exits 0", first.status.code() == Some(0)),
        ("byte-identical", first.stdout == second.stdout && !first.stdout.is_empty()),
        ("eval prints 0.0625", eval.status.success() && value == Some(0.0625) && record["value"]["im"] == 0.0),
    ];
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    Outcome {
        pass: failed.is_empty(),
        detail: if failed.is_empty() {
            format!("{} verify rows, eval value {}", first.stdout.iter().filter(|&&b| b == b'\n').count(), value.unwrap())
        } else {
            format!("failed: {}", failed.join(", "))
        },
    }
}

fn main() {
    let criteria: [(&str, Check); 9] = [
        ("reduction exactness", reductions),
        ("M4 closed form", m4_closed_form_grid),
        ("M4 kernel integral", m4_integral),
        ("beta integrals", beta_integrals),
        ("summation formula", summation_formula),
        ("diagonal equivalence", diagonal_equivalence),
        ("limit cases", limit_cases),
        ("swap symmetry", swap_symmetry),
        ("CLI contract", cli_contract),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = check();
        failures += usize::from(!outcome.pass);
        println!("criterion {} {:<22} {}  ({})", i + 1, name, if outcome.pass { "PASS" } else { "FAIL" }, outcome.detail);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
