//! Invariant suite run by `entangle selftest`. Checks run on worker threads,
//! each on its own random substream, and are reported in a fixed order.

use std::fmt::Write as _;
use std::thread;

use entangle::format::{parse_state, write_state};
use entangle::linalg::partial_trace;
use entangle::locc::{recurrence_map, recurrence_step_exact};
use entangle::measures::{concurrence_2q, concurrence_pure, singlet_fraction};
use entangle::nonlocality::{bell_chsh_value, ChshSettings};
use entangle::rng::{stream, Rng};
use entangle::separability::{battery, check_ppt, check_reduction, check_two_qubit_det, CriterionKind, Verdict};
use entangle::states::{isotropic, random_density, random_pure, random_separable, werner, State};
use entangle::Partition;
use serde_json::json;

use crate::commands::{CliResult, Output};
use crate::report::digest;

struct Check {
    name: &'static str,
    pass: bool,
    detail: String,
}

type CheckFn = fn(&mut Rng, usize) -> entangle::Result<(bool, String)>;

fn soundness(rng: &mut Rng, trials: usize) -> entangle::Result<(bool, String)> {
    let shapes: [&[usize]; 4] = [&[2, 2], &[2, 3], &[3, 3], &[2, 2, 2]];
    let criteria = CriterionKind::defaults();
    let mut hits = 0;
    for i in 0..trials {
        let rho = random_separable(shapes[i % shapes.len()], 1 + i % 6, rng)?;
        let r = battery(&State::Mixed(rho), &criteria, None)?;
        hits += usize::from(r.verdict == Verdict::Entangled);
    }
    Ok((hits == 0, format!("{hits} false detections in {trials} separable states")))
}

fn monogamy(rng: &mut Rng, trials: usize) -> entangle::Result<(bool, String)> {
    let cut = Partition::bipartition(&[0], 3)?;
    let mut worst = f64::INFINITY;
    for _ in 0..trials {
        let psi = random_pure(&[2, 2, 2], rng)?;
        let rho = psi.density();
        let ab = concurrence_2q(&partial_trace(&rho, &[0, 1])?)?;
        let ac = concurrence_2q(&partial_trace(&rho, &[0, 2])?)?;
        worst = worst.min(concurrence_pure(&psi, &cut)?.powi(2) - ab * ab - ac * ac);
    }
    Ok((worst >= -1e-8, format!("minimum CKW slack {worst:.3e}")))
}

fn recurrence(_: &mut Rng, _: usize) -> entangle::Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for i in 0..9 {
        let f = 0.55 + 0.05 * i as f64;
        let step = recurrence_step_exact(&isotropic(2, f)?)?;
        worst = worst.max((singlet_fraction(&step.state)? - recurrence_map(f)).abs());
    }
    Ok((worst < 1e-10, format!("max deviation {worst:.3e}")))
}

fn werner_threshold(_: &mut Rng, _: usize) -> entangle::Result<(bool, String)> {
    let cut = Partition::bipartition(&[0], 2)?;
    let below = check_ppt(&werner(2, 0.499)?, &cut)?.verdict;
    let above = check_ppt(&werner(2, 0.501)?, &cut)?.verdict;
    let pass = below == Verdict::Separable && above == Verdict::Entangled;
    Ok((pass, format!("p = 0.499: {below}, p = 0.501: {above}")))
}

fn two_qubit_agreement(rng: &mut Rng, trials: usize) -> entangle::Result<(bool, String)> {
    let cut = Partition::bipartition(&[0], 2)?;
    let mut bad = 0;
    for i in 0..trials {
        let rho = random_density(&[2, 2], 1 + i % 4, rng)?;
        let p = check_ppt(&rho, &cut)?.verdict;
        bad += usize::from(p != check_two_qubit_det(&rho)?.verdict || p != check_reduction(&rho, &cut)?.verdict);
    }
    Ok((bad == 0, format!("{bad} disagreements in {trials} states")))
}

fn tsirelson(rng: &mut Rng, trials: usize) -> entangle::Result<(bool, String)> {
    let mut best: f64 = 0.0;
    for _ in 0..trials {
        let rho = random_density(&[2, 2], 1, rng)?;
        best = best.max(bell_chsh_value(&rho, &ChshSettings::random(rng))?.abs());
    }
    Ok((best <= 2.0 * 2f64.sqrt() + 1e-9, format!("largest CHSH value {best:.9}")))
}

fn file_round_trip(rng: &mut Rng, trials: usize) -> entangle::Result<(bool, String)> {
    let mut bad = 0;
    for i in 0..trials.min(100) {
        let s = State::Mixed(random_density(&[2, 3], 1 + i % 6, rng)?);
        let back = parse_state(&write_state(&s))?;
        bad += usize::from(back.density().matrix() != s.density().matrix());
    }
    Ok((bad == 0, format!("{bad} lossy round trips")))
}

const CHECKS: [(&str, CheckFn); 7] = [
    ("soundness", soundness),
    ("monogamy", monogamy),
    ("recurrence", recurrence),
    ("werner-threshold", werner_threshold),
    ("two-qubit-agreement", two_qubit_agreement),
    ("tsirelson", tsirelson),
    ("file-round-trip", file_round_trip),
];

pub fn run(seed: u64, trials: usize) -> CliResult<Output> {
    let outcomes: Vec<entangle::Result<Check>> = thread::scope(|scope| {
        let handles: Vec<_> = CHECKS
            .iter()
            .enumerate()
            .map(|(i, &(name, check))| {
                scope.spawn(move || {
                    let mut rng = stream(seed, i as u64);
                    check(&mut rng, trials).map(|(pass, detail)| Check { name, pass, detail })
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("self-test worker panicked")).collect()
    });
    let checks: Vec<Check> = outcomes.into_iter().collect::<Result<_, _>>()?;

    let mut text = String::new();
    for c in &checks {
        let _ = writeln!(text, "{:<20} {}  {}", c.name, if c.pass { "PASS" } else { "FAIL" }, c.detail);
    }
    let failures = checks.iter().filter(|c| !c.pass).count();
    let _ = writeln!(text, "{} of {} checks passed", checks.len() - failures, checks.len());
    let list: Vec<_> = checks.iter().map(|c| json!({ "check": c.name, "pass": c.pass, "detail": c.detail })).collect();
    let results = json!({ "seed": seed, "trials": trials, "checks": list, "failures": failures });
    let input = digest(format!("selftest\u{0}{seed}\u{0}{trials}").as_bytes());
    let mut out = Output::new("selftest", input, results, text);
    out.failures = failures;
    Ok(out)
}
