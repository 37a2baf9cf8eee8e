//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::process::ExitCode;

use entangle::linalg::{binary_entropy, partial_trace};
use entangle::locc::{
    channel_to_state, filter_from_ppt_violation, hashing_rate, local_filter, nielsen_can_transform,
    recurrence_map, recurrence_step_exact, simulate_teleportation, state_coherent_info, vidal_probability,
    KrausChannel, TeleportMode,
};
use entangle::measures::{concurrence_2q, concurrence_constant_range, concurrence_pure, singlet_fraction};
use entangle::nonlocality::{
    avn_operator, chsh_m, ghz_avn_value, max_over_products, random_direction, random_photon_product,
    toner_monogamy, ChshSettings, AVN_LOCAL_BOUND,
};
use entangle::rng::{seeded, stream};
use entangle::separability::{
    battery, check_ppt, check_reduction, check_two_qubit_det, CriterionKind, Scope, Verdict,
};
use entangle::states::{
    aharonov, avn_hyper, chessboard, isotropic, noisy_singlet, random_density, random_pure, random_separable,
    smolin, upb_shift, werner, State,
};
use entangle::Partition;
use rand::Rng;
use rand_distr::{Distribution, Exp1};

const SEED: u64 = 2024;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn entangled(report: Verdict) -> bool {
    report == Verdict::Entangled
}

fn ab() -> Partition {
    Partition::bipartition(&[0], 2).unwrap()
}

/// First grid point at which `fires` becomes true.
fn first_crossing(lo: f64, hi: f64, step: f64, fires: impl Fn(f64) -> bool) -> Option<f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n).map(|i| lo + i as f64 * step).find(|&x| fires(x))
}

fn werner_thresholds() -> Outcome {
    let ppt = first_crossing(0.0, 1.0, 1e-3, |p| entangled(check_ppt(&werner(2, p).unwrap(), &ab()).unwrap().verdict));
    let chsh = first_crossing(0.0, 1.0, 1e-3, |p| chsh_m(&noisy_singlet(p).unwrap()).unwrap() > 1.0);
    let ok = |x: Option<f64>, t: f64| x.is_some_and(|x| (x - t).abs() <= 2e-3);
    let target = 0.5f64.sqrt();
    outcome(
        ok(ppt, 0.5) && ok(chsh, target),
        format!("PPT flips at p = {ppt:?} (expect 0.5), M > 1 from p = {chsh:?} (expect {target:.6})"),
    )
}

fn isotropic_thresholds() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for d in 2..=5 {
        let f = first_crossing(0.0, 1.0, 1e-3, |f| entangled(check_ppt(&isotropic(d, f).unwrap(), &ab()).unwrap().verdict));
        let t = 1.0 / d as f64;
        pass &= f.is_some_and(|f| (f - t).abs() <= 2e-3);
        parts.push(format!("d={d}: {f:?}"));
    }
    outcome(pass, format!("PPT boundary {}", parts.join(", ")))
}

fn recurrence_oracle() -> Outcome {
    let grid: Vec<f64> = (0..9).map(|i| 0.55 + 0.05 * i as f64).collect();
    let dev = grid
        .iter()
        .map(|&f| {
            let out = recurrence_step_exact(&isotropic(2, f).unwrap()).unwrap();
            (singlet_fraction(&out.state).unwrap() - recurrence_map(f)).abs()
        })
        .fold(0.0, f64::max);
    outcome(dev < 1e-10, format!("max deviation {dev:.3e} over 9 fidelities"))
}

fn hashing_consistency() -> Outcome {
    let mut worst: f64 = 0.0;
    for i in 0..=20 {
        let p = i as f64 / 20.0;
        let rho = channel_to_state(&KrausChannel::phase(p).unwrap()).unwrap();
        let coh = state_coherent_info(&rho).unwrap();
        let hash = hashing_rate(&[p, 1.0 - p, 0.0, 0.0]).unwrap();
        let exact = 1.0 - binary_entropy(p);
        worst = worst.max((coh - exact).abs()).max((hash - exact).abs());
    }
    outcome(worst < 1e-10, format!("max deviation {worst:.3e} over 21 phase-channel parameters"))
}

fn all_versus_nothing() -> Outcome {
    let value = ghz_avn_value(&avn_hyper().density()).unwrap();
    let op = avn_operator();
    let mut rng = stream(SEED, 5);
    let mut sampled = f64::NEG_INFINITY;
    for _ in 0..10_000 {
        let psi = random_photon_product(&mut rng).unwrap();
        let v = (psi.amplitudes().adjoint() * &op * psi.amplitudes())[(0, 0)].re;
        sampled = sampled.max(v);
    }
    let split = Partition::bipartition(&[0, 1], 4).unwrap();
    let optimised = max_over_products(&op, &[2, 2, 2, 2], &split, 50, &mut rng).unwrap();
    outcome(
        (value - 9.0).abs() <= 1e-9 && sampled <= AVN_LOCAL_BOUND + 1e-9,
        format!("<O> = {value:.12}, sampled product max {sampled:.6}, optimised product max {optimised:.6}"),
    )
}

fn shared_alice_settings<R: Rng>(rng: &mut R) -> (ChshSettings, ChshSettings) {
    let (a1, a2) = (random_direction(rng), random_direction(rng));
    let ab = ChshSettings::new(a1, a2, random_direction(rng), random_direction(rng)).unwrap();
    let ac = ChshSettings::new(a1, a2, random_direction(rng), random_direction(rng)).unwrap();
    (ab, ac)
}

fn monogamy() -> Outcome {
    let mut rng = stream(SEED, 6);
    let a_bc = Partition::bipartition(&[0], 3).unwrap();
    let mut min_slack = f64::INFINITY;
    for _ in 0..10_000 {
        let psi = random_pure(&[2, 2, 2], &mut rng).unwrap();
        let rho = psi.density();
        let cab = concurrence_2q(&partial_trace(&rho, &[0, 1]).unwrap()).unwrap();
        let cac = concurrence_2q(&partial_trace(&rho, &[0, 2]).unwrap()).unwrap();
        let c = concurrence_pure(&psi, &a_bc).unwrap();
        min_slack = min_slack.min(c * c - cab * cab - cac * cac);
    }
    let ckw = min_slack >= -1e-8;

    let psi = aharonov();
    let rho = psi.density();
    let pair = |keep: &[usize]| {
        let c = concurrence_constant_range(&partial_trace(&rho, keep).unwrap(), &ab()).unwrap().unwrap();
        c * c
    };
    let (c_ab, c_ac) = (pair(&[0, 1]), pair(&[0, 2]));
    let c_a_bc = concurrence_pure(&psi, &a_bc).unwrap().powi(2);
    let pairs_ok = (c_ab - 1.0).abs() <= 1e-9 && (c_ac - 1.0).abs() <= 1e-9;
    let split_ok = (c_a_bc - 0.75).abs() <= 1e-9;

    let mut max_sum: f64 = 0.0;
    for i in 0..10_000 {
        let rho = if i % 2 == 0 {
            random_pure(&[2, 2, 2], &mut rng).unwrap().density()
        } else {
            random_density(&[2, 2, 2], 1 + i % 8, &mut rng).unwrap()
        };
        let (s_ab, s_ac) = shared_alice_settings(&mut rng);
        max_sum = max_sum.max(toner_monogamy(&rho, &s_ab, &s_ac).unwrap().sum);
    }
    let toner = max_sum <= 4.0 + 1e-9;
    outcome(
        ckw && pairs_ok && split_ok && toner,
        format!(
            "CKW min slack {min_slack:.3e}; antisymmetric qutrits C²(A:B) = {c_ab:.12}, C²(A:C) = {c_ac:.12}, \
             C²(A:BC) = {c_a_bc:.12} (expect 0.75: {}); Toner max sum {max_sum:.9}",
            if split_ok { "ok" } else { "mismatch" }
        ),
    )
}

fn two_qubit_completeness() -> Outcome {
    let mut rng = stream(SEED, 7);
    let mut disagreements = 0;
    let mut entangled_count = 0;
    for i in 0..10_000 {
        let rho = random_density(&[2, 2], 1 + i % 4, &mut rng).unwrap();
        let ppt = check_ppt(&rho, &ab()).unwrap().verdict;
        let det = check_two_qubit_det(&rho).unwrap().verdict;
        let red = check_reduction(&rho, &ab()).unwrap().verdict;
        entangled_count += usize::from(entangled(ppt));
        if ppt != det || ppt != red {
            disagreements += 1;
        }
    }
    outcome(disagreements == 0, format!("{disagreements} disagreements over 10000 states ({entangled_count} entangled)"))
}

fn filtering_distillability() -> Outcome {
    let mut rng = stream(SEED, 8);
    let (mut found, mut failures, mut tries) = (0, 0, 0);
    let mut min_after = f64::INFINITY;
    while found < 100 && tries < 1_000_000 {
        tries += 1;
        let rho = random_density(&[2, 2], 1 + tries % 3, &mut rng).unwrap();
        if !entangled(check_ppt(&rho, &ab()).unwrap().verdict) || singlet_fraction(&rho).unwrap() > 0.5 {
            continue;
        }
        found += 1;
        let out = local_filter(&rho, &filter_from_ppt_violation(&rho).unwrap()).unwrap();
        let f = singlet_fraction(&out.state).unwrap();
        min_after = min_after.min(f);
        failures += usize::from(f <= 0.5);
    }
    outcome(found == 100 && failures == 0, format!("{found} NPT states with F ≤ 1/2, {failures} failures, min filtered F {min_after:.6}"))
}

fn bound_entanglement_battery() -> Outcome {
    let s = smolin();
    let pairs = [[0, 1], [0, 2], [0, 3]].map(|l| Partition::bipartition(&l, 4).unwrap());
    let singles = [0, 1, 2, 3].map(|q| Partition::bipartition(&[q], 4).unwrap());
    let smolin_ok = pairs.iter().all(|p| !entangled(check_ppt(&s, p).unwrap().verdict))
        && singles.iter().all(|p| entangled(check_ppt(&s, p).unwrap().verdict));
    let chess_ok = (1..=9).all(|i| !entangled(check_ppt(&chessboard(i as f64 / 10.0).unwrap(), &ab()).unwrap().verdict));
    let shift = battery(&State::Mixed(upb_shift()), &CriterionKind::defaults(), None).unwrap();
    let bipartite_fired: Vec<String> = shift
        .fired()
        .filter(|r| matches!(r.scope, Scope::Cut(_)))
        .map(|r| format!("{} {}", r.criterion, r.scope))
        .collect();
    let perm_fired = shift.fired().filter(|r| matches!(r.scope, Scope::Permutation(_))).count();
    outcome(
        smolin_ok && chess_ok && bipartite_fired.is_empty(),
        format!(
            "Smolin 2|2 PPT and 1|3 NPT: {smolin_ok}; chessboard PPT on a grid: {chess_ok}; \
             shift-state bipartite detections {bipartite_fired:?} (permutation detections {perm_fired})"
        ),
    )
}

fn soundness() -> Outcome {
    let mut rng = stream(SEED, 10);
    let shapes: [&[usize]; 4] = [&[2, 2], &[2, 3], &[3, 3], &[2, 2, 2]];
    let criteria = CriterionKind::defaults();
    let mut false_hits = 0;
    for i in 0..10_000 {
        let rho = random_separable(shapes[i % 4], 1 + i % 9, &mut rng).unwrap();
        let r = battery(&State::Mixed(rho), &criteria, None).unwrap();
        if r.verdict == Verdict::Entangled || r.fired().next().is_some() {
            false_hits += 1;
        }
    }
    outcome(false_hits == 0, format!("{false_hits} false ENTANGLED verdicts over 10000 separable states"))
}

fn teleportation_formula() -> Outcome {
    let mut rng = seeded(SEED);
    let mut worst: f64 = 0.0;
    let mut at_half = 0.0;
    for f in [0.25, 0.5, 0.75, 1.0] {
        let r = simulate_teleportation(&isotropic(2, f).unwrap(), TeleportMode::Analytic, &mut rng).unwrap();
        worst = worst.max((r.avg_fidelity - (2.0 * f + 1.0) / 3.0).abs());
        if f == 0.5 {
            at_half = r.avg_fidelity;
        }
    }
    outcome(
        worst <= 1e-10 && (at_half - 2.0 / 3.0).abs() <= 1e-10,
        format!("max deviation {worst:.3e}; F = 1/2 gives {at_half:.12}"),
    )
}

fn random_schmidt<R: Rng>(d: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..d).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

/// Cumulative-sum constraints checked directly on sorted vectors.
fn brute_force(psi: &[f64], phi: &[f64]) -> (bool, f64) {
    let sorted = |v: &[f64], n: usize| {
        let mut s = v.to_vec();
        s.sort_by(|a, b| b.total_cmp(a));
        s.resize(n, 0.0);
        s
    };
    let n = psi.len().max(phi.len());
    let (a, b) = (sorted(psi, n), sorted(phi, n));
    let mut majorized = true;
    let mut ratio: f64 = 1.0;
    for k in 0..n {
        let (head_a, head_b): (f64, f64) = (a[..k].iter().sum(), b[..k].iter().sum());
        majorized &= head_a <= head_b + 1e-12;
        let (tail_a, tail_b): (f64, f64) = (a[k..].iter().sum(), b[k..].iter().sum());
        if tail_b > 1e-12 {
            ratio = ratio.min(tail_a / tail_b);
        }
    }
    (majorized, if majorized { 1.0 } else { ratio })
}

fn pure_state_calculus() -> Outcome {
    let mut rng = stream(SEED, 12);
    let mut mismatches = 0;
    for _ in 0..10_000 {
        let d = rng.random_range(2..=6);
        let (psi, phi) = (random_schmidt(d, &mut rng), random_schmidt(d, &mut rng));
        let (can, p) = brute_force(&psi, &phi);
        let got_can = nielsen_can_transform(&psi, &phi).unwrap();
        let got_p = vidal_probability(&psi, &phi).unwrap();
        if got_can != can || (got_p - p).abs() > 1e-12 || (got_p == 1.0) != can {
            mismatches += 1;
        }
    }
    outcome(mismatches == 0, format!("{mismatches} mismatches over 10000 Schmidt-vector pairs"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("werner thresholds", werner_thresholds),
        ("isotropic thresholds", isotropic_thresholds),
        ("recurrence oracle match", recurrence_oracle),
        ("hashing and coherent information", hashing_consistency),
        ("GHZ all-versus-nothing", all_versus_nothing),
        ("monogamy sweeps", monogamy),
        ("two-qubit completeness", two_qubit_completeness),
        ("filtering distillability", filtering_distillability),
        ("bound-entanglement battery", bound_entanglement_battery),
        ("soundness", soundness),
        ("teleportation formula", teleportation_formula),
        ("pure-state calculus", pure_state_calculus),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        failed += usize::from(!o.pass);
        println!("acceptance {:>2} {:<34} {}  {}", i + 1, name, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance summary: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
