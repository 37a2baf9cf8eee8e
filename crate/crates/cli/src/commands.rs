use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use entangle::format::{parse_kraus, parse_state, write_state};
use entangle::locc::{
    channel_state_marginal, channel_to_state, distill_recurrence, hashing_rate, simulate_dense_coding,
    simulate_swapping, simulate_teleportation, state_coherent_info, TeleportMode,
};
use entangle::measures::{evaluate_measure, MeasureKind};
use entangle::nonlocality::{
    bell_chsh_value, chsh_m, correlation_table, ghz_avn_value, optimal_chsh_settings, toner_monogamy, wwzb_check,
    ChshSettings, Vec3, AVN_LOCAL_BOUND, BELL_SLACK,
};
use entangle::rng::seeded;
use entangle::separability::{battery, CriterionKind, Fires};
use entangle::states::{singlet, DurCiracWeights, State, StateRecipe};
use entangle::{DensityMatrix, Partition};
use serde_json::{json, Value};
use thiserror::Error;

use crate::args::*;
use crate::report::{digest, fmt_num, num, nums};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] entangle::Error),
    #[error("{}: {source}", path.display())]
    File { path: PathBuf, source: entangle::Error },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) | CliError::File { source: e, .. } => core_exit_code(e),
            CliError::Io { .. } => 3,
            CliError::Usage(_) => 2,
        }
    }
}

pub fn core_exit_code(e: &entangle::Error) -> u8 {
    use entangle::Error::*;
    match e {
        Size(_) | Argument(_) => 2,
        Parse { .. } => 3,
        Contract(_) | NotDistillable(_) => 4,
        Numerical(_) | FilterFailure(_) => 5,
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

/// What a command produced: structured results, a text rendering and the
/// digest of its input.
pub struct Output {
    pub command: &'static str,
    pub digest: String,
    pub results: Value,
    pub text: String,
    pub failures: usize,
}

impl Output {
    pub(crate) fn new(command: &'static str, digest: String, results: Value, text: String) -> Self {
        Output { command, digest, results, text, failures: 0 }
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn load_state(path: &Path) -> CliResult<(State, String)> {
    let text = read(path)?;
    let state = parse_state(&text).map_err(|source| CliError::File { path: path.to_path_buf(), source })?;
    Ok((state, digest(text.as_bytes())))
}

fn require(value: Option<f64>, flag: &str, recipe: &str) -> CliResult<f64> {
    value.ok_or_else(|| CliError::Usage(format!("{recipe} needs --{flag}")))
}

fn recipe(args: &GenArgs) -> CliResult<StateRecipe> {
    use RecipeName as R;
    Ok(match args.recipe {
        R::Bell => StateRecipe::Bell(args.k),
        R::Maxent => StateRecipe::Maxent(args.d),
        R::Ghz => StateRecipe::Ghz { n: args.n, d: args.d },
        R::W => StateRecipe::W(args.n),
        R::Werner => StateRecipe::Werner { d: args.d, p: require(args.p, "p", "werner")? },
        R::NoisySinglet => StateRecipe::NoisySinglet(require(args.p, "p", "noisy-singlet")?),
        R::Isotropic => StateRecipe::Isotropic { d: args.d, f: require(args.f, "f", "isotropic")? },
        R::Smolin => StateRecipe::Smolin,
        R::Chessboard => StateRecipe::Chessboard(require(args.a, "a", "chessboard")?),
        R::DurCirac => {
            let l = &args.lambdas;
            let pairs = l.len().saturating_sub(1);
            if l.len() < 3 || !pairs.is_power_of_two() {
                return usage("dur-cirac needs --lambdas λ0+,λ0-,λ1,...,λ(2^(m-1)-1)");
            }
            let m = pairs.trailing_zeros() as usize + 1;
            StateRecipe::DurCirac(DurCiracWeights::new(m, l[0], l[1], l[2..].to_vec())?)
        }
        R::UpbShift => StateRecipe::UpbShift,
        R::Aharonov => StateRecipe::Aharonov,
        R::Avn => StateRecipe::AvnHyper,
        R::RandomPure => StateRecipe::RandomPure { dims: args.dims.clone(), seed: args.seed },
        R::RandomDensity => StateRecipe::RandomDensity { dims: args.dims.clone(), rank: args.rank, seed: args.seed },
        R::RandomSeparable => {
            StateRecipe::RandomSeparable { dims: args.dims.clone(), terms: args.terms, seed: args.seed }
        }
    })
}

fn dims_json(dims: &[usize]) -> Value {
    json!(dims)
}

pub fn gen(args: &GenArgs) -> CliResult<Output> {
    let recipe = recipe(args)?;
    let state = recipe.build()?;
    let text = write_state(&state);
    let input = digest(format!("{recipe:?}").as_bytes());
    let kind = if state.as_pure().is_some() { "pure" } else { "density" };
    let mut results = json!({
        "recipe": recipe.name(),
        "kind": kind,
        "dims": dims_json(state.dims()),
        "state_digest": digest(text.as_bytes()),
    });
    let shown = match &args.out {
        Some(path) => {
            write(path, &text)?;
            results["file"] = json!(path.display().to_string());
            format!("wrote {} state {} to {}\n", kind, recipe.name(), path.display())
        }
        None => {
            results["state"] = json!(text);
            text
        }
    };
    Ok(Output::new("gen", input, results, shown))
}

fn fires_token(f: Fires) -> &'static str {
    match f {
        Fires::Below => "below",
        Fires::Above => "above",
    }
}

pub fn analyze(args: &AnalyzeArgs) -> CliResult<Output> {
    let (state, input) = load_state(&args.input)?;
    let criteria: Vec<CriterionKind> = if args.criteria.is_empty() {
        CriterionKind::defaults()
    } else {
        args.criteria.iter().map(|s| s.parse()).collect::<Result<_, _>>()?
    };
    let partitions: Vec<Partition> = args.partitions.iter().map(|s| s.parse()).collect::<Result<_, _>>()?;
    let result = battery(&state, &criteria, (!partitions.is_empty()).then_some(partitions.as_slice()))?;

    let mut text = String::new();
    let reports: Vec<Value> = result
        .reports
        .iter()
        .map(|r| {
            let _ = writeln!(
                text,
                "{:<14} {:<12} {:<13} evidence {} threshold {} ({}){}",
                r.criterion.to_string(),
                r.scope.to_string(),
                r.verdict.to_string(),
                fmt_num(r.evidence),
                fmt_num(r.threshold),
                fires_token(r.fires),
                r.note.as_deref().map(|n| format!("  [{n}]")).unwrap_or_default(),
            );
            json!({
                "criterion": r.criterion.to_string(),
                "scope": r.scope.to_string(),
                "verdict": r.verdict.to_string(),
                "evidence": num(r.evidence),
                "threshold": num(r.threshold),
                "fires": fires_token(r.fires),
                "note": r.note,
            })
        })
        .collect();
    for n in &result.notes {
        let _ = writeln!(text, "note: {n}");
    }
    let _ = writeln!(text, "verdict: {}", result.verdict);
    let results = json!({
        "dims": dims_json(state.dims()),
        "verdict": result.verdict.to_string(),
        "reports": reports,
        "notes": result.notes,
    });
    if let Some(path) = &args.out_json {
        write(path, &crate::report::render(&crate::report::document("analyze", &input, results.clone())))?;
    }
    Ok(Output::new("analyze", input, results, text))
}

fn default_split(n: usize) -> CliResult<Partition> {
    Ok(Partition::bipartition(&[0], n)?)
}

pub fn measure(args: &MeasureArgs) -> CliResult<Output> {
    let (state, input) = load_state(&args.input)?;
    let n = state.dims().len();
    let split = match &args.split {
        Some(s) => s.parse::<Partition>()?,
        None => default_split(n)?,
    };
    if split.num_subsystems() != n || !split.is_bipartition() {
        return usage(format!("{split} is not a bipartition of {n} subsystems"));
    }
    let mut text = String::new();
    let mut values = Vec::new();
    for token in &args.measures {
        let kind: MeasureKind = token.parse()?;
        let v = evaluate_measure(&kind, &state, &split)?;
        let shown: Vec<String> = v.values.iter().map(|&x| fmt_num(x)).collect();
        let _ = writeln!(text, "{:<14} {}{}", v.measure, shown.join(" "), if v.exact { "" } else { "  (lower bound)" });
        let value = if v.values.len() == 1 { num(v.values[0]) } else { nums(&v.values) };
        values.push(json!({ "measure": v.measure, "value": value, "exact": v.exact }));
    }
    let results = json!({ "split": split.to_string(), "measures": values });
    Ok(Output::new("measure", input, results, text))
}

fn parse_vector(token: &str) -> CliResult<Vec3> {
    match token.trim() {
        "x" | "+x" => return Ok([1.0, 0.0, 0.0]),
        "y" | "+y" => return Ok([0.0, 1.0, 0.0]),
        "z" | "+z" => return Ok([0.0, 0.0, 1.0]),
        "-x" => return Ok([-1.0, 0.0, 0.0]),
        "-y" => return Ok([0.0, -1.0, 0.0]),
        "-z" => return Ok([0.0, 0.0, -1.0]),
        _ => {}
    }
    let parts: Vec<f64> = token
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("bad vector component in {token:?}"))))
        .collect::<Result<_, _>>()?;
    match parts.as_slice() {
        [x, y, z] => Ok([*x, *y, *z]),
        _ => usage(format!("vector {token:?} needs three components")),
    }
}

fn parse_settings(settings: &Option<String>, expected: usize, what: &str) -> CliResult<Option<Vec<Vec3>>> {
    let Some(settings) = settings else { return Ok(None) };
    let v: Vec<Vec3> = settings.split(';').map(parse_vector).collect::<Result<_, _>>()?;
    if v.len() != expected {
        return usage(format!("{what} needs {expected} directions, got {}", v.len()));
    }
    Ok(Some(v))
}

fn settings_json(s: &ChshSettings) -> Value {
    json!({ "a1": nums(&s.a1), "a2": nums(&s.a2), "b1": nums(&s.b1), "b2": nums(&s.b2) })
}

fn need_dims(rho: &DensityMatrix, dims: &[usize], test: &str) -> CliResult<()> {
    if rho.dims() != dims {
        return usage(format!("{test} needs dimensions {dims:?}, got {:?}", rho.dims()));
    }
    Ok(())
}

pub fn bell(args: &BellArgs) -> CliResult<Output> {
    let (state, input) = load_state(&args.input)?;
    let rho = state.density();
    let (results, text) = match args.test {
        BellTest::Chsh => {
            need_dims(&rho, &[2, 2], "chsh")?;
            let settings = match (args.optimal, parse_settings(&args.settings, 4, "chsh")?) {
                (true, None) => optimal_chsh_settings(&rho)?,
                (false, Some(v)) => ChshSettings::new(v[0], v[1], v[2], v[3])?,
                (true, Some(_)) => return usage("give either --settings or --optimal, not both"),
                (false, None) => return usage("chsh needs --settings or --optimal"),
            };
            let value = bell_chsh_value(&rho, &settings)?;
            let m = chsh_m(&rho)?;
            let violated = value.abs() > 2.0 + BELL_SLACK;
            let text = format!(
                "CHSH value {} (local bound 2, violated: {violated})\nM(ρ) = {}, maximal value 2√M = {}\n",
                fmt_num(value),
                fmt_num(m),
                fmt_num(2.0 * m.sqrt())
            );
            let results = json!({
                "test": "chsh",
                "value": num(value),
                "local_bound": num(2.0),
                "violated": violated,
                "m": num(m),
                "max_value": num(2.0 * m.sqrt()),
                "settings": settings_json(&settings),
            });
            (results, text)
        }
        BellTest::Wwzb => {
            let n = rho.num_subsystems();
            let dirs = parse_settings(&args.settings, 2 * n, "wwzb")?
                .unwrap_or_else(|| (0..n).flat_map(|_| [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]).collect());
            let pairs: Vec<[Vec3; 2]> = dirs.chunks(2).map(|c| [c[0], c[1]]).collect();
            let table = correlation_table(&rho, &pairs)?;
            let r = wwzb_check(&table, n)?;
            let text = format!("WWZB sum {} (bound {}, satisfied: {})\n", fmt_num(r.lhs), fmt_num(r.bound), r.pass);
            let results = json!({
                "test": "wwzb",
                "lhs": num(r.lhs),
                "bound": num(r.bound),
                "satisfied": r.pass,
                "correlations": nums(&table),
            });
            (results, text)
        }
        BellTest::Avn => {
            need_dims(&rho, &[2, 2, 2, 2], "avn")?;
            let value = ghz_avn_value(&rho)?;
            let violated = value > AVN_LOCAL_BOUND + BELL_SLACK;
            let text = format!("<O> = {} (local bound {}, violated: {violated})\n", fmt_num(value), fmt_num(AVN_LOCAL_BOUND));
            let results = json!({
                "test": "avn",
                "value": num(value),
                "local_bound": num(AVN_LOCAL_BOUND),
                "violated": violated,
            });
            (results, text)
        }
        BellTest::Toner => {
            need_dims(&rho, &[2, 2, 2], "toner")?;
            let Some(v) = parse_settings(&args.settings, 6, "toner")? else {
                return usage("toner needs --settings a1;a2;b1;b2;c1;c2");
            };
            let ab = ChshSettings::new(v[0], v[1], v[2], v[3])?;
            let ac = ChshSettings::new(v[0], v[1], v[4], v[5])?;
            let r = toner_monogamy(&rho, &ab, &ac)?;
            let text = format!(
                "|B_AB| + |B_AC| = {} + {} = {} (bound 4, satisfied: {})\n",
                fmt_num(r.v_ab.abs()),
                fmt_num(r.v_ac.abs()),
                fmt_num(r.sum),
                r.pass
            );
            let results = json!({
                "test": "toner",
                "ab": num(r.v_ab),
                "ac": num(r.v_ac),
                "sum": num(r.sum),
                "bound": num(4.0),
                "satisfied": r.pass,
            });
            (results, text)
        }
    };
    Ok(Output::new("bell", input, results, text))
}

fn args_digest(parts: &[String]) -> String {
    digest(parts.join("\u{0}").as_bytes())
}

pub fn distill(cmd: &DistillCommand) -> CliResult<Output> {
    match cmd {
        DistillCommand::Recurrence { f0, target, max_rounds, exact } => {
            let trace = distill_recurrence(*f0, *target, *max_rounds, *exact)?;
            let mut text = format!("round 0: F = {}\n", fmt_num(trace.initial_fidelity));
            let rounds: Vec<Value> = trace
                .rounds
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    let _ = writeln!(
                        text,
                        "round {}: F = {}, p = {}, surviving = {}",
                        i + 1,
                        fmt_num(r.fidelity),
                        fmt_num(r.p_success),
                        fmt_num(r.surviving_fraction)
                    );
                    json!({
                        "fidelity": num(r.fidelity),
                        "p_success": num(r.p_success),
                        "surviving_fraction": num(r.surviving_fraction),
                    })
                })
                .collect();
            let _ = writeln!(
                text,
                "target {} {} after {} rounds, yield {}",
                fmt_num(*target),
                if trace.reached_target { "reached" } else { "not reached" },
                trace.rounds.len(),
                fmt_num(trace.final_yield_estimate)
            );
            let results = json!({
                "protocol": "recurrence",
                "exact": exact,
                "initial_fidelity": num(trace.initial_fidelity),
                "target": num(*target),
                "rounds": rounds,
                "final_yield_estimate": num(trace.final_yield_estimate),
                "reached_target": trace.reached_target,
            });
            let input = args_digest(&[
                "recurrence".into(),
                f0.to_string(),
                target.to_string(),
                max_rounds.to_string(),
                exact.to_string(),
            ]);
            Ok(Output::new("distill", input, results, text))
        }
        DistillCommand::Hashing { p } => {
            let rate = hashing_rate(p)?;
            let text = format!("hashing yield {} per pair\n", fmt_num(rate));
            let results = json!({ "protocol": "hashing", "p": nums(p), "rate": num(rate) });
            let mut parts = vec!["hashing".to_string()];
            parts.extend(p.iter().map(f64::to_string));
            Ok(Output::new("distill", args_digest(&parts), results, text))
        }
    }
}

pub fn sim(args: &SimArgs) -> CliResult<Output> {
    match args.protocol {
        Protocol::Teleport => {
            let (resource, input) = match &args.resource {
                Some(path) => {
                    let (s, d) = load_state(path)?;
                    (s.density(), d)
                }
                None => (singlet().density(), args_digest(&["teleport".into(), "singlet".into()])),
            };
            let mode = match args.mode {
                AverageMode::Analytic => TeleportMode::Analytic,
                AverageMode::Axial => TeleportMode::Axial,
                AverageMode::Haar => TeleportMode::Haar { samples: args.samples },
            };
            let r = simulate_teleportation(&resource, mode, &mut seeded(args.seed))?;
            let text = format!(
                "average fidelity {} (singlet fraction {}, predicted (2F+1)/3 = {}, frame correction {})\n",
                fmt_num(r.avg_fidelity),
                fmt_num(r.singlet_fraction),
                fmt_num(r.predicted),
                r.frame
            );
            let results = json!({
                "protocol": "teleport",
                "mode": format!("{:?}", args.mode).to_lowercase(),
                "avg_fidelity": num(r.avg_fidelity),
                "singlet_fraction": num(r.singlet_fraction),
                "predicted": num(r.predicted),
                "frame": r.frame,
            });
            Ok(Output::new("sim", input, results, text))
        }
        Protocol::Dense => {
            let r = simulate_dense_coding()?;
            let text = format!(
                "max overlap {}, decoding success {}, bits {}\n",
                fmt_num(r.max_overlap),
                fmt_num(r.success_probability),
                fmt_num(r.bits)
            );
            let confusion: Vec<Value> = r.confusion.iter().map(|row| nums(row)).collect();
            let results = json!({
                "protocol": "dense",
                "max_overlap": num(r.max_overlap),
                "confusion": confusion,
                "success_probability": num(r.success_probability),
                "bits": num(r.bits),
            });
            Ok(Output::new("sim", args_digest(&["dense".into()]), results, text))
        }
        Protocol::Swap => {
            let outcomes = simulate_swapping()?;
            let mut text = String::new();
            let list: Vec<Value> = outcomes
                .iter()
                .enumerate()
                .map(|(k, o)| {
                    let _ = writeln!(
                        text,
                        "outcome {k}: p = {}, Bell weight {}, correction {}, corrected fidelity {}",
                        fmt_num(o.probability),
                        fmt_num(o.bell_weight),
                        o.correction,
                        fmt_num(o.corrected_fidelity)
                    );
                    json!({
                        "outcome": k,
                        "probability": num(o.probability),
                        "bell_weight": num(o.bell_weight),
                        "correction": o.correction,
                        "corrected_fidelity": num(o.corrected_fidelity),
                    })
                })
                .collect();
            Ok(Output::new("sim", args_digest(&["swap".into()]), json!({ "protocol": "swap", "outcomes": list }), text))
        }
    }
}

pub fn channel(cmd: &ChannelCommand) -> CliResult<Output> {
    let ChannelCommand::Choi { kraus, out } = cmd;
    let text_in = read(kraus)?;
    let ch = parse_kraus(&text_in).map_err(|source| CliError::File { path: kraus.clone(), source })?;
    let rho = channel_to_state(&ch)?;
    let coh = state_coherent_info(&rho)?;
    let marginal = channel_state_marginal(&rho)?;
    let d = ch.input_dim() as f64;
    let deviation = (marginal.matrix() - entangle::linalg::identity(ch.input_dim()) / entangle::linalg::c(d, 0.0)).norm();
    let state_text = write_state(&State::Mixed(rho.clone()));
    let mut results = json!({
        "dims": dims_json(rho.dims()),
        "coherent_information": num(coh),
        "marginal_deviation": num(deviation),
    });
    let mut text = format!("channel state {:?}, coherent information {}\n", rho.dims(), fmt_num(coh));
    match out {
        Some(path) => {
            write(path, &state_text)?;
            results["file"] = json!(path.display().to_string());
            let _ = writeln!(text, "wrote {}", path.display());
        }
        None => {
            results["state"] = json!(state_text);
            text.push_str(&state_text);
        }
    }
    Ok(Output::new("channel", digest(text_in.as_bytes()), results, text))
}
