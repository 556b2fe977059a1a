use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use superqubit::chsh::{self, Evaluation, OptimizeConfig, Strategy, Tables};
use superqubit::superstate::{self, basis_label, measure_real, superqubit, StateRecord};
use superqubit::verify::{self, VerifyOptions};
use superqubit::Error;

#[derive(Parser)]
#[command(name = "superqubit", version, about = "Superqubit algebra checks and CHSH optimization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the algebraic self-checks.
    Verify {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Random cases per check.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Print residuals and tolerances.
        #[arg(long)]
        verbose: bool,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Print a superqubit and its standard-basis probabilities.
    State {
        #[arg(long, allow_hyphen_values = true)]
        p: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        phi: f64,
        #[arg(long, value_name = "OUT")]
        json: Option<PathBuf>,
    },
    /// Transition probability between two superqubits.
    Transition {
        #[arg(long, allow_hyphen_values = true)]
        p: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        phi: f64,
        #[arg(long, allow_hyphen_values = true)]
        q: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        theta2: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        phi2: f64,
    },
    /// Evaluate a CHSH strategy read from a JSON file.
    ChshEval {
        strategy: PathBuf,
        #[command(flatten)]
        out: Outputs,
    },
    /// Maximize the CHSH winning probability.
    ChshOptimize {
        /// Optional JSON config; flags override its fields.
        config: Option<PathBuf>,
        #[command(flatten)]
        search: SearchFlags,
        #[command(flatten)]
        out: Outputs,
    },
    /// Classical and quantum reference values.
    Baseline {
        #[command(flatten)]
        search: SearchFlags,
        #[command(flatten)]
        out: Outputs,
    },
}

#[derive(Args, Default)]
struct SearchFlags {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    penalty: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    quantum_only: bool,
    /// Run restarts in parallel (same output as serial).
    #[arg(long)]
    parallel: bool,
    #[arg(long)]
    verbose: bool,
}

#[derive(Args)]
struct Outputs {
    #[arg(long, value_name = "OUT")]
    json: Option<PathBuf>,
    #[arg(long, value_name = "OUT")]
    csv: Option<PathBuf>,
}

/// Config file fields; all optional.
#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    seed: Option<u64>,
    restarts: Option<usize>,
    max_iters: Option<usize>,
    penalty_weight: Option<f64>,
    tolerance: Option<f64>,
    quantum_only: Option<bool>,
}

#[derive(Serialize)]
struct ResultJson<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    restarts: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_iters: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    penalty_weight: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    quantum_only: Option<bool>,
    strategy: &'a Strategy,
    result: ResultBody<'a>,
}

#[derive(Serialize)]
struct ResultBody<'a> {
    p_win: f64,
    violation: f64,
    /// `[i][j][outcome]`, outcomes in the order of `outcomes`.
    tables: &'a Tables,
    outcomes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    best_restart: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    iterations: Option<usize>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum StrategyFile {
    Wrapped { strategy: Strategy },
    Bare(Strategy),
}

#[derive(Serialize)]
struct StateJson {
    p: f64,
    theta: f64,
    phi: f64,
    physical: bool,
    state: StateRecord,
    probabilities: Vec<f64>,
}

enum Failure {
    /// Exit code 1.
    Check(String),
    /// Exit code 2.
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Infeasible { .. } => Failure::Check(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify {
            seed,
            samples,
            verbose,
            inject_fault,
        } => cmd_verify(seed, samples, verbose, inject_fault),
        Command::State { p, theta, phi, json } => cmd_state(p, theta, phi, json.as_deref()),
        Command::Transition {
            p,
            theta,
            phi,
            q,
            theta2,
            phi2,
        } => cmd_transition((p, theta, phi), (q, theta2, phi2)),
        Command::ChshEval { strategy, out } => cmd_chsh_eval(&strategy, &out),
        Command::ChshOptimize {
            config,
            search,
            out,
        } => cmd_chsh_optimize(config.as_deref(), &search, &out),
        Command::Baseline { search, out } => cmd_baseline(&search, &out),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn cmd_verify(seed: u64, samples: usize, verbose: bool, inject_fault: bool) -> CmdResult {
    let checks = verify::run_all(&VerifyOptions {
        seed,
        samples,
        inject_fault,
    });
    let mut failed = Vec::new();
    for c in &checks {
        let status = if c.passed() { "PASS" } else { "FAIL" };
        if verbose {
            println!(
                "{status}  {:<42} residual {:.3e}  tol {:.0e}",
                c.name, c.residual, c.tolerance
            );
        } else {
            println!("{status}  {}", c.name);
        }
        if !c.passed() {
            failed.push(c.name);
        }
    }
    if failed.is_empty() {
        println!("all {} checks passed", checks.len());
        Ok(())
    } else {
        Err(Failure::Check(format!("failed: {}", failed.join(", "))))
    }
}

fn finite(name: &str, v: f64) -> Result<(), Failure> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Failure::Input(format!("{name} must be finite")))
    }
}

fn cmd_state(p: f64, theta: f64, phi: f64, json: Option<&Path>) -> CmdResult {
    for (n, v) in [("p", p), ("theta", theta), ("phi", phi)] {
        finite(n, v)?;
    }
    let physical = superstate::is_physical(p);
    if !physical {
        eprintln!("warning: p = {p} is not physical (|p| > 1/2)");
    }
    let state = superqubit(p, theta, phi);
    let probs = measure_real(&state)?;
    println!("state: {state}");
    for (i, prob) in probs.iter().enumerate() {
        println!("p({}) = {prob}", basis_label(1, i));
    }
    if let Some(path) = json {
        let record = StateJson {
            p,
            theta,
            phi,
            physical,
            state: state.to_record(),
            probabilities: probs,
        };
        write_json(path, &record)?;
    }
    Ok(())
}

fn cmd_transition(a: (f64, f64, f64), b: (f64, f64, f64)) -> CmdResult {
    for v in [a.0, a.1, a.2, b.0, b.1, b.2] {
        finite("parameters", v)?;
    }
    let u = superqubit(a.0, a.1, a.2);
    let v = superqubit(b.0, b.1, b.2);
    let grassmann = superstate::grassmann_transition(&u, &v)?;
    let real = grassmann.modified_rogers()?;
    let pair = superstate::physical_pair(a.0, b.0);
    println!("p_grassmann = {grassmann}");
    println!("p_real = {real}");
    println!("s1 = {}, s2 = {}", pair.s1, pair.s2);
    if !pair.s2 {
        eprintln!("warning: displacements outside |p|, |q| <= 1/2 are not physical");
    }
    Ok(())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::Input(format!("cannot parse {}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> CmdResult {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Failure::Input(format!("cannot serialize result: {e}")))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
}

fn write_csv(path: &Path, tables: &Tables) -> CmdResult {
    let io = |e: csv::Error| Failure::Input(format!("cannot write {}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(["i", "j", "outcome", "probability"]).map_err(io)?;
    for (i, row) in tables.iter().enumerate() {
        for (j, probs) in row.iter().enumerate() {
            for (k, p) in probs.iter().enumerate() {
                w.write_record([i.to_string(), j.to_string(), basis_label(2, k), p.to_string()])
                    .map_err(io)?;
            }
        }
    }
    w.flush()
        .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
}

fn outcome_labels() -> Vec<String> {
    (0..9).map(|k| basis_label(2, k)).collect()
}

fn emit(out: &Outputs, json: &ResultJson<'_>, tables: &Tables) -> CmdResult {
    if let Some(path) = &out.json {
        write_json(path, json)?;
    }
    if let Some(path) = &out.csv {
        write_csv(path, tables)?;
    }
    Ok(())
}

fn print_evaluation(strategy: &Strategy, eval: &Evaluation) {
    println!("p_win = {}", eval.p_win);
    println!("violation = {:e}", eval.violation);
    println!(
        "pA = {}, pB = {}, r = {:?}, s = {:?}",
        strategy.pa, strategy.pb, strategy.r, strategy.s
    );
    for (name, angles) in [("alice", &strategy.alice), ("bob", &strategy.bob)] {
        for (k, a) in angles.iter().enumerate() {
            println!("{name}[{k}]: theta = {}, phi = {}", a.theta, a.phi);
        }
    }
}

fn cmd_chsh_eval(path: &Path, out: &Outputs) -> CmdResult {
    let strategy = match read_json::<StrategyFile>(path)? {
        StrategyFile::Wrapped { strategy } | StrategyFile::Bare(strategy) => strategy,
    };
    let eval = chsh::evaluate(&strategy)?;
    print_evaluation(&strategy, &eval);
    let json = ResultJson {
        seed: None,
        restarts: None,
        max_iters: None,
        penalty_weight: None,
        tolerance: None,
        quantum_only: None,
        strategy: &strategy,
        result: ResultBody {
            p_win: eval.p_win,
            violation: eval.violation,
            tables: &eval.tables,
            outcomes: outcome_labels(),
            best_restart: None,
            iterations: None,
        },
    };
    emit(out, &json, &eval.tables)
}

fn build_config(file: Option<&Path>, flags: &SearchFlags, base: OptimizeConfig) -> Result<OptimizeConfig, Failure> {
    let file: ConfigFile = match file {
        Some(p) => read_json(p)?,
        None => ConfigFile::default(),
    };
    let config = OptimizeConfig {
        seed: flags.seed.or(file.seed).unwrap_or(base.seed),
        restarts: flags.restarts.or(file.restarts).unwrap_or(base.restarts),
        max_iters: flags.max_iters.or(file.max_iters).unwrap_or(base.max_iters),
        penalty_weight: flags.penalty.or(file.penalty_weight).unwrap_or(base.penalty_weight),
        tolerance: flags.tol.or(file.tolerance).unwrap_or(base.tolerance),
        quantum_only: flags.quantum_only || file.quantum_only.unwrap_or(base.quantum_only),
        parallel: flags.parallel,
    };
    config.validate()?;
    Ok(config)
}

fn run_optimizer(config: &OptimizeConfig, verbose: bool, out: &Outputs) -> CmdResult {
    if verbose {
        eprintln!(
            "searching: seed {}, {} restarts x {} iterations, penalty {}, tolerance {:e}{}",
            config.seed,
            config.restarts,
            config.max_iters,
            config.penalty_weight,
            config.tolerance,
            if config.quantum_only { ", quantum only" } else { "" }
        );
    }
    let res = chsh::optimize(config)?;
    print_evaluation(&res.strategy, &res.evaluation);
    if verbose {
        eprintln!("best restart {}, {} iterations", res.best_restart, res.iterations);
    }
    let json = ResultJson {
        seed: Some(config.seed),
        restarts: Some(config.restarts),
        max_iters: Some(config.max_iters),
        penalty_weight: Some(config.penalty_weight),
        tolerance: Some(config.tolerance),
        quantum_only: Some(config.quantum_only),
        strategy: &res.strategy,
        result: ResultBody {
            p_win: res.evaluation.p_win,
            violation: res.evaluation.violation,
            tables: &res.evaluation.tables,
            outcomes: outcome_labels(),
            best_restart: Some(res.best_restart),
            iterations: Some(res.iterations),
        },
    };
    emit(out, &json, &res.evaluation.tables)
}

fn cmd_chsh_optimize(file: Option<&Path>, flags: &SearchFlags, out: &Outputs) -> CmdResult {
    let config = build_config(file, flags, OptimizeConfig::default())?;
    run_optimizer(&config, flags.verbose, out)
}

fn cmd_baseline(flags: &SearchFlags, out: &Outputs) -> CmdResult {
    let (classical, answers) = chsh::classical_optimum();
    println!(
        "classical optimum = {classical} (a(0), a(1), b(0), b(1)) = {answers:?}"
    );
    let tsirelson = chsh::win_prob(&Strategy::tsirelson())?;
    println!("tsirelson strategy = {tsirelson}");
    let base = OptimizeConfig {
        restarts: 8,
        quantum_only: true,
        ..OptimizeConfig::default()
    };
    let mut config = build_config(None, flags, base)?;
    config.quantum_only = true;
    println!("quantum-restricted search:");
    run_optimizer(&config, flags.verbose, out)?;
    let _ = std::io::stdout().flush();
    Ok(())
}
