//! Command-line surface: one subcommand family per module, JSON in and out.
//!
//! Exit codes: 0 on pass/feasible/found, 1 on a checked failure (not an
//! imitation game, infeasible, no perfect strategy, residuals over
//! threshold), 2 on input errors. Reports embed the tolerance and seed used,
//! and repeated runs on identical inputs produce byte-identical JSON.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::construct::{
    amenability_functional, correlation_from_trace, enumerate_gen_words, gns, parse_hom_spec,
    parse_trace_spec, tensor_realization, trace_property_check,
};
use crate::correlation::Correlation;
use crate::error::{Error, Result};
use crate::game::{Game, Side};
use crate::membership::{classical_perfect, ns_feasible, seesaw, CLASSICAL_SEARCH_CAP};
use crate::strategy::{
    correlation_from_commuting, correlation_from_deterministic, correlation_from_tensor,
    parse_commuting_strategy, parse_tensor_strategy, DeterministicStrategy, TensorStrategy,
};
use crate::witness::{
    enumerate_words, restricted_identities, state_convergence_scan, trace_check, witness_report,
    word_reversal_check, Word,
};
use crate::{corpus, DEFAULT_TOL, DEFAULT_WORD_CAP};

/// Resolved run configuration: subcommand, inputs, and global knobs.
#[derive(Parser, Debug)]
#[command(
    name = "nonlocal-lab",
    about = "Numerical laboratory for nonlocal games and quantum correlations",
    version
)]
pub struct RunConfig {
    /// Validation tolerance used when loading and checking inputs.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,

    /// Seed for the seeded operations.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Cap on enumerated word lengths.
    #[arg(long = "max-len", global = true, default_value_t = DEFAULT_WORD_CAP)]
    pub max_len: usize,

    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Game validation and classification.
    Game {
        #[command(subcommand)]
        cmd: GameCmd,
    },
    /// Correlation checks and constructions.
    Corr {
        #[command(subcommand)]
        cmd: CorrCmd,
    },
    /// Trace-witness diagnostics for strategies of imitation games.
    Witness {
        #[command(subcommand)]
        cmd: WitnessCmd,
    },
    /// Constructions from densities and generator images.
    Construct {
        #[command(subcommand)]
        cmd: ConstructCmd,
    },
    /// Membership and value computations.
    Member {
        #[command(subcommand)]
        cmd: MemberCmd,
    },
    /// Write the canonical games as JSON files.
    Corpus {
        /// Output directory.
        #[arg(long, default_value = ".")]
        dir: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum GameCmd {
    /// Check the structural invariants of a game file.
    Validate { game: PathBuf },
    /// Imitation classification with violation witnesses.
    Classify { game: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum CorrCmd {
    /// Non-signalling check; with --game also perfection and the leak.
    Check {
        correlation: PathBuf,
        #[arg(long)]
        game: Option<PathBuf>,
    },
    /// Correlation induced by a strategy file (tensor or commuting).
    FromStrategy { strategy: PathBuf, game: PathBuf },
    /// Correlation of a deterministic strategy file.
    FromDet { strategy: PathBuf, game: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum WitnessCmd {
    /// Residuals of the perfect-strategy identities plus measured ratios.
    Report { strategy: PathBuf, game: PathBuf },
    /// State identities and the meet-family partition on the cyclic subspace.
    Identities { strategy: PathBuf, game: PathBuf },
    /// Word-reversal discrepancies; enumerates words up to --len by default.
    Words {
        strategy: PathBuf,
        game: PathBuf,
        /// Enumerate all Alice words up to this length.
        #[arg(long, default_value_t = 2)]
        len: usize,
        /// Optional JSON file with explicit words [[ [x,a], ... ], ...].
        #[arg(long)]
        words: Option<PathBuf>,
    },
    /// Word trace check on one side.
    Trace {
        strategy: PathBuf,
        game: PathBuf,
        #[arg(long, default_value = "bob")]
        side: String,
        #[arg(long, default_value_t = 3)]
        len: usize,
    },
    /// Residual scaling scan over a strategy family (decreasing leak).
    Scan {
        game: PathBuf,
        strategies: Vec<PathBuf>,
        #[arg(long, default_value_t = 2)]
        len: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum ConstructCmd {
    /// Correlation tau(E F) from a trace and generator images.
    Corr {
        trace: PathBuf,
        hom: PathBuf,
        game: PathBuf,
    },
    /// GNS representation by purification.
    Gns {
        trace: PathBuf,
        hom: PathBuf,
        /// Eigenvalue truncation for the quotient.
        #[arg(long, default_value_t = 1e-12)]
        truncation: f64,
    },
    /// Explicit tensor strategy reproducing the trace correlation.
    Realize {
        trace: PathBuf,
        hom: PathBuf,
        game: PathBuf,
    },
    /// Boundedness margins of the product functional on generator words.
    Amenable {
        trace: PathBuf,
        hom: PathBuf,
        #[arg(long, default_value_t = 2)]
        len: usize,
    },
    /// Trace property of the functional over generator words.
    TraceCheck {
        trace: PathBuf,
        hom: PathBuf,
        #[arg(long, default_value_t = 3)]
        len: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum MemberCmd {
    /// Perfect non-signalling feasibility by phase-1 simplex.
    Ns { game: PathBuf },
    /// Exhaustive search for a perfect deterministic strategy.
    Classical {
        game: PathBuf,
        #[arg(long, default_value_t = CLASSICAL_SEARCH_CAP)]
        cap: u128,
    },
    /// Seesaw lower bound on the quantum value.
    Seesaw {
        game: PathBuf,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 50)]
        iters: usize,
    },
}

pub struct RunOutput {
    pub exit_code: i32,
    pub report: String,
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Input {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn load_game(path: &Path) -> Result<Game> {
    let text = read_file(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Input {
        path: path.display().to_string(),
        message: format!("game: {e}"),
    })
}

fn load_correlation(path: &Path) -> Result<Correlation> {
    let text = read_file(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Input {
        path: path.display().to_string(),
        message: format!("correlation: {e}"),
    })
}

fn load_tensor_strategy(path: &Path, tol: f64) -> Result<TensorStrategy> {
    let text = read_file(path)?;
    parse_tensor_strategy(&text, tol).map_err(|e| Error::Input {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Input errors exit 2; checked failures (classification, gates, residuals)
/// exit 1.
fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Input { .. }
        | Error::Io(_)
        | Error::EmptySet { .. }
        | Error::DimensionMismatch { .. }
        | Error::RangeError { .. }
        | Error::InvalidState { .. }
        | Error::NotAProjection { .. }
        | Error::InvalidPvm { .. }
        | Error::InvalidStrategy { .. } => 2,
        _ => 1,
    }
}

fn error_report(err: &Error) -> String {
    let value = json!({ "error": err.to_string() });
    to_pretty(&value)
}

fn to_pretty(value: &serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serialization");
    text.push('\n');
    text
}

fn to_value<T: serde::Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("report serialization")
}

pub fn run(config: &RunConfig) -> RunOutput {
    match dispatch(config) {
        Ok((exit_code, value)) => RunOutput {
            exit_code,
            report: to_pretty(&value),
        },
        Err(err) => RunOutput {
            exit_code: exit_code_for(&err),
            report: error_report(&err),
        },
    }
}

fn dispatch(config: &RunConfig) -> Result<(i32, serde_json::Value)> {
    if config.tol <= 0.0 || config.tol.is_nan() {
        return Err(Error::Input {
            path: "--tol".into(),
            message: format!("tolerance must be positive, got {}", config.tol),
        });
    }
    let tol = config.tol;
    match &config.command {
        Command::Game { cmd } => match cmd {
            GameCmd::Validate { game } => {
                let g = load_game(game)?;
                g.validate()?;
                Ok((
                    0,
                    json!({
                        "valid": true,
                        "x": g.x_count(), "y": g.y_count(),
                        "a": g.a_count(), "b": g.b_count(),
                        "zero_support_len": g.zero_support().len(),
                    }),
                ))
            }
            GameCmd::Classify { game } => {
                let g = load_game(game)?;
                let report = g.imitation_report();
                let code = i32::from(!report.is_imitation);
                Ok((code, to_value(&report)))
            }
        },
        Command::Corr { cmd } => match cmd {
            CorrCmd::Check { correlation, game } => {
                let c = load_correlation(correlation)?;
                let ns = c.nonsignalling_report(tol);
                let mut pass = ns.pass;
                let mut value = json!({ "tol": tol, "nonsignalling": to_value(&ns) });
                if let Some(path) = game {
                    let g = load_game(path)?;
                    let perfect = c.perfect_report(&g, tol)?;
                    let eps = c.epsilon_violation(&g)?;
                    pass = pass && perfect.pass;
                    value["perfect"] = to_value(&perfect);
                    value["epsilon_violation"] = json!(eps);
                }
                Ok((i32::from(!pass), value))
            }
            CorrCmd::FromStrategy { strategy, game } => {
                let g = load_game(game)?;
                let text = read_file(strategy)?;
                // tensor strategies carry dim_a/dim_b, commuting ones dim
                let c = if text.contains("\"dim_a\"") {
                    let s = parse_tensor_strategy(&text, tol).map_err(|e| Error::Input {
                        path: strategy.display().to_string(),
                        message: e.to_string(),
                    })?;
                    correlation_from_tensor(&s, &g)?
                } else {
                    let s = parse_commuting_strategy(&text, tol).map_err(|e| Error::Input {
                        path: strategy.display().to_string(),
                        message: e.to_string(),
                    })?;
                    correlation_from_commuting(&s, &g)?
                };
                Ok((0, json!({ "tol": tol, "correlation": c.to_json() })))
            }
            CorrCmd::FromDet { strategy, game } => {
                let g = load_game(game)?;
                let text = read_file(strategy)?;
                let d: DeterministicStrategy =
                    serde_json::from_str(&text).map_err(|e| Error::Input {
                        path: strategy.display().to_string(),
                        message: format!("deterministic strategy: {e}"),
                    })?;
                let c = correlation_from_deterministic(&d, &g)?;
                let win = c.winning_probability(&g)?;
                Ok((
                    0,
                    json!({
                        "correlation": c.to_json(),
                        "winning_probability": win,
                    }),
                ))
            }
        },
        Command::Witness { cmd } => match cmd {
            WitnessCmd::Report { strategy, game } => {
                let g = load_game(game)?;
                let s = load_tensor_strategy(strategy, tol)?;
                let report = witness_report(&s, &g, tol)?;
                // residual bounds are only asserted for (near-)perfect inputs
                let bound = 10.0 * tol * (report.dim_a * report.dim_b) as f64;
                let gated = [
                    report.r1,
                    report.r2,
                    report.r3,
                    report.r4,
                    report.r5,
                    report.commutator_defect,
                ]
                .iter()
                .all(|&r| r <= bound);
                let pass = report.eps_input > tol || gated;
                Ok((i32::from(!pass), to_value(&report)))
            }
            WitnessCmd::Identities { strategy, game } => {
                let g = load_game(game)?;
                let s = load_tensor_strategy(strategy, tol)?;
                let report = restricted_identities(&s, &g, tol)?;
                Ok((i32::from(!report.pass), to_value(&report)))
            }
            WitnessCmd::Words {
                strategy,
                game,
                len,
                words,
            } => {
                let g = load_game(game)?;
                let s = load_tensor_strategy(strategy, tol)?;
                let word_list: Vec<Word> = match words {
                    Some(path) => {
                        let text = read_file(path)?;
                        let raw: Vec<Vec<[usize; 2]>> =
                            serde_json::from_str(&text).map_err(|e| Error::Input {
                                path: path.display().to_string(),
                                message: format!("word list: {e}"),
                            })?;
                        raw.into_iter()
                            .map(|w| w.into_iter().map(|p| (p[0], p[1])).collect())
                            .collect()
                    }
                    None => enumerate_words(g.x_count(), g.a_count(), *len),
                };
                let report = word_reversal_check(&s, &g, &word_list, config.max_len, tol)?;
                Ok((i32::from(!report.pass), to_value(&report)))
            }
            WitnessCmd::Trace {
                strategy,
                game,
                side,
                len,
            } => {
                let g = load_game(game)?;
                let s = load_tensor_strategy(strategy, tol)?;
                s.ensure_shape(&g)?;
                let side = match side.as_str() {
                    "alice" => Side::Alice,
                    "bob" => Side::Bob,
                    other => {
                        return Err(Error::Input {
                            path: "--side".into(),
                            message: format!("expected alice|bob, got {other}"),
                        })
                    }
                };
                let report = trace_check(&s, side, *len, tol)?;
                Ok((i32::from(!report.pass), to_value(&report)))
            }
            WitnessCmd::Scan {
                game,
                strategies,
                len,
            } => {
                let g = load_game(game)?;
                let family = strategies
                    .iter()
                    .map(|p| load_tensor_strategy(p, tol))
                    .collect::<Result<Vec<_>>>()?;
                let report = state_convergence_scan(&family, &g, *len, tol)?;
                Ok((0, to_value(&report)))
            }
        },
        Command::Construct { cmd } => match cmd {
            ConstructCmd::Corr { trace, hom, game } => {
                let g = load_game(game)?;
                let t = parse_trace_spec(&read_file(trace)?, tol)?;
                let h = parse_hom_spec(&read_file(hom)?, tol)?;
                let c = correlation_from_trace(&t, &h, &g)?;
                let ns = c.nonsignalling_report(tol);
                Ok((
                    i32::from(!ns.pass),
                    json!({
                        "tol": tol,
                        "correlation": c.to_json(),
                        "nonsignalling": to_value(&ns),
                    }),
                ))
            }
            ConstructCmd::Gns {
                trace,
                hom,
                truncation,
            } => {
                let t = parse_trace_spec(&read_file(trace)?, tol)?;
                let h = parse_hom_spec(&read_file(hom)?, tol)?;
                let r = gns(&t, &h, *truncation)?;
                let pass = r.fidelity_defect <= 10.0 * tol * r.hilbert_dim as f64;
                Ok((i32::from(!pass), r.to_json()))
            }
            ConstructCmd::Realize { trace, hom, game } => {
                let g = load_game(game)?;
                let t = parse_trace_spec(&read_file(trace)?, tol)?;
                let h = parse_hom_spec(&read_file(hom)?, tol)?;
                let s = tensor_realization(&t, &h, &g)?;
                let realized = correlation_from_tensor(&s, &g)?;
                let direct = correlation_from_trace(&t, &h, &g)?;
                let distance = realized.distance(&direct)?;
                Ok((
                    0,
                    json!({
                        "tol": tol,
                        "roundtrip_distance": distance,
                        "correlation": realized.to_json(),
                        "strategy": s.to_json(),
                    }),
                ))
            }
            ConstructCmd::Amenable { trace, hom, len } => {
                let t = parse_trace_spec(&read_file(trace)?, tol)?;
                let h = parse_hom_spec(&read_file(hom)?, tol)?;
                let words = enumerate_gen_words(&h, *len);
                let report = amenability_functional(&t, &h, &words, tol)?;
                Ok((i32::from(!report.pass), to_value(&report)))
            }
            ConstructCmd::TraceCheck { trace, hom, len } => {
                let t = parse_trace_spec(&read_file(trace)?, tol)?;
                let h = parse_hom_spec(&read_file(hom)?, tol)?;
                let report = trace_property_check(&t, &h, *len, tol)?;
                Ok((i32::from(!report.pass), to_value(&report)))
            }
        },
        Command::Member { cmd } => match cmd {
            MemberCmd::Ns { game } => {
                let g = load_game(game)?;
                let r = ns_feasible(&g)?;
                let value = json!({
                    "feasible": r.feasible,
                    "witness": r.witness.as_ref().map(|w| w.to_json()),
                });
                Ok((i32::from(!r.feasible), value))
            }
            MemberCmd::Classical { game, cap } => {
                let g = load_game(game)?;
                let r = classical_perfect(&g, *cap)?;
                let found = r.strategy.is_some();
                Ok((i32::from(!found), to_value(&r)))
            }
            MemberCmd::Seesaw { game, dim, iters } => {
                let g = load_game(game)?;
                let out = seesaw(&g, *dim, *iters, config.seed)?;
                Ok((
                    0,
                    json!({
                        "seed": config.seed,
                        "dim": dim,
                        "iters": iters,
                        "values": out.values,
                        "final_value": out.final_value,
                    }),
                ))
            }
        },
        Command::Corpus { dir } => {
            std::fs::create_dir_all(dir)?;
            let games: [(&str, Game); 5] = [
                ("copy.json", corpus::copy_game()),
                ("all.json", corpus::all_game()),
                ("none.json", corpus::none_game()),
                ("chsh.json", corpus::chsh_game()),
                ("parity.json", corpus::parity_game()),
            ];
            let mut written = Vec::new();
            for (name, game) in &games {
                let path = dir.join(name);
                let mut text = serde_json::to_string_pretty(game).expect("game serialization");
                text.push('\n');
                std::fs::write(&path, text)?;
                written.push(path.display().to_string());
            }
            Ok((0, json!({ "written": written })))
        }
    }
}
