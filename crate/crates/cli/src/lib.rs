//! Command-line front end: file-based invocations of the game, behavior,
//! equilibrium, quantum, and search operations with JSON or tabular
//! reports.
//!
//! Exit codes: 0 for pass/feasible verdicts, 1 for fail/infeasible
//! verdicts, 2 for input errors (malformed JSON, schema violations, I/O).
//! Reports are deterministic: the JSON model has sorted keys and the table
//! rendering is derived from it.

use clap::{Parser, Subcommand, ValueEnum};
use epr_games::behavior::{
    check_embedding_zeros, check_no_signaling, check_normalization, complete_from_independent,
    factorizability_certificate, Behavior, BehaviorError, FactorizabilityResult,
};
use epr_games::equilibrium::{ccc_margins, enumerate_pure_ne, verify_ne};
use epr_games::files::{self, FileError};
use epr_games::game::classify_generalized_pd_with_margin;
use epr_games::game::PureProfile;
use epr_games::payoff::payoffs_from_joint;
use epr_games::quantum::born_joint_probabilities;
use epr_games::scalar::Scalar;
use epr_games::search::{search_ccc_feasible, SearchStatus};

use epr_games::behavior::{DEFAULT_LINEAR_TOL, DEFAULT_PRODUCT_TOL};
use epr_games::equilibrium::DEFAULT_NE_TOL;
use epr_games::game::DEFAULT_SYMMETRY_TOL;
use num_rational::BigRational;
use serde_json::{json, Map, Value};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "epr-games",
    version,
    about = "Analyze three-player symmetric games over 64-entry joint-probability behaviors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Tolerance override for the subcommand's checks.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Exact rational arithmetic (fraction strings stay exact; default
    /// tolerances become zero).
    #[arg(long, global = true)]
    exact: bool,

    /// Seed for randomized search directions.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Also write the JSON report to this path.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Game-table operations.
    Game {
        #[command(subcommand)]
        cmd: GameCmd,
    },
    /// Evaluate mixed-strategy payoffs over a behavior or coin file.
    Payoff {
        game: PathBuf,
        /// Behavior file, completion form, or coin file.
        behavior: PathBuf,
        /// Mixing probabilities x,y,z (fractions allowed).
        #[arg(long)]
        profile: String,
    },
    /// Joint-probability behavior operations.
    Probs {
        #[command(subcommand)]
        cmd: ProbsCmd,
    },
    /// Nash-equilibrium operations.
    Ne {
        #[command(subcommand)]
        cmd: NeCmd,
    },
    /// Quantum behavior generation.
    Quantum {
        #[command(subcommand)]
        cmd: QuantumCmd,
    },
    /// Feasibility search.
    Search {
        #[command(subcommand)]
        cmd: SearchCmd,
    },
}

#[derive(Subcommand)]
enum GameCmd {
    /// Classify a symmetric game as a generalized three-player Prisoner's
    /// Dilemma.
    CheckPd { game: PathBuf },
}

#[derive(Subcommand)]
enum ProbsCmd {
    /// Check normalization, no-signaling, and the embedding zeros.
    Check { behavior: PathBuf },
    /// Certify factorizability into six coin parameters.
    Factorize { behavior: PathBuf },
    /// Complete a behavior from its 10 independent probabilities.
    Complete { independents: PathBuf },
}

#[derive(Subcommand)]
enum NeCmd {
    /// Verify a mixed profile as a Nash equilibrium.
    Verify {
        game: PathBuf,
        behavior: PathBuf,
        #[arg(long)]
        profile: String,
    },
    /// Enumerate all pure-profile Nash equilibria.
    Enumerate { game: PathBuf, behavior: PathBuf },
    /// Left-hand sides of the full-cooperation equilibrium inequalities.
    CccMargins { ratios: PathBuf, behavior: PathBuf },
}

#[derive(Subcommand)]
enum QuantumCmd {
    /// Generate the 64-entry behavior of a state measured with a setup.
    Generate { state: PathBuf, setup: PathBuf },
}

#[derive(Subcommand)]
enum SearchCmd {
    /// Search for a behavior making full cooperation an equilibrium.
    Ccc { problem: PathBuf },
}

/// What an invocation produced; `main` prints the streams and exits with
/// the code.
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let rendered = err.render().to_string();
            return if err.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: rendered }
            } else {
                Outcome { code: 0, stdout: rendered, stderr: String::new() }
            };
        }
    };

    let result = if cli.exact {
        execute::<BigRational>(&cli)
    } else {
        execute::<f64>(&cli)
    };

    match result {
        Ok(report) => {
            let json_text = format!("{:#}\n", report.value);
            if let Some(path) = &cli.output {
                if let Err(e) = std::fs::write(path, &json_text) {
                    return Outcome {
                        code: 2,
                        stdout: String::new(),
                        stderr: format!("error: cannot write {}: {e}\n", path.display()),
                    };
                }
            }
            let stdout = match cli.format {
                Format::Json => json_text,
                Format::Table => report.table,
            };
            Outcome { code: if report.pass { 0 } else { 1 }, stdout, stderr: String::new() }
        }
        Err(err) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {err}\n"),
        },
    }
}

struct Report {
    value: Value,
    table: String,
    pass: bool,
}

fn read_file(path: &Path) -> Result<String, FileError> {
    std::fs::read_to_string(path).map_err(|e| FileError::Field {
        field: path.display().to_string(),
        message: format!("cannot read file: {e}"),
    })
}

fn tol_or<S: Scalar>(over: Option<f64>, hint: f64) -> S {
    match over {
        Some(t) => S::from_f64_exact(t),
        None => S::default_tol(hint),
    }
}

/// Render a scalar JSON value for the table view: fraction strings pass
/// through, floats print with five decimals.
fn show(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        Value::Number(n) => match n.as_f64() {
            Some(v) => format!("{v:.5}"),
            None => n.to_string(),
        },
        other => other.to_string(),
    }
}

fn scalar_list<S: Scalar>(values: &[S]) -> Value {
    Value::Array(values.iter().map(files::scalar_to_value).collect())
}

fn triple_value<S: Scalar>(t: &epr_games::PayoffTriple<S>) -> Value {
    let mut obj = Map::new();
    obj.insert("alice".into(), files::scalar_to_value(&t.alice));
    obj.insert("bob".into(), files::scalar_to_value(&t.bob));
    obj.insert("chris".into(), files::scalar_to_value(&t.chris));
    Value::Object(obj)
}

fn corner_value(profile: &PureProfile) -> Value {
    let bit = |c: epr_games::game::Choice| match c {
        epr_games::game::Choice::First => 1,
        epr_games::game::Choice::Second => 0,
    };
    json!([bit(profile.alice), bit(profile.bob), bit(profile.chris)])
}

fn factorizability_value<S: Scalar>(verdict: &FactorizabilityResult<S>) -> Value {
    match verdict {
        FactorizabilityResult::Factorizable(coins) => json!({
            "factorizable": true,
            "coins": {
                "alice": [files::scalar_to_value(&coins.alice_first), files::scalar_to_value(&coins.alice_second)],
                "bob": [files::scalar_to_value(&coins.bob_first), files::scalar_to_value(&coins.bob_second)],
                "chris": [files::scalar_to_value(&coins.chris_first), files::scalar_to_value(&coins.chris_second)],
            },
        }),
        FactorizabilityResult::NonFactorizable(w) => json!({
            "factorizable": false,
            "witness": {
                "index": w.entry_index,
                "product": files::scalar_to_value(&w.product),
                "entry": files::scalar_to_value(&w.entry),
                "deviation": files::scalar_to_value(&w.deviation),
            },
        }),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn execute<S: Scalar>(cli: &Cli) -> Result<Report, FileError> {
    if let Some(t) = cli.tol {
        if !t.is_finite() || t < 0.0 {
            return Err(FileError::Field {
                field: "--tol".into(),
                message: format!("tolerance must be a finite nonnegative number, got {t}"),
            });
        }
    }
    match &cli.command {
        Command::Game { cmd: GameCmd::CheckPd { game } } => {
            let g: epr_games::SymmetricGame<S> =
                files::parse_game(&read_file(game)?, &tol_or::<S>(None, DEFAULT_SYMMETRY_TOL))?;
            let margin = tol_or::<S>(cli.tol, 0.0);
            let report = classify_generalized_pd_with_margin(&g, &margin);
            let value = json!({
                "is_generalized_pd": report.is_generalized_pd,
                "condition_a": report.condition_a,
                "condition_b": report.condition_b,
                "condition_c": report.condition_c,
                "violated_inequalities": report.violated_inequalities,
            });
            let mut table = format!(
                "generalized PD: {}\nconditions: a={} b={} c={}\n",
                yes_no(report.is_generalized_pd),
                yes_no(report.condition_a),
                yes_no(report.condition_b),
                yes_no(report.condition_c),
            );
            if !report.violated_inequalities.is_empty() {
                table.push_str(&format!(
                    "violated: {}\n",
                    report.violated_inequalities.join(", ")
                ));
            }
            Ok(Report { value, table, pass: report.is_generalized_pd })
        }

        Command::Payoff { game, behavior, profile } => {
            let g: epr_games::SymmetricGame<S> =
                files::parse_game(&read_file(game)?, &tol_or::<S>(None, DEFAULT_SYMMETRY_TOL))?;
            let b: Behavior<S> = files::parse_behavior_or_coins(&read_file(behavior)?)?;
            let m = files::parse_profile_arg::<S>(profile)?;
            let payoffs = payoffs_from_joint(&g, &b, &m);
            let value = triple_value(&payoffs);
            let table = format!(
                "alice: {}\nbob: {}\nchris: {}\n",
                show(&value["alice"]),
                show(&value["bob"]),
                show(&value["chris"]),
            );
            Ok(Report { value, table, pass: true })
        }

        Command::Probs { cmd } => execute_probs::<S>(cli, cmd),
        Command::Ne { cmd } => execute_ne::<S>(cli, cmd),

        Command::Quantum { cmd: QuantumCmd::Generate { state, setup } } => {
            if cli.exact {
                return Err(FileError::Field {
                    field: "--exact".into(),
                    message: "quantum generation is float-only (Born probabilities are generically irrational)".into(),
                });
            }
            let state = files::parse_state(&read_file(state)?)?;
            let setup = files::parse_setup(&read_file(setup)?)?;
            let behavior = born_joint_probabilities(&state, &setup)?;
            let tol = cli.tol.unwrap_or(1e-10);
            let normalization = check_normalization(&behavior, &tol);
            let no_signaling = check_no_signaling(&behavior, &tol);
            let mut value = files::behavior_to_value(&behavior);
            let obj = value.as_object_mut().expect("behavior value is an object");
            obj.insert("normalization_pass".into(), json!(normalization.pass));
            obj.insert("no_signaling_pass".into(), json!(no_signaling.pass));
            let pass = normalization.pass && no_signaling.pass;
            let mut table = String::new();
            for ctx in 0..8 {
                let row: Vec<String> = (0..8)
                    .map(|oi| format!("{:.5}", behavior.at(ctx, oi)))
                    .collect();
                table.push_str(&format!("context {}: {}\n", ctx + 1, row.join(" ")));
            }
            table.push_str(&format!(
                "normalization: {}\nno-signaling: {}\n",
                yes_no(normalization.pass),
                yes_no(no_signaling.pass),
            ));
            Ok(Report { value, table, pass })
        }

        Command::Search { cmd: SearchCmd::Ccc { problem } } => {
            let problem: epr_games::search::SearchProblem<S> =
                files::parse_problem(&read_file(problem)?, cli.seed)?;
            let result = search_ccc_feasible(&problem)?;
            match result.status {
                SearchStatus::Feasible(behavior) => {
                    let margins = result.margins.expect("feasible results carry margins");
                    let verdict =
                        result.factorizability.expect("feasible results carry a verdict");
                    let mut value = files::behavior_to_value(&behavior);
                    let obj = value.as_object_mut().expect("behavior value is an object");
                    obj.insert("status".into(), json!("feasible"));
                    obj.insert("margins".into(), scalar_list(&margins));
                    obj.insert("factorizability".into(), factorizability_value(&verdict));
                    let table = format!(
                        "status: feasible\nmargins: {} {} {}\nfactorizable: {}\n",
                        show(&value["margins"][0]),
                        show(&value["margins"][1]),
                        show(&value["margins"][2]),
                        yes_no(verdict.is_factorizable()),
                    );
                    Ok(Report { value, table, pass: true })
                }
                SearchStatus::Infeasible => Ok(Report {
                    value: json!({"status": "infeasible"}),
                    table: "status: infeasible\n".to_string(),
                    pass: false,
                }),
            }
        }
    }
}

fn execute_probs<S: Scalar>(cli: &Cli, cmd: &ProbsCmd) -> Result<Report, FileError> {
    match cmd {
        ProbsCmd::Check { behavior } => {
            let b: Behavior<S> = files::parse_behavior_or_coins(&read_file(behavior)?)?;
            let tol = tol_or::<S>(cli.tol, DEFAULT_LINEAR_TOL);
            let normalization = check_normalization(&b, &tol);
            let no_signaling = check_no_signaling(&b, &tol);
            let zeros = check_embedding_zeros(&b, &tol);
            let pass = normalization.pass && no_signaling.pass && zeros.pass;
            let chains: Vec<Value> = no_signaling
                .chains
                .iter()
                .map(|c| {
                    json!({
                        "player": format!("{:?}", c.player),
                        "setting": match c.setting {
                            epr_games::game::Choice::First => 1,
                            epr_games::game::Choice::Second => 2,
                        },
                        "sign": match c.sign {
                            epr_games::behavior::Sign::Plus => "+",
                            epr_games::behavior::Sign::Minus => "-",
                        },
                        "values": scalar_list(&c.values),
                        "max_deviation": files::scalar_to_value(&c.max_deviation),
                    })
                })
                .collect();
            let value = json!({
                "pass": pass,
                "normalization": {
                    "pass": normalization.pass,
                    "block_residuals": scalar_list(&normalization.block_residuals),
                    "out_of_range": normalization.out_of_range.iter()
                        .map(|(i, v)| json!([i, files::scalar_to_value(v)])).collect::<Vec<_>>(),
                },
                "no_signaling": { "pass": no_signaling.pass, "chains": chains },
                "embedding_zeros": {
                    "pass": zeros.pass,
                    "violations": zeros.violations.iter()
                        .map(|(i, v)| json!([i, files::scalar_to_value(v)])).collect::<Vec<_>>(),
                },
            });
            let table = format!(
                "normalization: {}\nno-signaling: {}\nembedding zeros: {}\noverall: {}\n",
                yes_no(normalization.pass),
                yes_no(no_signaling.pass),
                yes_no(zeros.pass),
                yes_no(pass),
            );
            Ok(Report { value, table, pass })
        }

        ProbsCmd::Factorize { behavior } => {
            let b: Behavior<S> = files::parse_behavior_or_coins(&read_file(behavior)?)?;
            let tol = tol_or::<S>(cli.tol, DEFAULT_PRODUCT_TOL);
            let verdict = factorizability_certificate(&b, &tol)?;
            let value = factorizability_value(&verdict);
            let table = match &verdict {
                FactorizabilityResult::Factorizable(_) => {
                    let c = &value["coins"];
                    format!(
                        "factorizable: yes\nalice: {} {}\nbob: {} {}\nchris: {} {}\n",
                        show(&c["alice"][0]),
                        show(&c["alice"][1]),
                        show(&c["bob"][0]),
                        show(&c["bob"][1]),
                        show(&c["chris"][0]),
                        show(&c["chris"][1]),
                    )
                }
                FactorizabilityResult::NonFactorizable(w) => format!(
                    "factorizable: no\nwitness: p{} = {} vs product {} (deviation {})\n",
                    w.entry_index,
                    show(&value["witness"]["entry"]),
                    show(&value["witness"]["product"]),
                    show(&value["witness"]["deviation"]),
                ),
            };
            Ok(Report { value, table, pass: verdict.is_factorizable() })
        }

        ProbsCmd::Complete { independents } => {
            let ind = files::parse_independents::<S>(&read_file(independents)?)?;
            match complete_from_independent(&ind) {
                Ok(behavior) => {
                    let mut value = files::behavior_to_value(&behavior);
                    let obj = value.as_object_mut().expect("behavior value is an object");
                    obj.insert("feasible".into(), json!(true));
                    let mut table = String::from("feasible: yes\n");
                    for idx in [2, 4, 7, 8, 14, 16, 24, 28, 31, 32, 36, 40, 47, 48, 54, 56, 64] {
                        table.push_str(&format!(
                            "p{idx} = {}\n",
                            show(&files::scalar_to_value(behavior.p(idx))),
                        ));
                    }
                    Ok(Report { value, table, pass: true })
                }
                Err(BehaviorError::Infeasible(violations)) => {
                    let table = format!("feasible: no\n{}\n", violations.join("\n"));
                    Ok(Report {
                        value: json!({"feasible": false, "violations": violations}),
                        table,
                        pass: false,
                    })
                }
                Err(other) => Err(other.into()),
            }
        }
    }
}

fn execute_ne<S: Scalar>(cli: &Cli, cmd: &NeCmd) -> Result<Report, FileError> {
    match cmd {
        NeCmd::Verify { game, behavior, profile } => {
            let g: epr_games::SymmetricGame<S> =
                files::parse_game(&read_file(game)?, &tol_or::<S>(None, DEFAULT_SYMMETRY_TOL))?;
            let b: Behavior<S> = files::parse_behavior_or_coins(&read_file(behavior)?)?;
            let m = files::parse_profile_arg::<S>(profile)?;
            let tol = tol_or::<S>(cli.tol, DEFAULT_NE_TOL);
            let verdict = verify_ne(&g, &b, &m, &tol);
            let value = json!({
                "is_ne": verdict.is_ne,
                "margins": scalar_list(&verdict.margins),
                "deviations": scalar_list(&verdict.deviations),
            });
            let table = format!(
                "is ne: {}\nmargins: {} {} {}\n",
                yes_no(verdict.is_ne),
                show(&value["margins"][0]),
                show(&value["margins"][1]),
                show(&value["margins"][2]),
            );
            Ok(Report { value, table, pass: verdict.is_ne })
        }

        NeCmd::Enumerate { game, behavior } => {
            let g: epr_games::SymmetricGame<S> =
                files::parse_game(&read_file(game)?, &tol_or::<S>(None, DEFAULT_SYMMETRY_TOL))?;
            let b: Behavior<S> = files::parse_behavior_or_coins(&read_file(behavior)?)?;
            let tol = tol_or::<S>(cli.tol, DEFAULT_NE_TOL);
            let equilibria = enumerate_pure_ne(&g, &b, &tol);
            let value = json!({
                "equilibria": equilibria.iter().map(corner_value).collect::<Vec<_>>(),
            });
            let rendering: Vec<String> = equilibria
                .iter()
                .map(|p| {
                    let v = corner_value(p);
                    format!("({},{},{})", v[0], v[1], v[2])
                })
                .collect();
            let table = format!(
                "equilibria: {}\n",
                if rendering.is_empty() {
                    "none".to_string()
                } else {
                    rendering.join(" ")
                }
            );
            Ok(Report { value, table, pass: true })
        }

        NeCmd::CccMargins { ratios, behavior } => {
            let r: epr_games::equilibrium::RatioGame<S> =
                files::parse_ratios(&read_file(ratios)?)?;
            let b: Behavior<S> = files::parse_behavior_or_coins(&read_file(behavior)?)?;
            let tol = tol_or::<S>(cli.tol, DEFAULT_LINEAR_TOL);
            let margins = ccc_margins(&r, &b, &tol)?;
            let is_ne = margins.iter().all(|m| *m >= S::zero());
            let value = json!({
                "margins": scalar_list(&margins),
                "is_ne": is_ne,
            });
            let table = format!(
                "margins: {} {} {}\nfull cooperation is ne: {}\n",
                show(&value["margins"][0]),
                show(&value["margins"][1]),
                show(&value["margins"][2]),
                yes_no(is_ne),
            );
            Ok(Report { value, table, pass: is_ne })
        }
    }
}
