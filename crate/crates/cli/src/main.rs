//! Command-line front end for the jar-emptying solver.
//!
//! Results go to standard output, diagnostics to standard error, and exit
//! codes are stable so scripts can branch on them:
//!
//! * `0` — success (for `verify`: the replay emptied the state)
//! * `1` — any ordinary failure (bad input, replay error, state not emptied)
//! * `2` — command-line usage error
//! * `3` — a state outside the configured value/jar limits
//! * `4` — the solver gave up because its time budget ran out

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cookie_monster::{
    best_strategy, bound_report, family_table_csv, nacci_strategy, parse_state, solve,
    solve_family_table, verify_sequence, AmountMode, JarState, Move, MoveSequence, NacciFamily,
    SolveError, SolverConfig,
};
use serde::Serialize;

/// Environment override for the largest accepted jar value.
const MAX_VALUE_ENV: &str = "COOKIE_SOLVER_MAX_VALUE";
/// Environment override for the largest accepted jar count.
const MAX_JARS_ENV: &str = "COOKIE_SOLVER_MAX_JARS";

#[derive(Parser)]
#[command(
    name = "cookie-solver",
    version,
    about = "Exact solver, bounds, and strategy generator for the jar-emptying game",
    long_about = "Exact solver, bounds, and strategy generator for the jar-emptying game.\n\
        A state is a set of cookie jars; a move removes one common positive\n\
        amount from any chosen subset of jars. The solver finds the minimum\n\
        number of moves to empty every jar, with a replayable witness."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the exact minimum number of moves, with a witness
    Solve(SolveCmd),
    /// Print the certified lower/upper bounds without searching
    Bound(BoundCmd),
    /// Generate the best known strategy and print its trace
    Strategy(StrategyCmd),
    /// Print terms of an order-n sequence, one `index<TAB>value` per line
    Sequence(SequenceCmd),
    /// Cross-check formula, strategy, and (with --oracle) exact search
    /// across a jar-set family, as CSV
    Table(TableCmd),
    /// Replay a moves file against a state file and report the verdict
    Verify(VerifyCmd),
}

/// Jar input shared by `solve`, `bound`, and `strategy`: values inline or a
/// file of states.
#[derive(Args)]
struct InputArgs {
    /// Jar values, space separated; omit for the empty state
    #[arg(value_name = "JAR", conflicts_with = "file")]
    jars: Vec<u64>,

    /// Read states from this file instead, one state per line
    #[arg(long, value_name = "PATH")]
    file: Option<PathBuf>,

    /// Print one compact JSON document per state
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SolveCmd {
    #[command(flatten)]
    input: InputArgs,

    /// Candidate move amounts: every amount up to the largest value, or
    /// only current values and their pairwise differences (a faster
    /// upper-bound heuristic)
    #[arg(long, value_enum, default_value_t = ModeArg::Full)]
    mode: ModeArg,

    #[command(flatten)]
    limits: LimitArgs,
}

#[derive(Args)]
struct BoundCmd {
    #[command(flatten)]
    input: InputArgs,
}

#[derive(Args)]
struct StrategyCmd {
    #[command(flatten)]
    input: InputArgs,
}

#[derive(Args)]
struct SequenceCmd {
    /// Sequence order (2 = Fibonacci, 3 = Tribonacci, …)
    #[arg(long, value_name = "ORDER")]
    n: u32,

    /// How many terms to print, starting at index 0
    #[arg(long, value_name = "COUNT")]
    count: u64,

    /// Print one JSON document instead of tab-separated lines
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct TableCmd {
    /// Sequence order of the jar-set family
    #[arg(long, value_name = "ORDER")]
    n: u32,

    /// Largest jar count; rows cover k = 1..=k_max
    #[arg(long, value_name = "K")]
    k_max: u64,

    /// Also run the exact solver and add the exact_cm/agree columns
    #[arg(long)]
    oracle: bool,

    #[command(flatten)]
    limits: LimitArgs,
}

#[derive(Args)]
struct VerifyCmd {
    /// File holding the starting state as space-separated values
    #[arg(value_name = "STATE_FILE")]
    state_file: PathBuf,

    /// JSON file holding the moves: a bare move array, a
    /// {source, moves} sequence, or a full solver result
    #[arg(value_name = "MOVES_FILE")]
    moves_file: PathBuf,

    /// Print the verdict as compact JSON
    #[arg(long)]
    json: bool,
}

/// Solver resource limits. Flags beat the environment, which beats the
/// built-in defaults (value 50, jars 7).
#[derive(Args)]
struct LimitArgs {
    /// Largest jar value accepted [env: COOKIE_SOLVER_MAX_VALUE]
    #[arg(long, value_name = "N")]
    max_value: Option<u64>,

    /// Largest number of jars accepted [env: COOKIE_SOLVER_MAX_JARS]
    #[arg(long, value_name = "N")]
    max_jars: Option<usize>,

    /// Worker threads for the search
    #[arg(long, default_value_t = 1, value_name = "N")]
    threads: usize,

    /// Give up once the search has run this many seconds
    #[arg(long, value_name = "SECONDS")]
    time_budget: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Full,
    Restricted,
}

impl From<ModeArg> for AmountMode {
    fn from(mode: ModeArg) -> AmountMode {
        match mode {
            ModeArg::Full => AmountMode::Full,
            ModeArg::Restricted => AmountMode::Restricted,
        }
    }
}

/// A failure carrying its exit code; the message lands on standard error.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(message: impl Into<String>) -> Failure {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    fn from_solve(err: SolveError) -> Failure {
        let code = match err {
            SolveError::LimitExceeded { .. } => 3,
            SolveError::BudgetExceeded { .. } => 4,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Solve(cmd) => cmd_solve(cmd),
        Command::Bound(cmd) => cmd_bound(cmd),
        Command::Strategy(cmd) => cmd_strategy(cmd),
        Command::Sequence(cmd) => cmd_sequence(cmd),
        Command::Table(cmd) => cmd_table(cmd),
        Command::Verify(cmd) => cmd_verify(cmd),
    }
}

fn cmd_solve(cmd: SolveCmd) -> Result<ExitCode, Failure> {
    let config = SolverConfig {
        amount_mode: cmd.mode.into(),
        ..cmd.limits.to_config()?
    };
    let states = cmd.input.states()?;
    for (i, state) in states.iter().enumerate() {
        let result = solve(state, &config).map_err(Failure::from_solve)?;
        if cmd.input.json {
            println!("{}", to_json(&result));
        } else {
            if i > 0 {
                println!();
            }
            println!("state: {}", display_state(state));
            println!("cm: {}", result.cm);
            for mv in &result.optimal.moves {
                println!("{mv}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_bound(cmd: BoundCmd) -> Result<ExitCode, Failure> {
    #[derive(Serialize)]
    struct BoundDoc<'a> {
        state: &'a JarState,
        lower: u64,
        lower_source: &'a str,
        upper: u64,
        upper_source: &'a str,
    }

    for (i, state) in cmd.input.states()?.iter().enumerate() {
        let report = bound_report(state);
        if cmd.input.json {
            println!(
                "{}",
                to_json(&BoundDoc {
                    state,
                    lower: report.lower,
                    lower_source: &report.lower_source,
                    upper: report.upper,
                    upper_source: &report.upper_source,
                })
            );
        } else {
            if i > 0 {
                println!();
            }
            println!("state: {}", display_state(state));
            println!("lower: {} ({})", report.lower, report.lower_source);
            println!("upper: {} ({})", report.upper, report.upper_source);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_strategy(cmd: StrategyCmd) -> Result<ExitCode, Failure> {
    #[derive(Serialize)]
    struct StrategyDoc<'a> {
        strategy: &'a str,
        predicted: Option<u64>,
        actual: u64,
        source: &'a JarState,
        moves: &'a [Move],
    }

    for (i, state) in cmd.input.states()?.iter().enumerate() {
        let trace = best_strategy(state);
        if cmd.input.json {
            println!(
                "{}",
                to_json(&StrategyDoc {
                    strategy: &trace.name,
                    predicted: trace.predicted_length,
                    actual: trace.length,
                    source: &trace.sequence.source,
                    moves: &trace.sequence.moves,
                })
            );
        } else {
            if i > 0 {
                println!();
            }
            println!("state: {}", display_state(state));
            println!("strategy: {}", trace.name);
            match trace.predicted_length {
                Some(predicted) => println!("predicted: {predicted}"),
                None => println!("predicted: none"),
            }
            println!("actual: {}", trace.length);
            for mv in &trace.sequence.moves {
                println!("{mv}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_sequence(cmd: SequenceCmd) -> Result<ExitCode, Failure> {
    let family = NacciFamily::new(cmd.n).map_err(|e| Failure::new(e.to_string()))?;
    let mut terms = Vec::new();
    for index in 0..cmd.count {
        let term = family
            .term(index)
            .map_err(|e| Failure::new(e.to_string()))?;
        terms.push(term);
    }
    if cmd.json {
        #[derive(Serialize)]
        struct SequenceDoc {
            order: u32,
            terms: Vec<u64>,
        }
        println!(
            "{}",
            to_json(&SequenceDoc {
                order: cmd.n,
                terms,
            })
        );
    } else {
        for (index, term) in terms.iter().enumerate() {
            println!("{index}\t{term}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_table(cmd: TableCmd) -> Result<ExitCode, Failure> {
    if cmd.oracle {
        let config = cmd.limits.to_config()?;
        let rows = solve_family_table(cmd.n, cmd.k_max, &config)
            .map_err(|e| Failure::new(e.to_string()))?;
        print!("{}", family_table_csv(&rows));
    } else {
        let mut out = String::from("k,formula,strategy_len\n");
        for k in 1..=cmd.k_max {
            let trace = nacci_strategy(cmd.n, k).map_err(|e| Failure::new(e.to_string()))?;
            let predicted = trace
                .predicted_length
                .expect("family strategies always carry a prediction");
            out.push_str(&format!("{k},{predicted},{}\n", trace.length));
        }
        print!("{out}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(cmd: VerifyCmd) -> Result<ExitCode, Failure> {
    let state_text = read_file(&cmd.state_file)?;
    let state = parse_state(state_text.trim())
        .map_err(|e| Failure::new(format!("{}: {e}", cmd.state_file.display())))?;

    let moves_text = read_file(&cmd.moves_file)?;
    let doc: serde_json::Value = serde_json::from_str(&moves_text)
        .map_err(|e| Failure::new(format!("{}: {e}", cmd.moves_file.display())))?;
    // Accept a full solver result, a {source, moves} sequence, or a bare
    // move array; an embedded source must match the state file.
    let sequence_value = match doc.get("optimal") {
        Some(inner) => inner.clone(),
        None => doc,
    };
    let moves = if sequence_value.is_array() {
        serde_json::from_value::<Vec<Move>>(sequence_value)
            .map_err(|e| Failure::new(format!("{}: {e}", cmd.moves_file.display())))?
    } else {
        let sequence: MoveSequence = serde_json::from_value(sequence_value)
            .map_err(|e| Failure::new(format!("{}: {e}", cmd.moves_file.display())))?;
        if sequence.source != state {
            return Err(Failure::new(format!(
                "state file holds [{}] but the sequence was recorded for [{}]",
                display_state(&state),
                display_state(&sequence.source)
            )));
        }
        sequence.moves
    };

    let verdict =
        verify_sequence(&state, &moves).map_err(|e| Failure::new(format!("replay failed: {e}")))?;
    if cmd.json {
        println!("{}", to_json(&verdict));
    } else {
        println!("empties: {}", verdict.empties);
        println!("final_state: {}", display_state(&verdict.final_state));
        println!("cookies_eaten: {}", verdict.cookies_eaten);
    }
    if verdict.empties {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("state not emptied");
        Ok(ExitCode::FAILURE)
    }
}

impl InputArgs {
    /// Resolves the inline values or the batch file into canonical states.
    ///
    /// File input is one state per line; the first malformed line aborts
    /// with its line and column.
    fn states(&self) -> Result<Vec<JarState>, Failure> {
        match &self.file {
            None => Ok(vec![JarState::canonicalize(self.jars.iter().copied())]),
            Some(path) => {
                let text = read_file(path)?;
                let mut states = Vec::new();
                for (number, line) in text.lines().enumerate() {
                    let state = parse_state(line).map_err(|e| {
                        Failure::new(format!("{}:{}: {e}", path.display(), number + 1))
                    })?;
                    states.push(state);
                }
                Ok(states)
            }
        }
    }
}

impl LimitArgs {
    fn to_config(&self) -> Result<SolverConfig, Failure> {
        if self.threads == 0 {
            return Err(Failure::new("--threads must be at least 1"));
        }
        let time_budget = match self.time_budget {
            None => None,
            Some(seconds) if seconds.is_finite() && seconds > 0.0 => {
                Some(Duration::from_secs_f64(seconds))
            }
            Some(seconds) => {
                return Err(Failure::new(format!(
                    "--time-budget must be a positive number of seconds, got {seconds}"
                )))
            }
        };
        let defaults = SolverConfig::default();
        Ok(SolverConfig {
            max_value: resolve_cap(self.max_value, MAX_VALUE_ENV, defaults.max_value)?,
            max_jars: resolve_cap(self.max_jars, MAX_JARS_ENV, defaults.max_jars)?,
            threads: self.threads,
            time_budget,
            ..defaults
        })
    }
}

/// Flag value if given, else the environment variable, else the default.
fn resolve_cap<T: std::str::FromStr>(
    flag: Option<T>,
    env_name: &str,
    default: T,
) -> Result<T, Failure> {
    if let Some(value) = flag {
        return Ok(value);
    }
    match std::env::var(env_name) {
        Ok(raw) => raw.parse().map_err(|_| {
            Failure::new(format!(
                "{env_name} must be an unsigned integer, got {raw:?}"
            ))
        }),
        Err(_) => Ok(default),
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(format!("{}: {e}", path.display())))
}

fn display_state(state: &JarState) -> String {
    if state.is_empty() {
        "(empty)".to_string()
    } else {
        state.to_string()
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("output types serialize infallibly")
}
