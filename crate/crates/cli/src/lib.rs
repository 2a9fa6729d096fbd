//! Command-line front end for `timed-learn-core`.
//!
//! Exit codes: 0 success, 1 negative answer (non-member, not equivalent, invalid
//! automaton, learner gave up), 2 usage or input errors, 3 a learning cap was hit.

pub mod dot;
pub mod error;
pub mod format;
pub mod generate;
pub mod guard;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use timed_learn_core::learn::{
    learn_normal, learn_smart, postprocess_to_canonical, Decisions, LearnConfig, LearnEvent, Learned, Schedule,
};
use timed_learn_core::reset::{normal_form, reset_trace, SyntacticReset};
use timed_learn_core::teacher::{FnTeacher, SimulatedTeacher, Teacher};
use timed_learn_core::transform::{acceptorize, bound_reset_range, canonicalize, strictify};
use timed_learn_core::{equivalent, Automaton, Letter, Rational, Side, TimedWord, Verdict};

pub use dot::{export_dot, parse_dot};
pub use error::CliError;
pub use format::{parse_automaton, to_json, AutomatonFile};

#[derive(Parser, Debug)]
#[command(name = "timed-learn", version, about = "One-clock timed automata: canonical forms, equivalence, learning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check determinism, completeness and the acceptor invariant.
    Validate { automaton: PathBuf },
    /// Print the run of a timed word.
    Run { automaton: PathBuf, word: String },
    /// Exit 0 if the word is accepted, 1 otherwise.
    Member { automaton: PathBuf, word: String },
    /// Exit 0 if both accept the same language, else print a counterexample and exit 1.
    Equiv { left: PathBuf, right: PathBuf },
    /// Complete, then split states by clock region.
    Acceptorize(TransformArgs),
    /// Acceptorize, bound the reset range and remove integer regions.
    Strictify(TransformArgs),
    /// Compute the canonical strict acceptor.
    Canonicalize(TransformArgs),
    /// Print the reset trace of a word and its half-integral normal form.
    NormalForm { automaton: PathBuf, word: String },
    /// Print the clock value after every prefix of a word.
    Reset {
        /// Use the syntactic reset function of the language instead of the automaton's own.
        #[arg(long)]
        syntactic: bool,
        automaton: PathBuf,
        word: String,
    },
    /// Learn a target language from a simulated teacher.
    Learn(LearnArgs),
    /// Write Graphviz DOT.
    ExportDot {
        automaton: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Random complete automaton; TIMED_LEARN_SEED fixes the seed.
    Generate {
        #[arg(long, default_value_t = 3)]
        states: usize,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value = "a,b", value_delimiter = ',')]
        alphabet: Vec<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(clap::Args, Debug)]
struct TransformArgs {
    input: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Write every intermediate automaton as a numbered `NN-stage.json` file.
    #[arg(long)]
    trace: bool,
    /// Directory for trace files (default: the output's directory, or the current one).
    #[arg(long, value_name = "DIR", requires = "trace")]
    trace_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Smart,
    Normal,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ScheduleArg {
    CheapestFirst,
    LockStep,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Builtin {
    /// `{(t·a) | t ∈ ℕ}`, not recognizable by any one-clock automaton.
    IntegerDelays,
}

#[derive(clap::Args, Debug)]
struct LearnArgs {
    #[arg(long, value_enum)]
    mode: Mode,
    #[arg(long, required_unless_present = "builtin", conflicts_with = "builtin")]
    target: Option<PathBuf>,
    /// A built-in teacher without a target automaton.
    #[arg(long, value_enum)]
    builtin: Option<Builtin>,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Post-process into the canonical acceptor with equivalence queries.
    #[arg(long)]
    canonical: bool,
    #[arg(long)]
    stats: Option<PathBuf>,
    #[arg(long)]
    max_k: Option<u32>,
    #[arg(long)]
    max_tables: Option<u64>,
    #[arg(long)]
    max_pool: Option<u64>,
    #[arg(long, value_enum, default_value = "cheapest-first")]
    schedule: ScheduleArg,
    /// Print every table and conjecture to stderr.
    #[arg(long)]
    trace: bool,
}

#[derive(Serialize)]
struct StatsFile {
    membership_queries: u64,
    equivalence_queries: u64,
    tables_processed: u64,
    pool_peak: u64,
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load(path: &Path) -> Result<Automaton, CliError> {
    parse_automaton(&read(path)?)
}

fn word_for(a: &Automaton, text: &str) -> Result<TimedWord, CliError> {
    Ok(TimedWord::parse_with(text, a.alphabet())?)
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write_file(p, text),
        None => out.write_all(text.as_bytes()).map_err(|source| CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        }),
    }
}

fn io_out(e: std::io::Error) -> CliError {
    CliError::Io {
        path: PathBuf::from("<stdout>"),
        source: e,
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Validate { automaton } => {
            let a = load(&automaton)?;
            let problems = a.validate();
            for p in &problems {
                writeln!(out, "{p}").map_err(io_out)?;
            }
            if problems.is_empty() {
                writeln!(out, "valid").map_err(io_out)?;
                Ok(0)
            } else {
                Ok(1)
            }
        }
        Command::Run { automaton, word } => {
            let a = load(&automaton)?;
            let w = word_for(&a, &word)?;
            let run = a.run(&w)?;
            for (step, letter) in run.steps.iter().zip(w.letters()) {
                let t = &a.transitions()[step.transition];
                let reset = if t.update == timed_learn_core::ClockUpdate::Reset { ", 0" } else { "" };
                writeln!(
                    out,
                    "{} x={} --{}:{} [{}{}]--> {}",
                    step.state,
                    step.clock,
                    letter.delay,
                    letter.letter,
                    t.guard.guard_string(a.k()),
                    reset,
                    t.target
                )
                .map_err(io_out)?;
            }
            let verdict = if a.is_accepting(&run.final_state) { "accepted" } else { "rejected" };
            writeln!(out, "{} x={} {verdict}", run.final_state, run.final_clock).map_err(io_out)?;
            Ok(0)
        }
        Command::Member { automaton, word } => {
            let a = load(&automaton)?;
            let accepted = a.accepts(&word_for(&a, &word)?)?;
            writeln!(out, "{}", if accepted { "accepted" } else { "rejected" }).map_err(io_out)?;
            Ok(if accepted { 0 } else { 1 })
        }
        Command::Equiv { left, right } => {
            let (a, b) = (load(&left)?, load(&right)?);
            match equivalent(&a, &b)? {
                Verdict::Equivalent => {
                    writeln!(out, "equivalent").map_err(io_out)?;
                    Ok(0)
                }
                Verdict::Counterexample { word, accepted_by } => {
                    writeln!(out, "{word}").map_err(io_out)?;
                    let side = match accepted_by {
                        Side::Left => left.display(),
                        Side::Right => right.display(),
                    };
                    let _ = writeln!(err, "not equivalent: only {side} accepts the word");
                    Ok(1)
                }
            }
        }
        Command::Acceptorize(args) => transform(args, 2, out),
        Command::Strictify(args) => transform(args, 4, out),
        Command::Canonicalize(args) => transform(args, 7, out),
        Command::NormalForm { automaton, word } => {
            let a = load(&automaton)?.complete_with_sink()?;
            let w = word_for(&a, &word)?;
            let trace = reset_trace(&a, &w)?;
            let values: Vec<String> = trace.values().iter().map(|v| v.to_string()).collect();
            writeln!(out, "trace: {}", values.join(" ")).map_err(io_out)?;
            writeln!(out, "normal form: {}", normal_form(&trace, &w)?).map_err(io_out)?;
            Ok(0)
        }
        Command::Reset {
            syntactic,
            automaton,
            word,
        } => {
            let a = load(&automaton)?.complete_with_sink()?;
            let w = word_for(&a, &word)?;
            let values = if syntactic {
                SyntacticReset::new(&a)?.trace(&w)?
            } else {
                reset_trace(&a, &w)?
            };
            for (i, v) in values.values().iter().enumerate() {
                writeln!(out, "{}\t{v}", w.prefix(i)).map_err(io_out)?;
            }
            Ok(0)
        }
        Command::Learn(args) => learn(args, out, err),
        Command::ExportDot { automaton, output } => {
            let a = load(&automaton)?;
            emit(out, output.as_deref(), &export_dot(&a))?;
            Ok(0)
        }
        Command::Generate {
            states,
            k,
            alphabet,
            seed,
            output,
        } => {
            let seed = match seed {
                Some(s) => s,
                None => generate::seed_from_env()?,
            };
            let _ = writeln!(err, "seed {seed}");
            let a = generate::random_automaton(seed, states, k, &alphabet)?;
            emit(out, output.as_deref(), &to_json(&a))?;
            Ok(0)
        }
    }
}

/// Runs the first `stages` steps of the canonicalization pipeline.
fn transform(args: TransformArgs, stages: usize, out: &mut dyn Write) -> Result<i32, CliError> {
    let input = load(&args.input)?;
    let mut steps: Vec<(&str, Automaton)> = Vec::new();
    if stages == 7 {
        for (name, a) in canonicalize(&input)?.stages {
            let name = timed_learn_core::transform::STAGES
                .iter()
                .find(|s| **s == name)
                .copied()
                .unwrap_or("stage");
            steps.push((name, a));
        }
    } else {
        let complete = input.complete_with_sink()?;
        let acc = acceptorize(&complete)?;
        steps.push(("complete", complete));
        steps.push(("acceptorize", acc.clone()));
        if stages > 2 {
            let bounded = bound_reset_range(&acc)?;
            let strict = strictify(&bounded)?;
            steps.push(("bound-reset-range", bounded));
            steps.push(("strictify", strict));
        }
    }
    if args.trace {
        let dir = match &args.trace_dir {
            Some(d) => d.clone(),
            None => args
                .output
                .as_deref()
                .and_then(Path::parent)
                .map(Path::to_path_buf)
                .unwrap_or_default(),
        };
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(&dir).map_err(|source| CliError::Io {
                path: dir.clone(),
                source,
            })?;
        }
        for (i, (name, a)) in steps.iter().enumerate() {
            write_file(&dir.join(format!("{:02}-{name}.json", i + 1)), &to_json(a))?;
        }
    }
    let result = &steps.last().expect("at least one stage").1;
    emit(out, args.output.as_deref(), &to_json(result))?;
    Ok(0)
}

/// Teacher for `{(t·a) | t ∈ ℕ}`: every candidate is refuted at the delay just past
/// its constant, so the learner keeps raising `K`.
pub fn integer_delays_teacher() -> FnTeacher {
    let a = Letter::new("a").expect("valid letter");
    let letter = a.clone();
    FnTeacher::new(
        vec![a],
        |u| u.len() == 1 && u.letters()[0].delay.is_integer(),
        move |cand, _| {
            let n = Rational::from_integer(u64::from(cand.k()) + 1);
            let at_n = TimedWord::from_pairs([(n.clone(), letter.clone())]);
            // accepting n is right, so refute with the half-integer next to it
            match cand.accepts(&at_n) {
                Ok(true) => Some(TimedWord::from_pairs([(&n + &Rational::halves(1), letter.clone())])),
                _ => Some(at_n),
            }
        },
    )
    .with_reset(|_| Rational::zero())
}

fn learn(args: LearnArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let defaults = LearnConfig::default();
    let config = LearnConfig {
        max_k: args.max_k.unwrap_or(defaults.max_k),
        max_tables: args.max_tables.unwrap_or(defaults.max_tables),
        max_pool: args.max_pool.unwrap_or(defaults.max_pool),
    };
    let teacher: Box<dyn Teacher> = match (&args.target, args.builtin) {
        (Some(path), _) => Box::new(SimulatedTeacher::new(&load(path)?)?),
        (None, Some(Builtin::IntegerDelays)) => Box::new(integer_delays_teacher()),
        (None, None) => return Err(CliError::Usage("need --target or --builtin".into())),
    };
    let mut tracer = |e: &LearnEvent<'_>| {
        let _ = match e {
            LearnEvent::Started { table } => writeln!(err, "start\n{table}"),
            LearnEvent::Processed { action, table } => writeln!(err, "action {}\n{table}", action.number()),
            LearnEvent::Conjectured { conjecture, .. } => {
                writeln!(err, "conjecture with {} states", conjecture.states().len())
            }
            LearnEvent::Refined { counterexample, table } => {
                writeln!(err, "counterexample {counterexample}\n{table}")
            }
        };
    };
    let observer = if args.trace { Some(&mut tracer as _) } else { None };
    let Learned {
        mut automaton, stats, ..
    } = match args.mode {
        Mode::Smart => learn_smart(&*teacher, &config, observer)?,
        Mode::Normal => {
            let schedule = match args.schedule {
                ScheduleArg::CheapestFirst => Schedule::CheapestFirst,
                ScheduleArg::LockStep => Schedule::LockStep,
            };
            learn_normal(&*teacher, &config, schedule, Decisions::Enumerate, observer)?
        }
    };
    if args.canonical {
        automaton = postprocess_to_canonical(&automaton, &*teacher)?;
    }
    if let Some(path) = &args.stats {
        let file = StatsFile {
            membership_queries: stats.membership_queries,
            equivalence_queries: stats.equivalence_queries,
            tables_processed: stats.tables_processed,
            pool_peak: stats.pool_peak,
        };
        let mut text = serde_json::to_string_pretty(&file)?;
        text.push('\n');
        write_file(path, &text)?;
    }
    let _ = writeln!(
        err,
        "learned {} states, K={}, {} membership and {} equivalence queries, {} tables",
        automaton.states().len(),
        automaton.k(),
        stats.membership_queries,
        stats.equivalence_queries,
        stats.tables_processed
    );
    emit(out, args.output.as_deref(), &to_json(&automaton))?;
    Ok(0)
}
