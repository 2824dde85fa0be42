//! `mqlogic`: evaluation, derivation checking, soundness fuzzing and the
//! canned reproductions.
//!
//! Exit codes: 0 pass, 1 expectation mismatch, 2 usage or parse error,
//! 3 semantic error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use mqlogic_core::calculus::{check_derivation, DerivationFile, RuleId, VacuousPolicy, DEFAULT_DEPTH};
use mqlogic_core::experiments::{cmd_fuzz_rule, cmd_repro, ExperimentId, FuzzConfig, Status, DEFAULT_SAMPLES, DEFAULT_SEED};
use mqlogic_core::semantics::{
    eval_antecedent, eval_formula, eval_parametric, fixed_points, value_json, EvalError, QuantifierMode, Valuation,
};
use mqlogic_core::syntax::parse_formula;
use mqlogic_core::{Sequent, SyntaxError};

const SEED_VAR: &str = "MQLOGIC_SEED";

#[derive(Parser)]
#[command(name = "mqlogic", version, about = "Infinitary affine sequent calculus with Lukasiewicz semantics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluates a sentence under a valuation file.
    Eval {
        #[arg(short = 'v', long = "valuation")]
        valuation: PathBuf,
        #[arg(short = 'f', long = "formula")]
        formula: String,
    },
    /// Evaluates both sides of a sequent; exits 1 when it is not sound.
    CheckSequent {
        #[arg(short = 'v', long = "valuation")]
        valuation: PathBuf,
        #[arg(short = 's', long = "sequent")]
        sequent: String,
    },
    /// Checks a derivation file; exits 1 when some node fails.
    CheckDerivation {
        #[arg(short = 'd', long = "derivation")]
        derivation: PathBuf,
        #[arg(long, default_value = "mult")]
        policy: PolicyArg,
        /// Indices at which each premise family template is instantiated.
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
    },
    /// Samples rule instances and valuations; exits 1 when a violation is found.
    Fuzz {
        #[arg(long, value_parser = parse_rule)]
        rule: RuleId,
        #[arg(long, default_value = "sum")]
        mode: ModeArg,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 60)]
        max_denominator: u64,
        #[arg(long, default_value_t = 3)]
        max_context_size: usize,
        #[arg(long, default_value_t = 4)]
        max_family_prefix: usize,
    },
    /// Solves `V(A) = x` for the unknown atom of the valuation.
    SolveSelfref {
        #[arg(short = 'v', long = "valuation")]
        valuation: PathBuf,
        #[arg(short = 'f', long = "formula")]
        formula: String,
    },
    /// Runs one canned experiment.
    Repro {
        #[arg(value_parser = parse_experiment)]
        id: ExperimentId,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Mult,
    Add,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Sup,
    Sum,
}

fn parse_rule(s: &str) -> Result<RuleId, String> {
    s.parse()
}

fn parse_experiment(s: &str) -> Result<ExperimentId, String> {
    s.parse()
}

/// An error together with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<SyntaxError> for Failure {
    fn from(e: SyntaxError) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Self {
        Failure {
            code: if is_parse_error(&e) { 2 } else { 3 },
            message: e.to_string(),
        }
    }
}

fn is_parse_error(e: &EvalError) -> bool {
    match e {
        EvalError::Syntax(_) | EvalError::BadValue(_) | EvalError::BadLine(_) | EvalError::MultipleUnknowns(..) => true,
        EvalError::Line { source, .. } => is_parse_error(source),
        _ => false,
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn seed(flag: u64) -> Result<u64, Failure> {
    match std::env::var(SEED_VAR) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("{SEED_VAR} must be an unsigned integer, found `{s}`"))),
        Err(_) => Ok(flag),
    }
}

fn print_json(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("output serializes"));
}

fn exit_for(pass: bool) -> u8 {
    if pass {
        0
    } else {
        1
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Eval { valuation, formula } => {
            let v = Valuation::parse(&read(&valuation)?)?;
            let a = parse_formula(&formula, v.signature())?;
            print_json(&value_json(&eval_formula(&v, &a)?));
            Ok(0)
        }
        Command::CheckSequent { valuation, sequent } => {
            let v = Valuation::parse(&read(&valuation)?)?;
            let s = Sequent::parse(&sequent, v.signature())?;
            let ant = eval_antecedent(&v, &s.antecedent)?;
            let suc = mqlogic_core::semantics::eval_succedent(&v, &s.succedent)?;
            let sound = ant <= suc;
            print_json(&json!({
                "sequent": s.to_string(),
                "antecedent": ant.to_string(),
                "succedent": suc.to_string(),
                "sound": sound,
            }));
            Ok(exit_for(sound))
        }
        Command::CheckDerivation { derivation, policy, depth } => {
            if depth == 0 {
                return Err(Failure::usage("--depth must be at least 1"));
            }
            let file = DerivationFile::parse(&read(&derivation)?).map_err(|e| Failure::usage(e.to_string()))?;
            let (lang, d) = file.load().map_err(|e| Failure::usage(e.to_string()))?;
            let policy = match policy {
                PolicyArg::Mult => VacuousPolicy::Multiplicative,
                PolicyArg::Add => VacuousPolicy::Additive,
            };
            let report = check_derivation(&lang, &d, policy, depth);
            println!("{}", report.to_json_string());
            Ok(exit_for(report.ok))
        }
        Command::Fuzz {
            rule,
            mode,
            samples,
            seed: flag,
            max_denominator,
            max_context_size,
            max_family_prefix,
        } => {
            let mode = match mode {
                ModeArg::Sup => QuantifierMode::Sup,
                ModeArg::Sum => QuantifierMode::Sum,
            };
            let mut cfg = FuzzConfig::new(rule, mode, samples, seed(flag)?);
            cfg.bounds.max_denominator = max_denominator;
            cfg.bounds.max_context_size = max_context_size;
            cfg.bounds.max_family_prefix = max_family_prefix;
            let result = cmd_fuzz_rule(&cfg).map_err(Failure::usage)?;
            print_json(&result);
            Ok(exit_for(result.status == Status::Pass))
        }
        Command::SolveSelfref { valuation, formula } => {
            let v = Valuation::parse(&read(&valuation)?)?;
            let a = parse_formula(&formula, v.signature())?;
            let f = eval_parametric(&v, &a)?;
            let unknown = v.unknown().map(ToString::to_string);
            print_json(&json!({
                "formula": a.to_string(),
                "unknown": unknown,
                "function": f.to_json(),
                "fixedPoints": fixed_points(&f),
            }));
            Ok(0)
        }
        Command::Repro { id, json, seed: flag } => {
            let result = cmd_repro(id, seed(flag)?);
            if json {
                print_json(&result);
            } else {
                println!(
                    "{}: {} ({} ms, seed {})",
                    result.id, result.status, result.runtime_ms, result.seed
                );
            }
            Ok(exit_for(result.status == Status::Pass))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
