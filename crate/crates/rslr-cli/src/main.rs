//! Command-line front end: parse, typecheck, reduce, evaluate and
//! sample terms, compile Turing machine specs, and run the recognition
//! checkers.
//!
//! Exit codes: 0 success, 1 user error (parse, type, malformed input),
//! 2 fuel exhaustion.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_rational::BigRational;
use rslr::ast::Term;
use rslr::bigstep::{self, EvalError, Metrics};
use rslr::dist::{approx, Dist};
use rslr::smallstep::{self, Strategy};
use rslr::stdlib;
use rslr::tm;
use rslr::types::infer_closed;
use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(name = "rslr", about = "Toolkit for a probabilistic calculus with safe linear recursion")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Source {
    /// Term file (.rslr source).
    file: Option<PathBuf>,
    /// Resolve a library term by name instead of reading a file.
    #[arg(long, value_name = "NAME")]
    stdlib: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Leftmost,
    Rightmost,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::Leftmost => Strategy::Leftmost,
            StrategyArg::Rightmost => Strategy::Rightmost,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    JsonLines,
}

const DEFAULT_FUEL: &str = "1000000";

#[derive(Subcommand)]
enum Cmd {
    /// Parse a term and print it back in canonical syntax.
    Parse {
        #[command(flatten)]
        src: Source,
    },
    /// Infer and print the minimal type of a closed term.
    Typecheck {
        #[command(flatten)]
        src: Source,
    },
    /// Reduce step by step; prints the distribution over normal forms,
    /// or every contraction with --trace.
    Reduce {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value = DEFAULT_FUEL)]
        fuel: u64,
        #[arg(long, value_enum, default_value = "leftmost")]
        strategy: StrategyArg,
        /// Print one line per contraction instead of the distribution.
        #[arg(long)]
        trace: bool,
        /// Skip the type check.
        #[arg(long = "unsafe")]
        no_typecheck: bool,
    },
    /// Evaluate to an exact distribution (big-step; --strategy forces
    /// exhaustive small-step instead).
    Eval {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value = DEFAULT_FUEL)]
        fuel: u64,
        #[arg(long, value_enum)]
        strategy: Option<StrategyArg>,
        /// Append derivation metrics.
        #[arg(long)]
        metrics: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long = "unsafe")]
        no_typecheck: bool,
    },
    /// Draw seeded samples and print a frequency table.
    Sample {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value = DEFAULT_FUEL)]
        fuel: u64,
        #[arg(long, default_value = "0")]
        seed: u64,
        #[arg(long, default_value = "1")]
        count: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long = "unsafe")]
        no_typecheck: bool,
    },
    /// Print a term as .rslr source (useful with --stdlib).
    Emit {
        #[command(flatten)]
        src: Source,
    },
    /// Compile a machine spec to .rslr source.
    CompileTm { spec: PathBuf },
    /// Reprint a machine spec in canonical form.
    EmitTm { spec: PathBuf },
    /// Check a recognizer against labelled samples at error bound ε.
    CheckLang {
        term: PathBuf,
        /// Sample file: one `numeral true|false` pair per line.
        samples: PathBuf,
        /// Error bound, e.g. 1/4.
        #[arg(long)]
        epsilon: String,
        #[arg(long, default_value = DEFAULT_FUEL)]
        fuel: u64,
    },
    /// Decide one input by majority (ties accept).
    Majority {
        #[command(flatten)]
        src: Source,
        /// Input numeral.
        #[arg(long)]
        input: String,
        #[arg(long, default_value = DEFAULT_FUEL)]
        fuel: u64,
    },
}

struct Failure {
    msg: String,
    code: u8,
}

fn user(msg: impl ToString) -> Failure {
    Failure {
        msg: msg.to_string(),
        code: 1,
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Failure {
        let code = if matches!(e, EvalError::Fuel { .. }) { 2 } else { 1 };
        Failure {
            msg: e.to_string(),
            code,
        }
    }
}

impl From<smallstep::FuelExhausted> for Failure {
    fn from(e: smallstep::FuelExhausted) -> Failure {
        Failure {
            msg: e.to_string(),
            code: 2,
        }
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| user(format!("{}: {}", path.display(), e)))
}

fn load_term(src: &Source) -> Result<Term, Failure> {
    match (&src.file, &src.stdlib) {
        (Some(_), Some(_)) => Err(user("give either a file or --stdlib, not both")),
        (None, None) => Err(user("expected a term file or --stdlib NAME")),
        (Some(path), None) => rslr::parse_term(&read(path)?).map_err(user),
        (None, Some(name)) => stdlib::by_name(name).ok_or_else(|| {
            user(format!(
                "unknown library term {}; available: {}",
                name,
                stdlib::catalogue().join(", ")
            ))
        }),
    }
}

fn typecheck_gate(t: &Term, skip: bool) -> Result<(), Failure> {
    if !skip {
        infer_closed(t).map_err(user)?;
    }
    Ok(())
}

fn parse_numeral(s: &str) -> Result<BigUint, Failure> {
    match rslr::parse_term(s.trim()).map_err(user)? {
        Term::Num(n) => Ok(n),
        _ => Err(user(format!("expected a numeral, found {}", s.trim()))),
    }
}

fn print_dist(d: &Dist<Term>, format: Format) {
    match format {
        Format::Text => print!("{}", d.render()),
        Format::JsonLines => {
            for (k, p) in d.iter() {
                println!(
                    "{}",
                    serde_json::json!({
                        "term": k.to_string(),
                        "num": p.numer().to_string(),
                        "den": p.denom().to_string(),
                        "decimal": approx(p),
                    })
                );
            }
        }
    }
}

fn print_metrics(m: &Metrics, format: Format) {
    match format {
        Format::Text => println!(
            "metrics: nodes={} max_size={} max_size_wonum={} max_size_num={}",
            m.nodes, m.max_size, m.max_size_wonum, m.max_size_num
        ),
        Format::JsonLines => println!(
            "{}",
            serde_json::json!({
                "metrics": {
                    "nodes": m.nodes,
                    "max_size": m.max_size,
                    "max_size_wonum": m.max_size_wonum,
                    "max_size_num": m.max_size_num,
                }
            })
        ),
    }
}

fn run(cmd: Cmd) -> Result<(), Failure> {
    match cmd {
        Cmd::Parse { src } | Cmd::Emit { src } => {
            println!("{}", load_term(&src)?);
        }
        Cmd::Typecheck { src } => {
            let t = load_term(&src)?;
            println!("{}", infer_closed(&t).map_err(user)?);
        }
        Cmd::Reduce {
            src,
            fuel,
            strategy,
            trace,
            no_typecheck,
        } => {
            let t = load_term(&src)?;
            typecheck_gate(&t, no_typecheck)?;
            if trace {
                let (lines, _) = smallstep::trace(&t, strategy.into(), fuel)?;
                for line in lines {
                    println!("{}", line);
                }
            } else {
                let d = smallstep::eval_dist(&t, strategy.into(), fuel)?;
                print!("{}", d.render());
            }
        }
        Cmd::Eval {
            src,
            fuel,
            strategy,
            metrics,
            format,
            no_typecheck,
        } => {
            let t = load_term(&src)?;
            typecheck_gate(&t, no_typecheck)?;
            let d = match strategy {
                Some(s) => smallstep::eval_dist(&t, s.into(), fuel)?,
                None => bigstep::eval(&t, fuel)?,
            };
            print_dist(&d, format);
            if metrics {
                let m = bigstep::full_metrics(&t, fuel)?;
                print_metrics(&m, format);
            }
        }
        Cmd::Sample {
            src,
            fuel,
            seed,
            count,
            format,
            no_typecheck,
        } => {
            let t = load_term(&src)?;
            typecheck_gate(&t, no_typecheck)?;
            let mut freq: BTreeMap<Term, u64> = BTreeMap::new();
            for i in 0..count {
                let r = bigstep::sample(&t, seed.wrapping_add(i), fuel)?;
                *freq.entry(r).or_insert(0) += 1;
            }
            for (term, n) in &freq {
                let f = *n as f64 / count as f64;
                match format {
                    Format::Text => println!("{}\t{}\t{}", term, n, f),
                    Format::JsonLines => println!(
                        "{}",
                        serde_json::json!({
                            "term": term.to_string(),
                            "count": n,
                            "frequency": f,
                        })
                    ),
                }
            }
        }
        Cmd::CompileTm { spec } => {
            let spec = tm::parse_tm_spec(&read(&spec)?).map_err(user)?;
            for w in spec.warnings() {
                eprintln!("warning: {}", w);
            }
            let t = tm::compile_tm(&spec).map_err(user)?;
            println!("{}", t);
        }
        Cmd::EmitTm { spec } => {
            let spec = tm::parse_tm_spec(&read(&spec)?).map_err(user)?;
            for w in spec.warnings() {
                eprintln!("warning: {}", w);
            }
            print!("{}", tm::emit_tm_spec(&spec));
        }
        Cmd::CheckLang {
            term,
            samples,
            epsilon,
            fuel,
        } => {
            let t = rslr::parse_term(&read(&term)?).map_err(user)?;
            let eps = BigRational::from_str(epsilon.trim())
                .map_err(|e| user(format!("bad epsilon {}: {}", epsilon, e)))?;
            let mut labelled = Vec::new();
            for (i, raw) in read(&samples)?.lines().enumerate() {
                let line = raw.split('#').next().unwrap_or("").trim();
                if line.is_empty() {
                    continue;
                }
                let mut words = line.split_whitespace();
                let (n, m) = (words.next(), words.next());
                let bad =
                    || user(format!("{}:{}: expected `numeral true|false`", samples.display(), i + 1));
                let n = parse_numeral(n.ok_or_else(bad)?)?;
                let member = match m.ok_or_else(bad)? {
                    "true" => true,
                    "false" => false,
                    _ => return Err(bad()),
                };
                labelled.push((n, member));
            }
            let reports =
                tm::check_error_recognition(&t, &labelled, &eps, fuel).map_err(recog_failure)?;
            let mut passed = 0;
            for r in &reports {
                if r.pass {
                    passed += 1;
                }
                println!(
                    "{}\t{}\t{}/{}\t{}\t{}",
                    r.input,
                    if r.member { "member" } else { "nonmember" },
                    r.p_correct.numer(),
                    r.p_correct.denom(),
                    r.margin,
                    if r.pass { "pass" } else { "fail" }
                );
            }
            println!("passed {}/{}", passed, reports.len());
        }
        Cmd::Majority { src, input, fuel } => {
            let t = load_term(&src)?;
            let n = parse_numeral(&input)?;
            let accept = tm::majority_decision(&t, &n, fuel).map_err(recog_failure)?;
            println!("{}", if accept { "accept" } else { "reject" });
        }
    }
    Ok(())
}

fn recog_failure(e: tm::RecognitionError) -> Failure {
    match e {
        tm::RecognitionError::Eval(e) => e.into(),
        other => user(other),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version as "errors" with exit 0
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
