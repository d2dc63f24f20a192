//! `argonaut`: query knowledge bases, list extensions, export attack graphs
//! and run the metatheory checks.
//!
//! Exit codes: 0 success (and all checks pass), 1 a check failed, 2 checks
//! were inconclusive only, 64 usage error, 65 knowledge-base error.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use argonaut::export::{export_dot, export_json};
use argonaut::kb::{load, parse_formula, KnowledgeBase};
use argonaut::metatheory::random::{run_on_kb, run_random, PROPERTIES};
use argonaut::metatheory::{default_seed, PropertyReport, Verdict};
use argonaut::semantics::{extensions, Backend, Semantics};
use argonaut::Formula;

const EX_USAGE: u8 = 64;
const EX_DATAERR: u8 = 65;

#[derive(Parser)]
#[command(
    name = "argonaut",
    version,
    about = "Structured argumentation engine and metatheory checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Skeptical entailment of a query, with a witness per extension.
    Entails {
        kb: PathBuf,
        #[arg(long)]
        query: String,
        #[arg(long, value_parser = parse_sem)]
        sem: Semantics,
        /// Adds a formula as an axiom before building; repeatable.
        #[arg(long = "add-axiom")]
        add_axiom: Vec<String>,
        /// Only arguments with value at most this count (needs a lifting).
        #[arg(long = "at-most")]
        at_most: Option<u32>,
    },
    /// Extension families of the knowledge base's attack graph.
    Extensions {
        kb: PathBuf,
        #[arg(long, value_parser = parse_sem)]
        sem: Semantics,
        /// Builds arguments for these conclusions instead of the default pool.
        #[arg(long)]
        query: Vec<String>,
        #[arg(long = "add-axiom")]
        add_axiom: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Writes the attack graph as DOT.
    Graph {
        kb: PathBuf,
        /// Output file; `-` or absent prints to stdout.
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        query: Vec<String>,
        #[arg(long = "add-axiom")]
        add_axiom: Vec<String>,
    },
    /// Runs a property check on a knowledge base or on generated instances.
    Check {
        #[arg(required_unless_present = "random", conflicts_with = "random")]
        kb: Option<PathBuf>,
        /// Generated instances: `seed=N` and `trials=K`, both optional.
        #[arg(long, num_args = 0.., value_name = "KEY=VALUE")]
        random: Option<Vec<String>>,
        #[arg(long, value_parser = parse_property)]
        property: String,
        /// Seed for random additions when checking a knowledge base.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        json: bool,
    },
}

fn parse_sem(s: &str) -> Result<Semantics, String> {
    Semantics::parse(s)
        .ok_or_else(|| format!("unknown semantics `{s}` (expected adm, cmp, grd, prf or stb)"))
}

fn parse_property(s: &str) -> Result<String, String> {
    if PROPERTIES.contains(&s) {
        Ok(s.to_string())
    } else {
        Err(format!(
            "unknown property `{s}` (expected one of {})",
            PROPERTIES.join(", ")
        ))
    }
}

/// A failure with its exit code.
struct Failure(u8, String);

fn usage(msg: impl Into<String>) -> Failure {
    Failure(EX_USAGE, msg.into())
}

fn data(e: impl std::fmt::Display) -> Failure {
    Failure(EX_DATAERR, e.to_string())
}

fn formula(text: &str, flag: &str) -> Result<Formula, Failure> {
    parse_formula(text).map_err(|e| usage(format!("{flag} `{text}`: {e}")))
}

fn read_kb(path: &Path, axioms: &[String]) -> Result<KnowledgeBase, Failure> {
    let text = fs::read_to_string(path).map_err(|e| data(format!("{}: {e}", path.display())))?;
    let mut kb = load(&text).map_err(|e| data(format!("{}:{e}", path.display())))?;
    for w in &kb.warnings {
        eprintln!("warning: {w}");
    }
    for a in axioms {
        kb = kb.with_axiom(&formula(a, "--add-axiom")?);
    }
    Ok(kb)
}

fn queries(kb: &KnowledgeBase, given: &[String]) -> Result<BTreeSet<Formula>, Failure> {
    if given.is_empty() {
        return Ok(kb.query_pool());
    }
    given.iter().map(|q| formula(q, "--query")).collect()
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Entails {
            kb,
            query,
            sem,
            add_axiom,
            at_most,
        } => {
            let kb = read_kb(&kb, &add_axiom)?;
            let phi = formula(&query, "--query")?;
            let result = kb.entails(&phi, sem, at_most).map_err(data)?;
            println!("{}", result.holds);
            let graph = kb.graph(&[phi].into_iter().collect()).map_err(data)?;
            if result.vacuous {
                println!("no {} extensions", sem.name());
            }
            for (i, w) in result.witnesses.iter().enumerate() {
                match w {
                    Some(a) => println!("extension {i}: {}", graph.arguments[*a]),
                    None => println!("extension {i}: no witness"),
                }
            }
            Ok(0)
        }
        Command::Extensions {
            kb,
            sem,
            query,
            add_axiom,
            json,
        } => {
            let kb = read_kb(&kb, &add_axiom)?;
            let graph = kb.graph(&queries(&kb, &query)?).map_err(data)?;
            let exts = extensions(&graph.relation(), sem, Backend::Auto).map_err(data)?;
            if json {
                print!("{}", export_json(&graph, &[(sem, exts)]));
            } else {
                println!("{} {} extension(s)", exts.len(), sem.name());
                for (i, e) in exts.iter().enumerate() {
                    println!("extension {i}:");
                    for &a in &e.members {
                        println!("  {}", graph.arguments[a]);
                    }
                }
            }
            Ok(0)
        }
        Command::Graph {
            kb,
            dot,
            query,
            add_axiom,
        } => {
            let kb = read_kb(&kb, &add_axiom)?;
            let graph = kb.graph(&queries(&kb, &query)?).map_err(data)?;
            let text = export_dot(&graph);
            match dot {
                Some(p) if p.as_os_str() != "-" => {
                    fs::write(&p, text).map_err(|e| data(format!("{}: {e}", p.display())))?
                }
                _ => print!("{text}"),
            }
            Ok(0)
        }
        Command::Check {
            kb,
            random,
            property,
            seed,
            trials,
            json,
        } => {
            let report = match (kb, random) {
                (Some(path), None) => {
                    let kb = read_kb(&path, &[])?;
                    run_on_kb(&kb, &property, seed.unwrap_or_else(default_seed), trials)
                        .map_err(data)?
                }
                (None, Some(opts)) => {
                    let (mut seed, mut trials) = (seed.unwrap_or_else(default_seed), trials);
                    for o in &opts {
                        match o.split_once('=') {
                            Some(("seed", v)) => {
                                seed = v.parse().map_err(|_| usage(format!("bad seed `{v}`")))?
                            }
                            Some(("trials", v)) => {
                                trials = v
                                    .parse()
                                    .map_err(|_| usage(format!("bad trial count `{v}`")))?
                            }
                            _ => {
                                return Err(usage(format!(
                                    "--random takes seed=N and trials=K, got `{o}`"
                                )))
                            }
                        }
                    }
                    run_random(&property, seed, trials).map_err(data)?
                }
                _ => return Err(usage("give a knowledge base or --random, not both")),
            };
            print_report(&report, json);
            Ok(match report.verdict {
                Verdict::Pass => 0,
                Verdict::Fail => 1,
                Verdict::Inconclusive => 2,
            })
        }
    }
}

fn print_report(report: &PropertyReport, json: bool) {
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(report).expect("reports serialize")
        );
    } else {
        println!("{report}");
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EX_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("argonaut: {msg}");
            ExitCode::from(code)
        }
    }
}
