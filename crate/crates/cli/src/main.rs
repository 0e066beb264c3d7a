//! `cdetect`: decide C-detectability of a labeled Petri net from the shell.
//!
//! Exit codes: 0 all queried properties hold (or the query succeeded),
//! 1 some queried property fails or the two estimation routes disagree,
//! 2 bad input or a violated precondition, 3 a state budget was exceeded.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cdetect::basis::consistent_markings_basis;
use cdetect::detect::{build_observer, verify_all, Options, Property};
use cdetect::io::{self, dot, DocError, Report, ReportOptions};
use cdetect::reachability::{consistent_markings_oracle, rg_observer};
use cdetect::{build_brg, build_rg, minimal_explanations, BrgOptions, CrucialSet, Error, LabeledPetriNet, Marking};

#[derive(Parser)]
#[command(name = "cdetect", version, about = "C-detectability of bounded labeled Petri nets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide the detectability properties for a crucial set.
    Check {
        net: PathBuf,
        #[arg(long)]
        crucial: PathBuf,
        #[arg(long, value_enum, default_value_t = PropertyArg::All)]
        property: PropertyArg,
        /// Also decide on the reachability-graph observer and require agreement.
        #[arg(long)]
        oracle: bool,
        /// Write a JSON report to this path (`-` for stdout).
        #[arg(long)]
        report: Option<PathBuf>,
        /// Leave wall times out of the report so it is byte-for-byte stable.
        #[arg(long)]
        no_timings: bool,
        #[arg(long, default_value_t = 100_000)]
        max_states: usize,
        /// Report a deadlock as a warning instead of failing.
        #[arg(long)]
        allow_deadlock: bool,
    },
    /// Print the markings consistent with an observed word.
    Consistent {
        net: PathBuf,
        /// Accepted for symmetry with `check`; consistency does not depend on it.
        #[arg(long)]
        crucial: Option<PathBuf>,
        /// Observed labels separated by commas or spaces.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
        #[arg(long, default_value_t = 100_000)]
        max_states: usize,
    },
    /// Print the minimal explanations of a transition at a marking.
    Explain {
        net: PathBuf,
        /// `[0,1,0]`, `0 1 0` or `{p2:1}`.
        #[arg(long)]
        marking: String,
        #[arg(long)]
        transition: String,
    },
    /// Export a graph in DOT format.
    Graph {
        net: PathBuf,
        #[arg(long, value_enum)]
        kind: GraphKind,
        /// Output path (`-` for stdout).
        #[arg(long)]
        dot: PathBuf,
        /// Crucial set for α/β flags and marked states; empty if omitted.
        #[arg(long)]
        crucial: Option<PathBuf>,
        #[arg(long, default_value_t = 100_000)]
        max_states: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PropertyArg {
    Strong,
    Weak,
    Ps,
    Pw,
    All,
}

impl PropertyArg {
    fn properties(self) -> Vec<Property> {
        match self {
            PropertyArg::Strong => vec![Property::Strong],
            PropertyArg::Weak => vec![Property::Weak],
            PropertyArg::Ps => vec![Property::PeriodicallyStrong],
            PropertyArg::Pw => vec![Property::PeriodicallyWeak],
            PropertyArg::All => Property::ALL.to_vec(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Basis,
    Oracle,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphKind {
    Rg,
    Brg,
    Observer,
    RgObserver,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } => 3,
            Error::LatticeViolation { .. } | Error::OracleMismatch { .. } => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<DocError> for Failure {
    fn from(e: DocError) -> Self {
        match e {
            DocError::Net(e) => e.into(),
            e => Failure {
                code: 2,
                message: e.to_string(),
            },
        }
    }
}

fn write_out(path: &Path, text: &str) -> Result<(), Failure> {
    if path == Path::new("-") {
        print!("{text}");
        Ok(())
    } else {
        std::fs::write(path, text).map_err(|e| Failure {
            code: 2,
            message: format!("{}: {e}", path.display()),
        })
    }
}

fn load_crucial(path: Option<&Path>, net: &LabeledPetriNet) -> Result<CrucialSet, Failure> {
    Ok(match path {
        Some(p) => io::read_crucial(p, net.place_count())?,
        None => CrucialSet::empty(),
    })
}

fn vector(m: &Marking) -> String {
    vector_of(m.tokens())
}

fn vector_set(set: &BTreeSet<Marking>) -> String {
    let parts: Vec<String> = set.iter().map(vector).collect();
    format!("{{{}}}", parts.join(","))
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Check {
            net,
            crucial,
            property,
            oracle,
            report,
            no_timings,
            max_states,
            allow_deadlock,
        } => {
            let net = io::read_net(&net)?;
            net.check_unobservable_structure()?;
            let crucial = io::read_crucial(&crucial, net.place_count())?;
            let options = Options {
                max_states,
                max_observer_states: max_states,
                allow_deadlock,
                oracle,
                ..Default::default()
            };
            let analysis = verify_all(&net, &crucial, &options)?;
            for w in &analysis.assumptions.warnings {
                eprintln!("warning: {w}");
            }
            let queried = property.properties();
            let rep = Report::new(
                &net,
                &crucial,
                &analysis,
                &ReportOptions {
                    queried: queried.clone(),
                    timings: !no_timings,
                },
            );
            if let Some(path) = &report {
                write_out(path, &rep.to_json())?;
            }
            if report.as_deref() != Some(Path::new("-")) {
                if let Some(rg) = &analysis.rg {
                    println!("reachable markings: {}", rg.len());
                }
                println!("basis markings: {}", analysis.brg.len());
                println!(
                    "observer: {} states, {} marked",
                    analysis.observer.len(),
                    analysis.observer.marked_states().count()
                );
                if let Some(o) = &analysis.oracle {
                    println!("oracle observer: {} states, verdicts agree", o.observer.len());
                }
                for p in &queried {
                    println!("{:<21}{}", p.to_string(), analysis.verdict.get(*p).holds);
                }
            }
            Ok(if rep.passed() { 0 } else { 1 })
        }

        Command::Consistent {
            net,
            crucial,
            word,
            method,
            max_states,
        } => {
            let net = io::read_net(&net)?;
            load_crucial(crucial.as_deref(), &net)?;
            let w = io::parse_word(&net, &word)?;
            let basis = if method != Method::Oracle {
                let brg = build_brg(
                    &net,
                    &CrucialSet::empty(),
                    BrgOptions {
                        max_nodes: max_states,
                        ..Default::default()
                    },
                )?;
                let set = consistent_markings_basis(&net, &brg, &w)?;
                println!("basis:  {}", vector_set(&set));
                Some(set)
            } else {
                None
            };
            let oracle = if method != Method::Basis {
                let rg = build_rg(&net, max_states)?;
                let set = consistent_markings_oracle(&net, &rg, &w)?;
                println!("oracle: {}", vector_set(&set));
                Some(set)
            } else {
                None
            };
            match (basis, oracle) {
                (Some(b), Some(o)) if b != o => {
                    eprintln!("discrepancy between the basis and oracle estimates");
                    eprintln!("  only basis:  {}", vector_set(&b.difference(&o).cloned().collect()));
                    eprintln!("  only oracle: {}", vector_set(&o.difference(&b).cloned().collect()));
                    Ok(1)
                }
                _ => Ok(0),
            }
        }

        Command::Explain {
            net,
            marking,
            transition,
        } => {
            let net = io::read_net(&net)?;
            let m = io::parse_marking(&net, &marking)?;
            let t = net.transition_index(&transition).ok_or_else(|| Failure {
                code: 2,
                message: format!("unknown transition `{transition}`"),
            })?;
            if !net.is_observable(t) {
                return Err(Error::UnobservableTransition(t).into());
            }
            let set = minimal_explanations(&net, &m, t)?;
            let silent: Vec<&str> = net
                .unobservable_transitions()
                .map(|u| net.transitions()[u].as_str())
                .collect();
            println!("unobservable transitions: [{}]", silent.join(", "));
            if set.is_empty() {
                println!("no explanation enables {transition} at {}", net.format_marking(&m));
            }
            for (y, w) in set.evectors.iter().zip(&set.witnesses) {
                let seq: Vec<&str> = w.iter().map(|&u| net.transitions()[u].as_str()).collect();
                let before = net.fire_sequence(&m, w)?;
                let after = net.fire(&before, t)?;
                println!(
                    "y = {}  sequence: [{}]  then {transition}: {}",
                    vector_of(y.counts()),
                    seq.join(" "),
                    net.format_marking(&after)
                );
            }
            Ok(0)
        }

        Command::Graph {
            net,
            kind,
            dot: out,
            crucial,
            max_states,
        } => {
            let net = io::read_net(&net)?;
            let crucial = load_crucial(crucial.as_deref(), &net)?;
            let brg_options = BrgOptions {
                max_nodes: max_states,
                ..Default::default()
            };
            let doc = match kind {
                GraphKind::Rg => dot::rg_to_dot(&net, &build_rg(&net, max_states)?),
                GraphKind::Brg => dot::brg_to_dot(&net, &build_brg(&net, &crucial, brg_options)?),
                GraphKind::Observer => {
                    let brg = build_brg(&net, &crucial, brg_options)?;
                    let obs = build_observer(&brg, net.alphabet().len(), max_states)?;
                    dot::basis_observer_to_dot(&net, &brg, &obs)
                }
                GraphKind::RgObserver => {
                    let rg = build_rg(&net, max_states)?;
                    let obs = rg_observer(&net, &rg, &crucial, max_states)?;
                    dot::rg_observer_to_dot(&net, &rg, &obs)
                }
            };
            write_out(&out, &doc)?;
            Ok(0)
        }
    }
}

fn vector_of(counts: &[u32]) -> String {
    let parts: Vec<String> = counts.iter().map(u32::to_string).collect();
    format!("[{}]", parts.join(","))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
