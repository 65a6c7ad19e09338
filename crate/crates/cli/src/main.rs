//! `latrep`: lattice files, map checks and repairs from the command line.
//!
//! Every command prints a JSON report on stdout and a one-line summary on
//! stderr. Exit codes: 0 success, 1 a hypothesis or property failed (the
//! report carries the witness), 2 unreadable or malformed input.

mod commands;
mod formats;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use commands::{DirectionArg, ModeArg, Outcome, Property};

#[derive(Parser)]
#[command(name = "latrep", version, about = "Finite lattices and repair of approximate join homomorphisms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a lattice file and report its structure.
    Validate { lattice: PathBuf },
    /// Build a lattice: `boolean K`, `divisor N`, `chain K` or `product A B`.
    Make {
        #[arg(value_parser = ["boolean", "divisor", "chain", "product"])]
        kind: String,
        #[arg(required = true)]
        params: Vec<String>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Check a property of a map.
    CheckMap {
        map: PathBuf,
        #[arg(long, value_enum)]
        property: Property,
    },
    /// Join homomorphism between Φ and Ψ, or with four maps Ψ2 Φ2 Φ1 Ψ1 a
    /// lattice homomorphism between Ψ2 and Ψ1.
    Sandwich {
        #[arg(num_args = 2..=4, required = true)]
        maps: Vec<PathBuf>,
        /// Read the domain in reverse order.
        #[arg(long)]
        flip_domain: bool,
        /// Read the codomain in reverse order.
        #[arg(long)]
        flip_codomain: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Repair f given error tables φ and ψ.
    Stabilize {
        map: PathBuf,
        #[arg(long)]
        phi: PathBuf,
        #[arg(long)]
        psi: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Repair f whose joins are close in a neighborhood system.
    StabilizeNbhd {
        map: PathBuf,
        #[arg(long)]
        nbhd: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Monotone repair of sampled real data (CSV or JSON).
    MonotoneRepair {
        data: PathBuf,
        #[arg(long)]
        eps: Option<String>,
        #[arg(long, value_enum, default_value = "auto")]
        direction: DirectionArg,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write the Hasse diagram in DOT format.
    HasseDot {
        lattice: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Brute-force reference computations.
    #[command(subcommand)]
    Oracle(Oracle),
}

#[derive(Subcommand)]
enum Oracle {
    /// Compare the fixed-point envelope with exhaustive enumeration.
    Envelope {
        map: PathBuf,
        #[arg(long, value_enum)]
        mode: ModeArg,
    },
    /// List all join homomorphisms between two lattices.
    JoinHoms { domain: String, codomain: String },
    /// Search all join homomorphisms for one between Φ and Ψ.
    Sandwich {
        phi: PathBuf,
        psi: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Naive correction g = f ∖ ε into a Boolean algebra.
    NaiveBoolean {
        map: PathBuf,
        #[arg(long)]
        eps: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn run(command: Command) -> anyhow::Result<Outcome> {
    match command {
        Command::Validate { lattice } => commands::validate(&lattice),
        Command::Make { kind, params, output } => commands::make(&kind, &params, &output),
        Command::CheckMap { map, property } => commands::check_map(&map, property),
        Command::Sandwich {
            maps,
            flip_domain,
            flip_codomain,
            output,
        } => commands::sandwich(&maps, flip_domain, flip_codomain, output.as_deref()),
        Command::Stabilize { map, phi, psi, output } => commands::stabilize(&map, &phi, &psi, output.as_deref()),
        Command::StabilizeNbhd { map, nbhd, output } => commands::stabilize_nbhd(&map, &nbhd, output.as_deref()),
        Command::MonotoneRepair {
            data,
            eps,
            direction,
            output,
        } => commands::monotone_repair(&data, eps.as_deref(), direction, output.as_deref()),
        Command::HasseDot { lattice, output } => commands::hasse(&lattice, &output),
        Command::Oracle(o) => match o {
            Oracle::Envelope { map, mode } => commands::oracle_envelope(&map, mode),
            Oracle::JoinHoms { domain, codomain } => commands::oracle_join_homs(&domain, &codomain),
            Oracle::Sandwich { phi, psi, output } => commands::oracle_sandwich(&phi, &psi, output.as_deref()),
            Oracle::NaiveBoolean { map, eps, output } => commands::oracle_naive_boolean(&map, &eps, output.as_deref()),
        },
    }
}

/// Library errors that describe a mathematical failure, as opposed to bad
/// input, with their witness data.
fn violation(e: &latrep::Error) -> Option<Value> {
    use latrep::Error as E;
    Some(match e {
        E::HypothesisViolated { condition, witness } => {
            json!({ "condition": condition.to_string(), "witness": witness.labels })
        }
        E::AxiomViolated { axiom, witness } => json!({ "axiom": axiom.to_string(), "witness": witness.labels }),
        E::NotDistributive(w) => json!({ "condition": "distributive", "witness": w.labels }),
        E::NotACongruence(w) => json!({ "condition": "congruence", "witness": w.labels }),
        E::NotALattice { a, b, reason } => json!({ "condition": reason.to_string(), "witness": [a, b] }),
        E::NoRepairFound { increasing, decreasing } => json!({
            "increasing_witness": increasing.labels,
            "decreasing_witness": decreasing.labels,
        }),
        E::NotBooleanCodomain => json!({ "condition": "Boolean codomain" }),
        E::SearchBudgetExceeded(b) => json!({ "budget": b }),
        _ => return None,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(outcome) => {
            println!("{}", serde_json::to_string_pretty(&outcome.report).expect("report serializes"));
            eprintln!("{}", outcome.summary);
            ExitCode::from(if outcome.ok { 0 } else { 1 })
        }
        Err(err) => {
            let rejected = err.chain().find_map(|c| c.downcast_ref::<commands::Rejected>());
            let found = err
                .chain()
                .find_map(|c| c.downcast_ref::<latrep::Error>())
                .or(rejected.map(|r| &r.source))
                .and_then(violation);
            let message = format!("{err:#}");
            let (status, code, details) = match found {
                Some(d) => ("violation", 1, d),
                None => ("error", 2, Value::Null),
            };
            let hypotheses = rejected.map(|r| &r.hypotheses);
            let report = json!({ "status": status, "error": message, "details": details, "hypotheses": hypotheses });
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            eprintln!("{status}: {message}");
            ExitCode::from(code)
        }
    }
}
