//! `autratio`: exact `|Aut(G)|/|G|` for finite abelian groups.

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use autratio_core::search::{build_f_table, find_exact, SearchBounds, DEFAULT_MAX_RANK};
use autratio_core::{
    aut_order, aut_order_bruteforce, f_exact, f_prime_exact, parse_group, Approximator, Config,
    Error, Ratio,
};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use output::Envelope;

const EXIT_USAGE: u8 = 1;
const EXIT_REFUSED: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "autratio", version, about = "Automorphism-to-order ratios of finite abelian groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print f(G) = |Aut(G)|/|G| exactly.
    F {
        /// Group literal, e.g. "C2 x C4 x C9" or "C2^3".
        group: String,
        /// Print f'(G) = |Aut(G)|/phi(|G|) instead.
        #[arg(long)]
        phi: bool,
        #[arg(long)]
        json: bool,
    },
    /// Print |Aut(G)|.
    Aut {
        group: String,
        /// Also count automorphisms by brute force and compare.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        json: bool,
    },
    /// Same as `aut --oracle`.
    Oracle {
        group: String,
        #[arg(long)]
        json: bool,
    },
    /// Build a group whose f lies within eps of the target.
    Approx {
        /// Target a >= 0, as a decimal or p/q.
        target: String,
        #[arg(long, default_value = "1e-6")]
        eps: String,
        /// Use odd primes only (targets in [0, 1]).
        #[arg(long)]
        odd_only: bool,
        #[arg(long)]
        json: bool,
        /// Print the full group literal when small enough.
        #[arg(long)]
        materialize: bool,
    },
    /// Find every group within bounds with f(G) equal to a rational.
    Search {
        /// Target as p/q or an integer.
        target: String,
        #[arg(long, default_value_t = 100)]
        max_order: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_RANK)]
        max_rank: u32,
        /// Largest prime dividing |G| (defaults to max-order).
        #[arg(long)]
        max_prime: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Write the table of f over all groups of bounded order.
    Table {
        #[arg(long)]
        max_order: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_RANK)]
        max_rank: u32,
        #[arg(long)]
        json: bool,
    },
}

/// A command failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::InvalidArgument(_) | Error::InvalidPartition(_) => EXIT_USAGE,
            Error::SieveCapacity { .. }
            | Error::OracleCap(_)
            | Error::PrecisionRefused { .. }
            | Error::MaterializeCap { .. } => EXIT_REFUSED,
            Error::Certification(_) | Error::Io(_) => EXIT_INTERNAL,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

struct Outcome {
    text: String,
    result: Value,
}

fn parse_target(s: &str, exact_only: bool) -> Result<Ratio, Failure> {
    let bad = |m: String| Failure { code: EXIT_USAGE, message: m };
    if exact_only {
        let ok = s.trim().bytes().all(|b| b.is_ascii_digit() || b == b'/');
        if !ok {
            return Err(bad(format!("target must be an exact rational p/q, got {s:?}")));
        }
    }
    s.parse::<Ratio>().map_err(|e| bad(e.to_string()))
}

fn run_f(group: &str, phi: bool) -> Result<Outcome, Failure> {
    let g = parse_group(group)?;
    let value = if phi { f_prime_exact(&g) } else { f_exact(&g) };
    Ok(Outcome {
        text: value.to_string(),
        result: json!({
            "group": g.to_string(),
            "order": g.order().to_string(),
            "aut_order": aut_order(&g).to_string(),
            "value": value.to_fraction_string(),
            "function": if phi { "f_prime" } else { "f" },
        }),
    })
}

fn run_aut(group: &str, oracle: bool, cfg: &Config) -> Result<Outcome, Failure> {
    let g = parse_group(group)?;
    let formula = aut_order(&g);
    if !oracle {
        return Ok(Outcome {
            text: formula.to_string(),
            result: json!({ "group": g.to_string(), "aut_order": formula.to_string() }),
        });
    }
    let brute = aut_order_bruteforce(&g, &cfg.oracle)?;
    let verdict = if brute == formula { "match" } else { "MISMATCH" };
    let outcome = Outcome {
        text: format!("{formula} {brute} {verdict}"),
        result: json!({
            "group": g.to_string(),
            "aut_order": formula.to_string(),
            "oracle": brute.to_string(),
            "match": brute == formula,
        }),
    };
    if brute != formula {
        return Err(Failure {
            code: EXIT_INTERNAL,
            message: outcome.text,
        });
    }
    Ok(outcome)
}

fn run_approx(
    target: &str,
    eps: &str,
    odd_only: bool,
    materialize: bool,
    cfg: &Config,
) -> Result<Outcome, Failure> {
    let a = parse_target(target, false)?;
    let eps = parse_target(eps, false)?;
    let approximator = Approximator::new(*cfg);
    let res = if odd_only {
        approximator.approx_in_unit(&a, &eps, true)?
    } else {
        approximator.approx_ray(&a, &eps)?
    };
    let literal = if materialize {
        Some(
            res.group
                .materialize(approximator.primes(), cfg.materialize_cap)?
                .to_string(),
        )
    } else {
        None
    };
    let text = output::approx_text(&res, literal.clone());
    let result = output::approx_json(&res, literal);
    if output::status_is_failure(res.status) {
        return Err(Failure {
            code: EXIT_REFUSED,
            message: format!("greedy did not converge: {}\n{text}", res.status.as_str()),
        });
    }
    Ok(Outcome { text, result })
}

fn run_search(
    target: &str,
    max_order: u64,
    max_rank: u32,
    max_prime: Option<u64>,
) -> Result<Outcome, Failure> {
    let a = parse_target(target, true)?;
    let bounds = SearchBounds::new(max_order, max_prime.unwrap_or(max_order.max(1)), max_rank)?;
    let witnesses = find_exact(&a, &bounds);
    let text = if witnesses.is_empty() {
        format!("no witness within bounds (max_order={max_order})")
    } else {
        witnesses
            .iter()
            .map(|w| w.group.to_string())
            .collect::<Vec<_>>()
            .join("\n")
    };
    Ok(Outcome {
        text,
        result: json!({
            "target": a.to_fraction_string(),
            "bounds": {
                "max_order": bounds.max_order,
                "max_prime": bounds.max_prime,
                "max_rank_per_prime": bounds.max_rank_per_prime,
            },
            "witnesses": witnesses.iter().map(output::witness_json).collect::<Vec<_>>(),
            "found": !witnesses.is_empty(),
        }),
    })
}

fn run_table(max_order: u64, max_rank: u32, out: &Path) -> Result<Outcome, Failure> {
    let bounds = SearchBounds::new(max_order, max_order.max(1), max_rank)?;
    let rows = build_f_table(&bounds, out)?;
    Ok(Outcome {
        text: format!("{rows} rows written to {}", out.display()),
        result: json!({ "rows": rows, "path": out.display().to_string() }),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let cfg = Config::from_env();
    let (name, inputs, json_out, outcome) = match &cli.command {
        Command::F { group, phi, json } => (
            "f",
            json!({ "group": group, "phi": phi }),
            *json,
            run_f(group, *phi),
        ),
        Command::Aut { group, oracle, json } => (
            "aut",
            json!({ "group": group, "oracle": oracle }),
            *json,
            run_aut(group, *oracle, &cfg),
        ),
        Command::Oracle { group, json } => (
            "oracle",
            json!({ "group": group }),
            *json,
            run_aut(group, true, &cfg),
        ),
        Command::Approx { target, eps, odd_only, json, materialize } => (
            "approx",
            json!({ "target": target, "eps": eps, "odd_only": odd_only, "materialize": materialize }),
            *json,
            run_approx(target, eps, *odd_only, *materialize, &cfg),
        ),
        Command::Search { target, max_order, max_rank, max_prime, json } => (
            "search",
            json!({ "target": target, "max_order": max_order, "max_rank": max_rank, "max_prime": max_prime }),
            *json,
            run_search(target, *max_order, *max_rank, *max_prime),
        ),
        Command::Table { max_order, out, max_rank, json } => (
            "table",
            json!({ "max_order": max_order, "out": out.display().to_string(), "max_rank": max_rank }),
            *json,
            run_table(*max_order, *max_rank, out),
        ),
    };
    match outcome {
        Ok(o) => {
            if json_out {
                println!("{}", Envelope::ok(name, inputs, o.result).render());
            } else {
                println!("{}", o.text);
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            if json_out {
                println!("{}", Envelope::error(name, inputs, f.message).render());
            } else {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}
