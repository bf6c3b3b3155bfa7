//! Text and JSON rendering shared by the subcommands.

use autratio_core::approx::{achieved_f64, Branch};
use autratio_core::search::Witness;
use autratio_core::subsum::SelectionStatus;
use autratio_core::{aut_order, ApproxResult, IndexSet, LogValue};
use serde::Serialize;
use serde_json::{json, Value};

/// One self-contained machine-readable document per invocation.
#[derive(Debug, Serialize)]
pub struct Envelope {
    pub command: String,
    pub inputs: Value,
    pub result: Value,
    pub status: &'static str,
    pub error: Option<String>,
}

impl Envelope {
    pub fn ok(command: &str, inputs: Value, result: Value) -> Self {
        Envelope {
            command: command.to_string(),
            inputs,
            result,
            status: "ok",
            error: None,
        }
    }

    pub fn error(command: &str, inputs: Value, message: String) -> Self {
        Envelope {
            command: command.to_string(),
            inputs,
            result: Value::Null,
            status: "error",
            error: Some(message),
        }
    }

    pub fn render(&self) -> String {
        serde_json::to_string_pretty(self).expect("envelope serializes")
    }
}

const MAX_LISTED_GAPS: usize = 16;
const MAX_LISTED_RUNS: usize = 8;

/// `odd primes #2..#3421 except {#17}` style summary of an index set.
pub fn describe_indices(set: &IndexSet) -> String {
    let (Some(first), Some(last)) = (set.first(), set.last()) else {
        return "no odd primes".to_string();
    };
    if first == last {
        return format!("odd prime #{first}");
    }
    let runs = set.runs();
    let gaps: Vec<(u64, u64)> = runs.windows(2).map(|w| (w[0].1 + 1, w[1].0 - 1)).collect();
    let missing: u64 = gaps.iter().map(|&(a, b)| b - a + 1).sum();
    if gaps.is_empty() {
        return format!("odd primes #{first}..#{last}");
    }
    if missing as usize <= MAX_LISTED_GAPS {
        let listed: Vec<String> = gaps
            .iter()
            .flat_map(|&(a, b)| a..=b)
            .map(|i| format!("#{i}"))
            .collect();
        return format!("odd primes #{first}..#{last} except {{{}}}", listed.join(", "));
    }
    let shown: Vec<String> = runs
        .iter()
        .take(MAX_LISTED_RUNS)
        .map(|&(a, b)| if a == b { format!("#{a}") } else { format!("#{a}..#{b}") })
        .collect();
    let more = if runs.len() > MAX_LISTED_RUNS { ", ..." } else { "" };
    format!("odd primes in {} runs: {}{}", runs.len(), shown.join(", "), more)
}

pub fn log_value_json(lv: &LogValue) -> Value {
    json!({ "log_value": lv.log_value(), "abs_error": lv.abs_error() })
}

fn branch_name(b: Branch) -> &'static str {
    match b {
        Branch::Exact => "exact",
        Branch::Greedy => "greedy",
        Branch::BelowTolerance => "below_tolerance",
    }
}

pub fn approx_json(res: &ApproxResult, literal: Option<String>) -> Value {
    let runs: Vec<[u64; 2]> = res
        .group
        .odd_prime_indices()
        .runs()
        .iter()
        .map(|&(a, b)| [a, b])
        .collect();
    let t = &res.trace;
    json!({
        "group": {
            "two_rank": res.group.two_rank(),
            "odd_prime_index_runs": runs,
            "odd_prime_count": res.group.odd_prime_indices().len(),
            "literal": literal,
        },
        "achieved": {
            "ln_f": log_value_json(&res.achieved),
            "exact": res.exact.as_ref().map(|r| r.to_fraction_string()),
            "approx": achieved_f64(res),
        },
        "target": res.target.to_fraction_string(),
        "eps": res.eps.to_fraction_string(),
        "status": res.status.as_str(),
        "certified": res.certified,
        "trace": {
            "branch": branch_name(t.branch),
            "two_rank": t.two_rank,
            "b": t.b.as_ref().map(|r| r.to_fraction_string()),
            "eps1": t.eps1.as_ref().map(|r| r.to_fraction_string()),
            "examined_terms": t.selection.as_ref().map(|s| s.examined),
            "max_prime_index": t.max_prime_index,
            "max_prime": t.max_prime,
            "sieve_estimate": t.sieve_estimate,
            "precision_bits": t.precision_bits,
        },
    })
}

pub fn approx_text(res: &ApproxResult, literal: Option<String>) -> String {
    let mut out = Vec::new();
    let g = &res.group;
    if g.is_trivial() {
        out.push("group: C1 (trivial)".to_string());
    } else {
        let mut parts = Vec::new();
        match g.two_rank() {
            0 => {}
            1 => parts.push("C2".to_string()),
            n => parts.push(format!("C2^{n}")),
        }
        if !g.odd_prime_indices().is_empty() {
            parts.push(format!(
                "prod of C_p over {} ({} primes)",
                describe_indices(g.odd_prime_indices()),
                g.odd_prime_indices().len()
            ));
        }
        out.push(format!("group: {}", parts.join(" x ")));
    }
    if let Some(lit) = literal {
        out.push(format!("literal: {lit}"));
    }
    match &res.exact {
        Some(f) if *f == res.target => out.push(format!("f = {f} (exact)")),
        Some(f) if f.to_string().len() <= 60 => out.push(format!("f = {f} ≈ {:.12}", f.to_f64())),
        _ => out.push(format!("f ≈ {:.12}", achieved_f64(res))),
    }
    out.push(format!(
        "ln f = {:.15} ± {:.3e}",
        res.achieved.log_value(),
        res.achieved.abs_error()
    ));
    if res.certified {
        out.push(format!(
            "|f − {}| < {} (certified)",
            res.target,
            res.eps
        ));
    } else {
        out.push("not certified".to_string());
    }
    let t = &res.trace;
    let mut trace = vec![format!("branch {}", branch_name(t.branch))];
    if let Some(b) = &t.b {
        trace.push(format!("n = {}", t.two_rank));
        trace.push(format!("b = {b}"));
    }
    if let Some(e) = &t.eps1 {
        trace.push(format!("eps1 = {e}"));
    }
    if t.max_prime_index > 0 {
        trace.push(format!("examined up to p_{} = {}", t.max_prime_index, t.max_prime));
    }
    out.push(format!("trace: {}", trace.join(", ")));
    out.push(format!("status: {}", res.status.as_str()));
    out.join("\n")
}

pub fn witness_json(w: &Witness) -> Value {
    json!({
        "group": w.group.to_string(),
        "order": w.group.order().to_string(),
        "aut_order": aut_order(&w.group).to_string(),
        "f": w.f_value.to_fraction_string(),
    })
}

pub fn status_is_failure(status: SelectionStatus) -> bool {
    status != SelectionStatus::Converged
}
