//! Command logic for the `diagcount` binary. Every command returns a
//! [`CommandResult`]; rendering and the exit code are decided by the caller.

use clap::{Parser, Subcommand, ValueEnum};
use diagcount::closed::{diag2_closed, diag3_closed, diag4_closed};
use diagcount::matrix::binomial;
use diagcount::oracle::{
    centralizer_brute, diag_count_brute, jordan_demo_checks, verify_unique_diagonalization, z6_counterexample_check,
    OrbitStrategy,
};
use diagcount::residue::big_pow;
use diagcount::types::{
    diag_count_semidirect, enumerate_types, proportion, t_of_type_checked, types_to_json, write_types_csv,
};
use diagcount::valuation::{enumerate_graph_classes, graph_to_dot, permissible_tree, MAX_CLASS_VERTICES};
use diagcount::{
    centralizer_order, classify_diagonal, diag_count_engine, gl_order, DiagonalSpec, Error, Modulus, ValuationGraph,
    DEFAULT_BUDGET,
};
use num_bigint::BigUint;
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(
    name = "diagcount",
    version,
    about = "Count diagonalizable matrices over Z/p^k exactly"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output encoding.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Worker threads for parallel sections.
    #[arg(long, env = "DIAGCOUNT_THREADS", global = true)]
    pub threads: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Engine,
    Closed,
    Semidirect,
    Brute,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Demo {
    /// Two dissimilar-looking diagonalizations over Z/6, and the Z/4 contrast.
    Z6,
    /// Similarity of Jordan forms over Z/4.
    Jordan,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// |Diag_n(Z/p^k)| by one method.
    Count {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value_t = Method::Engine)]
        method: Method,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Per-type table: t, centralizer order, class size, contribution.
    Types {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value_t = TableFormat::Json)]
        out: TableFormat,
    },
    /// Valuation graph, permissible tree, linked cells and class count of a
    /// set of distinct residues.
    Graph {
        #[arg(long)]
        modulus: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        entries: Vec<u64>,
        /// Include a Graphviz rendering.
        #[arg(long)]
        dot: bool,
    },
    /// Weight-erased valuation graph classes on g vertices.
    Classes {
        #[arg(long)]
        g: usize,
    },
    /// Cross-check every available method and the oracle invariants.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// |Diag_n| / |M_n| for a list of primes, against the limit 1/n!.
    Proportion {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
    },
    /// Oracle demonstrations; composite moduli allowed.
    Demo {
        #[arg(value_enum)]
        which: Demo,
    },
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct CommandResult {
    pub command: String,
    pub params: Value,
    pub payload: Value,
    pub exit_code: i32,
    /// Raw text output replacing the JSON envelope (CSV tables).
    pub raw: Option<String>,
}

impl CommandResult {
    fn ok(command: &str, params: Value, payload: Value) -> Self {
        Self {
            command: command.into(),
            params,
            payload,
            exit_code: EXIT_OK,
            raw: None,
        }
    }

    fn failed(command: &str, params: Value, err: &Error) -> Self {
        let exit_code = match err {
            Error::Inconsistent(_) | Error::TypeCountMismatch { .. } => EXIT_VERIFY,
            _ => EXIT_USAGE,
        };
        Self {
            command: command.into(),
            params,
            payload: json!({ "error": err.to_string() }),
            exit_code,
            raw: None,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "params": self.params,
            "payload": self.payload,
            "exit_code": self.exit_code,
        })
    }

    pub fn error(&self) -> Option<&str> {
        self.payload.get("error").and_then(Value::as_str)
    }

    pub fn render(&self, format: Format) -> String {
        if let Some(raw) = &self.raw {
            return raw.clone();
        }
        match format {
            Format::Json => format!(
                "{}\n",
                serde_json::to_string_pretty(&self.to_json()).expect("valid json")
            ),
            Format::Text => {
                let mut out = String::new();
                if let Value::Object(map) = &self.payload {
                    for (key, v) in map {
                        let shown = match v {
                            Value::String(s) if s.contains('\n') => format!("\n{s}"),
                            Value::String(s) => s.clone(),
                            other => other.to_string(),
                        };
                        out.push_str(&format!("{key}: {shown}\n"));
                    }
                }
                out
            }
        }
    }
}

fn s(v: &BigUint) -> Value {
    Value::String(v.to_string())
}

pub fn run(cli: &Cli) -> CommandResult {
    match &cli.command {
        Command::Count {
            n,
            p,
            k,
            method,
            budget,
        } => {
            let params = json!({"n": n, "p": p, "k": k, "method": format!("{method:?}").to_lowercase(), "budget": budget.to_string()});
            finish(
                "count",
                params,
                count(*n, *p, *k, *method, *budget).map(
                    |c| json!({"n": n, "p": p, "k": k, "method": format!("{method:?}").to_lowercase(), "count": s(&c)}),
                ),
            )
        }
        Command::Types { n, p, k, out } => types(*n, *p, *k, *out),
        Command::Graph { modulus, entries, dot } => {
            let params = json!({"modulus": modulus, "entries": entries, "dot": dot});
            finish("graph", params, graph(*modulus, entries, *dot))
        }
        Command::Classes { g } => finish("classes", json!({"g": g}), classes(*g)),
        Command::Verify { n, p, k, budget } => verify(*n, *p, *k, *budget),
        Command::Proportion { n, k, primes } => {
            let params = json!({"n": n, "k": k, "primes": primes});
            finish("proportion", params, proportions(*n, *k, primes))
        }
        Command::Demo { which } => {
            let name = format!("{which:?}").to_lowercase();
            demo(*which, &name)
        }
    }
}

fn finish(command: &str, params: Value, payload: diagcount::Result<Value>) -> CommandResult {
    match payload {
        Ok(v) => CommandResult::ok(command, params, v),
        Err(e) => CommandResult::failed(command, params, &e),
    }
}

pub fn count(n: usize, p: u64, k: u32, method: Method, budget: u64) -> diagcount::Result<BigUint> {
    let modulus = Modulus::prime_power(p, k)?;
    match method {
        Method::Engine => diag_count_engine(n, p, k),
        Method::Semidirect => diag_count_semidirect(n, p, k, budget),
        Method::Brute => Ok(diag_count_brute(n, modulus, OrbitStrategy::Auto, budget)?.count),
        Method::Closed => match n {
            2 => diag2_closed(p, k),
            3 => diag3_closed(p, k),
            4 => diag4_closed(p, k),
            _ => Err(Error::ShapeMismatch(format!(
                "no closed form for n = {n}; use n in 2..=4"
            ))),
        },
    }
}

fn types(n: usize, p: u64, k: u32, out: TableFormat) -> CommandResult {
    let params = json!({"n": n, "p": p, "k": k, "out": format!("{out:?}").to_lowercase()});
    let reports = match enumerate_types(n, p, k) {
        Ok(r) => r,
        Err(e) => return CommandResult::failed("types", params, &e),
    };
    let total_t: BigUint = reports.iter().map(|r| &r.t).sum();
    let total: BigUint = reports.iter().map(|r| &r.contribution).sum();
    let mut result = CommandResult::ok(
        "types",
        params,
        json!({
            "rows": types_to_json(&reports),
            "total": {"t": s(&total_t), "contribution": s(&total)},
        }),
    );
    if out == TableFormat::Csv {
        let mut buf = Vec::new();
        if let Err(e) = write_types_csv(&reports, &mut buf) {
            return CommandResult::failed("types", result.params, &e);
        }
        let mut text = String::from_utf8(buf).expect("csv is utf-8");
        text.push_str(&format!("total,,{total_t},,,{total},\n"));
        result.raw = Some(text);
    }
    result
}

fn graph(modulus: u64, entries: &[u64], dot: bool) -> diagcount::Result<Value> {
    let m = Modulus::from_value(modulus)?;
    let (p, k) = m.parts()?;
    let g = ValuationGraph::build(entries, m)?;
    let tree = permissible_tree(&g)?;
    let labels = g.labels().expect("built from entries").to_vec();
    let weights: Vec<Vec<u32>> = (0..g.g())
        .map(|i| (0..g.g()).map(|j| g.weight(i, j)).collect())
        .collect();
    let edges: Vec<Value> = tree
        .edges()
        .iter()
        .map(|e| json!({"u": labels[e.u], "v": labels[e.v], "weight": e.weight}))
        .collect();
    let cells: Vec<Value> = tree
        .cells()
        .iter()
        .map(|c| {
            let es: Vec<[u64; 2]> = c
                .edges
                .iter()
                .map(|&i| [labels[tree.edges()[i].u], labels[tree.edges()[i].v]])
                .collect();
            json!({"weight": c.weight, "size": c.edges.len(), "edges": es})
        })
        .collect();
    let mut payload = json!({
        "modulus": modulus,
        "p": p,
        "k": k,
        "vertices": labels,
        "weights": weights,
        "tree": edges,
        "cells": cells,
        "aut": s(&g.aut_order(None)?),
        "classes": s(&g.count_classes(p, k)?),
    });
    if dot {
        payload["dot"] = Value::String(graph_to_dot(&g));
    }
    Ok(payload)
}

fn classes(g: usize) -> diagcount::Result<Value> {
    if g == 0 || g > MAX_CLASS_VERTICES {
        return Err(Error::ShapeMismatch(format!("g must be in 1..={MAX_CLASS_VERTICES}")));
    }
    let all = enumerate_graph_classes(g);
    let list: Vec<Value> = all
        .iter()
        .map(|c| json!({"ranks": c.rank_count(), "canonical": c.canonical()}))
        .collect();
    Ok(json!({"g": g, "a_g": all.len().to_string(), "classes": list}))
}

fn proportions(n: usize, k: u32, primes: &[u64]) -> diagcount::Result<Value> {
    let fact: BigUint = (1..=n as u64).product();
    let mut rows = Vec::new();
    for &p in primes {
        let ratio = proportion(n, p, k)?;
        let total = big_pow(p, k as u64 * (n * n) as u64);
        rows.push(json!({
            "p": p,
            "count": s(&(ratio.numerator() * &total / ratio.denominator())),
            "total": s(&total),
            "ratio": ratio.to_string(),
            "decimal": format!("{:.12}", ratio.to_f64()),
            "scaled": format!("{:.12}", ratio.to_f64() * n_factorial_f64(n)),
        }));
    }
    Ok(json!({"n": n, "k": k, "target": format!("1/{fact}"), "rows": rows}))
}

fn n_factorial_f64(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

fn demo(which: Demo, name: &str) -> CommandResult {
    let params = json!({"which": name});
    let payload = match which {
        Demo::Z6 => (|| {
            let report = z6_counterexample_check()?;
            let z6 =
                verify_unique_diagonalization(2, Modulus::from_value(6)?, OrbitStrategy::FullGroup, DEFAULT_BUDGET)?;
            let z4 =
                verify_unique_diagonalization(2, Modulus::from_value(4)?, OrbitStrategy::FullGroup, DEFAULT_BUDGET)?;
            let holds = report.holds && !z6.holds() && z4.holds();
            Ok((
                holds,
                json!({
                    "holds": holds,
                    "z6": serde_json::to_value(&report).expect("serializable"),
                    "z6_similar_diagonal_pairs": serde_json::to_value(&z6.violations).expect("serializable"),
                    "z4_similar_diagonal_pairs": serde_json::to_value(&z4.violations).expect("serializable"),
                }),
            ))
        })(),
        Demo::Jordan => jordan_demo_checks().map(|r| {
            (
                r.holds(),
                json!({"holds": r.holds(), "report": serde_json::to_value(&r).expect("serializable")}),
            )
        }),
    };
    match payload {
        Ok((holds, v)) => {
            let mut r = CommandResult::ok("demo", params, v);
            if !holds {
                r.exit_code = EXIT_VERIFY;
            }
            r
        }
        Err(e) => CommandResult::failed("demo", params, &e),
    }
}

struct Checks(Vec<Value>);

impl Checks {
    fn compare(&mut self, name: &str, left: &BigUint, right: &BigUint) {
        self.0
            .push(json!({"check": name, "left": s(left), "right": s(right), "pass": left == right}));
    }

    fn flag(&mut self, name: &str, pass: bool, detail: Value) {
        self.0.push(json!({"check": name, "detail": detail, "pass": pass}));
    }

    fn skip(&mut self, name: &str, why: String) {
        self.0.push(json!({"check": name, "skipped": why, "pass": true}));
    }
}

fn verify(n: usize, p: u64, k: u32, budget: u64) -> CommandResult {
    let params = json!({"n": n, "p": p, "k": k, "budget": budget.to_string()});
    let outcome = (|| -> diagcount::Result<Vec<Value>> {
        let modulus = Modulus::prime_power(p, k)?;
        let mut checks = Checks(Vec::new());
        let engine = diag_count_engine(n, p, k)?;

        let reports = enumerate_types(n, p, k)?;
        let t_sum: BigUint = reports.iter().map(|r| &r.t).sum();
        checks.compare("multiset completeness", &t_sum, &DiagonalSpec::count(n, modulus));
        let distinct: BigUint = reports
            .iter()
            .filter(|r| r.matrix_type.is_distinct())
            .map(|r| &r.t)
            .sum();
        checks.compare(
            "distinct-entry completeness",
            &distinct,
            &binomial(modulus.m(), n as u64),
        );

        match diag_count_semidirect(n, p, k, budget) {
            Ok(v) => checks.compare("engine = semidirect", &engine, &v),
            Err(e @ Error::BudgetExceeded { .. }) => checks.skip("engine = semidirect", e.to_string()),
            Err(e) => return Err(e),
        }
        if (2..=4).contains(&n) {
            checks.compare("engine = closed", &engine, &count(n, p, k, Method::Closed, budget)?);
        }
        if DiagonalSpec::count(n, modulus) <= BigUint::from(budget) {
            for r in &reports {
                let name = format!("t scan {}", r.matrix_type);
                match t_of_type_checked(&r.matrix_type, p, k, budget) {
                    Ok(_) => checks.flag(&name, true, Value::String(r.t.to_string())),
                    Err(Error::TypeCountMismatch { formula, scanned }) => checks.compare(&name, &formula, &scanned),
                    Err(e) => return Err(e),
                }
            }
        }
        match diag_count_brute(n, modulus, OrbitStrategy::Auto, budget) {
            Ok(b) => {
                checks.compare("engine = brute", &engine, &b.count);
                checks.compare("orbits disjoint", &b.count, &b.orbit_sum);
                let u = verify_unique_diagonalization(n, modulus, OrbitStrategy::Auto, budget)?;
                checks.flag(
                    "unique diagonalization",
                    u.holds(),
                    json!({"representatives": u.representatives, "pairs": s(&u.pairs_checked), "violations": u.violations.len()}),
                );
                let gl = gl_order(n, p, k);
                if gl <= BigUint::from(1u32 << 17) {
                    for spec in DiagonalSpec::all(n, modulus) {
                        let t = classify_diagonal(&spec)?;
                        let c = centralizer_brute(&spec, budget)?;
                        checks.compare(
                            &format!("centralizer {:?}", spec.entries()),
                            &centralizer_order(&t, p, k)?,
                            &c,
                        );
                    }
                }
            }
            Err(e @ Error::BudgetExceeded { .. }) => checks.skip("engine = brute", e.to_string()),
            Err(e) => return Err(e),
        }
        Ok(checks.0)
    })();
    match outcome {
        Ok(checks) => {
            let first_failure = checks.iter().find(|c| c["pass"] == Value::Bool(false)).cloned();
            let passed = first_failure.is_none();
            let mut r = CommandResult::ok(
                "verify",
                params,
                json!({"passed": passed, "checks": checks, "first_failure": first_failure}),
            );
            if !passed {
                r.exit_code = EXIT_VERIFY;
            }
            r
        }
        Err(e) => CommandResult::failed("verify", params, &e),
    }
}
