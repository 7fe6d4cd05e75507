//! Argument parsing and the commands. Exit codes: 0 true or passed, 1 false
//! or refuted, 2 open, 3 usage or data error.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use thiserror::Error;
use wlab_core::lattice::{
    classification_matrix, diff_matrices, export_hasse, parse_term, Answer, Figure,
    KnowledgeBase, Order, Pred, Term,
};
use wlab_core::realizers::adversary::adversary_barcn;
use wlab_core::realizers::harness::Sabotage;
use wlab_core::realizers::library::{machine, machine_names};
use wlab_core::realizers::{run as run_machine, run_ep, tokens_to_string};
use wlab_core::streams::NameStream;

use crate::data::{load_figure, load_kb, DataError};
use crate::report::to_json;
use crate::suites::{find_witness, run_suite, verify_witness, Outcome, SUITES};

pub const TRUE: i32 = 0;
pub const FALSE: i32 = 1;
pub const OPEN: i32 = 2;
pub const ERROR: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "wlab", version, about = "Completions of choice problems: degrees, realizers, suites")]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Decide `LHS <=W RHS` (or SW, TW, STW), or `predicate(TERM)`, with a derivation
    Query {
        statement: String,
        #[arg(long)]
        kb: Option<PathBuf>,
    },
    /// Saturate the knowledge base and report its size and consistency
    Derive {
        #[arg(long)]
        kb: Option<PathBuf>,
        /// Print every derived statement
        #[arg(long)]
        list: bool,
    },
    /// List base facts with their citations
    Facts {
        #[arg(long)]
        kb: Option<PathBuf>,
        /// Only facts whose line contains this text
        #[arg(long)]
        grep: Option<String>,
    },
    /// Hasse diagram of the derived order in DOT
    Hasse {
        /// `fig2`, `fig2-core` (without completions) or comma-separated terms
        #[arg(long, default_value = "fig2")]
        nodes: String,
        #[arg(long, default_value = "W")]
        order: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        kb: Option<PathBuf>,
        #[arg(long)]
        figure: Option<PathBuf>,
    },
    /// Classification matrices, optionally their difference
    Matrix {
        #[arg(long, default_value = "W,TW")]
        orders: String,
        #[arg(long)]
        diff: bool,
        #[arg(long, default_value = "fig2-core")]
        nodes: String,
        #[arg(long)]
        kb: Option<PathBuf>,
        #[arg(long)]
        figure: Option<PathBuf>,
    },
    /// Run a library machine on an eventually periodic input `u;v`
    Run {
        realizer: String,
        #[arg(long)]
        input: String,
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Run a suite (fig2-kb, realizer-oracles, witnesses, adversary) or one witness
    Verify {
        target: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: Option<PathBuf>,
        /// Flip a bit in the pre- (k) or post-processor (h) of a single witness
        #[arg(long)]
        sabotage: Option<String>,
    },
    /// Play the mind-change adversary against a choice machine
    Adversary {
        machine: String,
        #[arg(long)]
        budget: usize,
        #[arg(long, default_value_t = 10_000)]
        steps: usize,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Parses arguments and runs the command; returns the exit code.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    return TRUE;
                }
                _ => ERROR,
            };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    match execute(cli.cmd, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            ERROR
        }
    }
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn term(s: &str) -> Result<Term, CliError> {
    parse_term(s).map_err(|e| usage(format!("{s:?}: {e}")))
}

enum Statement {
    Red(Term, Order, Term),
    Pred(bool, Pred, Term),
}

fn parse_statement(s: &str) -> Result<Statement, CliError> {
    if let Some(i) = s.find("<=") {
        let rest = &s[i + 2..];
        let n = rest.find(|c: char| !c.is_ascii_alphabetic()).unwrap_or(rest.len());
        let order: Order = rest[..n]
            .parse()
            .map_err(|_| usage(format!("unknown order {:?}; use W, SW, TW or STW", &rest[..n])))?;
        return Ok(Statement::Red(term(s[..i].trim())?, order, term(rest[n..].trim())?));
    }
    let (name, arg) = s
        .trim()
        .split_once('(')
        .ok_or_else(|| usage(format!("expected `A <=W B` or `predicate(TERM)`, got {s:?}")))?;
    let (pos, pred) = Pred::parse(name.trim()).ok_or_else(|| usage(format!("unknown predicate {name:?}")))?;
    let arg = arg.trim_end().strip_suffix(')').ok_or_else(|| usage("missing ')'"))?;
    Ok(Statement::Pred(pos, pred, term(arg)?))
}

fn kb_err(e: impl std::fmt::Display) -> CliError {
    usage(e.to_string())
}

fn query(out: &mut dyn Write, kb: &mut KnowledgeBase, stmt: &str) -> Result<i32, CliError> {
    let (shown, ans) = match parse_statement(stmt)? {
        Statement::Red(l, o, r) => (format!("{l} <={o} {r}"), kb.query(&l, o, &r).map_err(kb_err)?),
        Statement::Pred(pos, p, t) => {
            let a = kb.query_pred(p, &t).map_err(kb_err)?;
            let a = match (pos, a) {
                (true, a) | (false, a @ Answer::Open) => a,
                (false, Answer::True(tr)) => Answer::False(tr),
                (false, Answer::False(tr)) => Answer::True(tr),
            };
            let not = if pos { "" } else { "not_" };
            (format!("{not}{}({t})", p.name()), a)
        }
    };
    let _ = writeln!(out, "{shown}: {}", ans.label());
    match &ans {
        Answer::True(tr) | Answer::False(tr) => {
            let _ = writeln!(out, "derivation:\n{tr}citations:");
            for c in tr.citations() {
                let _ = writeln!(out, "  {c}");
            }
        }
        Answer::Open => {
            let _ = writeln!(out, "neither the statement nor its negation is derivable");
        }
    }
    Ok(match ans.as_bool() {
        Some(true) => TRUE,
        Some(false) => FALSE,
        None => OPEN,
    })
}

fn node_set(spec: &str, fig: &Figure) -> Result<Vec<(String, Term)>, CliError> {
    Ok(match spec {
        "fig2" => fig.nodes.clone(),
        "fig2-core" => fig.non_completion_nodes(),
        list => list
            .split(',')
            .map(|s| Ok((s.trim().to_string(), term(s.trim())?)))
            .collect::<Result<_, CliError>>()?,
    })
}

fn order(s: &str) -> Result<Order, CliError> {
    s.trim().parse().map_err(|_| usage(format!("unknown order {s:?}; use W, SW, TW or STW")))
}

fn stream(s: &str) -> Result<NameStream, CliError> {
    s.parse().map_err(|e| usage(format!("{s:?}: {e}")))
}

fn print_outcome(out: &mut dyn Write, o: &Outcome) {
    for c in &o.checks {
        let _ = writeln!(out, "{}", c.line());
    }
    for r in &o.reports {
        let _ = writeln!(
            out,
            "{} {} [{}]: {} passed, {} failed{}",
            if r.ok() { "ok  " } else { "FAIL" },
            r.reduction,
            r.witness,
            r.passed,
            r.failed,
            r.horizon.as_ref().map_or(String::new(), |h| format!(", horizon {h}"))
        );
        if let Some(s) = r.samples.iter().find(|s| !s.passed) {
            let _ = writeln!(out, "     first failure: {} ({})", s.input, s.note);
        }
    }
}

fn execute(cmd: Cmd, out: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Cmd::Query { statement, kb } => {
            let mut kb = load_kb(kb.as_deref())?;
            query(out, &mut kb, &statement)
        }
        Cmd::Derive { kb, list } => {
            let mut kb = load_kb(kb.as_deref())?;
            let t = Instant::now();
            let base = kb.base.len();
            match kb.saturate() {
                Ok(sat) => {
                    let _ = writeln!(
                        out,
                        "{} base facts, {} derived statements over {} terms, no contradiction ({} ms)",
                        base,
                        sat.len(),
                        sat.universe.len(),
                        t.elapsed().as_millis()
                    );
                }
                Err(e) => {
                    let _ = writeln!(out, "{e}");
                    return Ok(FALSE);
                }
            }
            if list {
                for c in kb.derived_claims().map_err(kb_err)? {
                    let _ = writeln!(out, "{c}");
                }
            }
            Ok(TRUE)
        }
        Cmd::Facts { kb, grep } => {
            let kb = load_kb(kb.as_deref())?;
            for line in kb.to_text().lines() {
                if grep.as_ref().map_or(true, |g| line.contains(g.as_str())) {
                    let _ = writeln!(out, "{line}");
                }
            }
            Ok(TRUE)
        }
        Cmd::Hasse { nodes, order: o, out: path, kb, figure } => {
            let mut kb = load_kb(kb.as_deref())?;
            let fig = load_figure(figure.as_deref())?;
            let nodes = node_set(&nodes, &fig)?;
            let dot = export_hasse(&mut kb, order(&o)?, &nodes).map_err(kb_err)?;
            match path {
                Some(p) => {
                    write_file(&p, &dot)?;
                    let _ = writeln!(out, "wrote {} ({} nodes)", p.display(), nodes.len());
                }
                None => {
                    let _ = write!(out, "{dot}");
                }
            }
            Ok(TRUE)
        }
        Cmd::Matrix { orders, diff, nodes, kb, figure } => {
            let mut kb = load_kb(kb.as_deref())?;
            let fig = load_figure(figure.as_deref())?;
            let nodes = node_set(&nodes, &fig)?;
            let terms: Vec<Term> = nodes.iter().map(|n| n.1.clone()).collect();
            let orders = orders.split(',').map(order).collect::<Result<Vec<_>, _>>()?;
            let mut ms = Vec::new();
            for &o in &orders {
                ms.push(classification_matrix(&mut kb, o, &terms).map_err(kb_err)?);
            }
            let w = nodes.iter().map(|n| n.0.len()).max().unwrap_or(1);
            for m in &ms {
                let _ = writeln!(out, "order {}: row <= column", m.order);
                let _ = writeln!(
                    out,
                    "{:w$} {}",
                    "",
                    (0..nodes.len()).map(|j| format!("{j:>3}")).collect::<String>()
                );
                for (i, row) in m.cells.iter().enumerate() {
                    let cells: String = row.iter().map(|c| format!("{:>3}", c.symbol())).collect();
                    let _ = writeln!(out, "{:w$} {cells}   {i}", nodes[i].0);
                }
            }
            if diff {
                if ms.len() != 2 {
                    return Err(usage("--diff needs exactly two orders"));
                }
                let d = diff_matrices(&ms[0], &ms[1]);
                let _ = writeln!(out, "differing cells ({}):", d.differing.len());
                for (i, j) in &d.differing {
                    let _ = writeln!(
                        out,
                        "  {} vs {}: {} {}, {} {}",
                        nodes[*i].0,
                        nodes[*j].0,
                        ms[0].order,
                        ms[0].cells[*i][*j].symbol(),
                        ms[1].order,
                        ms[1].cells[*i][*j].symbol()
                    );
                }
                let _ = writeln!(out, "open cells (not counted): {}", d.open.len());
            }
            Ok(TRUE)
        }
        Cmd::Run { realizer, input, steps } => {
            let p = stream(&input)?;
            let mut m = machine(&realizer).ok_or_else(|| {
                usage(format!("unknown realizer {realizer:?}; known: {}", machine_names().join(", ")))
            })?;
            let steps = steps.unwrap_or(p.description_len() * 4 + 16);
            let r = run_machine(&mut *m, &p, steps);
            let _ = writeln!(out, "input:     {p}");
            let _ = writeln!(out, "tokens:    {}", tokens_to_string(&r.tokens));
            let _ = writeln!(out, "commits:   {:?}", r.commits());
            let _ = writeln!(out, "resets:    {}", r.resets);
            let mut fresh = machine(&realizer).expect("known above");
            match run_ep(&mut *fresh, &p, 4096) {
                Ok(ep) => {
                    let _ = writeln!(out, "output:    {}", ep.output);
                }
                Err(e) => {
                    let _ = writeln!(out, "output:    {e} (shown {steps} steps)");
                }
            }
            Ok(TRUE)
        }
        Cmd::Verify { target, seed, json, sabotage } => {
            let outcome = match (run_suite(&target, seed), find_witness(&target)) {
                (Some(o), _) if sabotage.is_none() => o,
                (_, Some(w)) => {
                    let s = match sabotage.as_deref() {
                        None => Sabotage::None,
                        Some("k" | "K") => Sabotage::K,
                        Some("h" | "H") => Sabotage::H,
                        Some(x) => return Err(usage(format!("unknown sabotage {x:?}; use k or h"))),
                    };
                    let r = verify_witness(&w, s, seed);
                    Outcome { target: target.clone(), seed, checks: Vec::new(), reports: vec![r] }
                }
                _ => {
                    return Err(usage(format!(
                        "unknown suite or witness {target:?}; suites: {}",
                        SUITES.join(", ")
                    )))
                }
            };
            print_outcome(out, &outcome);
            if let Some(p) = json {
                write_file(&p, &to_json(&outcome))?;
            }
            Ok(if outcome.ok() { TRUE } else { FALSE })
        }
        Cmd::Adversary { machine: name, budget, steps } => {
            let mut m = machine(&name).ok_or_else(|| usage(format!("unknown machine {name:?}")))?;
            let r = adversary_barcn(&mut *m, budget, steps);
            let _ = writeln!(out, "commits:        {:?}", r.commits);
            let _ = writeln!(out, "forced resets:  {}", r.forced_resets);
            let _ = writeln!(out, "steps:          {}", r.steps);
            let _ = writeln!(out, "never commits:  {}", r.never_commits);
            let shown: Vec<String> = r.input.iter().take(40).map(|d| d.to_string()).collect();
            let more = if r.input.len() > 40 { ",..." } else { "" };
            let _ = writeln!(out, "input:          {}{more}", shown.join(","));
            let beaten = r.defeated(budget);
            let _ = writeln!(
                out,
                "{}",
                if beaten { "machine forced past its budget" } else { "machine kept within its budget" }
            );
            Ok(if beaten { TRUE } else { FALSE })
        }
    }
}
