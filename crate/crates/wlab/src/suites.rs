//! The acceptance suites. Each check carries the number of the criterion it
//! decides; `verify <suite>` runs one suite, the acceptance test runs all.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wlab_core::lattice::{
    classification_matrix, diff_matrices, parse_term, print_term, Answer, Binary, Claim, Figure,
    KnowledgeBase, Order, Term, Unary, ATOMS,
};
use wlab_core::realizers::adversary::adversary_barcn;
use wlab_core::realizers::harness::{
    oracle_checks, verify_on, witnesses, Report, Sabotage, Sampler, Witness,
};
use wlab_core::realizers::library::machine;
use wlab_core::spaces::Name;
use wlab_core::streams::Digit;

use crate::data::{shipped_figure, SHIPPED_KB};

pub const SUITES: [&str; 4] = ["fig2-kb", "realizer-oracles", "witnesses", "adversary"];

pub const FIGURE_BUDGET: Duration = Duration::from_secs(5);
pub const ORACLE_BUDGET: Duration = Duration::from_secs(30);
pub const ADVERSARY_STEPS: usize = 10_000;
pub const ADVERSARY_MACHINES: [&str; 3] = ["cn_fmc_solver", "cn_fmc_above_max", "cn_fmc_lazy"];
/// Oracle answers drawn per sample: the canonical one plus adversarial ones.
pub const ANSWERS: usize = 6;

#[derive(Debug, Clone)]
pub struct Check {
    pub criterion: Option<u8>,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl Check {
    pub fn line(&self) -> String {
        let tag = self.criterion.map_or(String::new(), |c| format!("[{c}] "));
        format!(
            "{} {tag}{}: {} ({:.2} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub target: String,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub reports: Vec<Report>,
}

impl Outcome {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.passed) && self.reports.iter().all(|r| r.ok())
    }
}

fn timed(criterion: u8, name: &str, f: impl FnOnce() -> (bool, String)) -> Check {
    let t = Instant::now();
    let (passed, detail) = f();
    Check { criterion: Some(criterion), name: name.into(), passed, detail, elapsed: t.elapsed() }
}

fn t(s: &str) -> Term {
    parse_term(s).expect("fixed term")
}

fn first<T: std::fmt::Display>(xs: &[T], n: usize) -> String {
    xs.iter().take(n).map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// Every arrow of the diagram derives, every box is strict, no contradiction.
pub fn figure_reproduction(kb_text: &str, fig: &Figure) -> Check {
    let start = Instant::now();
    let mut c = timed(1, "diagram reproduction", || {
        let mut kb = match KnowledgeBase::parse(kb_text) {
            Ok(kb) => kb,
            Err(e) => return (false, e.to_string()),
        };
        for (_, n) in &fig.nodes {
            if let Err(e) = kb.mention(n) {
                return (false, e.to_string());
            }
        }
        let facts = match kb.saturate() {
            Ok(s) => s.len(),
            Err(e) => return (false, format!("saturation failed: {e}")),
        };
        let mut missing = Vec::new();
        for ((from, to), claim) in fig.arrows.iter().zip(fig.arrow_claims()) {
            let Claim::Red { lhs, rhs, .. } = &claim else { unreachable!() };
            if kb.query(lhs, Order::W, rhs).ok().and_then(|a| a.as_bool()) != Some(true) {
                missing.push(format!("{from} -> {to}"));
            }
        }
        let mut loose = Vec::new();
        for ((lo, hi), (f, bar)) in fig.boxes.iter().zip(fig.box_pairs()) {
            let up = kb.query(&f, Order::W, &bar).ok().and_then(|a| a.as_bool());
            let down = kb.query(&bar, Order::W, &f).ok().and_then(|a| a.as_bool());
            if up != Some(true) || down != Some(false) {
                loose.push(format!("{lo} < {hi}"));
            }
        }
        let ok = missing.is_empty() && loose.is_empty();
        let mut d = format!(
            "{}/{} arrows, {}/{} boxes strict, 0 contradictions, {facts} facts",
            fig.arrows.len() - missing.len(),
            fig.arrows.len(),
            fig.boxes.len() - loose.len(),
            fig.boxes.len()
        );
        if !missing.is_empty() {
            d.push_str(&format!("; underived: {}", first(&missing, 6)));
        }
        if !loose.is_empty() {
            d.push_str(&format!("; not strict: {}", first(&loose, 6)));
        }
        (ok, d)
    });
    if start.elapsed() >= FIGURE_BUDGET {
        c.passed = false;
        c.detail.push_str(&format!("; over the {} s budget", FIGURE_BUDGET.as_secs()));
    }
    c
}

/// A named chain and the citation prefix of the result that states it.
pub struct Chain {
    pub label: &'static str,
    pub claims: Vec<Claim>,
}

fn strict(o: Order, a: &str, b: &str) -> [Claim; 2] {
    [Claim::le(o, t(a), t(b)), Claim::nle(o, t(b), t(a))]
}

pub fn corollary_chains() -> Vec<Chain> {
    vec![
        Chain {
            label: "Cor. after Prop. Finite choice",
            claims: (1..5)
                .flat_map(|n| strict(Order::TW, &format!("C_{n}"), &format!("C_{}", n + 1)))
                .collect(),
        },
        Chain {
            label: "Cor. TCN-CNS",
            claims: [strict(Order::W, "T(C_N)", "C_N * bar(C_N)"), strict(Order::W, "C_N * bar(C_N)", "C_N'")]
                .concat(),
        },
        Chain {
            label: "Thm. Choice on Baire space",
            claims: [strict(Order::W, "C_NN", "bar(C_NN)"), strict(Order::W, "bar(C_NN)", "T(C_NN)")]
                .concat(),
        },
    ]
}

/// Citations of the summary statements whose content the chains restate.
pub const SUMMARY_PREFIX: &str = "Introduction";

/// Rederives each chain with the summary statements and every fact cited to
/// the chain's own result removed. Separations must be derived; a `<=` link
/// may remain a base fact of another result.
pub fn chains_rederived(kb_text: &str) -> Check {
    timed(2, "named corollaries as theorems", || {
        let full = KnowledgeBase::parse(kb_text).expect("kb parses");
        let mut bad = Vec::new();
        let (mut total, mut cited) = (0, 0);
        for chain in corollary_chains() {
            let mut kb = full.clone();
            kb.retain_base(|f| {
                !f.citation.starts_with(SUMMARY_PREFIX) && !f.citation.starts_with(chain.label)
            });
            for c in &chain.claims {
                total += 1;
                let (pos, order, lhs, rhs) = match c {
                    Claim::Red { pos, order, lhs, rhs } => (*pos, *order, lhs, rhs),
                    Claim::Pred { .. } => unreachable!(),
                };
                if !pos && full.is_base(c) {
                    bad.push(format!("{c} is a base fact"));
                    continue;
                }
                if kb.is_base(c) {
                    cited += 1;
                }
                let trace = match kb.query(lhs, order, rhs) {
                    Ok(Answer::True(tr)) if pos => tr,
                    Ok(Answer::False(tr)) if !pos => tr,
                    Ok(a) => {
                        bad.push(format!("{c}: {}", a.label()));
                        continue;
                    }
                    Err(e) => {
                        bad.push(format!("{c}: {e}"));
                        continue;
                    }
                };
                if trace.base_claims().iter().any(|b| !kb.is_base(b))
                    || trace.rules().iter().any(|r| !(1..=20).contains(&r.0))
                {
                    bad.push(format!("{c}: ungrounded trace"));
                }
            }
            match kb.replay_failures() {
                Ok(f) if f.is_empty() => {}
                Ok(f) => bad.push(format!("{}: {} facts fail to replay", chain.label, f.len())),
                Err(e) => bad.push(e.to_string()),
            }
        }
        let d = format!(
            "{}/{total} chain statements derived without their own or summary citations ({cited} links cite other results)",
            total - bad.len().min(total)
        );
        if bad.is_empty() {
            (true, d)
        } else {
            (false, format!("{d}; {}", first(&bad, 4)))
        }
    })
}

/// W and TW agree on the non-completion nodes off the WBWT row and column.
pub fn matrix_diff(kb_text: &str, fig: &Figure) -> Check {
    timed(3, "W/TW matrix difference", || {
        let mut kb = KnowledgeBase::parse(kb_text).expect("kb parses");
        let nodes = fig.non_completion_nodes();
        let terms: Vec<Term> = nodes.iter().map(|n| n.1.clone()).collect();
        let (w, tw) = match (
            classification_matrix(&mut kb, Order::W, &terms),
            classification_matrix(&mut kb, Order::TW, &terms),
        ) {
            (Ok(w), Ok(tw)) => (w, tw),
            (Err(e), _) | (_, Err(e)) => return (false, e.to_string()),
        };
        let d = diff_matrices(&w, &tw);
        let wbwt = Term::atom("WBWT_2");
        let outside: Vec<String> = d
            .differing
            .iter()
            .filter(|&&(i, j)| terms[i] != wbwt && terms[j] != wbwt)
            .map(|&(i, j)| format!("{} vs {}", nodes[i].0, nodes[j].0))
            .collect();
        let detail = format!(
            "{} nodes, {} differing cells, all on the WBWT_2 row/column: {}; {} open cells not counted",
            nodes.len(),
            d.differing.len(),
            outside.is_empty(),
            d.open.len()
        );
        if outside.is_empty() {
            (true, detail)
        } else {
            (false, format!("{detail}; outside: {}", first(&outside, 6)))
        }
    })
}

/// Extra stream samples over the digits the witness's own samples use.
pub fn seeded_samples(w: &Witness, seed: u64, count: usize) -> Vec<Name> {
    let own = w.samples();
    let mut alphabet: Vec<Digit> = Vec::new();
    for n in &own {
        let Name::Stream(s) = n else { return Vec::new() };
        alphabet.extend(s.prefix().iter().chain(s.period()).copied());
    }
    alphabet.sort_unstable();
    alphabet.dedup();
    if alphabet.is_empty() {
        return Vec::new();
    }
    let mut s = Sampler::new(seed);
    (0..count).map(|_| Name::Stream(s.stream(&alphabet, 6))).collect()
}

pub fn verify_witness(w: &Witness, sabotage: Sabotage, seed: u64) -> Report {
    let mut samples = w.samples();
    samples.extend(seeded_samples(w, seed, 16));
    verify_on(w, &samples, sabotage, ANSWERS)
}

/// Library oracles and every witness against sampled oracle answers.
pub fn realizer_oracles(seed: u64) -> (Check, Vec<Report>) {
    let mut reports = Vec::new();
    let start = Instant::now();
    let mut c = timed(4, "realizer oracle suite", || {
        let mut bad = Vec::new();
        let mut cases = 0;
        for r in oracle_checks() {
            cases += r.cases;
            if !r.ok() {
                bad.push(format!("{}: {}", r.name, first(&r.failures, 2)));
            }
        }
        let mut samples = 0;
        for w in witnesses() {
            let r = verify_witness(&w, Sabotage::None, seed);
            samples += r.passed + r.failed;
            if !r.ok() {
                bad.push(format!("{}: {} failed samples", r.reduction, r.failed));
            }
            reports.push(r);
        }
        let d = format!(
            "{cases} oracle cases, {} witnesses over {samples} samples",
            reports.len()
        );
        if bad.is_empty() {
            (true, d)
        } else {
            (false, format!("{d}; {}", first(&bad, 4)))
        }
    });
    if start.elapsed() >= ORACLE_BUDGET {
        c.passed = false;
        c.detail.push_str(&format!("; over the {} s budget", ORACLE_BUDGET.as_secs()));
    }
    (c, reports)
}

/// Forced resets against the mind-change solvers for budgets 0..=5.
pub fn adversary_budgets() -> Check {
    timed(5, "adversary forces mind changes", || {
        let mut bad = Vec::new();
        for m in ADVERSARY_MACHINES {
            for budget in 0..=5 {
                let mut solver = machine(m).expect("shipped machine");
                let r = adversary_barcn(&mut *solver, budget, ADVERSARY_STEPS);
                if r.forced_resets < budget + 1 {
                    bad.push(format!("{m} budget {budget}: {} resets", r.forced_resets));
                }
            }
        }
        let d = format!(
            "{} machines x budgets 0..=5 within {ADVERSARY_STEPS} steps",
            ADVERSARY_MACHINES.len()
        );
        if bad.is_empty() {
            (true, d)
        } else {
            (false, format!("{d}; {}", first(&bad, 4)))
        }
    })
}

/// Each witness fails somewhere once one half is sabotaged.
pub fn mutation_sensitivity(seed: u64) -> Check {
    timed(6, "sabotage is caught", || {
        let mut uncaught = Vec::new();
        let ws = witnesses();
        for w in &ws {
            let caught = [Sabotage::K, Sabotage::H]
                .into_iter()
                .any(|s| verify_witness(w, s, seed).failed > 0);
            if !caught {
                uncaught.push(w.reduction());
            }
        }
        let d = format!("{}/{} witnesses", ws.len() - uncaught.len(), ws.len());
        if uncaught.is_empty() {
            (true, d)
        } else {
            (false, format!("{d}; uncaught: {}", first(&uncaught, 4)))
        }
    })
}

const UNARY: [Unary; 5] = [Unary::Bar, Unary::Total, Unary::Jump, Unary::Hat, Unary::Star];
const BINARY: [Binary; 4] = [Binary::Product, Binary::Compose, Binary::Join, Binary::Meet];

pub fn random_term(rng: &mut impl Rng, depth: u32) -> Term {
    let atom = |rng: &mut dyn rand::RngCore| Term::atom(ATOMS[rng.gen_range(0..ATOMS.len())]);
    if depth <= 1 {
        return atom(rng);
    }
    match rng.gen_range(0..5) {
        0 => atom(rng),
        1 | 2 => {
            let op = UNARY[rng.gen_range(0..UNARY.len())];
            Term::un(op, random_term(rng, depth - 1))
        }
        _ => {
            let op = BINARY[rng.gen_range(0..BINARY.len())];
            let a = random_term(rng, depth - 1);
            Term::bin(op, a, random_term(rng, depth - 1))
        }
    }
}

/// Term print/parse and KB save/load round trips.
pub fn format_round_trips(kb_text: &str, seed: u64) -> Check {
    timed(7, "parser and format round trips", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut bad = Vec::new();
        for _ in 0..1000 {
            let term = random_term(&mut rng, 4);
            let s = print_term(&term);
            if parse_term(&s).as_ref() != Ok(&term) {
                bad.push(s);
            }
        }
        let mut kb = KnowledgeBase::parse(kb_text).expect("kb parses");
        let text = kb.to_text();
        let same = match KnowledgeBase::parse(&text) {
            Ok(mut again) => {
                again.to_text() == text && again.derived_claims().ok() == kb.derived_claims().ok()
            }
            Err(_) => false,
        };
        let d = format!(
            "{}/1000 terms, save/load keeps the saturated fact set: {same}",
            1000 - bad.len()
        );
        if bad.is_empty() && same {
            (true, d)
        } else {
            (false, format!("{d}; {}", first(&bad, 3)))
        }
    })
}

pub fn run_suite(name: &str, seed: u64) -> Option<Outcome> {
    let fig = shipped_figure();
    let (checks, reports) = match name {
        "fig2-kb" => (
            vec![
                figure_reproduction(SHIPPED_KB, &fig),
                chains_rederived(SHIPPED_KB),
                matrix_diff(SHIPPED_KB, &fig),
                format_round_trips(SHIPPED_KB, seed),
            ],
            Vec::new(),
        ),
        "realizer-oracles" => {
            let (c, r) = realizer_oracles(seed);
            (vec![c], r)
        }
        "witnesses" => {
            let reports = witnesses()
                .iter()
                .map(|w| verify_witness(w, Sabotage::None, seed))
                .collect();
            (vec![mutation_sensitivity(seed)], reports)
        }
        "adversary" => (vec![adversary_budgets()], Vec::new()),
        _ => return None,
    };
    Some(Outcome { target: name.into(), seed, checks, reports })
}

/// A single witness by name or by its reduction, e.g. `INF <=W LPO'`.
pub fn find_witness(spec: &str) -> Option<Witness> {
    let norm = |s: &str| s.split_whitespace().collect::<String>();
    witnesses()
        .into_iter()
        .find(|w| w.name == spec || norm(&w.reduction()) == norm(spec))
}
