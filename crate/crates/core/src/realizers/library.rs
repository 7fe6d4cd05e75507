//! The constructions: retractions, encodings, reduction witnesses and the
//! finite-mind-change solvers for `C_ℕ`.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::{LimitMachine, Token, Transducer};
use crate::spaces::{
    covers_space, cylinder_code, interval_bounds, interval_code, set_of_codes, Space, EMPTY_BALL, Q,
};
use crate::streams::{cantor_unpair, Digit, Word};

/// `p ↦ p`.
pub struct Identity;

impl Transducer for Identity {
    fn feed(&mut self, d: Digit, out: &mut Vec<Token>) {
        out.push(Token::Digit(d));
    }

    fn key(&self) -> Option<Vec<u128>> {
        Some(Vec::new())
    }
}

/// `p ↦ p − 1`.
pub struct MinusOneMachine;

impl Transducer for MinusOneMachine {
    fn feed(&mut self, d: Digit, out: &mut Vec<Token>) {
        if d > 0 {
            out.push(Token::Digit(d - 1));
        }
    }

    fn key(&self) -> Option<Vec<u128>> {
        Some(Vec::new())
    }
}

/// Odd positions of a paired stream: the oracle answer in `⟨p, answer⟩`.
#[derive(Default)]
pub struct AnswerPost {
    parity: u8,
}

impl Transducer for AnswerPost {
    fn feed(&mut self, d: Digit, out: &mut Vec<Token>) {
        if self.parity == 1 {
            out.push(Token::Digit(d));
        }
        self.parity ^= 1;
    }

    fn key(&self) -> Option<Vec<u128>> {
        Some(vec![self.parity as u128])
    }
}

/// Retraction of the double completion onto the completion: `p − 1`, with a
/// zero every third consecutive zero so the output stays infinite.
#[derive(Default)]
pub struct RetractionDoubleCompletion {
    zeros: u8,
}

impl Transducer for RetractionDoubleCompletion {
    fn feed(&mut self, d: Digit, out: &mut Vec<Token>) {
        if d > 0 {
            self.zeros = 0;
            out.push(Token::Digit(d - 1));
        } else {
            self.zeros += 1;
            if self.zeros == 3 {
                self.zeros = 0;
                out.push(Token::Digit(0));
            }
        }
    }

    fn key(&self) -> Option<Vec<u128>> {
        Some(vec![self.zeros as u128])
    }
}

/// `p ↦ 1^{p(0)+1} 0 1^{p(1)+1} 0 ...`
pub struct CompactnessExpand;

impl Transducer for CompactnessExpand {
    fn feed(&mut self, d: Digit, out: &mut Vec<Token>) {
        for _ in 0..=d {
            out.push(Token::Digit(1));
        }
        out.push(Token::Digit(0));
    }

    fn key(&self) -> Option<Vec<u128>> {
        Some(Vec::new())
    }
}

/// `0^{k_0} 1^{n_0+1} 0^{k_1+1} 1^{n_1+1} ... ↦ n_0 n_1 ...`; digits above 1
/// are read as 1.
#[derive(Default)]
pub struct CompactnessCompress {
    ones: Digit,
}

impl Transducer for CompactnessCompress {
    fn feed(&mut self, d: Digit, out: &mut Vec<Token>) {
        if d == 0 {
            if self.ones > 0 {
                out.push(Token::Digit(self.ones - 1));
                self.ones = 0;
            }
        } else {
            self.ones += 1;
        }
    }

    fn key(&self) -> Option<Vec<u128>> {
        Some(vec![self.ones])
    }
}

/// Retraction of the completed naturals with finitely many mind changes:
/// name `0` until the first non-zero `n + 1`, then switch to `n`.
#[derive(Default)]
pub struct RetractionNbar {
    state: u8,
}

impl Transducer for RetractionNbar {
    fn feed(&mut self, d: Digit, out: &mut Vec<Token>) {
        match (self.state, d) {
            (0, 0) => {
                out.push(Token::Digit(0));
                self.state = 1;
            }
            (0, _) => {
                out.push(Token::Digit(d - 1));
                self.state = 2;
            }
            (1, 0) | (2, _) => out.push(Token::Digit(0)),
            (_, _) => {
                out.push(Token::Reset);
                out.push(Token::Digit(d - 1));
                self.state = 2;
            }
        }
    }

    fn key(&self) -> Option<Vec<u128>> {
        Some(vec![self.state as u128])
    }
}

/// Limit retraction of the completed Baire space: stage `s` writes the
/// digits of `p − 1` found among the first `s` input digits, then zeros.
pub struct RetractionBairebar;

struct BairebarStage {
    s: usize,
    read: usize,
}

impl Transducer for BairebarStage {
    fn feed(&mut self, d: Digit, out: &mut Vec<Token>) {
        if self.read < self.s {
            if d > 0 {
                out.push(Token::Digit(d - 1));
            }
        } else {
            out.push(Token::Digit(0));
        }
        self.read += 1;
    }

    fn key(&self) -> Option<Vec<u128>> {
        Some(vec![self.read.min(self.s) as u128])
    }
}

impl LimitMachine for RetractionBairebar {
    fn stage(&self, s: usize) -> Box<dyn Transducer> {
        Box::new(BairebarStage { s, read: 0 })
    }
}

/// Stage `n` reads `p(0..=n)` and then writes `f(p(0..=n), k)` for
/// `k = 0, 1, ...`, as many digits as it has read.
pub struct PrefixLimit {
    f: fn(&[Digit], usize) -> Digit,
}

struct PrefixStage {
    n: usize,
    f: fn(&[Digit], usize) -> Digit,
    read: Word,
    written: usize,
}

impl Transducer for PrefixStage {
    fn feed(&mut self, d: Digit, out: &mut Vec<Token>) {
        if self.read.len() <= self.n {
            self.read.push(d);
        }
        let m = self.read.len() + self.written.max(self.n);
        if self.read.len() > self.n {
            let target = m.min(self.written + 2).max(self.written + 1);
            while self.written < target {
                out.push(Token::Digit((self.f)(&self.read, self.written)));
                self.written += 1;
            }
        }
    }

    fn key(&self) -> Option<Vec<u128>> {
        None
    }
}

impl LimitMachine for PrefixLimit {
    fn stage(&self, s: usize) -> Box<dyn Transducer> {
        Box::new(PrefixStage {
            n: s,
            f: self.f,
            read: Word::new(),
            written: 0,
        })
    }
}

fn zeros(w: &[Digit]) -> usize {
    w.iter().filter(|&&d| d == 0).count()
}

/// `INF ≤ LPO'`: stage `n`, digit `k` is 1 iff `p(0..=n)` has at least `k` zeros.
pub fn inf_to_lpojump() -> PrefixLimit {
    PrefixLimit {
        f: |w, k| (zeros(w) >= k) as Digit,
    }
}

/// `SORT` as a limit: stage `n` is `0^{z_n} 1^ω` with `z_n` zeros in `p(0..=n)`.
pub fn sort_machine() -> PrefixLimit {
    PrefixLimit {
        f: |w, k| (k >= zeros(w)) as Digit,
    }
}

/// `NEG ≤ LPO'`: stage `n`, digit `k` is 1 iff the measure bound after the
/// balls `p(0..=n)` is below `2^-k`.
pub fn neg_via_measure() -> PrefixLimit {
    PrefixLimit {
        f: |w, k| {
            let mu = set_of_codes(&Space::Cantor, w)
                .ok()
                .and_then(|a| a.measure())
                .unwrap_or_else(Q::one);
            if mu.is_zero() {
                return 1;
            }
            if k >= 120 {
                return 0;
            }
            (mu < Q::new(1, 1i128 << k)) as Digit
        },
    }
}

/// `LPO' ≤ INF`: reads a tupled sequence; writes a filler 1 per digit and a 0
/// each time the current pair `⟨n,k⟩` has a witness `i ≥ k` with `p_i(n) ≠ 0`.
#[derive(Default)]
pub struct LpoJumpToInf {
    pos: Digit,
    counter: Digit,
    max_nonzero: BTreeMap<Digit, Digit>,
}

impl Transducer for LpoJumpToInf {
    fn feed(&mut self, d: Digit, out: &mut Vec<Token>) {
        let (i, n) = cantor_unpair(self.pos);
        self.pos += 1;
        if d != 0 {
            let e = self.max_nonzero.entry(n).or_insert(i);
            *e = (*e).max(i);
        }
        out.push(Token::Digit(1));
        loop {
            let (n, k) = cantor_unpair(self.counter);
            match self.max_nonzero.get(&n) {
                Some(&i) if i >= k => {
                    out.push(Token::Digit(0));
                    self.counter += 1;
                }
                _ => return,
            }
        }
    }

    fn key(&self) -> Option<Vec<u128>> {
        None
    }
}

/// `INF ≤ NEG`: the `j`-th zero of `p` removes the cylinder `1^j 0`.
#[derive(Default)]
pub struct InfToNeg {
    zeros: usize,
}

impl Transducer for InfToNeg {
    fn feed(&mut self, d: Digit, out: &mut Vec<Token>) {
        if d == 0 {
            let mut w = vec![1; self.zeros];
            w.push(0);
            out.push(Token::Digit(cylinder_code(&Space::Cantor, &w)));
            self.zeros += 1;
        } else {
            out.push(Token::Digit(EMPTY_BALL));
        }
    }

    fn key(&self) -> Option<Vec<u128>> {
        Some(vec![self.zeros as u128])
    }
}

/// Pre-processor for `WBWT₂ ≤ bar(C_ℕ)` in the range coding: the `z`-th zero
/// of `p` removes `z`; a one repeats the previous digit.
#[derive(Default)]
pub struct WbwtK {
    zeros: Digit,
    last: Option<Digit>,
}

impl Transducer for WbwtK {
    fn feed(&mut self, d: Digit, out: &mut Vec<Token>) {
        if d == 0 {
            // completion shifts by one, range coding by another
            let x = self.zeros + 2;
            self.zeros += 1;
            self.last = Some(x);
            out.push(Token::Digit(x));
        } else {
            out.push(Token::Digit(self.last.unwrap_or(1)));
        }
    }

    fn key(&self) -> Option<Vec<u128>> {
        Some(vec![self.zeros, self.last.map_or(0, |x| x + 1)])
    }
}

/// Post-processor for `WBWT₂ ≤ bar(C_ℕ)`, reading `⟨p, answer⟩`: writes 1
/// while the answer `n` is known and not yet removed, 0 otherwise.
#[derive(Default)]
pub struct WbwtH {
    parity: u8,
    zeros: Digit,
    answer: Option<Digit>,
}

impl Transducer for WbwtH {
    fn feed(&mut self, d: Digit, out: &mut Vec<Token>) {
        if self.parity == 0 {
            if d == 0 {
                self.zeros += 1;
            }
        } else {
            if self.answer.is_none() && d > 0 {
                self.answer = Some(d - 1);
            }
            let alive = matches!(self.answer, Some(n) if self.zeros <= n);
            out.push(Token::Digit(alive as Digit));
        }
        self.parity ^= 1;
    }

    fn key(&self) -> Option<Vec<u128>> {
        Some(match self.answer {
            Some(n) => vec![self.parity as u128, 1, n, self.zeros.min(n + 1)],
            None => vec![self.parity as u128, 0, self.zeros],
        })
    }
}

/// `T C_X ≤ C_X` for compact `X`: copy balls until they cover the space, then
/// repeat the last ball before the cover.
pub struct ChoiceRetraction {
    space: Space,
    codes: BTreeSet<Digit>,
    prev: Option<Digit>,
    frozen: Option<Digit>,
}

impl ChoiceRetraction {
    pub fn new(space: Space) -> Self {
        assert!(space.is_compact(), "retraction needs a compact space");
        ChoiceRetraction {
            space,
            codes: BTreeSet::new(),
            prev: None,
            frozen: None,
        }
    }
}

/// For `C_{2^ℕ}`.
pub fn choice_retraction_cantor() -> ChoiceRetraction {
    ChoiceRetraction::new(Space::Cantor)
}

/// For `C_n`.
pub fn choice_retraction_finite(n: u32) -> ChoiceRetraction {
    ChoiceRetraction::new(Space::Finite(n))
}

impl Transducer for ChoiceRetraction {
    fn feed(&mut self, d: Digit, out: &mut Vec<Token>) {
        if let Some(f) = self.frozen {
            out.push(Token::Digit(f));
            return;
        }
        self.codes.insert(d);
        let codes: Vec<Digit> = self.codes.iter().copied().collect();
        if covers_space(&self.space, &codes).unwrap_or(false) {
            let f = self.prev.unwrap_or(EMPTY_BALL);
            self.frozen = Some(f);
            out.push(Token::Digit(f));
        } else {
            self.prev = Some(d);
            out.push(Token::Digit(d));
        }
    }

    fn key(&self) -> Option<Vec<u128>> {
        let mut k = vec![
            self.frozen.map_or(0, |f| f + 1),
            self.prev.map_or(0, |p| p + 1),
        ];
        if self.frozen.is_none() {
            k.extend(self.codes.iter().copied());
        }
        Some(k)
    }
}

/// `T ConC_[0,1] ≤ ConC_[0,1]`: list `[0,l)` and `(r,1]` while `l ≤ r`, then
/// repeat the last consistent pair.
#[derive(Default)]
pub struct ConcRetraction {
    codes: BTreeSet<Digit>,
    last: Option<(Digit, Digit)>,
    frozen: bool,
}

impl Transducer for ConcRetraction {
    fn feed(&mut self, d: Digit, out: &mut Vec<Token>) {
        if !self.frozen {
            self.codes.insert(d);
            let codes: Vec<Digit> = self.codes.iter().copied().collect();
            let (l, r) = interval_bounds(&codes).expect("unit interval codes");
            if l <= r {
                self.last = Some((
                    interval_code(Q::zero(), l),
                    interval_code(Q::one(), Q::one() - r),
                ));
            } else {
                self.frozen = true;
            }
        }
        let (a, b) = self.last.unwrap_or((EMPTY_BALL, EMPTY_BALL));
        out.push(Token::Digit(a));
        out.push(Token::Digit(b));
    }

    fn key(&self) -> Option<Vec<u128>> {
        let (a, b) = self.last.unwrap_or((0, 0));
        let mut k = vec![self.frozen as u128, self.last.is_some() as u128, a, b];
        if !self.frozen {
            k.extend(self.codes.iter().copied());
        }
        Some(k)
    }
}

/// `bar(C_X)' ≤ bar(C_X')`: every 0 becomes 1, the code of an empty ball.
pub struct JumpChoiceZeroReplace;

impl Transducer for JumpChoiceZeroReplace {
    fn feed(&mut self, d: Digit, out: &mut Vec<Token>) {
        out.push(Token::Digit(if d == 0 { 1 } else { d }));
    }

    fn key(&self) -> Option<Vec<u128>> {
        Some(Vec::new())
    }
}

struct LiftNode {
    /// Interleaved `x_0 g_0 x_1 g_1 ...`.
    word: Word,
    /// Index of the sequence member matched by the last pair.
    q: usize,
    depth: usize,
    done: usize,
}

/// From a tupled sequence `(p_i)`, enumerates balls whose complement `B`
/// satisfies `π₁(B) = {cluster points of (p_i)}`. A point
/// `⟨x, g⟩ ∈ B` picks indices `q_0 = g_0`, `q_m = q_{m−1} + g_m + 1` with
/// `p_{q_m}` agreeing with `x` on `0..=m`.
pub struct ProjectLift {
    known: BTreeMap<(usize, usize), Digit>,
    pos: Digit,
    nodes: Vec<LiftNode>,
    stage: usize,
    queue: VecDeque<usize>,
    cursor: Option<(usize, Vec<(Digit, Digit)>, usize)>,
    completed: usize,
}

impl Default for ProjectLift {
    fn default() -> Self {
        ProjectLift {
            known: BTreeMap::new(),
            pos: 0,
            nodes: vec![LiftNode {
                word: Word::new(),
                q: 0,
                depth: 0,
                done: 0,
            }],
            stage: 1,
            queue: VecDeque::from([0]),
            cursor: None,
            completed: 0,
        }
    }
}

enum Step {
    Blocked,
    Valid,
    Invalid(Digit),
}

impl ProjectLift {
    const TASKS_PER_DIGIT: usize = 64;

    /// The last stage all of whose nodes were handled.
    pub fn stage_completed(&self) -> usize {
        self.completed
    }

    fn try_child(&mut self, node: usize, x: Digit, g: Digit) -> Step {
        let parent = &self.nodes[node];
        let m = parent.depth;
        let q = if m == 0 {
            g as usize
        } else {
            parent.q + g as usize + 1
        };
        let mut agrees = true;
        for j in 0..=m {
            let Some(&v) = self.known.get(&(q, j)) else {
                return Step::Blocked;
            };
            let want = if j < m { parent.word[2 * j] } else { x };
            if v != want {
                agrees = false;
            }
        }
        let mut word = parent.word.clone();
        word.push(x);
        word.push(g);
        if agrees {
            self.nodes.push(LiftNode {
                word,
                q,
                depth: m + 1,
                done: 0,
            });
            if m + 1 < self.stage {
                self.queue.push_back(self.nodes.len() - 1);
            }
            Step::Valid
        } else {
            Step::Invalid(cylinder_code(&Space::Baire, &word))
        }
    }

    fn work(&mut self, out: &mut Vec<Token>) {
        for _ in 0..Self::TASKS_PER_DIGIT {
            if self.cursor.is_none() {
                match self.queue.pop_front() {
                    Some(n) => {
                        let s = self.stage as Digit;
                        let done = self.nodes[n].done as Digit;
                        let tasks = (0..s)
                            .flat_map(|g| (0..s).map(move |x| (x, g)))
                            .filter(|&(x, g)| x.max(g) >= done)
                            .collect();
                        self.cursor = Some((n, tasks, 0));
                    }
                    None => {
                        self.completed = self.stage;
                        self.stage += 1;
                        let s = self.stage;
                        self.queue = (0..self.nodes.len())
                            .filter(|&i| self.nodes[i].depth < s)
                            .collect();
                        continue;
                    }
                }
            }
            let (node, tasks, idx) = self.cursor.take().expect("set above");
            if idx == tasks.len() {
                self.nodes[node].done = self.stage;
                continue;
            }
            let (x, g) = tasks[idx];
            match self.try_child(node, x, g) {
                Step::Blocked => {
                    self.cursor = Some((node, tasks, idx));
                    return;
                }
                Step::Valid => {}
                Step::Invalid(code) => out.push(Token::Digit(code)),
            }
            self.cursor = Some((node, tasks, idx + 1));
        }
    }
}

impl Transducer for ProjectLift {
    fn feed(&mut self, d: Digit, out: &mut Vec<Token>) {
        let (i, j) = cantor_unpair(self.pos);
        self.pos += 1;
        self.known.insert((i as usize, j as usize), d);
        let start = out.len();
        self.work(out);
        if out.len() == start {
            out.push(Token::Digit(EMPTY_BALL));
        }
    }

    fn key(&self) -> Option<Vec<u128>> {
        None
    }
}

/// How a `C_ℕ` mind-change solver picks its commitment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommitRule {
    Least,
    /// One above the largest removed number.
    AboveMax,
    /// Least, after reading three digits.
    Lazy,
    Never,
}

/// Finite-mind-change solver of `C_ℕ` in the range coding: commit to a
/// member, pad with zeros, and reset when the commitment is removed.
pub struct CnMindChange {
    rule: CommitRule,
    excluded: BTreeSet<Digit>,
    commit: Option<Digit>,
    read: u8,
}

impl CnMindChange {
    pub fn new(rule: CommitRule) -> Self {
        CnMindChange {
            rule,
            excluded: BTreeSet::new(),
            commit: None,
            read: 0,
        }
    }

    fn choose(&self) -> Digit {
        match self.rule {
            CommitRule::AboveMax => self.excluded.iter().next_back().map_or(0, |m| m + 1),
            _ => (0..)
                .find(|n| !self.excluded.contains(n))
                .expect("finitely many removed"),
        }
    }
}

/// The standard solver.
pub fn cn_fmc_solver() -> CnMindChange {
    CnMindChange::new(CommitRule::Least)
}

impl Transducer for CnMindChange {
    fn feed(&mut self, d: Digit, out: &mut Vec<Token>) {
        if d > 0 {
            self.excluded.insert(d - 1);
        }
        self.read = self.read.saturating_add(1);
        match self.rule {
            CommitRule::Never => return,
            CommitRule::Lazy if self.read <= 3 => return,
            _ => {}
        }
        match self.commit {
            None => {
                let c = self.choose();
                self.commit = Some(c);
                out.push(Token::Digit(c));
            }
            Some(c) if self.excluded.contains(&c) => {
                let c = self.choose();
                self.commit = Some(c);
                out.push(Token::Reset);
                out.push(Token::Digit(c));
            }
            Some(_) => out.push(Token::Digit(0)),
        }
    }

    fn key(&self) -> Option<Vec<u128>> {
        let mut k = vec![self.read.min(4) as u128, self.commit.map_or(0, |c| c + 1)];
        k.extend(self.excluded.iter().copied());
        Some(k)
    }
}

/// Plain and mind-change machines by name.
pub fn machine(name: &str) -> Option<Box<dyn Transducer>> {
    Some(match name {
        "identity" => Box::new(Identity),
        "minus_one" => Box::new(MinusOneMachine),
        "answer_post" => Box::new(AnswerPost::default()),
        "retraction_double_completion" => Box::new(RetractionDoubleCompletion::default()),
        "compactness_expand" => Box::new(CompactnessExpand),
        "compactness_compress" => Box::new(CompactnessCompress::default()),
        "retraction_Nbar" => Box::new(RetractionNbar::default()),
        "lpojump_to_inf" => Box::new(LpoJumpToInf::default()),
        "inf_to_neg" => Box::new(InfToNeg::default()),
        "wbwt_to_barCN_K" => Box::new(WbwtK::default()),
        "wbwt_to_barCN_H" => Box::new(WbwtH::default()),
        "choice_retraction_cantor" => Box::new(choice_retraction_cantor()),
        "conc_retraction_interval" => Box::new(ConcRetraction::default()),
        "jump_choice_zero_replace" => Box::new(JumpChoiceZeroReplace),
        "project_lift" => Box::new(ProjectLift::default()),
        "cn_fmc_solver" => Box::new(cn_fmc_solver()),
        "cn_fmc_above_max" => Box::new(CnMindChange::new(CommitRule::AboveMax)),
        "cn_fmc_lazy" => Box::new(CnMindChange::new(CommitRule::Lazy)),
        "cn_silent" => Box::new(CnMindChange::new(CommitRule::Never)),
        "inf_to_lpojump" => Box::new(super::tupling(inf_to_lpojump())),
        "neg_via_measure" => Box::new(super::tupling(neg_via_measure())),
        "sort_machine" => Box::new(super::tupling(sort_machine())),
        "retraction_Bairebar" => Box::new(super::tupling(RetractionBairebar)),
        _ => {
            let n = name
                .strip_prefix("choice_retraction_finite(")?
                .strip_suffix(')')?
                .parse()
                .ok()?;
            if n == 0 {
                return None;
            }
            Box::new(choice_retraction_finite(n))
        }
    })
}

/// Limit machines by name.
pub fn limit_machine(name: &str) -> Option<Box<dyn LimitMachine>> {
    Some(match name {
        "retraction_Bairebar" => Box::new(RetractionBairebar),
        "inf_to_lpojump" => Box::new(inf_to_lpojump()),
        "neg_via_measure" => Box::new(neg_via_measure()),
        "sort_machine" => Box::new(sort_machine()),
        _ => return None,
    })
}

impl<L: LimitMachine + ?Sized> LimitMachine for Box<L> {
    fn stage(&self, s: usize) -> Box<dyn Transducer> {
        (**self).stage(s)
    }
}

/// Names accepted by [`machine`], for help output.
pub fn machine_names() -> Vec<String> {
    [
        "identity",
        "minus_one",
        "answer_post",
        "retraction_double_completion",
        "compactness_expand",
        "compactness_compress",
        "retraction_Nbar",
        "retraction_Bairebar",
        "inf_to_lpojump",
        "lpojump_to_inf",
        "inf_to_neg",
        "neg_via_measure",
        "wbwt_to_barCN_K",
        "wbwt_to_barCN_H",
        "choice_retraction_cantor",
        "choice_retraction_finite(n)",
        "conc_retraction_interval",
        "jump_choice_zero_replace",
        "project_lift",
        "sort_machine",
        "cn_fmc_solver",
        "cn_fmc_above_max",
        "cn_fmc_lazy",
        "cn_silent",
    ]
    .iter()
    .map(|s| String::from(*s))
    .collect()
}

#[cfg(test)]
mod tests {
    use super::super::{run, run_ep, EpOutput};
    use super::*;
    use crate::streams::NameStream;

    fn s(t: &str) -> NameStream {
        t.parse().unwrap()
    }

    #[test]
    fn double_completion_example() {
        let r = run_ep(
            &mut RetractionDoubleCompletion::default(),
            &s("0,0,3,1;2"),
            64,
        )
        .unwrap();
        assert_eq!(r.output, EpOutput::Stream(s("2,0;1")));
    }

    #[test]
    fn nbar_example() {
        let r = run(&mut RetractionNbar::default(), &s("0,0,5;1"), 10);
        assert_eq!(r.commits(), vec![0, 4]);
        assert_eq!(r.resets, 1);
        assert_eq!(r.committed[0], 4);
    }

    #[test]
    fn compactness_round_trip_example() {
        let mut m = super::super::compose(CompactnessExpand, CompactnessCompress::default());
        let r = run_ep(&mut m, &s("3,0;2,7"), 64).unwrap();
        assert_eq!(r.output, EpOutput::Stream(s("3,0;2,7")));
    }

    #[test]
    fn mind_change_solver_commits_least() {
        let r = run(&mut cn_fmc_solver(), &s("1,2;0"), 5);
        assert_eq!(r.commits(), vec![1, 2]);
        assert_eq!(r.committed[0], 2);
        let r = run(&mut CnMindChange::new(CommitRule::Never), &s(";0"), 20);
        assert!(r.tokens.is_empty());
    }

    #[test]
    fn interval_retraction_freezes() {
        let l = interval_code(Q::zero(), Q::new(3, 10));
        let r = interval_code(Q::one(), Q::new(3, 10));
        let cover = interval_code(Q::new(1, 2), Q::new(1, 4));
        let out = run(
            &mut ConcRetraction::default(),
            &NameStream::padded(&[l, r, cover], 0),
            6,
        );
        let pair_before = (out.committed[2], out.committed[3]);
        assert_eq!((out.committed[4], out.committed[5]), pair_before);
        assert_eq!(out.committed[10], pair_before.0);
        assert_eq!(
            interval_bounds(&[pair_before.0, pair_before.1]).unwrap(),
            (Q::new(3, 10), Q::new(7, 10))
        );
    }

    #[test]
    fn registry_resolves_names() {
        for n in machine_names() {
            let n = n.replace("(n)", "(3)");
            assert!(machine(&n).is_some(), "{n}");
        }
        assert!(machine("nope").is_none());
    }
}
