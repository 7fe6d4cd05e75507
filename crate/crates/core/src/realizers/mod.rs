//! Stream transducers with mind-change and limit semantics, the library of
//! constructions, the reduction harness and the mind-change adversary.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, VecDeque};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::streams::{cantor_unpair, Digit, Digits, NameStream, Word};

pub mod adversary;
pub mod harness;
pub mod library;

/// An output event: a digit, or the erasure of everything written so far.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Token {
    Digit(Digit),
    Reset,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Digit(d) => write!(f, "{d}"),
            Token::Reset => write!(f, "R"),
        }
    }
}

pub fn tokens_to_string(ts: &[Token]) -> String {
    let mut s = String::new();
    for (i, t) in ts.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push_str(&alloc::format!("{t}"));
    }
    s
}

/// A machine reading one input digit at a time.
pub trait Transducer {
    fn feed(&mut self, d: Digit, out: &mut Vec<Token>);

    /// Complete fingerprint of the internal state; `None` when the state is
    /// unbounded or not tracked.
    fn key(&self) -> Option<Vec<u128>>;
}

impl<T: Transducer + ?Sized> Transducer for Box<T> {
    fn feed(&mut self, d: Digit, out: &mut Vec<Token>) {
        (**self).feed(d, out)
    }

    fn key(&self) -> Option<Vec<u128>> {
        (**self).key()
    }
}

/// Stage-indexed machines whose denotation is the pointwise limit.
pub trait LimitMachine {
    fn stage(&self, s: usize) -> Box<dyn Transducer>;
}

/// Result of a bounded run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub tokens: Vec<Token>,
    /// Digits written after the last reset.
    pub committed: Word,
    pub resets: usize,
}

impl Run {
    fn from_tokens(tokens: Vec<Token>) -> Run {
        let resets = tokens.iter().filter(|t| **t == Token::Reset).count();
        let start = tokens
            .iter()
            .rposition(|t| *t == Token::Reset)
            .map_or(0, |i| i + 1);
        let committed = tokens[start..]
            .iter()
            .map(|t| match t {
                Token::Digit(d) => *d,
                Token::Reset => unreachable!("after the last reset"),
            })
            .collect();
        Run {
            tokens,
            committed,
            resets,
        }
    }

    /// Distinct commitments: the first digit after the start and after each reset.
    pub fn commits(&self) -> Vec<Digit> {
        let mut out = Vec::new();
        let mut fresh = true;
        for t in &self.tokens {
            match t {
                Token::Reset => fresh = true,
                Token::Digit(d) => {
                    if fresh {
                        out.push(*d);
                        fresh = false;
                    }
                }
            }
        }
        out
    }
}

/// Feeds the first `steps` digits of `p`.
pub fn run<T: Transducer + ?Sized, D: Digits + ?Sized>(t: &mut T, p: &D, steps: usize) -> Run {
    let mut out = Vec::new();
    for i in 0..steps {
        t.feed(p.digit(i), &mut out);
    }
    Run::from_tokens(out)
}

/// Feeds digits until at least `n` tokens were written or `max_steps` digits
/// were read.
pub fn run_until<T: Transducer + ?Sized, D: Digits + ?Sized>(
    t: &mut T,
    p: &D,
    n: usize,
    max_steps: usize,
) -> Run {
    let mut out = Vec::new();
    let mut i = 0;
    while out.len() < n && i < max_steps {
        t.feed(p.digit(i), &mut out);
        i += 1;
    }
    Run::from_tokens(out)
}

/// Exact output of a run on an eventually periodic input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EpOutput {
    Stream(NameStream),
    /// The machine eventually falls silent.
    Finite(Word),
    /// Infinitely many resets.
    Diverges,
}

impl fmt::Display for EpOutput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EpOutput::Stream(s) => write!(f, "{s}"),
            EpOutput::Finite(w) => write!(f, "{} (finite)", crate::streams::word_to_string(w)),
            EpOutput::Diverges => write!(f, "diverges"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpRun {
    pub output: EpOutput,
    /// Tokens up to the start of the certified loop, then one pass of it.
    pub head: Vec<Token>,
    pub cycle: Vec<Token>,
    pub resets_before_loop: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NoCertificate;

impl fmt::Display for NoCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "no periodicity certificate")
    }
}

/// Runs on `u·v^ω` and certifies the output by a repeated state key at
/// period boundaries.
pub fn run_ep<T: Transducer + ?Sized>(
    t: &mut T,
    p: &NameStream,
    max_periods: usize,
) -> Result<EpRun, NoCertificate> {
    let mut out = Vec::new();
    for &d in p.prefix() {
        t.feed(d, &mut out);
    }
    let mut seen: BTreeMap<Vec<u128>, usize> = BTreeMap::new();
    for _ in 0..=max_periods {
        let key = t.key().ok_or(NoCertificate)?;
        if let Some(&start) = seen.get(&key) {
            let head = out[..start].to_vec();
            let cycle = out[start..].to_vec();
            let resets_before_loop = head.iter().filter(|x| **x == Token::Reset).count();
            let output = if cycle.contains(&Token::Reset) {
                EpOutput::Diverges
            } else {
                let committed = Run::from_tokens(head.clone()).committed;
                let loop_digits: Word = cycle
                    .iter()
                    .map(|x| match x {
                        Token::Digit(d) => *d,
                        Token::Reset => unreachable!("checked above"),
                    })
                    .collect();
                if loop_digits.is_empty() {
                    EpOutput::Finite(committed)
                } else {
                    EpOutput::Stream(
                        NameStream::new(committed, loop_digits).expect("non-empty loop"),
                    )
                }
            };
            return Ok(EpRun {
                output,
                head,
                cycle,
                resets_before_loop,
            });
        }
        seen.insert(key, out.len());
        for &d in p.period() {
            t.feed(d, &mut out);
        }
    }
    Err(NoCertificate)
}

/// The exact output stream, or `None` without a certificate or when the
/// output is not an infinite stream.
pub fn run_ep_stream<T: Transducer + ?Sized>(t: &mut T, p: &NameStream) -> Option<NameStream> {
    match run_ep(t, p, 4096).ok()?.output {
        EpOutput::Stream(s) => Some(s),
        _ => None,
    }
}

/// Output digit by digit, flipping the lowest bit.
pub struct Sabotaged<T>(pub T);

impl<T: Transducer> Transducer for Sabotaged<T> {
    fn feed(&mut self, d: Digit, out: &mut Vec<Token>) {
        let start = out.len();
        self.0.feed(d, out);
        for t in &mut out[start..] {
            if let Token::Digit(x) = t {
                *x ^= 1;
            }
        }
    }

    fn key(&self) -> Option<Vec<u128>> {
        self.0.key()
    }
}

fn join_keys(a: Option<Vec<u128>>, b: Option<Vec<u128>>) -> Option<Vec<u128>> {
    let (a, b) = (a?, b?);
    let mut k = Vec::with_capacity(a.len() + b.len() + 1);
    k.push(a.len() as u128);
    k.extend(a);
    k.extend(b);
    Some(k)
}

/// `t ∘ s`; resets of `s` are passed through.
pub struct Compose<S, T> {
    pub first: S,
    pub second: T,
    buf: Vec<Token>,
}

pub fn compose<S: Transducer, T: Transducer>(first: S, second: T) -> Compose<S, T> {
    Compose {
        first,
        second,
        buf: Vec::new(),
    }
}

impl<S: Transducer, T: Transducer> Transducer for Compose<S, T> {
    fn feed(&mut self, d: Digit, out: &mut Vec<Token>) {
        self.buf.clear();
        self.first.feed(d, &mut self.buf);
        for i in 0..self.buf.len() {
            match self.buf[i] {
                Token::Digit(x) => self.second.feed(x, out),
                Token::Reset => out.push(Token::Reset),
            }
        }
    }

    fn key(&self) -> Option<Vec<u128>> {
        join_keys(self.first.key(), self.second.key())
    }
}

/// Merges two queues of digits alternately into one output.
#[derive(Default, Clone)]
struct Zipper {
    left: VecDeque<Digit>,
    right: VecDeque<Digit>,
    phase: u8,
}

impl Zipper {
    fn drain(&mut self, out: &mut Vec<Token>) {
        loop {
            let q = if self.phase == 0 {
                &mut self.left
            } else {
                &mut self.right
            };
            match q.pop_front() {
                Some(d) => {
                    out.push(Token::Digit(d));
                    self.phase ^= 1;
                }
                None => return,
            }
        }
    }

    fn key(&self) -> Vec<u128> {
        let mut k = Vec::with_capacity(self.left.len() + self.right.len() + 3);
        k.push(self.phase as u128);
        k.push(self.left.len() as u128);
        k.extend(self.left.iter().copied());
        k.push(self.right.len() as u128);
        k.extend(self.right.iter().copied());
        k
    }
}

fn digits_of(ts: &[Token]) -> impl Iterator<Item = Digit> + '_ {
    ts.iter().filter_map(|t| match t {
        Token::Digit(d) => Some(*d),
        Token::Reset => None,
    })
}

/// `p ↦ ⟨p, t(p)⟩`.
pub struct PairWithId<T> {
    pub inner: T,
    zip: Zipper,
    buf: Vec<Token>,
}

pub fn pair_with_id<T: Transducer>(inner: T) -> PairWithId<T> {
    PairWithId {
        inner,
        zip: Zipper::default(),
        buf: Vec::new(),
    }
}

impl<T: Transducer> Transducer for PairWithId<T> {
    fn feed(&mut self, d: Digit, out: &mut Vec<Token>) {
        self.zip.left.push_back(d);
        self.buf.clear();
        self.inner.feed(d, &mut self.buf);
        self.zip.right.extend(digits_of(&self.buf));
        self.zip.drain(out);
    }

    fn key(&self) -> Option<Vec<u128>> {
        join_keys(self.inner.key(), Some(self.zip.key()))
    }
}

/// `⟨p, q⟩ ↦ ⟨s(p), t(q)⟩`.
pub struct Juxtapose<S, T> {
    pub left: S,
    pub right: T,
    zip: Zipper,
    parity: u8,
    buf: Vec<Token>,
}

pub fn juxtapose<S: Transducer, T: Transducer>(left: S, right: T) -> Juxtapose<S, T> {
    Juxtapose {
        left,
        right,
        zip: Zipper::default(),
        parity: 0,
        buf: Vec::new(),
    }
}

impl<S: Transducer, T: Transducer> Transducer for Juxtapose<S, T> {
    fn feed(&mut self, d: Digit, out: &mut Vec<Token>) {
        self.buf.clear();
        if self.parity == 0 {
            self.left.feed(d, &mut self.buf);
            self.zip.left.extend(digits_of(&self.buf));
        } else {
            self.right.feed(d, &mut self.buf);
            self.zip.right.extend(digits_of(&self.buf));
        }
        self.parity ^= 1;
        self.zip.drain(out);
    }

    fn key(&self) -> Option<Vec<u128>> {
        let mut zip = self.zip.key();
        zip.push(self.parity as u128);
        join_keys(join_keys(self.left.key(), self.right.key()), Some(zip))
    }
}

/// Runs all stages of a limit machine side by side and writes stage `i`'s
/// digit `j` at position `⟨i,j⟩`, i.e. a name for the jump.
pub struct Tupling<L> {
    machine: L,
    history: Word,
    stages: Vec<(Box<dyn Transducer>, Word)>,
    next: Digit,
    buf: Vec<Token>,
}

pub fn tupling<L: LimitMachine>(machine: L) -> Tupling<L> {
    Tupling {
        machine,
        history: Word::new(),
        stages: Vec::new(),
        next: 0,
        buf: Vec::new(),
    }
}

impl<L: LimitMachine> Transducer for Tupling<L> {
    fn feed(&mut self, d: Digit, out: &mut Vec<Token>) {
        self.history.push(d);
        let n = self.history.len();
        while self.stages.len() < n {
            let mut m = self.machine.stage(self.stages.len());
            let mut written = Word::new();
            let mut buf = Vec::new();
            for &x in &self.history[..n - 1] {
                m.feed(x, &mut buf);
            }
            written.extend(digits_of(&buf));
            self.stages.push((m, written));
        }
        for (m, written) in &mut self.stages {
            self.buf.clear();
            m.feed(d, &mut self.buf);
            written.extend(digits_of(&self.buf));
        }
        loop {
            let (i, j) = cantor_unpair(self.next);
            let (i, j) = (i as usize, j as usize);
            match self.stages.get(i).and_then(|(_, w)| w.get(j)) {
                Some(&x) => {
                    out.push(Token::Digit(x));
                    self.next += 1;
                }
                None => return,
            }
        }
    }

    fn key(&self) -> Option<Vec<u128>> {
        None
    }
}

/// Stage outputs of a limit machine on `p`, `width` digits each.
pub fn stage_outputs<L: LimitMachine + ?Sized, D: Digits + ?Sized>(
    m: &L,
    p: &D,
    stages: core::ops::Range<usize>,
    width: usize,
    max_steps: usize,
) -> Vec<Word> {
    stages
        .map(|s| {
            let mut t = m.stage(s);
            let mut r = run_until(&mut *t, p, width, max_steps).committed;
            r.truncate(width);
            r
        })
        .collect()
}

/// Common value of the stage outputs over a window, digit by digit; `None`
/// if some digit is not stable across the window.
pub fn stable_window(outputs: &[Word], width: usize) -> Option<Word> {
    let first = outputs.first()?;
    if first.len() < width
        || outputs
            .iter()
            .any(|w| w.len() < width || w[..width] != first[..width])
    {
        return None;
    }
    Some(first[..width].to_vec())
}

/// Reads the limit of a tupled sequence from a finite prefix: digit `k`
/// must agree on all sequence indices `n` in the window.
pub fn tupled_window_limit(
    prefix: &[Digit],
    digits: usize,
    window: core::ops::Range<usize>,
) -> Option<Word> {
    let mut out = Word::with_capacity(digits);
    for k in 0..digits {
        let mut val = None;
        for n in window.clone() {
            let c = crate::streams::cantor_pair(n as Digit, k as Digit) as usize;
            let x = *prefix.get(c)?;
            match val {
                None => val = Some(x),
                Some(v) if v != x => return None,
                _ => {}
            }
        }
        out.push(val?);
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::library::{Identity, MinusOneMachine};
    use super::*;

    fn s(t: &str) -> NameStream {
        t.parse().unwrap()
    }

    #[test]
    fn identity_and_minus_one_runs() {
        let r = run_ep(&mut Identity, &s(";1,2"), 64).unwrap();
        assert_eq!(r.output, EpOutput::Stream(s(";1,2")));
        let r = run_ep(&mut MinusOneMachine, &s("2,0,4,1;0"), 64).unwrap();
        assert_eq!(r.output, EpOutput::Finite(alloc::vec![1, 3, 0]));
    }

    #[test]
    fn wiring_laws() {
        for t in ["3,0;1,2", ";5", "1,2,3;0,0,7"] {
            let p = s(t);
            let a = run(&mut compose(Identity, MinusOneMachine), &p, 40);
            let b = run(&mut MinusOneMachine, &p, 40);
            assert_eq!(a, b);
            let c = run(
                &mut compose(compose(MinusOneMachine, Identity), MinusOneMachine),
                &p,
                40,
            );
            let d = run(
                &mut compose(MinusOneMachine, compose(Identity, MinusOneMachine)),
                &p,
                40,
            );
            assert_eq!(c, d);
            let paired = run(&mut pair_with_id(MinusOneMachine), &p, 60).committed;
            if let crate::streams::MinusOne::Infinite(q) = crate::streams::minus_one(&p) {
                let want = crate::streams::pair(&p, &q);
                assert!(paired.len() >= 20);
                assert!(paired.iter().enumerate().all(|(i, &d)| want.digit(i) == d));
            }
            let q = s(";4,1");
            let jux = run_ep_stream(
                &mut juxtapose(Identity, Identity),
                &crate::streams::pair(&p, &q),
            );
            assert_eq!(jux, Some(crate::streams::pair(&p, &q)));
        }
    }

    #[test]
    fn sabotage_flips_bits() {
        let r = run(&mut Sabotaged(Identity), &s(";2,3"), 4);
        assert_eq!(r.committed, alloc::vec![3, 2, 3, 2]);
    }
}
