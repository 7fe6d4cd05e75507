//! Represented spaces, their precompletions and completions, and closed sets
//! given by negative information.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::streams::{
    cantor_pair, cantor_unpair, minus_one, plus_one_embed, Digit, Digits, Family, MinusOne,
    NameStream, StreamError, Word,
};

/// Exact rationals.
pub type Q = Ratio<i128>;

/// The ball code `⟨0,⟨0,0⟩⟩ = 0`, which always denotes the empty ball.
pub const EMPTY_BALL: Digit = 0;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceError {
    UnsupportedNesting(String),
    NotCompact(String),
    Syntax(String),
    NotEncodable(String),
    Stream(StreamError),
}

impl fmt::Display for SpaceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceError::UnsupportedNesting(s) => write!(f, "unsupported nesting: {s}"),
            SpaceError::NotCompact(s) => write!(f, "space {s} is not compact"),
            SpaceError::Syntax(s) => write!(f, "unknown space {s:?}"),
            SpaceError::NotEncodable(s) => write!(f, "cannot encode {s}"),
            SpaceError::Stream(e) => write!(f, "{e}"),
        }
    }
}

impl From<StreamError> for SpaceError {
    fn from(e: StreamError) -> Self {
        SpaceError::Stream(e)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Space {
    Finite(u32),
    Naturals,
    Sierpinski,
    Cantor,
    Baire,
    UnitInterval,
    /// `A_-(X)` with the ball coding.
    Closed(Box<Space>),
    /// `A_-(ℕ)` with the range coding `ℕ ∖ range(p − 1)`.
    ClosedRange,
    /// Finite tuples `X*`: `p(0) = k` followed by `k` interleaved names.
    Star(Box<Space>),
}

impl Space {
    pub fn closed(base: Space) -> Result<Space, SpaceError> {
        match base {
            Space::Finite(_)
            | Space::Naturals
            | Space::Cantor
            | Space::Baire
            | Space::UnitInterval => Ok(Space::Closed(Box::new(base))),
            other => Err(SpaceError::UnsupportedNesting(alloc::format!(
                "A-({other})"
            ))),
        }
    }

    pub fn is_compact(&self) -> bool {
        matches!(self, Space::Finite(_) | Space::Cantor | Space::UnitInterval)
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Finite(n) => write!(f, "fin({n})"),
            Space::Naturals => write!(f, "N"),
            Space::Sierpinski => write!(f, "S"),
            Space::Cantor => write!(f, "2N"),
            Space::Baire => write!(f, "NN"),
            Space::UnitInterval => write!(f, "I"),
            Space::Closed(b) => write!(f, "A-({b})"),
            Space::ClosedRange => write!(f, "A-range(N)"),
            Space::Star(b) => write!(f, "{b}*"),
        }
    }
}

impl FromStr for Space {
    type Err = SpaceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "N" => return Ok(Space::Naturals),
            "S" => return Ok(Space::Sierpinski),
            "2N" => return Ok(Space::Cantor),
            "NN" => return Ok(Space::Baire),
            "I" => return Ok(Space::UnitInterval),
            "A-range(N)" => return Ok(Space::ClosedRange),
            _ => {}
        }
        if let Some(inner) = s.strip_suffix('*') {
            return Ok(Space::Star(Box::new(inner.parse()?)));
        }
        if let Some(k) = s.strip_prefix("fin(").and_then(|t| t.strip_suffix(')')) {
            return k
                .trim()
                .parse()
                .map(Space::Finite)
                .map_err(|_| SpaceError::Syntax(s.into()));
        }
        if let Some(inner) = s.strip_prefix("A-(").and_then(|t| t.strip_suffix(')')) {
            return Space::closed(inner.parse()?);
        }
        Err(SpaceError::Syntax(s.into()))
    }
}

/// Dense enumeration of the Cantor space: `n+1` in binary without its
/// leading one, padded with zeros.
pub fn cantor_center(n: Digit, len: usize) -> Word {
    let m = n + 1;
    let bits = 128 - m.leading_zeros() as usize - 1;
    (0..len)
        .map(|i| {
            if i < bits {
                (m >> (bits - 1 - i)) & 1
            } else {
                0
            }
        })
        .collect()
}

/// Inverse of [`cantor_center`] on binary words.
pub fn cantor_index(w: &[Digit]) -> Digit {
    let mut m: Digit = 1;
    for &b in w {
        m = m
            .checked_mul(2)
            .and_then(|m| m.checked_add(b))
            .expect("cylinder code overflow");
    }
    m - 1
}

/// Dense enumeration of Baire space: `n = m·2^(t+1) + 2^t − 1` lists word
/// `m` in bijective base `t+1`, padded with zeros.
pub fn baire_center(n: Digit) -> Word {
    let t = n.trailing_ones();
    let base = (t + 1) as Digit;
    let mut m = if t + 1 >= 128 { 0 } else { n >> (t + 1) };
    let mut w = Word::new();
    while m > 0 {
        w.push((m - 1) % base);
        m = (m - 1) / base;
    }
    w.reverse();
    w
}

/// Some `n` with `baire_center(n)` equal to `w`.
pub fn baire_index(w: &[Digit]) -> Digit {
    let base = w.iter().copied().max().map_or(1, |d| d + 1);
    let mut m: Digit = 0;
    for &d in w {
        m = m
            .checked_mul(base)
            .and_then(|m| m.checked_add(d + 1))
            .expect("cylinder code overflow");
    }
    let t = (base - 1) as u32;
    assert!(t + 1 < 128, "cylinder code overflow");
    let shifted = m.checked_mul(1 << (t + 1)).expect("cylinder code overflow");
    shifted + ((1u128 << t) - 1)
}

/// Dense enumeration of `ℚ ∩ [0,1]`: `⟨a,b⟩ ↦ min(a, b+1)/(b+1)`.
pub fn rational_center(n: Digit) -> Q {
    let (a, b) = cantor_unpair(n);
    let q = b + 1;
    Q::new(a.min(q) as i128, q as i128)
}

/// Code of a rational in `[0,1]` under [`rational_center`].
pub fn rational_index(x: Q) -> Digit {
    assert!(x >= Q::zero() && x <= Q::one(), "rational outside [0,1]");
    cantor_pair(*x.numer() as Digit, (*x.denom() - 1) as Digit)
}

/// Splits a ball code into `(n, i, k)`.
pub fn split_ball(code: Digit) -> (Digit, Digit, Digit) {
    let (n, m) = cantor_unpair(code);
    let (i, k) = cantor_unpair(m);
    (n, i, k)
}

pub fn ball_code(n: Digit, i: Digit, k: Digit) -> Digit {
    cantor_pair(n, cantor_pair(i, k))
}

/// Code of the cylinder `w·X` in the Cantor or Baire space.
pub fn cylinder_code(space: &Space, w: &[Digit]) -> Digit {
    let n = match space {
        Space::Cantor => cantor_index(w),
        Space::Baire => baire_index(w),
        other => panic!("no cylinders in {other}"),
    };
    if w.is_empty() {
        ball_code(n, 2, 0)
    } else {
        assert!(w.len() <= 127, "cylinder code overflow");
        ball_code(n, 1, (1u128 << (w.len() - 1)) - 1)
    }
}

/// Code of the singleton `{c}` in a discrete space.
pub fn point_code(c: Digit) -> Digit {
    ball_code(c, 1, 0)
}

/// Code of a ball covering a whole discrete space.
pub fn whole_code() -> Digit {
    ball_code(0, 2, 0)
}

/// Code of `B(c, r)` in the unit interval.
pub fn interval_code(center: Q, radius: Q) -> Digit {
    assert!(radius >= Q::zero(), "negative radius");
    if radius.is_zero() {
        return EMPTY_BALL;
    }
    ball_code(
        rational_index(center),
        *radius.numer() as Digit,
        (*radius.denom() - 1) as Digit,
    )
}

/// An interval `⊆ [0,1]` with rational endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Interval {
    pub lo: Q,
    pub hi: Q,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn contains(&self, x: Q) -> bool {
        (x > self.lo || (self.lo_closed && x == self.lo))
            && (x < self.hi || (self.hi_closed && x == self.hi))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{},{}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ball {
    Empty,
    Whole,
    Point(Digit),
    /// All streams extending the word. The empty word is the whole space.
    Cylinder(Word),
    Interval(Interval),
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ball::Empty => write!(f, "{{}}"),
            Ball::Whole => write!(f, "X"),
            Ball::Point(c) => write!(f, "{{{c}}}"),
            Ball::Cylinder(w) => write!(f, "[{}]", crate::streams::word_to_string(w)),
            Ball::Interval(i) => write!(f, "{i}"),
        }
    }
}

/// Length of the cylinder `B(c, i/(k+1))` for the metric `2^-min{n : p(n) ≠ q(n)}`.
fn cylinder_len(i: Digit, k: Digit) -> usize {
    let mut m = 0usize;
    // smallest m with 2^m · i > k + 1
    while m < 128
        && (i
            .checked_shl(m as u32)
            .filter(|v| v >> m == i)
            .map_or(true, |v| v <= k.saturating_add(1)))
    {
        m += 1;
    }
    m
}

/// Exact description of a basic ball.
pub fn ball_semantics(space: &Space, code: Digit) -> Result<Ball, SpaceError> {
    let (n, i, k) = split_ball(code);
    if i == 0 {
        return Ok(Ball::Empty);
    }
    Ok(match space {
        Space::Finite(0) => Ball::Empty,
        Space::Finite(m) => {
            if i <= k + 1 {
                Ball::Point(n % *m as Digit)
            } else {
                Ball::Whole
            }
        }
        Space::Naturals => {
            if i <= k + 1 {
                Ball::Point(n)
            } else {
                Ball::Whole
            }
        }
        Space::Cantor => Ball::Cylinder(cantor_center(n, cylinder_len(i, k))),
        Space::Baire => {
            let len = cylinder_len(i, k);
            let mut w = baire_center(n);
            w.resize(len, 0);
            Ball::Cylinder(w)
        }
        Space::UnitInterval => {
            let c = rational_center(n);
            let r = Q::new(i as i128, k as i128 + 1);
            let (mut lo, mut hi) = (c - r, c + r);
            let (mut lo_closed, mut hi_closed) = (false, false);
            if lo < Q::zero() {
                lo = Q::zero();
                lo_closed = true;
            }
            if hi > Q::one() {
                hi = Q::one();
                hi_closed = true;
            }
            Ball::Interval(Interval {
                lo,
                hi,
                lo_closed,
                hi_closed,
            })
        }
        other => {
            return Err(SpaceError::UnsupportedNesting(alloc::format!(
                "balls in {other}"
            )))
        }
    })
}

/// A closed set coded by an eventually periodic enumeration, in a canonical
/// form so that equal sets compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClosedSet {
    Finite {
        size: u32,
        members: Vec<Digit>,
    },
    /// `ℕ ∖ excluded`, or `∅` when `all` is set.
    Naturals {
        excluded: Vec<Digit>,
        all: bool,
    },
    /// Complement of the union of the maximal excluded cylinders.
    Cylinders {
        binary: bool,
        excluded: Vec<Word>,
    },
    /// Disjoint closed components, sorted.
    Intervals(Vec<(Q, Q)>),
}

fn has_prefix_in(w: &[Digit], set: &BTreeSet<Word>) -> bool {
    (0..=w.len()).any(|l| set.contains(&w[..l]))
}

fn normalize_cylinders(words: impl IntoIterator<Item = Word>, binary: bool) -> Vec<Word> {
    let mut set: BTreeSet<Word> = words.into_iter().collect();
    loop {
        let mut changed = false;
        let covered: Vec<Word> = set
            .iter()
            .filter(|w| (0..w.len()).any(|l| set.contains(&w[..l])))
            .cloned()
            .collect();
        for w in covered {
            set.remove(&w);
            changed = true;
        }
        if binary {
            let merge: Option<Word> = set.iter().find_map(|w| {
                let (&last, head) = w.split_last()?;
                let mut sib = head.to_vec();
                sib.push(1 - last.min(1));
                set.contains(&sib).then(|| head.to_vec())
            });
            if let Some(parent) = merge {
                let mut a = parent.clone();
                a.push(0);
                let mut b = parent.clone();
                b.push(1);
                set.remove(&a);
                set.remove(&b);
                set.insert(parent);
                changed = true;
            }
        }
        if !changed {
            return set.into_iter().collect();
        }
    }
}

/// Closed components of `[0,1]` minus a finite union of intervals.
fn interval_complement(balls: &[Interval]) -> Vec<(Q, Q)> {
    let covered = |x: Q| balls.iter().any(|b| b.contains(x));
    let mut pts: Vec<Q> = vec![Q::zero(), Q::one()];
    for b in balls {
        pts.push(b.lo);
        pts.push(b.hi);
    }
    pts.sort();
    pts.dedup();
    let two = Q::from_integer(2);
    let mut comps: Vec<(Q, Q)> = Vec::new();
    let mut open: Option<Q> = None;
    let mut last_free: Option<Q> = None;
    for (idx, &x) in pts.iter().enumerate() {
        let here = !covered(x);
        if here {
            if open.is_none() {
                open = Some(x);
            }
            last_free = Some(x);
        } else if let Some(a) = open.take() {
            comps.push((a, last_free.expect("set with start")));
        }
        if let Some(&y) = pts.get(idx + 1) {
            let gap_free = !covered((x + y) / two);
            if gap_free {
                if open.is_none() {
                    // closure of a free gap includes its left endpoint
                    open = Some(x);
                }
                last_free = Some(y);
            } else if let Some(a) = open.take() {
                comps.push((a, last_free.expect("set with start")));
            }
        }
    }
    if let Some(a) = open {
        comps.push((a, last_free.expect("set with start")));
    }
    comps
}

impl ClosedSet {
    /// The complement of the union of the given balls in `space`.
    pub fn from_balls(space: &Space, balls: &[Ball]) -> Result<ClosedSet, SpaceError> {
        let whole = balls.iter().any(|b| matches!(b, Ball::Whole));
        Ok(match space {
            Space::Finite(m) => {
                let out: BTreeSet<Digit> = balls
                    .iter()
                    .filter_map(|b| {
                        if let Ball::Point(c) = b {
                            Some(*c)
                        } else {
                            None
                        }
                    })
                    .collect();
                let members = if whole {
                    vec![]
                } else {
                    (0..*m as Digit).filter(|c| !out.contains(c)).collect()
                };
                ClosedSet::Finite { size: *m, members }
            }
            Space::Naturals => {
                if whole {
                    ClosedSet::Naturals {
                        excluded: vec![],
                        all: true,
                    }
                } else {
                    let ex: BTreeSet<Digit> = balls
                        .iter()
                        .filter_map(|b| {
                            if let Ball::Point(c) = b {
                                Some(*c)
                            } else {
                                None
                            }
                        })
                        .collect();
                    ClosedSet::Naturals {
                        excluded: ex.into_iter().collect(),
                        all: false,
                    }
                }
            }
            Space::Cantor | Space::Baire => {
                let binary = *space == Space::Cantor;
                let words = balls.iter().filter_map(|b| match b {
                    Ball::Cylinder(w) => Some(w.clone()),
                    Ball::Whole => Some(Word::new()),
                    _ => None,
                });
                ClosedSet::Cylinders {
                    binary,
                    excluded: normalize_cylinders(words, binary),
                }
            }
            Space::UnitInterval => {
                let ivs: Vec<Interval> = balls
                    .iter()
                    .filter_map(|b| {
                        if let Ball::Interval(i) = b {
                            Some(*i)
                        } else {
                            None
                        }
                    })
                    .collect();
                ClosedSet::Intervals(interval_complement(&ivs))
            }
            other => {
                return Err(SpaceError::UnsupportedNesting(alloc::format!(
                    "sets in {other}"
                )))
            }
        })
    }

    /// The complement of the union of the cylinders, normalized.
    pub fn cylinders(binary: bool, words: impl IntoIterator<Item = Word>) -> ClosedSet {
        ClosedSet::Cylinders {
            binary,
            excluded: normalize_cylinders(words, binary),
        }
    }

    /// `ℕ ∖ excluded`.
    pub fn naturals_without(excluded: impl IntoIterator<Item = Digit>) -> ClosedSet {
        let ex: BTreeSet<Digit> = excluded.into_iter().collect();
        ClosedSet::Naturals {
            excluded: ex.into_iter().collect(),
            all: false,
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            ClosedSet::Finite { members, .. } => members.is_empty(),
            ClosedSet::Naturals { all, .. } => *all,
            ClosedSet::Cylinders { excluded, .. } => excluded.first().is_some_and(|w| w.is_empty()),
            ClosedSet::Intervals(c) => c.is_empty(),
        }
    }

    pub fn contains(&self, x: &Point) -> bool {
        match (self, x) {
            (ClosedSet::Finite { members, .. }, Point::Nat(n)) => members.contains(n),
            (ClosedSet::Naturals { excluded, all }, Point::Nat(n)) => !all && !excluded.contains(n),
            (ClosedSet::Cylinders { binary, excluded }, Point::Stream(s)) => {
                let longest = excluded.iter().map(Vec::len).max().unwrap_or(0);
                let w = s.take(longest);
                if *binary && !(s.range().iter().all(|&d| d <= 1)) {
                    return false;
                }
                !excluded.iter().any(|e| w.starts_with(e))
            }
            (ClosedSet::Intervals(c), Point::Rational(q)) => {
                c.iter().any(|(a, b)| a <= q && q <= b)
            }
            _ => false,
        }
    }

    /// The least member: least natural, lexicographically least stream,
    /// or least rational.
    pub fn least(&self) -> Option<Point> {
        if self.is_empty() {
            return None;
        }
        Some(match self {
            ClosedSet::Finite { members, .. } => Point::Nat(members[0]),
            ClosedSet::Naturals { excluded, .. } => Point::Nat(
                (0..)
                    .find(|n| !excluded.contains(n))
                    .expect("finitely many exclusions"),
            ),
            ClosedSet::Cylinders { excluded, .. } => {
                let set: BTreeSet<Word> = excluded.iter().cloned().collect();
                let longest = excluded.iter().map(Vec::len).max().unwrap_or(0);
                let mut w = Word::new();
                for _ in 0..longest {
                    let d = (0..).find(|&d| {
                        let mut v = w.clone();
                        v.push(d);
                        !has_prefix_in(&v, &set)
                    });
                    w.push(d.expect("finitely many exclusions"));
                }
                Point::Stream(NameStream::padded(&w, 0))
            }
            ClosedSet::Intervals(c) => Point::Rational(c[0].0),
        })
    }

    /// A few members, used to sample alternative valid answers.
    pub fn sample_members(&self, limit: usize) -> Vec<Point> {
        let mut out = Vec::new();
        match self {
            ClosedSet::Finite { members, .. } => out.extend(members.iter().map(|&m| Point::Nat(m))),
            ClosedSet::Naturals {
                excluded,
                all: false,
            } => out.extend(
                (0..)
                    .filter(|n| !excluded.contains(n))
                    .take(limit)
                    .map(Point::Nat),
            ),
            ClosedSet::Cylinders { binary, excluded } if !self.is_empty() => {
                let set: BTreeSet<Word> = excluded.iter().cloned().collect();
                let longest = excluded.iter().map(Vec::len).max().unwrap_or(0) + 1;
                let alphabet: Digit = if *binary { 2 } else { 3 };
                let mut frontier = vec![Word::new()];
                for _ in 0..longest {
                    let mut next = Vec::new();
                    for w in &frontier {
                        for d in 0..alphabet {
                            let mut v = w.clone();
                            v.push(d);
                            if !has_prefix_in(&v, &set) {
                                next.push(v);
                            }
                        }
                    }
                    next.truncate(limit);
                    frontier = next;
                }
                for w in frontier {
                    out.push(Point::Stream(NameStream::padded(&w, 0)));
                    if *binary {
                        out.push(Point::Stream(NameStream::padded(&w, 1)));
                    }
                }
            }
            ClosedSet::Intervals(c) => {
                for (a, b) in c {
                    out.push(Point::Rational(*a));
                    out.push(Point::Rational(*b));
                    out.push(Point::Rational((a + b) / Q::from_integer(2)));
                }
            }
            _ => {}
        }
        out.dedup();
        out.truncate(limit);
        out
    }

    /// Uniform measure of a subset of the Cantor space.
    pub fn measure(&self) -> Option<Q> {
        match self {
            ClosedSet::Cylinders {
                binary: true,
                excluded,
            } => {
                let covered: Q = excluded.iter().map(|w| Q::new(1, 1i128 << w.len())).sum();
                Some(Q::one() - covered)
            }
            ClosedSet::Intervals(c) => Some(c.iter().map(|(a, b)| b - a).sum()),
            _ => None,
        }
    }

    /// True iff the set is a single closed interval, possibly degenerate.
    pub fn is_connected_nonempty(&self) -> bool {
        matches!(self, ClosedSet::Intervals(c) if c.len() == 1)
    }
}

impl fmt::Display for ClosedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosedSet::Finite { members, .. } => {
                write!(f, "{{")?;
                for (i, m) in members.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{m}")?;
                }
                write!(f, "}}")
            }
            ClosedSet::Naturals { all: true, .. } => write!(f, "{{}}"),
            ClosedSet::Naturals { excluded, .. } => {
                write!(f, "N\\{{")?;
                for (i, m) in excluded.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{m}")?;
                }
                write!(f, "}}")
            }
            ClosedSet::Cylinders { excluded, .. } => {
                write!(f, "X\\(")?;
                for (i, w) in excluded.iter().enumerate() {
                    if i > 0 {
                        write!(f, " u ")?;
                    }
                    write!(f, "[{}]", crate::streams::word_to_string(w))?;
                }
                write!(f, ")")
            }
            ClosedSet::Intervals(c) => {
                if c.is_empty() {
                    return write!(f, "{{}}");
                }
                for (i, (a, b)) in c.iter().enumerate() {
                    if i > 0 {
                        write!(f, " u ")?;
                    }
                    write!(f, "[{a},{b}]")?;
                }
                Ok(())
            }
        }
    }
}

/// A point of a represented space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Point {
    Nat(Digit),
    /// The extra point of a completion.
    Bottom,
    Stream(NameStream),
    Rational(Q),
    Set(ClosedSet),
    Family(Family),
    Tuple(Vec<Point>),
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Nat(n) => write!(f, "{n}"),
            Point::Bottom => write!(f, "⊥"),
            Point::Stream(s) => write!(f, "{s}"),
            Point::Rational(q) => write!(f, "{q}"),
            Point::Set(s) => write!(f, "{s}"),
            Point::Family(s) => write!(f, "{s}"),
            Point::Tuple(v) => {
                write!(f, "(")?;
                for (i, p) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Balls of the distinct codes occurring in an enumeration, in order of
/// first appearance.
pub fn distinct_codes(p: &NameStream) -> Vec<Digit> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &d in p.prefix().iter().chain(p.period()) {
        if seen.insert(d) {
            out.push(d);
        }
    }
    out
}

/// The exact set coded by an eventually periodic ball enumeration.
pub fn set_members(space: &Space, c: &NameStream) -> Result<ClosedSet, SpaceError> {
    set_of_codes(space, &distinct_codes(c))
}

/// The complement of the union of the listed balls.
pub fn set_of_codes(space: &Space, codes: &[Digit]) -> Result<ClosedSet, SpaceError> {
    let balls = codes
        .iter()
        .map(|&c| ball_semantics(space, c))
        .collect::<Result<Vec<_>, _>>()?;
    ClosedSet::from_balls(space, &balls)
}

/// True iff the balls cover the compact space.
pub fn covers_space(space: &Space, codes: &[Digit]) -> Result<bool, SpaceError> {
    if !space.is_compact() {
        return Err(SpaceError::NotCompact(alloc::format!("{space}")));
    }
    Ok(set_of_codes(space, codes)?.is_empty())
}

/// `l = sup{x : [0,x] ⊆ ∪}` and `r = inf{y : [y,1] ⊆ ∪}`, with `l = 0`
/// and `r = 1` when the respective sets are empty.
pub fn interval_bounds(codes: &[Digit]) -> Result<(Q, Q), SpaceError> {
    match set_of_codes(&Space::UnitInterval, codes)? {
        ClosedSet::Intervals(c) => match (c.first(), c.last()) {
            (Some(first), Some(last)) => Ok((first.0, last.1)),
            _ => Ok((Q::one(), Q::zero())),
        },
        _ => unreachable!("unit interval sets are interval lists"),
    }
}

/// Upper bound for the measure of a coded subset of the Cantor space after
/// the first `stage` distinct balls of the enumeration.
pub fn measure_upper(c: &NameStream, stage: usize) -> Result<Q, SpaceError> {
    let codes = distinct_codes(c);
    let used = &codes[..stage.min(codes.len())];
    Ok(set_of_codes(&Space::Cantor, used)?
        .measure()
        .expect("Cantor sets have a measure"))
}

/// Re-codes a range-coded name of `A_-(ℕ)` as a ball enumeration.
pub fn range_to_balls(p: &NameStream) -> NameStream {
    p.map(|d| {
        if d == 0 {
            EMPTY_BALL
        } else {
            point_code(d - 1)
        }
    })
}

/// Re-codes a ball enumeration of `A_-(ℕ)` in the range coding; fails on
/// balls that exclude infinitely many numbers.
pub fn balls_to_range(p: &NameStream) -> Result<NameStream, SpaceError> {
    let conv = |d: Digit| -> Result<Digit, SpaceError> {
        match ball_semantics(&Space::Naturals, d)? {
            Ball::Empty => Ok(0),
            Ball::Point(c) => Ok(c + 1),
            _ => Err(SpaceError::NotEncodable(String::from(
                "a cofinite exclusion in the range coding",
            ))),
        }
    };
    let prefix = p
        .prefix()
        .iter()
        .map(|&d| conv(d))
        .collect::<Result<Word, _>>()?;
    let period = p
        .period()
        .iter()
        .map(|&d| conv(d))
        .collect::<Result<Word, _>>()?;
    Ok(NameStream::new(prefix, period)?)
}

/// Result of reading a name up to a depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Observation {
    Committed(Point),
    Pending,
    /// The name is not in the domain of the representation.
    Outside,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Representation {
    Base(Space),
    /// `δ^℘(p) = δ(p − 1)`.
    Precompletion(Box<Representation>),
    /// `δ̄(p) = δ(p − 1)` if defined, `⊥` otherwise.
    Completion(Box<Representation>),
    /// `δ' = δ ∘ lim`, names being tupled sequences.
    Jump(Box<Representation>),
}

/// A name: a single stream, or a sequence of streams for jump inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Name {
    Stream(NameStream),
    Family(Family),
}

impl Name {
    pub fn as_stream(&self) -> Option<&NameStream> {
        match self {
            Name::Stream(s) => Some(s),
            Name::Family(_) => None,
        }
    }
}

impl From<NameStream> for Name {
    fn from(s: NameStream) -> Self {
        Name::Stream(s)
    }
}

impl From<Family> for Name {
    fn from(f: Family) -> Self {
        Name::Family(f)
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Name::Stream(s) => write!(f, "{s}"),
            Name::Family(s) => write!(f, "{s}"),
        }
    }
}

impl FromStr for Name {
    type Err = StreamError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.starts_with('[') || t.starts_with('<') {
            Ok(Name::Family(t.parse()?))
        } else {
            Ok(Name::Stream(t.parse()?))
        }
    }
}

/// Interleaves `k` streams: `r(i + k·j) = p_i(j)`.
pub fn interleave_many(ps: &[NameStream]) -> NameStream {
    if ps.is_empty() {
        return NameStream::constant(0);
    }
    let k = ps.len();
    let u = ps.iter().map(|p| p.prefix().len()).max().unwrap_or(0);
    let l = ps
        .iter()
        .map(|p| p.period().len())
        .fold(1, |a, b| a.lcm(&b));
    let prefix = (0..u * k).map(|n| ps[n % k].digit(n / k)).collect();
    let period = (u * k..(u + l) * k)
        .map(|n| ps[n % k].digit(n / k))
        .collect();
    NameStream::new(prefix, period).expect("non-empty period")
}

fn star_components(p: &NameStream) -> Vec<NameStream> {
    let k = p.digit(0) as usize;
    let q = crate::streams::project(p, 1, 1);
    (0..k).map(|i| crate::streams::project(&q, k, i)).collect()
}

/// The canonical representation of a space.
pub fn make_space(space: Space) -> Result<Representation, SpaceError> {
    if let Space::Closed(b) = &space {
        Space::closed((**b).clone())?;
    }
    Ok(Representation::Base(space))
}

pub fn precompletion(r: &Representation) -> Representation {
    Representation::Precompletion(Box::new(r.clone()))
}

pub fn completion(r: &Representation) -> Representation {
    Representation::Completion(Box::new(r.clone()))
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Representation::Base(s) => write!(f, "{s}"),
            Representation::Precompletion(r) => write!(f, "pre({r})"),
            Representation::Completion(r) => write!(f, "bar({r})"),
            Representation::Jump(r) => write!(f, "{r}'"),
        }
    }
}

impl Representation {
    pub fn is_total(&self) -> bool {
        match self {
            Representation::Base(Space::Star(b)) => Representation::Base((**b).clone()).is_total(),
            Representation::Base(s) => !matches!(s, Space::Finite(_) | Space::Cantor),
            Representation::Precompletion(_) | Representation::Jump(_) => false,
            Representation::Completion(_) => true,
        }
    }

    pub fn is_precomplete(&self) -> bool {
        match self {
            Representation::Base(s) => matches!(s, Space::Closed(_) | Space::ClosedRange),
            Representation::Jump(_) => false,
            _ => true,
        }
    }

    pub fn base_space(&self) -> &Space {
        match self {
            Representation::Base(s) => s,
            Representation::Precompletion(r)
            | Representation::Completion(r)
            | Representation::Jump(r) => r.base_space(),
        }
    }

    /// Number of digits after which [`Representation::decode`] has committed.
    pub fn required_depth(&self, p: &NameStream) -> usize {
        let full = p.description_len();
        match self {
            Representation::Base(s) => match s {
                Space::Finite(_) | Space::Naturals | Space::UnitInterval => 1,
                Space::Sierpinski => (0..full).find(|&i| p.digit(i) != 0).map_or(full, |i| i + 1),
                _ => full,
            },
            Representation::Jump(_) => full,
            Representation::Precompletion(inner) | Representation::Completion(inner) => {
                let own = if matches!(self, Representation::Completion(_)) {
                    full
                } else {
                    0
                };
                match minus_one(p) {
                    MinusOne::Finite(_) => full,
                    MinusOne::Infinite(q) => {
                        let need = inner.required_depth(&q);
                        let mut seen = 0;
                        let mut d = 0;
                        while seen < need {
                            if p.digit(d) != 0 {
                                seen += 1;
                            }
                            d += 1;
                        }
                        d.max(own)
                    }
                }
            }
        }
    }

    /// Monotone partial decoding: commits once `depth` digits determine the
    /// point.
    pub fn decode(&self, p: &NameStream, depth: usize) -> Observation {
        if depth < self.required_depth(p) {
            if let Representation::Base(Space::Cantor) = self {
                if (0..depth).any(|i| p.digit(i) > 1) {
                    return Observation::Outside;
                }
            }
            if let Representation::Base(Space::Finite(n)) = self {
                if depth >= 1 && p.digit(0) >= *n as Digit {
                    return Observation::Outside;
                }
            }
            return Observation::Pending;
        }
        match self.decode_ep(p) {
            Some(x) => Observation::Committed(x),
            None => Observation::Outside,
        }
    }

    /// Exact decoding of an eventually periodic name; `None` outside the
    /// domain.
    pub fn decode_ep(&self, p: &NameStream) -> Option<Point> {
        match self {
            Representation::Base(s) => match s {
                Space::Finite(n) => (p.digit(0) < *n as Digit).then(|| Point::Nat(p.digit(0))),
                Space::Naturals => Some(Point::Nat(p.digit(0))),
                Space::Sierpinski => Some(Point::Nat(if p.range().iter().any(|&d| d != 0) {
                    1
                } else {
                    0
                })),
                Space::Cantor => p
                    .range()
                    .iter()
                    .all(|&d| d <= 1)
                    .then(|| Point::Stream(p.clone())),
                Space::Baire => Some(Point::Stream(p.clone())),
                Space::UnitInterval => Some(Point::Rational(rational_center(p.digit(0)))),
                Space::Closed(b) => set_members(b, p).ok().map(Point::Set),
                Space::ClosedRange => {
                    let excluded = match minus_one(p) {
                        MinusOne::Finite(w) => w,
                        MinusOne::Infinite(q) => q.range(),
                    };
                    Some(Point::Set(ClosedSet::naturals_without(excluded)))
                }
                Space::Star(b) => {
                    let inner = Representation::Base((**b).clone());
                    star_components(p)
                        .iter()
                        .map(|c| inner.decode_ep(c))
                        .collect::<Option<Vec<_>>>()
                        .map(Point::Tuple)
                }
            },
            Representation::Jump(inner) => Family::Interleaved(p.clone())
                .limit()
                .ok()
                .and_then(|l| inner.decode_ep(&l)),
            Representation::Precompletion(inner) => {
                minus_one(p).stream().and_then(|q| inner.decode_ep(q))
            }
            Representation::Completion(inner) => Some(
                minus_one(p)
                    .stream()
                    .and_then(|q| inner.decode_ep(q))
                    .unwrap_or(Point::Bottom),
            ),
        }
    }

    /// Decodes either kind of name; sequences are only read by jumps.
    pub fn decode_name(&self, n: &Name) -> Option<Point> {
        match (self, n) {
            (_, Name::Stream(s)) => self.decode_ep(s),
            (Representation::Jump(inner), Name::Family(f)) => {
                f.limit().ok().and_then(|l| inner.decode_ep(&l))
            }
            _ => None,
        }
    }

    /// A canonical name; jump points are named by constant sequences.
    pub fn encode_name(&self, x: &Point) -> Result<Name, SpaceError> {
        match self {
            Representation::Jump(inner) => Ok(Name::Family(Family::constant(inner.encode(x)?))),
            _ => Ok(Name::Stream(self.encode(x)?)),
        }
    }

    /// A canonical stream name of a point.
    pub fn encode(&self, x: &Point) -> Result<NameStream, SpaceError> {
        let fail = || SpaceError::NotEncodable(alloc::format!("{x} in {self}"));
        match self {
            Representation::Completion(inner) => match x {
                Point::Bottom => Ok(NameStream::constant(0)),
                _ => Ok(plus_one_embed(&inner.encode(x)?)),
            },
            Representation::Precompletion(inner) => Ok(plus_one_embed(&inner.encode(x)?)),
            Representation::Jump(_) => Err(fail()),
            Representation::Base(s) => match (s, x) {
                (Space::Finite(n), Point::Nat(c)) if *c < *n as Digit => {
                    Ok(NameStream::constant(*c))
                }
                (Space::Naturals, Point::Nat(c)) => Ok(NameStream::constant(*c)),
                (Space::Sierpinski, Point::Nat(c)) if *c <= 1 => Ok(NameStream::constant(*c)),
                (Space::Cantor, Point::Stream(q)) if q.range().iter().all(|&d| d <= 1) => {
                    Ok(q.clone())
                }
                (Space::Baire, Point::Stream(q)) => Ok(q.clone()),
                (Space::UnitInterval, Point::Rational(q)) if *q >= Q::zero() && *q <= Q::one() => {
                    Ok(NameStream::constant(rational_index(*q)))
                }
                (Space::Closed(b), Point::Set(set)) => {
                    let codes = complement_codes(b, set).ok_or_else(fail)?;
                    if codes.is_empty() {
                        Ok(NameStream::constant(EMPTY_BALL))
                    } else {
                        Ok(NameStream::periodic(codes)?)
                    }
                }
                (Space::Star(b), Point::Tuple(v)) => {
                    let inner = Representation::Base((**b).clone());
                    let names = v
                        .iter()
                        .map(|y| inner.encode(y))
                        .collect::<Result<Vec<_>, _>>()?;
                    let body = interleave_many(&names);
                    let mut prefix = vec![v.len() as Digit];
                    if names.is_empty() {
                        return Ok(NameStream::new(prefix, vec![0])?);
                    }
                    prefix.extend_from_slice(body.prefix());
                    Ok(NameStream::new(prefix, body.period().to_vec())?)
                }
                (
                    Space::ClosedRange,
                    Point::Set(ClosedSet::Naturals {
                        excluded,
                        all: false,
                    }),
                ) => {
                    if excluded.is_empty() {
                        Ok(NameStream::constant(0))
                    } else {
                        Ok(NameStream::periodic(
                            excluded.iter().map(|e| e + 1).collect(),
                        )?)
                    }
                }
                _ => Err(fail()),
            },
        }
    }
}

/// Ball codes whose union is the complement of `set`.
pub fn complement_codes(space: &Space, set: &ClosedSet) -> Option<Vec<Digit>> {
    let two = Q::from_integer(2);
    match (space, set) {
        (Space::Finite(n), ClosedSet::Finite { size, members }) if size == n => {
            if members.is_empty() && *n > 0 {
                return Some(vec![whole_code()]);
            }
            Some(
                (0..*n as Digit)
                    .filter(|c| !members.contains(c))
                    .map(point_code)
                    .collect(),
            )
        }
        (Space::Naturals, ClosedSet::Naturals { excluded, all }) => {
            if *all {
                Some(vec![whole_code()])
            } else {
                Some(excluded.iter().map(|&c| point_code(c)).collect())
            }
        }
        (
            Space::Cantor,
            ClosedSet::Cylinders {
                binary: true,
                excluded,
            },
        )
        | (
            Space::Baire,
            ClosedSet::Cylinders {
                binary: false,
                excluded,
            },
        ) => Some(excluded.iter().map(|w| cylinder_code(space, w)).collect()),
        (Space::UnitInterval, ClosedSet::Intervals(c)) => {
            if c.is_empty() {
                return Some(vec![interval_code(Q::new(1, 2), Q::one())]);
            }
            let mut codes = Vec::new();
            let (first, last) = (c[0].0, c[c.len() - 1].1);
            if first > Q::zero() {
                codes.push(interval_code(Q::zero(), first));
            }
            for w in c.windows(2) {
                let (a, b) = (w[0].1, w[1].0);
                codes.push(interval_code((a + b) / two, (b - a) / two));
            }
            if last < Q::one() {
                codes.push(interval_code(Q::one(), Q::one() - last));
            }
            Some(codes)
        }
        _ => None,
    }
}

/// Decodes a jump name: the limit of the family, read by `r`.
pub fn jump_decode(r: &Representation, p: &Family) -> Result<Option<Point>, SpaceError> {
    let lim = p.limit()?;
    Ok(r.decode_ep(&lim))
}

/// Greatest common divisor helper for callers working with denominators.
pub fn gcd(a: i128, b: i128) -> i128 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn s(t: &str) -> NameStream {
        t.parse().unwrap()
    }

    fn q(a: i128, b: i128) -> Q {
        Q::new(a, b)
    }

    #[test]
    fn space_names() {
        for t in [
            "N",
            "2N",
            "NN",
            "S",
            "I",
            "fin(3)",
            "A-(N)",
            "A-(2N)",
            "A-(I)",
            "A-(fin(4))",
            "A-range(N)",
        ] {
            assert_eq!(t.parse::<Space>().unwrap().to_string(), t);
        }
        assert!(matches!(
            "A-(A-(N))".parse::<Space>(),
            Err(SpaceError::UnsupportedNesting(_))
        ));
        assert!(matches!(
            "A-(S)".parse::<Space>(),
            Err(SpaceError::UnsupportedNesting(_))
        ));
        assert!("Z".parse::<Space>().is_err());
    }

    #[test]
    fn base_decoding() {
        let sier = make_space(Space::Sierpinski).unwrap();
        assert_eq!(sier.decode_ep(&s(";0")), Some(Point::Nat(0)));
        assert_eq!(sier.decode_ep(&s("0,0,4;0")), Some(Point::Nat(1)));
        let nat = make_space(Space::Naturals).unwrap();
        assert_eq!(nat.decode_ep(&s("7,1;2")), Some(Point::Nat(7)));
        let range = make_space(Space::ClosedRange).unwrap();
        assert_eq!(
            range.decode_ep(&s(";0")),
            Some(Point::Set(ClosedSet::naturals_without([])))
        );
        assert_eq!(
            range.decode_ep(&s("3;1,0")),
            Some(Point::Set(ClosedSet::naturals_without([0, 2])))
        );
    }

    #[test]
    fn precompletion_and_completion() {
        let nat = make_space(Space::Naturals).unwrap();
        let pre = precompletion(&nat);
        assert_eq!(pre.decode_ep(&s("0,0,3;1")), Some(Point::Nat(2)));
        let sier = precompletion(&make_space(Space::Sierpinski).unwrap());
        assert_eq!(sier.decode_ep(&s(";0")), None);
        let bar = completion(&nat);
        assert_eq!(bar.decode_ep(&s(";0")), Some(Point::Bottom));
        assert_eq!(bar.decode_ep(&s("0,6;1")), Some(Point::Nat(5)));
        assert!(bar.is_total() && bar.is_precomplete());
        assert!(!pre.is_total() && pre.is_precomplete());
    }

    #[test]
    fn decoding_is_monotone_and_commits_in_time() {
        let reps = [
            make_space(Space::Naturals).unwrap(),
            make_space(Space::Sierpinski).unwrap(),
            completion(&make_space(Space::Naturals).unwrap()),
            completion(&completion(&make_space(Space::Baire).unwrap())),
            precompletion(&make_space(Space::Cantor).unwrap()),
        ];
        for p in ["0,0,3;1", ";0", "2;0,1", "1,0,2;0,0,1", "5,0;0"] {
            let p = s(p);
            for r in &reps {
                let mut last = Observation::Pending;
                for d in 0..=p.prefix().len() + 2 * p.period().len() + 1 {
                    let o = r.decode(&p, d);
                    if last != Observation::Pending {
                        assert_eq!(o, last, "{r} on {p} at depth {d}");
                    }
                    last = o;
                }
                if r.is_total() {
                    assert!(matches!(last, Observation::Committed(_)), "{r} on {p}");
                }
            }
        }
    }

    #[test]
    fn jump_examples() {
        let nat = make_space(Space::Naturals).unwrap();
        assert_eq!(
            jump_decode(&nat, &Family::constant(s(";7"))).unwrap(),
            Some(Point::Nat(7))
        );
        let f = Family::switching(vec![s(";3"); 4], s(";9"));
        assert_eq!(jump_decode(&nat, &f).unwrap(), Some(Point::Nat(9)));
        let alt = Family::listed(vec![], vec![s(";3"), s(";9")]).unwrap();
        assert!(jump_decode(&nat, &alt).is_err());
    }

    #[test]
    fn ball_examples() {
        assert_eq!(
            ball_semantics(&Space::Naturals, ball_code(5, 1, 0)).unwrap(),
            Ball::Point(5)
        );
        for sp in [
            Space::Naturals,
            Space::Cantor,
            Space::Baire,
            Space::UnitInterval,
            Space::Finite(3),
        ] {
            assert_eq!(
                ball_semantics(&sp, ball_code(9, 0, 4)).unwrap(),
                Ball::Empty
            );
        }
        let half = interval_code(q(1, 2), q(1, 2));
        assert_eq!(
            ball_semantics(&Space::UnitInterval, half).unwrap(),
            Ball::Interval(Interval {
                lo: q(0, 1),
                hi: q(1, 1),
                lo_closed: false,
                hi_closed: false
            })
        );
        assert_eq!(
            ball_semantics(&Space::Cantor, cylinder_code(&Space::Cantor, &[0, 1, 1])).unwrap(),
            Ball::Cylinder(vec![0, 1, 1])
        );
        assert_eq!(
            ball_semantics(&Space::Baire, cylinder_code(&Space::Baire, &[4, 0, 2, 0])).unwrap(),
            Ball::Cylinder(vec![4, 0, 2, 0])
        );
        assert_eq!(
            ball_semantics(&Space::Cantor, cylinder_code(&Space::Cantor, &[])).unwrap(),
            Ball::Cylinder(vec![])
        );
    }

    #[test]
    fn dense_enumerations() {
        for n in 0..2000u128 {
            let w = baire_center(n);
            assert_eq!(baire_center(baire_index(&w)), w);
        }
        assert_eq!(baire_center(0), Vec::<Digit>::new());
        for n in 0..500u128 {
            let w = cantor_center(n, 12);
            let bits = 128 - (n + 1).leading_zeros() as usize - 1;
            assert_eq!(cantor_index(&w[..bits]), n);
        }
        for den in 1..9i128 {
            for num in 0..=den {
                assert_eq!(rational_center(rational_index(q(num, den))), q(num, den));
            }
        }
    }

    #[test]
    fn set_member_examples() {
        let cyl0 = cylinder_code(&Space::Cantor, &[0]);
        let set = set_members(&Space::Cantor, &NameStream::constant(cyl0)).unwrap();
        assert_eq!(
            set,
            ClosedSet::Cylinders {
                binary: true,
                excluded: vec![vec![0]]
            }
        );
        assert!(set.contains(&Point::Stream(s("1;0,1"))));
        assert!(!set.contains(&Point::Stream(s("0;1"))));
        let three =
            NameStream::periodic(vec![point_code(0), point_code(1), point_code(2)]).unwrap();
        assert_eq!(
            set_members(&Space::Naturals, &three).unwrap(),
            ClosedSet::naturals_without([0, 1, 2])
        );
        let none = NameStream::constant(EMPTY_BALL);
        assert_eq!(
            set_members(&Space::Naturals, &none).unwrap(),
            ClosedSet::naturals_without([])
        );
        assert_eq!(
            set_members(&Space::Cantor, &none).unwrap(),
            ClosedSet::Cylinders {
                binary: true,
                excluded: vec![]
            }
        );
    }

    #[test]
    fn cover_examples() {
        let c0 = cylinder_code(&Space::Cantor, &[0]);
        let c1 = cylinder_code(&Space::Cantor, &[1]);
        assert!(covers_space(&Space::Cantor, &[c0, c1]).unwrap());
        assert!(!covers_space(&Space::Finite(2), &[point_code(0)]).unwrap());
        // (-0.1, 0.55) and (0.45, 1.1)
        let a = interval_code(q(9, 40), q(13, 40));
        let b = interval_code(q(31, 40), q(13, 40));
        assert!(covers_space(&Space::UnitInterval, &[a, b]).unwrap());
        assert!(covers_space(&Space::Naturals, &[]).is_err());
    }

    #[test]
    fn interval_bound_examples() {
        let left = interval_code(q(0, 1), q(3, 10));
        let right = interval_code(q(1, 1), q(3, 10));
        assert_eq!(
            interval_bounds(&[left, right]).unwrap(),
            (q(3, 10), q(7, 10))
        );
        assert_eq!(interval_bounds(&[]).unwrap(), (q(0, 1), q(1, 1)));
        let l2 = interval_code(q(0, 1), q(11, 20));
        let r2 = interval_code(q(1, 1), q(11, 20));
        assert_eq!(interval_bounds(&[l2, r2]).unwrap(), (q(1, 1), q(0, 1)));
    }

    #[test]
    fn measure_examples() {
        let c = |w: &[Digit]| cylinder_code(&Space::Cantor, w);
        let p = NameStream::constant(c(&[0]));
        assert_eq!(measure_upper(&p, 5).unwrap(), q(1, 2));
        let p = NameStream::periodic(vec![c(&[0, 0]), c(&[0, 1])]).unwrap();
        assert_eq!(measure_upper(&p, 1).unwrap(), q(3, 4));
        assert_eq!(measure_upper(&p, 2).unwrap(), q(1, 2));
        assert_eq!(
            measure_upper(&NameStream::constant(EMPTY_BALL), 3).unwrap(),
            q(1, 1)
        );
    }

    #[test]
    fn coding_converters() {
        let r = s("3;1,0");
        let b = range_to_balls(&r);
        assert_eq!(
            set_members(&Space::Naturals, &b).unwrap(),
            ClosedSet::naturals_without([0, 2])
        );
        assert_eq!(balls_to_range(&b).unwrap(), r);
        assert!(balls_to_range(&NameStream::constant(whole_code())).is_err());
    }

    #[test]
    fn encode_round_trips() {
        let sets = [
            (
                Space::Finite(4),
                ClosedSet::Finite {
                    size: 4,
                    members: vec![1, 3],
                },
            ),
            (Space::Naturals, ClosedSet::naturals_without([0, 4])),
            (
                Space::Cantor,
                ClosedSet::cylinders(true, [vec![0, 1], vec![1]]),
            ),
            (
                Space::Baire,
                ClosedSet::cylinders(false, [vec![2], vec![0, 5]]),
            ),
            (
                Space::UnitInterval,
                ClosedSet::Intervals(vec![(q(1, 4), q(1, 3)), (q(1, 2), q(1, 1))]),
            ),
            (Space::UnitInterval, ClosedSet::Intervals(vec![])),
        ];
        for (sp, set) in sets {
            let r = make_space(Space::closed(sp).unwrap()).unwrap();
            let name = r.encode(&Point::Set(set.clone())).unwrap();
            assert_eq!(r.decode_ep(&name), Some(Point::Set(set)));
        }
    }

    #[test]
    fn tuples_and_jumps() {
        let star = make_space("A-(fin(2))*".parse().unwrap()).unwrap();
        let sets = Point::Tuple(vec![
            Point::Set(ClosedSet::Finite {
                size: 2,
                members: vec![1],
            }),
            Point::Set(ClosedSet::Finite {
                size: 2,
                members: vec![0, 1],
            }),
        ]);
        let name = star.encode(&sets).unwrap();
        assert_eq!(name.digit(0), 2);
        assert_eq!(star.decode_ep(&name), Some(sets));
        let bits = make_space("fin(2)*".parse().unwrap()).unwrap();
        let t = Point::Tuple(vec![Point::Nat(1), Point::Nat(0), Point::Nat(1)]);
        assert_eq!(bits.decode_ep(&bits.encode(&t).unwrap()), Some(t));
        assert_eq!(bits.decode_ep(&s(";0")), Some(Point::Tuple(vec![])));
        let jump = Representation::Jump(Box::new(make_space(Space::Naturals).unwrap()));
        let name = jump.encode_name(&Point::Nat(4)).unwrap();
        assert_eq!(jump.decode_name(&name), Some(Point::Nat(4)));
        assert_eq!(
            jump.decode_name(&"[;3 | ;9]".parse().unwrap()),
            Some(Point::Nat(9))
        );
    }

    #[test]
    fn least_members() {
        let set = ClosedSet::Cylinders {
            binary: true,
            excluded: vec![vec![0, 0], vec![0, 1, 0]],
        };
        assert_eq!(set.least(), Some(Point::Stream(s("0,1,1;0"))));
        let nn = ClosedSet::Cylinders {
            binary: false,
            excluded: vec![vec![0], vec![1, 0]],
        };
        assert_eq!(nn.least(), Some(Point::Stream(s("1,1;0"))));
    }
}
