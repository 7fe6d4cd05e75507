//! Name streams over Baire space.
//!
//! A [`NameStream`] is an eventually periodic sequence `u·v^ω` kept in
//! canonical form. Sequences of streams are handled by [`Family`], read
//! through the Cantor pairing by [`Tupled`].

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_integer::{Integer, Roots};

/// A single digit of a name. Digits are unbounded naturals in principle.
pub type Digit = u128;

/// A finite word over the naturals.
pub type Word = Vec<Digit>;

/// Random access to the digits of an infinite name.
pub trait Digits {
    fn digit(&self, i: usize) -> Digit;

    fn take(&self, n: usize) -> Word {
        (0..n).map(|i| self.digit(i)).collect()
    }
}

impl<D: Digits + ?Sized> Digits for &D {
    fn digit(&self, i: usize) -> Digit {
        (**self).digit(i)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StreamError {
    EmptyPeriod,
    Syntax(String),
    NoLimit,
}

impl fmt::Display for StreamError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StreamError::EmptyPeriod => write!(f, "period must be non-empty"),
            StreamError::Syntax(s) => write!(f, "malformed stream literal: {s}"),
            StreamError::NoLimit => write!(f, "sequence has no limit"),
        }
    }
}

/// An eventually periodic stream `prefix · period^ω`.
///
/// The period is primitive and the prefix never ends with the last digit of
/// the period, so two streams are equal iff their canonical forms are.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NameStream {
    prefix: Word,
    period: Word,
}

impl NameStream {
    pub fn new(prefix: Word, period: Word) -> Result<Self, StreamError> {
        if period.is_empty() {
            return Err(StreamError::EmptyPeriod);
        }
        let mut s = NameStream { prefix, period };
        s.canonicalize();
        Ok(s)
    }

    /// The constant stream `d^ω`.
    pub fn constant(d: Digit) -> Self {
        NameStream {
            prefix: Word::new(),
            period: alloc::vec![d],
        }
    }

    /// `w · d^ω`.
    pub fn padded(w: &[Digit], d: Digit) -> Self {
        Self::new(w.to_vec(), alloc::vec![d]).expect("non-empty period")
    }

    pub fn periodic(v: Word) -> Result<Self, StreamError> {
        Self::new(Word::new(), v)
    }

    pub fn prefix(&self) -> &[Digit] {
        &self.prefix
    }

    pub fn period(&self) -> &[Digit] {
        &self.period
    }

    /// `|u| + |v|` of the canonical form.
    pub fn description_len(&self) -> usize {
        self.prefix.len() + self.period.len()
    }

    pub fn canonical(&self) -> Self {
        let mut s = self.clone();
        s.canonicalize();
        s
    }

    fn canonicalize(&mut self) {
        let n = self.period.len();
        for d in 1..=n {
            if n % d == 0 && (d..n).all(|i| self.period[i] == self.period[i % d]) {
                self.period.truncate(d);
                break;
            }
        }
        while let Some(&last) = self.prefix.last() {
            if last != *self.period.last().expect("non-empty period") {
                break;
            }
            self.prefix.pop();
            self.period.rotate_right(1);
        }
    }

    /// True iff infinitely many digits differ from zero.
    pub fn has_infinite_support(&self) -> bool {
        self.period.iter().any(|&d| d != 0)
    }

    pub fn map(&self, f: impl Fn(Digit) -> Digit) -> Self {
        Self::new(
            self.prefix.iter().map(|&d| f(d)).collect(),
            self.period.iter().map(|&d| f(d)).collect(),
        )
        .expect("non-empty period")
    }

    /// Digits that occur infinitely often.
    pub fn recurring(&self) -> Vec<Digit> {
        let mut v = self.period.clone();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// All distinct digits of the stream.
    pub fn range(&self) -> Vec<Digit> {
        let mut v: Vec<Digit> = self
            .prefix
            .iter()
            .chain(self.period.iter())
            .copied()
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

impl Digits for NameStream {
    fn digit(&self, i: usize) -> Digit {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.period[(i - self.prefix.len()) % self.period.len()]
        }
    }
}

fn write_word(f: &mut fmt::Formatter<'_>, w: &[Digit]) -> fmt::Result {
    for (i, d) in w.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{d}")?;
    }
    Ok(())
}

/// Formats a finite word as comma separated digits.
pub fn word_to_string(w: &[Digit]) -> String {
    struct W<'a>(&'a [Digit]);
    impl fmt::Display for W<'_> {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            write_word(f, self.0)
        }
    }
    alloc::format!("{}", W(w))
}

impl fmt::Display for NameStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_word(f, &self.prefix)?;
        write!(f, ";")?;
        write_word(f, &self.period)
    }
}

/// Parses comma separated digits; the empty string is the empty word.
pub fn parse_word(s: &str) -> Result<Word, StreamError> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Word::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<Digit>()
                .map_err(|_| StreamError::Syntax(alloc::format!("bad digit {:?}", t.trim())))
        })
        .collect()
}

impl FromStr for NameStream {
    type Err = StreamError;

    /// Parses the literal `"u;v"`, e.g. `"2,0,4,1;0"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (u, v) = s
            .split_once(';')
            .ok_or_else(|| StreamError::Syntax(alloc::format!("missing ';' in {s:?}")))?;
        if v.contains(';') {
            return Err(StreamError::Syntax(alloc::format!(
                "more than one ';' in {s:?}"
            )));
        }
        let period = parse_word(v)?;
        if period.is_empty() {
            return Err(StreamError::EmptyPeriod);
        }
        NameStream::new(parse_word(u)?, period)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MinusOne {
    Finite(Word),
    Infinite(NameStream),
}

impl MinusOne {
    pub fn is_infinite(&self) -> bool {
        matches!(self, MinusOne::Infinite(_))
    }

    pub fn stream(&self) -> Option<&NameStream> {
        match self {
            MinusOne::Infinite(s) => Some(s),
            MinusOne::Finite(_) => None,
        }
    }
}

fn decrement(w: &[Digit]) -> Word {
    w.iter().filter(|&&d| d > 0).map(|&d| d - 1).collect()
}

/// `p − 1`: the digits `p(i) − 1`, skipping zeros.
pub fn minus_one(p: &NameStream) -> MinusOne {
    let u = decrement(&p.prefix);
    if p.has_infinite_support() {
        MinusOne::Infinite(NameStream::new(u, decrement(&p.period)).expect("non-zero period"))
    } else {
        MinusOne::Finite(u)
    }
}

/// `p − 1` of a finite word.
pub fn minus_one_word(w: &[Digit]) -> Word {
    decrement(w)
}

/// Embeds a stream by adding one to every digit, a section of [`minus_one`].
pub fn plus_one_embed(q: &NameStream) -> NameStream {
    q.map(|d| d + 1)
}

fn lcm(a: usize, b: usize) -> usize {
    a.lcm(&b)
}

/// Interleaving `⟨p, q⟩`: even positions from `p`, odd positions from `q`.
pub fn pair(p: &NameStream, q: &NameStream) -> NameStream {
    let l = p.prefix.len().max(q.prefix.len());
    let m = lcm(p.period.len(), q.period.len());
    let mut prefix = Word::with_capacity(2 * l);
    for i in 0..l {
        prefix.push(p.digit(i));
        prefix.push(q.digit(i));
    }
    let mut period = Word::with_capacity(2 * m);
    for i in l..l + m {
        period.push(p.digit(i));
        period.push(q.digit(i));
    }
    NameStream::new(prefix, period).expect("non-empty period")
}

/// The stream `n ↦ p(a·n + b)` for `a ≥ 1`.
pub fn project(p: &NameStream, a: usize, b: usize) -> NameStream {
    assert!(a >= 1, "stride must be positive");
    let u = p.prefix.len();
    let head = if u > b { (u - b).div_ceil(a) } else { 0 };
    let len = p.period.len() / p.period.len().gcd(&a);
    let prefix = (0..head).map(|n| p.digit(a * n + b)).collect();
    let period = (head..head + len).map(|n| p.digit(a * n + b)).collect();
    NameStream::new(prefix, period).expect("non-empty period")
}

pub fn project_left(p: &NameStream) -> NameStream {
    project(p, 2, 0)
}

pub fn project_right(p: &NameStream) -> NameStream {
    project(p, 2, 1)
}

/// Cantor pairing `⟨i,j⟩ = (i+j)(i+j+1)/2 + j`.
///
/// # Panics
/// If the result does not fit into a [`Digit`].
pub fn cantor_pair(i: Digit, j: Digit) -> Digit {
    let s = i.checked_add(j).expect("pairing overflow");
    let t = if s % 2 == 0 {
        (s / 2).checked_mul(s + 1)
    } else {
        s.checked_mul((s + 1) / 2)
    };
    t.and_then(|t| t.checked_add(j)).expect("pairing overflow")
}

/// Inverse of [`cantor_pair`].
pub fn cantor_unpair(z: Digit) -> (Digit, Digit) {
    // largest w with w(w+1)/2 <= z
    let mut w = (z.saturating_mul(2)).sqrt();
    loop {
        let t = triangle(w);
        match t {
            Some(t) if t > z => w -= 1,
            None => w -= 1,
            Some(_) => match triangle(w + 1) {
                Some(t1) if t1 <= z => w += 1,
                _ => break,
            },
        }
    }
    let j = z - triangle(w).expect("checked above");
    (w - j, j)
}

fn triangle(w: Digit) -> Option<Digit> {
    if w % 2 == 0 {
        (w / 2).checked_mul(w + 1)
    } else {
        w.checked_mul((w + 1) / 2)
    }
}

pub fn pair_index(i: usize, j: usize) -> usize {
    cantor_pair(i as Digit, j as Digit) as usize
}

pub fn unpair_index(z: usize) -> (usize, usize) {
    let (i, j) = cantor_unpair(z as Digit);
    (i as usize, j as usize)
}

/// A sequence of name streams `(p_0, p_1, ...)` with a finite description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    /// `head` followed by `cycle` repeated forever.
    Listed {
        head: Vec<NameStream>,
        cycle: Vec<NameStream>,
    },
    /// `p_i(j) = s(⟨i,j⟩)` for an eventually periodic `s`.
    Interleaved(NameStream),
}

impl Family {
    pub fn constant(p: NameStream) -> Self {
        Family::Listed {
            head: Vec::new(),
            cycle: alloc::vec![p],
        }
    }

    /// `head` then `tail` forever.
    pub fn switching(head: Vec<NameStream>, tail: NameStream) -> Self {
        Family::Listed {
            head,
            cycle: alloc::vec![tail],
        }
    }

    pub fn listed(head: Vec<NameStream>, cycle: Vec<NameStream>) -> Result<Self, StreamError> {
        if cycle.is_empty() {
            return Err(StreamError::EmptyPeriod);
        }
        Ok(Family::Listed { head, cycle })
    }

    /// `p_i(j)`.
    pub fn entry(&self, i: usize, j: usize) -> Digit {
        match self {
            Family::Listed { head, cycle } => {
                if i < head.len() {
                    head[i].digit(j)
                } else {
                    cycle[(i - head.len()) % cycle.len()].digit(j)
                }
            }
            Family::Interleaved(s) => s.digit(pair_index(i, j)),
        }
    }

    /// The member `p_i` as an eventually periodic stream.
    pub fn member(&self, i: usize) -> NameStream {
        match self {
            Family::Listed { head, cycle } => {
                if i < head.len() {
                    head[i].clone()
                } else {
                    cycle[(i - head.len()) % cycle.len()].clone()
                }
            }
            Family::Interleaved(s) => {
                // ⟨i,j⟩ mod L is periodic in j with period 2L once past the prefix
                let u = s.prefix.len();
                let l = s.period.len();
                let prefix = (0..u).map(|j| self.entry(i, j)).collect();
                let period = (u..u + 2 * l).map(|j| self.entry(i, j)).collect();
                NameStream::new(prefix, period).expect("non-empty period")
            }
        }
    }

    /// The pointwise limit `lim_i p_i`, decided exactly.
    pub fn limit(&self) -> Result<NameStream, StreamError> {
        match self {
            Family::Listed { cycle, .. } => {
                if cycle.iter().all(|c| *c == cycle[0]) {
                    Ok(cycle[0].clone())
                } else {
                    Err(StreamError::NoLimit)
                }
            }
            Family::Interleaved(s) => {
                let u = s.prefix.len();
                let l = s.period.len();
                // residues of m(m+1)/2 mod L repeat with period 2L
                let mut residues: Vec<usize> = (0..2 * l).map(|m| (m * (m + 1) / 2) % l).collect();
                residues.sort_unstable();
                residues.dedup();
                let mut out = Word::with_capacity(l);
                for j in 0..l {
                    let at = |r: usize| s.period[(r + j + l * (u / l + 1) - u) % l];
                    let d = at(residues[0]);
                    if residues.iter().any(|&r| at(r) != d) {
                        return Err(StreamError::NoLimit);
                    }
                    out.push(d);
                }
                NameStream::periodic(out)
            }
        }
    }

    pub fn map(&self, f: impl Fn(Digit) -> Digit + Copy) -> Family {
        match self {
            Family::Listed { head, cycle } => Family::Listed {
                head: head.iter().map(|p| p.map(f)).collect(),
                cycle: cycle.iter().map(|p| p.map(f)).collect(),
            },
            Family::Interleaved(s) => Family::Interleaved(s.map(f)),
        }
    }

    pub fn tupled(&self) -> Tupled<'_> {
        Tupled(self)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Listed { head, cycle } => {
                write!(f, "[")?;
                for (i, p) in head.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, " | ")?;
                for (i, p) in cycle.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, "]")
            }
            Family::Interleaved(s) => write!(f, "<{s}>"),
        }
    }
}

impl FromStr for Family {
    type Err = StreamError;

    /// `"[u;v u;v | u;v ...]"` for listed families, `"<u;v>"` for a stream
    /// read through the pairing.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('<').and_then(|t| t.strip_suffix('>')) {
            return Ok(Family::Interleaved(inner.parse()?));
        }
        let inner = s
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| StreamError::Syntax(alloc::format!("bad family literal {s:?}")))?;
        let (h, c) = inner
            .split_once('|')
            .ok_or_else(|| StreamError::Syntax(alloc::format!("missing '|' in {s:?}")))?;
        let parse = |t: &str| -> Result<Vec<NameStream>, StreamError> {
            t.split_whitespace().map(str::parse).collect()
        };
        Family::listed(parse(h)?, parse(c)?)
    }
}

/// The tupling `⟨p_0, p_1, ...⟩` with `result(⟨i,j⟩) = p_i(j)`.
#[derive(Debug, Clone, Copy)]
pub struct Tupled<'a>(pub &'a Family);

impl Digits for Tupled<'_> {
    fn digit(&self, n: usize) -> Digit {
        let (i, j) = unpair_index(n);
        self.0.entry(i, j)
    }
}

/// Builds the tupling of a family.
pub fn tuple_infinite(ps: &Family) -> Tupled<'_> {
    ps.tupled()
}

/// Component `i` of a tupled stream.
pub fn project_component<D: Digits>(t: &D, i: usize, n: usize) -> Word {
    (0..n).map(|j| t.digit(pair_index(i, j))).collect()
}

/// A stream given by a digit function, for step-bounded runs only.
#[derive(Clone)]
pub struct Generated(pub Arc<dyn Fn(usize) -> Digit + Send + Sync>);

impl Generated {
    pub fn new(f: impl Fn(usize) -> Digit + Send + Sync + 'static) -> Self {
        Generated(Arc::new(f))
    }
}

impl fmt::Debug for Generated {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Generated(..)")
    }
}

impl Digits for Generated {
    fn digit(&self, i: usize) -> Digit {
        (self.0)(i)
    }
}

/// Interleaving of two digit sources.
#[derive(Clone, Copy)]
pub struct Interleave<A, B>(pub A, pub B);

impl<A: Digits, B: Digits> Digits for Interleave<A, B> {
    fn digit(&self, i: usize) -> Digit {
        if i % 2 == 0 {
            self.0.digit(i / 2)
        } else {
            self.1.digit(i / 2)
        }
    }
}

/// A finite word read as a stream padded with zeros.
#[derive(Clone, Copy)]
pub struct ZeroPadded<'a>(pub &'a [Digit]);

impl Digits for ZeroPadded<'_> {
    fn digit(&self, i: usize) -> Digit {
        self.0.get(i).copied().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn s(t: &str) -> NameStream {
        t.parse().unwrap()
    }

    #[test]
    fn canonical_form() {
        assert_eq!(s("1,2,1,2;1,2"), s(";1,2"));
        assert_eq!(s("3,0,0;0,0"), s("3;0"));
        assert_eq!(s("1;2,1"), s(";1,2"));
        assert_eq!(s("5;1,1,1").period(), &[1]);
        assert_eq!(s("2,0,4,1;0").to_string(), "2,0,4,1;0");
    }

    #[test]
    fn literal_errors() {
        assert!("1,2".parse::<NameStream>().is_err());
        assert!("1;".parse::<NameStream>().is_err());
        assert!("1;a".parse::<NameStream>().is_err());
        assert!("1;2;3".parse::<NameStream>().is_err());
    }

    #[test]
    fn minus_one_examples() {
        assert_eq!(minus_one(&s("2,0,4,1;0")), MinusOne::Finite(vec![1, 3, 0]));
        assert_eq!(minus_one(&s(";0")), MinusOne::Finite(vec![]));
        assert_eq!(minus_one(&s("3;1,2")), MinusOne::Infinite(s("2;0,1")));
    }

    #[test]
    fn minus_one_matches_unfolding() {
        // 20 digits of (3)(1,2)^ω minus one, then re-read
        let p = s("3;1,2");
        let unfolded: Word = minus_one_word(&p.take(20));
        let q = minus_one(&p);
        assert_eq!(q.stream().unwrap().take(unfolded.len()), unfolded);
    }

    #[test]
    fn plus_one_examples() {
        assert_eq!(plus_one_embed(&s(";0")), s(";1"));
        assert_eq!(plus_one_embed(&s("2;0,1")), s("3;1,2"));
    }

    #[test]
    fn pair_examples() {
        assert_eq!(pair(&s(";0"), &s(";1")), s(";0,1"));
        let p = pair(&s(";1,2"), &s(";0"));
        assert_eq!(p.take(8), vec![1, 0, 2, 0, 1, 0, 2, 0]);
        assert_eq!(p, s(";1,0,2,0"));
    }

    #[test]
    fn cantor_pairing_values() {
        assert_eq!(cantor_pair(0, 0), 0);
        assert_eq!(cantor_pair(1, 0), 1);
        assert_eq!(cantor_pair(0, 1), 2);
        assert_eq!(cantor_pair(2, 0), 3);
        assert_eq!(cantor_pair(3, 4), 32);
        for i in 0..=50u128 {
            for j in 0..=50u128 {
                assert_eq!(cantor_unpair(cantor_pair(i, j)), (i, j));
            }
        }
        let big = cantor_pair(1 << 62, 12345);
        assert_eq!(cantor_unpair(big), (1 << 62, 12345));
    }

    #[test]
    fn tuple_examples() {
        let c = Family::constant(s(";0"));
        assert!(c.tupled().take(30).iter().all(|&d| d == 0));
        let f = Family::switching(vec![s(";1")], s(";2"));
        let t = f.tupled();
        for n in 0..20 {
            let (i, _) = unpair_index(n);
            assert_eq!(t.digit(n) == 1, i == 0, "position {n}");
        }
        assert_eq!(project_component(&t, 0, 5), vec![1; 5]);
        assert_eq!(project_component(&t, 3, 5), vec![2; 5]);
    }

    #[test]
    fn limits() {
        let f = Family::switching(vec![s(";3"); 4], s(";9"));
        assert_eq!(f.limit().unwrap(), s(";9"));
        let alt = Family::listed(vec![], vec![s(";0"), s(";1")]).unwrap();
        assert_eq!(alt.limit(), Err(StreamError::NoLimit));
        assert_eq!(Family::Interleaved(s("4,4;7")).limit().unwrap(), s(";7"));
        assert_eq!(
            Family::Interleaved(s(";0,1")).limit(),
            Err(StreamError::NoLimit)
        );
    }

    #[test]
    fn interleaved_limit_matches_brute_force() {
        let samples = [
            "1;0,1,1",
            ";1,0",
            "2,0;1,1,0,1",
            ";0,0,1",
            "1,1;0,1,0,0,1,0",
        ];
        for t in samples {
            let f = Family::Interleaved(s(t));
            // brute force: a component is eventually constant over i in [200, 400)
            let brute: Option<Word> = (0..12)
                .map(|j| {
                    let d = f.entry(200, j);
                    (200..400).all(|i| f.entry(i, j) == d).then_some(d)
                })
                .collect();
            match f.limit() {
                Ok(l) => assert_eq!(Some(l.take(12)), brute, "{t}"),
                Err(_) => assert!(brute.is_none(), "{t}"),
            }
        }
    }

    #[test]
    fn interleaved_members_are_exact() {
        let f = Family::Interleaved(s("3,1;0,2,1"));
        for i in 0..6 {
            let m = f.member(i);
            for j in 0..40 {
                assert_eq!(m.digit(j), f.entry(i, j));
            }
        }
    }

    #[test]
    fn family_literals() {
        let f: Family = "[;3 ;3 | ;9]".parse().unwrap();
        assert_eq!(f.limit().unwrap(), s(";9"));
        let g: Family = "<1;0>".parse().unwrap();
        assert_eq!(g, Family::Interleaved(s("1;0")));
    }
}
