//! Multivalued problems on the eventually periodic fragment: domain tests,
//! output checkers and canonical solvers.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_traits::Zero;

use crate::spaces::{
    completion, make_space, ClosedSet, Name, Point, Representation, Space, SpaceError, Q,
};
use crate::streams::{pair, Digit, Digits, NameStream};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProblemError {
    UnknownProblem(String),
    SortMismatch(String),
    OutsideDomain(String),
    Space(SpaceError),
}

impl fmt::Display for ProblemError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProblemError::UnknownProblem(s) => write!(f, "unknown problem {s:?}"),
            ProblemError::SortMismatch(s) => write!(f, "sort mismatch: {s}"),
            ProblemError::OutsideDomain(s) => write!(f, "input outside the domain: {s}"),
            ProblemError::Space(e) => write!(f, "{e}"),
        }
    }
}

impl From<SpaceError> for ProblemError {
    fn from(e: SpaceError) -> Self {
        ProblemError::Space(e)
    }
}

/// The catalog entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Base {
    Lpo,
    LpoS,
    /// Identity on Baire space; its jump is `lim`.
    Id,
    LimN,
    Sort,
    Wbwt2,
    Bwt2,
    Neg,
    Inf,
    InfS,
    ChoiceFin(u32),
    ChoiceN,
    /// `C_ℕ` over the range coding of `A_-(ℕ)`.
    ChoiceNRange,
    /// `K_ℕ := C₂*`.
    KN,
    Choice2N,
    PChoice2N,
    ConCI,
    PCCI,
    ChoiceNN,
    Wft,
    WftS,
}

impl Base {
    pub const ALL: [Base; 20] = [
        Base::Lpo,
        Base::LpoS,
        Base::Id,
        Base::LimN,
        Base::Sort,
        Base::Wbwt2,
        Base::Bwt2,
        Base::Neg,
        Base::Inf,
        Base::InfS,
        Base::ChoiceN,
        Base::ChoiceNRange,
        Base::KN,
        Base::Choice2N,
        Base::PChoice2N,
        Base::ConCI,
        Base::PCCI,
        Base::ChoiceNN,
        Base::Wft,
        Base::WftS,
    ];

    pub fn name(&self) -> String {
        match self {
            Base::Lpo => "LPO".into(),
            Base::LpoS => "LPO_S".into(),
            Base::Id => "id".into(),
            Base::LimN => "limN".into(),
            Base::Sort => "SORT".into(),
            Base::Wbwt2 => "WBWT2".into(),
            Base::Bwt2 => "BWT2".into(),
            Base::Neg => "NEG".into(),
            Base::Inf => "INF".into(),
            Base::InfS => "INF_S".into(),
            Base::ChoiceFin(n) => alloc::format!("C_fin({n})"),
            Base::ChoiceN => "C_N".into(),
            Base::ChoiceNRange => "C_N/range".into(),
            Base::KN => "K_N".into(),
            Base::Choice2N => "C_2N".into(),
            Base::PChoice2N => "PC_2N".into(),
            Base::ConCI => "ConC_I".into(),
            Base::PCCI => "PCC_I".into(),
            Base::ChoiceNN => "C_NN".into(),
            Base::Wft => "WFT".into(),
            Base::WftS => "WFT_S".into(),
        }
    }

    pub fn input_space(&self) -> Space {
        let closed = |s: Space| Space::Closed(Box::new(s));
        match self {
            Base::Lpo | Base::LpoS | Base::Id | Base::LimN | Base::Inf | Base::InfS => Space::Baire,
            Base::Sort | Base::Wbwt2 | Base::Bwt2 => Space::Cantor,
            Base::Neg | Base::Choice2N | Base::PChoice2N => closed(Space::Cantor),
            Base::ChoiceFin(n) => closed(Space::Finite(*n)),
            Base::ChoiceN => closed(Space::Naturals),
            Base::ChoiceNRange => Space::ClosedRange,
            Base::KN => Space::Star(Box::new(closed(Space::Finite(2)))),
            Base::ConCI | Base::PCCI => closed(Space::UnitInterval),
            Base::ChoiceNN | Base::Wft | Base::WftS => closed(Space::Baire),
        }
    }

    pub fn output_space(&self) -> Space {
        match self {
            Base::Lpo | Base::Bwt2 | Base::Neg | Base::Inf | Base::Wft => Space::Finite(2),
            Base::LpoS | Base::InfS | Base::WftS => Space::Sierpinski,
            Base::Id | Base::ChoiceNN => Space::Baire,
            Base::LimN | Base::ChoiceN | Base::ChoiceNRange => Space::Naturals,
            Base::Sort | Base::Wbwt2 | Base::Choice2N | Base::PChoice2N => Space::Cantor,
            Base::ChoiceFin(n) => Space::Finite(*n),
            Base::KN => Space::Star(Box::new(Space::Finite(2))),
            Base::ConCI | Base::PCCI => Space::UnitInterval,
        }
    }

    fn in_domain(&self, x: &Point) -> bool {
        match (self, x) {
            (Base::LimN, Point::Stream(p)) => p.period().len() == 1,
            (
                Base::ChoiceFin(_)
                | Base::ChoiceN
                | Base::ChoiceNRange
                | Base::Choice2N
                | Base::ChoiceNN,
                Point::Set(a),
            ) => !a.is_empty(),
            (Base::PChoice2N, Point::Set(a)) => a.measure().is_some_and(|m| m > Q::zero()),
            (Base::ConCI, Point::Set(a)) => a.is_connected_nonempty(),
            (Base::PCCI, Point::Set(ClosedSet::Intervals(c))) => c.len() == 1 && c[0].0 < c[0].1,
            (Base::KN, Point::Tuple(v)) => v
                .iter()
                .all(|a| matches!(a, Point::Set(s) if !s.is_empty())),
            (Base::LimN | Base::ChoiceFin(_) | Base::ChoiceN | Base::ChoiceNRange, _) => false,
            (
                Base::Choice2N
                | Base::PChoice2N
                | Base::ConCI
                | Base::PCCI
                | Base::ChoiceNN
                | Base::KN,
                _,
            ) => false,
            _ => true,
        }
    }

    fn solve(&self, x: &Point) -> Option<Point> {
        let stream = || match x {
            Point::Stream(p) => Some(p),
            _ => None,
        };
        let set = || match x {
            Point::Set(a) => Some(a),
            _ => None,
        };
        let bit = |b: bool| Point::Nat(b as Digit);
        Some(match self {
            Base::Lpo | Base::LpoS => bit(!stream()?.range().contains(&0)),
            Base::Id => x.clone(),
            Base::LimN => Point::Nat(stream()?.period()[0]),
            Base::Sort => Point::Stream(sort_stream(stream()?)),
            Base::Wbwt2 => Point::Stream(NameStream::constant(cluster_points(stream()?)[0])),
            Base::Bwt2 => Point::Nat(cluster_points(stream()?)[0]),
            Base::Neg => bit(set()?.measure()? == Q::zero()),
            Base::Inf | Base::InfS => bit(stream()?.period().contains(&0)),
            Base::Wft | Base::WftS => bit(set()?.is_empty()),
            Base::KN => match x {
                Point::Tuple(v) => Point::Tuple(
                    v.iter()
                        .map(|a| match a {
                            Point::Set(s) => s.least(),
                            _ => None,
                        })
                        .collect::<Option<Vec<_>>>()?,
                ),
                _ => return None,
            },
            _ => set()?.least()?,
        })
    }

    fn check(&self, x: &Point, y: &Point) -> bool {
        match self {
            Base::Wbwt2 => match (x, y) {
                (Point::Stream(p), Point::Stream(q)) => {
                    q.period().len() == 1 && cluster_points(p).contains(&q.period()[0])
                }
                _ => false,
            },
            Base::Bwt2 => match (x, y) {
                (Point::Stream(p), Point::Nat(c)) => cluster_points(p).contains(c),
                _ => false,
            },
            Base::KN => match (x, y) {
                (Point::Tuple(a), Point::Tuple(b)) => {
                    a.len() == b.len()
                        && a.iter()
                            .zip(b)
                            .all(|(s, y)| matches!(s, Point::Set(s) if s.contains(y)))
                }
                _ => false,
            },
            Base::ChoiceFin(_)
            | Base::ChoiceN
            | Base::ChoiceNRange
            | Base::Choice2N
            | Base::PChoice2N
            | Base::ConCI
            | Base::PCCI
            | Base::ChoiceNN => match x {
                Point::Set(a) => a.contains(y),
                _ => false,
            },
            _ => self.solve(x).as_ref() == Some(y),
        }
    }

    fn answers(&self, x: &Point, limit: usize) -> Vec<Point> {
        let mut out = match (self, x) {
            (Base::Wbwt2, Point::Stream(p)) => {
                let mut v = Vec::new();
                for c in cluster_points(p) {
                    for w in [&[][..], &[0], &[1], &[1, 0], &[0, 1]] {
                        let mut q = w.to_vec();
                        q.push(c);
                        v.push(Point::Stream(NameStream::padded(&q, c)));
                    }
                }
                v
            }
            (Base::Bwt2, Point::Stream(p)) => {
                cluster_points(p).into_iter().map(Point::Nat).collect()
            }
            (Base::KN, Point::Tuple(v)) => {
                let mut acc = vec![Vec::new()];
                for a in v {
                    let Point::Set(s) = a else { return Vec::new() };
                    let mut next = Vec::new();
                    for prefix in &acc {
                        for m in s.sample_members(2) {
                            let mut t: Vec<Point> = prefix.clone();
                            t.push(m);
                            next.push(t);
                        }
                    }
                    next.truncate(limit);
                    acc = next;
                }
                acc.into_iter().map(Point::Tuple).collect()
            }
            (_, Point::Set(a))
                if self.output_space() != Space::Finite(2)
                    && self.output_space() != Space::Sierpinski =>
            {
                a.sample_members(limit)
            }
            _ => self.solve(x).into_iter().collect(),
        };
        out.retain(|y| self.check(x, y));
        out.truncate(limit);
        out
    }
}

/// Digits occurring infinitely often in an eventually periodic stream.
pub fn cluster_points(p: &NameStream) -> Vec<Digit> {
    let mut v = p.period().to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// `0^k 1^ω` when the binary stream has exactly `k` zeros, `0^ω` otherwise.
pub fn sort_stream(p: &NameStream) -> NameStream {
    if p.period().contains(&0) {
        NameStream::constant(0)
    } else {
        let k = p.prefix().iter().filter(|&&d| d == 0).count();
        NameStream::padded(&vec![0; k], 1)
    }
}

/// A problem term: a catalog entry under completion, totalization and jump.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Problem {
    Base(Base),
    Bar(Box<Problem>),
    T(Box<Problem>),
    Jump(Box<Problem>),
}

/// Some points of a space, used as off-domain answers.
pub fn default_points(r: &Representation) -> Vec<Point> {
    match r {
        Representation::Completion(inner) => {
            let mut v = vec![Point::Bottom];
            v.extend(default_points(inner));
            v
        }
        Representation::Precompletion(inner) | Representation::Jump(inner) => default_points(inner),
        Representation::Base(s) => match s {
            Space::Finite(n) => (0..*n as Digit).map(Point::Nat).collect(),
            Space::Naturals => (0..3).map(Point::Nat).collect(),
            Space::Sierpinski => vec![Point::Nat(0), Point::Nat(1)],
            Space::Cantor => vec![
                Point::Stream(NameStream::constant(0)),
                Point::Stream(NameStream::constant(1)),
            ],
            Space::Baire => vec![
                Point::Stream(NameStream::constant(0)),
                Point::Stream(NameStream::constant(3)),
            ],
            Space::UnitInterval => vec![Point::Rational(Q::zero()), Point::Rational(Q::new(1, 2))],
            Space::Star(_) => vec![Point::Tuple(vec![])],
            Space::Closed(_) | Space::ClosedRange => Representation::Base(s.clone())
                .decode_ep(&NameStream::constant(0))
                .into_iter()
                .collect(),
        },
    }
}

impl Problem {
    pub fn base(b: Base) -> Problem {
        Problem::Base(b)
    }

    pub fn bar(self) -> Problem {
        Problem::Bar(Box::new(self))
    }

    pub fn total(self) -> Problem {
        Problem::T(Box::new(self))
    }

    pub fn jump(self) -> Problem {
        Problem::Jump(Box::new(self))
    }

    pub fn input_rep(&self) -> Representation {
        match self {
            Problem::Base(b) => make_space(b.input_space()).expect("catalog spaces are valid"),
            Problem::Bar(p) => completion(&p.input_rep()),
            Problem::T(p) => p.input_rep(),
            Problem::Jump(p) => Representation::Jump(Box::new(p.input_rep())),
        }
    }

    pub fn output_rep(&self) -> Representation {
        match self {
            Problem::Base(b) => make_space(b.output_space()).expect("catalog spaces are valid"),
            Problem::Bar(p) => completion(&p.output_rep()),
            Problem::T(p) | Problem::Jump(p) => p.output_rep(),
        }
    }

    /// Decodes an input name; `None` if it names no point of the input space.
    pub fn input_point(&self, x: &Name) -> Option<Point> {
        self.input_rep().decode_name(x)
    }

    pub fn in_domain(&self, x: &Point) -> bool {
        match self {
            Problem::Base(b) => b.in_domain(x),
            // the completion is total
            Problem::Bar(_) => true,
            // every point of the input space
            Problem::T(_) => true,
            Problem::Jump(p) => p.in_domain(x),
        }
    }

    fn sort_ok(&self, y: &Point) -> bool {
        fn ok(r: &Representation, y: &Point) -> bool {
            match (r, y) {
                (Representation::Completion(_), Point::Bottom) => true,
                (
                    Representation::Completion(i)
                    | Representation::Precompletion(i)
                    | Representation::Jump(i),
                    y,
                ) => ok(i, y),
                (Representation::Base(s), y) => matches!(
                    (s, y),
                    (
                        Space::Finite(_) | Space::Naturals | Space::Sierpinski,
                        Point::Nat(_)
                    ) | (Space::Cantor | Space::Baire, Point::Stream(_))
                        | (Space::UnitInterval, Point::Rational(_))
                        | (Space::Closed(_) | Space::ClosedRange, Point::Set(_))
                        | (Space::Star(_), Point::Tuple(_))
                ),
            }
        }
        ok(&self.output_rep(), y)
    }

    /// Exact output check for an input point.
    pub fn check(&self, x: &Point, y: &Point) -> Result<bool, ProblemError> {
        if !self.sort_ok(y) {
            return Err(ProblemError::SortMismatch(alloc::format!("{y} for {self}")));
        }
        Ok(match self {
            Problem::Base(b) => b.check(x, y),
            Problem::Bar(p) => {
                if *x == Point::Bottom || !p.in_domain(x) {
                    true
                } else {
                    *y != Point::Bottom && p.check(x, y)?
                }
            }
            Problem::T(p) => !p.in_domain(x) || p.check(x, y)?,
            Problem::Jump(p) => p.check(x, y)?,
        })
    }

    /// The canonical (least) answer.
    pub fn solve(&self, x: &Point) -> Result<Point, ProblemError> {
        let outside = || ProblemError::OutsideDomain(alloc::format!("{x} for {self}"));
        match self {
            Problem::Base(b) => {
                if !b.in_domain(x) {
                    return Err(outside());
                }
                b.solve(x).ok_or_else(outside)
            }
            Problem::Bar(p) => {
                if *x == Point::Bottom || !p.in_domain(x) {
                    Ok(Point::Bottom)
                } else {
                    p.solve(x)
                }
            }
            Problem::T(p) => {
                if p.in_domain(x) {
                    p.solve(x)
                } else {
                    Ok(default_points(&p.output_rep()).remove(0))
                }
            }
            Problem::Jump(p) => p.solve(x),
        }
    }

    /// Several valid answers, for adversarial oracle sampling.
    pub fn answers(&self, x: &Point, limit: usize) -> Vec<Point> {
        let mut out = match self {
            Problem::Base(b) => {
                if b.in_domain(x) {
                    b.answers(x, limit)
                } else {
                    Vec::new()
                }
            }
            Problem::Bar(p) => {
                if *x == Point::Bottom || !p.in_domain(x) {
                    default_points(&self.output_rep())
                } else {
                    p.answers(x, limit)
                }
            }
            Problem::T(p) => {
                if p.in_domain(x) {
                    p.answers(x, limit)
                } else {
                    default_points(&p.output_rep())
                }
            }
            Problem::Jump(p) => p.answers(x, limit),
        };
        out.truncate(limit);
        out
    }

    /// The canonical name of an answer followed by alternative names.
    pub fn encode_output(&self, y: &Point) -> Result<Vec<Name>, ProblemError> {
        let r = self.output_rep();
        let canon = r.encode(y)?;
        let mut out = vec![canon.clone()];
        match &r {
            Representation::Completion(_) | Representation::Precompletion(_) => {
                let mut padded = vec![0, 0, 0];
                padded.extend_from_slice(canon.prefix());
                out.push(
                    NameStream::new(padded, canon.period().to_vec()).expect("non-empty period"),
                );
                out.push(pair(&canon, &NameStream::constant(0)));
            }
            Representation::Base(Space::Finite(_) | Space::Naturals | Space::UnitInterval) => {
                out.push(NameStream::new(vec![canon.digit(0)], vec![7]).expect("non-empty period"));
            }
            Representation::Base(Space::Sierpinski) if canon.digit(0) != 0 => {
                out.push(NameStream::new(vec![0, 0, 2], vec![0]).expect("non-empty period"));
            }
            _ => {}
        }
        out.dedup();
        Ok(out.into_iter().map(Name::Stream).collect())
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Problem::Jump(p) if **p == Problem::Base(Base::Id) => write!(f, "lim"),
            Problem::Base(b) => write!(f, "{}", b.name()),
            Problem::Bar(p) => write!(f, "bar({p})"),
            Problem::T(p) => write!(f, "T({p})"),
            Problem::Jump(p) => write!(f, "{p}'"),
        }
    }
}

fn parse_base(s: &str) -> Option<Problem> {
    let b = match s {
        "LPO" => Base::Lpo,
        "LPO_S" => Base::LpoS,
        "id" => Base::Id,
        "lim" => return Some(Problem::Base(Base::Id).jump()),
        "limN" => Base::LimN,
        "SORT" => Base::Sort,
        "WBWT2" => Base::Wbwt2,
        "BWT2" => Base::Bwt2,
        "NEG" => Base::Neg,
        "INF" => Base::Inf,
        "INF_S" => Base::InfS,
        "C_N" => Base::ChoiceN,
        "C_N/range" => Base::ChoiceNRange,
        "K_N" => Base::KN,
        "C_2N" => Base::Choice2N,
        "PC_2N" => Base::PChoice2N,
        "ConC_I" => Base::ConCI,
        "PCC_I" => Base::PCCI,
        "C_NN" => Base::ChoiceNN,
        "WFT" => Base::Wft,
        "WFT_S" => Base::WftS,
        _ => {
            let n = s
                .strip_prefix("C_fin(")
                .and_then(|t| t.strip_suffix(')'))
                .or_else(|| {
                    s.strip_prefix("C_")
                        .filter(|t| t.bytes().all(|c| c.is_ascii_digit()))
                })?;
            Base::ChoiceFin(n.parse().ok()?)
        }
    };
    Some(Problem::Base(b))
}

impl FromStr for Problem {
    type Err = ProblemError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let err = || ProblemError::UnknownProblem(t.into());
        if let Some(inner) = t.strip_suffix('\'') {
            return Ok(inner.parse::<Problem>()?.jump());
        }
        for (head, wrap) in [
            ("bar(", Problem::bar as fn(Problem) -> Problem),
            ("T(", Problem::total),
        ] {
            if let Some(inner) = t.strip_prefix(head).and_then(|r| r.strip_suffix(')')) {
                return Ok(wrap(inner.parse()?));
            }
        }
        parse_base(t).ok_or_else(err)
    }
}

/// All catalog entries, with finite choice for `n ≤ 4`.
pub fn catalog() -> Vec<Problem> {
    let mut v: Vec<Problem> = Base::ALL.iter().map(|b| Problem::Base(*b)).collect();
    v.extend((1..=4).map(|n| Problem::Base(Base::ChoiceFin(n))));
    v.push(Problem::Base(Base::Lpo).jump());
    v.push(Problem::Base(Base::LpoS).jump());
    v.push(Problem::Base(Base::Id).jump());
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{cylinder_code, point_code, Space};
    use alloc::string::ToString;

    fn s(t: &str) -> NameStream {
        t.parse().unwrap()
    }

    fn p(t: &str) -> Problem {
        t.parse().unwrap()
    }

    #[test]
    fn names_round_trip() {
        for t in [
            "LPO",
            "LPO'",
            "bar(C_N)",
            "T(C_2N)",
            "bar(C_N')",
            "lim",
            "C_fin(3)",
            "K_N",
            "T(bar(WBWT2))",
        ] {
            assert_eq!(p(t).to_string(), t);
        }
        assert_eq!(p("C_3"), Problem::Base(Base::ChoiceFin(3)));
        assert!("C_X".parse::<Problem>().is_err());
    }

    #[test]
    fn catalog_examples() {
        let sort = p("SORT");
        assert_eq!(
            sort.solve(&Point::Stream(s("1,1,0;1"))).unwrap(),
            Point::Stream(s("0;1"))
        );
        assert_eq!(
            p("INF").solve(&Point::Stream(s(";0,3"))).unwrap(),
            Point::Nat(1)
        );
        assert_eq!(
            p("LPO").solve(&Point::Stream(s("1,0;4"))).unwrap(),
            Point::Nat(0)
        );
        assert_eq!(
            p("LPO").solve(&Point::Stream(s("2;4"))).unwrap(),
            Point::Nat(1)
        );
    }

    #[test]
    fn membership_examples() {
        let c3 = p("C_fin(3)");
        let set = Point::Set(ClosedSet::Finite {
            size: 3,
            members: vec![1, 2],
        });
        assert!(c3.check(&set, &Point::Nat(2)).unwrap());
        assert!(!c3.check(&set, &Point::Nat(0)).unwrap());
        assert!(p("bar(C_N)").check(&Point::Bottom, &Point::Bottom).unwrap());
        assert!(matches!(
            c3.check(&set, &Point::Rational(Q::zero())),
            Err(ProblemError::SortMismatch(_))
        ));
    }

    #[test]
    fn solver_examples() {
        let cn = p("C_N");
        let a = cn
            .input_point(&Name::Stream(
                NameStream::periodic(vec![point_code(0), point_code(1)]).unwrap(),
            ))
            .unwrap();
        assert_eq!(cn.solve(&a).unwrap(), Point::Nat(2));
        let w = p("WBWT2");
        let y = w.solve(&Point::Stream(s(";0,1"))).unwrap();
        assert_eq!(y, Point::Stream(NameStream::constant(0)));
        let lim = p("lim");
        let fam: Name = "[;1 ;2 | ;5]".parse().unwrap();
        let x = lim.input_point(&fam).unwrap();
        assert_eq!(lim.solve(&x).unwrap(), Point::Stream(s(";5")));
    }

    #[test]
    fn cluster_point_examples() {
        assert_eq!(cluster_points(&s(";0,1")), vec![0, 1]);
        assert_eq!(cluster_points(&s("0,1,1;1")), vec![1]);
        for t in ["0,0,1;1,0", "1;1", "0,1,0,1,1;0,0,1"] {
            let q = s(t);
            let brute: Vec<Digit> = (0..=1)
                .filter(|&d| (0..=200).all(|n| (n..n + 400).any(|i| q.digit(i) == d)))
                .collect();
            assert_eq!(cluster_points(&q), brute);
        }
    }

    #[test]
    fn completion_and_totalization() {
        let empty = Point::Set(ClosedSet::naturals_without([]).clone());
        let none = Point::Set(ClosedSet::Naturals {
            excluded: vec![],
            all: true,
        });
        let bar = p("bar(C_N)");
        assert_eq!(bar.solve(&none).unwrap(), Point::Bottom);
        assert!(bar.check(&none, &Point::Nat(8)).unwrap());
        assert!(!bar.check(&empty, &Point::Bottom).unwrap());
        let t = p("T(C_N)");
        assert!(t.check(&none, &Point::Nat(8)).unwrap());
        assert_eq!(t.solve(&none).unwrap(), Point::Nat(0));
        assert!(p("C_N").solve(&none).is_err());
    }

    #[test]
    fn choice_domains() {
        let c = |w: &[Digit]| cylinder_code(&Space::Cantor, w);
        let pc = p("PC_2N");
        let x = pc
            .input_point(&Name::Stream(
                NameStream::periodic(vec![c(&[0]), c(&[1, 1])]).unwrap(),
            ))
            .unwrap();
        assert!(pc.in_domain(&x));
        assert_eq!(pc.solve(&x).unwrap(), Point::Stream(s("1,0;0")));
        let full = pc
            .input_point(&Name::Stream(
                NameStream::periodic(vec![c(&[0]), c(&[1])]).unwrap(),
            ))
            .unwrap();
        assert!(!pc.in_domain(&full));
        let kn = p("K_N");
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
        assert_eq!(
            kn.solve(&sets).unwrap(),
            Point::Tuple(vec![Point::Nat(1), Point::Nat(0)])
        );
        assert_eq!(kn.answers(&sets, 10).len(), 2);
    }
}
