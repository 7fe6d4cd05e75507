//! Knowledge base: citation-carrying facts, the term universe and forward
//! chaining over the completion laws.

use alloc::borrow::ToOwned;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use hashbrown::{HashMap, HashSet};

use super::term::{parse_term, Binary, Term, Unary, ATOMS};

pub type TermId = u32;
pub type FactId = u32;

/// Default cap on the depth of terms added by closing the universe under completion.
pub const DEPTH_CAP: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Order {
    W,
    SW,
    TW,
    STW,
}

impl Order {
    pub const ALL: [Order; 4] = [Order::W, Order::SW, Order::TW, Order::STW];

    fn ix(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Order::W => "W",
            Order::SW => "SW",
            Order::TW => "TW",
            Order::STW => "STW",
        }
    }

    fn strong(self) -> bool {
        matches!(self, Order::SW | Order::STW)
    }

    fn total(self) -> bool {
        matches!(self, Order::TW | Order::STW)
    }

    fn with(strong: bool, total: bool) -> Order {
        match (strong, total) {
            (false, false) => Order::W,
            (true, false) => Order::SW,
            (false, true) => Order::TW,
            (true, true) => Order::STW,
        }
    }
}

impl FromStr for Order {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Order::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| format!("unknown order {s:?}"))
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pred {
    Complete,
    StronglyComplete,
    CoComplete,
    StronglyCoComplete,
    CoTotal,
    StronglyCoTotal,
    Diverse,
    SingleValuedNonconstant,
    Pointed,
    Idempotent,
    Cylinder,
    TotalFractal,
}

impl Pred {
    pub const ALL: [Pred; 12] = [
        Pred::Complete,
        Pred::StronglyComplete,
        Pred::CoComplete,
        Pred::StronglyCoComplete,
        Pred::CoTotal,
        Pred::StronglyCoTotal,
        Pred::Diverse,
        Pred::SingleValuedNonconstant,
        Pred::Pointed,
        Pred::Idempotent,
        Pred::Cylinder,
        Pred::TotalFractal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Pred::Complete => "complete",
            Pred::StronglyComplete => "strongly_complete",
            Pred::CoComplete => "co_complete",
            Pred::StronglyCoComplete => "strongly_co_complete",
            Pred::CoTotal => "co_total",
            Pred::StronglyCoTotal => "strongly_co_total",
            Pred::Diverse => "diverse",
            Pred::SingleValuedNonconstant => "single_valued_nonconstant",
            Pred::Pointed => "pointed",
            Pred::Idempotent => "idempotent",
            Pred::Cylinder => "cylinder",
            Pred::TotalFractal => "total_fractal",
        }
    }

    /// Reads `[not_]name` into a polarity and a predicate.
    pub fn parse(s: &str) -> Option<(bool, Pred)> {
        let (pos, name) = match s.strip_prefix("not_") {
            Some(rest) => (false, rest),
            None => (true, s),
        };
        Pred::ALL.into_iter().find(|p| p.name() == name).map(|p| (pos, p))
    }

    fn complete(strong: bool) -> Pred {
        if strong {
            Pred::StronglyComplete
        } else {
            Pred::Complete
        }
    }

    fn co_complete(strong: bool) -> Pred {
        if strong {
            Pred::StronglyCoComplete
        } else {
            Pred::CoComplete
        }
    }

    fn co_total(strong: bool) -> Pred {
        if strong {
            Pred::StronglyCoTotal
        } else {
            Pred::CoTotal
        }
    }
}

/// A statement over terms, as written in a knowledge base file.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Claim {
    Red { pos: bool, order: Order, lhs: Term, rhs: Term },
    Pred { pos: bool, pred: Pred, term: Term },
}

impl Claim {
    pub fn le(order: Order, lhs: Term, rhs: Term) -> Claim {
        Claim::Red { pos: true, order, lhs, rhs }
    }

    pub fn nle(order: Order, lhs: Term, rhs: Term) -> Claim {
        Claim::Red { pos: false, order, lhs, rhs }
    }

    fn terms(&self) -> Vec<&Term> {
        match self {
            Claim::Red { lhs, rhs, .. } => vec![lhs, rhs],
            Claim::Pred { term, .. } => vec![term],
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Claim::Red { pos, order, lhs, rhs } => {
                let rel = if *pos { "<=" } else { "</=" };
                write!(f, "{lhs} {rel}{order} {rhs}")
            }
            Claim::Pred { pos, pred, term } => {
                let not = if *pos { "" } else { "not_" };
                write!(f, "{not}{}({term})", pred.name())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseFact {
    pub claim: Claim,
    pub citation: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KbError {
    Parse { line: usize, msg: String },
    UnknownAtom(String),
    Contradiction(Contradiction),
}

impl fmt::Display for KbError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KbError::Parse { line, msg } => write!(f, "line {line}: {msg}"),
            KbError::UnknownAtom(a) => write!(f, "unknown atom {a:?}"),
            KbError::Contradiction(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contradiction {
    pub positive: Trace,
    pub negative: Trace,
}

impl fmt::Display for Contradiction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "contradiction")?;
        writeln!(f, "positive derivation:\n{}", self.positive)?;
        write!(f, "negative derivation:\n{}", self.negative)
    }
}

// ---------------------------------------------------------------------------
// universe

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Node {
    Atom(u32),
    Un(Unary, TermId),
    Bin(Binary, TermId, TermId),
}

#[derive(Debug, Clone, Default)]
pub struct Universe {
    atoms: Vec<String>,
    atom_ix: HashMap<String, u32>,
    nodes: Vec<Node>,
    ix: HashMap<Node, TermId>,
    depth: Vec<usize>,
    parents: Vec<Vec<TermId>>,
}

impl Universe {
    fn new(atoms: &[String]) -> Universe {
        let mut u = Universe::default();
        for a in atoms {
            if !u.atom_ix.contains_key(a) {
                u.atom_ix.insert(a.clone(), u.atoms.len() as u32);
                u.atoms.push(a.clone());
            }
        }
        u
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: TermId) -> Node {
        self.nodes[id as usize]
    }

    fn add(&mut self, node: Node) -> TermId {
        if let Some(&id) = self.ix.get(&node) {
            return id;
        }
        let id = self.nodes.len() as TermId;
        let depth = match node {
            Node::Atom(_) => 1,
            Node::Un(_, a) => 1 + self.depth[a as usize],
            Node::Bin(_, a, b) => 1 + self.depth[a as usize].max(self.depth[b as usize]),
        };
        self.nodes.push(node);
        self.ix.insert(node, id);
        self.depth.push(depth);
        self.parents.push(Vec::new());
        match node {
            Node::Atom(_) => {}
            Node::Un(_, a) => self.parents[a as usize].push(id),
            Node::Bin(_, a, b) => {
                self.parents[a as usize].push(id);
                if b != a {
                    self.parents[b as usize].push(id);
                }
            }
        }
        id
    }

    fn intern(&mut self, t: &Term) -> Result<TermId, KbError> {
        let node = match t {
            Term::Atom(a) => Node::Atom(
                *self
                    .atom_ix
                    .get(a.as_str())
                    .ok_or_else(|| KbError::UnknownAtom(a.clone()))?,
            ),
            Term::Un(Unary::Bar, inner) if matches!(**inner, Term::Un(Unary::Bar, _)) => {
                return self.intern(inner)
            }
            Term::Un(op, a) => Node::Un(*op, self.intern(a)?),
            Term::Bin(op, a, b) => Node::Bin(*op, self.intern(a)?, self.intern(b)?),
        };
        Ok(self.add(node))
    }

    pub fn lookup(&self, t: &Term) -> Option<TermId> {
        let node = match t {
            Term::Atom(a) => Node::Atom(*self.atom_ix.get(a.as_str())?),
            Term::Un(Unary::Bar, inner) if matches!(**inner, Term::Un(Unary::Bar, _)) => {
                return self.lookup(inner)
            }
            Term::Un(op, a) => Node::Un(*op, self.lookup(a)?),
            Term::Bin(op, a, b) => Node::Bin(*op, self.lookup(a)?, self.lookup(b)?),
        };
        self.ix.get(&node).copied()
    }

    pub fn term(&self, id: TermId) -> Term {
        match self.node(id) {
            Node::Atom(a) => Term::Atom(self.atoms[a as usize].clone()),
            Node::Un(op, a) => Term::Un(op, alloc::boxed::Box::new(self.term(a))),
            Node::Bin(op, a, b) => Term::bin(op, self.term(a), self.term(b)),
        }
    }

    pub fn show(&self, id: TermId) -> String {
        self.term(id).to_string()
    }

    fn find_un(&self, op: Unary, a: TermId) -> Option<TermId> {
        self.ix.get(&Node::Un(op, a)).copied()
    }

    fn find_bin(&self, op: Binary, a: TermId, b: TermId) -> Option<TermId> {
        self.ix.get(&Node::Bin(op, a, b)).copied()
    }

    /// The completion of `id`, if it lies in the universe.
    pub fn bar(&self, id: TermId) -> Option<TermId> {
        match self.node(id) {
            Node::Un(Unary::Bar, _) => Some(id),
            _ => self.find_un(Unary::Bar, id),
        }
    }

    fn un_child(&self, op: Unary, id: TermId) -> Option<TermId> {
        match self.node(id) {
            Node::Un(o, a) if o == op => Some(a),
            _ => None,
        }
    }

    fn is_bar(&self, id: TermId) -> bool {
        self.un_child(Unary::Bar, id).is_some()
    }

    fn atom_named(&self, name: &str) -> Option<TermId> {
        self.ix.get(&Node::Atom(*self.atom_ix.get(name)?)).copied()
    }

    fn close_under_bar(&mut self, cap: usize) {
        for id in 0..self.nodes.len() as TermId {
            if !self.is_bar(id) && self.depth[id as usize] < cap {
                self.add(Node::Un(Unary::Bar, id));
            }
        }
    }
}

// ---------------------------------------------------------------------------
// statements and rules

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stmt {
    Red { pos: bool, order: Order, lhs: TermId, rhs: TermId },
    Pred { pos: bool, pred: Pred, term: TermId },
}

impl Stmt {
    fn le(order: Order, lhs: TermId, rhs: TermId) -> Stmt {
        Stmt::Red { pos: true, order, lhs, rhs }
    }

    fn nle(order: Order, lhs: TermId, rhs: TermId) -> Stmt {
        Stmt::Red { pos: false, order, lhs, rhs }
    }

    fn is(pred: Pred, term: TermId) -> Stmt {
        Stmt::Pred { pos: true, pred, term }
    }

    fn isnt(pred: Pred, term: TermId) -> Stmt {
        Stmt::Pred { pos: false, pred, term }
    }

    pub fn negated(self) -> Stmt {
        match self {
            Stmt::Red { pos, order, lhs, rhs } => Stmt::Red { pos: !pos, order, lhs, rhs },
            Stmt::Pred { pos, pred, term } => Stmt::Pred { pos: !pos, pred, term },
        }
    }

    pub fn positive(self) -> bool {
        match self {
            Stmt::Red { pos, .. } | Stmt::Pred { pos, .. } => pos,
        }
    }
}

/// The inference rules; `Rule(n)` is rule R`n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rule(pub u8);

impl Rule {
    pub fn name(self) -> &'static str {
        match self.0 {
            1 => "reflexivity",
            2 => "transitivity",
            3 => "strong implies plain",
            4 => "partial implies total",
            5 => "total reducibility is reducibility to the completion",
            6 => "f below its completion",
            7 => "completion absorbs the left side",
            8 => "completion is STW-equivalent",
            9 => "completeness",
            10 => "co-completeness",
            11 => "co-totality",
            12 => "diversity",
            13 => "co-complete completion",
            14 => "jumps",
            15 => "monotonicity and lattice laws",
            16 => "depletion",
            17 => "idempotency and completeness",
            18 => "co-total implies co-complete",
            19 => "negative propagation",
            20 => "completion monotone for STW",
            _ => "?",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R{} {}", self.0, self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Why {
    Base(usize),
    Rule(Rule, Vec<FactId>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactRec {
    pub stmt: Stmt,
    pub why: Why,
}

fn mono(op: Node, order: Order) -> bool {
    match op {
        Node::Un(Unary::Hat | Unary::Star, _) | Node::Bin(Binary::Product, _, _) => {
            matches!(order, Order::W | Order::SW)
        }
        Node::Un(Unary::Jump, _) => order == Order::SW,
        Node::Bin(Binary::Compose | Binary::Join | Binary::Meet, _, _) => order == Order::W,
        _ => false,
    }
}

// ---------------------------------------------------------------------------
// saturation

type Adj = Vec<Vec<(TermId, FactId)>>;

#[derive(Debug, Clone)]
pub struct Saturation {
    pub universe: Universe,
    pub facts: Vec<FactRec>,
    index: HashMap<Stmt, FactId>,
    pos_out: [Adj; 4],
    pos_in: [Adj; 4],
    neg_out: [Adj; 4],
    neg_in: [Adj; 4],
    c2: Option<TermId>,
    queue: Vec<FactId>,
    clash: Option<(FactId, FactId)>,
}

struct Emit {
    out: Vec<(Stmt, Rule, Vec<FactId>)>,
}

impl Emit {
    fn push(&mut self, s: Stmt, r: u8, prem: &[FactId]) {
        self.out.push((s, Rule(r), prem.to_vec()));
    }
}

impl Saturation {
    fn new(universe: Universe) -> Saturation {
        let n = universe.len();
        let adj = || core::array::from_fn(|_| vec![Vec::new(); n]);
        let c2 = universe.atom_named("C_2");
        Saturation {
            universe,
            facts: Vec::new(),
            index: HashMap::new(),
            pos_out: adj(),
            pos_in: adj(),
            neg_out: adj(),
            neg_in: adj(),
            c2,
            queue: Vec::new(),
            clash: None,
        }
    }

    pub fn find(&self, s: Stmt) -> Option<FactId> {
        self.index.get(&s).copied()
    }

    pub fn holds(&self, s: Stmt) -> bool {
        self.index.contains_key(&s)
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    fn insert(&mut self, stmt: Stmt, why: Why) {
        if self.clash.is_some() || self.index.contains_key(&stmt) {
            return;
        }
        let id = self.facts.len() as FactId;
        self.facts.push(FactRec { stmt, why });
        self.index.insert(stmt, id);
        if let Stmt::Red { pos, order, lhs, rhs } = stmt {
            let (out, inn) = if pos {
                (&mut self.pos_out, &mut self.pos_in)
            } else {
                (&mut self.neg_out, &mut self.neg_in)
            };
            out[order.ix()][lhs as usize].push((rhs, id));
            inn[order.ix()][rhs as usize].push((lhs, id));
        }
        if let Some(&other) = self.index.get(&stmt.negated()) {
            self.clash = Some(if stmt.positive() { (id, other) } else { (other, id) });
        }
        self.queue.push(id);
    }

    fn axioms(&mut self) {
        let u = &self.universe;
        let mut e = Emit { out: Vec::new() };
        for t in 0..u.len() as TermId {
            for o in Order::ALL {
                e.push(Stmt::le(o, t, t), 1, &[]);
            }
            if let Some(b) = u.bar(t) {
                if b != t {
                    e.push(Stmt::le(Order::SW, t, b), 6, &[]);
                }
                e.push(Stmt::le(Order::STW, b, t), 8, &[]);
            }
            match u.node(t) {
                Node::Un(Unary::Jump, f) => {
                    let jump_of_bar = u.bar(f).and_then(|bf| u.find_un(Unary::Jump, bf));
                    if let (Some(bt), Some(jb)) = (u.bar(t), jump_of_bar) {
                        e.push(Stmt::le(Order::SW, bt, jb), 14, &[]);
                    }
                }
                Node::Bin(Binary::Join, a, b) => {
                    e.push(Stmt::le(Order::W, a, t), 15, &[]);
                    e.push(Stmt::le(Order::W, b, t), 15, &[]);
                }
                Node::Bin(Binary::Meet, a, b) => {
                    e.push(Stmt::le(Order::W, t, a), 15, &[]);
                    e.push(Stmt::le(Order::W, t, b), 15, &[]);
                }
                Node::Bin(Binary::Product, a, b) => {
                    let split = match (u.bar(a), u.bar(b)) {
                        (Some(ba), Some(bb)) => u.find_bin(Binary::Product, ba, bb),
                        _ => None,
                    };
                    if let (Some(bt), Some(p)) = (u.bar(t), split) {
                        e.push(Stmt::le(Order::SW, bt, p), 15, &[]);
                    }
                }
                _ => {}
            }
        }
        for (s, r, p) in e.out {
            self.insert(s, Why::Rule(r, p));
        }
    }

    fn run(&mut self) {
        let mut next = 0;
        while next < self.queue.len() && self.clash.is_none() {
            let id = self.queue[next];
            next += 1;
            let mut e = Emit { out: Vec::new() };
            self.consequences(id, &mut e);
            for (s, r, p) in e.out {
                self.insert(s, Why::Rule(r, p));
            }
        }
        self.queue.clear();
    }

    /// Every rule instance in which fact `id` is a premise and all other
    /// premises are already present.
    fn consequences(&self, id: FactId, e: &mut Emit) {
        let u = &self.universe;
        let has = |s: Stmt| self.find(s);
        match self.facts[id as usize].stmt {
            Stmt::Red { pos: true, order: o, lhs: a, rhs: b } => {
                let oi = o.ix();
                for &(c, f) in &self.pos_out[oi][b as usize] {
                    e.push(Stmt::le(o, a, c), 2, &[id, f]);
                }
                for &(z, f) in &self.pos_in[oi][a as usize] {
                    e.push(Stmt::le(o, z, b), 2, &[f, id]);
                }
                match o {
                    Order::SW => {
                        e.push(Stmt::le(Order::W, a, b), 3, &[id]);
                        e.push(Stmt::le(Order::STW, a, b), 4, &[id]);
                    }
                    Order::STW => e.push(Stmt::le(Order::TW, a, b), 3, &[id]),
                    Order::W => e.push(Stmt::le(Order::TW, a, b), 4, &[id]),
                    Order::TW => {}
                }
                let strong = o.strong();
                if o.total() {
                    if let Some(bb) = u.bar(b) {
                        e.push(Stmt::le(Order::with(strong, false), a, bb), 5, &[id]);
                    }
                } else {
                    if let Some(g) = u.un_child(Unary::Bar, b) {
                        e.push(Stmt::le(Order::with(strong, true), a, g), 5, &[id]);
                        if let Some(ba) = u.bar(a) {
                            if ba != a {
                                e.push(Stmt::le(o, ba, b), 7, &[id]);
                            }
                        }
                        if let Some(cc) = has(Stmt::is(Pred::co_complete(strong), a)) {
                            e.push(Stmt::le(o, a, g), 10, &[cc, id]);
                        }
                        if let Some(n) = has(Stmt::nle(o, a, g)) {
                            e.push(Stmt::isnt(Pred::co_complete(strong), a), 10, &[id, n]);
                        }
                        if let (Some(c2), Node::Bin(Binary::Product, f, k)) = (self.c2, u.node(a)) {
                            if k == c2 {
                                e.push(Stmt::le(o, f, g), 16, &[id]);
                            }
                        }
                    }
                    if u.bar(b) == Some(a) {
                        e.push(Stmt::is(Pred::complete(strong), b), 9, &[id]);
                    }
                    if let Some(g) = u.un_child(Unary::Total, b) {
                        if let Some(ct) = has(Stmt::is(Pred::co_total(strong), a)) {
                            e.push(Stmt::le(o, a, g), 11, &[ct, id]);
                        }
                        if let Some(n) = has(Stmt::nle(o, a, g)) {
                            e.push(Stmt::isnt(Pred::co_total(strong), a), 11, &[id, n]);
                        }
                    }
                }
                // monotonicity in either argument position
                for &p in &u.parents[a as usize] {
                    let node = u.node(p);
                    if !mono(node, o) {
                        continue;
                    }
                    let targets: Vec<Option<TermId>> = match node {
                        Node::Un(op, _) => vec![u.find_un(op, b)],
                        Node::Bin(op, x, y) => {
                            let mut v = Vec::new();
                            if x == a {
                                v.push(u.find_bin(op, b, y));
                            }
                            if y == a {
                                v.push(u.find_bin(op, x, b));
                            }
                            v
                        }
                        Node::Atom(_) => Vec::new(),
                    };
                    for q in targets.into_iter().flatten() {
                        if q != p {
                            e.push(Stmt::le(o, p, q), 15, &[id]);
                        }
                    }
                }
                if o == Order::W {
                    for &p in &u.parents[a as usize] {
                        match u.node(p) {
                            Node::Bin(Binary::Join, x, y) => {
                                let other = if x == a { y } else { x };
                                if let Some(f) = has(Stmt::le(o, other, b)) {
                                    e.push(Stmt::le(o, p, b), 15, &[id, f]);
                                }
                            }
                            _ => {}
                        }
                    }
                    for &p in &u.parents[b as usize] {
                        match u.node(p) {
                            Node::Bin(Binary::Meet, x, y) => {
                                let other = if x == b { y } else { x };
                                if let Some(f) = has(Stmt::le(o, a, other)) {
                                    e.push(Stmt::le(o, a, p), 15, &[id, f]);
                                }
                            }
                            _ => {}
                        }
                    }
                    if Some(a) == self.c2 {
                        if let (Some(n), Some(bb)) = (has(Stmt::isnt(Pred::Complete, b)), u.bar(b)) {
                            e.push(Stmt::isnt(Pred::Idempotent, bb), 17, &[n, id]);
                        }
                    }
                }
                for &(g, n) in &self.neg_out[oi][a as usize] {
                    e.push(Stmt::nle(o, b, g), 19, &[id, n]);
                }
                for &(f, n) in &self.neg_in[oi][b as usize] {
                    e.push(Stmt::nle(o, f, a), 19, &[id, n]);
                }
                if o == Order::STW {
                    if let (Some(ba), Some(bb)) = (u.bar(a), u.bar(b)) {
                        e.push(Stmt::le(o, ba, bb), 20, &[id]);
                    }
                }
            }
            Stmt::Red { pos: false, order: o, lhs: a, rhs: b } => {
                let oi = o.ix();
                for &(h, p) in &self.pos_out[oi][a as usize] {
                    e.push(Stmt::nle(o, h, b), 19, &[p, id]);
                }
                for &(h, p) in &self.pos_in[oi][b as usize] {
                    e.push(Stmt::nle(o, a, h), 19, &[p, id]);
                }
                match o {
                    Order::W => e.push(Stmt::nle(Order::SW, a, b), 19, &[id]),
                    Order::TW => {
                        e.push(Stmt::nle(Order::W, a, b), 19, &[id]);
                        e.push(Stmt::nle(Order::STW, a, b), 19, &[id]);
                    }
                    Order::STW => e.push(Stmt::nle(Order::SW, a, b), 19, &[id]),
                    Order::SW => {}
                }
                let strong = o.strong();
                if o.total() {
                    if let Some(bb) = u.bar(b) {
                        e.push(Stmt::nle(Order::with(strong, false), a, bb), 5, &[id]);
                    }
                    if o == Order::STW {
                        if let (Some(x), Some(y)) =
                            (u.un_child(Unary::Bar, a), u.un_child(Unary::Bar, b))
                        {
                            e.push(Stmt::nle(o, x, y), 19, &[id]);
                        }
                    }
                } else {
                    if let Some(g) = u.un_child(Unary::Bar, b) {
                        e.push(Stmt::nle(Order::with(strong, true), a, g), 5, &[id]);
                    }
                    if u.bar(b) == Some(a) {
                        e.push(Stmt::isnt(Pred::complete(strong), b), 9, &[id]);
                    }
                    if let Some(bb) = u.bar(b) {
                        if let Some(cc) = has(Stmt::is(Pred::co_complete(strong), a)) {
                            e.push(Stmt::nle(o, a, bb), 10, &[cc, id]);
                        }
                        if let Some(p) = has(Stmt::le(o, a, bb)) {
                            e.push(Stmt::isnt(Pred::co_complete(strong), a), 10, &[p, id]);
                        }
                    }
                    if let Some(tb) = u.find_un(Unary::Total, b) {
                        if let Some(ct) = has(Stmt::is(Pred::co_total(strong), a)) {
                            e.push(Stmt::nle(o, a, tb), 11, &[ct, id]);
                        }
                        if let Some(p) = has(Stmt::le(o, a, tb)) {
                            e.push(Stmt::isnt(Pred::co_total(strong), a), 11, &[p, id]);
                        }
                    }
                }
                // contrapositive of monotonicity
                let (na, nb) = (u.node(a), u.node(b));
                if mono(na, o) {
                    let pair = match (na, nb) {
                        (Node::Un(p, x), Node::Un(q, y)) if p == q => Some((x, y)),
                        (Node::Bin(p, x1, x2), Node::Bin(q, y1, y2)) if p == q => {
                            if x2 == y2 {
                                Some((x1, y1))
                            } else if x1 == y1 {
                                Some((x2, y2))
                            } else {
                                None
                            }
                        }
                        _ => None,
                    };
                    if let Some((x, y)) = pair {
                        e.push(Stmt::nle(o, x, y), 19, &[id]);
                    }
                }
            }
            Stmt::Pred { pos: true, pred, term: f } => match pred {
                Pred::Complete | Pred::StronglyComplete => {
                    let strong = pred == Pred::StronglyComplete;
                    let o = Order::with(strong, false);
                    if let Some(bf) = u.bar(f) {
                        e.push(Stmt::le(o, bf, f), 9, &[id]);
                    }
                    if strong {
                        if let Some(j) = u.find_un(Unary::Jump, f) {
                            e.push(Stmt::is(Pred::StronglyComplete, j), 14, &[id]);
                        }
                    }
                }
                Pred::CoComplete | Pred::StronglyCoComplete => {
                    let strong = pred == Pred::StronglyCoComplete;
                    let o = Order::with(strong, false);
                    for &(h, p) in &self.pos_out[o.ix()][f as usize] {
                        if let Some(g) = u.un_child(Unary::Bar, h) {
                            e.push(Stmt::le(o, f, g), 10, &[id, p]);
                        }
                    }
                    for &(g, n) in &self.neg_out[o.ix()][f as usize] {
                        if let Some(bg) = u.bar(g) {
                            e.push(Stmt::nle(o, f, bg), 10, &[id, n]);
                        }
                    }
                    if let Some(g) = u.un_child(Unary::Bar, f) {
                        e.push(Stmt::is(Pred::complete(strong), g), 13, &[id]);
                    }
                }
                Pred::CoTotal | Pred::StronglyCoTotal => {
                    let strong = pred == Pred::StronglyCoTotal;
                    let o = Order::with(strong, false);
                    for &(h, p) in &self.pos_out[o.ix()][f as usize] {
                        if let Some(g) = u.un_child(Unary::Total, h) {
                            e.push(Stmt::le(o, f, g), 11, &[id, p]);
                        }
                    }
                    for &(g, n) in &self.neg_out[o.ix()][f as usize] {
                        if let Some(tg) = u.find_un(Unary::Total, g) {
                            e.push(Stmt::nle(o, f, tg), 11, &[id, n]);
                        }
                    }
                    e.push(Stmt::is(Pred::co_complete(strong), f), 18, &[id]);
                }
                Pred::Diverse | Pred::SingleValuedNonconstant => {
                    e.push(Stmt::is(Pred::StronglyCoComplete, f), 12, &[id]);
                }
                _ => {}
            },
            Stmt::Pred { pos: false, pred, term: f } => match pred {
                Pred::Complete | Pred::StronglyComplete => {
                    let strong = pred == Pred::StronglyComplete;
                    if let Some(bf) = u.bar(f) {
                        e.push(Stmt::nle(Order::with(strong, false), bf, f), 9, &[id]);
                        e.push(Stmt::isnt(Pred::co_complete(strong), bf), 13, &[id]);
                        if !strong {
                            if let Some(c2) = self.c2 {
                                if let Some(p) = has(Stmt::le(Order::W, c2, f)) {
                                    e.push(Stmt::isnt(Pred::Idempotent, bf), 17, &[id, p]);
                                }
                            }
                        }
                    }
                    if strong {
                        if let Some(g) = u.un_child(Unary::Jump, f) {
                            e.push(Stmt::isnt(Pred::StronglyComplete, g), 14, &[id]);
                        }
                    }
                }
                Pred::CoComplete | Pred::StronglyCoComplete => {
                    let strong = pred == Pred::StronglyCoComplete;
                    e.push(Stmt::isnt(Pred::co_total(strong), f), 18, &[id]);
                    if strong {
                        e.push(Stmt::isnt(Pred::Diverse, f), 12, &[id]);
                        e.push(Stmt::isnt(Pred::SingleValuedNonconstant, f), 12, &[id]);
                    }
                }
                _ => {}
            },
        }
    }

    /// Checks that fact `id` is a base fact or an instance of its rule whose
    /// premises come earlier.
    pub fn replays(&self, id: FactId, base: &[Stmt]) -> bool {
        let rec = &self.facts[id as usize];
        match &rec.why {
            Why::Base(i) => base.get(*i) == Some(&rec.stmt),
            Why::Rule(r, prem) => {
                if prem.iter().any(|&p| p >= id) {
                    return false;
                }
                let ps: Vec<Stmt> = prem.iter().map(|&p| self.facts[p as usize].stmt).collect();
                is_instance(&self.universe, self.c2, *r, &ps, rec.stmt)
            }
        }
    }

    /// Fact `id` and everything it depends on, premises first.
    pub fn trace(&self, id: FactId, base: &[BaseFact]) -> Trace {
        let mut seen = HashSet::new();
        let mut stack = vec![id];
        while let Some(f) = stack.pop() {
            if seen.insert(f) {
                if let Why::Rule(_, prem) = &self.facts[f as usize].why {
                    stack.extend(prem.iter().copied());
                }
            }
        }
        let mut ids: Vec<FactId> = seen.into_iter().collect();
        ids.sort_unstable();
        let steps = ids
            .into_iter()
            .map(|f| {
                let rec = &self.facts[f as usize];
                TraceStep {
                    id: f,
                    claim: self.claim(rec.stmt),
                    by: match &rec.why {
                        Why::Base(i) => By::Base(base[*i].citation.clone()),
                        Why::Rule(r, p) => By::Rule(*r, p.clone()),
                    },
                }
            })
            .collect();
        Trace { steps }
    }

    pub fn claim(&self, s: Stmt) -> Claim {
        let u = &self.universe;
        match s {
            Stmt::Red { pos, order, lhs, rhs } => {
                Claim::Red { pos, order, lhs: u.term(lhs), rhs: u.term(rhs) }
            }
            Stmt::Pred { pos, pred, term } => Claim::Pred { pos, pred, term: u.term(term) },
        }
    }

    pub fn stmt(&self, c: &Claim) -> Option<Stmt> {
        stmt_in(&self.universe, c)
    }

    /// Three-valued status of `lhs <=order rhs` on interned terms.
    pub fn status(&self, order: Order, lhs: TermId, rhs: TermId) -> Option<bool> {
        if self.holds(Stmt::le(order, lhs, rhs)) {
            Some(true)
        } else if self.holds(Stmt::nle(order, lhs, rhs)) {
            Some(false)
        } else {
            None
        }
    }
}

fn stmt_in(u: &Universe, c: &Claim) -> Option<Stmt> {
    Some(match c {
        Claim::Red { pos, order, lhs, rhs } => {
            Stmt::Red { pos: *pos, order: *order, lhs: u.lookup(lhs)?, rhs: u.lookup(rhs)? }
        }
        Claim::Pred { pos, pred, term } => Stmt::Pred { pos: *pos, pred: *pred, term: u.lookup(term)? },
    })
}

/// Independent pattern check of one rule application.
fn is_instance(u: &Universe, c2: Option<TermId>, r: Rule, p: &[Stmt], c: Stmt) -> bool {
    use Stmt::{Pred as P, Red as R};
    let bar_child = |t: TermId| u.un_child(Unary::Bar, t);
    let tot_child = |t: TermId| u.un_child(Unary::Total, t);
    let weaker = |s: Order, w: Order| {
        matches!(
            (s, w),
            (Order::SW, Order::W)
                | (Order::STW, Order::TW)
                | (Order::W, Order::TW)
                | (Order::SW, Order::STW)
        )
    };
    match (r.0, p, c) {
        (1, [], R { pos: true, lhs, rhs, .. }) => lhs == rhs,
        (2, [R { pos: true, order: o1, lhs: a, rhs: b1 }, R { pos: true, order: o2, lhs: b2, rhs: c1 }], R { pos: true, order, lhs, rhs }) => {
            o1 == o2 && *o1 == order && b1 == b2 && *a == lhs && *c1 == rhs
        }
        (3, [R { pos: true, order: s, lhs: a, rhs: b }], R { pos: true, order: w, lhs, rhs }) => {
            s.strong() && !w.strong() && s.total() == w.total() && (*a, *b) == (lhs, rhs)
        }
        (4, [R { pos: true, order: s, lhs: a, rhs: b }], R { pos: true, order: w, lhs, rhs }) => {
            !s.total() && w.total() && s.strong() == w.strong() && (*a, *b) == (lhs, rhs)
        }
        (5, [R { pos: p1, order: o1, lhs: a, rhs: b }], R { pos, order, lhs, rhs }) => {
            *p1 == pos
                && *a == lhs
                && o1.strong() == order.strong()
                && o1.total() != order.total()
                && if o1.total() { u.bar(*b) == Some(rhs) } else { bar_child(*b) == Some(rhs) }
        }
        (6, [], R { pos: true, order: Order::SW, lhs, rhs }) => u.bar(lhs) == Some(rhs) && lhs != rhs,
        (7, [R { pos: true, order: o1, lhs: a, rhs: b }], R { pos: true, order, lhs, rhs }) => {
            *o1 == order && !order.total() && bar_child(*b).is_some() && *b == rhs && u.bar(*a) == Some(lhs)
        }
        (8, [], R { pos: true, order: Order::STW, lhs, rhs }) => u.bar(rhs) == Some(lhs),
        (9, [P { pos: pp, pred, term: f }], R { pos, order, lhs, rhs }) => {
            *pp == pos
                && matches!(pred, Pred::Complete | Pred::StronglyComplete)
                && order == Order::with(*pred == Pred::StronglyComplete, false)
                && rhs == *f
                && u.bar(*f) == Some(lhs)
        }
        (9, [R { pos: pp, order, lhs, rhs }], P { pos, pred, term }) => {
            *pp == pos
                && !order.total()
                && pred == Pred::complete(order.strong())
                && *rhs == term
                && u.bar(term) == Some(*lhs)
        }
        (10, [P { pos: true, pred, term: f }, R { pos: true, order, lhs, rhs }], R { pos: true, order: o, lhs: l, rhs: g }) => {
            *pred == Pred::co_complete(order.strong()) && !order.total() && *order == o && *lhs == *f && l == *f && bar_child(*rhs) == Some(g)
        }
        (10, [P { pos: true, pred, term: f }, R { pos: false, order, lhs, rhs: g }], R { pos: false, order: o, lhs: l, rhs }) => {
            *pred == Pred::co_complete(order.strong()) && !order.total() && *order == o && *lhs == *f && l == *f && u.bar(*g) == Some(rhs)
        }
        (10, [R { pos: true, order, lhs, rhs: bg }, R { pos: false, order: o2, lhs: l2, rhs: g }], P { pos: false, pred, term }) => {
            order == o2 && !order.total() && lhs == l2 && *lhs == term && pred == Pred::co_complete(order.strong()) && bar_child(*bg) == Some(*g)
        }
        (11, [P { pos: true, pred, term: f }, R { pos: true, order, lhs, rhs }], R { pos: true, order: o, lhs: l, rhs: g }) => {
            *pred == Pred::co_total(order.strong()) && !order.total() && *order == o && *lhs == *f && l == *f && tot_child(*rhs) == Some(g)
        }
        (11, [P { pos: true, pred, term: f }, R { pos: false, order, lhs, rhs: g }], R { pos: false, order: o, lhs: l, rhs }) => {
            *pred == Pred::co_total(order.strong()) && !order.total() && *order == o && *lhs == *f && l == *f && tot_child(rhs) == Some(*g)
        }
        (11, [R { pos: true, order, lhs, rhs: tg }, R { pos: false, order: o2, lhs: l2, rhs: g }], P { pos: false, pred, term }) => {
            order == o2 && !order.total() && lhs == l2 && *lhs == term && pred == Pred::co_total(order.strong()) && tot_child(*tg) == Some(*g)
        }
        (12, [P { pos: true, pred, term }], P { pos: true, pred: q, term: t }) => {
            matches!(pred, Pred::Diverse | Pred::SingleValuedNonconstant) && q == Pred::StronglyCoComplete && *term == t
        }
        (12, [P { pos: false, pred: Pred::StronglyCoComplete, term }], P { pos: false, pred, term: t }) => {
            matches!(pred, Pred::Diverse | Pred::SingleValuedNonconstant) && *term == t
        }
        (13, [P { pos: true, pred, term }], P { pos: true, pred: q, term: g }) => {
            matches!(pred, Pred::CoComplete | Pred::StronglyCoComplete)
                && q == Pred::complete(*pred == Pred::StronglyCoComplete)
                && bar_child(*term) == Some(g)
        }
        (13, [P { pos: false, pred, term: f }], P { pos: false, pred: q, term }) => {
            matches!(pred, Pred::Complete | Pred::StronglyComplete)
                && q == Pred::co_complete(*pred == Pred::StronglyComplete)
                && u.bar(*f) == Some(term)
        }
        (14, [], R { pos: true, order: Order::SW, lhs, rhs }) => match (bar_child(lhs).map(|j| u.node(j)), u.node(rhs)) {
            (Some(Node::Un(Unary::Jump, f)), Node::Un(Unary::Jump, bf)) => u.bar(f) == Some(bf),
            _ => false,
        },
        (14, [P { pos: true, pred: Pred::StronglyComplete, term }], P { pos: true, pred: Pred::StronglyComplete, term: j }) => {
            u.un_child(Unary::Jump, j) == Some(*term)
        }
        (14, [P { pos: false, pred: Pred::StronglyComplete, term: j }], P { pos: false, pred: Pred::StronglyComplete, term }) => {
            u.un_child(Unary::Jump, *j) == Some(term)
        }
        (15, [], R { pos: true, order: Order::W, lhs, rhs }) => match (u.node(lhs), u.node(rhs)) {
            (_, Node::Bin(Binary::Join, x, y)) if lhs == x || lhs == y => true,
            (Node::Bin(Binary::Meet, x, y), _) if rhs == x || rhs == y => true,
            _ => false,
        },
        (15, [], R { pos: true, order: Order::SW, lhs, rhs }) => match (bar_child(lhs).map(|t| u.node(t)), u.node(rhs)) {
            (Some(Node::Bin(Binary::Product, f, g)), Node::Bin(Binary::Product, bf, bg)) => {
                u.bar(f) == Some(bf) && u.bar(g) == Some(bg)
            }
            _ => false,
        },
        (15, [R { pos: true, order, lhs: a, rhs: b }], R { pos: true, order: o, lhs, rhs }) => {
            let (na, nb) = (u.node(lhs), u.node(rhs));
            *order == o
                && mono(na, o)
                && match (na, nb) {
                    (Node::Un(p, x), Node::Un(q, y)) => p == q && (x, y) == (*a, *b),
                    (Node::Bin(p, x1, x2), Node::Bin(q, y1, y2)) => {
                        p == q && (((x1, y1) == (*a, *b) && x2 == y2) || ((x2, y2) == (*a, *b) && x1 == y1))
                    }
                    _ => false,
                }
        }
        (15, [R { pos: true, order: Order::W, lhs: a, rhs: c1 }, R { pos: true, order: Order::W, lhs: b, rhs: c2_ }], R { pos: true, order: Order::W, lhs, rhs }) => {
            c1 == c2_ && *c1 == rhs && matches!(u.node(lhs), Node::Bin(Binary::Join, x, y) if (x, y) == (*a, *b) || (x, y) == (*b, *a))
                || a == b && *a == lhs && matches!(u.node(rhs), Node::Bin(Binary::Meet, x, y) if (x, y) == (*c1, *c2_) || (x, y) == (*c2_, *c1))
        }
        (16, [R { pos: true, order, lhs: fc, rhs: bg }], R { pos: true, order: o, lhs, rhs }) => {
            *order == o
                && !o.total()
                && matches!(u.node(*fc), Node::Bin(Binary::Product, f, k) if f == lhs && Some(k) == c2)
                && bar_child(*bg) == Some(rhs)
        }
        (17, [P { pos: false, pred: Pred::Complete, term: f }, R { pos: true, order: Order::W, lhs, rhs }], P { pos: false, pred: Pred::Idempotent, term }) => {
            Some(*lhs) == c2 && rhs == f && u.bar(*f) == Some(term)
        }
        (18, [P { pos, pred, term }], P { pos: q, pred: r2, term: t }) => {
            *term == t
                && *pos == q
                && if *pos {
                    matches!((pred, r2), (Pred::CoTotal, Pred::CoComplete) | (Pred::StronglyCoTotal, Pred::StronglyCoComplete))
                } else {
                    matches!((pred, r2), (Pred::CoComplete, Pred::CoTotal) | (Pred::StronglyCoComplete, Pred::StronglyCoTotal))
                }
        }
        (19, [R { pos: true, order: o1, lhs: x, rhs: y }, R { pos: false, order: o2, lhs: s, rhs: t }], R { pos: false, order, lhs, rhs }) => {
            o1 == o2 && *o1 == order && ((x == s && *y == lhs && *t == rhs) || (y == t && *s == lhs && *x == rhs))
        }
        (19, [R { pos: false, order: o1, lhs: x, rhs: y }], R { pos: false, order, lhs, rhs }) => {
            if weaker(order, *o1) {
                (*x, *y) == (lhs, rhs)
            } else if *o1 == order && order == Order::STW && bar_child(*x) == Some(lhs) && bar_child(*y) == Some(rhs) {
                true
            } else {
                *o1 == order
                    && mono(u.node(*x), order)
                    && match (u.node(*x), u.node(*y)) {
                        (Node::Un(p, a), Node::Un(q, b)) => p == q && (a, b) == (lhs, rhs),
                        (Node::Bin(p, a1, a2), Node::Bin(q, b1, b2)) => {
                            p == q && (((a1, b1) == (lhs, rhs) && a2 == b2) || ((a2, b2) == (lhs, rhs) && a1 == b1))
                        }
                        _ => false,
                    }
            }
        }
        (20, [R { pos: true, order: Order::STW, lhs: a, rhs: b }], R { pos: true, order: Order::STW, lhs, rhs }) => {
            u.bar(*a) == Some(lhs) && u.bar(*b) == Some(rhs)
        }
        _ => false,
    }
}

// ---------------------------------------------------------------------------
// traces and answers

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum By {
    Base(String),
    Rule(Rule, Vec<FactId>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub id: FactId,
    pub claim: Claim,
    pub by: By,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
}

impl Trace {
    pub fn citations(&self) -> Vec<&str> {
        let mut v: Vec<&str> = self
            .steps
            .iter()
            .filter_map(|s| match &s.by {
                By::Base(c) => Some(c.as_str()),
                By::Rule(..) => None,
            })
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn base_claims(&self) -> Vec<&Claim> {
        self.steps
            .iter()
            .filter(|s| matches!(s.by, By::Base(_)))
            .map(|s| &s.claim)
            .collect()
    }

    pub fn rules(&self) -> Vec<Rule> {
        let mut v: Vec<Rule> = self
            .steps
            .iter()
            .filter_map(|s| match s.by {
                By::Rule(r, _) => Some(r),
                By::Base(_) => None,
            })
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            match &s.by {
                By::Base(c) => writeln!(f, "  #{:<6} {}   [{}]", s.id, s.claim, c)?,
                By::Rule(r, p) => {
                    let p: Vec<String> = p.iter().map(|i| format!("#{i}")).collect();
                    if p.is_empty() {
                        writeln!(f, "  #{:<6} {}   by {}", s.id, s.claim, r)?
                    } else {
                        writeln!(f, "  #{:<6} {}   by {} from {}", s.id, s.claim, r, p.join(", "))?
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Answer {
    True(Trace),
    False(Trace),
    Open,
}

impl Answer {
    pub fn label(&self) -> &'static str {
        match self {
            Answer::True(_) => "true",
            Answer::False(_) => "false",
            Answer::Open => "open",
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Answer::True(_) => Some(true),
            Answer::False(_) => Some(false),
            Answer::Open => None,
        }
    }
}

// ---------------------------------------------------------------------------
// the knowledge base

#[derive(Debug, Clone)]
pub struct KnowledgeBase {
    pub atoms: Vec<String>,
    pub declared: Vec<String>,
    pub base: Vec<BaseFact>,
    extra_terms: Vec<Term>,
    pub depth_cap: usize,
    sat: Option<Saturation>,
}

impl Default for KnowledgeBase {
    fn default() -> Self {
        KnowledgeBase::new()
    }
}

fn split_citation(rest: &str, line: usize) -> Result<(&str, String), KbError> {
    let perr = |msg: &str| KbError::Parse { line, msg: msg.to_owned() };
    let (body, cite) = rest.split_once(';').ok_or_else(|| perr("missing '; \"citation\"'"))?;
    let cite = cite.trim();
    let cite = cite
        .strip_prefix('"')
        .and_then(|c| c.strip_suffix('"'))
        .ok_or_else(|| perr("citation must be a quoted string"))?;
    if cite.trim().is_empty() {
        return Err(perr("empty citation"));
    }
    Ok((body.trim(), cite.to_owned()))
}

/// Splits `LHS RHS` at the unique top-level blank where both halves parse.
fn split_terms(s: &str, line: usize) -> Result<(Term, Term), KbError> {
    let mut depth = 0i32;
    let mut found = Vec::new();
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c.is_whitespace() && depth == 0 => {
                if let (Ok(l), Ok(r)) = (parse_term(&s[..i]), parse_term(&s[i..])) {
                    if !found.iter().any(|(a, b)| *a == l && *b == r) {
                        found.push((l, r));
                    }
                }
            }
            _ => {}
        }
    }
    match found.len() {
        1 => Ok(found.pop().unwrap()),
        0 => Err(KbError::Parse { line, msg: format!("cannot read two terms from {s:?}") }),
        _ => Err(KbError::Parse { line, msg: format!("ambiguous terms in {s:?}; add parentheses") }),
    }
}

impl KnowledgeBase {
    pub fn new() -> KnowledgeBase {
        KnowledgeBase {
            atoms: ATOMS.iter().map(|a| a.to_string()).collect(),
            declared: Vec::new(),
            base: Vec::new(),
            extra_terms: Vec::new(),
            depth_cap: DEPTH_CAP,
            sat: None,
        }
    }

    pub fn parse(text: &str) -> Result<KnowledgeBase, KbError> {
        let mut kb = KnowledgeBase::new();
        kb.extend_from(text)?;
        Ok(kb)
    }

    pub fn extend_from(&mut self, text: &str) -> Result<(), KbError> {
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let l = raw.trim();
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            let perr = |msg: String| KbError::Parse { line, msg };
            let (kw, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
            match kw {
                "atom" => {
                    let name = rest.trim();
                    let ok = matches!(parse_term(name), Ok(Term::Atom(ref a)) if a == name);
                    if !ok {
                        return Err(perr(format!("bad atom name {name:?}")));
                    }
                    self.declare(name);
                }
                "pos" | "neg" => {
                    let (body, citation) = split_citation(rest, line)?;
                    let (ord, terms) = body
                        .split_once(char::is_whitespace)
                        .ok_or_else(|| perr("expected ORDER LHS RHS".into()))?;
                    let order: Order = ord.parse().map_err(perr)?;
                    let (lhs, rhs) = split_terms(terms.trim(), line)?;
                    let claim = Claim::Red { pos: kw == "pos", order, lhs, rhs };
                    self.check_atoms(&claim).map_err(|a| perr(format!("unknown atom {a:?}")))?;
                    self.add_fact(claim, &citation);
                }
                "pred" => {
                    let (body, citation) = split_citation(rest, line)?;
                    let (name, term) = body
                        .split_once(char::is_whitespace)
                        .ok_or_else(|| perr("expected PREDICATE TERM".into()))?;
                    let (pos, pred) =
                        Pred::parse(name).ok_or_else(|| perr(format!("unknown predicate {name:?}")))?;
                    let term = parse_term(term.trim()).map_err(|e| perr(e.to_string()))?;
                    let claim = Claim::Pred { pos, pred, term };
                    self.check_atoms(&claim).map_err(|a| perr(format!("unknown atom {a:?}")))?;
                    self.add_fact(claim, &citation);
                }
                _ => return Err(perr(format!("unknown keyword {kw:?}"))),
            }
        }
        Ok(())
    }

    fn check_atoms(&self, c: &Claim) -> Result<(), String> {
        for t in c.terms() {
            let mut names = Vec::new();
            t.atoms(&mut names);
            if let Some(bad) = names.into_iter().find(|a| !self.atoms.iter().any(|x| x == a)) {
                return Err(bad.to_owned());
            }
        }
        Ok(())
    }

    pub fn declare(&mut self, name: &str) {
        if !self.atoms.iter().any(|a| a == name) {
            self.atoms.push(name.to_owned());
            self.declared.push(name.to_owned());
            self.sat = None;
        }
    }

    pub fn add_fact(&mut self, claim: Claim, citation: &str) {
        let claim = match claim {
            Claim::Red { pos, order, lhs, rhs } => {
                Claim::Red { pos, order, lhs: lhs.canonical(), rhs: rhs.canonical() }
            }
            Claim::Pred { pos, pred, term } => Claim::Pred { pos, pred, term: term.canonical() },
        };
        self.base.push(BaseFact { claim, citation: citation.to_owned() });
        self.sat = None;
    }

    /// Removes base facts; the saturation is recomputed on demand.
    pub fn retain_base(&mut self, keep: impl FnMut(&BaseFact) -> bool) {
        self.base.retain(keep);
        self.sat = None;
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for a in &self.declared {
            s.push_str(&format!("atom {a}\n"));
        }
        for f in &self.base {
            match &f.claim {
                Claim::Red { pos, order, lhs, rhs } => {
                    let kw = if *pos { "pos" } else { "neg" };
                    s.push_str(&format!("{kw} {order} {lhs} {rhs} ; \"{}\"\n", f.citation));
                }
                Claim::Pred { pos, pred, term } => {
                    let not = if *pos { "" } else { "not_" };
                    s.push_str(&format!("pred {not}{} {term} ; \"{}\"\n", pred.name(), f.citation));
                }
            }
        }
        s
    }

    /// Adds terms to the universe without asserting anything about them.
    pub fn mention(&mut self, t: &Term) -> Result<(), KbError> {
        let t = t.canonical();
        let mut names = Vec::new();
        t.atoms(&mut names);
        if let Some(bad) = names.into_iter().find(|a| !self.atoms.iter().any(|x| x == a)) {
            return Err(KbError::UnknownAtom(bad.to_owned()));
        }
        let known = self.sat.as_ref().is_some_and(|s| s.universe.lookup(&t).is_some());
        if !self.extra_terms.contains(&t) {
            self.extra_terms.push(t);
        }
        if !known {
            self.sat = None;
        }
        Ok(())
    }

    fn universe(&self) -> Result<Universe, KbError> {
        let mut u = Universe::new(&self.atoms);
        for f in &self.base {
            for t in f.claim.terms() {
                u.intern(t)?;
            }
        }
        for t in &self.extra_terms {
            u.intern(t)?;
        }
        u.close_under_bar(self.depth_cap);
        Ok(u)
    }

    fn base_stmts(&self, u: &Universe) -> Vec<Stmt> {
        self.base.iter().map(|f| stmt_in(u, &f.claim).expect("base terms are interned")).collect()
    }

    /// Runs forward chaining to the fixpoint, or reports the first clash.
    pub fn saturate(&mut self) -> Result<&Saturation, KbError> {
        if self.sat.is_none() {
            let u = self.universe()?;
            let base = self.base_stmts(&u);
            let mut sat = Saturation::new(u);
            sat.axioms();
            for (i, s) in base.into_iter().enumerate() {
                sat.insert(s, Why::Base(i));
            }
            sat.run();
            if let Some((p, n)) = sat.clash {
                return Err(KbError::Contradiction(Contradiction {
                    positive: sat.trace(p, &self.base),
                    negative: sat.trace(n, &self.base),
                }));
            }
            self.sat = Some(sat);
        }
        Ok(self.sat.as_ref().unwrap())
    }

    pub fn saturation(&self) -> Option<&Saturation> {
        self.sat.as_ref()
    }

    /// One more round over every fact; reports how many new facts appear.
    pub fn resaturate_delta(&mut self) -> Result<usize, KbError> {
        self.saturate()?;
        let sat = self.sat.as_mut().unwrap();
        let before = sat.facts.len();
        sat.queue = (0..before as FactId).collect();
        sat.axioms();
        sat.run();
        Ok(sat.facts.len() - before)
    }

    pub fn query(&mut self, lhs: &Term, order: Order, rhs: &Term) -> Result<Answer, KbError> {
        self.mention(lhs)?;
        self.mention(rhs)?;
        self.saturate()?;
        let sat = self.sat.as_ref().unwrap();
        let u = &sat.universe;
        let (l, r) = (u.lookup(&lhs.canonical()).unwrap(), u.lookup(&rhs.canonical()).unwrap());
        Ok(if let Some(id) = sat.find(Stmt::le(order, l, r)) {
            Answer::True(sat.trace(id, &self.base))
        } else if let Some(id) = sat.find(Stmt::nle(order, l, r)) {
            Answer::False(sat.trace(id, &self.base))
        } else {
            Answer::Open
        })
    }

    pub fn query_pred(&mut self, pred: Pred, term: &Term) -> Result<Answer, KbError> {
        self.mention(term)?;
        self.saturate()?;
        let sat = self.sat.as_ref().unwrap();
        let t = sat.universe.lookup(&term.canonical()).unwrap();
        Ok(if let Some(id) = sat.find(Stmt::is(pred, t)) {
            Answer::True(sat.trace(id, &self.base))
        } else if let Some(id) = sat.find(Stmt::isnt(pred, t)) {
            Answer::False(sat.trace(id, &self.base))
        } else {
            Answer::Open
        })
    }

    /// Every derived statement, as claims over terms.
    pub fn derived_claims(&mut self) -> Result<Vec<Claim>, KbError> {
        self.saturate()?;
        let sat = self.sat.as_ref().unwrap();
        let mut v: Vec<Claim> = sat.facts.iter().map(|f| sat.claim(f.stmt)).collect();
        v.sort();
        Ok(v)
    }

    /// Indices of base facts and facts that fail to replay.
    pub fn replay_failures(&mut self) -> Result<Vec<FactId>, KbError> {
        self.saturate()?;
        let sat = self.sat.as_ref().unwrap();
        let base = self.base_stmts(&sat.universe);
        Ok((0..sat.facts.len() as FactId).filter(|&i| !sat.replays(i, &base)).collect())
    }

    pub fn is_base(&self, c: &Claim) -> bool {
        self.base.iter().any(|f| &f.claim == c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn loads_the_documented_lines() {
        let kb = KnowledgeBase::parse(
            "# comment\n\
             pos SW bar(C_N) SORT ; \"Cor. CN-SORT\"\n\
             neg W LPO' T(C_N) ; \"Cor. LPO'-CN\"\n\
             pred complete SORT ; \"Prop. complete problems\"\n",
        )
        .unwrap();
        assert_eq!(kb.base.len(), 3);
        assert_eq!(kb.base[0].claim, Claim::le(Order::SW, t("bar(C_N)"), t("SORT")));
        assert_eq!(kb.base[1].claim, Claim::nle(Order::W, t("LPO'"), t("T(C_N)")));
        assert_eq!(
            kb.base[2].claim,
            Claim::Pred { pos: true, pred: Pred::Complete, term: t("SORT") }
        );
    }

    #[test]
    fn loader_errors_name_the_line() {
        let e = KnowledgeBase::parse("\npos W FOO C_N ; \"x\"\n").unwrap_err();
        assert!(matches!(e, KbError::Parse { line: 2, .. }), "{e:?}");
        let e = KnowledgeBase::parse("pos W C_N ; \"x\"").unwrap_err();
        assert!(matches!(e, KbError::Parse { line: 1, .. }));
        let e = KnowledgeBase::parse("pos W C_N C_2 ; \"\"").unwrap_err();
        assert!(matches!(e, KbError::Parse { line: 1, .. }));
        let e = KnowledgeBase::parse("pred shiny C_N ; \"x\"").unwrap_err();
        assert!(matches!(e, KbError::Parse { line: 1, .. }));
        assert!(KnowledgeBase::parse("atom FOO\npos W FOO C_N ; \"x\"").is_ok());
    }

    #[test]
    fn terms_with_blanks_split_uniquely() {
        let kb = KnowledgeBase::parse("pos W C_N * bar(C_N) K_N' * K_N' ; \"x\"").unwrap();
        assert_eq!(
            kb.base[0].claim,
            Claim::le(Order::W, t("C_N * bar(C_N)"), t("K_N' * K_N'"))
        );
    }

    #[test]
    fn trivial_queries() {
        let mut kb = KnowledgeBase::new();
        assert!(matches!(kb.query(&t("C_N"), Order::W, &t("C_N")).unwrap(), Answer::True(_)));
        let a = kb.query(&t("C_N"), Order::W, &t("bar(C_N)")).unwrap();
        assert!(matches!(a, Answer::True(_)));
        assert_eq!(kb.query(&t("C_N"), Order::W, &t("LPO")).unwrap(), Answer::Open);
        assert!(kb.replay_failures().unwrap().is_empty());
    }

    #[test]
    fn finite_choice_strictness_lifts_to_total_order() {
        let mut kb = KnowledgeBase::parse(
            "pos W C_1 C_2 ; \"a\"\nneg W C_2 C_1 ; \"b\"\npred strongly_complete C_1 ; \"c\"\n",
        )
        .unwrap();
        assert!(matches!(kb.query(&t("C_1"), Order::TW, &t("C_2")).unwrap(), Answer::True(_)));
        let Answer::False(tr) = kb.query(&t("C_2"), Order::TW, &t("C_1")).unwrap() else {
            panic!()
        };
        assert!(tr.rules().contains(&Rule(5)) && tr.rules().contains(&Rule(9)));
        assert!(kb.replay_failures().unwrap().is_empty());
    }

    #[test]
    fn contradictions_report_both_traces() {
        let mut kb =
            KnowledgeBase::parse("pos W C_1 C_2 ; \"a\"\npos W C_2 C_3 ; \"b\"\nneg W C_1 C_3 ; \"c\"\n")
                .unwrap();
        let Err(KbError::Contradiction(c)) = kb.saturate() else { panic!() };
        assert_eq!(c.positive.citations(), vec!["a", "b"]);
        assert_eq!(c.negative.citations(), vec!["c"]);
    }

    #[test]
    fn completion_collapse_and_co_completeness() {
        let mut kb = KnowledgeBase::parse(
            "pos W WBWT_2 bar(C_N) ; \"w\"\nneg W WBWT_2 C_N ; \"n\"\n",
        )
        .unwrap();
        let a = kb.query_pred(Pred::CoComplete, &t("WBWT_2")).unwrap();
        assert!(matches!(a, Answer::False(_)));
        let a = kb.query(&t("bar(bar(C_N))"), Order::W, &t("bar(C_N)")).unwrap();
        assert!(matches!(a, Answer::True(_)));
        assert!(matches!(kb.query(&t("bar(C_N)"), Order::W, &t("C_N")).unwrap(), Answer::False(_)));
    }

    #[test]
    fn save_load_round_trip() {
        let src = "atom FOO\npos W FOO x C_2 bar(C_N) ; \"a\"\npred not_cylinder bar(FOO) ; \"b\"\n";
        let mut kb = KnowledgeBase::parse(src).unwrap();
        let mut back = KnowledgeBase::parse(&kb.to_text()).unwrap();
        assert_eq!(kb.to_text(), back.to_text());
        assert_eq!(kb.derived_claims().unwrap(), back.derived_claims().unwrap());
        assert!(matches!(kb.query(&t("FOO"), Order::W, &t("C_N")).unwrap(), Answer::True(_)));
    }
}
