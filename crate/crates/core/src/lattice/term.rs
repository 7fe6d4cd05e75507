//! Degree terms: atoms closed under completion, totalization, jump,
//! parallelization, finite parallelization, products and lattice operations.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

/// Atoms every knowledge base knows without an `atom` declaration.
pub const ATOMS: &[&str] = &[
    "C_0", "C_1", "C_2", "C_3", "C_4", "C_5", "C_N", "K_N", "C_2N", "PC_2N", "PCC_I", "ConC_I",
    "C_R", "PC_R", "C_NN", "LPO", "LPO_S", "lim", "Low", "Low_2", "SORT", "WBWT_2", "BWT_2", "J",
    "J^-1", "INF", "INF_S", "NEG", "WFT", "WFT_S", "id",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Unary {
    Bar,
    Total,
    Jump,
    Hat,
    Star,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Binary {
    Product,
    Compose,
    Join,
    Meet,
}

impl Binary {
    fn level(self) -> u8 {
        match self {
            Binary::Join | Binary::Meet => 1,
            Binary::Compose => 2,
            Binary::Product => 3,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Binary::Product => "x",
            Binary::Compose => "*",
            Binary::Join => "|_|",
            Binary::Meet => "|^|",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Atom(String),
    Un(Unary, Box<Term>),
    Bin(Binary, Box<Term>, Box<Term>),
}

impl Term {
    pub fn atom(name: &str) -> Term {
        Term::Atom(name.to_string())
    }

    /// Completion; `bar(bar(t))` is `bar(t)`.
    pub fn bar(t: Term) -> Term {
        match t {
            Term::Un(Unary::Bar, _) => t,
            t => Term::Un(Unary::Bar, Box::new(t)),
        }
    }

    pub fn un(op: Unary, t: Term) -> Term {
        match op {
            Unary::Bar => Term::bar(t),
            op => Term::Un(op, Box::new(t)),
        }
    }

    pub fn bin(op: Binary, a: Term, b: Term) -> Term {
        Term::Bin(op, Box::new(a), Box::new(b))
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Atom(_) => 1,
            Term::Un(_, t) => 1 + t.depth(),
            Term::Bin(_, a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn atoms<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Term::Atom(a) => out.push(a),
            Term::Un(_, t) => t.atoms(out),
            Term::Bin(_, a, b) => {
                a.atoms(out);
                b.atoms(out);
            }
        }
    }

    /// Rebuilds with the smart constructors, collapsing nested completions.
    pub fn canonical(&self) -> Term {
        match self {
            Term::Atom(_) => self.clone(),
            Term::Un(op, t) => Term::un(*op, t.canonical()),
            Term::Bin(op, a, b) => Term::bin(*op, a.canonical(), b.canonical()),
        }
    }

    fn level(&self) -> u8 {
        match self {
            Term::Bin(op, _, _) => op.level(),
            _ => 4,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.level() < min {
            f.write_str("(")?;
            self.write_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            Term::Atom(a) => f.write_str(a),
            Term::Un(Unary::Jump, t) => {
                t.write_at(f, 4)?;
                f.write_str("'")
            }
            Term::Un(op, t) => {
                let name = match op {
                    Unary::Bar => "bar",
                    Unary::Total => "T",
                    Unary::Hat => "hat",
                    Unary::Star => "star",
                    Unary::Jump => unreachable!(),
                };
                write!(f, "{name}(")?;
                t.write_at(f, 0)?;
                f.write_str(")")
            }
            Term::Bin(op, a, b) => {
                a.write_at(f, op.level())?;
                write!(f, " {} ", op.symbol())?;
                b.write_at(f, op.level() + 1)
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at column {}: {}", self.pos + 1, self.msg)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Open,
    Close,
    Prime,
    Op(Binary),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let b = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let tok = if text[i..].starts_with("|_|") {
            i += 3;
            Tok::Op(Binary::Join)
        } else if text[i..].starts_with("|^|") {
            i += 3;
            Tok::Op(Binary::Meet)
        } else if text[i..].starts_with('\u{2032}') {
            i += '\u{2032}'.len_utf8();
            Tok::Prime
        } else {
            match c {
                b'(' => {
                    i += 1;
                    Tok::Open
                }
                b')' => {
                    i += 1;
                    Tok::Close
                }
                b'\'' => {
                    i += 1;
                    Tok::Prime
                }
                b'*' => {
                    i += 1;
                    Tok::Op(Binary::Compose)
                }
                c if c.is_ascii_alphanumeric() || c == b'_' => {
                    while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                        i += 1;
                    }
                    if text[i..].starts_with("^-1") {
                        i += 3;
                    }
                    let word = &text[start..i];
                    if word == "x" {
                        Tok::Op(Binary::Product)
                    } else {
                        Tok::Ident(word.to_string())
                    }
                }
                _ => {
                    return Err(ParseError {
                        pos: start,
                        msg: alloc::format!("unexpected character {:?}", &text[start..].chars().next().unwrap()),
                    })
                }
            }
        };
        out.push((start, tok));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.0)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn err<T>(&self, msg: &str) -> Result<T, ParseError> {
        Err(ParseError { pos: self.pos(), msg: msg.to_string() })
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&t) {
            self.at += 1;
            Ok(())
        } else {
            self.err(&alloc::format!("expected {what}"))
        }
    }

    fn binary(&mut self, level: u8) -> Result<Term, ParseError> {
        if level == 4 {
            return self.postfix();
        }
        let mut t = self.binary(level + 1)?;
        while let Some(Tok::Op(op)) = self.peek() {
            let op = *op;
            if op.level() != level {
                break;
            }
            self.at += 1;
            let r = self.binary(level + 1)?;
            t = Term::bin(op, t, r);
        }
        Ok(t)
    }

    fn postfix(&mut self) -> Result<Term, ParseError> {
        let mut t = self.primary()?;
        while self.peek() == Some(&Tok::Prime) {
            self.at += 1;
            t = Term::un(Unary::Jump, t);
        }
        Ok(t)
    }

    fn primary(&mut self) -> Result<Term, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Open) => {
                self.at += 1;
                let t = self.binary(1)?;
                self.expect(Tok::Close, "')'")?;
                Ok(t)
            }
            Some(Tok::Ident(w)) => {
                self.at += 1;
                let op = match w.as_str() {
                    "bar" => Some(Unary::Bar),
                    "T" => Some(Unary::Total),
                    "hat" => Some(Unary::Hat),
                    "star" => Some(Unary::Star),
                    _ => None,
                };
                match op {
                    Some(op) if self.peek() == Some(&Tok::Open) => {
                        self.at += 1;
                        let t = self.binary(1)?;
                        self.expect(Tok::Close, "')'")?;
                        Ok(Term::un(op, t))
                    }
                    Some(_) => self.err("expected '(' after operator name"),
                    None => Ok(Term::Atom(w)),
                }
            }
            Some(_) => self.err("expected a term"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses a term; the result is canonical.
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, end: text.len() };
    let t = p.binary(1)?;
    if p.at != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(t)
}

pub fn print_term(t: &Term) -> String {
    t.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rt(s: &str) -> String {
        parse_term(s).unwrap().to_string()
    }

    #[test]
    fn examples() {
        assert_eq!(parse_term("bar(C_N)").unwrap(), Term::bar(Term::atom("C_N")));
        assert_eq!(
            parse_term("C_N * bar(C_N)").unwrap(),
            Term::bin(Binary::Compose, Term::atom("C_N"), Term::bar(Term::atom("C_N")))
        );
        assert_eq!(rt("bar(bar(C_NN))"), "bar(C_NN)");
        assert_eq!(rt("K_N'*K_N'"), "K_N' * K_N'");
        assert_eq!(rt("J^-1"), "J^-1");
        assert_eq!(rt("C_2 x C_N * LPO |_| id"), "C_2 x C_N * LPO |_| id");
        assert_eq!(rt("(C_2 |_| C_N) x LPO"), "(C_2 |_| C_N) x LPO");
        assert_eq!(rt("(C_2 x C_N)'"), "(C_2 x C_N)'");
        assert_eq!(rt("a * (b * c)"), "a * (b * c)");
        assert_eq!(rt("(a * b) * c"), "a * b * c");
        assert_eq!(rt("bar(C_N)\u{2032}"), "bar(C_N)'");
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(parse_term("bar C_N").unwrap_err().pos, 4);
        assert_eq!(parse_term("C_N x").unwrap_err().pos, 5);
        assert_eq!(parse_term("(C_N").unwrap_err().pos, 4);
        assert!(parse_term("C_N $").is_err());
        assert!(parse_term("C_N C_2").is_err());
    }
}
