//! Classification matrices, their differences, Hasse diagrams in DOT and
//! the diagram transcription format.

use alloc::borrow::ToOwned;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::kb::{Claim, KbError, KnowledgeBase, Order, Saturation, TermId};
use super::term::{parse_term, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cell {
    Le,
    Nle,
    Open,
}

impl Cell {
    pub fn symbol(self) -> &'static str {
        match self {
            Cell::Le => "<=",
            Cell::Nle => "</=",
            Cell::Open => "?",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    pub order: Order,
    pub nodes: Vec<Term>,
    /// `cells[i][j]` classifies `nodes[i] <= nodes[j]`.
    pub cells: Vec<Vec<Cell>>,
}

fn ids(kb: &mut KnowledgeBase, nodes: &[Term]) -> Result<Vec<TermId>, KbError> {
    for t in nodes {
        kb.mention(t)?;
    }
    let sat = kb.saturate()?;
    Ok(nodes.iter().map(|t| sat.universe.lookup(&t.canonical()).unwrap()).collect())
}

pub fn classification_matrix(
    kb: &mut KnowledgeBase,
    order: Order,
    nodes: &[Term],
) -> Result<Matrix, KbError> {
    let ids = ids(kb, nodes)?;
    let sat = kb.saturation().unwrap();
    let cells = ids
        .iter()
        .map(|&a| {
            ids.iter()
                .map(|&b| match sat.status(order, a, b) {
                    Some(true) => Cell::Le,
                    Some(false) => Cell::Nle,
                    None => Cell::Open,
                })
                .collect()
        })
        .collect();
    Ok(Matrix { order, nodes: nodes.to_vec(), cells })
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Diff {
    /// Cells decided in both matrices with different answers.
    pub differing: Vec<(usize, usize)>,
    /// Cells open in at least one matrix.
    pub open: Vec<(usize, usize)>,
}

pub fn diff_matrices(a: &Matrix, b: &Matrix) -> Diff {
    assert_eq!(a.nodes, b.nodes, "matrices over different node lists");
    let mut d = Diff::default();
    for i in 0..a.nodes.len() {
        for j in 0..a.nodes.len() {
            match (a.cells[i][j], b.cells[i][j]) {
                (Cell::Open, _) | (_, Cell::Open) => d.open.push((i, j)),
                (x, y) if x != y => d.differing.push((i, j)),
                _ => {}
            }
        }
    }
    d
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Covering relation of the derived order on equivalence classes of
/// `nodes`, as a DOT digraph with edges from the stronger class down.
pub fn export_hasse(
    kb: &mut KnowledgeBase,
    order: Order,
    nodes: &[(String, Term)],
) -> Result<String, KbError> {
    let terms: Vec<Term> = nodes.iter().map(|n| n.1.clone()).collect();
    let ids = ids(kb, &terms)?;
    let sat = kb.saturation().unwrap();
    let le = |i: usize, j: usize| sat.status(order, ids[i], ids[j]) == Some(true);
    let n = nodes.len();

    let mut class = alloc::vec![usize::MAX; n];
    let mut reps: Vec<usize> = Vec::new();
    for i in 0..n {
        if class[i] != usize::MAX {
            continue;
        }
        class[i] = reps.len();
        for j in i + 1..n {
            if class[j] == usize::MAX && le(i, j) && le(j, i) {
                class[j] = reps.len();
            }
        }
        reps.push(i);
    }
    let k = reps.len();
    let below = |a: usize, b: usize| a != b && le(reps[a], reps[b]) && !le(reps[b], reps[a]);
    let mut edges = Vec::new();
    for a in 0..k {
        for b in 0..k {
            if below(a, b) && !(0..k).any(|c| below(a, c) && below(c, b)) {
                edges.push((b, a));
            }
        }
    }

    let label = |c: usize| {
        let names: Vec<&str> =
            (0..n).filter(|&i| class[i] == c).map(|i| nodes[i].0.as_str()).collect();
        names.join(" = ")
    };

    // pairs (f, bar f) with derived strictness
    let mut clustered = alloc::vec![false; k];
    let mut clusters = Vec::new();
    for i in 0..n {
        let Some(b) = sat.universe.bar(ids[i]) else { continue };
        if b == ids[i] || sat.status(order, b, ids[i]) != Some(false) {
            continue;
        }
        let Some(j) = (0..n).find(|&j| {
            sat.status(order, b, ids[j]) == Some(true) && sat.status(order, ids[j], b) == Some(true)
        }) else {
            continue;
        };
        let (ci, cj) = (class[i], class[j]);
        if ci != cj && !clustered[ci] && !clustered[cj] {
            clustered[ci] = true;
            clustered[cj] = true;
            clusters.push((ci, cj));
        }
    }

    let mut out = String::new();
    out.push_str(&format!("digraph hasse_{} {{\n  rankdir=BT;\n", order.name()));
    out.push_str("  node [shape=box, style=filled, fillcolor=gray90];\n");
    for (x, (lo, hi)) in clusters.iter().enumerate() {
        out.push_str(&format!(
            "  subgraph cluster_{x} {{ style=dashed; n{lo}; n{hi}; }}\n"
        ));
    }
    for c in 0..k {
        out.push_str(&format!("  n{c} [label=\"{}\"];\n", dot_escape(&label(c))));
    }
    for (hi, lo) in edges {
        out.push_str(&format!("  n{hi} -> n{lo} [dir=back];\n"));
    }
    out.push_str("}\n");
    Ok(out)
}

/// A transcribed diagram: named nodes, arrows `from -> to` read as
/// `to <=W from`, and boxes pairing a node with its completion.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Figure {
    pub nodes: Vec<(String, Term)>,
    pub arrows: Vec<(String, String)>,
    pub boxes: Vec<(String, String)>,
}

impl Figure {
    pub fn parse(text: &str) -> Result<Figure, KbError> {
        let mut fig = Figure::default();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let l = raw.trim();
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            let perr = |msg: String| KbError::Parse { line, msg };
            let mut parts = l.splitn(3, char::is_whitespace);
            let kw = parts.next().unwrap();
            let a = parts.next().ok_or_else(|| perr("missing field".into()))?.to_owned();
            let b = parts.next().ok_or_else(|| perr("missing field".into()))?.trim();
            match kw {
                "node" => {
                    let t = parse_term(b).map_err(|e| perr(format!("{e}")))?;
                    fig.nodes.push((a, t));
                }
                "arrow" | "box" => {
                    for name in [a.as_str(), b] {
                        if fig.term(name).is_none() {
                            return Err(perr(format!("unknown node {name:?}")));
                        }
                    }
                    let pair = (a, b.to_owned());
                    if kw == "arrow" {
                        fig.arrows.push(pair);
                    } else {
                        fig.boxes.push(pair);
                    }
                }
                _ => return Err(perr(format!("unknown keyword {kw:?}"))),
            }
        }
        Ok(fig)
    }

    pub fn term(&self, name: &str) -> Option<&Term> {
        self.nodes.iter().find(|n| n.0 == name).map(|n| &n.1)
    }

    /// `to <=W from` for every arrow.
    pub fn arrow_claims(&self) -> Vec<Claim> {
        self.arrows
            .iter()
            .map(|(f, t)| Claim::le(Order::W, self.term(t).unwrap().clone(), self.term(f).unwrap().clone()))
            .collect()
    }

    /// The node of each box that is not the completion.
    pub fn box_pairs(&self) -> Vec<(Term, Term)> {
        self.boxes
            .iter()
            .map(|(lo, hi)| (self.term(lo).unwrap().clone(), self.term(hi).unwrap().clone()))
            .collect()
    }

    /// Nodes that are not the completion member of a box.
    pub fn non_completion_nodes(&self) -> Vec<(String, Term)> {
        self.nodes
            .iter()
            .filter(|(n, _)| !self.boxes.iter().any(|(_, hi)| hi == n))
            .cloned()
            .collect()
    }

    /// Arrows the saturated base refutes.
    pub fn conflicts(&self, kb: &mut KnowledgeBase) -> Result<Vec<(String, String)>, KbError> {
        for (_, t) in &self.nodes {
            kb.mention(t)?;
        }
        let sat: &Saturation = kb.saturate()?;
        Ok(self
            .arrows
            .iter()
            .zip(self.arrow_claims())
            .filter(|(_, c)| {
                let Claim::Red { lhs, rhs, .. } = c else { return false };
                let u = &sat.universe;
                let (l, r) = (u.lookup(lhs).unwrap(), u.lookup(rhs).unwrap());
                sat.status(Order::W, l, r) == Some(false)
            })
            .map(|(a, _)| a.clone())
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn choice_kb() -> KnowledgeBase {
        KnowledgeBase::parse(
            "pos SW bar(C_N) T(C_N) ; \"a\"\nneg W bar(C_N) C_N ; \"b\"\nneg W T(C_N) bar(C_N) ; \"c\"\n",
        )
        .unwrap()
    }

    #[test]
    fn empty_and_single_node() {
        let mut kb = KnowledgeBase::new();
        let m = classification_matrix(&mut kb, Order::W, &[]).unwrap();
        assert!(m.cells.is_empty());
        let dot = export_hasse(&mut kb, Order::W, &[("CN".into(), t("C_N"))]).unwrap();
        assert!(dot.contains("n0 [label=\"CN\"]"));
        assert!(!dot.contains("->"));
    }

    #[test]
    fn choice_chain_with_dashed_cluster() {
        let mut kb = choice_kb();
        let nodes = [
            ("CN".into(), t("C_N")),
            ("!CN".into(), t("bar(C_N)")),
            ("TCN".into(), t("T(C_N)")),
        ];
        let dot = export_hasse(&mut kb, Order::W, &nodes).unwrap();
        assert_eq!(dot.matches("->").count(), 2, "{dot}");
        assert!(dot.contains("n1 -> n0") && dot.contains("n2 -> n1"), "{dot}");
        assert!(dot.contains("cluster_0 { style=dashed; n0; n1; }"), "{dot}");
    }

    #[test]
    fn matrices_and_diff() {
        let mut kb = choice_kb();
        let nodes = [t("C_N"), t("T(C_N)")];
        let w = classification_matrix(&mut kb, Order::W, &nodes).unwrap();
        let tw = classification_matrix(&mut kb, Order::TW, &nodes).unwrap();
        assert_eq!(w.cells[0][1], Cell::Le);
        assert_eq!(w.cells[1][0], Cell::Nle);
        assert_eq!(tw.cells[1][0], Cell::Nle);
        let d = diff_matrices(&w, &tw);
        assert!(d.differing.is_empty() && d.open.is_empty());
    }

    #[test]
    fn figure_format() {
        let fig = Figure::parse("node CN C_N\nnode !CN bar(C_N)\narrow !CN CN\nbox CN !CN\n").unwrap();
        assert_eq!(fig.arrow_claims(), alloc::vec![Claim::le(Order::W, t("C_N"), t("bar(C_N)"))]);
        assert_eq!(fig.non_completion_nodes().len(), 1);
        assert!(Figure::parse("node CN C_N\narrow CN X\n").is_err());
        let mut kb = choice_kb();
        assert!(fig.conflicts(&mut kb).unwrap().is_empty());
    }
}
