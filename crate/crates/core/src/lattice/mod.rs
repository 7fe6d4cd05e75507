//! Degree terms, the citation-carrying knowledge base with its inference
//! engine, and matrix and Hasse-diagram reports.

mod kb;
mod report;
mod term;

pub use kb::{
    Answer, BaseFact, By, Claim, Contradiction, FactId, FactRec, KbError, KnowledgeBase, Node,
    Order, Pred, Rule, Saturation, Stmt, TermId, Trace, TraceStep, Universe, Why, DEPTH_CAP,
};
pub use report::{classification_matrix, diff_matrices, export_hasse, Cell, Diff, Figure, Matrix};
pub use term::{parse_term, print_term, Binary, ParseError, Term, Unary, ATOMS};
