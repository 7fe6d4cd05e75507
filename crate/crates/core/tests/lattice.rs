use proptest::prelude::*;
use wlab_core::lattice::{
    parse_term, print_term, Answer, Binary, Claim, KnowledgeBase, Order, Term, Unary, ATOMS,
};

const SHIPPED_KB: &str = include_str!("../../../facts/paper.kb");

fn shipped() -> KnowledgeBase {
    KnowledgeBase::parse(SHIPPED_KB).expect("shipped kb parses")
}

fn term(depth: u32) -> BoxedStrategy<Term> {
    let atom = proptest::sample::select(ATOMS).prop_map(Term::atom).boxed();
    if depth <= 1 {
        return atom;
    }
    let sub = term(depth - 1);
    let un = proptest::sample::select(vec![Unary::Bar, Unary::Total, Unary::Jump, Unary::Hat, Unary::Star]);
    let bin = proptest::sample::select(vec![Binary::Product, Binary::Compose, Binary::Join, Binary::Meet]);
    prop_oneof![
        1 => atom,
        2 => (un, sub.clone()).prop_map(|(o, t)| Term::un(o, t)),
        2 => (bin, sub.clone(), sub).prop_map(|(o, a, b)| Term::bin(o, a, b)),
    ]
    .boxed()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn printed_terms_parse_back(t in term(4)) {
        let s = print_term(&t);
        prop_assert_eq!(parse_term(&s).unwrap(), t, "{}", s);
    }
}

#[test]
fn shipped_kb_is_consistent_and_sound() {
    let mut kb = shipped();
    let sat = kb.saturate().expect("no contradiction");
    assert!(sat.len() > 1000);
    assert!(kb.replay_failures().unwrap().is_empty());
}

#[test]
fn second_saturation_adds_nothing() {
    let mut kb = shipped();
    kb.saturate().unwrap();
    let before = kb.derived_claims().unwrap();
    assert_eq!(kb.resaturate_delta().unwrap(), 0);
    assert_eq!(kb.derived_claims().unwrap(), before);
}

#[test]
fn every_atom_is_coherent() {
    let mut kb = shipped();
    let mut atoms: Vec<String> = ATOMS.iter().map(|s| s.to_string()).collect();
    atoms.extend(["lim_N".to_string(), "PC_I".to_string()]);
    for a in atoms {
        let t = Term::atom(&a);
        let tw = kb.query(&t, Order::TW, &t).unwrap();
        let w = kb.query(&t, Order::W, &Term::bar(t.clone())).unwrap();
        assert!(matches!(tw, Answer::True(_)), "{a} <=TW {a}");
        assert!(matches!(w, Answer::True(_)), "{a} <=W bar({a})");
    }
}

#[test]
fn save_and_load_keeps_the_closure() {
    let mut kb = shipped();
    let text = kb.to_text();
    let mut again = KnowledgeBase::parse(&text).unwrap();
    assert_eq!(again.to_text(), text);
    assert_eq!(again.derived_claims().unwrap(), kb.derived_claims().unwrap());
}

#[test]
fn every_trace_bottoms_out_in_cited_facts() {
    let mut kb = shipped();
    let q = [
        ("C_N * bar(C_N)", Order::W, "C_N'"),
        ("bar(C_NN)", Order::W, "T(C_NN)"),
        ("C_2N", Order::W, "bar(PC_2N)"),
    ];
    for (l, o, r) in q {
        let ans = kb.query(&parse_term(l).unwrap(), o, &parse_term(r).unwrap()).unwrap();
        let trace = match ans {
            Answer::True(t) | Answer::False(t) => t,
            Answer::Open => panic!("{l} {o} {r} open"),
        };
        assert!(!trace.citations().is_empty());
        for c in trace.base_claims() {
            assert!(kb.is_base(c), "{c}");
        }
        let _: Vec<&Claim> = trace.base_claims();
    }
}
