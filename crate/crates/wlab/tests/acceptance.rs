//! One test per acceptance criterion, each printing a single PASS/FAIL line.
//! Tests hold a lock so the timed criteria do not share the CPU.

use std::sync::Mutex;

use wlab::data::{shipped_figure, SHIPPED_KB};
use wlab::suites::{
    adversary_budgets, chains_rederived, figure_reproduction, format_round_trips, matrix_diff,
    mutation_sensitivity, realizer_oracles, Check,
};

static SERIAL: Mutex<()> = Mutex::new(());

fn report(c: Check) {
    println!("{}", c.line());
    assert!(c.passed, "{}", c.line());
}

#[test]
fn criterion_1_diagram_reproduction() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    report(figure_reproduction(SHIPPED_KB, &shipped_figure()));
}

#[test]
fn criterion_2_named_chains_rederived() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    report(chains_rederived(SHIPPED_KB));
}

#[test]
fn criterion_3_matrix_difference_confined() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    report(matrix_diff(SHIPPED_KB, &shipped_figure()));
}

#[test]
fn criterion_4_realizer_oracles() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let (c, reports) = realizer_oracles(0);
    for r in &reports {
        println!("    {}: {} passed, {} failed", r.reduction, r.passed, r.failed);
    }
    report(c);
}

#[test]
fn criterion_5_adversary() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    report(adversary_budgets());
}

#[test]
fn criterion_6_mutation_sensitivity() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    report(mutation_sensitivity(0));
}

#[test]
fn criterion_7_round_trips() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    report(format_round_trips(SHIPPED_KB, 0));
}
