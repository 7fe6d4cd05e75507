use std::time::Instant;

use wlab_core::realizers::adversary::adversary_barcn;
use wlab_core::realizers::harness::{oracle_checks, verify, witnesses, Sabotage};
use wlab_core::realizers::library::{cn_fmc_solver, CnMindChange, CommitRule};

#[test]
fn witnesses_pass_and_sabotage_is_caught() {
    for w in witnesses() {
        let t = Instant::now();
        let r = verify(&w, Sabotage::None, 6);
        let bad: Vec<_> = r.samples.iter().filter(|s| !s.passed).take(3).collect();
        assert!(r.ok(), "{}: {} failed, e.g. {:#?}", r.reduction, r.failed, bad);
        let caught: Vec<_> = [Sabotage::K, Sabotage::H]
            .into_iter()
            .filter(|&s| verify(&w, s, 6).failed > 0)
            .map(Sabotage::label)
            .collect();
        assert!(!caught.is_empty(), "{}: sabotage not caught", r.reduction);
        eprintln!("  caught: {caught:?}");
        eprintln!("{} ({} samples) {:?}", w.reduction(), r.passed, t.elapsed());
    }
}

#[test]
fn library_oracles() {
    for r in oracle_checks() {
        eprintln!("{} {} cases", r.name, r.cases);
        assert!(r.ok(), "{}: {:?}", r.name, r.failures);
    }
}

#[test]
fn adversary_defeats_every_budget() {
    for budget in 0..8 {
        assert!(adversary_barcn(&mut cn_fmc_solver(), budget, 10_000).defeated(budget));
        assert!(adversary_barcn(&mut CnMindChange::new(CommitRule::Never), budget, 2_000).never_commits);
    }
}
