//! Adversary against finite-mind-change solvers of `C_ℕ` in the range coding.

use alloc::vec::Vec;

use super::{Token, Transducer};
use crate::streams::{Digit, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdversaryReport {
    /// Resets the machine made before the run stopped.
    pub forced_resets: usize,
    pub steps: usize,
    /// No commitment at all within the step bound.
    pub never_commits: bool,
    /// The input fed so far.
    pub input: Word,
    pub commits: Vec<Digit>,
}

impl AdversaryReport {
    /// True when the machine was forced past its reset budget.
    pub fn defeated(&self, budget: usize) -> bool {
        self.forced_resets > budget || self.never_commits
    }
}

/// Feeds `0` (nothing removed) until the machine commits to some `n`, then
/// removes `n`. Stops after `budget + 1` resets or `step_bound` digits.
pub fn adversary_barcn<T: Transducer + ?Sized>(
    m: &mut T,
    budget: usize,
    step_bound: usize,
) -> AdversaryReport {
    let mut input = Word::new();
    let mut commits = Vec::new();
    let mut resets = 0;
    let mut fresh = true;
    let mut next: Digit = 0;
    let mut out = Vec::new();
    while input.len() < step_bound && resets <= budget {
        out.clear();
        m.feed(next, &mut out);
        input.push(next);
        next = 0;
        for t in &out {
            match t {
                Token::Reset => {
                    resets += 1;
                    fresh = true;
                }
                Token::Digit(d) if fresh => {
                    fresh = false;
                    commits.push(*d);
                    next = d + 1;
                }
                Token::Digit(_) => {}
            }
        }
    }
    AdversaryReport {
        forced_resets: resets,
        steps: input.len(),
        never_commits: commits.is_empty(),
        input,
        commits,
    }
}

#[cfg(test)]
mod tests {
    use super::super::library::{cn_fmc_solver, CnMindChange, CommitRule};
    use super::*;

    #[test]
    fn every_budget_is_exceeded() {
        for budget in 0..6 {
            let r = adversary_barcn(&mut cn_fmc_solver(), budget, 10_000);
            assert_eq!(r.forced_resets, budget + 1);
            assert_eq!(r.commits, (0..=budget as Digit + 1).collect::<Vec<_>>());
            for rule in [CommitRule::AboveMax, CommitRule::Lazy] {
                assert!(
                    adversary_barcn(&mut CnMindChange::new(rule), budget, 10_000).defeated(budget)
                );
            }
        }
        let silent = adversary_barcn(&mut CnMindChange::new(CommitRule::Never), 3, 500);
        assert!(silent.never_commits && silent.steps == 500);
    }
}
