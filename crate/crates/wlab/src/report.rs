//! JSON form of suite outcomes and witness transcripts. The shape is pinned
//! by `schema/verify-report.schema.json`.

use serde::Serialize;
use wlab_core::realizers::harness::{Report, SampleReport};

use crate::suites::{Check, Outcome};

pub const SCHEMA: &str = include_str!("../schema/verify-report.schema.json");

/// Oracle answers are sampled, so a passing witness is only unrefuted.
pub const SAMPLING_NOTE: &str =
    "oracle answers are the canonical one plus adversarial alternatives; passing means not refuted on these samples";

#[derive(Debug, Serialize)]
pub struct VerifyDoc {
    pub target: String,
    pub seed: u64,
    pub ok: bool,
    pub checks: Vec<CheckDoc>,
    pub witnesses: Vec<WitnessDoc>,
}

#[derive(Debug, Serialize)]
pub struct CheckDoc {
    pub criterion: Option<u8>,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct WitnessDoc {
    pub reduction: String,
    pub witness: String,
    pub sabotage: String,
    pub horizon: Option<String>,
    pub samples: Vec<SampleDoc>,
    pub summary: SummaryDoc,
}

#[derive(Debug, Serialize)]
pub struct SampleDoc {
    pub input: String,
    pub k_output: String,
    pub g_input: String,
    pub g_answers: Vec<String>,
    pub h_outputs: Vec<String>,
    pub verdict: &'static str,
    pub note: String,
}

#[derive(Debug, Serialize)]
pub struct SummaryDoc {
    pub passed: usize,
    pub failed: usize,
    pub verdict: &'static str,
    pub note: &'static str,
}

fn check_doc(c: &Check) -> CheckDoc {
    CheckDoc {
        criterion: c.criterion,
        name: c.name.clone(),
        passed: c.passed,
        detail: c.detail.clone(),
    }
}

fn sample_doc(s: &SampleReport) -> SampleDoc {
    SampleDoc {
        input: s.input.clone(),
        k_output: s.k_output.clone(),
        g_input: s.g_input.clone(),
        g_answers: s.g_answers.clone(),
        h_outputs: s.h_outputs.clone(),
        verdict: if s.passed { "pass" } else { "fail" },
        note: s.note.clone(),
    }
}

pub fn witness_doc(r: &Report) -> WitnessDoc {
    WitnessDoc {
        reduction: r.reduction.clone(),
        witness: r.witness.clone(),
        sabotage: r.sabotage.label().into(),
        horizon: r.horizon.clone(),
        samples: r.samples.iter().map(sample_doc).collect(),
        summary: SummaryDoc {
            passed: r.passed,
            failed: r.failed,
            verdict: if r.ok() { "not refuted" } else { "refuted" },
            note: SAMPLING_NOTE,
        },
    }
}

pub fn verify_doc(o: &Outcome) -> VerifyDoc {
    VerifyDoc {
        target: o.target.clone(),
        seed: o.seed,
        ok: o.ok(),
        checks: o.checks.iter().map(check_doc).collect(),
        witnesses: o.reports.iter().map(witness_doc).collect(),
    }
}

pub fn to_json(o: &Outcome) -> String {
    serde_json::to_string_pretty(&verify_doc(o)).expect("plain data serializes")
}
