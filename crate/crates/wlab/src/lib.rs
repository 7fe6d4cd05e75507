//! Command-line laboratory over `wlab-core`: loading the shipped knowledge
//! base, the acceptance suites and their JSON reports.

pub mod cli;
pub mod data;
pub mod report;
pub mod suites;
