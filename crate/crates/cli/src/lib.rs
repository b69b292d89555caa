//! Library surface of the experiment harness: config parsing, report
//! serialization, the experiment runners and the acceptance suite.

pub mod config;
pub mod experiments;
pub mod report;
pub mod suite;
