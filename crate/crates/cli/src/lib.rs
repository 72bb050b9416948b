//! Library surface of the command-line harness: configuration loading,
//! model reports and scenario orchestration. The `qnd` binary is a thin
//! argument-parsing wrapper over these.

pub mod config;
pub mod scenario;
