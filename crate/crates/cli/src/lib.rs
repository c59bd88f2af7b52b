//! Library surface of the scenario runner, shared by the `ds2` binary
//! and the integration tests.

pub mod config;
pub mod runner;
pub mod snapshot;
