//! Library backing the `qmr` binary: config parsing, sweep execution, and
//! the validation battery. Kept as a library so the pieces are unit-testable
//! without spawning processes.

pub mod config;
pub mod runner;
pub mod validate;
