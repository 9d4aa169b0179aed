//! Library side of the `diffalg` command-line tool: JSON exchange formats
//! and the named verification suites. The binary in `main.rs` is a thin
//! dispatcher over these.

pub mod json;
pub mod suites;
