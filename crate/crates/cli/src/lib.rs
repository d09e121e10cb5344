//! Support code for the `csp-comm` command-line tool: structure loading,
//! exit-code mapping, and the fixture checks behind `demo` and the
//! acceptance suite.

pub mod checks;
pub mod demos;
pub mod io;
