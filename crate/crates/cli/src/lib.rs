//! Pieces of the command-line tool that are also driven directly by the
//! acceptance tests.

pub mod sweep;
