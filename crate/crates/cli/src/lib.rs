//! Library side of the `hlzeta` command: argument parsing, single and batch
//! evaluation, the identity suite and value tables.

pub mod batch;
pub mod complex;
pub mod eval;
pub mod table;
pub mod verify;
