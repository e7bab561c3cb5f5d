//! Canonical forms of symmetric pencils over finite fields, with solvers for
//! the one- and two-secret isomorphism-of-polynomials problems.

pub mod algebra;
pub mod bench;
pub mod error;
pub mod gen;
pub mod io;
pub mod ip2s;
pub mod kronecker;
mod linalg;
pub mod pencil;
pub mod regular;

pub use error::{Error, Result};
