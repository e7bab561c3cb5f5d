//! Finite fields, extensions, polynomials, matrices and truncated local rings.

pub mod factor;
pub mod field;
pub mod local;
pub mod matrix;
pub mod poly;
pub mod sqrt;

pub use factor::{factor, factor_with_rng, is_irreducible, roots};
pub use field::{ExtField, Fe, Field, Fq};
pub use local::{hensel_root, local_sqrt, LocalElem, LocalRing};
pub use matrix::{companion_matrix, dot, dual_trace_sequence, trace_form_matrix, Matrix};
pub use poly::Poly;
pub use sqrt::{field_nonsquare, field_sqrt, trace_norm};
