//! Common composites of univariate polynomials.
//!
//! Given `f1`, `f2` over a field `K`, decide whether some `h = g1(f1) = g2(f2)`
//! exists, construct the minimal one, or produce a machine-checkable reason
//! why none can. Supported fields are F_p, F_{p^n} and Q, all exact.

pub mod analyze;
pub mod arith;
pub mod closure;
pub mod error;
pub mod families;
pub mod field;
pub mod format;
pub mod linalg;
pub mod poly;
mod print;
pub mod refute;
pub mod search;

pub use error::{Error, Result};
pub use field::{make_extension, FieldElement, FieldKind, FieldSpec};
pub use poly::{parse_poly, Polynomial, RootWithMultiplicity};
