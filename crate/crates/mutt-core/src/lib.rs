//! Kernel for a multi-sorted dependent type theory with rewrite rules.
//!
//! The theory is parametrized by a set of universe hierarchies (sorts) and a
//! signature of inert and active constants; active constants compute through
//! user-supplied rewrite rules that the signature checker validates (typing,
//! determinism, progress, linearizability, isolation). Conversion and typing
//! are algorithmic; `prelude` ships ready-made parametrizations and `merge`
//! combines independent extensions of a common base.

pub mod convert;
pub mod diag;
pub mod merge;
pub mod prelude;
pub mod reduce;
pub mod sig;
pub mod syntax;
pub mod typing;
