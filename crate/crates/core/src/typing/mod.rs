//! Contexts and typecheckers for the systems S, Sc, Smu and Sfull, with
//! optional recursive type equations.

mod check;
mod context;
mod curry;

pub use check::{check, context_at, infer, infer_derivation, typecheck, Derivation, Rule, System, TypeError};
pub use context::{Context, ContextError};
pub use curry::{curry_typable, curry_type};
