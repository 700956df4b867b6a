//! Workbench for the simply typed λ-calculus, the λμ-calculus, and the λμ-calculus
//! with conjunction and disjunction: reduction, typing, translations between
//! them, and executable checks of their strong-normalization properties.

pub mod harness;
pub mod reduce;
pub mod syntax;
pub mod translate;
pub mod types;
pub mod typing;
