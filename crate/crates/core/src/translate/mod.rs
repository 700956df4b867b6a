//! The `T_A` terms and the two translations: `⋄` from λμ into the
//! λ-calculus with constants, `∘` from the full calculus into λμ.

mod circle;
mod diamond;

pub use circle::{circle, circle_context, circle_typed};
pub use diamond::{diamond, diamond_context, t_term, TranslationEnv};

use crate::types::Type;
use crate::typing::TypeError;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TranslateError {
    #[error("{0} carries no type annotation")]
    MissingAnnotation(String),
    #[error("{0} is outside the lambda-mu calculus")]
    NotLambdaMu(String),
    #[error("type {0} uses /\\ or \\/")]
    NotSimple(Type),
    #[error("the context already declares phi")]
    PhiCollision,
    #[error(transparent)]
    Type(#[from] TypeError),
}
