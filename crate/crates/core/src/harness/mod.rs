//! Executable checks of the strong-normalization results, and the typed
//! term corpora they run on.

mod corpus;
mod lemmas;
mod random;
mod report;
mod verify;

pub use corpus::{enumerate_typed_terms, CorpusItem, CorpusSpec, Generation};
pub use lemmas::*;
pub use random::{random_trace, RandomGen};
pub use report::{Failure, LemmaReport, Outcome};
pub use verify::{full_preset, run_lemma, sn_sweep_size, sn_sweep_spec, with_equations, VerifyOptions, LEMMAS};
