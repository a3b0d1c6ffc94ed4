//! Forgetting atoms from answer-set programs under here-and-there semantics.
//!
//! Programs are finite sets of extended rules over an explicit signature.
//! Everything is decided by enumerating interpretations as bit masks, so
//! signatures are small by design (see [`limits`]).

mod bits;
pub mod cli;
mod dense;
pub mod error;
pub mod forgetting;
pub mod limits;
pub mod properties;
pub mod relativized;
pub mod semantics;
pub mod syntax;

pub use error::{Error, Result};
pub use forgetting::{ForgettingInstance, OperatorKind};
pub use semantics::{AnswerSets, HtInterpretation, HtModelSet, Interpretation};
pub use syntax::{parse_program, render_program, Program, ProgramClass, Rule, Signature};
