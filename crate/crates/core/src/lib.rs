//! Centering theory for Italian discourse, with incremental resolution of
//! null and overt subjects.
//!
//! The pipeline for one utterance:
//!
//! 1. [`resolver::Resolver`] binds pronouns left to right, applying gender,
//!    agreement and disjoint-reference filters at the token where each cue
//!    appears and flagging garden paths.
//! 2. [`centering::advance`] ranks forward-looking centers, computes the
//!    backward-looking center, classifies the transition and checks R1/R2.
//! 3. [`felicity::judge`] labels the subject form against the transition.
//!
//! [`analysis`] chains the three over a whole document and compares the
//! outcome with the document's expected annotations; [`corpus`] reads and
//! writes the `.cdoc.json` interchange format and bundles the reference
//! examples.

pub mod analysis;
pub mod centering;
pub mod corpus;
pub mod error;
pub mod felicity;
pub mod model;
pub mod resolver;

pub use centering::{CenteringState, Transition};
pub use error::{AdviceError, AnalysisError, CorpusError, ModelError, ResolveError};
pub use felicity::{FelicityLabel, FelicityVerdict, FormAdvice};
pub use model::{Discourse, Entity, EntityId, ExprRef, Utterance, UtteranceId};
pub use resolver::{ResolutionResult, Resolver};
