//! Defeasible entailment over finite propositional conditional knowledge
//! bases.
//!
//! Six consequence relations are implemented: rational closure,
//! lexicographic closure, the multipreference (MP) closure, basic and
//! minimal relevant closure, and the ranked refinement of the MP closure
//! (MP^R). The syntactic engines in [`closures`] and the model-based
//! engines in [`semantics`] are cross-checked against each other by the
//! [`harness`].
//!
//! Default indices are 0-based everywhere.

pub mod closures;
pub mod defaults;
pub mod error;
pub mod examples;
pub mod harness;
pub mod kb;
pub mod prop;
pub mod ranking;
mod reasoner;
pub mod semantics;

pub use closures::{RelevantVariant, Seriousness};
pub use defaults::DefaultSet;
pub use error::{Error, Result};
pub use kb::{Conditional, KnowledgeBase};
pub use prop::{Formula, Signature, Valuation};
pub use ranking::{Rank, RankingTable};
pub use reasoner::{Evidence, Limits, Method, QueryOutcome, Reasoner};
