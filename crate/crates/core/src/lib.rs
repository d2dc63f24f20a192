//! Structured argumentation over pluggable deducibility relations.
//!
//! Arguments are premise-conclusion pairs `(Γ, γ)` produced by a
//! [`deduction::DeducibilityCore`]; attacks come from a contrariness function
//! and an attack-point function; extensions come from Dung semantics. The
//! [`metatheory`] module checks relevance and cumulativity postulates on
//! concrete and randomly generated knowledge bases.

pub mod arguments;
pub mod classical;
pub mod contrariness;
pub mod deduction;
pub mod error;
pub mod export;
pub mod formula;
pub mod kb;
pub mod metatheory;
pub mod priorities;
pub mod semantics;

pub use error::{Error, Result};
pub use formula::{Formula, Rule, RuleKind};
