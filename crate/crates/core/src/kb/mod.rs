//! Knowledge-base documents: parsing, validation and compilation to a
//! [`Setting`](crate::arguments::Setting).
//!
//! ```text
//! atoms p q r
//! premise p [2]
//! assumption a [1]
//! contrary a = ~p
//! strict s1: p, q -> r
//! defeasible d1 [3]: p => q
//! setting core=aspic mode=ddagger attack=native lifting=weakest-link
//! ```

mod compile;
mod parser;

pub use compile::{compile, load, KnowledgeBase};
pub use parser::{parse_formula, parse_kb};

use crate::formula::{Formula, Rule};

/// 1-based source position; columns count characters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Annotated {
    pub formula: Formula,
    pub value: Option<u32>,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contrary {
    pub of: Formula,
    pub contrary: Formula,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleDecl {
    pub rule: Rule,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SettingEntry {
    pub key: String,
    pub value: String,
    pub pos: Pos,
}

/// Parsed but unvalidated document.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KnowledgeBaseDoc {
    pub atoms: Vec<(String, Pos)>,
    pub premises: Vec<Annotated>,
    pub assumptions: Vec<Annotated>,
    pub contraries: Vec<Contrary>,
    pub strict: Vec<RuleDecl>,
    pub defeasible: Vec<RuleDecl>,
    /// One entry list per `setting` line.
    pub setting: Vec<Vec<SettingEntry>>,
}
