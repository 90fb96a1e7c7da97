//! Formulas with their text syntax and substitution.

mod formula;
mod parse;
mod print;
mod subst;

use alloc::string::String;

pub use formula::{AgentId, Formula, Prop, Var};
pub use parse::parse;
pub use subst::{abstract_prop, rename_props, subst_prop, subst_var, swap_props};
pub(crate) use subst::replace_var;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SyntaxError {
    #[error("unexpected `{found}` at offset {pos}")]
    Unexpected { pos: usize, found: String },
    #[error("unexpected end of input at offset {pos}")]
    UnexpectedEnd { pos: usize },
    #[error("missing agent index at offset {pos}")]
    MissingAgent { pos: usize },
    #[error("agent {index} at offset {pos} is out of range 1..={agents}")]
    AgentOutOfRange { pos: usize, index: u32, agents: u16 },
    #[error("substituted formula must be quantifier-free")]
    NotQuantifierFree,
    #[error("substituted formula must be a sentence")]
    NotASentence,
}
