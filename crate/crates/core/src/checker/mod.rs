//! Three-valued evaluation.
//!
//! A sentence is undefined at a world whose language misses part of its
//! vocabulary. The propositional quantifier ranges over an infinite set of
//! quantifier-free sentences; it is decided by grouping those sentences by
//! their truth profile (vocabulary plus the set of worlds where they hold),
//! of which a finite model has only finitely many. The realizable profiles
//! are the least set containing the primitive propositions and closed under
//! the domain's operators, see [`realizable_profiles`]. Evaluation is
//! global: each subformula is computed as the set of worlds where it holds.

mod eval;
mod hr;
mod oracle;
mod profiles;

use core::fmt;
use core::str::FromStr;

pub use eval::{Evaluator, Validity, Witness};
pub use hr::hr_eval;
pub use oracle::{
    brute_force_classes, brute_force_forall, brute_force_with, enumerate_sentences, is_stabilized, stabilization_depth,
    ClassCorpus, OracleReport, SentenceCorpus,
};
pub use profiles::{realizable_profiles, Profile, ProfileSet};

use crate::syntax::{AgentId, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TruthValue {
    True,
    False,
    Undefined,
}

impl TruthValue {
    pub fn is_true(self) -> bool {
        self == TruthValue::True
    }

    pub fn is_false(self) -> bool {
        self == TruthValue::False
    }

    pub(crate) fn at(defined: crate::model::WorldSet, truth: crate::model::WorldSet, world: usize) -> Self {
        if !defined.contains(world) {
            TruthValue::Undefined
        } else if truth.contains(world) {
            TruthValue::True
        } else {
            TruthValue::False
        }
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TruthValue::True => "True",
            TruthValue::False => "False",
            TruthValue::Undefined => "Undefined",
        })
    }
}

/// The operators that build the sentences a quantifier ranges over.
/// Negation and conjunction are on in every preset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuantifierDomain {
    pub not: bool,
    pub and: bool,
    pub k: bool,
    pub a: bool,
    pub x: bool,
    /// Whether the constant `true` is a member of the domain.
    pub include_top: bool,
}

impl QuantifierDomain {
    /// Sentences built with `K`, `X` and `A`.
    pub const KXA: Self = QuantifierDomain { not: true, and: true, k: true, a: true, x: true, include_top: false };
    /// Sentences built with `X` and `A` only.
    pub const XA: Self = QuantifierDomain { not: true, and: true, k: false, a: true, x: true, include_top: false };
    /// Sentences built with `K` only, the language where awareness is
    /// expressed through `A*`.
    pub const K: Self = QuantifierDomain { not: true, and: true, k: true, a: false, x: false, include_top: false };

    pub fn with_top(mut self, include_top: bool) -> Self {
        self.include_top = include_top;
        self
    }

    pub fn is_empty(&self) -> bool {
        !(self.not || self.and || self.k || self.a || self.x)
    }
}

impl Default for QuantifierDomain {
    fn default() -> Self {
        QuantifierDomain::KXA
    }
}

impl fmt::Display for QuantifierDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let full = self.not && self.and;
        for (on, c) in [(self.not && !full, '!'), (self.and && !full, '&'), (self.k, 'K'), (self.x, 'X'), (self.a, 'A')] {
            if on {
                write!(f, "{c}")?;
            }
        }
        if !self.k && !self.x && !self.a && full {
            f.write_str("!&")?;
        }
        if self.include_top {
            f.write_str("+top")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown quantifier domain `{0}`; expected letters from K, X, A and optionally ! and &")]
pub struct ParseDomainError(pub alloc::string::String);

impl FromStr for QuantifierDomain {
    type Err = ParseDomainError;

    /// Letters `K`, `X`, `A` select modal operators. Negation and
    /// conjunction are included unless `!` or `&` is given explicitly, in
    /// which case only the listed ones are. A `+top` suffix adds `true`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseDomainError(s.into());
        let (ops, top) = match s.strip_suffix("+top") {
            Some(rest) => (rest, true),
            None => (s, false),
        };
        let mut d = QuantifierDomain { not: false, and: false, k: false, a: false, x: false, include_top: top };
        let mut explicit = false;
        for ch in ops.chars() {
            match ch {
                'K' => d.k = true,
                'X' => d.x = true,
                'A' => d.a = true,
                '!' => (d.not, explicit) = (true, true),
                '&' => (d.and, explicit) = (true, true),
                _ => return Err(err()),
            }
        }
        if !explicit {
            d.not = true;
            d.and = true;
        }
        if d.is_empty() {
            return Err(err());
        }
        Ok(d)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CheckError {
    #[error("variable {0} is free; only sentences can be evaluated")]
    NotASentence(Var),
    #[error("agent {0} is not in the structure")]
    UnknownAgent(AgentId),
    #[error("world index {0} is out of range")]
    UnknownWorld(usize),
    #[error("more than 64 quantifiers in one formula")]
    TooManyBinders,
    #[error("the two-valued evaluator needs every world to have the full language")]
    NotConstantLanguage,
    #[error("the oracle needs a formula whose only free variable is {0}")]
    OracleShape(Var),
    #[error("the oracle would enumerate more than {cap} sentences")]
    ResourceCap { cap: usize },
}
