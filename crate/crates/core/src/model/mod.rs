//! Extended awareness structures.
//!
//! Every world carries its own language `L(s)`, a nonempty subset of the
//! global propositions. Awareness is stored in vocabulary form: agent `i` is
//! aware of a sentence at `s` iff every proposition in it lies in `A_i(s)`.

mod bits;
mod class;
mod enumerate;
mod generate;
mod report;
mod transform;

use alloc::string::String;
use alloc::vec::Vec;

pub use bits::{PropSet, WorldSet};
pub use class::ModelClass;
pub use enumerate::{enumerate_models, estimate_count, EnumBounds, ModelStream};
pub use generate::{default_prop_names, generate_random, GenParams};
pub use report::{validate, PropertyReport, Violation};
pub use transform::{rename_props, swap_model};

use crate::syntax::{AgentId, Prop};

/// Largest number of worlds or propositions a structure may have.
pub const MAX_SIZE: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("a structure needs at least one world and one proposition")]
    Empty,
    #[error("at most {MAX_SIZE} worlds and {MAX_SIZE} propositions are supported")]
    TooLarge,
    #[error("a structure needs at least one agent")]
    NoAgents,
    #[error("duplicate world `{0}`")]
    DuplicateWorld(String),
    #[error("duplicate proposition `{0}`")]
    DuplicateProp(String),
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("unknown proposition `{0}`")]
    UnknownProp(String),
    #[error("unknown agent {0}")]
    UnknownAgent(u32),
    #[error("table sizes do not match the declared worlds and agents")]
    Shape,
    #[error("world `{world}` has an empty language")]
    EmptyLanguage { world: String },
    #[error("proposition `{prop}` is true at `{world}` but not in its language")]
    ValuationOutsideLanguage { world: String, prop: String },
    #[error("agent {agent} is aware of `{prop}` at `{world}`, outside its language")]
    AwarenessOutsideLanguage { agent: AgentId, world: String, prop: String },
    #[error("agent {agent} considers `{to}` possible from `{from}` but awareness differs")]
    AwarenessNotKnown { agent: AgentId, from: String, to: String },
    #[error("agent {agent} is aware of `{prop}` at `{from}` but `{to}`, which it considers possible, lacks it")]
    LanguageContainment { agent: AgentId, from: String, to: String, prop: String },
    #[error("renaming maps two propositions to `{0}`")]
    NotInjective(String),
    #[error("cannot swap a proposition with itself")]
    SwapSelf,
    #[error("enumeration would produce about {estimate} structures, above the cap of {cap}")]
    EnumerationTooLarge { estimate: u128, cap: u128 },
}

/// The raw tables of a structure, indexed by world and agent slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureParts {
    pub agents: usize,
    pub props: Vec<Prop>,
    pub worlds: Vec<String>,
    /// `L(s)` per world.
    pub lang: Vec<PropSet>,
    /// The propositions true at each world.
    pub val: Vec<PropSet>,
    /// `A_i(s)`, indexed `[agent slot][world]`.
    pub aware: Vec<Vec<PropSet>>,
    /// `K_i(s)`, indexed `[agent slot][world]`.
    pub succ: Vec<Vec<WorldSet>>,
}

/// An extended awareness structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Structure {
    parts: StructureParts,
}

impl Structure {
    /// Builds a structure enforcing every invariant, including that agents
    /// know what they are aware of and that awareness stays inside the
    /// languages of accessible worlds.
    pub fn new(parts: StructureParts) -> Result<Self, ModelError> {
        let s = Self::new_relaxed(parts)?;
        s.check_awareness()?;
        Ok(s)
    }

    /// Builds a structure enforcing only the per-world invariants
    /// (nonempty language, valuation and awareness inside the language).
    /// [`validate`] reports the remaining properties.
    pub fn new_relaxed(parts: StructureParts) -> Result<Self, ModelError> {
        let n = parts.worlds.len();
        if n == 0 || parts.props.is_empty() {
            return Err(ModelError::Empty);
        }
        if n > MAX_SIZE || parts.props.len() > MAX_SIZE {
            return Err(ModelError::TooLarge);
        }
        if parts.agents == 0 {
            return Err(ModelError::NoAgents);
        }
        if parts.lang.len() != n
            || parts.val.len() != n
            || parts.aware.len() != parts.agents
            || parts.succ.len() != parts.agents
            || parts.aware.iter().any(|a| a.len() != n)
            || parts.succ.iter().any(|r| r.len() != n)
        {
            return Err(ModelError::Shape);
        }
        for (i, w) in parts.worlds.iter().enumerate() {
            if parts.worlds[..i].contains(w) {
                return Err(ModelError::DuplicateWorld(w.clone()));
            }
        }
        for (i, p) in parts.props.iter().enumerate() {
            if parts.props[..i].contains(p) {
                return Err(ModelError::DuplicateProp(p.name().into()));
            }
        }
        let all_props = PropSet::full(parts.props.len());
        let all_worlds = WorldSet::full(n);
        let prop_name = |set: PropSet| -> String { parts.props[set.iter().next().unwrap()].name().into() };
        for w in 0..n {
            let lang = parts.lang[w];
            if lang.is_empty() {
                return Err(ModelError::EmptyLanguage { world: parts.worlds[w].clone() });
            }
            if !lang.is_subset(all_props) {
                return Err(ModelError::Shape);
            }
            let stray = parts.val[w].difference(lang);
            if !stray.is_empty() {
                return Err(ModelError::ValuationOutsideLanguage {
                    world: parts.worlds[w].clone(),
                    prop: prop_name(stray),
                });
            }
            for a in 0..parts.agents {
                let stray = parts.aware[a][w].difference(lang);
                if !stray.is_empty() {
                    return Err(ModelError::AwarenessOutsideLanguage {
                        agent: AgentId::from_slot(a),
                        world: parts.worlds[w].clone(),
                        prop: prop_name(stray),
                    });
                }
                if !parts.succ[a][w].is_subset(all_worlds) {
                    return Err(ModelError::Shape);
                }
            }
        }
        Ok(Structure { parts })
    }

    /// Internal constructor for generators that build valid tables.
    pub(crate) fn from_parts_unchecked(parts: StructureParts) -> Self {
        debug_assert!(Structure::new(parts.clone()).is_ok());
        Structure { parts }
    }

    /// The first violation of knowing-awareness or language containment.
    pub fn check_awareness(&self) -> Result<(), ModelError> {
        let p = &self.parts;
        for a in 0..p.agents {
            for s in 0..self.world_count() {
                for t in p.succ[a][s].iter() {
                    if p.aware[a][s] != p.aware[a][t] {
                        return Err(ModelError::AwarenessNotKnown {
                            agent: AgentId::from_slot(a),
                            from: p.worlds[s].clone(),
                            to: p.worlds[t].clone(),
                        });
                    }
                    let missing = p.aware[a][s].difference(p.lang[t]);
                    if let Some(q) = missing.iter().next() {
                        return Err(ModelError::LanguageContainment {
                            agent: AgentId::from_slot(a),
                            from: p.worlds[s].clone(),
                            to: p.worlds[t].clone(),
                            prop: p.props[q].name().into(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn parts(&self) -> &StructureParts {
        &self.parts
    }

    pub fn into_parts(self) -> StructureParts {
        self.parts
    }

    pub fn agents(&self) -> usize {
        self.parts.agents
    }

    pub fn props(&self) -> &[Prop] {
        &self.parts.props
    }

    pub fn world_names(&self) -> &[String] {
        &self.parts.worlds
    }

    pub fn world_count(&self) -> usize {
        self.parts.worlds.len()
    }

    pub fn all_worlds(&self) -> WorldSet {
        WorldSet::full(self.world_count())
    }

    pub fn all_props(&self) -> PropSet {
        PropSet::full(self.parts.props.len())
    }

    pub fn world_index(&self, name: &str) -> Option<usize> {
        self.parts.worlds.iter().position(|w| w == name)
    }

    pub fn prop_index(&self, p: &Prop) -> Option<usize> {
        self.parts.props.iter().position(|q| q == p)
    }

    /// Maps proposition names to a set; `None` if some name is not in `Φ`.
    pub fn prop_set<'a, I: IntoIterator<Item = &'a Prop>>(&self, props: I) -> Option<PropSet> {
        let mut s = PropSet::EMPTY;
        for p in props {
            s.insert(self.prop_index(p)?);
        }
        Some(s)
    }

    pub fn prop_names(&self, set: PropSet) -> Vec<Prop> {
        set.iter().map(|i| self.parts.props[i].clone()).collect()
    }

    pub fn lang(&self, world: usize) -> PropSet {
        self.parts.lang[world]
    }

    pub fn val(&self, world: usize) -> PropSet {
        self.parts.val[world]
    }

    pub fn aware(&self, agent: AgentId, world: usize) -> PropSet {
        self.parts.aware[agent.slot()][world]
    }

    pub fn succ(&self, agent: AgentId, world: usize) -> WorldSet {
        self.parts.succ[agent.slot()][world]
    }

    /// Worlds whose language contains `vocab`.
    pub fn defined_on(&self, vocab: PropSet) -> WorldSet {
        let mut out = WorldSet::EMPTY;
        for (w, l) in self.parts.lang.iter().enumerate() {
            if vocab.is_subset(*l) {
                out.insert(w);
            }
        }
        out
    }

    /// True when every world has the full language `Φ`.
    pub fn is_constant_language(&self) -> bool {
        let all = self.all_props();
        self.parts.lang.iter().all(|l| *l == all)
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    //! The two counterexample structures used throughout the tests.

    use super::*;
    use alloc::vec;

    fn props(names: &[&str]) -> Vec<Prop> {
        names.iter().map(|n| Prop::new(n)).collect()
    }

    /// Worlds `s` (language `{p}`) and `t` (language `{p, q}`), agent 1
    /// considers both possible from both and is aware of `p` only.
    pub fn barcan() -> Structure {
        Structure::new(StructureParts {
            agents: 1,
            props: props(&["p", "q"]),
            worlds: vec!["s".into(), "t".into()],
            lang: vec![PropSet(0b01), PropSet(0b11)],
            val: vec![PropSet(0b01), PropSet(0b11)],
            aware: vec![vec![PropSet(0b01), PropSet(0b01)]],
            succ: vec![vec![WorldSet(0b11), WorldSet(0b11)]],
        })
        .unwrap()
    }

    /// From `s`, agent 1 considers `t1` (language `{p}`) and `t2`
    /// (language `{p, q}`) possible, and is aware of `p` everywhere.
    pub fn uncertainty() -> Structure {
        Structure::new(StructureParts {
            agents: 1,
            props: props(&["p", "q"]),
            worlds: vec!["s".into(), "t1".into(), "t2".into()],
            lang: vec![PropSet(0b01), PropSet(0b01), PropSet(0b11)],
            val: vec![PropSet(0b01), PropSet(0b01), PropSet(0b11)],
            aware: vec![vec![PropSet(0b01); 3]],
            succ: vec![vec![WorldSet(0b110), WorldSet::EMPTY, WorldSet::EMPTY]],
        })
        .unwrap()
    }
}
