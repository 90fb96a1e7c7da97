//! JSON formats for structures and proof scripts.
//!
//! A structure:
//!
//! ```json
//! {"agents": 1, "props": ["p", "q"],
//!  "worlds": [{"id": "s", "lang": ["p"], "true": ["p"], "aware": {"1": ["p"]}}],
//!  "relations": {"1": [["s", "s"]]}}
//! ```
//!
//! A missing `aware` entry or relation list is empty. A proof script lists
//! lines with 1-based premise numbers:
//!
//! ```json
//! {"system": "AXe_XAforall", "lines": [
//!   {"formula": "p | !p", "just": {"axiom": "Prop"}},
//!   {"formula": "A1 (p | !p) -> X1 (p | !p)", "just": {"rule": "Gen_X", "from": [1], "agent": 1}}]}
//! ```
//!
//! `Gen_forall` lines also give `"q"` and `"x"`.

use std::collections::BTreeMap;

use aware_core::model::{ModelError, PropSet, StructureParts, WorldSet};
use aware_core::proofs::{AxiomName, AxiomSystem, Justification, ProofLine, ProofScript, Rule, SystemError};
use aware_core::syntax::{parse, SyntaxError};
use aware_core::{AgentId, Prop, Structure, Var};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid structure: {0}")]
    Model(#[from] ModelError),
    #[error("agent key `{0}` is not a number")]
    AgentKey(String),
    #[error("{0}")]
    System(#[from] SystemError),
    #[error("line {line}: cannot parse formula: {source}")]
    Formula { line: usize, source: SyntaxError },
    #[error("line {line}: {message}")]
    Justification { line: usize, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub agents: usize,
    pub props: Vec<String>,
    pub worlds: Vec<WorldEntry>,
    #[serde(default)]
    pub relations: BTreeMap<String, Vec<[String; 2]>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorldEntry {
    pub id: String,
    pub lang: Vec<String>,
    #[serde(rename = "true", default)]
    pub truths: Vec<String>,
    #[serde(default)]
    pub aware: BTreeMap<String, Vec<String>>,
}

fn agent_slot(key: &str, agents: usize) -> Result<usize, FormatError> {
    let n: u32 = key.trim().parse().map_err(|_| FormatError::AgentKey(key.to_string()))?;
    if n == 0 || n as usize > agents {
        return Err(ModelError::UnknownAgent(n).into());
    }
    Ok(n as usize - 1)
}

impl ModelFile {
    /// Builds the structure, reporting the first broken invariant.
    pub fn to_structure(&self) -> Result<Structure, FormatError> {
        let props: Vec<Prop> = self.props.iter().map(|p| Prop::new(p)).collect();
        let prop_set = |names: &[String]| -> Result<PropSet, FormatError> {
            let mut s = PropSet::EMPTY;
            for n in names {
                let i = self.props.iter().position(|p| p == n).ok_or_else(|| ModelError::UnknownProp(n.clone()))?;
                s.insert(i);
            }
            Ok(s)
        };
        let world = |id: &str| -> Result<usize, FormatError> {
            self.worlds.iter().position(|w| w.id == id).ok_or_else(|| ModelError::UnknownWorld(id.into()).into())
        };
        let n = self.worlds.len();
        let mut aware = vec![vec![PropSet::EMPTY; n]; self.agents];
        let mut succ = vec![vec![WorldSet::EMPTY; n]; self.agents];
        let mut lang = Vec::with_capacity(n);
        let mut val = Vec::with_capacity(n);
        for (w, entry) in self.worlds.iter().enumerate() {
            lang.push(prop_set(&entry.lang)?);
            val.push(prop_set(&entry.truths)?);
            for (key, names) in &entry.aware {
                aware[agent_slot(key, self.agents)?][w] = prop_set(names)?;
            }
        }
        for (key, pairs) in &self.relations {
            let slot = agent_slot(key, self.agents)?;
            for [s, t] in pairs {
                let (s, t) = (world(s)?, world(t)?);
                succ[slot][s].insert(t);
            }
        }
        let worlds = self.worlds.iter().map(|w| w.id.clone()).collect();
        let parts = StructureParts { agents: self.agents, props, worlds, lang, val, aware, succ };
        Ok(Structure::new(parts)?)
    }

    pub fn from_structure(m: &Structure) -> Self {
        let names = |s: PropSet| m.prop_names(s).iter().map(|p| p.name().to_string()).collect::<Vec<_>>();
        let agents: Vec<AgentId> = (0..m.agents()).map(AgentId::from_slot).collect();
        let worlds = (0..m.world_count())
            .map(|w| WorldEntry {
                id: m.world_names()[w].clone(),
                lang: names(m.lang(w)),
                truths: names(m.val(w)),
                aware: agents.iter().map(|&i| (i.to_string(), names(m.aware(i, w)))).collect(),
            })
            .collect();
        let relations = agents
            .iter()
            .map(|&i| {
                let pairs = (0..m.world_count())
                    .flat_map(|s| {
                        m.succ(i, s).iter().map(move |t| [m.world_names()[s].clone(), m.world_names()[t].clone()])
                    })
                    .collect();
                (i.to_string(), pairs)
            })
            .collect();
        ModelFile {
            agents: m.agents(),
            props: m.props().iter().map(|p| p.name().to_string()).collect(),
            worlds,
            relations,
        }
    }
}

pub fn read_model(text: &str) -> Result<Structure, FormatError> {
    serde_json::from_str::<ModelFile>(text)?.to_structure()
}

pub fn write_model(m: &Structure) -> String {
    serde_json::to_string_pretty(&ModelFile::from_structure(m)).expect("model serializes")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProofFile {
    pub system: String,
    pub lines: Vec<LineEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineEntry {
    pub formula: String,
    pub just: JustEntry,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JustEntry {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axiom: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rule: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub from: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agent: Option<u16>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<String>,
}

/// Formulas in proof files may mention any agent index.
const PROOF_AGENTS: u16 = u16::MAX;

impl ProofFile {
    pub fn to_script(&self) -> Result<(AxiomSystem, ProofScript), FormatError> {
        let system = AxiomSystem::named(&self.system)?;
        let mut script = ProofScript::new();
        for (idx, entry) in self.lines.iter().enumerate() {
            let line = idx + 1;
            let formula =
                parse(&entry.formula, PROOF_AGENTS).map_err(|source| FormatError::Formula { line, source })?;
            let bad = |message: String| FormatError::Justification { line, message };
            let j = &entry.just;
            let just = match (&j.axiom, &j.rule) {
                (Some(a), None) => {
                    if !j.from.is_empty() || j.agent.is_some() || j.q.is_some() || j.x.is_some() {
                        return Err(bad("an axiom line takes no premises or auxiliary data".into()));
                    }
                    Justification::Axiom(a.parse::<AxiomName>().map_err(|e| bad(e.to_string()))?)
                }
                (None, Some(r)) => Justification::Rule {
                    rule: r.parse::<Rule>().map_err(|e| bad(e.to_string()))?,
                    from: j.from.clone(),
                    agent: match j.agent {
                        Some(n) => Some(AgentId::new(n).ok_or_else(|| bad("agent indices start at 1".into()))?),
                        None => None,
                    },
                    q: j.q.as_deref().map(Prop::new),
                    x: j.x.as_deref().map(|x| Var::new(x.strip_prefix('#').unwrap_or(x))),
                },
                _ => return Err(bad("justification needs exactly one of `axiom` and `rule`".into())),
            };
            script.push(formula, just);
        }
        Ok((system, script))
    }

    pub fn from_script(system: &AxiomSystem, script: &ProofScript) -> Self {
        let lines = script
            .lines
            .iter()
            .map(|ProofLine { formula, just }| LineEntry {
                formula: formula.to_string(),
                just: match just {
                    Justification::Axiom(a) => JustEntry { axiom: Some(a.to_string()), ..JustEntry::default() },
                    Justification::Rule { rule, from, agent, q, x } => JustEntry {
                        rule: Some(rule.to_string()),
                        from: from.clone(),
                        agent: agent.map(AgentId::index),
                        q: q.as_ref().map(|q| q.name().to_string()),
                        x: x.as_ref().map(|x| x.name().to_string()),
                        ..JustEntry::default()
                    },
                },
            })
            .collect();
        ProofFile { system: system.name.clone(), lines }
    }
}

pub fn read_proof(text: &str) -> Result<(AxiomSystem, ProofScript), FormatError> {
    serde_json::from_str::<ProofFile>(text)?.to_script()
}

pub fn write_proof(system: &AxiomSystem, script: &ProofScript) -> String {
    serde_json::to_string_pretty(&ProofFile::from_script(system, script)).expect("proof serializes")
}
