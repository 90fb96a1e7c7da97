use super::{Structure, WorldSet};
use crate::syntax::AgentId;

/// A concrete reason a structural property fails. World and proposition
/// fields are indices into the structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `(world, world)` is missing.
    NotReflexive { agent: AgentId, world: usize },
    /// `(s,t)` and `(t,u)` are present but `(s,u)` is not.
    NotTransitive { agent: AgentId, s: usize, t: usize, u: usize },
    /// `(s,t)` and `(s,u)` are present but `(t,u)` is not.
    NotEuclidean { agent: AgentId, s: usize, t: usize, u: usize },
    /// `(s,t)` is present but `A_i(s) != A_i(t)`.
    AwarenessNotKnown { agent: AgentId, s: usize, t: usize },
    /// `(s,t)` is present and `prop` is in `A_i(s)` but not `L(t)`.
    LanguageContainment { agent: AgentId, s: usize, t: usize, prop: usize },
    /// The agent is unaware of `prop` at `world`, yet every world it
    /// considers possible there has `prop` in its language.
    UnlabeledUnawareness { agent: AgentId, world: usize, prop: usize },
}

/// Structural properties of a structure. `None` means the property holds;
/// otherwise the first counterexample in enumeration order (agent, then
/// worlds, then propositions, all ascending).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PropertyReport {
    pub reflexive: Option<Violation>,
    pub transitive: Option<Violation>,
    pub euclidean: Option<Violation>,
    pub knows_awareness: Option<Violation>,
    pub containment: Option<Violation>,
    pub la: Option<Violation>,
}

impl PropertyReport {
    pub fn is_reflexive(&self) -> bool {
        self.reflexive.is_none()
    }

    pub fn is_transitive(&self) -> bool {
        self.transitive.is_none()
    }

    pub fn is_euclidean(&self) -> bool {
        self.euclidean.is_none()
    }

    pub fn knows_awareness(&self) -> bool {
        self.knows_awareness.is_none()
    }

    pub fn has_containment(&self) -> bool {
        self.containment.is_none()
    }

    pub fn has_la(&self) -> bool {
        self.la.is_none()
    }

    /// Whether the structure belongs to `class` and satisfies the awareness
    /// constraints every class requires.
    pub fn in_class(&self, class: &super::ModelClass) -> bool {
        self.knows_awareness()
            && self.has_containment()
            && (!class.reflexive || self.is_reflexive())
            && (!class.transitive || self.is_transitive())
            && (!class.euclidean || self.is_euclidean())
    }
}

/// Checks each property by exhaustive search over the finite structure.
pub fn validate(m: &Structure) -> PropertyReport {
    let mut r = PropertyReport::default();
    let n = m.world_count();
    for slot in 0..m.agents() {
        let agent = AgentId::from_slot(slot);
        let succ = |s: usize| m.succ(agent, s);
        for s in 0..n {
            if r.reflexive.is_none() && !succ(s).contains(s) {
                r.reflexive = Some(Violation::NotReflexive { agent, world: s });
            }
            for t in succ(s).iter() {
                if r.transitive.is_none() {
                    if let Some(u) = succ(t).difference(succ(s)).iter().next() {
                        r.transitive = Some(Violation::NotTransitive { agent, s, t, u });
                    }
                }
                if r.euclidean.is_none() {
                    if let Some(u) = succ(s).difference(succ(t)).iter().next() {
                        r.euclidean = Some(Violation::NotEuclidean { agent, s, t, u });
                    }
                }
                if r.knows_awareness.is_none() && m.aware(agent, s) != m.aware(agent, t) {
                    r.knows_awareness = Some(Violation::AwarenessNotKnown { agent, s, t });
                }
                if r.containment.is_none() {
                    if let Some(prop) = m.aware(agent, s).difference(m.lang(t)).iter().next() {
                        r.containment = Some(Violation::LanguageContainment { agent, s, t, prop });
                    }
                }
            }
            if r.la.is_none() {
                let everywhere = succ(s).iter().fold(m.all_props(), |acc, t| acc.intersection(m.lang(t)));
                let unaware = m.all_props().difference(m.aware(agent, s));
                if let Some(prop) = unaware.intersection(everywhere).iter().next() {
                    r.la = Some(Violation::UnlabeledUnawareness { agent, world: s, prop });
                }
            }
        }
    }
    r
}

/// Weakly connected components of one agent's relation, as world sets in
/// order of their smallest member.
pub(crate) fn components(succ: &[WorldSet]) -> alloc::vec::Vec<WorldSet> {
    let n = succ.len();
    let mut undirected: alloc::vec::Vec<WorldSet> = succ.to_vec();
    for (s, out) in succ.iter().enumerate() {
        for t in out.iter() {
            undirected[t].insert(s);
        }
    }
    let mut seen = WorldSet::EMPTY;
    let mut out = alloc::vec::Vec::new();
    for start in 0..n {
        if seen.contains(start) {
            continue;
        }
        let mut comp = WorldSet::singleton(start);
        let mut frontier = comp;
        while !frontier.is_empty() {
            let mut next = WorldSet::EMPTY;
            for w in frontier.iter() {
                next = next.union(undirected[w]);
            }
            frontier = next.difference(comp);
            comp = comp.union(next);
        }
        seen = seen.union(comp);
        out.push(comp);
    }
    out
}
