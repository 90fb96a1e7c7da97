use alloc::vec;
use alloc::vec::Vec;
use core::cell::OnceCell;

use super::profiles::{realizable_profiles, ProfileSet};
use super::{CheckError, QuantifierDomain, TruthValue};
use crate::model::{PropSet, Structure, WorldSet};
use crate::syntax::{replace_var, AgentId, Formula, Var};

/// A formula compiled against one structure: propositions become indices
/// and each binder gets its own environment slot.
pub(crate) struct Compiled {
    nodes: Vec<Node>,
    root: usize,
    slots: usize,
}

struct Node {
    kind: Kind,
    /// Worlds whose language covers the node's own propositions; empty if
    /// a proposition is not in the structure at all.
    def: WorldSet,
    props: PropSet,
    /// Environment slots occurring free below this node.
    free: u64,
}

enum Kind {
    Top,
    Prop(usize),
    Var(usize),
    Not(usize),
    And(usize, usize),
    K(AgentId, usize),
    A(AgentId, usize),
    X(AgentId, usize),
    Forall { slot: usize, body: usize, var: Var, body_formula: Formula },
}

impl Compiled {
    pub(crate) fn new(m: &Structure, f: &Formula) -> Result<Self, CheckError> {
        let mut c = Compiled { nodes: Vec::new(), root: 0, slots: 0 };
        let mut scope = Vec::new();
        c.root = c.add(m, f, &mut scope)?;
        Ok(c)
    }

    fn add(&mut self, m: &Structure, f: &Formula, scope: &mut Vec<(Var, usize)>) -> Result<usize, CheckError> {
        let check_agent = |i: &AgentId| {
            if i.slot() < m.agents() {
                Ok(*i)
            } else {
                Err(CheckError::UnknownAgent(*i))
            }
        };
        let all = m.all_worlds();
        let (kind, def, props, free) = match f {
            Formula::Top => (Kind::Top, all, PropSet::EMPTY, 0),
            Formula::Prop(p) => match m.prop_index(p) {
                Some(i) => (Kind::Prop(i), m.defined_on(PropSet::singleton(i)), PropSet::singleton(i), 0),
                None => (Kind::Top, WorldSet::EMPTY, PropSet::EMPTY, 0),
            },
            Formula::Var(v) => {
                let slot = scope
                    .iter()
                    .rev()
                    .find(|(name, _)| name == v)
                    .map(|(_, s)| *s)
                    .ok_or_else(|| CheckError::NotASentence(v.clone()))?;
                (Kind::Var(slot), all, PropSet::EMPTY, 1u64 << slot)
            }
            Formula::Not(a) => {
                let a = self.add(m, a, scope)?;
                (Kind::Not(a), self.nodes[a].def, self.nodes[a].props, self.nodes[a].free)
            }
            Formula::And(a, b) => {
                let a = self.add(m, a, scope)?;
                let b = self.add(m, b, scope)?;
                let (na, nb) = (&self.nodes[a], &self.nodes[b]);
                (Kind::And(a, b), na.def.intersection(nb.def), na.props.union(nb.props), na.free | nb.free)
            }
            Formula::K(i, a) | Formula::A(i, a) | Formula::X(i, a) => {
                let i = check_agent(i)?;
                let a = self.add(m, a, scope)?;
                let kind = match f {
                    Formula::K(..) => Kind::K(i, a),
                    Formula::A(..) => Kind::A(i, a),
                    _ => Kind::X(i, a),
                };
                (kind, self.nodes[a].def, self.nodes[a].props, self.nodes[a].free)
            }
            Formula::Forall(v, body) => {
                let slot = self.slots;
                if slot >= 64 {
                    return Err(CheckError::TooManyBinders);
                }
                self.slots += 1;
                scope.push((v.clone(), slot));
                let b = self.add(m, body, scope);
                scope.pop();
                let b = b?;
                let nb = &self.nodes[b];
                let kind = Kind::Forall { slot, body: b, var: v.clone(), body_formula: (**body).clone() };
                (kind, nb.def, nb.props, nb.free & !(1u64 << slot))
            }
        };
        self.nodes.push(Node { kind, def, props, free });
        Ok(self.nodes.len() - 1)
    }
}

/// Evaluates sentences on one structure with one quantifier domain. The
/// profile set is built on first use and kept.
pub struct Evaluator<'m> {
    model: &'m Structure,
    domain: QuantifierDomain,
    profiles: OnceCell<ProfileSet>,
}

/// Result of a weak-validity check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Validity {
    Valid,
    /// The first world where the sentence is false.
    Counterexample(usize),
}

impl Validity {
    pub fn is_valid(self) -> bool {
        self == Validity::Valid
    }
}

/// Why a universal subformula fails: at `world`, the instance of `body`
/// with `var` replaced by `sentence` is not true.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub world: usize,
    pub var: Var,
    pub body: Formula,
    pub sentence: Formula,
}

impl Witness {
    /// `body[var/sentence]`, whose value at `world` is not True.
    pub fn instance(&self) -> Formula {
        replace_var(&self.body, &self.var, &self.sentence)
    }
}

struct Run<'a, 'm> {
    ev: &'a Evaluator<'m>,
    c: &'a Compiled,
    env: Vec<usize>,
    memo: Vec<Option<WorldSet>>,
}

impl<'m> Evaluator<'m> {
    pub fn new(model: &'m Structure, domain: QuantifierDomain) -> Self {
        Evaluator { model, domain, profiles: OnceCell::new() }
    }

    pub fn model(&self) -> &'m Structure {
        self.model
    }

    pub fn domain(&self) -> QuantifierDomain {
        self.domain
    }

    pub fn profiles(&self) -> &ProfileSet {
        self.profiles.get_or_init(|| realizable_profiles(self.model, &self.domain))
    }

    /// The worlds where `f` is defined and those where it is true.
    pub fn truth_sets(&self, f: &Formula) -> Result<(WorldSet, WorldSet), CheckError> {
        let c = Compiled::new(self.model, f)?;
        let mut run = self.run(&c);
        let truth = run.truth(c.root);
        Ok((run.def(c.root), truth))
    }

    pub fn eval(&self, world: usize, f: &Formula) -> Result<TruthValue, CheckError> {
        if world >= self.model.world_count() {
            return Err(CheckError::UnknownWorld(world));
        }
        let (def, truth) = self.truth_sets(f)?;
        Ok(TruthValue::at(def, truth, world))
    }

    /// Value at every world, in world order.
    pub fn eval_all(&self, f: &Formula) -> Result<Vec<TruthValue>, CheckError> {
        let (def, truth) = self.truth_sets(f)?;
        Ok((0..self.model.world_count()).map(|w| TruthValue::at(def, truth, w)).collect())
    }

    /// Valid iff the sentence is false at no world.
    pub fn weakly_valid(&self, f: &Formula) -> Result<Validity, CheckError> {
        let (def, truth) = self.truth_sets(f)?;
        Ok(match def.difference(truth).iter().next() {
            Some(w) => Validity::Counterexample(w),
            None => Validity::Valid,
        })
    }

    /// Looks for a universal subformula responsible for the value of `f` at
    /// `world`, following false conjuncts and failing successors down from
    /// the root. Returns a concrete domain sentence refuting it.
    pub fn explain(&self, world: usize, f: &Formula) -> Result<Option<Witness>, CheckError> {
        if world >= self.model.world_count() {
            return Err(CheckError::UnknownWorld(world));
        }
        let c = Compiled::new(self.model, f)?;
        let mut run = self.run(&c);
        Ok(match run.value(c.root, world) {
            TruthValue::Undefined => None,
            v => run.explain(c.root, world, v.is_true()),
        })
    }

    fn run<'a>(&'a self, c: &'a Compiled) -> Run<'a, 'm> {
        Run { ev: self, c, env: vec![usize::MAX; c.slots], memo: vec![None; c.nodes.len()] }
    }
}

impl Run<'_, '_> {
    fn def(&self, id: usize) -> WorldSet {
        let node = &self.c.nodes[id];
        let mut d = node.def;
        let mut free = node.free;
        while free != 0 {
            let slot = free.trailing_zeros() as usize;
            free &= free - 1;
            d = d.intersection(self.ev.profiles().get(self.env[slot]).domain);
        }
        d
    }

    fn vocab(&self, id: usize) -> PropSet {
        let node = &self.c.nodes[id];
        let mut v = node.props;
        let mut free = node.free;
        while free != 0 {
            let slot = free.trailing_zeros() as usize;
            free &= free - 1;
            v = v.union(self.ev.profiles().get(self.env[slot]).vocab);
        }
        v
    }

    fn truth(&mut self, id: usize) -> WorldSet {
        if let Some(t) = self.memo[id] {
            return t;
        }
        let m = self.ev.model;
        let node = &self.c.nodes[id];
        let t = match &node.kind {
            Kind::Top => node.def,
            Kind::Prop(i) => (0..m.world_count()).filter(|&w| m.val(w).contains(*i)).collect(),
            Kind::Var(slot) => self.ev.profiles().get(self.env[*slot]).truth,
            Kind::Not(a) => {
                let a = *a;
                self.def(a).difference(self.truth(a))
            }
            Kind::And(a, b) => {
                let (a, b) = (*a, *b);
                self.truth(a).intersection(self.truth(b))
            }
            Kind::K(i, a) => {
                let (i, a) = (*i, *a);
                self.knows(i, a)
            }
            Kind::A(i, a) => {
                let (i, a) = (*i, *a);
                self.aware(i, a)
            }
            Kind::X(i, a) => {
                let (i, a) = (*i, *a);
                self.knows(i, a).intersection(self.aware(i, a))
            }
            Kind::Forall { slot, body, .. } => {
                let (slot, body) = (*slot, *body);
                let saved = self.env[slot];
                let mut result = self.def(id);
                for p in 0..self.ev.profiles().len() {
                    self.env[slot] = p;
                    let applies = self.ev.profiles().get(p).domain;
                    let holds = self.truth(body);
                    result = result.difference(applies.difference(holds));
                    if result.is_empty() {
                        break;
                    }
                }
                self.env[slot] = saved;
                result
            }
        };
        // Nodes under a binder change with it, so only closed ones are kept.
        if node.free == 0 {
            self.memo[id] = Some(t);
        }
        t
    }

    fn knows(&mut self, agent: AgentId, a: usize) -> WorldSet {
        let m = self.ev.model;
        let truth = self.truth(a);
        self.def(a).iter().filter(|&t| m.succ(agent, t).is_subset(truth)).collect()
    }

    fn aware(&mut self, agent: AgentId, a: usize) -> WorldSet {
        let m = self.ev.model;
        let vocab = self.vocab(a);
        self.def(a).iter().filter(|&t| vocab.is_subset(m.aware(agent, t))).collect()
    }

    /// Only called on closed nodes, so the environment is never consulted.
    fn value(&mut self, id: usize, w: usize) -> TruthValue {
        let t = self.truth(id);
        TruthValue::at(self.def(id), t, w)
    }

    /// `want_true` selects whether we explain a True (else a False) value.
    fn explain(&mut self, id: usize, w: usize, want_true: bool) -> Option<Witness> {
        let expected = if want_true { TruthValue::True } else { TruthValue::False };
        if self.value(id, w) != expected {
            return None;
        }
        let m = self.ev.model;
        match &self.c.nodes[id].kind {
            Kind::Top | Kind::Prop(_) | Kind::Var(_) | Kind::A(..) => None,
            Kind::Not(a) => self.explain(*a, w, !want_true),
            Kind::And(a, b) => {
                let (a, b) = (*a, *b);
                self.explain(a, w, want_true).or_else(|| self.explain(b, w, want_true))
            }
            Kind::K(i, a) | Kind::X(i, a) => {
                let (i, a) = (*i, *a);
                m.succ(i, w).iter().find_map(|t| self.explain(a, t, want_true))
            }
            Kind::Forall { slot, body, var, body_formula } if !want_true => {
                let (slot, body) = (*slot, *body);
                let (var, body_formula) = (var.clone(), body_formula.clone());
                let lang = m.lang(w);
                for p in 0..self.ev.profiles().len() {
                    let profile = self.ev.profiles().get(p);
                    if !profile.vocab.is_subset(lang) {
                        continue;
                    }
                    self.env[slot] = p;
                    let holds = self.truth(body).contains(w);
                    self.env[slot] = usize::MAX;
                    if !holds {
                        let sentence = self.ev.profiles().get(p).witness.clone();
                        return Some(Witness { world: w, var, body: body_formula, sentence });
                    }
                }
                None
            }
            Kind::Forall { .. } => None,
        }
    }
}
