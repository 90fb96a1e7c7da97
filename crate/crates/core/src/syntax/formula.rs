use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::sync::Arc;
use core::fmt;

/// A primitive proposition.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prop(Arc<str>);

/// A propositional variable, bound by `forall` / `exists`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(Arc<str>);

impl Prop {
    pub fn new(name: &str) -> Self {
        Prop(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl Var {
    /// Creates a variable. A leading `#` sigil is accepted and dropped.
    pub fn new(name: &str) -> Self {
        Var(Arc::from(name.strip_prefix('#').unwrap_or(name)))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A 1-based agent index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AgentId(u16);

impl AgentId {
    /// Returns `None` for index 0.
    pub const fn new(index: u16) -> Option<Self> {
        if index == 0 {
            None
        } else {
            Some(AgentId(index))
        }
    }

    pub const fn index(self) -> u16 {
        self.0
    }

    /// Zero-based position, for indexing per-agent tables.
    pub const fn slot(self) -> usize {
        self.0 as usize - 1
    }

    pub fn from_slot(slot: usize) -> Self {
        AgentId(slot as u16 + 1)
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Formulas of the core language.
///
/// Disjunction, implication, equivalence, the existential quantifier and
/// the defined awareness operators `A*` and `A'` are abbreviations; their
/// constructors build the core tree, so only one evaluator exists.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    /// The constant `true`, also the empty conjunction.
    Top,
    Prop(Prop),
    Var(Var),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    /// Implicit knowledge.
    K(AgentId, Box<Formula>),
    /// Awareness.
    A(AgentId, Box<Formula>),
    /// Explicit knowledge.
    X(AgentId, Box<Formula>),
    Forall(Var, Box<Formula>),
}

impl Formula {
    pub fn prop(name: &str) -> Self {
        Formula::Prop(Prop::new(name))
    }

    pub fn var(name: &str) -> Self {
        Formula::Var(Var::new(name))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, rhs: Formula) -> Self {
        Formula::And(Box::new(self), Box::new(rhs))
    }

    /// `a | b`, as `!(!a & !b)`.
    pub fn or(self, rhs: Formula) -> Self {
        self.not().and(rhs.not()).not()
    }

    /// `a -> b`, as `!(a & !b)`.
    pub fn implies(self, rhs: Formula) -> Self {
        self.and(rhs.not()).not()
    }

    /// `a <-> b`, as `(a -> b) & (b -> a)`.
    pub fn iff(self, rhs: Formula) -> Self {
        self.clone().implies(rhs.clone()).and(rhs.implies(self))
    }

    pub fn k(agent: AgentId, body: Formula) -> Self {
        Formula::K(agent, Box::new(body))
    }

    pub fn a(agent: AgentId, body: Formula) -> Self {
        Formula::A(agent, Box::new(body))
    }

    pub fn x(agent: AgentId, body: Formula) -> Self {
        Formula::X(agent, Box::new(body))
    }

    pub fn forall(var: Var, body: Formula) -> Self {
        Formula::Forall(var, Box::new(body))
    }

    /// `exists x. b`, as `!forall x. !b`.
    pub fn exists(var: Var, body: Formula) -> Self {
        Formula::forall(var, body.not()).not()
    }

    /// `A*_i b`: `K_i (b | !b)`, i.e. `b` is defined at every world agent
    /// `i` considers possible.
    pub fn astar(agent: AgentId, body: Formula) -> Self {
        Formula::k(agent, body.clone().or(body.not()))
    }

    /// `A'_i b`: `K_i b | K_i !K_i b`.
    pub fn aprime(agent: AgentId, body: Formula) -> Self {
        let kb = Formula::k(agent, body);
        kb.clone().or(Formula::k(agent, kb.not()))
    }

    /// Right-nested conjunction `c1 & (c2 & (... & cn))`; `Top` when empty.
    pub fn conj<I>(conjuncts: I) -> Self
    where
        I: IntoIterator<Item = Formula>,
        I::IntoIter: DoubleEndedIterator,
    {
        let mut it = conjuncts.into_iter().rev();
        match it.next() {
            None => Formula::Top,
            Some(last) => it.fold(last, |acc, c| c.and(acc)),
        }
    }

    /// Matches `!(!a & !b)`.
    pub fn as_or(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Not(inner) => match inner.as_ref() {
                Formula::And(l, r) => match (l.as_ref(), r.as_ref()) {
                    (Formula::Not(a), Formula::Not(b)) => Some((a, b)),
                    _ => None,
                },
                _ => None,
            },
            _ => None,
        }
    }

    /// Matches `!(a & !b)`.
    pub fn as_implies(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Not(inner) => match inner.as_ref() {
                Formula::And(a, r) => match r.as_ref() {
                    Formula::Not(b) => Some((a, b)),
                    _ => None,
                },
                _ => None,
            },
            _ => None,
        }
    }

    /// Matches `(a -> b) & (b -> a)`.
    pub fn as_iff(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::And(l, r) => {
                let (a, b) = l.as_implies()?;
                let (b2, a2) = r.as_implies()?;
                (a == a2 && b == b2).then_some((a, b))
            }
            _ => None,
        }
    }

    /// Matches `!forall x. !b`.
    pub fn as_exists(&self) -> Option<(&Var, &Formula)> {
        match self {
            Formula::Not(inner) => match inner.as_ref() {
                Formula::Forall(x, body) => match body.as_ref() {
                    Formula::Not(b) => Some((x, b)),
                    _ => None,
                },
                _ => None,
            },
            _ => None,
        }
    }

    /// Matches `K_i (b | !b)`.
    pub fn as_astar(&self) -> Option<(AgentId, &Formula)> {
        match self {
            Formula::K(i, inner) => {
                let (b, nb) = inner.as_or()?;
                match nb {
                    Formula::Not(b2) if b2.as_ref() == b => Some((*i, b)),
                    _ => None,
                }
            }
            _ => None,
        }
    }

    /// The primitive propositions occurring in the formula.
    pub fn vocabulary(&self) -> BTreeSet<Prop> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Prop(p) = f {
                out.insert(p.clone());
            }
        });
        out
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        collect_free(self, &mut alloc::vec::Vec::new(), &mut out);
        out
    }

    pub fn has_free(&self, x: &Var) -> bool {
        match self {
            Formula::Top | Formula::Prop(_) => false,
            Formula::Var(v) => v == x,
            Formula::Not(a) | Formula::K(_, a) | Formula::A(_, a) | Formula::X(_, a) => a.has_free(x),
            Formula::And(a, b) => a.has_free(x) || b.has_free(x),
            Formula::Forall(v, a) => v != x && a.has_free(x),
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn is_quantifier_free(&self) -> bool {
        let mut qf = true;
        self.visit(&mut |f| {
            if let Formula::Forall(..) = f {
                qf = false;
            }
        });
        qf
    }

    /// Height of the tree; atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Top | Formula::Prop(_) | Formula::Var(_) => 0,
            Formula::Not(a) | Formula::K(_, a) | Formula::A(_, a) | Formula::X(_, a) | Formula::Forall(_, a) => {
                1 + a.depth()
            }
            Formula::And(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    /// Largest agent index mentioned, or 0.
    pub fn max_agent(&self) -> u16 {
        let mut m = 0;
        self.visit(&mut |f| {
            if let Formula::K(i, _) | Formula::A(i, _) | Formula::X(i, _) = f {
                m = m.max(i.index());
            }
        });
        m
    }

    /// Pre-order traversal.
    pub fn visit<F: FnMut(&Formula)>(&self, f: &mut F) {
        f(self);
        match self {
            Formula::Top | Formula::Prop(_) | Formula::Var(_) => {}
            Formula::Not(a) | Formula::K(_, a) | Formula::A(_, a) | Formula::X(_, a) | Formula::Forall(_, a) => {
                a.visit(f)
            }
            Formula::And(a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }
}

fn collect_free(f: &Formula, bound: &mut alloc::vec::Vec<Var>, out: &mut BTreeSet<Var>) {
    match f {
        Formula::Top | Formula::Prop(_) => {}
        Formula::Var(v) => {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        }
        Formula::Not(a) | Formula::K(_, a) | Formula::A(_, a) | Formula::X(_, a) => collect_free(a, bound, out),
        Formula::And(a, b) => {
            collect_free(a, bound, out);
            collect_free(b, bound, out);
        }
        Formula::Forall(v, a) => {
            bound.push(v.clone());
            collect_free(a, bound, out);
            bound.pop();
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a1() -> AgentId {
        AgentId::new(1).unwrap()
    }

    #[test]
    fn vocabulary_ignores_variables() {
        let f = Formula::a(a1(), Formula::prop("p")).and(Formula::a(a1(), Formula::prop("q")));
        let v: alloc::vec::Vec<_> = f.vocabulary().into_iter().map(|p| p.name().into()).collect::<alloc::vec::Vec<alloc::string::String>>();
        assert_eq!(v, ["p", "q"]);
        let g = Formula::forall(Var::new("x"), Formula::a(a1(), Formula::var("x")));
        assert!(g.vocabulary().is_empty());
        assert!(Formula::Top.vocabulary().is_empty());
    }

    #[test]
    fn free_variables_and_sentences() {
        let x = Var::new("x");
        let body = Formula::a(a1(), Formula::var("x")).implies(Formula::x(a1(), Formula::var("y")));
        let f = Formula::forall(x.clone(), body);
        let free: alloc::vec::Vec<_> = f.free_vars().into_iter().collect();
        assert_eq!(free, [Var::new("y")]);
        assert!(!f.is_sentence());

        let g = Formula::forall(x, Formula::a(a1(), Formula::var("x")));
        assert!(g.is_sentence());
        assert!(!g.is_quantifier_free());

        let h = Formula::k(a1(), Formula::prop("p"));
        assert!(h.is_sentence() && h.is_quantifier_free());
    }

    #[test]
    fn shadowed_binder_hides_outer_variable() {
        let x = Var::new("x");
        let inner = Formula::forall(x.clone(), Formula::var("x"));
        let f = Formula::forall(x.clone(), inner.clone().and(Formula::var("x")));
        assert!(f.is_sentence());
        assert!(!inner.has_free(&x));
        assert!(inner.clone().and(Formula::var("x")).has_free(&x));
    }

    #[test]
    fn sugar_views_recognize_their_constructors() {
        let p = Formula::prop("p");
        let q = Formula::prop("q");
        assert_eq!(p.clone().or(q.clone()).as_or(), Some((&p, &q)));
        assert_eq!(p.clone().implies(q.clone()).as_implies(), Some((&p, &q)));
        assert_eq!(p.clone().iff(q.clone()).as_iff(), Some((&p, &q)));
        let x = Var::new("x");
        assert_eq!(Formula::exists(x.clone(), p.clone()).as_exists(), Some((&x, &p)));
        assert_eq!(Formula::astar(a1(), p.clone()).as_astar(), Some((a1(), &p)));
    }

    #[test]
    fn astar_desugars_to_k_of_excluded_middle() {
        let p = Formula::prop("p");
        let expected = Formula::k(a1(), p.clone().not().and(p.clone().not().not()).not());
        assert_eq!(Formula::astar(a1(), p), expected);
    }

    #[test]
    fn empty_conjunction_is_top() {
        assert_eq!(Formula::conj(alloc::vec::Vec::new()), Formula::Top);
        let p = Formula::prop("p");
        let q = Formula::prop("q");
        let r = Formula::prop("r");
        assert_eq!(
            Formula::conj([p.clone(), q.clone(), r.clone()]),
            p.and(q.and(r))
        );
    }
}
