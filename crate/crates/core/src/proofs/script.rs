//! Line-numbered Hilbert derivations and their checker.

use alloc::vec::Vec;
use core::fmt;

use super::schema::{match_axiom, AxiomName};
use super::system::{AxiomSystem, Rule};
use crate::syntax::{abstract_prop, AgentId, Formula, Prop, Var};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    Axiom(AxiomName),
    /// A rule application. Premises are 1-based line numbers. The
    /// generalization rules name their agent, and `Gen_forall` names the
    /// proposition `q` it abstracts and the variable `x` it binds.
    Rule { rule: Rule, from: Vec<usize>, agent: Option<AgentId>, q: Option<Prop>, x: Option<Var> },
}

impl Justification {
    pub fn rule(rule: Rule, from: &[usize]) -> Self {
        Justification::Rule { rule, from: from.to_vec(), agent: None, q: None, x: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofLine {
    pub formula: Formula,
    pub just: Justification,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProofScript {
    pub lines: Vec<ProofLine>,
}

impl ProofScript {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a line and returns its 1-based number.
    pub fn push(&mut self, formula: Formula, just: Justification) -> usize {
        self.lines.push(ProofLine { formula, just });
        self.lines.len()
    }

    /// The formula of the last line, the theorem proved.
    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reason {
    /// The line has a free variable.
    NotASentence,
    AxiomNotInSystem(AxiomName),
    NotAnInstance(AxiomName),
    RuleNotInSystem(Rule),
    WrongArity { expected: usize, found: usize },
    /// A premise refers to this line or a later one.
    ForwardReference(usize),
    /// A premise number is 0 or past the end of the script.
    NoSuchLine(usize),
    /// A required auxiliary datum (`agent`, `q` or `x`) is absent.
    MissingAuxiliary(&'static str),
    /// The second MP premise is not `first -> this line`.
    NotModusPonens,
    /// The line is not what the rule yields from its premises.
    RuleMismatch(Rule),
    /// `Gen_forall` would bind an occurrence of `q` under a binder for `x`.
    Capture,
    EmptyScript,
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reason::NotASentence => f.write_str("formula has free variables"),
            Reason::AxiomNotInSystem(a) => write!(f, "axiom {a} is not in the system"),
            Reason::NotAnInstance(a) => write!(f, "formula is not an instance of {a}"),
            Reason::RuleNotInSystem(r) => write!(f, "rule {r} is not in the system"),
            Reason::WrongArity { expected, found } => write!(f, "rule takes {expected} premises, got {found}"),
            Reason::ForwardReference(l) => write!(f, "premise {l} does not precede this line"),
            Reason::NoSuchLine(l) => write!(f, "premise {l} does not exist"),
            Reason::MissingAuxiliary(what) => write!(f, "justification must name `{what}`"),
            Reason::NotModusPonens => f.write_str("second premise is not the first premise implying this line"),
            Reason::RuleMismatch(r) => write!(f, "line does not follow from its premise by {r}"),
            Reason::Capture => f.write_str("the bound variable would capture an occurrence of q"),
            Reason::EmptyScript => f.write_str("script has no lines"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {reason}")]
pub struct Rejection {
    /// 1-based; 0 for a script-level problem.
    pub line: usize,
    pub reason: Reason,
}

/// Checks every line in order; the first failure rejects the script.
pub fn check_proof(script: &ProofScript, system: &AxiomSystem) -> Result<(), Rejection> {
    if script.lines.is_empty() {
        return Err(Rejection { line: 0, reason: Reason::EmptyScript });
    }
    for (idx, line) in script.lines.iter().enumerate() {
        let n = idx + 1;
        check_line(script, system, n, line).map_err(|reason| Rejection { line: n, reason })?;
    }
    Ok(())
}

fn check_line(script: &ProofScript, system: &AxiomSystem, n: usize, line: &ProofLine) -> Result<(), Reason> {
    let f = &line.formula;
    if !f.is_sentence() {
        return Err(Reason::NotASentence);
    }
    let (rule, from, agent, q, x) = match &line.just {
        Justification::Axiom(a) => {
            if !system.has_axiom(*a) {
                return Err(Reason::AxiomNotInSystem(*a));
            }
            return match_axiom(f, *a).map(|_| ()).ok_or(Reason::NotAnInstance(*a));
        }
        Justification::Rule { rule, from, agent, q, x } => (*rule, from, agent, q, x),
    };
    if !system.has_rule(rule) {
        return Err(Reason::RuleNotInSystem(rule));
    }
    if from.len() != rule.arity() {
        return Err(Reason::WrongArity { expected: rule.arity(), found: from.len() });
    }
    let mut premises = Vec::with_capacity(from.len());
    for &k in from {
        if k == 0 || k > script.lines.len() {
            return Err(Reason::NoSuchLine(k));
        }
        if k >= n {
            return Err(Reason::ForwardReference(k));
        }
        premises.push(&script.lines[k - 1].formula);
    }
    let need_agent = || agent.ok_or(Reason::MissingAuxiliary("agent"));
    let expected = match rule {
        Rule::Mp => {
            return match premises[1].as_implies() {
                Some((a, b)) if a == premises[0] && b == f => Ok(()),
                _ => Err(Reason::NotModusPonens),
            };
        }
        Rule::GenK => Formula::k(need_agent()?, premises[0].clone()),
        Rule::GenX => {
            let i = need_agent()?;
            Formula::a(i, premises[0].clone()).implies(Formula::x(i, premises[0].clone()))
        }
        Rule::GenStar => {
            let i = need_agent()?;
            Formula::astar(i, premises[0].clone()).implies(Formula::k(i, premises[0].clone()))
        }
        Rule::GenForall => {
            let q = q.as_ref().ok_or(Reason::MissingAuxiliary("q"))?;
            let x = x.as_ref().ok_or(Reason::MissingAuxiliary("x"))?;
            let body = abstract_prop(premises[0], q, x).ok_or(Reason::Capture)?;
            Formula::forall(x.clone(), body)
        }
    };
    if *f == expected {
        Ok(())
    } else {
        Err(Reason::RuleMismatch(rule))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn f(s: &str) -> Formula {
        parse(s, 2).unwrap()
    }

    fn sys(name: &str) -> AxiomSystem {
        AxiomSystem::named(name).unwrap()
    }

    fn three_line() -> ProofScript {
        let mut s = ProofScript::new();
        s.push(f("p -> p"), Justification::Axiom(AxiomName::Prop));
        s.push(f("K1 (p -> p) & K1 ((p -> p) -> q) -> K1 q"), Justification::Axiom(AxiomName::K));
        s
    }

    #[test]
    fn prop_then_k() {
        let s = three_line();
        for name in ["AX_KXAforall", "AXe_KAstar", "AXe_KXAAstarforall"] {
            assert_eq!(check_proof(&s, &sys(name)), Ok(()));
        }
        let r = check_proof(&s, &sys("AXe_XAforall")).unwrap_err();
        assert_eq!(r, Rejection { line: 2, reason: Reason::AxiomNotInSystem(AxiomName::K) });
    }

    fn genx_script(rule: Rule) -> ProofScript {
        let mut s = ProofScript::new();
        let i = AgentId::new(1);
        s.push(f("p | !p"), Justification::Axiom(AxiomName::Prop));
        let concl = match rule {
            Rule::GenX => f("A1 (p | !p) -> X1 (p | !p)"),
            _ => f("K1 (p | !p)"),
        };
        s.push(concl, Justification::Rule { rule, from: alloc::vec![1], agent: i, q: None, x: None });
        s
    }

    #[test]
    fn gen_x_demo() {
        assert_eq!(check_proof(&genx_script(Rule::GenX), &sys("AXe_XAforall")), Ok(()));
        let r = check_proof(&genx_script(Rule::GenK), &sys("AXe_XAforall")).unwrap_err();
        assert_eq!(r, Rejection { line: 2, reason: Reason::RuleNotInSystem(Rule::GenK) });
    }

    #[test]
    fn modus_ponens() {
        let mut s = ProofScript::new();
        s.push(f("p -> p"), Justification::Axiom(AxiomName::Prop));
        s.push(f("(p -> p) -> (q -> q)"), Justification::Axiom(AxiomName::Prop));
        s.push(f("q -> q"), Justification::rule(Rule::Mp, &[1, 2]));
        assert_eq!(check_proof(&s, &sys("AXe_XAforall")), Ok(()));
        s.lines[2].just = Justification::rule(Rule::Mp, &[2, 1]);
        assert_eq!(check_proof(&s, &sys("AXe_XAforall")).unwrap_err().reason, Reason::NotModusPonens);
        s.lines[2].just = Justification::rule(Rule::Mp, &[1, 3]);
        assert_eq!(check_proof(&s, &sys("AXe_XAforall")).unwrap_err().reason, Reason::ForwardReference(3));
        s.lines[2].just = Justification::rule(Rule::Mp, &[1, 9]);
        assert_eq!(check_proof(&s, &sys("AXe_XAforall")).unwrap_err().reason, Reason::NoSuchLine(9));
        s.lines[2].just = Justification::rule(Rule::Mp, &[1]);
        assert_eq!(
            check_proof(&s, &sys("AXe_XAforall")).unwrap_err().reason,
            Reason::WrongArity { expected: 2, found: 1 }
        );
    }

    #[test]
    fn gen_forall() {
        let mut s = ProofScript::new();
        s.push(f("p -> p"), Justification::Axiom(AxiomName::Prop));
        let gen = |q: &str, x: &str| Justification::Rule {
            rule: Rule::GenForall,
            from: alloc::vec![1],
            agent: None,
            q: Some(Prop::new(q)),
            x: Some(Var::new(x)),
        };
        s.push(f("forall #x . #x -> #x"), gen("p", "x"));
        assert_eq!(check_proof(&s, &sys("AXe_XAforall")), Ok(()));
        s.lines[1].just = gen("q", "x");
        assert_eq!(check_proof(&s, &sys("AXe_XAforall")).unwrap_err().reason, Reason::RuleMismatch(Rule::GenForall));
        s.lines[1].just = Justification::rule(Rule::GenForall, &[1]);
        assert_eq!(check_proof(&s, &sys("AXe_XAforall")).unwrap_err().reason, Reason::MissingAuxiliary("q"));

        let mut c = ProofScript::new();
        c.push(f("(forall #x . p | #x) -> (forall #x . p | #x)"), Justification::Axiom(AxiomName::Prop));
        c.push(f("forall #x . (forall #x . #x | #x) -> (forall #x . #x | #x)"), gen("p", "x"));
        assert_eq!(check_proof(&c, &sys("AXe_XAforall")).unwrap_err().reason, Reason::Capture);
    }

    #[test]
    fn open_lines_and_bad_instances() {
        let mut s = ProofScript::new();
        s.push(Formula::var("x").implies(Formula::var("x")), Justification::Axiom(AxiomName::Prop));
        assert_eq!(check_proof(&s, &sys("AXe_XAforall")).unwrap_err().reason, Reason::NotASentence);
        let mut s = ProofScript::new();
        s.push(f("X1 p -> q"), Justification::Axiom(AxiomName::TX));
        assert_eq!(check_proof(&s, &sys("AXe_XAforall+TX4X5X")).unwrap_err().reason, Reason::NotAnInstance(AxiomName::TX));
        assert_eq!(check_proof(&ProofScript::new(), &sys("AXe_XAforall")).unwrap_err().line, 0);
    }
}
