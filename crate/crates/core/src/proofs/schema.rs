//! Axiom schemas: recognizers and instantiators.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use super::tautology::is_tautology;
use crate::syntax::{AgentId, Formula, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AxiomName {
    Prop,
    Agpp,
    Ka,
    Nka,
    K,
    T,
    Four,
    Five,
    A0,
    OneForall,
    KForall,
    NForall,
    Barcan,
    KX,
    TX,
    FourX,
    FiveX,
    Xa,
    A0X,
    FaX,
    BarcanX,
    BarcanStarX,
    FaStarX,
    AgppStar,
    XaStar,
    A0Star,
    FiveStar,
    BarcanStar,
    FaStar,
}

impl AxiomName {
    pub const ALL: [AxiomName; 29] = {
        use AxiomName::*;
        [
            Prop, Agpp, Ka, Nka, K, T, Four, Five, A0, OneForall, KForall, NForall, Barcan, KX, TX, FourX, FiveX, Xa,
            A0X, FaX, BarcanX, BarcanStarX, FaStarX, AgppStar, XaStar, A0Star, FiveStar, BarcanStar, FaStar,
        ]
    };

    pub fn as_str(self) -> &'static str {
        use AxiomName::*;
        match self {
            Prop => "Prop",
            Agpp => "AGPP",
            Ka => "KA",
            Nka => "NKA",
            K => "K",
            T => "T",
            Four => "4",
            Five => "5",
            A0 => "A0",
            OneForall => "1_forall",
            KForall => "K_forall",
            NForall => "N_forall",
            Barcan => "Barcan",
            KX => "K_X",
            TX => "T_X",
            FourX => "4_X",
            FiveX => "5_X",
            Xa => "XA",
            A0X => "A0_X",
            FaX => "FA_X",
            BarcanX => "Barcan_X",
            BarcanStarX => "Barcan*_X",
            FaStarX => "FA*_X",
            AgppStar => "AGPP*",
            XaStar => "XA*",
            A0Star => "A0*",
            FiveStar => "5*",
            BarcanStar => "Barcan*",
            FaStar => "FA*",
        }
    }

    /// Which metavariables an instance needs.
    pub fn signature(self) -> Metavars {
        use AxiomName::*;
        let (agent, phi, psi, var) = match self {
            Prop => (false, true, false, false),
            Agpp | AgppStar | Ka | Nka | T | Four | Five | A0 | TX | FourX | FiveX | Xa | A0X | XaStar | A0Star
            | FiveStar => (true, true, false, false),
            K | KX => (true, true, true, false),
            OneForall => (false, true, true, true),
            KForall => (false, true, true, true),
            NForall => (false, true, false, true),
            Barcan | BarcanX | BarcanStarX | BarcanStar => (true, true, false, true),
            FaX | FaStarX | FaStar => (true, false, false, true),
        };
        Metavars { agent, phi, psi, var }
    }
}

impl fmt::Display for AxiomName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown axiom `{0}`")]
pub struct UnknownName(pub alloc::string::String);

impl FromStr for AxiomName {
    type Err = UnknownName;

    /// Accepts the display names, with `∀` allowed for `forall`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.replace('∀', "forall");
        AxiomName::ALL.into_iter().find(|a| a.as_str() == norm).ok_or_else(|| UnknownName(s.into()))
    }
}

/// Metavariables a schema uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Metavars {
    pub agent: bool,
    pub phi: bool,
    pub psi: bool,
    pub var: bool,
}

/// Values for schema metavariables. For `1_forall`, `psi` is the
/// substituted sentence.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Bindings {
    pub agent: Option<AgentId>,
    pub phi: Option<Formula>,
    pub psi: Option<Formula>,
    pub var: Option<Var>,
}

/// Schema templates over the metavariables.
#[derive(Clone, Debug)]
enum Pat {
    Phi,
    Psi,
    /// The bound variable itself.
    X,
    Not(Box<Pat>),
    And(Box<Pat>, Box<Pat>),
    K(Box<Pat>),
    A(Box<Pat>),
    Xk(Box<Pat>),
    Forall(Box<Pat>),
}

// Builders mirror the desugaring in `Formula` so that templates and
// formulas share one shape.
fn not(p: Pat) -> Pat {
    Pat::Not(Box::new(p))
}
fn and(a: Pat, b: Pat) -> Pat {
    Pat::And(Box::new(a), Box::new(b))
}
fn implies(a: Pat, b: Pat) -> Pat {
    not(and(a, not(b)))
}
fn iff(a: Pat, b: Pat) -> Pat {
    and(implies(a.clone(), b.clone()), implies(b, a))
}
fn or(a: Pat, b: Pat) -> Pat {
    not(and(not(a), not(b)))
}
fn k(p: Pat) -> Pat {
    Pat::K(Box::new(p))
}
fn aw(p: Pat) -> Pat {
    Pat::A(Box::new(p))
}
fn xk(p: Pat) -> Pat {
    Pat::Xk(Box::new(p))
}
fn all(p: Pat) -> Pat {
    Pat::Forall(Box::new(p))
}
fn astar(p: Pat) -> Pat {
    k(or(p.clone(), not(p)))
}

fn template(name: AxiomName) -> Option<Pat> {
    use AxiomName::*;
    use Pat::{Phi, Psi, X};
    Some(match name {
        Prop | Agpp | AgppStar | OneForall | NForall => return None,
        Ka => implies(aw(Phi), k(aw(Phi))),
        Nka => implies(not(aw(Phi)), k(not(aw(Phi)))),
        K => implies(and(k(Phi), k(implies(Phi, Psi))), k(Psi)),
        T => implies(k(Phi), Phi),
        Four => implies(k(Phi), k(k(Phi))),
        Five => implies(not(k(Phi)), k(not(k(Phi)))),
        A0 => iff(xk(Phi), and(k(Phi), aw(Phi))),
        KForall => implies(all(implies(Phi, Psi)), implies(all(Phi), all(Psi))),
        Barcan => implies(all(k(Phi)), k(all(Phi))),
        KX => implies(and(xk(Phi), xk(implies(Phi, Psi))), xk(Psi)),
        TX => implies(xk(Phi), Phi),
        FourX => implies(xk(Phi), xk(xk(Phi))),
        FiveX => implies(and(not(xk(Phi)), aw(Phi)), xk(not(xk(Phi)))),
        Xa => implies(aw(Phi), xk(aw(Phi))),
        A0X => implies(xk(Phi), aw(Phi)),
        FaX => implies(not(all(aw(X))), xk(not(all(aw(X))))),
        BarcanX => implies(all(xk(Phi)), xk(all(Phi))),
        BarcanStarX => implies(
            and(aw(all(Phi)), all(implies(aw(X), xk(Phi)))),
            xk(implies(all(aw(X)), all(Phi))),
        ),
        FaStarX => implies(all(not(aw(X))), xk(all(not(aw(X))))),
        XaStar => implies(astar(Phi), k(astar(Phi))),
        A0Star => implies(k(Phi), astar(Phi)),
        FiveStar => implies(and(not(k(Phi)), astar(Phi)), k(not(k(Phi)))),
        BarcanStar => implies(
            and(astar(all(Phi)), all(implies(astar(X), k(Phi)))),
            k(implies(all(astar(X)), all(Phi))),
        ),
        FaStar => implies(all(not(astar(X))), k(all(not(astar(X))))),
    })
}

fn bind<T: PartialEq + Clone>(slot: &mut Option<T>, value: &T) -> bool {
    match slot {
        Some(v) => v == value,
        None => {
            *slot = Some(value.clone());
            true
        }
    }
}

fn unify(p: &Pat, f: &Formula, b: &mut Bindings) -> bool {
    match (p, f) {
        (Pat::Phi, _) => bind(&mut b.phi, f),
        (Pat::Psi, _) => bind(&mut b.psi, f),
        (Pat::X, Formula::Var(v)) => bind(&mut b.var, v),
        (Pat::Not(p), Formula::Not(f)) => unify(p, f, b),
        (Pat::And(p1, p2), Formula::And(f1, f2)) => unify(p1, f1, b) && unify(p2, f2, b),
        (Pat::K(p), Formula::K(i, f)) | (Pat::A(p), Formula::A(i, f)) | (Pat::Xk(p), Formula::X(i, f)) => {
            bind(&mut b.agent, i) && unify(p, f, b)
        }
        (Pat::Forall(p), Formula::Forall(v, f)) => bind(&mut b.var, v) && unify(p, f, b),
        _ => false,
    }
}

fn build(p: &Pat, b: &Bindings) -> Option<Formula> {
    let rec = |q: &Pat| build(q, b).map(Box::new);
    Some(match p {
        Pat::Phi => b.phi.clone()?,
        Pat::Psi => b.psi.clone()?,
        Pat::X => Formula::Var(b.var.clone()?),
        Pat::Not(q) => Formula::Not(rec(q)?),
        Pat::And(q1, q2) => Formula::And(rec(q1)?, rec(q2)?),
        Pat::K(q) => Formula::K(b.agent?, rec(q)?),
        Pat::A(q) => Formula::A(b.agent?, rec(q)?),
        Pat::Xk(q) => Formula::X(b.agent?, rec(q)?),
        Pat::Forall(q) => Formula::Forall(b.var.clone()?, rec(q)?),
    })
}

/// The right-hand side of AGPP: `A_i p1 & ... & A_i pn` over the
/// propositions of `phi` in sorted order, right-nested, `true` if none.
fn agpp_rhs(agent: AgentId, phi: &Formula, star: bool) -> Formula {
    Formula::conj(phi.vocabulary().into_iter().map(|p| {
        let p = Formula::Prop(p);
        if star {
            Formula::astar(agent, p)
        } else {
            Formula::a(agent, p)
        }
    }))
}

/// Finds `psi` with `target = phi[x/psi]`. `Some(None)` means `x` does
/// not occur free in `phi`, so any `psi` works.
fn find_instance(phi: &Formula, x: &Var, target: &Formula) -> Option<Option<Formula>> {
    fn walk(phi: &Formula, x: &Var, t: &Formula, found: &mut Option<Formula>) -> bool {
        match (phi, t) {
            (Formula::Var(v), _) if v == x => bind(found, t),
            (Formula::Not(a), Formula::Not(b)) => walk(a, x, b, found),
            (Formula::And(a1, a2), Formula::And(b1, b2)) => walk(a1, x, b1, found) && walk(a2, x, b2, found),
            (Formula::K(i, a), Formula::K(j, b))
            | (Formula::A(i, a), Formula::A(j, b))
            | (Formula::X(i, a), Formula::X(j, b)) => i == j && walk(a, x, b, found),
            (Formula::Forall(v, a), Formula::Forall(w, b)) if v == w => {
                if v == x {
                    a == b
                } else {
                    walk(a, x, b, found)
                }
            }
            _ => phi == t,
        }
    }
    let mut found = None;
    walk(phi, x, target, &mut found).then_some(found)
}

/// Whether `f` is an instance of the schema; on success, returns the
/// metavariable values.
pub fn match_axiom(f: &Formula, name: AxiomName) -> Option<Bindings> {
    use AxiomName::*;
    match name {
        Prop => is_tautology(f).then(|| Bindings { phi: Some(f.clone()), ..Bindings::default() }),
        Agpp | AgppStar => {
            let (lhs, rhs) = f.as_iff()?;
            let (agent, phi) = if name == Agpp {
                match lhs {
                    Formula::A(i, phi) => (*i, phi.as_ref()),
                    _ => return None,
                }
            } else {
                lhs.as_astar()?
            };
            (*rhs == agpp_rhs(agent, phi, name == AgppStar))
                .then(|| Bindings { agent: Some(agent), phi: Some(phi.clone()), ..Bindings::default() })
        }
        OneForall => {
            let (lhs, rhs) = f.as_implies()?;
            let Formula::Forall(x, phi) = lhs else { return None };
            let psi = find_instance(phi, x, rhs)?.unwrap_or(Formula::Top);
            (psi.is_quantifier_free() && psi.is_sentence()).then(|| Bindings {
                agent: None,
                phi: Some(phi.as_ref().clone()),
                psi: Some(psi),
                var: Some(x.clone()),
            })
        }
        NForall => {
            let (lhs, rhs) = f.as_implies()?;
            let Formula::Forall(x, phi) = rhs else { return None };
            (phi.as_ref() == lhs && !lhs.has_free(x))
                .then(|| Bindings { phi: Some(lhs.clone()), var: Some(x.clone()), ..Bindings::default() })
        }
        _ => {
            let mut b = Bindings::default();
            unify(&template(name)?, f, &mut b).then_some(b)
        }
    }
}

/// The axioms among `names` that `f` instantiates.
pub fn matching_axioms(f: &Formula, names: impl IntoIterator<Item = AxiomName>) -> Vec<AxiomName> {
    names.into_iter().filter(|&n| match_axiom(f, n).is_some()).collect()
}

/// Builds the instance of a schema. Returns `None` when a needed
/// metavariable is missing or a side condition fails: `Prop` needs a
/// tautology, `1_forall` a quantifier-free sentence `psi`, `N_forall` a
/// `phi` without `var` free.
pub fn instantiate(name: AxiomName, b: &Bindings) -> Option<Formula> {
    use AxiomName::*;
    match name {
        Prop => {
            let phi = b.phi.as_ref()?;
            is_tautology(phi).then(|| phi.clone())
        }
        Agpp => {
            let (i, phi) = (b.agent?, b.phi.as_ref()?);
            Some(Formula::a(i, phi.clone()).iff(agpp_rhs(i, phi, false)))
        }
        AgppStar => {
            let (i, phi) = (b.agent?, b.phi.as_ref()?);
            Some(Formula::astar(i, phi.clone()).iff(agpp_rhs(i, phi, true)))
        }
        OneForall => {
            let (phi, psi, x) = (b.phi.as_ref()?, b.psi.as_ref()?, b.var.as_ref()?);
            if !psi.is_quantifier_free() || !psi.is_sentence() {
                return None;
            }
            let inst = crate::syntax::replace_var(phi, x, psi);
            Some(Formula::forall(x.clone(), phi.clone()).implies(inst))
        }
        NForall => {
            let (phi, x) = (b.phi.as_ref()?, b.var.as_ref()?);
            (!phi.has_free(x)).then(|| phi.clone().implies(Formula::forall(x.clone(), phi.clone())))
        }
        _ => build(&template(name)?, b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn f(s: &str) -> Formula {
        parse(s, 2).unwrap()
    }

    fn agent(i: u16) -> Option<AgentId> {
        AgentId::new(i)
    }

    #[test]
    fn names_round_trip() {
        for a in AxiomName::ALL {
            assert_eq!(a.as_str().parse::<AxiomName>().unwrap(), a);
        }
        assert_eq!("1_∀".parse::<AxiomName>().unwrap(), AxiomName::OneForall);
        assert!("Barcan**".parse::<AxiomName>().is_err());
    }

    #[test]
    fn t_instance() {
        let b = match_axiom(&f("K1 p -> p"), AxiomName::T).unwrap();
        assert_eq!(b.phi, Some(f("p")));
        assert_eq!(b.agent, agent(1));
        assert!(match_axiom(&f("K1 p -> q"), AxiomName::T).is_none());
        assert!(match_axiom(&f("K1 p -> p"), AxiomName::TX).is_none());
    }

    #[test]
    fn barcan_star_x_instance() {
        let g = f("(A1 (forall #x . A1 #x) & forall #x . (A1 #x -> X1 A1 #x)) -> X1 ((forall #x . A1 #x) -> forall #x . A1 #x)");
        let b = match_axiom(&g, AxiomName::BarcanStarX).unwrap();
        assert_eq!(b.phi, Some(Formula::a(AgentId::from_slot(0), Formula::var("x"))));
        assert_eq!(b.var, Some(Var::new("x")));
        assert_eq!(instantiate(AxiomName::BarcanStarX, &b), Some(g));
    }

    #[test]
    fn nka_analogue_is_no_axiom() {
        let g = f("!A1 p -> X1 !A1 p");
        let xa_e = [
            AxiomName::Prop,
            AxiomName::Agpp,
            AxiomName::Xa,
            AxiomName::FaStarX,
            AxiomName::KX,
            AxiomName::A0X,
            AxiomName::OneForall,
            AxiomName::KForall,
            AxiomName::NForall,
            AxiomName::BarcanStarX,
        ];
        assert!(matching_axioms(&g, xa_e).is_empty());
        assert!(match_axiom(&f("!A1 p -> K1 !A1 p"), AxiomName::Nka).is_some());
    }

    #[test]
    fn agpp_forms() {
        assert!(match_axiom(&f("A1 (q & K2 p) <-> A1 p & A1 q"), AxiomName::Agpp).is_some());
        assert!(match_axiom(&f("A1 (q & K2 p) <-> A1 q & A1 p"), AxiomName::Agpp).is_none());
        assert!(match_axiom(&f("A1 (forall #x . #x) <-> true"), AxiomName::Agpp).is_some());
        let star = Formula::astar(AgentId::from_slot(0), f("p & q"))
            .iff(Formula::astar(AgentId::from_slot(0), f("p")).and(Formula::astar(AgentId::from_slot(0), f("q"))));
        assert!(match_axiom(&star, AxiomName::AgppStar).is_some());
        assert!(match_axiom(&star, AxiomName::Agpp).is_none());
    }

    #[test]
    fn quantifier_side_conditions() {
        let one = f("(forall #x . K1 #x -> #x) -> (K1 (p & q) -> p & q)");
        let b = match_axiom(&one, AxiomName::OneForall).unwrap();
        assert_eq!(b.psi, Some(f("p & q")));
        // The instance must be quantifier-free.
        let bad = f("(forall #x . K1 #x) -> K1 (forall #y . #y)");
        assert!(match_axiom(&bad, AxiomName::OneForall).is_none());
        // Inconsistent replacement.
        assert!(match_axiom(&f("(forall #x . #x & #x) -> p & q"), AxiomName::OneForall).is_none());
        // Vacuous binder: any instance works.
        assert!(match_axiom(&f("(forall #x . p) -> p"), AxiomName::OneForall).is_some());
        // Shadowed occurrences stay.
        assert!(match_axiom(&f("(forall #x . #x & forall #x . #x) -> p & forall #x . #x"), AxiomName::OneForall).is_some());

        assert!(match_axiom(&f("K1 p -> forall #x . K1 p"), AxiomName::NForall).is_some());
        let free = Formula::var("x").implies(Formula::forall(Var::new("x"), Formula::var("x")));
        assert!(match_axiom(&free, AxiomName::NForall).is_none());
        assert!(instantiate(AxiomName::NForall, &Bindings {
            phi: Some(Formula::var("x")),
            var: Some(Var::new("x")),
            ..Bindings::default()
        })
        .is_none());
    }

    #[test]
    fn star_schemas_use_defined_awareness() {
        let i = AgentId::from_slot(0);
        let b = Bindings { agent: Some(i), phi: Some(f("p")), ..Bindings::default() };
        let xa = instantiate(AxiomName::XaStar, &b).unwrap();
        assert_eq!(xa, Formula::astar(i, f("p")).implies(Formula::k(i, Formula::astar(i, f("p")))));
        assert_eq!(match_axiom(&xa, AxiomName::XaStar), Some(b));
    }

    #[test]
    fn agents_must_agree() {
        assert!(match_axiom(&f("K1 p -> K2 K1 p"), AxiomName::Four).is_none());
        assert!(match_axiom(&f("K2 p -> K2 K2 p"), AxiomName::Four).is_some());
    }
}
