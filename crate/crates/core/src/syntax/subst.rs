use alloc::boxed::Box;

use super::{Formula, Prop, SyntaxError, Var};

fn require_domain_sentence(psi: &Formula) -> Result<(), SyntaxError> {
    if !psi.is_quantifier_free() {
        return Err(SyntaxError::NotQuantifierFree);
    }
    if !psi.is_sentence() {
        return Err(SyntaxError::NotASentence);
    }
    Ok(())
}

/// `phi[x/psi]`: replaces the free occurrences of `x` by `psi`.
///
/// `psi` must be a quantifier-free sentence, which rules out capture.
pub fn subst_var(phi: &Formula, x: &Var, psi: &Formula) -> Result<Formula, SyntaxError> {
    require_domain_sentence(psi)?;
    Ok(replace_var(phi, x, psi))
}

/// Unchecked variable replacement. The caller guarantees `psi` cannot be
/// captured (it has no free variables).
pub(crate) fn replace_var(phi: &Formula, x: &Var, psi: &Formula) -> Formula {
    map(phi, &mut |f| match f {
        Formula::Var(v) if v == x => Some(psi.clone()),
        _ => None,
    }, Some(x))
}

/// `phi[q/psi]`: replaces every occurrence of the proposition `q`.
pub fn subst_prop(phi: &Formula, q: &Prop, psi: &Formula) -> Result<Formula, SyntaxError> {
    require_domain_sentence(psi)?;
    Ok(replace_prop(phi, q, psi))
}

pub(crate) fn replace_prop(phi: &Formula, q: &Prop, psi: &Formula) -> Formula {
    map(phi, &mut |f| match f {
        Formula::Prop(p) if p == q => Some(psi.clone()),
        _ => None,
    }, None)
}

/// `phi[p <-> p2]`: exchanges the two propositions everywhere.
pub fn swap_props(phi: &Formula, p: &Prop, p2: &Prop) -> Formula {
    map(phi, &mut |f| match f {
        Formula::Prop(r) if r == p => Some(Formula::Prop(p2.clone())),
        Formula::Prop(r) if r == p2 => Some(Formula::Prop(p.clone())),
        _ => None,
    }, None)
}

/// Replaces every proposition through `tau`.
pub fn rename_props<F: FnMut(&Prop) -> Prop>(phi: &Formula, mut tau: F) -> Formula {
    map(phi, &mut |f| match f {
        Formula::Prop(r) => Some(Formula::Prop(tau(r))),
        _ => None,
    }, None)
}

/// `phi[q/x]`, turning a proposition into a variable. Returns `None` when
/// some occurrence of `q` sits under a binder for `x`, where the new
/// variable would be captured.
pub fn abstract_prop(phi: &Formula, q: &Prop, x: &Var) -> Option<Formula> {
    if captured(phi, q, x, false) {
        return None;
    }
    Some(replace_prop(phi, q, &Formula::Var(x.clone())))
}

fn captured(f: &Formula, q: &Prop, x: &Var, under: bool) -> bool {
    match f {
        Formula::Top | Formula::Var(_) => false,
        Formula::Prop(p) => under && p == q,
        Formula::Not(a) | Formula::K(_, a) | Formula::A(_, a) | Formula::X(_, a) => captured(a, q, x, under),
        Formula::And(a, b) => captured(a, q, x, under) || captured(b, q, x, under),
        Formula::Forall(v, a) => captured(a, q, x, under || v == x),
    }
}

/// Rebuilds `f`, replacing each node for which `leaf` returns `Some`.
/// Descent stops under a binder for `stop_at`.
fn map<F>(f: &Formula, leaf: &mut F, stop_at: Option<&Var>) -> Formula
where
    F: FnMut(&Formula) -> Option<Formula>,
{
    if let Some(g) = leaf(f) {
        return g;
    }
    let rec = |a: &Formula, leaf: &mut F| Box::new(map(a, leaf, stop_at));
    match f {
        Formula::Top | Formula::Prop(_) | Formula::Var(_) => f.clone(),
        Formula::Not(a) => Formula::Not(rec(a, leaf)),
        Formula::And(a, b) => {
            let a = rec(a, leaf);
            Formula::And(a, rec(b, leaf))
        }
        Formula::K(i, a) => Formula::K(*i, rec(a, leaf)),
        Formula::A(i, a) => Formula::A(*i, rec(a, leaf)),
        Formula::X(i, a) => Formula::X(*i, rec(a, leaf)),
        Formula::Forall(v, a) => {
            if stop_at == Some(v) {
                f.clone()
            } else {
                Formula::Forall(v.clone(), rec(a, leaf))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn f(s: &str) -> Formula {
        parse(s, 2).unwrap()
    }

    #[test]
    fn substitutes_free_occurrences() {
        let x = Var::new("x");
        assert_eq!(subst_var(&f("A1 #x"), &x, &f("p")).unwrap(), f("A1 p"));
        assert_eq!(subst_var(&f("forall #x . A1 #x"), &x, &f("p")).unwrap(), f("forall #x . A1 #x"));
        assert_eq!(
            subst_var(&f("A1 #x & forall #x . X1 #x"), &x, &f("K2 q")).unwrap(),
            f("A1 (K2 q) & forall #x . X1 #x")
        );
    }

    #[test]
    fn rejects_quantified_or_open_instances() {
        let x = Var::new("x");
        assert_eq!(
            subst_var(&f("#x"), &x, &f("forall #y . #y")),
            Err(SyntaxError::NotQuantifierFree)
        );
        assert_eq!(subst_var(&f("#x"), &x, &f("#y")), Err(SyntaxError::NotASentence));
    }

    #[test]
    fn substitutes_propositions() {
        let q = Prop::new("q");
        let g = subst_prop(&f("A1 p & A1 q -> forall #x . A1 #x"), &q, &f("p")).unwrap();
        assert_eq!(g, f("A1 p & A1 p -> forall #x . A1 #x"));
    }

    #[test]
    fn swap_is_an_involution() {
        let p = Prop::new("p");
        let p2 = Prop::new("p2");
        assert_eq!(swap_props(&f("K1 p"), &p, &p2), f("K1 p2"));
        let g = f("X2 (p & p2)");
        assert_eq!(swap_props(&swap_props(&g, &p, &p2), &p, &p2), g);
    }

    #[test]
    fn abstraction_refuses_capture() {
        let q = Prop::new("q");
        let x = Var::new("x");
        assert_eq!(abstract_prop(&f("A1 q -> p"), &q, &x), Some(f("A1 #x -> p")));
        assert_eq!(abstract_prop(&f("forall #x . #x -> q"), &q, &x), None);
        assert_eq!(
            abstract_prop(&f("q & forall #y . #y"), &q, &x),
            Some(f("#x & forall #y . #y"))
        );
    }
}
