//! Two-valued, world-by-world evaluation for structures where every world
//! has the full language. It shares only the profile set with the main
//! evaluator and exists to cross-check it.

use alloc::vec::Vec;

use super::profiles::ProfileSet;
use super::CheckError;
use crate::model::{PropSet, Structure};
use crate::syntax::{Formula, Var};

/// Truth of a sentence at `world` in a constant-language structure.
pub fn hr_eval(m: &Structure, profiles: &ProfileSet, world: usize, f: &Formula) -> Result<bool, CheckError> {
    if !m.is_constant_language() {
        return Err(CheckError::NotConstantLanguage);
    }
    if let Some(v) = f.free_vars().into_iter().next() {
        return Err(CheckError::NotASentence(v));
    }
    if world >= m.world_count() {
        return Err(CheckError::UnknownWorld(world));
    }
    let mut bad = None;
    f.visit(&mut |g| {
        if let Formula::K(i, _) | Formula::A(i, _) | Formula::X(i, _) = g {
            if i.slot() >= m.agents() {
                bad = Some(*i);
            }
        }
    });
    if let Some(i) = bad {
        return Err(CheckError::UnknownAgent(i));
    }
    Ok(holds(m, profiles, &mut Vec::new(), world, f))
}

fn holds(m: &Structure, ps: &ProfileSet, env: &mut Vec<(Var, usize)>, w: usize, f: &Formula) -> bool {
    match f {
        Formula::Top => true,
        Formula::Prop(p) => m.prop_index(p).is_some_and(|i| m.val(w).contains(i)),
        Formula::Var(v) => ps.get(lookup(env, v)).truth.contains(w),
        Formula::Not(a) => !holds(m, ps, env, w, a),
        Formula::And(a, b) => holds(m, ps, env, w, a) && holds(m, ps, env, w, b),
        Formula::K(i, a) => m.succ(*i, w).iter().all(|t| holds(m, ps, env, t, a)),
        Formula::A(i, a) => vocab(m, ps, env, a).is_subset(m.aware(*i, w)),
        Formula::X(i, a) => {
            vocab(m, ps, env, a).is_subset(m.aware(*i, w)) && m.succ(*i, w).iter().all(|t| holds(m, ps, env, t, a))
        }
        Formula::Forall(x, a) => (0..ps.len()).all(|p| {
            env.push((x.clone(), p));
            let r = holds(m, ps, env, w, a);
            env.pop();
            r
        }),
    }
}

fn lookup(env: &[(Var, usize)], v: &Var) -> usize {
    env.iter().rev().find(|(x, _)| x == v).map(|(_, p)| *p).expect("checked to be a sentence")
}

/// Propositions of `f` after replacing free variables by their profiles.
fn vocab(m: &Structure, ps: &ProfileSet, env: &mut Vec<(Var, usize)>, f: &Formula) -> PropSet {
    match f {
        Formula::Top => PropSet::EMPTY,
        Formula::Prop(p) => m.prop_index(p).map_or(PropSet::EMPTY, PropSet::singleton),
        Formula::Var(v) => ps.get(lookup(env, v)).vocab,
        Formula::Not(a) | Formula::K(_, a) | Formula::A(_, a) | Formula::X(_, a) => vocab(m, ps, env, a),
        Formula::And(a, b) => vocab(m, ps, env, a).union(vocab(m, ps, env, b)),
        Formula::Forall(x, a) => {
            // The bound variable contributes nothing; any profile index works
            // as a placeholder since it is masked below.
            env.push((x.clone(), usize::MAX));
            let v = vocab_bound(m, ps, env, a);
            env.pop();
            v
        }
    }
}

fn vocab_bound(m: &Structure, ps: &ProfileSet, env: &mut Vec<(Var, usize)>, f: &Formula) -> PropSet {
    match f {
        Formula::Var(v) => match lookup(env, v) {
            usize::MAX => PropSet::EMPTY,
            p => ps.get(p).vocab,
        },
        Formula::Not(a) | Formula::K(_, a) | Formula::A(_, a) | Formula::X(_, a) => vocab_bound(m, ps, env, a),
        Formula::And(a, b) => vocab_bound(m, ps, env, a).union(vocab_bound(m, ps, env, b)),
        Formula::Forall(x, a) => {
            env.push((x.clone(), usize::MAX));
            let v = vocab_bound(m, ps, env, a);
            env.pop();
            v
        }
        other => vocab(m, ps, env, other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checker::{realizable_profiles, Evaluator, QuantifierDomain, TruthValue};
    use crate::model::{fixtures, generate_random, GenParams, ModelClass};
    use crate::syntax::parse;

    #[test]
    fn rejects_partial_languages() {
        let m = fixtures::barcan();
        let ps = realizable_profiles(&m, &QuantifierDomain::KXA);
        assert_eq!(hr_eval(&m, &ps, 0, &Formula::Top), Err(CheckError::NotConstantLanguage));
    }

    #[test]
    fn agrees_with_main_evaluator() {
        let texts = [
            "K1 p -> p",
            "forall #x . X1 A1 #x",
            "X1 (forall #x . A1 #x)",
            "forall #x . A1 #x -> K1 (forall #y . #y | !#y & #x)",
            "!X1 !(forall #x . A1 #x) & !X1 (forall #x . A1 #x)",
            "exists #x . K1 #x & !A1 #x",
        ];
        for seed in 0..60 {
            let mut p = GenParams::new(1, 1 + seed as usize % 4, 2, ModelClass::ANY, seed);
            p.constant_language = true;
            let m = generate_random(&p).unwrap();
            for d in [QuantifierDomain::KXA, QuantifierDomain::XA] {
                let ev = Evaluator::new(&m, d);
                for t in texts {
                    let f = parse(t, 1).unwrap();
                    for w in 0..m.world_count() {
                        let want = ev.eval(w, &f).unwrap();
                        assert_ne!(want, TruthValue::Undefined);
                        assert_eq!(hr_eval(&m, ev.profiles(), w, &f).unwrap(), want.is_true(), "{t} seed {seed}");
                    }
                }
            }
        }
    }
}
