use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::QuantifierDomain;
use crate::model::{PropSet, Structure, WorldSet};
use crate::syntax::{AgentId, Formula};

/// The truth profile of a quantifier-free sentence: its vocabulary, the
/// worlds where it is defined, and those where it is true, with a sentence
/// that realizes it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    pub vocab: PropSet,
    /// `{t : vocab ⊆ L(t)}`.
    pub domain: WorldSet,
    /// A subset of `domain`.
    pub truth: WorldSet,
    pub witness: Formula,
}

/// All realizable profiles of a structure, in discovery order. Witnesses of
/// earlier profiles are never larger in construction depth than later ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileSet {
    profiles: Vec<Profile>,
}

impl ProfileSet {
    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Profile> {
        self.profiles.iter()
    }

    pub fn get(&self, i: usize) -> &Profile {
        &self.profiles[i]
    }

    /// The profile with this vocabulary and truth set, if realizable.
    pub fn find(&self, vocab: PropSet, truth: WorldSet) -> Option<&Profile> {
        self.profiles.iter().find(|p| p.vocab == vocab && p.truth == truth)
    }

    /// Profiles whose vocabulary fits inside `lang`.
    pub fn within(&self, lang: PropSet) -> impl Iterator<Item = &Profile> {
        self.profiles.iter().filter(move |p| p.vocab.is_subset(lang))
    }
}

impl<'a> IntoIterator for &'a ProfileSet {
    type Item = &'a Profile;
    type IntoIter = core::slice::Iter<'a, Profile>;

    fn into_iter(self) -> Self::IntoIter {
        self.profiles.iter()
    }
}

/// Least set of profiles containing each primitive proposition (and `true`
/// when the domain includes it) and closed under the domain's operators.
///
/// The closure is a breadth-first worklist, so it terminates after at most
/// `2^|Φ| · 2^|S|` profiles.
pub fn realizable_profiles(m: &Structure, domain: &QuantifierDomain) -> ProfileSet {
    let mut list: Vec<Profile> = Vec::new();
    let mut seen: BTreeMap<(u64, u64), ()> = BTreeMap::new();
    let mut push = |list: &mut Vec<Profile>, vocab: PropSet, truth: WorldSet, witness: Formula| {
        if seen.insert((vocab.0, truth.0), ()).is_none() {
            list.push(Profile { vocab, domain: m.defined_on(vocab), truth, witness });
        }
    };
    if domain.include_top {
        push(&mut list, PropSet::EMPTY, m.all_worlds(), Formula::Top);
    }
    for (i, p) in m.props().iter().enumerate() {
        let truth = (0..m.world_count()).filter(|&w| m.val(w).contains(i)).collect();
        push(&mut list, PropSet::singleton(i), truth, Formula::Prop(p.clone()));
    }
    let mut next = 0;
    while next < list.len() {
        let cur = list[next].clone();
        if domain.not {
            push(&mut list, cur.vocab, cur.domain.difference(cur.truth), cur.witness.clone().not());
        }
        for slot in 0..m.agents() {
            let agent = AgentId::from_slot(slot);
            let known = knows(m, agent, &cur);
            let aware = aware_of(m, agent, &cur);
            if domain.k {
                push(&mut list, cur.vocab, known, Formula::k(agent, cur.witness.clone()));
            }
            if domain.a {
                push(&mut list, cur.vocab, aware, Formula::a(agent, cur.witness.clone()));
            }
            if domain.x {
                push(&mut list, cur.vocab, known.intersection(aware), Formula::x(agent, cur.witness.clone()));
            }
        }
        if domain.and {
            for j in 0..=next {
                let other = &list[j];
                let vocab = other.vocab.union(cur.vocab);
                let truth = other.truth.intersection(cur.truth);
                let witness = other.witness.clone().and(cur.witness.clone());
                push(&mut list, vocab, truth, witness);
            }
        }
        next += 1;
    }
    ProfileSet { profiles: list }
}

/// Worlds in the profile's domain all of whose successors are in its truth set.
pub(crate) fn knows(m: &Structure, agent: AgentId, p: &Profile) -> WorldSet {
    p.domain.iter().filter(|&t| m.succ(agent, t).is_subset(p.truth)).collect()
}

pub(crate) fn aware_of(m: &Structure, agent: AgentId, p: &Profile) -> WorldSet {
    p.domain.iter().filter(|&t| p.vocab.is_subset(m.aware(agent, t))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checker::Evaluator;
    use crate::model::{fixtures, StructureParts};
    use crate::syntax::Prop;
    use alloc::vec;

    #[test]
    fn single_reflexive_world_has_two_profiles() {
        let m = Structure::new(StructureParts {
            agents: 1,
            props: vec![Prop::new("p")],
            worlds: vec!["s".into()],
            lang: vec![PropSet(1)],
            val: vec![PropSet(1)],
            aware: vec![vec![PropSet(1)]],
            succ: vec![vec![WorldSet(1)]],
        })
        .unwrap();
        let ps = realizable_profiles(&m, &QuantifierDomain::KXA);
        assert_eq!(ps.len(), 2);
        assert_eq!(ps.get(0).witness, Formula::prop("p"));
        assert_eq!(ps.get(1).witness, Formula::prop("p").not());
    }

    #[test]
    fn barcan_q_profiles_live_on_t_only() {
        let m = fixtures::barcan();
        let ps = realizable_profiles(&m, &QuantifierDomain::KXA);
        let q: Vec<_> = ps.iter().filter(|p| p.vocab == PropSet(0b10)).map(|p| p.truth).collect();
        assert_eq!(q.len(), 2);
        assert!(q.contains(&WorldSet(0b10)) && q.contains(&WorldSet::EMPTY));
        assert!(ps.iter().all(|p| p.truth.is_subset(p.domain)));
    }

    #[test]
    fn top_only_when_requested() {
        let m = fixtures::barcan();
        assert!(realizable_profiles(&m, &QuantifierDomain::KXA).find(PropSet::EMPTY, WorldSet(0b11)).is_none());
        let with = realizable_profiles(&m, &QuantifierDomain::KXA.with_top(true));
        assert_eq!(with.find(PropSet::EMPTY, WorldSet(0b11)).unwrap().witness, Formula::Top);
    }

    #[test]
    fn witnesses_realize_their_profiles() {
        for m in [fixtures::barcan(), fixtures::uncertainty()] {
            for d in [QuantifierDomain::KXA, QuantifierDomain::XA, QuantifierDomain::K.with_top(true)] {
                let ev = Evaluator::new(&m, d);
                for p in &realizable_profiles(&m, &d) {
                    assert!(p.witness.is_quantifier_free() && p.witness.is_sentence());
                    let (def, truth) = ev.truth_sets(&p.witness).unwrap();
                    assert_eq!((def, truth), (p.domain, p.truth), "{}", p.witness);
                }
            }
        }
    }
}
