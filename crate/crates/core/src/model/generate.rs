use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::report::components;
use super::{ModelClass, ModelError, PropSet, Structure, StructureParts, WorldSet, MAX_SIZE};
use crate::syntax::Prop;

/// Parameters for [`generate_random`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenParams {
    pub agents: usize,
    pub worlds: usize,
    pub props: usize,
    pub class: ModelClass,
    pub seed: u64,
    /// Give every world the full language.
    pub constant_language: bool,
    /// Draw awareness sets from nonempty subsets where the component's
    /// shared language allows it.
    pub nonempty_awareness: bool,
}

impl GenParams {
    pub fn new(agents: usize, worlds: usize, props: usize, class: ModelClass, seed: u64) -> Self {
        GenParams { agents, worlds, props, class, seed, constant_language: false, nonempty_awareness: false }
    }
}

/// `p`, `q`, `r`, `u`, `v`, `w`, then `p6`, `p7`, ...
pub fn default_prop_names(count: usize) -> Vec<Prop> {
    const FIRST: [&str; 6] = ["p", "q", "r", "u", "v", "w"];
    (0..count)
        .map(|i| match FIRST.get(i) {
            Some(name) => Prop::new(name),
            None => Prop::new(&format!("p{i}")),
        })
        .collect()
}

pub(crate) fn world_names(count: usize) -> Vec<String> {
    (0..count).map(|i| format!("w{i}")).collect()
}

/// Samples a structure in `class`. Relations are drawn edge by edge and
/// closed under the class conditions; awareness is then fixed per weakly
/// connected component inside the component's shared language, so the
/// awareness invariants hold by construction. Deterministic per seed.
pub fn generate_random(params: &GenParams) -> Result<Structure, ModelError> {
    let GenParams { agents, worlds: n, props, class, seed, constant_language, nonempty_awareness } = *params;
    if n == 0 || props == 0 {
        return Err(ModelError::Empty);
    }
    if n > MAX_SIZE || props > MAX_SIZE {
        return Err(ModelError::TooLarge);
    }
    if agents == 0 {
        return Err(ModelError::NoAgents);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all = PropSet::full(props);
    let random_subset = |rng: &mut ChaCha8Rng, mask: PropSet| PropSet(rng.gen::<u64>() & mask.0);

    let lang: Vec<PropSet> = (0..n)
        .map(|_| {
            if constant_language {
                return all;
            }
            loop {
                let l = random_subset(&mut rng, all);
                if !l.is_empty() {
                    break l;
                }
            }
        })
        .collect();
    let val: Vec<PropSet> = lang.iter().map(|l| random_subset(&mut rng, *l)).collect();

    let mut succ = Vec::with_capacity(agents);
    let mut aware = Vec::with_capacity(agents);
    for _ in 0..agents {
        // Vary density so closure does not always collapse to the total relation.
        let density = [0.15, 0.3, 0.5][rng.gen_range(0..3)];
        let mut rel: Vec<WorldSet> = (0..n)
            .map(|_| (0..n).filter(|_| rng.gen_bool(density)).collect())
            .collect();
        class.close(&mut rel);
        let mut a = vec![PropSet::EMPTY; n];
        for comp in components(&rel) {
            let shared = comp.iter().fold(all, |acc, w| acc.intersection(lang[w]));
            let mut chosen = random_subset(&mut rng, shared);
            while nonempty_awareness && chosen.is_empty() && !shared.is_empty() {
                chosen = random_subset(&mut rng, shared);
            }
            for w in comp.iter() {
                a[w] = chosen;
            }
        }
        succ.push(rel);
        aware.push(a);
    }
    Ok(Structure::from_parts_unchecked(StructureParts {
        agents,
        props: default_prop_names(props),
        worlds: world_names(n),
        lang,
        val,
        aware,
        succ,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate;

    #[test]
    fn equivalence_sample_is_valid() {
        let m = generate_random(&GenParams::new(1, 3, 2, ModelClass::EQUIVALENCE, 7)).unwrap();
        assert!(validate(&m).in_class(&ModelClass::EQUIVALENCE));
    }

    #[test]
    fn one_reflexive_world() {
        let m = generate_random(&GenParams::new(2, 1, 1, "r".parse().unwrap(), 0)).unwrap();
        assert_eq!(m.lang(0), PropSet(1));
        for slot in 0..2 {
            assert_eq!(m.parts().succ[slot][0], WorldSet(1));
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let p = GenParams::new(2, 4, 3, ModelClass::ANY, 99);
        assert_eq!(generate_random(&p), generate_random(&p));
        let q = GenParams { seed: 100, ..p.clone() };
        assert_ne!(generate_random(&p), generate_random(&q));
    }

    #[test]
    fn every_sample_meets_its_class_and_ka_is_componentwise() {
        let classes = ["none", "r", "t", "e", "rt", "re", "te", "rte"];
        for seed in 0..400u64 {
            let class: ModelClass = classes[seed as usize % classes.len()].parse().unwrap();
            let mut p = GenParams::new(1 + seed as usize % 2, 1 + seed as usize % 5, 1 + seed as usize % 3, class, seed);
            p.nonempty_awareness = seed % 3 == 0;
            let m = generate_random(&p).unwrap();
            assert!(validate(&m).in_class(&class), "seed {seed}");
            for slot in 0..m.agents() {
                for comp in components(&m.parts().succ[slot]) {
                    let first = m.parts().aware[slot][comp.iter().next().unwrap()];
                    assert!(comp.iter().all(|w| m.parts().aware[slot][w] == first));
                }
            }
        }
    }

    #[test]
    fn constant_language_flag() {
        let mut p = GenParams::new(1, 4, 2, ModelClass::ANY, 3);
        p.constant_language = true;
        assert!(generate_random(&p).unwrap().is_constant_language());
    }

    #[test]
    fn prop_names() {
        let names = default_prop_names(8);
        assert_eq!(names[0].name(), "p");
        assert_eq!(names[5].name(), "w");
        assert_eq!(names[7].name(), "p7");
    }
}
