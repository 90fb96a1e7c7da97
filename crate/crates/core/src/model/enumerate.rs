//! Exhaustive enumeration of structures at desk scale.
//!
//! Worlds are labelled `w0..wk`; no isomorphism reduction is done. For `n`
//! agents and `m = |Φ|` the stream length is bounded by
//!
//! ```text
//! Σ_{k=1..max} R_k^n · (Σ_{∅≠L⊆Φ} 2^{|L|(1+n)})^k
//! ```
//!
//! where `R_k` is the number of relations on `k` worlds admitted by the
//! class (with constant languages the inner sum is just `2^{m(1+n)}`).
//! [`estimate_count`] evaluates this bound, counting `R_k` exactly for
//! `k ≤ 4`.

use alloc::vec;
use alloc::vec::Vec;

use super::generate::world_names;
use super::report::components;
use super::{ModelClass, ModelError, PropSet, Structure, StructureParts, WorldSet, MAX_SIZE};
use crate::syntax::Prop;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumBounds {
    pub agents: usize,
    pub max_worlds: usize,
    pub props: Vec<Prop>,
    pub class: ModelClass,
    /// Only structures where every world has the full language.
    pub constant_language: bool,
    /// Refuse to start when [`estimate_count`] exceeds this.
    pub cap: u128,
}

impl EnumBounds {
    pub const DEFAULT_CAP: u128 = 10_000_000;

    pub fn new(agents: usize, max_worlds: usize, props: Vec<Prop>, class: ModelClass) -> Self {
        EnumBounds { agents, max_worlds, props, class, constant_language: false, cap: Self::DEFAULT_CAP }
    }
}

/// Upper bound on the number of structures [`enumerate_models`] yields.
pub fn estimate_count(b: &EnumBounds) -> u128 {
    let m = b.props.len() as u32;
    let n = b.agents as u32;
    let per_world: u128 = if b.constant_language {
        pow2(m * (1 + n))
    } else {
        // Σ over nonempty L of 2^{|L|(1+n)}, grouped by |L|.
        (1..=m).map(|size| binom(m, size).saturating_mul(pow2(size * (1 + n)))).fold(0, u128::saturating_add)
    };
    let mut total: u128 = 0;
    for k in 1..=b.max_worlds {
        let rels = if k <= 4 { admitted(k, &b.class).len() as u128 } else { pow2((k * k) as u32) };
        let term = saturating_pow(rels, n).saturating_mul(saturating_pow(per_world, k as u32));
        total = total.saturating_add(term);
    }
    total
}

fn pow2(e: u32) -> u128 {
    if e >= 128 {
        u128::MAX
    } else {
        1u128 << e
    }
}

fn saturating_pow(base: u128, e: u32) -> u128 {
    (0..e).fold(1u128, |acc, _| acc.saturating_mul(base))
}

fn binom(n: u32, k: u32) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Every relation on `k` worlds meeting the class conditions, in
/// increasing order of its adjacency bits.
fn admitted(k: usize, class: &ModelClass) -> Vec<Vec<WorldSet>> {
    let mask = (1u64 << k) - 1;
    let mut out = Vec::new();
    for code in 0..(1u64 << (k * k)) {
        let rel: Vec<WorldSet> = (0..k).map(|s| WorldSet(code >> (s * k) & mask)).collect();
        if class.admits(&rel) {
            out.push(rel);
        }
    }
    out
}

/// Next subset of `mask` after `cur` in numeric order, or `None` after
/// `mask` itself.
fn next_subset(cur: PropSet, mask: PropSet) -> Option<PropSet> {
    (cur != mask).then(|| PropSet(cur.0.wrapping_sub(mask.0) & mask.0))
}

/// Advances a vector of subset digits, least significant first. Returns
/// false when it wraps back to all-empty.
fn bump(digits: &mut [PropSet], masks: impl Fn(usize) -> PropSet) -> bool {
    for (i, d) in digits.iter_mut().enumerate() {
        match next_subset(*d, masks(i)) {
            Some(next) => {
                *d = next;
                return true;
            }
            None => *d = PropSet::EMPTY,
        }
    }
    false
}

/// Yields every structure within the bounds exactly once.
pub fn enumerate_models(bounds: &EnumBounds) -> Result<ModelStream, ModelError> {
    if bounds.props.is_empty() || bounds.max_worlds == 0 {
        return Err(ModelError::Empty);
    }
    if bounds.agents == 0 {
        return Err(ModelError::NoAgents);
    }
    if bounds.props.len() > MAX_SIZE || bounds.max_worlds > MAX_SIZE {
        return Err(ModelError::TooLarge);
    }
    let estimate = estimate_count(bounds);
    if estimate > bounds.cap {
        return Err(ModelError::EnumerationTooLarge { estimate, cap: bounds.cap });
    }
    let mut s = ModelStream {
        bounds: bounds.clone(),
        all: PropSet::full(bounds.props.len()),
        k: 0,
        rels: Vec::new(),
        rel_idx: Vec::new(),
        comps: Vec::new(),
        lang: Vec::new(),
        val: Vec::new(),
        aware: Vec::new(),
        done: false,
    };
    s.start_size(1);
    Ok(s)
}

/// Iterator returned by [`enumerate_models`]. The odometer runs, from most
/// to least significant: world count, relations, languages, valuations,
/// awareness (one subset per agent and weakly connected component).
pub struct ModelStream {
    bounds: EnumBounds,
    all: PropSet,
    k: usize,
    rels: Vec<Vec<WorldSet>>,
    rel_idx: Vec<usize>,
    comps: Vec<Vec<WorldSet>>,
    lang: Vec<PropSet>,
    val: Vec<PropSet>,
    aware: Vec<Vec<PropSet>>,
    done: bool,
}

impl ModelStream {
    fn start_size(&mut self, k: usize) {
        loop {
            if k > self.bounds.max_worlds {
                self.done = true;
                return;
            }
            self.k = k;
            self.rels = admitted(k, &self.bounds.class);
            if !self.rels.is_empty() {
                break;
            }
            // Unreachable for r/t/e classes (the identity is admitted), kept
            // for safety.
            return self.start_size(k + 1);
        }
        self.rel_idx = vec![0; self.bounds.agents];
        let first = if self.bounds.constant_language { self.all } else { PropSet(1) };
        self.lang = vec![first; self.k];
        self.reset_components();
    }

    fn reset_components(&mut self) {
        self.comps = self.rel_idx.iter().map(|&r| components(&self.rels[r])).collect();
        self.reset_val();
    }

    fn reset_val(&mut self) {
        self.val = vec![PropSet::EMPTY; self.k];
        self.aware = self.comps.iter().map(|c| vec![PropSet::EMPTY; c.len()]).collect();
    }

    fn shared_lang(&self, comp: WorldSet) -> PropSet {
        comp.iter().fold(self.all, |acc, w| acc.intersection(self.lang[w]))
    }

    fn build(&self) -> Structure {
        let n = self.k;
        let mut aware = Vec::with_capacity(self.bounds.agents);
        let mut succ = Vec::with_capacity(self.bounds.agents);
        for (slot, &r) in self.rel_idx.iter().enumerate() {
            let mut a = vec![PropSet::EMPTY; n];
            for (c, comp) in self.comps[slot].iter().enumerate() {
                for w in comp.iter() {
                    a[w] = self.aware[slot][c];
                }
            }
            aware.push(a);
            succ.push(self.rels[r].clone());
        }
        Structure::from_parts_unchecked(StructureParts {
            agents: self.bounds.agents,
            props: self.bounds.props.clone(),
            worlds: world_names(n),
            lang: self.lang.clone(),
            val: self.val.clone(),
            aware,
            succ,
        })
    }

    fn advance(&mut self) {
        for slot in 0..self.aware.len() {
            let comps = self.comps[slot].clone();
            let masks: Vec<PropSet> = comps.iter().map(|c| self.shared_lang(*c)).collect();
            if bump(&mut self.aware[slot], |i| masks[i]) {
                return;
            }
        }
        let lang = self.lang.clone();
        if bump(&mut self.val, |i| lang[i]) {
            return;
        }
        if !self.bounds.constant_language && self.bump_lang() {
            self.reset_val();
            return;
        }
        for r in self.rel_idx.iter_mut() {
            *r += 1;
            if *r < self.rels.len() {
                self.reset_components();
                return;
            }
            *r = 0;
        }
        self.start_size(self.k + 1);
    }

    /// Languages range over nonempty subsets, so each digit runs 1..=all.
    fn bump_lang(&mut self) -> bool {
        for l in self.lang.iter_mut() {
            if *l != self.all {
                l.0 += 1;
                return true;
            }
            *l = PropSet(1);
        }
        false
    }
}

impl Iterator for ModelStream {
    type Item = Structure;

    fn next(&mut self) -> Option<Structure> {
        if self.done {
            return None;
        }
        let m = self.build();
        self.advance();
        Some(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{default_prop_names, validate};
    use alloc::collections::BTreeSet;
    use alloc::format;

    fn bounds(agents: usize, worlds: usize, props: usize, class: &str) -> EnumBounds {
        EnumBounds::new(agents, worlds, default_prop_names(props), class.parse().unwrap())
    }

    #[test]
    fn single_world_golden_counts() {
        assert_eq!(enumerate_models(&bounds(1, 1, 1, "none")).unwrap().count(), 8);
        assert_eq!(enumerate_models(&bounds(1, 1, 1, "r")).unwrap().count(), 4);
    }

    /// Brute force: every table assignment, filtered by the strict
    /// constructor and the class.
    fn brute_count(agents: usize, worlds: usize, props: usize, class: ModelClass) -> usize {
        let mut count = 0;
        for k in 1..=worlds {
            let cells = k * (2 + agents) * props + agents * k * k;
            for code in 0..(1u64 << cells) {
                let mut bits = code;
                let mut take = |w: usize| {
                    let v = bits & ((1 << w) - 1);
                    bits >>= w;
                    v
                };
                let lang: Vec<PropSet> = (0..k).map(|_| PropSet(take(props))).collect();
                let val: Vec<PropSet> = (0..k).map(|_| PropSet(take(props))).collect();
                let aware: Vec<Vec<PropSet>> =
                    (0..agents).map(|_| (0..k).map(|_| PropSet(take(props))).collect()).collect();
                let succ: Vec<Vec<WorldSet>> =
                    (0..agents).map(|_| (0..k).map(|_| WorldSet(take(k))).collect()).collect();
                let parts = StructureParts {
                    agents,
                    props: default_prop_names(props),
                    worlds: world_names(k),
                    lang,
                    val,
                    aware,
                    succ,
                };
                if let Ok(m) = Structure::new(parts) {
                    if validate(&m).in_class(&class) {
                        count += 1;
                    }
                }
            }
        }
        count
    }

    #[test]
    fn matches_brute_force_counts() {
        for (agents, worlds, props) in [(1, 2, 1), (1, 2, 2), (2, 2, 1), (1, 3, 1)] {
            for class in ["none", "r", "t", "e", "rte"] {
                let b = bounds(agents, worlds, props, class);
                let got: Vec<Structure> = enumerate_models(&b).unwrap().collect();
                let want = brute_count(agents, worlds, props, b.class);
                assert_eq!(got.len(), want, "{agents} {worlds} {props} {class}");
                let distinct: BTreeSet<_> = got.iter().map(|m| format!("{:?}", m.parts())).collect();
                assert_eq!(distinct.len(), got.len());
                assert!(got.iter().all(|m| validate(m).in_class(&b.class)));
                assert!(estimate_count(&b) >= got.len() as u128);
            }
        }
    }

    #[test]
    fn constant_language_only() {
        let mut b = bounds(1, 2, 2, "rte");
        b.constant_language = true;
        assert!(enumerate_models(&b).unwrap().all(|m| m.is_constant_language()));
    }

    #[test]
    fn cap_guard() {
        let mut b = bounds(2, 4, 2, "none");
        b.cap = 1000;
        assert!(matches!(enumerate_models(&b), Err(ModelError::EnumerationTooLarge { .. })));
    }
}
