//! An independent check of quantifier evaluation: list the domain sentences
//! up to a depth with truth sets taken straight from the truth clauses, then
//! test instances syntactically.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::ops::Range;

use super::eval::Evaluator;
use super::{CheckError, QuantifierDomain, TruthValue};
use crate::model::{PropSet, Structure, WorldSet};
use crate::syntax::{replace_var, AgentId, Formula, Var};

#[derive(Clone, Copy, Debug)]
enum Op {
    Top,
    Prop(usize),
    Not(u32),
    K(AgentId, u32),
    A(AgentId, u32),
    X(AgentId, u32),
    And(u32, u32),
}

#[derive(Clone, Copy, Debug)]
struct Entry {
    op: Op,
    vocab: PropSet,
    def: WorldSet,
    truth: WorldSet,
}

/// Every domain sentence over a language, stored as an arena in order of
/// depth. Layers are built on demand.
pub struct SentenceCorpus<'m> {
    model: &'m Structure,
    domain: QuantifierDomain,
    lang: PropSet,
    entries: Vec<Entry>,
    layers: Vec<Range<usize>>,
}

impl<'m> SentenceCorpus<'m> {
    pub fn new(model: &'m Structure, domain: QuantifierDomain, lang: PropSet) -> Self {
        let mut entries = Vec::new();
        if domain.include_top {
            let all = model.all_worlds();
            entries.push(Entry { op: Op::Top, vocab: PropSet::EMPTY, def: all, truth: all });
        }
        for i in lang.iter() {
            let vocab = PropSet::singleton(i);
            entries.push(Entry {
                op: Op::Prop(i),
                vocab,
                def: model.defined_on(vocab),
                truth: (0..model.world_count()).filter(|&w| model.val(w).contains(i)).collect(),
            });
        }
        let layers = alloc::vec![0..entries.len()];
        SentenceCorpus { model, domain, lang, entries, layers }
    }

    pub fn lang(&self) -> PropSet {
        self.lang
    }

    /// Deepest layer built so far.
    pub fn depth(&self) -> usize {
        self.layers.len() - 1
    }

    /// Number of sentences of depth at most `depth` (as far as built).
    pub fn count(&self, depth: usize) -> usize {
        self.layers[depth.min(self.depth())].end
    }

    /// Builds layers up to `depth`, failing if the total would pass `cap`.
    pub fn extend_to(&mut self, depth: usize, cap: usize) -> Result<(), CheckError> {
        while self.depth() < depth {
            let k = self.depth();
            let below = self.layers[k].end;
            let top = self.layers[k].len();
            let unary = self.unary_ops().len() * top;
            let pairs = if self.domain.and { below * below - (below - top) * (below - top) } else { 0 };
            if below + unary + pairs > cap {
                return Err(CheckError::ResourceCap { cap });
            }
            self.push_layer();
        }
        Ok(())
    }

    /// The `i`-th sentence in enumeration order.
    pub fn formula(&self, i: usize) -> Formula {
        let e = &self.entries[i];
        match e.op {
            Op::Top => Formula::Top,
            Op::Prop(p) => Formula::Prop(self.model.props()[p].clone()),
            Op::Not(a) => self.formula(a as usize).not(),
            Op::K(ag, a) => Formula::k(ag, self.formula(a as usize)),
            Op::A(ag, a) => Formula::a(ag, self.formula(a as usize)),
            Op::X(ag, a) => Formula::x(ag, self.formula(a as usize)),
            Op::And(a, b) => self.formula(a as usize).and(self.formula(b as usize)),
        }
    }

    /// Vocabulary, domain and truth set of the `i`-th sentence.
    pub fn truth(&self, i: usize) -> (PropSet, WorldSet, WorldSet) {
        let e = &self.entries[i];
        (e.vocab, e.def, e.truth)
    }

    /// Distinct `(vocabulary, truth set)` pairs realized up to `depth`.
    pub fn realized(&self, depth: usize) -> BTreeSet<(PropSet, WorldSet)> {
        self.entries[..self.count(depth)].iter().map(|e| (e.vocab, e.truth)).collect()
    }

    fn unary_ops(&self) -> Vec<(u8, AgentId)> {
        let mut ops = Vec::new();
        if self.domain.not {
            ops.push((b'!', AgentId::from_slot(0)));
        }
        for slot in 0..self.model.agents() {
            let i = AgentId::from_slot(slot);
            for (on, op) in [(self.domain.k, b'K'), (self.domain.a, b'A'), (self.domain.x, b'X')] {
                if on {
                    ops.push((op, i));
                }
            }
        }
        ops
    }

    fn push_layer(&mut self) {
        let m = self.model;
        let k = self.depth();
        let last = self.layers[k].clone();
        let start = self.entries.len();
        let ops = self.unary_ops();
        for s in last.clone() {
            let e = self.entries[s];
            let idx = s as u32;
            for &(op, i) in &ops {
                let knows = || -> WorldSet { e.def.iter().filter(|&t| m.succ(i, t).is_subset(e.truth)).collect() };
                let aware = || -> WorldSet { e.def.iter().filter(|&t| e.vocab.is_subset(m.aware(i, t))).collect() };
                let (op, truth) = match op {
                    b'!' => (Op::Not(idx), e.def.difference(e.truth)),
                    b'K' => (Op::K(i, idx), knows()),
                    b'A' => (Op::A(i, idx), aware()),
                    _ => (Op::X(i, idx), knows().intersection(aware())),
                };
                self.entries.push(Entry { op, vocab: e.vocab, def: e.def, truth });
            }
        }
        if self.domain.and {
            // Ordered pairs whose deeper side is in the last layer.
            for a in 0..last.end {
                let b_range = if a >= last.start { 0..last.end } else { last.clone() };
                for b in b_range {
                    let (ea, eb) = (self.entries[a], self.entries[b]);
                    self.entries.push(Entry {
                        op: Op::And(a as u32, b as u32),
                        vocab: ea.vocab.union(eb.vocab),
                        def: ea.def.intersection(eb.def),
                        truth: ea.truth.intersection(eb.truth),
                    });
                }
            }
        }
        self.layers.push(start..self.entries.len());
    }
}

/// Outcome of [`brute_force_forall`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    /// Value of `∀x φ` at the world, judged by the enumerated instances.
    pub value: TruthValue,
    /// Whether the sentences up to the depth realize every profile the
    /// fixpoint finds over the world's language; if so the value is exact.
    pub stabilized: bool,
    /// Instances checked.
    pub sentences: usize,
    /// The first instance sentence that is not true, if any.
    pub counterexample: Option<Formula>,
}

/// Decides `∀x φ` at `world` by testing `φ[x/ψ]` for every domain sentence
/// `ψ` over `L(world)` of depth at most `depth`.
pub fn brute_force_forall(
    ev: &Evaluator<'_>,
    world: usize,
    phi: &Formula,
    x: &Var,
    depth: usize,
    cap: usize,
) -> Result<OracleReport, CheckError> {
    let m = ev.model();
    if world >= m.world_count() {
        return Err(CheckError::UnknownWorld(world));
    }
    let mut corpus = SentenceCorpus::new(m, ev.domain(), m.lang(world));
    corpus.extend_to(depth, cap)?;
    brute_force_with(ev, &corpus, world, phi, x, depth)
}

/// As [`brute_force_forall`], reusing a corpus built for `L(world)`.
pub fn brute_force_with(
    ev: &Evaluator<'_>,
    corpus: &SentenceCorpus<'_>,
    world: usize,
    phi: &Formula,
    x: &Var,
    depth: usize,
) -> Result<OracleReport, CheckError> {
    debug_assert_eq!(corpus.lang(), ev.model().lang(world));
    let stabilized = is_stabilized(ev, corpus, depth);
    check_instances(ev, world, phi, x, stabilized, (0..corpus.count(depth)).map(|i| corpus.formula(i)))
}

fn check_instances(
    ev: &Evaluator<'_>,
    world: usize,
    phi: &Formula,
    x: &Var,
    stabilized: bool,
    sentences: impl Iterator<Item = Formula>,
) -> Result<OracleReport, CheckError> {
    let m = ev.model();
    if world >= m.world_count() {
        return Err(CheckError::UnknownWorld(world));
    }
    if phi.free_vars().iter().any(|v| v != x) {
        return Err(CheckError::OracleShape(x.clone()));
    }
    let mut report = OracleReport { value: TruthValue::True, stabilized, sentences: 0, counterexample: None };
    // Variables contribute nothing to the vocabulary.
    if !m.prop_set(phi.vocabulary().iter()).is_some_and(|v| v.is_subset(m.lang(world))) {
        report.value = TruthValue::Undefined;
        return Ok(report);
    }
    for psi in sentences {
        report.sentences += 1;
        let v = ev.eval(world, &replace_var(phi, x, &psi))?;
        if v != TruthValue::True {
            report.value = TruthValue::False;
            report.counterexample = Some(psi);
            break;
        }
    }
    Ok(report)
}

/// Whether `realized` is exactly the set of fixpoint profiles whose
/// vocabulary lies in `lang`.
fn matches_fixpoint(ev: &Evaluator<'_>, lang: PropSet, realized: impl Iterator<Item = (PropSet, WorldSet)>) -> bool {
    let want: BTreeSet<(PropSet, WorldSet)> = ev.profiles().within(lang).map(|p| (p.vocab, p.truth)).collect();
    let mut got = BTreeSet::new();
    for key in realized {
        if !want.contains(&key) {
            return false;
        }
        if got.len() < want.len() {
            got.insert(key);
        }
    }
    got.len() == want.len()
}

/// Whether the corpus up to `depth` realizes exactly the fixpoint profiles
/// whose vocabulary lies in the corpus language.
pub fn is_stabilized(ev: &Evaluator<'_>, corpus: &SentenceCorpus<'_>, depth: usize) -> bool {
    matches_fixpoint(ev, corpus.lang(), corpus.entries[..corpus.count(depth)].iter().map(|e| (e.vocab, e.truth)))
}

/// The truth classes realized by domain sentences over a language, indexed
/// by the least depth of a sentence realizing them, each with the first
/// such sentence found.
///
/// Sentences of depth `d + 1` are an operator applied to sentences of
/// depth at most `d`, and the truth set of a quantifier-free compound is a
/// function of the truth sets of its parts. So the classes at depth `d + 1`
/// are the operators applied to the classes at depth `d`, which keeps this
/// cheap at depths where listing sentences is not.
pub struct ClassCorpus<'m> {
    corpus: SentenceCorpus<'m>,
    classes: Vec<(PropSet, WorldSet, WorldSet, Formula)>,
    ends: Vec<usize>,
}

impl<'m> ClassCorpus<'m> {
    pub fn new(model: &'m Structure, domain: QuantifierDomain, lang: PropSet) -> Self {
        let corpus = SentenceCorpus::new(model, domain, lang);
        let mut c = ClassCorpus { corpus, classes: Vec::new(), ends: Vec::new() };
        for i in 0..c.corpus.count(0) {
            let (vocab, def, truth) = c.corpus.truth(i);
            let f = c.corpus.formula(i);
            c.add(vocab, def, truth, f);
        }
        c.ends.push(c.classes.len());
        c
    }

    pub fn depth(&self) -> usize {
        self.ends.len() - 1
    }

    fn add(&mut self, vocab: PropSet, def: WorldSet, truth: WorldSet, f: Formula) {
        if !self.classes.iter().any(|c| c.0 == vocab && c.2 == truth) {
            self.classes.push((vocab, def, truth, f));
        }
    }

    pub fn extend_to(&mut self, depth: usize) {
        let m = self.corpus.model;
        while self.depth() < depth {
            let known = self.classes.len();
            let ops = self.corpus.unary_ops();
            for c in 0..known {
                let (vocab, def, truth, f) = self.classes[c].clone();
                for &(op, i) in &ops {
                    let knows = || -> WorldSet { def.iter().filter(|&t| m.succ(i, t).is_subset(truth)).collect() };
                    let aware = || -> WorldSet { def.iter().filter(|&t| vocab.is_subset(m.aware(i, t))).collect() };
                    let (g, t) = match op {
                        b'!' => (f.clone().not(), def.difference(truth)),
                        b'K' => (Formula::k(i, f.clone()), knows()),
                        b'A' => (Formula::a(i, f.clone()), aware()),
                        _ => (Formula::x(i, f.clone()), knows().intersection(aware())),
                    };
                    self.add(vocab, def, t, g);
                }
            }
            if self.corpus.domain.and {
                for a in 0..known {
                    for b in 0..known {
                        let (va, da, ta, fa) = self.classes[a].clone();
                        let (vb, db, tb, fb) = &self.classes[b];
                        let (v, d, t) = (va.union(*vb), da.intersection(*db), ta.intersection(*tb));
                        let g = fa.and(fb.clone());
                        self.add(v, d, t, g);
                    }
                }
            }
            self.ends.push(self.classes.len());
        }
    }

    /// Classes realized up to `depth` (as far as built), with a sentence
    /// for each.
    pub fn classes(&self, depth: usize) -> impl Iterator<Item = (PropSet, WorldSet, &Formula)> {
        self.classes[..self.ends[depth.min(self.depth())]].iter().map(|(v, _, t, f)| (*v, *t, f))
    }

    pub fn is_stabilized(&self, ev: &Evaluator<'_>, depth: usize) -> bool {
        matches_fixpoint(ev, self.corpus.lang(), self.classes(depth).map(|(v, t, _)| (v, t)))
    }

    /// Smallest depth up to `max_depth` at which the realized classes equal
    /// the fixpoint over the language.
    pub fn stabilization_depth(&mut self, ev: &Evaluator<'_>, max_depth: usize) -> Option<usize> {
        (0..=max_depth).find(|&d| {
            self.extend_to(d);
            self.is_stabilized(ev, d)
        })
    }
}

/// As [`brute_force_forall`], testing one sentence per realized truth
/// class instead of every sentence. Exact whenever the value of `φ[x/ψ]`
/// depends only on the class of `ψ`, which the context tests check.
pub fn brute_force_classes(
    ev: &Evaluator<'_>,
    classes: &ClassCorpus<'_>,
    world: usize,
    phi: &Formula,
    x: &Var,
    depth: usize,
) -> Result<OracleReport, CheckError> {
    debug_assert_eq!(classes.corpus.lang(), ev.model().lang(world));
    let stabilized = classes.is_stabilized(ev, depth);
    check_instances(ev, world, phi, x, stabilized, classes.classes(depth).map(|(_, _, f)| f.clone()))
}

/// Smallest depth up to `max_depth` at which the corpus is stabilized,
/// extending it as needed.
pub fn stabilization_depth(
    ev: &Evaluator<'_>,
    corpus: &mut SentenceCorpus<'_>,
    max_depth: usize,
    cap: usize,
) -> Result<Option<usize>, CheckError> {
    for d in 0..=max_depth {
        corpus.extend_to(d, cap)?;
        if is_stabilized(ev, corpus, d) {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

/// Enumerates domain sentences over `lang` up to `depth` (see
/// [`SentenceCorpus`]).
pub fn enumerate_sentences(
    m: &Structure,
    domain: QuantifierDomain,
    lang: PropSet,
    depth: usize,
    cap: usize,
) -> Result<Vec<Formula>, CheckError> {
    let mut c = SentenceCorpus::new(m, domain, lang);
    c.extend_to(depth, cap)?;
    Ok((0..c.count(depth)).map(|i| c.formula(i)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures;
    use crate::syntax::parse;

    #[test]
    fn layer_sizes_and_depths() {
        let m = fixtures::barcan();
        let mut c = SentenceCorpus::new(&m, QuantifierDomain::KXA, PropSet(0b11));
        c.extend_to(2, 1000).unwrap();
        assert_eq!((c.count(0), c.count(1), c.count(2)), (2, 14, 254));
        assert!(c.extend_to(3, 1000).is_err());
        for d in 0..=2 {
            let start = if d == 0 { 0 } else { c.count(d - 1) };
            for i in start..c.count(d) {
                let f = c.formula(i);
                assert_eq!(f.depth(), d);
                assert!(f.is_quantifier_free() && f.is_sentence());
            }
        }
        let all: BTreeSet<_> = (0..c.count(2)).map(|i| c.formula(i)).collect();
        assert_eq!(all.len(), 254);
    }

    #[test]
    fn corpus_truth_matches_evaluator() {
        for m in [fixtures::barcan(), fixtures::uncertainty()] {
            for d in [QuantifierDomain::KXA, QuantifierDomain::XA.with_top(true)] {
                let ev = Evaluator::new(&m, d);
                let mut c = SentenceCorpus::new(&m, d, m.all_props());
                c.extend_to(2, 10_000).unwrap();
                for i in 0..c.count(2) {
                    let f = c.formula(i);
                    let (_, def, truth) = c.truth(i);
                    assert_eq!(ev.truth_sets(&f).unwrap(), (def, truth), "{f}");
                }
            }
        }
    }

    #[test]
    fn barcan_awareness_probes() {
        let m = fixtures::barcan();
        let ev = Evaluator::new(&m, QuantifierDomain::KXA);
        let x = Var::new("x");
        let phi = parse("A1 #x", 1).unwrap();
        let at_s = brute_force_forall(&ev, 0, &phi, &x, 1, 1000).unwrap();
        assert_eq!((at_s.value, at_s.stabilized), (TruthValue::True, true));
        // At t the value is already False at depth 1, but the profile of
        // `q & !p` first appears at depth 2.
        let at_t = brute_force_forall(&ev, 1, &phi, &x, 1, 1000).unwrap();
        assert_eq!((at_t.value, at_t.stabilized), (TruthValue::False, false));
        assert_eq!(at_t.counterexample, Some(Formula::prop("q")));
        assert!(brute_force_forall(&ev, 1, &phi, &x, 2, 1000).unwrap().stabilized);
    }

    #[test]
    fn uncertainty_needs_depth_three() {
        let m = fixtures::uncertainty();
        let ev = Evaluator::new(&m, QuantifierDomain::KXA);
        let x = Var::new("x");
        let phi = parse("A1 #x", 1).unwrap();
        for w in 0..3 {
            // `!K1 !p`, true only at s, has depth 3.
            let mut c = SentenceCorpus::new(&m, QuantifierDomain::KXA, m.lang(w));
            assert_eq!(stabilization_depth(&ev, &mut c, 4, 100_000).unwrap(), Some(3));
            let want = ev.eval(w, &Formula::forall(x.clone(), phi.clone())).unwrap();
            let r = brute_force_with(&ev, &c, w, &phi, &x, 3).unwrap();
            assert!(r.stabilized);
            assert_eq!(r.value, want);
            let mut classes = ClassCorpus::new(&m, QuantifierDomain::KXA, m.lang(w));
            assert_eq!(classes.stabilization_depth(&ev, 6), Some(3));
            let r = brute_force_classes(&ev, &classes, w, &phi, &x, 3).unwrap();
            assert!(r.stabilized);
            assert_eq!(r.value, want);
        }
    }

    #[test]
    fn classes_agree_with_sentences() {
        for m in [fixtures::barcan(), fixtures::uncertainty()] {
            for d in [QuantifierDomain::KXA, QuantifierDomain::XA, QuantifierDomain::K.with_top(true)] {
                let mut s = SentenceCorpus::new(&m, d, m.all_props());
                s.extend_to(2, 100_000).unwrap();
                let mut c = ClassCorpus::new(&m, d, m.all_props());
                c.extend_to(2);
                for depth in 0..=2 {
                    let from_classes: BTreeSet<_> = c.classes(depth).map(|(v, t, _)| (v, t)).collect();
                    assert_eq!(from_classes, s.realized(depth));
                }
                for (_, t, f) in c.classes(2) {
                    assert_eq!(Evaluator::new(&m, d).truth_sets(f).unwrap().1, t);
                }
            }
        }
    }

    #[test]
    fn undefined_when_body_leaves_the_language() {
        let m = fixtures::barcan();
        let ev = Evaluator::new(&m, QuantifierDomain::KXA);
        let r = brute_force_forall(&ev, 0, &parse("A1 #x & q", 1).unwrap(), &Var::new("x"), 1, 100).unwrap();
        assert_eq!(r.value, TruthValue::Undefined);
    }

    #[test]
    fn rejects_other_free_variables() {
        let m = fixtures::barcan();
        let ev = Evaluator::new(&m, QuantifierDomain::KXA);
        let phi = parse("A1 #x & #y", 1).unwrap();
        assert!(brute_force_forall(&ev, 0, &phi, &Var::new("x"), 1, 100).is_err());
    }
}
