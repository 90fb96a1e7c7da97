//! Property checks and counterexample searches over model corpora.

use aware_core::checker::{
    brute_force_classes, brute_force_with, CheckError, ClassCorpus, Evaluator, QuantifierDomain, SentenceCorpus, TruthValue,
    Validity,
};
use aware_core::model::{default_prop_names, generate_random, rename_props, swap_model, validate, GenParams, PropSet};
use aware_core::proofs::{instantiate, AxiomName, Bindings, Fuzzer, Signature};
use aware_core::syntax::{self, parse, subst_prop, swap_props};
use aware_core::{AgentId, Formula, ModelClass, Prop, Structure, Var};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// A concrete `(model, world, formula)` triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Found {
    pub model: Structure,
    pub world: usize,
    pub formula: Formula,
}

/// The first world where `f` is false, over models in order.
pub fn first_counterexample<'a>(
    models: impl IntoIterator<Item = &'a Structure>,
    f: &Formula,
    domain: QuantifierDomain,
) -> Result<Option<Found>, CheckError> {
    for m in models {
        if let Validity::Counterexample(world) = Evaluator::new(m, domain).weakly_valid(f)? {
            return Ok(Some(Found { model: m.clone(), world, formula: f.clone() }));
        }
    }
    Ok(None)
}

/// The first world, over models in order, where `f` is true.
pub fn first_satisfying<'a>(
    models: impl IntoIterator<Item = &'a Structure>,
    f: &Formula,
    domain: QuantifierDomain,
) -> Result<Option<Found>, CheckError> {
    for m in models {
        let (_, truth) = Evaluator::new(m, domain).truth_sets(f)?;
        if let Some(world) = truth.iter().next() {
            return Ok(Some(Found { model: m.clone(), world, formula: f.clone() }));
        }
    }
    Ok(None)
}

/// A random structure for the invariance experiments: one or two agents,
/// up to four worlds, three propositions, no frame conditions.
fn small_model(rng: &mut ChaCha8Rng, class: ModelClass, props: usize) -> Structure {
    let params = GenParams::new(rng.gen_range(1..=2), rng.gen_range(1..=4), props, class, rng.gen());
    generate_random(&params).expect("parameters are feasible")
}

fn fuzzer_for(m: &Structure, max_depth: usize) -> Fuzzer {
    Fuzzer::new(m.props().to_vec(), m.agents() as u16, Signature::KXA, max_depth)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InvarianceReport {
    /// `(model, world, formula)` triples compared, per transformation.
    pub triples: usize,
    pub swap_mismatch: Option<Found>,
    pub rename_mismatch: Option<Found>,
}

/// Compares `φ` on `M` with `φ[p <-> p']` on the label-swapped model, and
/// `φ` with `τ(φ)` on the renamed model, for `pairs` random `(M, φ)`.
pub fn label_swap_invariance(pairs: usize, seed: u64) -> Result<InvarianceReport, CheckError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = InvarianceReport::default();
    let domain = QuantifierDomain::KXA;
    for _ in 0..pairs {
        let m = small_model(&mut rng, ModelClass::ANY, 3);
        let phi = fuzzer_for(&m, 3).sentence(&mut rng);
        let before = Evaluator::new(&m, domain).eval_all(&phi)?;
        report.triples += before.len();

        let pair: Vec<&Prop> = m.props().choose_multiple(&mut rng, 2).collect();
        let swapped = swap_model(&m, pair[0], pair[1]).expect("distinct propositions of the model");
        let after = Evaluator::new(&swapped, domain).eval_all(&swap_props(&phi, pair[0], pair[1]))?;
        if let Some(world) = (0..before.len()).find(|&w| before[w] != after[w]) {
            report.swap_mismatch.get_or_insert(Found { model: m.clone(), world, formula: phi.clone() });
        }

        let mut image: Vec<Prop> = m.props().iter().map(|p| Prop::new(&format!("{p}_t"))).collect();
        image.shuffle(&mut rng);
        let tau: Vec<(Prop, Prop)> = m.props().iter().cloned().zip(image).collect();
        let renamed = rename_props(&m, &tau).expect("injective");
        let lookup = |p: &Prop| tau.iter().find(|(a, _)| a == p).map(|(_, b)| b.clone()).expect("in the model");
        let after = Evaluator::new(&renamed, domain).eval_all(&syntax::rename_props(&phi, lookup))?;
        if let Some(world) = (0..before.len()).find(|&w| before[w] != after[w]) {
            report.rename_mismatch.get_or_insert(Found { model: m, world, formula: phi });
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub models: usize,
    pub formulas: usize,
    /// `(world, formula)` comparisons on Euclidean models.
    pub checks: usize,
    /// A Euclidean model where `A*_i φ` and `A'_i φ` differ.
    pub euclidean_mismatch: Option<Found>,
    /// A non-Euclidean model where they differ, found by search.
    pub countermodel: Option<Found>,
}

/// Whether `A*_i φ` and `A'_i φ` take different values somewhere; returns
/// the first such world and the agent.
fn astar_aprime_differ(ev: &Evaluator<'_>, phi: &Formula) -> Result<Option<(usize, Formula)>, CheckError> {
    for slot in 0..ev.model().agents() {
        let i = AgentId::from_slot(slot);
        let star = ev.eval_all(&Formula::astar(i, phi.clone()))?;
        let prime = ev.eval_all(&Formula::aprime(i, phi.clone()))?;
        if let Some(w) = (0..star.len()).find(|&w| star[w] != prime[w]) {
            return Ok(Some((w, Formula::astar(i, phi.clone()).iff(Formula::aprime(i, phi.clone())))));
        }
    }
    Ok(None)
}

/// Checks `A*_i φ` against `A'_i φ` on random Euclidean models for
/// `formulas` fuzzed sentences each, then searches `search` for a
/// non-Euclidean model separating them.
pub fn astar_aprime(
    models: usize,
    formulas: usize,
    search: impl IntoIterator<Item = Structure>,
    seed: u64,
) -> Result<EquivalenceReport, CheckError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sig = Fuzzer::new(default_prop_names(2), 2, Signature::KXA, 3);
    let phis: Vec<Formula> = (0..formulas).map(|_| sig.sentence(&mut rng)).collect();
    let sample: Vec<Structure> = (0..models)
        .map(|_| {
            let params = GenParams::new(rng.gen_range(1..=2), rng.gen_range(1..=4), 2, ModelClass::new(false, false, true), rng.gen());
            generate_random(&params).expect("feasible")
        })
        .collect();
    let mut report = EquivalenceReport { models, formulas, ..Default::default() };
    let results: Vec<(usize, Option<Found>)> = sample
        .par_iter()
        .map(|m| {
            let ev = Evaluator::new(m, QuantifierDomain::KXA);
            let mut checks = 0;
            for phi in phis.iter().filter(|f| f.max_agent() as usize <= m.agents()) {
                checks += m.world_count();
                if let Some((world, formula)) = astar_aprime_differ(&ev, phi)? {
                    return Ok((checks, Some(Found { model: m.clone(), world, formula })));
                }
            }
            Ok((checks, None))
        })
        .collect::<Result<_, CheckError>>()?;
    for (checks, found) in results {
        report.checks += checks;
        if report.euclidean_mismatch.is_none() {
            report.euclidean_mismatch = found;
        }
    }
    let probes: Vec<&Formula> = phis.iter().filter(|f| f.max_agent() <= 1).take(50).collect();
    'search: for m in search.into_iter().filter(|m| !validate(m).is_euclidean()) {
        let ev = Evaluator::new(&m, QuantifierDomain::KXA);
        for phi in &probes {
            if let Some((world, formula)) = astar_aprime_differ(&ev, phi)? {
                report.countermodel = Some(Found { model: m.clone(), world, formula });
                break 'search;
            }
        }
    }
    Ok(report)
}

/// Instances of a schema used for validity and boundary checks: every
/// binding of `φ` and `ψ` from a small fixed list, for agent 1 and
/// variable `x`.
pub fn schema_instances(schema: AxiomName) -> Vec<Formula> {
    let i = AgentId::from_slot(0);
    let x = Var::new("x");
    let atoms: Vec<Formula> = ["p", "q", "p & q", "!p", "#x", "A1 #x", "K1 #x", "!#x", "p & #x"]
        .iter()
        .map(|t| parse(t, 1).expect("fixed text parses"))
        .collect();
    let sig = schema.signature();
    let mut out = Vec::new();
    let psis: Vec<Option<Formula>> =
        if sig.psi { atoms.iter().map(|f| Some(f.clone())).collect() } else { vec![None] };
    for phi in &atoms {
        for psi in &psis {
            let b = Bindings {
                agent: sig.agent.then_some(i),
                phi: sig.phi.then(|| phi.clone()),
                psi: psi.clone(),
                var: sig.var.then(|| x.clone()),
            };
            if let Some(f) = instantiate(schema, &b) {
                if f.is_sentence() && !out.contains(&f) {
                    out.push(f);
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryReport {
    pub schema: AxiomName,
    pub class: ModelClass,
    pub instances: usize,
    pub in_class_models: usize,
    /// A failure inside the class, which would refute validity there.
    pub in_class_violation: Option<Found>,
    /// A failure on a model outside the class.
    pub outside_witness: Option<Found>,
}

/// Checks a schema on every model of `corpus` inside `class`, and looks
/// for a violation on the models outside it.
pub fn schema_boundary(
    schema: AxiomName,
    class: ModelClass,
    corpus: &[Structure],
) -> Result<BoundaryReport, CheckError> {
    let instances = schema_instances(schema);
    let domain = QuantifierDomain::KXA;
    let (inside, outside): (Vec<&Structure>, Vec<&Structure>) =
        corpus.iter().partition(|m| validate(m).in_class(&class));
    let violations: Vec<Option<Found>> = inside
        .par_iter()
        .map(|m| {
            for f in &instances {
                if let Some(found) = first_counterexample([*m], f, domain)? {
                    return Ok(Some(found));
                }
            }
            Ok(None)
        })
        .collect::<Result<_, CheckError>>()?;
    let mut outside_witness = None;
    'search: for m in outside {
        for f in &instances {
            if let Some(found) = first_counterexample([m], f, domain)? {
                outside_witness = Some(found);
                break 'search;
            }
        }
    }
    Ok(BoundaryReport {
        schema,
        class,
        instances: instances.len(),
        in_class_models: inside.len(),
        in_class_violation: violations.into_iter().flatten().next(),
        outside_witness,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstitutionReport {
    pub formula: Formula,
    pub instance: Formula,
    pub models: usize,
    /// Should be `None` when the propositions are exactly `p, q`.
    pub formula_counterexample: Option<Found>,
    pub instance_counterexample: Option<Found>,
}

/// `A1 p & A1 q -> forall x. A1 x` and its instance with `p` replaced by
/// `q`, checked on every model of the corpus.
pub fn substitution_failure(corpus: &[Structure]) -> Result<SubstitutionReport, CheckError> {
    let formula = parse("A1 p & A1 q -> forall #x . A1 #x", 1).expect("fixed text parses");
    let instance = subst_prop(&formula, &Prop::new("p"), &Formula::prop("q")).expect("q is a domain sentence");
    let domain = QuantifierDomain::KXA;
    Ok(SubstitutionReport {
        models: corpus.len(),
        formula_counterexample: first_counterexample(corpus, &formula, domain)?,
        instance_counterexample: first_counterexample(corpus, &instance, domain)?,
        formula,
        instance,
    })
}

/// `!X1 !(forall x. A1 x) & !X1 (forall x. A1 x)`.
pub fn uncertainty_formula() -> Formula {
    parse("!X1 !(forall #x . A1 #x) & !X1 (forall #x . A1 #x)", 1).expect("fixed text parses")
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OracleSummary {
    pub models: usize,
    pub probes: usize,
    /// Probes whose world's classes never matched the fixpoint.
    pub unstabilized: usize,
    pub deepest: usize,
    /// A probe where the fixpoint and the oracle disagree.
    pub disagreement: Option<Found>,
}

/// Bodies with `x` free, used as `∀x φ` probes.
pub fn probe_bodies(count: usize, signature: Signature, seed: u64) -> Vec<Formula> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fz = Fuzzer::new(default_prop_names(2), 1, signature, 3);
    let x = Var::new("x");
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let d = rng.gen_range(1..=3);
        let f = fz.formula(&mut rng, d, std::slice::from_ref(&x));
        if f.has_free(&x) && f.free_vars().len() == 1 {
            out.push(f);
        }
    }
    out
}

/// Compares the fixpoint value of `∀x φ` with the class oracle at each
/// world's stabilization depth, for `per_world` bodies per world, cycling
/// through `bodies`.
pub fn oracle_agreement(
    models: &[Structure],
    domain: QuantifierDomain,
    bodies: &[Formula],
    per_world: usize,
    max_depth: usize,
) -> Result<OracleSummary, CheckError> {
    let x = Var::new("x");
    let parts: Vec<OracleSummary> = models
        .par_iter()
        .enumerate()
        .map(|(idx, m)| {
            let ev = Evaluator::new(m, domain);
            let mut s = OracleSummary { models: 1, ..Default::default() };
            let mut corpora: Vec<(PropSet, ClassCorpus<'_>, Option<usize>)> = Vec::new();
            for w in 0..m.world_count() {
                let lang = m.lang(w);
                let pos = match corpora.iter().position(|c| c.0 == lang) {
                    Some(p) => p,
                    None => {
                        let mut c = ClassCorpus::new(m, domain, lang);
                        let d = c.stabilization_depth(&ev, max_depth);
                        corpora.push((lang, c, d));
                        corpora.len() - 1
                    }
                };
                let (_, corpus, depth) = &corpora[pos];
                for k in 0..per_world {
                    let body = &bodies[(idx * 31 + w * per_world + k) % bodies.len()];
                    s.probes += 1;
                    let Some(d) = *depth else {
                        s.unstabilized += 1;
                        continue;
                    };
                    s.deepest = s.deepest.max(d);
                    let forall = Formula::forall(x.clone(), body.clone());
                    let fixpoint = ev.eval(w, &forall)?;
                    let oracle = brute_force_classes(&ev, corpus, w, body, &x, d)?;
                    if fixpoint != oracle.value && s.disagreement.is_none() {
                        s.disagreement = Some(Found { model: m.clone(), world: w, formula: forall });
                    }
                }
            }
            Ok(s)
        })
        .collect::<Result<_, CheckError>>()?;
    let mut total = OracleSummary::default();
    for p in parts {
        total.models += p.models;
        total.probes += p.probes;
        total.unstabilized += p.unstabilized;
        total.deepest = total.deepest.max(p.deepest);
        if total.disagreement.is_none() {
            total.disagreement = p.disagreement;
        }
    }
    Ok(total)
}

/// Compares the fixpoint with the full listing of sentences up to `depth`
/// on every `stride`-th model. A counterexample in the listing must make
/// the fixpoint false, and a stabilized listing must agree exactly.
/// Returns the probe count and the first disagreement.
pub fn sentence_oracle_agreement(
    models: &[Structure],
    domain: QuantifierDomain,
    bodies: &[Formula],
    stride: usize,
    depth: usize,
) -> Result<(usize, Option<Found>), CheckError> {
    let x = Var::new("x");
    let parts: Vec<(usize, Option<Found>)> = models
        .par_iter()
        .enumerate()
        .filter(|(i, _)| i % stride == 0)
        .map(|(idx, m)| {
            let ev = Evaluator::new(m, domain);
            let mut probes = 0;
            for w in 0..m.world_count() {
                let mut corpus = SentenceCorpus::new(m, domain, m.lang(w));
                corpus.extend_to(depth, usize::MAX)?;
                let body = &bodies[(idx + w) % bodies.len()];
                let forall = Formula::forall(x.clone(), body.clone());
                let fixpoint = ev.eval(w, &forall)?;
                let r = brute_force_with(&ev, &corpus, w, body, &x, depth)?;
                probes += 1;
                let sound = r.value != TruthValue::False || fixpoint == TruthValue::False;
                if !sound || (r.stabilized && r.value != fixpoint) {
                    return Ok((probes, Some(Found { model: m.clone(), world: w, formula: forall })));
                }
            }
            Ok((probes, None))
        })
        .collect::<Result<_, CheckError>>()?;
    let probes = parts.iter().map(|p| p.0).sum();
    Ok((probes, parts.into_iter().find_map(|p| p.1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::enumeration;

    #[test]
    fn invariance_holds_on_a_small_run() {
        let r = label_swap_invariance(60, 1).unwrap();
        assert!(r.triples >= 60);
        assert_eq!((r.swap_mismatch, r.rename_mismatch), (None, None));
    }

    #[test]
    fn schema_instances_are_sentences() {
        for schema in AxiomName::ALL {
            let inst = schema_instances(schema);
            assert!(inst.iter().all(Formula::is_sentence), "{schema}");
            assert!(!inst.is_empty() || schema == AxiomName::Prop, "{schema}");
        }
    }

    #[test]
    fn substitution_on_two_world_models() {
        let corpus = enumeration(1, 2, 2, ModelClass::ANY, false).unwrap();
        let r = substitution_failure(&corpus).unwrap();
        assert_eq!(r.formula_counterexample, None);
        let found = r.instance_counterexample.unwrap();
        let m = &found.model;
        assert_eq!(m.lang(found.world), m.all_props());
    }

    #[test]
    fn oracle_agrees_on_a_few_models() {
        let corpus = enumeration(1, 2, 2, ModelClass::EQUIVALENCE, false).unwrap();
        let bodies = probe_bodies(20, Signature::KXA, 4);
        let s = oracle_agreement(&corpus[..200.min(corpus.len())], QuantifierDomain::KXA, &bodies, 1, 6).unwrap();
        assert_eq!(s.disagreement, None);
        assert_eq!(s.unstabilized, 0);
    }
}
