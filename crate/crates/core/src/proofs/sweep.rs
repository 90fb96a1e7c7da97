//! Soundness sweeps: weak validity of axiom instances, and preservation of
//! weak validity by the rules, model by model.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::fuzz::Fuzzer;
use super::schema::AxiomName;
use super::system::{AxiomSystem, Rule};
use crate::checker::{CheckError, Evaluator, QuantifierDomain, Validity};
use crate::model::Structure;
use crate::syntax::{abstract_prop, AgentId, Formula, Var};

/// Rules whose per-model preservation can fail when the set of
/// propositions is finite. Their failures are findings, not violations.
pub const FINITE_PHI_RULES: [Rule; 2] = [Rule::Mp, Rule::GenForall];

/// A fixed corpus of test formulas for one system.
#[derive(Clone, Debug)]
pub struct InstanceSet {
    pub axioms: Vec<(AxiomName, Formula)>,
    /// Candidate premises for the rules.
    pub pool: Vec<Formula>,
    pub rules: Vec<Rule>,
    pub agents: u16,
}

impl InstanceSet {
    /// `per_schema` random instances of every schema of the system, and a
    /// premise pool of `pool` random sentences plus up to `pool` of the
    /// axiom instances, spread evenly over the schemas.
    pub fn generate(system: &AxiomSystem, fuzzer: &Fuzzer, per_schema: usize, pool: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut axioms = Vec::new();
        for &schema in &system.schemas {
            for _ in 0..per_schema {
                axioms.push((schema, fuzzer.instance(&mut rng, schema)));
            }
        }
        let mut premises: Vec<Formula> = (0..pool).map(|_| fuzzer.sentence(&mut rng)).collect();
        let step = axioms.len().div_ceil(pool.max(1)).max(1);
        premises.extend(axioms.iter().step_by(step).map(|(_, f)| f.clone()));
        InstanceSet { axioms, pool: premises, rules: system.rules.iter().copied().collect(), agents: fuzzer.agents }
    }
}

/// One failing check: for an axiom, `formula` is false at `world`; for a
/// rule, the premises are weakly valid in the model and the conclusion
/// `formula` is false at `world`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepWitness {
    /// Position of the model in the swept sequence.
    pub model: usize,
    pub world: usize,
    pub formula: Formula,
    pub premises: Vec<Formula>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub checks: u64,
    pub failures: u64,
    /// The failure with the smallest model position.
    pub witness: Option<SweepWitness>,
}

impl Tally {
    fn record(&mut self, failure: Option<SweepWitness>) {
        self.checks += 1;
        if let Some(w) = failure {
            self.failures += 1;
            if self.witness.is_none() {
                self.witness = Some(w);
            }
        }
    }

    fn merge(&mut self, other: Tally) {
        self.checks += other.checks;
        self.failures += other.failures;
        match (&self.witness, other.witness) {
            (None, w) => self.witness = w,
            (Some(a), Some(b)) if b.model < a.model => self.witness = Some(b),
            _ => {}
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SweepReport {
    pub models: usize,
    pub axioms: BTreeMap<AxiomName, Tally>,
    pub rules: BTreeMap<Rule, Tally>,
}

impl SweepReport {
    /// Adds another report. The result does not depend on merge order.
    pub fn merge(&mut self, other: SweepReport) {
        self.models += other.models;
        for (a, t) in other.axioms {
            self.axioms.entry(a).or_default().merge(t);
        }
        for (r, t) in other.rules {
            self.rules.entry(r).or_default().merge(t);
        }
    }

    /// Failures outside the finite-Φ findings.
    pub fn violations(&self) -> u64 {
        let axioms: u64 = self.axioms.values().map(|t| t.failures).sum();
        let rules: u64 =
            self.rules.iter().filter(|(r, _)| !FINITE_PHI_RULES.contains(r)).map(|(_, t)| t.failures).sum();
        axioms + rules
    }

    /// Rule failures attributable to a finite set of propositions.
    pub fn findings(&self) -> u64 {
        self.rules.iter().filter(|(r, _)| FINITE_PHI_RULES.contains(r)).map(|(_, t)| t.failures).sum()
    }

    pub fn failing_axioms(&self) -> Vec<AxiomName> {
        self.axioms.iter().filter(|(_, t)| t.failures > 0).map(|(a, _)| *a).collect()
    }
}

fn falsified(ev: &Evaluator<'_>, f: &Formula) -> Result<Option<usize>, CheckError> {
    Ok(match ev.weakly_valid(f)? {
        Validity::Valid => None,
        Validity::Counterexample(w) => Some(w),
    })
}

/// Checks every axiom instance and every rule over the pool on one model.
/// The model needs at least as many agents as the instance set uses.
pub fn sweep_model(
    m: &Structure,
    position: usize,
    set: &InstanceSet,
    domain: QuantifierDomain,
) -> Result<SweepReport, CheckError> {
    let ev = Evaluator::new(m, domain);
    let mut report = SweepReport { models: 1, ..SweepReport::default() };
    let witness = |world, formula: &Formula, premises: Vec<Formula>| SweepWitness {
        model: position,
        world,
        formula: formula.clone(),
        premises,
    };
    for (schema, f) in &set.axioms {
        let fail = falsified(&ev, f)?.map(|w| witness(w, f, Vec::new()));
        report.axioms.entry(*schema).or_default().record(fail);
    }
    if set.rules.is_empty() {
        return Ok(report);
    }
    let mut valid = Vec::new();
    for f in &set.pool {
        if falsified(&ev, f)?.is_none() {
            valid.push(f);
        }
    }
    let agents: Vec<AgentId> = (0..set.agents as usize).map(AgentId::from_slot).collect();
    for &rule in &set.rules {
        let tally = report.rules.entry(rule).or_default();
        for &phi in &valid {
            let mut conclusions: Vec<(Formula, Vec<Formula>)> = Vec::new();
            match rule {
                Rule::Mp => {
                    // Every valid implication whose antecedent is valid too.
                    if let Some((a, b)) = phi.as_implies() {
                        if valid.iter().any(|v| *v == a) || falsified(&ev, a)?.is_none() {
                            conclusions.push((b.clone(), alloc::vec![a.clone(), phi.clone()]));
                        }
                    }
                }
                Rule::GenK => {
                    conclusions.extend(agents.iter().map(|&i| (Formula::k(i, phi.clone()), alloc::vec![phi.clone()])))
                }
                Rule::GenX => conclusions.extend(agents.iter().map(|&i| {
                    (Formula::a(i, phi.clone()).implies(Formula::x(i, phi.clone())), alloc::vec![phi.clone()])
                })),
                Rule::GenStar => conclusions.extend(agents.iter().map(|&i| {
                    (Formula::astar(i, phi.clone()).implies(Formula::k(i, phi.clone())), alloc::vec![phi.clone()])
                })),
                Rule::GenForall => {
                    let x = fresh_var(phi);
                    for q in phi.vocabulary() {
                        if let Some(body) = abstract_prop(phi, &q, &x) {
                            conclusions.push((Formula::forall(x.clone(), body), alloc::vec![phi.clone()]));
                        }
                    }
                }
            }
            for (c, premises) in conclusions {
                let fail = falsified(&ev, &c)?.map(|w| witness(w, &c, premises));
                tally.record(fail);
            }
        }
    }
    Ok(report)
}

/// A variable not occurring anywhere in `f`.
fn fresh_var(f: &Formula) -> Var {
    let mut used = Vec::new();
    f.visit(&mut |g| match g {
        Formula::Var(v) | Formula::Forall(v, _) => used.push(v.clone()),
        _ => {}
    });
    (0..).map(|n| Var::new(&alloc::format!("g{n}"))).find(|v| !used.contains(v)).expect("unbounded")
}

/// Sweeps a sequence of models in order.
pub fn soundness_sweep<'a>(
    models: impl IntoIterator<Item = &'a Structure>,
    set: &InstanceSet,
    domain: QuantifierDomain,
) -> Result<SweepReport, CheckError> {
    let mut report = SweepReport::default();
    for (i, m) in models.into_iter().enumerate() {
        report.merge(sweep_model(m, i, set, domain)?);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{fixtures, generate_random, GenParams, ModelClass};
    use crate::syntax::{parse, Prop};

    fn props() -> Vec<Prop> {
        alloc::vec![Prop::new("p"), Prop::new("q")]
    }

    #[test]
    fn barcan_x_fails_on_the_fixture() {
        let sys = AxiomSystem::named("AX_XAforall").unwrap();
        let mut set = InstanceSet { axioms: Vec::new(), pool: Vec::new(), rules: Vec::new(), agents: 1 };
        set.axioms.push((AxiomName::BarcanX, parse("(forall #x . X1 A1 #x) -> X1 forall #x . A1 #x", 1).unwrap()));
        set.axioms.push((AxiomName::FaX, parse("!(forall #x . A1 #x) -> X1 !(forall #x . A1 #x)", 1).unwrap()));
        let r = sweep_model(&fixtures::barcan(), 0, &set, sys.domain()).unwrap();
        assert_eq!(r.failing_axioms(), [AxiomName::FaX, AxiomName::BarcanX]);
        assert_eq!(r.axioms[&AxiomName::BarcanX].witness.as_ref().unwrap().world, 0);
        assert_eq!(r.axioms[&AxiomName::FaX].witness.as_ref().unwrap().world, 1);
    }

    #[test]
    fn sound_system_on_random_models() {
        let sys = AxiomSystem::named("AXe_XAforall+TX4X5X").unwrap();
        let fz = Fuzzer::new(props(), 1, sys.signature, 2);
        let set = InstanceSet::generate(&sys, &fz, 6, 10, 7);
        let models: Vec<_> = (0..40)
            .map(|s| generate_random(&GenParams::new(1, 1 + s % 3, 2, ModelClass::EQUIVALENCE, s as u64)).unwrap())
            .collect();
        let r = soundness_sweep(&models, &set, sys.domain()).unwrap();
        assert_eq!(r.models, 40);
        assert_eq!(r.violations(), 0, "{:?}", r.failing_axioms());
        assert!(r.axioms.values().all(|t| t.checks == 40 * 6));
    }

    #[test]
    fn gen_forall_finding_at_finite_phi() {
        // One world with p true: p is valid, forall x. x is not.
        let m = Structure::new(crate::model::StructureParts {
            agents: 1,
            props: alloc::vec![Prop::new("p")],
            worlds: alloc::vec!["s".into()],
            lang: alloc::vec![crate::model::PropSet::singleton(0)],
            val: alloc::vec![crate::model::PropSet::singleton(0)],
            aware: alloc::vec![alloc::vec![crate::model::PropSet::EMPTY]],
            succ: alloc::vec![alloc::vec![crate::model::WorldSet::EMPTY]],
        })
        .unwrap();
        let set = InstanceSet {
            axioms: Vec::new(),
            pool: alloc::vec![Formula::prop("p")],
            rules: alloc::vec![Rule::GenForall, Rule::GenK],
            agents: 1,
        };
        let r = sweep_model(&m, 0, &set, QuantifierDomain::KXA).unwrap();
        assert_eq!(r.rules[&Rule::GenForall].failures, 1);
        assert_eq!(r.findings(), 1);
        assert_eq!(r.violations(), 0);
    }

    #[test]
    fn merge_is_order_independent() {
        let sys = AxiomSystem::named("AX_KXAforall").unwrap();
        let fz = Fuzzer::new(props(), 1, sys.signature, 2);
        let set = InstanceSet::generate(&sys, &fz, 3, 8, 3);
        let models: Vec<_> =
            (0..12).map(|s| generate_random(&GenParams::new(1, 3, 2, ModelClass::ANY, s)).unwrap()).collect();
        let parts: Vec<_> =
            models.iter().enumerate().map(|(i, m)| sweep_model(m, i, &set, sys.domain()).unwrap()).collect();
        let mut fwd = SweepReport::default();
        for p in parts.iter().cloned() {
            fwd.merge(p);
        }
        let mut rev = SweepReport::default();
        for p in parts.into_iter().rev() {
            rev.merge(p);
        }
        assert_eq!(fwd, rev);
    }
}
