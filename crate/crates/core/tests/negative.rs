use aware_core::model::{default_prop_names, enumerate_models, EnumBounds, PropSet, StructureParts, WorldSet};
use aware_core::proofs::{instantiate, match_axiom, AxiomName, Bindings};
use aware_core::syntax::parse;
use aware_core::{AgentId, Evaluator, Formula, ModelClass, QuantifierDomain, Structure, Var};

fn rte(max_worlds: usize, constant_language: bool) -> Vec<Structure> {
    let mut b = EnumBounds::new(1, max_worlds, default_prop_names(2), ModelClass::EQUIVALENCE);
    b.constant_language = constant_language;
    enumerate_models(&b).unwrap().collect()
}

fn instance(name: AxiomName, phi: &str) -> Formula {
    let b = Bindings {
        agent: AgentId::new(1),
        phi: Some(parse(phi, 1).unwrap()),
        psi: None,
        var: Some(Var::new("x")),
    };
    let f = instantiate(name, &b).unwrap();
    assert!(match_axiom(&f, name).is_some());
    f
}

fn counterexample(models: &[Structure], domain: QuantifierDomain, f: &Formula) -> Option<(usize, usize)> {
    models.iter().enumerate().find_map(|(i, m)| {
        let ev = Evaluator::new(m, domain);
        (!ev.weakly_valid(f).unwrap().is_valid()).then(|| (i, first_false(&ev, f)))
    })
}

fn first_false(ev: &Evaluator<'_>, f: &Formula) -> usize {
    ev.eval_all(f).unwrap().iter().position(|v| v.is_false()).unwrap()
}

#[test]
fn barcan_x_fails_in_equivalence_structures() {
    let f = instance(AxiomName::BarcanX, "A1 #x");
    let models = rte(2, false);
    let (i, w) = counterexample(&models, QuantifierDomain::XA, &f).expect("Barcan_X counterexample");
    let m = &models[i];
    assert_ne!(m.lang(w), m.all_props(), "the failure needs a world missing a proposition");
}

#[test]
fn nka_and_five_fail_only_when_languages_vary() {
    let varying = rte(2, false);
    let constant = rte(2, true);
    for (name, phi) in [(AxiomName::Nka, "p"), (AxiomName::Five, "p")] {
        let f = instance(name, phi);
        assert!(counterexample(&varying, QuantifierDomain::KXA, &f).is_some(), "{name:?}");
        assert_eq!(counterexample(&constant, QuantifierDomain::KXA, &f), None, "{name:?}");
    }
}

#[test]
fn gen_k_fails_in_equivalence_structures() {
    let premise = parse("p | !p", 1).unwrap();
    let conclusion = Formula::k(AgentId::new(1).unwrap(), premise.clone());
    let found = rte(2, false).into_iter().find(|m| {
        let ev = Evaluator::new(m, QuantifierDomain::KXA);
        ev.weakly_valid(&premise).unwrap().is_valid() && !ev.weakly_valid(&conclusion).unwrap().is_valid()
    });
    assert!(found.is_some());
}

fn set(bits: &[usize]) -> PropSet {
    let mut s = PropSet::default();
    for &b in bits {
        s.insert(b);
    }
    s
}

#[test]
fn modus_ponens_fails_at_finite_propositions() {
    let m = Structure::new(StructureParts {
        agents: 1,
        props: default_prop_names(2),
        worlds: vec!["w1".into(), "w2".into()],
        lang: vec![set(&[0, 1]), set(&[0])],
        val: vec![set(&[]), set(&[])],
        aware: vec![vec![set(&[0, 1]), set(&[])]],
        succ: vec![vec![WorldSet::default(); 2]],
    })
    .unwrap();
    let ev = Evaluator::new(&m, QuantifierDomain::KXA);
    let phi = parse("A1 p & A1 q", 1).unwrap();
    let psi = parse("forall #x . A1 #x", 1).unwrap();
    assert!(ev.weakly_valid(&phi).unwrap().is_valid());
    assert!(ev.weakly_valid(&phi.clone().implies(psi.clone())).unwrap().is_valid());
    assert_eq!(first_false(&ev, &psi), 1);
}

#[test]
fn forall_generalization_fails_at_finite_propositions() {
    let m = Structure::new(StructureParts {
        agents: 1,
        props: default_prop_names(1),
        worlds: vec!["w".into()],
        lang: vec![set(&[0])],
        val: vec![set(&[0])],
        aware: vec![vec![set(&[])]],
        succ: vec![vec![WorldSet::default()]],
    })
    .unwrap();
    let ev = Evaluator::new(&m, QuantifierDomain::KXA);
    assert!(ev.weakly_valid(&parse("p", 1).unwrap()).unwrap().is_valid());
    let general = parse("forall #x . #x", 1).unwrap();
    assert_eq!(first_false(&ev, &general), 0);
    let w = ev.explain(0, &general).unwrap().unwrap();
    assert!(ev.eval(0, &w.instance()).unwrap().is_false());
}
