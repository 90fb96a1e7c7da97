//! Random formulas and schema instances for a language family.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use super::schema::{instantiate, AxiomName, Bindings};
use super::system::Signature;
use crate::syntax::{AgentId, Formula, Prop, Var};

/// Names bound variables are drawn from.
const VARS: [&str; 3] = ["x", "y", "z"];

#[derive(Clone, Debug)]
pub struct Fuzzer {
    pub props: Vec<Prop>,
    pub agents: u16,
    pub signature: Signature,
    /// Largest depth of a generated formula or metavariable value.
    pub max_depth: usize,
}

impl Fuzzer {
    pub fn new(props: Vec<Prop>, agents: u16, signature: Signature, max_depth: usize) -> Self {
        assert!(!props.is_empty() && agents > 0, "fuzzer needs propositions and agents");
        Fuzzer { props, agents, signature, max_depth }
    }

    fn agent<R: Rng>(&self, rng: &mut R) -> AgentId {
        AgentId::from_slot(rng.gen_range(0..self.agents as usize))
    }

    fn atom<R: Rng>(&self, rng: &mut R, scope: &[Var]) -> Formula {
        let roll = rng.gen_range(0..20);
        if roll == 0 {
            Formula::Top
        } else if !scope.is_empty() && roll < 8 {
            Formula::Var(scope.choose(rng).expect("nonempty").clone())
        } else {
            Formula::Prop(self.props.choose(rng).expect("nonempty").clone())
        }
    }

    /// A formula of depth at most `depth` whose free variables lie in
    /// `scope`.
    pub fn formula<R: Rng>(&self, rng: &mut R, depth: usize, scope: &[Var]) -> Formula {
        if depth == 0 || rng.gen_ratio(1, 6) {
            return self.atom(rng, scope);
        }
        let s = self.signature;
        let ops: Vec<u8> = [(true, b'!'), (true, b'&'), (s.k, b'K'), (s.a, b'A'), (s.x, b'X'), (s.forall, b'F')]
            .into_iter()
            .filter_map(|(on, c)| on.then_some(c))
            .collect();
        let sub = |rng: &mut R, scope: &[Var]| self.formula(rng, depth - 1, scope);
        match *ops.choose(rng).expect("nonempty") {
            b'!' => sub(rng, scope).not(),
            b'&' => {
                let a = sub(rng, scope);
                let d = rng.gen_range(0..depth);
                let b = self.formula(rng, d, scope);
                if rng.gen() {
                    a.and(b)
                } else {
                    b.and(a)
                }
            }
            b'K' => Formula::k(self.agent(rng), sub(rng, scope)),
            b'A' => Formula::a(self.agent(rng), sub(rng, scope)),
            b'X' => Formula::x(self.agent(rng), sub(rng, scope)),
            _ => {
                let v = Var::new(VARS.choose(rng).expect("nonempty"));
                let mut inner: Vec<Var> = scope.to_vec();
                inner.push(v.clone());
                Formula::forall(v, sub(rng, &inner))
            }
        }
    }

    /// A sentence of depth at most `max_depth`, with the depth drawn
    /// uniformly.
    pub fn sentence<R: Rng>(&self, rng: &mut R) -> Formula {
        let d = rng.gen_range(0..=self.max_depth);
        self.formula(rng, d, &[])
    }

    /// A quantifier-free sentence of depth at most `max_depth`.
    pub fn qf_sentence<R: Rng>(&self, rng: &mut R) -> Formula {
        let flat = Fuzzer { signature: Signature { forall: false, ..self.signature }, ..self.clone() };
        flat.sentence(rng)
    }

    /// Random metavariable values for a schema, chosen so that the
    /// instance is a sentence.
    pub fn bindings<R: Rng>(&self, rng: &mut R, schema: AxiomName) -> Bindings {
        let sig = schema.signature();
        let mut b = Bindings::default();
        if sig.agent {
            b.agent = Some(self.agent(rng));
        }
        let x = Var::new(VARS.choose(rng).expect("nonempty"));
        // Metavariables sit under the binder except in N_forall, where
        // phi must not mention the variable.
        let scope: Vec<Var> = if sig.var && schema != AxiomName::NForall { alloc::vec![x.clone()] } else { Vec::new() };
        let meta = |rng: &mut R| {
            let d = rng.gen_range(0..=self.max_depth);
            self.formula(rng, d, &scope)
        };
        if sig.phi {
            b.phi = Some(meta(rng));
        }
        if sig.psi {
            b.psi = Some(if schema == AxiomName::OneForall { self.qf_sentence(rng) } else { meta(rng) });
        }
        if sig.var {
            b.var = Some(x);
        }
        b
    }

    /// A random instance of a schema.
    pub fn instance<R: Rng>(&self, rng: &mut R, schema: AxiomName) -> Formula {
        if schema == AxiomName::Prop {
            return self.tautology(rng);
        }
        loop {
            if let Some(f) = instantiate(schema, &self.bindings(rng, schema)) {
                return f;
            }
        }
    }

    /// A substitution instance of a propositional tautology.
    pub fn tautology<R: Rng>(&self, rng: &mut R) -> Formula {
        let a = self.sentence(rng);
        let b = self.sentence(rng);
        let c = self.sentence(rng);
        match rng.gen_range(0..10) {
            0 => a.clone().implies(a),
            1 => a.clone().or(a.not()),
            2 => a.clone().implies(b.implies(a)),
            3 => {
                let abc = a.clone().implies(b.clone().implies(c.clone()));
                abc.implies(a.clone().implies(b).implies(a.implies(c)))
            }
            4 => b.clone().not().implies(a.clone().not()).implies(a.implies(b)),
            5 => a.clone().not().not().implies(a),
            6 => a.clone().and(b).implies(a),
            7 => a.clone().and(b.clone()).implies(b.and(a)),
            8 => a.clone().and(a.not()).implies(b),
            _ => a.clone().iff(b.clone()).implies(b.iff(a)),
        }
    }
}
