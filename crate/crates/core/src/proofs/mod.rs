//! Hilbert-style proof checking.
//!
//! Each axiom schema has a recognizer ([`match_axiom`]) and an instantiator
//! ([`instantiate`]) over explicit metavariable bindings. Schemas are
//! matched syntactically against the desugared formula tree, so `A*_i φ`
//! in a starred schema matches `K_i (φ | !φ)` written either way. Prop is
//! decided by truth tables over maximal non-propositional subformulas.
//!
//! Rule justifications carry their auxiliary data (agent, `q`, `x`), so
//! checking a script never searches.

mod fuzz;
mod schema;
mod script;
mod sweep;
mod system;
mod tautology;

pub use fuzz::Fuzzer;
pub use schema::{instantiate, match_axiom, matching_axioms, AxiomName, Bindings, Metavars, UnknownName};
pub use script::{check_proof, Justification, ProofLine, ProofScript, Reason, Rejection};
pub use sweep::{soundness_sweep, sweep_model, InstanceSet, SweepReport, SweepWitness, Tally, FINITE_PHI_RULES};
pub use system::{AxiomSystem, Rule, Signature, SystemError};
pub use tautology::{is_tautology, MAX_ATOMS};
