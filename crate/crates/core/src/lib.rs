//! Quantified awareness logic over extended awareness structures.
//!
//! Worlds carry their own propositional language, so formulas are
//! three-valued: a sentence is undefined at a world whose language does not
//! cover its vocabulary. This crate provides
//!
//! * [`syntax`]: the formula AST with its grammar and substitution
//! * [`model`]: extended awareness structures with their generators and
//!   transformations
//! * [`checker`]: three-valued evaluation with a terminating decision
//!   procedure for propositional quantifiers, plus a brute-force oracle
//! * [`proofs`]: named Hilbert systems with a proof checker and soundness
//!   sweeps
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod checker;
pub mod model;
pub mod proofs;
pub mod syntax;

pub use checker::{Evaluator, QuantifierDomain, TruthValue};
pub use model::{ModelClass, Structure};
pub use syntax::{AgentId, Formula, Prop, Var};
