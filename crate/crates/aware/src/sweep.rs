//! Model corpora and a parallel soundness-sweep driver.

use aware_core::checker::{CheckError, QuantifierDomain};
use aware_core::model::{default_prop_names, enumerate_models, generate_random, EnumBounds, GenParams, ModelError};
use aware_core::proofs::{sweep_model, InstanceSet, SweepReport};
use aware_core::{ModelClass, Structure};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Every structure with one agent, up to `max_worlds` worlds over the
/// propositions `p, q, ...`, in the class.
pub fn enumeration(
    agents: usize,
    max_worlds: usize,
    props: usize,
    class: ModelClass,
    constant_language: bool,
) -> Result<Vec<Structure>, ModelError> {
    let mut bounds = EnumBounds::new(agents, max_worlds, default_prop_names(props), class);
    bounds.constant_language = constant_language;
    Ok(enumerate_models(&bounds)?.collect())
}

/// `count` seeded random structures in the class, with world counts drawn
/// from `1..=max_worlds`. Each model gets its own sub-seed so the list is
/// deterministic.
pub fn random_models(
    count: usize,
    agents: usize,
    max_worlds: usize,
    props: usize,
    class: ModelClass,
    seed: u64,
) -> Result<Vec<Structure>, ModelError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let worlds = rng.gen_range(1..=max_worlds);
            generate_random(&GenParams::new(agents, worlds, props, class, rng.gen()))
        })
        .collect()
}

/// Sweeps the models in parallel. Per-model reports are merged in model
/// order, so the result does not depend on scheduling.
pub fn par_sweep(models: &[Structure], set: &InstanceSet, domain: QuantifierDomain) -> Result<SweepReport, CheckError> {
    let parts: Vec<SweepReport> =
        models.par_iter().enumerate().map(|(i, m)| sweep_model(m, i, set, domain)).collect::<Result<_, _>>()?;
    let mut report = SweepReport::default();
    for p in parts {
        report.merge(p);
    }
    Ok(report)
}
