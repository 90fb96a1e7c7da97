//! The `aware` command line.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use aware_core::checker::{Evaluator, QuantifierDomain, TruthValue, Validity};
use aware_core::model::{default_prop_names, enumerate_models, generate_random, validate, EnumBounds, GenParams, Violation};
use aware_core::proofs::{check_proof, AxiomSystem, Fuzzer, InstanceSet, SweepReport, SweepWitness, Tally};
use aware_core::syntax::parse;
use aware_core::{Formula, ModelClass, Structure};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::experiments::{astar_aprime, label_swap_invariance, Found};
use crate::format::{read_model, read_proof, write_model, ModelFile};
use crate::sweep::{enumeration, par_sweep, random_models};

const EXIT_CODES: &str = "Exit codes: 0 true, valid, accepted, or no violations; 1 false, invalid, rejected, or \
violations found; 2 unreadable input or bad arguments; 3 undefined.";

#[derive(Debug, Parser)]
#[command(name = "aware", version, about = "Model checking and proof checking for awareness logic", after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Operators of the quantifier domain, e.g. KXA or XA.
    #[arg(long, global = true)]
    domain: Option<QuantifierDomain>,
    /// Add `true` to the quantifier domain.
    #[arg(long, global = true)]
    include_top: bool,
    /// Frame conditions, letters from r, t, e (or `none`).
    #[arg(long, global = true)]
    class: Option<ModelClass>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a sentence at a world.
    Eval { model: PathBuf, world: String, formula: String },
    /// Check weak validity of a sentence in a model.
    Valid { model: PathBuf, formula: String },
    /// List the realizable truth profiles of a model.
    Profiles { model: PathBuf },
    /// Check a system's axioms and rules on a model corpus.
    Sweep {
        system: String,
        /// Number of random models.
        #[arg(long, default_value_t = 1000)]
        models: usize,
        /// Use every model up to the bounds instead of random ones.
        #[arg(long)]
        enumerate: bool,
        #[arg(long, default_value_t = 3)]
        max_worlds: usize,
        #[arg(long, default_value_t = 2)]
        props: usize,
        /// Random instances per schema.
        #[arg(long, default_value_t = 8)]
        per_schema: usize,
        /// Random premises for the rules.
        #[arg(long, default_value_t = 12)]
        pool: usize,
        /// Largest depth of a metavariable value.
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Check a proof script.
    Prove { script: PathBuf },
    /// Print a random model.
    Gen {
        #[arg(long, default_value_t = 1)]
        agents: usize,
        #[arg(long, default_value_t = 3)]
        worlds: usize,
        #[arg(long, default_value_t = 2)]
        props: usize,
        #[arg(long)]
        constant_language: bool,
        #[arg(long)]
        require_nonempty_awareness: bool,
    },
    /// Count every model up to the bounds, optionally writing each to a file.
    Enum {
        #[arg(long, default_value_t = 1)]
        agents: usize,
        #[arg(long, default_value_t = 1)]
        max_worlds: usize,
        #[arg(long, default_value_t = 1)]
        props: usize,
        #[arg(long)]
        constant_language: bool,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Report the structural properties of a model.
    Props { model: PathBuf },
    /// Check invariance of truth under label swaps and renamings.
    SwapTest {
        #[arg(long, default_value_t = 1000)]
        pairs: usize,
    },
    /// Compare A* with A' on Euclidean models and search for a separating model.
    EquivAstarAprime {
        #[arg(long, default_value_t = 100)]
        models: usize,
        #[arg(long, default_value_t = 500)]
        formulas: usize,
    },
}

/// An error that ends the run with exit code 2.
struct Fail(String);

impl<E: std::fmt::Display> From<E> for Fail {
    fn from(e: E) -> Self {
        Fail(e.to_string())
    }
}

type Outcome = Result<i32, Fail>;

/// Runs the command line and returns the exit code. Output goes to `out`.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(out, "{}", e.render());
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let mut ctx = Ctx { cli: &cli, out };
    match ctx.dispatch() {
        Ok(code) => code,
        Err(Fail(msg)) => {
            if cli.json {
                ctx.emit(json!({ "error": msg }));
            } else {
                let _ = writeln!(ctx.out, "error: {msg}");
            }
            2
        }
    }
}

struct Ctx<'a> {
    cli: &'a Cli,
    out: &'a mut dyn Write,
}

fn load_model(path: &Path) -> Result<Structure, Fail> {
    let text = fs::read_to_string(path).map_err(|e| Fail(format!("{}: {e}", path.display())))?;
    read_model(&text).map_err(|e| Fail(format!("{}: {e}", path.display())))
}

fn parse_sentence(text: &str, m: &Structure) -> Result<Formula, Fail> {
    let f = parse(text, m.agents() as u16)?;
    if let Some(v) = f.free_vars().into_iter().next() {
        return Err(Fail(format!("variable {v} is free; only sentences can be evaluated")));
    }
    Ok(f)
}

fn world_name(m: &Structure, w: usize) -> &str {
    &m.world_names()[w]
}

fn prop_list(m: &Structure, s: aware_core::model::PropSet) -> Vec<String> {
    m.prop_names(s).iter().map(|p| p.name().to_string()).collect()
}

fn world_list(m: &Structure, s: aware_core::model::WorldSet) -> Vec<String> {
    s.iter().map(|w| world_name(m, w).to_string()).collect()
}

fn found_json(f: &Found) -> Value {
    json!({
        "world": world_name(&f.model, f.world),
        "formula": f.formula.to_string(),
        "model": ModelFile::from_structure(&f.model),
    })
}

fn describe(m: &Structure, v: &Violation) -> String {
    let w = |i: usize| world_name(m, i);
    let p = |i: usize| m.props()[i].name().to_string();
    match *v {
        Violation::NotReflexive { agent, world } => format!("agent {agent}: ({0},{0}) missing", w(world)),
        Violation::NotTransitive { agent, s, t, u } => {
            format!("agent {agent}: ({},{}) and ({},{}) but not ({},{})", w(s), w(t), w(t), w(u), w(s), w(u))
        }
        Violation::NotEuclidean { agent, s, t, u } => {
            format!("agent {agent}: ({},{}) and ({},{}) but not ({},{})", w(s), w(t), w(s), w(u), w(t), w(u))
        }
        Violation::AwarenessNotKnown { agent, s, t } => {
            format!("agent {agent}: ({},{}) with different awareness", w(s), w(t))
        }
        Violation::LanguageContainment { agent, s, t, prop } => {
            format!("agent {agent}: aware of {} at {} but ({},{}) and {} lacks it", p(prop), w(s), w(s), w(t), w(t))
        }
        Violation::UnlabeledUnawareness { agent, world, prop } => {
            format!("agent {agent}: unaware of {} at {} though every possible world has it", p(prop), w(world))
        }
    }
}

impl Ctx<'_> {
    fn emit(&mut self, mut v: Value) {
        if let Value::Object(map) = &mut v {
            map.insert("seed".into(), json!(self.cli.seed));
        }
        let _ = writeln!(self.out, "{}", serde_json::to_string_pretty(&v).expect("json serializes"));
    }

    fn say(&mut self, text: impl AsRef<str>) {
        let _ = writeln!(self.out, "{}", text.as_ref());
    }

    fn domain(&self, default: QuantifierDomain) -> QuantifierDomain {
        self.cli.domain.unwrap_or(default).with_top(self.cli.include_top)
    }

    fn dispatch(&mut self) -> Outcome {
        match &self.cli.command {
            Command::Eval { model, world, formula } => self.eval(model, world, formula),
            Command::Valid { model, formula } => self.valid(model, formula),
            Command::Profiles { model } => self.profiles(model),
            Command::Sweep { system, models, enumerate, max_worlds, props, per_schema, pool, depth } => {
                let corpus = SweepCorpus { count: *models, enumerate: *enumerate, max_worlds: *max_worlds, props: *props };
                self.sweep(system, corpus, *per_schema, *pool, *depth)
            }
            Command::Prove { script } => self.prove(script),
            Command::Gen { agents, worlds, props, constant_language, require_nonempty_awareness } => {
                let mut params =
                    GenParams::new(*agents, *worlds, *props, self.cli.class.unwrap_or(ModelClass::ANY), self.cli.seed);
                params.constant_language = *constant_language;
                params.nonempty_awareness = *require_nonempty_awareness;
                let m = generate_random(&params)?;
                self.say(write_model(&m));
                Ok(0)
            }
            Command::Enum { agents, max_worlds, props, constant_language, out_dir } => {
                self.enumerate(*agents, *max_worlds, *props, *constant_language, out_dir.as_deref())
            }
            Command::Props { model } => self.props(model),
            Command::SwapTest { pairs } => self.swap_test(*pairs),
            Command::EquivAstarAprime { models, formulas } => self.equiv(*models, *formulas),
        }
    }

    fn eval(&mut self, path: &Path, world: &str, text: &str) -> Outcome {
        let m = load_model(path)?;
        let f = parse_sentence(text, &m)?;
        let w = m.world_index(world).ok_or_else(|| Fail(format!("unknown world `{world}`")))?;
        let ev = Evaluator::new(&m, self.domain(QuantifierDomain::KXA));
        let value = ev.eval(w, &f)?;
        let witness = ev.explain(w, &f)?;
        if self.cli.json {
            let wit = witness.as_ref().map(|x| {
                json!({
                    "world": world_name(&m, x.world),
                    "var": x.var.to_string(),
                    "sentence": x.sentence.to_string(),
                    "instance": x.instance().to_string(),
                })
            });
            self.emit(json!({
                "command": "eval", "world": world, "formula": f.to_string(),
                "domain": ev.domain().to_string(), "value": value.to_string(), "witness": wit,
            }));
        } else {
            self.say(value.to_string());
            if let Some(x) = witness {
                self.say(format!("witness: {} := {} at {}", x.var, x.sentence, world_name(&m, x.world)));
                self.say(format!("instance: {}", x.instance()));
            }
        }
        Ok(match value {
            TruthValue::True => 0,
            TruthValue::False => 1,
            TruthValue::Undefined => 3,
        })
    }

    fn valid(&mut self, path: &Path, text: &str) -> Outcome {
        let m = load_model(path)?;
        let f = parse_sentence(text, &m)?;
        let ev = Evaluator::new(&m, self.domain(QuantifierDomain::KXA));
        let verdict = ev.weakly_valid(&f)?;
        let cx = match verdict {
            Validity::Valid => None,
            Validity::Counterexample(w) => Some(world_name(&m, w).to_string()),
        };
        if self.cli.json {
            self.emit(json!({ "command": "valid", "formula": f.to_string(), "valid": cx.is_none(), "counterexample": cx }));
        } else {
            match &cx {
                None => self.say("valid"),
                Some(w) => self.say(format!("counterexample: {w}")),
            }
        }
        Ok(if cx.is_none() { 0 } else { 1 })
    }

    fn profiles(&mut self, path: &Path) -> Outcome {
        let m = load_model(path)?;
        let ev = Evaluator::new(&m, self.domain(QuantifierDomain::KXA));
        let rows: Vec<Value> = ev
            .profiles()
            .iter()
            .map(|p| {
                json!({
                    "vocab": prop_list(&m, p.vocab),
                    "defined": world_list(&m, p.domain),
                    "true": world_list(&m, p.truth),
                    "witness": p.witness.to_string(),
                })
            })
            .collect();
        if self.cli.json {
            self.emit(json!({ "command": "profiles", "domain": ev.domain().to_string(), "profiles": rows }));
        } else {
            self.say(format!("{} profiles (domain {})", rows.len(), ev.domain()));
            for p in ev.profiles() {
                self.say(format!(
                    "{{{}}} true at {{{}}} of {{{}}}: {}",
                    prop_list(&m, p.vocab).join(","),
                    world_list(&m, p.truth).join(","),
                    world_list(&m, p.domain).join(","),
                    p.witness
                ));
            }
        }
        Ok(0)
    }

    fn sweep(&mut self, name: &str, corpus: SweepCorpus, per_schema: usize, pool: usize, depth: usize) -> Outcome {
        let system = AxiomSystem::named(name)?;
        let class = self.cli.class.unwrap_or(ModelClass::EQUIVALENCE);
        let models = if corpus.enumerate {
            enumeration(1, corpus.max_worlds, corpus.props, class, false)?
        } else {
            random_models(corpus.count, 1, corpus.max_worlds, corpus.props, class, self.cli.seed)?
        };
        let fuzzer = Fuzzer::new(default_prop_names(corpus.props), 1, system.signature, depth);
        let set = InstanceSet::generate(&system, &fuzzer, per_schema, pool, self.cli.seed);
        let domain = self.domain(system.domain());
        let report = par_sweep(&models, &set, domain)?;
        let violations = report.violations();
        if self.cli.json {
            let v = sweep_json(&system, class, domain, &models, &report);
            self.emit(v);
        } else {
            self.say(format!("{} on {} {class} models, domain {domain}", system.name, models.len()));
            for (a, t) in &report.axioms {
                self.say(tally_line(&a.to_string(), t, &models));
            }
            for (r, t) in &report.rules {
                self.say(tally_line(&r.to_string(), t, &models));
            }
            self.say(format!("{violations} violations, {} finite-proposition findings", report.findings()));
        }
        Ok(if violations == 0 { 0 } else { 1 })
    }

    fn prove(&mut self, path: &Path) -> Outcome {
        let text = fs::read_to_string(path).map_err(|e| Fail(format!("{}: {e}", path.display())))?;
        let (system, script) = read_proof(&text).map_err(|e| Fail(format!("{}: {e}", path.display())))?;
        let verdict = check_proof(&script, &system);
        if self.cli.json {
            let (line, reason) = match &verdict {
                Ok(()) => (None, None),
                Err(r) => (Some(r.line), Some(r.reason.to_string())),
            };
            self.emit(json!({
                "command": "prove", "system": system.name, "lines": script.lines.len(),
                "accepted": verdict.is_ok(), "line": line, "reason": reason,
            }));
        } else {
            match &verdict {
                Ok(()) => self.say(format!("accepted: {} lines in {}", script.lines.len(), system.name)),
                Err(r) => self.say(format!("rejected: {r}")),
            }
        }
        Ok(if verdict.is_ok() { 0 } else { 1 })
    }

    fn enumerate(
        &mut self,
        agents: usize,
        max_worlds: usize,
        props: usize,
        constant_language: bool,
        out_dir: Option<&Path>,
    ) -> Outcome {
        let class = self.cli.class.unwrap_or(ModelClass::ANY);
        let mut bounds = EnumBounds::new(agents, max_worlds, default_prop_names(props), class);
        bounds.constant_language = constant_language;
        if let Some(dir) = out_dir {
            fs::create_dir_all(dir)?;
        }
        let mut count = 0usize;
        for m in enumerate_models(&bounds)? {
            count += 1;
            if let Some(dir) = out_dir {
                fs::write(dir.join(format!("model_{count:07}.json")), write_model(&m))?;
            }
        }
        if self.cli.json {
            self.emit(json!({ "command": "enum", "class": class.to_string(), "count": count }));
        } else {
            self.say(format!("{count} models"));
        }
        Ok(0)
    }

    fn props(&mut self, path: &Path) -> Outcome {
        let m = load_model(path)?;
        let r = validate(&m);
        let rows = [
            ("r", r.reflexive),
            ("t", r.transitive),
            ("e", r.euclidean),
            ("ka", r.knows_awareness),
            ("containment", r.containment),
            ("LA", r.la),
        ];
        if self.cli.json {
            let map: serde_json::Map<String, Value> = rows
                .iter()
                .map(|(k, v)| {
                    let entry = json!({ "holds": v.is_none(), "witness": v.as_ref().map(|v| describe(&m, v)) });
                    (k.to_string(), entry)
                })
                .collect();
            self.emit(json!({ "command": "props", "properties": map }));
        } else {
            for (k, v) in rows {
                match v {
                    None => self.say(format!("{k}: true")),
                    Some(v) => self.say(format!("{k}: false ({})", describe(&m, &v))),
                }
            }
        }
        Ok(0)
    }

    fn swap_test(&mut self, pairs: usize) -> Outcome {
        let r = label_swap_invariance(pairs, self.cli.seed)?;
        let ok = r.swap_mismatch.is_none() && r.rename_mismatch.is_none();
        if self.cli.json {
            self.emit(json!({
                "command": "swap-test", "pairs": pairs, "triples": r.triples,
                "swap_mismatch": r.swap_mismatch.as_ref().map(found_json),
                "rename_mismatch": r.rename_mismatch.as_ref().map(found_json),
            }));
        } else {
            self.say(format!("{} triples compared under swap and renaming", r.triples));
            for (what, f) in [("swap", &r.swap_mismatch), ("rename", &r.rename_mismatch)] {
                if let Some(f) = f {
                    self.say(format!("{what} mismatch at {}: {}", world_name(&f.model, f.world), f.formula));
                }
            }
            self.say(if ok { "invariant" } else { "MISMATCH" });
        }
        Ok(if ok { 0 } else { 1 })
    }

    fn equiv(&mut self, models: usize, formulas: usize) -> Outcome {
        let search = enumerate_models(&EnumBounds::new(1, 3, default_prop_names(2), ModelClass::ANY))?;
        let r = astar_aprime(models, formulas, search, self.cli.seed)?;
        let ok = r.euclidean_mismatch.is_none();
        if self.cli.json {
            self.emit(json!({
                "command": "equiv-astar-aprime", "models": r.models, "formulas": r.formulas, "checks": r.checks,
                "euclidean_mismatch": r.euclidean_mismatch.as_ref().map(found_json),
                "countermodel": r.countermodel.as_ref().map(found_json),
            }));
        } else {
            self.say(format!("{} checks on {} Euclidean models", r.checks, r.models));
            if let Some(f) = &r.euclidean_mismatch {
                self.say(format!("Euclidean mismatch at {}: {}", world_name(&f.model, f.world), f.formula));
            }
            match &r.countermodel {
                Some(f) => {
                    self.say(format!("non-Euclidean countermodel at {}: {}", world_name(&f.model, f.world), f.formula));
                    self.say(write_model(&f.model));
                }
                None => self.say("no non-Euclidean countermodel found"),
            }
        }
        Ok(if ok { 0 } else { 1 })
    }
}

struct SweepCorpus {
    count: usize,
    enumerate: bool,
    max_worlds: usize,
    props: usize,
}

fn witness_json(w: &SweepWitness, models: &[Structure]) -> Value {
    let m = &models[w.model];
    json!({
        "model_index": w.model,
        "world": world_name(m, w.world),
        "formula": w.formula.to_string(),
        "premises": w.premises.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "model": ModelFile::from_structure(m),
    })
}

fn tally_json(t: &Tally, models: &[Structure]) -> Value {
    json!({ "checks": t.checks, "failures": t.failures, "witness": t.witness.as_ref().map(|w| witness_json(w, models)) })
}

fn tally_line(name: &str, t: &Tally, models: &[Structure]) -> String {
    let mut line = format!("  {name:<12} {:>9} checks {:>7} failures", t.checks, t.failures);
    if let Some(w) = &t.witness {
        line += &format!("  e.g. model #{} world {}: {}", w.model, world_name(&models[w.model], w.world), w.formula);
    }
    line
}

fn sweep_json(
    system: &AxiomSystem,
    class: ModelClass,
    domain: QuantifierDomain,
    models: &[Structure],
    r: &SweepReport,
) -> Value {
    let axioms: serde_json::Map<String, Value> =
        r.axioms.iter().map(|(a, t)| (a.to_string(), tally_json(t, models))).collect();
    let rules: serde_json::Map<String, Value> =
        r.rules.iter().map(|(a, t)| (a.to_string(), tally_json(t, models))).collect();
    json!({
        "command": "sweep", "system": system.name, "class": class.to_string(), "domain": domain.to_string(),
        "models": r.models, "violations": r.violations(), "findings": r.findings(),
        "axioms": axioms, "rules": rules,
    })
}
