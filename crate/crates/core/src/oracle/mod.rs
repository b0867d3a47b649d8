//! Brute-force references and the validation suite.

mod corpus;
mod lemmas;
mod sat;

pub use corpus::{default_corpus, exhaustive_formulas, random_formula, showcase_formula, CorpusEntry};
pub use lemmas::{
    gadget_contexts, instance_hash, pennies_candidates, pennies_slice, sampled_coalitions,
    stray_equilibria, validate_constrained_instances, validate_gamma_scaling, validate_pareto_strong,
    validate_pennies, validate_sat_equivalence, validate_variable_gadget, Counterexample,
    GadgetContext, InstanceOutcome, LemmaReport, OracleError, ENCODINGS, MAX_CANONICAL_VARS,
};
pub use sat::{
    bits_satisfy, count_models, sat_brute_force, sat_brute_force_bounded, SatBoundExceeded,
    DEFAULT_MAX_VARS,
};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::rational::{int, Rational};
use crate::reduction::build_gphi;

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub grid_denominator: u32,
    pub alpha: Rational,
    pub gammas: Vec<Rational>,
    /// Random profiles per instance and scaling factor.
    pub samples: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            grid_denominator: 4,
            alpha: int(2),
            gammas: vec![int(2), int(3)],
            samples: 100,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub instances: usize,
    pub lemmas: Vec<LemmaReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.lemmas.iter().all(LemmaReport::passed)
    }
}

/// Runs every validator on every corpus entry and merges the reports per
/// validator. The gadget check depends only on the gadget tables, so it runs
/// on the first entry.
///
/// Entries are spread over the available cores. Entry `i` samples from
/// stream `i` of the seeded generator, so the report does not depend on the
/// thread count.
pub fn run_suite(corpus: &[CorpusEntry], config: &SuiteConfig) -> Result<SuiteReport, OracleError> {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let chunk = corpus.len().div_ceil(threads).max(1);
    let per_entry: Vec<Vec<LemmaReport>> = std::thread::scope(|scope| {
        let handles: Vec<_> = corpus
            .chunks(chunk)
            .enumerate()
            .map(|(c, entries)| {
                scope.spawn(move || {
                    entries
                        .iter()
                        .enumerate()
                        .map(|(k, entry)| run_entry(c * chunk + k, entry, config))
                        .collect::<Result<Vec<_>, _>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("validator thread panicked"))
            .collect::<Result<Vec<_>, _>>()
    })?
    .into_iter()
    .flatten()
    .collect();

    let mut merged: Vec<LemmaReport> = Vec::new();
    for r in per_entry.into_iter().flatten() {
        match merged.iter_mut().find(|m| m.lemma == r.lemma) {
            Some(m) => m.absorb(r),
            None => merged.push(r),
        }
    }
    Ok(SuiteReport {
        seed: config.seed,
        instances: corpus.len(),
        lemmas: merged,
    })
}

fn run_entry(index: usize, entry: &CorpusEntry, config: &SuiteConfig) -> Result<Vec<LemmaReport>, OracleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index as u64);
    let label = entry.label.as_str();
    let mut out = Vec::with_capacity(6);
    if index == 0 {
        let art = build_gphi(&entry.cnf)?;
        out.push(validate_variable_gadget(&art, config.grid_denominator)?.with_label(label));
    }
    out.push(validate_sat_equivalence(&entry.cnf)?.with_label(label));
    out.push(validate_constrained_instances(&entry.cnf, &config.alpha)?.with_label(label));
    out.push(validate_pennies(&entry.cnf)?.with_label(label));
    out.push(validate_gamma_scaling(&entry.cnf, &config.gammas, config.samples, &mut rng)?.with_label(label));
    out.push(validate_pareto_strong(&entry.cnf)?.with_label(label));
    Ok(out)
}
