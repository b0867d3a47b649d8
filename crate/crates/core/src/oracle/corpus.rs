//! The default validation corpus.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::reduction::CnfFormula;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub label: String,
    pub cnf: CnfFormula,
}

type Clause = Vec<i32>;

fn normalize_clause(mut c: Clause) -> Clause {
    c.sort_by_key(|&l| (l.unsigned_abs(), l < 0));
    c
}

/// Every clause over `1..=n` with literals on distinct variables.
fn all_clauses(n: usize) -> Vec<Clause> {
    let mut out = Vec::new();
    for subset in 1u32..(1 << n) {
        let vars: Vec<i32> = (0..n as i32).filter(|v| subset >> v & 1 == 1).map(|v| v + 1).collect();
        if vars.len() > 3 {
            continue;
        }
        for signs in 0u32..(1 << vars.len()) {
            let clause = vars
                .iter()
                .enumerate()
                .map(|(k, &v)| if signs >> k & 1 == 1 { -v } else { v })
                .collect();
            out.push(normalize_clause(clause));
        }
    }
    out.sort();
    out
}

fn permutations(n: usize) -> Vec<Vec<i32>> {
    let mut out = Vec::new();
    let mut perm: Vec<i32> = (1..=n as i32).collect();
    fn heap(k: usize, perm: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        if k <= 1 {
            out.push(perm.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, perm, out);
            let j = if k % 2 == 0 { i } else { 0 };
            perm.swap(j, k - 1);
        }
    }
    heap(n, &mut perm, &mut out);
    out
}

/// Smallest image of `formula` under variable renamings and polarity flips.
fn canonical_form(formula: &[Clause], perms: &[Vec<i32>], n: usize) -> Vec<Clause> {
    let mut best: Option<Vec<Clause>> = None;
    for perm in perms {
        for flips in 0u32..(1 << n) {
            let mut image: Vec<Clause> = formula
                .iter()
                .map(|c| {
                    normalize_clause(
                        c.iter()
                            .map(|&l| {
                                let v = l.unsigned_abs() as usize;
                                let flipped = if flips >> (v - 1) & 1 == 1 { -l } else { l };
                                flipped.signum() * perm[v - 1]
                            })
                            .collect(),
                    )
                })
                .collect();
            image.sort();
            if best.as_ref().is_none_or(|b| image < *b) {
                best = Some(image);
            }
        }
    }
    best.expect("at least one transform")
}

/// All formulas over exactly `n` variables (each used) with `1..=max_clauses`
/// distinct clauses, one representative per renaming/polarity class.
pub fn exhaustive_formulas(n: usize, max_clauses: usize) -> Vec<CnfFormula> {
    let clauses = all_clauses(n);
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for m in 1..=max_clauses {
        let mut found = BTreeSet::new();
        let mut idx: Vec<usize> = (0..m).collect();
        if m > clauses.len() {
            break;
        }
        loop {
            let formula: Vec<Clause> = idx.iter().map(|&i| clauses[i].clone()).collect();
            let used: BTreeSet<u32> = formula.iter().flatten().map(|l| l.unsigned_abs()).collect();
            if used.len() == n {
                let canon = canonical_form(&formula, &perms, n);
                if seen.insert(canon.clone()) {
                    found.insert(canon);
                }
            }
            let Some(i) = (0..m).rev().find(|&i| idx[i] != i + clauses.len() - m) else {
                break;
            };
            idx[i] += 1;
            for j in i + 1..m {
                idx[j] = idx[j - 1] + 1;
            }
        }
        out.extend(
            found
                .into_iter()
                .map(|f| CnfFormula::new(n, f).expect("generated clauses are valid")),
        );
    }
    out
}

/// The eight-variable, eight-clause showcase formula
/// `(X₁∨X₂)(X₁∨X₃)(X₁∨¬X₄)(X₄)(¬X₅∨¬X₆)(X₄∨X₆)(X₆∨X₇)(X₈)`.
pub fn showcase_formula() -> CnfFormula {
    CnfFormula::new(
        8,
        vec![
            vec![1, 2],
            vec![1, 3],
            vec![1, -4],
            vec![4],
            vec![-5, -6],
            vec![4, 6],
            vec![6, 7],
            vec![8],
        ],
    )
    .expect("valid formula")
}

/// Random formula over `num_vars` variables with `clauses` clauses of arity
/// 1 to 3 on distinct variables.
pub fn random_formula(rng: &mut impl Rng, num_vars: usize, clauses: usize) -> CnfFormula {
    let vars: Vec<i32> = (1..=num_vars as i32).collect();
    let body = (0..clauses)
        .map(|_| {
            let arity = rng.gen_range(1..=3.min(num_vars));
            let clause = vars
                .choose_multiple(rng, arity)
                .map(|&v| if rng.gen_bool(0.5) { v } else { -v })
                .collect();
            normalize_clause(clause)
        })
        .collect();
    CnfFormula::new(num_vars, body).expect("generated clauses are valid")
}

/// Exhaustive formulas over 1 to 3 variables with at most 4 clauses, the
/// showcase formula, and 50 seeded random 4-variable formulas with 4 or 8
/// clauses (so padding adds no variables).
pub fn default_corpus(seed: u64) -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for n in 1..=3 {
        for (k, cnf) in exhaustive_formulas(n, 4).into_iter().enumerate() {
            out.push(CorpusEntry {
                label: format!("exhaustive-n{n}-{k}"),
                cnf,
            });
        }
    }
    out.push(CorpusEntry {
        label: "showcase".into(),
        cnf: showcase_formula(),
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..50 {
        let m = if rng.gen_bool(0.5) { 4 } else { 8 };
        out.push(CorpusEntry {
            label: format!("random-{k}"),
            cnf: random_formula(&mut rng, 4, m),
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_classes() {
        // (x), (x)(¬x).
        assert_eq!(exhaustive_formulas(1, 4).len(), 2);
        let two = exhaustive_formulas(2, 1);
        // (x∨y) is the only single clause using both variables, up to flips.
        assert_eq!(two.len(), 1);
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(all_clauses(3).len(), 26);
    }

    #[test]
    fn corpus_is_deterministic() {
        let a = default_corpus(0);
        let b = default_corpus(0);
        assert_eq!(a, b);
        assert_ne!(
            a.iter().map(|e| e.cnf.clone()).collect::<Vec<_>>(),
            default_corpus(1).iter().map(|e| e.cnf.clone()).collect::<Vec<_>>()
        );
        assert!(a.iter().all(|e| e.cnf.num_vars() <= 8));
    }
}
