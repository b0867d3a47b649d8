//! Brute-force satisfiability by assignment enumeration.
//!
//! Deliberately self-contained: nothing here calls into the reduction
//! builders or their clause evaluation.

use crate::reduction::{CnfFormula, TruthAssignment};

pub const DEFAULT_MAX_VARS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("formula has {num_vars} variables, enumeration bound is {bound}")]
pub struct SatBoundExceeded {
    pub num_vars: usize,
    pub bound: usize,
}

/// Whether the assignment encoded in `bits` (bit `i` = variable `i + 1`)
/// satisfies every clause.
pub fn bits_satisfy(cnf: &CnfFormula, bits: u64) -> bool {
    cnf.clauses().iter().all(|clause| {
        clause.iter().any(|&lit| {
            let var = lit.unsigned_abs() - 1;
            let value = (bits >> var) & 1 == 1;
            value == (lit > 0)
        })
    })
}

/// First satisfying assignment in counting order (variable 1 is the least
/// significant bit, starting from all-false), or `None`.
///
/// ```
/// use nashforge::oracle::sat_brute_force;
/// use nashforge::reduction::parse_dimacs;
///
/// let cnf = parse_dimacs("p cnf 2 2\n1 2 0\n-1 -2 0\n").unwrap();
/// let sigma = sat_brute_force(&cnf).unwrap().unwrap();
/// assert_eq!(sigma.values(), &[true, false]);
/// ```
pub fn sat_brute_force(cnf: &CnfFormula) -> Result<Option<TruthAssignment>, SatBoundExceeded> {
    sat_brute_force_bounded(cnf, DEFAULT_MAX_VARS)
}

pub fn sat_brute_force_bounded(
    cnf: &CnfFormula,
    bound: usize,
) -> Result<Option<TruthAssignment>, SatBoundExceeded> {
    let n = cnf.num_vars();
    if n > bound || n >= 64 {
        return Err(SatBoundExceeded { num_vars: n, bound });
    }
    Ok((0..1u64 << n)
        .find(|&bits| bits_satisfy(cnf, bits))
        .map(|bits| TruthAssignment::new((0..n).map(|i| (bits >> i) & 1 == 1).collect())))
}

/// Number of satisfying assignments.
pub fn count_models(cnf: &CnfFormula, bound: usize) -> Result<u64, SatBoundExceeded> {
    let n = cnf.num_vars();
    if n > bound || n >= 64 {
        return Err(SatBoundExceeded { num_vars: n, bound });
    }
    Ok((0..1u64 << n).filter(|&bits| bits_satisfy(cnf, bits)).count() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cnf(n: usize, clauses: &[&[i32]]) -> CnfFormula {
        CnfFormula::new(n, clauses.iter().map(|c| c.to_vec()).collect()).unwrap()
    }

    #[test]
    fn first_model_in_counting_order() {
        let f = cnf(2, &[&[1, 2], &[-1, -2]]);
        assert_eq!(
            sat_brute_force(&f).unwrap().unwrap().values(),
            &[true, false]
        );
        assert_eq!(count_models(&f, 20).unwrap(), 2);
    }

    #[test]
    fn contradiction_and_empty() {
        assert_eq!(sat_brute_force(&cnf(1, &[&[1], &[-1]])).unwrap(), None);
        assert_eq!(
            sat_brute_force(&cnf(3, &[])).unwrap().unwrap().values(),
            &[false, false, false]
        );
    }

    #[test]
    fn bound_is_enforced() {
        let f = cnf(21, &[&[21]]);
        assert!(sat_brute_force(&f).is_err());
        assert!(sat_brute_force_bounded(&f, 21).unwrap().is_some());
    }
}
