//! CNF formulas, DIMACS input and truth assignments.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

/// Largest clause the reductions accept.
pub const MAX_ARITY: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CnfError {
    #[error("line {line}: malformed header (expected `p cnf <vars> <clauses>`)")]
    Header { line: usize },
    #[error("missing `p cnf` header")]
    MissingHeader,
    #[error("line {line}: unexpected token {token:?}")]
    Token { line: usize, token: String },
    #[error("clause {clause} is empty")]
    EmptyClause { clause: usize },
    #[error("clause {clause} has {arity} literals, at most {MAX_ARITY} allowed")]
    Arity { clause: usize, arity: usize },
    #[error("clause {clause} contains the zero literal")]
    ZeroLiteral { clause: usize },
    #[error("clause {clause}: literal {literal} exceeds {num_vars} variables")]
    LiteralOutOfRange {
        clause: usize,
        literal: i32,
        num_vars: usize,
    },
    #[error("clause {clause} repeats literal {literal}")]
    DuplicateLiteral { clause: usize, literal: i32 },
    #[error("header announces {declared} clauses but {found} were read")]
    ClauseCount { declared: usize, found: usize },
}

/// A formula over variables `1..=num_vars`; clauses are lists of signed
/// variable indices. Clause numbers in errors are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self, CnfError> {
        for (j, clause) in clauses.iter().enumerate() {
            let clause_no = j + 1;
            if clause.is_empty() {
                return Err(CnfError::EmptyClause { clause: clause_no });
            }
            if clause.len() > MAX_ARITY {
                return Err(CnfError::Arity {
                    clause: clause_no,
                    arity: clause.len(),
                });
            }
            for (k, &lit) in clause.iter().enumerate() {
                if lit == 0 {
                    return Err(CnfError::ZeroLiteral { clause: clause_no });
                }
                if lit.unsigned_abs() as usize > num_vars {
                    return Err(CnfError::LiteralOutOfRange {
                        clause: clause_no,
                        literal: lit,
                        num_vars,
                    });
                }
                if clause[..k].contains(&lit) {
                    return Err(CnfError::DuplicateLiteral {
                        clause: clause_no,
                        literal: lit,
                    });
                }
            }
        }
        Ok(Self { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    /// Truth value of clause `j` (0-based) under `sigma`.
    pub fn clause_value(&self, j: usize, sigma: &TruthAssignment) -> bool {
        self.clauses[j]
            .iter()
            .any(|&lit| sigma.value(lit.unsigned_abs() as usize) == (lit > 0))
    }

    pub fn evaluate(&self, sigma: &TruthAssignment) -> bool {
        (0..self.clauses.len()).all(|j| self.clause_value(j, sigma))
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for clause in &self.clauses {
            for lit in clause {
                let _ = write!(out, "{lit} ");
            }
            out.push_str("0\n");
        }
        out
    }
}

/// Parses DIMACS CNF. Comment lines (`c ...`) are skipped, clauses may span
/// lines, and a `%` line ends the input.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, CnfError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    let mut current: Vec<i32> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            let parts: Vec<&str> = line.split_whitespace().collect();
            let parsed = match parts.as_slice() {
                ["p", "cnf", v, c] => v.parse().ok().zip(c.parse().ok()),
                _ => None,
            };
            match (header, parsed) {
                (None, Some(h)) => header = Some(h),
                _ => return Err(CnfError::Header { line: line_no }),
            }
            continue;
        }
        if header.is_none() {
            return Err(CnfError::MissingHeader);
        }
        for token in line.split_whitespace() {
            let lit: i32 = token.parse().map_err(|_| CnfError::Token {
                line: line_no,
                token: token.to_string(),
            })?;
            if lit == 0 {
                if current.is_empty() {
                    return Err(CnfError::EmptyClause {
                        clause: clauses.len() + 1,
                    });
                }
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(lit);
            }
        }
    }
    let (num_vars, declared) = header.ok_or(CnfError::MissingHeader)?;
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != declared {
        return Err(CnfError::ClauseCount {
            declared,
            found: clauses.len(),
        });
    }
    CnfFormula::new(num_vars, clauses)
}

/// Raises the clause count to the least power of two `≥ max(m, 2)` by adding
/// unit clauses over fresh variables. Satisfiability is preserved.
pub fn pad_clauses(cnf: &CnfFormula) -> CnfFormula {
    let m = cnf.clauses.len();
    let target = m.max(2).next_power_of_two();
    let mut clauses = cnf.clauses.clone();
    let mut num_vars = cnf.num_vars;
    for _ in m..target {
        num_vars += 1;
        clauses.push(vec![num_vars as i32]);
    }
    CnfFormula { num_vars, clauses }
}

/// Total assignment over variables `1..=len`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TruthAssignment(Vec<bool>);

impl TruthAssignment {
    pub fn new(values: Vec<bool>) -> Self {
        Self(values)
    }

    /// The `index`-th assignment in counting order: bit `i` of `index` is the
    /// value of variable `i + 1`, so index 0 is all-false.
    pub fn from_index(num_vars: usize, index: u64) -> Self {
        Self((0..num_vars).map(|i| (index >> i) & 1 == 1).collect())
    }

    /// Value of variable `var` (1-based).
    pub fn value(&self, var: usize) -> bool {
        self.0[var - 1]
    }

    pub fn values(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Extends an assignment of the original variables to a padded formula
    /// by making every fresh variable true, which satisfies its unit clause.
    pub fn extend_to(&self, num_vars: usize) -> Self {
        let mut values = self.0.clone();
        values.resize(num_vars.max(values.len()), true);
        Self(values)
    }
}

impl std::fmt::Display for TruthAssignment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &v in &self.0 {
            f.write_str(if v { "T" } else { "F" })?;
        }
        Ok(())
    }
}
