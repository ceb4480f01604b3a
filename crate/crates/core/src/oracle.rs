//! Exhaustive satisfiability check for small formulas.
//!
//! Used by the test suites to certify checker verdicts. Never used by the checking path.

use thiserror::Error;

use crate::model::{Clause, Formula, Literal};

/// Largest number of distinct variables the oracle accepts.
pub const MAX_ORACLE_VARS: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    /// A total assignment over the formula's variables, ascending by variable.
    Satisfiable(Vec<Literal>),
    Unsatisfiable,
}

impl OracleVerdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, OracleVerdict::Satisfiable(_))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("formula has {0} variables, the oracle handles at most {MAX_ORACLE_VARS}")]
    TooManyVariables(usize),
}

pub fn brute_force_sat(formula: &Formula) -> Result<OracleVerdict, OracleError> {
    let clauses: Vec<Clause> = formula.clauses().cloned().collect();
    brute_force_sat_clauses(&clauses)
}

pub fn brute_force_sat_clauses(clauses: &[Clause]) -> Result<OracleVerdict, OracleError> {
    let mut vars: Vec<u32> = clauses
        .iter()
        .flat_map(|c| c.iter())
        .map(Literal::var)
        .collect();
    vars.sort_unstable();
    vars.dedup();
    if vars.len() > MAX_ORACLE_VARS {
        return Err(OracleError::TooManyVariables(vars.len()));
    }

    // Clauses over positions in `vars`; each clause is checked once its last variable is set.
    let position = |var: u32| vars.binary_search(&var).unwrap();
    let mut by_last: Vec<Vec<Vec<(usize, bool)>>> = vec![Vec::new(); vars.len()];
    for clause in clauses {
        let lits: Vec<(usize, bool)> = clause
            .iter()
            .map(|l| (position(l.var()), l.is_positive()))
            .collect();
        match lits.iter().map(|&(p, _)| p).max() {
            Some(last) => by_last[last].push(lits),
            None => return Ok(OracleVerdict::Unsatisfiable),
        }
    }

    let mut values = vec![false; vars.len()];
    if !search(0, &mut values, &by_last) {
        return Ok(OracleVerdict::Unsatisfiable);
    }
    let model: Vec<Literal> = vars
        .iter()
        .zip(&values)
        .map(|(&v, &b)| Literal::from_var(v, b))
        .collect();
    for clause in clauses {
        assert!(
            clause.iter().any(|l| model.contains(&l)),
            "oracle model falsifies {clause}"
        );
    }
    Ok(OracleVerdict::Satisfiable(model))
}

fn search(depth: usize, values: &mut [bool], by_last: &[Vec<Vec<(usize, bool)>>]) -> bool {
    if depth == values.len() {
        return true;
    }
    for choice in [false, true] {
        values[depth] = choice;
        let falsified = by_last[depth]
            .iter()
            .any(|c| c.iter().all(|&(p, positive)| values[p] != positive));
        if !falsified && search(depth + 1, values, by_last) {
            return true;
        }
    }
    false
}
