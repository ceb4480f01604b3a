//! Counting-based reference propagation.
//!
//! Repeatedly scans every clause, counting false literals, until nothing changes. Quadratic and
//! only meant as a differential reference for the watched-literal propagator.

use super::PropagationResult;
use crate::model::{Clause, Literal};

/// Unit propagation over `clauses` under `assumptions`, scanning clauses in input order.
pub fn naive_propagate(clauses: &[Clause], assumptions: &[Literal]) -> PropagationResult {
    let order: Vec<usize> = (0..clauses.len()).collect();
    naive_propagate_ordered(clauses, assumptions, &order)
}

/// Like [`naive_propagate`], but each scan visits clauses in the order given by `order`
/// (indices into `clauses`). Indices not listed are never visited.
pub fn naive_propagate_ordered(
    clauses: &[Clause],
    assumptions: &[Literal],
    order: &[usize],
) -> PropagationResult {
    let max_var = clauses
        .iter()
        .flat_map(|c| c.iter())
        .chain(assumptions.iter().copied())
        .map(Literal::var)
        .max()
        .unwrap_or(0);
    // 1 true, -1 false, 0 unassigned
    let mut values = vec![0i8; max_var as usize + 1];
    let value = |values: &[i8], lit: Literal| {
        let v = values[lit.var() as usize];
        if lit.is_positive() {
            v
        } else {
            -v
        }
    };
    let set = |values: &mut [i8], lit: Literal| {
        values[lit.var() as usize] = if lit.is_positive() { 1 } else { -1 };
    };

    for &lit in assumptions {
        match value(&values, lit) {
            -1 => return PropagationResult::Conflict,
            0 => set(&mut values, lit),
            _ => {}
        }
    }

    loop {
        let mut changed = false;
        for &i in order {
            let clause = &clauses[i];
            let mut satisfied = false;
            let mut unassigned = None;
            let mut open = 0;
            for lit in clause.iter() {
                match value(&values, lit) {
                    1 => {
                        satisfied = true;
                        break;
                    }
                    0 => {
                        open += 1;
                        unassigned = Some(lit);
                    }
                    _ => {}
                }
            }
            if satisfied {
                continue;
            }
            match open {
                0 => return PropagationResult::Conflict,
                1 => {
                    set(&mut values, unassigned.unwrap());
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            return PropagationResult::Fixpoint;
        }
    }
}
