//! Shared test support: fixtures, random instance generators, an independent slow-path RAT
//! check and a tiny DPLL that emits RUP proofs.

#![allow(dead_code)]

use drat_core::checker::naive::naive_propagate;
use drat_core::checker::PropagationResult;
use drat_core::model::{
    normalize_clause, Clause, Formula, Literal, Proof, ProofStep, SourceClause,
};
use rand::seq::SliceRandom;
use rand::Rng;

pub const EXAMPLE_CNF: &str = "p cnf 4 8
 1  2 -3 0
-1 -2  3 0
 2  3 -4 0
-2 -3  4 0
-1 -3 -4 0
 1  3  4 0
-1  2  4 0
 1 -2 -4 0
";

pub const EXAMPLE_PROOF: &str = "       -1 0
d -1 2  4 0
        2 0
          0
";

pub fn lit(v: i64) -> Literal {
    Literal::new(v).unwrap()
}

pub fn lits(values: &[i64]) -> Vec<Literal> {
    values.iter().map(|&v| lit(v)).collect()
}

pub fn sc(values: &[i64]) -> SourceClause {
    normalize_clause(&lits(values)).unwrap()
}

pub fn clause(values: &[i64]) -> Clause {
    sc(values).into_canonical()
}

pub fn formula(list: &[&[i64]]) -> Formula {
    Formula::from_clauses(list.iter().map(|c| sc(c)))
}

pub fn example_formula() -> Formula {
    drat_core::parse_dimacs(EXAMPLE_CNF.as_bytes()).unwrap()
}

pub fn example_proof() -> Proof {
    drat_core::parse_plain_proof(EXAMPLE_PROOF.as_bytes()).unwrap()
}

pub fn clauses_of(f: &Formula) -> Vec<Clause> {
    f.clauses().cloned().collect()
}

/// Random clause over variables `1..=vars` with `min_len..=max_len` distinct variables, in
/// random literal order.
pub fn random_clause(
    rng: &mut impl Rng,
    vars: u32,
    min_len: usize,
    max_len: usize,
) -> SourceClause {
    let mut pool: Vec<u32> = (1..=vars).collect();
    pool.shuffle(rng);
    let len = rng.random_range(min_len..=max_len.min(vars as usize));
    let lits: Vec<Literal> = pool[..len]
        .iter()
        .map(|&v| Literal::from_var(v, rng.random()))
        .collect();
    normalize_clause(&lits).unwrap()
}

pub fn random_formula(
    rng: &mut impl Rng,
    vars: u32,
    clauses: std::ops::RangeInclusive<usize>,
    max_len: usize,
) -> Formula {
    random_formula_with(rng, vars, clauses, 1..=max_len)
}

pub fn random_formula_with(
    rng: &mut impl Rng,
    vars: u32,
    clauses: std::ops::RangeInclusive<usize>,
    lens: std::ops::RangeInclusive<usize>,
) -> Formula {
    let clauses = rng.random_range(clauses);
    let list: Vec<SourceClause> = (0..clauses)
        .map(|_| random_clause(rng, vars, *lens.start(), *lens.end()))
        .collect();
    Formula::from_clauses(list)
}

pub fn random_assumptions(rng: &mut impl Rng, vars: u32, max: usize) -> Vec<Literal> {
    let mut pool: Vec<u32> = (1..=vars).collect();
    pool.shuffle(rng);
    let n = rng.random_range(0..=max.min(vars as usize));
    pool[..n]
        .iter()
        .map(|&v| Literal::from_var(v, rng.random()))
        .collect()
}

/// AT by definition, propagating with the counting reference implementation.
pub fn slow_is_at(clauses: &[Clause], c: &Clause) -> bool {
    let negated: Vec<Literal> = c.iter().map(|l| -l).collect();
    naive_propagate(clauses, &negated) == PropagationResult::Conflict
}

/// RAT on the first literal by definition, built from first principles: every clause holding the
/// negated pivot is resolved by hand and each non-tautological resolvent is checked for AT.
pub fn slow_is_rat(clauses: &[Clause], c: &SourceClause) -> bool {
    if slow_is_at(clauses, c.canonical()) {
        return true;
    }
    let Some(pivot) = c.pivot() else {
        return false;
    };
    for d in clauses.iter().filter(|d| d.iter().any(|l| l == -pivot)) {
        let mut res: Vec<i32> = c.original().iter().map(|l| l.value()).collect();
        res.extend(d.iter().filter(|&l| l != -pivot).map(|l| l.value()));
        res.sort_unstable();
        res.dedup();
        if res.iter().any(|&l| res.binary_search(&-l).is_ok()) {
            continue;
        }
        let res = Clause::new(res.iter().map(|&v| lit(v.into())).collect()).unwrap();
        if !slow_is_at(clauses, &res) {
            return false;
        }
    }
    true
}

/// Tiny DPLL with unit propagation. For an unsatisfiable formula, returns a proof made of the
/// negated decision prefixes of all refuted nodes in post-order, ending with the empty clause.
/// Returns `None` if the formula is satisfiable.
pub fn dpll_proof(f: &Formula) -> Option<Proof> {
    let clauses: Vec<Vec<i32>> = f
        .clauses()
        .map(|c| c.iter().map(Literal::value).collect())
        .collect();
    let max_var = f.max_var() as usize;
    let mut learned = Vec::new();
    let mut values = vec![0i8; max_var + 1];
    if dpll(&clauses, &mut values, &mut Vec::new(), &mut learned) {
        return None;
    }
    let steps = learned
        .into_iter()
        .map(|c: Vec<i32>| ProofStep::add(sc(&c.iter().map(|&v| v as i64).collect::<Vec<_>>())))
        .collect();
    Some(Proof::new(steps))
}

fn value(values: &[i8], l: i32) -> i8 {
    let v = values[l.unsigned_abs() as usize];
    if l > 0 {
        v
    } else {
        -v
    }
}

/// Returns false on conflict. Assigned variables are appended to `trail`.
fn unit_propagate(clauses: &[Vec<i32>], values: &mut [i8], trail: &mut Vec<i32>) -> bool {
    loop {
        let mut changed = false;
        for c in clauses {
            if c.iter().any(|&l| value(values, l) == 1) {
                continue;
            }
            let open: Vec<i32> = c
                .iter()
                .copied()
                .filter(|&l| value(values, l) == 0)
                .collect();
            match open.len() {
                0 => return false,
                1 => {
                    let l = open[0];
                    values[l.unsigned_abs() as usize] = if l > 0 { 1 } else { -1 };
                    trail.push(l);
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            return true;
        }
    }
}

/// Returns true if satisfiable below this node.
fn dpll(
    clauses: &[Vec<i32>],
    values: &mut [i8],
    decisions: &mut Vec<i32>,
    learned: &mut Vec<Vec<i32>>,
) -> bool {
    let mut trail = Vec::new();
    let ok = unit_propagate(clauses, values, &mut trail);
    let result = if !ok {
        false
    } else if let Some(var) = (1..values.len()).find(|&v| values[v] == 0) {
        let mut sat = false;
        for l in [var as i32, -(var as i32)] {
            values[var] = if l > 0 { 1 } else { -1 };
            decisions.push(l);
            sat = dpll(clauses, values, decisions, learned);
            decisions.pop();
            values[var] = 0;
            if sat {
                break;
            }
        }
        sat
    } else {
        true
    };
    if !result {
        learned.push(decisions.iter().map(|&d| -d).collect());
    }
    for l in trail {
        values[l.unsigned_abs() as usize] = 0;
    }
    result
}

/// Extended-resolution definition `x <-> (a & b)` over a fresh variable `x`, in an order where
/// every clause is RAT on its first literal.
pub fn definition_steps(x: u32, a: Literal, b: Literal) -> Vec<ProofStep> {
    let x = Literal::from_var(x, true);
    [vec![x, -a, -b], vec![-x, a], vec![-x, b]]
        .into_iter()
        .map(|c| ProofStep::add(normalize_clause(&c).unwrap()))
        .collect()
}

/// Applies one random mutation to `proof`.
pub fn mutate(rng: &mut impl Rng, proof: &mut Proof, vars: u32) {
    let n = proof.steps.len();
    match rng.random_range(0..7) {
        0 if n > 0 => {
            proof.steps.remove(rng.random_range(0..n));
        }
        1 if n > 1 => {
            let (i, j) = (rng.random_range(0..n), rng.random_range(0..n));
            proof.steps.swap(i, j);
        }
        2 if n > 0 => {
            // flip one literal of a step
            let i = rng.random_range(0..n);
            let mut c = proof.steps[i].clause.original().to_vec();
            if !c.is_empty() {
                let k = rng.random_range(0..c.len());
                c[k] = -c[k];
                proof.steps[i].clause = normalize_clause(&c).unwrap();
            }
        }
        3 => {
            let at = rng.random_range(0..=n);
            proof
                .steps
                .insert(at, ProofStep::add(random_clause(rng, vars, 1, 3)));
        }
        4 => {
            let at = rng.random_range(0..=n);
            proof
                .steps
                .insert(at, ProofStep::delete(random_clause(rng, vars, 1, 3)));
        }
        5 if n > 0 => {
            // turn an addition into a deletion or vice versa
            let i = rng.random_range(0..n);
            let step = &mut proof.steps[i];
            step.kind = match step.kind {
                drat_core::StepKind::Add => drat_core::StepKind::Delete,
                drat_core::StepKind::Delete => drat_core::StepKind::Add,
            };
        }
        _ => {
            let at = rng.random_range(0..=n);
            proof
                .steps
                .insert(at, ProofStep::add(SourceClause::empty()));
        }
    }
}
