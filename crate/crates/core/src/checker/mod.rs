//! Forward DRAT checking.
//!
//! Every added clause must be an asymmetric tautology (AT: unit propagation on the formula plus
//! the negated clause conflicts) or a resolution asymmetric tautology on its first literal (RAT:
//! every resolvent with a clause containing the negated pivot is AT). Deletions remove one copy
//! of a clause; deletions of unit clauses and of absent clauses are skipped with a warning.

mod assignment;
pub mod naive;
mod watch;

pub use assignment::{Assignment, Value};
pub use watch::{Propagator, WatchIndex};

use crate::model::{
    CheckReport, CheckStats, Clause, ClauseId, Formula, Literal, Proof, RejectReason, Rejection,
    ResolventCheck, SourceClause, StepKind, TraceEvent, Verdict, Warning, WarningKind,
};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PropagationResult {
    Conflict,
    Fixpoint,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CheckOptions {
    /// Record a [`TraceEvent`] for every processed step.
    pub trace: bool,
}

/// Outcome of a redundancy check for a non-empty clause.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Redundancy {
    At,
    Rat {
        pivot: Literal,
        resolvents: Vec<ResolventCheck>,
    },
    NotRedundant {
        pivot: Literal,
        /// Resolvents examined up to and including the failing one.
        resolvents: Vec<ResolventCheck>,
    },
}

impl Redundancy {
    pub fn holds(&self) -> bool {
        !matches!(self, Redundancy::NotRedundant { .. })
    }
}

/// Resolvent of `clause` and `other` on `pivot` (which must be in `clause` while `-pivot` is in
/// `other`). Returns `None` when the resolvent is a tautology.
pub fn resolvent(clause: &Clause, other: &Clause, pivot: Literal) -> Option<Clause> {
    let mut lits: Vec<Literal> = clause.iter().collect();
    for lit in other.iter() {
        if lit == -pivot || clause.contains(lit) {
            continue;
        }
        if clause.contains(-lit) {
            return None;
        }
        lits.push(lit);
    }
    Some(Clause::new(lits).expect("resolvent is duplicate free and non-tautological"))
}

fn negated(clause: &Clause) -> Vec<Literal> {
    clause.iter().map(|l| -l).collect()
}

/// Incremental checker state: the current formula and its propagation structures.
#[derive(Clone, Debug)]
pub struct Checker {
    formula: Formula,
    propagator: Propagator,
    options: CheckOptions,
    warnings: Vec<Warning>,
    trace: Vec<TraceEvent>,
    stats: CheckStats,
}

impl Checker {
    pub fn new(formula: Formula) -> Checker {
        Checker::with_options(formula, CheckOptions::default())
    }

    pub fn with_options(formula: Formula, options: CheckOptions) -> Checker {
        let propagator = Propagator::from_formula(&formula);
        Checker {
            formula,
            propagator,
            options,
            warnings: Vec::new(),
            trace: Vec::new(),
            stats: CheckStats::default(),
        }
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    pub fn into_formula(self) -> Formula {
        self.formula
    }

    pub fn warnings(&self) -> &[Warning] {
        &self.warnings
    }

    pub fn propagate(&mut self, assumptions: &[Literal]) -> PropagationResult {
        self.propagator.propagate_under(assumptions)
    }

    /// AT check: does unit propagation on the formula plus the negation of `clause` conflict?
    pub fn check_at(&mut self, clause: &Clause) -> bool {
        self.propagate(&negated(clause)) == PropagationResult::Conflict
    }

    /// AT check, falling back to RAT on the first literal in textual order.
    pub fn redundancy(&mut self, clause: &SourceClause) -> Redundancy {
        if self.check_at(clause.canonical()) {
            return Redundancy::At;
        }
        let pivot = clause.pivot().expect("RAT check needs a non-empty clause");
        let mut candidates: Vec<ClauseId> = self.formula.containing(-pivot).to_vec();
        candidates.sort_unstable();

        let mut resolvents = Vec::new();
        for id in candidates {
            let against = self
                .formula
                .get(id)
                .expect("occurrence index out of sync")
                .canonical()
                .clone();
            let res = resolvent(clause.canonical(), &against, pivot);
            let is_at = match &res {
                None => true,
                Some(r) => self.check_at(r),
            };
            resolvents.push(ResolventCheck {
                against,
                resolvent: res,
                is_at,
            });
            if !is_at {
                return Redundancy::NotRedundant { pivot, resolvents };
            }
        }
        Redundancy::Rat { pivot, resolvents }
    }

    pub fn check_rat(&mut self, clause: &SourceClause) -> bool {
        self.redundancy(clause).holds()
    }

    fn insert(&mut self, clause: SourceClause) {
        let lits = clause.canonical().literals().to_vec();
        let id = self.formula.add(clause);
        self.propagator.add_clause(id, &lits);
    }

    /// Checks and adds `clause` at one-based proof step `step`.
    pub fn apply_add(&mut self, step: usize, clause: &SourceClause) -> Result<(), Box<Rejection>> {
        if clause.is_empty() {
            if !self.check_at(clause.canonical()) {
                return Err(Box::new(Rejection {
                    step,
                    reason: RejectReason::EmptyClauseNotAt,
                    clause: clause.clone(),
                    pivot: None,
                    against: None,
                    resolvent: None,
                }));
            }
            self.stats.at_additions += 1;
            if self.options.trace {
                self.trace.push(TraceEvent::AddAt {
                    step,
                    clause: clause.clone(),
                });
            }
            self.insert(clause.clone());
            return Ok(());
        }

        match self.redundancy(clause) {
            Redundancy::At => {
                self.stats.at_additions += 1;
                if self.options.trace {
                    self.trace.push(TraceEvent::AddAt {
                        step,
                        clause: clause.clone(),
                    });
                }
            }
            Redundancy::Rat { pivot, resolvents } => {
                self.stats.rat_additions += 1;
                if self.options.trace {
                    self.trace.push(TraceEvent::AddRat {
                        step,
                        clause: clause.clone(),
                        pivot,
                        resolvents,
                    });
                }
            }
            Redundancy::NotRedundant {
                pivot,
                mut resolvents,
            } => {
                let failed = resolvents.pop();
                if self.options.trace {
                    if let Some(f) = &failed {
                        resolvents.push(f.clone());
                    }
                    self.trace.push(TraceEvent::AddRat {
                        step,
                        clause: clause.clone(),
                        pivot,
                        resolvents,
                    });
                }
                let (against, resolvent) = match failed {
                    Some(f) => (Some(f.against), f.resolvent),
                    None => (None, None),
                };
                return Err(Box::new(Rejection {
                    step,
                    reason: RejectReason::RatCheckFailed,
                    clause: clause.clone(),
                    pivot: Some(pivot),
                    against,
                    resolvent,
                }));
            }
        }
        self.insert(clause.clone());
        Ok(())
    }

    /// Removes one copy of `clause` at one-based proof step `step`.
    ///
    /// Unit clauses are never removed. Returns the warning issued, if any.
    pub fn apply_delete(&mut self, step: usize, clause: &SourceClause) -> Option<Warning> {
        let kind = if clause.canonical().len() == 1 {
            WarningKind::UnitDeletionIgnored
        } else if let Some(id) = self.formula.find(clause.canonical()) {
            let stored = self.formula.remove(id).expect("found clause is live");
            self.propagator.remove_clause(id);
            self.stats.deletions += 1;
            if self.options.trace {
                self.trace.push(TraceEvent::Delete {
                    step,
                    clause: clause.clone(),
                    order_mismatch: stored.original() != clause.original(),
                });
            }
            return None;
        } else {
            WarningKind::DeletedClauseMissing
        };
        self.stats.ignored_deletions += 1;
        let warning = Warning {
            step,
            kind,
            clause: clause.clone(),
        };
        self.warnings.push(warning.clone());
        Some(warning)
    }

    /// Runs `proof` forward from the current formula.
    pub fn run(mut self, proof: &Proof) -> CheckReport {
        let mut verdict = Verdict::NoEmptyClause;
        for (i, step) in proof.steps.iter().enumerate() {
            let index = i + 1;
            match step.kind {
                StepKind::Delete => {
                    self.apply_delete(index, &step.clause);
                }
                StepKind::Add => {
                    if let Err(rejection) = self.apply_add(index, &step.clause) {
                        verdict = Verdict::Rejected(*rejection);
                        break;
                    }
                    if step.clause.is_empty() {
                        verdict = Verdict::Verified { step: index };
                        break;
                    }
                }
            }
        }
        CheckReport {
            verdict,
            warnings: self.warnings,
            trace: self.trace,
            stats: self.stats,
        }
    }
}

/// Checks `proof` against `formula`.
pub fn check_proof(formula: Formula, proof: &Proof) -> CheckReport {
    check_proof_with(formula, proof, CheckOptions::default())
}

pub fn check_proof_with(formula: Formula, proof: &Proof, options: CheckOptions) -> CheckReport {
    Checker::with_options(formula, options).run(proof)
}

/// Unit propagation fixpoint of `formula` under `assumptions`.
pub fn propagate(formula: &Formula, assumptions: &[Literal]) -> PropagationResult {
    Propagator::from_formula(formula).propagate_under(assumptions)
}

pub fn check_at(formula: &Formula, clause: &Clause) -> bool {
    propagate(formula, &negated(clause)) == PropagationResult::Conflict
}

/// RAT check of a non-empty clause, pivoting on its first literal.
pub fn check_rat(formula: &Formula, clause: &SourceClause) -> bool {
    Checker::new(formula.clone()).check_rat(clause)
}
