//! Two-watched-literal unit propagation with a persistent root-level fixpoint.
//!
//! Unit clauses and everything they imply are kept assigned between checks. An AT check pushes
//! the assumptions on top of that root trail, propagates, and unwinds back to the root. The root
//! is recomputed from scratch only when a clause that justifies a root assignment is removed, or
//! when a removal may have resolved a root conflict.

use std::mem;

use super::assignment::{Assignment, Value};
use super::PropagationResult;
use crate::model::{ClauseId, Formula, Literal};

/// Watch lists for clauses of length two or more and a separate list of unit clauses.
///
/// The first two literals of every long clause are its watched literals.
#[derive(Clone, Debug, Default)]
pub struct WatchIndex {
    /// Indexed by [`Literal::index`]: clauses watching that literal.
    watches: Vec<Vec<ClauseId>>,
    units: Vec<ClauseId>,
}

impl WatchIndex {
    fn ensure_var(&mut self, var: u32) {
        let needed = 2 * var as usize + 2;
        if self.watches.len() < needed {
            self.watches.resize_with(needed, Vec::new);
        }
    }

    fn watch(&mut self, lit: Literal, id: ClauseId) {
        self.watches[lit.index()].push(id);
    }

    fn unwatch(&mut self, lit: Literal, id: ClauseId) {
        let list = &mut self.watches[lit.index()];
        let pos = list
            .iter()
            .position(|&c| c == id)
            .expect("watch list out of sync");
        list.swap_remove(pos);
    }

    pub fn watching(&self, lit: Literal) -> &[ClauseId] {
        self.watches
            .get(lit.index())
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn units(&self) -> &[ClauseId] {
        &self.units
    }
}

#[derive(Clone, Debug, Default)]
pub struct Propagator {
    assignment: Assignment,
    /// Indexed by variable: the clause that propagated it at the root, if any.
    reasons: Vec<Option<ClauseId>>,
    /// Clause literals with the watched pair in front. Indexed by `ClauseId`.
    clauses: Vec<Option<Vec<Literal>>>,
    index: WatchIndex,
    empty_clauses: usize,
    /// Trail position of the next literal to propagate.
    head: usize,
    root_conflict: bool,
}

impl Propagator {
    pub fn new() -> Propagator {
        Propagator::default()
    }

    pub fn from_formula(formula: &Formula) -> Propagator {
        let mut p = Propagator::new();
        for (id, clause) in formula.iter() {
            p.add_clause(id, clause.canonical().literals());
        }
        p
    }

    /// Whether unit propagation without assumptions already yields a conflict.
    pub fn root_conflict(&self) -> bool {
        self.root_conflict
    }

    /// Root-level assignment (the unit propagation fixpoint of the clause set).
    pub fn root_trail(&self) -> &[Literal] {
        self.assignment.trail()
    }

    pub fn watch_index(&self) -> &WatchIndex {
        &self.index
    }

    fn ensure_var(&mut self, var: u32) {
        self.assignment.ensure_var(var);
        if self.reasons.len() <= var as usize {
            self.reasons.resize(var as usize + 1, None);
        }
        self.index.ensure_var(var);
    }

    #[inline]
    fn assign(&mut self, lit: Literal, reason: Option<ClauseId>) {
        self.assignment.assign(lit);
        self.reasons[lit.var() as usize] = reason;
    }

    pub fn add_clause(&mut self, id: ClauseId, literals: &[Literal]) {
        if let Some(max) = literals.iter().map(|l| l.var()).max() {
            self.ensure_var(max);
        }
        if self.clauses.len() <= id.0 {
            self.clauses.resize_with(id.0 + 1, || None);
        }
        debug_assert!(self.clauses[id.0].is_none(), "clause id reused");
        let mut lits = literals.to_vec();

        match lits.len() {
            0 => {
                self.empty_clauses += 1;
                self.root_conflict = true;
            }
            1 => {
                self.index.units.push(id);
                if !self.root_conflict {
                    match self.assignment.value(lits[0]) {
                        Value::True => {}
                        Value::False => self.root_conflict = true,
                        Value::Unassigned => {
                            self.assign(lits[0], Some(id));
                            self.root_conflict = self.propagate();
                        }
                    }
                }
            }
            _ => {
                let mut unit = None;
                if !self.root_conflict {
                    // Move non-false literals to the front so they get watched.
                    let mut front = 0;
                    for i in 0..lits.len() {
                        if !self.assignment.is_false(lits[i]) {
                            lits.swap(front, i);
                            front += 1;
                            if front == 2 {
                                break;
                            }
                        }
                    }
                    match front {
                        0 => self.root_conflict = true,
                        1 if self.assignment.value(lits[0]) == Value::Unassigned => {
                            unit = Some(lits[0]);
                        }
                        _ => {}
                    }
                }
                self.index.watch(lits[0], id);
                self.index.watch(lits[1], id);
                if let Some(lit) = unit {
                    self.clauses[id.0] = Some(lits);
                    self.assign(lit, Some(id));
                    self.root_conflict = self.propagate();
                    return;
                }
            }
        }
        self.clauses[id.0] = Some(lits);
    }

    pub fn remove_clause(&mut self, id: ClauseId) {
        let lits = self
            .clauses
            .get_mut(id.0)
            .and_then(Option::take)
            .expect("removing a clause that is not present");
        let mut needs_reset = self.root_conflict;
        match lits.len() {
            0 => self.empty_clauses -= 1,
            1 => {
                let pos = self
                    .index
                    .units
                    .iter()
                    .position(|&c| c == id)
                    .expect("unit list out of sync");
                self.index.units.swap_remove(pos);
                needs_reset |= self.reasons[lits[0].var() as usize] == Some(id);
            }
            _ => {
                self.index.unwatch(lits[0], id);
                self.index.unwatch(lits[1], id);
                needs_reset |= lits
                    .iter()
                    .any(|l| self.reasons[l.var() as usize] == Some(id));
            }
        }
        if needs_reset {
            self.reset_root();
        }
    }

    /// Recomputes the root-level fixpoint from an empty assignment.
    fn reset_root(&mut self) {
        for &lit in self.assignment.trail() {
            self.reasons[lit.var() as usize] = None;
        }
        self.assignment.undo_to(0);
        self.head = 0;
        self.root_conflict = self.empty_clauses > 0;
        if self.root_conflict {
            return;
        }
        for i in 0..self.index.units.len() {
            let id = self.index.units[i];
            let lit = self.clauses[id.0].as_ref().expect("unit list out of sync")[0];
            match self.assignment.value(lit) {
                Value::True => {}
                Value::False => {
                    self.root_conflict = true;
                    return;
                }
                Value::Unassigned => self.assign(lit, Some(id)),
            }
        }
        self.root_conflict = self.propagate();
    }

    /// Propagates all pending trail literals. Returns true on conflict.
    fn propagate(&mut self) -> bool {
        let Propagator {
            assignment,
            reasons,
            clauses,
            index,
            head,
            ..
        } = self;
        while *head < assignment.trail().len() {
            let lit = assignment.trail()[*head];
            *head += 1;
            let false_lit = -lit;
            let mut list = mem::take(&mut index.watches[false_lit.index()]);
            let mut conflict = false;
            let mut i = 0;
            while i < list.len() {
                let id = list[i];
                let lits = clauses[id.0].as_mut().expect("watch on removed clause");
                if lits[0] == false_lit {
                    lits.swap(0, 1);
                }
                let other = lits[0];
                if assignment.is_true(other) {
                    i += 1;
                    continue;
                }
                if let Some(k) = (2..lits.len()).find(|&k| !assignment.is_false(lits[k])) {
                    lits.swap(1, k);
                    index.watches[lits[1].index()].push(id);
                    list.swap_remove(i);
                    continue;
                }
                if assignment.is_false(other) {
                    conflict = true;
                    break;
                }
                assignment.assign(other);
                reasons[other.var() as usize] = Some(id);
                i += 1;
            }
            index.watches[false_lit.index()] = list;
            if conflict {
                return true;
            }
        }
        false
    }

    /// Computes the unit propagation fixpoint under `assumptions` and reports whether it is a
    /// conflict. The root state is left unchanged.
    pub fn propagate_under(&mut self, assumptions: &[Literal]) -> PropagationResult {
        if self.root_conflict {
            return PropagationResult::Conflict;
        }
        let mark = self.assignment.mark();
        debug_assert_eq!(self.head, mark);
        let mut conflict = false;
        for &lit in assumptions {
            self.ensure_var(lit.var());
            match self.assignment.value(lit) {
                Value::True => {}
                Value::False => {
                    conflict = true;
                    break;
                }
                Value::Unassigned => self.assign(lit, None),
            }
        }
        if !conflict {
            conflict = self.propagate();
        }
        for &lit in &self.assignment.trail()[mark..] {
            self.reasons[lit.var() as usize] = None;
        }
        self.assignment.undo_to(mark);
        self.head = mark;
        if conflict {
            PropagationResult::Conflict
        } else {
            PropagationResult::Fixpoint
        }
    }

    /// Checks the watch invariant at the root: every long clause watches its first two
    /// literals, and a false watched literal implies the clause is satisfied or unit-propagated.
    #[cfg(test)]
    pub(crate) fn assert_invariants(&self) {
        if self.root_conflict {
            return;
        }
        for (i, lits) in self.clauses.iter().enumerate() {
            let Some(lits) = lits else { continue };
            if lits.len() < 2 {
                continue;
            }
            let id = ClauseId(i);
            assert!(self.index.watching(lits[0]).contains(&id));
            assert!(self.index.watching(lits[1]).contains(&id));
            for w in 0..2 {
                if self.assignment.is_false(lits[w]) {
                    assert!(
                        self.assignment.is_true(lits[1 - w]),
                        "clause {lits:?} has a false watch without a true partner"
                    );
                }
            }
        }
    }
}
