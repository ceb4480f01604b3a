//! Shared domain types: literals, clauses, formulas, proofs and check reports.

use std::collections::HashMap;
use std::fmt;
use std::ops::Neg;

use thiserror::Error;

/// Largest variable index accepted by both DIMACS and DRAT.
pub const MAX_VAR: u32 = (1 << 31) - 1;

/// A signed DIMACS literal. Never zero, magnitude at most [`MAX_VAR`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Literal(i32);

#[derive(Debug, Error, PartialEq, Eq, Clone, Copy)]
pub enum LiteralError {
    #[error("0 is a clause terminator, not a literal")]
    Zero,
    #[error("literal {0} exceeds the maximum variable index {MAX_VAR}")]
    OutOfRange(i64),
}

impl Literal {
    pub fn new(value: i64) -> Result<Literal, LiteralError> {
        if value == 0 {
            Err(LiteralError::Zero)
        } else if value.unsigned_abs() > MAX_VAR as u64 {
            Err(LiteralError::OutOfRange(value))
        } else {
            Ok(Literal(value as i32))
        }
    }

    /// Builds a literal from a variable index and a polarity.
    ///
    /// Panics if `var` is zero or above [`MAX_VAR`].
    pub fn from_var(var: u32, positive: bool) -> Literal {
        assert!(
            var != 0 && var <= MAX_VAR,
            "variable index {var} out of range"
        );
        let v = var as i32;
        Literal(if positive { v } else { -v })
    }

    pub fn value(self) -> i32 {
        self.0
    }

    pub fn var(self) -> u32 {
        self.0.unsigned_abs()
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    /// Dense index used for per-literal tables: `2v` for `v`, `2v + 1` for `-v`.
    ///
    /// This coincides with the binary DRAT literal code.
    #[inline]
    pub fn index(self) -> usize {
        let v = self.var() as usize;
        if self.0 > 0 {
            2 * v
        } else {
            2 * v + 1
        }
    }
}

impl Neg for Literal {
    type Output = Literal;

    #[inline]
    fn neg(self) -> Literal {
        Literal(-self.0)
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Canonical literal order: ascending variable, positive before negative.
fn canonical_key(lit: &Literal) -> (u32, bool) {
    (lit.var(), !lit.is_positive())
}

#[derive(Debug, Error, PartialEq, Eq, Clone, Copy)]
pub enum ClauseError {
    #[error("clause is a tautology (contains {0} and {neg})", neg = -*.0)]
    Tautology(Literal),
    #[error("clause contains literal {0} twice")]
    DuplicateLiteral(Literal),
}

/// A duplicate-free, non-tautological clause in canonical literal order.
///
/// Two clauses compare equal iff they contain the same literals.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Clause(Vec<Literal>);

impl Clause {
    /// The empty clause.
    pub fn empty() -> Clause {
        Clause(Vec::new())
    }

    pub fn new(literals: Vec<Literal>) -> Result<Clause, ClauseError> {
        normalize_clause(&literals).map(|c| c.canonical)
    }

    pub fn literals(&self) -> &[Literal] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, lit: Literal) -> bool {
        self.0
            .binary_search_by_key(&canonical_key(&lit), canonical_key)
            .is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Literal> + '_ {
        self.0.iter().copied()
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_dimacs_clause(f, &self.0)
    }
}

pub(crate) fn write_dimacs_clause(f: &mut impl fmt::Write, lits: &[Literal]) -> fmt::Result {
    for lit in lits {
        write!(f, "{lit} ")?;
    }
    f.write_str("0")
}

/// A clause as written in the input, plus its canonical form.
///
/// The textual order matters for proofs: the first literal of an added clause is its RAT pivot.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct SourceClause {
    original: Vec<Literal>,
    canonical: Clause,
}

impl SourceClause {
    pub fn empty() -> SourceClause {
        SourceClause::default()
    }

    pub fn original(&self) -> &[Literal] {
        &self.original
    }

    pub fn canonical(&self) -> &Clause {
        &self.canonical
    }

    pub fn into_canonical(self) -> Clause {
        self.canonical
    }

    /// First literal in textual order.
    pub fn pivot(&self) -> Option<Literal> {
        self.original.first().copied()
    }

    pub fn len(&self) -> usize {
        self.original.len()
    }

    pub fn is_empty(&self) -> bool {
        self.original.is_empty()
    }
}

impl fmt::Display for SourceClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_dimacs_clause(f, &self.original)
    }
}

impl From<Clause> for SourceClause {
    fn from(canonical: Clause) -> SourceClause {
        SourceClause {
            original: canonical.0.clone(),
            canonical,
        }
    }
}

/// Validates a literal list and attaches its canonical form.
pub fn normalize_clause(literals: &[Literal]) -> Result<SourceClause, ClauseError> {
    let mut sorted = literals.to_vec();
    sorted.sort_unstable_by_key(canonical_key);
    for pair in sorted.windows(2) {
        if pair[0] == pair[1] {
            return Err(ClauseError::DuplicateLiteral(pair[0]));
        }
        if pair[0].var() == pair[1].var() {
            return Err(ClauseError::Tautology(pair[0]));
        }
    }
    Ok(SourceClause {
        original: literals.to_vec(),
        canonical: Clause(sorted),
    })
}

/// Stable handle of a clause copy inside a [`Formula`]. Never reused after deletion.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct ClauseId(pub usize);

/// A multiset of clauses with an occurrence index from literals to clause copies.
#[derive(Clone, Debug, Default)]
pub struct Formula {
    slots: Vec<Option<SourceClause>>,
    by_clause: HashMap<Clause, Vec<ClauseId>>,
    occurrences: Vec<Vec<ClauseId>>,
    live: usize,
    pub declared_vars: u32,
    pub declared_clauses: usize,
}

impl Formula {
    pub fn new() -> Formula {
        Formula::default()
    }

    pub fn from_clauses<I>(clauses: I) -> Formula
    where
        I: IntoIterator,
        I::Item: Into<SourceClause>,
    {
        let mut formula = Formula::new();
        for clause in clauses {
            formula.add(clause.into());
        }
        formula.declared_vars = formula.max_var();
        formula.declared_clauses = formula.len();
        formula
    }

    /// Adds one copy of `clause` and returns its handle.
    pub fn add(&mut self, clause: SourceClause) -> ClauseId {
        let id = ClauseId(self.slots.len());
        for lit in clause.canonical.iter() {
            let idx = lit.index();
            if idx >= self.occurrences.len() {
                self.occurrences.resize_with((idx | 1) + 1, Vec::new);
            }
            self.occurrences[idx].push(id);
        }
        self.by_clause
            .entry(clause.canonical.clone())
            .or_default()
            .push(id);
        self.slots.push(Some(clause));
        self.live += 1;
        id
    }

    /// Finds a live copy of `clause` (compared as a literal set).
    pub fn find(&self, clause: &Clause) -> Option<ClauseId> {
        self.by_clause
            .get(clause)
            .and_then(|ids| ids.last().copied())
    }

    /// Removes one copy of `clause`, returning the removed handle if a copy was present.
    pub fn remove_one(&mut self, clause: &Clause) -> Option<ClauseId> {
        let id = self.find(clause)?;
        self.remove(id);
        Some(id)
    }

    /// Removes the clause copy `id`. Returns `None` if it was already gone.
    pub fn remove(&mut self, id: ClauseId) -> Option<SourceClause> {
        let clause = self.slots.get_mut(id.0)?.take()?;
        for lit in clause.canonical.iter() {
            let list = &mut self.occurrences[lit.index()];
            let pos = list
                .iter()
                .position(|&c| c == id)
                .expect("occurrence index out of sync");
            list.swap_remove(pos);
        }
        let copies = self
            .by_clause
            .get_mut(&clause.canonical)
            .expect("clause index out of sync");
        let pos = copies
            .iter()
            .position(|&c| c == id)
            .expect("clause index out of sync");
        copies.swap_remove(pos);
        if copies.is_empty() {
            self.by_clause.remove(&clause.canonical);
        }
        self.live -= 1;
        Some(clause)
    }

    pub fn get(&self, id: ClauseId) -> Option<&SourceClause> {
        self.slots.get(id.0).and_then(Option::as_ref)
    }

    /// Live clause copies containing `lit`, in no particular order.
    pub fn containing(&self, lit: Literal) -> &[ClauseId] {
        self.occurrences
            .get(lit.index())
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Number of live copies of `clause`.
    pub fn count(&self, clause: &Clause) -> usize {
        self.by_clause.get(clause).map_or(0, Vec::len)
    }

    pub fn len(&self) -> usize {
        self.live
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = (ClauseId, &SourceClause)> + '_ {
        self.slots
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.as_ref().map(|c| (ClauseId(i), c)))
    }

    pub fn clauses(&self) -> impl Iterator<Item = &Clause> + '_ {
        self.iter().map(|(_, c)| c.canonical())
    }

    /// Largest variable index occurring in a live clause.
    pub fn max_var(&self) -> u32 {
        self.clauses()
            .flat_map(|c| c.iter())
            .map(Literal::var)
            .max()
            .unwrap_or(0)
    }

    /// Live clauses as a sorted list of canonical forms, duplicates kept.
    pub fn sorted_multiset(&self) -> Vec<Clause> {
        let mut all: Vec<Clause> = self.clauses().cloned().collect();
        all.sort_unstable_by(|a, b| {
            let ka = a.0.iter().map(canonical_key);
            let kb = b.0.iter().map(canonical_key);
            ka.cmp(kb)
        });
        all
    }

    /// Multiset equality on canonical clauses; handles and declared counts are ignored.
    pub fn same_multiset(&self, other: &Formula) -> bool {
        self.len() == other.len()
            && self
                .by_clause
                .iter()
                .all(|(clause, ids)| other.count(clause) == ids.len())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum StepKind {
    Add,
    Delete,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ProofStep {
    pub kind: StepKind,
    pub clause: SourceClause,
}

impl ProofStep {
    pub fn add(clause: SourceClause) -> ProofStep {
        ProofStep {
            kind: StepKind::Add,
            clause,
        }
    }

    pub fn delete(clause: SourceClause) -> ProofStep {
        ProofStep {
            kind: StepKind::Delete,
            clause,
        }
    }

    pub fn is_empty_addition(&self) -> bool {
        self.kind == StepKind::Add && self.clause.is_empty()
    }
}

impl fmt::Display for ProofStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.kind == StepKind::Delete {
            f.write_str("d ")?;
        }
        write!(f, "{}", self.clause)
    }
}

/// An ordered sequence of clause additions and deletions.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Proof {
    pub steps: Vec<ProofStep>,
}

impl Proof {
    pub fn new(steps: Vec<ProofStep>) -> Proof {
        Proof { steps }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Zero-based position of the first addition of the empty clause.
    pub fn empty_clause_position(&self) -> Option<usize> {
        self.steps.iter().position(ProofStep::is_empty_addition)
    }

    /// Whether the step at zero-based `index` comes after the first empty-clause addition.
    /// Such steps are never checked.
    pub fn is_ignorable(&self, index: usize) -> bool {
        self.empty_clause_position().is_some_and(|p| index > p)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum WarningKind {
    /// A deletion named a clause that is not in the current formula.
    DeletedClauseMissing,
    /// A deletion of a unit clause was skipped.
    UnitDeletionIgnored,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Warning {
    /// One-based proof step index.
    pub step: usize,
    pub kind: WarningKind,
    pub clause: SourceClause,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            WarningKind::DeletedClauseMissing => write!(
                f,
                "step {}: ignoring deletion of clause not in formula: d {}",
                self.step, self.clause
            ),
            WarningKind::UnitDeletionIgnored => write!(
                f,
                "step {}: ignoring deletion of unit clause: d {}",
                self.step, self.clause
            ),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum RejectReason {
    RatCheckFailed,
    EmptyClauseNotAt,
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RejectReason::RatCheckFailed => "RAT check failed",
            RejectReason::EmptyClauseNotAt => "empty clause not AT",
        })
    }
}

/// Why and where a proof was rejected.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Rejection {
    /// One-based proof step index.
    pub step: usize,
    pub reason: RejectReason,
    pub clause: SourceClause,
    pub pivot: Option<Literal>,
    /// Clause containing the negated pivot whose resolvent failed the AT check.
    pub against: Option<Clause>,
    /// The resolvent that failed the AT check.
    pub resolvent: Option<Clause>,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {}: {}: {}", self.step, self.reason, self.clause)?;
        if let Some(pivot) = self.pivot {
            write!(f, " (pivot {pivot}")?;
            if let (Some(against), Some(resolvent)) = (&self.against, &self.resolvent) {
                write!(f, "; resolvent {resolvent} with {against} is not AT")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Verdict {
    /// The empty clause was accepted at this one-based step.
    Verified {
        step: usize,
    },
    Rejected(Rejection),
    NoEmptyClause,
}

/// One resolvent examined during a RAT check.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ResolventCheck {
    /// Clause containing the negated pivot.
    pub against: Clause,
    /// `None` when the resolvent is a tautology and passes trivially.
    pub resolvent: Option<Clause>,
    pub is_at: bool,
}

/// Per-step record collected when tracing is enabled.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TraceEvent {
    AddAt {
        step: usize,
        clause: SourceClause,
    },
    AddRat {
        step: usize,
        clause: SourceClause,
        pivot: Literal,
        resolvents: Vec<ResolventCheck>,
    },
    Delete {
        step: usize,
        clause: SourceClause,
        /// The deleted copy was stored with a different literal order than the deletion line.
        order_mismatch: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct CheckStats {
    pub at_additions: usize,
    pub rat_additions: usize,
    pub deletions: usize,
    pub ignored_deletions: usize,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CheckReport {
    pub verdict: Verdict,
    pub warnings: Vec<Warning>,
    pub trace: Vec<TraceEvent>,
    pub stats: CheckStats,
}

impl CheckReport {
    pub fn is_verified(&self) -> bool {
        matches!(self.verdict, Verdict::Verified { .. })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lits(values: &[i64]) -> Vec<Literal> {
        values.iter().map(|&v| Literal::new(v).unwrap()).collect()
    }

    #[test]
    fn literal_bounds() {
        assert_eq!(Literal::new(0), Err(LiteralError::Zero));
        assert!(Literal::new(MAX_VAR as i64).is_ok());
        assert!(Literal::new(-(MAX_VAR as i64)).is_ok());
        assert_eq!(
            Literal::new(1 << 31),
            Err(LiteralError::OutOfRange(1 << 31))
        );
        assert_eq!((-Literal::new(5).unwrap()).value(), -5);
    }

    #[test]
    fn normalize_keeps_textual_order() {
        let c = normalize_clause(&lits(&[1, 2, -3])).unwrap();
        assert_eq!(c.original(), &lits(&[1, 2, -3])[..]);
        assert_eq!(c.canonical().literals(), &lits(&[1, 2, -3])[..]);

        let c = normalize_clause(&lits(&[-3, 2, 1])).unwrap();
        assert_eq!(c.pivot(), Some(Literal::new(-3).unwrap()));
        assert_eq!(c.canonical().literals(), &lits(&[1, 2, -3])[..]);
    }

    #[test]
    fn normalize_empty() {
        let c = normalize_clause(&[]).unwrap();
        assert!(c.is_empty());
        assert!(c.canonical().is_empty());
    }

    #[test]
    fn normalize_rejects_bad_clauses() {
        assert!(matches!(
            normalize_clause(&lits(&[1, -1])),
            Err(ClauseError::Tautology(_))
        ));
        assert!(matches!(
            normalize_clause(&lits(&[-2, 3, 2])),
            Err(ClauseError::Tautology(_))
        ));
        assert_eq!(
            normalize_clause(&lits(&[4, 1, 4])),
            Err(ClauseError::DuplicateLiteral(Literal::new(4).unwrap()))
        );
    }

    #[test]
    fn canonical_order_is_positive_first() {
        let c = Clause::new(lits(&[-7, 3, -1])).unwrap();
        assert_eq!(c.literals(), &lits(&[-1, 3, -7])[..]);
        assert!(c.contains(Literal::new(3).unwrap()));
        assert!(!c.contains(Literal::new(-3).unwrap()));
    }

    #[test]
    fn formula_multiset_semantics() {
        let c12 = Clause::new(lits(&[1, 2])).unwrap();
        let c21: SourceClause = normalize_clause(&lits(&[2, 1])).unwrap();
        let mut f = Formula::from_clauses([c12.clone(), c12.clone()]);
        assert_eq!(f.len(), 2);
        assert_eq!(f.count(&c12), 2);
        assert_eq!(f.containing(Literal::new(1).unwrap()).len(), 2);

        assert!(f.remove_one(c21.canonical()).is_some());
        assert_eq!(f.count(&c12), 1);
        assert_eq!(f.containing(Literal::new(2).unwrap()).len(), 1);
        assert!(f.remove_one(&c12).is_some());
        assert!(f.remove_one(&c12).is_none());
        assert!(f.is_empty());
        assert!(f.containing(Literal::new(1).unwrap()).is_empty());
    }

    fn clause_strategy() -> impl Strategy<Value = Vec<Literal>> {
        proptest::sample::subsequence((1..=12u32).collect::<Vec<_>>(), 0..6)
            .prop_flat_map(|vars| {
                let n = vars.len();
                (Just(vars), proptest::collection::vec(any::<bool>(), n))
            })
            .prop_map(|(vars, signs)| {
                vars.into_iter()
                    .zip(signs)
                    .map(|(v, s)| Literal::from_var(v, s))
                    .collect()
            })
            .prop_shuffle()
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent(c in clause_strategy()) {
            let once = normalize_clause(&c).unwrap();
            let twice = normalize_clause(once.canonical().literals()).unwrap();
            prop_assert_eq!(once.canonical(), twice.canonical());
        }

        #[test]
        fn permutations_normalize_equal(c in clause_strategy(), seed in any::<u64>()) {
            let mut shuffled = c.clone();
            // deterministic rotation plus reversal is enough to reach a different order
            let k = (seed as usize) % shuffled.len().max(1);
            shuffled.rotate_left(k);
            if seed & 1 == 1 { shuffled.reverse(); }
            prop_assert_eq!(
                normalize_clause(&c).unwrap().into_canonical(),
                normalize_clause(&shuffled).unwrap().into_canonical()
            );
        }

        #[test]
        fn canonical_has_same_literals(c in clause_strategy()) {
            let sc = normalize_clause(&c).unwrap();
            let mut a = sc.original().to_vec();
            let mut b = sc.canonical().literals().to_vec();
            a.sort_by_key(|l| l.value());
            b.sort_by_key(|l| l.value());
            prop_assert_eq!(a, b);
        }

        #[test]
        fn occurrence_index_stays_consistent(
            clauses in proptest::collection::vec(clause_strategy(), 0..20),
            removals in proptest::collection::vec(any::<prop::sample::Index>(), 0..20),
        ) {
            let mut f = Formula::new();
            let mut ids = Vec::new();
            for c in &clauses {
                ids.push(f.add(normalize_clause(c).unwrap()));
            }
            for r in removals {
                if ids.is_empty() { break; }
                let id = ids.swap_remove(r.index(ids.len()));
                f.remove(id);
            }
            prop_assert_eq!(f.len(), ids.len());
            for lit in (1..=12u32).flat_map(|v| [Literal::from_var(v, true), Literal::from_var(v, false)]) {
                let mut expected: Vec<ClauseId> = f
                    .iter()
                    .filter(|(_, c)| c.canonical().contains(lit))
                    .map(|(id, _)| id)
                    .collect();
                let mut actual = f.containing(lit).to_vec();
                expected.sort();
                actual.sort();
                prop_assert_eq!(expected, actual);
            }
        }
    }
}
