use crate::model::Literal;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Value {
    True,
    False,
    Unassigned,
}

/// Partial assignment with a trail of assigned literals in assignment order.
#[derive(Clone, Debug, Default)]
pub struct Assignment {
    /// Indexed by variable: 1 true, -1 false, 0 unassigned.
    values: Vec<i8>,
    trail: Vec<Literal>,
}

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    pub fn ensure_var(&mut self, var: u32) {
        let needed = var as usize + 1;
        if self.values.len() < needed {
            self.values.resize(needed, 0);
        }
    }

    #[inline]
    pub fn value(&self, lit: Literal) -> Value {
        let v = self.values.get(lit.var() as usize).copied().unwrap_or(0);
        match (v, lit.is_positive()) {
            (0, _) => Value::Unassigned,
            (1, true) | (-1, false) => Value::True,
            _ => Value::False,
        }
    }

    #[inline]
    pub fn is_true(&self, lit: Literal) -> bool {
        self.value(lit) == Value::True
    }

    #[inline]
    pub fn is_false(&self, lit: Literal) -> bool {
        self.value(lit) == Value::False
    }

    /// Makes `lit` true. The variable must be unassigned and within range.
    #[inline]
    pub fn assign(&mut self, lit: Literal) {
        let slot = &mut self.values[lit.var() as usize];
        debug_assert_eq!(*slot, 0, "variable {} assigned twice", lit.var());
        *slot = if lit.is_positive() { 1 } else { -1 };
        self.trail.push(lit);
    }

    pub fn trail(&self) -> &[Literal] {
        &self.trail
    }

    /// Current trail length, usable with [`Assignment::undo_to`].
    pub fn mark(&self) -> usize {
        self.trail.len()
    }

    /// Unassigns everything assigned after `mark`, most recent first.
    pub fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let lit = self.trail.pop().unwrap();
            self.values[lit.var() as usize] = 0;
        }
    }
}
