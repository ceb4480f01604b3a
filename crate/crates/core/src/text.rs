//! Byte-level scanner shared by the DIMACS and plain DRAT parsers.

use crate::model::{Literal, MAX_VAR};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum LexErrorKind {
    UnexpectedByte(u8),
    UnexpectedEof,
    LiteralOverflow,
    UnterminatedClause,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct LexError {
    pub line: usize,
    pub offset: usize,
    pub kind: LexErrorKind,
}

#[inline]
pub(crate) fn is_blank(b: u8) -> bool {
    // '\r' is tolerated so that CRLF files parse
    matches!(b, b' ' | b'\n' | b'\t' | b'\r')
}

#[derive(Clone, Copy)]
pub(crate) struct Scanner<'a> {
    bytes: &'a [u8],
    pos: usize,
    line: usize,
}

impl<'a> Scanner<'a> {
    pub fn new(bytes: &'a [u8]) -> Scanner<'a> {
        Scanner {
            bytes,
            pos: 0,
            line: 1,
        }
    }

    pub fn offset(&self) -> usize {
        self.pos
    }

    pub fn line(&self) -> usize {
        self.line
    }

    pub fn error(&self, kind: LexErrorKind) -> LexError {
        LexError {
            line: self.line,
            offset: self.pos,
            kind,
        }
    }

    fn unexpected(&self) -> LexError {
        match self.peek() {
            Some(b) => self.error(LexErrorKind::UnexpectedByte(b)),
            None => self.error(LexErrorKind::UnexpectedEof),
        }
    }

    #[inline]
    pub fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    #[inline]
    pub fn peek_at(&self, ahead: usize) -> Option<u8> {
        self.bytes.get(self.pos + ahead).copied()
    }

    #[inline]
    pub fn bump(&mut self) {
        if self.bytes[self.pos] == b'\n' {
            self.line += 1;
        }
        self.pos += 1;
    }

    pub fn skip_blanks(&mut self) {
        while let Some(b) = self.peek() {
            if !is_blank(b) {
                break;
            }
            self.bump();
        }
    }

    /// Skips spaces and tabs but stops at line breaks.
    pub fn skip_inline_blanks(&mut self) {
        while let Some(b' ' | b'\t' | b'\r') = self.peek() {
            self.bump();
        }
    }

    /// True if the next byte is `tag` followed by a blank or end of input.
    pub fn at_keyword(&self, tag: u8) -> bool {
        self.peek() == Some(tag) && self.peek_at(1).is_none_or(is_blank)
    }

    /// Consumes the rest of the current line, including the newline.
    pub fn skip_line(&mut self) {
        while let Some(b) = self.peek() {
            self.bump();
            if b == b'\n' {
                break;
            }
        }
    }

    /// Skips blanks and comment lines. A comment is `c` followed by a blank or end of input.
    pub fn skip_blanks_and_comments(&mut self) {
        loop {
            self.skip_blanks();
            if self.at_keyword(b'c') {
                self.skip_line();
            } else {
                return;
            }
        }
    }

    /// Reads an unsigned decimal numeral that must be followed by a blank or end of input.
    pub fn read_unsigned(&mut self) -> Result<u64, LexError> {
        let start = *self;
        let mut value: u64 = 0;
        let mut digits = 0;
        while let Some(b @ b'0'..=b'9') = self.peek() {
            value = value.saturating_mul(10).saturating_add(u64::from(b - b'0'));
            digits += 1;
            self.bump();
        }
        if digits == 0 || self.peek().is_some_and(|b| !is_blank(b)) {
            return Err(self.unexpected());
        }
        if value > u64::from(u32::MAX) {
            return Err(start.error(LexErrorKind::LiteralOverflow));
        }
        Ok(value)
    }

    /// Reads a signed literal numeral; `0` is returned as 0.
    pub fn read_int(&mut self) -> Result<i64, LexError> {
        let start = *self;
        let negative = self.peek() == Some(b'-');
        if negative {
            self.bump();
            if !matches!(self.peek(), Some(b'1'..=b'9')) {
                return Err(self.unexpected());
            }
        }
        let magnitude = self.read_unsigned().map_err(|e| match e.kind {
            LexErrorKind::LiteralOverflow => start.error(LexErrorKind::LiteralOverflow),
            _ => e,
        })?;
        if magnitude > u64::from(MAX_VAR) {
            return Err(start.error(LexErrorKind::LiteralOverflow));
        }
        let value = magnitude as i64;
        Ok(if negative { -value } else { value })
    }

    /// Reads literals up to and including the terminating `0`.
    ///
    /// `on_literal` sees each literal with its line and offset and may reject it.
    pub fn read_clause<E>(
        &mut self,
        mut on_literal: impl FnMut(Literal, usize, usize) -> Result<(), E>,
    ) -> Result<Vec<Literal>, ClauseReadError<E>> {
        let mut literals = Vec::new();
        loop {
            self.skip_blanks();
            if self.peek().is_none() {
                return Err(ClauseReadError::Lex(
                    self.error(LexErrorKind::UnterminatedClause),
                ));
            }
            let (line, offset) = (self.line, self.pos);
            let value = self.read_int().map_err(ClauseReadError::Lex)?;
            if value == 0 {
                return Ok(literals);
            }
            // read_int bounds the magnitude, so this cannot fail
            let lit = Literal::new(value).expect("literal in range");
            on_literal(lit, line, offset).map_err(ClauseReadError::Reject)?;
            literals.push(lit);
        }
    }
}

pub(crate) enum ClauseReadError<E> {
    Lex(LexError),
    Reject(E),
}
