//! DIMACS CNF reader and writer.

use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{normalize_clause, ClauseError, Formula, Literal};
use crate::text::{ClauseReadError, LexError, LexErrorKind, Scanner};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DimacsErrorKind {
    #[error("missing \"p cnf\" header")]
    HeaderMissing,
    #[error("malformed header: {0}")]
    HeaderMalformed(String),
    #[error("literal {literal} exceeds the declared variable count {declared}")]
    VarOutOfRange { literal: Literal, declared: u32 },
    #[error("header declares {declared} clauses but {found} were found")]
    ClauseCountMismatch { declared: usize, found: usize },
    #[error("end of input inside a clause (missing terminating 0)")]
    UnterminatedClause,
    #[error("numeral exceeds the maximum variable index")]
    LiteralOverflow,
    #[error("unexpected byte {0:?}")]
    UnexpectedByte(char),
    #[error("unexpected end of input")]
    UnexpectedEof,
    #[error(transparent)]
    Clause(#[from] ClauseError),
}

/// Parse failure with the position it was detected at.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, byte {offset}: {kind}")]
pub struct DimacsError {
    /// One-based line number.
    pub line: usize,
    /// Byte offset into the input.
    pub offset: usize,
    pub kind: DimacsErrorKind,
}

impl From<LexError> for DimacsError {
    fn from(e: LexError) -> DimacsError {
        let kind = match e.kind {
            LexErrorKind::UnexpectedByte(b) => DimacsErrorKind::UnexpectedByte(b as char),
            LexErrorKind::UnexpectedEof => DimacsErrorKind::UnexpectedEof,
            LexErrorKind::LiteralOverflow => DimacsErrorKind::LiteralOverflow,
            LexErrorKind::UnterminatedClause => DimacsErrorKind::UnterminatedClause,
        };
        DimacsError {
            line: e.line,
            offset: e.offset,
            kind,
        }
    }
}

fn header_error(s: &Scanner, what: &str) -> DimacsError {
    DimacsError {
        line: s.line(),
        offset: s.offset(),
        kind: DimacsErrorKind::HeaderMalformed(what.to_string()),
    }
}

fn parse_header(s: &mut Scanner) -> Result<(u32, usize), DimacsError> {
    s.skip_blanks_and_comments();
    match s.peek() {
        Some(b'p') => {}
        Some(b'-' | b'0'..=b'9') | None => {
            return Err(DimacsError {
                line: s.line(),
                offset: s.offset(),
                kind: DimacsErrorKind::HeaderMissing,
            })
        }
        Some(_) => return Err(header_error(s, "expected \"p cnf\"")),
    }
    s.bump();
    if !matches!(s.peek(), Some(b' ' | b'\t')) {
        return Err(header_error(s, "expected \"p cnf\""));
    }
    s.skip_inline_blanks();
    for &expected in b"cnf" {
        if s.peek() != Some(expected) {
            return Err(header_error(s, "expected \"p cnf\""));
        }
        s.bump();
    }
    let count = |s: &mut Scanner, what: &str| -> Result<u64, DimacsError> {
        if !matches!(s.peek(), Some(b' ' | b'\t')) {
            return Err(header_error(s, what));
        }
        s.skip_inline_blanks();
        s.read_unsigned().map_err(|_| header_error(s, what))
    };
    let vars = count(s, "expected variable count")?;
    let clauses = count(s, "expected clause count")?;
    if vars > u64::from(crate::model::MAX_VAR) {
        return Err(header_error(s, "variable count exceeds 2^31 - 1"));
    }
    s.skip_inline_blanks();
    match s.peek() {
        None | Some(b'\n') => {}
        Some(_) => return Err(header_error(s, "trailing data after clause count")),
    }
    Ok((vars as u32, clauses as usize))
}

/// Parses a DIMACS CNF formula.
///
/// Comments (`c` lines) may precede the header and appear between clauses. Several clauses may
/// share a line. Every literal must be within the declared variable count and the number of
/// clauses must match the header exactly.
pub fn parse_dimacs(input: &[u8]) -> Result<Formula, DimacsError> {
    let mut s = Scanner::new(input);
    let (declared_vars, declared_clauses) = parse_header(&mut s)?;
    let mut formula = Formula::new();
    formula.declared_vars = declared_vars;
    formula.declared_clauses = declared_clauses;

    loop {
        s.skip_blanks_and_comments();
        match s.peek() {
            None => break,
            Some(b'-' | b'0'..=b'9') => {}
            Some(b'p') => return Err(header_error(&s, "duplicate header")),
            Some(b) => {
                return Err(DimacsError {
                    line: s.line(),
                    offset: s.offset(),
                    kind: DimacsErrorKind::UnexpectedByte(b as char),
                })
            }
        }
        let (line, offset) = (s.line(), s.offset());
        let literals = s
            .read_clause(|lit, line, offset| {
                if lit.var() > declared_vars {
                    Err(DimacsError {
                        line,
                        offset,
                        kind: DimacsErrorKind::VarOutOfRange {
                            literal: lit,
                            declared: declared_vars,
                        },
                    })
                } else {
                    Ok(())
                }
            })
            .map_err(|e| match e {
                ClauseReadError::Lex(e) => e.into(),
                ClauseReadError::Reject(e) => e,
            })?;
        let clause = normalize_clause(&literals).map_err(|e| DimacsError {
            line,
            offset,
            kind: e.into(),
        })?;
        formula.add(clause);
    }

    if formula.len() != declared_clauses {
        return Err(DimacsError {
            line: s.line(),
            offset: s.offset(),
            kind: DimacsErrorKind::ClauseCountMismatch {
                declared: declared_clauses,
                found: formula.len(),
            },
        });
    }
    Ok(formula)
}

/// Writes `formula` in DIMACS format, one clause per line in textual order.
///
/// The header uses the declared variable count if it covers every literal, otherwise the
/// largest variable index.
pub fn write_dimacs(formula: &Formula) -> String {
    let vars = formula.declared_vars.max(formula.max_var());
    let mut out = format!("p cnf {} {}\n", vars, formula.len());
    for (_, clause) in formula.iter() {
        let _ = writeln!(out, "{clause}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Clause;

    pub(crate) const EXAMPLE: &str = "p cnf 4 8
 1  2 -3 0
-1 -2  3 0
 2  3 -4 0
-2 -3  4 0
-1 -3 -4 0
 1  3  4 0
-1  2  4 0
 1 -2 -4 0
";

    fn kind(input: &str) -> DimacsErrorKind {
        parse_dimacs(input.as_bytes()).unwrap_err().kind
    }

    fn clause(values: &[i64]) -> Clause {
        Clause::new(values.iter().map(|&v| Literal::new(v).unwrap()).collect()).unwrap()
    }

    #[test]
    fn parses_example() {
        let f = parse_dimacs(EXAMPLE.as_bytes()).unwrap();
        assert_eq!(f.len(), 8);
        assert_eq!(f.declared_vars, 4);
        assert_eq!(f.declared_clauses, 8);
        assert_eq!(f.count(&clause(&[-1, 2, 4])), 1);
    }

    #[test]
    fn empty_formula() {
        let f = parse_dimacs(b"p cnf 0 0").unwrap();
        assert!(f.is_empty());
        assert_eq!(f.declared_vars, 0);
    }

    #[test]
    fn comments_and_layout() {
        let input = "c leading\nc\np cnf 3 3\n1 -2 0 c trailing comment\n\
                     c between\n\t2\n3 0 -1 0\nc end";
        let f = parse_dimacs(input.as_bytes()).unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(f.count(&clause(&[2, 3])), 1);
        assert_eq!(f.count(&clause(&[-1])), 1);
    }

    #[test]
    fn duplicates_are_kept() {
        let f = parse_dimacs(b"p cnf 2 3\n1 2 0\n2 1 0\n-1 0\n").unwrap();
        assert_eq!(f.count(&clause(&[1, 2])), 2);
    }

    #[test]
    fn slack_in_var_count_is_fine() {
        assert!(parse_dimacs(b"p cnf 100 1\n1 0\n").is_ok());
    }

    #[test]
    fn final_clause_without_newline() {
        assert_eq!(parse_dimacs(b"p cnf 1 1\n-1 0").unwrap().len(), 1);
    }

    #[test]
    fn var_out_of_range() {
        let err = parse_dimacs(b"p cnf 2 1\n3 0\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert_eq!(err.offset, 10);
        assert!(matches!(
            err.kind,
            DimacsErrorKind::VarOutOfRange { declared: 2, .. }
        ));
    }

    #[test]
    fn clause_count_mismatch() {
        assert_eq!(
            kind("p cnf 2 2\n1 0\n"),
            DimacsErrorKind::ClauseCountMismatch {
                declared: 2,
                found: 1
            }
        );
        assert!(matches!(
            kind("p cnf 2 0\n1 0\n"),
            DimacsErrorKind::ClauseCountMismatch { .. }
        ));
    }

    #[test]
    fn header_errors() {
        assert_eq!(kind(""), DimacsErrorKind::HeaderMissing);
        assert_eq!(kind("c only\n"), DimacsErrorKind::HeaderMissing);
        assert_eq!(kind("1 2 0\n"), DimacsErrorKind::HeaderMissing);
        for bad in [
            "p cnf\n",
            "p dnf 1 1\n1 0\n",
            "p cnf x 1\n",
            "p cnf 1\n1 0\n",
            "p cnf 1 1 1\n1 0\n",
            "p cnf c 1 1\n1 0\n",
            "pcnf 1 1\n1 0\n",
            "p cnf 1 1\np cnf 1 1\n1 0\n",
        ] {
            assert!(
                matches!(kind(bad), DimacsErrorKind::HeaderMalformed(_)),
                "{bad:?}"
            );
        }
    }

    #[test]
    fn clause_errors() {
        assert_eq!(kind("p cnf 2 1\n1 2"), DimacsErrorKind::UnterminatedClause);
        assert!(matches!(
            kind("p cnf 2 1\n1 -1 0\n"),
            DimacsErrorKind::Clause(ClauseError::Tautology(_))
        ));
        assert!(matches!(
            kind("p cnf 2 1\n2 2 0\n"),
            DimacsErrorKind::Clause(ClauseError::DuplicateLiteral(_))
        ));
        assert_eq!(
            kind("p cnf 2 1\n4294967296 0\n"),
            DimacsErrorKind::LiteralOverflow
        );
        assert_eq!(
            kind("p cnf 2 1\n1 x 0\n"),
            DimacsErrorKind::UnexpectedByte('x')
        );
        // comments are only allowed between clauses
        assert_eq!(
            kind("p cnf 2 1\n1 c 2 0\n"),
            DimacsErrorKind::UnexpectedByte('c')
        );
    }

    #[test]
    fn writer_round_trip() {
        let f = parse_dimacs(EXAMPLE.as_bytes()).unwrap();
        let text = write_dimacs(&f);
        let g = parse_dimacs(text.as_bytes()).unwrap();
        assert!(f.same_multiset(&g));
        assert_eq!(g.declared_vars, 4);
    }
}
