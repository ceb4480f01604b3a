//! Plain and binary DRAT proof encodings.
//!
//! The binary encoding maps each literal to an unsigned code (`2v` for `v`, `2v + 1` for `-v`)
//! and writes it as a little-endian base-128 varint. A record is a prefix byte (`a` = 0x61 for
//! additions, `d` = 0x64 for deletions), the literal codes, and a terminating 0x00.

use std::fmt::{self, Write as _};
use std::io::{self, Write};

use thiserror::Error;

use crate::model::{normalize_clause, ClauseError, Literal, Proof, ProofStep, StepKind};
use crate::text::{is_blank, ClauseReadError, LexError, LexErrorKind, Scanner};

const ADD_PREFIX: u8 = b'a';
const DELETE_PREFIX: u8 = b'd';

/// Largest number of bytes a literal code may occupy.
const MAX_VARINT_LEN: usize = 5;

/// Binary DRAT literal code. Always at least 2.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct LitCode(u32);

impl LitCode {
    pub fn new(code: u32) -> Result<LitCode, ProofErrorKind> {
        if code < 2 {
            Err(ProofErrorKind::InvalidCode(code))
        } else {
            Ok(LitCode(code))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl fmt::Display for LitCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ProofEncoding {
    Plain,
    Binary,
}

impl fmt::Display for ProofEncoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProofEncoding::Plain => "plain",
            ProofEncoding::Binary => "binary",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProofErrorKind {
    #[error("end of input inside a clause (missing terminating 0)")]
    UnterminatedClause,
    #[error("\"d\" must be followed by a blank")]
    MalformedDeletePrefix,
    #[error("numeral exceeds the maximum variable index")]
    LiteralOverflow,
    #[error("unexpected byte {0:?}")]
    UnexpectedByte(char),
    #[error("record starts with byte 0x{0:02x}, expected 0x61 ('a') or 0x64 ('d')")]
    BadPrefix(u8),
    #[error("end of input before the record terminator 0x00")]
    TruncatedRecord,
    #[error("end of input inside a variable-byte number")]
    TruncatedVarint,
    #[error("variable-byte number exceeds 32 bits")]
    VarintOverflow,
    #[error("{0} is not a valid literal code")]
    InvalidCode(u32),
    #[error(transparent)]
    Clause(#[from] ClauseError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub struct ProofError {
    /// One-based line number; only known for plain proofs.
    pub line: Option<usize>,
    /// Byte offset into the input.
    pub offset: usize,
    pub kind: ProofErrorKind,
}

impl fmt::Display for ProofError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}, byte {}: {}", self.offset, self.kind),
            None => write!(f, "byte {}: {}", self.offset, self.kind),
        }
    }
}

impl From<LexError> for ProofError {
    fn from(e: LexError) -> ProofError {
        let kind = match e.kind {
            LexErrorKind::UnexpectedByte(b) => ProofErrorKind::UnexpectedByte(b as char),
            LexErrorKind::UnexpectedEof | LexErrorKind::UnterminatedClause => {
                ProofErrorKind::UnterminatedClause
            }
            LexErrorKind::LiteralOverflow => ProofErrorKind::LiteralOverflow,
        };
        ProofError {
            line: Some(e.line),
            offset: e.offset,
            kind,
        }
    }
}

/// Maps a literal to its binary code.
pub fn map_literal(lit: Literal) -> LitCode {
    // |lit| <= 2^31 - 1, so the code is at most 2^32 - 1
    LitCode(lit.index() as u32)
}

/// Inverse of [`map_literal`].
pub fn unmap_literal(code: LitCode) -> Literal {
    let var = code.0 >> 1;
    Literal::from_var(var, code.0 & 1 == 0)
}

/// Appends the variable-byte encoding of `x` to `out`.
pub fn encode_varint(mut x: u32, out: &mut Vec<u8>) {
    while x >= 0x80 {
        out.push((x as u8) | 0x80);
        x >>= 7;
    }
    out.push(x as u8);
}

/// Decodes a variable-byte number from the start of `bytes`.
///
/// Returns the value and the number of bytes consumed. Non-minimal encodings are accepted.
pub fn decode_varint(bytes: &[u8]) -> Result<(u32, usize), ProofErrorKind> {
    let mut value: u64 = 0;
    for (i, &b) in bytes.iter().enumerate() {
        if i == MAX_VARINT_LEN {
            return Err(ProofErrorKind::VarintOverflow);
        }
        value |= u64::from(b & 0x7f) << (7 * i);
        if b & 0x80 == 0 {
            return u32::try_from(value)
                .map(|v| (v, i + 1))
                .map_err(|_| ProofErrorKind::VarintOverflow);
        }
    }
    if bytes.len() >= MAX_VARINT_LEN {
        Err(ProofErrorKind::VarintOverflow)
    } else {
        Err(ProofErrorKind::TruncatedVarint)
    }
}

/// Parses a plain-text DRAT proof.
///
/// Steps after the first addition of the empty clause are parsed like any other step; see
/// [`Proof::is_ignorable`].
pub fn parse_plain_proof(input: &[u8]) -> Result<Proof, ProofError> {
    let mut s = Scanner::new(input);
    let mut steps = Vec::new();
    loop {
        s.skip_blanks_and_comments();
        let kind = match s.peek() {
            None => break,
            Some(b'd') => {
                if !s.peek_at(1).is_some_and(is_blank) {
                    return Err(ProofError {
                        line: Some(s.line()),
                        offset: s.offset(),
                        kind: ProofErrorKind::MalformedDeletePrefix,
                    });
                }
                s.bump();
                StepKind::Delete
            }
            Some(b'-' | b'0'..=b'9') => StepKind::Add,
            Some(b) => {
                return Err(ProofError {
                    line: Some(s.line()),
                    offset: s.offset(),
                    kind: ProofErrorKind::UnexpectedByte(b as char),
                })
            }
        };
        let (line, offset) = (s.line(), s.offset());
        let literals = s
            .read_clause(|_, _, _| Ok::<(), ProofError>(()))
            .map_err(|e| match e {
                ClauseReadError::Lex(e) => ProofError::from(e),
                ClauseReadError::Reject(e) => e,
            })?;
        let clause = normalize_clause(&literals).map_err(|e| ProofError {
            line: Some(line),
            offset,
            kind: e.into(),
        })?;
        steps.push(ProofStep { kind, clause });
    }
    Ok(Proof::new(steps))
}

/// Parses a binary DRAT proof.
pub fn parse_binary_proof(input: &[u8]) -> Result<Proof, ProofError> {
    let mut pos = 0;
    let mut steps = Vec::new();
    let err = |offset, kind| ProofError {
        line: None,
        offset,
        kind,
    };
    while pos < input.len() {
        let record_start = pos;
        let kind = match input[pos] {
            ADD_PREFIX => StepKind::Add,
            DELETE_PREFIX => StepKind::Delete,
            b => return Err(err(pos, ProofErrorKind::BadPrefix(b))),
        };
        pos += 1;
        let mut literals = Vec::new();
        loop {
            if pos == input.len() {
                return Err(err(pos, ProofErrorKind::TruncatedRecord));
            }
            let (code, used) = decode_varint(&input[pos..]).map_err(|k| err(pos, k))?;
            if code == 0 {
                pos += used;
                break;
            }
            let code = LitCode::new(code).map_err(|k| err(pos, k))?;
            literals.push(unmap_literal(code));
            pos += used;
        }
        let clause = normalize_clause(&literals).map_err(|e| err(record_start, e.into()))?;
        steps.push(ProofStep { kind, clause });
    }
    Ok(Proof::new(steps))
}

/// Writes `proof` as plain DRAT: one step per line, single spaces, `d ` for deletions.
pub fn write_plain(proof: &Proof, out: &mut impl Write) -> io::Result<()> {
    let mut line = String::new();
    for step in &proof.steps {
        line.clear();
        if step.kind == StepKind::Delete {
            line.push_str("d ");
        }
        for lit in step.clause.original() {
            let _ = write!(line, "{lit} ");
        }
        line.push_str("0\n");
        out.write_all(line.as_bytes())?;
    }
    Ok(())
}

/// Writes `proof` as binary DRAT.
pub fn write_binary(proof: &Proof, out: &mut impl Write) -> io::Result<()> {
    let mut record = Vec::new();
    for step in &proof.steps {
        record.clear();
        record.push(match step.kind {
            StepKind::Add => ADD_PREFIX,
            StepKind::Delete => DELETE_PREFIX,
        });
        for &lit in step.clause.original() {
            encode_varint(map_literal(lit).get(), &mut record);
        }
        record.push(0);
        out.write_all(&record)?;
    }
    Ok(())
}

pub fn serialize_plain(proof: &Proof) -> Vec<u8> {
    let mut out = Vec::new();
    write_plain(proof, &mut out).expect("writing to a Vec cannot fail");
    out
}

pub fn serialize_binary(proof: &Proof) -> Vec<u8> {
    let mut out = Vec::new();
    write_binary(proof, &mut out).expect("writing to a Vec cannot fail");
    out
}

/// Guesses the encoding of a proof file.
///
/// Binary requires the first non-whitespace byte to be `a` or `d` and at least one byte
/// that cannot occur in a plain proof (anything outside printable ASCII, space, tab, CR and LF).
pub fn detect_encoding(input: &[u8]) -> ProofEncoding {
    let first = input.iter().copied().find(|&b| !is_blank(b));
    let starts_like_binary = matches!(first, Some(ADD_PREFIX | DELETE_PREFIX));
    let has_binary_bytes = input
        .iter()
        .any(|&b| !(b == b'\t' || b == b'\n' || b == b'\r' || (0x20..=0x7e).contains(&b)));
    if starts_like_binary && has_binary_bytes {
        ProofEncoding::Binary
    } else {
        ProofEncoding::Plain
    }
}

pub fn parse_proof(input: &[u8], encoding: ProofEncoding) -> Result<Proof, ProofError> {
    match encoding {
        ProofEncoding::Plain => parse_plain_proof(input),
        ProofEncoding::Binary => parse_binary_proof(input),
    }
}

pub fn serialize_proof(proof: &Proof, encoding: ProofEncoding) -> Vec<u8> {
    match encoding {
        ProofEncoding::Plain => serialize_plain(proof),
        ProofEncoding::Binary => serialize_binary(proof),
    }
}
