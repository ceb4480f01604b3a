//! Forward checking of DRAT unsatisfiability proofs against DIMACS CNF formulas, and lossless
//! conversion between the plain and binary DRAT encodings.
//!
//! ```
//! use drat_core::{check_proof, parse_dimacs, parse_plain_proof};
//!
//! let formula = parse_dimacs(b"p cnf 1 2\n1 0\n-1 0\n").unwrap();
//! let proof = parse_plain_proof(b"0\n").unwrap();
//! assert!(check_proof(formula, &proof).is_verified());
//! ```

pub mod checker;
pub mod cli;
pub mod dimacs;
pub mod model;
pub mod oracle;
pub mod proof_io;
mod text;

pub use checker::{
    check_at, check_proof, check_proof_with, check_rat, propagate, CheckOptions, Checker,
};
pub use dimacs::{parse_dimacs, write_dimacs, DimacsError, DimacsErrorKind};
pub use model::{
    normalize_clause, CheckReport, Clause, ClauseError, Formula, Literal, Proof, ProofStep,
    SourceClause, StepKind, Verdict, Warning, WarningKind,
};
pub use proof_io::{
    decode_varint, detect_encoding, encode_varint, map_literal, parse_binary_proof,
    parse_plain_proof, serialize_binary, serialize_plain, unmap_literal, ProofEncoding, ProofError,
    ProofErrorKind,
};
