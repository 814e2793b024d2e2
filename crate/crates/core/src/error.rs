use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("eta factor offset d*r = {0} is not divisible by 24")]
    NonIntegralOffset(i64),
    #[error("eta recipe has negative leading exponent {0}")]
    NegativeOffset(i64),
    #[error("coefficient index {index} exceeds series precision {prec}")]
    PrecisionExceeded { index: u64, prec: u64 },
    #[error("level {0} is not divisible by 4")]
    InvalidLevel(u64),
    #[error("weight parameter k = {0} must be at least 2")]
    InvalidWeight(u32),
    #[error("parse error: {0}")]
    ParseError(String),
    #[error("constant coefficient a(0) = {0} is nonzero; not a cusp form")]
    NonCuspidal(String),
    #[error("bad character table: {0}")]
    BadCharacter(String),
    #[error("{0} is not squarefree")]
    NotSquarefree(u64),
    #[error("base coefficient a({0}) is zero")]
    ZeroBase(u64),
    #[error("{0} and {1} are not coprime")]
    NotCoprime(u64, u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("integral-weight coefficient at index {0} is not available")]
    MissingCoefficient(u64),
    #[error("denominator vanishes at X = 0; not expandable as a power series")]
    NotExpandable,
    #[error("zero polynomial has no well-defined root count")]
    ZeroPolynomial,
    #[error("p = q = {0}")]
    SamePrime(u64),
    #[error("{h} is not in the subgroup generated by {p} modulo {q}")]
    NotInSubgroup { p: u64, h: u64, q: u64 },
    #[error("residue {h} out of range; require 1 < h < {q}")]
    OutOfRange { h: u64, q: u64 },
    #[error("sequence of length {len} is too short; need at least {needed} terms")]
    LengthMismatch { len: usize, needed: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("i/o error on {path}: {message}")]
    Io { path: PathBuf, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
