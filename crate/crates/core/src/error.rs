use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("range [{lo}, {hi}] exceeds the configured cap {cap}")]
    RangeTooLarge { lo: u64, hi: u64, cap: u64 },

    #[error("invalid range [{lo}, {hi}]: need 1 <= lo <= hi")]
    InvalidRange { lo: u64, hi: u64 },

    #[error("table covers [{have_lo}, {have_hi}] but [{need_lo}, {need_hi}] is required")]
    TableGap {
        have_lo: u64,
        have_hi: u64,
        need_lo: u64,
        need_hi: u64,
    },

    #[error("realization floor exceeds 2^256")]
    FloorTooLarge,

    #[error("{0} is a perfect square; sqrt({0}) is rational")]
    SquareRadicand(u64),

    #[error("alpha must come from an irrational source")]
    RationalAlpha,

    #[error("epsilon' must lie in (0, 1/12], got {0}")]
    InvalidEpsilon(String),

    #[error("no integer y in [{lo}, {hi}] for convergent denominator {s}")]
    EmptyWindow { s: String, lo: String, hi: String },

    #[error("Q = {q} is below {c} * s = {min}")]
    QTooSmall { q: u64, c: u64, min: u64 },

    #[error("window length y = {y} exceeds x = {x}")]
    YExceedsX { y: u64, x: u64 },

    #[error("denominator q = {q} exceeds x = {x}")]
    QExceedsX { q: u64, x: u64 },

    #[error("Q = {q} exceeds sqrt(x) for x = {x}")]
    QExceedsSqrtX { q: u64, x: u64 },

    #[error("modulus q = {q} exceeds the cap {cap}")]
    QTooLarge { q: u64, cap: u64 },

    #[error("gcd({a}, {q}) != 1")]
    NotCoprime { a: i64, q: u64 },

    #[error("frequencies are not {delta}-separated (minimum distance {found})")]
    SeparationViolated { delta: f64, found: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
