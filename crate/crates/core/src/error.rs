use thiserror::Error;

use crate::catalog::TypeSymbol;

/// Errors raised by the symbolic engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characters belong to different declaration contexts")]
    ContextMismatch,

    #[error("unknown name `{0}`")]
    UnknownName(String),

    #[error("invalid declaration: {0}")]
    InvalidDeclaration(String),

    #[error("nu exponent {0} is not a half-integer (context does not allow arbitrary rationals)")]
    NuExponent(String),

    #[error("character `{0}` is ramified and has no Satake parameter")]
    Ramified(String),

    #[error("euler factor is not a divisor of the dividend")]
    NotDivisor,

    #[error("unit `{0}` has no numeric binding")]
    UnboundUnit(String),

    #[error("residue cardinality must be > 1, got {0}")]
    InvalidQ(String),

    #[error("{0} is reducible")]
    Reducible(String),

    #[error("invalid {ty} parameters: {reason}")]
    InvalidParameters { ty: TypeSymbol, reason: String },

    #[error("central character required for {0}")]
    CentralCharacterUndeclared(String),

    #[error("undeclared flag `{flag}` for cuspidal `{name}`")]
    UndeclaredFlag { name: String, flag: String },

    #[error("dihedral parameters of `{0}` are undeclared")]
    DihedralUndeclared(String),

    #[error("{ty} has no anisotropic Bessel model for the given lambda")]
    NoAnisotropicModel { ty: TypeSymbol },

    #[error("{0} has no Bessel model")]
    NoBesselModel(TypeSymbol),

    #[error("exceptional factor of {0} is only available for trivial mu; use the spinor factor")]
    MuUnsupported(TypeSymbol),

    #[error("central characters differ: {0} vs {1}")]
    CentralCharacterMismatch(String, String),

    #[error("representation must be generic: {0}")]
    NonGeneric(String),

    #[error("representation must have trivial central character: {0}")]
    NontrivialCentralCharacter(String),

    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T> = std::result::Result<T, Error>;

/// A parse failure with the byte offset into the source text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at byte {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("expected {expected}, found `{found}`")]
    Expected { expected: String, found: String },
    #[error("malformed rational `{0}`")]
    MalformedRational(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("ambiguous shape, candidates: {}", .0.join(", "))]
    Ambiguous(Vec<String>),
    #[error("no catalog row matches: {0}")]
    NoMatch(String),
    #[error("{0}")]
    Invalid(String),
}

impl ParseError {
    pub fn new(offset: usize, kind: ParseErrorKind) -> Self {
        ParseError { offset, kind }
    }
}
