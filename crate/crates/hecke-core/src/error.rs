use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("elements belong to different algebras")]
    ContextMismatch,
    #[error("index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid composition: {0}")]
    InvalidComposition(String),
    #[error("invalid interval: {0}")]
    InvalidInterval(String),
    #[error("margins do not match: {0}")]
    MarginMismatch(String),
    #[error("permutation is not a distinguished double-coset representative")]
    NotDistinguished,
    #[error("field construction failed: {0}")]
    FieldConstruction(String),
    #[error("division by zero scalar")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("element does not lie in the spanned subspace")]
    NotInSpan,
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("size overflow: {0}")]
    SizeOverflow(String),
    #[error("matrix is not nilpotent within the expected bound")]
    NotNilpotent,
    #[error("subspace is not invariant under the action")]
    NotInvariant,
    #[error("module/algebra mismatch: {0}")]
    AlgebraMismatch(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
