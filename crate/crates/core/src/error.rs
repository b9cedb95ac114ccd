use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{e} exceeds the configured limit {limit}")]
    FieldTooLarge { p: u32, e: u32, limit: u64 },
    #[error("inversion of zero")]
    DivisionByZero,
    #[error("element {value} is not in GF({q})")]
    InvalidElement { value: u32, q: u32 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("lattice would need {needed} subspaces, limit is {limit}")]
    LatticeTooLarge { needed: u128, limit: u64 },
    #[error("pair scan over {members} subspaces exceeds the limit of {limit} members")]
    PairScanTooLarge { members: usize, limit: usize },
    #[error("subspace is not a member of this lattice")]
    NotInLattice,
    #[error("empty structure (rank 0) has no weights")]
    EmptyStructure,
    #[error("weight d_{r} is undefined: no subspace reaches conullity {r}")]
    WeightsUndefined { r: usize },
    #[error("empty code has no weights")]
    EmptyCode,
    #[error("generators are linearly dependent")]
    DependentGenerators,
    #[error("flag nesting violated: code {index} is not contained in code {prev}", prev = index - 1)]
    NestingViolation { index: usize },
    #[error("flag is not strictly decreasing at position {index}")]
    NotStrict { index: usize },
    #[error("even-length flag already ends in the zero code")]
    EvenFlagEndsInZero,
    #[error("codes must be square (m = n), got {m}x{n}")]
    NotSquare { m: usize, n: usize },
    #[error("weights sum to {got}, expected m = {expected}")]
    WeightSumMismatch { expected: usize, got: usize },
    #[error("codeword enumeration needs {needed} words, limit is {limit}")]
    CodewordGuard { needed: u128, limit: u64 },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
}
