use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("entry buffer has length {actual}, expected {expected}")]
    BadEntryCount { expected: usize, actual: usize },

    #[error("matrix is not hermitian: max |M - M^dag| = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("operator is not positive semidefinite: minimum eigenvalue {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },

    #[error("{context}: marginal on side {side} is not a density matrix ({reason})")]
    InvalidMarginal {
        context: &'static str,
        side: char,
        reason: &'static str,
    },

    #[error("entry {index} is {value}, expected strictly positive")]
    NonPositiveEntry { index: usize, value: f64 },

    #[error("weights do not form a probability distribution (sum {sum}, min {min})")]
    InvalidWeights { sum: f64, min: f64 },

    #[error("state is not faithful: rank {rank} < dimension {dim}")]
    NotFaithful { rank: usize, dim: usize },

    #[error("linear system is singular")]
    Singular,

    #[error("empty operator list")]
    Empty,

    #[error("requested rank {rank} is outside 1..={dim}")]
    InvalidRank { rank: usize, dim: usize },

    #[error("dimension {dim} is not 2^{qubits}")]
    NotQubits { dim: usize, qubits: usize },

    #[error("correlation table is incomplete: missing entry ({alpha}, {beta})")]
    IncompleteTable { alpha: usize, beta: usize },

    #[error("correlation table entry ({alpha}, {beta}) = {value} is out of range")]
    InvalidTableEntry {
        alpha: usize,
        beta: usize,
        value: f64,
    },

    #[error("Pauli index {0} is outside 0..=3")]
    InvalidPauliIndex(u8),

    #[error("expectation value has imaginary residue {residue:e}")]
    ImaginaryResidue { residue: f64 },

    #[error("states {first} and {second} are not orthogonal (overlap {overlap:e})")]
    NotOrthogonal {
        first: usize,
        second: usize,
        overlap: f64,
    },

    #[error(
        "inconsistent verdicts on side {side}: test minimum eigenvalue {test_min:e}, \
         Choi minimum eigenvalue {choi_min:e}"
    )]
    InconsistentVerdict {
        side: char,
        test_min: f64,
        choi_min: f64,
    },

    #[error(
        "state is PPT but side {side} is reported incompatible \
         (test minimum eigenvalue {test_min:e})"
    )]
    PptNotCompatible { side: char, test_min: f64 },

    #[error("assignment never selects ensemble index {0}")]
    NonSurjective(usize),
}
