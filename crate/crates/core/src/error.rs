use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid bit string {text:?}: unexpected character at position {position}")]
    BadBitString { text: String, position: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("selected rows do not form an ordered basis of the row space")]
    NotABasis,

    #[error("code rank {rank} exceeds the enumeration limit of {limit}")]
    RankTooLarge { rank: usize, limit: usize },

    #[error("projection direction must be nonzero")]
    ZeroDirection,

    #[error("{rows} rows exceed the subset-enumeration limit of {limit}")]
    TooManyRows { rows: usize, limit: usize },

    #[error("deletion-contraction memo table exceeded {limit} entries")]
    BudgetExceeded { limit: usize },

    #[error("{bits} output bits exceed the dense distribution limit of {limit}")]
    DomainTooLarge { bits: usize, limit: usize },

    #[error("angle {0} is not a dyadic multiple of pi")]
    UnsupportedAngle(String),

    #[error("matrix is not idempotent")]
    NotIdempotent,

    #[error("projector range dimension {dim} exceeds the limit of {limit}")]
    RangeTooLarge { dim: usize, limit: usize },

    #[error("column {column} has {weight} ones, above the bound {bound}")]
    ColumnBoundViolated { column: usize, weight: usize, bound: usize },

    #[error("row {row} has {weight} ones; at most 2 are allowed")]
    RowWeightViolated { row: usize, weight: usize },

    #[error("projector is supported on {bits} bits, above the limit of {limit}")]
    SupportTooLarge { bits: usize, limit: usize },

    #[error("{qubits} qubits exceed the statevector limit of {limit}")]
    TooManyQubits { qubits: usize, limit: usize },

    #[error("numerical inconsistency: {0}")]
    NumericalInconsistency(String),
}

impl Error {
    /// Whether the error reports a size budget rather than malformed input.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::RankTooLarge { .. }
                | Error::TooManyRows { .. }
                | Error::BudgetExceeded { .. }
                | Error::DomainTooLarge { .. }
                | Error::RangeTooLarge { .. }
                | Error::SupportTooLarge { .. }
                | Error::TooManyQubits { .. }
        )
    }
}
