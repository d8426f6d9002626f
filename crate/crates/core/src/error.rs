use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Domain errors. The variant name is part of the CLI contract: it is printed
/// verbatim in front of every reported failure.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),
    #[error("Cartan matrix is not of finite type: {0}")]
    NotFiniteType(String),
    #[error("unknown Cartan type label `{0}`")]
    UnknownType(String),
    #[error("vector {0:?} is not a root")]
    NotARoot(Vec<i64>),
    #[error("expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("simple reflection index {index} out of range 1..={rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("operands belong to different root systems")]
    MixedRootSystems,
    #[error("Weyl group exceeds the enumeration bound of {bound} elements")]
    GroupTooLarge { bound: usize },
    #[error("cannot parse Weyl element `{0}`")]
    BadWord(String),
    #[error("cannot parse weight `{0}`")]
    BadWeight(String),
    #[error("weight {0} is not antidominant")]
    NotAntidominant(String),
    #[error("weight {0} does not lie in this block")]
    NotInBlock(String),
    #[error("decomposition matrix requires a regular integral block of rank <= 2; supply a matrix file")]
    NeedsUserMatrix,
    #[error("invalid decomposition matrix: {0}")]
    InvalidDecompositionMatrix(String),
    #[error("composition factor {param} has multiplicity {multiplicity}")]
    NotMultiplicityFree { param: String, multiplicity: i64 },
    #[error("layer extraction is only defined for regular integral blocks")]
    SingularBlock,
    #[error("sum formula vector is inconsistent with the composition factors: {0}")]
    InconsistentSumFormula(String),
    #[error("lambda = {0} is not a natural number")]
    NotNatural(String),
    #[error("truncation {trunc} is too small, need at least {needed}")]
    TruncationTooSmall { trunc: usize, needed: usize },
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    /// Variant name, as surfaced by the command-line front end.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidCartan(_) => "InvalidCartan",
            Error::NotFiniteType(_) => "NotFiniteType",
            Error::UnknownType(_) => "UnknownType",
            Error::NotARoot(_) => "NotARoot",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::MixedRootSystems => "MixedRootSystems",
            Error::GroupTooLarge { .. } => "GroupTooLarge",
            Error::BadWord(_) => "BadWord",
            Error::BadWeight(_) => "BadWeight",
            Error::NotAntidominant(_) => "NotAntidominant",
            Error::NotInBlock(_) => "NotInBlock",
            Error::NeedsUserMatrix => "NeedsUserMatrix",
            Error::InvalidDecompositionMatrix(_) => "InvalidDecompositionMatrix",
            Error::NotMultiplicityFree { .. } => "NotMultiplicityFree",
            Error::SingularBlock => "SingularBlock",
            Error::InconsistentSumFormula(_) => "InconsistentSumFormula",
            Error::NotNatural(_) => "NotNatural",
            Error::TruncationTooSmall { .. } => "TruncationTooSmall",
            Error::Internal(_) => "Internal",
        }
    }
}
