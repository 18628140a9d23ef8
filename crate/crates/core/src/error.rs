use crate::exactla::ParseScalarError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("basis index {0} is not part of the algebra")]
    UnknownIndex(u32),
    #[error("basis index {0} appears more than once")]
    DuplicateIndex(u32),
    #[error("basis element {index} has degree {degree} above the truncation {truncation}")]
    DegreeAboveTruncation {
        index: u32,
        degree: u32,
        truncation: u32,
    },
    #[error("invalid truncation: {0}")]
    InvalidTruncation(String),
    #[error("algebra {name:?} is not pro-nilpotent at truncation {truncation}: the lower central series stabilizes at a nonzero term")]
    NotProNilpotent { name: String, truncation: u32 },
    #[error("algebra {name:?} has degree-0 elements; this operation needs a positively graded algebra")]
    DegreeZeroPresent { name: String },
    #[error("basis is not adapted to the lower central series: term {term} is not spanned by a suffix of the basis")]
    NotAdapted { term: usize },
    #[error("algebra {name:?} is not graded ({violations} grading violations); weight-sliced computations need a graded table")]
    NotGraded { name: String, violations: usize },
    #[error("the truncations do not agree: {0}")]
    IncoherentTower(String),
    #[error("margin {margin} is smaller than the period {period}")]
    MarginTooSmall { margin: u32, period: u32 },
    #[error("Jacobi identity fails on ({}, {}, {})", .triple.0, .triple.1, .triple.2)]
    JacobiFailure { triple: (u32, u32, u32) },
    #[error("operator {position} is not a derivation: Leibniz fails on ({}, {})", .pair.0, .pair.1)]
    NotADerivation { position: usize, pair: (u32, u32) },
    #[error("bracket between extension generators {0} and {1} is not antisymmetric")]
    NonAntisymmetricBracket(usize, usize),
    #[error("weight-0 derivations do not act diagonally on the graded basis; the nil-independence count is undefined under the current method")]
    NonDiagonalWeightZero,
    #[error("weight 0 is not stable in this window")]
    UnstableWeightZero,
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
    #[error("fixture {fixture} needs truncation at least {min}, got {given}")]
    TruncationTooSmall { fixture: String, min: u32, given: u32 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("triple ({}, {}, {}) is outside the weight-{weight} window", .triple.0, .triple.1, .triple.2)]
    OutOfWindow { triple: (u32, u32, u32), weight: i64 },
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Scalar(#[from] ParseScalarError),
}
