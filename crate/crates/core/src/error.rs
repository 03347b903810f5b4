use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        message: String,
        line: usize,
        column: usize,
    },
    #[error("invalid action spec: {0}")]
    InvalidSpec(String),
    #[error("finite generator {index} is not orthogonal")]
    NonOrthogonalGenerator { index: usize },
    #[error("finite group closure exceeds the cap of {cap} elements")]
    InfiniteFiniteGroup { cap: usize },
    #[error("finite generator {index} does not commute with the torus rotations")]
    IncompatibleBlocks { index: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(
        "stabilizer of {point} is not a product subgroup (twisted by finite element {element})"
    )]
    NonProductStabilizer { point: String, element: usize },
    #[error("numerically ambiguous stabilizer equation at {point}: {detail}")]
    NumericalAmbiguity { point: String, detail: String },
    #[error("angle cannot be represented exactly in rational arithmetic")]
    InexactAngle,
    #[error("witness search for candidate {candidate} exhausted {retries} retries")]
    WitnessSearchFailed { candidate: String, retries: usize },
    #[error("strata of class {class} have inconsistent dimensions ({first} vs {second})")]
    InconsistentStratumDimension {
        class: String,
        first: usize,
        second: usize,
    },
    #[error("isotropy lattice has no unique minimal class (minima: {0:?})")]
    NoUniqueMinimum(Vec<String>),
    #[error("unknown isotropy class {0}")]
    ClassNotFound(String),
    #[error("coisotropy identity violated for piece {piece}: rank {rank} != 2*{dim_w} - {dim_v}")]
    CoisotropyIdentityViolation {
        piece: String,
        rank: i64,
        dim_w: i64,
        dim_v: i64,
    },
    #[error("budget must be at least 1")]
    InvalidBudget,
    #[error("point is not on the zero momentum level (|J| = {0:e})")]
    NotOnZeroLevel(f64),
    #[error("spec carries no Hilbert-cone region fixture")]
    NotExampleSpec,
    #[error("invariant {name} is not preserved by the group action")]
    NonInvariantPolynomial { name: String },
    #[error("unknown invariant {0} referenced")]
    UnknownInvariant(String),
}
