use thiserror::Error;

/// Why a matrix was rejected as essentially Hermitian.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EssHermRejection {
    NonNormal,
    NotCollinear,
    Scalar,
}

impl std::fmt::Display for EssHermRejection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            EssHermRejection::NonNormal => "matrix is not normal",
            EssHermRejection::NotCollinear => "eigenvalues are not collinear",
            EssHermRejection::Scalar => "matrix is scalar",
        };
        f.write_str(s)
    }
}

/// Which argument of a binary operation failed a precondition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operand {
    First,
    Second,
}

impl std::fmt::Display for Operand {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Operand::First => f.write_str("first"),
            Operand::Second => f.write_str("second"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("Jacobi iteration did not converge within {rotations} rotations (off-diagonal mass {off_diagonal:.3e})")]
    NoConvergence { rotations: usize, off_diagonal: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("{0} argument is not a positive contraction")]
    NotPositiveContraction(Operand),

    #[error("{0} argument is not an orthogonal projection")]
    NotProjection(Operand),

    #[error("{0} argument is a scalar projection")]
    ScalarProjection(Operand),

    #[error("{0} argument is scalar")]
    ScalarInput(Operand),

    #[error("grid size {0} is too coarse (need at least 8 angles)")]
    GridTooCoarse(usize),

    #[error("grid sizes differ: {0} vs {1}")]
    GridMismatch(usize, usize),

    #[error("value {0} is outside the admissible range")]
    OutOfRange(f64),

    #[error("degenerate parameters: {0}")]
    DegenerateParameters(&'static str),

    #[error("empty primitive list")]
    EmptyInput,

    #[error("invalid canonical form: {0}")]
    InvalidForm(String),

    #[error("eigenvalue {0} of the product lies outside [0, 1]")]
    SpectrumOutOfRange(f64),

    #[error("not essentially Hermitian: {0}")]
    NotEssHerm(EssHermRejection),

    #[error("{0} argument does not have a two-point spectrum")]
    NotTwoPoint(Operand),

    #[error("division by zero: eigenvalue is zero but a1*a2*b1*b2 is not")]
    DivisionByZero,

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by malformed input text rather than numerics.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse { .. } | Error::UnknownSuite(_))
    }
}

impl Error {
    /// Process exit status for the command-line front end: 2 for unusable input, 3 for
    /// numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. }
            | Error::UnknownSuite(_)
            | Error::Io(_)
            | Error::InvalidForm(_)
            | Error::GridTooCoarse(_)
            | Error::GridMismatch(..)
            | Error::DimensionMismatch { .. }
            | Error::NotHermitian { .. }
            | Error::NotPositiveContraction(_)
            | Error::NotProjection(_)
            | Error::ScalarProjection(_)
            | Error::ScalarInput(_)
            | Error::NotEssHerm(_)
            | Error::NotTwoPoint(_)
            | Error::DegenerateParameters(_)
            | Error::OutOfRange(_)
            | Error::EmptyInput => 2,
            Error::NoConvergence { .. }
            | Error::NotPsd { .. }
            | Error::SpectrumOutOfRange(_)
            | Error::DivisionByZero
            | Error::Consistency(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
