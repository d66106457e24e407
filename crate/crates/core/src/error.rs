use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("expected a univariate polynomial, got variables {0:?}")]
    NotUnivariate(Vec<String>),
    #[error("expected a polynomial in exactly two variables, got {0:?}")]
    WrongArity(Vec<String>),
    #[error("edge {0} is not an edge of the Newton polygon")]
    EdgeNotOnPolygon(String),
    #[error("degree {degree} exceeds the factorization cap of {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid two-bridge code ({p}, {q}): {reason}")]
    InvalidCode { p: u32, q: u32, reason: String },
    #[error("inconsistent representation family: {0}")]
    InconsistentFamily(String),
    #[error("elimination collapsed: {0}")]
    EliminationCollapse(String),
    #[error("no factor of the eliminant passes through the basepoint (residual {residual:.3e})")]
    NoGeometricFactor { residual: f64 },
    #[error("no hyperbolic solution: {0}")]
    NoHyperbolicSolution(String),
    #[error("invalid slice: {0}")]
    InvalidSlice(String),

    #[error("non-commuting matrices")]
    NonCommuting,
    #[error("matrix is not in SL2: {0}")]
    NotSpecialLinear(String),
    #[error("star product not handled over this field: {0}")]
    NotHandled(String),
    #[error("tame symbol is indeterminate at this place: {0}")]
    Indeterminate(String),
    #[error("curve is not tempered: {0}")]
    Untempered(String),

    #[error("path passes too close to a branch point at t = {t:.6} (scaled |dA/dl| = {jacobian:.3e})")]
    BranchPoint { t: f64, jacobian: f64 },
    #[error("path leaves the torus at t = {t:.6} (|l| = {l_abs:.3e}, |m| = {m_abs:.3e})")]
    DivisorCollision { t: f64, l_abs: f64, m_abs: f64 },
    #[error("continuation failed at t = {t:.6}: {reason}")]
    TrackingFailure { t: f64, reason: String },
    #[error("insufficient samples: extrapolation error estimate {estimate:.3e} exceeds {limit:.1e}")]
    InsufficientSamples { estimate: f64, limit: f64 },
    #[error("path is not closed: {0}")]
    OpenPath(String),
    #[error("rational reconstruction failed: value {value}, best {p}/{q}, residual {residual:.3e}")]
    ReconstructionFailure { value: f64, p: i64, q: i64, residual: f64 },
    #[error("invalid path specification: {0}")]
    InvalidPath(String),

    #[error("gluing equations diverged: {0}")]
    GluingDivergence(String),
    #[error("singular input to the Bloch-Wigner function at {0}")]
    SingularInput(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable class name, used by the command-line front end.
    pub fn class(&self) -> &'static str {
        match self {
            Error::DegenerateInput(_) => "degenerate-input",
            Error::NotUnivariate(_) => "non-univariate",
            Error::WrongArity(_) => "wrong-arity",
            Error::EdgeNotOnPolygon(_) => "edge-not-on-polygon",
            Error::DegreeCap { .. } => "degree-cap",
            Error::Parse(_) => "parse",
            Error::InvalidCode { .. } => "invalid-code",
            Error::InconsistentFamily(_) => "inconsistent-family",
            Error::EliminationCollapse(_) => "elimination-collapse",
            Error::NoGeometricFactor { .. } => "no-geometric-factor",
            Error::NoHyperbolicSolution(_) => "no-hyperbolic-solution",
            Error::InvalidSlice(_) => "invalid-slice",
            Error::NonCommuting => "non-commuting",
            Error::NotSpecialLinear(_) => "not-special-linear",
            Error::NotHandled(_) => "not-handled",
            Error::Indeterminate(_) => "indeterminate",
            Error::Untempered(_) => "untempered",
            Error::BranchPoint { .. } => "branch-point",
            Error::DivisorCollision { .. } => "divisor-collision",
            Error::TrackingFailure { .. } => "tracking-failure",
            Error::InsufficientSamples { .. } => "insufficient-samples",
            Error::OpenPath(_) => "open-path",
            Error::ReconstructionFailure { .. } => "reconstruction-failure",
            Error::InvalidPath(_) => "invalid-path",
            Error::GluingDivergence(_) => "gluing-divergence",
            Error::SingularInput(_) => "singular-input",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
