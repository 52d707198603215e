use thiserror::Error;

/// Every failure mode of the library. Validation-type errors map to exit
/// code 2 in the command line front end, convergence failures to 3.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point ({0}, {1}) is not in the open domain")]
    PointOutsideDomain(f64, f64),
    #[error("boundary has fewer than two distinct points")]
    DegenerateBoundary,
    #[error("inversion center coincides with the point")]
    InversionAtCenter,
    #[error("empty input")]
    EmptyInput,
    #[error("the case infinity in G is not supported")]
    UnsupportedInfinityInDomain,
    #[error("extremal object is a Moebius disk containing infinity")]
    UnsupportedMoebiusDisk,
    #[error("extremal disk has {0} contacts, expected 2")]
    NotTwoExtremal(usize),
    #[error("nearest boundary point has no known curvature")]
    UnknownCurvature,
    #[error("points are not connected inside the domain")]
    Disconnected,
    #[error("grid cannot resolve the domain: {0}")]
    ResolutionTooCoarse(String),
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("metric unavailable on this domain: {0}")]
    MetricUnavailable(String),
    #[error("point lies outside the unit disk")]
    OutsideDisk,
    #[error("z/f(z) vanishes on the check grid")]
    VanishingCore,
    #[error("f' vanishes on the check grid")]
    VanishingDerivative,
    #[error("c is a nonpositive integer")]
    PolyLikePole,
    #[error("no convergent evaluation method: {0}")]
    NonConvergent(String),
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("negative coefficient at index {0}")]
    NegativeCoefficient(usize),
    #[error("psi carries no univalence attestation")]
    NotAttestedUnivalent,
    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoRoot { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    #[error("hypergeometric evaluation failed: {0}")]
    HypergeometricFailure(String),
    #[error("constraint violated: {0}")]
    ConstraintViolation(String),
    #[error("{0}")]
    Io(String),
}

impl Error {
    /// Process exit code for the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NonConvergent(_)
            | Error::NoRoot { .. }
            | Error::HypergeometricFailure(_)
            | Error::ResolutionTooCoarse(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
