use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("operands use different coefficient backends")]
    BackendMismatch,
    #[error("degree of the zero polynomial is undefined")]
    UndefinedDegree,
    #[error("evaluation at t = 0 of a polynomial with negative exponents")]
    PoleAtZero,
    #[error("tolerance must be positive and finite, got {0}")]
    BadTolerance(f64),
    #[error("non-finite coefficient")]
    NonFinite,
    #[error("root factorization not certified: relative residual {residual:e} exceeds {limit:e}")]
    UncertifiedFactoring { residual: f64, limit: f64 },
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("parse error: {0}")]
    Parse(String),

    #[error("r = {r:?} is not in Gamma({n}, {k}): {reason}")]
    NotInGamma {
        n: usize,
        k: usize,
        r: Vec<i64>,
        reason: String,
    },
    #[error("point is not in V(r)^x: {0}")]
    NotInVCross(String),
    #[error("coordinates {0} and {1} of a coincide")]
    RepeatedCoordinate(usize, usize),
    #[error("coordinate {0} of a is zero")]
    RequiresNonzero(usize),
    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("closed forms exist only for n <= 3 (got n = {0}); use the numeric solver")]
    UseNumeric(usize),
    #[error("no point of V(r)^x found after {starts} starts")]
    NoConvergence { starts: usize },
    #[error("solution count {found} exceeds the bound {bound}")]
    BoundExceeded { found: usize, bound: usize },

    #[error("span is not closed under the bracket")]
    NotClosed,
    #[error("basis elements are linearly dependent")]
    NotIndependent,
    #[error("independent elements with vanishing bracket")]
    AbelianContradiction,
    #[error("structure violation: {0}")]
    StructureViolation(String),
    #[error("recovered signature failed validation: {0}")]
    ValidationFailed(Box<Error>),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
