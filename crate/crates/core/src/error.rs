use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PellError {
    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,
    #[error("the zero polynomial is not allowed here")]
    ZeroPolynomial,
    #[error("polynomial has odd degree {0}")]
    OddDegree(usize),
    #[error("degree {found} is below the required minimum {min}")]
    DegreeTooSmall { found: usize, min: usize },
    #[error("leading coefficient is not a square in the coefficient field")]
    LeadingCoefficientNotASquare,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("deg F = {deg_f} exceeds d - 1 = {bound}; the convergent criterion does not apply")]
    DegreeTooLarge { deg_f: usize, bound: usize },
    #[error("the function is identically zero")]
    ZeroFunction,
    #[error("divisor is not of degree zero (degree {0})")]
    NotDegreeZero(i64),
    #[error("unsupported divisor support: {0}")]
    UnsupportedSupport(String),
    #[error("a quadratic extension of a quadratic extension would be needed")]
    NestedExtension,
    #[error("internal verification failure: {0}")]
    InternalVerificationFailure(String),
    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("(A, B) does not satisfy the equation")]
    NotASolution,
    #[error("B = 0 gives only the trivial solution")]
    TrivialSolution,
    #[error("the combination is not principal")]
    NotARelation,
    #[error("coefficient of a Weierstrass root must be odd or zero")]
    ParityViolation,
    #[error("target polynomial does not split into linear factors over the coefficient field")]
    NonSplitTarget,
}

pub type Result<T, E = PellError> = std::result::Result<T, E>;
