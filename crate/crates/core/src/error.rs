use thiserror::Error;

/// Every failure mode of the library. Variants map one-to-one onto the
/// documented error conditions of each operation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid modulus {0}: must be at least 2")]
    InvalidModulus(u64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not invertible modulo {0}")]
    NotInvertible(u64),
    #[error("matrix order exceeds the bound {0}")]
    OrderBoundExceeded(u64),
    #[error("enumeration of size {size} exceeds the budget {budget}")]
    EnumerationTooLarge { size: String, budget: String },
    #[error("bad action: {0}")]
    BadAction(String),
    #[error("genus {0} is too small (need g >= 2)")]
    GenusTooSmall(u64),
    #[error("signature is not hyperbolic: {0}")]
    NotHyperbolic(String),
    #[error("signature is triangular (genus 0, three cone points)")]
    Triangular,
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("no splitting prime found below {0}")]
    NoSplittingPrime(u64),
    #[error("bad lambda parameters: {0}")]
    BadLambda(String),
    #[error("constraint infeasible: {0}")]
    ConstraintInfeasible(String),
    #[error("field insufficient: {0}")]
    FieldInsufficient(String),
    #[error("homomorphism is not surjective")]
    NotSurjective,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("singular point on model: {0}")]
    SingularPoint(String),
    #[error("cross-check failed: {0}")]
    CrossCheckFailed(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// True for the errors caused by a size/enumeration budget rather than bad input.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::EnumerationTooLarge { .. } | Error::OrderBoundExceeded(_))
    }

    pub(crate) fn too_large(size: impl ToString, budget: impl ToString) -> Self {
        Error::EnumerationTooLarge { size: size.to_string(), budget: budget.to_string() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
