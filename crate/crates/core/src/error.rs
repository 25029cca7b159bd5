use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("θ = {theta} is an exceptional point (|cos θ| ≤ {tol:e})")]
    ExceptionalPoint { theta: f64, tol: f64 },

    #[error("θ = {theta} is not an exceptional point")]
    NotExceptional { theta: f64 },

    #[error("frame columns coalesce at θ = {theta}, θ' = {theta_prime}")]
    FrameSingular { theta: f64, theta_prime: f64 },

    #[error("matrix is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("metric is not positive definite (smallest eigenvalue {eig_min:e})")]
    NotPositive { eig_min: f64 },

    #[error("exceptional-point metric is not invertible: {0}")]
    NotInvertible(String),

    #[error("λ₋ = {lambda_minus} does not exceed 1")]
    ConditionNotMet { lambda_minus: f64 },

    #[error("division by zero: {0}")]
    DivisionByZero(String),

    #[error("degenerate angle pair: sin((θ − θ')/2) = 0")]
    DegenerateAngle,

    #[error("reconstructed metric does not match the closed-form family (residual {residual:e})")]
    PatternMismatch { residual: f64 },

    #[error("η does not intertwine H (residual {residual:e})")]
    IntertwiningViolation { residual: f64 },
}
