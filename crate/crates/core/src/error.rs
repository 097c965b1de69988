use alloc::string::String;
use alloc::vec::Vec;

use crate::model::Diagnostic;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid network spec: {} problem(s), first: {}", .0.len(), .0.first().map(|d| d.message()).unwrap_or_default())]
    InvalidSpec(Vec<Diagnostic>),
    #[error("evaluation at pole: Omega = {omega} rad/s")]
    EvaluationAtPole { omega: f64 },
    #[error("singular matrix")]
    Singular,
    #[error("eigenvalue iteration did not converge")]
    NoConvergence,
    #[error("divergent integral: fitted tail exponent {exponent:.3}")]
    Divergent { exponent: f64 },
    #[error("adaptive quadrature did not reach tolerance (estimated error {abs_error:e})")]
    Quadrature { abs_error: f64 },
    #[error("expected {expected} bath assignments, got {got}")]
    MissingBath { expected: usize, got: usize },
    #[error("network has no signal injection")]
    NoSignal,
    #[error("no stable point in the search bounds for chi/gamma_L = {chi}")]
    Infeasible { chi: f64 },
    #[error("system is unstable")]
    Unstable,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
