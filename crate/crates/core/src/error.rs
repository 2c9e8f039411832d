use thiserror::Error;

/// Errors raised by state construction, local operations and the optimizers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Dense storage was requested for more qubits than the cap allows.
    #[error("dense capacity exceeded: {n} qubits requested, at most {max} supported")]
    Capacity { n: usize, max: usize },

    /// Two qubit counts that must agree do not.
    #[error("dimension mismatch: {left} vs {right} qubits")]
    DimensionMismatch { left: usize, right: usize },

    /// A state has (numerically) zero norm and cannot be normalized.
    #[error("zero-norm state cannot be normalized (norm = {0:e})")]
    ZeroNorm(f64),

    /// The two single-qubit states of a symmetric family coincide.
    #[error("degenerate family: |eps> and |eps'> are collinear (overlap modulus {0})")]
    DegenerateFamily(f64),

    /// The counterexample state is undefined at eps = 0.
    #[error("state undefined at eps = 0: the local operation annihilates the Dicke state")]
    UndefinedState,

    /// The objective ratio has a vanishing denominator at this point.
    #[error("degenerate objective point: denominator {0:e}")]
    DegeneratePoint(f64),

    /// A local operator that must be invertible is singular.
    #[error("singular local operator (|det| = {0:e})")]
    Singular(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
