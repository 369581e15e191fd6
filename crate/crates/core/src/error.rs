use thiserror::Error;

/// Errors produced while building algebras or operating on their elements.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported algebra family `{0}` (expected su, so or custom)")]
    UnsupportedFamily(String),

    #[error("matrix size {0} too small for the requested family")]
    MatrixTooSmall(usize),

    #[error("basis matrix {index} is not anti-Hermitian (residual {residual:.3e})")]
    NotAntiHermitian { index: usize, residual: f64 },

    #[error("candidate basis is degenerate: matrix {index} lies in the span of the previous ones")]
    DegenerateBasis { index: usize },

    #[error("basis does not close under the bracket (residual {residual:.3e})")]
    NotClosed { residual: f64 },

    #[error("Jacobi identity violated on basis triple (residual {residual:.3e})")]
    JacobiViolated { residual: f64 },

    #[error("vectors belong to different algebras")]
    AlgebraMismatch,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not in the algebra (membership residual {residual:.3e})")]
    NotInAlgebra { residual: f64 },

    #[error("group element drift {drift:.3e} exceeds bound {bound:.3e}")]
    ExcessiveDrift { drift: f64, bound: f64 },

    #[error("sectional curvature of a degenerate plane (vectors are linearly dependent)")]
    DegeneratePlane,

    #[error("operation requires a nonzero vector")]
    ZeroVector,

    #[error("maximal torus construction failed to converge: {0}")]
    TorusDegenerate(String),

    #[error("root-space pairing failed: {0}")]
    RootPairingFailed(String),

    #[error("series truncation bound {bound:.3e} exceeds tolerance {tol:.3e}")]
    SeriesTruncation { bound: f64, tol: f64 },

    #[error("V_R is not orthogonal to the null space of ad_X^2 (residual {residual:.3e})")]
    NotOrthogonalToKernel { residual: f64 },

    #[error("Jacobi field is unbounded (nonzero kernel component of the derivative)")]
    UnboundedField,

    #[error("{0} is not a subalgebra element: {1}")]
    CosetConstraint(&'static str, String),

    #[error("root combination alpha {0} beta is again a root; the construction requires it not to be")]
    RootSumIsRoot(&'static str),

    #[error("root {index} vanishes on X (value {value:.3e})")]
    RootVanishesOnX { index: usize, value: f64 },

    #[error("roots must be distinct and non-opposite")]
    RootsNotDistinct,

    #[error("X is not weakly regular; the finite sign enumeration does not apply (witness cluster: {witness})")]
    NotWeaklyRegular { witness: String },

    #[error("sign search over {0} root spaces exceeds the cap of {1}")]
    SignSearchTooLarge(usize, usize),

    #[error("vector component in {0} violates the required constraint (residual {1:.3e})")]
    ComponentConstraint(&'static str, f64),

    #[error("precondition not met: {0}")]
    PreconditionUnmet(String),
}

pub type Result<V> = std::result::Result<V, Error>;
