//! Central tolerance constants.
//!
//! Structural identities are exact in real arithmetic, so they get
//! machine-precision budgets; iterative or accumulated computations get
//! looser ones. All comparisons scale by the input norms at the use site.

/// Structural identities (antisymmetry, Jacobi, ad-invariance) on unit-scale input.
pub const STRUCTURAL: f64 = 1e-10;

/// Membership of a matrix in the span of the orthonormal basis.
pub const MEMBERSHIP: f64 = 1e-8;

/// Closure of a custom basis under the bracket.
pub const CLOSURE: f64 = 1e-8;

/// Relative rank cutoff for Krylov-subspace stabilization.
pub const KRYLOV_RANK_REL: f64 = 1e-9;

/// Relative clustering width for eigenvalues of `ad_X^2`.
pub const CLUSTER_REL: f64 = 1e-8;

/// Relative singular-value threshold for root linear independence.
pub const ROOT_INDEP_REL: f64 = 1e-8;

/// Relative cutoff below which singular values of `ad_X` are treated as zero.
pub const PINV_CUTOFF_REL: f64 = 1e-10;

/// Verdict threshold for the algebraic (Krylov) good-triple check.
pub const ALGEBRAIC_GOOD: f64 = 1e-9;

/// Verdict threshold for the series-based independence-in-t check.
pub const Q2_GOOD: f64 = 1e-8;

/// Verdict threshold for the numerical surface check, scaled by `1 + |X| + |V| + |A|`.
pub const SURFACE_GOOD: f64 = 1e-8;

/// Residual threshold for the curvature necessary condition.
pub const CURVATURE_NECESSARY: f64 = 1e-10;

/// Maximum unitarity drift accepted by `Ad`.
pub const DRIFT_MAX: f64 = 1e-6;

/// Boundedness test: kernel component of the initial derivative.
pub const BOUNDED_KERNEL: f64 = 1e-9;

/// Agreement budget between the closed-form Jacobi field and its series form.
pub const SERIES_AGREEMENT: f64 = 1e-9;

/// Default number of terms for truncated `ad` series.
pub const SERIES_TERMS: usize = 40;
