//! Centralized numerical tolerances.
//!
//! Every comparison threshold used by the library lives here so that the
//! provenance of a tolerance is documented once and tests can reference the
//! same constants they exercise. Values are grouped by the kind of operation
//! they guard; loosenings relative to machine precision are justified inline.

/// Algebraic identities evaluated in closed form (skewness checks, rotation
/// orthogonality, structural projector identities). A handful of 3×3
/// multiplications keeps roundoff within a few ulps of 1e-16; 1e-12 leaves
/// four orders of headroom.
pub const ALGEBRAIC: f64 = 1e-12;

/// Matrix decompositions (polar via SVD, Cholesky): iterative kernels whose
/// backward error is bounded by the underlying LAPACK-style sweeps.
pub const DECOMPOSITION: f64 = 1e-10;

/// Exactly representable integer-coefficient linear maps (Nye transform
/// roundtrip, axl/anti inverse pair).
pub const EXACT_LINEAR: f64 = 1e-14;

/// Structural validation of shell strain tensors `X = (*|*|0)[∇Θ(0)]⁻¹`
/// (the identity `X A_{y₀} = X`). Looser than [`ALGEBRAIC`] because inputs
/// arrive from finite-difference pipelines with O(Δ²) consistency error.
pub const STRUCTURE_REL: f64 = 1e-8;

/// First-order (stationarity) conditions of the through-thickness
/// optimizations: `‖T_Biot(Ū(d*)) n₀‖ ≤ STATIONARITY`.
pub const STATIONARITY: f64 = 1e-9;

/// Agreement between a closed-form optimum and a brute-force search.
pub const BRUTE_FORCE: f64 = 1e-8;

/// Determinant floor below which a 3×3 matrix is treated as non-invertible.
pub const DET_FLOOR: f64 = 1e-14;

/// Immersion floor: `‖∂₁y₀ × ∂₂y₀‖` below this is a degenerate surface point.
pub const IMMERSION: f64 = 1e-12;

/// Relative residual bound for the skew projection of `Qᵀ∂ᵢQ`: the symmetric
/// part must stay below `SKEW_RESIDUAL_REL` times the skew part, up to the
/// absolute floor [`SKEW_RESIDUAL_ABS`] that prevents spurious failures on
/// (numerically) constant rotation fields where both parts vanish.
pub const SKEW_RESIDUAL_REL: f64 = 0.1;

/// Absolute floor companion to [`SKEW_RESIDUAL_REL`].
pub const SKEW_RESIDUAL_ABS: f64 = 1e-10;

/// Imaginary-part truncation threshold for the principal-curvature
/// eigenproblem (the Weingarten map is similar to a symmetric matrix in exact
/// arithmetic, so genuine complex pairs indicate corrupted geometry).
pub const CURVATURE_IMAG: f64 = 1e-10;

/// Small-angle switchover for the Rodrigues formula: below this angle the
/// Taylor expansions of `sin θ/θ` and `(1 − cos θ)/θ²` are used to avoid
/// cancellation.
pub const ROTATION_TAYLOR: f64 = 1e-4;

/// Gradient vs. central finite differences agreement (relative), matching the
/// O(step²) truncation of a 1e-6 step.
pub const GRADIENT_FD: f64 = 1e-6;

/// Default convergence tolerance on the sup-norm of the energy gradient.
pub const SOLVER_GRAD: f64 = 1e-8;

/// Maximum number of step halvings before the Armijo line search gives up.
pub const LINE_SEARCH_MAX_HALVINGS: u32 = 60;
