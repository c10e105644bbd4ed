//! Error types shared across the library.

/// Unified error type for all library operations.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A matrix expected to be invertible (with positive determinant) is not.
    #[error("matrix is not invertible: det = {det:.3e}")]
    NonInvertible {
        /// Determinant of the offending matrix.
        det: f64,
    },

    /// Input expected to be skew-symmetric has a symmetric part beyond
    /// tolerance.
    #[error("input is not skew-symmetric: symmetric residual {residual:.3e}")]
    NotSkew {
        /// Frobenius norm of the symmetric part.
        residual: f64,
    },

    /// A matrix failed the SO(3) invariants.
    #[error("matrix is not a rotation: orthogonality defect {defect:.3e}, det {det:.3e}")]
    NotARotation {
        /// `‖QᵀQ − I‖` of the candidate.
        defect: f64,
        /// Determinant of the candidate.
        det: f64,
    },

    /// The immersion condition `∂₁y₀ × ∂₂y₀ ≠ 0` fails at a surface point.
    #[error("degenerate surface at ({x1:.6}, {x2:.6}): |d1 x d2| = {norm:.3e}")]
    DegenerateSurface {
        /// First in-plane coordinate of the offending point.
        x1: f64,
        /// Second in-plane coordinate of the offending point.
        x2: f64,
        /// Norm of the normal-direction cross product.
        norm: f64,
    },

    /// Material parameters violate the positivity invariants.
    #[error("invalid material parameters: {0}")]
    InvalidMaterial(String),

    /// Finite-difference rotation derivatives are unreliable: the symmetric
    /// residual of `Qᵀ∂Q` dominates its skew part.
    #[error(
        "rotation grid too coarse: symmetric residual {residual:.3e} exceeds \
         {reference:.3e} (0.1 x skew part + floor)"
    )]
    GridTooCoarse {
        /// Norm of the symmetric part of `Qᵀ∂Q`.
        residual: f64,
        /// Acceptance bound it exceeded.
        reference: f64,
    },

    /// A shell strain tensor does not have the tangential structure
    /// `X A_{y₀} = X`.
    #[error("strain tensor violates the tangential structure: relative residual {0:.3e}")]
    StructuralViolation(f64),

    /// A purported rotation derivative `∂Q` is not tangent to SO(3) at `Q`.
    #[error("rotation derivative is not tangent: relative symmetric residual {0:.3e}")]
    NotATangentDerivative(f64),

    /// The 3×3 normal system of the curvature minimization is not positive
    /// definite (only reachable when material invariants were bypassed).
    #[error("singular normal system in the curvature minimization")]
    SingularSystem,

    /// Armijo backtracking exhausted its halving budget.
    #[error("line search failed after {0} step halvings")]
    LineSearchFailed(u32),

    /// An operation restricted to the identity plate received a curved patch.
    #[error("patch is not the identity plate")]
    NotFlat,

    /// The Weingarten eigenproblem produced a genuine complex pair.
    #[error("complex principal curvatures: imaginary part {0:.3e}")]
    ComplexCurvature(f64),

    /// State/grid dimension or format mismatch.
    #[error("state does not match the grid: {0}")]
    Mismatch(String),

    /// Underlying I/O failure.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed text input (state checkpoints, tabulated patches).
    #[error("parse error: {0}")]
    Parse(String),
}

/// Library-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
