//! Small-matrix kernels: rotations, skew-symmetric algebra, decompositions,
//! and the Nye transform.
//!
//! Conventions. The canonical identification of 𝔰𝔬(3) with ℝ³ maps the skew
//! matrix with rows `[[0, α, β], [−α, 0, γ], [−β, −γ, 0]]` to the axial
//! vector `(−γ, β, −α)`; equivalently [`anti`] of `(ϑ₁, ϑ₂, ϑ₃)` has rows
//! `[0, −ϑ₃, ϑ₂]`, `[ϑ₃, 0, −ϑ₁]`, `[−ϑ₂, ϑ₁, 0]`, so `anti(v)·w = v × w`.
//! The norm identity `‖A‖² = 2‖axl A‖²` holds for every skew `A`.
//!
//! The orthogonal Cartan decomposition splits an arbitrary matrix into
//! deviatoric-symmetric, skew, and spherical parts; the three are pairwise
//! orthogonal in the Frobenius inner product.

use crate::error::{Error, Result};
use crate::{tol, Mat3, Vec3};

/// Skew-symmetric 3×3 matrix, stored as its axial vector.
///
/// Storing the axial vector eliminates drift of the skew constraint: the
/// materialized matrix produced by [`Skew3::matrix`] is skew by construction,
/// and `anti(axl(A)) = A` holds bit-exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Skew3 {
    axial: Vec3,
}

impl Skew3 {
    /// Zero element of 𝔰𝔬(3).
    pub fn zero() -> Self {
        Self { axial: Vec3::zeros() }
    }

    /// Builds the skew matrix with the given axial vector (see [`anti`]).
    pub fn from_axial(v: Vec3) -> Self {
        Self { axial: v }
    }

    /// Validates that `m` is skew-symmetric and converts it.
    ///
    /// # Errors
    ///
    /// [`Error::NotSkew`] when the symmetric part of `m` exceeds
    /// [`tol::ALGEBRAIC`] in Frobenius norm.
    pub fn try_from_matrix(m: &Mat3) -> Result<Self> {
        let sym = (m + m.transpose()) * 0.5;
        let residual = sym.norm();
        if residual > tol::ALGEBRAIC {
            return Err(Error::NotSkew { residual });
        }
        Ok(Self::project(m))
    }

    /// Axial vector of the skew projection of `m` (no validation).
    ///
    /// Used where the skew projection itself is the desired operation, e.g.
    /// for finite-difference rotation derivatives `skew(Qᵀ∂Q)`.
    pub fn project(m: &Mat3) -> Self {
        // Axial of the skew part ½(m − mᵀ): read the three independent
        // entries directly.
        let v = Vec3::new(
            0.5 * (m[(2, 1)] - m[(1, 2)]),
            0.5 * (m[(0, 2)] - m[(2, 0)]),
            0.5 * (m[(1, 0)] - m[(0, 1)]),
        );
        Self { axial: v }
    }

    /// The stored axial vector; identical to [`axl`] of `self`.
    pub fn axial(&self) -> Vec3 {
        self.axial
    }

    /// Materializes the 3×3 skew matrix (diagonal exactly zero).
    pub fn matrix(&self) -> Mat3 {
        let v = self.axial;
        Mat3::new(0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0)
    }

    /// Frobenius norm of the materialized matrix, `√2 ‖axl‖`.
    pub fn norm(&self) -> f64 {
        std::f64::consts::SQRT_2 * self.axial.norm()
    }
}

/// Rotation matrix, i.e. an element of SO(3).
///
/// Construction validates `‖QᵀQ − I‖ ≤ 1e-12` and `det Q > 0`; all factory
/// functions in this module ([`exp_so3`], [`polar_decompose`]) return values
/// satisfying the invariants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rot3 {
    m: Mat3,
}

impl Rot3 {
    /// The identity rotation.
    pub fn identity() -> Self {
        Self { m: Mat3::identity() }
    }

    /// Validates the SO(3) invariants and wraps `m`.
    ///
    /// # Errors
    ///
    /// [`Error::NotARotation`] when `‖QᵀQ − I‖ > 1e-12` or `det m ≤ 0`.
    pub fn try_new(m: Mat3) -> Result<Self> {
        let defect = (m.transpose() * m - Mat3::identity()).norm();
        let det = m.determinant();
        if defect > tol::ALGEBRAIC || det <= 0.0 {
            return Err(Error::NotARotation { defect, det });
        }
        Ok(Self { m })
    }

    /// The underlying matrix.
    pub fn matrix(&self) -> &Mat3 {
        &self.m
    }

    /// Transposed (= inverse) rotation.
    pub fn transpose(&self) -> Self {
        Self { m: self.m.transpose() }
    }

    /// Composition `self · other`.
    pub fn compose(&self, other: &Rot3) -> Self {
        Self { m: self.m * other.m }
    }

    /// `i`-th column of the rotation.
    pub fn column(&self, i: usize) -> Vec3 {
        self.m.column(i).into()
    }

    /// Orthogonality defect `‖QᵀQ − I‖`, exposed for drift monitoring.
    pub fn orthogonality_defect(&self) -> f64 {
        (self.m.transpose() * self.m - Mat3::identity()).norm()
    }

    /// Nearest rotation to the stored matrix (polar reprojection guard).
    ///
    /// # Errors
    ///
    /// Propagates [`Error::NonInvertible`] if drift has destroyed
    /// invertibility (unreachable under retraction-based updates).
    pub fn reproject(&self) -> Result<Self> {
        let (q, _) = polar_decompose(&self.m)?;
        Ok(q)
    }
}

/// Axial vector of a skew matrix: `axl` of rows
/// `[[0, α, β], [−α, 0, γ], [−β, −γ, 0]]` is `(−γ, β, −α)`.
///
/// Inverse of [`anti`]; satisfies `‖A‖² = 2‖axl A‖²`.
pub fn axl(a: &Skew3) -> Vec3 {
    a.axial()
}

/// Skew matrix with axial vector `v`: rows `[0, −ϑ₃, ϑ₂]`, `[ϑ₃, 0, −ϑ₁]`,
/// `[−ϑ₂, ϑ₁, 0]` for `v = (ϑ₁, ϑ₂, ϑ₃)`, so that `anti(v)·w = v × w`.
pub fn anti(v: Vec3) -> Skew3 {
    Skew3::from_axial(v)
}

/// Exponential map 𝔰𝔬(3) → SO(3) by the closed-form Rodrigues formula.
///
/// For rotation angle `θ = ‖axl A‖·√2/√2 = ‖axl A‖` below
/// [`tol::ROTATION_TAYLOR`], the coefficients `sin θ/θ` and
/// `(1 − cos θ)/θ²` are evaluated by their Taylor expansions to avoid
/// cancellation; the result satisfies the [`Rot3`] invariants for all inputs.
///
/// # Example
///
/// A quarter-turn about `e₃` sends `e₁` to `e₂`:
///
/// ```
/// use shellkit::rotalg::{anti, exp_so3};
/// use shellkit::Vec3;
///
/// let q = exp_so3(&anti(Vec3::z() * std::f64::consts::FRAC_PI_2));
/// assert!((q.matrix() * Vec3::x() - Vec3::y()).norm() < 1e-15);
/// ```
pub fn exp_so3(a: &Skew3) -> Rot3 {
    let w = a.axial();
    let theta2 = w.norm_squared();
    let theta = theta2.sqrt();
    let (c1, c2) = if theta < tol::ROTATION_TAYLOR {
        // sin θ/θ = 1 − θ²/6 + θ⁴/120, (1 − cos θ)/θ² = ½ − θ²/24 + θ⁴/720.
        (
            1.0 - theta2 / 6.0 + theta2 * theta2 / 120.0,
            0.5 - theta2 / 24.0 + theta2 * theta2 / 720.0,
        )
    } else {
        (theta.sin() / theta, (1.0 - theta.cos()) / theta2)
    };
    let k = a.matrix();
    let m = Mat3::identity() + k * c1 + k * k * c2;
    Rot3 { m }
}

/// Polar decomposition `F = Q·U` with `Q ∈ SO(3)` and `U` symmetric positive
/// definite, via SVD with determinant sign correction.
///
/// # Errors
///
/// [`Error::NonInvertible`] when `det F ≤ 0` or `|det F|` is below
/// [`tol::DET_FLOOR`].
pub fn polar_decompose(f: &Mat3) -> Result<(Rot3, Mat3)> {
    let det = f.determinant();
    if det <= 0.0 || det.abs() < tol::DET_FLOOR {
        return Err(Error::NonInvertible { det });
    }
    let svd = f.svd(true, true);
    let u = svd.u.expect("svd with vectors requested");
    let v_t = svd.v_t.expect("svd with vectors requested");
    // Proper-rotation enforcement: flip the weakest singular direction if the
    // orthogonal factor came out with determinant −1 (cannot happen for
    // det F > 0 in exact arithmetic, but guards roundoff near singularity).
    let mut s = svd.singular_values;
    let mut u = u;
    if (u * v_t).determinant() < 0.0 {
        s[2] = -s[2];
        u.column_mut(2).neg_mut();
    }
    let q = u * v_t;
    let v = v_t.transpose();
    let stretch = v * Mat3::from_diagonal(&s) * v_t;
    Ok((Rot3 { m: q }, stretch))
}

/// Orthogonal Cartan decomposition `X = dev sym X + skew X + (tr X/3)·I`.
///
/// Returns `(dev sym X, skew X, tr X)`; the three parts are pairwise
/// orthogonal under the Frobenius inner product, so
/// `‖X‖² = ‖dev sym X‖² + ‖skew X‖² + (tr X)²/3`.
pub fn cartan_split(x: &Mat3) -> (Mat3, Skew3, f64) {
    let trace = x.trace();
    let sym = (x + x.transpose()) * 0.5;
    let dev_sym = sym - Mat3::identity() * (trace / 3.0);
    let skew = Skew3::project(x);
    (dev_sym, skew, trace)
}

/// Symmetric part `½(X + Xᵀ)`.
pub fn sym(x: &Mat3) -> Mat3 {
    (x + x.transpose()) * 0.5
}

/// Skew part `½(X − Xᵀ)` as a full matrix.
pub fn skew(x: &Mat3) -> Mat3 {
    (x - x.transpose()) * 0.5
}

/// Nye map from the dislocation density `α` to the wryness `Γ`:
/// `Γ = −αᵀ + ½ tr(α)·I`.
pub fn nye_alpha_to_gamma(alpha: &Mat3) -> Mat3 {
    -alpha.transpose() + Mat3::identity() * (0.5 * alpha.trace())
}

/// Nye map from the wryness `Γ` to the dislocation density `α`:
/// `α = −Γᵀ + tr(Γ)·I`.
///
/// # Example
///
/// The two Nye maps are mutually inverse:
///
/// ```
/// use shellkit::rotalg::{nye_alpha_to_gamma, nye_gamma_to_alpha};
/// use shellkit::Mat3;
///
/// let gamma = Mat3::new(0.3, -0.1, 0.4, 0.2, 0.0, -0.5, 0.7, 0.1, -0.2);
/// let back = nye_alpha_to_gamma(&nye_gamma_to_alpha(&gamma));
/// assert!((back - gamma).norm() < 1e-14);
/// ```
pub fn nye_gamma_to_alpha(gamma: &Mat3) -> Mat3 {
    -gamma.transpose() + Mat3::identity() * gamma.trace()
}
