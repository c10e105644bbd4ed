//! Geometrically nonlinear Cosserat membrane shell model on curved reference
//! configurations.
//!
//! The library implements the dimensionally reduced membrane model for a
//! Cosserat (micropolar) solid shell: an elastic body whose kinematics pair a
//! deformation map with an independent rotation field. Starting from the
//! parent three-dimensional energy on a thin curved slab, the thin limit is a
//! two-dimensional functional in the midsurface deformation `m: ω → ℝ³` and
//! the elastic microrotation `Q̄: ω → SO(3)`, with homogenized membrane and
//! curvature densities obtained by minimizing the parent energy over the
//! through-thickness director and infinitesimal rotation rate.
//!
//! Module map:
//!
//! - [`rotalg`] — exact small-matrix kernels: rotations, skew algebra,
//!   decompositions, and the Nye transform between wryness and dislocation
//!   density.
//! - [`surface`] — geometry of the curved reference midsurface: frames,
//!   fundamental forms, curvatures, shell projectors, thickness admissibility.
//! - [`cosserat3d`] — the parent 3D energy on the scaled unit-thickness
//!   domain: strain and curvature measures of thick fields and the scaled
//!   functional used by the thin-limit harness.
//! - [`shellcore`] — the reduced model: shell strain and bending-curvature
//!   tensors, tangential/normal splits, homogenized densities.
//! - [`reconstruct`] — closed-form optimal director `d*`, optimal rotation
//!   rate `A*`, recovery fields, and the thin-limit gap.
//! - [`assemble`] — discretization of ω, the total limit functional with
//!   external loads, gradients on ℝ³ × SO(3), and energy minimization with
//!   rotation retraction.
//! - [`linshell`] — linearized strains and energy, plus model-comparison
//!   calculators (flat-shell reduction, 6-parameter coefficients,
//!   Reissner–Mindlin correspondence).
//! - [`oracles`] — independent brute-force/numerical oracles backing the
//!   verification suite (`verify` module and the CLI `verify` command).
//! - [`verify`] — the self-check suite aggregating all oracle comparisons.
//!
//! # Example
//!
//! Evaluate the homogenized membrane density for a transverse shear strain on
//! the flat plate and compare with the harmonic-mean weight:
//!
//! ```
//! use shellkit::cosserat3d::MaterialParams;
//! use shellkit::surface::{frame_at, MidsurfacePatch};
//! use shellkit::shellcore::w_mp_hom;
//! use shellkit::Mat3;
//!
//! let mat = MaterialParams::new(2.0, 1.0, 0.5, 0.1, 1.0, 1.0, 1.0).unwrap();
//! let patch = MidsurfacePatch::plate([-1.0, 1.0, -1.0, 1.0]);
//! let frame = frame_at(&patch, 0.0, 0.0).unwrap();
//!
//! // Pure transverse shear: E = e3 ⊗ e1.
//! let mut e = Mat3::zeros();
//! e[(2, 0)] = 1.0;
//! let w = w_mp_hom(&e, &frame, &mat).unwrap();
//! let harmonic = 2.0 * mat.mu * mat.mu_c / (mat.mu + mat.mu_c);
//! assert!((w - harmonic).abs() < 1e-12);
//! ```

pub mod assemble;
pub mod cosserat3d;
pub mod error;
pub mod linshell;
pub mod oracles;
pub mod reconstruct;
pub mod rotalg;
pub mod shellcore;
pub mod surface;
pub mod tol;
pub mod verify;

pub use error::{Error, Result};

/// Real 3×3 matrix (row/column semantics follow `nalgebra`, column-major
/// storage with row-major indexing `m[(i, j)]`).
pub type Mat3 = nalgebra::Matrix3<f64>;
/// Real 2×2 matrix.
pub type Mat2 = nalgebra::Matrix2<f64>;
/// Real 3×2 matrix; used for surface gradients `∇y₀ = (∂₁y₀ | ∂₂y₀)`.
pub type Mat3x2 = nalgebra::Matrix3x2<f64>;
/// Real 3-vector.
pub type Vec3 = nalgebra::Vector3<f64>;
/// Real 2-vector.
pub type Vec2 = nalgebra::Vector2<f64>;
