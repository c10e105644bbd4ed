//! The parent three-dimensional Cosserat energy on the scaled
//! unit-thickness domain.
//!
//! A thin slab of thickness `h` around the midsurface is pulled back to the
//! fixed domain `Ω₁ = ω × [−½, ½]` by `ζ(η) = (η₁, η₂, hη₃)`. The scaled
//! functional evaluated here is
//!
//! `(1/h)·J♮_h = ∫_{Ω₁} [W_mp(Ū♮) + W̃_curv(Γ♮)] · det ∇Θ♮ dV_η`,
//!
//! with the non-symmetric Biot-type stretch
//! `Ū♮ = Q̄♮ᵀ (∂₁φ♮ | ∂₂φ♮ | (1/h)∂₃φ♮)[∇Θ♮]⁻¹` and the wryness
//! `Γ♮ = (axl(Q̄♮ᵀ∂₁Q̄♮) | axl(Q̄♮ᵀ∂₂Q̄♮) | (1/h)axl(Q̄♮ᵀ∂₃Q̄♮))[∇Θ♮]⁻¹`,
//! where `∇Θ♮` is the reference gradient at offset `x₃ = hη₃`.
//!
//! The curvature density uses the `4a₃` trace weight, the variant consistent
//! with the stated relation `b₃ = (12a₃ − a₁)/3` between the `a`- and
//! `b`-parametrizations (the literature also shows an `a₃` trace weight in
//! places; the two are irreconcilable and the `4a₃` form is adopted).

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rotalg::{polar_decompose, Rot3, Skew3};
use crate::surface::{det_grad_theta, frame_at, grad_theta, MidsurfacePatch, SurfaceFrame};
use crate::{tol, Mat3, Vec3};

/// Material parameters of the isotropic Cosserat solid.
///
/// All moduli carry stress units, `l_c` carries length units, and the
/// curvature weights are dimensionless. Construction validates
/// `μ > 0`, `κ_bulk = (2μ+3λ)/3 > 0`, `μ_c > 0`, `L_c > 0`, `aᵢ > 0`
/// and precomputes the derived quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialParams {
    /// Shear modulus `μ`.
    pub mu: f64,
    /// Lamé constant `λ`.
    pub lambda: f64,
    /// Cosserat couple modulus `μ_c`.
    pub mu_c: f64,
    /// Internal length `L_c`.
    pub l_c: f64,
    /// Curvature weight `a₁` (deviatoric-symmetric part).
    pub a1: f64,
    /// Curvature weight `a₂` (skew part).
    pub a2: f64,
    /// Curvature weight `a₃` (trace part, entering as `4a₃`).
    pub a3: f64,
    /// Bulk modulus `κ_bulk = (2μ + 3λ)/3`.
    pub kappa_bulk: f64,
    /// Derived curvature weight `b₁ = a₁`.
    pub b1: f64,
    /// Derived curvature weight `b₂ = a₂`.
    pub b2: f64,
    /// Derived curvature weight `b₃ = (12a₃ − a₁)/3`.
    pub b3: f64,
}

impl MaterialParams {
    /// Builds validated parameters from `(μ, λ, μ_c, L_c, a₁, a₂, a₃)`.
    ///
    /// # Errors
    ///
    /// [`Error::InvalidMaterial`] when any positivity invariant fails
    /// (`μ_c = 0` is rejected as well: the couple modulus must be strictly
    /// positive for the homogenized transverse-shear weight to be defined).
    pub fn new(
        mu: f64,
        lambda: f64,
        mu_c: f64,
        l_c: f64,
        a1: f64,
        a2: f64,
        a3: f64,
    ) -> Result<Self> {
        let kappa_bulk = (2.0 * mu + 3.0 * lambda) / 3.0;
        let checks: [(&str, f64); 6] = [
            ("mu", mu),
            ("kappa_bulk", kappa_bulk),
            ("mu_c", mu_c),
            ("l_c", l_c),
            ("a1", a1),
            ("a2", a2),
        ];
        for (name, v) in checks {
            if !(v > 0.0) {
                return Err(Error::InvalidMaterial(format!("{name} must be positive, got {v}")));
            }
        }
        if !(a3 > 0.0) {
            return Err(Error::InvalidMaterial(format!("a3 must be positive, got {a3}")));
        }
        Ok(Self {
            mu,
            lambda,
            mu_c,
            l_c,
            a1,
            a2,
            a3,
            kappa_bulk,
            b1: a1,
            b2: a2,
            b3: (12.0 * a3 - a1) / 3.0,
        })
    }

    /// Harmonic transverse-shear weight `2μμ_c/(μ + μ_c)` of the
    /// homogenized membrane density.
    pub fn harmonic_shear(&self) -> f64 {
        2.0 * self.mu * self.mu_c / (self.mu + self.mu_c)
    }

    /// Homogenized membrane trace weight `λμ/(λ + 2μ)`.
    pub fn membrane_trace(&self) -> f64 {
        self.lambda * self.mu / (self.lambda + 2.0 * self.mu)
    }

    /// Debug-only override of the derived `b₃` weight, used as a negative
    /// control by the verification suite: a corrupted `b₃` breaks the
    /// `a`-form/`b`-form curvature equivalence and must be caught.
    pub fn debug_override_b3(mut self, b3: f64) -> Self {
        self.b3 = b3;
        self
    }
}

/// Quadratic membrane energy density
/// `W_mp(U) = μ‖dev sym(U−I)‖² + μ_c‖skew(U−I)‖² + (κ_bulk/2)[tr(U−I)]²`,
/// identically equal to `μ‖sym(U−I)‖² + μ_c‖skew(U−I)‖² + (λ/2)[tr(U−I)]²`.
pub fn w_mp(u: &Mat3, mat: &MaterialParams) -> f64 {
    let x = u - Mat3::identity();
    let (dev, skew, tr) = crate::rotalg::cartan_split(&x);
    mat.mu * dev.norm_squared()
        + mat.mu_c * skew.matrix().norm_squared()
        + 0.5 * mat.kappa_bulk * tr * tr
}

/// Alternative `(μ, μ_c, λ/2)` form of [`w_mp`], kept as an equivalence
/// oracle (`μ‖sym‖² + μ_c‖skew‖² + (λ/2)tr²`).
pub fn w_mp_lambda_form(u: &Mat3, mat: &MaterialParams) -> f64 {
    let x = u - Mat3::identity();
    let s = crate::rotalg::sym(&x);
    let w = crate::rotalg::skew(&x);
    mat.mu * s.norm_squared() + mat.mu_c * w.norm_squared() + 0.5 * mat.lambda * x.trace().powi(2)
}

/// Curvature energy density in the `a`-parametrization:
/// `W̃_curv(Γ) = μL_c²(a₁‖dev sym Γ‖² + a₂‖skew Γ‖² + 4a₃[tr Γ]²)`.
pub fn w_curv_tilde(gamma: &Mat3, mat: &MaterialParams) -> f64 {
    let (dev, skew, tr) = crate::rotalg::cartan_split(gamma);
    mat.mu
        * mat.l_c
        * mat.l_c
        * (mat.a1 * dev.norm_squared()
            + mat.a2 * skew.matrix().norm_squared()
            + 4.0 * mat.a3 * tr * tr)
}

/// Curvature energy density in the `b`-parametrization:
/// `μL_c²(b₁‖sym Γ‖² + b₂‖skew Γ‖² + b₃[tr Γ]²)`; identically equal to
/// [`w_curv_tilde`] when `b₃ = (12a₃ − a₁)/3`.
pub fn w_curv_tilde_b(gamma: &Mat3, mat: &MaterialParams) -> f64 {
    let s = crate::rotalg::sym(gamma);
    let w = crate::rotalg::skew(gamma);
    mat.mu
        * mat.l_c
        * mat.l_c
        * (mat.b1 * s.norm_squared()
            + mat.b2 * w.norm_squared()
            + mat.b3 * gamma.trace().powi(2))
}

/// Sampled three-dimensional fields on the unit-thickness domain
/// `Ω₁ = ω × [−½, ½]`: deformation `φ♮` and elastic microrotation `Q̄♮` on an
/// `n₁ × n₂ × n₃` node lattice, plus the physical thickness `h`.
///
/// In-plane node `(i, j)` covers the patch domain uniformly; level `k` sits
/// at `η₃ = −½ + k/(n₃−1)`. Storage is row-major with `x₁` fastest:
/// index `= (k·n₂ + j)·n₁ + i`.
#[derive(Debug, Clone)]
pub struct ThickFields {
    /// In-plane nodes along `x₁`.
    pub n1: usize,
    /// In-plane nodes along `x₂`.
    pub n2: usize,
    /// Through-thickness levels.
    pub n3: usize,
    /// Physical thickness `h`.
    pub h: f64,
    /// Deformation samples `φ♮`.
    pub phi: Vec<Vec3>,
    /// Microrotation samples `Q̄♮`.
    pub q: Vec<Rot3>,
}

impl ThickFields {
    /// Builds fields by sampling closures `φ(x₁, x₂, η₃)`, `Q(x₁, x₂, η₃)`
    /// on the lattice over `patch.domain × [−½, ½]`.
    pub fn from_fn(
        patch: &MidsurfacePatch,
        dims: (usize, usize, usize),
        h: f64,
        phi: impl Fn(f64, f64, f64) -> Vec3,
        q: impl Fn(f64, f64, f64) -> Rot3,
    ) -> Self {
        let (n1, n2, n3) = dims;
        assert!(n1 >= 3 && n2 >= 3 && n3 >= 2, "lattice too small");
        let [x1min, x1max, x2min, x2max] = patch.domain;
        let mut phis = Vec::with_capacity(n1 * n2 * n3);
        let mut qs = Vec::with_capacity(n1 * n2 * n3);
        for k in 0..n3 {
            let eta3 = -0.5 + (k as f64) / ((n3 - 1) as f64);
            for j in 0..n2 {
                let x2 = x2min + (x2max - x2min) * (j as f64) / ((n2 - 1) as f64);
                for i in 0..n1 {
                    let x1 = x1min + (x1max - x1min) * (i as f64) / ((n1 - 1) as f64);
                    phis.push(phi(x1, x2, eta3));
                    qs.push(q(x1, x2, eta3));
                }
            }
        }
        Self { n1, n2, n3, h, phi: phis, q: qs }
    }

    /// Flat index of node `(i, j, k)`.
    pub fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (k * self.n2 + j) * self.n1 + i
    }

    /// `η₃` coordinate of level `k`.
    pub fn eta3(&self, k: usize) -> f64 {
        -0.5 + (k as f64) / ((self.n3 - 1) as f64)
    }
}

/// Second-order finite-difference weights and neighbor offsets for the first
/// derivative at position `i` of an `n`-node line (central in the interior,
/// one-sided second order at the ends). Returns `[(offset, weight); 3]` on a
/// unit grid.
pub(crate) fn fd3_first(i: usize, n: usize) -> [(isize, f64); 3] {
    if i == 0 {
        [(0, -1.5), (1, 2.0), (2, -0.5)]
    } else if i + 1 == n {
        [(0, 1.5), (-1, -2.0), (-2, 0.5)]
    } else {
        [(-1, -0.5), (0, 0.0), (1, 0.5)]
    }
}

/// Skew-projected rotation derivative `axl(skew(Qᵀ∂Q))` with the
/// grid-quality check: the symmetric residual of `Qᵀ∂Q` must stay below
/// `0.1 ×` its skew part (plus an absolute floor that admits numerically
/// constant rotation fields).
fn checked_rotation_rate(q: &Rot3, dq: &Mat3) -> Result<Vec3> {
    let qtdq = q.matrix().transpose() * dq;
    let sym_res = crate::rotalg::sym(&qtdq).norm();
    let skew_part = Skew3::project(&qtdq);
    let reference = tol::SKEW_RESIDUAL_REL * skew_part.norm() + tol::SKEW_RESIDUAL_ABS;
    if sym_res > reference {
        return Err(Error::GridTooCoarse { residual: sym_res, reference });
    }
    Ok(skew_part.axial())
}

/// Per-sample wryness `Γ♮` of thick fields over a patch.
///
/// Builds, at every lattice node, the tensor
/// `(axl(Qᵀ∂₁Q) | axl(Qᵀ∂₂Q) | (1/h)·axl(Qᵀ∂₃Q))[∇Θ♮]⁻¹` from second-order
/// finite differences (rotation derivatives are skew-projected; the `∂₃`
/// column is divided by the thickness per the scaled-domain chain rule).
///
/// # Errors
///
/// [`Error::GridTooCoarse`] when a skew-projection residual fails the 10%
/// relative bound; surface errors propagate.
pub fn wryness_field(fields: &ThickFields, patch: &MidsurfacePatch) -> Result<Vec<Mat3>> {
    let (n1, n2, n3) = (fields.n1, fields.n2, fields.n3);
    let [x1min, x1max, x2min, x2max] = patch.domain;
    let d1 = (x1max - x1min) / (n1 - 1) as f64;
    let d2 = (x2max - x2min) / (n2 - 1) as f64;
    let d3 = 1.0 / (n3 - 1) as f64;
    let mut out = Vec::with_capacity(n1 * n2 * n3);
    for k in 0..n3 {
        let eta3 = fields.eta3(k);
        for j in 0..n2 {
            let x2 = x2min + d2 * j as f64;
            for i in 0..n1 {
                let x1 = x1min + d1 * i as f64;
                let q = &fields.q[fields.idx(i, j, k)];
                let diff = |axis: usize| -> Mat3 {
                    let (pos, n, step) = match axis {
                        0 => (i, n1, d1),
                        1 => (j, n2, d2),
                        _ => (k, n3, d3),
                    };
                    let mut acc = Mat3::zeros();
                    for (off, w) in fd3_first(pos, n) {
                        if w == 0.0 {
                            continue;
                        }
                        let p = (pos as isize + off) as usize;
                        let idx = match axis {
                            0 => fields.idx(p, j, k),
                            1 => fields.idx(i, p, k),
                            _ => fields.idx(i, j, p),
                        };
                        acc += fields.q[idx].matrix() * w;
                    }
                    acc / step
                };
                let c1 = checked_rotation_rate(q, &diff(0))?;
                let c2 = checked_rotation_rate(q, &diff(1))?;
                let c3 = checked_rotation_rate(q, &diff(2))? / fields.h;
                let frame = frame_at(patch, x1, x2)?;
                let g_nat = grad_theta(&frame, &frame.grad_n0, fields.h * eta3);
                let inv = g_nat
                    .try_inverse()
                    .ok_or(Error::NonInvertible { det: g_nat.determinant() })?;
                out.push(Mat3::from_columns(&[c1, c2, c3]) * inv);
            }
        }
    }
    Ok(out)
}

/// Gauss–Legendre nodes and weights on `[0, 1]`, orders 1–5.
pub(crate) fn gauss_01(n: usize) -> Vec<(f64, f64)> {
    let std: Vec<(f64, f64)> = match n {
        1 => vec![(0.0, 2.0)],
        2 => {
            let a = 1.0 / 3.0_f64.sqrt();
            vec![(-a, 1.0), (a, 1.0)]
        }
        3 => {
            let a = (3.0_f64 / 5.0).sqrt();
            vec![(-a, 5.0 / 9.0), (0.0, 8.0 / 9.0), (a, 5.0 / 9.0)]
        }
        4 => {
            let a = (3.0 / 7.0 - 2.0 / 7.0 * (6.0_f64 / 5.0).sqrt()).sqrt();
            let b = (3.0 / 7.0 + 2.0 / 7.0 * (6.0_f64 / 5.0).sqrt()).sqrt();
            let wa = (18.0 + 30.0_f64.sqrt()) / 36.0;
            let wb = (18.0 - 30.0_f64.sqrt()) / 36.0;
            vec![(-b, wb), (-a, wa), (a, wa), (b, wb)]
        }
        5 => {
            let a = (5.0 - 2.0 * (10.0_f64 / 7.0).sqrt()).sqrt() / 3.0;
            let b = (5.0 + 2.0 * (10.0_f64 / 7.0).sqrt()).sqrt() / 3.0;
            let wa = (322.0 + 13.0 * 70.0_f64.sqrt()) / 900.0;
            let wb = (322.0 - 13.0 * 70.0_f64.sqrt()) / 900.0;
            vec![(-b, wb), (-a, wa), (0.0, 128.0 / 225.0), (a, wa), (b, wb)]
        }
        _ => panic!("gauss order {n} not tabulated (1..=5)"),
    };
    // Affine map from [−1, 1] to [0, 1].
    std.into_iter().map(|(x, w)| (0.5 * (x + 1.0), 0.5 * w)).collect()
}

/// Trapezoid weight of node `i` on an `n`-node line (unit spacing).
pub(crate) fn trapezoid_weight(i: usize, n: usize) -> f64 {
    if i == 0 || i + 1 == n {
        0.5
    } else {
        1.0
    }
}

/// Per-node in-plane data reused across thickness levels.
struct ColumnGeometry {
    frame: SurfaceFrame,
    weight: f64,
}

/// Scaled three-dimensional energy `(1/h)·J♮_h` of thick fields.
///
/// Quadrature: trapezoid in-plane on the field lattice (field derivatives by
/// second-order finite differences), and per-slab Gauss–Legendre with
/// `gauss_per_slab` points through the thickness. Between adjacent `η₃`
/// levels, `φ♮` is interpolated linearly (exact for the thickness-affine
/// recovery ansatz) and `Q̄♮` by entrywise interpolation followed by polar
/// reprojection; `∂₃` is the slab difference quotient.
///
/// # Errors
///
/// Propagates [`Error::GridTooCoarse`], [`Error::DegenerateSurface`], and
/// inversion failures of `∇Θ♮`.
pub fn scaled_energy(
    fields: &ThickFields,
    patch: &MidsurfacePatch,
    mat: &MaterialParams,
    gauss_per_slab: usize,
) -> Result<f64> {
    let (n1, n2, n3) = (fields.n1, fields.n2, fields.n3);
    let [x1min, x1max, x2min, x2max] = patch.domain;
    let d1 = (x1max - x1min) / (n1 - 1) as f64;
    let d2 = (x2max - x2min) / (n2 - 1) as f64;
    let d3 = 1.0 / (n3 - 1) as f64;
    let gauss = gauss_01(gauss_per_slab);

    // In-plane geometry, shared by all slabs.
    let mut columns = Vec::with_capacity(n1 * n2);
    for j in 0..n2 {
        for i in 0..n1 {
            let x1 = x1min + d1 * i as f64;
            let x2 = x2min + d2 * j as f64;
            let frame = frame_at(patch, x1, x2)?;
            let weight = trapezoid_weight(i, n1) * trapezoid_weight(j, n2) * d1 * d2;
            columns.push(ColumnGeometry { frame, weight });
        }
    }

    // In-plane derivative fields per level: ∂₁φ, ∂₂φ and the skew-projected
    // rotation columns axl(Qᵀ∂ᵢQ), i = 1, 2.
    let mut dphi_ip = vec![[Vec3::zeros(); 2]; n1 * n2 * n3];
    let mut aq_ip = vec![[Vec3::zeros(); 2]; n1 * n2 * n3];
    for k in 0..n3 {
        for j in 0..n2 {
            for i in 0..n1 {
                let id = fields.idx(i, j, k);
                let q = &fields.q[id];
                for axis in 0..2 {
                    let (pos, n, step) = if axis == 0 { (i, n1, d1) } else { (j, n2, d2) };
                    let mut dphi = Vec3::zeros();
                    let mut dq = Mat3::zeros();
                    for (off, w) in fd3_first(pos, n) {
                        if w == 0.0 {
                            continue;
                        }
                        let p = (pos as isize + off) as usize;
                        let nid =
                            if axis == 0 { fields.idx(p, j, k) } else { fields.idx(i, p, k) };
                        dphi += fields.phi[nid] * w;
                        dq += fields.q[nid].matrix() * w;
                    }
                    dphi_ip[id][axis] = dphi / step;
                    aq_ip[id][axis] = checked_rotation_rate(q, &(dq / step))?;
                }
            }
        }
    }

    // Per-slab Gauss through the thickness; rows are independent.
    let row_energies: Vec<Result<f64>> = (0..n2)
        .into_par_iter()
        .map(|j| {
            let mut acc = 0.0;
            for k in 0..n3 - 1 {
                let eta_lo = fields.eta3(k);
                for &(t, wq) in &gauss {
                    let eta3 = eta_lo + t * d3;
                    for i in 0..n1 {
                        let col = &columns[j * n1 + i];
                        let lo = fields.idx(i, j, k);
                        let hi = fields.idx(i, j, k + 1);

                        let x3 = fields.h * eta3;
                        let g_nat = grad_theta(&col.frame, &col.frame.grad_n0, x3);
                        let inv = g_nat
                            .try_inverse()
                            .ok_or(Error::NonInvertible { det: g_nat.determinant() })?;
                        let det = det_grad_theta(&col.frame, x3);

                        // Deformation gradient columns at the Gauss point.
                        let dphi1 = dphi_ip[lo][0] * (1.0 - t) + dphi_ip[hi][0] * t;
                        let dphi2 = dphi_ip[lo][1] * (1.0 - t) + dphi_ip[hi][1] * t;
                        let dphi3 = (fields.phi[hi] - fields.phi[lo]) / d3;

                        // Rotation slice by interpolation + polar projection.
                        let blend =
                            fields.q[lo].matrix() * (1.0 - t) + fields.q[hi].matrix() * t;
                        let (qs, _) = polar_decompose(&blend)?;

                        let grad_nat = Mat3::from_columns(&[dphi1, dphi2, dphi3 / fields.h]);
                        let u_bar = qs.matrix().transpose() * grad_nat * inv;

                        // Wryness columns.
                        let c1 = aq_ip[lo][0] * (1.0 - t) + aq_ip[hi][0] * t;
                        let c2 = aq_ip[lo][1] * (1.0 - t) + aq_ip[hi][1] * t;
                        let dq3 = (fields.q[hi].matrix() - fields.q[lo].matrix()) / d3;
                        let c3 = checked_rotation_rate(&qs, &dq3)? / fields.h;
                        let gamma = Mat3::from_columns(&[c1, c2, c3]) * inv;

                        acc += wq
                            * d3
                            * col.weight
                            * (w_mp(&u_bar, mat) + w_curv_tilde(&gamma, mat))
                            * det;
                    }
                }
            }
            Ok(acc)
        })
        .collect();
    let mut total = 0.0;
    for r in row_energies {
        total += r?;
    }
    Ok(total)
}

/// Coercivity sandwich of the membrane density: returns
/// `(c₁⁺‖sym X‖² + μ_c‖skew X‖², W_mp-form(X), C₁⁺‖sym X‖² + μ_c‖skew X‖²)`
/// where `X = U − I` and `c₁⁺ ≤ C₁⁺` are the extreme eigenvalues of the
/// quadratic form `S ↦ μ‖dev S‖² + (κ_bulk/2)[tr S]²` on `Sym(3)`, computed
/// numerically from its 6×6 matrix in an orthonormal basis.
pub fn coercivity_margin(u: &Mat3, mat: &MaterialParams) -> (f64, f64, f64) {
    let x = u - Mat3::identity();
    let s = crate::rotalg::sym(&x);
    let w = crate::rotalg::skew(&x);
    let (c_lo, c_hi) = sym_form_eigen_bounds(mat);
    let lower = c_lo * s.norm_squared() + mat.mu_c * w.norm_squared();
    let upper = c_hi * s.norm_squared() + mat.mu_c * w.norm_squared();
    let value = w_mp(u, mat);
    debug_assert!(lower <= value + 1e-12 * (1.0 + value.abs()));
    debug_assert!(value <= upper + 1e-12 * (1.0 + value.abs()));
    (lower, value, upper)
}

/// Extreme eigenvalues `(c₁⁺, C₁⁺)` of the symmetric-block membrane form on
/// `Sym(3)` via its 6×6 Gram matrix in an orthonormal tensor basis.
pub fn sym_form_eigen_bounds(mat: &MaterialParams) -> (f64, f64) {
    // Orthonormal basis of Sym(3): 3 diagonal units, 3 normalized off-diagonal
    // pairs.
    let mut basis = Vec::with_capacity(6);
    for d in 0..3 {
        let mut e = Mat3::zeros();
        e[(d, d)] = 1.0;
        basis.push(e);
    }
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    for (p, q) in [(0, 1), (0, 2), (1, 2)] {
        let mut e = Mat3::zeros();
        e[(p, q)] = inv_sqrt2;
        e[(q, p)] = inv_sqrt2;
        basis.push(e);
    }
    let form = |s: &Mat3| {
        let (dev, _, tr) = crate::rotalg::cartan_split(s);
        mat.mu * dev.norm_squared() + 0.5 * mat.kappa_bulk * tr * tr
    };
    // Gram matrix by polarization: G_ij = ½[f(bᵢ+bⱼ) − f(bᵢ) − f(bⱼ)].
    let mut gram = nalgebra::SMatrix::<f64, 6, 6>::zeros();
    for i in 0..6 {
        for j in 0..6 {
            let fij = form(&(basis[i] + basis[j]));
            gram[(i, j)] = 0.5 * (fij - form(&basis[i]) - form(&basis[j]));
        }
    }
    let eig = gram.symmetric_eigenvalues();
    (eig.min(), eig.max())
}
