//! Geometry of the curved reference midsurface.
//!
//! A midsurface patch is a C² parametrization `y₀: ω ⊂ ℝ² → ℝ³` on a
//! rectangle. The associated three-dimensional reference map is
//! `Θ(x₁, x₂, x₃) = y₀(x₁, x₂) + x₃ n₀(x₁, x₂)` with unit normal
//! `n₀ = ∂₁y₀ × ∂₂y₀ / ‖∂₁y₀ × ∂₂y₀‖`, so that
//! `∇Θ(0) = (∇y₀ | n₀)` and `∇Θ(x₃) = (∇y₀ | n₀) + x₃ (∇n₀ | 0)`.
//!
//! The determinant factorizes as
//! `det ∇Θ(x₃) = det(∇y₀ | n₀) · (1 − 2H x₃ + K x₃²)`, where `H` and `K` are
//! the mean and Gauss curvatures. (A normalized variant without the leading
//! area-element factor is common for flat-plate conventions; this library
//! always carries the factor.) A thickness `h` is admissible when
//! `h · max{|κ₁|, |κ₂|} < 2` over the sampled patch, which keeps
//! `det ∇Θ(x₃) > 0` through the slab.

use crate::error::{Error, Result};
use crate::rotalg::{anti, polar_decompose, Rot3};
use crate::{tol, Mat2, Mat3, Mat3x2, Vec3};

/// Bivariate polynomial `Σ c · x₁^i · x₂^j`, used by the graph patch kind.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly2 {
    /// Terms `(i, j, c)` of the polynomial.
    pub terms: Vec<(u32, u32, f64)>,
}

impl Poly2 {
    /// Evaluates the polynomial at `(x1, x2)`.
    pub fn eval(&self, x1: f64, x2: f64) -> f64 {
        self.terms.iter().map(|&(i, j, c)| c * x1.powi(i as i32) * x2.powi(j as i32)).sum()
    }

    /// Analytic partial derivative `∂^(d1+d2) / ∂x₁^d1 ∂x₂^d2`.
    pub fn derivative(&self, d1: u32, d2: u32) -> Poly2 {
        let mut terms = Vec::new();
        for &(i, j, c) in &self.terms {
            if i < d1 || j < d2 {
                continue;
            }
            let mut coeff = c;
            for k in 0..d1 {
                coeff *= (i - k) as f64;
            }
            for k in 0..d2 {
                coeff *= (j - k) as f64;
            }
            terms.push((i - d1, j - d2, coeff));
        }
        Poly2 { terms }
    }
}

/// Tabulated surface samples on a uniform grid, read from a plain-text file.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedGrid {
    /// Number of grid nodes along `x₁`.
    pub nx: usize,
    /// Number of grid nodes along `x₂`.
    pub ny: usize,
    /// Row-major node values of `y₀` (`x₁` varying fastest along a row).
    pub values: Vec<Vec3>,
}

/// Preset kinds of midsurface parametrization.
#[derive(Debug, Clone, PartialEq)]
pub enum PatchKind {
    /// Identity plate `y₀ = (x₁, x₂, 0)`.
    Plate,
    /// Circular cylinder `y₀ = (R cos x₁, R sin x₁, x₂)`.
    Cylinder {
        /// Cylinder radius `R > 0`.
        radius: f64,
    },
    /// Spherical cap as the graph `y₀ = (x₁, x₂, √(R² − x₁² − x₂²))`
    /// (umbilic: `κ₁ = κ₂`, `|κᵢ| = 1/R`). The domain must stay strictly
    /// inside the open disk of radius `R`.
    SphereCap {
        /// Sphere radius `R > 0`.
        radius: f64,
    },
    /// Graph surface `y₀ = (x₁, x₂, g(x₁, x₂))` for a polynomial `g`.
    Graph {
        /// Height function `g`.
        g: Poly2,
    },
    /// Tabulated grid with finite-difference derivatives (4th-order central
    /// stencils, one-sided closures at the boundary).
    Tabulated {
        /// The sample table.
        grid: TabulatedGrid,
    },
}

/// A midsurface patch: parametrization kind plus its rectangular domain.
#[derive(Debug, Clone, PartialEq)]
pub struct MidsurfacePatch {
    /// The parametrization.
    pub kind: PatchKind,
    /// Domain rectangle `[x₁ᵐⁱⁿ, x₁ᵐᵃˣ] × [x₂ᵐⁱⁿ, x₂ᵐᵃˣ]`.
    pub domain: [f64; 4],
}

/// First and second derivatives of `y₀` at a point.
#[derive(Debug, Clone, Copy)]
pub struct SurfaceJet {
    /// `y₀`.
    pub y: Vec3,
    /// `∂₁y₀`.
    pub d1: Vec3,
    /// `∂₂y₀`.
    pub d2: Vec3,
    /// `∂₁₁y₀`.
    pub d11: Vec3,
    /// `∂₁₂y₀`.
    pub d12: Vec3,
    /// `∂₂₂y₀`.
    pub d22: Vec3,
}

impl MidsurfacePatch {
    /// Identity plate on the given domain.
    pub fn plate(domain: [f64; 4]) -> Self {
        Self { kind: PatchKind::Plate, domain }
    }

    /// Cylinder of the given radius on the given `(angle, axial)` domain.
    pub fn cylinder(radius: f64, domain: [f64; 4]) -> Self {
        Self { kind: PatchKind::Cylinder { radius }, domain }
    }

    /// Spherical cap of the given radius on the given domain (must stay
    /// inside the open disk `x₁² + x₂² < R²`).
    pub fn sphere_cap(radius: f64, domain: [f64; 4]) -> Self {
        Self { kind: PatchKind::SphereCap { radius }, domain }
    }

    /// Graph patch `z = g(x₁, x₂)`.
    pub fn graph(g: Poly2, domain: [f64; 4]) -> Self {
        Self { kind: PatchKind::Graph { g }, domain }
    }

    /// Parses a tabulated patch from its plain-text representation.
    ///
    /// Format: a header line `nx ny x1min x1max x2min x2max`, then `nx·ny`
    /// lines `y01 y02 y03` in row-major order (`x₁` varying fastest).
    ///
    /// # Errors
    ///
    /// [`Error::Parse`] on malformed content; a 5×5 grid is the minimum for
    /// the 4th-order stencils.
    pub fn tabulated_from_str(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty grid file".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 6 {
            return Err(Error::Parse(format!(
                "grid header needs 6 fields (nx ny x1min x1max x2min x2max), got {}",
                fields.len()
            )));
        }
        let nx: usize =
            fields[0].parse().map_err(|_| Error::Parse("bad nx in grid header".into()))?;
        let ny: usize =
            fields[1].parse().map_err(|_| Error::Parse("bad ny in grid header".into()))?;
        let mut dom = [0.0; 4];
        for (k, f) in fields[2..].iter().enumerate() {
            dom[k] = f.parse().map_err(|_| Error::Parse("bad domain bound in grid header".into()))?;
        }
        if nx < 5 || ny < 5 {
            return Err(Error::Parse("tabulated grid needs at least 5x5 nodes".into()));
        }
        let mut values = Vec::with_capacity(nx * ny);
        for line in lines {
            let comps: Vec<&str> = line.split_whitespace().collect();
            if comps.len() != 3 {
                return Err(Error::Parse(format!("grid row needs 3 components: {line:?}")));
            }
            let mut v = [0.0; 3];
            for (k, c) in comps.iter().enumerate() {
                v[k] = c.parse().map_err(|_| Error::Parse(format!("bad number: {c:?}")))?;
            }
            values.push(Vec3::new(v[0], v[1], v[2]));
        }
        if values.len() != nx * ny {
            return Err(Error::Parse(format!(
                "expected {} grid rows, got {}",
                nx * ny,
                values.len()
            )));
        }
        Ok(Self { kind: PatchKind::Tabulated { grid: TabulatedGrid { nx, ny, values } }, domain: dom })
    }

    /// Reads a tabulated patch from a file (see [`Self::tabulated_from_str`]).
    pub fn tabulated_from_file(path: &std::path::Path) -> Result<Self> {
        Self::tabulated_from_str(&std::fs::read_to_string(path)?)
    }

    /// Position and first/second derivatives of `y₀` at `(x1, x2)`.
    pub fn jet(&self, x1: f64, x2: f64) -> SurfaceJet {
        match &self.kind {
            PatchKind::Plate => SurfaceJet {
                y: Vec3::new(x1, x2, 0.0),
                d1: Vec3::new(1.0, 0.0, 0.0),
                d2: Vec3::new(0.0, 1.0, 0.0),
                d11: Vec3::zeros(),
                d12: Vec3::zeros(),
                d22: Vec3::zeros(),
            },
            PatchKind::Cylinder { radius } => {
                let r = *radius;
                let (s, c) = x1.sin_cos();
                SurfaceJet {
                    y: Vec3::new(r * c, r * s, x2),
                    d1: Vec3::new(-r * s, r * c, 0.0),
                    d2: Vec3::new(0.0, 0.0, 1.0),
                    d11: Vec3::new(-r * c, -r * s, 0.0),
                    d12: Vec3::zeros(),
                    d22: Vec3::zeros(),
                }
            }
            PatchKind::SphereCap { radius } => {
                let r2 = radius * radius;
                let w = (r2 - x1 * x1 - x2 * x2).sqrt();
                let w3 = w * w * w;
                SurfaceJet {
                    y: Vec3::new(x1, x2, w),
                    d1: Vec3::new(1.0, 0.0, -x1 / w),
                    d2: Vec3::new(0.0, 1.0, -x2 / w),
                    d11: Vec3::new(0.0, 0.0, -(r2 - x2 * x2) / w3),
                    d12: Vec3::new(0.0, 0.0, -x1 * x2 / w3),
                    d22: Vec3::new(0.0, 0.0, -(r2 - x1 * x1) / w3),
                }
            }
            PatchKind::Graph { g } => SurfaceJet {
                y: Vec3::new(x1, x2, g.eval(x1, x2)),
                d1: Vec3::new(1.0, 0.0, g.derivative(1, 0).eval(x1, x2)),
                d2: Vec3::new(0.0, 1.0, g.derivative(0, 1).eval(x1, x2)),
                d11: Vec3::new(0.0, 0.0, g.derivative(2, 0).eval(x1, x2)),
                d12: Vec3::new(0.0, 0.0, g.derivative(1, 1).eval(x1, x2)),
                d22: Vec3::new(0.0, 0.0, g.derivative(0, 2).eval(x1, x2)),
            },
            PatchKind::Tabulated { grid } => self.tabulated_jet(grid, x1, x2),
        }
    }

    /// Jet of a tabulated patch: nodal derivatives by 4th-order finite
    /// differences, bilinear interpolation between nodes.
    fn tabulated_jet(&self, grid: &TabulatedGrid, x1: f64, x2: f64) -> SurfaceJet {
        let [x1min, x1max, x2min, x2max] = self.domain;
        let hx = (x1max - x1min) / (grid.nx - 1) as f64;
        let hy = (x2max - x2min) / (grid.ny - 1) as f64;
        let fx = ((x1 - x1min) / hx).clamp(0.0, (grid.nx - 1) as f64);
        let fy = ((x2 - x2min) / hy).clamp(0.0, (grid.ny - 1) as f64);
        let i0 = (fx.floor() as usize).min(grid.nx - 2);
        let j0 = (fy.floor() as usize).min(grid.ny - 2);
        let tx = fx - i0 as f64;
        let ty = fy - j0 as f64;

        // Nodal jets at the four cell corners, bilinearly blended.
        let mut out = [Vec3::zeros(); 6];
        for (di, dj, w) in [
            (0usize, 0usize, (1.0 - tx) * (1.0 - ty)),
            (1, 0, tx * (1.0 - ty)),
            (0, 1, (1.0 - tx) * ty),
            (1, 1, tx * ty),
        ] {
            let nodal = tabulated_nodal_jet(grid, i0 + di, j0 + dj, hx, hy);
            for (acc, v) in out.iter_mut().zip(nodal) {
                *acc += v * w;
            }
        }
        SurfaceJet { y: out[0], d1: out[1], d2: out[2], d11: out[3], d12: out[4], d22: out[5] }
    }
}

/// 4th-order finite-difference weights for the first derivative at offset
/// `pos` within a 5-point window starting `start` nodes to the left.
fn fd5_first(pos: usize) -> [f64; 5] {
    // One-sided/centered 5-point stencils on a unit grid, position 0..4.
    match pos {
        0 => [-25.0 / 12.0, 4.0, -3.0, 4.0 / 3.0, -0.25],
        1 => [-0.25, -5.0 / 6.0, 1.5, -0.5, 1.0 / 12.0],
        2 => [1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0],
        3 => [-1.0 / 12.0, 0.5, -1.5, 5.0 / 6.0, 0.25],
        _ => [0.25, -4.0 / 3.0, 3.0, -4.0, 25.0 / 12.0],
    }
}

/// 4th-order (interior) / 2nd-order-plus (boundary) 5-point weights for the
/// second derivative.
fn fd5_second(pos: usize) -> [f64; 5] {
    match pos {
        0 => [35.0 / 12.0, -26.0 / 3.0, 9.5, -14.0 / 3.0, 11.0 / 12.0],
        1 => [11.0 / 12.0, -5.0 / 3.0, 0.5, 1.0 / 3.0, -1.0 / 12.0],
        2 => [-1.0 / 12.0, 4.0 / 3.0, -2.5, 4.0 / 3.0, -1.0 / 12.0],
        3 => [-1.0 / 12.0, 1.0 / 3.0, 0.5, -5.0 / 3.0, 11.0 / 12.0],
        _ => [11.0 / 12.0, -14.0 / 3.0, 9.5, -26.0 / 3.0, 35.0 / 12.0],
    }
}

/// Nodal jet of a tabulated grid at node `(i, j)` from 5-point stencils.
fn tabulated_nodal_jet(grid: &TabulatedGrid, i: usize, j: usize, hx: f64, hy: f64) -> [Vec3; 6] {
    let at = |ii: usize, jj: usize| grid.values[jj * grid.nx + ii];
    let window = |idx: usize, n: usize| -> (usize, usize) {
        // Window start and in-window position for a 5-point stencil.
        let start = idx.saturating_sub(2).min(n - 5);
        (start, idx - start)
    };
    let (sx, px) = window(i, grid.nx);
    let (sy, py) = window(j, grid.ny);
    let w1x = fd5_first(px);
    let w2x = fd5_second(px);
    let w1y = fd5_first(py);
    let w2y = fd5_second(py);

    let mut d1 = Vec3::zeros();
    let mut d11 = Vec3::zeros();
    for k in 0..5 {
        d1 += at(sx + k, j) * w1x[k];
        d11 += at(sx + k, j) * w2x[k];
    }
    let mut d2 = Vec3::zeros();
    let mut d22 = Vec3::zeros();
    for k in 0..5 {
        d2 += at(i, sy + k) * w1y[k];
        d22 += at(i, sy + k) * w2y[k];
    }
    let mut d12 = Vec3::zeros();
    for kx in 0..5 {
        for ky in 0..5 {
            d12 += at(sx + kx, sy + ky) * (w1x[kx] * w1y[ky]);
        }
    }
    [
        at(i, j),
        d1 / hx,
        d2 / hy,
        d11 / (hx * hx),
        d12 / (hx * hy),
        d22 / (hy * hy),
    ]
}

/// Pointwise geometry of the midsurface: frame, fundamental forms,
/// curvatures, and shell projectors.
#[derive(Debug, Clone)]
pub struct SurfaceFrame {
    /// Surface point `y₀`.
    pub y0: Vec3,
    /// Surface gradient `∇y₀ = (∂₁y₀ | ∂₂y₀)`.
    pub grad_y0: Mat3x2,
    /// Unit normal `n₀`.
    pub n0: Vec3,
    /// Normal gradient `∇n₀ = (∂₁n₀ | ∂₂n₀)`.
    pub grad_n0: Mat3x2,
    /// `∇Θ(0) = (∇y₀ | n₀)`.
    pub grad_theta0: Mat3,
    /// Inverse `[∇Θ(0)]⁻¹`.
    pub inv_grad_theta0: Mat3,
    /// Polar rotation `Q₀ = polar(∇Θ(0))`.
    pub q0: Rot3,
    /// Symmetric positive definite stretch `U₀` with `∇Θ(0) = Q₀ U₀`.
    pub u0: Mat3,
    /// Area element `det ∇Θ(0) = √(det I_{y₀})`.
    pub det_grad_theta0: f64,
    /// First fundamental form `I_{y₀} = (∇y₀)ᵀ∇y₀`.
    pub first_ff: Mat2,
    /// Second fundamental form `II_{y₀} = −(∇y₀)ᵀ∇n₀`.
    pub second_ff: Mat2,
    /// Weingarten map `L_{y₀} = I⁻¹ II`.
    pub weingarten: Mat2,
    /// Mean curvature `H = ½ tr L`.
    pub mean_curvature: f64,
    /// Gauss curvature `K = det L`.
    pub gauss_curvature: f64,
    /// Principal curvatures `(κ₁, κ₂)`, ordered `κ₁ ≥ κ₂`.
    pub principal_curvatures: (f64, f64),
    /// Tangent projector `A_{y₀} = (∇y₀|0)[∇Θ(0)]⁻¹ = I − n₀⊗n₀`.
    pub a_y0: Mat3,
    /// Curvature tensor `B_{y₀} = −(∇n₀|0)[∇Θ(0)]⁻¹`.
    pub b_y0: Mat3,
    /// Alternator tensor
    /// `C_{y₀} = det∇Θ(0) · [∇Θ(0)]⁻ᵀ · E₃ · [∇Θ(0)]⁻¹` with
    /// `E₃ = anti(e₃)ᵀ`-patterned middle matrix (rows `[0,1,0]`, `[−1,0,0]`,
    /// `[0,0,0]`).
    pub c_y0: Mat3,
}

/// Evaluates the full [`SurfaceFrame`] of `patch` at `(x1, x2)`.
///
/// # Errors
///
/// - [`Error::DegenerateSurface`] when `‖∂₁y₀ × ∂₂y₀‖ <` [`tol::IMMERSION`].
/// - [`Error::ComplexCurvature`] when the Weingarten eigenvalues acquire an
///   imaginary part beyond [`tol::CURVATURE_IMAG`] (possible only for
///   corrupted tabulated data).
///
/// # Example
///
/// A sphere of radius `R` has principal curvatures of magnitude `1/R` (the
/// sign follows the normal orientation) and Gauss curvature `1/R²`:
///
/// ```
/// use shellkit::surface::{frame_at, MidsurfacePatch};
///
/// let r = 2.0;
/// let patch = MidsurfacePatch::sphere_cap(r, [-0.5, 0.5, -0.5, 0.5]);
/// let frame = frame_at(&patch, 0.1, -0.2).unwrap();
/// let (k1, k2) = frame.principal_curvatures;
/// assert!((k1.abs() - 1.0 / r).abs() < 1e-9 && (k2.abs() - 1.0 / r).abs() < 1e-9);
/// assert!((frame.gauss_curvature - 1.0 / (r * r)).abs() < 1e-9);
/// ```
pub fn frame_at(patch: &MidsurfacePatch, x1: f64, x2: f64) -> Result<SurfaceFrame> {
    let jet = patch.jet(x1, x2);
    let cross = jet.d1.cross(&jet.d2);
    let area = cross.norm();
    if area < tol::IMMERSION {
        return Err(Error::DegenerateSurface { x1, x2, norm: area });
    }
    let n0 = cross / area;

    // ∂ᵢn₀ from the quotient rule on n = w/‖w‖, w = ∂₁y₀ × ∂₂y₀.
    let dw1 = jet.d11.cross(&jet.d2) + jet.d1.cross(&jet.d12);
    let dw2 = jet.d12.cross(&jet.d2) + jet.d1.cross(&jet.d22);
    let dn1 = (dw1 - n0 * n0.dot(&dw1)) / area;
    let dn2 = (dw2 - n0 * n0.dot(&dw2)) / area;

    let grad_y0 = Mat3x2::from_columns(&[jet.d1, jet.d2]);
    let grad_n0 = Mat3x2::from_columns(&[dn1, dn2]);
    let grad_theta0 = compose_3x2_col(&grad_y0, &n0);
    let det0 = grad_theta0.determinant();
    let inv = grad_theta0.try_inverse().ok_or(Error::NonInvertible { det: det0 })?;

    let first_ff = grad_y0.transpose() * grad_y0;
    let second_ff = -(grad_y0.transpose() * grad_n0);
    let weingarten = first_ff.try_inverse().ok_or(Error::NonInvertible { det: first_ff.determinant() })? * second_ff;

    let h = 0.5 * weingarten.trace();
    let k = weingarten.determinant();
    // Principal curvatures: eigenvalues of the 2×2 Weingarten map, which is
    // similar to a symmetric matrix in exact arithmetic. The discriminant
    // H² − K can only dip below zero by roundoff; larger dips are an error.
    let disc = h * h - k;
    let scale = weingarten.norm().max(1.0);
    if disc < -tol::CURVATURE_IMAG * scale * scale {
        return Err(Error::ComplexCurvature((-disc).sqrt()));
    }
    let root = disc.max(0.0).sqrt();
    let principal = (h + root, h - root);

    let (q0, u0) = polar_decompose(&grad_theta0)?;
    let a_y0 = compose_3x2_col(&grad_y0, &Vec3::zeros()) * inv;
    let b_y0 = -(compose_3x2_col(&grad_n0, &Vec3::zeros()) * inv);
    let e3_mid = anti(Vec3::new(0.0, 0.0, -1.0)).matrix(); // rows [0,1,0], [-1,0,0], [0,0,0]
    let c_y0 = inv.transpose() * e3_mid * inv * det0;

    Ok(SurfaceFrame {
        y0: jet.y,
        grad_y0,
        n0,
        grad_n0,
        grad_theta0,
        inv_grad_theta0: inv,
        q0,
        u0,
        det_grad_theta0: det0,
        first_ff,
        second_ff,
        weingarten,
        mean_curvature: h,
        gauss_curvature: k,
        principal_curvatures: principal,
        a_y0,
        b_y0,
        c_y0,
    })
}

/// Assembles the 3×3 matrix `(M | v)` from a 3×2 block and a third column.
pub fn compose_3x2_col(m: &Mat3x2, v: &Vec3) -> Mat3 {
    Mat3::from_columns(&[m.column(0).into(), m.column(1).into(), *v])
}

/// `∇Θ(x₃) = (∇y₀ | n₀) + x₃ (∇n₀ | 0)`.
pub fn grad_theta(frame: &SurfaceFrame, grad_n0: &Mat3x2, x3: f64) -> Mat3 {
    frame.grad_theta0 + compose_3x2_col(grad_n0, &Vec3::zeros()) * x3
}

/// `det ∇Θ(x₃) = det ∇Θ(0) · (1 − 2H x₃ + K x₃²)`.
pub fn det_grad_theta(frame: &SurfaceFrame, x3: f64) -> f64 {
    frame.det_grad_theta0
        * (1.0 - 2.0 * frame.mean_curvature * x3 + frame.gauss_curvature * x3 * x3)
}

/// Thickness admissibility `h · max{|κ₁|, |κ₂|} < 2` over an
/// `samples.0 × samples.1` grid of the patch domain.
///
/// # Errors
///
/// Propagates frame evaluation failures (degenerate surface points).
pub fn thickness_admissible(
    patch: &MidsurfacePatch,
    h: f64,
    samples: (usize, usize),
) -> Result<bool> {
    assert!(h > 0.0, "thickness must be positive");
    let mut kappa_max: f64 = 0.0;
    let [x1min, x1max, x2min, x2max] = patch.domain;
    let (n1, n2) = (samples.0.max(2), samples.1.max(2));
    for i in 0..n1 {
        for j in 0..n2 {
            let x1 = x1min + (x1max - x1min) * (i as f64) / ((n1 - 1) as f64);
            let x2 = x2min + (x2max - x2min) * (j as f64) / ((n2 - 1) as f64);
            let frame = frame_at(patch, x1, x2)?;
            let (k1, k2) = frame.principal_curvatures;
            kappa_max = kappa_max.max(k1.abs()).max(k2.abs());
        }
    }
    Ok(h * kappa_max < 2.0)
}

/// Shell projectors `(A_{y₀}, B_{y₀}, C_{y₀})` of a frame.
///
/// `A` is symmetric idempotent with `A = I − n₀⊗n₀`; `C` is skew; all three
/// annihilate the normal: `A n₀ = B n₀ = C n₀ = 0`.
pub fn projectors(frame: &SurfaceFrame, grad_n0: &Mat3x2) -> (Mat3, Mat3, Mat3) {
    let b = -(compose_3x2_col(grad_n0, &Vec3::zeros()) * frame.inv_grad_theta0);
    (frame.a_y0, b, frame.c_y0)
}
