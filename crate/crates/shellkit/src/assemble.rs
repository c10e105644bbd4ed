//! Discretization of the midsurface domain, the total limit functional with
//! external loads, gradients on ℝ³ × SO(3), and energy minimization.
//!
//! The total functional is `I₀ = J₀ − Π`: the limit energy
//! `J₀ = ∫_ω [W_mp^hom(E) + W̃_curv^hom(K)]·det ∇Θ(0) dω` minus the load
//! potential. The limit density carries no explicit thickness; this module
//! applies the descaling prefactor `h` to both the energy and the loads, so
//! `I₀` is the descaled physical functional (the unscaled `J₀` used by the
//! thin-limit harness is exposed separately).
//!
//! Discretization: a rectangular node lattice over ω; field derivatives by
//! second-order central differences (one-sided second order at the
//! boundary); integration by the trapezoid rule on the same nodes, which is
//! the exact integral of the bilinear interpolant of the nodal densities.
//! Rotation unknowns live on SO(3) as matrices; steps are taken along
//! left-trivialized tangents through the retraction `Q ← Q·exp(anti(−αg))`,
//! which preserves the rotation invariants exactly.

use std::io::Write as _;

use crate::cosserat3d::{fd3_first, trapezoid_weight, MaterialParams};
use crate::error::{Error, Result};
use crate::rotalg::{anti, axl, exp_so3, skew, sym, Rot3, Skew3};
use crate::shellcore::{bendcurv_k, w_curv_hom, w_mp_hom};
use crate::surface::{compose_3x2_col, frame_at, MidsurfacePatch, SurfaceFrame};
use crate::{tol, Mat3, Mat3x2, Vec3};

/// Rectangular node lattice over the patch domain with a Dirichlet mask on
/// a boundary subset `γ ⊂ ∂ω`.
#[derive(Debug, Clone)]
pub struct ShellGrid {
    /// Nodes along `x₁`.
    pub n1: usize,
    /// Nodes along `x₂`.
    pub n2: usize,
    /// Domain rectangle (mirrors the patch domain).
    pub domain: [f64; 4],
    /// Dirichlet mask for `m` (true = prescribed node).
    pub dirichlet: Vec<bool>,
}

impl ShellGrid {
    /// Builds a grid over `patch.domain`.
    ///
    /// # Errors
    ///
    /// [`Error::Mismatch`] when either dimension is below 3 (the central
    /// difference stencils need three nodes).
    pub fn new(n1: usize, n2: usize, patch: &MidsurfacePatch) -> Result<Self> {
        if n1 < 3 || n2 < 3 {
            return Err(Error::Mismatch(format!("grid must be at least 3x3, got {n1}x{n2}")));
        }
        Ok(Self { n1, n2, domain: patch.domain, dirichlet: vec![false; n1 * n2] })
    }

    /// Marks the four domain edges as Dirichlet (`γ = ∂ω`, clamped).
    pub fn clamp_boundary(mut self) -> Self {
        for j in 0..self.n2 {
            for i in 0..self.n1 {
                if i == 0 || j == 0 || i + 1 == self.n1 || j + 1 == self.n2 {
                    self.dirichlet[j * self.n1 + i] = true;
                }
            }
        }
        self
    }

    /// Marks the edge `x₁ = x₁ᵐⁱⁿ` as Dirichlet (`γ` = left edge).
    pub fn clamp_left_edge(mut self) -> Self {
        for j in 0..self.n2 {
            self.dirichlet[j * self.n1] = true;
        }
        self
    }

    /// Flat node index.
    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.n1 + i
    }

    /// Node spacing `(Δx₁, Δx₂)`.
    pub fn spacing(&self) -> (f64, f64) {
        (
            (self.domain[1] - self.domain[0]) / (self.n1 - 1) as f64,
            (self.domain[3] - self.domain[2]) / (self.n2 - 1) as f64,
        )
    }

    /// Coordinates of node `(i, j)`.
    pub fn coords(&self, i: usize, j: usize) -> (f64, f64) {
        let (d1, d2) = self.spacing();
        (self.domain[0] + d1 * i as f64, self.domain[2] + d2 * j as f64)
    }

    /// Trapezoid quadrature weight (area measure) of node `(i, j)`.
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        let (d1, d2) = self.spacing();
        trapezoid_weight(i, self.n1) * trapezoid_weight(j, self.n2) * d1 * d2
    }
}

/// Per-node unknowns of the reduced model.
#[derive(Debug, Clone)]
pub struct ShellState {
    /// Midsurface deformation samples `m`.
    pub m: Vec<Vec3>,
    /// Microrotation samples `Q̄`.
    pub q: Vec<Rot3>,
}

impl ShellState {
    /// The identity configuration `m = y₀`, `Q̄ = I`, which has exactly zero
    /// strain (`Q̄ᵀ∇m = ∇y₀`) and zero bending-curvature on any patch.
    ///
    /// # Errors
    ///
    /// Propagates surface evaluation failures.
    pub fn identity(grid: &ShellGrid, patch: &MidsurfacePatch) -> Result<Self> {
        let mut m = Vec::with_capacity(grid.n1 * grid.n2);
        for j in 0..grid.n2 {
            for i in 0..grid.n1 {
                let (x1, x2) = grid.coords(i, j);
                m.push(patch.jet(x1, x2).y);
            }
        }
        Ok(Self { m, q: vec![Rot3::identity(); grid.n1 * grid.n2] })
    }

    /// Builds a state by sampling closures of the node coordinates.
    pub fn from_fn(
        grid: &ShellGrid,
        m: impl Fn(f64, f64) -> Vec3,
        q: impl Fn(f64, f64) -> Rot3,
    ) -> Self {
        let mut ms = Vec::with_capacity(grid.n1 * grid.n2);
        let mut qs = Vec::with_capacity(grid.n1 * grid.n2);
        for j in 0..grid.n2 {
            for i in 0..grid.n1 {
                let (x1, x2) = grid.coords(i, j);
                ms.push(m(x1, x2));
                qs.push(q(x1, x2));
            }
        }
        Self { m: ms, q: qs }
    }

    /// Serializes the checkpoint format: a header line `n1 n2`, then one
    /// line per node `m1 m2 m3 q11 q12 q13 q21 q22 q23 q31 q32 q33`
    /// (row-major rotation entries, `x₁` fastest).
    pub fn to_text(&self, grid: &ShellGrid) -> String {
        let mut out = format!("{} {}\n", grid.n1, grid.n2);
        for (m, q) in self.m.iter().zip(&self.q) {
            let qm = q.matrix();
            out.push_str(&format!(
                "{:.17e} {:.17e} {:.17e} {:.17e} {:.17e} {:.17e} {:.17e} {:.17e} {:.17e} {:.17e} {:.17e} {:.17e}\n",
                m.x, m.y, m.z,
                qm[(0, 0)], qm[(0, 1)], qm[(0, 2)],
                qm[(1, 0)], qm[(1, 1)], qm[(1, 2)],
                qm[(2, 0)], qm[(2, 1)], qm[(2, 2)],
            ));
        }
        out
    }

    /// Parses the checkpoint format produced by [`Self::to_text`].
    ///
    /// # Errors
    ///
    /// [`Error::Parse`] on malformed content, [`Error::Mismatch`] when the
    /// header does not match `grid`, [`Error::NotARotation`] when a parsed
    /// rotation block violates the SO(3) invariants.
    pub fn from_text(text: &str, grid: &ShellGrid) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty state file".into()))?;
        let dims: Vec<&str> = header.split_whitespace().collect();
        if dims.len() != 2 {
            return Err(Error::Parse("state header must be `n1 n2`".into()));
        }
        let n1: usize = dims[0].parse().map_err(|_| Error::Parse("bad n1".into()))?;
        let n2: usize = dims[1].parse().map_err(|_| Error::Parse("bad n2".into()))?;
        if n1 != grid.n1 || n2 != grid.n2 {
            return Err(Error::Mismatch(format!(
                "state is {n1}x{n2}, grid is {}x{}",
                grid.n1, grid.n2
            )));
        }
        let mut m = Vec::with_capacity(n1 * n2);
        let mut q = Vec::with_capacity(n1 * n2);
        for line in lines {
            let vals: std::result::Result<Vec<f64>, _> =
                line.split_whitespace().map(str::parse).collect();
            let vals = vals.map_err(|_| Error::Parse(format!("bad state row: {line:?}")))?;
            if vals.len() != 12 {
                return Err(Error::Parse(format!("state row needs 12 numbers: {line:?}")));
            }
            m.push(Vec3::new(vals[0], vals[1], vals[2]));
            let qm = Mat3::new(
                vals[3], vals[4], vals[5], vals[6], vals[7], vals[8], vals[9], vals[10], vals[11],
            );
            q.push(Rot3::try_new(qm)?);
        }
        if m.len() != n1 * n2 {
            return Err(Error::Mismatch(format!(
                "state has {} nodes, expected {}",
                m.len(),
                n1 * n2
            )));
        }
        Ok(Self { m, q })
    }

    /// Writes the checkpoint to a file.
    ///
    /// # Errors
    ///
    /// I/O failures.
    pub fn write_file(&self, grid: &ShellGrid, path: &std::path::Path) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(self.to_text(grid).as_bytes())?;
        Ok(())
    }

    /// Reads a checkpoint from a file.
    ///
    /// # Errors
    ///
    /// I/O and parse failures as in [`Self::from_text`].
    pub fn read_file(path: &std::path::Path, grid: &ShellGrid) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?, grid)
    }
}

/// External load resultants.
///
/// Body-force resultants live on ω (per-node samples); boundary couple
/// resultants live on the loaded boundary part `γ₁` (per-node samples with a
/// membership mask). The first-moment terms enter at order `h²` relative to
/// the leading potential and are included only when
/// `include_moment_terms` is set (they couple to the reconstruction fields
/// `d*`, `A*`).
#[derive(Debug, Clone)]
pub struct LoadSpec {
    /// Body-force resultant `N₀` per node (force/area).
    pub n0: Vec<Vec3>,
    /// First-moment resultant `M₁` per node.
    pub m1: Vec<Vec3>,
    /// Boundary couple resultant `C₀` per node (paired with `Q̄`).
    pub c0: Vec<Mat3>,
    /// First-moment boundary couple `C₁` per node (paired with `Q̄A*`).
    pub c1: Vec<Mat3>,
    /// Membership mask of the loaded boundary `γ₁` (must lie on `∂ω`).
    pub gamma1: Vec<bool>,
    /// Include the `h²` first-moment terms (default off).
    pub include_moment_terms: bool,
}

impl LoadSpec {
    /// No loads.
    pub fn zero(grid: &ShellGrid) -> Self {
        let n = grid.n1 * grid.n2;
        Self {
            n0: vec![Vec3::zeros(); n],
            m1: vec![Vec3::zeros(); n],
            c0: vec![Mat3::zeros(); n],
            c1: vec![Mat3::zeros(); n],
            gamma1: vec![false; n],
            include_moment_terms: false,
        }
    }

    /// Constant body-force resultant on all of ω.
    pub fn constant_force(grid: &ShellGrid, n0: Vec3) -> Self {
        let mut s = Self::zero(grid);
        s.n0 = vec![n0; grid.n1 * grid.n2];
        s
    }

    /// True when every load sample vanishes.
    pub fn is_zero(&self) -> bool {
        self.n0.iter().all(|v| v.norm() == 0.0)
            && self.c0.iter().all(|m| m.norm() == 0.0)
            && (!self.include_moment_terms
                || (self.m1.iter().all(|v| v.norm() == 0.0)
                    && self.c1.iter().all(|m| m.norm() == 0.0)))
    }

    /// Boundary (parameter-arclength) trapezoid weight of node `(i, j)` for
    /// the `γ₁` line integral; zero off `∂ω` or off `γ₁`.
    fn boundary_weight(&self, grid: &ShellGrid, i: usize, j: usize) -> f64 {
        if !self.gamma1[grid.idx(i, j)] {
            return 0.0;
        }
        let (d1, d2) = grid.spacing();
        let on_lr = i == 0 || i + 1 == grid.n1;
        let on_bt = j == 0 || j + 1 == grid.n2;
        let mut w = 0.0;
        if on_lr {
            w += trapezoid_weight(j, grid.n2) * d2;
        }
        if on_bt {
            w += trapezoid_weight(i, grid.n1) * d1;
        }
        w
    }
}

/// Energy breakdown of the total functional `I₀ = J₀ − Π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBreakdown {
    /// Membrane part of `h·J₀` (nonnegative).
    pub membrane: f64,
    /// Curvature part of `h·J₀` (nonnegative).
    pub curvature: f64,
    /// Load potential `Π`.
    pub load_potential: f64,
    /// `membrane + curvature − load_potential`.
    pub total: f64,
}

/// State-independent per-node geometry, precomputed once per grid/patch.
#[derive(Debug, Clone)]
pub struct GridGeometry {
    /// Surface frame at each node.
    pub frames: Vec<SurfaceFrame>,
    /// Trapezoid area weight of each node.
    pub weights: Vec<f64>,
    /// Reference gradient `∇y₀` evaluated by the *same* finite-difference
    /// stencils applied to the nodal `y₀` samples. The strain `E` subtracts
    /// this discrete reference rather than the analytic `∇y₀`, so the
    /// identity configuration `(m, Q̄) = (y₀, I)` has exactly zero strain on
    /// every patch and the discretization error cancels between state and
    /// reference (both converge to the same continuum strain at second
    /// order).
    pub grad_y0_fd: Vec<Mat3x2>,
}

impl GridGeometry {
    /// Evaluates frames, weights, and the discrete reference gradient on
    /// the grid nodes.
    ///
    /// # Errors
    ///
    /// Propagates surface evaluation failures.
    pub fn new(grid: &ShellGrid, patch: &MidsurfacePatch) -> Result<Self> {
        let mut frames = Vec::with_capacity(grid.n1 * grid.n2);
        let mut weights = Vec::with_capacity(grid.n1 * grid.n2);
        for j in 0..grid.n2 {
            for i in 0..grid.n1 {
                let (x1, x2) = grid.coords(i, j);
                frames.push(frame_at(patch, x1, x2)?);
                weights.push(grid.weight(i, j));
            }
        }
        let (d1, d2) = grid.spacing();
        let mut grad_y0_fd = Vec::with_capacity(grid.n1 * grid.n2);
        for j in 0..grid.n2 {
            for i in 0..grid.n1 {
                let mut cols = [Vec3::zeros(); 2];
                for axis in 0..2 {
                    let (pos, n, step) = if axis == 0 { (i, grid.n1, d1) } else { (j, grid.n2, d2) };
                    let mut dy = Vec3::zeros();
                    for (off, w) in fd3_first(pos, n) {
                        if w == 0.0 {
                            continue;
                        }
                        let p = (pos as isize + off) as usize;
                        let nid = if axis == 0 { grid.idx(p, j) } else { grid.idx(i, p) };
                        dy += frames[nid].y0 * w;
                    }
                    cols[axis] = dy / step;
                }
                grad_y0_fd.push(Mat3x2::from_columns(&cols));
            }
        }
        Ok(Self { frames, weights, grad_y0_fd })
    }
}

/// Per-node kinematic quantities of a state: field gradients and the two
/// strain tensors, built with the shared finite-difference stencils.
#[derive(Debug, Clone)]
pub struct NodalKinematics {
    /// `∇m` at the node.
    pub grad_m: Mat3x2,
    /// Wryness axial columns `axl(Q̄ᵀ∂ᵢQ̄)`, `i = 1, 2`.
    pub a_cols: [Vec3; 2],
    /// Elastic shell strain `E`.
    pub e: Mat3,
    /// Shell bending-curvature `K`.
    pub k: Mat3,
}

/// Finite-difference field derivatives and strains at every node.
///
/// # Errors
///
/// Propagates [`Error::NotATangentDerivative`] from the rotation-derivative
/// consistency check (unreachable for derivatives built here from valid
/// rotations unless the lattice is drastically under-resolved).
pub fn nodal_kinematics(
    state: &ShellState,
    grid: &ShellGrid,
    geom: &GridGeometry,
) -> Result<Vec<NodalKinematics>> {
    let (d1, d2) = grid.spacing();
    let mut out = Vec::with_capacity(grid.n1 * grid.n2);
    for j in 0..grid.n2 {
        for i in 0..grid.n1 {
            let id = grid.idx(i, j);
            let mut grad_m_cols = [Vec3::zeros(); 2];
            let mut dq = [Mat3::zeros(); 2];
            for axis in 0..2 {
                let (pos, n, step) = if axis == 0 { (i, grid.n1, d1) } else { (j, grid.n2, d2) };
                let mut dm = Vec3::zeros();
                let mut dqm = Mat3::zeros();
                for (off, w) in fd3_first(pos, n) {
                    if w == 0.0 {
                        continue;
                    }
                    let p = (pos as isize + off) as usize;
                    let nid = if axis == 0 { grid.idx(p, j) } else { grid.idx(i, p) };
                    dm += state.m[nid] * w;
                    dqm += state.q[nid].matrix() * w;
                }
                grad_m_cols[axis] = dm / step;
                dq[axis] = dqm / step;
            }
            let grad_m = Mat3x2::from_columns(&grad_m_cols);
            let frame = &geom.frames[id];
            let q = &state.q[id];
            // Strain against the discrete reference gradient (see
            // [`GridGeometry::grad_y0_fd`]); equals [`strain_e`] up to the
            // shared second-order stencil error.
            let block = q.matrix().transpose() * grad_m - geom.grad_y0_fd[id];
            let e = compose_3x2_col(&block, &Vec3::zeros()) * frame.inv_grad_theta0;
            let k = bendcurv_k(&dq[0], &dq[1], q, frame)?;
            let a_cols = [
                Skew3::project(&(q.matrix().transpose() * dq[0])).axial(),
                Skew3::project(&(q.matrix().transpose() * dq[1])).axial(),
            ];
            out.push(NodalKinematics { grad_m, a_cols, e, k });
        }
    }
    Ok(out)
}

/// Unscaled limit energy `J₀` split `(membrane, curvature)`, shared by the
/// total functional (which applies the `h` prefactor) and the thin-limit
/// harness (which does not).
///
/// # Errors
///
/// Propagates kinematics and density errors.
pub fn j0_energy(
    state: &ShellState,
    grid: &ShellGrid,
    geom: &GridGeometry,
    mat: &MaterialParams,
) -> Result<(f64, f64)> {
    let kin = nodal_kinematics(state, grid, geom)?;
    let mut membrane = 0.0;
    let mut curvature = 0.0;
    for (id, k) in kin.iter().enumerate() {
        let frame = &geom.frames[id];
        let w = geom.weights[id] * frame.det_grad_theta0;
        membrane += w * w_mp_hom(&k.e, frame, mat)?;
        curvature += w * w_curv_hom(&k.k, frame, mat)?;
    }
    Ok((membrane, curvature))
}

/// Load potential
/// `Π = h∫_ω⟨N₀, m−y₀⟩ + h∫_{γ₁}⟨C₀, Q̄⟩` plus, behind the flag, the
/// first-moment terms `h²∫_ω⟨M₁, d*−n₀⟩ + h²∫_{γ₁}⟨C₁, Q̄A*⟩` built from the
/// through-thickness reconstruction of the current state.
///
/// # Errors
///
/// Propagates kinematics/reconstruction errors (moment terms only).
pub fn load_potential(
    state: &ShellState,
    loads: &LoadSpec,
    grid: &ShellGrid,
    geom: &GridGeometry,
    mat: &MaterialParams,
    h: f64,
) -> Result<f64> {
    let mut pi = 0.0;
    for j in 0..grid.n2 {
        for i in 0..grid.n1 {
            let id = grid.idx(i, j);
            let u0 = state.m[id] - geom.frames[id].y0;
            pi += h * geom.weights[id] * loads.n0[id].dot(&u0);
            let bw = loads.boundary_weight(grid, i, j);
            if bw > 0.0 {
                pi += h * bw * loads.c0[id].dot(state.q[id].matrix());
            }
        }
    }
    if loads.include_moment_terms {
        let kin = nodal_kinematics(state, grid, geom)?;
        for j in 0..grid.n2 {
            for i in 0..grid.n1 {
                let id = grid.idx(i, j);
                let frame = &geom.frames[id];
                let d_star = crate::reconstruct::optimal_director(
                    &kin[id].e,
                    &state.q[id],
                    frame,
                    mat,
                );
                pi += h * h * geom.weights[id] * loads.m1[id].dot(&(d_star - frame.n0));
                let bw = loads.boundary_weight(grid, i, j);
                if bw > 0.0 {
                    let a_star = crate::reconstruct::optimal_rotation_rate(
                        &kin[id].a_cols[0],
                        &kin[id].a_cols[1],
                        frame,
                        mat,
                    )?;
                    let qa = state.q[id].matrix() * a_star.matrix();
                    pi += h * h * bw * loads.c1[id].dot(&qa);
                }
            }
        }
    }
    Ok(pi)
}

/// Total functional `I₀ = h·J₀ − Π` with its breakdown.
///
/// # Errors
///
/// Propagates geometry/strain errors.
pub fn total_energy(
    state: &ShellState,
    grid: &ShellGrid,
    patch: &MidsurfacePatch,
    mat: &MaterialParams,
    loads: &LoadSpec,
    h: f64,
) -> Result<EnergyBreakdown> {
    let geom = GridGeometry::new(grid, patch)?;
    total_energy_with_geom(state, grid, &geom, mat, loads, h)
}

/// [`total_energy`] against precomputed geometry (the fast path used by the
/// optimizer).
///
/// # Errors
///
/// Propagates geometry/strain errors.
pub fn total_energy_with_geom(
    state: &ShellState,
    grid: &ShellGrid,
    geom: &GridGeometry,
    mat: &MaterialParams,
    loads: &LoadSpec,
    h: f64,
) -> Result<EnergyBreakdown> {
    let (membrane, curvature) = j0_energy(state, grid, geom, mat)?;
    let pi = load_potential(state, loads, grid, geom, mat, h)?;
    let membrane = h * membrane;
    let curvature = h * curvature;
    Ok(EnergyBreakdown {
        membrane,
        curvature,
        load_potential: pi,
        total: membrane + curvature - pi,
    })
}

/// Gradient of `I₀` in the product tangent space: per-node `∂/∂m` (zeroed on
/// Dirichlet nodes) and per-node left-trivialized rotation gradient `g` such
/// that `d/dt I₀(Q exp(t·anti(w)))|₀ = ⟨g, w⟩`.
///
/// The `J₀` and leading load terms are differentiated analytically; the
/// optional `h²` first-moment load terms are differentiated by central
/// finite differences (they traverse the `d*`/`A*` reconstructions).
///
/// # Errors
///
/// Propagates geometry/strain errors.
pub fn gradient(
    state: &ShellState,
    grid: &ShellGrid,
    geom: &GridGeometry,
    mat: &MaterialParams,
    loads: &LoadSpec,
    h: f64,
) -> Result<(Vec<Vec3>, Vec<Vec3>)> {
    let n = grid.n1 * grid.n2;
    let (d1, d2) = grid.spacing();
    let kin = nodal_kinematics(state, grid, geom)?;
    let mut grad_m = vec![Vec3::zeros(); n];
    let mut grad_q = vec![Vec3::zeros(); n];

    let scale = mat.mu * mat.l_c * mat.l_c;
    let c_tr_e = mat.membrane_trace();
    let c_perp_e = mat.harmonic_shear();
    let c_tr_k = scale * mat.b1 * mat.b3 / (mat.b1 + mat.b3);
    let c_perp_k = scale * 2.0 * mat.b1 * mat.b2 / (mat.b1 + mat.b2);

    for j in 0..grid.n2 {
        for i in 0..grid.n1 {
            let id = grid.idx(i, j);
            let frame = &geom.frames[id];
            let a = &frame.a_y0;
            let nn = frame.n0 * frame.n0.transpose();
            let w_node = h * geom.weights[id] * frame.det_grad_theta0;
            let q = &state.q[id];

            // Membrane: T_E = ∂W_mp^hom/∂E.
            let e = &kin[id].e;
            let epar = a * e;
            let t_e = a * (sym(&epar) * (2.0 * mat.mu) + skew(&epar) * (2.0 * mat.mu_c))
                + a * (2.0 * c_tr_e * epar.trace())
                + nn * e * (2.0 * c_perp_e);
            // S_E = T_E G⁻ᵀ with the third column dropped (δE has a zero
            // third block-column before the G⁻¹ factor).
            let s_e_full = t_e * frame.inv_grad_theta0.transpose();

            // m-gradient: neighbors along both axes through the FD stencils.
            for axis in 0..2 {
                let (pos, nline, step) = if axis == 0 { (i, grid.n1, d1) } else { (j, grid.n2, d2) };
                let s_col: Vec3 = s_e_full.column(axis).into();
                let pull = q.matrix() * s_col;
                for (off, wfd) in fd3_first(pos, nline) {
                    if wfd == 0.0 {
                        continue;
                    }
                    let p = (pos as isize + off) as usize;
                    let nid = if axis == 0 { grid.idx(p, j) } else { grid.idx(i, p) };
                    grad_m[nid] += pull * (w_node * wfd / step);
                }
            }

            // Rotation gradient from the membrane strain: the variation of
            // Q̄ᵀ at the node itself gives δE = −anti(w)·(Q̄ᵀ∇m|0)G⁻¹, hence
            // ⟨T_E, δE⟩ = −2⟨axl(skew(T_E G⁻ᵀ (Q̄ᵀ∇m|0)ᵀ)), w⟩.
            let qtm = q.matrix().transpose() * kin[id].grad_m;
            let n3 = Mat3::from_columns(&[qtm.column(0).into(), qtm.column(1).into(), Vec3::zeros()]);
            grad_q[id] += axl(&Skew3::project(&(s_e_full * n3.transpose()))) * (-2.0 * w_node);

            // Curvature: T_K = ∂W̃_curv^hom/∂K.
            let kk = &kin[id].k;
            let kpar = a * kk;
            let t_k = a * (sym(&kpar) * (2.0 * scale * mat.b1)
                + skew(&kpar) * (2.0 * scale * mat.b2))
                + a * (2.0 * c_tr_k * kpar.trace())
                + nn * kk * (2.0 * c_perp_k);
            let s_k = t_k * frame.inv_grad_theta0.transpose();

            for axis in 0..2 {
                let (pos, nline, step) = if axis == 0 { (i, grid.n1, d1) } else { (j, grid.n2, d2) };
                let s_i: Vec3 = s_k.column(axis).into();
                let anti_s = anti(s_i).matrix();
                // D_i = Σ c_k Q_k (the FD combination of rotation matrices).
                let mut d_mat = Mat3::zeros();
                let stencil = fd3_first(pos, nline);
                for (off, wfd) in stencil {
                    if wfd == 0.0 {
                        continue;
                    }
                    let p = (pos as isize + off) as usize;
                    let nid = if axis == 0 { grid.idx(p, j) } else { grid.idx(i, p) };
                    d_mat += state.q[nid].matrix() * (wfd / step);
                }
                // Self term from δ(Q̄ᵀ) in axl(Q̄ᵀD_i).
                grad_q[id] += axl(&Skew3::project(&(anti_s * d_mat.transpose() * q.matrix())))
                    * (-w_node);
                // Neighbor terms from δD_i (includes the node itself for
                // one-sided stencils).
                for (off, wfd) in stencil {
                    if wfd == 0.0 {
                        continue;
                    }
                    let p = (pos as isize + off) as usize;
                    let nid = if axis == 0 { grid.idx(p, j) } else { grid.idx(i, p) };
                    let z = state.q[nid].matrix().transpose() * q.matrix() * anti_s;
                    grad_q[nid] += axl(&Skew3::project(&z)) * (w_node * wfd / step);
                }
            }

            // Leading load terms: −Π contributes −h·w·N₀ to ∂/∂m and
            // −2h·w_b·axl(skew(Q̄ᵀC₀)) to the rotation gradient.
            grad_m[id] -= loads.n0[id] * (h * geom.weights[id]);
            let bw = loads.boundary_weight(grid, i, j);
            if bw > 0.0 {
                let z = q.matrix().transpose() * loads.c0[id];
                grad_q[id] -= axl(&Skew3::project(&z)) * (2.0 * h * bw);
            }
        }
    }

    // Optional h² first-moment load terms: central finite differences of
    // −Π₂ (the moment-only part) over every degree of freedom.
    if loads.include_moment_terms {
        let moment_pi = |s: &ShellState| -> Result<f64> {
            let mut only_moments = loads.clone();
            only_moments.n0 = vec![Vec3::zeros(); n];
            only_moments.c0 = vec![Mat3::zeros(); n];
            load_potential(s, &only_moments, grid, geom, mat, h)
        };
        let step = 1e-6;
        let mut work = state.clone();
        for id in 0..n {
            for c in 0..3 {
                let base = work.m[id][c];
                work.m[id][c] = base + step;
                let fp = moment_pi(&work)?;
                work.m[id][c] = base - step;
                let fm = moment_pi(&work)?;
                work.m[id][c] = base;
                grad_m[id][c] -= (fp - fm) / (2.0 * step);
            }
            for c in 0..3 {
                let mut w = Vec3::zeros();
                w[c] = step;
                let q0 = work.q[id];
                work.q[id] = q0.compose(&exp_so3(&anti(w)));
                let fp = moment_pi(&work)?;
                work.q[id] = q0.compose(&exp_so3(&anti(-w)));
                let fm = moment_pi(&work)?;
                work.q[id] = q0;
                grad_q[id][c] -= (fp - fm) / (2.0 * step);
            }
        }
    }

    // Dirichlet nodes: m is prescribed, its gradient is projected out.
    for (g, fixed) in grad_m.iter_mut().zip(&grid.dirichlet) {
        if *fixed {
            *g = Vec3::zeros();
        }
    }
    Ok((grad_m, grad_q))
}

/// One iteration record of the minimizer log.
#[derive(Debug, Clone, Copy)]
pub struct IterRecord {
    /// Iteration counter (0 = initial state).
    pub iter: usize,
    /// Membrane energy.
    pub membrane: f64,
    /// Curvature energy.
    pub curvature: f64,
    /// Load potential.
    pub load: f64,
    /// Total energy.
    pub total: f64,
    /// Sup-norm of the gradient.
    pub grad_inf_norm: f64,
    /// Accepted step length (0 for the initial record).
    pub step: f64,
}

/// Renders the iteration log as CSV
/// (`iter,membrane,curvature,load,total,grad_inf_norm,step`).
pub fn log_to_csv(log: &[IterRecord]) -> String {
    let mut out = String::from("iter,membrane,curvature,load,total,grad_inf_norm,step\n");
    for r in log {
        out.push_str(&format!(
            "{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}\n",
            r.iter, r.membrane, r.curvature, r.load, r.total, r.grad_inf_norm, r.step
        ));
    }
    out
}

/// Options of the projected-gradient minimizer.
#[derive(Debug, Clone, Copy)]
pub struct MinimizeOptions {
    /// Iteration budget.
    pub max_iter: usize,
    /// Convergence tolerance on `‖gradient‖∞`.
    pub tol: f64,
    /// Initial trial step of the Armijo backtracking.
    pub initial_step: f64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self { max_iter: 500, tol: tol::SOLVER_GRAD, initial_step: 1.0 }
    }
}

/// Gradient descent with Armijo backtracking and SO(3) retraction.
///
/// Steps `m ← m − αg_m`, `Q ← Q·exp(anti(−αg_Q))`; the retraction keeps the
/// rotations exactly on SO(3) (drift is monitored and the matrices are
/// polar-reprojected every 100 iterations as a guard). The energy log is
/// monotone nonincreasing by construction of the line search.
///
/// # Errors
///
/// [`Error::LineSearchFailed`] when backtracking exhausts
/// [`tol::LINE_SEARCH_MAX_HALVINGS`] halvings without an energy decrease;
/// energy/gradient errors propagate.
pub fn minimize(
    state0: &ShellState,
    grid: &ShellGrid,
    patch: &MidsurfacePatch,
    mat: &MaterialParams,
    loads: &LoadSpec,
    h: f64,
    opts: &MinimizeOptions,
) -> Result<(ShellState, Vec<IterRecord>)> {
    let geom = GridGeometry::new(grid, patch)?;
    let mut state = state0.clone();
    let mut log = Vec::new();
    let mut breakdown = total_energy_with_geom(&state, grid, &geom, mat, loads, h)?;
    let mut step = opts.initial_step;
    const ARMIJO_C1: f64 = 1e-4;

    for iter in 0..=opts.max_iter {
        let (gm, gq) = gradient(&state, grid, &geom, mat, loads, h)?;
        let grad_inf = gm
            .iter()
            .chain(&gq)
            .map(|v| v.amax())
            .fold(0.0_f64, f64::max);
        log.push(IterRecord {
            iter,
            membrane: breakdown.membrane,
            curvature: breakdown.curvature,
            load: breakdown.load_potential,
            total: breakdown.total,
            grad_inf_norm: grad_inf,
            step: if iter == 0 { 0.0 } else { step },
        });
        if grad_inf < opts.tol || iter == opts.max_iter {
            break;
        }

        let g_sq: f64 = gm.iter().chain(&gq).map(|v| v.norm_squared()).sum();
        let mut alpha = step;
        let mut accepted = None;
        for halving in 0..=tol::LINE_SEARCH_MAX_HALVINGS {
            let mut trial = state.clone();
            for id in 0..trial.m.len() {
                trial.m[id] -= gm[id] * alpha;
                trial.q[id] = trial.q[id].compose(&exp_so3(&anti(-gq[id] * alpha)));
            }
            let trial_energy = total_energy_with_geom(&trial, grid, &geom, mat, loads, h)?;
            if trial_energy.total <= breakdown.total - ARMIJO_C1 * alpha * g_sq {
                accepted = Some((trial, trial_energy, alpha));
                break;
            }
            if halving == tol::LINE_SEARCH_MAX_HALVINGS {
                return Err(Error::LineSearchFailed(halving));
            }
            alpha *= 0.5;
        }
        let (trial, trial_energy, used) =
            accepted.ok_or(Error::LineSearchFailed(tol::LINE_SEARCH_MAX_HALVINGS))?;
        state = trial;
        breakdown = trial_energy;
        step = (used * 2.0).min(opts.initial_step.max(1.0));

        // Rotation-drift guard.
        if iter % 100 == 99 {
            for q in &mut state.q {
                let drift = q.orthogonality_defect();
                assert!(
                    drift <= tol::ALGEBRAIC,
                    "rotation drift {drift:.3e} exceeded the retraction guarantee"
                );
                *q = q.reproject()?;
            }
        }
    }
    Ok((state, log))
}
