//! Independent numerical oracles.
//!
//! Every closed-form result in the library is cross-checked against an
//! implementation that shares no code with it: truncated matrix power series
//! for the exponential, an eigendecomposition route for the polar factor,
//! derivative-free minimization for the homogenized densities, and plain
//! finite differences for gradients and surface geometry. The oracles are
//! deliberately slow and simple; they are exercised by the test suite and by
//! the `verify` command.

use crate::rotalg::Skew3;
use crate::{Mat3, Vec3};

/// Truncated power series `Σ_{k≤n} Aᵏ/k!` of the matrix exponential.
///
/// With `n = 20` and rotation angles up to ~3, the truncation error is below
/// 1e-13, which pins the closed-form Rodrigues evaluation.
pub fn exp_series(a: &Skew3, n: usize) -> Mat3 {
    let k = a.matrix();
    let mut term = Mat3::identity();
    let mut sum = Mat3::identity();
    for i in 1..=n {
        term = term * k / (i as f64);
        sum += term;
    }
    sum
}

/// Polar decomposition through the symmetric eigenproblem of `FᵀF`:
/// `U = V diag(√λ) Vᵀ`, `Q = F U⁻¹`.
///
/// Independent of the SVD route used by the library implementation.
/// Requires `det F > 0`; returns `(Q, U)`.
pub fn polar_eigen_oracle(f: &Mat3) -> (Mat3, Mat3) {
    let c = f.transpose() * f;
    let eig = c.symmetric_eigen();
    let sqrt_vals = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
    let v = eig.eigenvectors;
    let u = v * Mat3::from_diagonal(&sqrt_vals) * v.transpose();
    let inv_vals = sqrt_vals.map(|s| 1.0 / s);
    let u_inv = v * Mat3::from_diagonal(&inv_vals) * v.transpose();
    (f * u_inv, u)
}

/// Derivative-free Nelder–Mead minimization over ℝ³.
///
/// Tuned for the strictly convex quadratics arising from the
/// through-thickness optimizations, where convergence to the global minimum
/// is guaranteed. Returns `(argmin, min)`.
pub fn nelder_mead3<F: Fn(Vec3) -> f64>(f: &F, start: Vec3, scale: f64, tol: f64) -> (Vec3, f64) {
    const MAX_ITER: usize = 4000;
    let mut simplex: Vec<(Vec3, f64)> = Vec::with_capacity(4);
    simplex.push((start, f(start)));
    for i in 0..3 {
        let mut p = start;
        p[i] += scale;
        simplex.push((p, f(p)));
    }
    for _ in 0..MAX_ITER {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("finite energies"));
        let spread = simplex[3].1 - simplex[0].1;
        let size = (simplex[1].0 - simplex[0].0).norm()
            + (simplex[2].0 - simplex[0].0).norm()
            + (simplex[3].0 - simplex[0].0).norm();
        if spread.abs() <= tol && size <= tol.sqrt() {
            break;
        }
        let centroid = (simplex[0].0 + simplex[1].0 + simplex[2].0) / 3.0;
        let worst = simplex[3];
        let reflect = centroid + (centroid - worst.0);
        let fr = f(reflect);
        if fr < simplex[0].1 {
            let expand = centroid + (centroid - worst.0) * 2.0;
            let fe = f(expand);
            simplex[3] = if fe < fr { (expand, fe) } else { (reflect, fr) };
        } else if fr < simplex[2].1 {
            simplex[3] = (reflect, fr);
        } else {
            let contract = centroid + (worst.0 - centroid) * 0.5;
            let fc = f(contract);
            if fc < worst.1 {
                simplex[3] = (contract, fc);
            } else {
                // Shrink toward the best vertex.
                for i in 1..4 {
                    let p = simplex[0].0 + (simplex[i].0 - simplex[0].0) * 0.5;
                    simplex[i] = (p, f(p));
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("finite energies"));
    simplex[0]
}

/// Multistart Nelder–Mead: runs [`nelder_mead3`] from each start and keeps
/// the best result. Guaranteed global on strictly convex objectives.
pub fn multistart_nelder_mead3<F: Fn(Vec3) -> f64>(
    f: &F,
    starts: &[Vec3],
    scale: f64,
    tol: f64,
) -> (Vec3, f64) {
    let mut best: Option<(Vec3, f64)> = None;
    for &s in starts {
        let cand = nelder_mead3(f, s, scale, tol);
        if best.map_or(true, |b| cand.1 < b.1) {
            best = Some(cand);
        }
    }
    best.expect("at least one start")
}

/// Coarse-grid search over `[-range, range]³` followed by local refinement:
/// repeatedly halves the cell size around the incumbent minimum.
///
/// Backs the optimal-rotation-rate solve; on a strictly convex quadratic the
/// refinement converges linearly to the global minimizer.
pub fn grid_refined_min3<F: Fn(Vec3) -> f64>(f: &F, range: f64, levels: usize) -> (Vec3, f64) {
    let n = 8i32;
    let mut center = Vec3::zeros();
    let mut half = range;
    let mut best = (center, f(center));
    for _ in 0..levels {
        for i in -n..=n {
            for j in -n..=n {
                for k in -n..=n {
                    let p = center
                        + Vec3::new(
                            half * (i as f64) / (n as f64),
                            half * (j as f64) / (n as f64),
                            half * (k as f64) / (n as f64),
                        );
                    let v = f(p);
                    if v < best.1 {
                        best = (p, v);
                    }
                }
            }
        }
        center = best.0;
        half /= n as f64 / 2.0;
    }
    best
}

/// Central finite-difference gradient of a scalar function of a 3×3 matrix.
pub fn fd_matrix_gradient<F: Fn(&Mat3) -> f64>(f: &F, x: &Mat3, step: f64) -> Mat3 {
    Mat3::from_fn(|i, j| {
        let mut p = *x;
        let mut m = *x;
        p[(i, j)] += step;
        m[(i, j)] -= step;
        (f(&p) - f(&m)) / (2.0 * step)
    })
}

/// Central finite-difference directional derivative of a scalar function
/// along a one-parameter path `t ↦ f(t)`.
pub fn fd_directional<F: Fn(f64) -> f64>(f: &F, step: f64) -> f64 {
    (f(step) - f(-step)) / (2.0 * step)
}

/// Least-squares slope of `log|y|` against `log x` (log–log regression),
/// with the symmetric 95% half-width of the slope estimate.
///
/// Used for convergence-order diagnostics; points with `|y|` below `floor`
/// are dropped (they sit in the roundoff plateau).
pub fn loglog_slope(xs: &[f64], ys: &[f64], floor: f64) -> Option<(f64, f64)> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(_, y)| y.abs() > floor)
        .map(|(x, y)| (x.ln(), y.abs().ln()))
        .collect();
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return None;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    // Residual variance → standard error; t-multiplier ≈ 4.30 for 2 dof,
    // conservative 3.18/2.78 for more points; use a fixed 4.30 upper bound.
    let var: f64 = pts
        .iter()
        .map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2))
        .sum::<f64>()
        / ((n - 2.0).max(1.0));
    let se = (var / sxx).sqrt();
    Some((slope, 4.30 * se))
}
