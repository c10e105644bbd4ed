//! Aggregated self-verification suite.
//!
//! Re-runs the library's independent oracles — brute-force minimizations,
//! two-form equivalences, algebraic roundtrips, coefficient identities, and
//! Taylor-order regressions — and reports one pass/fail record per check.
//! The command-line front end prints the records and exits nonzero when any
//! check fails; the suite is deterministic (fixed RNG seeds).

use crate::cosserat3d::{
    w_curv_tilde, w_curv_tilde_b, w_mp, w_mp_lambda_form, MaterialParams,
};
use crate::linshell::{birsan_identity_check, identify_6param};
use crate::oracles::{
    exp_series, grid_refined_min3, loglog_slope, multistart_nelder_mead3, polar_eigen_oracle,
};
use crate::reconstruct::{biot_stress, optimal_director, optimal_rotation_rate, u_bar};
use crate::rotalg::{
    anti, cartan_split, exp_so3, nye_alpha_to_gamma, nye_gamma_to_alpha, polar_decompose, Skew3,
};
use crate::shellcore::{strain_e, w_curv_hom, w_mp_hom};
use crate::surface::{compose_3x2_col, frame_at, MidsurfacePatch, SurfaceFrame};
use crate::{Mat3, Mat3x2, Vec3};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// One verification record.
#[derive(Debug, Clone)]
pub struct VerifyCheck {
    /// Short stable identifier of the check.
    pub name: &'static str,
    /// Worst residual observed.
    pub residual: f64,
    /// Tolerance the residual is held against.
    pub tolerance: f64,
}

impl VerifyCheck {
    /// Whether the residual is within tolerance.
    pub fn passed(&self) -> bool {
        self.residual.is_finite() && self.residual <= self.tolerance
    }

    /// One-line report.
    pub fn line(&self) -> String {
        format!(
            "{:<34} {:>12.3e} <= {:>9.1e}  {}",
            self.name,
            self.residual,
            self.tolerance,
            if self.passed() { "pass" } else { "FAIL" }
        )
    }
}

fn rv(r: &mut StdRng) -> Vec3 {
    Vec3::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
}

fn rmat(r: &mut StdRng) -> Mat3 {
    Mat3::from_fn(|_, _| r.gen_range(-1.0..1.0))
}

fn sample_frames() -> Vec<SurfaceFrame> {
    let patches = [
        MidsurfacePatch::plate([-1.0, 1.0, -1.0, 1.0]),
        MidsurfacePatch::cylinder(1.4, [0.0, 1.0, 0.0, 1.0]),
        MidsurfacePatch::sphere_cap(2.0, [-0.5, 0.5, -0.5, 0.5]),
    ];
    patches
        .iter()
        .map(|p| frame_at(p, 0.25, -0.15).expect("preset frames are regular"))
        .collect()
}

/// Runs the full suite on the given material.
///
/// `override_b3`, when set, replaces the derived curvature coefficient `b₃`
/// before the two-form equivalence checks run — the negative control that
/// must make `curv-two-form` fail.
pub fn run_suite(mat: &MaterialParams, override_b3: Option<f64>) -> Vec<VerifyCheck> {
    let mut checks = Vec::new();
    let mut rng = StdRng::seed_from_u64(0xFACE_0FF0);
    let frames = sample_frames();

    // Nye roundtrip α ↔ Γ, exact.
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let g = rmat(&mut rng);
        worst = worst.max((nye_alpha_to_gamma(&nye_gamma_to_alpha(&g)) - g).norm());
        let a = rmat(&mut rng);
        worst = worst.max((nye_gamma_to_alpha(&nye_alpha_to_gamma(&a)) - a).norm());
    }
    checks.push(VerifyCheck { name: "nye-roundtrip", residual: worst, tolerance: 1e-14 });

    // ‖A‖² = 2‖axl A‖² and Cartan orthogonality.
    let mut worst = 0.0f64;
    let mut worst_cartan = 0.0f64;
    for _ in 0..200 {
        let a = Skew3::from_axial(rv(&mut rng));
        worst = worst.max((a.matrix().norm_squared() - 2.0 * a.axial().norm_squared()).abs());
        let x = rmat(&mut rng);
        let (dev, sk, tr) = cartan_split(&x);
        let recomposed = dev + sk.matrix() + Mat3::identity() * (tr / 3.0);
        worst_cartan = worst_cartan.max((recomposed - x).norm());
        let cross = dev.dot(&sk.matrix()).abs()
            + dev.trace().abs()
            + sk.matrix().trace().abs();
        worst_cartan = worst_cartan.max(cross);
    }
    checks.push(VerifyCheck { name: "skew-norm-identity", residual: worst, tolerance: 1e-14 });
    checks.push(VerifyCheck { name: "cartan-orthogonality", residual: worst_cartan, tolerance: 1e-13 });

    // Polar decomposition vs the eigenvalue oracle.
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let f = rmat(&mut rng) * 0.4 + Mat3::identity();
        if f.determinant() < 0.1 {
            continue;
        }
        let (q, _) = polar_decompose(&f).expect("well-conditioned sample");
        let (qo, _) = polar_eigen_oracle(&f);
        worst = worst.max((q.matrix() - qo).norm());
    }
    checks.push(VerifyCheck { name: "polar-vs-eigen-oracle", residual: worst, tolerance: 1e-9 });

    // exp_so3 vs the 20-term series; angles below 2 keep the truncation
    // error of the series itself under the comparison tolerance.
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let a = anti(rv(&mut rng) * 1.1);
        worst = worst.max((exp_so3(&a).matrix() - exp_series(&a, 20)).norm());
    }
    checks.push(VerifyCheck { name: "exp-vs-series", residual: worst, tolerance: 1e-12 });

    // Two-form equivalences, with the optional b₃ corruption.
    let mut mat_b = *mat;
    if let Some(b3) = override_b3 {
        mat_b.b3 = b3;
    }
    let mut worst_mp = 0.0f64;
    let mut worst_curv = 0.0f64;
    for _ in 0..200 {
        let u = rmat(&mut rng) * 0.5 + Mat3::identity();
        worst_mp = worst_mp.max((w_mp(&u, mat) - w_mp_lambda_form(&u, mat)).abs());
        let g = rmat(&mut rng);
        worst_curv = worst_curv.max((w_curv_tilde(&g, &mat_b) - w_curv_tilde_b(&g, &mat_b)).abs());
    }
    checks.push(VerifyCheck { name: "mp-two-form", residual: worst_mp, tolerance: 1e-12 });
    checks.push(VerifyCheck { name: "curv-two-form", residual: worst_curv, tolerance: 1e-12 });

    // Membrane homogenization: closed form vs brute force and stationarity.
    let mut worst_value = 0.0f64;
    let mut worst_closed = 0.0f64;
    let mut worst_stat = 0.0f64;
    for frame in &frames {
        for _ in 0..10 {
            let grad_m = Mat3x2::from_columns(&[
                frame.grad_y0.column(0).into_owned() + rv(&mut rng) * 0.3,
                frame.grad_y0.column(1).into_owned() + rv(&mut rng) * 0.3,
            ]);
            let q = exp_so3(&anti(rv(&mut rng)));
            let e = strain_e(&grad_m, &q, frame);
            let hom = w_mp_hom(&e, frame, mat).expect("structured strain");
            let d = optimal_director(&e, &q, frame, mat);
            let u = u_bar(&grad_m, &d, &q, frame);
            worst_closed = worst_closed.max((w_mp(&u, mat) - hom).abs());
            worst_stat = worst_stat.max((biot_stress(&u, mat) * frame.n0).norm());
            let obj = |c: Vec3| w_mp(&u_bar(&grad_m, &c, &q, frame), mat);
            let starts = [
                q.matrix() * frame.n0,
                -(q.matrix() * frame.n0),
                Vec3::zeros(),
                rv(&mut rng) * 2.0,
            ];
            let (_, brute) = multistart_nelder_mead3(&obj, &starts, 0.5, 1e-12);
            worst_value = worst_value.max((hom - brute).abs());
        }
    }
    checks.push(VerifyCheck { name: "mp-hom-vs-brute-force", residual: worst_value, tolerance: 1e-8 });
    checks.push(VerifyCheck { name: "mp-hom-vs-closed-form", residual: worst_closed, tolerance: 1e-12 });
    checks.push(VerifyCheck { name: "director-stationarity", residual: worst_stat, tolerance: 1e-9 });

    // Curvature homogenization: SPD solve vs brute force.
    let mut worst_value = 0.0f64;
    let mut worst_solved = 0.0f64;
    for frame in &frames {
        for _ in 0..10 {
            let (k1, k2) = (rv(&mut rng), rv(&mut rng));
            let k = Mat3::from_columns(&[k1, k2, Vec3::zeros()]) * frame.inv_grad_theta0;
            let hom = w_curv_hom(&k, frame, mat).expect("structured tensor");
            let obj = |a: Vec3| {
                w_curv_tilde(&(Mat3::from_columns(&[k1, k2, a]) * frame.inv_grad_theta0), mat)
            };
            let a = optimal_rotation_rate(&k1, &k2, frame, mat).expect("SPD system");
            worst_solved = worst_solved.max((obj(a.axial()) - hom).abs());
            let (_, brute) = grid_refined_min3(&obj, 4.0, 10);
            worst_value = worst_value.max((hom - brute).abs());
        }
    }
    checks.push(VerifyCheck { name: "curv-hom-vs-brute-force", residual: worst_value, tolerance: 1e-8 });
    checks.push(VerifyCheck { name: "curv-hom-vs-spd-solve", residual: worst_solved, tolerance: 1e-12 });

    // Coefficient identification identities.
    let c = identify_6param(mat, 0.1);
    let h = 0.1;
    let expect = [
        (c.alpha1, 2.0 * h * mat.mu * mat.lambda / (2.0 * mat.mu + mat.lambda)),
        (c.alpha2, h * (mat.mu - mat.mu_c)),
        (c.alpha3, h * (mat.mu + mat.mu_c)),
        (c.alpha4, 2.0 * h * mat.mu * mat.mu_c / (mat.mu + mat.mu_c)),
        (c.mu_c_drill, 2.0 * h * mat.mu_c),
    ];
    let worst = expect
        .iter()
        .map(|(a, b)| (a - b).abs() / b.abs().max(1e-300))
        .fold(0.0f64, f64::max);
    checks.push(VerifyCheck { name: "six-param-coefficients", residual: worst, tolerance: 1e-14 });

    // Bilinear-form identity sweep.
    let birsan_ok = birsan_identity_check(mat, 300);
    checks.push(VerifyCheck {
        name: "bilinear-form-identity",
        residual: if birsan_ok { 0.0 } else { 1.0 },
        tolerance: 1e-12,
    });

    // Linearization order of the strain measure (slope-2 regression).
    let frame = &frames[2];
    let dv = Mat3x2::new(0.1, -0.2, 0.3, 0.0, 0.5, -0.4);
    let theta = Vec3::new(0.2, -0.3, 0.4);
    let eps = [1e-1, 1e-2, 1e-3, 1e-4];
    let errs: Vec<f64> = eps
        .iter()
        .map(|&e| {
            let grad_m = frame.grad_y0 + dv * e;
            let q = exp_so3(&anti(theta * e));
            let nl = strain_e(&grad_m, &q, frame);
            let lin = compose_3x2_col(
                &(dv - anti(theta).matrix() * frame.grad_y0),
                &Vec3::zeros(),
            ) * frame.inv_grad_theta0
                * e;
            (nl - lin).norm().max(1e-300)
        })
        .collect();
    let slope_residual = match loglog_slope(&eps, &errs, 1e-14) {
        Some((slope, _)) => (slope - 2.0).abs(),
        None => f64::INFINITY,
    };
    checks.push(VerifyCheck { name: "linearization-order", residual: slope_residual, tolerance: 0.2 });

    checks
}

/// Convenience: whether every check in a suite run passed.
pub fn all_passed(checks: &[VerifyCheck]) -> bool {
    checks.iter().all(VerifyCheck::passed)
}
