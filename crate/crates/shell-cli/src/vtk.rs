//! VTK legacy ASCII writer for deformed-midsurface exports.
//!
//! Produces a `POLYDATA` quad mesh of the deformation samples `m` with
//! point data: the three rotation columns, strain invariants, and the limit
//! energy density (whose weighted nodal sum reproduces the evaluated
//! membrane + curvature energy up to quadrature tolerance).

use shellkit::assemble::{nodal_kinematics, GridGeometry, ShellGrid, ShellState};
use shellkit::cosserat3d::MaterialParams;
use shellkit::error::Result;
use shellkit::rotalg::{skew, sym};
use shellkit::shellcore::{w_curv_hom, w_mp_hom};

/// Renders the export as one VTK legacy ASCII document.
///
/// # Errors
///
/// Propagates strain/density evaluation failures.
pub fn render(
    state: &ShellState,
    grid: &ShellGrid,
    geom: &GridGeometry,
    mat: &MaterialParams,
) -> Result<String> {
    let kin = nodal_kinematics(state, grid, geom)?;
    let n = grid.n1 * grid.n2;
    let mut out = String::new();
    out.push_str("# vtk DataFile Version 3.0\n");
    out.push_str("deformed midsurface\n");
    out.push_str("ASCII\n");
    out.push_str("DATASET POLYDATA\n");
    out.push_str(&format!("POINTS {n} double\n"));
    for m in &state.m {
        out.push_str(&format!("{:.17e} {:.17e} {:.17e}\n", m.x, m.y, m.z));
    }
    let ncell = (grid.n1 - 1) * (grid.n2 - 1);
    out.push_str(&format!("POLYGONS {ncell} {}\n", 5 * ncell));
    for j in 0..grid.n2 - 1 {
        for i in 0..grid.n1 - 1 {
            out.push_str(&format!(
                "4 {} {} {} {}\n",
                grid.idx(i, j),
                grid.idx(i + 1, j),
                grid.idx(i + 1, j + 1),
                grid.idx(i, j + 1)
            ));
        }
    }
    out.push_str(&format!("POINT_DATA {n}\n"));
    for col in 0..3 {
        out.push_str(&format!("VECTORS rotation_col{} double\n", col + 1));
        for q in &state.q {
            let c = q.column(col);
            out.push_str(&format!("{:.17e} {:.17e} {:.17e}\n", c.x, c.y, c.z));
        }
    }
    let scalars: [(&str, Box<dyn Fn(usize) -> Result<f64>>); 4] = [
        ("strain_sym_norm", Box::new(|id| Ok(sym(&kin[id].e).norm()))),
        ("strain_skew_norm", Box::new(|id| Ok(skew(&kin[id].e).norm()))),
        ("strain_trace", Box::new(|id| Ok(kin[id].e.trace()))),
        (
            "energy_density",
            Box::new(|id| {
                let frame = &geom.frames[id];
                Ok((w_mp_hom(&kin[id].e, frame, mat)? + w_curv_hom(&kin[id].k, frame, mat)?)
                    * frame.det_grad_theta0)
            }),
        ),
    ];
    for (name, f) in &scalars {
        out.push_str(&format!("SCALARS {name} double 1\nLOOKUP_TABLE default\n"));
        for id in 0..n {
            out.push_str(&format!("{:.17e}\n", f(id)?));
        }
    }
    Ok(out)
}
