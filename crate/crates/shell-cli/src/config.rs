//! TOML run configuration: deserialization, validation, and construction of
//! the library objects (patch, material, grid, loads, solver options).
//!
//! All physical quantities are plain numbers in a consistent unit system
//! (SI assumed); comments in config files are the place for unit
//! annotations. The parsed configuration round-trips exactly through
//! serialization.

use serde::{Deserialize, Serialize};
use shellkit::assemble::{LoadSpec, MinimizeOptions, ShellGrid};
use shellkit::cosserat3d::MaterialParams;
use shellkit::error::Error;
use shellkit::surface::{MidsurfacePatch, Poly2};
use shellkit::{Mat3, Vec3};

/// Top-level run configuration.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Reference surface.
    pub patch: PatchConfig,
    /// Material constants.
    pub material: MaterialConfig,
    /// Node lattice.
    pub grid: GridConfig,
    /// Shell thickness.
    pub model: ModelConfig,
    /// External loads (optional; default none).
    #[serde(default)]
    pub loads: Option<LoadConfig>,
    /// Dirichlet boundary selection (optional; default free).
    #[serde(default)]
    pub boundary: Option<BoundaryConfig>,
    /// Minimizer options (optional; library defaults).
    #[serde(default)]
    pub solver: Option<SolverConfig>,
    /// Thin-limit sweep (optional).
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    /// Verification-suite options (optional).
    #[serde(default)]
    pub verify: Option<VerifyConfig>,
}

/// Surface selection: one preset kind plus its parameters.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PatchConfig {
    /// `plate`, `cylinder`, `sphere-cap`, `graph`, or `tabulated`.
    pub kind: String,
    /// Domain rectangle `[x1min, x1max, x2min, x2max]`.
    pub domain: [f64; 4],
    /// Radius (cylinder, sphere-cap).
    #[serde(default)]
    pub radius: Option<f64>,
    /// Graph terms `[[i, j, c], ...]` of the height polynomial
    /// `g = Σ c·x₁ⁱ·x₂ʲ`.
    #[serde(default)]
    pub terms: Option<Vec<(u32, u32, f64)>>,
    /// Tabulated-surface grid file.
    #[serde(default)]
    pub grid_file: Option<String>,
}

/// Material block (bulk Lamé/Cosserat constants and curvature weights).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MaterialConfig {
    /// Shear modulus μ (stress).
    pub mu: f64,
    /// First Lamé constant λ (stress).
    pub lambda: f64,
    /// Cosserat couple modulus μ_c (stress).
    pub mu_c: f64,
    /// Internal length L_c (length).
    pub l_c: f64,
    /// Curvature weight a₁ (dimensionless).
    pub a1: f64,
    /// Curvature weight a₂ (dimensionless).
    pub a2: f64,
    /// Curvature weight a₃ (dimensionless).
    pub a3: f64,
}

/// Node-lattice block.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    /// Nodes along `x₁`.
    pub n1: usize,
    /// Nodes along `x₂`.
    pub n2: usize,
}

/// Model block.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    /// Thickness `h` (length); admissibility `h·max|κᵢ| < 2` is checked
    /// before every run.
    pub h: f64,
}

/// Load block: constant resultants (the supported expression presets are
/// constants; richer fields belong in state files).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct LoadConfig {
    /// Body-force resultant `N₀` (force/area).
    #[serde(default)]
    pub n0: Option<[f64; 3]>,
    /// First-moment resultant `M₁`.
    #[serde(default)]
    pub m1: Option<[f64; 3]>,
    /// Boundary couple `C₀`, row-major 9 numbers.
    #[serde(default)]
    pub c0: Option<[f64; 9]>,
    /// First-moment boundary couple `C₁`, row-major 9 numbers.
    #[serde(default)]
    pub c1: Option<[f64; 9]>,
    /// Loaded boundary part: `none`, `left`, or `boundary`.
    #[serde(default)]
    pub gamma1: Option<String>,
    /// Include the `h²` first-moment terms (default false).
    #[serde(default)]
    pub include_moment_terms: bool,
}

/// Dirichlet selection for `m`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BoundaryConfig {
    /// `none`, `left`, or `boundary`.
    pub clamp: String,
}

/// Minimizer block.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    /// Iteration budget.
    #[serde(default)]
    pub max_iter: Option<usize>,
    /// Gradient sup-norm tolerance.
    #[serde(default)]
    pub tol: Option<f64>,
    /// Initial Armijo trial step.
    #[serde(default)]
    pub initial_step: Option<f64>,
    /// Checkpoint interval in iterations (default 50).
    #[serde(default)]
    pub checkpoint_every: Option<usize>,
}

/// Thin-limit sweep block.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Thickness list.
    pub h_list: Vec<f64>,
    /// Through-thickness levels of the 3D lattice (odd, ≥ 3; default 9).
    #[serde(default)]
    pub n3: Option<usize>,
}

/// Verification block.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    /// Debug override of the derived curvature coefficient `b₃` (negative
    /// control for the suite; leave unset for real runs).
    #[serde(default)]
    pub override_b3: Option<f64>,
}

impl RunConfig {
    /// Parses a TOML string.
    pub fn from_toml(text: &str) -> Result<Self, Error> {
        toml::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))
    }

    /// Reads and parses a config file.
    pub fn from_file(path: &std::path::Path) -> Result<Self, Error> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    /// Serializes back to TOML (round-trips through [`Self::from_toml`]).
    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    /// Builds the surface patch.
    pub fn build_patch(&self) -> Result<MidsurfacePatch, Error> {
        let p = &self.patch;
        match p.kind.as_str() {
            "plate" => Ok(MidsurfacePatch::plate(p.domain)),
            "cylinder" => {
                let r = p.radius.ok_or_else(|| Error::Parse("cylinder needs radius".into()))?;
                Ok(MidsurfacePatch::cylinder(r, p.domain))
            }
            "sphere-cap" => {
                let r = p.radius.ok_or_else(|| Error::Parse("sphere-cap needs radius".into()))?;
                Ok(MidsurfacePatch::sphere_cap(r, p.domain))
            }
            "graph" => {
                let terms =
                    p.terms.clone().ok_or_else(|| Error::Parse("graph needs terms".into()))?;
                Ok(MidsurfacePatch::graph(Poly2 { terms }, p.domain))
            }
            "tabulated" => {
                let file = p
                    .grid_file
                    .as_ref()
                    .ok_or_else(|| Error::Parse("tabulated needs grid_file".into()))?;
                let mut patch = MidsurfacePatch::tabulated_from_file(std::path::Path::new(file))?;
                patch.domain = p.domain;
                Ok(patch)
            }
            other => Err(Error::Parse(format!("unknown patch kind {other:?}"))),
        }
    }

    /// Builds the validated material.
    pub fn build_material(&self) -> Result<MaterialParams, Error> {
        let m = &self.material;
        MaterialParams::new(m.mu, m.lambda, m.mu_c, m.l_c, m.a1, m.a2, m.a3)
    }

    /// Builds the grid with the configured Dirichlet mask.
    pub fn build_grid(&self, patch: &MidsurfacePatch) -> Result<ShellGrid, Error> {
        let grid = ShellGrid::new(self.grid.n1, self.grid.n2, patch)?;
        let grid = match self.boundary.as_ref().map(|b| b.clamp.as_str()) {
            None | Some("none") => grid,
            Some("left") => grid.clamp_left_edge(),
            Some("boundary") => grid.clamp_boundary(),
            Some(other) => {
                return Err(Error::Parse(format!("unknown clamp selection {other:?}")))
            }
        };
        Ok(grid)
    }

    /// Builds the load specification on a grid.
    pub fn build_loads(&self, grid: &ShellGrid) -> Result<LoadSpec, Error> {
        let mut loads = LoadSpec::zero(grid);
        let Some(cfg) = &self.loads else { return Ok(loads) };
        let n = grid.n1 * grid.n2;
        if let Some(v) = cfg.n0 {
            loads.n0 = vec![Vec3::new(v[0], v[1], v[2]); n];
        }
        if let Some(v) = cfg.m1 {
            loads.m1 = vec![Vec3::new(v[0], v[1], v[2]); n];
        }
        if let Some(c) = cfg.c0 {
            loads.c0 = vec![mat3_from_row_major(&c); n];
        }
        if let Some(c) = cfg.c1 {
            loads.c1 = vec![mat3_from_row_major(&c); n];
        }
        match cfg.gamma1.as_deref() {
            None | Some("none") => {}
            Some("left") => {
                for j in 0..grid.n2 {
                    loads.gamma1[grid.idx(0, j)] = true;
                }
            }
            Some("boundary") => {
                for j in 0..grid.n2 {
                    for i in 0..grid.n1 {
                        if i == 0 || j == 0 || i + 1 == grid.n1 || j + 1 == grid.n2 {
                            loads.gamma1[grid.idx(i, j)] = true;
                        }
                    }
                }
            }
            Some(other) => {
                return Err(Error::Parse(format!("unknown gamma1 selection {other:?}")))
            }
        }
        loads.include_moment_terms = cfg.include_moment_terms;
        Ok(loads)
    }

    /// Builds the minimizer options.
    pub fn build_solver(&self) -> MinimizeOptions {
        let mut opts = MinimizeOptions::default();
        if let Some(s) = &self.solver {
            if let Some(v) = s.max_iter {
                opts.max_iter = v;
            }
            if let Some(v) = s.tol {
                opts.tol = v;
            }
            if let Some(v) = s.initial_step {
                opts.initial_step = v;
            }
        }
        opts
    }

    /// Checkpoint interval for `minimize` (default 50 iterations).
    pub fn checkpoint_every(&self) -> usize {
        self.solver
            .as_ref()
            .and_then(|s| s.checkpoint_every)
            .unwrap_or(50)
            .max(1)
    }
}

fn mat3_from_row_major(v: &[f64; 9]) -> Mat3 {
    Mat3::new(v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8])
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
[patch]
kind = "cylinder"
radius = 1.0
domain = [0.0, 1.0, 0.0, 1.0]

[material]
mu = 2.0
lambda = 1.5
mu_c = 0.7
l_c = 0.3
a1 = 1.1
a2 = 0.8
a3 = 0.6

[grid]
n1 = 9
n2 = 9

[model]
h = 0.05

[loads]
n0 = [0.0, 0.0, -0.01]
gamma1 = "left"

[boundary]
clamp = "left"

[solver]
max_iter = 100
tol = 1e-8

[sweep]
h_list = [0.2, 0.1, 0.05, 0.025]
n3 = 9
"#;

    #[test]
    fn round_trip_is_identity() {
        let cfg = RunConfig::from_toml(SAMPLE).unwrap();
        let text = cfg.to_toml();
        let again = RunConfig::from_toml(&text).unwrap();
        assert_eq!(cfg, again);
    }

    #[test]
    fn builds_all_objects() {
        let cfg = RunConfig::from_toml(SAMPLE).unwrap();
        let patch = cfg.build_patch().unwrap();
        let mat = cfg.build_material().unwrap();
        assert_eq!(mat.mu, 2.0);
        let grid = cfg.build_grid(&patch).unwrap();
        assert!(grid.dirichlet[grid.idx(0, 3)]);
        assert!(!grid.dirichlet[grid.idx(1, 3)]);
        let loads = cfg.build_loads(&grid).unwrap();
        assert!(!loads.is_zero());
        assert!(loads.gamma1[grid.idx(0, 0)]);
        assert_eq!(cfg.build_solver().max_iter, 100);
    }

    #[test]
    fn invalid_material_rejected() {
        let bad = SAMPLE.replace("mu_c = 0.7", "mu_c = -1.0");
        let cfg = RunConfig::from_toml(&bad).unwrap();
        assert!(cfg.build_material().is_err());
    }

    #[test]
    fn unknown_kind_rejected() {
        let bad = SAMPLE.replace("\"cylinder\"", "\"torus\"");
        let cfg = RunConfig::from_toml(&bad).unwrap();
        assert!(cfg.build_patch().is_err());
    }
}
