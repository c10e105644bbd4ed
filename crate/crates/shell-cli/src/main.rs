//! `shell` — command-line front end for the curved Cosserat membrane shell
//! library.
//!
//! Subcommands: `geometry` (frame/curvature report and thickness
//! admissibility), `energy` (breakdown of a state), `minimize` (gradient
//! descent with checkpointing), `gamma-sweep` (thin-limit gap table),
//! `verify` (self-check suite), `export` (VTK legacy ASCII surface).
//!
//! Exit codes: 0 ok, 2 config/geometry invalid, 3 admissibility failure,
//! 4 state I/O failure, 5 output failure, 10 verification failure.

mod config;
mod vtk;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use shellkit::assemble::{
    log_to_csv, minimize, total_energy_with_geom, GridGeometry, ShellState,
};
use shellkit::error::Error;
use shellkit::oracles::loglog_slope;
use shellkit::reconstruct::gamma_sample;
use shellkit::rotalg::{anti, exp_so3};
use shellkit::surface::thickness_admissible;
use shellkit::verify::run_suite;
use shellkit::Vec3;

use config::RunConfig;

/// Command-line interface definition.
#[derive(Parser)]
#[command(name = "shell", version, about = "Curved Cosserat membrane shell runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Run configuration (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// State checkpoint to start from / evaluate / export.
    #[arg(long, global = true)]
    state: Option<PathBuf>,
    /// Output directory (created if missing).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: available cores; 1 = bit-exact runs).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Regenerate golden files instead of comparing against them.
    #[arg(long, global = true, default_value_t = false)]
    bless: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Per-sample frame table (H, K, principal curvatures) and the
    /// thickness-admissibility verdict.
    Geometry,
    /// Energy breakdown of a state (identity state when none is given).
    Energy,
    /// Minimize the total energy; writes the final state and iteration CSV.
    Minimize,
    /// Thin-limit sweep: (h, scaled 3D energy, J0, gap) with a slope fit.
    GammaSweep,
    /// Run the self-verification suite.
    Verify,
    /// Export the deformed surface as VTK legacy ASCII.
    Export,
}

/// Failure categories mapped to process exit codes.
enum Failure {
    Config(String),
    Admissibility(String),
    StateIo(String),
    Output(String),
    Verification(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Admissibility(_) => 3,
            Failure::StateIo(_) => 4,
            Failure::Output(_) => 5,
            Failure::Verification(_) => 10,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m)
            | Failure::Admissibility(m)
            | Failure::StateIo(m)
            | Failure::Output(m)
            | Failure::Verification(m) => m,
        }
    }
}

fn config_err(e: Error) -> Failure {
    Failure::Config(e.to_string())
}

fn state_err(e: Error) -> Failure {
    Failure::StateIo(e.to_string())
}

fn output_err(e: std::io::Error) -> Failure {
    Failure::Output(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() {
            eprintln!("warning: global thread pool already initialized");
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

/// Loaded common objects shared by the subcommands.
struct Ctx {
    cfg: RunConfig,
    patch: shellkit::surface::MidsurfacePatch,
    mat: shellkit::cosserat3d::MaterialParams,
    grid: shellkit::assemble::ShellGrid,
}

fn load_ctx(cli: &Cli) -> Result<Ctx, Failure> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| Failure::Config("--config is required".into()))?;
    let cfg = RunConfig::from_file(path).map_err(config_err)?;
    let patch = cfg.build_patch().map_err(config_err)?;
    let mat = cfg.build_material().map_err(config_err)?;
    let grid = cfg.build_grid(&patch).map_err(config_err)?;
    Ok(Ctx { cfg, patch, mat, grid })
}

fn check_admissible(ctx: &Ctx, h: f64) -> Result<(), Failure> {
    let ok = thickness_admissible(&ctx.patch, h, (33, 33))
        .map_err(|e| Failure::Config(e.to_string()))?;
    if ok {
        Ok(())
    } else {
        Err(Failure::Admissibility(format!(
            "thickness h = {h} violates h·max|κ| < 2 on this patch"
        )))
    }
}

fn load_state(cli: &Cli, ctx: &Ctx) -> Result<ShellState, Failure> {
    match &cli.state {
        Some(path) => ShellState::read_file(path, &ctx.grid).map_err(state_err),
        None => ShellState::identity(&ctx.grid, &ctx.patch).map_err(config_err),
    }
}

fn out_dir(cli: &Cli) -> Result<Option<PathBuf>, Failure> {
    match &cli.out {
        None => Ok(None),
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(output_err)?;
            Ok(Some(dir.clone()))
        }
    }
}

fn write_out(dir: &Path, name: &str, content: &str) -> Result<(), Failure> {
    std::fs::write(dir.join(name), content).map_err(output_err)
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Geometry => cmd_geometry(cli),
        Command::Energy => cmd_energy(cli),
        Command::Minimize => cmd_minimize(cli),
        Command::GammaSweep => cmd_gamma_sweep(cli),
        Command::Verify => cmd_verify(cli),
        Command::Export => cmd_export(cli),
    }
}

fn cmd_geometry(cli: &Cli) -> Result<(), Failure> {
    let ctx = load_ctx(cli)?;
    let geom = GridGeometry::new(&ctx.grid, &ctx.patch).map_err(config_err)?;
    println!("{:>10} {:>10} {:>12} {:>12} {:>12} {:>12} {:>12}", "x1", "x2", "H", "K", "kappa1", "kappa2", "det");
    let mut table = String::from("x1,x2,H,K,kappa1,kappa2,det\n");
    for j in 0..ctx.grid.n2 {
        for i in 0..ctx.grid.n1 {
            let (x1, x2) = ctx.grid.coords(i, j);
            let f = &geom.frames[ctx.grid.idx(i, j)];
            let (k1, k2) = f.principal_curvatures;
            println!(
                "{x1:>10.4} {x2:>10.4} {:>12.6} {:>12.6} {:>12.6} {:>12.6} {:>12.6}",
                f.mean_curvature, f.gauss_curvature, k1, k2, f.det_grad_theta0
            );
            table.push_str(&format!(
                "{x1:.17e},{x2:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}\n",
                f.mean_curvature, f.gauss_curvature, k1, k2, f.det_grad_theta0
            ));
        }
    }
    if let Some(dir) = out_dir(cli)? {
        write_out(&dir, "geometry.csv", &table)?;
    }
    check_admissible(&ctx, ctx.cfg.model.h)?;
    println!("admissible: true (h = {})", ctx.cfg.model.h);
    Ok(())
}

fn cmd_energy(cli: &Cli) -> Result<(), Failure> {
    let ctx = load_ctx(cli)?;
    check_admissible(&ctx, ctx.cfg.model.h)?;
    let state = load_state(cli, &ctx)?;
    let geom = GridGeometry::new(&ctx.grid, &ctx.patch).map_err(config_err)?;
    let loads = ctx.cfg.build_loads(&ctx.grid).map_err(config_err)?;
    let b = total_energy_with_geom(&state, &ctx.grid, &geom, &ctx.mat, &loads, ctx.cfg.model.h)
        .map_err(config_err)?;
    println!("membrane        {:.17e}", b.membrane);
    println!("curvature       {:.17e}", b.curvature);
    println!("load_potential  {:.17e}", b.load_potential);
    println!("total           {:.17e}", b.total);
    let csv = format!(
        "membrane,curvature,load_potential,total\n{:.17e},{:.17e},{:.17e},{:.17e}\n",
        b.membrane, b.curvature, b.load_potential, b.total
    );
    if let Some(dir) = out_dir(cli)? {
        write_out(&dir, "energy.csv", &csv)?;
        let golden = dir.join("energy_golden.csv");
        if cli.bless {
            std::fs::write(&golden, &csv).map_err(output_err)?;
            println!("golden blessed: {}", golden.display());
        } else if golden.exists() {
            let want = std::fs::read_to_string(&golden).map_err(output_err)?;
            if !golden_matches(&want, &csv, 1e-12) {
                return Err(Failure::Verification(
                    "energy differs from golden file beyond 1e-12".into(),
                ));
            }
            println!("golden matched: {}", golden.display());
        }
    }
    Ok(())
}

/// Numeric comparison of two single-row CSV documents to a relative
/// tolerance (exact header match required).
fn golden_matches(want: &str, got: &str, tol: f64) -> bool {
    let (mut w, mut g) = (want.lines(), got.lines());
    if w.next() != g.next() {
        return false;
    }
    let parse = |l: Option<&str>| -> Option<Vec<f64>> {
        l.map(|l| l.split(',').filter_map(|v| v.parse().ok()).collect())
    };
    match (parse(w.next()), parse(g.next())) {
        (Some(a), Some(b)) if a.len() == b.len() => a
            .iter()
            .zip(&b)
            .all(|(x, y)| (x - y).abs() <= tol * (1.0 + x.abs().max(y.abs()))),
        _ => false,
    }
}

fn cmd_minimize(cli: &Cli) -> Result<(), Failure> {
    let ctx = load_ctx(cli)?;
    check_admissible(&ctx, ctx.cfg.model.h)?;
    let mut state = load_state(cli, &ctx)?;
    let loads = ctx.cfg.build_loads(&ctx.grid).map_err(config_err)?;
    let opts = ctx.cfg.build_solver();
    let chunk = ctx.cfg.checkpoint_every();
    let dir = out_dir(cli)?;
    if let Some(dir) = &dir {
        // Reproducibility record: the exact configuration this run used.
        write_out(dir, "config_used.toml", &ctx.cfg.to_toml())?;
    }

    // Run in checkpoint-sized chunks so an interrupted run resumes from the
    // last written state with an identical continuation (chunk boundaries
    // reset the trial step deterministically).
    let mut log = Vec::new();
    let mut done = 0;
    loop {
        let budget = chunk.min(opts.max_iter - done);
        let mut chunk_opts = opts;
        chunk_opts.max_iter = budget;
        let (next, chunk_log) =
            minimize(&state, &ctx.grid, &ctx.patch, &ctx.mat, &loads, ctx.cfg.model.h, &chunk_opts)
                .map_err(config_err)?;
        let iters = chunk_log.last().map_or(0, |r| r.iter);
        let converged = iters < budget;
        for mut r in chunk_log {
            if done > 0 && r.iter == 0 {
                continue; // duplicate of the previous chunk's last record
            }
            r.iter += done;
            log.push(r);
        }
        state = next;
        done += iters;
        if let Some(dir) = &dir {
            state
                .write_file(&ctx.grid, &dir.join("state_checkpoint.txt"))
                .map_err(|e| Failure::Output(e.to_string()))?;
        }
        if converged || done >= opts.max_iter || iters == 0 {
            break;
        }
    }

    let last = log.last().expect("at least the initial record");
    println!(
        "iterations: {}   total: {:.10e}   grad_inf: {:.3e}",
        last.iter, last.total, last.grad_inf_norm
    );
    if let Some(dir) = &dir {
        state
            .write_file(&ctx.grid, &dir.join("state_final.txt"))
            .map_err(|e| Failure::Output(e.to_string()))?;
        write_out(dir, "iterations.csv", &log_to_csv(&log))?;
    }
    Ok(())
}

/// Built-in smooth non-identity sweep state: gentle inflation plus drill.
fn sweep_state(ctx: &Ctx) -> ShellState {
    let p = ctx.patch.clone();
    ShellState::from_fn(
        &ctx.grid,
        move |x1, x2| p.jet(x1, x2).y * 1.05 + Vec3::new(0.0, 0.0, 0.02 * x1.sin()),
        |x1, x2| exp_so3(&anti(Vec3::new(0.05 * x2, 0.0, 0.1 * x1))),
    )
}

fn cmd_gamma_sweep(cli: &Cli) -> Result<(), Failure> {
    let ctx = load_ctx(cli)?;
    let sweep = ctx
        .cfg
        .sweep
        .clone()
        .ok_or_else(|| Failure::Config("gamma-sweep needs a [sweep] block".into()))?;
    let n3 = sweep.n3.unwrap_or(9);
    for &h in &sweep.h_list {
        check_admissible(&ctx, h)?;
    }
    let state = match &cli.state {
        Some(path) => ShellState::read_file(path, &ctx.grid).map_err(state_err)?,
        None => sweep_state(&ctx),
    };
    let mut csv = String::from("h,scaled_3d,j0,gap\n");
    let mut hs = Vec::new();
    let mut gaps = Vec::new();
    println!("{:>10} {:>18} {:>18} {:>14}", "h", "scaled_3d", "j0", "gap");
    for &h in &sweep.h_list {
        let s = gamma_sample(h, &state, &ctx.grid, &ctx.patch, &ctx.mat, n3)
            .map_err(config_err)?;
        println!("{h:>10.5} {:>18.12e} {:>18.12e} {:>14.6e}", s.scaled_3d, s.j0, s.gap);
        csv.push_str(&format!("{h:.17e},{:.17e},{:.17e},{:.17e}\n", s.scaled_3d, s.j0, s.gap));
        hs.push(h);
        gaps.push(s.gap.abs());
    }
    match loglog_slope(&hs, &gaps, 1e-14) {
        Some((slope, ci)) => println!("gap slope: {slope:.3} ± {ci:.3} (95% CI)"),
        None => println!("gap slope: not fit (gaps at quadrature floor)"),
    }
    if let Some(dir) = out_dir(cli)? {
        write_out(&dir, "gamma_sweep.csv", &csv)?;
    }
    Ok(())
}

fn cmd_verify(cli: &Cli) -> Result<(), Failure> {
    let ctx = load_ctx(cli)?;
    let override_b3 = ctx.cfg.verify.as_ref().and_then(|v| v.override_b3);
    let checks = run_suite(&ctx.mat, override_b3);
    let mut failed = 0;
    for c in &checks {
        println!("{}", c.line());
        if !c.passed() {
            failed += 1;
        }
    }
    if failed > 0 {
        return Err(Failure::Verification(format!("{failed} check(s) failed")));
    }
    println!("all {} checks passed", checks.len());
    Ok(())
}

fn cmd_export(cli: &Cli) -> Result<(), Failure> {
    let ctx = load_ctx(cli)?;
    let state = load_state(cli, &ctx)?;
    let geom = GridGeometry::new(&ctx.grid, &ctx.patch).map_err(config_err)?;
    let doc = vtk::render(&state, &ctx.grid, &geom, &ctx.mat).map_err(config_err)?;
    let dir = out_dir(cli)?
        .ok_or_else(|| Failure::Output("export needs --out".into()))?;
    write_out(&dir, "surface.vtk", &doc)?;
    println!("wrote {}", dir.join("surface.vtk").display());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_comparison_tolerates_roundoff() {
        let a = "x,y\n1.0,2.0\n";
        let b = "x,y\n1.0000000000000002,2.0\n";
        assert!(golden_matches(a, b, 1e-12));
        let c = "x,y\n1.1,2.0\n";
        assert!(!golden_matches(a, c, 1e-12));
        let d = "x,z\n1.0,2.0\n";
        assert!(!golden_matches(a, d, 1e-12));
    }
}
