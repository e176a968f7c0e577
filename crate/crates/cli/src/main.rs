//! Batch driver: verification suites, Kerr-value tables, wave evolutions,
//! and mode projections, all emitting machine-readable CSV.
//!
//! Exit status: 0 all checks pass, 1 at least one check failed, 2 config or
//! domain error.

mod config;
mod report;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use kerr_core::frames::{frame_invariant_defects, principal_frame, transform_frame, FrameTransform};
use kerr_core::gcm::ell1_modes;
use kerr_core::horizontal::{
    curvature_components, kerr_table, ricci_coefficients,
};
use kerr_core::kerr::{metric, BLPoint, KerrParams};
use kerr_core::rw::{decay_report, rw_potential, step, Boundary, DecayRun, FieldState, Grid1D};

#[derive(Parser)]
#[command(name = "kerrkit", about = "Kerr geometry verification toolkit", version)]
struct Cli {
    /// TOML configuration file; omit for the documented defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; omit to print to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the identity/oracle verification suites and write a report.
    Verify {
        /// Suite name filter; repeatable. Omit to run everything.
        #[arg(long)]
        suite: Vec<String>,
    },
    /// Compare computed principal-frame quantities against their closed forms.
    Table,
    /// Evolve the Regge-Wheeler equation and write the diagnostic time series.
    Evolve,
    /// Project a test function onto the l = 1 modes of a coordinate sphere.
    Modes,
    /// Apply a configured frame transformation and report the invariants.
    Transform,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match config::load(cli.config.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };
    let out = cli.out.as_deref();
    let result = match &cli.command {
        Command::Verify { suite } => cmd_verify(&cfg, suite, out),
        Command::Table => cmd_table(&cfg, out),
        Command::Evolve => cmd_evolve(&cfg, out),
        Command::Modes => cmd_modes(&cfg, out),
        Command::Transform => cmd_transform(&cfg, out),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn write_out(text: &str, out: Option<&std::path::Path>) -> Result<(), String> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_verify(
    cfg: &config::RunConfig,
    suite_flags: &[String],
    out: Option<&std::path::Path>,
) -> Result<bool, String> {
    let mut selected: Vec<String> = cfg.verify.suites.clone();
    selected.extend_from_slice(suite_flags);
    for s in &selected {
        if !suites::known_suite(s) {
            return Err(format!(
                "unknown suite '{s}'; available: {}",
                suites::SUITE_NAMES.join(", ")
            ));
        }
    }
    let mut rows = suites::run(cfg, &selected).map_err(|e| e.to_string())?;
    // deterministic file order: check id first, sample order within an id
    rows.sort_by(|x, y| x.check_id.cmp(&y.check_id));
    report::emit(&rows, out).map_err(|e| e.to_string())
}

fn cmd_table(cfg: &config::RunConfig, out: Option<&std::path::Path>) -> Result<bool, String> {
    let t = &cfg.table;
    let params = KerrParams::new(t.a, t.m).map_err(|e| e.to_string())?;
    let p = BLPoint::new(0.0, t.r, t.theta, 0.0);
    let fj = kerr_core::frames::principal_frame_jets(params, &p, 1).map_err(|e| e.to_string())?;
    let rc = ricci_coefficients(params, &p, &fj).map_err(|e| e.to_string())?;
    let cc = curvature_components(params, &p, &fj.values()).map_err(|e| e.to_string())?;
    let table = kerr_table(params, p.r, p.theta);
    let p_scale = table.p.norm();

    let mut csv = String::from("quantity,re_computed,im_computed,re_kerr,im_kerr,rel_err\n");
    let mut all_pass = true;
    let mut push = |name: &str, got: num_complex::Complex64, want: num_complex::Complex64, scale: f64| {
        let err = (got - want).norm() / scale;
        all_pass &= err < 1e-10;
        csv.push_str(&format!(
            "{name},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
            got.re, got.im, want.re, want.im, err
        ));
    };
    let zero = num_complex::Complex64::new(0.0, 0.0);
    push("A", cc.big_a()[0][0], zero, p_scale);
    push("B", cc.big_b()[0], zero, p_scale);
    push("P", cc.big_p(), table.p, p_scale);
    push("Bb", cc.big_bb()[0], zero, p_scale);
    push("Ab", cc.big_ab()[0][0], zero, p_scale);
    push("Xhat", rc.x_hat()[0][0], zero, p_scale);
    push("Xbhat", rc.xb_hat()[0][0], zero, p_scale);
    push("trX", rc.tr_x(), table.tr_x, table.tr_x.norm());
    push("trXb", rc.tr_xb(), table.tr_xb, table.tr_xb.norm());
    let jk_scale = table.hb[0].norm().max(table.hb[1].norm()).max(p_scale);
    push("Z1", rc.z()[0], table.z[0], jk_scale);
    push("Z2", rc.z()[1], table.z[1], jk_scale);
    push("H1", rc.h()[0], table.h[0], jk_scale);
    push("H2", rc.h()[1], table.h[1], jk_scale);
    push("Hb1", rc.hb()[0], table.hb[0], jk_scale);
    push("Hb2", rc.hb()[1], table.hb[1], jk_scale);
    write_out(&csv, out)?;
    Ok(all_pass)
}

fn parse_bc(s: &str) -> Result<Boundary, String> {
    match s {
        "reflecting" => Ok(Boundary::Reflecting),
        "outgoing" => Ok(Boundary::Outgoing),
        other => Err(format!("unknown bc '{other}' (use reflecting|outgoing)")),
    }
}

fn cmd_evolve(cfg: &config::RunConfig, out: Option<&std::path::Path>) -> Result<bool, String> {
    let e = &cfg.evolve;
    let bc = parse_bc(&e.bc)?;
    let dx = (e.rstar_max - e.rstar_min) / (e.n_points - 1) as f64;
    let grid = Grid1D::new(e.rstar_min, e.rstar_max, e.n_points, e.cfl * dx)
        .map_err(|err| err.to_string())?;
    let window = if e.mass > 0.0 {
        DecayRun::standard_window(e.mass)
    } else {
        (20.0, 35.0)
    };
    let run = DecayRun {
        grid,
        ell: e.ell,
        mass: e.mass,
        bc,
        t_end: e.t_end,
        sample_every: e.sample_every.max(1),
        window_rstar: window,
        observer_rstar: e.observer_rstar,
    };
    let init = FieldState::gaussian(&run.grid, e.pulse_center, e.pulse_width);
    let rep = decay_report(&run, init).map_err(|err| err.to_string())?;
    let mut csv = rep.to_csv();
    if let Some(fit) = rep.fit {
        csv.push_str(&format!(
            "# tail_slope,{:.16e},{:.16e},{}\n",
            fit.slope, fit.ci_half_width, fit.n_used
        ));
    }
    if bc == Boundary::Reflecting {
        let e0 = rep.samples.first().map(|s| s.e_total).unwrap_or(0.0);
        let drift = rep
            .samples
            .iter()
            .map(|s| ((s.e_total - e0) / e0.max(1e-300)).abs())
            .fold(0.0f64, f64::max);
        csv.push_str(&format!("# energy_drift_rel,{drift:.16e}\n"));
    }
    if e.refine {
        let factor = convergence_factor(e, bc)?;
        csv.push_str(&format!("# convergence_factor,{factor:.16e}\n"));
    }
    write_out(&csv, out)?;
    Ok(true)
}

/// Richardson factor e1/e2 from runs at n, 2n-1, 4n-3 points (shared nodes,
/// shared final time: the refined runs take exactly halved steps).
fn convergence_factor(e: &config::EvolveSection, bc: Boundary) -> Result<f64, String> {
    let t_end = e.t_end.min(20.0);
    let n = e.n_points.min(2049);
    let dx0 = (e.rstar_max - e.rstar_min) / (n - 1) as f64;
    let dt0 = e.cfl * dx0;
    let steps0 = (t_end / dt0).round().max(1.0) as usize;
    let run = |level: u32| -> Result<Vec<f64>, String> {
        let refine = 1usize << level;
        let points = (n - 1) * refine + 1;
        let grid = Grid1D::new(
            e.rstar_min,
            e.rstar_max,
            points,
            dt0 / refine as f64,
        )
        .map_err(|err| err.to_string())?;
        let pot = rw_potential(e.ell, e.mass, &grid).map_err(|err| err.to_string())?;
        let mut s = FieldState::gaussian(&grid, e.pulse_center, e.pulse_width);
        for _ in 0..steps0 * refine {
            s = step(&s, &pot, &grid, bc).map_err(|err| err.to_string())?;
        }
        Ok(s.psi)
    };
    let coarse = run(0)?;
    let medium = run(1)?;
    let fine = run(2)?;
    let mut e1 = 0.0f64;
    let mut e2 = 0.0f64;
    for i in 0..n {
        e1 = e1.max((coarse[i] - medium[2 * i]).abs());
        e2 = e2.max((medium[2 * i] - fine[4 * i]).abs());
    }
    Ok(e1 / e2)
}

fn cmd_modes(cfg: &config::RunConfig, out: Option<&std::path::Path>) -> Result<bool, String> {
    let m = &cfg.modes;
    let params = KerrParams::new(m.a, m.m).map_err(|e| e.to_string())?;
    let h: Box<dyn Fn(f64, f64) -> f64> = match m.h.as_str() {
        "one" => Box::new(|_, _| 1.0),
        "cos_theta" => Box::new(|th: f64, _| th.cos()),
        "sin_sin" => Box::new(|th: f64, ph: f64| th.sin() * ph.sin()),
        "sin_cos" => Box::new(|th: f64, ph: f64| th.sin() * ph.cos()),
        other => return Err(format!("unknown mode function '{other}'")),
    };
    let (i0, ip, im) = ell1_modes(h.as_ref(), params, m.r);
    let csv = format!(
        "h,I0,Iplus,Iminus\n{},{:.16e},{:.16e},{:.16e}\n",
        m.h, i0, ip, im
    );
    write_out(&csv, out)?;
    Ok(true)
}

fn cmd_transform(cfg: &config::RunConfig, out: Option<&std::path::Path>) -> Result<bool, String> {
    let t = &cfg.transform;
    let params = KerrParams::new(t.a, t.m).map_err(|e| e.to_string())?;
    let p = BLPoint::new(0.0, t.r, t.theta, 0.0);
    let g = metric(params, &p).map_err(|e| e.to_string())?.g;
    let base = principal_frame(params, &p).map_err(|e| e.to_string())?;
    let x = FrameTransform {
        f: t.f,
        fbar: t.fbar,
        lambda: t.lambda,
    };
    let primed = transform_frame(&base, &x).map_err(|e| e.to_string())?;
    let names = [
        "g(e4,e4)", "g(e3,e3)", "g(e3,e4)+2", "g(e1,e1)-1", "g(e2,e2)-1", "g(e1,e2)",
        "g(e1,e3)", "g(e1,e4)", "g(e2,e3)", "g(e2,e4)",
    ];
    let before = frame_invariant_defects(&g, &base);
    let after = frame_invariant_defects(&g, &primed);
    let mut csv = String::from("invariant,base_defect,transformed_defect,tolerance,pass\n");
    let mut all = true;
    for ((name, b), a) in names.iter().zip(before.iter()).zip(after.iter()) {
        let ok = a.abs() < 1e-10;
        all &= ok;
        csv.push_str(&format!("{name},{:.16e},{:.16e},{:.16e},{ok}\n", b, a, 1e-10));
    }
    write_out(&csv, out)?;
    Ok(all)
}
