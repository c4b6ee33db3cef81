//! `lorcat`: scene-driven checks for the inertial-frame categories.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 usage or scene
//! parse error. Reports go to stdout, diagnostics to stderr.

mod checks;
mod scene;

use clap::{Parser, Subcommand};
use lorcat_core::frames::Morphism;
use lorcat_core::functors::limit_scan;
use lorcat_core::kinematics::Regime;
use lorcat_core::vecmat::{Event, Vec3};
use scene::load_scene;

#[derive(Parser)]
#[command(name = "lorcat", version, about = "Inertial-frame category toolkit")]
struct Cli {
    /// Scene file (JSON)
    #[arg(long, global = true)]
    scene: Option<String>,
    /// Emit a machine-readable JSON report on stdout
    #[arg(long, global = true)]
    json: bool,
    /// Absolute tolerance override
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Light-speed override
    #[arg(long = "c", id = "light-speed", global = true)]
    c: Option<f64>,
    /// Seed for randomized suites
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Sample count for randomized suites
    #[arg(long, global = true, default_value_t = 1000)]
    samples: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply the anchor-to-frame transformation to an event displacement
    Transform {
        frame: String,
        t: f64,
        x: f64,
        y: f64,
        z: f64,
    },
    /// Compose the morphisms a -> b -> c and report the decomposition
    Compose { a: String, b: String, c: String },
    /// Run the scene's declared checks
    Check,
    /// Convergence scan of the relativistic formulas toward the
    /// classical ones over a list of light speeds
    Cscan {
        vx: f64,
        vy: f64,
        vz: f64,
        /// Comma-separated light speeds, strictly increasing
        #[arg(long, default_value = "10,100,1000,10000,100000")]
        c_values: String,
    },
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(run(cli));
}

fn run(cli: Cli) -> i32 {
    let scene_path = match &cli.scene {
        Some(p) => p.clone(),
        None => {
            eprintln!("error: --scene is required");
            return 2;
        }
    };
    let loaded = match load_scene(&scene_path, cli.c, cli.tol) {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    lorcat_core::set_default_tolerance(loaded.tolerance);

    match &cli.command {
        Command::Transform { frame, t, x, y, z } => {
            let event = Event::new(*t, Vec3::new(*x, *y, *z));
            cmd_transform(&loaded, frame, &event, cli.json)
        }
        Command::Compose { a, b, c } => cmd_compose(&loaded, a, b, c, cli.json),
        Command::Check => checks::cmd_check(&loaded, cli.seed, cli.samples, cli.json),
        Command::Cscan { vx, vy, vz, c_values } => {
            cmd_cscan(&loaded, &Vec3::new(*vx, *vy, *vz), c_values, cli.json)
        }
    }
}

/// 12 significant digits, the report-wide number format.
fn sig(x: f64) -> String {
    format!("{x:.11e}")
}

fn velocity_unit(regime: Regime) -> &'static str {
    match regime {
        Regime::Classical => "",
        Regime::Relativistic => " (in units of c)",
    }
}

fn cmd_transform(loaded: &scene::LoadedScene, frame: &str, event: &Event, json: bool) -> i32 {
    let hom = match loaded.space.hom(loaded.space.anchor_id(), frame) {
        Ok(h) => h,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let out = hom.as_mat4().apply(event);
    if json {
        let report = serde_json::json!({
            "frame": frame,
            "input": {"t": event.t, "x": [event.x.x, event.x.y, event.x.z]},
            "output": {"t": out.t, "x": [out.x.x, out.x.y, out.x.z]},
        });
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
    } else {
        println!("transform anchor -> {frame}");
        println!("  in : t = {}, x = ({}, {}, {})", sig(event.t), sig(event.x.x), sig(event.x.y), sig(event.x.z));
        println!("  out: t = {}, x = ({}, {}, {})", sig(out.t), sig(out.x.x), sig(out.x.y), sig(out.x.z));
    }
    0
}

fn rotation_angle(r: &lorcat_core::Mat3) -> f64 {
    let trace = r.m[0][0] + r.m[1][1] + r.m[2][2];
    ((trace - 1.0) / 2.0).clamp(-1.0, 1.0).acos()
}

fn cmd_compose(loaded: &scene::LoadedScene, a: &str, b: &str, c: &str, json: bool) -> i32 {
    let space = &loaded.space;
    let result = (|| -> Result<_, lorcat_core::Error> {
        let f = space.hom(a, b)?;
        let g = space.hom(b, c)?;
        let gf = space.compose(&g, &f)?;
        let direct = space.hom(a, c)?;
        let residual = gf.as_mat4().max_abs_diff(&direct.as_mat4());
        Ok((f, g, gf, residual))
    })();
    let (f, g, gf, residual) = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };

    let unit = velocity_unit(loaded.regime);
    let scale = match loaded.regime {
        Regime::Classical => 1.0,
        Regime::Relativistic => loaded.c.value(),
    };
    let describe = |m: &Morphism| -> (Vec3, Option<f64>) {
        match m {
            Morphism::Gal(m) => (m.velocity.vector() * (1.0 / scale), None),
            Morphism::Lor(m) => (
                m.decomposition.velocity.vector() * (1.0 / scale),
                Some(rotation_angle(&m.decomposition.rotation)),
            ),
        }
    };
    let (vf, _) = describe(&f);
    let (vg, _) = describe(&g);
    let (vgf, wigner) = describe(&gf);

    if json {
        let report = serde_json::json!({
            "first": {"source": a, "target": b, "velocity": [vf.x, vf.y, vf.z]},
            "second": {"source": b, "target": c, "velocity": [vg.x, vg.y, vg.z]},
            "composite": {
                "source": a, "target": c,
                "velocity": [vgf.x, vgf.y, vgf.z],
                "wigner_angle_rad": wigner,
            },
            "residual_vs_direct_hom": residual,
        });
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
    } else {
        println!("hom({a}, {b}): velocity{unit} = ({}, {}, {})", sig(vf.x), sig(vf.y), sig(vf.z));
        println!("hom({b}, {c}): velocity{unit} = ({}, {}, {})", sig(vg.x), sig(vg.y), sig(vg.z));
        println!("composite {a} -> {c}: velocity{unit} = ({}, {}, {})", sig(vgf.x), sig(vgf.y), sig(vgf.z));
        match wigner {
            Some(angle) => println!("  wigner angle = {} rad", sig(angle)),
            None => println!("  classical regime: plain velocity addition"),
        }
        println!("  residual vs hom({a}, {c}) = {}", sig(residual));
    }
    0
}

fn cmd_cscan(_loaded: &scene::LoadedScene, v: &Vec3, c_values: &str, json: bool) -> i32 {
    let parsed: Result<Vec<f64>, _> = c_values.split(',').map(|s| s.trim().parse::<f64>()).collect();
    let cs = match parsed {
        Ok(cs) if !cs.is_empty() && cs.windows(2).all(|w| w[0] < w[1]) => cs,
        _ => {
            eprintln!("error: --c-values must be a strictly increasing comma-separated list");
            return 2;
        }
    };
    // the scan probes the formulas, not the scene's frames; a unit
    // event keeps the deviations desk-scale
    let event = Event::new(1.0, Vec3::new(1.0, 1.0, 0.0));
    let table = match limit_scan(v, &event, &cs) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };

    let in_band = |s: Option<f64>| s.map(|s| (-2.2..=-1.8).contains(&s));
    if json {
        println!("{}", serde_json::to_string_pretty(&table).unwrap());
    } else {
        println!("{:>12} {:>18} {:>18} {:>18}", "c", "morphism dev", "addition dev", "gyration dev");
        for row in &table.rows {
            println!(
                "{:>12} {:>18} {:>18} {:>18}",
                row.c,
                sig(row.morphism_deviation),
                sig(row.addition_deviation),
                sig(row.gyration_deviation)
            );
        }
        for (name, slope) in [
            ("morphism", table.morphism_slope),
            ("addition", table.addition_slope),
            ("gyration", table.gyration_slope),
        ] {
            match slope {
                Some(s) => {
                    let flag = if in_band(Some(s)) == Some(true) { "" } else { "  <-- outside [-2.2, -1.8]" };
                    println!("slope[{name}] = {}{flag}", sig(s));
                }
                None => println!("slope[{name}] = n/a (all rows at noise floor)"),
            }
        }
    }
    0
}
