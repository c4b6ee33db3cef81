//! The `check` subcommand: runs the scene's declared checks and emits
//! a deterministic report. Checks are sorted by name before printing,
//! so output ordering never depends on execution order.

use crate::scene::{build_diagram, chain_diagram, LoadedScene};
use lorcat_core::diagrams::{no_privileged_frame, Diagram};
use lorcat_core::functors::{
    check_adjunction, check_functor_laws, check_limit_preservation, limit_functor, m_functor,
    pair_spaces,
};
use lorcat_core::{FrameSpace, Regime};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub worst_residual: f64,
    pub details: String,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub pass: bool,
    pub checks: Vec<CheckResult>,
}

fn fail(name: &str, details: String) -> CheckResult {
    CheckResult { name: name.into(), pass: false, worst_residual: f64::INFINITY, details }
}

fn run_axioms(space: &FrameSpace, seed: u64, samples: usize) -> CheckResult {
    match space.check_category_axioms(samples, seed) {
        Ok(report) => CheckResult {
            name: "axioms".into(),
            pass: report.pass,
            worst_residual: report.worst(),
            details: match &report.worst_violation {
                Some(v) => v.clone(),
                None => format!(
                    "assoc {:.3e}, identity {:.3e}, closure {:.3e}, inverse {:.3e}, validity {:.3e}",
                    report.max_associativity,
                    report.max_identity,
                    report.max_closure,
                    report.max_inverse,
                    report.max_validity
                ),
            },
        },
        Err(e) => fail("axioms", e.to_string()),
    }
}

fn run_limits(space: &FrameSpace, name: &str, diagram: &Diagram) -> CheckResult {
    let relations = match diagram.relation_deviation(space) {
        Ok(d) => d,
        Err(e) => return fail(name, e.to_string()),
    };
    match no_privileged_frame(space, diagram) {
        Ok(report) => {
            let worst = report.worst_residual.max(relations);
            let pass = report.pass && relations < space.tolerance();
            CheckResult {
                name: name.into(),
                pass,
                worst_residual: worst,
                details: if report.failing_vertices.is_empty() {
                    format!("all {} vertices are limits; relation dev {relations:.3e}", space.len())
                } else {
                    format!("failing vertices: {}", report.failing_vertices.join(", "))
                },
            }
        }
        Err(e) => fail(name, e.to_string()),
    }
}

fn run_functors(loaded: &LoadedScene, seed: u64, samples: usize, diagrams: &[(String, Diagram)]) -> CheckResult {
    let name = "functors";
    let functor = match loaded.regime {
        Regime::Relativistic => limit_functor(&loaded.space),
        Regime::Classical => m_functor(&loaded.space, loaded.c),
    };
    let functor = match functor {
        Ok(f) => f,
        Err(e) => return fail(name, e.to_string()),
    };
    match check_functor_laws(&functor, samples, seed) {
        Ok(report) => {
            let mut preserved = true;
            for (_, diagram) in diagrams {
                match check_limit_preservation(&functor, diagram) {
                    Ok(ok) => preserved &= ok,
                    Err(e) => return fail(name, e.to_string()),
                }
            }
            CheckResult {
                name: name.into(),
                pass: report.pass && preserved,
                worst_residual: report
                    .max_identity_residual
                    .max(report.max_composition_residual),
                details: format!(
                    "identities {:.3e}, compositions {:.3e}, full+faithful over {} hom pairs{}",
                    report.max_identity_residual,
                    report.max_composition_residual,
                    report.hom_pairs_checked,
                    if preserved { "; limits preserved" } else { "; LIMIT PRESERVATION FAILED" }
                ),
            }
        }
        Err(e) => fail(name, e.to_string()),
    }
}

fn run_adjunction(loaded: &LoadedScene, seed: u64, samples: usize) -> CheckResult {
    let name = "adjunction";
    let result = (|| {
        let (l, m) = match loaded.regime {
            Regime::Relativistic => {
                let l = limit_functor(&loaded.space)?;
                let m = m_functor(&l.target, loaded.c)?;
                Ok::<_, lorcat_core::Error>((l, m))
            }
            Regime::Classical => {
                let m = m_functor(&loaded.space, loaded.c)?;
                let l = limit_functor(&m.target)?;
                Ok((l, m))
            }
        }?;
        check_adjunction(&m, &l, samples, seed)
    })();
    match result {
        Ok(report) => CheckResult {
            name: name.into(),
            pass: report.pass,
            worst_residual: report
                .max_naturality_residual
                .max(report.max_triangle_residual)
                .max(report.max_comma_residual),
            details: format!(
                "naturality {:.3e}, triangles {:.3e}, comma {:.3e} over {} bijection pairs",
                report.max_naturality_residual,
                report.max_triangle_residual,
                report.max_comma_residual,
                report.bijection_pairs_checked
            ),
        },
        Err(e) => fail(name, e.to_string()),
    }
}

/// Verifies the paired classical shadow exists and L's object action
/// round-trips through M on embeddable spaces.
fn run_pairing(loaded: &LoadedScene) -> CheckResult {
    let name = "pairing";
    let result = (|| {
        let gal = match loaded.regime {
            Regime::Relativistic => pair_spaces(&loaded.space)?,
            Regime::Classical => loaded.space.clone(),
        };
        let m = m_functor(&gal, loaded.c)?;
        let back = pair_spaces(&m.target)?;
        let mut worst = 0.0f64;
        for a in gal.ids() {
            for b in gal.ids() {
                worst = worst.max(
                    gal.hom(a, b)?
                        .as_mat4()
                        .max_abs_diff(&back.hom(a, b)?.as_mat4()),
                );
            }
        }
        Ok::<f64, lorcat_core::Error>(worst)
    })();
    match result {
        Ok(worst) => CheckResult {
            name: name.into(),
            pass: worst == 0.0,
            worst_residual: worst,
            details: "L(M(-)) round trip on the classical shadow".into(),
        },
        Err(e) => fail(name, e.to_string()),
    }
}

pub fn cmd_check(loaded: &LoadedScene, seed: u64, samples: usize, json: bool) -> i32 {
    let mut results: Vec<CheckResult> = Vec::new();
    let mut diagrams: Vec<(String, Diagram)> = Vec::new();
    for decl in &loaded.scene.diagrams {
        match build_diagram(decl, &loaded.space) {
            Ok(d) => diagrams.push((decl.name.clone(), d)),
            Err(e) => {
                eprintln!("error: {e}");
                return 2;
            }
        }
    }

    for check in &loaded.scene.checks {
        match check.as_str() {
            "axioms" => results.push(run_axioms(&loaded.space, seed, samples)),
            "limits" => {
                if diagrams.is_empty() {
                    match chain_diagram(&loaded.space) {
                        Ok(d) => results.push(run_limits(&loaded.space, "limits", &d)),
                        Err(e) => results.push(fail("limits", e)),
                    }
                }
                for (name, diagram) in &diagrams {
                    results.push(run_limits(&loaded.space, &format!("limits:{name}"), diagram));
                }
            }
            "no_privileged_frame" => match chain_diagram(&loaded.space) {
                Ok(d) => {
                    let mut r = run_limits(&loaded.space, "no_privileged_frame", &d);
                    if !r.pass {
                        r.details = format!("a frame failed the limit check: {}", r.details);
                    }
                    results.push(r);
                }
                Err(e) => results.push(fail("no_privileged_frame", e)),
            },
            "functors" => results.push(run_functors(loaded, seed, samples, &diagrams)),
            "adjunction" => results.push(run_adjunction(loaded, seed, samples)),
            "pairing" => results.push(run_pairing(loaded)),
            other => {
                eprintln!("error: unknown check `{other}`");
                return 2;
            }
        }
    }

    results.sort_by(|a, b| a.name.cmp(&b.name));
    let report = Report { pass: results.iter().all(|r| r.pass), checks: results };

    if json {
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
    } else {
        for check in &report.checks {
            println!(
                "[{}] {}  worst residual {:.6e}  {}",
                if check.pass { "PASS" } else { "FAIL" },
                check.name,
                check.worst_residual,
                check.details
            );
        }
        println!("overall: {}", if report.pass { "PASS" } else { "FAIL" });
    }
    if report.pass {
        0
    } else {
        1
    }
}
