//! Acceptance suite: one test per criterion, each printing its own
//! pass line through the harness. Tolerances are pinned in the
//! assertions.

use lorcat_core::diagrams::{build_index, no_privileged_frame, Arrow, Diagram};
use lorcat_core::frames::extended::{extended_hom_count_witness, ExtendedObject};
use lorcat_core::frames::Morphism;
use lorcat_core::functors::{
    check_adjunction, check_functor_laws, limit_functor, limit_scan, m_functor, pair_spaces,
};
use lorcat_core::kinematics::{
    boost_apply, boost_matrix, classical_add, einstein_add, galilean_matrix, gyration, interval,
    lorentz_factor, Velocity,
};
use lorcat_core::vecmat::{rotation_from_axis_angle, Event, Mat4, Vec3};
use lorcat_core::{FrameSpace, LightSpeed, Mat3};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};
use std::time::Instant;

const C: LightSpeed = LightSpeed::NATURAL;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random velocity with magnitude up to `max_speed` (units of c).
fn random_velocity(rng: &mut ChaCha8Rng, max_speed: f64) -> Velocity {
    let dir = loop {
        let v = Vec3::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let n = v.norm();
        if n > 1e-3 {
            break v * (1.0 / n);
        }
    };
    let speed = rng.gen_range(0.0..max_speed);
    Velocity::relativistic(dir * speed, C).unwrap()
}

fn random_event(rng: &mut ChaCha8Rng) -> Event {
    Event::new(
        rng.gen_range(-1.0..1.0),
        Vec3::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ),
    )
}

#[test]
fn criterion_01_gyration_composition_law() {
    let mut rng = rng(1);
    let start = Instant::now();
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let u = random_velocity(&mut rng, 0.99);
        let v = random_velocity(&mut rng, 0.99);
        let r = gyration(&u, &v, C).unwrap();
        let w = einstein_add(&u, &v, C).unwrap();
        let lhs = Mat4::from_rotation(&r) * boost_matrix(&w, C).unwrap();
        let rhs = boost_matrix(&u, C).unwrap() * boost_matrix(&v, C).unwrap();
        worst = worst.max(lhs.max_abs_diff(&rhs));
    }
    assert!(worst < 1e-9, "worst composition residual {worst:e}");
    assert!(start.elapsed().as_secs_f64() < 1.0, "took {:?}", start.elapsed());
}

#[test]
fn criterion_02_inverse_laws() {
    let mut rng = rng(2);
    let mut worst_rel = 0.0f64;
    for i in 0..1000 {
        // include exact 0.99c magnitudes among the samples
        let v = if i % 10 == 0 {
            let d = random_velocity(&mut rng, 0.5).vector();
            let n = d.norm();
            if n == 0.0 {
                continue;
            }
            Velocity::relativistic(d * (0.99 / n), C).unwrap()
        } else {
            random_velocity(&mut rng, 0.99)
        };
        let round = boost_matrix(&v, C).unwrap() * boost_matrix(&v.reversed(), C).unwrap();
        worst_rel = worst_rel.max(round.max_abs_diff(&Mat4::IDENTITY));
    }
    assert!(worst_rel < 1e-9, "relativistic inverse residual {worst_rel:e}");

    let mut worst_cls = 0.0f64;
    for _ in 0..1000 {
        let v = Velocity::classical(Vec3::new(
            rng.gen_range(-10.0..10.0),
            rng.gen_range(-10.0..10.0),
            rng.gen_range(-10.0..10.0),
        ))
        .unwrap();
        let round = galilean_matrix(&v) * galilean_matrix(&v.reversed());
        worst_cls = worst_cls.max(round.max_abs_diff(&Mat4::IDENTITY));
    }
    assert!(worst_cls < 1e-12, "classical inverse residual {worst_cls:e}");
}

#[test]
fn criterion_03_einstein_addition_oracle_equivalence() {
    let mut rng = rng(3);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let u = random_velocity(&mut rng, 0.99);
        let v = random_velocity(&mut rng, 0.99);
        let w = einstein_add(&u, &v, C).unwrap();
        let m = boost_matrix(&u, C).unwrap() * boost_matrix(&v, C).unwrap();
        let oracle = Vec3::new(
            -m.m[0][1] / m.m[0][0],
            -m.m[0][2] / m.m[0][0],
            -m.m[0][3] / m.m[0][0],
        );
        worst = worst.max((w.vector() - oracle).max_abs());
    }
    assert!(worst < 1e-10, "closed form vs oracle {worst:e}");

    let half = Velocity::relativistic(Vec3::new(0.5, 0.0, 0.0), C).unwrap();
    let sum = einstein_add(&half, &half, C).unwrap();
    assert!((sum.vector() - Vec3::new(0.8, 0.0, 0.0)).max_abs() < 1e-12);
}

#[test]
fn criterion_04_interval_preservation() {
    let mut rng = rng(4);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let v = random_velocity(&mut rng, 0.99);
        let e = random_event(&mut rng);
        let before = interval(&e, C);
        let after = interval(&boost_apply(&v, C, &e).unwrap(), C);
        let scale = (e.t * e.t + e.x.norm_squared()).max(1e-30);
        worst = worst.max((after - before).abs() / scale);
    }
    assert!(worst < 1e-9, "relative interval deviation {worst:e}");
}

fn random_space(rng: &mut ChaCha8Rng) -> FrameSpace {
    let n = rng.gen_range(2..=8usize);
    let mut builder = FrameSpace::relativistic(C).frame("f0", Vec3::ZERO);
    for i in 1..n {
        builder = builder.frame(&format!("f{i}"), random_velocity(rng, 0.99).vector());
    }
    builder.build().unwrap()
}

fn random_diagram(rng: &mut ChaCha8Rng, space: &FrameSpace) -> Diagram {
    let n_obj = rng.gen_range(1..=6usize);
    let objects: Vec<String> = (0..n_obj).map(|i| format!("I{i}")).collect();
    // forward arrows keep the free category finite at path_bound 4
    let n_arrows = if n_obj > 1 { rng.gen_range(0..=12usize) } else { 0 };
    let mut arrows = Vec::new();
    for k in 0..n_arrows {
        let s = rng.gen_range(0..n_obj - 1);
        let t = rng.gen_range(s + 1..n_obj);
        arrows.push(Arrow {
            id: format!("a{k}"),
            source: format!("I{s}"),
            target: format!("I{t}"),
        });
    }
    let index = loop {
        match build_index(&objects, &arrows, &[], 4, 64) {
            Ok(idx) => break idx,
            Err(_) => {
                arrows.truncate(arrows.len() / 2);
            }
        }
    };
    let frame_ids: Vec<String> = space.ids().map(String::from).collect();
    let map: BTreeMap<String, String> = objects
        .iter()
        .map(|o| (o.clone(), frame_ids[rng.gen_range(0..frame_ids.len())].clone()))
        .collect();
    Diagram::new(index, map, space).unwrap()
}

#[test]
fn criterion_05_completeness_at_desk_scale() {
    let mut rng = rng(5);
    for scene in 0..50 {
        let start = Instant::now();
        let space = random_space(&mut rng);
        let diagram = random_diagram(&mut rng, &space);
        let report = no_privileged_frame(&space, &diagram).unwrap();
        assert!(report.pass, "scene {scene}: {report:?}");
        assert!(
            report.worst_residual < 1e-8,
            "scene {scene}: residual {:e}",
            report.worst_residual
        );
        assert!(start.elapsed().as_secs_f64() < 1.0, "scene {scene} took {:?}", start.elapsed());
    }
}

fn lorcat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lorcat"))
        .args(args)
        .output()
        .expect("failed to spawn lorcat")
}

#[test]
fn criterion_06_fault_detection() {
    let delta = 1e-3;
    let dir = env!("CARGO_TARGET_TMPDIR");
    for frame in ["lab", "a", "b"] {
        let path = Path::new(dir).join(format!("fault_{frame}.scene.json"));
        let scene = format!(
            r#"{{
  "regime": "lorentz",
  "c": 1.0,
  "frames": [
    {{ "id": "lab", "velocity": [0, 0, 0] }},
    {{ "id": "a", "velocity": [0.5, 0, 0] }},
    {{ "id": "b", "velocity": [0, 0.5, 0] }}
  ],
  "checks": ["axioms", "no_privileged_frame"],
  "faults": [ {{ "frame": "{frame}", "row": 1, "col": 1, "delta": {delta} }} ]
}}"#
        );
        std::fs::write(&path, scene).unwrap();
        let out = lorcat(&["--scene", path.to_str().unwrap(), "--json", "check"]);
        assert_eq!(out.status.code(), Some(1), "frame {frame} should fail");
        let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        let worst = report["checks"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c["worst_residual"].as_f64().unwrap())
            .fold(0.0f64, f64::max);
        assert!(
            worst >= delta / 10.0 && worst <= delta * 10.0,
            "frame {frame}: residual {worst:e} vs perturbation {delta:e}"
        );
    }
}

#[test]
fn criterion_07_limit_functor_convergence() {
    let cs: Vec<f64> = (1..=5).map(|k| 10f64.powi(k)).collect();
    let table = limit_scan(
        &Vec3::new(1.0, 0.0, 0.0),
        &Event::new(1.0, Vec3::new(1.0, 1.0, 0.0)),
        &cs,
    )
    .unwrap();
    for (name, slope) in [
        ("morphism", table.morphism_slope),
        ("addition", table.addition_slope),
        ("gyration", table.gyration_slope),
    ] {
        let slope = slope.unwrap_or(f64::NAN);
        assert!(
            (-2.2..=-1.8).contains(&slope),
            "{name} slope {slope} outside [-2.2, -1.8]"
        );
    }
}

#[test]
fn criterion_08_functor_and_adjunction_laws() {
    let lor = FrameSpace::relativistic(C)
        .frame("lab", Vec3::ZERO)
        .frame("a", Vec3::new(0.5, 0.0, 0.0))
        .frame("b", Vec3::new(0.0, 0.5, 0.0))
        .frame("c", Vec3::new(0.2, -0.3, 0.4))
        .frame("d", Vec3::new(-0.6, 0.1, 0.0))
        .build()
        .unwrap();
    let l = limit_functor(&lor).unwrap();
    let laws = check_functor_laws(&l, 1000, 8).unwrap();
    assert_eq!(laws.max_identity_residual, 0.0);
    assert_eq!(laws.max_composition_residual, 0.0);
    assert!(laws.full_and_faithful);

    // L . M identity round trip on an embeddable classical space
    let gal = l.target.clone();
    let m = m_functor(&gal, C).unwrap();
    let back = pair_spaces(&m.target).unwrap();
    for a in gal.ids() {
        for b in gal.ids() {
            assert_eq!(
                gal.hom(a, b).unwrap().as_mat4(),
                back.hom(a, b).unwrap().as_mat4()
            );
        }
    }

    let adjunction = check_adjunction(&m, &l, 1000, 8).unwrap();
    assert!(
        adjunction.max_naturality_residual < 1e-9,
        "naturality {:e}",
        adjunction.max_naturality_residual
    );
    assert!(adjunction.pass, "{adjunction:?}");
}

#[test]
fn criterion_09_extended_category_witness() {
    let space = FrameSpace::relativistic(C)
        .frame("lab", Vec3::ZERO)
        .frame("ship", Vec3::new(0.5, 0.0, 0.0))
        .build()
        .unwrap();
    let a = ExtendedObject::new("a", "lab", Vec3::ZERO);
    let b = ExtendedObject::new("b", "ship", Vec3::new(0.0, 1.0, 0.0));
    let quarter =
        rotation_from_axis_angle(&Vec3::new(0.0, 0.0, 1.0), std::f64::consts::FRAC_PI_2).unwrap();
    let (m1, m2) = extended_hom_count_witness(&space, &a, &b, quarter).unwrap();
    assert!(m1.matrix.max_abs_diff(&m2.matrix) > 0.1);

    // the rotation-free sub-category recovers singleton homs
    let (n1, n2) = extended_hom_count_witness(&space, &a, &b, Mat3::IDENTITY).unwrap();
    assert_eq!(n1.matrix, n2.matrix);
}

#[test]
fn criterion_10_cli_determinism_and_exit_codes() {
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let pass = fixtures.join("pass.scene.json");
    let fault = fixtures.join("fault.scene.json");
    let broken = fixtures.join("broken.scene.json");

    let args = ["--scene", pass.to_str().unwrap(), "--json", "--seed", "99", "check"];
    let first = lorcat(&args);
    let second = lorcat(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout, "reports differ between runs");

    assert_eq!(lorcat(&["--scene", fault.to_str().unwrap(), "check"]).status.code(), Some(1));
    assert_eq!(lorcat(&["--scene", broken.to_str().unwrap(), "check"]).status.code(), Some(2));
}

// sanity anchors used by several criteria above
#[test]
fn reference_values_hold() {
    let v06 = Velocity::relativistic(Vec3::new(0.6, 0.0, 0.0), C).unwrap();
    assert!((lorentz_factor(&v06, C).unwrap() - 1.25).abs() < 1e-15);
    let u = Velocity::classical(Vec3::new(1.0, 0.0, 0.0)).unwrap();
    let v = Velocity::classical(Vec3::new(0.0, 1.0, 0.0)).unwrap();
    assert_eq!(
        classical_add(&u, &v).unwrap().vector(),
        Vec3::new(1.0, 1.0, 0.0)
    );
    let space = FrameSpace::classical()
        .frame("lab", Vec3::ZERO)
        .frame("a", Vec3::new(1.0, 0.0, 0.0))
        .frame("b", Vec3::new(3.0, 0.0, 0.0))
        .build()
        .unwrap();
    match space.hom("a", "b").unwrap() {
        Morphism::Gal(g) => {
            assert_eq!(g.velocity.vector(), Vec3::new(2.0, 0.0, 0.0))
        }
        _ => unreachable!(),
    }
}
