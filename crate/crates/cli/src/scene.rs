//! Scene files: a UTF-8 JSON document declaring the regime, light
//! speed, tolerance, frames, diagrams and the checks to run.
//!
//! The first frame listed is the anchor and must be at rest with no
//! rotation. Relativistic frames may carry an axis-angle rotation in
//! their anchor transform; classical frames are velocity-only.
//!
//! An optional `faults` array perturbs single anchor-matrix entries
//! after the space is built. It exists for the fault-detection
//! fixtures used by the verification suite.

use lorcat_core::diagrams::{build_index, Arrow, Diagram, DEFAULT_CLASS_CAP};
use lorcat_core::vecmat::rotation_from_axis_angle;
use lorcat_core::{FrameSpace, LightSpeed, Regime, Vec3};
use serde::Deserialize;
use std::collections::BTreeMap;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scene {
    pub regime: SceneRegime,
    #[serde(default = "default_c")]
    pub c: f64,
    #[serde(default)]
    pub tolerance: Option<f64>,
    pub frames: Vec<SceneFrame>,
    #[serde(default)]
    pub diagrams: Vec<SceneDiagram>,
    #[serde(default)]
    pub checks: Vec<String>,
    #[serde(default)]
    pub faults: Vec<SceneFault>,
}

fn default_c() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum SceneRegime {
    #[serde(rename = "galilean")]
    Galilean,
    #[serde(rename = "lorentz")]
    Lorentz,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFrame {
    pub id: String,
    pub velocity: [f64; 3],
    #[serde(default)]
    pub rotation: Option<SceneRotation>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneRotation {
    pub axis: [f64; 3],
    pub angle: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneDiagram {
    pub name: String,
    pub objects: Vec<String>,
    #[serde(default)]
    pub arrows: Vec<SceneArrow>,
    #[serde(default)]
    pub relations: Vec<(Vec<String>, Vec<String>)>,
    #[serde(default = "default_path_bound")]
    pub path_bound: usize,
    pub map: BTreeMap<String, String>,
}

fn default_path_bound() -> usize {
    4
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneArrow {
    pub id: String,
    pub source: String,
    pub target: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFault {
    pub frame: String,
    pub row: usize,
    pub col: usize,
    pub delta: f64,
}

fn vec3(a: [f64; 3]) -> Vec3 {
    Vec3::new(a[0], a[1], a[2])
}

/// Effective values after CLI overrides.
pub struct LoadedScene {
    pub scene: Scene,
    pub space: FrameSpace,
    pub regime: Regime,
    pub c: LightSpeed,
    pub tolerance: f64,
}

/// Parses a scene file and builds its frame space. All frame
/// invariants are enforced at load time; superluminal velocities are
/// rejected here, naming the offending frame.
pub fn load_scene(
    path: &str,
    c_override: Option<f64>,
    tol_override: Option<f64>,
) -> Result<LoadedScene, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read scene `{path}`: {e}"))?;
    let scene: Scene = serde_json::from_str(&text).map_err(|e| {
        format!("scene parse error in `{path}` at line {}, column {}: {e}", e.line(), e.column())
    })?;

    let c_val = c_override.unwrap_or(scene.c);
    let c = LightSpeed::new(c_val).map_err(|e| format!("invalid light speed: {e}"))?;
    let env_tol = std::env::var("LORCAT_TOL").ok().and_then(|s| s.parse::<f64>().ok());
    let tolerance = tol_override
        .or(scene.tolerance)
        .or(env_tol)
        .unwrap_or_else(lorcat_core::default_tolerance);
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(format!("invalid tolerance {tolerance}"));
    }

    if scene.frames.is_empty() {
        return Err("scene declares no frames".into());
    }

    let regime = match scene.regime {
        SceneRegime::Galilean => Regime::Classical,
        SceneRegime::Lorentz => Regime::Relativistic,
    };
    let mut builder = match regime {
        Regime::Classical => FrameSpace::classical(),
        Regime::Relativistic => FrameSpace::relativistic(c),
    }
    .tolerance(tolerance);

    for frame in &scene.frames {
        match (&frame.rotation, regime) {
            (None, _) => builder = builder.frame(&frame.id, vec3(frame.velocity)),
            (Some(_), Regime::Classical) => {
                return Err(format!(
                    "frame `{}`: rotations are not admitted in the galilean regime",
                    frame.id
                ));
            }
            (Some(rot), Regime::Relativistic) => {
                let r = rotation_from_axis_angle(&vec3(rot.axis), rot.angle)
                    .map_err(|e| format!("frame `{}`: {e}", frame.id))?;
                builder = builder.rotated_frame(&frame.id, r, vec3(frame.velocity));
            }
        }
    }
    let mut space = builder
        .build()
        .map_err(|e| format!("invalid scene `{path}`: {e}"))?;

    for fault in &scene.faults {
        if fault.row > 3 || fault.col > 3 {
            return Err(format!("fault on frame `{}`: matrix index out of range", fault.frame));
        }
        space
            .perturb_anchor(&fault.frame, fault.row, fault.col, fault.delta)
            .map_err(|e| format!("fault injection: {e}"))?;
    }

    Ok(LoadedScene { scene, space, regime, c, tolerance })
}

/// Builds a declared diagram against the loaded space.
pub fn build_diagram(decl: &SceneDiagram, space: &FrameSpace) -> Result<Diagram, String> {
    let arrows: Vec<Arrow> = decl
        .arrows
        .iter()
        .map(|a| Arrow { id: a.id.clone(), source: a.source.clone(), target: a.target.clone() })
        .collect();
    let index = build_index(&decl.objects, &arrows, &decl.relations, decl.path_bound, DEFAULT_CLASS_CAP)
        .map_err(|e| format!("diagram `{}`: {e}", decl.name))?;
    Diagram::new(index, decl.map.clone(), space).map_err(|e| format!("diagram `{}`: {e}", decl.name))
}

/// Fallback diagram when a scene declares checks that need one but no
/// diagrams: a chain visiting every frame in declaration order.
pub fn chain_diagram(space: &FrameSpace) -> Result<Diagram, String> {
    let ids: Vec<String> = space.ids().map(String::from).collect();
    let objects: Vec<String> = (0..ids.len()).map(|i| format!("I{i}")).collect();
    let arrows: Vec<Arrow> = (1..ids.len())
        .map(|i| Arrow {
            id: format!("a{i}"),
            source: format!("I{}", i - 1),
            target: format!("I{i}"),
        })
        .collect();
    let index = build_index(&objects, &arrows, &[], 4, DEFAULT_CLASS_CAP)
        .map_err(|e| format!("chain diagram: {e}"))?;
    let map: BTreeMap<String, String> =
        objects.iter().cloned().zip(ids.iter().cloned()).collect();
    Diagram::new(index, map, space).map_err(|e| format!("chain diagram: {e}"))
}
