//! The categories of inertial frames: objects are frames anchored to a
//! distinguished frame, and between any two frames there is exactly one
//! morphism, the unique Galilean or Lorentz transformation connecting
//! them. Both categories are groupoids.
//!
//! Each frame stores its transform from the anchor as a 4x4 matrix, so
//! the morphism between frames `a` and `b` is always `L_b * L_a^-1`.
//! This makes hom-sets singletons by construction and turns composition
//! closure into a theorem of the representation instead of stored data.

use crate::error::Error;
use crate::kinematics::{
    boost_matrix, decompose_lorentz_tol, galilean_matrix, BoostDecomposition, LightSpeed, Regime,
    Velocity,
};
use crate::vecmat::{Mat3, Mat4, Vec3};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub mod extended;

/// How a frame is reached from the anchor frame.
#[derive(Debug, Clone, PartialEq)]
pub enum AnchorTransform {
    Classical(Velocity),
    Relativistic(BoostDecomposition),
}

/// An inertial frame, identified by an opaque id. Equality of frames is
/// by id; two distinct bodies can be mutually at rest.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    id: String,
    anchor_transform: AnchorTransform,
    /// Anchor transform in matrix form; the single source of truth for
    /// hom computations. Fault injection perturbs this.
    matrix: Mat4,
}

impl Frame {
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn anchor_transform(&self) -> &AnchorTransform {
        &self.anchor_transform
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.matrix
    }
}

/// The unique classical morphism between two frames.
#[derive(Debug, Clone, PartialEq)]
pub struct GalMorphism {
    pub source: String,
    pub target: String,
    pub velocity: Velocity,
    /// The transform realizing the morphism, `L_target * L_source^-1`.
    pub matrix: Mat4,
}

/// The unique relativistic morphism between two frames.
#[derive(Debug, Clone, PartialEq)]
pub struct LorMorphism {
    pub source: String,
    pub target: String,
    pub matrix: Mat4,
    pub decomposition: BoostDecomposition,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Morphism {
    Gal(GalMorphism),
    Lor(LorMorphism),
}

impl Morphism {
    pub fn source(&self) -> &str {
        match self {
            Morphism::Gal(m) => &m.source,
            Morphism::Lor(m) => &m.source,
        }
    }

    pub fn target(&self) -> &str {
        match self {
            Morphism::Gal(m) => &m.target,
            Morphism::Lor(m) => &m.target,
        }
    }

    /// The 4x4 transform of the morphism. Classical morphisms embed via
    /// their Galilean matrix so one deviation metric serves both
    /// categories.
    pub fn as_mat4(&self) -> Mat4 {
        match self {
            Morphism::Gal(m) => m.matrix,
            Morphism::Lor(m) => m.matrix,
        }
    }
}

/// Category-axiom check results: worst deviations over the sampled
/// tuples, plus a structural-validity sweep over every hom.
#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub samples: usize,
    pub max_associativity: f64,
    pub max_identity: f64,
    pub max_closure: f64,
    pub max_inverse: f64,
    pub max_validity: f64,
    pub worst_violation: Option<String>,
    pub tol: f64,
    pub pass: bool,
}

impl AxiomReport {
    pub fn worst(&self) -> f64 {
        self.max_associativity
            .max(self.max_identity)
            .max(self.max_closure)
            .max(self.max_inverse)
            .max(self.max_validity)
    }
}

/// A finite collection of inertial frames with a distinguished anchor.
/// Immutable after construction apart from the explicit fault-injection
/// hook used by the verification suites.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameSpace {
    regime: Regime,
    c: LightSpeed,
    tol: f64,
    frames: Vec<Frame>,
}

pub struct FrameSpaceBuilder {
    regime: Regime,
    c: LightSpeed,
    tol: f64,
    frames: Vec<Frame>,
    error: Option<Error>,
}

impl FrameSpace {
    /// Builder for a classical space. The first frame added is the
    /// anchor and must be at rest.
    pub fn classical() -> FrameSpaceBuilder {
        FrameSpaceBuilder {
            regime: Regime::Classical,
            c: LightSpeed::NATURAL,
            tol: crate::default_tolerance(),
            frames: Vec::new(),
            error: None,
        }
    }

    /// Builder for a relativistic space with the given light speed.
    pub fn relativistic(c: LightSpeed) -> FrameSpaceBuilder {
        FrameSpaceBuilder {
            regime: Regime::Relativistic,
            c,
            tol: crate::default_tolerance(),
            frames: Vec::new(),
            error: None,
        }
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn light_speed(&self) -> LightSpeed {
        self.c
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn anchor_id(&self) -> &str {
        self.frames[0].id()
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.frames.iter().map(|f| f.id())
    }

    pub fn frame(&self, id: &str) -> Result<&Frame, Error> {
        self.frames
            .iter()
            .find(|f| f.id == id)
            .ok_or_else(|| Error::UnknownFrame { id: id.into() })
    }

    /// The unique morphism `a -> b`.
    pub fn hom(&self, a: &str, b: &str) -> Result<Morphism, Error> {
        let fa = self.frame(a)?;
        let fb = self.frame(b)?;
        let matrix = fb.matrix * fa.matrix.invert()?;
        self.morphism_from_matrix(a, b, matrix)
    }

    fn morphism_from_matrix(&self, a: &str, b: &str, matrix: Mat4) -> Result<Morphism, Error> {
        match self.regime {
            Regime::Classical => {
                let velocity = Velocity::classical(Vec3::new(
                    -matrix.m[1][0],
                    -matrix.m[2][0],
                    -matrix.m[3][0],
                ))?;
                Ok(Morphism::Gal(GalMorphism {
                    source: a.into(),
                    target: b.into(),
                    velocity,
                    matrix,
                }))
            }
            Regime::Relativistic => {
                // best-effort decomposition: structural validity is
                // reported by morphism_validity, not enforced here
                let decomposition = decompose_lorentz_tol(&matrix, self.c, f64::INFINITY)?;
                Ok(Morphism::Lor(LorMorphism {
                    source: a.into(),
                    target: b.into(),
                    matrix,
                    decomposition,
                }))
            }
        }
    }

    pub fn identity(&self, a: &str) -> Result<Morphism, Error> {
        self.hom(a, a)
    }

    /// Composition `g after f`. The result is again the unique morphism
    /// between its endpoints.
    pub fn compose(&self, g: &Morphism, f: &Morphism) -> Result<Morphism, Error> {
        if g.source() != f.target() {
            return Err(Error::NonComposable {
                f_target: f.target().into(),
                g_source: g.source().into(),
            });
        }
        self.morphism_from_matrix(f.source(), g.target(), g.as_mat4() * f.as_mat4())
    }

    /// Every morphism is invertible; both categories are groupoids.
    pub fn inverse(&self, f: &Morphism) -> Result<Morphism, Error> {
        self.morphism_from_matrix(f.target(), f.source(), f.as_mat4().invert()?)
    }

    /// Structural deviation of a morphism's matrix from its category's
    /// admissible shape: Minkowski-form preservation for Lorentz
    /// morphisms, the Galilean block shape for classical ones. Zero on
    /// an uncorrupted space; this is what fault injection trips.
    pub fn morphism_validity(&self, m: &Morphism) -> f64 {
        match m {
            Morphism::Gal(m) => m.matrix.galilean_deviation(),
            Morphism::Lor(m) => m.matrix.minkowski_deviation(self.c.value()),
        }
    }

    /// Samples composition tuples and reports worst deviations for the
    /// category laws, plus a structural sweep over all hom matrices.
    pub fn check_category_axioms(&self, samples: usize, seed: u64) -> Result<AxiomReport, Error> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ids: Vec<&str> = self.ids().collect();
        let pick = |rng: &mut ChaCha8Rng| ids[rng.gen_range(0..ids.len())];

        let mut max_assoc = 0.0f64;
        let mut max_identity = 0.0f64;
        let mut max_closure = 0.0f64;
        let mut max_inverse = 0.0f64;
        for _ in 0..samples {
            let (a, b, c, d) = (pick(&mut rng), pick(&mut rng), pick(&mut rng), pick(&mut rng));
            let f = self.hom(a, b)?;
            let g = self.hom(b, c)?;
            let h = self.hom(c, d)?;
            let gf = self.compose(&g, &f)?;
            let hg = self.compose(&h, &g)?;
            let assoc = self
                .compose(&h, &gf)?
                .as_mat4()
                .max_abs_diff(&self.compose(&hg, &f)?.as_mat4());
            max_assoc = max_assoc.max(assoc);

            let id_b = self.identity(b)?;
            let id_a = self.identity(a)?;
            let left = self.compose(&id_b, &f)?.as_mat4().max_abs_diff(&f.as_mat4());
            let right = self.compose(&f, &id_a)?.as_mat4().max_abs_diff(&f.as_mat4());
            max_identity = max_identity.max(left).max(right);

            let closure = gf.as_mat4().max_abs_diff(&self.hom(a, c)?.as_mat4());
            max_closure = max_closure.max(closure);

            let inv = self.inverse(&f)?;
            let round = self.compose(&inv, &f)?.as_mat4().max_abs_diff(&self.identity(a)?.as_mat4());
            max_inverse = max_inverse.max(round);
        }

        let mut max_validity = 0.0f64;
        let mut worst_violation = None;
        for a in &ids {
            for b in &ids {
                let m = self.hom(a, b)?;
                let v = self.morphism_validity(&m);
                if v > max_validity {
                    max_validity = v;
                    if v >= self.tol {
                        worst_violation =
                            Some(format!("hom({a}, {b}) structural deviation {v:e}"));
                    }
                }
            }
        }

        let tol = self.tol;
        let pass = max_assoc < tol
            && max_identity < tol
            && max_closure < tol
            && max_inverse < tol
            && max_validity < tol;
        Ok(AxiomReport {
            samples,
            max_associativity: max_assoc,
            max_identity,
            max_closure,
            max_inverse,
            max_validity,
            worst_violation,
            tol,
            pass,
        })
    }

    /// Fault-injection hook for the verification suites: adds `delta`
    /// to one entry of a frame's stored anchor matrix.
    pub fn perturb_anchor(&mut self, id: &str, row: usize, col: usize, delta: f64) -> Result<(), Error> {
        let frame = self
            .frames
            .iter_mut()
            .find(|f| f.id == id)
            .ok_or_else(|| Error::UnknownFrame { id: id.into() })?;
        frame.matrix.m[row][col] += delta;
        Ok(())
    }
}

impl FrameSpaceBuilder {
    pub fn tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    fn push(&mut self, frame: Frame) {
        if self.error.is_some() {
            return;
        }
        if self.frames.iter().any(|f| f.id == frame.id) {
            self.error = Some(Error::DuplicateFrame { id: frame.id });
            return;
        }
        self.frames.push(frame);
    }

    /// Adds a frame moving with `velocity` relative to the anchor.
    pub fn frame(mut self, id: &str, velocity: Vec3) -> Self {
        let result = match self.regime {
            Regime::Classical => Velocity::classical(velocity).map(|v| Frame {
                id: id.into(),
                matrix: galilean_matrix(&v),
                anchor_transform: AnchorTransform::Classical(v),
            }),
            Regime::Relativistic => {
                Velocity::relativistic(velocity, self.c).and_then(|v| {
                    let matrix = boost_matrix(&v, self.c)?;
                    Ok(Frame {
                        id: id.into(),
                        matrix,
                        anchor_transform: AnchorTransform::Relativistic(BoostDecomposition {
                            rotation: Mat3::IDENTITY,
                            velocity: v,
                        }),
                    })
                })
            }
        };
        match result {
            Ok(frame) => self.push(frame),
            Err(e) => self.error = self.error.take().or(Some(e)),
        }
        self
    }

    /// Adds a relativistic frame whose anchor transform is a rotation
    /// followed by a boost.
    pub fn rotated_frame(mut self, id: &str, rotation: Mat3, velocity: Vec3) -> Self {
        if self.regime != Regime::Relativistic {
            self.error = Some(Error::RegimeMismatch {
                expected: "relativistic".into(),
                actual: "classical".into(),
            });
            return self;
        }
        if !rotation.is_rotation(self.tol.max(1e-9)) {
            self.error = Some(Error::NotLorentz { deviation: rotation.rotation_deviation() });
            return self;
        }
        let result = Velocity::relativistic(velocity, self.c).and_then(|v| {
            let decomposition = BoostDecomposition { rotation, velocity: v };
            let matrix = decomposition.reassemble(self.c)?;
            Ok(Frame {
                id: id.into(),
                matrix,
                anchor_transform: AnchorTransform::Relativistic(decomposition),
            })
        });
        match result {
            Ok(frame) => self.push(frame),
            Err(e) => self.error = self.error.take().or(Some(e)),
        }
        self
    }

    pub fn build(self) -> Result<FrameSpace, Error> {
        if let Some(e) = self.error {
            return Err(e);
        }
        let anchor = self.frames.first().ok_or_else(|| Error::UnknownFrame {
            id: "<anchor: space has no frames>".into(),
        })?;
        if anchor.matrix.max_abs_diff(&Mat4::IDENTITY) > 0.0 {
            return Err(Error::NonIdentityAnchor { id: anchor.id.clone() });
        }
        Ok(FrameSpace {
            regime: self.regime,
            c: self.c,
            tol: self.tol,
            frames: self.frames,
        })
    }
}
