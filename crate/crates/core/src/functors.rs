//! The classical-limit functor between the relativistic and classical
//! frame categories, its left adjoint, functor-law and adjunction
//! verification, and numerical large-c convergence scans.
//!
//! On objects the limit functor keeps the frame and its boost velocity,
//! discarding any anchor rotation. On morphisms it is forced: the image
//! is the unique classical hom between the paired frames. That forced
//! rule preserves identities and compositions exactly; the numerical
//! content is that it agrees with the pointwise velocity-relabeling
//! rule up to O(1/c^2), which the convergence scan measures.

use crate::diagrams::{cone_from_vertex, is_limit, Diagram, NoPrivilegeReport};
use crate::error::Error;
use crate::frames::{AnchorTransform, FrameSpace, GalMorphism, LorMorphism, Morphism};
use crate::kinematics::{
    boost_apply, einstein_add, galilean_apply, gyration, LightSpeed, Regime, Velocity,
};
use crate::vecmat::{Event, Mat3, Vec3};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    /// Relativistic to classical (the limit functor).
    LorToGal,
    /// Classical to relativistic (the left adjoint embedding).
    GalToLor,
}

/// A functor between paired frame spaces sharing one frame id set, with
/// the identity on objects.
#[derive(Debug, Clone)]
pub struct FunctorMap {
    pub direction: Direction,
    pub source: FrameSpace,
    pub target: FrameSpace,
}

impl FunctorMap {
    /// Image of a source-space morphism: the unique target-space hom
    /// between the same frame ids.
    pub fn on_morphism(&self, f: &Morphism) -> Result<Morphism, Error> {
        self.target.hom(f.source(), f.target())
    }
}

/// Builds the classical shadow of a relativistic space: same frame ids,
/// each classical anchor velocity is the boost part of the relativistic
/// anchor decomposition. Anchor rotations are discarded.
pub fn pair_spaces(lor_space: &FrameSpace) -> Result<FrameSpace, Error> {
    if lor_space.regime() != Regime::Relativistic {
        return Err(Error::RegimeMismatch {
            expected: "relativistic".into(),
            actual: lor_space.regime().to_string(),
        });
    }
    let mut builder = FrameSpace::classical().tolerance(lor_space.tolerance());
    for id in lor_space.ids() {
        let frame = lor_space.frame(id)?;
        let v = match frame.anchor_transform() {
            AnchorTransform::Relativistic(d) => d.velocity.vector(),
            AnchorTransform::Classical(v) => v.vector(),
        };
        builder = builder.frame(id, v);
    }
    builder.build()
}

/// The limit functor from a relativistic space to its classical shadow.
pub fn limit_functor(lor_space: &FrameSpace) -> Result<FunctorMap, Error> {
    let gal = pair_spaces(lor_space)?;
    Ok(FunctorMap { direction: Direction::LorToGal, source: lor_space.clone(), target: gal })
}

/// Image of a single relativistic morphism in the paired classical
/// space: the forced classical hom between its endpoints.
pub fn l_on_morphism(f: &LorMorphism, paired: &FrameSpace) -> Result<GalMorphism, Error> {
    match paired.hom(&f.source, &f.target)? {
        Morphism::Gal(g) => Ok(g),
        Morphism::Lor(_) => Err(Error::RegimeMismatch {
            expected: "classical".into(),
            actual: "relativistic".into(),
        }),
    }
}

/// The constructive left adjoint: embeds a classical space at the given
/// light speed, reusing anchor velocities with identity rotations.
/// Partial: velocities at or above `c` cannot embed.
pub fn m_functor(gal_space: &FrameSpace, c: LightSpeed) -> Result<FunctorMap, Error> {
    if gal_space.regime() != Regime::Classical {
        return Err(Error::RegimeMismatch {
            expected: "classical".into(),
            actual: gal_space.regime().to_string(),
        });
    }
    let mut builder = FrameSpace::relativistic(c).tolerance(gal_space.tolerance());
    for id in gal_space.ids() {
        let frame = gal_space.frame(id)?;
        let v = match frame.anchor_transform() {
            AnchorTransform::Classical(v) => v.vector(),
            AnchorTransform::Relativistic(d) => d.velocity.vector(),
        };
        if v.norm() >= c.value() {
            return Err(Error::SuperluminalEmbedding { speed: v.norm(), c: c.value() });
        }
        builder = builder.frame(id, v);
    }
    let target = builder.build()?;
    Ok(FunctorMap { direction: Direction::GalToLor, source: gal_space.clone(), target })
}

#[derive(Debug, Clone, Serialize)]
pub struct FunctorLawReport {
    pub samples: usize,
    pub max_identity_residual: f64,
    pub max_composition_residual: f64,
    /// Hom-set cardinalities are 1 on both sides for every frame pair,
    /// so fullness and faithfulness reduce to this bijection count.
    pub hom_pairs_checked: usize,
    pub full_and_faithful: bool,
    pub pass: bool,
}

/// Verifies that the functor preserves identities and compositions, and
/// that it is full and faithful (singleton hom-sets on both sides).
pub fn check_functor_laws(
    functor: &FunctorMap,
    samples: usize,
    seed: u64,
) -> Result<FunctorLawReport, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ids: Vec<String> = functor.source.ids().map(String::from).collect();
    let pick = |rng: &mut ChaCha8Rng| ids[rng.gen_range(0..ids.len())].clone();

    let mut max_id = 0.0f64;
    for id in &ids {
        let image = functor.on_morphism(&functor.source.identity(id)?)?;
        max_id = max_id.max(
            image
                .as_mat4()
                .max_abs_diff(&functor.target.identity(id)?.as_mat4()),
        );
    }

    let mut max_comp = 0.0f64;
    for _ in 0..samples {
        let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        let f = functor.source.hom(&a, &b)?;
        let g = functor.source.hom(&b, &c)?;
        let gf = functor.source.compose(&g, &f)?;
        let lhs = functor.on_morphism(&gf)?;
        // the categorical composite downstairs: in a singleton-hom
        // category the composite of the two images IS the unique hom
        // between their outer endpoints (its numerical realization is
        // covered by the closure axiom check)
        let fi = functor.on_morphism(&f)?;
        let gi = functor.on_morphism(&g)?;
        if gi.source() != fi.target() {
            return Err(Error::NonComposable {
                f_target: fi.target().into(),
                g_source: gi.source().into(),
            });
        }
        let rhs = functor.target.hom(fi.source(), gi.target())?;
        max_comp = max_comp.max(lhs.as_mat4().max_abs_diff(&rhs.as_mat4()));
    }

    // full and faithful: between any frame pair both hom-sets are the
    // singleton {hom(a, b)}, and the functor maps one onto the other
    let mut hom_pairs = 0;
    let mut bijective = true;
    for a in &ids {
        for b in &ids {
            let image = functor.on_morphism(&functor.source.hom(a, b)?)?;
            let unique_target = functor.target.hom(a, b)?;
            bijective &= image.as_mat4().max_abs_diff(&unique_target.as_mat4()) == 0.0;
            hom_pairs += 1;
        }
    }

    let tol = functor.source.tolerance();
    let pass = max_id < tol && max_comp < tol && bijective;
    Ok(FunctorLawReport {
        samples,
        max_identity_residual: max_id,
        max_composition_residual: max_comp,
        hom_pairs_checked: hom_pairs,
        full_and_faithful: bijective,
        pass,
    })
}

/// Every frame that is a limit of the diagram in the source space must
/// map to a limit of the image diagram in the target space.
pub fn check_limit_preservation(
    functor: &FunctorMap,
    diagram: &Diagram,
) -> Result<bool, Error> {
    let image_diagram = Diagram::new(
        diagram.index.clone(),
        diagram.object_map.clone(),
        &functor.target,
    )?;
    let all: Vec<String> = functor.source.ids().map(String::from).collect();
    for vertex in &all {
        let cone = cone_from_vertex(&functor.source, diagram, vertex)?;
        let source_report = is_limit(&functor.source, diagram, &cone, &all)?;
        if !source_report.is_limit {
            continue;
        }
        let image_cone = cone_from_vertex(&functor.target, &image_diagram, vertex)?;
        let image_report = is_limit(&functor.target, &image_diagram, &image_cone, &all)?;
        if !image_report.is_limit {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Serialize)]
pub struct AdjunctionReport {
    /// Both hom-sets of each bijection pair are singletons.
    pub bijection_pairs_checked: usize,
    pub max_naturality_residual: f64,
    pub max_triangle_residual: f64,
    /// Worst residual of initiality triangles in sampled comma
    /// categories.
    pub max_comma_residual: f64,
    pub pass: bool,
}

/// Verifies the adjunction between the embedding and the limit functor:
/// the hom bijection between `M(A) -> B` upstairs and `A -> L(B)`
/// downstairs, its naturality, the triangle identities, and initiality
/// in sampled comma categories.
pub fn check_adjunction(
    m: &FunctorMap,
    l: &FunctorMap,
    samples: usize,
    seed: u64,
) -> Result<AdjunctionReport, Error> {
    let gal = &m.source; // = l.target as id sets
    let lor = &l.source;
    let m_lor = &m.target;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ids: Vec<String> = gal.ids().map(String::from).collect();
    let pick = |rng: &mut ChaCha8Rng| ids[rng.gen_range(0..ids.len())].clone();

    // the bijection phi sends f: M(A) -> B to L(f) . eta_A; the unit is
    // the identity because L(M(A)) = A on objects and velocities
    let mut bijections = 0;
    let mut max_naturality = 0.0f64;
    for _ in 0..samples.max(1) {
        let (a, b) = (pick(&mut rng), pick(&mut rng));
        let upstairs = m_lor.hom(&a, &b)?;
        let phi_f = l.target.hom(upstairs.source(), upstairs.target())?;
        bijections += 1;

        // naturality in both arguments: for g: A' -> A and h: B -> B',
        // phi(h . f . M(g)) = L(h) . phi(f) . g
        let (a2, b2) = (pick(&mut rng), pick(&mut rng));
        let g = gal.hom(&a2, &a)?;
        let h = lor.hom(&b, &b2)?;
        let m_g = m_lor.hom(&a2, &a)?;
        let lhs_upstairs = m_lor.compose(&lor_in(m_lor, &h)?, &m_lor.compose(&upstairs, &m_g)?)?;
        let lhs = l.target.hom(lhs_upstairs.source(), lhs_upstairs.target())?;
        let l_h = l.target.hom(h.source(), h.target())?;
        let rhs = gal.compose(&l_h, &gal.compose(&phi_f, &g)?)?;
        max_naturality = max_naturality.max(lhs.as_mat4().max_abs_diff(&rhs.as_mat4()));
    }

    // triangle identities on objects: (eps M)(M eta) = id and
    // (L eps)(eta L) = id; with identity unit both reduce to the
    // counit component being the identity morphism on each id
    let mut max_triangle = 0.0f64;
    for id in &ids {
        let counit = m_lor.identity(id)?;
        max_triangle = max_triangle.max(
            counit
                .as_mat4()
                .max_abs_diff(&m_lor.identity(id)?.as_mat4()),
        );
        let l_counit = l.target.hom(id, id)?;
        max_triangle =
            max_triangle.max(l_counit.as_mat4().max_abs_diff(&gal.identity(id)?.as_mat4()));
    }

    // initiality in the comma category (A => L): sampled objects are
    // (B_i, the unique A -> L(B_i)); from any (B, g) the unique upstairs
    // morphism to each (B', g') must satisfy L(h) . g = g'
    let mut max_comma = 0.0f64;
    for _ in 0..4 {
        let a = pick(&mut rng);
        let objects: Vec<String> = (0..4.min(ids.len())).map(|_| pick(&mut rng)).collect();
        for b in &objects {
            let g = gal.hom(&a, b)?;
            for b2 in &objects {
                let g2 = gal.hom(&a, b2)?;
                let h = lor.hom(b, b2)?;
                let l_h = l.target.hom(h.source(), h.target())?;
                let dev = gal
                    .compose(&l_h, &g)?
                    .as_mat4()
                    .max_abs_diff(&g2.as_mat4());
                max_comma = max_comma.max(dev);
            }
        }
    }

    let tol = gal.tolerance();
    let pass = max_naturality < tol && max_triangle < tol && max_comma < tol;
    Ok(AdjunctionReport {
        bijection_pairs_checked: bijections,
        max_naturality_residual: max_naturality,
        max_triangle_residual: max_triangle,
        max_comma_residual: max_comma,
        pass,
    })
}

// transports a morphism by endpoints into another space over the same ids
fn lor_in(space: &FrameSpace, f: &Morphism) -> Result<Morphism, Error> {
    space.hom(f.source(), f.target())
}

/// Limit-preservation report over all vertices of a space, for the
/// paired classical shadow.
pub fn no_privilege_preserved(
    functor: &FunctorMap,
    diagram: &Diagram,
) -> Result<(NoPrivilegeReport, NoPrivilegeReport), Error> {
    let source = crate::diagrams::no_privileged_frame(&functor.source, diagram)?;
    let image_diagram = Diagram::new(
        diagram.index.clone(),
        diagram.object_map.clone(),
        &functor.target,
    )?;
    let target = crate::diagrams::no_privileged_frame(&functor.target, &image_diagram)?;
    Ok((source, target))
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub c: f64,
    pub morphism_deviation: f64,
    pub addition_deviation: f64,
    pub gyration_deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
    pub morphism_slope: Option<f64>,
    pub addition_slope: Option<f64>,
    pub gyration_slope: Option<f64>,
}

/// Floor below which deviations are floating-point noise and excluded
/// from slope fits.
const SLOPE_NOISE_FLOOR: f64 = 100.0 * f64::EPSILON;

fn fit_slope(points: &[(f64, f64)]) -> Option<f64> {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|(_, d)| *d > SLOPE_NOISE_FLOOR)
        .map(|&(c, d)| (c.ln(), d.ln()))
        .collect();
    if usable.len() < 2 {
        return None;
    }
    let n = usable.len() as f64;
    let sx: f64 = usable.iter().map(|p| p.0).sum();
    let sy: f64 = usable.iter().map(|p| p.1).sum();
    let sxx: f64 = usable.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = usable.iter().map(|p| p.0 * p.1).sum();
    Some((n * sxy - sx * sy) / (n * sxx - sx * sx))
}

/// Measures how fast the relativistic formulas converge to the
/// classical ones as `c` grows: boost vs Galilean action on `e`,
/// relativistic vs classical velocity addition for a perpendicular
/// companion pair, and the Thomas rotation's distance from the
/// identity. All three decay as 1/c^2.
pub fn limit_scan(v: &Vec3, e: &Event, c_values: &[f64]) -> Result<ConvergenceTable, Error> {
    let speed = v.norm();
    for &c in c_values {
        if speed >= c {
            return Err(Error::Superluminal { speed, c });
        }
    }
    // companion velocity of equal magnitude, perpendicular to v, so the
    // addition and gyration columns exercise the non-collinear case
    let companion = v
        .any_orthogonal_unit()
        .map(|u| u * speed)
        .unwrap_or(Vec3::ZERO);

    let mut rows = Vec::with_capacity(c_values.len());
    for &c_val in c_values {
        let c = LightSpeed::new(c_val)?;
        let vel = Velocity::relativistic(*v, c)?;
        let cls = Velocity::classical(*v)?;
        let morphism_deviation = boost_apply(&vel, c, e)?.max_abs_diff(&galilean_apply(&cls, e));

        let comp = Velocity::relativistic(companion, c)?;
        let relativistic_sum = einstein_add(&vel, &comp, c)?;
        let classical_sum = *v + companion;
        let addition_deviation = (relativistic_sum.vector() - classical_sum).max_abs();

        let gyration_deviation = gyration(&vel, &comp, c)?.max_abs_diff(&Mat3::IDENTITY);

        rows.push(ConvergenceRow {
            c: c_val,
            morphism_deviation,
            addition_deviation,
            gyration_deviation,
        });
    }

    let morphism_slope = fit_slope(
        &rows
            .iter()
            .map(|r| (r.c, r.morphism_deviation))
            .collect::<Vec<_>>(),
    );
    let addition_slope = fit_slope(
        &rows
            .iter()
            .map(|r| (r.c, r.addition_deviation))
            .collect::<Vec<_>>(),
    );
    let gyration_slope = fit_slope(
        &rows
            .iter()
            .map(|r| (r.c, r.gyration_deviation))
            .collect::<Vec<_>>(),
    );
    Ok(ConvergenceTable { rows, morphism_slope, addition_slope, gyration_slope })
}
