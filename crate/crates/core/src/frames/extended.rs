//! Extended category: objects are ordered pairs (frame, origin point),
//! with rotations as automorphisms and translations acting on the
//! origin. Admitting rotations destroys hom-set uniqueness, which this
//! module witnesses constructively; the rotation- and translation-free
//! sub-category recovers the singleton homs of the plain category.

use crate::error::Error;
use crate::frames::FrameSpace;
use crate::vecmat::{Mat3, Mat4, Vec3};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedObject {
    pub id: String,
    pub frame: String,
    pub origin: Vec3,
}

impl ExtendedObject {
    pub fn new(id: &str, frame: &str, origin: Vec3) -> ExtendedObject {
        ExtendedObject { id: id.into(), frame: frame.into(), origin }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtendedKind {
    Boost,
    Rotation,
    Translation,
    Composite,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedMorphism {
    pub source: String,
    pub target: String,
    pub kind: ExtendedKind,
    pub matrix: Mat4,
    pub translation: Vec3,
}

impl ExtendedMorphism {
    /// Rotation automorphism of a single extended object.
    pub fn rotation(object: &ExtendedObject, r: Mat3) -> ExtendedMorphism {
        ExtendedMorphism {
            source: object.id.clone(),
            target: object.id.clone(),
            kind: ExtendedKind::Rotation,
            matrix: Mat4::from_rotation(&r),
            translation: Vec3::ZERO,
        }
    }

    /// Translation between two objects over the same frame; the shift
    /// is forced by the origins.
    pub fn translation(source: &ExtendedObject, target: &ExtendedObject) -> ExtendedMorphism {
        ExtendedMorphism {
            source: source.id.clone(),
            target: target.id.clone(),
            kind: ExtendedKind::Translation,
            matrix: Mat4::IDENTITY,
            translation: target.origin - source.origin,
        }
    }

    /// The frame-changing morphism between two objects, using the
    /// unique boost of the underlying frame space.
    pub fn boost(
        space: &FrameSpace,
        source: &ExtendedObject,
        target: &ExtendedObject,
    ) -> Result<ExtendedMorphism, Error> {
        let hom = space.hom(&source.frame, &target.frame)?;
        Ok(ExtendedMorphism {
            source: source.id.clone(),
            target: target.id.clone(),
            kind: ExtendedKind::Boost,
            matrix: hom.as_mat4(),
            translation: target.origin - source.origin,
        })
    }
}

/// `g after f`: matrix product with accumulated origin shift.
pub fn extended_compose(
    g: &ExtendedMorphism,
    f: &ExtendedMorphism,
) -> Result<ExtendedMorphism, Error> {
    if g.source != f.target {
        return Err(Error::NonComposable {
            f_target: f.target.clone(),
            g_source: g.source.clone(),
        });
    }
    let kind = match (g.kind, f.kind) {
        (ExtendedKind::Rotation, ExtendedKind::Rotation) => ExtendedKind::Rotation,
        (ExtendedKind::Translation, ExtendedKind::Translation) => ExtendedKind::Translation,
        _ => ExtendedKind::Composite,
    };
    Ok(ExtendedMorphism {
        source: f.source.clone(),
        target: g.target.clone(),
        kind,
        matrix: g.matrix * f.matrix,
        translation: g.translation + f.translation,
    })
}

/// Two distinct morphisms between the same pair of extended objects:
/// the bare boost and the boost precomposed with a nontrivial rotation
/// automorphism of the source. Constructive evidence that admitting
/// rotations makes hom-sets larger than singletons.
pub fn extended_hom_count_witness(
    space: &FrameSpace,
    a: &ExtendedObject,
    b: &ExtendedObject,
    rotation: Mat3,
) -> Result<(ExtendedMorphism, ExtendedMorphism), Error> {
    let lambda = ExtendedMorphism::boost(space, a, b)?;
    let auto = ExtendedMorphism::rotation(a, rotation);
    let twisted = extended_compose(&lambda, &auto)?;
    Ok((lambda, twisted))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::LightSpeed;
    use crate::vecmat::rotation_from_axis_angle;

    fn space() -> FrameSpace {
        FrameSpace::relativistic(LightSpeed::NATURAL)
            .frame("lab", Vec3::ZERO)
            .frame("ship", Vec3::new(0.5, 0.0, 0.0))
            .build()
            .unwrap()
    }

    fn quarter_turn() -> Mat3 {
        rotation_from_axis_angle(&Vec3::new(0.0, 0.0, 1.0), std::f64::consts::FRAC_PI_2).unwrap()
    }

    #[test]
    fn rotations_compose_to_rotations() {
        let obj = ExtendedObject::new("o", "lab", Vec3::ZERO);
        let r = ExtendedMorphism::rotation(&obj, quarter_turn());
        let rr = extended_compose(&r, &r).unwrap();
        assert_eq!(rr.kind, ExtendedKind::Rotation);
        let expected = Mat4::from_rotation(&(quarter_turn() * quarter_turn()));
        assert!(rr.matrix.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn translations_compose_by_vector_sum() {
        let a = ExtendedObject::new("a", "lab", Vec3::ZERO);
        let b = ExtendedObject::new("b", "lab", Vec3::new(1.0, 0.0, 0.0));
        let c = ExtendedObject::new("c", "lab", Vec3::new(1.0, 2.0, 0.0));
        let t1 = ExtendedMorphism::translation(&a, &b);
        let t2 = ExtendedMorphism::translation(&b, &c);
        let t = extended_compose(&t2, &t1).unwrap();
        assert_eq!(t.kind, ExtendedKind::Translation);
        assert!((t.translation - Vec3::new(1.0, 2.0, 0.0)).max_abs() < 1e-15);
        assert!(t.matrix.max_abs_diff(&Mat4::IDENTITY) < 1e-15);
    }

    #[test]
    fn boost_and_rotation_do_not_commute() {
        let s = space();
        let a = ExtendedObject::new("a", "lab", Vec3::ZERO);
        let b = ExtendedObject::new("b", "ship", Vec3::ZERO);
        let boost = ExtendedMorphism::boost(&s, &a, &b).unwrap();
        let rot_a = ExtendedMorphism::rotation(&a, quarter_turn());
        let rot_b = ExtendedMorphism::rotation(&b, quarter_turn());
        let br = extended_compose(&boost, &rot_a).unwrap();
        let rb = extended_compose(&rot_b, &boost).unwrap();
        assert!(br.matrix.max_abs_diff(&rb.matrix) > 1e-3);
    }

    #[test]
    fn witness_produces_two_distinct_morphisms() {
        let s = space();
        let a = ExtendedObject::new("a", "lab", Vec3::ZERO);
        let b = ExtendedObject::new("b", "ship", Vec3::new(0.0, 1.0, 0.0));
        let (m1, m2) = extended_hom_count_witness(&s, &a, &b, quarter_turn()).unwrap();
        assert_eq!(m1.source, m2.source);
        assert_eq!(m1.target, m2.target);
        assert!(m1.matrix.max_abs_diff(&m2.matrix) > 0.1);
    }

    #[test]
    fn identity_rotation_recovers_uniqueness() {
        let s = space();
        let a = ExtendedObject::new("a", "lab", Vec3::ZERO);
        let b = ExtendedObject::new("b", "ship", Vec3::ZERO);
        let (m1, m2) = extended_hom_count_witness(&s, &a, &b, Mat3::IDENTITY).unwrap();
        assert!(m1.matrix.max_abs_diff(&m2.matrix) < 1e-15);
    }

    #[test]
    fn rotation_automorphism_is_not_the_identity() {
        let a = ExtendedObject::new("a", "lab", Vec3::ZERO);
        let r = ExtendedMorphism::rotation(&a, quarter_turn());
        assert_eq!(r.source, r.target);
        assert!(r.matrix.max_abs_diff(&Mat4::IDENTITY) > 0.9);
    }
}
