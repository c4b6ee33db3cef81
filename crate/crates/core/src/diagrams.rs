//! Finite index categories, diagrams into the frame categories, cones
//! and the limit checker.
//!
//! An index category is given by a finite presentation: objects,
//! generating arrows and path relations, with all morphisms enumerated
//! as path-equivalence classes up to a length bound. Because hom-sets
//! in the frame categories are singletons, a diagram is determined by
//! its object map alone; the checks verify numerically that the forced
//! morphisms make every required triangle commute.

use crate::error::Error;
use crate::frames::{FrameSpace, Morphism};
use crate::vecmat::Mat4;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};

/// Hard cap on enumerated raw paths, before quotienting.
const RAW_PATH_CAP: usize = 8192;
/// Default cap on morphism classes after quotienting.
pub const DEFAULT_CLASS_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub id: String,
    pub source: String,
    pub target: String,
}

/// One path-equivalence class of the presented category. The empty
/// path at an object is its identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismClass {
    pub source: String,
    pub target: String,
    /// Shortest representative, as a composable list of arrow ids in
    /// application order (first arrow acts first).
    pub representative: Vec<String>,
}

impl MorphismClass {
    pub fn is_identity(&self) -> bool {
        self.representative.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct IndexCategory {
    objects: Vec<String>,
    arrows: Vec<Arrow>,
    relations: Vec<(Vec<usize>, Vec<usize>, String, String)>,
    classes: Vec<MorphismClass>,
    path_bound: usize,
}

impl IndexCategory {
    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    /// All derived morphisms, identities included.
    pub fn morphisms(&self) -> &[MorphismClass] {
        &self.classes
    }

    pub fn morphism_count(&self) -> usize {
        self.classes.len()
    }

    pub fn path_bound(&self) -> usize {
        self.path_bound
    }

    fn arrow_index(&self, id: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.id == id)
    }

    fn path_endpoints(&self, path: &[usize]) -> Option<(String, String)> {
        let first = &self.arrows[*path.first()?];
        let mut cursor = first.target.clone();
        for &i in &path[1..] {
            if self.arrows[i].source != cursor {
                return None;
            }
            cursor = self.arrows[i].target.clone();
        }
        Some((first.source.clone(), cursor))
    }
}

/// Builds an index category from a finite presentation.
///
/// Relations are pairs of arrow-id paths declared equal; an empty path
/// stands for the identity of the other path's (necessarily shared)
/// endpoint. Presentations whose derived class count exceeds
/// `class_cap` are rejected.
pub fn build_index(
    objects: &[String],
    arrows: &[Arrow],
    relations: &[(Vec<String>, Vec<String>)],
    path_bound: usize,
    class_cap: usize,
) -> Result<IndexCategory, Error> {
    if path_bound == 0 {
        return Err(Error::InvalidIndex { reason: "path_bound must be at least 1".into() });
    }
    if objects.is_empty() {
        return Err(Error::InvalidIndex { reason: "no objects declared".into() });
    }
    for arrow in arrows {
        for endpoint in [&arrow.source, &arrow.target] {
            if !objects.contains(endpoint) {
                return Err(Error::DanglingEndpoint {
                    arrow: arrow.id.clone(),
                    object: endpoint.clone(),
                });
            }
        }
    }

    let mut index = IndexCategory {
        objects: objects.to_vec(),
        arrows: arrows.to_vec(),
        relations: Vec::new(),
        classes: Vec::new(),
        path_bound,
    };

    // resolve relation paths to arrow indices and common endpoints
    for (lhs, rhs) in relations {
        let resolve = |ids: &[String]| -> Result<Vec<usize>, Error> {
            ids.iter()
                .map(|id| {
                    index.arrow_index(id).ok_or_else(|| Error::InvalidIndex {
                        reason: format!("relation references unknown arrow `{id}`"),
                    })
                })
                .collect()
        };
        let l = resolve(lhs)?;
        let r = resolve(rhs)?;
        let le = index.path_endpoints(&l);
        let re = index.path_endpoints(&r);
        let (src, tgt) = match (le, re) {
            (Some(a), Some(b)) => {
                if a != b {
                    return Err(Error::RelationEndpointMismatch);
                }
                a
            }
            (Some((s, t)), None) if r.is_empty() && s == t => (s, t),
            (None, Some((s, t))) if l.is_empty() && s == t => (s, t),
            _ => return Err(Error::RelationEndpointMismatch),
        };
        index.relations.push((l, r, src, tgt));
    }

    // enumerate composable paths up to the length bound
    let mut paths: Vec<(Vec<usize>, String, String)> = Vec::new();
    let mut key_of: HashMap<Vec<usize>, usize> = HashMap::new();
    for (i, obj) in objects.iter().enumerate() {
        // identity paths are disambiguated by a sentinel never used by
        // real arrows: index usize::MAX - object position
        let key = vec![usize::MAX - i];
        key_of.insert(key.clone(), paths.len());
        paths.push((key, obj.clone(), obj.clone()));
    }
    let id_count = objects.len();
    let mut frontier: Vec<usize> = (0..id_count).collect();
    for _len in 1..=path_bound {
        let mut next = Vec::new();
        for &pi in &frontier {
            let (key, src, tgt) = paths[pi].clone();
            for (ai, arrow) in arrows.iter().enumerate() {
                if arrow.source != tgt {
                    continue;
                }
                let mut new_key = if pi < id_count { Vec::new() } else { key.clone() };
                new_key.push(ai);
                if key_of.contains_key(&new_key) {
                    continue;
                }
                if paths.len() >= RAW_PATH_CAP {
                    return Err(Error::IndexExplosion { cap: class_cap });
                }
                key_of.insert(new_key.clone(), paths.len());
                next.push(paths.len());
                paths.push((new_key, src.clone(), arrow.target.clone()));
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }

    // union-find quotient by the declared relations, closed under
    // composition with arrows on both sides
    let mut parent: Vec<usize> = (0..paths.len()).collect();
    fn find(parent: &mut Vec<usize>, mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let lookup = |key_of: &HashMap<Vec<usize>, usize>, path: &[usize], obj_pos: Option<usize>| {
        if path.is_empty() {
            obj_pos.map(|i| key_of[&vec![usize::MAX - i]])
        } else {
            key_of.get(path).copied()
        }
    };
    let mut pending: Vec<(usize, usize)> = Vec::new();
    for (l, r, src, _tgt) in &index.relations {
        let obj_pos = objects.iter().position(|o| o == src);
        let li = lookup(&key_of, l, obj_pos);
        let ri = lookup(&key_of, r, obj_pos);
        if let (Some(a), Some(b)) = (li, ri) {
            pending.push((a, b));
        }
    }
    let real_key = |pi: usize| -> Vec<usize> {
        if pi < id_count {
            Vec::new()
        } else {
            paths[pi].0.clone()
        }
    };
    while let Some((a, b)) = pending.pop() {
        let ra = find(&mut parent, a);
        let rb = find(&mut parent, b);
        if ra == rb {
            continue;
        }
        parent[ra] = rb;
        // congruence: extend both sides by every arrow, front and back
        let ka = real_key(a);
        let kb = real_key(b);
        for ai in 0..arrows.len() {
            let mut post_a = ka.clone();
            post_a.push(ai);
            let mut post_b = kb.clone();
            post_b.push(ai);
            if let (Some(x), Some(y)) = (key_of.get(&post_a), key_of.get(&post_b)) {
                pending.push((*x, *y));
            }
            let mut pre_a = vec![ai];
            pre_a.extend_from_slice(&ka);
            let mut pre_b = vec![ai];
            pre_b.extend_from_slice(&kb);
            if let (Some(x), Some(y)) = (key_of.get(&pre_a), key_of.get(&pre_b)) {
                pending.push((*x, *y));
            }
        }
    }

    // collect classes, shortest representative first
    let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..paths.len() {
        let r = find(&mut parent, i);
        by_root.entry(r).or_default().push(i);
    }
    if by_root.len() > class_cap {
        return Err(Error::IndexExplosion { cap: class_cap });
    }
    let mut classes: Vec<MorphismClass> = Vec::new();
    for members in by_root.values() {
        let best = members
            .iter()
            .min_by_key(|&&i| (real_key(i).len(), real_key(i)))
            .unwrap();
        let (_, src, tgt) = &paths[*best];
        classes.push(MorphismClass {
            source: src.clone(),
            target: tgt.clone(),
            representative: real_key(*best)
                .iter()
                .map(|&ai| arrows[ai].id.clone())
                .collect(),
        });
    }
    classes.sort_by(|a, b| {
        (a.representative.len(), &a.source, &a.representative)
            .cmp(&(b.representative.len(), &b.source, &b.representative))
    });
    index.classes = classes;
    Ok(index)
}

/// A diagram: an index category together with a map from its objects
/// to frame ids. Singleton homs force the action on morphisms.
#[derive(Debug, Clone)]
pub struct Diagram {
    pub index: IndexCategory,
    pub object_map: BTreeMap<String, String>,
}

impl Diagram {
    pub fn new(
        index: IndexCategory,
        object_map: BTreeMap<String, String>,
        space: &FrameSpace,
    ) -> Result<Diagram, Error> {
        for obj in index.objects() {
            let frame = object_map.get(obj).ok_or_else(|| Error::UnmappedObject {
                object: obj.clone(),
                frame: "<missing>".into(),
            })?;
            space.frame(frame)?;
        }
        Ok(Diagram { index, object_map })
    }

    pub fn frame_of(&self, index_object: &str) -> Result<&str, Error> {
        self.object_map
            .get(index_object)
            .map(|s| s.as_str())
            .ok_or_else(|| Error::UnmappedObject {
                object: index_object.into(),
                frame: "<missing>".into(),
            })
    }

    /// Image of an index morphism: the unique hom between the mapped
    /// endpoints.
    pub fn image(&self, space: &FrameSpace, class: &MorphismClass) -> Result<Morphism, Error> {
        space.hom(self.frame_of(&class.source)?, self.frame_of(&class.target)?)
    }

    /// Matrix of a path's image, composed arrow by arrow.
    fn path_matrix(&self, space: &FrameSpace, path: &[usize]) -> Result<Mat4, Error> {
        let mut out = Mat4::IDENTITY;
        for &ai in path {
            let arrow = &self.index.arrows[ai];
            let hom = space.hom(self.frame_of(&arrow.source)?, self.frame_of(&arrow.target)?)?;
            out = hom.as_mat4() * out;
        }
        Ok(out)
    }

    /// Worst deviation between the two sides of each declared relation,
    /// mapped into the frame category. Singleton homs make this zero up
    /// to roundoff on well-formed spaces; it is exercised end to end
    /// because composite paths pick up Thomas rotations.
    pub fn relation_deviation(&self, space: &FrameSpace) -> Result<f64, Error> {
        let mut worst = 0.0f64;
        for (l, r, src, tgt) in &self.index.relations {
            let ml = if l.is_empty() {
                debug_assert_eq!(src, tgt);
                Mat4::IDENTITY
            } else {
                self.path_matrix(space, l)?
            };
            let mr = if r.is_empty() {
                Mat4::IDENTITY
            } else {
                self.path_matrix(space, r)?
            };
            worst = worst.max(ml.max_abs_diff(&mr));
        }
        Ok(worst)
    }
}

/// A cone over a diagram: a vertex frame with one leg to the image of
/// every index object.
#[derive(Debug, Clone)]
pub struct Cone {
    pub vertex: String,
    pub legs: BTreeMap<String, Morphism>,
}

/// The canonical cone at `vertex`: every leg is the unique hom from the
/// vertex to the image frame.
pub fn cone_from_vertex(
    space: &FrameSpace,
    diagram: &Diagram,
    vertex: &str,
) -> Result<Cone, Error> {
    space.frame(vertex)?;
    let mut legs = BTreeMap::new();
    for obj in diagram.index.objects() {
        let leg = space.hom(vertex, diagram.frame_of(obj)?)?;
        legs.insert(obj.clone(), leg);
    }
    Ok(Cone { vertex: vertex.into(), legs })
}

/// Checks that every triangle `D(f) . leg_I = leg_J` commutes. The
/// deviation also folds in the structural validity of each morphism, so
/// corrupted anchors surface here.
pub fn is_cone(space: &FrameSpace, diagram: &Diagram, cone: &Cone) -> Result<(bool, f64), Error> {
    let tol = space.tolerance();
    let mut worst = 0.0f64;
    for obj in diagram.index.objects() {
        let leg = cone.legs.get(obj).ok_or_else(|| Error::UnmappedObject {
            object: obj.clone(),
            frame: "<missing cone leg>".into(),
        })?;
        worst = worst.max(space.morphism_validity(leg));
    }
    for class in diagram.index.morphisms() {
        let leg_src = &cone.legs[&class.source];
        let leg_tgt = &cone.legs[&class.target];
        let image = diagram.image(space, class)?;
        let dev = (image.as_mat4() * leg_src.as_mat4()).max_abs_diff(&leg_tgt.as_mat4());
        worst = worst.max(dev).max(space.morphism_validity(&image));
    }
    Ok((worst < tol, worst))
}

#[derive(Debug, Clone, Serialize)]
pub struct LimitReport {
    pub vertex: String,
    pub is_cone: bool,
    pub is_limit: bool,
    pub worst_deviation: f64,
    /// Residual of the mediating-morphism factorization per competitor.
    pub competitor_residuals: Vec<(String, f64)>,
    pub tol: f64,
}

/// Checks that the cone is a limit against the given competitor
/// vertices: for each competitor the unique mediating morphism must
/// make every factorization triangle commute.
pub fn is_limit(
    space: &FrameSpace,
    diagram: &Diagram,
    cone: &Cone,
    competitors: &[String],
) -> Result<LimitReport, Error> {
    let tol = space.tolerance();
    let (cone_ok, mut worst) = is_cone(space, diagram, cone)?;
    let mut residuals = Vec::new();
    for competitor in competitors {
        let mediating = space.hom(competitor, &cone.vertex)?;
        let mut res = space.morphism_validity(&mediating);
        for obj in diagram.index.objects() {
            let leg = &cone.legs[obj];
            let direct = space.hom(competitor, diagram.frame_of(obj)?)?;
            let dev = (leg.as_mat4() * mediating.as_mat4()).max_abs_diff(&direct.as_mat4());
            res = res.max(dev).max(space.morphism_validity(&direct));
        }
        worst = worst.max(res);
        residuals.push((competitor.clone(), res));
    }
    Ok(LimitReport {
        vertex: cone.vertex.clone(),
        is_cone: cone_ok,
        is_limit: cone_ok && worst < tol,
        worst_deviation: worst,
        competitor_residuals: residuals,
        tol,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct NoPrivilegeReport {
    pub pass: bool,
    pub worst_residual: f64,
    pub failing_vertices: Vec<String>,
}

/// Every frame of the space, taken as a cone vertex with all other
/// frames as competitors, must be a limit of the diagram. True on any
/// well-formed space: no frame is privileged.
pub fn no_privileged_frame(
    space: &FrameSpace,
    diagram: &Diagram,
) -> Result<NoPrivilegeReport, Error> {
    let all: Vec<String> = space.ids().map(String::from).collect();
    let mut worst = 0.0f64;
    let mut failing = Vec::new();
    for vertex in &all {
        let cone = cone_from_vertex(space, diagram, vertex)?;
        let report = is_limit(space, diagram, &cone, &all)?;
        worst = worst.max(report.worst_deviation);
        if !report.is_limit {
            failing.push(vertex.clone());
        }
    }
    Ok(NoPrivilegeReport { pass: failing.is_empty(), worst_residual: worst, failing_vertices: failing })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::LightSpeed;
    use crate::vecmat::Vec3;

    fn arrow(id: &str, s: &str, t: &str) -> Arrow {
        Arrow { id: id.into(), source: s.into(), target: t.into() }
    }

    fn strs(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn terminal_index_has_identity_only() {
        let idx = build_index(&strs(&["I"]), &[], &[], 3, DEFAULT_CLASS_CAP).unwrap();
        assert_eq!(idx.morphism_count(), 1);
        assert!(idx.morphisms()[0].is_identity());
    }

    #[test]
    fn arrow_category_has_three_morphisms() {
        let idx = build_index(
            &strs(&["I", "J"]),
            &[arrow("f", "I", "J")],
            &[],
            3,
            DEFAULT_CLASS_CAP,
        )
        .unwrap();
        assert_eq!(idx.morphism_count(), 3);
    }

    #[test]
    fn parallel_pair_has_four_morphisms() {
        let idx = build_index(
            &strs(&["I", "J"]),
            &[arrow("f", "I", "J"), arrow("g", "I", "J")],
            &[],
            3,
            DEFAULT_CLASS_CAP,
        )
        .unwrap();
        assert_eq!(idx.morphism_count(), 4);
    }

    #[test]
    fn relations_collapse_classes() {
        // an idempotent e: I -> I with e.e = e gives id and e only
        let idx = build_index(
            &strs(&["I"]),
            &[arrow("e", "I", "I")],
            &[(strs(&["e", "e"]), strs(&["e"]))],
            4,
            DEFAULT_CLASS_CAP,
        )
        .unwrap();
        assert_eq!(idx.morphism_count(), 2);
    }

    #[test]
    fn isomorphism_relation_uses_empty_paths() {
        let idx = build_index(
            &strs(&["I", "J"]),
            &[arrow("f", "I", "J"), arrow("g", "J", "I")],
            &[
                (strs(&["f", "g"]), strs(&[])),
                (strs(&["g", "f"]), strs(&[])),
            ],
            4,
            DEFAULT_CLASS_CAP,
        )
        .unwrap();
        // id_I, id_J, f, g
        assert_eq!(idx.morphism_count(), 4);
    }

    #[test]
    fn dangling_endpoint_rejected() {
        let err = build_index(
            &strs(&["I"]),
            &[arrow("f", "I", "K")],
            &[],
            2,
            DEFAULT_CLASS_CAP,
        )
        .unwrap_err();
        assert!(matches!(err, Error::DanglingEndpoint { .. }));
    }

    #[test]
    fn explosion_cap_enforced() {
        // free category on a two-arrow loop grows without bound
        let err = build_index(
            &strs(&["I"]),
            &[arrow("a", "I", "I"), arrow("b", "I", "I")],
            &[],
            8,
            8,
        )
        .unwrap_err();
        assert!(matches!(err, Error::IndexExplosion { .. }));
    }

    #[test]
    fn relation_endpoint_mismatch_rejected() {
        let err = build_index(
            &strs(&["I", "J"]),
            &[arrow("f", "I", "J")],
            &[(strs(&["f"]), strs(&[]))],
            2,
            DEFAULT_CLASS_CAP,
        )
        .unwrap_err();
        assert!(matches!(err, Error::RelationEndpointMismatch));
    }

    fn space() -> FrameSpace {
        FrameSpace::relativistic(LightSpeed::NATURAL)
            .frame("lab", Vec3::ZERO)
            .frame("a", Vec3::new(0.5, 0.0, 0.0))
            .frame("b", Vec3::new(0.0, 0.5, 0.0))
            .frame("c", Vec3::new(0.2, -0.3, 0.4))
            .build()
            .unwrap()
    }

    fn triangle_diagram(space: &FrameSpace) -> Diagram {
        let idx = build_index(
            &strs(&["I", "J", "K"]),
            &[
                arrow("f", "I", "J"),
                arrow("g", "J", "K"),
                arrow("h", "I", "K"),
            ],
            &[(strs(&["f", "g"]), strs(&["h"]))],
            3,
            DEFAULT_CLASS_CAP,
        )
        .unwrap();
        let map: BTreeMap<String, String> = [("I", "a"), ("J", "b"), ("K", "c")]
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        Diagram::new(idx, map, space).unwrap()
    }

    #[test]
    fn canonical_cone_commutes() {
        let space = space();
        let d = triangle_diagram(&space);
        for vertex in ["lab", "a", "b", "c"] {
            let cone = cone_from_vertex(&space, &d, vertex).unwrap();
            let (ok, dev) = is_cone(&space, &d, &cone).unwrap();
            assert!(ok, "vertex {vertex} deviation {dev:e}");
        }
    }

    #[test]
    fn relations_hold_through_thomas_rotation() {
        let space = space();
        let d = triangle_diagram(&space);
        assert!(d.relation_deviation(&space).unwrap() < 1e-12);
    }

    #[test]
    fn perturbed_leg_breaks_cone() {
        let space = space();
        let d = triangle_diagram(&space);
        let mut cone = cone_from_vertex(&space, &d, "lab").unwrap();
        // replace one leg with a hom to the wrong frame
        let bad = space.hom("lab", "c").unwrap();
        let bad = match bad {
            Morphism::Lor(mut m) => {
                m.target = "b".into();
                Morphism::Lor(m)
            }
            m => m,
        };
        cone.legs.insert("J".into(), bad);
        let (ok, dev) = is_cone(&space, &d, &cone).unwrap();
        assert!(!ok);
        assert!(dev > 1e-3);
    }

    #[test]
    fn every_frame_is_a_limit() {
        let space = space();
        let d = triangle_diagram(&space);
        let report = no_privileged_frame(&space, &d).unwrap();
        assert!(report.pass, "{report:?}");
        assert!(report.worst_residual < 1e-9);
    }

    #[test]
    fn corrupted_space_fails_limit_check() {
        let mut space = space();
        space.perturb_anchor("b", 2, 2, 1e-3).unwrap();
        let d = triangle_diagram(&space);
        let report = no_privileged_frame(&space, &d).unwrap();
        assert!(!report.pass);
        assert!(report.worst_residual > 1e-4);
    }

    #[test]
    fn residual_scales_linearly_with_perturbation() {
        let mut prev_ratio = None;
        for eps in [1e-3, 1e-4, 1e-5] {
            let mut space = space();
            space.perturb_anchor("a", 1, 2, eps).unwrap();
            let d = triangle_diagram(&space);
            let report = no_privileged_frame(&space, &d).unwrap();
            let ratio = report.worst_residual / eps;
            if let Some(p) = prev_ratio {
                let rel: f64 = ratio / p;
                assert!(rel > 0.5 && rel < 2.0, "ratio drift: {p} -> {ratio}");
            }
            prev_ratio = Some(ratio);
        }
    }
}
