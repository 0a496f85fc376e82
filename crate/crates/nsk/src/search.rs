//! Sweeps over the admissible cones of the matching equations: finding a
//! nontrivial normal sphere, and recognizing the 3-sphere by octagonal
//! almost normal surfaces once no such sphere exists.
//!
//! A cone fixes one allowed quad type per tetrahedron (the rest are pinned
//! to zero) together with one triangle coordinate pinned to zero. Pinning a
//! triangle loses nothing: in a one-vertex triangulation an extreme
//! admissible vector with every triangle coordinate positive could absorb
//! +-epsilon times the vertex link and stay admissible, so it is a multiple
//! of the link itself; every other extreme ray misses some triangle.

use crate::error::SearchError;
use crate::lp::{maximize, on_extreme_ray, primitive_integer, ConeSystem, LpOutcome};
use crate::normal::{
    chi_coefficients, chi_linear, quad_col, tri_col, MatchingSystem, NormalVector, OctSlot,
};
use crate::surface::reconstruct;
use crate::tri::{Skeleton, Triangulation};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    /// Every quad-type assignment: 4t * 3^t cones.
    Full,
    /// Quads confined to two tetrahedra (one at t = 1): cones number
    /// 36 t C(t,2), or 12 t^2 when t = 1.
    Restricted,
}

/// One cone of the sweep: `quad_types[i]` in 1..=3 allows that quad type in
/// tetrahedron i, 0 pins all its quads to zero; one triangle coordinate is
/// pinned to zero; octagon cones name their (tetrahedron, type) slot and pin
/// every quad of that tetrahedron.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeSpec {
    pub quad_types: Vec<u8>,
    pub zero_tri: (usize, usize),
    pub oct: Option<(usize, usize)>,
}

fn base3(mut w: usize, t: usize) -> Vec<u8> {
    let mut types = vec![1u8; t];
    for slot in types.iter_mut().rev() {
        *slot = 1 + (w % 3) as u8;
        w /= 3;
    }
    types
}

pub fn enumerate_cones_full(t: usize) -> Vec<ConeSpec> {
    let mut out = Vec::with_capacity(4 * t * 3usize.pow(t as u32));
    for w in 0..3usize.pow(t as u32) {
        let types = base3(w, t);
        for i in 0..t {
            for v in 0..4 {
                out.push(ConeSpec { quad_types: types.clone(), zero_tri: (i, v), oct: None });
            }
        }
    }
    out
}

pub fn enumerate_cones_restricted(t: usize) -> Vec<ConeSpec> {
    let mut out = Vec::new();
    if t == 1 {
        for k in 1..=3u8 {
            for v in 0..4 {
                out.push(ConeSpec { quad_types: vec![k], zero_tri: (0, v), oct: None });
            }
        }
        return out;
    }
    for j in 0..t {
        for k in (j + 1)..t {
            for tj in 1..=3u8 {
                for tk in 1..=3u8 {
                    let mut types = vec![0u8; t];
                    types[j] = tj;
                    types[k] = tk;
                    for i in 0..t {
                        for v in 0..4 {
                            out.push(ConeSpec {
                                quad_types: types.clone(),
                                zero_tri: (i, v),
                                oct: None,
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

/// Octagon cones for sphere recognition, ordered lexicographically in
/// (assignment, zeroed triangle, octagon tetrahedron, octagon type). The
/// assignment ranges over all 3^t vectors; the entry of the octagon
/// tetrahedron is overridden to "no quads", so each effective cone shows up
/// three times. Redundant but cheap at the sizes recognition runs on, and it
/// keeps the sweep order aligned with the cone indexing used elsewhere.
pub fn enumerate_cones_octagon(t: usize) -> Vec<ConeSpec> {
    let mut out = Vec::new();
    for w in 0..3usize.pow(t as u32) {
        let types = base3(w, t);
        for i in 0..t {
            for v in 0..4 {
                for l in 0..t {
                    for k in 1..=3usize {
                        let mut quad_types = types.clone();
                        quad_types[l] = 0;
                        out.push(ConeSpec {
                            quad_types,
                            zero_tri: (i, v),
                            oct: Some((l, k)),
                        });
                    }
                }
            }
        }
    }
    out
}

/// The equality system of a cone: matching rows (with the octagon column
/// when the cone carries one) plus the pinned columns.
pub fn cone_system(system: &MatchingSystem, spec: &ConeSpec) -> ConeSystem {
    let t = system.tets;
    debug_assert_eq!(system.oct_slot, spec.oct);
    let n = system.cols();
    let mut forced_zero = vec![false; n];
    for i in 0..t {
        for k in 1..=3u8 {
            if spec.quad_types[i] != k {
                forced_zero[quad_col(i, k as usize)] = true;
            }
        }
    }
    forced_zero[tri_col(spec.zero_tri.0, spec.zero_tri.1)] = true;
    ConeSystem { n, rows: system.sparse_rows(), forced_zero }
}

#[derive(Clone, Debug)]
pub struct SphereFinding {
    /// Admissible vector of a connected nontrivial normal sphere.
    pub vector: NormalVector,
    /// The cone that produced it.
    pub cone: ConeSpec,
    /// Index of that cone in sweep order.
    pub cone_index: usize,
    /// Euler characteristic of the primitive extreme vector before any
    /// doubling (1 for a projective plane, else 2).
    pub chi_found: i64,
    /// True when the extreme vector was a one-sided projective plane and the
    /// sphere is its double.
    pub doubled_from_rp2: bool,
}

fn require_one_vertex(tri: &Triangulation, skel: &Skeleton) -> Result<(), SearchError> {
    if tri.tet_count() == 0 || tri.component_count() != 1 {
        return Err(SearchError::BadInput(
            "input must be connected and nonempty".into(),
        ));
    }
    if skel.vertex_count != 1 {
        return Err(SearchError::NotOneVertex { vertices: skel.vertex_count });
    }
    Ok(())
}

fn vector_from(coords: &[BigInt], t: usize, oct: Option<(usize, usize)>) -> NormalVector {
    let mut x = NormalVector { coords: coords[..7 * t].to_vec(), oct: None };
    if let Some((l, k)) = oct {
        let count = coords[7 * t].clone();
        if !count.is_zero() {
            x.oct = Some(OctSlot { tet: l, kind: k, count });
        }
    }
    x
}

/// Searches the sweep for a nontrivial normal sphere. Returns the first
/// finding in cone order (deterministic under any thread count). `None`
/// means the sweep is exhausted: in full mode the manifold then has no
/// extreme admissible ray of positive Euler characteristic at all, which
/// rules out any essential normal sphere.
pub fn find_nontrivial_sphere(
    tri: &Triangulation,
    mode: SearchMode,
) -> Result<Option<SphereFinding>, SearchError> {
    let skel = tri.skeleton();
    require_one_vertex(tri, &skel)?;
    let t = tri.tet_count();
    let cones = match mode {
        SearchMode::Full => enumerate_cones_full(t),
        SearchMode::Restricted => enumerate_cones_restricted(t),
    };
    let system = MatchingSystem::new(tri, &skel);
    let objective = chi_coefficients(&skel, None);

    let hit = cones.par_iter().enumerate().find_map_first(|(idx, spec)| {
        examine_cone(tri, &skel, &system, &objective, spec, idx).transpose()
    });
    hit.transpose()
}

/// Works through one cone: maximize chi, keep positive optima, scale to the
/// primitive extreme vector, double projective planes, and certify the
/// result against the reconstruction oracle.
fn examine_cone(
    tri: &Triangulation,
    skel: &Skeleton,
    system: &MatchingSystem,
    objective: &[BigRational],
    spec: &ConeSpec,
    cone_index: usize,
) -> Result<Option<SphereFinding>, SearchError> {
    let sys = cone_system(system, spec);
    let outcome = maximize(&sys, objective).map_err(|e| SearchError::Anomaly(e.to_string()))?;
    let LpOutcome::Optimal { value, vertex } = outcome else {
        return Ok(None);
    };
    if !value.is_positive() {
        return Ok(None);
    }
    let ints = primitive_integer(&vertex);
    let extreme = on_extreme_ray(&sys, &ints).map_err(|e| SearchError::Anomaly(e.to_string()))?;
    if !extreme {
        return Err(SearchError::Anomaly(format!(
            "cone {cone_index}: optimal vertex is not on an extreme ray"
        )));
    }
    let y = vector_from(&ints, tri.tet_count(), None);
    let chi = chi_linear(skel, &y);
    if !chi.is_integer() {
        return Err(SearchError::Anomaly(
            "nonintegral Euler characteristic on an integer vector".into(),
        ));
    }
    let chi = chi.to_integer();
    if y.quad_total().is_zero() {
        return Err(SearchError::Anomaly(
            "positive-chi finding without quads would be a vertex link".into(),
        ));
    }
    let (candidate, chi_found, doubled) = if chi == BigInt::one() {
        (y.doubled(), 1, true)
    } else if chi == BigInt::from(2) {
        (y, 2, false)
    } else {
        return Err(SearchError::Anomaly(format!(
            "primitive extreme vector with Euler characteristic {chi}"
        )));
    };
    let vector = certify_sphere(tri, skel, candidate, cone_index)?;
    Ok(Some(SphereFinding {
        vector,
        cone: spec.clone(),
        cone_index,
        chi_found,
        doubled_from_rp2: doubled,
    }))
}

/// Oracle gate for a sphere candidate. A connected candidate must be a
/// sphere. A disconnected one should not occur on an extreme ray; rather
/// than trusting that argument, salvage a component that is a sphere with
/// quads if one exists, and only then give up.
fn certify_sphere(
    tri: &Triangulation,
    skel: &Skeleton,
    candidate: NormalVector,
    cone_index: usize,
) -> Result<NormalVector, SearchError> {
    let surf =
        reconstruct(tri, skel, &candidate).map_err(|e| SearchError::Anomaly(e.to_string()))?;
    if surf.is_connected_sphere() {
        return Ok(candidate);
    }
    if surf.components.len() > 1 {
        for (c, stats) in surf.components.iter().enumerate() {
            if !stats.is_sphere() {
                continue;
            }
            let piece = surf.component_vector(tri.tet_count(), c);
            if piece.quad_total() > BigInt::zero() {
                let check = reconstruct(tri, skel, &piece)
                    .map_err(|e| SearchError::Anomaly(e.to_string()))?;
                if !check.is_connected_sphere() {
                    return Err(SearchError::Anomaly(format!(
                        "cone {cone_index}: extracted component is not a sphere on its own"
                    )));
                }
                return Ok(piece);
            }
        }
    }
    Err(SearchError::Anomaly(format!(
        "cone {cone_index}: candidate is not a sphere and has no quad-bearing sphere component: {:?}",
        surf.components
    )))
}

#[derive(Clone, Debug)]
pub enum Reducibility {
    /// A nontrivial normal sphere with at most two quad types was found.
    Reducible(Box<SphereFinding>),
    /// The restricted sweep is exhausted; for a minimal triangulation this
    /// certifies irreducibility.
    Irreducible,
    /// The sweep found only a doubled one-sided projective plane in a
    /// two-tetrahedron input. The embedded projective plane shows the
    /// manifold contains a punctured RP^3; at the minimal size for RP^3
    /// the manifold *is* RP^3, which is irreducible, so the sphere bounds
    /// on the twisted I-bundle side and is not a certificate of a sum.
    IrreducibleRp3(Box<SphereFinding>),
}

impl Reducibility {
    pub fn is_reducible(&self) -> bool {
        matches!(self, Reducibility::Reducible(_))
    }
}

/// Reducibility check for minimal triangulations: restricted sweep only.
/// The verdict is contingent on minimality of the input, which the caller
/// asserts; the report layer records the caveat.
///
/// A doubled projective plane needs care. It always yields an embedded
/// one-sided RP^2, whose twisted I-bundle neighborhood is a punctured
/// RP^3. In a minimal triangulation with more than two tetrahedra the
/// complement of that bundle cannot be a ball (RP^3 itself needs only
/// two), so the doubled sphere genuinely splits off an RP^3 summand. At
/// exactly two tetrahedra the manifold is RP^3 and irreducible.
pub fn is_reducible_minimal(tri: &Triangulation) -> Result<Reducibility, SearchError> {
    Ok(match find_nontrivial_sphere(tri, SearchMode::Restricted)? {
        Some(finding) if finding.doubled_from_rp2 && tri.tet_count() == 2 => {
            Reducibility::IrreducibleRp3(Box::new(finding))
        }
        Some(finding) => Reducibility::Reducible(Box::new(finding)),
        None => Reducibility::Irreducible,
    })
}

#[derive(Clone, Debug)]
pub enum S3Verdict {
    /// Certificate: an almost normal 2-sphere with one octagon realizing
    /// chi - (octagon count) = 1.
    IsS3 { certificate: NormalVector },
    NotS3,
}

impl S3Verdict {
    pub fn is_s3(&self) -> bool {
        matches!(self, S3Verdict::IsS3 { .. })
    }
}

/// Decides whether a one-vertex triangulation with no nontrivial normal
/// sphere is the 3-sphere, by maximizing chi - o over the octagon cones.
/// The caller is responsible for the no-sphere precondition (`decompose`
/// establishes it by exhausting the full sweep first); a positive purely
/// normal optimum trips `SphereObstruction`.
pub fn recognize_s3(tri: &Triangulation) -> Result<S3Verdict, SearchError> {
    let skel = tri.skeleton();
    require_one_vertex(tri, &skel)?;
    let t = tri.tet_count();
    let cones = enumerate_cones_octagon(t);

    // Extended matching system and objective per octagon slot, built once.
    let mut systems = Vec::with_capacity(3 * t);
    for l in 0..t {
        for k in 1..=3usize {
            let system = MatchingSystem::with_octagon(tri, &skel, Some((l, k)));
            let mut objective = chi_coefficients(&skel, Some((l, k)));
            let last = objective.len() - 1;
            objective[last] -= BigRational::one();
            systems.push(((l, k), system, objective));
        }
    }

    let hit = cones
        .par_iter()
        .enumerate()
        .find_map_first(|(idx, spec)| {
            let slot = spec.oct.unwrap();
            let (_, system, objective) = &systems[3 * slot.0 + slot.1 - 1];
            examine_octagon_cone(tri, &skel, system, objective, spec, idx).transpose()
        })
        .transpose()?;
    Ok(match hit {
        Some(certificate) => S3Verdict::IsS3 { certificate },
        None => S3Verdict::NotS3,
    })
}

fn examine_octagon_cone(
    tri: &Triangulation,
    skel: &Skeleton,
    system: &MatchingSystem,
    objective: &[BigRational],
    spec: &ConeSpec,
    cone_index: usize,
) -> Result<Option<NormalVector>, SearchError> {
    let sys = cone_system(system, spec);
    let outcome = maximize(&sys, objective).map_err(|e| SearchError::Anomaly(e.to_string()))?;
    let LpOutcome::Optimal { value, vertex } = outcome else {
        return Ok(None);
    };
    if !value.is_positive() {
        return Ok(None);
    }
    let ints = primitive_integer(&vertex);
    let y = vector_from(&ints, tri.tet_count(), spec.oct);
    let o = y.oct_count();
    let chi = chi_linear(skel, &y);
    if !chi.is_integer() {
        return Err(SearchError::Anomaly(
            "nonintegral Euler characteristic on an integer vector".into(),
        ));
    }
    let chi = chi.to_integer();
    if o.is_zero() {
        // Purely normal positive-chi optimum: a nontrivial normal sphere or
        // projective plane exists after all, so the caller skipped the
        // sphere search it was required to run.
        return Err(SearchError::SphereObstruction);
    }
    let score = &chi - &o;
    if score > BigInt::one() {
        return Err(SearchError::Anomaly(format!(
            "cone {cone_index}: chi - o = {score} exceeds 1 on a vertex ray"
        )));
    }
    if score < BigInt::one() {
        // The functional is linear and the optimum was positive, so the
        // scaled integer point must score exactly 1.
        return Err(SearchError::Anomaly(format!(
            "cone {cone_index}: positive optimum scaled to score {score}"
        )));
    }
    if o != BigInt::one() || chi != BigInt::from(2) {
        return Err(SearchError::Anomaly(format!(
            "cone {cone_index}: score 1 with chi {chi} and {o} octagons"
        )));
    }
    let surf = reconstruct(tri, skel, &y).map_err(|e| SearchError::Anomaly(e.to_string()))?;
    if !surf.is_connected_sphere() {
        return Err(SearchError::Anomaly(
            "octagonal certificate fails the reconstruction oracle".into(),
        ));
    }
    Ok(Some(y))
}

/// Cone counts by mode, kept next to the enumerators they describe.
pub fn expected_cone_count(t: usize, mode: SearchMode) -> usize {
    match mode {
        SearchMode::Full => 4 * t * 3usize.pow(t as u32),
        SearchMode::Restricted => {
            if t == 1 {
                12
            } else {
                36 * t * (t * (t - 1) / 2)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cone_counts_match_formulas() {
        for t in 1..=6 {
            assert_eq!(enumerate_cones_full(t).len(), expected_cone_count(t, SearchMode::Full));
            assert_eq!(
                enumerate_cones_restricted(t).len(),
                expected_cone_count(t, SearchMode::Restricted)
            );
        }
        assert_eq!(enumerate_cones_restricted(1).len(), 12);
        assert_eq!(enumerate_cones_restricted(2).len(), 72);
        assert_eq!(enumerate_cones_full(1).len(), 12);
        assert_eq!(enumerate_cones_full(2).len(), 72);
    }

    #[test]
    fn cones_are_pairwise_distinct() {
        for t in 1..=4 {
            for cones in [enumerate_cones_full(t), enumerate_cones_restricted(t)] {
                for a in 0..cones.len() {
                    for b in (a + 1)..cones.len() {
                        assert_ne!(cones[a], cones[b]);
                    }
                }
            }
        }
    }

    #[test]
    fn octagon_cones_pin_quads_in_their_tetrahedron() {
        let cones = enumerate_cones_octagon(2);
        assert_eq!(cones.len(), 9 * 8 * 2 * 3);
        for spec in &cones {
            let (l, k) = spec.oct.unwrap();
            assert_eq!(spec.quad_types[l], 0);
            assert!((1..=3).contains(&k));
            for (i, &q) in spec.quad_types.iter().enumerate() {
                if i != l {
                    assert!((1..=3).contains(&q));
                }
            }
        }
    }

    #[test]
    fn restricted_cones_are_supported_on_two_tetrahedra() {
        for spec in enumerate_cones_restricted(3) {
            let live = spec.quad_types.iter().filter(|&&q| q != 0).count();
            assert_eq!(live, 2);
        }
    }
}
