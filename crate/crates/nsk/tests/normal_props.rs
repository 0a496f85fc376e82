//! Property tests for the matching system, vertex links, and the linear
//! Euler-characteristic functional, checked against the geometric
//! reconstruction oracle on both random triangulations and the frozen
//! fixtures.

mod common;

use common::fixtures;
use ddcheck::extreme_rays;
use nsk::geom::Perm4;
use nsk::lp::ConeSystem;
use nsk::normal::{chi_linear, is_admissible, vertex_link, MatchingSystem, NormalVector};
use nsk::search::{cone_system, enumerate_cones_full};
use nsk::surface::reconstruct;
use nsk::tri::Triangulation;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random closed orientable triangulation with `t` tetrahedra: a random
/// perfect matching of the 4t face slots with random odd gluing
/// permutations, retried until the identification is valid. All-odd
/// permutations guarantee orientability, so rejections only come from bad
/// edge or vertex identifications.
fn random_closed(t: usize, seed: u64) -> Triangulation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let odd: Vec<Perm4> = Perm4::all().into_iter().filter(|p| p.is_odd()).collect();
    loop {
        let mut slots: Vec<usize> = (0..4 * t).collect();
        slots.shuffle(&mut rng);
        let mut gluings = vec![[(0usize, Perm4::IDENTITY); 4]; t];
        for pair in slots.chunks(2) {
            let (i, f) = (pair[0] / 4, pair[0] % 4);
            let (j, g) = (pair[1] / 4, pair[1] % 4);
            let choices: Vec<Perm4> =
                odd.iter().copied().filter(|p| p.apply(f) == g).collect();
            let p = choices[rng.gen_range(0..choices.len())];
            gluings[i][f] = (j, p);
            gluings[j][g] = (i, p.inverse());
        }
        if let Ok(tri) = Triangulation::new(gluings) {
            return tri;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    /// Matching-system shape on random triangulations: 6t rows, each with
    /// two positive and two negative unit entries, one triangle and one
    /// quadrilateral column per side.
    #[test]
    fn matching_rows_pair_one_triangle_with_one_quad_per_side(
        t in 1usize..=6,
        seed in any::<u64>(),
    ) {
        let tri = random_closed(t, seed);
        let skel = tri.skeleton();
        let system = MatchingSystem::new(&tri, &skel);
        prop_assert_eq!(system.rows.len(), 6 * t);
        for row in &system.rows {
            prop_assert_eq!(row.oct, 0);
            for side in [row.plus, row.minus] {
                prop_assert!(side.iter().all(|&c| c < 7 * t));
                let tri_cols = side.iter().filter(|&&c| c % 7 < 4).count();
                prop_assert_eq!(tri_cols, 1, "one triangle and one quad per side");
            }
        }
    }

    /// Vertex links on random triangulations: quad-free admissible solutions
    /// of the matching system with Euler characteristic 2, reconstructing to
    /// embedded spheres, and jointly covering every triangle type once.
    #[test]
    fn vertex_links_are_trivial_spheres(t in 1usize..=5, seed in any::<u64>()) {
        let tri = random_closed(t, seed);
        let skel = tri.skeleton();
        let system = MatchingSystem::new(&tri, &skel);
        let mut corner_cover = NormalVector::zero(t);
        for class in 0..skel.vertex_count {
            let link = vertex_link(&skel, class);
            prop_assert!(system.residual(&link).unwrap().iter().all(|r| r.is_zero()));
            prop_assert!(link.quad_total().is_zero());
            prop_assert!(is_admissible(&tri, &skel, &link).unwrap().ok());
            prop_assert_eq!(chi_linear(&skel, &link), BigRational::from(BigInt::from(2)));
            let surf = reconstruct(&tri, &skel, &link).unwrap();
            prop_assert!(surf.is_connected_sphere());
            prop_assert_eq!(BigInt::from(surf.weight), link.weight());
            for (c, v) in corner_cover.coords.iter_mut().zip(&link.coords) {
                *c += v;
            }
        }
        // Every corner belongs to exactly one vertex class, so the links sum
        // to the all-ones triangle vector.
        for i in 0..t {
            for v in 0..4 {
                prop_assert_eq!(corner_cover.tri(i, v), &BigInt::from(1));
            }
        }
    }
}

fn dense_rows(sys: &ConeSystem) -> Vec<Vec<BigInt>> {
    let mut rows = Vec::new();
    for r in &sys.rows {
        let mut d = vec![BigInt::zero(); sys.n];
        for &(c, a) in r {
            d[c] = BigInt::from(a);
        }
        rows.push(d);
    }
    for (c, &z) in sys.forced_zero.iter().enumerate() {
        if z {
            let mut d = vec![BigInt::zero(); sys.n];
            d[c] = BigInt::from(1);
            rows.push(d);
        }
    }
    rows
}

fn vector_of(coords: &[BigInt], t: usize) -> NormalVector {
    let mut x = NormalVector::zero(t);
    x.coords.clone_from_slice(&coords[..7 * t]);
    x
}

/// The linear Euler functional and the corner-count weight against the
/// reconstruction oracle, over a large bank of admissible vectors: scaled
/// vertex links, every extreme ray of every full-mode cone of the frozen
/// fixtures, pairwise Haken sums inside each cone, and ray-plus-link sums.
/// Compatible sums also check the additivity of the oracle's total Euler
/// characteristic (the regular-exchange invariant).
#[test]
fn chi_and_weight_match_the_reconstruction_oracle() {
    let mut checked = 0usize;
    for text in [
        fixtures::S3_ONE_TET,
        fixtures::RP3,
        fixtures::L31,
        fixtures::S1XS2,
        fixtures::S3_TWO_TET_GOOD_VERTEX,
    ] {
        let tri = Triangulation::parse(text).unwrap();
        let skel = tri.skeleton();
        let t = tri.tet_count();
        let base = MatchingSystem::new(&tri, &skel);

        let mut check = |x: &NormalVector| {
            assert!(is_admissible(&tri, &skel, x).unwrap().ok());
            let surf = reconstruct(&tri, &skel, x).unwrap();
            assert_eq!(
                BigRational::from(BigInt::from(surf.total_chi)),
                chi_linear(&skel, x),
                "oracle chi disagrees on {}",
                x.serialize()
            );
            assert_eq!(BigInt::from(surf.weight), x.weight());
            checked += 1;
            surf.total_chi
        };

        let links: Vec<NormalVector> =
            (0..skel.vertex_count).map(|c| vertex_link(&skel, c)).collect();
        for link in &links {
            for k in 1..=3 {
                check(&link.scaled(&BigInt::from(k)));
            }
        }

        for spec in enumerate_cones_full(t) {
            let sys = cone_system(&base, &spec);
            let rays: Vec<NormalVector> = extreme_rays(&dense_rows(&sys), sys.n)
                .into_iter()
                .map(|r| vector_of(&r, t))
                .collect();
            for ray in &rays {
                let chi_single = check(ray);
                let chi_double = check(&ray.doubled());
                assert_eq!(chi_double, 2 * chi_single, "doubling halves nothing");
                for link in &links {
                    let mut sum = ray.clone();
                    for (c, v) in sum.coords.iter_mut().zip(&link.coords) {
                        *c += v;
                    }
                    let chi_sum = check(&sum);
                    assert_eq!(chi_sum, chi_single + 2, "link sum adds a sphere's chi");
                }
            }
            // Rays of one cone share a quad pattern, so sums stay admissible.
            for a in 0..rays.len() {
                for b in (a + 1)..rays.len() {
                    let mut sum = rays[a].clone();
                    for (c, v) in sum.coords.iter_mut().zip(&rays[b].coords) {
                        *c += v;
                    }
                    check(&sum);
                }
            }
        }
    }
    assert!(checked >= 500, "only {checked} vectors checked");
}
