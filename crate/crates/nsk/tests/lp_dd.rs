//! Cross-validation of the exact simplex against the independent
//! double-description enumerator: over every cone the sweeps ever visit on
//! the small fixtures, the simplex optimum must equal the best objective
//! value over the brute-force extreme-ray list, and the returned vertex
//! must itself be one of those rays.

mod common;

use common::fixtures;
use ddcheck::extreme_rays;
use nsk::lp::{maximize, on_extreme_ray, primitive_integer, ConeSystem, LpOutcome};
use nsk::normal::{chi_coefficients, vertex_link, MatchingSystem};
use nsk::search::{
    cone_system, enumerate_cones_full, enumerate_cones_octagon, enumerate_cones_restricted,
};
use nsk::tri::Triangulation;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Dense equality rows for the double-description oracle: the matching rows
/// plus one unit row per pinned coordinate (x_c = 0 as an equality).
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
            d[c] = BigInt::one();
            rows.push(d);
        }
    }
    rows
}

/// Best objective value over the polytope {cone, sum of coordinates = 1},
/// computed from the ray list: each ray r contributes (c . r) / (sum r).
fn ray_maximum(rays: &[Vec<BigInt>], objective: &[BigRational]) -> Option<BigRational> {
    rays.iter()
        .map(|r| {
            let num: BigRational = r
                .iter()
                .zip(objective)
                .map(|(x, c)| c * BigRational::from(x.clone()))
                .sum();
            let den: BigInt = r.iter().sum();
            num / BigRational::from(den)
        })
        .max()
}

/// Checks one cone. Returns true when the cone was feasible.
fn check_cone(sys: &ConeSystem, objective: &[BigRational]) -> bool {
    let lp = maximize(sys, objective).expect("simplex succeeds");
    let rays = extreme_rays(&dense_rows(sys), sys.n);
    match (lp, ray_maximum(&rays, objective)) {
        (LpOutcome::Infeasible, None) => false,
        (LpOutcome::Optimal { value, vertex }, Some(best)) => {
            assert_eq!(value, best, "optimum disagrees with ray maximum");
            // Basic feasible solutions of the normalized polytope sit on
            // extreme rays of the cone, so the primitive vertex must appear
            // verbatim in the (sorted) ray list.
            let prim = primitive_integer(&vertex);
            assert!(
                rays.binary_search(&prim).is_ok(),
                "simplex vertex is not a double-description ray"
            );
            assert!(on_extreme_ray(sys, &prim).unwrap());
            true
        }
        (LpOutcome::Infeasible, Some(_)) => panic!("simplex infeasible but rays exist"),
        (LpOutcome::Optimal { .. }, None) => panic!("simplex optimum on the zero cone"),
    }
}

/// Runs the agreement check over every full, restricted, and octagon cone of
/// one fixture; returns (feasible cones, total cones).
fn sweep_fixture(text: &str) -> (usize, usize) {
    let tri = Triangulation::parse(text).unwrap();
    let skel = tri.skeleton();
    let t = tri.tet_count();
    let base = MatchingSystem::new(&tri, &skel);
    let chi = chi_coefficients(&skel, None);

    let mut feasible = 0;
    let mut total = 0;
    for spec in enumerate_cones_full(t)
        .iter()
        .chain(enumerate_cones_restricted(t).iter())
    {
        let sys = cone_system(&base, spec);
        feasible += usize::from(check_cone(&sys, &chi));
        total += 1;
    }

    // Octagon cones share one extended system per (tetrahedron, type) slot.
    let mut slots = Vec::with_capacity(3 * t);
    for l in 0..t {
        for k in 1..=3usize {
            let system = MatchingSystem::with_octagon(&tri, &skel, Some((l, k)));
            let mut objective = chi_coefficients(&skel, Some((l, k)));
            let last = objective.len() - 1;
            objective[last] -= BigRational::one();
            slots.push((system, objective));
        }
    }
    for spec in enumerate_cones_octagon(t) {
        let (l, k) = spec.oct.unwrap();
        let (system, objective) = &slots[3 * l + k - 1];
        let sys = cone_system(system, &spec);
        feasible += usize::from(check_cone(&sys, objective));
        total += 1;
    }
    (feasible, total)
}

#[test]
fn simplex_and_double_description_agree_on_every_cone() {
    let mut grand_feasible = 0;
    for text in [
        fixtures::S3_ONE_TET,
        fixtures::RP3,
        fixtures::L31,
        fixtures::S1XS2,
        fixtures::S3_TWO_TET_GOOD_VERTEX,
    ] {
        let (feasible, total) = sweep_fixture(text);
        let t = Triangulation::parse(text).unwrap().tet_count();
        let expected = if t == 1 { 12 + 12 + 36 } else { 72 + 72 + 432 };
        assert_eq!(total, expected, "cone count for {}-tet fixture", t);
        grand_feasible += feasible;
    }
    assert!(grand_feasible > 0, "every cone infeasible: oracle never ran");

    // The sphere bundle must have feasible quad cones (its sweep finds one).
    let (feasible, _) = sweep_fixture(fixtures::S1XS2);
    assert!(feasible > 0);
}

#[test]
fn vertex_link_is_a_ray_of_the_triangle_cone() {
    // The cone with all quadrilaterals pinned and every triangle free is not
    // part of any sweep, but its geometry is known: vertex links live there.
    let tri = Triangulation::parse(fixtures::S3_ONE_TET).unwrap();
    let skel = tri.skeleton();
    let base = MatchingSystem::new(&tri, &skel);
    let mut forced_zero = vec![false; base.cols()];
    for c in 0..base.cols() {
        if c % 7 >= 4 {
            forced_zero[c] = true;
        }
    }
    let sys = ConeSystem { n: base.cols(), rows: base.sparse_rows(), forced_zero };

    let link = vertex_link(&skel, 0);
    let rays = extreme_rays(&dense_rows(&sys), sys.n);
    assert!(rays.binary_search(&link.coords).is_ok());
    assert!(on_extreme_ray(&sys, &link.coords).unwrap());
}
