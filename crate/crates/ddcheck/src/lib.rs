//! Brute-force extreme-ray enumeration for rational polyhedral cones of the
//! form `{ x ∈ R^n : A·x = 0, x ≥ 0 }` via the double-description method.
//!
//! This crate exists as an independent cross-check for simplex-based vertex
//! enumeration: it shares no code with the solver it audits, works over
//! arbitrary-precision integers, and uses the purely combinatorial adjacency
//! test (sound here because every cone we handle lives inside the non-negative
//! orthant and is therefore pointed).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// A primitive integer ray (gcd of entries = 1, all entries ≥ 0).
pub type Ray = Vec<BigInt>;

/// Enumerate the extreme rays of `{ x : A·x = 0, x ≥ 0 }` where each row of
/// `rows` is one equality constraint of length `n`.
///
/// Returns primitive rays sorted lexicographically. The zero cone yields an
/// empty list. Rows of the wrong length panic: this is a test oracle and
/// malformed input is a bug in the caller.
pub fn extreme_rays(rows: &[Vec<BigInt>], n: usize) -> Vec<Ray> {
    for r in rows {
        assert_eq!(r.len(), n, "constraint row length mismatch");
    }
    // Extreme rays of the non-negative orthant: the standard basis.
    let mut rays: Vec<Ray> = (0..n)
        .map(|i| {
            let mut e = vec![BigInt::zero(); n];
            e[i] = BigInt::from(1);
            e
        })
        .collect();

    for row in rows {
        rays = cut_with_hyperplane(rays, row);
        if rays.is_empty() {
            return rays;
        }
    }
    rays.sort();
    rays
}

/// One double-description step: intersect the cone described by `rays` with
/// the hyperplane `row·x = 0`, keeping the cone pointed inside x ≥ 0.
fn cut_with_hyperplane(rays: Vec<Ray>, row: &[BigInt]) -> Vec<Ray> {
    let sign: Vec<BigInt> = rays.iter().map(|r| dot(row, r)).collect();
    let zero_sets: Vec<Vec<bool>> = rays
        .iter()
        .map(|r| r.iter().map(|x| x.is_zero()).collect())
        .collect();

    let mut out: Vec<Ray> = Vec::new();
    for (i, r) in rays.iter().enumerate() {
        if sign[i].is_zero() {
            out.push(r.clone());
        }
    }

    for i in 0..rays.len() {
        if !sign[i].is_positive() {
            continue;
        }
        for j in 0..rays.len() {
            if !sign[j].is_negative() {
                continue;
            }
            if !adjacent(&zero_sets, i, j) {
                continue;
            }
            // w = sign[i]·rays[j] − sign[j]·rays[i]  (entrywise ≥ 0, row·w = 0)
            let w: Vec<BigInt> = rays[i]
                .iter()
                .zip(rays[j].iter())
                .map(|(a, b)| &sign[i] * b - &sign[j] * a)
                .collect();
            out.push(primitive(w));
        }
    }

    out.sort();
    out.dedup();
    out
}

/// Combinatorial adjacency of rays i, j: no third ray's zero set contains
/// Z(i) ∩ Z(j). Valid for pointed cones.
fn adjacent(zero_sets: &[Vec<bool>], i: usize, j: usize) -> bool {
    let meet: Vec<bool> = zero_sets[i]
        .iter()
        .zip(zero_sets[j].iter())
        .map(|(a, b)| *a && *b)
        .collect();
    for (t, z) in zero_sets.iter().enumerate() {
        if t == i || t == j {
            continue;
        }
        if meet.iter().zip(z.iter()).all(|(m, zz)| !*m || *zz) {
            return false;
        }
    }
    true
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Divide a non-negative integer vector by the gcd of its entries.
pub fn primitive(v: Vec<BigInt>) -> Ray {
    let mut g = BigInt::zero();
    for x in &v {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v;
    }
    v.into_iter().map(|x| x / &g).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn orthant_without_constraints_has_basis_rays() {
        let rays = extreme_rays(&[], 3);
        assert_eq!(rays, vec![bi(&[0, 0, 1]), bi(&[0, 1, 0]), bi(&[1, 0, 0])]);
    }

    #[test]
    fn plane_x_plus_y_equals_z_has_two_rays() {
        let rays = extreme_rays(&[bi(&[1, 1, -1])], 3);
        assert_eq!(rays, vec![bi(&[0, 1, 1]), bi(&[1, 0, 1])]);
    }

    #[test]
    fn diagonal_constraint_merges_coordinates() {
        let rays = extreme_rays(&[bi(&[1, -1, 0])], 3);
        assert_eq!(rays, vec![bi(&[0, 0, 1]), bi(&[1, 1, 0])]);
    }

    #[test]
    fn infeasible_sign_forces_zero_cone() {
        // x + y = 0 with x, y >= 0 forces both to 0; together with z = 0 the
        // cone is trivial.
        let rays = extreme_rays(&[bi(&[1, 1, 0]), bi(&[0, 0, 1])], 3);
        assert!(rays.is_empty());
    }

    #[test]
    fn square_cone_keeps_four_rays() {
        // { (x,y,z,w) : x + y = z + w } has 4 extreme rays.
        let rays = extreme_rays(&[bi(&[1, 1, -1, -1])], 4);
        assert_eq!(
            rays,
            vec![
                bi(&[0, 1, 0, 1]),
                bi(&[0, 1, 1, 0]),
                bi(&[1, 0, 0, 1]),
                bi(&[1, 0, 1, 0]),
            ]
        );
    }

    #[test]
    fn redundant_constraint_changes_nothing() {
        let once = extreme_rays(&[bi(&[1, 1, -1])], 3);
        let twice = extreme_rays(&[bi(&[1, 1, -1]), bi(&[2, 2, -2])], 3);
        assert_eq!(once, twice);
    }

    #[test]
    fn three_dimensional_cross_section() {
        // x0 + x1 = x2 + x3, x0 + x2 = x1 + x3  =>  x0 = x3, x1 = x2 after
        // elimination; rays (1,0,0,1) and (0,1,1,0).
        let rays = extreme_rays(&[bi(&[1, 1, -1, -1]), bi(&[1, -1, 1, -1])], 4);
        assert_eq!(rays, vec![bi(&[0, 1, 1, 0]), bi(&[1, 0, 0, 1])]);
    }

    #[test]
    fn primitive_reduces_by_gcd() {
        assert_eq!(primitive(bi(&[2, 4, 6])), bi(&[1, 2, 3]));
        assert_eq!(primitive(bi(&[0, 0])), bi(&[0, 0]));
    }
}
