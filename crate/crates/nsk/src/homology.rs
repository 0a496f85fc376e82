//! Simplicial homology of the identified cell complex of a triangulation.
//!
//! Chain groups use one generator per identified cell class (vertex, edge,
//! face, tetrahedron). Orientation bookkeeping: an edge class is oriented by
//! its lexicographically least slot taken ascending; a face class by the
//! ascending vertex order of its representative slot.

use crate::snf::{invariant_factors, is_zero_matrix, mat_mul, zeros, Matrix};
use crate::tri::{Skeleton, Triangulation};
use crate::geom::{edge_index, face_vertices, EDGE_VERTS};
use num_bigint::BigInt;
use num_traits::One;
use std::fmt;

/// A finitely generated abelian group in invariant factor form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbGroup {
    pub rank: usize,
    /// Nontrivial invariant factors, each dividing the next.
    pub torsion: Vec<BigInt>,
}

impl AbGroup {
    pub fn trivial() -> AbGroup {
        AbGroup { rank: 0, torsion: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn free(rank: usize) -> AbGroup {
        AbGroup { rank, torsion: Vec::new() }
    }

    pub fn cyclic(n: u64) -> AbGroup {
        AbGroup { rank: 0, torsion: vec![BigInt::from(n)] }
    }
}

impl fmt::Display for AbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homology {
    pub groups: [AbGroup; 4],
}

impl Homology {
    pub fn h1(&self) -> &AbGroup {
        &self.groups[1]
    }
}

/// Parity sign of the permutation sorting a triple ascending.
fn sort_sign3(t: [usize; 3]) -> i64 {
    let mut inv = 0;
    for i in 0..3 {
        for j in (i + 1)..3 {
            if t[i] > t[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

fn boundary_matrices(tri: &Triangulation, skel: &Skeleton) -> (Matrix, Matrix, Matrix) {
    let t = tri.tet_count();
    let v = skel.vertex_count;
    let e = skel.edge_count;
    let faces = skel.face_pairs.len();

    // Canonical directed class per edge class: least slot, ascending.
    let canon_dir: Vec<usize> = skel
        .edge_members
        .iter()
        .map(|members| {
            let (i, ei) = members[0];
            let [u, w] = EDGE_VERTS[ei];
            skel.directed_class_of(i, u, w)
        })
        .collect();
    let edge_sign = |i: usize, x: usize, y: usize| -> i64 {
        let cls = skel.edge_class[6 * i + edge_index(x, y)];
        if skel.directed_class_of(i, x, y) == canon_dir[cls] {
            1
        } else {
            -1
        }
    };

    let mut d3 = zeros(faces, t);
    for j in 0..t {
        for g in 0..4 {
            let fc = skel.face_class[4 * j + g];
            let pair = skel.face_pairs[fc];
            let s = if pair.rep == (j, g) {
                1
            } else {
                let [a, b, c] = face_vertices(pair.rep.1);
                sort_sign3([pair.perm.apply(a), pair.perm.apply(b), pair.perm.apply(c)])
            };
            let sign = if g % 2 == 0 { 1 } else { -1 };
            d3[fc][j] += BigInt::from(sign * s);
        }
    }

    let mut d2 = zeros(e, faces);
    for (fc, pair) in skel.face_pairs.iter().enumerate() {
        let (i, f) = pair.rep;
        let [a, b, c] = face_vertices(f);
        for (x, y, s) in [(b, c, 1i64), (a, c, -1), (a, b, 1)] {
            let cls = skel.edge_class[6 * i + edge_index(x, y)];
            d2[cls][fc] += BigInt::from(s * edge_sign(i, x, y));
        }
    }

    let mut d1 = zeros(v, e);
    for (cls, members) in skel.edge_members.iter().enumerate() {
        let (i, ei) = members[0];
        let [u, w] = EDGE_VERTS[ei];
        d1[skel.vertex_class[4 * i + w]][cls] += BigInt::one();
        d1[skel.vertex_class[4 * i + u]][cls] -= BigInt::one();
    }

    (d1, d2, d3)
}

/// Homology groups H_0..H_3 of the identified complex.
pub fn homology(tri: &Triangulation) -> Homology {
    let t = tri.tet_count();
    if t == 0 {
        return Homology {
            groups: [
                AbGroup::trivial(),
                AbGroup::trivial(),
                AbGroup::trivial(),
                AbGroup::trivial(),
            ],
        };
    }
    let skel = tri.skeleton();
    let (d1, d2, d3) = boundary_matrices(tri, &skel);
    assert!(
        is_zero_matrix(&mat_mul(&d1, &d2)),
        "boundary of boundary must vanish (d1 d2)"
    );
    assert!(
        is_zero_matrix(&mat_mul(&d2, &d3)),
        "boundary of boundary must vanish (d2 d3)"
    );

    let dims = [skel.vertex_count, skel.edge_count, 2 * t, t];
    let f1 = invariant_factors(d1);
    let f2 = invariant_factors(d2);
    let f3 = invariant_factors(d3);
    let ranks = [0, f1.len(), f2.len(), f3.len(), 0];
    let chains = [&f1, &f2, &f3];

    let mut groups = Vec::with_capacity(4);
    for k in 0..4 {
        let rank = dims[k] - ranks[k] - ranks[k + 1];
        let torsion = if k < 3 {
            chains[k]
                .iter()
                .filter(|d| !d.is_one())
                .cloned()
                .collect()
        } else {
            Vec::new()
        };
        groups.push(AbGroup { rank, torsion });
    }
    Homology {
        groups: groups.try_into().unwrap(),
    }
}
