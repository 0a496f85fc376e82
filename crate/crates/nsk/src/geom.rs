//! Combinatorial vocabulary for tetrahedron-level bookkeeping: permutations
//! of the four vertex labels, the quadrilateral pair partitions, and the
//! boundary-traversal tables of the seven (plus octagon) disk types.
//!
//! Conventions used across the crate:
//! - Face `f` of a tetrahedron is the face opposite vertex `f`.
//! - Quad type k ∈ {1,2,3} separates the vertex pairs `QUAD_PAIRS[k-1]`:
//!   1 ↦ {0,1}|{2,3}, 2 ↦ {0,2}|{1,3}, 3 ↦ {0,3}|{1,2}.
//! - A normal arc in face `f` is named by the vertex it cuts off.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// A permutation of {0,1,2,3}, stored as its image array.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Perm4([u8; 4]);

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4([0, 1, 2, 3]);

    /// Build from an image array; `None` unless it is a bijection.
    pub fn new(images: [u8; 4]) -> Option<Perm4> {
        let mut seen = [false; 4];
        for &x in &images {
            if x > 3 || seen[x as usize] {
                return None;
            }
            seen[x as usize] = true;
        }
        Some(Perm4(images))
    }

    /// The transposition swapping `a` and `b`.
    pub fn transposition(a: usize, b: usize) -> Perm4 {
        let mut images = [0u8, 1, 2, 3];
        images.swap(a, b);
        Perm4(images)
    }

    pub fn apply(&self, v: usize) -> usize {
        self.0[v] as usize
    }

    pub fn inverse(&self) -> Perm4 {
        let mut images = [0u8; 4];
        for v in 0..4 {
            images[self.0[v] as usize] = v as u8;
        }
        Perm4(images)
    }

    /// Left-to-right composition: `(a.then(b))(v) = b(a(v))`.
    pub fn then(&self, b: &Perm4) -> Perm4 {
        let mut images = [0u8; 4];
        for v in 0..4 {
            images[v] = b.0[self.0[v] as usize];
        }
        Perm4(images)
    }

    pub fn is_odd(&self) -> bool {
        let mut inversions = 0;
        for i in 0..4 {
            for j in (i + 1)..4 {
                if self.0[i] > self.0[j] {
                    inversions += 1;
                }
            }
        }
        inversions % 2 == 1
    }

    pub fn images(&self) -> [u8; 4] {
        self.0
    }

    /// All 24 permutations in lexicographic order of their image arrays.
    pub fn all() -> Vec<Perm4> {
        let mut out = Vec::with_capacity(24);
        for a in 0..4u8 {
            for b in 0..4u8 {
                for c in 0..4u8 {
                    for d in 0..4u8 {
                        if let Some(p) = Perm4::new([a, b, c, d]) {
                            out.push(p);
                        }
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}{}{}",
            self.0[0], self.0[1], self.0[2], self.0[3]
        )
    }
}

impl fmt::Debug for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm4({})", self)
    }
}

impl FromStr for Perm4 {
    type Err = String;

    fn from_str(s: &str) -> Result<Perm4, String> {
        let digits: Vec<u8> = s
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as u8))
            .collect::<Option<_>>()
            .ok_or_else(|| format!("permutation `{s}` contains a non-digit"))?;
        let images: [u8; 4] = digits
            .try_into()
            .map_err(|_| format!("permutation `{s}` must have 4 digits"))?;
        Perm4::new(images).ok_or_else(|| format!("`{s}` is not a permutation of 0123"))
    }
}

/// Pair partitions behind the three quadrilateral (and octagon) types,
/// indexed by `type − 1`. The first pair always contains vertex 0.
pub const QUAD_PAIRS: [[[usize; 2]; 2]; 3] = [
    [[0, 1], [2, 3]],
    [[0, 2], [1, 3]],
    [[0, 3], [1, 2]],
];

/// The quad type (1..=3) whose partition puts distinct `u` and `v` together.
pub fn pair_type(u: usize, v: usize) -> usize {
    debug_assert!(u != v && u < 4 && v < 4);
    for (idx, pairs) in QUAD_PAIRS.iter().enumerate() {
        for pair in pairs {
            if pair.contains(&u) && pair.contains(&v) {
                return idx + 1;
            }
        }
    }
    unreachable!("every distinct pair lies in exactly one partition")
}

/// Whether the type-`k` partition separates `u` from `v`.
pub fn quad_separates(k: usize, u: usize, v: usize) -> bool {
    u != v && pair_type(u, v) != k
}

/// The partner of `v` in the type-`k` partition.
pub fn pair_partner(k: usize, v: usize) -> usize {
    let pairs = QUAD_PAIRS[k - 1];
    for pair in pairs {
        if pair[0] == v {
            return pair[1];
        }
        if pair[1] == v {
            return pair[0];
        }
    }
    unreachable!()
}

/// 0 if `v` lies in the first pair of the type-`k` partition, else 1.
pub fn pair_side(k: usize, v: usize) -> usize {
    if QUAD_PAIRS[k - 1][0].contains(&v) {
        0
    } else {
        1
    }
}

/// The three vertices of face `f` (everything but `f`), ascending.
pub fn face_vertices(f: usize) -> [usize; 3] {
    let mut out = [0; 3];
    let mut idx = 0;
    for v in 0..4 {
        if v != f {
            out[idx] = v;
            idx += 1;
        }
    }
    out
}

/// Canonical edge order of a tetrahedron.
pub const EDGE_VERTS: [[usize; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];

/// Index of the edge {u, v} in `EDGE_VERTS`.
pub fn edge_index(u: usize, v: usize) -> usize {
    debug_assert!(u != v);
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    match (a, b) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        (2, 3) => 5,
        _ => unreachable!(),
    }
}

/// One boundary arc of an elementary disk: the arc lies in `face`, cuts off
/// vertex `cut`, and is traversed from its corner on edge {cut, from} to its
/// corner on edge {cut, to}.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArcStep {
    pub face: usize,
    pub cut: usize,
    pub from: usize,
    pub to: usize,
}

/// Cyclic boundary of a triangle disk of type `v`.
pub fn tri_boundary(v: usize) -> [ArcStep; 3] {
    let [p, q, r] = face_vertices(v);
    [
        ArcStep { face: p, cut: v, from: q, to: r },
        ArcStep { face: q, cut: v, from: r, to: p },
        ArcStep { face: r, cut: v, from: p, to: q },
    ]
}

/// Cyclic boundary of a quad disk of type `k` (pairs {a,b} | {c,d}).
/// Corners land once on each of the four cross edges.
pub fn quad_boundary(k: usize) -> [ArcStep; 4] {
    let [[a, b], [c, d]] = QUAD_PAIRS[k - 1];
    [
        ArcStep { face: b, cut: a, from: c, to: d },
        ArcStep { face: c, cut: d, from: a, to: b },
        ArcStep { face: a, cut: b, from: d, to: c },
        ArcStep { face: d, cut: c, from: b, to: a },
    ]
}

/// Cyclic boundary of an octagon disk of type `k` (pairs {a,b} | {c,d}).
/// In each face the octagon contributes two arcs, cutting off both vertices
/// of the pair not containing that face; corners land once on each cross
/// edge and twice on each pair edge.
pub fn oct_boundary(k: usize) -> [ArcStep; 8] {
    let [[a, b], [c, d]] = QUAD_PAIRS[k - 1];
    [
        ArcStep { face: c, cut: a, from: b, to: d },
        ArcStep { face: b, cut: d, from: a, to: c },
        ArcStep { face: a, cut: d, from: c, to: b },
        ArcStep { face: c, cut: b, from: d, to: a },
        ArcStep { face: d, cut: b, from: a, to: c },
        ArcStep { face: a, cut: c, from: b, to: d },
        ArcStep { face: b, cut: c, from: d, to: a },
        ArcStep { face: d, cut: a, from: c, to: b },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perm_roundtrip_and_group_laws() {
        for p in Perm4::all() {
            assert_eq!(p.then(&p.inverse()), Perm4::IDENTITY);
            assert_eq!(p.inverse().then(&p), Perm4::IDENTITY);
            let s = p.to_string();
            assert_eq!(s.parse::<Perm4>().unwrap(), p);
        }
        assert_eq!(Perm4::all().len(), 24);
    }

    #[test]
    fn parity_of_transpositions() {
        assert!(Perm4::transposition(0, 1).is_odd());
        assert!(!Perm4::IDENTITY.is_odd());
        assert!(!Perm4::transposition(0, 1).then(&Perm4::transposition(2, 3)).is_odd());
    }

    #[test]
    fn composition_is_left_to_right() {
        let a = Perm4::transposition(0, 1);
        let b = Perm4::transposition(1, 2);
        // b(a(0)) = b(1) = 2
        assert_eq!(a.then(&b).apply(0), 2);
    }

    #[test]
    fn pair_type_table() {
        assert_eq!(pair_type(0, 1), 1);
        assert_eq!(pair_type(2, 3), 1);
        assert_eq!(pair_type(0, 2), 2);
        assert_eq!(pair_type(1, 3), 2);
        assert_eq!(pair_type(0, 3), 3);
        assert_eq!(pair_type(1, 2), 3);
        for k in 1..=3 {
            for v in 0..4 {
                assert_eq!(pair_type(v, pair_partner(k, v)), k);
                assert!(!quad_separates(k, v, pair_partner(k, v)));
            }
        }
    }

    /// Every disk boundary table must chain: the end edge of one arc is the
    /// start edge of the next, all arcs stay inside their face, and corner
    /// multiplicities per edge match the disk geometry.
    fn check_cycle(steps: &[ArcStep]) {
        for s in steps {
            assert!(s.cut != s.face && s.from != s.face && s.to != s.face);
            assert!(s.from != s.cut && s.to != s.cut && s.from != s.to);
        }
        for (i, s) in steps.iter().enumerate() {
            let n = &steps[(i + 1) % steps.len()];
            let end = [s.cut.min(s.to), s.cut.max(s.to)];
            let start = [n.cut.min(n.from), n.cut.max(n.from)];
            assert_eq!(end, start, "arc {i} does not chain");
        }
    }

    #[test]
    fn tri_boundary_chains() {
        for v in 0..4 {
            let steps = tri_boundary(v);
            check_cycle(&steps);
            for s in &steps {
                assert_eq!(s.cut, v);
            }
        }
    }

    #[test]
    fn quad_boundary_chains_and_hits_cross_edges() {
        for k in 1..=3 {
            let steps = quad_boundary(k);
            check_cycle(&steps);
            let mut faces: Vec<usize> = steps.iter().map(|s| s.face).collect();
            faces.sort();
            assert_eq!(faces, vec![0, 1, 2, 3]);
            for s in &steps {
                // The arc in face f cuts off the partner of f.
                assert_eq!(s.cut, pair_partner(k, s.face));
                // Corners are on cross edges only.
                assert!(quad_separates(k, s.cut, s.from));
                assert!(quad_separates(k, s.cut, s.to));
            }
        }
    }

    #[test]
    fn oct_boundary_chains_with_pair_edges_twice() {
        for k in 1..=3 {
            let steps = oct_boundary(k);
            check_cycle(&steps);
            let mut per_face = [0; 4];
            for s in &steps {
                per_face[s.face] += 1;
                // Arc cuts a vertex in the pair opposite its face.
                assert!(quad_separates(k, s.cut, s.face));
            }
            assert_eq!(per_face, [2, 2, 2, 2]);
            // Corner multiplicity per edge: 1 on cross edges, 2 on pair edges.
            let mut per_edge = [0usize; 6];
            for s in &steps {
                per_edge[edge_index(s.cut, s.to)] += 1;
            }
            for &[u, v] in &EDGE_VERTS {
                let expect = if quad_separates(k, u, v) { 1 } else { 2 };
                assert_eq!(per_edge[edge_index(u, v)], expect, "edge {u}{v} type {k}");
            }
        }
    }
}
