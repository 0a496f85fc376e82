//! Normal surface coordinates: vectors of triangle/quad counts, the matching
//! equations (optionally extended by a single octagon column), admissibility,
//! the linear Euler characteristic functional, and Haken sums.
//!
//! Coordinate layout: tetrahedron `i` owns the 7 entries starting at `7 i`,
//! ordered T0 T1 T2 T3 Q1 Q2 Q3. An octagon slot, when present, names one
//! tetrahedron and one quad type and occupies a single extra column.

use crate::error::NormalError;
use crate::geom::{face_vertices, pair_type, quad_separates, EDGE_VERTS};
use crate::tri::{Skeleton, Triangulation};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

pub fn tri_col(tet: usize, v: usize) -> usize {
    7 * tet + v
}

pub fn quad_col(tet: usize, k: usize) -> usize {
    debug_assert!((1..=3).contains(&k));
    7 * tet + 3 + k
}

/// At most one octagon type may be carried, in one tetrahedron.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OctSlot {
    pub tet: usize,
    pub kind: usize,
    pub count: BigInt,
}

#[derive(Clone, PartialEq, Eq)]
pub struct NormalVector {
    pub coords: Vec<BigInt>,
    pub oct: Option<OctSlot>,
}

impl NormalVector {
    pub fn zero(tets: usize) -> NormalVector {
        NormalVector { coords: vec![BigInt::zero(); 7 * tets], oct: None }
    }

    pub fn tets(&self) -> usize {
        self.coords.len() / 7
    }

    pub fn tri(&self, tet: usize, v: usize) -> &BigInt {
        &self.coords[tri_col(tet, v)]
    }

    pub fn quad(&self, tet: usize, k: usize) -> &BigInt {
        &self.coords[quad_col(tet, k)]
    }

    /// Octagon count, zero when no slot is present.
    pub fn oct_count(&self) -> BigInt {
        self.oct.as_ref().map(|o| o.count.clone()).unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero()) && self.oct_count().is_zero()
    }

    pub fn scaled(&self, k: &BigInt) -> NormalVector {
        NormalVector {
            coords: self.coords.iter().map(|c| c * k).collect(),
            oct: self.oct.as_ref().map(|o| OctSlot {
                tet: o.tet,
                kind: o.kind,
                count: &o.count * k,
            }),
        }
    }

    pub fn doubled(&self) -> NormalVector {
        self.scaled(&BigInt::from(2))
    }

    /// Total corner count: 3 per triangle, 4 per quad, 8 per octagon.
    pub fn weight(&self) -> BigInt {
        let mut w = BigInt::zero();
        for tet in 0..self.tets() {
            for v in 0..4 {
                w += 3 * self.tri(tet, v);
            }
            for k in 1..=3 {
                w += 4 * self.quad(tet, k);
            }
        }
        w + 8 * self.oct_count()
    }

    pub fn quad_total(&self) -> BigInt {
        let mut q = BigInt::zero();
        for tet in 0..self.tets() {
            for k in 1..=3 {
                q += self.quad(tet, k);
            }
        }
        q
    }

    /// Number of tetrahedra carrying at least one quad.
    pub fn quad_tet_count(&self) -> usize {
        (0..self.tets())
            .filter(|&tet| (1..=3).any(|k| !self.quad(tet, k).is_zero()))
            .count()
    }

    /// Comma-separated coordinates, with an octagon suffix when present.
    pub fn serialize(&self) -> String {
        let body = self
            .coords
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",");
        match &self.oct {
            Some(o) if !o.count.is_zero() => {
                format!("{body};oct {} {} {}", o.tet, o.kind, o.count)
            }
            _ => body,
        }
    }

    pub fn parse(text: &str) -> Result<NormalVector, NormalError> {
        let (body, oct_part) = match text.split_once(';') {
            Some((b, o)) => (b.trim(), Some(o.trim())),
            None => (text.trim(), None),
        };
        let coords: Vec<BigInt> = body
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<BigInt>()
                    .map_err(|_| NormalError::Parse { msg: format!("bad integer `{}`", s.trim()) })
            })
            .collect::<Result<_, _>>()?;
        if coords.len() % 7 != 0 {
            return Err(NormalError::Parse {
                msg: format!("{} coordinates is not a multiple of 7", coords.len()),
            });
        }
        let oct = match oct_part {
            None => None,
            Some(o) => {
                let parts: Vec<&str> = o.split_whitespace().collect();
                if parts.len() != 4 || parts[0] != "oct" {
                    return Err(NormalError::Parse {
                        msg: format!("bad octagon suffix `{o}`"),
                    });
                }
                let nums: Vec<BigInt> = parts[1..]
                    .iter()
                    .map(|s| {
                        s.parse::<BigInt>()
                            .map_err(|_| NormalError::Parse { msg: format!("bad integer `{s}`") })
                    })
                    .collect::<Result<_, _>>()?;
                use num_traits::ToPrimitive;
                Some(OctSlot {
                    tet: nums[0].to_usize().ok_or(NormalError::Parse {
                        msg: "octagon tetrahedron index out of range".into(),
                    })?,
                    kind: nums[1].to_usize().ok_or(NormalError::Parse {
                        msg: "octagon type out of range".into(),
                    })?,
                    count: nums[2].clone(),
                })
            }
        };
        Ok(NormalVector { coords, oct })
    }
}

// Debug prints the serialized form; handy in assertion failures.
impl fmt::Debug for NormalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.serialize())
    }
}

/// One matching equation: four signed unit entries over the 7t coordinates
/// (columns may repeat when a face is glued to the same tetrahedron), plus an
/// octagon coefficient in -1..=1 when the system carries an octagon column.
#[derive(Clone, Debug)]
pub struct MatchRow {
    pub plus: [usize; 2],
    pub minus: [usize; 2],
    pub oct: i8,
}

/// The matching equations of a triangulation: 6t rows, one per (face class,
/// arc type) pair.
#[derive(Clone, Debug)]
pub struct MatchingSystem {
    pub rows: Vec<MatchRow>,
    pub tets: usize,
    /// (tetrahedron, quad type) of the octagon column, if extended.
    pub oct_slot: Option<(usize, usize)>,
}

impl MatchingSystem {
    pub fn new(tri: &Triangulation, skel: &Skeleton) -> MatchingSystem {
        Self::with_octagon(tri, skel, None)
    }

    /// Extended system with one octagon column for the given (tet, type).
    pub fn with_octagon(
        _tri: &Triangulation,
        skel: &Skeleton,
        oct_slot: Option<(usize, usize)>,
    ) -> MatchingSystem {
        let mut rows = Vec::with_capacity(6 * skel.face_pairs.len() / 2);
        for pair in &skel.face_pairs {
            let (i, f) = pair.rep;
            let (j, g) = pair.other;
            for v in face_vertices(f) {
                let sv = pair.perm.apply(v);
                let mut oct = 0i8;
                if let Some((l, k)) = oct_slot {
                    if i == l && quad_separates(k, v, f) {
                        oct += 1;
                    }
                    if j == l && quad_separates(k, sv, g) {
                        oct -= 1;
                    }
                }
                rows.push(MatchRow {
                    plus: [tri_col(i, v), quad_col(i, pair_type(v, f))],
                    minus: [tri_col(j, sv), quad_col(j, pair_type(sv, g))],
                    oct,
                });
            }
        }
        MatchingSystem { rows, tets: skel.face_pairs.len() / 2, oct_slot }
    }

    /// Number of columns: 7t, plus one when the octagon slot is present.
    pub fn cols(&self) -> usize {
        7 * self.tets + usize::from(self.oct_slot.is_some())
    }

    /// Rows as sparse (column, coefficient) lists with repeated columns
    /// merged; combined coefficients can reach magnitude 2.
    pub fn sparse_rows(&self) -> Vec<Vec<(usize, i64)>> {
        let oct_col = 7 * self.tets;
        self.rows
            .iter()
            .map(|row| {
                let mut entries: Vec<(usize, i64)> = Vec::with_capacity(5);
                let mut add = |col: usize, c: i64| {
                    if let Some(e) = entries.iter_mut().find(|e| e.0 == col) {
                        e.1 += c;
                    } else {
                        entries.push((col, c));
                    }
                };
                for &c in &row.plus {
                    add(c, 1);
                }
                for &c in &row.minus {
                    add(c, -1);
                }
                if row.oct != 0 {
                    add(oct_col, row.oct as i64);
                }
                entries.retain(|e| e.1 != 0);
                entries.sort();
                entries
            })
            .collect()
    }

    /// Residual of every row at `x`; all zeros iff `x` satisfies matching.
    pub fn residual(&self, x: &NormalVector) -> Result<Vec<BigInt>, NormalError> {
        if x.coords.len() != 7 * self.tets {
            return Err(NormalError::LengthMismatch {
                expected: 7 * self.tets,
                got: x.coords.len(),
            });
        }
        let oct_count = match (&x.oct, self.oct_slot) {
            (None, _) => BigInt::zero(),
            (Some(o), _) if o.count.is_zero() => BigInt::zero(),
            (Some(o), Some((l, k))) if o.tet == l && o.kind == k => o.count.clone(),
            (Some(_), _) => {
                return Err(NormalError::BadOctagon {
                    msg: "vector carries an octagon the system was not built for".into(),
                })
            }
        };
        Ok(self
            .rows
            .iter()
            .map(|row| {
                let mut r = BigInt::zero();
                for &c in &row.plus {
                    r += &x.coords[c];
                }
                for &c in &row.minus {
                    r -= &x.coords[c];
                }
                if row.oct != 0 {
                    r += row.oct * &oct_count;
                }
                r
            })
            .collect())
    }
}

/// Admissibility diagnosis; `ok` is true iff `failures` is empty.
#[derive(Clone, Debug)]
pub struct Admissibility {
    pub failures: Vec<String>,
}

impl Admissibility {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks nonnegativity, the one-quad-type-per-tetrahedron rule, octagon
/// consistency (valid slot, no quads in the octagon's tetrahedron), and the
/// matching equations.
pub fn is_admissible(
    tri: &Triangulation,
    skel: &Skeleton,
    x: &NormalVector,
) -> Result<Admissibility, NormalError> {
    let t = tri.tet_count();
    if x.coords.len() != 7 * t {
        return Err(NormalError::LengthMismatch { expected: 7 * t, got: x.coords.len() });
    }
    let mut failures = Vec::new();
    for (idx, c) in x.coords.iter().enumerate() {
        if c.is_negative() {
            failures.push(format!("coordinate {idx} is negative"));
        }
    }
    for tet in 0..t {
        let live: Vec<usize> = (1..=3).filter(|&k| !x.quad(tet, k).is_zero()).collect();
        if live.len() > 1 {
            failures.push(format!(
                "tetrahedron {tet} carries quad types {live:?} simultaneously"
            ));
        }
    }
    let mut oct_slot = None;
    if let Some(o) = &x.oct {
        if o.count.is_negative() {
            failures.push("octagon count is negative".into());
        }
        if o.tet >= t || !(1..=3).contains(&o.kind) {
            return Err(NormalError::BadOctagon {
                msg: format!("slot ({}, {}) out of range for {t} tetrahedra", o.tet, o.kind),
            });
        }
        if !o.count.is_zero() {
            oct_slot = Some((o.tet, o.kind));
            if (1..=3).any(|k| !x.quad(o.tet, k).is_zero()) {
                failures.push(format!(
                    "tetrahedron {} carries both quads and octagons",
                    o.tet
                ));
            }
        }
    }
    let system = MatchingSystem::with_octagon(tri, skel, oct_slot);
    let res = system.residual(x)?;
    for (r, val) in res.iter().enumerate() {
        if !val.is_zero() {
            failures.push(format!("matching equation {r} has residual {val}"));
            break;
        }
    }
    Ok(Admissibility { failures })
}

/// The normal vector of the link of a vertex class: one triangle per corner
/// of the class, no quads.
pub fn vertex_link(skel: &Skeleton, class: usize) -> NormalVector {
    let tets = skel.vertex_class.len() / 4;
    let mut x = NormalVector::zero(tets);
    for &(i, v) in &skel.vertex_members[class] {
        x.coords[tri_col(i, v)] += BigInt::one();
    }
    x
}

/// Per-column coefficients of the Euler characteristic functional: a disk
/// contributes 1 for its face, -1/2 per side, and 1/deg per corner, where deg
/// is the degree of the edge class met by that corner. Summed per disk type:
/// triangles get sum(1/d) - 1/2, quads sum(1/d) - 1, octagons sum(1/d) - 3
/// (their two corners on each pair edge count that edge twice).
pub fn chi_coefficients(
    skel: &Skeleton,
    oct_slot: Option<(usize, usize)>,
) -> Vec<BigRational> {
    let tets = skel.vertex_class.len() / 4;
    let inv_deg = |i: usize, u: usize, w: usize| {
        BigRational::new(BigInt::one(), BigInt::from(skel.degree_at(i, u, w)))
    };
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut coeffs = Vec::with_capacity(7 * tets + usize::from(oct_slot.is_some()));
    for i in 0..tets {
        for v in 0..4 {
            let mut c = -&half;
            for w in 0..4 {
                if w != v {
                    c += inv_deg(i, v, w);
                }
            }
            coeffs.push(c);
        }
        for k in 1..=3 {
            let mut c = -BigRational::one();
            for &[u, w] in &EDGE_VERTS {
                if quad_separates(k, u, w) {
                    c += inv_deg(i, u, w);
                }
            }
            coeffs.push(c);
        }
    }
    if let Some((l, k)) = oct_slot {
        let mut c = BigRational::from(BigInt::from(-3));
        for &[u, w] in &EDGE_VERTS {
            if quad_separates(k, u, w) {
                c += inv_deg(l, u, w);
            } else {
                c += BigRational::from(BigInt::from(2)) * inv_deg(l, u, w);
            }
        }
        coeffs.push(c);
    }
    coeffs
}

/// Euler characteristic of the normal surface with coordinate vector `x`,
/// evaluated linearly (no reconstruction).
pub fn chi_linear(skel: &Skeleton, x: &NormalVector) -> BigRational {
    let oct_slot = x
        .oct
        .as_ref()
        .filter(|o| !o.count.is_zero())
        .map(|o| (o.tet, o.kind));
    let coeffs = chi_coefficients(skel, oct_slot);
    let mut chi = BigRational::zero();
    for (c, coef) in x.coords.iter().zip(&coeffs) {
        chi += coef * BigRational::from(c.clone());
    }
    if oct_slot.is_some() {
        chi += coeffs.last().unwrap() * BigRational::from(x.oct_count());
    }
    chi
}

/// Coordinatewise sum of compatible vectors. Compatible means their nonzero
/// quad types agree per tetrahedron, and octagon slots (when carried on both
/// sides) name the same tetrahedron and type.
pub fn haken_sum(x: &NormalVector, y: &NormalVector) -> Result<NormalVector, NormalError> {
    if x.coords.len() != y.coords.len() {
        return Err(NormalError::LengthMismatch {
            expected: x.coords.len(),
            got: y.coords.len(),
        });
    }
    for tet in 0..x.tets() {
        for kx in 1..=3 {
            for ky in 1..=3 {
                if kx != ky && !x.quad(tet, kx).is_zero() && !y.quad(tet, ky).is_zero() {
                    return Err(NormalError::IncompatibleSum { tet });
                }
            }
        }
    }
    let oct = match (&x.oct, &y.oct) {
        (None, o) | (o, None) => o.clone(),
        (Some(a), Some(b)) => {
            if a.count.is_zero() {
                Some(b.clone())
            } else if b.count.is_zero() {
                Some(a.clone())
            } else if a.tet == b.tet && a.kind == b.kind {
                Some(OctSlot { tet: a.tet, kind: a.kind, count: &a.count + &b.count })
            } else {
                return Err(NormalError::IncompatibleOctagon);
            }
        }
    };
    if let Some(o) = &oct {
        if !o.count.is_zero() {
            let quads_there = (1..=3).any(|k| {
                !x.quad(o.tet, k).is_zero() || !y.quad(o.tet, k).is_zero()
            });
            if quads_there {
                return Err(NormalError::IncompatibleSum { tet: o.tet });
            }
        }
    }
    Ok(NormalVector {
        coords: x
            .coords
            .iter()
            .zip(&y.coords)
            .map(|(a, b)| a + b)
            .collect(),
        oct,
    })
}
