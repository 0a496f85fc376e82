//! Geometric reconstruction of a normal surface from its coordinate vector.
//!
//! This is the slow, explicit counterpart to the linear formulas in
//! `normal`: every disk copy becomes a polygon, every normal arc an edge,
//! every point on a 1-skeleton edge a vertex, and Euler characteristic,
//! orientability, connectedness and closedness are read off the assembled
//! complex. The two routes are kept independent on purpose; tests compare
//! them.
//!
//! Stacking convention: the disks inside a tetrahedron are parallel, so the
//! m-th arc counted from vertex `v` in a face has its endpoints at the m-th
//! points counted from `v` on the two edges at `v`. Triangle copy c of type
//! `v` uses rank c from `v`; quad and octagon copies are ordered so copy 1
//! is nearest the first pair of their type, giving rank T_cut + c from a cut
//! vertex in the first pair and T_cut + (n+1-c) from one in the second.

use crate::error::SurfaceError;
use crate::geom::{
    edge_index, face_vertices, oct_boundary, pair_side, pair_type, quad_boundary,
    quad_separates, tri_boundary, ArcStep, EDGE_VERTS,
};
use crate::normal::{is_admissible, NormalVector};
use crate::tri::{Skeleton, Triangulation};
use crate::util::{SignedUnionFind, UnionFind};
use num_traits::{ToPrimitive, Zero};

/// A polygon complex: polygons reference directed edges, edges reference
/// vertices. The complex may have boundary (edges used once).
#[derive(Clone, Debug, Default)]
pub struct PolyComplex {
    pub vertex_count: usize,
    /// Edge id -> (tail, head). Loops (tail == head) are allowed.
    pub edge_endpoints: Vec<(usize, usize)>,
    /// Each polygon is a cyclic list of (edge id, traversed forward).
    pub polygons: Vec<Vec<(usize, bool)>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentStats {
    pub polygons: usize,
    pub chi: i64,
    pub orientable: bool,
    pub boundary_circles: usize,
}

impl ComponentStats {
    pub fn is_sphere(&self) -> bool {
        self.chi == 2 && self.orientable && self.boundary_circles == 0
    }
}

impl PolyComplex {
    fn tail_head(&self, edge: usize, forward: bool) -> (usize, usize) {
        let (t, h) = self.edge_endpoints[edge];
        if forward {
            (t, h)
        } else {
            (h, t)
        }
    }

    /// (polygon, forward) pairs per edge.
    pub fn edge_incidences(&self) -> Vec<Vec<(usize, bool)>> {
        let mut inc = vec![Vec::new(); self.edge_endpoints.len()];
        for (p, poly) in self.polygons.iter().enumerate() {
            for &(e, fwd) in poly {
                inc[e].push((p, fwd));
            }
        }
        inc
    }

    /// Structural checks: edge references in range, polygons chain head to
    /// tail, each edge used once or twice, no unused edges or vertices.
    pub fn validate(&self) -> Result<(), String> {
        for (p, poly) in self.polygons.iter().enumerate() {
            if poly.is_empty() {
                return Err(format!("polygon {p} is empty"));
            }
            for (s, &(e, fwd)) in poly.iter().enumerate() {
                if e >= self.edge_endpoints.len() {
                    return Err(format!("polygon {p} references missing edge {e}"));
                }
                let (_, head) = self.tail_head(e, fwd);
                let &(e2, fwd2) = &poly[(s + 1) % poly.len()];
                let (tail2, _) = self.tail_head(e2, fwd2);
                if head != tail2 {
                    return Err(format!("polygon {p} breaks between sides {s} and next"));
                }
            }
        }
        let mut vertex_used = vec![false; self.vertex_count];
        for &(t, h) in &self.edge_endpoints {
            if t >= self.vertex_count || h >= self.vertex_count {
                return Err("edge endpoint out of range".into());
            }
            vertex_used[t] = true;
            vertex_used[h] = true;
        }
        if vertex_used.iter().any(|u| !u) {
            return Err("isolated vertex".into());
        }
        for (e, inc) in self.edge_incidences().iter().enumerate() {
            if inc.is_empty() || inc.len() > 2 {
                return Err(format!("edge {e} has {} incidences", inc.len()));
            }
        }
        Ok(())
    }

    pub fn is_closed(&self) -> bool {
        self.edge_incidences().iter().all(|inc| inc.len() == 2)
    }

    /// Component label of every polygon (dense, in first-appearance order,
    /// matching the ordering of `component_stats`) and the component count.
    pub fn polygon_components(&self) -> (Vec<usize>, usize) {
        let mut uf = UnionFind::new(self.polygons.len());
        for pairs in &self.edge_incidences() {
            if pairs.len() == 2 {
                uf.union(pairs[0].0, pairs[1].0);
            }
        }
        let labels = uf.labels();
        let count = uf.class_count();
        (labels, count)
    }

    /// Per-component counts. Fails when a vertex or edge is shared between
    /// two components (a pinch; never happens for embedded normal surfaces)
    /// or the complex is not a surface with boundary.
    pub fn component_stats(&self) -> Result<Vec<ComponentStats>, String> {
        self.validate()?;
        let np = self.polygons.len();
        if np == 0 {
            return Ok(Vec::new());
        }
        let inc = self.edge_incidences();

        let mut uf = UnionFind::new(np);
        for pairs in &inc {
            if pairs.len() == 2 {
                uf.union(pairs[0].0, pairs[1].0);
            }
        }
        let comp_of_poly = uf.labels();
        let ncomp = uf.class_count();

        // Assign edges and vertices to components, rejecting pinches.
        let mut comp_of_edge = vec![usize::MAX; self.edge_endpoints.len()];
        for (e, pairs) in inc.iter().enumerate() {
            for &(p, _) in pairs {
                let c = comp_of_poly[p];
                if comp_of_edge[e] == usize::MAX {
                    comp_of_edge[e] = c;
                } else if comp_of_edge[e] != c {
                    return Err(format!("edge {e} is shared between components"));
                }
            }
        }
        let mut comp_of_vertex = vec![usize::MAX; self.vertex_count];
        for (e, &(t, h)) in self.edge_endpoints.iter().enumerate() {
            for v in [t, h] {
                if comp_of_vertex[v] == usize::MAX {
                    comp_of_vertex[v] = comp_of_edge[e];
                } else if comp_of_vertex[v] != comp_of_edge[e] {
                    return Err(format!("vertex {v} is pinched between components"));
                }
            }
        }

        // Orientability: polygons get +-1; an interior edge traversed in
        // opposite directions by its two sides links them with equal signs.
        let mut suf = SignedUnionFind::new(np);
        let mut bad = vec![false; ncomp];
        for pairs in &inc {
            if let [(p, dp), (q, dq)] = pairs[..] {
                let s = u8::from(dp == dq);
                if suf.union_signed(p, q, s).is_err() {
                    bad[comp_of_poly[p]] = true;
                }
            }
        }

        // Boundary circles: boundary edges must chain through vertices of
        // boundary degree exactly 2.
        let mut boundary_deg = vec![0usize; self.vertex_count];
        let mut buf = UnionFind::new(self.vertex_count);
        let mut boundary_edges = vec![0usize; ncomp];
        for (e, pairs) in inc.iter().enumerate() {
            if pairs.len() == 1 {
                let (t, h) = self.edge_endpoints[e];
                boundary_deg[t] += 1;
                boundary_deg[h] += 1;
                buf.union(t, h);
                boundary_edges[comp_of_edge[e]] += 1;
            }
        }
        for v in 0..self.vertex_count {
            if boundary_deg[v] != 0 && boundary_deg[v] != 2 {
                return Err(format!(
                    "vertex {v} has boundary degree {}; not a surface",
                    boundary_deg[v]
                ));
            }
        }
        let mut circle_seen = std::collections::HashSet::new();
        let mut circles = vec![0usize; ncomp];
        for v in 0..self.vertex_count {
            if boundary_deg[v] == 2 {
                let root = buf.find(v);
                if circle_seen.insert(root) {
                    circles[comp_of_vertex[v]] += 1;
                }
            }
        }

        let mut stats: Vec<ComponentStats> = (0..ncomp)
            .map(|c| ComponentStats {
                polygons: 0,
                chi: 0,
                orientable: !bad[c],
                boundary_circles: circles[c],
            })
            .collect();
        for p in 0..np {
            stats[comp_of_poly[p]].polygons += 1;
            stats[comp_of_poly[p]].chi += 1;
        }
        for &c in &comp_of_edge {
            stats[c].chi -= 1;
        }
        for &c in &comp_of_vertex {
            stats[c].chi += 1;
        }
        Ok(stats)
    }
}

/// Identity of one disk copy in the reconstruction, for diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiskRef {
    Tri { tet: usize, vertex: usize, copy: usize },
    Quad { tet: usize, kind: usize, copy: usize },
    Oct { tet: usize, kind: usize, copy: usize },
}

#[derive(Clone, Debug)]
pub struct ReconstructedSurface {
    pub complex: PolyComplex,
    pub disks: Vec<DiskRef>,
    /// Component index (into `components`) of each entry of `disks`.
    pub component_of_disk: Vec<usize>,
    pub components: Vec<ComponentStats>,
    pub total_chi: i64,
    /// Total polygon corner count (= 3T + 4Q + 8O).
    pub weight: u64,
    /// Number of intersection points with the 1-skeleton.
    pub skeleton_points: usize,
}

impl ReconstructedSurface {
    pub fn is_connected_sphere(&self) -> bool {
        self.components.len() == 1 && self.components[0].is_sphere()
    }

    /// Coordinate vector of one connected component: the disk counts of the
    /// polygons carrying that component's label.
    pub fn component_vector(&self, tets: usize, comp: usize) -> NormalVector {
        use num_bigint::BigInt;
        use num_traits::One;
        let mut x = NormalVector::zero(tets);
        for (disk, &c) in self.disks.iter().zip(&self.component_of_disk) {
            if c != comp {
                continue;
            }
            match *disk {
                DiskRef::Tri { tet, vertex, .. } => {
                    x.coords[crate::normal::tri_col(tet, vertex)] += 1;
                }
                DiskRef::Quad { tet, kind, .. } => {
                    x.coords[crate::normal::quad_col(tet, kind)] += 1;
                }
                DiskRef::Oct { tet, kind, .. } => match &mut x.oct {
                    Some(slot) => {
                        debug_assert_eq!((slot.tet, slot.kind), (tet, kind));
                        slot.count += 1;
                    }
                    None => {
                        x.oct = Some(crate::normal::OctSlot {
                            tet,
                            kind,
                            count: BigInt::one(),
                        });
                    }
                },
            }
        }
        x
    }
}

struct Counts {
    tri: Vec<[usize; 4]>,
    quad: Vec<[usize; 4]>, // indexed by type 1..=3; [0] unused
    oct: Option<(usize, usize, usize)>,
}

fn extract_counts(x: &NormalVector) -> Result<Counts, SurfaceError> {
    let big = |b: &num_bigint::BigInt| -> Result<usize, SurfaceError> {
        b.to_usize()
            .ok_or_else(|| SurfaceError::Degenerate("disk count exceeds addressable size".into()))
    };
    let t = x.tets();
    let mut tri = vec![[0usize; 4]; t];
    let mut quad = vec![[0usize; 4]; t];
    for i in 0..t {
        for v in 0..4 {
            tri[i][v] = big(x.tri(i, v))?;
        }
        for k in 1..=3 {
            quad[i][k] = big(x.quad(i, k))?;
        }
    }
    let oct = match &x.oct {
        Some(o) if !o.count.is_zero() => Some((o.tet, o.kind, big(&o.count)?)),
        _ => None,
    };
    Ok(Counts { tri, quad, oct })
}

/// Builds the polygon complex of the normal surface with vector `x`.
///
/// Along the way this independently re-derives the matching conditions: edge
/// weights and arc counts must agree across every face gluing, and every arc
/// must be used by exactly two disk sides.
pub fn reconstruct(
    tri: &Triangulation,
    skel: &Skeleton,
    x: &NormalVector,
) -> Result<ReconstructedSurface, SurfaceError> {
    let adm = is_admissible(tri, skel, x)
        .map_err(|e| SurfaceError::NotAdmissible(e.to_string()))?;
    if !adm.ok() {
        return Err(SurfaceError::NotAdmissible(adm.failures.join("; ")));
    }
    let t = tri.tet_count();
    let counts = extract_counts(x)?;

    // Points per edge slot.
    let mid = |i: usize, u: usize, w: usize| -> usize {
        let mut m = 0;
        for k in 1..=3 {
            if quad_separates(k, u, w) {
                m += counts.quad[i][k];
            }
        }
        if let Some((l, k, o)) = counts.oct {
            if l == i {
                m += if quad_separates(k, u, w) { o } else { 2 * o };
            }
        }
        m
    };
    let mut w_table = vec![0usize; 6 * t];
    for i in 0..t {
        for (e, &[u, w]) in EDGE_VERTS.iter().enumerate() {
            w_table[6 * i + e] = counts.tri[i][u] + counts.tri[i][w] + mid(i, u, w);
        }
    }
    let mut offsets = vec![0usize; 6 * t + 1];
    for s in 0..6 * t {
        offsets[s + 1] = offsets[s] + w_table[s];
    }
    let total_points = offsets[6 * t];

    // rank r from u on edge {u, w} of tet i -> raw point index
    let point = |i: usize, u: usize, w: usize, r: usize| -> usize {
        let e = edge_index(u, w);
        let wt = w_table[6 * i + e];
        debug_assert!(r >= 1 && r <= wt);
        let idx = if u < w { r } else { wt + 1 - r };
        offsets[6 * i + e] + idx - 1
    };

    // Identify points across face gluings: rank from a vertex is preserved.
    let mut uf = UnionFind::new(total_points.max(1));
    for pair in &skel.face_pairs {
        let (i, f) = pair.rep;
        let (j, _) = pair.other;
        let verts = face_vertices(f);
        for a in 0..3 {
            for b in (a + 1)..3 {
                let (u, w) = (verts[a], verts[b]);
                let (su, sw) = (pair.perm.apply(u), pair.perm.apply(w));
                let wt = w_table[6 * i + edge_index(u, w)];
                let wt_other = w_table[6 * j + edge_index(su, sw)];
                if wt != wt_other {
                    return Err(SurfaceError::WeightMismatch {
                        tet: i,
                        face: f,
                        left: wt.to_string(),
                        right: wt_other.to_string(),
                    });
                }
                for r in 1..=wt {
                    uf.union(point(i, u, w, r), point(j, su, sw, r));
                }
            }
        }
    }
    let labels = uf.labels();
    let vertex_count = if total_points == 0 { 0 } else { uf.class_count() };

    // Arc entities per face class: count per cut vertex must agree on both
    // sides (this is the matching condition, re-derived).
    let arcs_from = |i: usize, f: usize, v: usize| -> usize {
        let mut n = counts.tri[i][v] + counts.quad[i][pair_type(v, f)];
        if let Some((l, k, o)) = counts.oct {
            if l == i && quad_separates(k, v, f) {
                n += o;
            }
        }
        n
    };
    let nfc = skel.face_pairs.len();
    let mut arc_count = vec![[0usize; 3]; nfc];
    let mut arc_offset = vec![[0usize; 3]; nfc];
    let mut next_edge = 0usize;
    for (fc, pair) in skel.face_pairs.iter().enumerate() {
        let (i, f) = pair.rep;
        let (j, g) = pair.other;
        for (pos, v) in face_vertices(f).into_iter().enumerate() {
            let n = arcs_from(i, f, v);
            let n_other = arcs_from(j, g, pair.perm.apply(v));
            if n != n_other {
                return Err(SurfaceError::Degenerate(format!(
                    "arc counts differ across face class {fc}: {n} vs {n_other}"
                )));
            }
            arc_count[fc][pos] = n;
            arc_offset[fc][pos] = next_edge;
            next_edge += n;
        }
    }

    // Edge endpoints from the representative side.
    let mut edge_endpoints = vec![(0usize, 0usize); next_edge];
    for (fc, pair) in skel.face_pairs.iter().enumerate() {
        let (i, f) = pair.rep;
        for (pos, v) in face_vertices(f).into_iter().enumerate() {
            let others: Vec<usize> = face_vertices(f).into_iter().filter(|&u| u != v).collect();
            let (xl, yl) = (others[0], others[1]); // ascending
            for m in 1..=arc_count[fc][pos] {
                edge_endpoints[arc_offset[fc][pos] + m - 1] = (
                    labels[point(i, v, xl, m)],
                    labels[point(i, v, yl, m)],
                );
            }
        }
    }

    // Assemble polygons disk by disk.
    let mut polygons: Vec<Vec<(usize, bool)>> = Vec::new();
    let mut disks: Vec<DiskRef> = Vec::new();
    let mut edge_use = vec![0usize; next_edge];
    let mut weight: u64 = 0;

    let mut emit = |i: usize,
                    steps: &[ArcStep],
                    rank_of: &dyn Fn(&ArcStep) -> usize,
                    disk: DiskRef|
     -> Result<(), SurfaceError> {
        let mut poly = Vec::with_capacity(steps.len());
        let mut corner_chain: Vec<(usize, usize)> = Vec::new();
        for step in steps {
            let m = rank_of(step);
            let fc = skel.face_class[4 * i + step.face];
            let pair = &skel.face_pairs[fc];
            let (cut_rep, from_rep, to_rep) = if pair.rep == (i, step.face) {
                (step.cut, step.from, step.to)
            } else {
                debug_assert_eq!(pair.other, (i, step.face));
                let inv = pair.perm.inverse();
                (inv.apply(step.cut), inv.apply(step.from), inv.apply(step.to))
            };
            let pos = face_vertices(pair.rep.1)
                .into_iter()
                .position(|v| v == cut_rep)
                .expect("cut vertex lies in the face");
            if m < 1 || m > arc_count[fc][pos] {
                return Err(SurfaceError::Degenerate(format!(
                    "arc rank {m} outside 1..={} in face class {fc}",
                    arc_count[fc][pos]
                )));
            }
            let edge = arc_offset[fc][pos] + m - 1;
            let forward = from_rep < to_rep;
            let from_corner = labels[point(i, step.cut, step.from, m)];
            let to_corner = labels[point(i, step.cut, step.to, m)];
            let expect = edge_endpoints[edge];
            let got = if forward {
                (from_corner, to_corner)
            } else {
                (to_corner, from_corner)
            };
            if expect != got {
                return Err(SurfaceError::Degenerate(format!(
                    "arc endpoints disagree across gluing at edge {edge}: {expect:?} vs {got:?}"
                )));
            }
            poly.push((edge, forward));
            edge_use[edge] += 1;
            corner_chain.push((from_corner, to_corner));
        }
        for (s, &(_, to)) in corner_chain.iter().enumerate() {
            let (next_from, _) = corner_chain[(s + 1) % corner_chain.len()];
            if to != next_from {
                return Err(SurfaceError::Degenerate(format!(
                    "disk boundary does not chain at side {s}"
                )));
            }
        }
        weight += steps.len() as u64;
        polygons.push(poly);
        disks.push(disk);
        Ok(())
    };

    for i in 0..t {
        let tric = counts.tri[i];
        for v in 0..4 {
            for c in 1..=tric[v] {
                emit(
                    i,
                    &tri_boundary(v),
                    &|_| c,
                    DiskRef::Tri { tet: i, vertex: v, copy: c },
                )?;
            }
        }
        for k in 1..=3 {
            let q = counts.quad[i][k];
            for c in 1..=q {
                let rank = move |s: &ArcStep| {
                    tric[s.cut] + if pair_side(k, s.cut) == 0 { c } else { q + 1 - c }
                };
                emit(i, &quad_boundary(k), &rank, DiskRef::Quad { tet: i, kind: k, copy: c })?;
            }
        }
        if let Some((l, k, o)) = counts.oct {
            if l == i {
                for c in 1..=o {
                    let rank = move |s: &ArcStep| {
                        tric[s.cut] + if pair_side(k, s.cut) == 0 { c } else { o + 1 - c }
                    };
                    emit(i, &oct_boundary(k), &rank, DiskRef::Oct { tet: i, kind: k, copy: c })?;
                }
            }
        }
    }

    if let Some(e) = edge_use.iter().position(|&u| u != 2) {
        return Err(SurfaceError::Degenerate(format!(
            "normal arc {e} is used by {} disk sides, expected 2",
            edge_use[e]
        )));
    }

    let complex = PolyComplex { vertex_count, edge_endpoints, polygons };
    let components = complex.component_stats().map_err(SurfaceError::Degenerate)?;
    if !complex.is_closed() {
        return Err(SurfaceError::Degenerate(
            "reconstructed surface has boundary".into(),
        ));
    }
    let (component_of_disk, ncomp) = complex.polygon_components();
    debug_assert_eq!(ncomp, components.len());
    let total_chi = components.iter().map(|c| c.chi).sum();
    Ok(ReconstructedSurface {
        complex,
        disks,
        component_of_disk,
        components,
        total_chi,
        weight,
        skeleton_points: vertex_count,
    })
}
