//! Generalized triangulations of closed orientable 3-manifolds: face-gluing
//! data, the text format, validity checks, and the identified skeleton
//! (vertex / edge / face classes).
//!
//! A triangulation is a list of tetrahedra 0..t, each with four faces; face
//! `f` is opposite vertex `f`. A gluing maps face `f` of tetrahedron `i` to
//! face `p(f)` of tetrahedron `j` via a vertex permutation `p`. Gluings form
//! an involution without fixed faces ("self-glued" means a face glued to
//! itself; gluing two distinct faces of the same tetrahedron is fine).
//! Vertices and edges may be identified arbitrarily, so tetrahedra need not
//! embed; the complex must still be a closed orientable 3-manifold, which for
//! this data is equivalent to: orientable, no edge identified with itself
//! reversed, and Euler characteristic zero.

use crate::error::TriError;
use crate::geom::{edge_index, face_vertices, Perm4, EDGE_VERTS};
use crate::util::UnionFind;

#[derive(Clone, PartialEq, Eq)]
pub struct Triangulation {
    gluings: Vec<[(usize, Perm4); 4]>,
}

/// One face class of the identified skeleton: `perm` carries vertex labels of
/// `rep`'s tetrahedron to `other`'s.
#[derive(Clone, Copy, Debug)]
pub struct FacePair {
    pub rep: (usize, usize),
    pub other: (usize, usize),
    pub perm: Perm4,
}

/// Identified 0-, 1- and 2-skeleton of a triangulation.
///
/// Slot indexing: vertex slot `(i, v)` is `4 i + v`; edge slot `(i, e)` is
/// `6 i + e` with `e` indexing `EDGE_VERTS`; directed edge slot `(i, e, d)`
/// is `12 i + 2 e + d` where `d = 0` runs from the lower vertex label.
#[derive(Clone, Debug)]
pub struct Skeleton {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub vertex_class: Vec<usize>,
    pub edge_class: Vec<usize>,
    pub directed_edge_class: Vec<usize>,
    pub edge_degree: Vec<usize>,
    /// Vertex classes of the two endpoints of each edge class, sorted.
    pub edge_endpoints: Vec<[usize; 2]>,
    pub face_class: Vec<usize>,
    pub face_pairs: Vec<FacePair>,
    pub vertex_members: Vec<Vec<(usize, usize)>>,
    pub edge_members: Vec<Vec<(usize, usize)>>,
}

impl Skeleton {
    pub fn vertex_class_of(&self, tet: usize, v: usize) -> usize {
        self.vertex_class[4 * tet + v]
    }

    pub fn edge_class_of(&self, tet: usize, u: usize, w: usize) -> usize {
        self.edge_class[6 * tet + edge_index(u, w)]
    }

    /// Class of the directed edge running u -> w in tetrahedron `tet`.
    pub fn directed_class_of(&self, tet: usize, u: usize, w: usize) -> usize {
        let e = edge_index(u, w);
        let d = if u < w { 0 } else { 1 };
        self.directed_edge_class[12 * tet + 2 * e + d]
    }

    pub fn degree_at(&self, tet: usize, u: usize, w: usize) -> usize {
        self.edge_degree[self.edge_class_of(tet, u, w)]
    }
}

/// A face two of whose edges are identified in the complex with the common
/// vertex fixed. `apex` is that common vertex; the identification forces the
/// other two vertices of the face into one class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConeFace {
    pub tet: usize,
    pub face: usize,
    pub apex: usize,
}

impl Triangulation {
    /// Validates and wraps raw gluing data.
    pub fn new(gluings: Vec<[(usize, Perm4); 4]>) -> Result<Triangulation, TriError> {
        let t = gluings.len();
        for (i, faces) in gluings.iter().enumerate() {
            for (f, &(j, p)) in faces.iter().enumerate() {
                if j >= t {
                    return Err(TriError::BadTarget { tet: i, face: f, target: j });
                }
                if j == i && p.apply(f) == f {
                    return Err(TriError::SelfGlued { tet: i, face: f });
                }
                let (back_tet, back_perm) = gluings[j][p.apply(f)];
                if back_tet != i || back_perm != p.inverse() {
                    return Err(TriError::Involution { tet: i, face: f });
                }
            }
        }
        let tri = Triangulation { gluings };
        tri.check_orientable()?;
        tri.build_skeleton()?;
        Ok(tri)
    }

    pub fn tet_count(&self) -> usize {
        self.gluings.len()
    }

    /// The (tetrahedron, permutation) a face is glued to.
    pub fn gluing(&self, tet: usize, face: usize) -> (usize, Perm4) {
        self.gluings[tet][face]
    }

    fn check_orientable(&self) -> Result<(), TriError> {
        // A consistent orientation assigns each tetrahedron a sign so that
        // every gluing permutation is odd between equal signs.
        let t = self.tet_count();
        let mut sign = vec![0i8; t];
        for start in 0..t {
            if sign[start] != 0 {
                continue;
            }
            sign[start] = 1;
            let mut stack = vec![start];
            while let Some(i) = stack.pop() {
                for f in 0..4 {
                    let (j, p) = self.gluings[i][f];
                    let want = if p.is_odd() { sign[i] } else { -sign[i] };
                    if sign[j] == 0 {
                        sign[j] = want;
                        stack.push(j);
                    } else if sign[j] != want {
                        return Err(TriError::NonOrientable);
                    }
                }
            }
        }
        Ok(())
    }

    /// Number of connected components of the gluing graph.
    pub fn component_count(&self) -> usize {
        let t = self.tet_count();
        let mut uf = UnionFind::new(t.max(1));
        for i in 0..t {
            for f in 0..4 {
                uf.union(i, self.gluings[i][f].0);
            }
        }
        if t == 0 {
            0
        } else {
            uf.class_count()
        }
    }

    fn build_skeleton(&self) -> Result<Skeleton, TriError> {
        let t = self.tet_count();
        let mut dir_uf = UnionFind::new(12 * t);
        let mut edge_uf = UnionFind::new(6 * t);
        let mut vert_uf = UnionFind::new(4 * t);
        let mut face_uf = UnionFind::new(4 * t);

        let dir_slot = |i: usize, u: usize, w: usize| -> usize {
            let e = edge_index(u, w);
            let d = if u < w { 0 } else { 1 };
            12 * i + 2 * e + d
        };

        for i in 0..t {
            for f in 0..4 {
                let (j, p) = self.gluings[i][f];
                face_uf.union(4 * i + f, 4 * j + p.apply(f));
                let verts = face_vertices(f);
                for &v in &verts {
                    vert_uf.union(4 * i + v, 4 * j + p.apply(v));
                }
                for &u in &verts {
                    for &w in &verts {
                        if u != w {
                            dir_uf.union(dir_slot(i, u, w), dir_slot(j, p.apply(u), p.apply(w)));
                        }
                    }
                }
                for a in 0..3 {
                    for b in (a + 1)..3 {
                        let (u, w) = (verts[a], verts[b]);
                        edge_uf.union(
                            6 * i + edge_index(u, w),
                            6 * j + edge_index(p.apply(u), p.apply(w)),
                        );
                    }
                }
            }
        }

        // Reject edges identified with themselves reversed.
        for i in 0..t {
            for &[u, w] in &EDGE_VERTS {
                if dir_uf.same(dir_slot(i, u, w), dir_slot(i, w, u)) {
                    return Err(TriError::ReversedEdge { tet: i, u, w });
                }
            }
        }

        let vertex_class = vert_uf.labels();
        let edge_class = edge_uf.labels();
        let directed_edge_class = dir_uf.labels();
        let face_class = face_uf.labels();
        let vertex_count = if t == 0 { 0 } else { vert_uf.class_count() };
        let edge_count = if t == 0 { 0 } else { edge_uf.class_count() };

        let mut vertex_members = vec![Vec::new(); vertex_count];
        for i in 0..t {
            for v in 0..4 {
                vertex_members[vertex_class[4 * i + v]].push((i, v));
            }
        }
        let mut edge_members = vec![Vec::new(); edge_count];
        for i in 0..t {
            for e in 0..6 {
                edge_members[edge_class[6 * i + e]].push((i, e));
            }
        }
        let edge_degree: Vec<usize> = edge_members.iter().map(|m| m.len()).collect();
        let edge_endpoints: Vec<[usize; 2]> = edge_members
            .iter()
            .map(|m| {
                let (i, e) = m[0];
                let [u, w] = EDGE_VERTS[e];
                let mut ends = [vertex_class[4 * i + u], vertex_class[4 * i + w]];
                ends.sort();
                ends
            })
            .collect();

        let mut face_pairs = vec![
            FacePair {
                rep: (usize::MAX, usize::MAX),
                other: (usize::MAX, usize::MAX),
                perm: Perm4::IDENTITY,
            };
            if t == 0 { 0 } else { face_uf.class_count() }
        ];
        for i in 0..t {
            for f in 0..4 {
                let c = face_class[4 * i + f];
                if face_pairs[c].rep == (usize::MAX, usize::MAX) {
                    let (j, p) = self.gluings[i][f];
                    face_pairs[c] = FacePair { rep: (i, f), other: (j, p.apply(f)), perm: p };
                }
            }
        }

        // Closed 3-manifold check: the Euler characteristic of the identified
        // complex must vanish (faces pair up, so #face classes = 2t).
        let chi = vertex_count as i64 - edge_count as i64 + 2 * t as i64 - t as i64;
        if chi != 0 {
            return Err(TriError::NotClosed {
                details: format!(
                    "Euler characteristic {chi} (v={vertex_count}, e={edge_count}, t={t})"
                ),
            });
        }

        Ok(Skeleton {
            vertex_count,
            edge_count,
            vertex_class,
            edge_class,
            directed_edge_class,
            edge_degree,
            edge_endpoints,
            face_class,
            face_pairs,
            vertex_members,
            edge_members,
        })
    }

    /// The identified skeleton. Cheap to recompute; callers that need it in a
    /// loop should hold on to the result.
    pub fn skeleton(&self) -> Skeleton {
        self.build_skeleton()
            .expect("validated triangulation has a skeleton")
    }

    /// All cone faces, apexes included once per (face slot, apex).
    pub fn cone_faces(&self) -> Vec<ConeFace> {
        let skel = self.skeleton();
        let mut out = Vec::new();
        for i in 0..self.tet_count() {
            for f in 0..4 {
                let [a, b, c] = face_vertices(f);
                for (apex, x, y) in [(a, b, c), (b, a, c), (c, a, b)] {
                    if skel.directed_class_of(i, apex, x) == skel.directed_class_of(i, apex, y) {
                        out.push(ConeFace { tet: i, face: f, apex });
                    }
                }
            }
        }
        out
    }

    /// Cone faces whose identified edge has two distinct endpoint classes;
    /// the apex class of such a cone can be removed by the one-vertex moves
    /// without extra scaffolding.
    pub fn good_cone_faces(&self) -> Vec<ConeFace> {
        let skel = self.skeleton();
        self.cone_faces()
            .into_iter()
            .filter(|cf| {
                let [x, y] = face_vertices(cf.face)
                    .into_iter()
                    .filter(|&v| v != cf.apex)
                    .collect::<Vec<_>>()
                    .try_into()
                    .unwrap();
                let _ = y;
                skel.vertex_class_of(cf.tet, cf.apex) != skel.vertex_class_of(cf.tet, x)
            })
            .collect()
    }

    /// Connected components as separate re-indexed triangulations, ordered by
    /// their smallest original tetrahedron index.
    pub fn components(&self) -> Vec<Triangulation> {
        let t = self.tet_count();
        if t == 0 {
            return Vec::new();
        }
        let mut uf = UnionFind::new(t);
        for i in 0..t {
            for f in 0..4 {
                uf.union(i, self.gluings[i][f].0);
            }
        }
        let labels = uf.labels();
        let comp_count = uf.class_count();
        let mut new_index = vec![usize::MAX; t];
        let mut sizes = vec![0usize; comp_count];
        for i in 0..t {
            new_index[i] = sizes[labels[i]];
            sizes[labels[i]] += 1;
        }
        let mut parts: Vec<Vec<[(usize, Perm4); 4]>> =
            sizes.iter().map(|&s| Vec::with_capacity(s)).collect();
        for i in 0..t {
            let mut row = [(0usize, Perm4::IDENTITY); 4];
            for f in 0..4 {
                let (j, p) = self.gluings[i][f];
                row[f] = (new_index[j], p);
            }
            parts[labels[i]].push(row);
        }
        parts
            .into_iter()
            .map(|g| Triangulation::new(g).expect("component of a valid triangulation is valid"))
            .collect()
    }

    pub fn parse(text: &str) -> Result<Triangulation, TriError> {
        let mut lines = text.lines().enumerate().filter_map(|(n, raw)| {
            let body = raw.split('%').next().unwrap_or("").trim();
            if body.is_empty() {
                None
            } else {
                Some((n + 1, body.to_string()))
            }
        });

        let (line, header) = lines
            .next()
            .ok_or(TriError::Syntax { line: 0, msg: "empty input".into() })?;
        let t: usize = header
            .strip_prefix("tetrahedra")
            .map(str::trim)
            .and_then(|s| s.parse().ok())
            .ok_or(TriError::Syntax {
                line,
                msg: format!("expected `tetrahedra <count>`, found `{header}`"),
            })?;

        let mut gluings = Vec::with_capacity(t);
        for i in 0..t {
            let (line, body) = lines.next().ok_or(TriError::Syntax {
                line: 0,
                msg: format!("missing line for tetrahedron {i}"),
            })?;
            let (label, rest) = body.split_once(':').ok_or(TriError::Syntax {
                line,
                msg: "expected `<index>: <four gluings>`".into(),
            })?;
            if label.trim().parse::<usize>() != Ok(i) {
                return Err(TriError::Syntax {
                    line,
                    msg: format!("expected tetrahedron {i}, found `{}`", label.trim()),
                });
            }
            let entries: Vec<&str> = rest.split_whitespace().collect();
            if entries.len() > 4 {
                return Err(TriError::Syntax {
                    line,
                    msg: format!("tetrahedron {i} has {} gluing entries", entries.len()),
                });
            }
            let mut row = [(0usize, Perm4::IDENTITY); 4];
            for f in 0..4 {
                let entry = entries.get(f).copied().unwrap_or("-");
                if entry == "-" {
                    return Err(TriError::OpenFace { tet: i, face: f });
                }
                let (js, ps) = entry.split_once('/').ok_or(TriError::Syntax {
                    line,
                    msg: format!("gluing `{entry}` is not of the form <tet>/<perm>"),
                })?;
                let j: usize = js.parse().map_err(|_| TriError::Syntax {
                    line,
                    msg: format!("bad tetrahedron index `{js}`"),
                })?;
                let p: Perm4 = ps
                    .parse()
                    .map_err(|msg| TriError::Syntax { line, msg })?;
                row[f] = (j, p);
            }
            gluings.push(row);
        }
        if let Some((line, body)) = lines.next() {
            return Err(TriError::Syntax {
                line,
                msg: format!("unexpected content after last tetrahedron: `{body}`"),
            });
        }
        Triangulation::new(gluings)
    }

    pub fn serialize(&self) -> String {
        let mut out = format!("tetrahedra {}\n", self.tet_count());
        for (i, faces) in self.gluings.iter().enumerate() {
            let entries: Vec<String> =
                faces.iter().map(|(j, p)| format!("{j}/{p}")).collect();
            out.push_str(&format!("{i}: {}\n", entries.join(" ")));
        }
        out
    }
}

impl std::fmt::Debug for Triangulation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Triangulation[{}]", self.serialize().replace('\n', "; "))
    }
}

/// Incremental gluing assembly: records both sides of each gluing and checks
/// that every face gets glued exactly once.
pub struct GluingBuilder {
    slots: Vec<[Option<(usize, Perm4)>; 4]>,
}

impl GluingBuilder {
    pub fn new(tets: usize) -> GluingBuilder {
        GluingBuilder { slots: vec![[None; 4]; tets] }
    }

    pub fn tet_count(&self) -> usize {
        self.slots.len()
    }

    /// Appends a fresh tetrahedron and returns its index.
    pub fn add_tet(&mut self) -> usize {
        self.slots.push([None; 4]);
        self.slots.len() - 1
    }

    /// Glues face `f` of `i` to tetrahedron `j` via `p` (and the inverse
    /// gluing on the other side). Panics on double-gluing; construction code
    /// is expected to know its own face budget.
    pub fn glue(&mut self, i: usize, f: usize, j: usize, p: Perm4) {
        assert!(self.slots[i][f].is_none(), "face {f} of tet {i} already glued");
        let g = p.apply(f);
        assert!(
            self.slots[j][g].is_none(),
            "face {g} of tet {j} already glued"
        );
        self.slots[i][f] = Some((j, p));
        if i != j || f != g {
            self.slots[j][g] = Some((i, p.inverse()));
        } else {
            self.slots[i][f] = Some((j, p));
        }
    }

    pub fn is_glued(&self, i: usize, f: usize) -> bool {
        self.slots[i][f].is_some()
    }

    pub fn build(self) -> Result<Triangulation, TriError> {
        let mut gluings = Vec::with_capacity(self.slots.len());
        for (i, row) in self.slots.iter().enumerate() {
            let mut out = [(0usize, Perm4::IDENTITY); 4];
            for f in 0..4 {
                out[f] = row[f].ok_or(TriError::OpenFace { tet: i, face: f })?;
            }
            gluings.push(out);
        }
        Triangulation::new(gluings)
    }
}
