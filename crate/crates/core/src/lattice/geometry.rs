//! Square-lattice geometry.
//!
//! Vertices are integer points (row, col) with row 0 at the top. Horizontal
//! edges point right, vertical edges point down. A face is named by its
//! top-left vertex and may be exterior (some or all of its edges missing).

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::group_core::{FiniteGroup, Subgroup};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub r: i32,
    pub c: i32,
}

pub const fn vx(r: i32, c: i32) -> Vertex {
    Vertex { r, c }
}

/// Face with top-left corner (r, c).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Face {
    pub r: i32,
    pub c: i32,
}

pub const fn fc(r: i32, c: i32) -> Face {
    Face { r, c }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dir {
    /// (r,c) → (r,c+1)
    H,
    /// (r,c) → (r+1,c)
    V,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeKey {
    pub dir: Dir,
    pub r: i32,
    pub c: i32,
}

impl EdgeKey {
    pub const fn h(r: i32, c: i32) -> Self {
        EdgeKey { dir: Dir::H, r, c }
    }
    pub const fn v(r: i32, c: i32) -> Self {
        EdgeKey { dir: Dir::V, r, c }
    }
    pub fn tail(&self) -> Vertex {
        vx(self.r, self.c)
    }
    pub fn head(&self) -> Vertex {
        match self.dir {
            Dir::H => vx(self.r, self.c + 1),
            Dir::V => vx(self.r + 1, self.c),
        }
    }
    pub fn shifted(&self, dr: i32, dc: i32) -> Self {
        EdgeKey { dir: self.dir, r: self.r + dr, c: self.c + dc }
    }
}

impl std::fmt::Display for EdgeKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let d = match self.dir {
            Dir::H => 'H',
            Dir::V => 'V',
        };
        write!(f, "{d}({},{})", self.r, self.c)
    }
}

/// A site (v, p): a vertex and an adjacent (possibly exterior) face.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Site {
    pub v: Vertex,
    pub p: Face,
}

impl Site {
    pub fn new(v: Vertex, p: Face) -> Result<Self> {
        let s = Site { v, p };
        s.corner().ok_or_else(|| Error::Lattice(format!("face {:?} is not adjacent to vertex {:?}", p, v)))?;
        Ok(s)
    }

    /// Corner index of v on p, clockwise from top-left: 0=TL, 1=TR, 2=BR, 3=BL.
    pub fn corner(&self) -> Option<usize> {
        match (self.v.r - self.p.r, self.v.c - self.p.c) {
            (0, 0) => Some(0),
            (0, 1) => Some(1),
            (1, 1) => Some(2),
            (1, 0) => Some(3),
            _ => None,
        }
    }
}

/// Edge j of a face's clockwise boundary, running from corner j to corner j+1,
/// with whether that direction agrees with the edge orientation.
pub fn face_edge(p: Face, j: usize) -> (EdgeKey, bool) {
    match j % 4 {
        0 => (EdgeKey::h(p.r, p.c), true),
        1 => (EdgeKey::v(p.r, p.c + 1), true),
        2 => (EdgeKey::h(p.r + 1, p.c), false),
        _ => (EdgeKey::v(p.r, p.c), false),
    }
}

/// The 8 slots around a vertex, anticlockwise from east: even slots are
/// edges (E, N, W, S), odd slots are faces (NE, NW, SW, SE).
pub fn slot_edge(v: Vertex, slot: usize) -> (EdgeKey, bool) {
    // (edge, outgoing from v)
    match slot % 8 {
        0 => (EdgeKey::h(v.r, v.c), true),
        2 => (EdgeKey::v(v.r - 1, v.c), false),
        4 => (EdgeKey::h(v.r, v.c - 1), false),
        6 => (EdgeKey::v(v.r, v.c), true),
        _ => panic!("odd slot is a face"),
    }
}

pub fn slot_face(v: Vertex, slot: usize) -> Face {
    match slot % 8 {
        1 => fc(v.r - 1, v.c),
        3 => fc(v.r - 1, v.c - 1),
        5 => fc(v.r, v.c - 1),
        7 => fc(v.r, v.c),
        _ => panic!("even slot is an edge"),
    }
}

pub fn face_slot(v: Vertex, p: Face) -> Option<usize> {
    [1, 3, 5, 7].into_iter().find(|&s| slot_face(v, s) == p)
}

/// Restriction attached to a Hamiltonian term: the full group, the trivial
/// subgroup, or a subgroup K.
#[derive(Debug, Clone)]
pub enum Restriction {
    Full,
    Trivial,
    Sub(Arc<Subgroup>),
}

impl Restriction {
    pub fn members(&self, g: &FiniteGroup) -> Vec<usize> {
        match self {
            Restriction::Full => g.elements().collect(),
            Restriction::Trivial => vec![0],
            Restriction::Sub(k) => k.members().to_vec(),
        }
    }
    pub fn contains(&self, x: usize) -> bool {
        match self {
            Restriction::Full => true,
            Restriction::Trivial => x == 0,
            Restriction::Sub(k) => k.contains(x),
        }
    }
}

#[derive(Debug, Clone)]
pub struct VertexTerm {
    pub v: Vertex,
    /// A(v) averages over this set.
    pub k: Restriction,
}

#[derive(Debug, Clone)]
pub struct FaceTerm {
    pub site: Site,
    /// B(p) projects the holonomy onto this set (δ_e ↦ Σ_{a∈K} δ_a).
    pub k: Restriction,
}

/// A rectangular patch: `w`×`h` faces with top-left vertex at `origin`.
/// Rough (dangling) top and bottom, smooth left and right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatchShape {
    pub w: i32,
    pub h: i32,
    pub origin: Vertex,
}

impl PatchShape {
    pub fn new(w: i32, h: i32) -> Self {
        PatchShape { w, h, origin: vx(0, 0) }
    }
    pub fn at(self, r: i32, c: i32) -> Self {
        PatchShape { origin: vx(r, c), ..self }
    }
    /// Edges in canonical order: vertical (row-major) then horizontal.
    pub fn edges(&self) -> Vec<EdgeKey> {
        let (r0, c0) = (self.origin.r, self.origin.c);
        let mut out = Vec::new();
        for r in 0..self.h {
            for c in 0..=self.w {
                out.push(EdgeKey::v(r0 + r, c0 + c));
            }
        }
        for r in 1..self.h {
            for c in 0..self.w {
                out.push(EdgeKey::h(r0 + r, c0 + c));
            }
        }
        out
    }
    pub fn interior_vertices(&self) -> Vec<Vertex> {
        let mut out = Vec::new();
        for r in 1..self.h {
            for c in 0..=self.w {
                out.push(vx(self.origin.r + r, self.origin.c + c));
            }
        }
        out
    }
    pub fn faces(&self) -> Vec<Face> {
        let mut out = Vec::new();
        for r in 0..self.h {
            for c in 0..self.w {
                out.push(fc(self.origin.r + r, self.origin.c + c));
            }
        }
        out
    }
}

/// Boundary condition on one side of a [`Lattice::grid`].
#[derive(Debug, Clone)]
pub enum Side {
    /// Open: no extra terms.
    Open,
    /// Smooth boundary with subgroup K: boundary edges carry an exterior
    /// face term δ_{eK}, boundary vertices average over K.
    Smooth(Arc<Subgroup>),
}

/// Lattice: edges (with a fixed order defining configurations) plus the
/// Hamiltonian terms.
#[derive(Debug, Clone)]
pub struct Lattice {
    pub group: Arc<FiniteGroup>,
    edges: Vec<EdgeKey>,
    index: HashMap<EdgeKey, usize>,
    pub vertex_terms: Vec<VertexTerm>,
    pub face_terms: Vec<FaceTerm>,
    /// Patches this lattice was built from, if any.
    pub patches: Vec<PatchShape>,
}

impl Lattice {
    pub fn from_edges(group: Arc<FiniteGroup>, edges: Vec<EdgeKey>) -> Result<Self> {
        if group.order() > 256 {
            return Err(Error::Lattice("edge registers hold at most 256 group elements".into()));
        }
        let mut index = HashMap::new();
        for (i, e) in edges.iter().enumerate() {
            if index.insert(*e, i).is_some() {
                return Err(Error::Lattice(format!("duplicate edge {e}")));
            }
        }
        Ok(Lattice { group, edges, index, vertex_terms: Vec::new(), face_terms: Vec::new(), patches: Vec::new() })
    }

    /// `w`×`h` faces, every edge present, with bulk terms on all vertices and
    /// faces. `left` configures the left side; other sides are open.
    pub fn grid(group: Arc<FiniteGroup>, w: i32, h: i32, left: Side) -> Result<Self> {
        if w < 1 || h < 1 {
            return Err(Error::Lattice("grid needs w, h ≥ 1".into()));
        }
        let mut edges = Vec::new();
        for r in 0..=h {
            for c in 0..w {
                edges.push(EdgeKey::h(r, c));
            }
        }
        for r in 0..h {
            for c in 0..=w {
                edges.push(EdgeKey::v(r, c));
            }
        }
        let mut lat = Lattice::from_edges(group, edges)?;
        for r in 0..=h {
            for c in 0..=w {
                let k = match (&left, c) {
                    (Side::Smooth(k), 0) => Restriction::Sub(k.clone()),
                    _ => Restriction::Full,
                };
                lat.vertex_terms.push(VertexTerm { v: vx(r, c), k });
            }
        }
        for r in 0..h {
            for c in 0..w {
                lat.face_terms.push(FaceTerm { site: Site { v: vx(r, c), p: fc(r, c) }, k: Restriction::Trivial });
            }
        }
        if let Side::Smooth(k) = &left {
            for r in 0..h {
                lat.face_terms.push(FaceTerm { site: Site { v: vx(r, 0), p: fc(r, -1) }, k: Restriction::Sub(k.clone()) });
            }
        }
        Ok(lat)
    }

    /// Disjoint patches with smooth (K=G) left/right and rough (K={e}) top/bottom.
    pub fn patches(group: Arc<FiniteGroup>, shapes: &[PatchShape]) -> Result<Self> {
        let mut edges = Vec::new();
        for s in shapes {
            if s.w < 0 || s.h < 1 {
                return Err(Error::Lattice(format!("patch needs w ≥ 0, h ≥ 1, got {}×{}", s.w, s.h)));
            }
            edges.extend(s.edges());
        }
        let mut lat = Lattice::from_edges(group, edges)?;
        for s in shapes {
            for v in s.interior_vertices() {
                lat.vertex_terms.push(VertexTerm { v, k: Restriction::Full });
            }
            for p in s.faces() {
                let site = lat.default_site(p);
                lat.face_terms.push(FaceTerm { site, k: Restriction::Trivial });
            }
        }
        lat.patches = shapes.to_vec();
        Ok(lat)
    }

    /// Site at the first corner of p (clockwise from top-left) with an edge.
    fn default_site(&self, p: Face) -> Site {
        let corners = [vx(p.r, p.c), vx(p.r, p.c + 1), vx(p.r + 1, p.c + 1), vx(p.r + 1, p.c)];
        for (j, &v) in corners.iter().enumerate() {
            if self.has(face_edge(p, j).0) {
                return Site { v, p };
            }
        }
        Site { v: corners[0], p }
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }
    pub fn edges(&self) -> &[EdgeKey] {
        &self.edges
    }
    pub fn edge(&self, i: usize) -> EdgeKey {
        self.edges[i]
    }
    pub fn index_of(&self, e: EdgeKey) -> Option<usize> {
        self.index.get(&e).copied()
    }
    pub fn has(&self, e: EdgeKey) -> bool {
        self.index.contains_key(&e)
    }

    /// Present edges at v: (index, outgoing).
    pub fn incident(&self, v: Vertex) -> Vec<(usize, bool)> {
        [0, 2, 4, 6]
            .into_iter()
            .filter_map(|s| {
                let (e, out) = slot_edge(v, s);
                self.index_of(e).map(|i| (i, out))
            })
            .collect()
    }

    /// Edges of the holonomy at a site: clockwise from v, skipping missing
    /// edges; anticlockwise if the first clockwise edge is missing.
    /// Each entry is (edge index, traversed along orientation).
    pub fn holonomy_path(&self, s: Site) -> Vec<(usize, bool)> {
        let j0 = s.corner().expect("site corner");
        let first = face_edge(s.p, j0).0;
        let mut out = Vec::new();
        if self.has(first) {
            for j in j0..j0 + 4 {
                let (e, fwd) = face_edge(s.p, j);
                if let Some(i) = self.index_of(e) {
                    out.push((i, fwd));
                }
            }
        } else {
            for step in 1..=4 {
                let (e, fwd) = face_edge(s.p, j0 + 4 - step);
                if let Some(i) = self.index_of(e) {
                    out.push((i, !fwd));
                }
            }
        }
        out
    }

    /// Size of the configuration space, |G|^edges.
    pub fn config_space(&self) -> f64 {
        (self.group.order() as f64).powi(self.edges.len() as i32)
    }

    /// Vertices carrying a term.
    pub fn term_vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.vertex_terms.iter().map(|t| t.v)
    }

    pub fn vertex_term(&self, v: Vertex) -> Option<&VertexTerm> {
        self.vertex_terms.iter().find(|t| t.v == v)
    }
}
