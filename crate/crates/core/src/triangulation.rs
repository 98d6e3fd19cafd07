//! Closed 3-manifold triangulations given as tetrahedra with face pairings.
//!
//! Face `f` of a tetrahedron is the face opposite vertex `f`. A gluing of
//! face `f` of tetrahedron `A` to tetrahedron `B` carries a permutation `g`
//! of `{0,1,2,3}`: vertex `v` of `A` is identified with vertex `g(v)` of `B`,
//! so the target face is `g(f)`.

use std::collections::VecDeque;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TriangulationError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("tetrahedron {tet} out of range (t={size})")]
    TetOutOfRange { tet: usize, size: usize },
    #[error("face index {0} out of range (expected 0..3)")]
    FaceOutOfRange(usize),
    #[error("{0:?} is not a permutation of 0123")]
    BadPermutation([u8; 4]),
    #[error("face {tet}:{face} is glued to itself")]
    SelfGluedFace { tet: usize, face: u8 },
    #[error("permutation {perm} sends face {face} to {image}, but the target face is {target}")]
    FaceMismatch {
        perm: Perm4,
        face: u8,
        image: u8,
        target: u8,
    },
    #[error("gluings are not an involution at face {tet}:{face}")]
    NotInvolution { tet: usize, face: u8 },
    #[error("face {tet}:{face} has no gluing")]
    Unglued { tet: usize, face: u8 },
    #[error("triangulation has no tetrahedra")]
    Empty,
    #[error("triangulation is disconnected")]
    Disconnected,
    #[error("triangulation is not a closed 3-manifold: {0}")]
    NotClosedManifold(String),
}

/// A permutation of `{0,1,2,3}` stored by its images.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Perm4([u8; 4]);

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4([0, 1, 2, 3]);

    pub fn new(images: [u8; 4]) -> Result<Self, TriangulationError> {
        let mut seen = [false; 4];
        for &i in &images {
            if i > 3 || seen[i as usize] {
                return Err(TriangulationError::BadPermutation(images));
            }
            seen[i as usize] = true;
        }
        Ok(Perm4(images))
    }

    #[inline]
    pub fn apply(&self, v: u8) -> u8 {
        self.0[v as usize]
    }

    pub fn images(&self) -> [u8; 4] {
        self.0
    }

    pub fn inverse(&self) -> Perm4 {
        let mut inv = [0u8; 4];
        for (v, &img) in self.0.iter().enumerate() {
            inv[img as usize] = v as u8;
        }
        Perm4(inv)
    }

    /// `(self * other)(v) = self(other(v))`
    pub fn compose(&self, other: &Perm4) -> Perm4 {
        Perm4([0, 1, 2, 3].map(|v| self.apply(other.apply(v))))
    }

    pub fn is_odd(&self) -> bool {
        let mut inversions = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                if self.0[i] > self.0[j] {
                    inversions += 1;
                }
            }
        }
        inversions % 2 == 1
    }

    pub fn all() -> impl Iterator<Item = Perm4> {
        (0..24u32).map(|mut k| {
            let mut pool = vec![0u8, 1, 2, 3];
            let mut out = [0u8; 4];
            for (i, slot) in out.iter_mut().enumerate() {
                let radix = (4 - i) as u32;
                *slot = pool.remove((k % radix) as usize);
                k /= radix;
            }
            Perm4(out)
        })
    }
}

impl fmt::Display for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}{}", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

impl fmt::Debug for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm4({self})")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FaceRef {
    pub tet: usize,
    pub face: u8,
}

impl fmt::Display for FaceRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.tet, self.face)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FacePairing {
    pub source: FaceRef,
    pub target: FaceRef,
    pub perm: Perm4,
}

impl FacePairing {
    pub fn reversed(&self) -> FacePairing {
        FacePairing {
            source: self.target,
            target: self.source,
            perm: self.perm.inverse(),
        }
    }
}

impl fmt::Display for FacePairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} perm={}", self.source, self.target, self.perm)
    }
}

/// Immutable once built: every face slot is glued and the gluing table is
/// an involution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation {
    gluings: Vec<[(usize, Perm4); 4]>,
}

impl Triangulation {
    /// Builds from face pairings listed in one or both directions.
    pub fn from_pairings(size: usize, pairings: &[FacePairing]) -> Result<Self, TriangulationError> {
        if size == 0 {
            return Err(TriangulationError::Empty);
        }
        let mut table: Vec<[Option<(usize, Perm4)>; 4]> = vec![[None; 4]; size];
        for pairing in pairings {
            for side in [*pairing, pairing.reversed()] {
                check_pairing(size, &side)?;
                let slot = &mut table[side.source.tet][side.source.face as usize];
                let entry = (side.target.tet, side.perm);
                match slot {
                    Some(existing) if *existing != entry => {
                        return Err(TriangulationError::NotInvolution {
                            tet: side.source.tet,
                            face: side.source.face,
                        })
                    }
                    _ => *slot = Some(entry),
                }
            }
        }
        let mut gluings = Vec::with_capacity(size);
        for (tet, row) in table.into_iter().enumerate() {
            let mut out = [(0usize, Perm4::IDENTITY); 4];
            for face in 0..4u8 {
                out[face as usize] =
                    row[face as usize].ok_or(TriangulationError::Unglued { tet, face })?;
            }
            gluings.push(out);
        }
        Ok(Triangulation { gluings })
    }

    pub fn parse(text: &str) -> Result<Self, TriangulationError> {
        parse_triangulation(text)
    }

    /// Number of tetrahedra.
    pub fn size(&self) -> usize {
        self.gluings.len()
    }

    /// Where face `face` of `tet` is glued, and by which permutation.
    #[inline]
    pub fn adjacent(&self, tet: usize, face: u8) -> (usize, Perm4) {
        self.gluings[tet][face as usize]
    }

    /// One pairing per glued pair of faces, source before target, sorted.
    pub fn pairings(&self) -> Vec<FacePairing> {
        let mut out = Vec::with_capacity(2 * self.size());
        for tet in 0..self.size() {
            for face in 0..4u8 {
                let (other, perm) = self.adjacent(tet, face);
                let source = FaceRef { tet, face };
                let target = FaceRef {
                    tet: other,
                    face: perm.apply(face),
                };
                if source < target {
                    out.push(FacePairing {
                        source,
                        target,
                        perm,
                    });
                }
            }
        }
        out
    }

    /// Renames tetrahedron `i` to `relabel[i]`.
    pub fn relabeled(&self, relabel: &[usize]) -> Triangulation {
        assert_eq!(relabel.len(), self.size());
        let mut gluings = vec![[(0usize, Perm4::IDENTITY); 4]; self.size()];
        for (tet, row) in self.gluings.iter().enumerate() {
            for (face, &(other, perm)) in row.iter().enumerate() {
                gluings[relabel[tet]][face] = (relabel[other], perm);
            }
        }
        Triangulation { gluings }
    }

    /// Canonical text form, each pairing once.
    pub fn to_text(&self) -> String {
        let mut s = format!("t={}\n", self.size());
        for p in self.pairings() {
            s.push_str(&p.to_string());
            s.push('\n');
        }
        s
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.size()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(t) = stack.pop() {
            for face in 0..4u8 {
                let (n, _) = self.adjacent(t, face);
                if !seen[n] {
                    seen[n] = true;
                    stack.push(n);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

fn check_pairing(size: usize, p: &FacePairing) -> Result<(), TriangulationError> {
    for r in [p.source, p.target] {
        if r.tet >= size {
            return Err(TriangulationError::TetOutOfRange { tet: r.tet, size });
        }
        if r.face > 3 {
            return Err(TriangulationError::FaceOutOfRange(r.face as usize));
        }
    }
    if p.source == p.target {
        return Err(TriangulationError::SelfGluedFace {
            tet: p.source.tet,
            face: p.source.face,
        });
    }
    let image = p.perm.apply(p.source.face);
    if image != p.target.face {
        return Err(TriangulationError::FaceMismatch {
            perm: p.perm,
            face: p.source.face,
            image,
            target: p.target.face,
        });
    }
    Ok(())
}

struct Cursor<'a> {
    line_no: usize,
    chars: Vec<(usize, char)>,
    pos: usize,
    _line: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(line_no: usize, line: &'a str) -> Self {
        Cursor {
            line_no,
            chars: line
                .char_indices()
                .filter(|(_, c)| !c.is_whitespace())
                .map(|(i, c)| (i + 1, c))
                .collect(),
            pos: 0,
            _line: line,
        }
    }

    fn column(&self) -> usize {
        self.chars
            .get(self.pos)
            .map(|&(c, _)| c)
            .unwrap_or_else(|| self.chars.last().map_or(1, |&(c, _)| c + 1))
    }

    fn error(&self, message: impl Into<String>) -> TriangulationError {
        TriangulationError::Syntax {
            line: self.line_no,
            column: self.column(),
            message: message.into(),
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), TriangulationError> {
        for want in token.chars() {
            match self.chars.get(self.pos) {
                Some(&(_, c)) if c == want => self.pos += 1,
                _ => return Err(self.error(format!("expected `{token}`"))),
            }
        }
        Ok(())
    }

    fn number(&mut self) -> Result<usize, TriangulationError> {
        let start = self.pos;
        while matches!(self.chars.get(self.pos), Some((_, c)) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        let digits: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
        digits.parse().map_err(|_| {
            self.pos = start;
            self.error("number too large")
        })
    }

    fn face_ref(&mut self) -> Result<FaceRef, TriangulationError> {
        let tet = self.number()?;
        self.expect(":")?;
        let col = self.pos;
        let face = self.number()?;
        if face > 3 {
            self.pos = col;
            return Err(self.error(format!("face index {face} out of range (expected 0..3)")));
        }
        Ok(FaceRef {
            tet,
            face: face as u8,
        })
    }

    fn perm(&mut self) -> Result<Perm4, TriangulationError> {
        let start = self.pos;
        let mut images = [0u8; 4];
        for slot in images.iter_mut() {
            match self.chars.get(self.pos) {
                Some(&(_, c)) if c.is_ascii_digit() => {
                    *slot = c as u8 - b'0';
                    self.pos += 1;
                }
                _ => return Err(self.error("expected four digits")),
            }
        }
        Perm4::new(images).map_err(|_| {
            self.pos = start;
            self.error(format!(
                "{}{}{}{} is not a permutation of 0123",
                images[0], images[1], images[2], images[3]
            ))
        })
    }

    fn finish(&self) -> Result<(), TriangulationError> {
        if self.pos < self.chars.len() {
            Err(self.error("unexpected trailing input"))
        } else {
            Ok(())
        }
    }
}

/// Parses the line format
///
/// ```text
/// t=<N>
/// <tet>:<face> -> <tet>:<face> perm=<abcd>
/// ```
///
/// with `#` comments. Pairings may appear in one or both directions.
pub fn parse_triangulation(text: &str) -> Result<Triangulation, TriangulationError> {
    let mut size: Option<usize> = None;
    let mut pairings = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let mut cur = Cursor::new(line_no, body);
        match size {
            None => {
                cur.expect("t=")?;
                let n = cur.number()?;
                cur.finish()?;
                if n == 0 {
                    return Err(TriangulationError::Empty);
                }
                size = Some(n);
            }
            Some(n) => {
                let source = cur.face_ref()?;
                cur.expect("->")?;
                let target = cur.face_ref()?;
                cur.expect("perm=")?;
                let perm = cur.perm()?;
                cur.finish()?;
                for r in [source, target] {
                    if r.tet >= n {
                        return Err(TriangulationError::Syntax {
                            line: line_no,
                            column: 1,
                            message: format!("tetrahedron {} out of range (t={n})", r.tet),
                        });
                    }
                }
                pairings.push(FacePairing {
                    source,
                    target,
                    perm,
                });
            }
        }
    }
    let size = size.ok_or(TriangulationError::Syntax {
        line: last_line.max(1),
        column: 1,
        message: "missing `t=<N>` header".into(),
    })?;
    Triangulation::from_pairings(size, &pairings)
}

/// Local edge `i` of a tetrahedron joins `EDGE_VERTICES[i]`.
pub const EDGE_VERTICES: [(u8, u8); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

pub fn edge_index(a: u8, b: u8) -> usize {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    EDGE_VERTICES
        .iter()
        .position(|&e| e == (lo, hi))
        .expect("distinct vertices")
}

/// Union-find with a parity bit relative to the root.
#[derive(Debug, Clone)]
pub(crate) struct ParityUnionFind {
    parent: Vec<usize>,
    parity: Vec<bool>,
}

impl ParityUnionFind {
    pub(crate) fn new(n: usize) -> Self {
        ParityUnionFind {
            parent: (0..n).collect(),
            parity: vec![false; n],
        }
    }

    /// Root and parity of `x` relative to it.
    pub(crate) fn find(&mut self, x: usize) -> (usize, bool) {
        let mut path = Vec::new();
        let mut cur = x;
        while self.parent[cur] != cur {
            path.push(cur);
            cur = self.parent[cur];
        }
        let root = cur;
        // compress back-to-front so each node's parity is relative to root
        let mut acc = false;
        for &node in path.iter().rev() {
            acc ^= self.parity[node];
            self.parity[node] = acc;
            self.parent[node] = root;
        }
        (root, if x == root { false } else { self.parity[x] })
    }

    /// Declares `parity(a) ^ parity(b) == rel`. Returns `false` on a
    /// contradiction with earlier unions. The smaller root survives.
    pub(crate) fn union(&mut self, a: usize, b: usize, rel: bool) -> bool {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return pa ^ pb == rel;
        }
        let (keep, absorb) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[absorb] = keep;
        self.parity[absorb] = pa ^ pb ^ rel;
        true
    }
}

/// Orbits of vertices, edges and faces under the gluings.
#[derive(Debug, Clone)]
pub struct CellStructure {
    /// Vertex class of tetrahedron-vertex `4 * tet + v`.
    pub vertex_class: Vec<usize>,
    pub vertex_count: usize,
    /// Edge class of tetrahedron-edge `6 * tet + e`, and whether the local
    /// direction (low vertex to high vertex) is opposite to the class's.
    pub edge_class: Vec<(usize, bool)>,
    pub edge_count: usize,
    /// Representative slot `(tet, local edge)` of each edge class: the
    /// smallest one. Its local direction is the class's positive direction.
    pub edge_reps: Vec<(usize, usize)>,
    /// `(tail, head)` vertex classes of each edge class.
    pub edge_endpoints: Vec<(usize, usize)>,
    /// Edge classes identified with themselves in reverse.
    pub invalid_edges: Vec<usize>,
    /// Face class of face slot `4 * tet + f`.
    pub face_class: Vec<usize>,
    pub face_count: usize,
    /// Smallest face slot in each class.
    pub face_reps: Vec<FaceRef>,
}

pub fn cell_structure(tri: &Triangulation) -> CellStructure {
    let n = tri.size();
    let mut verts = ParityUnionFind::new(4 * n);
    let mut edges = ParityUnionFind::new(6 * n);
    let mut invalid_roots = Vec::new();
    for tet in 0..n {
        for face in 0..4u8 {
            let (other, perm) = tri.adjacent(tet, face);
            for v in (0..4u8).filter(|&v| v != face) {
                verts.union(4 * tet + v as usize, 4 * other + perm.apply(v) as usize, false);
            }
            for &(a, b) in EDGE_VERTICES.iter().filter(|&&(a, b)| a != face && b != face) {
                let (ia, ib) = (perm.apply(a), perm.apply(b));
                let flipped = ia > ib;
                let ok = edges.union(6 * tet + edge_index(a, b), 6 * other + edge_index(ia, ib), flipped);
                if !ok {
                    invalid_roots.push(6 * tet + edge_index(a, b));
                }
            }
        }
    }

    let (vertex_class, vertex_count) = relabel_classes((0..4 * n).map(|i| verts.find(i).0));

    let roots: Vec<(usize, bool)> = (0..6 * n).map(|i| edges.find(i)).collect();
    let (edge_ids, edge_count) = relabel_classes(roots.iter().map(|r| r.0));
    let edge_class: Vec<(usize, bool)> = edge_ids
        .iter()
        .zip(&roots)
        .map(|(&c, &(_, par))| (c, par))
        .collect();
    let mut edge_reps = vec![(usize::MAX, 0); edge_count];
    let mut edge_endpoints = vec![(0, 0); edge_count];
    for slot in 0..6 * n {
        let c = edge_class[slot].0;
        if edge_reps[c].0 == usize::MAX {
            let (tet, e) = (slot / 6, slot % 6);
            edge_reps[c] = (tet, e);
            let (a, b) = EDGE_VERTICES[e];
            edge_endpoints[c] = (vertex_class[4 * tet + a as usize], vertex_class[4 * tet + b as usize]);
        }
    }
    // the root of an edge union is its smallest slot, which is also the
    // representative, so parities are already relative to the representative
    let mut invalid_edges: Vec<usize> = invalid_roots.iter().map(|&s| edge_class[s].0).collect();
    invalid_edges.sort_unstable();
    invalid_edges.dedup();

    let mut face_class = vec![usize::MAX; 4 * n];
    let mut face_reps = Vec::new();
    for tet in 0..n {
        for face in 0..4u8 {
            let slot = 4 * tet + face as usize;
            if face_class[slot] != usize::MAX {
                continue;
            }
            let (other, perm) = tri.adjacent(tet, face);
            let c = face_reps.len();
            face_reps.push(FaceRef { tet, face });
            face_class[slot] = c;
            face_class[4 * other + perm.apply(face) as usize] = c;
        }
    }

    CellStructure {
        vertex_class,
        vertex_count,
        edge_class,
        edge_count,
        edge_reps,
        edge_endpoints,
        invalid_edges,
        face_count: face_reps.len(),
        face_class,
        face_reps,
    }
}

/// Maps arbitrary root ids to `0..k` in order of first appearance.
fn relabel_classes(roots: impl Iterator<Item = usize>) -> (Vec<usize>, usize) {
    let mut map = std::collections::HashMap::new();
    let ids: Vec<usize> = roots
        .map(|r| {
            let next = map.len();
            *map.entry(r).or_insert(next)
        })
        .collect();
    (ids, map.len())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub tetrahedra: usize,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler_characteristic: i64,
    /// Euler characteristic of each vertex link, by vertex class.
    pub vertex_links: Vec<i64>,
    pub invalid_edges: usize,
    pub connected: bool,
    pub pass: bool,
}

/// Counts cells and checks the closed-manifold conditions: `chi = 0`, every
/// vertex link has `chi = 2`, and no edge is glued to itself in reverse.
pub fn validate(tri: &Triangulation) -> ValidationReport {
    let cells = cell_structure(tri);
    let t = tri.size();
    let chi = cells.vertex_count as i64 - cells.edge_count as i64 + cells.face_count as i64 - t as i64;

    // link of a vertex: one corner triangle per tetrahedron-vertex, their
    // edges glued in pairs, one link vertex per edge end (a reversed edge
    // has its two ends identified)
    let mut corners = vec![0i64; cells.vertex_count];
    for &c in &cells.vertex_class {
        corners[c] += 1;
    }
    let mut link_vertices = vec![0i64; cells.vertex_count];
    for (class, &(tail, head)) in cells.edge_endpoints.iter().enumerate() {
        if cells.invalid_edges.binary_search(&class).is_ok() {
            link_vertices[tail] += 1;
        } else {
            link_vertices[tail] += 1;
            link_vertices[head] += 1;
        }
    }
    let vertex_links: Vec<i64> = corners
        .iter()
        .zip(&link_vertices)
        .map(|(&tri_count, &v)| v - 3 * tri_count / 2 + tri_count)
        .collect();

    let connected = tri.is_connected();
    let pass = chi == 0 && vertex_links.iter().all(|&x| x == 2) && cells.invalid_edges.is_empty();
    ValidationReport {
        tetrahedra: t,
        vertices: cells.vertex_count,
        edges: cells.edge_count,
        faces: cells.face_count,
        euler_characteristic: chi,
        vertex_links,
        invalid_edges: cells.invalid_edges.len(),
        connected,
        pass,
    }
}

/// Dual 1-skeleton: a node per tetrahedron, an edge per face pairing.
#[derive(Debug, Clone)]
pub struct DualGraph {
    pub tetrahedra: usize,
    pub edges: Vec<FacePairing>,
    /// Parallel to `edges`: whether the edge is in the spanning tree.
    pub in_tree: Vec<bool>,
}

impl DualGraph {
    pub fn tree_edges(&self) -> impl Iterator<Item = &FacePairing> {
        self.edges.iter().zip(&self.in_tree).filter(|(_, &t)| t).map(|(e, _)| e)
    }

    pub fn non_tree_edges(&self) -> impl Iterator<Item = &FacePairing> {
        self.edges.iter().zip(&self.in_tree).filter(|(_, &t)| !t).map(|(e, _)| e)
    }
}

/// Breadth-first spanning tree from tetrahedron 0, scanning faces in index
/// order. `root` lets tests re-root the tree.
pub fn dual_graph_from(tri: &Triangulation, root: usize) -> Result<DualGraph, TriangulationError> {
    let n = tri.size();
    let edges = tri.pairings();
    let mut in_tree = vec![false; edges.len()];
    let edge_of = |r: FaceRef| {
        edges
            .iter()
            .position(|e| e.source == r || e.target == r)
            .expect("every face is in a pairing")
    };
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([root]);
    seen[root] = true;
    while let Some(tet) = queue.pop_front() {
        for face in 0..4u8 {
            let (other, _) = tri.adjacent(tet, face);
            if !seen[other] {
                seen[other] = true;
                in_tree[edge_of(FaceRef { tet, face })] = true;
                queue.push_back(other);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(TriangulationError::Disconnected);
    }
    Ok(DualGraph {
        tetrahedra: n,
        edges,
        in_tree,
    })
}

pub fn dual_graph(tri: &Triangulation) -> Result<DualGraph, TriangulationError> {
    dual_graph_from(tri, 0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrientationResult {
    pub orientable: bool,
    /// Per-tetrahedron sign, when orientable.
    pub assignment: Option<Vec<i8>>,
    /// A non-tree pairing whose induced gluing is orientation preserving.
    pub witness: Option<FacePairing>,
}

/// Whether a pairing is consistent with the two signs: odd permutations
/// join tetrahedra of equal sign, even ones tetrahedra of opposite sign.
pub fn pairing_consistent(perm: &Perm4, sign_a: i8, sign_b: i8) -> bool {
    perm.is_odd() == (sign_a == sign_b)
}

pub fn orientation_check(tri: &Triangulation) -> Result<OrientationResult, TriangulationError> {
    orientation_check_from(tri, 0)
}

/// Propagates signs along a spanning tree of the dual graph rooted at
/// `root`, then tests the `t + 1` remaining pairings.
pub fn orientation_check_from(tri: &Triangulation, root: usize) -> Result<OrientationResult, TriangulationError> {
    let graph = dual_graph_from(tri, root)?;
    let n = tri.size();
    let mut sign = vec![0i8; n];
    sign[root] = 1;
    // tree edges were discovered breadth first, so walk the same order
    let mut queue = VecDeque::from([root]);
    while let Some(tet) = queue.pop_front() {
        for face in 0..4u8 {
            let (other, perm) = tri.adjacent(tet, face);
            if sign[other] == 0 {
                sign[other] = if perm.is_odd() { sign[tet] } else { -sign[tet] };
                queue.push_back(other);
            }
        }
    }
    let witness = graph
        .non_tree_edges()
        .find(|e| !pairing_consistent(&e.perm, sign[e.source.tet], sign[e.target.tet]))
        .copied();
    Ok(match witness {
        None => OrientationResult {
            orientable: true,
            assignment: Some(sign),
            witness: None,
        },
        Some(w) => OrientationResult {
            orientable: false,
            assignment: None,
            witness: Some(w),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const ONE_TET: &str = "# one tetrahedron, two self-gluings\nt=1\n0:0 -> 0:1 perm=1023\n0:2 -> 0:3 perm=0132\n";

    #[test]
    fn parses_minimal_input() {
        let tri = Triangulation::parse(ONE_TET).unwrap();
        assert_eq!(tri.size(), 1);
        assert_eq!(tri.adjacent(0, 1), (0, Perm4::new([1, 0, 2, 3]).unwrap()));
        assert_eq!(tri.pairings().len(), 2);
    }

    #[test]
    fn whitespace_and_both_directions() {
        let text = "t = 1\n 0 : 0->0:1 perm = 1023 \n0:1 -> 0:0 perm=1023\n0:2->0:3 perm=0132";
        assert_eq!(Triangulation::parse(text).unwrap(), Triangulation::parse(ONE_TET).unwrap());
    }

    #[test]
    fn rejects_non_involution() {
        let text = "t=2\n0:1 -> 0:2 perm=0213\n0:2 -> 1:3 perm=0132\n";
        assert!(matches!(
            Triangulation::parse(text),
            Err(TriangulationError::NotInvolution { .. })
        ));
    }

    #[test]
    fn rejects_bad_input() {
        let self_glued = "t=1\n0:0 -> 0:0 perm=0123\n";
        assert!(matches!(
            Triangulation::parse(self_glued),
            Err(TriangulationError::SelfGluedFace { .. })
        ));
        let out_of_range = "t=1\n0:0 -> 3:1 perm=1023\n";
        assert!(matches!(
            Triangulation::parse(out_of_range),
            Err(TriangulationError::Syntax { line: 2, .. })
        ));
        let bad_face = "t=1\n0:7 -> 0:1 perm=1023\n";
        assert!(matches!(
            Triangulation::parse(bad_face),
            Err(TriangulationError::Syntax { line: 2, column: 3, .. })
        ));
        let unglued = "t=1\n0:0 -> 0:1 perm=1023\n";
        assert!(matches!(
            Triangulation::parse(unglued),
            Err(TriangulationError::Unglued { tet: 0, face: 2 })
        ));
        let mismatch = "t=1\n0:0 -> 0:1 perm=2103\n0:2 -> 0:3 perm=0132\n";
        assert!(matches!(
            Triangulation::parse(mismatch),
            Err(TriangulationError::FaceMismatch { .. })
        ));
        let not_perm = "t=1\n0:0 -> 0:1 perm=1123\n";
        assert!(matches!(
            Triangulation::parse(not_perm),
            Err(TriangulationError::Syntax { line: 2, column: 17, .. })
        ));
        assert!(Triangulation::parse("# nothing\n").is_err());
        assert!(matches!(Triangulation::parse("t=0\n"), Err(TriangulationError::Empty)));
        assert!(Triangulation::parse("t=1\n0:0 => 0:1 perm=1023\n").is_err());
    }

    #[test]
    fn text_round_trip() {
        let tri = Triangulation::parse(ONE_TET).unwrap();
        assert_eq!(Triangulation::parse(&tri.to_text()).unwrap(), tri);
    }

    #[test]
    fn perm_basics() {
        let p = Perm4::new([1, 2, 3, 0]).unwrap();
        assert!(p.is_odd());
        assert_eq!(p.compose(&p.inverse()), Perm4::IDENTITY);
        assert!(!Perm4::IDENTITY.is_odd());
        assert_eq!(Perm4::all().count(), 24);
        assert_eq!(Perm4::all().filter(|p| p.is_odd()).count(), 12);
    }

    #[test]
    fn parity_union_find_detects_contradiction() {
        let mut uf = ParityUnionFind::new(4);
        assert!(uf.union(0, 1, true));
        assert!(uf.union(1, 2, true));
        assert_eq!(uf.find(2), (0, false));
        assert!(!uf.union(0, 2, true));
        assert!(uf.union(0, 2, false));
    }

    #[test]
    fn relabel_preserves_pairing_count() {
        let text = "t=2\n0:0 -> 1:0 perm=0123\n0:1 -> 1:1 perm=0123\n0:2 -> 1:2 perm=0123\n0:3 -> 1:3 perm=0123\n";
        let tri = Triangulation::parse(text).unwrap();
        let swapped = tri.relabeled(&[1, 0]);
        assert_eq!(swapped.pairings().len(), 4);
        assert_eq!(swapped.relabeled(&[1, 0]), tri);
    }

    #[test]
    fn doubled_tetrahedron_is_sphere_but_mirror_gluing() {
        // two tetrahedra glued by the identity on every face: the double of
        // a 3-ball is S^3, but identity gluings are even permutations, so the
        // signs must differ across every face
        let text = "t=2\n0:0 -> 1:0 perm=0123\n0:1 -> 1:1 perm=0123\n0:2 -> 1:2 perm=0123\n0:3 -> 1:3 perm=0123\n";
        let tri = Triangulation::parse(text).unwrap();
        let report = validate(&tri);
        assert_eq!((report.vertices, report.edges, report.faces), (4, 6, 4));
        assert_eq!(report.euler_characteristic, 0);
        assert!(report.pass);
        let orient = orientation_check(&tri).unwrap();
        assert!(orient.orientable);
        assert_eq!(orient.assignment, Some(vec![1, -1]));
    }

    #[test]
    fn disconnected_is_an_error() {
        let text = "t=2\n0:0 -> 0:1 perm=1023\n0:2 -> 0:3 perm=0132\n1:0 -> 1:1 perm=1023\n1:2 -> 1:3 perm=0132\n";
        let tri = Triangulation::parse(text).unwrap();
        assert!(!tri.is_connected());
        assert_eq!(orientation_check(&tri), Err(TriangulationError::Disconnected));
    }
}
