//! Conforming triangulations with newest-vertex bisection (NVB).
//!
//! Every triangle stores its vertices as `[v0, v1, v2]` in counter-clockwise
//! order. `v0` is the newest vertex and the refinement edge is `(v1, v2)`.
//! Bisecting `[v0, v1, v2]` at the midpoint `m` of the refinement edge yields
//! the children `[m, v0, v1]` and `[m, v2, v0]`, so the refinement edge of
//! each child is an edge of its parent.
//!
//! Meshes are immutable. [`Mesh::refine_nvb`] returns a new mesh that keeps
//! all coarse vertex indices and appends the new midpoints, which is what
//! makes prolongation between nested meshes a cheap index walk.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::{Error, Point, Result};

static NEXT_MESH_ID: AtomicU64 = AtomicU64::new(1);

fn fresh_id() -> u64 {
    NEXT_MESH_ID.fetch_add(1, Ordering::Relaxed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundaryLabel {
    Interior,
    Dirichlet,
    Neumann,
}

impl BoundaryLabel {
    fn as_char(self) -> char {
        match self {
            BoundaryLabel::Interior => 'I',
            BoundaryLabel::Dirichlet => 'D',
            BoundaryLabel::Neumann => 'N',
        }
    }

    fn from_token(s: &str) -> Option<Self> {
        match s {
            "I" | "i" => Some(BoundaryLabel::Interior),
            "D" | "d" => Some(BoundaryLabel::Dirichlet),
            "N" | "n" => Some(BoundaryLabel::Neumann),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DomainId {
    /// `(-1,1)^2` minus the triangle `conv{(0,0), (-1,0), (-1,-1)}`.
    ZShape,
    /// `(-1,1)^2` minus `[0,1] x [-1,0]`.
    LShape,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Triangle {
    pub v: [usize; 3],
    pub generation: u32,
}

impl Triangle {
    /// Vertices of the edge opposite local vertex `i`.
    pub fn edge(&self, i: usize) -> [usize; 2] {
        [self.v[(i + 1) % 3], self.v[(i + 2) % 3]]
    }

    pub fn refinement_edge(&self) -> [usize; 2] {
        self.edge(0)
    }
}

/// One edge of the triangulation together with its incident triangles.
///
/// `triangles[k]` is `(triangle index, local edge index)`; the second slot is
/// empty for boundary edges.
#[derive(Clone, Debug)]
pub struct Edge {
    pub v: [usize; 2],
    pub triangles: [Option<(usize, usize)>; 2],
    pub label: BoundaryLabel,
}

impl Edge {
    pub fn is_boundary(&self) -> bool {
        self.triangles[1].is_none()
    }

    /// The neighbour of triangle `t` across this edge.
    pub fn other(&self, t: usize) -> Option<(usize, usize)> {
        match self.triangles {
            [Some(a), Some(b)] if a.0 == t => Some(b),
            [Some(a), Some(b)] if b.0 == t => Some(a),
            _ => None,
        }
    }
}

/// Cached affine geometry of one triangle.
#[derive(Clone, Copy, Debug)]
pub struct ElementGeometry {
    pub area: f64,
    /// Gradients of the barycentric coordinates.
    pub grads: [Point; 3],
    /// Outward unit normal of the edge opposite local vertex `i`.
    pub normals: [Point; 3],
    pub edge_lengths: [f64; 3],
}

#[inline]
pub(crate) fn edge_key(a: usize, b: usize) -> [usize; 2] {
    if a < b {
        [a, b]
    } else {
        [b, a]
    }
}

fn signed_area(a: Point, b: Point, c: Point) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
}

fn dist2(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)
}

#[derive(Clone, Debug)]
pub struct Mesh {
    id: u64,
    vertices: Vec<Point>,
    triangles: Vec<Triangle>,
    boundary: HashMap<[usize; 2], BoundaryLabel>,
    edges: Vec<Edge>,
    edge_index: HashMap<[usize; 2], usize>,
    tri_edges: Vec<[usize; 3]>,
    geometry: Vec<ElementGeometry>,
    parent: Vec<usize>,
    /// `(mesh id, vertex count)` of every coarser mesh this one descends from.
    ancestry: Vec<(u64, usize)>,
    /// Edge endpoints of every vertex with index `>= root_vertices`.
    vertex_parents: Vec<[usize; 2]>,
    root_vertices: usize,
}

impl Mesh {
    /// Builds a root mesh from raw data.
    ///
    /// Triangles are taken as given: the first vertex is the newest vertex.
    /// `boundary` assigns Dirichlet or Neumann to every boundary edge.
    pub fn new(
        vertices: Vec<Point>,
        triangles: Vec<[usize; 3]>,
        boundary: HashMap<[usize; 2], BoundaryLabel>,
    ) -> Result<Mesh> {
        let n = vertices.len();
        for (i, p) in vertices.iter().enumerate() {
            if !p[0].is_finite() || !p[1].is_finite() {
                return Err(Error::InvalidMesh(format!("vertex {i} has non-finite coordinates")));
            }
        }
        for (t, tri) in triangles.iter().enumerate() {
            if tri.iter().any(|&v| v >= n) {
                return Err(Error::InvalidMesh(format!("triangle {t} references a missing vertex")));
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(Error::InvalidMesh(format!("triangle {t} repeats a vertex")));
            }
        }
        let triangles = triangles
            .into_iter()
            .map(|v| Triangle { v, generation: 0 })
            .collect::<Vec<_>>();
        let parent = (0..triangles.len()).collect();
        let boundary = boundary
            .into_iter()
            .filter(|(_, l)| *l != BoundaryLabel::Interior)
            .map(|(k, l)| (edge_key(k[0], k[1]), l))
            .collect();
        let mesh = Mesh::assemble(fresh_id(), vertices, triangles, boundary, parent, Vec::new(), Vec::new(), n)?;
        mesh.check_conformity()?;
        Ok(mesh)
    }

    /// Builds a root mesh, orienting every triangle counter-clockwise and
    /// choosing its longest edge as refinement edge (ties go to the edge with
    /// the lexicographically smaller vertex pair). Boundary edges are
    /// labelled by `label(a, b)` from their endpoint coordinates.
    pub fn with_longest_edge<F>(vertices: Vec<Point>, triangles: &[[usize; 3]], label: F) -> Result<Mesh>
    where
        F: Fn(Point, Point) -> BoundaryLabel,
    {
        let mut tris = Vec::with_capacity(triangles.len());
        for (t, &tri) in triangles.iter().enumerate() {
            if tri.iter().any(|&v| v >= vertices.len()) {
                return Err(Error::InvalidMesh(format!("triangle {t} references a missing vertex")));
            }
            let mut tri = tri;
            if signed_area(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]) < 0.0 {
                tri.swap(1, 2);
            }
            let key_of = |i: usize| {
                let [a, b] = edge_key(tri[(i + 1) % 3], tri[(i + 2) % 3]);
                let len = dist2(vertices[a], vertices[b]);
                (len, std::cmp::Reverse([a, b]))
            };
            let best = (0..3)
                .max_by(|&i, &j| key_of(i).partial_cmp(&key_of(j)).unwrap_or(std::cmp::Ordering::Equal))
                .unwrap_or(0);
            tris.push([tri[best], tri[(best + 1) % 3], tri[(best + 2) % 3]]);
        }

        let mut count: HashMap<[usize; 2], usize> = HashMap::new();
        for tri in &tris {
            for i in 0..3 {
                *count.entry(edge_key(tri[(i + 1) % 3], tri[(i + 2) % 3])).or_default() += 1;
            }
        }
        let boundary = count
            .into_iter()
            .filter(|&(_, c)| c == 1)
            .map(|(k, _)| (k, label(vertices[k[0]], vertices[k[1]])))
            .collect();
        Mesh::new(vertices, tris, boundary)
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        id: u64,
        vertices: Vec<Point>,
        triangles: Vec<Triangle>,
        boundary: HashMap<[usize; 2], BoundaryLabel>,
        parent: Vec<usize>,
        ancestry: Vec<(u64, usize)>,
        vertex_parents: Vec<[usize; 2]>,
        root_vertices: usize,
    ) -> Result<Mesh> {
        let mut edges: Vec<Edge> = Vec::with_capacity(triangles.len() * 3 / 2 + 8);
        let mut edge_index: HashMap<[usize; 2], usize> = HashMap::with_capacity(triangles.len() * 3 / 2 + 8);
        let mut tri_edges = Vec::with_capacity(triangles.len());
        let mut geometry = Vec::with_capacity(triangles.len());

        for (t, tri) in triangles.iter().enumerate() {
            let p = [vertices[tri.v[0]], vertices[tri.v[1]], vertices[tri.v[2]]];
            let area = signed_area(p[0], p[1], p[2]);
            if !(area > 0.0) {
                return Err(Error::DegenerateTriangle(t));
            }
            let mut grads = [[0.0; 2]; 3];
            let mut normals = [[0.0; 2]; 3];
            let mut edge_lengths = [0.0; 3];
            for i in 0..3 {
                let a = p[(i + 1) % 3];
                let b = p[(i + 2) % 3];
                grads[i] = [(a[1] - b[1]) / (2.0 * area), (b[0] - a[0]) / (2.0 * area)];
                let len = dist2(a, b).sqrt();
                edge_lengths[i] = len;
                // outward normal of the edge a->b for a counter-clockwise triangle
                normals[i] = [(b[1] - a[1]) / len, (a[0] - b[0]) / len];
            }
            geometry.push(ElementGeometry { area, grads, normals, edge_lengths });

            let mut te = [0usize; 3];
            for (i, slot) in te.iter_mut().enumerate() {
                let [a, b] = tri.edge(i);
                let key = edge_key(a, b);
                let e = *edge_index.entry(key).or_insert_with(|| {
                    edges.push(Edge { v: key, triangles: [None, None], label: BoundaryLabel::Interior });
                    edges.len() - 1
                });
                let edge = &mut edges[e];
                if edge.triangles[0].is_none() {
                    edge.triangles[0] = Some((t, i));
                } else if edge.triangles[1].is_none() {
                    edge.triangles[1] = Some((t, i));
                } else {
                    return Err(Error::NonConforming(format!("edge {key:?} is shared by more than two triangles")));
                }
                *slot = e;
            }
            tri_edges.push(te);
        }
        for edge in edges.iter_mut() {
            edge.label = if edge.is_boundary() {
                boundary.get(&edge.v).copied().unwrap_or(BoundaryLabel::Interior)
            } else {
                BoundaryLabel::Interior
            };
        }

        Ok(Mesh {
            id,
            vertices,
            triangles,
            boundary,
            edges,
            edge_index,
            tri_edges,
            geometry,
            parent,
            ancestry,
            vertex_parents,
            root_vertices,
        })
    }

    /// Initial triangulation of a benchmark domain.
    pub fn initial(domain: DomainId) -> Mesh {
        match domain {
            DomainId::ZShape => zshape_mesh(),
            DomainId::LShape => lshape_mesh(),
        }
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn geometry(&self, t: usize) -> &ElementGeometry {
        &self.geometry[t]
    }

    /// Edge indices of triangle `t`, ordered by the opposite local vertex.
    pub fn triangle_edges(&self, t: usize) -> [usize; 3] {
        self.tri_edges[t]
    }

    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_index.get(&edge_key(a, b)).copied()
    }

    /// Index of the triangle in the previous mesh this triangle came from.
    pub fn parent(&self, t: usize) -> usize {
        self.parent[t]
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn triangle_points(&self, t: usize) -> [Point; 3] {
        let v = self.triangles[t].v;
        [self.vertices[v[0]], self.vertices[v[1]], self.vertices[v[2]]]
    }

    pub fn centroid(&self, t: usize) -> Point {
        let p = self.triangle_points(t);
        [(p[0][0] + p[1][0] + p[2][0]) / 3.0, (p[0][1] + p[1][1] + p[2][1]) / 3.0]
    }

    pub fn area(&self, t: usize) -> f64 {
        self.geometry[t].area
    }

    pub fn total_area(&self) -> f64 {
        self.geometry.iter().map(|g| g.area).sum()
    }

    /// `h_T = |T|^{1/2}` for every triangle.
    pub fn mesh_size(&self) -> Vec<f64> {
        self.geometry.iter().map(|g| g.area.sqrt()).collect()
    }

    /// Smallest interior angle over all triangles, in radians.
    pub fn min_angle(&self) -> f64 {
        let mut min = f64::INFINITY;
        for t in 0..self.triangles.len() {
            let p = self.triangle_points(t);
            for i in 0..3 {
                let a = p[i];
                let b = p[(i + 1) % 3];
                let c = p[(i + 2) % 3];
                let u = [b[0] - a[0], b[1] - a[1]];
                let w = [c[0] - a[0], c[1] - a[1]];
                let cos = (u[0] * w[0] + u[1] * w[1]) / (dist2(a, b).sqrt() * dist2(a, c).sqrt());
                min = min.min(cos.clamp(-1.0, 1.0).acos());
            }
        }
        min
    }

    /// Vertex flags: `true` for every endpoint of a Dirichlet edge.
    pub fn dirichlet_vertices(&self) -> Vec<bool> {
        let mut flags = vec![false; self.vertices.len()];
        for e in &self.edges {
            if e.label == BoundaryLabel::Dirichlet {
                flags[e.v[0]] = true;
                flags[e.v[1]] = true;
            }
        }
        flags
    }

    /// Checks that every edge has one or two incident triangles, that interior
    /// edges are traversed in opposite directions by their two triangles, and
    /// that every boundary edge carries a Dirichlet or Neumann label.
    pub fn check_conformity(&self) -> Result<()> {
        for edge in &self.edges {
            match edge.triangles {
                [Some((t, i)), None] => {
                    if edge.label == BoundaryLabel::Interior {
                        let [a, b] = self.triangles[t].edge(i);
                        return Err(Error::NonConforming(format!(
                            "edge ({a}, {b}) has one triangle but no boundary label (hanging vertex or unlabelled boundary)"
                        )));
                    }
                }
                [Some((t, i)), Some((s, j))] => {
                    let e1 = self.triangles[t].edge(i);
                    let e2 = self.triangles[s].edge(j);
                    if e1[0] != e2[1] || e1[1] != e2[0] {
                        return Err(Error::NonConforming(format!(
                            "triangles {t} and {s} induce the same orientation on edge {:?}",
                            edge.v
                        )));
                    }
                }
                _ => return Err(Error::NonConforming(format!("edge {:?} has no triangle", edge.v))),
            }
        }
        Ok(())
    }

    /// Coarsest NVB refinement in which every marked triangle is bisected at
    /// least once.
    ///
    /// Closure works on edges: an edge gets marked together with the
    /// refinement edge of every triangle containing it, until each triangle
    /// with a marked edge also has its refinement edge marked. Triangles are
    /// then bisected recursively along marked edges.
    pub fn refine_nvb(&self, marked: &[usize]) -> Mesh {
        if marked.is_empty() {
            return self.clone();
        }

        let mut edge_marked = vec![false; self.edges.len()];
        let mut stack: Vec<usize> = marked.iter().copied().filter(|&t| t < self.triangles.len()).collect();
        while let Some(t) = stack.pop() {
            let e = self.tri_edges[t][0];
            if edge_marked[e] {
                continue;
            }
            edge_marked[e] = true;
            for &(s, _) in self.edges[e].triangles.iter().flatten() {
                if s != t {
                    stack.push(s);
                }
            }
        }

        let mut vertices = self.vertices.clone();
        let mut vertex_parents = self.vertex_parents.clone();
        let mut boundary = self.boundary.clone();
        let mut midpoints: HashMap<[usize; 2], usize> = HashMap::new();
        for (e, edge) in self.edges.iter().enumerate() {
            if !edge_marked[e] {
                continue;
            }
            let [a, b] = edge.v;
            let (pa, pb) = (self.vertices[a], self.vertices[b]);
            let m = vertices.len();
            vertices.push([0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])]);
            vertex_parents.push([a, b]);
            midpoints.insert(edge.v, m);
            if let Some(label) = boundary.remove(&edge.v) {
                boundary.insert(edge_key(a, m), label);
                boundary.insert(edge_key(m, b), label);
            }
        }

        let mut triangles = Vec::with_capacity(self.triangles.len() + 2 * midpoints.len());
        let mut parent = Vec::with_capacity(triangles.capacity());
        for (t, tri) in self.triangles.iter().enumerate() {
            bisect(*tri, t, &midpoints, &mut triangles, &mut parent);
        }

        let mut ancestry = self.ancestry.clone();
        ancestry.push((self.id, self.vertices.len()));
        let mesh = Mesh::assemble(
            fresh_id(),
            vertices,
            triangles,
            boundary,
            parent,
            ancestry,
            vertex_parents,
            self.root_vertices,
        )
        .expect("bisection of a valid mesh yields a valid mesh");
        debug_assert!(mesh.check_conformity().is_ok());
        mesh
    }

    /// Refinement with every triangle marked.
    pub fn uniform_refine(&self) -> Mesh {
        let all: Vec<usize> = (0..self.triangles.len()).collect();
        self.refine_nvb(&all)
    }

    /// Vertex count of the ancestor with the given id, if `self` descends
    /// from it (or is it).
    pub(crate) fn ancestor_vertex_count(&self, id: u64) -> Option<usize> {
        if id == self.id {
            return Some(self.vertices.len());
        }
        self.ancestry.iter().find(|(a, _)| *a == id).map(|&(_, n)| n)
    }

    /// Endpoints of the edge whose midpoint created vertex `v`, or `None` for
    /// root vertices.
    pub fn vertex_parents(&self, v: usize) -> Option<[usize; 2]> {
        v.checked_sub(self.root_vertices).map(|i| self.vertex_parents[i])
    }

    /// Barycentric coordinates of `p` with respect to triangle `t`.
    pub fn barycentric(&self, t: usize, p: Point) -> [f64; 3] {
        let g = &self.geometry[t];
        let v0 = self.vertices[self.triangles[t].v[0]];
        let d = [p[0] - v0[0], p[1] - v0[1]];
        let l1 = g.grads[1][0] * d[0] + g.grads[1][1] * d[1];
        let l2 = g.grads[2][0] * d[0] + g.grads[2][1] * d[1];
        [1.0 - l1 - l2, l1, l2]
    }

    /// First triangle containing `p` (closed triangles, small tolerance).
    pub fn locate(&self, p: Point) -> Option<(usize, [f64; 3])> {
        const TOL: f64 = 1e-12;
        (0..self.triangles.len()).find_map(|t| {
            let b = self.barycentric(t, p);
            (b.iter().all(|&x| x >= -TOL)).then_some((t, b))
        })
    }

    /// Plain-text dump: `v x y` per vertex and `t i j k l0 l1 l2` per
    /// triangle, where `l_i` labels the edge opposite local vertex `i` with
    /// `I`, `D`, or `N`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for p in &self.vertices {
            let _ = writeln!(out, "v {:?} {:?}", p[0], p[1]);
        }
        for (t, tri) in self.triangles.iter().enumerate() {
            let labels = self.tri_edges[t].map(|e| self.edges[e].label.as_char());
            let _ = writeln!(
                out,
                "t {} {} {} {} {} {}",
                tri.v[0], tri.v[1], tri.v[2], labels[0], labels[1], labels[2]
            );
        }
        out
    }

    /// Parses the format written by [`Mesh::to_text`]. Blank lines and lines
    /// starting with `#` are ignored.
    pub fn from_text(text: &str) -> Result<Mesh> {
        let mut vertices = Vec::new();
        let mut triangles = Vec::new();
        let mut labels: Vec<(usize, [BoundaryLabel; 3])> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let err = |msg: &str| Error::Parse { line: line_no, msg: msg.to_string() };
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut tok = line.split_whitespace();
            match tok.next() {
                Some("v") => {
                    let mut coord = || -> Result<f64> {
                        let s = tok.next().ok_or_else(|| err("missing coordinate"))?;
                        let x: f64 = s.parse().map_err(|_| err("bad coordinate"))?;
                        if !x.is_finite() {
                            return Err(err("non-finite coordinate"));
                        }
                        Ok(x)
                    };
                    let x = coord()?;
                    let y = coord()?;
                    if tok.next().is_some() {
                        return Err(err("trailing tokens after vertex"));
                    }
                    vertices.push([x, y]);
                }
                Some("t") => {
                    let mut v = [0usize; 3];
                    for slot in v.iter_mut() {
                        let s = tok.next().ok_or_else(|| err("missing vertex index"))?;
                        *slot = s.parse().map_err(|_| err("bad vertex index"))?;
                    }
                    let mut l = [BoundaryLabel::Interior; 3];
                    for slot in l.iter_mut() {
                        let s = tok.next().ok_or_else(|| err("missing edge label"))?;
                        *slot = BoundaryLabel::from_token(s).ok_or_else(|| err("bad edge label"))?;
                    }
                    if tok.next().is_some() {
                        return Err(err("trailing tokens after triangle"));
                    }
                    labels.push((line_no, l));
                    triangles.push(v);
                }
                _ => return Err(err("expected 'v' or 't'")),
            }
        }

        let mut boundary: HashMap<[usize; 2], BoundaryLabel> = HashMap::new();
        let mut seen: HashMap<[usize; 2], (usize, BoundaryLabel)> = HashMap::new();
        for (tri, (line, l)) in triangles.iter().zip(&labels) {
            if tri.iter().any(|&v| v >= vertices.len()) {
                return Err(Error::Parse { line: *line, msg: "vertex index out of range".into() });
            }
            for i in 0..3 {
                let key = edge_key(tri[(i + 1) % 3], tri[(i + 2) % 3]);
                let entry = seen.entry(key).or_insert((0, l[i]));
                if entry.1 != l[i] {
                    return Err(Error::Parse { line: *line, msg: format!("conflicting labels on edge {key:?}") });
                }
                entry.0 += 1;
            }
        }
        for (key, (count, label)) in seen {
            match (count, label) {
                (1, BoundaryLabel::Interior) => {
                    return Err(Error::InvalidMesh(format!("boundary edge {key:?} is labelled interior")))
                }
                (1, l) => {
                    boundary.insert(key, l);
                }
                (2, BoundaryLabel::Interior) => {}
                (2, _) => return Err(Error::InvalidMesh(format!("interior edge {key:?} carries a boundary label"))),
                _ => return Err(Error::NonConforming(format!("edge {key:?} is shared by more than two triangles"))),
            }
        }
        Mesh::new(vertices, triangles, boundary)
    }

    /// Re-roots a mesh: same geometry, fresh id, generation 0, no ancestry.
    fn into_root(self) -> Mesh {
        let tris: Vec<[usize; 3]> = self.triangles.iter().map(|t| t.v).collect();
        Mesh::new(self.vertices, tris, self.boundary).expect("re-rooting keeps a valid mesh")
    }
}

fn bisect(
    tri: Triangle,
    origin: usize,
    midpoints: &HashMap<[usize; 2], usize>,
    out: &mut Vec<Triangle>,
    parent: &mut Vec<usize>,
) {
    let [v0, v1, v2] = tri.v;
    match midpoints.get(&edge_key(v1, v2)) {
        None => {
            out.push(tri);
            parent.push(origin);
        }
        Some(&m) => {
            let generation = tri.generation + 1;
            bisect(Triangle { v: [m, v0, v1], generation }, origin, midpoints, out, parent);
            bisect(Triangle { v: [m, v2, v0], generation }, origin, midpoints, out, parent);
        }
    }
}

/// Z-shape: seven triangles aligned with `omega = conv{(1,0),(1,1),(0,1)}`,
/// refined once so that the initial mesh has interior vertices.
fn zshape_mesh() -> Mesh {
    let vertices = vec![
        [-1.0, -1.0],
        [0.0, -1.0],
        [1.0, -1.0],
        [1.0, 0.0],
        [1.0, 1.0],
        [0.0, 1.0],
        [-1.0, 1.0],
        [-1.0, 0.0],
        [0.0, 0.0],
    ];
    let triangles = [[1, 2, 3], [1, 3, 8], [8, 3, 5], [3, 4, 5], [7, 8, 6], [8, 5, 6], [0, 1, 8]];
    let coarse = Mesh::with_longest_edge(vertices, &triangles, |_, _| BoundaryLabel::Dirichlet)
        .expect("static Z-shape mesh is valid");
    coarse.uniform_refine().into_root()
}

/// L-shape: three unit squares, each cut along one diagonal. Neumann on the
/// outer boundary of `[-1,1]^2`, Dirichlet on the two re-entrant edges.
fn lshape_mesh() -> Mesh {
    let vertices = vec![
        [-1.0, -1.0],
        [0.0, -1.0],
        [-1.0, 0.0],
        [0.0, 0.0],
        [1.0, 0.0],
        [-1.0, 1.0],
        [0.0, 1.0],
        [1.0, 1.0],
    ];
    let triangles = [[0, 1, 3], [0, 3, 2], [2, 3, 6], [2, 6, 5], [3, 4, 7], [3, 7, 6]];
    Mesh::with_longest_edge(vertices, &triangles, lshape_label).expect("static L-shape mesh is valid")
}

fn lshape_label(a: Point, b: Point) -> BoundaryLabel {
    let m = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
    let on_positive_x_axis = m[1].abs() < 1e-12 && m[0] > 0.0;
    let on_negative_y_axis = m[0].abs() < 1e-12 && m[1] < 0.0;
    if on_positive_x_axis || on_negative_y_axis {
        BoundaryLabel::Dirichlet
    } else {
        BoundaryLabel::Neumann
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> Mesh {
        let vertices = vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        Mesh::with_longest_edge(vertices, &[[0, 1, 2], [0, 2, 3]], |_, _| BoundaryLabel::Dirichlet).unwrap()
    }

    #[test]
    fn initial_areas() {
        let z = Mesh::initial(DomainId::ZShape);
        assert!((z.total_area() - 3.5).abs() < 1e-14);
        let l = Mesh::initial(DomainId::LShape);
        assert!((l.total_area() - 3.0).abs() < 1e-14);
        assert_eq!(l.num_triangles(), 6);
    }

    #[test]
    fn zshape_boundary_is_dirichlet() {
        let z = Mesh::initial(DomainId::ZShape);
        z.check_conformity().unwrap();
        for e in z.edges().iter().filter(|e| e.is_boundary()) {
            assert_eq!(e.label, BoundaryLabel::Dirichlet);
        }
        // omega is a union of whole triangles
        for t in 0..z.num_triangles() {
            let inside = z.triangle_points(t).iter().all(|p| p[0] + p[1] >= 1.0 - 1e-14);
            let c = z.centroid(t);
            assert_eq!(inside, c[0] + c[1] > 1.0);
        }
    }

    #[test]
    fn lshape_labels() {
        let l = Mesh::initial(DomainId::LShape);
        let mut dirichlet = 0;
        for e in l.edges().iter().filter(|e| e.is_boundary()) {
            let a = l.vertices()[e.v[0]];
            let b = l.vertices()[e.v[1]];
            let outer = [a, b].iter().all(|p| p[0].abs() == 1.0) || [a, b].iter().all(|p| p[1].abs() == 1.0);
            if outer {
                assert_eq!(e.label, BoundaryLabel::Neumann);
            } else {
                assert_eq!(e.label, BoundaryLabel::Dirichlet);
                dirichlet += 1;
            }
        }
        assert_eq!(dirichlet, 2);
    }

    #[test]
    fn empty_marking_is_identity() {
        let m = Mesh::initial(DomainId::LShape);
        let r = m.refine_nvb(&[]);
        assert_eq!(r.vertices(), m.vertices());
        assert_eq!(r.triangles(), m.triangles());
        assert_eq!(r.id(), m.id());
    }

    #[test]
    fn square_single_mark_traced_by_hand() {
        // Both triangles have the diagonal (0,2) as longest edge, so the
        // pair is compatible: marking one bisects both along the diagonal,
        // producing the midpoint (0.5, 0.5) and four triangles.
        let m = unit_square();
        assert_eq!(m.triangles()[0].refinement_edge(), [2, 0]);
        assert_eq!(m.triangles()[1].refinement_edge(), [0, 2]);
        let r = m.refine_nvb(&[0]);
        assert_eq!(r.num_triangles(), 4);
        assert_eq!(r.num_vertices(), 5);
        assert_eq!(r.vertices()[4], [0.5, 0.5]);
        let expected = [[4, 1, 2], [4, 0, 1], [4, 3, 0], [4, 2, 3]];
        let got: Vec<[usize; 3]> = r.triangles().iter().map(|t| t.v).collect();
        assert_eq!(got, expected);
        assert_eq!(r.parent(0), 0);
        assert_eq!(r.parent(3), 1);
        r.check_conformity().unwrap();

        // Marking a child now forces closure through the outer edge only.
        let r2 = r.refine_nvb(&[0]);
        assert_eq!(r2.num_triangles(), 5);
        r2.check_conformity().unwrap();
    }

    #[test]
    fn incompatible_neighbour_is_refined_first() {
        // Triangle 0 has refinement edge (1,2), its neighbour across that
        // edge has refinement edge (2,3) instead.
        let vertices = vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.2, 1.3]];
        let mut boundary = HashMap::new();
        for e in [[0, 1], [0, 2], [1, 3], [2, 3]] {
            boundary.insert(e, BoundaryLabel::Dirichlet);
        }
        let m = Mesh::new(vertices, vec![[0, 1, 2], [1, 3, 2]], boundary).unwrap();
        assert_eq!(m.triangles()[1].refinement_edge(), [3, 2]);
        let r = m.refine_nvb(&[0]);
        // closure: edge (3,2) and (1,2) marked; triangle 1 bisected twice.
        assert_eq!(r.num_triangles(), 5);
        r.check_conformity().unwrap();
    }

    #[test]
    fn mark_all_at_least_doubles() {
        let m = Mesh::initial(DomainId::ZShape);
        let r = m.uniform_refine();
        assert!(r.num_triangles() >= 2 * m.num_triangles());
        for t in 0..r.num_triangles() {
            assert!(r.triangles()[t].generation >= 1);
        }
    }

    #[test]
    fn mesh_size_of_right_triangle() {
        let m = unit_square();
        let h = m.mesh_size();
        assert!((h[0] - 0.5f64.sqrt()).abs() < 1e-15);
        let r = m.refine_nvb(&[0]);
        for t in 0..r.num_triangles() {
            assert_eq!(r.area(t), 0.5 * m.area(r.parent(t)));
        }
    }

    #[test]
    fn text_round_trip() {
        let m = Mesh::initial(DomainId::LShape).uniform_refine();
        let text = m.to_text();
        let back = Mesh::from_text(&text).unwrap();
        assert_eq!(back.vertices(), m.vertices());
        let a: Vec<_> = back.triangles().iter().map(|t| t.v).collect();
        let b: Vec<_> = m.triangles().iter().map(|t| t.v).collect();
        assert_eq!(a, b);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn text_rejects_garbage() {
        assert!(matches!(Mesh::from_text("x 1 2"), Err(Error::Parse { line: 1, .. })));
        assert!(Mesh::from_text("v 0 0\nv 1 0\nv 0 1\nt 0 1 3 D D D").is_err());
        assert!(Mesh::from_text("v 0 0\nv 1 0\nv 0 1\nt 0 1 2 D I D").is_err());
        // clockwise triangle
        assert!(matches!(
            Mesh::from_text("v 0 0\nv 0 1\nv 1 0\nt 0 1 2 D D D"),
            Err(Error::DegenerateTriangle(0))
        ));
        assert!(Mesh::from_text("v 0 0\nv 1 0\nv 0 1\nt 0 1 2 D D D").is_ok());
    }

    #[test]
    fn locate_and_barycentric() {
        let m = unit_square();
        let (t, b) = m.locate([0.75, 0.25]).unwrap();
        assert_eq!(t, 0);
        assert!((b.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(m.locate([1.5, 0.5]).is_none());
    }
}
