//! Structured triangle meshes for the target domains.
//!
//! Every mesh is produced by mapping one of two templates: a crossed-diagonal
//! grid on a rectangle, or a graded polar grid on the unit disk. Rhombi come
//! from the unit square via the affine frame of the analytic construction,
//! ellipses from the unit disk via `diag(a, 1/a)`; boundary vertices of the
//! polar template lie exactly on the unit circle, so mapped boundary vertices
//! lie exactly on the target ellipse at every refinement.
//!
//! The mesh also carries the edge table used by quadratic elements: P2 nodes
//! are the vertices followed by one midpoint node per edge.

use crate::{Error, Result};
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Triangulation with the connectivity needed for P2 elements.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    /// Vertex coordinates.
    pub vertices: Vec<[f64; 2]>,
    /// Vertex index triples, positively oriented.
    pub triangles: Vec<[usize; 3]>,
    /// True for vertices on the domain boundary.
    pub boundary_vertex_flags: Vec<bool>,
    /// Unique edges as ascending vertex index pairs; edge `e` carries the
    /// P2 midpoint node `vertices.len() + e`.
    pub edges: Vec<[usize; 2]>,
    /// True for edges contained in exactly one triangle.
    pub boundary_edge_flags: Vec<bool>,
    /// Per triangle, the edge indices of (v0,v1), (v1,v2), (v2,v0).
    pub triangle_edges: Vec<[usize; 3]>,
}

fn signed_area(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
}

impl Mesh {
    /// Build and validate a mesh from raw lists.
    ///
    /// Checks positive orientation, rejects near-duplicate vertices
    /// (within 1e-12 in both coordinates), derives the edge table, and
    /// cross-checks the provided vertex boundary flags against the flags
    /// derived from edge incidence (an edge is boundary iff it belongs to
    /// exactly one triangle).
    pub fn from_lists(
        vertices: Vec<[f64; 2]>,
        triangles: Vec<[usize; 3]>,
        boundary_vertex_flags: Vec<bool>,
    ) -> Result<Self> {
        let nv = vertices.len();
        if boundary_vertex_flags.len() != nv {
            return Err(Error::Mesh(format!(
                "flag count {} does not match vertex count {nv}",
                boundary_vertex_flags.len()
            )));
        }
        for (t, tri) in triangles.iter().enumerate() {
            for &v in tri {
                if v >= nv {
                    return Err(Error::Mesh(format!(
                        "triangle {t} references vertex {v} of {nv}"
                    )));
                }
            }
            let area = signed_area(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]);
            if !(area > 0.0) {
                return Err(Error::Mesh(format!(
                    "triangle {t} has signed area {area}, need > 0"
                )));
            }
        }

        // Near-duplicate detection: sort by x, compare within a sliding window.
        let mut order: Vec<usize> = (0..nv).collect();
        order.sort_by(|&i, &j| vertices[i][0].total_cmp(&vertices[j][0]));
        for (pos, &i) in order.iter().enumerate() {
            for &j in order[pos + 1..].iter() {
                if vertices[j][0] - vertices[i][0] > 1e-12 {
                    break;
                }
                if (vertices[j][1] - vertices[i][1]).abs() <= 1e-12 {
                    return Err(Error::Mesh(format!(
                        "vertices {i} and {j} coincide within 1e-12"
                    )));
                }
            }
        }

        // Edge table; BTreeMap keeps edge numbering deterministic.
        let mut edge_ids: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut edge_count: Vec<usize> = Vec::new();
        let mut triangle_edges = vec![[0usize; 3]; triangles.len()];
        for (t, tri) in triangles.iter().enumerate() {
            for (slot, (a, b)) in [(tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])]
                .into_iter()
                .enumerate()
            {
                let key = (a.min(b), a.max(b));
                let next_id = edge_ids.len();
                let id = *edge_ids.entry(key).or_insert(next_id);
                if id == edge_count.len() {
                    edge_count.push(0);
                }
                edge_count[id] += 1;
                triangle_edges[t][slot] = id;
            }
        }
        let mut edges = vec![[0usize; 2]; edge_ids.len()];
        for (&(a, b), &id) in &edge_ids {
            edges[id] = [a, b];
        }
        let mut boundary_edge_flags = vec![false; edges.len()];
        for (id, &count) in edge_count.iter().enumerate() {
            match count {
                1 => boundary_edge_flags[id] = true,
                2 => {}
                n => {
                    return Err(Error::Mesh(format!(
                        "edge {:?} belongs to {n} triangles, need 1 or 2",
                        edges[id]
                    )))
                }
            }
        }

        // Vertex flags must agree with edge-derived boundary incidence.
        let mut derived = vec![false; nv];
        for (id, edge) in edges.iter().enumerate() {
            if boundary_edge_flags[id] {
                derived[edge[0]] = true;
                derived[edge[1]] = true;
            }
        }
        for v in 0..nv {
            if derived[v] != boundary_vertex_flags[v] {
                return Err(Error::Mesh(format!(
                    "vertex {v} boundary flag {} contradicts edge incidence {}",
                    boundary_vertex_flags[v], derived[v]
                )));
            }
        }

        Ok(Mesh {
            vertices,
            triangles,
            boundary_vertex_flags,
            edges,
            boundary_edge_flags,
            triangle_edges,
        })
    }

    /// Number of P2 nodes: vertices plus one midpoint per edge.
    pub fn node_count(&self) -> usize {
        self.vertices.len() + self.edges.len()
    }

    /// Coordinates of a P2 node (vertex, or chord midpoint of an edge).
    pub fn node_position(&self, node: usize) -> [f64; 2] {
        if node < self.vertices.len() {
            self.vertices[node]
        } else {
            let [a, b] = self.edges[node - self.vertices.len()];
            let (p, q) = (self.vertices[a], self.vertices[b]);
            [0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])]
        }
    }

    /// Whether a P2 node lies on the boundary.
    pub fn node_is_boundary(&self, node: usize) -> bool {
        if node < self.vertices.len() {
            self.boundary_vertex_flags[node]
        } else {
            self.boundary_edge_flags[node - self.vertices.len()]
        }
    }

    /// The six P2 node indices of a triangle, vertices then edge midpoints
    /// in the order (v0, v1, v2, m01, m12, m20).
    pub fn triangle_nodes(&self, t: usize) -> [usize; 6] {
        let [a, b, c] = self.triangles[t];
        let [e0, e1, e2] = self.triangle_edges[t];
        let nv = self.vertices.len();
        [a, b, c, nv + e0, nv + e1, nv + e2]
    }

    /// Sum of triangle areas.
    pub fn total_area(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| {
                signed_area(
                    self.vertices[t[0]],
                    self.vertices[t[1]],
                    self.vertices[t[2]],
                )
            })
            .sum()
    }

    /// Rebuild the mesh with vertices transformed by `f`, keeping the
    /// connectivity and boundary flags; fails if the map flips or
    /// degenerates a triangle.
    pub fn map_vertices(&self, f: impl Fn(f64, f64) -> (f64, f64)) -> Result<Mesh> {
        let vertices = self
            .vertices
            .iter()
            .map(|&[x, y]| {
                let (u, v) = f(x, y);
                [u, v]
            })
            .collect();
        Mesh::from_lists(
            vertices,
            self.triangles.clone(),
            self.boundary_vertex_flags.clone(),
        )
    }

    /// Serialize to the plain text format: a header line `NV NT`, then NV
    /// lines `x y flag`, then NT lines `i j k` (0-based vertex indices).
    pub fn write_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.vertices.len(), self.triangles.len());
        for (v, flag) in self.vertices.iter().zip(&self.boundary_vertex_flags) {
            let _ = writeln!(out, "{} {} {}", v[0], v[1], u8::from(*flag));
        }
        for t in &self.triangles {
            let _ = writeln!(out, "{} {} {}", t[0], t[1], t[2]);
        }
        out
    }

    /// Parse the text format written by [`Mesh::write_text`].
    pub fn read_text(text: &str) -> Result<Mesh> {
        let mut tokens = text.split_whitespace();
        let mut next = |what: &str| {
            tokens
                .next()
                .ok_or_else(|| Error::Mesh(format!("truncated mesh text: missing {what}")))
        };
        let nv: usize = parse(next("vertex count")?)?;
        let nt: usize = parse(next("triangle count")?)?;
        let mut vertices = Vec::with_capacity(nv);
        let mut flags = Vec::with_capacity(nv);
        for _ in 0..nv {
            let x: f64 = parse(next("vertex x")?)?;
            let y: f64 = parse(next("vertex y")?)?;
            let flag: u8 = parse(next("vertex flag")?)?;
            vertices.push([x, y]);
            flags.push(flag != 0);
        }
        let mut triangles = Vec::with_capacity(nt);
        for _ in 0..nt {
            let i: usize = parse(next("triangle index")?)?;
            let j: usize = parse(next("triangle index")?)?;
            let k: usize = parse(next("triangle index")?)?;
            triangles.push([i, j, k]);
        }
        Mesh::from_lists(vertices, triangles, flags)
    }
}

fn parse<T: std::str::FromStr>(token: &str) -> Result<T> {
    token
        .parse()
        .map_err(|_| Error::Mesh(format!("malformed mesh token {token:?}")))
}

/// Crossed-diagonal triangulation of `(0, L) x (0, ell)`: each of the
/// `nx * ny` cells is split into four triangles through its center.
pub fn mesh_rectangle(l: f64, ell: f64, nx: usize, ny: usize) -> Result<Mesh> {
    if !(l > 0.0) || !(ell > 0.0) {
        return Err(Error::Mesh(format!(
            "rectangle sides must be positive, got {l} x {ell}"
        )));
    }
    if nx < 2 || ny < 2 {
        return Err(Error::Mesh(format!(
            "need at least 2 cells per side, got {nx} x {ny}"
        )));
    }
    let grid = |i: usize, j: usize| i * (ny + 1) + j;
    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1) + nx * ny);
    let mut flags = Vec::new();
    for i in 0..=nx {
        for j in 0..=ny {
            let x = l * i as f64 / nx as f64;
            let y = ell * j as f64 / ny as f64;
            vertices.push([x, y]);
            flags.push(i == 0 || i == nx || j == 0 || j == ny);
        }
    }
    let center_base = vertices.len();
    let mut triangles = Vec::with_capacity(4 * nx * ny);
    for i in 0..nx {
        for j in 0..ny {
            let c = center_base + i * ny + j;
            let x = l * (i as f64 + 0.5) / nx as f64;
            let y = ell * (j as f64 + 0.5) / ny as f64;
            vertices.push([x, y]);
            flags.push(false);
            let (p00, p10, p11, p01) = (
                grid(i, j),
                grid(i + 1, j),
                grid(i + 1, j + 1),
                grid(i, j + 1),
            );
            triangles.push([p00, p10, c]);
            triangles.push([p10, p11, c]);
            triangles.push([p11, p01, c]);
            triangles.push([p01, p00, c]);
        }
    }
    Mesh::from_lists(vertices, triangles, flags)
}

/// Polar-structured mesh of the ellipse with semi-axes `(a, 1/a)`: the
/// graded-ring unit-disk template (central fan plus `n_r - 1` annuli of
/// `n_t` sectors, ring radii `(i/n_r)^0.75`) mapped by `diag(a, 1/a)`.
/// Boundary vertices land exactly on the ellipse; the straight-sided
/// triangles inscribe it, so the mesh area is slightly below `pi`.
pub fn mesh_ellipse(a: f64, n_r: usize, n_t: usize) -> Result<Mesh> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Mesh(format!(
            "semi-axis ratio must be positive, got {a}"
        )));
    }
    if n_r < 3 || n_t < 8 {
        return Err(Error::Mesh(format!(
            "need n_r >= 3 and n_t >= 8, got ({n_r}, {n_t})"
        )));
    }
    let mut vertices = vec![[0.0, 0.0]];
    let mut flags = vec![false];
    let ring_vertex = |i: usize, j: usize| 1 + (i - 1) * n_t + (j % n_t);
    for i in 1..=n_r {
        let r = (i as f64 / n_r as f64).powf(0.75);
        for j in 0..n_t {
            let th = 2.0 * std::f64::consts::PI * j as f64 / n_t as f64;
            vertices.push([r * th.cos(), r * th.sin()]);
            flags.push(i == n_r);
        }
    }
    let mut triangles = Vec::with_capacity(n_t * (2 * n_r - 1));
    for j in 0..n_t {
        triangles.push([0, ring_vertex(1, j), ring_vertex(1, j + 1)]);
    }
    for i in 1..n_r {
        for j in 0..n_t {
            let (p, q) = (ring_vertex(i, j), ring_vertex(i, j + 1));
            let (pp, qq) = (ring_vertex(i + 1, j), ring_vertex(i + 1, j + 1));
            triangles.push([p, pp, qq]);
            triangles.push([p, qq, q]);
        }
    }
    let disk = Mesh::from_lists(vertices, triangles, flags)?;
    if (a - 1.0).abs() <= f64::EPSILON {
        return Ok(disk);
    }
    disk.map_vertices(|x, y| (a * x, y / a))
}

/// Apply the affine map `x -> J x + shift`; if `det J < 0` the triangle
/// orientation is restored by swapping two vertices per triangle.
pub fn mesh_affine_map(mesh: &Mesh, j: [[f64; 2]; 2], shift: [f64; 2]) -> Result<Mesh> {
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    if det.abs() < 1e-300 || !det.is_finite() {
        return Err(Error::Mesh(format!("affine map is singular, det = {det}")));
    }
    let mapped: Vec<[f64; 2]> = mesh
        .vertices
        .iter()
        .map(|&[x, y]| {
            [
                j[0][0] * x + j[0][1] * y + shift[0],
                j[1][0] * x + j[1][1] * y + shift[1],
            ]
        })
        .collect();
    let triangles: Vec<[usize; 3]> = if det > 0.0 {
        mesh.triangles.clone()
    } else {
        mesh.triangles.iter().map(|&[a, b, c]| [a, c, b]).collect()
    };
    Mesh::from_lists(mapped, triangles, mesh.boundary_vertex_flags.clone())
}
