//! Conforming triangulations with tagged boundary parts.
//!
//! Edges are stored once with the global orientation `a < b`. The unit normal
//! attached to an edge is the clockwise rotation of `b - a`; a triangle records
//! `+1` for an edge when that normal points out of the triangle and `-1`
//! otherwise. Local edge `i` of a triangle is the edge opposite its vertex `i`.

mod io;
mod partition;
mod structured;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Point;

pub use io::{format_mesh, load_mesh, parse_mesh, write_mesh};
pub use partition::{build_multiplier_partition, FineEdgeHats, MultiplierPartition};
pub use structured::{build_rectangle, build_unit_square, polygonize_circle, SideTags};

/// Boundary part an edge belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryTag {
    Inlet,
    Wall,
    Outlet,
}

impl BoundaryTag {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundaryTag::Inlet => "inlet",
            BoundaryTag::Wall => "wall",
            BoundaryTag::Outlet => "outlet",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "inlet" => Some(BoundaryTag::Inlet),
            "wall" => Some(BoundaryTag::Wall),
            "outlet" => Some(BoundaryTag::Outlet),
            _ => None,
        }
    }

    /// Edges where the multiplier lives: everything except the inlet.
    pub fn off_inlet(self) -> bool {
        self != BoundaryTag::Inlet
    }

    /// Edges where the velocity trace is prescribed: everything except the outlet.
    pub fn off_outlet(self) -> bool {
        self != BoundaryTag::Outlet
    }
}

impl fmt::Display for BoundaryTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    vertices: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    edges: Vec<[usize; 2]>,
    triangle_edges: Vec<[(usize, f64); 3]>,
    edge_triangles: Vec<(usize, Option<usize>)>,
    boundary_edges: Vec<(usize, BoundaryTag)>,
    edge_tags: Vec<Option<BoundaryTag>>,
}

impl Mesh {
    /// Builds and validates a mesh.
    ///
    /// `boundary` lists every boundary edge as an (unordered) vertex pair with
    /// its tag. Triangles must be counterclockwise.
    pub fn new(
        vertices: Vec<Point>,
        triangles: Vec<[usize; 3]>,
        boundary: &[([usize; 2], BoundaryTag)],
    ) -> Result<Self> {
        if triangles.is_empty() {
            return Err(Error::Structure("mesh has no triangles".into()));
        }
        for (v, p) in vertices.iter().enumerate() {
            if !p[0].is_finite() || !p[1].is_finite() {
                return Err(Error::Structure(format!("vertex {v} has non-finite coordinates")));
            }
        }
        for (t, tri) in triangles.iter().enumerate() {
            if let Some(&bad) = tri.iter().find(|&&v| v >= vertices.len()) {
                return Err(Error::Structure(format!(
                    "triangle {t} references vertex {bad} but only {} vertices exist",
                    vertices.len()
                )));
            }
            let area = signed_area(&vertices, tri);
            let scale = diameter(&vertices, tri).powi(2);
            if !(area > 1e-14 * scale) {
                return Err(Error::Orientation { triangle: t, area });
            }
        }

        let mut edge_index: HashMap<[usize; 2], usize> = HashMap::new();
        let mut edges = Vec::new();
        let mut edge_triangles: Vec<(usize, Option<usize>)> = Vec::new();
        let mut triangle_edges = Vec::with_capacity(triangles.len());
        for (t, tri) in triangles.iter().enumerate() {
            let mut local = [(0usize, 0.0f64); 3];
            for i in 0..3 {
                let from = tri[(i + 1) % 3];
                let to = tri[(i + 2) % 3];
                let key = [from.min(to), from.max(to)];
                let sign = if from < to { 1.0 } else { -1.0 };
                let e = match edge_index.get(&key) {
                    Some(&e) => {
                        let (first, second) = &mut edge_triangles[e];
                        if second.is_some() {
                            return Err(Error::Nonconforming {
                                edge: e,
                                a: key[0],
                                b: key[1],
                                reason: "shared by more than two triangles".into(),
                            });
                        }
                        let first_sign = triangle_edges_sign(&triangle_edges, *first, e)
                            .expect("first triangle records the edge");
                        if first_sign == sign {
                            return Err(Error::Nonconforming {
                                edge: e,
                                a: key[0],
                                b: key[1],
                                reason: format!(
                                    "triangles {} and {t} traverse it in the same direction",
                                    *first
                                ),
                            });
                        }
                        *second = Some(t);
                        e
                    }
                    None => {
                        let e = edges.len();
                        edges.push(key);
                        edge_triangles.push((t, None));
                        edge_index.insert(key, e);
                        e
                    }
                };
                local[i] = (e, sign);
            }
            triangle_edges.push(local);
        }

        let mut edge_tags: Vec<Option<BoundaryTag>> = vec![None; edges.len()];
        for &(pair, tag) in boundary {
            let key = [pair[0].min(pair[1]), pair[0].max(pair[1])];
            let Some(&e) = edge_index.get(&key) else {
                return Err(Error::Structure(format!(
                    "tagged boundary pair ({}, {}) is not a mesh edge",
                    pair[0], pair[1]
                )));
            };
            if edge_triangles[e].1.is_some() {
                return Err(Error::Structure(format!(
                    "tagged pair ({}, {}) is interior edge {e}",
                    key[0], key[1]
                )));
            }
            if edge_tags[e].is_some() {
                return Err(Error::Structure(format!("boundary edge {e} is tagged twice")));
            }
            edge_tags[e] = Some(tag);
        }
        let mut boundary_edges = Vec::new();
        for (e, adj) in edge_triangles.iter().enumerate() {
            if adj.1.is_none() {
                match edge_tags[e] {
                    Some(tag) => boundary_edges.push((e, tag)),
                    None => {
                        return Err(Error::UntaggedBoundary {
                            edge: e,
                            a: edges[e][0],
                            b: edges[e][1],
                        })
                    }
                }
            }
        }

        Ok(Mesh {
            vertices,
            triangles,
            edges,
            triangle_edges,
            edge_triangles,
            boundary_edges,
            edge_tags,
        })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    /// Per triangle, `(edge index, sign)` for the edge opposite each local vertex.
    pub fn triangle_edges(&self) -> &[[(usize, f64); 3]] {
        &self.triangle_edges
    }

    /// Adjacent triangles of every edge; the second is `None` on the boundary.
    pub fn edge_triangles(&self) -> &[(usize, Option<usize>)] {
        &self.edge_triangles
    }

    /// Boundary edges in increasing edge index with their tags.
    pub fn boundary_edges(&self) -> &[(usize, BoundaryTag)] {
        &self.boundary_edges
    }

    pub fn edge_tag(&self, edge: usize) -> Option<BoundaryTag> {
        self.edge_tags[edge]
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn triangle_vertices(&self, t: usize) -> [Point; 3] {
        let tri = self.triangles[t];
        [self.vertices[tri[0]], self.vertices[tri[1]], self.vertices[tri[2]]]
    }

    pub fn area(&self, t: usize) -> f64 {
        signed_area(&self.vertices, &self.triangles[t])
    }

    pub fn centroid(&self, t: usize) -> Point {
        let [a, b, c] = self.triangle_vertices(t);
        [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0]
    }

    pub fn total_area(&self) -> f64 {
        (0..self.n_triangles()).map(|t| self.area(t)).sum()
    }

    pub fn edge_length(&self, e: usize) -> f64 {
        let [a, b] = self.edges[e];
        dist(self.vertices[a], self.vertices[b])
    }

    /// Unit normal of the globally oriented edge (clockwise rotation of `b - a`).
    pub fn edge_normal(&self, e: usize) -> Point {
        let [a, b] = self.edges[e];
        let (pa, pb) = (self.vertices[a], self.vertices[b]);
        let len = dist(pa, pb);
        [(pb[1] - pa[1]) / len, -(pb[0] - pa[0]) / len]
    }

    /// Outward unit normal of a boundary edge and the sign relating it to the
    /// global edge normal.
    pub fn boundary_normal(&self, e: usize) -> (Point, f64) {
        let (t, _) = self.edge_triangles[e];
        let sign = triangle_edges_sign(&self.triangle_edges, t, e).expect("edge of its triangle");
        let n = self.edge_normal(e);
        ([sign * n[0], sign * n[1]], sign)
    }

    /// Largest triangle diameter.
    pub fn max_diameter(&self) -> f64 {
        self.triangles
            .iter()
            .map(|tri| diameter(&self.vertices, tri))
            .fold(0.0, f64::max)
    }

    pub fn edges_with_tag(&self, tag: BoundaryTag) -> impl Iterator<Item = usize> + '_ {
        self.boundary_edges
            .iter()
            .filter(move |(_, t)| *t == tag)
            .map(|(e, _)| *e)
    }

    pub fn has_tag(&self, tag: BoundaryTag) -> bool {
        self.edges_with_tag(tag).next().is_some()
    }

    /// Signed area enclosed by the boundary loops (shoelace over outward-oriented edges).
    pub fn boundary_enclosed_area(&self) -> f64 {
        let mut sum = 0.0;
        for &(e, _) in &self.boundary_edges {
            let [a, b] = self.edges[e];
            let (_, sign) = self.boundary_normal(e);
            // outward normal = sign * cw-rotation of (b - a): ccw traversal runs a -> b when sign > 0
            let (p, q) = if sign > 0.0 {
                (self.vertices[a], self.vertices[b])
            } else {
                (self.vertices[b], self.vertices[a])
            };
            sum += p[0] * q[1] - q[0] * p[1];
        }
        0.5 * sum
    }
}

fn triangle_edges_sign(triangle_edges: &[[(usize, f64); 3]], t: usize, e: usize) -> Option<f64> {
    triangle_edges
        .get(t)?
        .iter()
        .find(|(edge, _)| *edge == e)
        .map(|(_, s)| *s)
}

pub(crate) fn signed_area(vertices: &[Point], tri: &[usize; 3]) -> f64 {
    let [a, b, c] = [vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]];
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
}

fn diameter(vertices: &[Point], tri: &[usize; 3]) -> f64 {
    let [a, b, c] = [vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]];
    dist(a, b).max(dist(b, c)).max(dist(c, a))
}

pub(crate) fn dist(a: Point, b: Point) -> f64 {
    (b[0] - a[0]).hypot(b[1] - a[1])
}
