//! Coarsened partition of the non-inlet boundary carrying the multiplier.
//!
//! The fine boundary edges off the inlet are grouped into maximal chains. Each
//! chain is walked from its lower-numbered inlet junction (or, for closed loops
//! that never touch the inlet, from its lowest vertex) and consecutive fine
//! edges are merged pairwise into macro edges.

use std::collections::BTreeMap;

use super::{BoundaryTag, Mesh};
use crate::error::{Error, Result};

/// How a fine boundary edge sits inside its macro edge.
///
/// The two macro hats `hats[0]` (chain start of the macro edge) and `hats[1]`
/// are linear on the fine edge; `at_start`/`at_end` are their values at the
/// fine edge's `start`/`end` vertices (walking direction).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FineEdgeHats {
    pub macro_edge: usize,
    pub start: usize,
    pub end: usize,
    pub hats: [usize; 2],
    pub at_start: [f64; 2],
    pub at_end: [f64; 2],
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierPartition {
    /// Pairs of mesh edge indices merged into one macro edge.
    pub macro_edges: Vec<[usize; 2]>,
    /// Mesh vertex index of every macro vertex.
    pub macro_vertices: Vec<usize>,
    /// `true` for macro vertices that are junctions with the inlet.
    pub endpoint_flags: Vec<bool>,
    /// Macro vertex indices at both ends of every macro edge.
    pub macro_edge_ends: Vec<[usize; 2]>,
    fine: Vec<Option<FineEdgeHats>>,
    chain_edges: Vec<usize>,
    free_index: Vec<Option<usize>>,
    n_free: usize,
}

impl MultiplierPartition {
    pub fn n_macro_edges(&self) -> usize {
        self.macro_edges.len()
    }

    pub fn n_macro_vertices(&self) -> usize {
        self.macro_vertices.len()
    }

    /// Number of multiplier unknowns (macro vertices away from the inlet).
    pub fn n_free(&self) -> usize {
        self.n_free
    }

    /// Unknown index of a macro vertex, `None` at inlet junctions.
    pub fn free_index(&self, macro_vertex: usize) -> Option<usize> {
        self.free_index[macro_vertex]
    }

    /// Placement data for a fine mesh edge, `None` if the edge is not on the
    /// non-inlet boundary.
    pub fn fine_edge(&self, edge: usize) -> Option<&FineEdgeHats> {
        self.fine.get(edge).and_then(|f| f.as_ref())
    }

    /// Non-inlet fine boundary edges in chain order.
    pub fn chain_edges(&self) -> &[usize] {
        &self.chain_edges
    }

    /// Values of the two macro hats on `edge` at the point with parameter `s`
    /// (0 at the edge's start vertex, 1 at its end), paired with their unknown
    /// indices.
    pub fn hats_at(&self, edge: usize, s: f64) -> Option<[(Option<usize>, f64); 2]> {
        let f = self.fine_edge(edge)?;
        let mut out = [(None, 0.0); 2];
        for k in 0..2 {
            out[k] = (
                self.free_index[f.hats[k]],
                (1.0 - s) * f.at_start[k] + s * f.at_end[k],
            );
        }
        Some(out)
    }
}

/// Merges the fine non-inlet boundary edges pairwise.
///
/// Fails when a chain has an odd number of fine edges; the mesh must then be
/// refined or re-tagged so that every chain has even length.
pub fn build_multiplier_partition(mesh: &Mesh) -> Result<MultiplierPartition> {
    let mut adjacency: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(e, tag) in mesh.boundary_edges() {
        if tag != BoundaryTag::Inlet {
            let [a, b] = mesh.edges()[e];
            adjacency.entry(a).or_default().push(e);
            adjacency.entry(b).or_default().push(e);
        }
    }
    if let Some((v, _)) = adjacency.iter().find(|(_, es)| es.len() > 2) {
        return Err(Error::Structure(format!(
            "boundary is pinched at vertex {v}: more than two non-inlet boundary edges meet there"
        )));
    }

    let mut visited = vec![false; mesh.n_edges()];
    let mut chains: Vec<(Vec<usize>, Vec<usize>, bool)> = Vec::new();

    let other = |e: usize, v: usize| {
        let [a, b] = mesh.edges()[e];
        if a == v {
            b
        } else {
            a
        }
    };

    let endpoints: Vec<usize> = adjacency
        .iter()
        .filter(|(_, es)| es.len() == 1)
        .map(|(v, _)| *v)
        .collect();
    for &start in &endpoints {
        let first = adjacency[&start][0];
        if visited[first] {
            continue;
        }
        let mut verts = vec![start];
        let mut edges = Vec::new();
        let mut v = start;
        let mut e = first;
        loop {
            visited[e] = true;
            edges.push(e);
            v = other(e, v);
            verts.push(v);
            match adjacency[&v].iter().find(|&&n| !visited[n]) {
                Some(&n) => e = n,
                None => break,
            }
        }
        chains.push((verts, edges, false));
    }

    // closed loops without an inlet junction
    let loop_starts: Vec<usize> = adjacency.keys().copied().collect();
    for start in loop_starts {
        let Some(&first) = adjacency[&start].iter().find(|&&e| !visited[e]) else {
            continue;
        };
        // follow the counterclockwise boundary direction out of `start`
        let mut e = first;
        for &cand in &adjacency[&start] {
            let (_, sign) = mesh.boundary_normal(cand);
            let [a, _] = mesh.edges()[cand];
            let leaves_start = (sign > 0.0) == (a == start);
            if leaves_start && !visited[cand] {
                e = cand;
            }
        }
        let mut verts = vec![start];
        let mut edges = Vec::new();
        let mut v = start;
        loop {
            visited[e] = true;
            edges.push(e);
            v = other(e, v);
            if v == start {
                break;
            }
            verts.push(v);
            match adjacency[&v].iter().find(|&&n| !visited[n]) {
                Some(&n) => e = n,
                None => {
                    return Err(Error::Structure(format!(
                        "non-inlet boundary chain through vertex {start} does not close"
                    )))
                }
            }
        }
        chains.push((verts, edges, true));
    }

    let mut p = MultiplierPartition {
        macro_edges: Vec::new(),
        macro_vertices: Vec::new(),
        endpoint_flags: Vec::new(),
        macro_edge_ends: Vec::new(),
        fine: vec![None; mesh.n_edges()],
        chain_edges: Vec::new(),
        free_index: Vec::new(),
        n_free: 0,
    };

    for (verts, edges, closed) in chains {
        if edges.len() % 2 != 0 {
            return Err(Error::Structure(format!(
                "non-inlet boundary chain starting at vertex {} has {} fine edges; \
                 the multiplier partition needs an even count, refine the mesh or re-tag the boundary",
                verts[0],
                edges.len()
            )));
        }
        let first_mv = p.macro_vertices.len();
        let n_macro = edges.len() / 2;
        let n_mv = if closed { n_macro } else { n_macro + 1 };
        for k in 0..n_mv {
            p.macro_vertices.push(verts[2 * k]);
            p.endpoint_flags.push(!closed && (k == 0 || k == n_macro));
        }
        for j in 0..n_macro {
            let me = p.macro_edges.len();
            let a = first_mv + j;
            let b = if closed { first_mv + (j + 1) % n_macro } else { first_mv + j + 1 };
            p.macro_edges.push([edges[2 * j], edges[2 * j + 1]]);
            p.macro_edge_ends.push([a, b]);
            let w = |k: usize| verts[k % verts.len()];
            p.fine[edges[2 * j]] = Some(FineEdgeHats {
                macro_edge: me,
                start: w(2 * j),
                end: w(2 * j + 1),
                hats: [a, b],
                at_start: [1.0, 0.0],
                at_end: [0.5, 0.5],
            });
            p.fine[edges[2 * j + 1]] = Some(FineEdgeHats {
                macro_edge: me,
                start: w(2 * j + 1),
                end: w(2 * j + 2),
                hats: [a, b],
                at_start: [0.5, 0.5],
                at_end: [0.0, 1.0],
            });
        }
        p.chain_edges.extend_from_slice(&edges);
    }

    let mut next = 0;
    for &flag in &p.endpoint_flags {
        if flag {
            p.free_index.push(None);
        } else {
            p.free_index.push(Some(next));
            next += 1;
        }
    }
    p.n_free = next;
    Ok(p)
}
