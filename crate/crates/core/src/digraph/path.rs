use std::collections::BTreeSet;

use super::{Digraph, EdgeId, Vertex, VertexSet};
use crate::error::{Error, Result};

/// A directed path or circuit as an alternating vertex/edge sequence.
///
/// `vertices.len() == edges.len() + 1`. A circuit repeats its first vertex
/// at the end; apart from that closure every vertex occurs once.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DirectedPath {
    vertices: Vec<Vertex>,
    edges: Vec<EdgeId>,
}

impl DirectedPath {
    /// Zero-length path at `v`.
    pub fn trivial(v: Vertex) -> Self {
        DirectedPath {
            vertices: vec![v],
            edges: vec![],
        }
    }

    /// Checks the sequence against `d`: edges must chain head-to-tail and the
    /// vertex sequence must be simple (or a simple circuit).
    pub fn new(d: &Digraph, vertices: Vec<Vertex>, edges: Vec<EdgeId>) -> Result<Self> {
        let p = DirectedPath { vertices, edges };
        p.check(d)?;
        Ok(p)
    }

    /// Builds the path through `vertices`, using the lowest-id edge for each step.
    pub fn from_vertices(d: &Digraph, vertices: &[Vertex]) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidPath("empty vertex sequence".into()));
        }
        let mut edges = Vec::with_capacity(vertices.len() - 1);
        for w in vertices.windows(2) {
            let e = d
                .find_edge(w[0], w[1])
                .ok_or_else(|| Error::InvalidPath(format!("no edge {} -> {}", w[0], w[1])))?;
            edges.push(e);
        }
        Self::new(d, vertices.to_vec(), edges)
    }

    /// Builds from an edge sequence.
    pub fn from_edges(d: &Digraph, edges: &[EdgeId]) -> Result<Self> {
        let first = edges.first().ok_or_else(|| Error::InvalidPath("empty edge sequence".into()))?;
        let mut vertices = vec![d.edge(*first).ok_or(Error::UnknownEdge(*first))?.tail];
        for &id in edges {
            vertices.push(d.edge(id).ok_or(Error::UnknownEdge(id))?.head);
        }
        Self::new(d, vertices, edges.to_vec())
    }

    /// Unchecked constructor for sequences produced internally.
    pub(crate) fn from_parts(vertices: Vec<Vertex>, edges: Vec<EdgeId>) -> Self {
        debug_assert_eq!(vertices.len(), edges.len() + 1);
        DirectedPath { vertices, edges }
    }

    pub fn check(&self, d: &Digraph) -> Result<()> {
        if self.vertices.len() != self.edges.len() + 1 {
            return Err(Error::InvalidPath("vertex/edge count mismatch".into()));
        }
        for (i, &id) in self.edges.iter().enumerate() {
            let e = d.edge(id).ok_or(Error::UnknownEdge(id))?;
            if e.tail != self.vertices[i] || e.head != self.vertices[i + 1] {
                return Err(Error::InvalidPath(format!(
                    "edge {id} does not run {} -> {}",
                    self.vertices[i],
                    self.vertices[i + 1]
                )));
            }
        }
        for &v in &self.vertices {
            if !d.has_vertex(v) {
                return Err(Error::UnknownVertex(v));
            }
        }
        let body = if self.is_circuit() {
            &self.vertices[..self.vertices.len() - 1]
        } else {
            &self.vertices[..]
        };
        let distinct: BTreeSet<_> = body.iter().collect();
        if distinct.len() != body.len() {
            return Err(Error::InvalidPath("repeated vertex".into()));
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn start(&self) -> Vertex {
        self.vertices[0]
    }

    pub fn finish(&self) -> Vertex {
        *self.vertices.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_circuit(&self) -> bool {
        !self.edges.is_empty() && self.start() == self.finish()
    }

    /// Distinct vertices of the path (the circuit closure counted once).
    pub fn vertex_set(&self) -> VertexSet {
        self.vertices.iter().copied().collect()
    }

    pub fn edge_set(&self) -> BTreeSet<EdgeId> {
        self.edges.iter().copied().collect()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.vertices.contains(&v)
    }

    /// First index of `v` along the path.
    pub fn position(&self, v: Vertex) -> Option<usize> {
        self.vertices.iter().position(|&u| u == v)
    }

    /// Sub-path between vertex indices `i <= j`.
    pub fn slice(&self, i: usize, j: usize) -> DirectedPath {
        assert!(i <= j && j < self.vertices.len());
        DirectedPath {
            vertices: self.vertices[i..=j].to_vec(),
            edges: self.edges[i..j].to_vec(),
        }
    }

    /// `P[u, v]` for `u` at or before `v` on the path.
    pub fn subpath(&self, u: Vertex, v: Vertex) -> Option<DirectedPath> {
        let i = self.position(u)?;
        let j = self.position(v)?;
        (i <= j).then(|| self.slice(i, j))
    }

    /// In-edge of the vertex at index `i` (none at the start of a path).
    pub fn in_edge_at(&self, i: usize) -> Option<EdgeId> {
        if i > 0 {
            Some(self.edges[i - 1])
        } else if self.is_circuit() {
            self.edges.last().copied()
        } else {
            None
        }
    }

    /// Out-edge of the vertex at index `i` (none at the finish of a path).
    pub fn out_edge_at(&self, i: usize) -> Option<EdgeId> {
        if i < self.edges.len() {
            Some(self.edges[i])
        } else if self.is_circuit() {
            self.edges.first().copied()
        } else {
            None
        }
    }

    /// Appends `other`, which must start where `self` finishes. The result is
    /// not re-validated.
    pub fn concat(&self, other: &DirectedPath) -> Result<DirectedPath> {
        if self.finish() != other.start() {
            return Err(Error::InvalidPath("concatenation ends do not meet".into()));
        }
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(&other.vertices[1..]);
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Ok(DirectedPath { vertices, edges })
    }

    /// For a circuit, the rotation starting at vertex `v`.
    pub fn rotate_to(&self, v: Vertex) -> Option<DirectedPath> {
        if !self.is_circuit() {
            return None;
        }
        let n = self.edges.len();
        let i = self.position(v)?;
        let mut vertices = Vec::with_capacity(n + 1);
        let mut edges = Vec::with_capacity(n);
        for k in 0..n {
            vertices.push(self.vertices[(i + k) % n]);
            edges.push(self.edges[(i + k) % n]);
        }
        vertices.push(v);
        Some(DirectedPath { vertices, edges })
    }

    /// For a circuit, the directed arc from `u` to `v` (both on the circuit).
    pub fn arc(&self, u: Vertex, v: Vertex) -> Option<DirectedPath> {
        let rot = self.rotate_to(u)?;
        let j = rot.vertices[..rot.vertices.len() - 1].iter().position(|&w| w == v)?;
        Some(rot.slice(0, j))
    }

    /// True when no two shared vertices occur in the same relative order on
    /// both paths.
    pub fn hits_in_reverse(&self, other: &DirectedPath) -> bool {
        let body = if self.is_circuit() {
            &self.vertices[..self.vertices.len() - 1]
        } else {
            &self.vertices[..]
        };
        let shared: Vec<usize> = body.iter().filter_map(|&v| other.position(v)).collect();
        shared.windows(2).all(|w| w[0] > w[1])
    }

    pub fn is_vertex_disjoint(&self, other: &DirectedPath) -> bool {
        let mine = self.vertex_set();
        other.vertices.iter().all(|v| !mine.contains(v))
    }
}

/// True when the paths are pairwise vertex-disjoint.
pub fn pairwise_disjoint(paths: &[DirectedPath]) -> bool {
    let mut seen = VertexSet::new();
    for p in paths {
        for v in p.vertex_set() {
            if !seen.insert(v) {
                return false;
            }
        }
    }
    true
}
