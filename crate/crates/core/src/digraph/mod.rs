//! Finite multidigraphs with loops, directed paths, strong components,
//! vertex-disjoint path systems and eulerianization.

mod euler;
pub(crate) mod flow;
mod menger;
mod path;
mod scc;

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

pub use euler::{eulerianize, eulerianize_bounded, EulerMultiplicity};
pub use menger::{menger_paths, undirected_min_vertex_cut, MengerOutcome};
pub use path::{pairwise_disjoint, DirectedPath};
pub use scc::{strong_components, StrongComponents};

pub type Vertex = usize;
pub type EdgeId = usize;
pub type VertexSet = BTreeSet<Vertex>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub id: EdgeId,
    pub tail: Vertex,
    pub head: Vertex,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }

    /// The end of the edge opposite to `v`; `None` when `v` is not an end.
    pub fn other(&self, v: Vertex) -> Option<Vertex> {
        if self.tail == v {
            Some(self.head)
        } else if self.head == v {
            Some(self.tail)
        } else {
            None
        }
    }
}

/// A finite multidigraph. Loops and parallel edges are allowed; vertex and
/// edge identifiers are totally ordered, and every iteration order is by id.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Digraph {
    vertices: BTreeSet<Vertex>,
    edges: BTreeMap<EdgeId, Edge>,
    out: BTreeMap<Vertex, BTreeSet<EdgeId>>,
    inc: BTreeMap<Vertex, BTreeSet<EdgeId>>,
}

impl Digraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Digraph on vertices `0..n` with no edges.
    pub fn with_vertices(n: usize) -> Self {
        let mut d = Self::new();
        for v in 0..n {
            d.add_vertex(v);
        }
        d
    }

    /// Builds a digraph on `0..n` from `(tail, head)` pairs; edge ids follow
    /// the input order.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Self {
        let mut d = Self::with_vertices(n);
        for &(t, h) in edges {
            d.add_edge(t, h).expect("endpoints in range");
        }
        d
    }

    pub fn add_vertex(&mut self, v: Vertex) -> bool {
        if self.vertices.insert(v) {
            self.out.insert(v, BTreeSet::new());
            self.inc.insert(v, BTreeSet::new());
            true
        } else {
            false
        }
    }

    pub fn next_vertex_id(&self) -> Vertex {
        self.vertices.iter().next_back().map_or(0, |v| v + 1)
    }

    pub fn next_edge_id(&self) -> EdgeId {
        self.edges.keys().next_back().map_or(0, |e| e + 1)
    }

    /// Adds an edge with the next free id.
    pub fn add_edge(&mut self, tail: Vertex, head: Vertex) -> Result<EdgeId> {
        let id = self.next_edge_id();
        self.add_edge_with_id(id, tail, head)?;
        Ok(id)
    }

    pub fn add_edge_with_id(&mut self, id: EdgeId, tail: Vertex, head: Vertex) -> Result<()> {
        if self.edges.contains_key(&id) {
            return Err(Error::DuplicateEdge(id));
        }
        for v in [tail, head] {
            if !self.vertices.contains(&v) {
                return Err(Error::UnknownVertex(v));
            }
        }
        self.edges.insert(id, Edge { id, tail, head });
        self.out.get_mut(&tail).unwrap().insert(id);
        self.inc.get_mut(&head).unwrap().insert(id);
        Ok(())
    }

    pub fn remove_edge(&mut self, id: EdgeId) -> Result<Edge> {
        let e = self.edges.remove(&id).ok_or(Error::UnknownEdge(id))?;
        self.out.get_mut(&e.tail).unwrap().remove(&id);
        self.inc.get_mut(&e.head).unwrap().remove(&id);
        Ok(e)
    }

    /// Removes `v` together with every edge incident to it.
    pub fn remove_vertex(&mut self, v: Vertex) -> Result<()> {
        if !self.vertices.contains(&v) {
            return Err(Error::UnknownVertex(v));
        }
        let incident: Vec<EdgeId> = self.out[&v].iter().chain(self.inc[&v].iter()).copied().collect();
        for e in incident {
            if self.edges.contains_key(&e) {
                self.remove_edge(e)?;
            }
        }
        self.vertices.remove(&v);
        self.out.remove(&v);
        self.inc.remove(&v);
        Ok(())
    }

    pub fn vertices(&self) -> impl DoubleEndedIterator<Item = Vertex> + '_ {
        self.vertices.iter().copied()
    }

    pub fn vertex_set(&self) -> &VertexSet {
        &self.vertices
    }

    pub fn edges(&self) -> impl DoubleEndedIterator<Item = &Edge> + '_ {
        self.edges.values()
    }

    pub fn edge_ids(&self) -> impl DoubleEndedIterator<Item = EdgeId> + '_ {
        self.edges.keys().copied()
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edges.get(&id)
    }

    pub fn has_vertex(&self, v: Vertex) -> bool {
        self.vertices.contains(&v)
    }

    pub fn has_edge(&self, id: EdgeId) -> bool {
        self.edges.contains_key(&id)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn out_edges(&self, v: Vertex) -> impl Iterator<Item = &Edge> + '_ {
        self.out.get(&v).into_iter().flatten().map(move |id| &self.edges[id])
    }

    pub fn in_edges(&self, v: Vertex) -> impl Iterator<Item = &Edge> + '_ {
        self.inc.get(&v).into_iter().flatten().map(move |id| &self.edges[id])
    }

    pub fn out_degree(&self, v: Vertex) -> usize {
        self.out.get(&v).map_or(0, |s| s.len())
    }

    pub fn in_degree(&self, v: Vertex) -> usize {
        self.inc.get(&v).map_or(0, |s| s.len())
    }

    /// Out-neighbours of `v` in edge-id order, with repetition for parallel edges.
    pub fn successors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.out_edges(v).map(|e| e.head)
    }

    pub fn predecessors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.in_edges(v).map(|e| e.tail)
    }

    /// Undirected neighbours of `v` (deduplicated, loops ignored).
    pub fn neighbours(&self, v: Vertex) -> VertexSet {
        self.successors(v)
            .chain(self.predecessors(v))
            .filter(|&u| u != v)
            .collect()
    }

    /// The lowest-id edge from `tail` to `head`, if any.
    pub fn find_edge(&self, tail: Vertex, head: Vertex) -> Option<EdgeId> {
        self.out_edges(tail).find(|e| e.head == head).map(|e| e.id)
    }

    /// `D - X`: removes `x` and every edge with an end in `x`.
    pub fn without(&self, x: &VertexSet) -> Digraph {
        let keep: VertexSet = self.vertices.difference(x).copied().collect();
        self.induced(&keep)
    }

    /// `D | X`: the subdigraph induced on `x ∩ V(D)`.
    pub fn induced(&self, x: &VertexSet) -> Digraph {
        let mut d = Digraph::new();
        for &v in x {
            if self.has_vertex(v) {
                d.add_vertex(v);
            }
        }
        for e in self.edges.values() {
            if d.has_vertex(e.tail) && d.has_vertex(e.head) {
                d.add_edge_with_id(e.id, e.tail, e.head).unwrap();
            }
        }
        d
    }

    /// The subdigraph with exactly the given vertices and edges. Edge ends
    /// are added to the vertex set.
    pub fn subgraph<'a>(
        &self,
        vertices: impl IntoIterator<Item = &'a Vertex>,
        edges: impl IntoIterator<Item = &'a EdgeId>,
    ) -> Result<Digraph> {
        let mut d = Digraph::new();
        for &v in vertices {
            if !self.has_vertex(v) {
                return Err(Error::UnknownVertex(v));
            }
            d.add_vertex(v);
        }
        for &id in edges {
            let e = *self.edge(id).ok_or(Error::UnknownEdge(id))?;
            d.add_vertex(e.tail);
            d.add_vertex(e.head);
            if !d.has_edge(id) {
                d.add_edge_with_id(id, e.tail, e.head)?;
            }
        }
        Ok(d)
    }

    /// Union of two subdigraphs of a common host (ids must agree).
    pub fn union(&self, other: &Digraph) -> Result<Digraph> {
        let mut d = self.clone();
        for v in other.vertices() {
            d.add_vertex(v);
        }
        for e in other.edges() {
            match d.edge(e.id) {
                Some(f) if f == e => {}
                Some(_) => return Err(Error::DuplicateEdge(e.id)),
                None => d.add_edge_with_id(e.id, e.tail, e.head)?,
            }
        }
        Ok(d)
    }

    /// True when `other`'s vertices and edges all occur here with the same ends.
    pub fn contains_subgraph(&self, other: &Digraph) -> bool {
        other.vertices().all(|v| self.has_vertex(v)) && other.edges().all(|e| self.edge(e.id) == Some(e))
    }

    /// `(δ+(X), δ−(X))`: edges entering `x` and edges leaving `x`.
    pub fn boundary_edges(&self, x: &VertexSet) -> (Vec<EdgeId>, Vec<EdgeId>) {
        let mut entering = Vec::new();
        let mut leaving = Vec::new();
        for e in self.edges.values() {
            let t = x.contains(&e.tail);
            let h = x.contains(&e.head);
            if h && !t {
                entering.push(e.id);
            } else if t && !h {
                leaving.push(e.id);
            }
        }
        (entering, leaving)
    }

    /// Vertices reachable from `start` by directed paths (including `start`).
    pub fn reachable_from(&self, start: impl IntoIterator<Item = Vertex>) -> VertexSet {
        let mut seen = VertexSet::new();
        let mut stack: Vec<Vertex> = start.into_iter().filter(|v| self.has_vertex(*v)).collect();
        while let Some(v) = stack.pop() {
            if seen.insert(v) {
                stack.extend(self.successors(v).filter(|u| !seen.contains(u)));
            }
        }
        seen
    }

    /// A shortest directed path from any vertex of `from` to any vertex of
    /// `to`, avoiding `avoid`; BFS in vertex then edge id order.
    pub fn shortest_path(&self, from: &VertexSet, to: &VertexSet, avoid: &VertexSet) -> Option<DirectedPath> {
        let mut pred: BTreeMap<Vertex, Option<(Vertex, EdgeId)>> = BTreeMap::new();
        let mut queue = std::collections::VecDeque::new();
        for &v in from {
            if self.has_vertex(v) && !avoid.contains(&v) {
                pred.insert(v, None);
                queue.push_back(v);
            }
        }
        while let Some(v) = queue.pop_front() {
            if to.contains(&v) {
                let (mut vs, mut es) = (vec![v], Vec::new());
                let mut cur = v;
                while let Some(Some((p, e))) = pred.get(&cur) {
                    vs.push(*p);
                    es.push(*e);
                    cur = *p;
                }
                vs.reverse();
                es.reverse();
                return Some(DirectedPath::from_parts(vs, es));
            }
            for e in self.out_edges(v) {
                if !avoid.contains(&e.head) && !pred.contains_key(&e.head) {
                    pred.insert(e.head, Some((v, e.id)));
                    queue.push_back(e.head);
                }
            }
        }
        None
    }

    /// All directed circuits with at most `max_len` edges, each listed once
    /// starting at its smallest vertex, using the lowest-id edge between
    /// consecutive vertices. Loops are included.
    pub fn short_circuits(&self, max_len: usize) -> Vec<DirectedPath> {
        fn go(d: &Digraph, root: Vertex, max_len: usize, vs: &mut Vec<Vertex>, es: &mut Vec<EdgeId>, out: &mut Vec<DirectedPath>) {
            let v = *vs.last().unwrap();
            let mut seen_heads = VertexSet::new();
            for e in d.out_edges(v) {
                if e.head < root || !seen_heads.insert(e.head) {
                    continue;
                }
                if e.head == root {
                    let mut cv = vs.clone();
                    cv.push(root);
                    let mut ce = es.clone();
                    ce.push(e.id);
                    out.push(DirectedPath::from_parts(cv, ce));
                } else if es.len() + 1 < max_len && !vs.contains(&e.head) {
                    vs.push(e.head);
                    es.push(e.id);
                    go(d, root, max_len, vs, es, out);
                    vs.pop();
                    es.pop();
                }
            }
        }
        let mut out = Vec::new();
        if max_len == 0 {
            return out;
        }
        for root in self.vertices() {
            go(self, root, max_len, &mut vec![root], &mut Vec::new(), &mut out);
        }
        out
    }

    pub fn is_strongly_connected(&self) -> bool {
        match self.vertices().next() {
            None => true,
            Some(v) => strong_components(self).count() == 1 && self.has_vertex(v),
        }
    }

    /// Weak components, each sorted, ordered by smallest member.
    pub fn weak_components(&self) -> Vec<VertexSet> {
        let mut seen = VertexSet::new();
        let mut comps = Vec::new();
        for v in self.vertices() {
            if seen.contains(&v) {
                continue;
            }
            let mut comp = VertexSet::new();
            let mut stack = vec![v];
            while let Some(u) = stack.pop() {
                if comp.insert(u) {
                    seen.insert(u);
                    stack.extend(self.neighbours(u).into_iter().filter(|w| !comp.contains(w)));
                }
            }
            comps.push(comp);
        }
        comps
    }

    pub fn is_weakly_connected(&self) -> bool {
        self.weak_components().len() <= 1
    }

    pub fn is_acyclic(&self) -> bool {
        if self.edges().any(|e| e.is_loop()) {
            return false;
        }
        strong_components(self).components().iter().all(|c| c.len() == 1)
    }

    /// Every edge reversed, ids kept.
    pub fn reversed(&self) -> Digraph {
        let mut d = Digraph::new();
        for v in self.vertices() {
            d.add_vertex(v);
        }
        for e in self.edges() {
            d.add_edge_with_id(e.id, e.head, e.tail).unwrap();
        }
        d
    }

    /// Relabels vertices to `0..n` in id order and edges to `0..m`.
    pub fn compacted(&self) -> (Digraph, BTreeMap<Vertex, Vertex>) {
        let map: BTreeMap<Vertex, Vertex> = self.vertices().enumerate().map(|(i, v)| (v, i)).collect();
        let mut d = Digraph::with_vertices(map.len());
        for e in self.edges() {
            d.add_edge(map[&e.tail], map[&e.head]).unwrap();
        }
        (d, map)
    }

    /// Multiset of `(tail, head)` pairs, sorted; useful for structural equality
    /// that ignores edge ids.
    pub fn arc_multiset(&self) -> Vec<(Vertex, Vertex)> {
        let mut arcs: Vec<_> = self.edges().map(|e| (e.tail, e.head)).collect();
        arcs.sort_unstable();
        arcs
    }

    /// The bidirected digraph of an undirected graph on `0..n`.
    pub fn bidirected(n: usize, edges: &[(Vertex, Vertex)]) -> Digraph {
        let mut d = Digraph::with_vertices(n);
        for &(u, v) in edges {
            d.add_edge(u, v).unwrap();
            d.add_edge(v, u).unwrap();
        }
        d
    }

    /// Bidirected complete digraph on `0..n`.
    pub fn bidirected_complete(n: usize) -> Digraph {
        let pairs: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Digraph::bidirected(n, &pairs)
    }

    /// Directed cycle `0 → 1 → … → n-1 → 0`.
    pub fn directed_cycle(n: usize) -> Digraph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Digraph::from_edges(n, &edges)
    }
}

/// A subdigraph given by explicit vertex and edge sets inside a host.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subdigraph {
    pub vertices: VertexSet,
    pub edges: BTreeSet<EdgeId>,
}

impl Subdigraph {
    pub fn from_digraph(d: &Digraph) -> Self {
        Subdigraph {
            vertices: d.vertex_set().clone(),
            edges: d.edge_ids().collect(),
        }
    }

    pub fn from_paths<'a>(paths: impl IntoIterator<Item = &'a DirectedPath>) -> Self {
        let mut s = Subdigraph::default();
        for p in paths {
            s.vertices.extend(p.vertices().iter().copied());
            s.edges.extend(p.edges().iter().copied());
        }
        s
    }

    pub fn materialize(&self, host: &Digraph) -> Result<Digraph> {
        host.subgraph(&self.vertices, &self.edges)
    }

    pub fn meets(&self, other: &Subdigraph) -> bool {
        self.vertices.iter().any(|v| other.vertices.contains(v))
    }

    pub fn meets_set(&self, set: &VertexSet) -> bool {
        self.vertices.iter().any(|v| set.contains(v))
    }
}
