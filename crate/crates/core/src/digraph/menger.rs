use std::collections::BTreeMap;

use super::flow::{ArcRef, FlowNetwork};
use super::{Digraph, DirectedPath, EdgeId, Vertex, VertexSet};
use crate::error::{Error, Result};

/// Result of a Menger query: either enough disjoint paths or a small separator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MengerOutcome {
    Paths(Vec<DirectedPath>),
    Separator(VertexSet),
}

impl MengerOutcome {
    pub fn paths(&self) -> Option<&[DirectedPath]> {
        match self {
            MengerOutcome::Paths(p) => Some(p),
            MengerOutcome::Separator(_) => None,
        }
    }

    pub fn separator(&self) -> Option<&VertexSet> {
        match self {
            MengerOutcome::Separator(s) => Some(s),
            MengerOutcome::Paths(_) => None,
        }
    }
}

const INF: i64 = i64::MAX / 4;

struct Split {
    net: FlowNetwork,
    s: usize,
    t: usize,
    index: BTreeMap<Vertex, usize>,
    verts: Vec<Vertex>,
    edge_arcs: Vec<(EdgeId, ArcRef, usize, usize)>,
    source_arcs: Vec<(Vertex, ArcRef)>,
}

impl Split {
    fn node_in(&self, v: Vertex) -> usize {
        2 * self.index[&v]
    }

    fn node_out(&self, v: Vertex) -> usize {
        2 * self.index[&v] + 1
    }

    fn build(d: &Digraph, a: &VertexSet, b: &VertexSet, undirected: bool) -> Split {
        let verts: Vec<Vertex> = d.vertices().collect();
        let index: BTreeMap<Vertex, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let n = verts.len();
        let mut net = FlowNetwork::new(2 * n + 2);
        let (s, t) = (2 * n, 2 * n + 1);
        for i in 0..n {
            net.add_arc(2 * i, 2 * i + 1, 1);
        }
        let mut edge_arcs = Vec::new();
        for e in d.edges() {
            if e.is_loop() {
                continue;
            }
            let (ti, hi) = (index[&e.tail], index[&e.head]);
            let r = net.add_arc(2 * ti + 1, 2 * hi, INF);
            edge_arcs.push((e.id, r, ti, hi));
            if undirected {
                net.add_arc(2 * hi + 1, 2 * ti, INF);
            }
        }
        let mut source_arcs = Vec::new();
        for v in a {
            if let Some(&i) = index.get(v) {
                source_arcs.push((*v, net.add_arc(s, 2 * i, INF)));
            }
        }
        for v in b {
            if let Some(&i) = index.get(v) {
                net.add_arc(2 * i + 1, t, INF);
            }
        }
        Split {
            net,
            s,
            t,
            index,
            verts,
            edge_arcs,
            source_arcs,
        }
    }

    fn separator(&self) -> VertexSet {
        let reach = self.net.residual_reachable(self.s);
        self.verts
            .iter()
            .filter(|&&v| reach[self.node_in(v)] && !reach[self.node_out(v)])
            .copied()
            .collect()
    }
}

fn check_sets(d: &Digraph, a: &VertexSet, b: &VertexSet) -> Result<()> {
    for &v in a.iter().chain(b) {
        if !d.has_vertex(v) {
            return Err(Error::UnknownVertex(v));
        }
    }
    Ok(())
}

/// Either `k` pairwise vertex-disjoint directed paths from `a` to `b`, or a
/// set of fewer than `k` vertices meeting every `a`-`b` path.
///
/// Vertices in `a ∩ b` are linked by zero-length paths. Each returned path
/// meets `b` only at its finish.
pub fn menger_paths(d: &Digraph, a: &VertexSet, b: &VertexSet, k: usize) -> Result<MengerOutcome> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    check_sets(d, a, b)?;
    let mut sp = Split::build(d, a, b, false);
    let (s, t) = (sp.s, sp.t);
    let flow = sp.net.max_flow(s, t, k as i64);
    if (flow as usize) < k {
        return Ok(MengerOutcome::Separator(sp.separator()));
    }

    let mut next: BTreeMap<usize, Vec<(EdgeId, usize)>> = BTreeMap::new();
    for &(id, r, ti, hi) in sp.edge_arcs.iter().rev() {
        for _ in 0..sp.net.flow_on(r) {
            next.entry(ti).or_default().push((id, hi));
        }
    }
    let mut paths = Vec::with_capacity(k);
    for &(v0, r) in &sp.source_arcs {
        if sp.net.flow_on(r) == 0 {
            continue;
        }
        let mut vs = vec![v0];
        let mut es = Vec::new();
        let mut cur = sp.index[&v0];
        while !b.contains(&sp.verts[cur]) {
            let (id, hi) = next
                .get_mut(&cur)
                .and_then(|l| l.pop())
                .expect("flow conservation");
            es.push(id);
            vs.push(sp.verts[hi]);
            cur = hi;
        }
        paths.push(DirectedPath::from_parts(vs, es));
    }
    debug_assert_eq!(paths.len(), k);
    Ok(MengerOutcome::Paths(paths))
}

/// Minimum set of vertices meeting every undirected path from `a` to `b` in
/// the underlying undirected graph (ends may belong to the cut).
pub fn undirected_min_vertex_cut(d: &Digraph, a: &VertexSet, b: &VertexSet) -> Result<VertexSet> {
    check_sets(d, a, b)?;
    let mut sp = Split::build(d, a, b, true);
    let (s, t) = (sp.s, sp.t);
    sp.net.max_flow(s, t, INF);
    Ok(sp.separator())
}
