//! Butterfly contraction, replayable minor models, a brute-force minor
//! search and the grid families used throughout the crate.

mod grids;
mod iso;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use crate::digraph::{Digraph, DirectedPath, EdgeId, Vertex, VertexSet};
use crate::embedding::RotationEmbedding;
use crate::error::{Error, Result};

pub use grids::{
    generate_cylindrical_grid, validate_acyclic_grid, validate_cylindrical_grid, AcyclicGridWitness, CylGrid,
    CylGridWitness, GridFlavor,
};
pub use iso::find_isomorphism;

/// True when `e` is the only out-edge of its tail or the only in-edge of its head.
pub fn is_butterfly_contractible(d: &Digraph, e: EdgeId) -> bool {
    match d.edge(e) {
        Some(edge) => !edge.is_loop() && (d.out_degree(edge.tail) == 1 || d.in_degree(edge.head) == 1),
        None => false,
    }
}

/// Merges the ends of `e` into the smaller id, dropping `e` and every loop
/// the merge creates. Returns the new digraph and the dropped edge ids.
pub(crate) fn merge_edge(d: &Digraph, e: EdgeId) -> Result<(Digraph, BTreeSet<EdgeId>)> {
    let edge = *d.edge(e).ok_or(Error::UnknownEdge(e))?;
    if edge.is_loop() {
        return Err(Error::LoopEdge(e));
    }
    let keep = edge.tail.min(edge.head);
    let gone = edge.tail.max(edge.head);
    let remap = |w: Vertex| if w == gone { keep } else { w };
    let mut out = Digraph::new();
    for w in d.vertices().filter(|&w| w != gone) {
        out.add_vertex(w);
    }
    let mut dropped = BTreeSet::from([e]);
    for x in d.edges() {
        if x.id == e {
            continue;
        }
        let (t, h) = (remap(x.tail), remap(x.head));
        if t == h && !x.is_loop() {
            dropped.insert(x.id);
            continue;
        }
        out.add_edge_with_id(x.id, t, h)?;
    }
    Ok((out, dropped))
}

/// Butterfly contraction of `e`. The merged vertex keeps the smaller id.
pub fn butterfly_contract(d: &Digraph, e: EdgeId) -> Result<Digraph> {
    let edge = d.edge(e).ok_or(Error::UnknownEdge(e))?;
    if edge.is_loop() {
        return Err(Error::LoopEdge(e));
    }
    if !is_butterfly_contractible(d, e) {
        return Err(Error::NotContractible(e));
    }
    Ok(merge_edge(d, e)?.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    DeleteVertex(Vertex),
    DeleteEdge(EdgeId),
    Contract(EdgeId),
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::DeleteVertex(v) => write!(f, "del v {v}"),
            Step::DeleteEdge(e) => write!(f, "del e {e}"),
            Step::Contract(e) => write!(f, "contract {e}"),
        }
    }
}

/// A replayable script of deletions and butterfly contractions, with a map
/// from the surviving vertices to the pattern's vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MinorModel {
    pub steps: Vec<Step>,
    pub map: BTreeMap<Vertex, Vertex>,
}

impl MinorModel {
    pub fn new(steps: Vec<Step>, map: BTreeMap<Vertex, Vertex>) -> Self {
        MinorModel { steps, map }
    }

    /// Applies the script to `host`, checking every contraction.
    pub fn replay(&self, host: &Digraph) -> Result<Digraph> {
        let mut d = host.clone();
        for step in &self.steps {
            d = apply_step(&d, *step)?;
        }
        Ok(d)
    }

    /// Applies the script to an embedding of the host.
    pub fn replay_embedding(&self, emb: &RotationEmbedding) -> Result<RotationEmbedding> {
        let mut e = emb.clone();
        for step in &self.steps {
            e = match *step {
                Step::DeleteVertex(v) => e.delete_vertex(v)?,
                Step::DeleteEdge(x) => e.delete_edge(x)?,
                Step::Contract(x) => {
                    if !is_butterfly_contractible(e.host(), x) {
                        return Err(Error::NotContractible(x));
                    }
                    e.contract_edge(x)?
                }
            };
        }
        Ok(e)
    }

    /// The replayed digraph with vertices renamed through `map`.
    pub fn image(&self, host: &Digraph) -> Result<Digraph> {
        let d = self.replay(host)?;
        rename(&d, &self.map)
    }

    /// Replays the script and checks that `map` is an isomorphism onto `pattern`.
    pub fn verify(&self, host: &Digraph, pattern: &Digraph) -> Result<()> {
        let d = self.replay(host)?;
        let keys: BTreeSet<Vertex> = self.map.keys().copied().collect();
        if &keys != d.vertex_set() {
            return Err(Error::Verification("vertex map does not cover the replayed digraph".into()));
        }
        let image: BTreeSet<Vertex> = self.map.values().copied().collect();
        if image.len() != keys.len() || &image != pattern.vertex_set() {
            return Err(Error::Verification("vertex map is not a bijection onto the pattern".into()));
        }
        let renamed = rename(&d, &self.map)?;
        if renamed.arc_multiset() != pattern.arc_multiset() {
            return Err(Error::Verification("replayed digraph differs from the pattern".into()));
        }
        Ok(())
    }

    /// This script followed by `other`; the map is composed.
    pub fn then(&self, other: &MinorModel) -> MinorModel {
        let mut steps = self.steps.clone();
        steps.extend(other.steps.iter().copied());
        MinorModel { steps, map: other.map.clone() }
    }
}

pub(crate) fn apply_step(d: &Digraph, step: Step) -> Result<Digraph> {
    let mut d2 = d.clone();
    match step {
        Step::DeleteVertex(v) => d2.remove_vertex(v)?,
        Step::DeleteEdge(e) => {
            d2.remove_edge(e)?;
        }
        Step::Contract(e) => d2 = butterfly_contract(d, e)?,
    }
    Ok(d2)
}

/// Relabels vertices through `map` (edge ids kept).
pub fn rename(d: &Digraph, map: &BTreeMap<Vertex, Vertex>) -> Result<Digraph> {
    let mut out = Digraph::new();
    for v in d.vertices() {
        let w = *map.get(&v).ok_or(Error::UnknownVertex(v))?;
        if !out.add_vertex(w) {
            return Err(Error::DuplicateVertex(w));
        }
    }
    for e in d.edges() {
        out.add_edge_with_id(e.id, map[&e.tail], map[&e.head])?;
    }
    Ok(out)
}

/// Outcome of [`find_butterfly_minor`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinorSearch {
    Found(MinorModel),
    NotFound,
    Exhausted,
}

struct Search<'a> {
    pattern: &'a Digraph,
    np: usize,
    mp: usize,
    budget: u64,
    used: u64,
    seen: HashSet<Digraph>,
}

impl Search<'_> {
    fn tick(&mut self) -> bool {
        self.used += 1;
        self.used <= self.budget
    }

    fn feasible(&self, d: &Digraph) -> bool {
        let (n, m) = (d.vertex_count(), d.edge_count());
        n >= self.np && m >= self.mp + (n - self.np)
    }

    fn goal(&self, d: &Digraph) -> Option<BTreeMap<Vertex, Vertex>> {
        if d.vertex_count() == self.np && d.edge_count() == self.mp {
            find_isomorphism(d, self.pattern)
        } else {
            None
        }
    }

    fn vertex_phase(&mut self, d: &Digraph, after: Option<Vertex>, steps: &mut Vec<Step>) -> Option<Option<MinorModel>> {
        if !self.tick() {
            return None;
        }
        if let r @ (None | Some(Some(_))) = self.edge_phase(d, None, steps) {
            return r;
        }
        let candidates: Vec<Vertex> = d.vertices().filter(|&v| after.is_none_or(|a| v > a)).collect();
        for v in candidates {
            let mut d2 = d.clone();
            d2.remove_vertex(v).unwrap();
            if !self.feasible(&d2) {
                continue;
            }
            steps.push(Step::DeleteVertex(v));
            let r = self.vertex_phase(&d2, Some(v), steps);
            steps.pop();
            if let r @ (None | Some(Some(_))) = r {
                return r;
            }
        }
        Some(None)
    }

    fn edge_phase(&mut self, d: &Digraph, after: Option<EdgeId>, steps: &mut Vec<Step>) -> Option<Option<MinorModel>> {
        if !self.tick() {
            return None;
        }
        if let r @ (None | Some(Some(_))) = self.contract_phase(d, steps) {
            return r;
        }
        let candidates: Vec<EdgeId> = d.edge_ids().filter(|&e| after.is_none_or(|a| e > a)).collect();
        for e in candidates {
            let mut d2 = d.clone();
            d2.remove_edge(e).unwrap();
            if !self.feasible(&d2) {
                continue;
            }
            steps.push(Step::DeleteEdge(e));
            let r = self.edge_phase(&d2, Some(e), steps);
            steps.pop();
            if let r @ (None | Some(Some(_))) = r {
                return r;
            }
        }
        Some(None)
    }

    fn contract_phase(&mut self, d: &Digraph, steps: &mut Vec<Step>) -> Option<Option<MinorModel>> {
        if !self.seen.insert(d.clone()) {
            return Some(None);
        }
        if !self.tick() {
            return None;
        }
        if let Some(map) = self.goal(d) {
            return Some(Some(MinorModel::new(steps.clone(), map)));
        }
        if d.vertex_count() == self.np {
            return Some(None);
        }
        let candidates: Vec<EdgeId> = d.edge_ids().filter(|&e| is_butterfly_contractible(d, e)).collect();
        for e in candidates {
            let d2 = butterfly_contract(d, e).unwrap();
            if !self.feasible(&d2) {
                continue;
            }
            steps.push(Step::Contract(e));
            let r = self.contract_phase(&d2, steps);
            steps.pop();
            if let r @ (None | Some(Some(_))) = r {
                return r;
            }
        }
        Some(None)
    }
}

/// Depth-first search for a butterfly minor of `host` isomorphic to `pattern`.
///
/// Scripts are normalized to vertex deletions (increasing id), then edge
/// deletions (increasing id), then contractions; contraction states are
/// memoized. `budget` bounds the number of states expanded. `NotFound` is
/// returned only when the whole space was enumerated.
pub fn find_butterfly_minor(host: &Digraph, pattern: &Digraph, budget: u64) -> MinorSearch {
    let mut s = Search {
        pattern,
        np: pattern.vertex_count(),
        mp: pattern.edge_count(),
        budget,
        used: 0,
        seen: HashSet::new(),
    };
    if !s.feasible(host) {
        return MinorSearch::NotFound;
    }
    match s.vertex_phase(host, None, &mut Vec::new()) {
        None => MinorSearch::Exhausted,
        Some(Some(m)) => MinorSearch::Found(m),
        Some(None) => MinorSearch::NotFound,
    }
}

/// Deletes every edge and vertex outside two path families, then contracts
/// each edge used by both families. Within a family the paths must be
/// vertex-disjoint, which makes every such edge butterfly contractible.
/// Returns the script (with the identity map) and both families as they
/// run in the result.
pub fn shrink_to_paths(
    d: &Digraph,
    first: &[DirectedPath],
    second: &[DirectedPath],
) -> Result<(MinorModel, Vec<DirectedPath>, Vec<DirectedPath>)> {
    let mut s = Shrinker::new(d, first, second)?;
    s.contract_shared()?;
    s.finish(first.len())
}

/// As [`shrink_to_paths`], and afterwards contracts every vertex that lies
/// on only one path and has one edge in and one edge out, so that only the
/// meeting vertices and path ends remain.
pub fn shrink_and_smooth(
    d: &Digraph,
    first: &[DirectedPath],
    second: &[DirectedPath],
) -> Result<(MinorModel, Vec<DirectedPath>, Vec<DirectedPath>)> {
    let mut s = Shrinker::new(d, first, second)?;
    s.contract_shared()?;
    s.smooth()?;
    s.finish(first.len())
}

struct Shrinker {
    current: Digraph,
    steps: Vec<Step>,
    paths: Vec<(Vec<Vertex>, Vec<EdgeId>)>,
    first_edges: BTreeSet<EdgeId>,
    second_edges: BTreeSet<EdgeId>,
}

impl Shrinker {
    fn new(d: &Digraph, first: &[DirectedPath], second: &[DirectedPath]) -> Result<Self> {
        let all: Vec<&DirectedPath> = first.iter().chain(second).collect();
        let used_e: BTreeSet<EdgeId> = all.iter().flat_map(|p| p.edges().iter().copied()).collect();
        let used_v: VertexSet = all.iter().flat_map(|p| p.vertices().iter().copied()).collect();
        let mut steps: Vec<Step> = d.edge_ids().filter(|e| !used_e.contains(e)).map(Step::DeleteEdge).collect();
        steps.extend(d.vertices().filter(|v| !used_v.contains(v)).map(Step::DeleteVertex));
        let mut current = d.clone();
        for &s in &steps {
            current = apply_step(&current, s)?;
        }
        Ok(Shrinker {
            current,
            steps,
            paths: all.iter().map(|p| (p.vertices().to_vec(), p.edges().to_vec())).collect(),
            first_edges: first.iter().flat_map(|p| p.edges().iter().copied()).collect(),
            second_edges: second.iter().flat_map(|p| p.edges().iter().copied()).collect(),
        })
    }

    fn contract(&mut self, e: EdgeId) -> Result<()> {
        let edge = *self.current.edge(e).ok_or(Error::UnknownEdge(e))?;
        let keep = edge.tail.min(edge.head);
        let gone = edge.tail.max(edge.head);
        self.current = apply_step(&self.current, Step::Contract(e))?;
        self.steps.push(Step::Contract(e));
        for (vs, es) in &mut self.paths {
            if let Some(i) = es.iter().position(|&x| x == e) {
                es.remove(i);
                vs.remove(i + 1);
            }
            for v in vs.iter_mut() {
                if *v == gone {
                    *v = keep;
                }
            }
        }
        Ok(())
    }

    fn contract_shared(&mut self) -> Result<()> {
        let shared: Vec<EdgeId> = self.first_edges.intersection(&self.second_edges).copied().collect();
        for e in shared {
            self.contract(e)?;
        }
        Ok(())
    }

    fn smooth(&mut self) -> Result<()> {
        loop {
            let mut count: BTreeMap<Vertex, usize> = BTreeMap::new();
            let mut ends = VertexSet::new();
            for (vs, _) in &self.paths {
                let closed = vs.len() > 1 && vs.first() == vs.last();
                let body = if closed { &vs[..vs.len() - 1] } else { &vs[..] };
                for &v in body {
                    *count.entry(v).or_default() += 1;
                }
                if !closed {
                    ends.insert(vs[0]);
                    ends.insert(*vs.last().unwrap());
                }
            }
            let pick = self.current.vertices().find_map(|v| {
                if count.get(&v) != Some(&1) || ends.contains(&v) {
                    return None;
                }
                if self.current.in_degree(v) != 1 || self.current.out_degree(v) != 1 {
                    return None;
                }
                let e = self.current.out_edges(v).next()?;
                let (vs, es) = self.paths.iter().find(|(vs, _)| vs.contains(&v))?;
                let closed = vs.first() == vs.last();
                (e.head != v && (!closed || es.len() > 2)).then_some(e.id)
            });
            let Some(e) = pick else { return Ok(()) };
            self.contract(e)?;
        }
    }

    fn finish(self, split: usize) -> Result<(MinorModel, Vec<DirectedPath>, Vec<DirectedPath>)> {
        let map = self.current.vertices().map(|v| (v, v)).collect();
        let mut built: Vec<DirectedPath> = self
            .paths
            .into_iter()
            .map(|(vs, es)| DirectedPath::new(&self.current, vs, es))
            .collect::<Result<_>>()?;
        let second = built.split_off(split);
        Ok((MinorModel::new(self.steps, map), built, second))
    }
}
