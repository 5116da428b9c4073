use std::collections::{BTreeMap, VecDeque};

use super::{AssemblyInput, PipelineConfig};
use crate::digraph::{menger_paths, pairwise_disjoint, undirected_min_vertex_cut, Digraph, DirectedPath, EdgeId, MengerOutcome, Vertex, VertexSet};
use crate::embedding::RotationEmbedding;
use crate::error::{Error, Result};

/// Outcome of linking two vertex cuts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CutLinkage {
    Paths(Vec<DirectedPath>),
    /// An undirected separator smaller than the cut order, so the hypothesis
    /// fails.
    SmallCut(VertexSet),
}

/// `n` disjoint paths from `c1` to `c2` in an eulerian digraph of out-degree
/// at most 6 whose cuts are at least `7n` apart in the undirected sense.
pub fn link_cuts(d: &Digraph, c1: &VertexSet, c2: &VertexSet, n: usize) -> Result<CutLinkage> {
    link_cuts_with_order(d, c1, c2, n, 7)
}

/// As [`link_cuts`] with cut order `factor * n`.
pub fn link_cuts_with_order(d: &Digraph, c1: &VertexSet, c2: &VertexSet, n: usize, factor: usize) -> Result<CutLinkage> {
    if n == 0 || factor == 0 {
        return Err(Error::InvalidArgument("n and the cut factor must be positive".into()));
    }
    for v in d.vertices() {
        if d.out_degree(v) > 6 {
            return Err(Error::Precondition(format!("vertex {v} has out-degree {}", d.out_degree(v))));
        }
        if d.out_degree(v) != d.in_degree(v) {
            return Err(Error::Precondition(format!("vertex {v} is not balanced")));
        }
    }
    let order = factor * n;
    for (name, c) in [("first", c1), ("second", c2)] {
        if c.len() < order {
            return Err(Error::Precondition(format!("{name} cut has {} < {order} vertices", c.len())));
        }
    }
    let cut = undirected_min_vertex_cut(d, c1, c2)?;
    if cut.len() < order {
        return Ok(CutLinkage::SmallCut(cut));
    }
    match menger_paths(d, c1, c2, n)? {
        MengerOutcome::Paths(ps) if pairwise_disjoint(&ps) => Ok(CutLinkage::Paths(ps)),
        MengerOutcome::Paths(_) => Err(Error::Verification("linking paths are not disjoint".into())),
        MengerOutcome::Separator(s) => Err(Error::Verification(format!(
            "directed separator of order {} despite undirected order {}",
            s.len(),
            cut.len()
        ))),
    }
}

/// Undirected circuits nested around the hole, innermost first, and
/// undirected paths from the innermost to the outermost.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UndirectedWitness {
    pub circuits: Vec<Vec<Vertex>>,
    pub paths: Vec<Vec<Vertex>>,
}

/// Nested consistently oriented circuits with linking paths, ready for
/// assembly. When the circuits run clockwise the embedding is mirrored so
/// that they run counter-clockwise in `input`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawCylinder {
    pub input: AssemblyInput,
    pub mirrored: bool,
    /// The circuits are witness circuits taken as they are.
    pub from_witness: bool,
}

fn adjacent(d: &Digraph, u: Vertex, v: Vertex) -> bool {
    d.find_edge(u, v).is_some() || d.find_edge(v, u).is_some()
}

fn distinct(vs: &[Vertex]) -> bool {
    vs.iter().copied().collect::<VertexSet>().len() == vs.len()
}

/// Vertices of `cycle` together with everything it separates from the
/// outer boundary.
fn inside(emb: &RotationEmbedding, cycle: &VertexSet) -> Result<VertexSet> {
    let d = emb.host();
    let hole = emb
        .hole_face()
        .ok_or_else(|| Error::Embedding("embedding has no hole".into()))?;
    let mut seen = cycle.clone();
    let mut queue: VecDeque<Vertex> = emb.face_vertices(hole).into_iter().filter(|v| !cycle.contains(v)).collect();
    seen.extend(queue.iter().copied());
    while let Some(v) = queue.pop_front() {
        for w in d.neighbours(v) {
            if seen.insert(w) {
                queue.push_back(w);
            }
        }
    }
    Ok(seen)
}

impl UndirectedWitness {
    /// Structural check; returns the inside of every circuit.
    fn check(&self, emb: &RotationEmbedding) -> Result<Vec<VertexSet>> {
        let d = emb.host();
        let bad = |m: String| Err(Error::InvalidArgument(m));
        let mut used = VertexSet::new();
        for (i, c) in self.circuits.iter().enumerate() {
            let closed = c.len() >= 2 && (0..c.len()).all(|k| adjacent(d, c[k], c[(k + 1) % c.len()]));
            if !closed || !distinct(c) || c.iter().any(|v| !d.has_vertex(*v)) {
                return bad(format!("witness circuit {i} is not a cycle"));
            }
            if c.iter().any(|v| !used.insert(*v)) {
                return bad(format!("witness circuit {i} meets an earlier one"));
            }
        }
        let insides: Vec<VertexSet> = self
            .circuits
            .iter()
            .map(|c| inside(emb, &c.iter().copied().collect()))
            .collect::<Result<_>>()?;
        for (i, w) in insides.windows(2).enumerate() {
            if !w[0].is_subset(&w[1]) || self.circuits[i + 1].iter().any(|v| w[0].contains(v)) {
                return bad(format!("witness circuits {i} and {} are not nested", i + 1));
            }
        }
        let (Some(first), Some(last)) = (self.circuits.first(), self.circuits.last()) else {
            return bad("witness has no circuits".into());
        };
        let mut used = VertexSet::new();
        for (i, p) in self.paths.iter().enumerate() {
            let ok = !p.is_empty()
                && distinct(p)
                && p.windows(2).all(|w| adjacent(d, w[0], w[1]))
                && first.contains(&p[0])
                && last.contains(p.last().unwrap());
            if !ok {
                return bad(format!("witness path {i} does not join the boundary circuits"));
            }
            if p.iter().any(|v| !used.insert(*v)) {
                return bad(format!("witness path {i} meets an earlier one"));
            }
        }
        Ok(insides)
    }
}

/// Splits a closed walk into simple circuits.
fn simple_circuits(vs: &[Vertex], es: &[EdgeId]) -> Vec<(Vec<Vertex>, Vec<EdgeId>)> {
    let mut out = Vec::new();
    let mut stack_v: Vec<Vertex> = vec![vs[0]];
    let mut stack_e: Vec<EdgeId> = Vec::new();
    let mut at: BTreeMap<Vertex, usize> = BTreeMap::from([(vs[0], 0)]);
    for (i, &e) in es.iter().enumerate() {
        let v = vs[i + 1];
        stack_e.push(e);
        if let Some(&k) = at.get(&v) {
            let mut cv: Vec<Vertex> = stack_v.drain(k + 1..).collect();
            cv.insert(0, v);
            cv.push(v);
            let ce: Vec<EdgeId> = stack_e.drain(k..).collect();
            for x in &cv[1..cv.len() - 1] {
                at.remove(x);
            }
            out.push((cv, ce));
        } else {
            at.insert(v, stack_v.len());
            stack_v.push(v);
        }
    }
    out
}

/// A simple circuit of winding `sign` through vertices of `region` only.
fn winding_circuit(
    d: &Digraph,
    windings: &BTreeMap<EdgeId, i32>,
    region: &VertexSet,
    sign: i32,
) -> Option<DirectedPath> {
    let bound = windings.values().map(|w| w.abs()).sum::<i32>() + 1;
    for &s in region {
        let mut prev: BTreeMap<(Vertex, i32), (Vertex, i32, EdgeId)> = BTreeMap::new();
        let mut queue = VecDeque::from([(s, 0)]);
        let goal = (s, sign);
        while let Some((v, k)) = queue.pop_front() {
            if (v, k) == goal {
                break;
            }
            for e in d.out_edges(v) {
                let w = e.head;
                let k2 = k + windings.get(&e.id).copied().unwrap_or(0);
                if !region.contains(&w) || k2.abs() > bound || (w, k2) == (s, 0) || prev.contains_key(&(w, k2)) {
                    continue;
                }
                prev.insert((w, k2), (v, k, e.id));
                queue.push_back((w, k2));
            }
        }
        if !prev.contains_key(&goal) {
            continue;
        }
        let (mut vs, mut es) = (vec![s], Vec::new());
        let mut cur = goal;
        while cur != (s, 0) {
            let (v, k, e) = prev[&cur];
            es.push(e);
            vs.push(v);
            cur = (v, k);
        }
        vs.reverse();
        es.reverse();
        for (cv, ce) in simple_circuits(&vs, &es) {
            let w: i32 = ce.iter().map(|e| windings.get(e).copied().unwrap_or(0)).sum();
            if w == sign {
                return Some(DirectedPath::from_parts(cv, ce));
            }
        }
    }
    None
}

fn as_directed(d: &Digraph, c: &[Vertex]) -> Option<DirectedPath> {
    let mut fwd = c.to_vec();
    fwd.push(c[0]);
    let mut back = fwd.clone();
    back.reverse();
    DirectedPath::from_vertices(d, &fwd)
        .ok()
        .or_else(|| DirectedPath::from_vertices(d, &back).ok())
}

fn spread<T: Clone>(items: &[T], n: usize) -> Vec<T> {
    if n == 1 {
        return vec![items[0].clone()];
    }
    (0..n).map(|i| items[i * (items.len() - 1) / (n - 1)].clone()).collect()
}

/// Linking paths from `a` to `b`, trimmed to meet each set only at its ends.
fn link(d: &Digraph, a: &VertexSet, b: &VertexSet, n: usize, cfg: &PipelineConfig) -> Result<Vec<DirectedPath>> {
    let linked = match link_cuts_with_order(d, a, b, n, cfg.cut_order) {
        Ok(CutLinkage::Paths(ps)) => Some(ps),
        Ok(CutLinkage::SmallCut(cut)) => {
            return Err(Error::Precondition(format!("boundary circuits are separated by {} vertices", cut.len())))
        }
        Err(Error::Precondition(_)) => None,
        Err(e) => return Err(e),
    };
    let paths = match linked {
        Some(ps) => ps,
        None => match menger_paths(d, a, b, n)? {
            MengerOutcome::Paths(ps) => ps,
            MengerOutcome::Separator(s) => {
                return Err(Error::Precondition(format!("boundary circuits are separated by {} vertices", s.len())))
            }
        },
    };
    Ok(paths
        .into_iter()
        .map(|p| {
            let i = p.vertices().iter().rposition(|v| a.contains(v)).unwrap_or(0);
            p.slice(i, p.len())
        })
        .collect())
}

/// `n` nested disjoint circuits of one orientation with `n` in-paths and
/// `n` out-paths between the innermost and outermost.
///
/// Witness circuits that are already directed circuits are used when enough
/// of them agree; otherwise each band between two consecutive witness
/// circuits is searched for a circuit winding around the hole.
pub fn find_circuits_and_paths(
    emb: &RotationEmbedding,
    witness: &UndirectedWitness,
    cfg: &PipelineConfig,
    n: usize,
) -> Result<RawCylinder> {
    if n < 2 {
        return Err(Error::InvalidArgument("at least two circuits are needed".into()));
    }
    cfg.validate()?;
    let d = emb.host();
    if witness.circuits.len() < cfg.circuits_required * n {
        return Err(Error::Precondition(format!(
            "witness has {} circuits, {} needed",
            witness.circuits.len(),
            cfg.circuits_required * n
        )));
    }
    if witness.paths.len() < cfg.paths_required * n {
        return Err(Error::Precondition(format!(
            "witness has {} paths, {} needed",
            witness.paths.len(),
            cfg.paths_required * n
        )));
    }
    let insides = witness.check(emb)?;

    let mut direct: BTreeMap<i32, Vec<DirectedPath>> = BTreeMap::new();
    for c in &witness.circuits {
        if let Some(p) = as_directed(d, c) {
            direct.entry(emb.winding(&p)?).or_default().push(p);
        }
    }
    let mut pick = None;
    for sign in [1, -1] {
        if direct.get(&sign).is_some_and(|cs| cs.len() >= n) {
            pick = Some((sign, spread(&direct[&sign], n), true));
            break;
        }
    }
    if pick.is_none() {
        let windings = emb.edge_windings()?;
        let mut found: BTreeMap<i32, Vec<DirectedPath>> = BTreeMap::new();
        let bands = insides.len().min(cfg.circuit_count * n + 1);
        for t in (0..bands.saturating_sub(1)).step_by(2) {
            let outer = &insides[t + 1];
            let region: VertexSet = match t {
                0 => outer.clone(),
                _ => outer.difference(&insides[t - 1]).copied().collect(),
            };
            for sign in [1, -1] {
                if let Some(c) = winding_circuit(d, &windings, &region, sign) {
                    found.entry(sign).or_default().push(c);
                }
            }
        }
        for sign in [1, -1] {
            if found.get(&sign).is_some_and(|cs| cs.len() >= n) {
                pick = Some((sign, spread(&found[&sign], n), false));
                break;
            }
        }
        if pick.is_none() {
            let best = found.values().map(Vec::len).max().unwrap_or(0);
            return Err(Error::Precondition(format!(
                "only {best} consistently oriented circuits inside witness circuit {}",
                bands.saturating_sub(1)
            )));
        }
    }
    let (sign, circuits, from_witness) = pick.unwrap();
    let embedding = if sign == 1 { emb.clone() } else { emb.mirrored() };
    let inner = circuits[0].vertex_set();
    let outer = circuits[n - 1].vertex_set();
    let in_paths = link(d, &outer, &inner, n, cfg)?;
    let out_paths = link(d, &inner, &outer, n, cfg)?;
    let input = AssemblyInput {
        embedding,
        circuits,
        in_paths,
        out_paths,
    };
    input.validate().into_result()?;
    Ok(RawCylinder {
        input,
        mirrored: sign != 1,
        from_witness,
    })
}
