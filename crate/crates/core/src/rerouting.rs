//! Rerouting of horizontal and vertical path systems in disk and cylinder
//! embeddings into butterfly minors where the two families hit in reverse.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::digraph::{pairwise_disjoint, Digraph, DirectedPath, EdgeId, Vertex, VertexSet};
use crate::embedding::{Role, RotationEmbedding, Surface};
use crate::error::{Error, Result};
use crate::minors::{shrink_to_paths, MinorModel};
use crate::report::Report;

/// Two path families in an embedded digraph.
///
/// Disk: horizontals run from `R` to `L`, verticals from `B` to `T`, and the
/// two families may share vertices and edges. Cylinder: horizontals are the
/// separating circuits and verticals run from `T` to `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoutedSystem {
    pub embedding: RotationEmbedding,
    pub horizontals: Vec<DirectedPath>,
    pub verticals: Vec<DirectedPath>,
}

impl RoutedSystem {
    pub fn host(&self) -> &Digraph {
        self.embedding.host()
    }

    pub fn validate(&self) -> Report {
        let mut r = self.embedding.validate();
        let d = self.host();
        for (name, fam) in [("horizontal", &self.horizontals), ("vertical", &self.verticals)] {
            for (i, p) in fam.iter().enumerate() {
                if let Err(e) = p.check(d) {
                    r.push("path", format!("{name} {i}: {e}"));
                }
            }
            if !pairwise_disjoint(fam) {
                r.push("disjoint", format!("{name} paths share a vertex"));
            }
        }
        if !r.is_valid() {
            return r;
        }
        let role = |x| self.embedding.vertices_with_role(x);
        let ends = |r: &mut Report, name: &str, fam: &[DirectedPath], from: Role, to: Role| {
            for (i, p) in fam.iter().enumerate() {
                if !role(from).contains(&p.start()) || !role(to).contains(&p.finish()) || p.is_circuit() {
                    r.push("endpoints", format!("{name} {i} does not run from {from} to {to}"));
                }
            }
        };
        match self.embedding.surface() {
            Surface::Disk => {
                ends(&mut r, "vertical", &self.verticals, Role::B, Role::T);
                ends(&mut r, "horizontal", &self.horizontals, Role::R, Role::L);
                if self.verticals.len() != role(Role::B).len() {
                    r.push(
                        "family-size",
                        format!("{} verticals for {} bottom vertices", self.verticals.len(), role(Role::B).len()),
                    );
                }
                if self.horizontals.len() != role(Role::R).len() {
                    r.push(
                        "family-size",
                        format!("{} horizontals for {} right vertices", self.horizontals.len(), role(Role::R).len()),
                    );
                }
            }
            Surface::Cylinder => {
                ends(&mut r, "vertical", &self.verticals, Role::T, Role::B);
                for (i, c) in self.horizontals.iter().enumerate() {
                    if !c.is_circuit() {
                        r.push("circuit", format!("horizontal {i} is not a circuit"));
                    }
                }
                if self.verticals.len() != role(Role::T).len() {
                    r.push(
                        "family-size",
                        format!("{} paths for {} top vertices", self.verticals.len(), role(Role::T).len()),
                    );
                }
            }
        }
        r
    }
}

/// True when no two shared vertices occur in the same relative order on both paths.
pub fn hits_in_reverse(p: &DirectedPath, q: &DirectedPath) -> bool {
    p.hits_in_reverse(q)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RerouteMode {
    /// Exhaustive search for a routing with the fewest edges.
    Exact,
    /// Single-path rerouting moves that lower the edge count, to a fixed point.
    Local,
}

/// A rerouted system: the script, the system in the minor, and the routing
/// in the original host that the script was derived from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rerouted {
    pub model: MinorModel,
    pub system: RoutedSystem,
    pub routing: RoutedSystem,
}

const FAMILY_LIMIT: usize = 1 << 16;
const PAIR_LIMIT: usize = 1 << 24;

/// Reroutes a disk system so that every horizontal and vertical hit in
/// reverse, keeping the verticals weakly left of the original rightmost
/// vertical and the horizontals weakly below the original topmost horizontal.
///
/// The routing with the fewest edges is chosen (the input wins ties), unused
/// edges and vertices are deleted, and every edge shared by a horizontal and
/// a vertical is contracted.
pub fn reroute_disk(sys: &RoutedSystem, mode: RerouteMode) -> Result<Rerouted> {
    if sys.embedding.surface() != Surface::Disk {
        return Err(Error::InvalidArgument("disk rerouting needs a disk embedding".into()));
    }
    sys.validate().into_result()?;
    let (region_v, region_h) = disk_regions(sys)?;
    let (verticals, horizontals) = match mode {
        RerouteMode::Exact => exact_routing(sys, &region_v, &region_h)?,
        RerouteMode::Local => local_routing(sys, &region_v, &region_h),
    };
    let routing = RoutedSystem {
        embedding: sys.embedding.clone(),
        horizontals,
        verticals,
    };
    let (model, system) = shrink(&routing)?;
    for (i, v) in system.verticals.iter().enumerate() {
        for (j, h) in system.horizontals.iter().enumerate() {
            if !hits_in_reverse(h, v) {
                return Err(Error::Verification(format!(
                    "horizontal {j} and vertical {i} do not hit in reverse"
                )));
            }
        }
    }
    Ok(Rerouted { model, system, routing })
}

/// The vertices allowed for verticals and for horizontals.
fn disk_regions(sys: &RoutedSystem) -> Result<(VertexSet, VertexSet)> {
    let emb = &sys.embedding;
    let all = emb.host().vertex_set().clone();
    let region_v = match emb.left_right_order(&sys.verticals)?.last() {
        Some(&i) => emb.left_region(&sys.verticals[i])?,
        None => all.clone(),
    };
    let region_h = match emb.bottom_top_order(&sys.horizontals)?.last() {
        Some(&i) => emb.below_region(&sys.horizontals[i])?,
        None => all,
    };
    Ok((region_v, region_h))
}

/// Checks that every vertical of `routing` lies weakly left of the rightmost
/// vertical of `original` and every horizontal weakly below its topmost
/// horizontal. Both systems must share the embedding.
pub fn stays_inside(original: &RoutedSystem, routing: &RoutedSystem) -> Result<bool> {
    let (region_v, region_h) = disk_regions(original)?;
    Ok(routing.verticals.iter().all(|p| p.vertex_set().is_subset(&region_v))
        && routing.horizontals.iter().all(|p| p.vertex_set().is_subset(&region_h)))
}

fn edge_union<'a>(fam: impl IntoIterator<Item = &'a DirectedPath>) -> BTreeSet<EdgeId> {
    fam.into_iter().flat_map(|p| p.edges().iter().copied()).collect()
}

fn union_size(a: &[DirectedPath], b: &[DirectedPath]) -> usize {
    edge_union(a.iter().chain(b)).len()
}

/// Every family of vertex-disjoint paths inside `allowed`, one from each
/// source, ending in `targets`.
fn families(
    d: &Digraph,
    sources: &[Vertex],
    targets: &VertexSet,
    allowed: &VertexSet,
) -> Result<Vec<Vec<DirectedPath>>> {
    let per_source: Vec<Vec<DirectedPath>> = sources
        .iter()
        .map(|&s| simple_paths(d, s, targets, allowed))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    let mut used = VertexSet::new();

    fn go(
        per_source: &[Vec<DirectedPath>],
        chosen: &mut Vec<usize>,
        used: &mut VertexSet,
        out: &mut Vec<Vec<DirectedPath>>,
    ) -> Result<()> {
        let k = chosen.len();
        if k == per_source.len() {
            if out.len() >= FAMILY_LIMIT {
                return Err(Error::BudgetExhausted);
            }
            out.push(chosen.iter().enumerate().map(|(i, &c)| per_source[i][c].clone()).collect());
            return Ok(());
        }
        for (c, p) in per_source[k].iter().enumerate() {
            if p.vertices().iter().any(|v| used.contains(v)) {
                continue;
            }
            used.extend(p.vertices().iter().copied());
            chosen.push(c);
            go(per_source, chosen, used, out)?;
            chosen.pop();
            for v in p.vertices() {
                used.remove(v);
            }
        }
        Ok(())
    }

    go(&per_source, &mut chosen, &mut used, &mut out)?;
    Ok(out)
}

fn simple_paths(d: &Digraph, s: Vertex, targets: &VertexSet, allowed: &VertexSet) -> Result<Vec<DirectedPath>> {
    let mut out = Vec::new();
    if !allowed.contains(&s) {
        return Ok(out);
    }
    let mut vs = vec![s];
    let mut es: Vec<EdgeId> = Vec::new();
    let mut on = VertexSet::from([s]);

    fn go(
        d: &Digraph,
        targets: &VertexSet,
        allowed: &VertexSet,
        vs: &mut Vec<Vertex>,
        es: &mut Vec<EdgeId>,
        on: &mut VertexSet,
        out: &mut Vec<DirectedPath>,
    ) -> Result<()> {
        let v = *vs.last().unwrap();
        if targets.contains(&v) {
            if out.len() >= FAMILY_LIMIT {
                return Err(Error::BudgetExhausted);
            }
            out.push(DirectedPath::from_parts(vs.clone(), es.clone()));
            return Ok(());
        }
        let next: Vec<(EdgeId, Vertex)> = d.out_edges(v).map(|e| (e.id, e.head)).collect();
        for (e, w) in next {
            if on.contains(&w) || !allowed.contains(&w) {
                continue;
            }
            on.insert(w);
            vs.push(w);
            es.push(e);
            go(d, targets, allowed, vs, es, on, out)?;
            es.pop();
            vs.pop();
            on.remove(&w);
        }
        Ok(())
    }

    go(d, targets, allowed, &mut vs, &mut es, &mut on, &mut out)?;
    Ok(out)
}

fn exact_routing(
    sys: &RoutedSystem,
    region_v: &VertexSet,
    region_h: &VertexSet,
) -> Result<(Vec<DirectedPath>, Vec<DirectedPath>)> {
    let d = sys.host();
    let emb = &sys.embedding;
    let b: Vec<Vertex> = emb.vertices_with_role(Role::B).into_iter().collect();
    let r: Vec<Vertex> = emb.vertices_with_role(Role::R).into_iter().collect();
    let fv = families(d, &b, &emb.vertices_with_role(Role::T), region_v)?;
    let fh = families(d, &r, &emb.vertices_with_role(Role::L), region_h)?;
    if fv.len().saturating_mul(fh.len()) > PAIR_LIMIT {
        return Err(Error::BudgetExhausted);
    }
    let ev: Vec<BTreeSet<EdgeId>> = fv.iter().map(edge_union).collect();
    let eh: Vec<BTreeSet<EdgeId>> = fh.iter().map(edge_union).collect();
    let mut best = union_size(&sys.verticals, &sys.horizontals);
    let mut choice: Option<(usize, usize)> = None;
    for (i, a) in ev.iter().enumerate() {
        if a.len() >= best {
            continue;
        }
        for (j, c) in eh.iter().enumerate() {
            let size = a.len() + c.iter().filter(|e| !a.contains(e)).count();
            if size < best {
                best = size;
                choice = Some((i, j));
            }
        }
    }
    Ok(match choice {
        Some((i, j)) => (fv[i].clone(), fh[j].clone()),
        None => (sys.verticals.clone(), sys.horizontals.clone()),
    })
}

/// Cheapest path from `s` into `targets` through `allowed`, where edges in
/// `free` cost nothing and every other edge costs one.
fn cheapest_path(
    d: &Digraph,
    s: Vertex,
    targets: &VertexSet,
    allowed: &VertexSet,
    free: &BTreeSet<EdgeId>,
) -> Option<(DirectedPath, usize)> {
    let mut dist: BTreeMap<Vertex, usize> = BTreeMap::from([(s, 0)]);
    let mut pred: BTreeMap<Vertex, (Vertex, EdgeId)> = BTreeMap::new();
    let mut done = VertexSet::new();
    let mut queue = VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        if !done.insert(v) {
            continue;
        }
        if targets.contains(&v) {
            let mut vs = vec![v];
            let mut es = Vec::new();
            let mut x = v;
            while let Some(&(p, e)) = pred.get(&x) {
                vs.push(p);
                es.push(e);
                x = p;
            }
            vs.reverse();
            es.reverse();
            return Some((DirectedPath::from_parts(vs, es), dist[&v]));
        }
        for e in d.out_edges(v) {
            let w = e.head;
            if !allowed.contains(&w) || done.contains(&w) {
                continue;
            }
            let cost = usize::from(!free.contains(&e.id));
            let nd = dist[&v] + cost;
            if dist.get(&w).is_none_or(|&old| nd < old) {
                dist.insert(w, nd);
                pred.insert(w, (v, e.id));
                if cost == 0 {
                    queue.push_front(w);
                } else {
                    queue.push_back(w);
                }
            }
        }
    }
    None
}

/// One improvement pass over `moving`; returns true when some path changed.
fn improve(
    d: &Digraph,
    moving: &mut [DirectedPath],
    fixed: &[DirectedPath],
    targets: &VertexSet,
    region: &VertexSet,
) -> bool {
    let free = edge_union(fixed);
    let mut changed = false;
    for i in 0..moving.len() {
        let others: VertexSet = moving
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .flat_map(|(_, p)| p.vertices().iter().copied())
            .collect();
        let allowed: VertexSet = region.difference(&others).copied().collect();
        let current = moving[i].edges().iter().filter(|e| !free.contains(e)).count();
        if let Some((p, cost)) = cheapest_path(d, moving[i].start(), targets, &allowed, &free) {
            if cost < current {
                moving[i] = p;
                changed = true;
            }
        }
    }
    changed
}

fn local_routing(
    sys: &RoutedSystem,
    region_v: &VertexSet,
    region_h: &VertexSet,
) -> (Vec<DirectedPath>, Vec<DirectedPath>) {
    let d = sys.host();
    let emb = &sys.embedding;
    let t = emb.vertices_with_role(Role::T);
    let l = emb.vertices_with_role(Role::L);
    let mut vs = sys.verticals.clone();
    let mut hs = sys.horizontals.clone();
    loop {
        let a = improve(d, &mut vs, &hs, &t, region_v);
        let b = improve(d, &mut hs, &vs, &l, region_h);
        if !a && !b {
            return (vs, hs);
        }
    }
}

/// Deletes everything outside the routing and contracts every edge used by
/// both families, carrying the paths along.
fn shrink(routing: &RoutedSystem) -> Result<(MinorModel, RoutedSystem)> {
    let (model, verticals, horizontals) = shrink_to_paths(routing.host(), &routing.verticals, &routing.horizontals)?;
    let embedding = model.replay_embedding(&routing.embedding)?;
    let check = |fam: Vec<DirectedPath>| -> Result<Vec<DirectedPath>> {
        fam.into_iter()
            .map(|p| DirectedPath::new(embedding.host(), p.vertices().to_vec(), p.edges().to_vec()))
            .collect()
    };
    let verticals = check(verticals)?;
    let horizontals = check(horizontals)?;
    Ok((
        model,
        RoutedSystem {
            embedding,
            horizontals,
            verticals,
        },
    ))
}

/// Pairs `(circuit, path)` where a minimal sub-path of the path between two
/// vertices of the circuit closes, with the circuit, a curve around the hole.
pub fn cylinder_violations(sys: &RoutedSystem) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for (ci, q) in sys.horizontals.iter().enumerate() {
        let on_q = q.vertex_set();
        for (pi, p) in sys.verticals.iter().enumerate() {
            let hits: Vec<usize> = (0..p.vertices().len()).filter(|&i| on_q.contains(&p.vertices()[i])).collect();
            for w in hits.windows(2) {
                let seg = p.slice(w[0], w[1]);
                let back = q
                    .arc(seg.finish(), seg.start())
                    .ok_or_else(|| Error::InvalidPath("circuit arc missing".into()))?;
                let closed = seg.concat(&back)?;
                if sys.embedding.winding(&closed)? != 0 {
                    out.push((ci, pi));
                    break;
                }
            }
        }
    }
    Ok(out)
}

/// Reroutes the `T`-`B` paths of a cylinder system (whose horizontals are
/// consistently oriented separating circuits) so that no minimal sub-path
/// between two vertices of a circuit winds around the hole together with it.
/// A system that already has the property is returned unchanged with an
/// empty script.
pub fn reroute_cylinder(sys: &RoutedSystem) -> Result<Rerouted> {
    if sys.embedding.surface() != Surface::Cylinder {
        return Err(Error::InvalidArgument("cylinder rerouting needs a cylinder embedding".into()));
    }
    sys.validate().into_result()?;
    let mut sign = 0;
    for (i, c) in sys.horizontals.iter().enumerate() {
        let w = sys.embedding.winding(c)?;
        if w == 0 {
            return Err(Error::Precondition(format!("circuit {i} does not separate the boundaries")));
        }
        if sign != 0 && w.signum() != sign {
            return Err(Error::Precondition("circuits are not consistently oriented".into()));
        }
        sign = w.signum();
    }
    if cylinder_violations(sys)?.is_empty() {
        let map = sys.host().vertices().map(|v| (v, v)).collect();
        return Ok(Rerouted {
            model: MinorModel::new(Vec::new(), map),
            system: sys.clone(),
            routing: sys.clone(),
        });
    }
    let d = sys.host();
    let b = sys.embedding.vertices_with_role(Role::B);
    let all = d.vertex_set().clone();
    let mut paths = sys.verticals.clone();
    while improve(d, &mut paths, &sys.horizontals, &b, &all) {}
    let routing = RoutedSystem {
        embedding: sys.embedding.clone(),
        horizontals: sys.horizontals.clone(),
        verticals: paths,
    };
    let (model, system) = shrink(&routing)?;
    let bad = cylinder_violations(&system)?;
    if let Some((c, p)) = bad.first() {
        return Err(Error::Verification(format!("path {p} still winds along circuit {c}")));
    }
    Ok(Rerouted { model, system, routing })
}
