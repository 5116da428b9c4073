//! Haven certificates, their checker, exhaustive haven-order search and the
//! haven constructions from representations and intersecting families.

mod construct;
mod reduce;
mod search;

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::digraph::{strong_components, Digraph, Vertex, VertexSet};
use crate::report::Report;

pub use construct::{
    haven_from_intersecting_family, haven_from_representation, wall_graph, wall_haven, Representation,
};
pub use reduce::{reduce_to_eulerian, EulerianOutcome, ReduceConfig};
pub use search::{find_haven, haven_order, HavenOrder, HavenSearch};

/// Anything that answers haven queries: a strong component of `D - Z` for
/// every `Z` with `|Z| < order`, named by one of its vertices.
pub trait Haven {
    fn order(&self) -> usize;
    fn query(&self, z: &VertexSet) -> Option<Vertex>;
}

/// An explicit haven table.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HavenCertificate {
    pub order: usize,
    pub table: BTreeMap<VertexSet, Vertex>,
}

impl Haven for HavenCertificate {
    fn order(&self) -> usize {
        self.order
    }

    fn query(&self, z: &VertexSet) -> Option<Vertex> {
        self.table.get(z).copied()
    }
}

impl HavenCertificate {
    /// Tabulates a haven of order `order` given by `f`, normalizing every
    /// representative to the smallest vertex of its component.
    pub fn tabulate(d: &Digraph, order: usize, f: impl Fn(&VertexSet) -> Option<Vertex>) -> Option<Self> {
        let mut table = BTreeMap::new();
        for z in subsets_below(d.vertex_set(), order) {
            let rep = f(&z)?;
            table.insert(z.clone(), component_in(d, &z, rep)?.into_iter().next()?);
        }
        Some(HavenCertificate { order, table })
    }

    /// The haven restricted to a smaller order.
    pub fn truncate(&self, order: usize) -> Self {
        HavenCertificate {
            order: order.min(self.order),
            table: self
                .table
                .iter()
                .filter(|(z, _)| z.len() < order)
                .map(|(z, &v)| (z.clone(), v))
                .collect(),
        }
    }

    /// Component of `D - Z` named by the entry for `z`.
    pub fn component(&self, d: &Digraph, z: &VertexSet) -> Option<VertexSet> {
        component_in(d, z, *self.table.get(z)?)
    }
}

/// The strong component of `D - Z` containing `v`, if `v ∉ Z`.
pub fn component_in(d: &Digraph, z: &VertexSet, v: Vertex) -> Option<VertexSet> {
    if z.contains(&v) || !d.has_vertex(v) {
        return None;
    }
    let rest = d.without(z);
    strong_components(&rest).component_of(v).cloned()
}

/// All subsets of `universe` of size below `bound`, by size then lexicographically.
pub fn subsets_below(universe: &VertexSet, bound: usize) -> Vec<VertexSet> {
    let items: Vec<Vertex> = universe.iter().copied().collect();
    let mut out = Vec::new();
    for k in 0..bound.min(items.len() + 1) {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            out.push(idx.iter().map(|&i| items[i]).collect());
            let mut i = k;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if idx[i] < items.len() - k + i {
                    idx[i] += 1;
                    for j in i + 1..k {
                        idx[j] = idx[j - 1] + 1;
                    }
                    i = usize::MAX;
                    break;
                }
            }
            if i != usize::MAX {
                break;
            }
        }
    }
    out
}

fn check_entries(d: &Digraph, cert: &HavenCertificate, r: &mut Report) -> BTreeMap<VertexSet, VertexSet> {
    let expected: BTreeSet<VertexSet> = subsets_below(d.vertex_set(), cert.order).into_iter().collect();
    for z in &expected {
        if !cert.table.contains_key(z) {
            r.push("coverage", format!("missing entry for Z = {z:?}"));
        }
    }
    let mut comps = BTreeMap::new();
    for (z, &rep) in &cert.table {
        if !expected.contains(z) {
            r.push("coverage", format!("extraneous entry for Z = {z:?}"));
            continue;
        }
        match component_in(d, z, rep) {
            Some(c) => {
                comps.insert(z.clone(), c);
            }
            None => r.push("component", format!("B({z:?}) = {rep} is not a vertex of D - Z")),
        }
    }
    comps
}

/// Checks a certificate: coverage, genuine components, and the haven axiom
/// on cover pairs `Z - z ⊂ Z`.
pub fn check_haven(d: &Digraph, cert: &HavenCertificate) -> Report {
    let mut r = Report::new();
    let comps = check_entries(d, cert, &mut r);
    for (z, c) in &comps {
        for &x in z {
            let mut parent = z.clone();
            parent.remove(&x);
            if let Some(pc) = comps.get(&parent) {
                if !c.is_subset(pc) {
                    r.push("axiom", format!("B({z:?}) is not inside B({parent:?})"));
                }
            }
        }
    }
    r
}

/// Same verdict as [`check_haven`], checking the axiom on every nested pair.
pub fn check_haven_all_pairs(d: &Digraph, cert: &HavenCertificate) -> Report {
    let mut r = Report::new();
    let comps = check_entries(d, cert, &mut r);
    for (z, c) in &comps {
        for (zp, cp) in &comps {
            if zp.len() < z.len() && zp.is_subset(z) && !c.is_subset(cp) {
                r.push("axiom", format!("B({z:?}) is not inside B({zp:?})"));
            }
        }
    }
    r
}

/// Spot-checks a haven on `samples` random sets `Z` and all their covers.
pub fn check_haven_sampled(d: &Digraph, haven: &dyn Haven, samples: usize, seed: u64) -> Report {
    let mut r = Report::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let verts: Vec<Vertex> = d.vertices().collect();
    let w = haven.order();
    if w == 0 {
        return r;
    }
    let comp = |z: &VertexSet, r: &mut Report| -> Option<VertexSet> {
        let rep = haven.query(z);
        let c = rep.and_then(|v| component_in(d, z, v));
        if c.is_none() {
            r.push("component", format!("no valid component for Z = {z:?}"));
        }
        c
    };
    for _ in 0..samples {
        let k = rng.gen_range(0..w.min(verts.len() + 1));
        let z: VertexSet = verts.choose_multiple(&mut rng, k).copied().collect();
        let Some(c) = comp(&z, &mut r) else { continue };
        for &x in &z {
            let mut parent = z.clone();
            parent.remove(&x);
            if let Some(pc) = comp(&parent, &mut r) {
                if !c.is_subset(&pc) {
                    r.push("axiom", format!("B({z:?}) is not inside B({parent:?})"));
                }
            }
        }
    }
    r
}

/// Lifts a haven of a subdigraph to the host: `B(Z)` is the component of
/// `D - Z` containing the subdigraph's `B(Z ∩ V(D'))`.
pub fn lift_certificate(host: &Digraph, sub: &Digraph, cert: &HavenCertificate) -> Option<HavenCertificate> {
    HavenCertificate::tabulate(host, cert.order, |z| {
        let inner: VertexSet = z.intersection(sub.vertex_set()).copied().collect();
        cert.query(&inner)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_enumerated_by_size() {
        let u: VertexSet = (0..4).collect();
        let s = subsets_below(&u, 3);
        assert_eq!(s.len(), 1 + 4 + 6);
        assert!(s[0].is_empty());
        assert_eq!(s[5], VertexSet::from([0, 1]));
    }

    #[test]
    fn three_cycle_order_two() {
        let d = Digraph::directed_cycle(3);
        let mut table = BTreeMap::new();
        table.insert(VertexSet::new(), 0);
        for v in 0..3 {
            table.insert(VertexSet::from([v]), (v + 1) % 3);
        }
        let cert = HavenCertificate { order: 2, table };
        assert!(check_haven(&d, &cert).is_valid());
    }

    #[test]
    fn missing_entry_reported() {
        let d = Digraph::directed_cycle(3);
        let cert = HavenCertificate {
            order: 2,
            table: BTreeMap::from([(VertexSet::new(), 0)]),
        };
        assert!(check_haven(&d, &cert).has_clause("coverage"));
    }
}
