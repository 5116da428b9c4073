use std::collections::BTreeMap;

use crate::digraph::{Digraph, Vertex};

fn arc_counts(d: &Digraph) -> BTreeMap<(Vertex, Vertex), usize> {
    let mut m = BTreeMap::new();
    for e in d.edges() {
        *m.entry((e.tail, e.head)).or_insert(0) += 1;
    }
    m
}

/// An isomorphism `a → b` of multidigraphs, if one exists.
pub fn find_isomorphism(a: &Digraph, b: &Digraph) -> Option<BTreeMap<Vertex, Vertex>> {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return None;
    }
    let ca = arc_counts(a);
    let cb = arc_counts(b);
    let sig = |d: &Digraph, c: &BTreeMap<(Vertex, Vertex), usize>, v: Vertex| {
        (d.in_degree(v), d.out_degree(v), c.get(&(v, v)).copied().unwrap_or(0))
    };
    let mut order: Vec<Vertex> = a.vertices().collect();
    order.sort_by_key(|&v| std::cmp::Reverse(a.in_degree(v) + a.out_degree(v)));
    let sa: BTreeMap<Vertex, _> = a.vertices().map(|v| (v, sig(a, &ca, v))).collect();
    let sb: BTreeMap<Vertex, _> = b.vertices().map(|v| (v, sig(b, &cb, v))).collect();
    let bv: Vec<Vertex> = b.vertices().collect();

    fn go(
        i: usize,
        order: &[Vertex],
        bv: &[Vertex],
        sa: &BTreeMap<Vertex, (usize, usize, usize)>,
        sb: &BTreeMap<Vertex, (usize, usize, usize)>,
        ca: &BTreeMap<(Vertex, Vertex), usize>,
        cb: &BTreeMap<(Vertex, Vertex), usize>,
        map: &mut BTreeMap<Vertex, Vertex>,
        used: &mut Vec<bool>,
    ) -> bool {
        if i == order.len() {
            return true;
        }
        let v = order[i];
        for (k, &w) in bv.iter().enumerate() {
            if used[k] || sa[&v] != sb[&w] {
                continue;
            }
            let ok = order[..i].iter().all(|&u| {
                let mu = map[&u];
                ca.get(&(u, v)).copied().unwrap_or(0) == cb.get(&(mu, w)).copied().unwrap_or(0)
                    && ca.get(&(v, u)).copied().unwrap_or(0) == cb.get(&(w, mu)).copied().unwrap_or(0)
            });
            if !ok {
                continue;
            }
            map.insert(v, w);
            used[k] = true;
            if go(i + 1, order, bv, sa, sb, ca, cb, map, used) {
                return true;
            }
            used[k] = false;
            map.remove(&v);
        }
        false
    }

    let mut map = BTreeMap::new();
    let mut used = vec![false; bv.len()];
    go(0, &order, &bv, &sa, &sb, &ca, &cb, &mut map, &mut used).then_some(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycles_are_isomorphic() {
        let a = Digraph::directed_cycle(4);
        let b = Digraph::from_edges(4, &[(2, 0), (0, 3), (3, 1), (1, 2)]);
        assert!(find_isomorphism(&a, &b).is_some());
    }

    #[test]
    fn parallel_edges_matter() {
        let a = Digraph::from_edges(2, &[(0, 1), (0, 1)]);
        let b = Digraph::from_edges(2, &[(0, 1), (1, 0)]);
        assert!(find_isomorphism(&a, &b).is_none());
    }
}
