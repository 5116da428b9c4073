use std::collections::BTreeMap;

use super::{Digraph, Vertex, VertexSet};

/// Partition of `V(D)` into strong components, ordered by representative
/// (the smallest vertex id of each component).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrongComponents {
    comps: Vec<VertexSet>,
    index: BTreeMap<Vertex, usize>,
}

impl StrongComponents {
    pub fn components(&self) -> &[VertexSet] {
        &self.comps
    }

    pub fn count(&self) -> usize {
        self.comps.len()
    }

    pub fn component_of(&self, v: Vertex) -> Option<&VertexSet> {
        self.index.get(&v).map(|&i| &self.comps[i])
    }

    pub fn representative(&self, v: Vertex) -> Option<Vertex> {
        self.component_of(v).and_then(|c| c.iter().next().copied())
    }

    pub fn same_component(&self, u: Vertex, v: Vertex) -> bool {
        matches!((self.index.get(&u), self.index.get(&v)), (Some(a), Some(b)) if a == b)
    }
}

/// Iterative Tarjan.
pub fn strong_components(d: &Digraph) -> StrongComponents {
    let verts: Vec<Vertex> = d.vertices().collect();
    let pos: BTreeMap<Vertex, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let adj: Vec<Vec<usize>> = verts.iter().map(|&v| d.successors(v).map(|u| pos[&u]).collect()).collect();
    let n = verts.len();

    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut next = 0;
    let mut raw: Vec<VertexSet> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut i)) = call.last_mut() {
            if *i < adj[v].len() {
                let w = adj[v][*i];
                *i += 1;
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = VertexSet::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp.insert(verts[w]);
                        if w == v {
                            break;
                        }
                    }
                    raw.push(comp);
                }
            }
        }
    }

    raw.sort_by_key(|c| *c.iter().next().unwrap());
    let mut idx = BTreeMap::new();
    for (i, c) in raw.iter().enumerate() {
        for &v in c {
            idx.insert(v, i);
        }
    }
    StrongComponents { comps: raw, index: idx }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singleton() {
        let d = Digraph::with_vertices(1);
        assert_eq!(strong_components(&d).components(), &[VertexSet::from([0])]);
    }

    #[test]
    fn three_cycle_is_one_component() {
        let d = Digraph::directed_cycle(3);
        assert_eq!(strong_components(&d).components(), &[VertexSet::from([0, 1, 2])]);
    }

    #[test]
    fn path_gives_singletons() {
        let d = Digraph::from_edges(3, &[(0, 1), (1, 2)]);
        assert_eq!(strong_components(&d).count(), 3);
    }

    #[test]
    fn empty_digraph() {
        assert_eq!(strong_components(&Digraph::new()).count(), 0);
    }
}
