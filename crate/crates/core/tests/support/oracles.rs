use std::collections::BTreeMap;

use cylgrid::digraph::strong_components;
use cylgrid::havens::{subsets_below, Representation};
use cylgrid::linkages::{Linkage, PairRelation};
use cylgrid::{Digraph, DirectedPath, Subdigraph, Vertex, VertexSet};

/// Tries every table of component choices and checks all nested pairs.
pub fn brute_has_haven(d: &Digraph, w: usize) -> bool {
    if w == 0 {
        return true;
    }
    let subsets = subsets_below(d.vertex_set(), w);
    let choices: Vec<Vec<VertexSet>> = subsets
        .iter()
        .map(|z| strong_components(&d.without(z)).components().to_vec())
        .collect();
    if choices.iter().any(|c| c.is_empty()) {
        return false;
    }
    let mut idx = vec![0usize; subsets.len()];
    loop {
        let ok = (0..subsets.len()).all(|i| {
            (0..subsets.len()).all(|j| {
                !(subsets[j].is_subset(&subsets[i]) && subsets[j].len() < subsets[i].len())
                    || choices[i][idx[i]].is_subset(&choices[j][idx[j]])
            })
        });
        if ok {
            return true;
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return false;
            }
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

pub fn brute_order(d: &Digraph) -> usize {
    (0..=d.vertex_count()).rev().find(|&w| brute_has_haven(d, w)).unwrap()
}

pub fn sub(vs: &[Vertex], d: &Digraph) -> Subdigraph {
    let vertices: VertexSet = vs.iter().copied().collect();
    let edges = d
        .edges()
        .filter(|e| vertices.contains(&e.tail) && vertices.contains(&e.head))
        .map(|e| e.id)
        .collect();
    Subdigraph { vertices, edges }
}

pub fn k3_representation() -> Representation {
    let mut host = Digraph::with_vertices(12);
    for t in [[0, 1, 2], [3, 4, 5], [6, 7, 8], [1, 3, 9], [4, 6, 10], [2, 7, 11]] {
        for i in 0..3 {
            host.add_edge(t[i], t[(i + 1) % 3]).unwrap();
        }
    }
    let vertex_subs = BTreeMap::from([
        (0, sub(&[0, 1, 2], &host)),
        (1, sub(&[3, 4, 5], &host)),
        (2, sub(&[6, 7, 8], &host)),
    ]);
    let edge_subs = vec![
        ((0, 1), sub(&[1, 3, 9], &host)),
        ((1, 2), sub(&[4, 6, 10], &host)),
        ((0, 2), sub(&[2, 7, 11], &host)),
    ];
    Representation { host, vertex_subs, edge_subs }
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Linkages a_i -> b_i and b_i -> a_sigma(i) on A = 0..k, B = k..2k.
pub fn sigma_linkages(sigma: &[usize]) -> (Digraph, Linkage, Linkage) {
    let k = sigma.len();
    let mut edges: Vec<(usize, usize)> = (0..k).map(|i| (i, k + i)).collect();
    edges.extend((0..k).map(|i| (k + i, sigma[i])));
    let d = Digraph::from_edges(2 * k, &edges);
    let a: Vec<usize> = (0..k).collect();
    let b: Vec<usize> = (k..2 * k).collect();
    let fwd = (0..k).map(|i| DirectedPath::from_vertices(&d, &[i, k + i]).unwrap()).collect();
    let back = (0..k).map(|i| DirectedPath::from_vertices(&d, &[k + i, sigma[i]]).unwrap()).collect();
    let lf = Linkage::new(&d, &a, &b, fwd).unwrap();
    let lb = Linkage::new(&d, &b, &a, back).unwrap();
    (d, lf, lb)
}

/// Exhaustive over all pairs of orders on A and B.
pub fn brute_relation(sigma: &[usize]) -> PairRelation {
    let k = sigma.len();
    let orders = permutations(k);
    let monotone = |img: &[usize]| -> (bool, bool) {
        (img.windows(2).all(|w| w[0] < w[1]), img.windows(2).all(|w| w[0] > w[1]))
    };
    let mut cross = false;
    for oa in &orders {
        let mut pos_a = vec![0; k];
        for (p, &x) in oa.iter().enumerate() {
            pos_a[x] = p;
        }
        for ob in &orders {
            let mut pos_b = vec![0; k];
            for (p, &x) in ob.iter().enumerate() {
                pos_b[x] = p;
            }
            let f_img: Vec<usize> = oa.iter().map(|&a| pos_b[a]).collect();
            let g_img: Vec<usize> = ob.iter().map(|&b| pos_a[sigma[b]]).collect();
            let (fi, fd) = monotone(&f_img);
            let (gi, gd) = monotone(&g_img);
            if fi && gi {
                return PairRelation::Agree;
            }
            cross |= (fi && gd) || (fd && gi);
        }
    }
    if cross {
        PairRelation::Cross
    } else {
        PairRelation::Neither
    }
}
