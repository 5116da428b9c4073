//! Seeded instance generators for the rerouting and extraction routines.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::digraph::{Digraph, DirectedPath, EdgeId, Vertex, VertexSet};
use crate::embedding::{Role, RotationEmbedding, Surface};
use crate::error::Result;
use crate::minors::generate_cylindrical_grid;
use crate::rerouting::RoutedSystem;

/// A random disk system on a `cols × rows` grid of interior vertices.
///
/// Every grid adjacency carries one edge with a random direction (biased
/// leftwards and upwards). Pendant boundary vertices sit below and above
/// the chosen columns and right and left of the chosen rows. Disjoint
/// families are found by randomized search; the host keeps the family edges
/// and each remaining interior edge with probability `extra`. Returns `None`
/// when the drawn orientation admits no full families.
pub fn random_disk_system(seed: u64, cols: usize, rows: usize, extra: f64) -> Option<RoutedSystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let id = |x: usize, y: usize| (y - 1) * cols + (x - 1);
    let mut coords: BTreeMap<Vertex, (f64, f64)> = BTreeMap::new();
    let mut full = Digraph::new();
    for y in 1..=rows {
        for x in 1..=cols {
            full.add_vertex(id(x, y));
            coords.insert(id(x, y), (x as f64, y as f64));
        }
    }
    for y in 1..=rows {
        for x in 1..=cols {
            if x < cols {
                let (a, b) = if rng.gen_bool(0.7) { (id(x + 1, y), id(x, y)) } else { (id(x, y), id(x + 1, y)) };
                full.add_edge(a, b).ok()?;
            }
            if y < rows {
                let (a, b) = if rng.gen_bool(0.7) { (id(x, y), id(x, y + 1)) } else { (id(x, y + 1), id(x, y)) };
                full.add_edge(a, b).ok()?;
            }
        }
    }
    let interior_edges: Vec<EdgeId> = full.edge_ids().collect();
    let kv = rng.gen_range(1..=cols.min(2));
    let kh = rng.gen_range(1..=rows.min(2));
    let mut columns: Vec<usize> = (1..=cols).collect();
    columns.shuffle(&mut rng);
    columns.truncate(kv);
    columns.sort_unstable();
    let mut lines: Vec<usize> = (1..=rows).collect();
    lines.shuffle(&mut rng);
    lines.truncate(kh);
    lines.sort_unstable();

    let mut roles = BTreeMap::new();
    let mut next = cols * rows;
    let mut pendant = |d: &mut Digraph, at: (f64, f64), role: Role, inner: Vertex, out: bool| -> Option<Vertex> {
        let v = next;
        next += 1;
        d.add_vertex(v);
        coords.insert(v, at);
        roles.insert(v, role);
        if out {
            d.add_edge(v, inner).ok()?;
        } else {
            d.add_edge(inner, v).ok()?;
        }
        Some(v)
    };
    let mut bs = Vec::new();
    let mut ts = VertexSet::new();
    for &x in &columns {
        bs.push(pendant(&mut full, (x as f64, 0.0), Role::B, id(x, 1), true)?);
        ts.insert(pendant(&mut full, (x as f64, rows as f64 + 1.0), Role::T, id(x, rows), false)?);
    }
    let mut rs = Vec::new();
    let mut ls = VertexSet::new();
    for &y in &lines {
        rs.push(pendant(&mut full, (cols as f64 + 1.0, y as f64), Role::R, id(cols, y), true)?);
        ls.insert(pendant(&mut full, (0.0, y as f64), Role::L, id(1, y), false)?);
    }
    let verticals = random_family(&full, &bs, &ts, &mut rng)?;
    let horizontals = random_family(&full, &rs, &ls, &mut rng)?;

    let mut keep: Vec<EdgeId> = verticals.iter().chain(&horizontals).flat_map(|p| p.edges().to_vec()).collect();
    for &e in &interior_edges {
        if rng.gen_bool(extra) {
            keep.push(e);
        }
    }
    let host = full.subgraph(full.vertex_set(), &keep).ok()?;
    let embedding = RotationEmbedding::from_coordinates(host, &coords, Surface::Disk, roles, None).ok()?;
    let sys = RoutedSystem {
        embedding,
        horizontals,
        verticals,
    };
    sys.validate().is_valid().then_some(sys)
}

/// Vertex-disjoint paths, one from each source to distinct targets, found by
/// randomized depth-first search with backtracking.
fn random_family(d: &Digraph, sources: &[Vertex], targets: &VertexSet, rng: &mut ChaCha8Rng) -> Option<Vec<DirectedPath>> {
    fn paths_from(d: &Digraph, s: Vertex, targets: &VertexSet, used: &VertexSet, rng: &mut ChaCha8Rng) -> Vec<DirectedPath> {
        let mut out = Vec::new();
        let mut stack: Vec<(Vec<Vertex>, Vec<EdgeId>)> = vec![(vec![s], vec![])];
        while let Some((vs, es)) = stack.pop() {
            let v = *vs.last().unwrap();
            if targets.contains(&v) {
                out.push(DirectedPath::from_parts(vs, es));
                if out.len() >= 8 {
                    break;
                }
                continue;
            }
            let mut next: Vec<(EdgeId, Vertex)> = d.out_edges(v).map(|e| (e.id, e.head)).collect();
            next.shuffle(rng);
            for (e, w) in next {
                if vs.contains(&w) || used.contains(&w) {
                    continue;
                }
                let mut vs2 = vs.clone();
                vs2.push(w);
                let mut es2 = es.clone();
                es2.push(e);
                stack.push((vs2, es2));
            }
        }
        out
    }

    fn go(
        d: &Digraph,
        sources: &[Vertex],
        targets: &VertexSet,
        used: &mut VertexSet,
        chosen: &mut Vec<DirectedPath>,
        rng: &mut ChaCha8Rng,
    ) -> bool {
        let Some(&s) = sources.get(chosen.len()) else { return true };
        for p in paths_from(d, s, targets, used, rng) {
            used.extend(p.vertices().iter().copied());
            chosen.push(p);
            if go(d, sources, targets, used, chosen, rng) {
                return true;
            }
            let p = chosen.pop().unwrap();
            for v in p.vertices() {
                used.remove(v);
            }
        }
        false
    }

    let mut used = VertexSet::new();
    let mut chosen = Vec::new();
    go(d, sources, targets, &mut used, &mut chosen, rng).then_some(chosen)
}

/// The cylindrical grid of size `n` drawn on concentric rings, with a
/// pendant `T` vertex outside and a pendant `B` vertex inside the hole for
/// every inward spoke column, and the `T`-`B` paths running down those
/// columns. Horizontals are the grid circuits.
pub fn cylinder_system(n: usize) -> Result<RoutedSystem> {
    let g = generate_cylindrical_grid(n)?;
    let m = 2 * n;
    let mut d = g.digraph.clone();
    let mut coords = BTreeMap::new();
    let polar = |r: f64, j: usize| {
        let a = std::f64::consts::TAU * (j as f64 - 1.0) / m as f64;
        (r * a.cos(), r * a.sin())
    };
    for i in 1..=n {
        for j in 1..=m {
            coords.insert(g.witness.vertex(i, j), polar(i as f64, j));
        }
    }
    let mut roles = BTreeMap::new();
    let mut verticals = Vec::new();
    for j in n + 1..=m {
        let t = d.next_vertex_id();
        d.add_vertex(t);
        coords.insert(t, polar(n as f64 + 1.0, j));
        roles.insert(t, Role::T);
        let b = d.next_vertex_id();
        d.add_vertex(b);
        coords.insert(b, polar(0.5, j));
        roles.insert(b, Role::B);
        d.add_edge(t, g.witness.vertex(n, j))?;
        d.add_edge(g.witness.vertex(1, j), b)?;
        let mut vs = vec![t];
        vs.extend((1..=n).rev().map(|i| g.witness.vertex(i, j)));
        vs.push(b);
        verticals.push(vs);
    }
    let embedding = RotationEmbedding::from_coordinates(d, &coords, Surface::Cylinder, roles, Some((0.0, 0.0)))?;
    let verticals = verticals
        .iter()
        .map(|vs| DirectedPath::from_vertices(embedding.host(), vs))
        .collect::<Result<_>>()?;
    Ok(RoutedSystem {
        embedding,
        horizontals: g.witness.circuits.clone(),
        verticals,
    })
}
