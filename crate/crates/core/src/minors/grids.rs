use std::collections::BTreeMap;

use crate::digraph::{pairwise_disjoint, Digraph, DirectedPath, EdgeId, Vertex, VertexSet};
use crate::embedding::{Dart, End, RotationEmbedding, Surface};
use crate::error::{Error, Result};
use crate::report::Report;

/// Labelled circuits and spokes of a cylindrical grid of size `n`.
///
/// `circuits[i]` starts at its vertex numbered 1 and visits the vertices in
/// numbering order. `spokes[(i, j)]` (with `1 ≤ i < n`, `1 ≤ j ≤ 2n`) joins
/// vertex `j` of circuit `i` and vertex `j` of circuit `i + 1`: outwards for
/// `j ≤ n`, inwards otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CylGridWitness {
    pub n: usize,
    pub circuits: Vec<DirectedPath>,
    pub spokes: BTreeMap<(usize, usize), EdgeId>,
}

impl CylGridWitness {
    /// Vertex `j` (1-based) of circuit `i` (1-based).
    pub fn vertex(&self, i: usize, j: usize) -> Vertex {
        self.circuits[i - 1].vertices()[j - 1]
    }

    pub fn edge_ids(&self) -> Vec<EdgeId> {
        let mut ids: Vec<EdgeId> = self.circuits.iter().flat_map(|c| c.edges().iter().copied()).collect();
        ids.extend(self.spokes.values().copied());
        ids.sort_unstable();
        ids
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.circuits.iter().flat_map(|c| c.vertex_set()).collect()
    }
}

/// Generator output: the digraph, its witness and its annular embedding.
#[derive(Clone, Debug)]
pub struct CylGrid {
    pub digraph: Digraph,
    pub witness: CylGridWitness,
    pub embedding: RotationEmbedding,
}

/// The cylindrical grid of size `n`. Vertex `j` of circuit `i` has id
/// `(i-1)·2n + (j-1)`; circuit 1 is innermost and every circuit runs
/// counter-clockwise around the hole.
pub fn generate_cylindrical_grid(n: usize) -> Result<CylGrid> {
    if n == 0 {
        return Err(Error::InvalidArgument("grid size must be positive".into()));
    }
    let m = 2 * n;
    let id = |i: usize, j: usize| (i - 1) * m + (j - 1);
    let mut d = Digraph::with_vertices(n * m);
    for i in 1..=n {
        for j in 1..=m {
            d.add_edge(id(i, j), id(i, j % m + 1))?;
        }
    }
    let mut spokes = BTreeMap::new();
    for i in 1..n {
        for j in 1..=m {
            let e = if j <= n {
                d.add_edge(id(i, j), id(i + 1, j))?
            } else {
                d.add_edge(id(i + 1, j), id(i, j))?
            };
            spokes.insert((i, j), e);
        }
    }
    let circuit_edge = |i: usize, j: usize| id(i, j);
    let mut circuits = Vec::with_capacity(n);
    for i in 1..=n {
        let mut vs: Vec<Vertex> = (1..=m).map(|j| id(i, j)).collect();
        vs.push(id(i, 1));
        let es: Vec<EdgeId> = (1..=m).map(|j| circuit_edge(i, j)).collect();
        circuits.push(DirectedPath::new(&d, vs, es)?);
    }

    let mut rotation = BTreeMap::new();
    for i in 1..=n {
        for j in 1..=m {
            let spoke_end = |k: usize, jj: usize| {
                let e = spokes[&(k, jj)];
                End {
                    edge: e,
                    at_tail: d.edge(e).unwrap().tail == id(i, j),
                }
            };
            let mut ends = Vec::with_capacity(4);
            if i < n {
                ends.push(spoke_end(i, j));
            }
            ends.push(End {
                edge: circuit_edge(i, j),
                at_tail: true,
            });
            if i > 1 {
                ends.push(spoke_end(i - 1, j));
            }
            ends.push(End {
                edge: circuit_edge(i, if j == 1 { m } else { j - 1 }),
                at_tail: false,
            });
            rotation.insert(id(i, j), ends);
        }
    }
    let outer = Dart {
        edge: circuit_edge(n, 1),
        forward: true,
    };
    let hole = Dart {
        edge: circuit_edge(1, 1),
        forward: false,
    };
    let embedding = RotationEmbedding::new(
        d.clone(),
        rotation,
        Surface::Cylinder,
        Some(outer),
        Some(hole),
        BTreeMap::new(),
    )?;
    Ok(CylGrid {
        digraph: d,
        witness: CylGridWitness { n, circuits, spokes },
        embedding,
    })
}

/// Checks a cylindrical grid witness against `d`.
pub fn validate_cylindrical_grid(d: &Digraph, w: &CylGridWitness) -> Report {
    let mut r = Report::new();
    let m = 2 * w.n;
    if w.n == 0 {
        r.push("size", "grid size is zero");
        return r;
    }
    if w.circuits.len() != w.n {
        r.push("circuit-count", format!("{} circuits for size {}", w.circuits.len(), w.n));
        return r;
    }
    for (i, c) in w.circuits.iter().enumerate() {
        if let Err(e) = c.check(d) {
            r.push("circuit", format!("circuit {}: {e}", i + 1));
            return r;
        }
        if !c.is_circuit() || c.len() != m {
            r.push("circuit-length", format!("circuit {} is not a circuit of length {m}", i + 1));
            return r;
        }
    }
    if !pairwise_disjoint(&w.circuits.iter().map(|c| c.slice(0, m - 1)).collect::<Vec<_>>()) {
        r.push("disjoint", "circuits share a vertex");
    }
    for i in 1..w.n {
        for j in 1..=m {
            let Some(&e) = w.spokes.get(&(i, j)) else {
                r.push("spoke-missing", format!("no spoke ({i}, {j})"));
                continue;
            };
            let Some(edge) = d.edge(e) else {
                r.push("spoke-missing", format!("spoke ({i}, {j}) names unknown edge {e}"));
                continue;
            };
            let (inner, outer) = (w.vertex(i, j), w.vertex(i + 1, j));
            let (want_t, want_h) = if j <= w.n { (inner, outer) } else { (outer, inner) };
            if (edge.tail, edge.head) == (want_t, want_h) {
                continue;
            }
            if (edge.tail, edge.head) == (want_h, want_t) {
                r.push("spoke-direction", format!("spoke ({i}, {j}) runs {} -> {}", edge.tail, edge.head));
            } else {
                r.push("spoke-ends", format!("spoke ({i}, {j}) does not join vertex {j} of circuits {i} and {}", i + 1));
            }
        }
    }
    if w.spokes.len() != (w.n - 1) * m {
        r.push("spoke-missing", format!("{} spokes, expected {}", w.spokes.len(), (w.n - 1) * m));
    }
    r
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridFlavor {
    Plain,
    Bubble,
}

/// Horizontal and vertical path families forming an acyclic grid.
///
/// Indices give the grid order: every vertical meets the horizontals in
/// index order, and in the plain flavour every horizontal meets the
/// verticals in index order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcyclicGridWitness {
    pub horizontals: Vec<DirectedPath>,
    pub verticals: Vec<DirectedPath>,
    pub flavor: GridFlavor,
}

impl AcyclicGridWitness {
    pub fn size(&self) -> usize {
        self.horizontals.len().min(self.verticals.len())
    }
}

/// Checks an acyclic grid witness (plain or bubble) against `d`.
pub fn validate_acyclic_grid(d: &Digraph, w: &AcyclicGridWitness) -> Report {
    let mut r = Report::new();
    for (name, fam) in [("horizontal", &w.horizontals), ("vertical", &w.verticals)] {
        for (i, p) in fam.iter().enumerate() {
            if let Err(e) = p.check(d) {
                r.push("path", format!("{name} {i}: {e}"));
            } else if p.is_circuit() {
                r.push("path", format!("{name} {i} is a circuit"));
            }
        }
        if !pairwise_disjoint(fam) {
            r.push("disjoint", format!("{name} paths share a vertex"));
        }
    }
    if w.horizontals.len() != w.verticals.len() {
        r.push(
            "size",
            format!("{} horizontals, {} verticals", w.horizontals.len(), w.verticals.len()),
        );
    }
    if !r.is_valid() {
        return r;
    }
    match w.flavor {
        GridFlavor::Plain => validate_plain(w, &mut r),
        GridFlavor::Bubble => validate_bubble(w, &mut r),
    }
    r
}

fn validate_plain(w: &AcyclicGridWitness, r: &mut Report) {
    let mut meet = vec![vec![None; w.horizontals.len()]; w.verticals.len()];
    for (i, v) in w.verticals.iter().enumerate() {
        for (j, h) in w.horizontals.iter().enumerate() {
            let shared: Vec<Vertex> = v.vertices().iter().copied().filter(|&x| h.contains(x)).collect();
            if shared.len() != 1 {
                r.push(
                    "exactly-one-vertex",
                    format!("vertical {i} and horizontal {j} share {} vertices", shared.len()),
                );
            } else {
                meet[i][j] = Some(shared[0]);
            }
        }
    }
    if !r.is_valid() {
        return;
    }
    for (i, v) in w.verticals.iter().enumerate() {
        let pos: Vec<usize> = (0..w.horizontals.len()).map(|j| v.position(meet[i][j].unwrap()).unwrap()).collect();
        if !pos.windows(2).all(|p| p[0] < p[1]) {
            r.push("vertical-order", format!("vertical {i} meets the horizontals out of order"));
        }
    }
    for (j, h) in w.horizontals.iter().enumerate() {
        let pos: Vec<usize> = (0..w.verticals.len()).map(|i| h.position(meet[i][j].unwrap()).unwrap()).collect();
        if !pos.windows(2).all(|p| p[0] < p[1]) {
            r.push("horizontal-order", format!("horizontal {j} meets the verticals out of order"));
        }
    }
}

fn validate_bubble(w: &AcyclicGridWitness, r: &mut Report) {
    for (i, v) in w.verticals.iter().enumerate() {
        let mut last_end: Option<usize> = None;
        for (j, h) in w.horizontals.iter().enumerate() {
            let pos: Vec<usize> = v
                .vertices()
                .iter()
                .enumerate()
                .filter(|(_, &x)| h.contains(x))
                .map(|(k, _)| k)
                .collect();
            let (Some(&first), Some(&last)) = (pos.first(), pos.last()) else {
                r.push("hits-all", format!("vertical {i} misses horizontal {j}"));
                continue;
            };
            if last_end.is_some_and(|e| e >= first) {
                r.push("monotone", format!("vertical {i} returns to an earlier horizontal after {j}"));
            }
            last_end = Some(last);
            if !v.hits_in_reverse(h) {
                r.push("reverse", format!("vertical {i} and horizontal {j} do not hit in reverse"));
            }
        }
    }
}
