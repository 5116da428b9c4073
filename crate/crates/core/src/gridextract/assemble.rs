use std::collections::BTreeMap;

use itertools::Itertools;

use super::Budget;
use crate::digraph::{pairwise_disjoint, Digraph, DirectedPath, Vertex, VertexSet};
use crate::embedding::{RotationEmbedding, Surface};
use crate::error::{Error, Result};
use crate::minors::{
    generate_cylindrical_grid, shrink_and_smooth, validate_cylindrical_grid, CylGridWitness, MinorModel,
};
use crate::report::Report;

/// Nested circuits with paths running between the innermost and outermost.
///
/// `circuits` are counter-clockwise and listed innermost first. In-paths run
/// from the outermost circuit to the innermost, out-paths the other way, and
/// both touch those two circuits only at their ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssemblyInput {
    pub embedding: RotationEmbedding,
    pub circuits: Vec<DirectedPath>,
    pub in_paths: Vec<DirectedPath>,
    pub out_paths: Vec<DirectedPath>,
}

impl AssemblyInput {
    pub fn host(&self) -> &Digraph {
        self.embedding.host()
    }

    /// The circuits of the cylindrical grid of size `m` with its inward
    /// spoke columns as in-paths and outward columns as out-paths.
    pub fn from_cylindrical_grid(m: usize) -> Result<Self> {
        let g = generate_cylindrical_grid(m)?;
        let column = |j: usize, levels: Vec<usize>| {
            let vs: Vec<Vertex> = levels.into_iter().map(|i| g.witness.vertex(i, j)).collect();
            DirectedPath::from_vertices(&g.digraph, &vs)
        };
        let out_paths = (1..=m).map(|j| column(j, (1..=m).collect())).collect::<Result<_>>()?;
        let in_paths = (m + 1..=2 * m).map(|j| column(j, (1..=m).rev().collect())).collect::<Result<_>>()?;
        Ok(AssemblyInput {
            embedding: g.embedding,
            circuits: g.witness.circuits,
            in_paths,
            out_paths,
        })
    }

    pub fn validate(&self) -> Report {
        let mut r = Report::new();
        let d = self.host();
        if self.embedding.surface() != Surface::Cylinder {
            r.push("surface", "assembly needs a cylinder embedding");
            return r;
        }
        if self.circuits.is_empty() {
            r.push("circuits", "no circuits");
            return r;
        }
        for (name, fam) in [("circuit", &self.circuits), ("in-path", &self.in_paths), ("out-path", &self.out_paths)] {
            for (i, p) in fam.iter().enumerate() {
                if let Err(e) = p.check(d) {
                    r.push("path", format!("{name} {i}: {e}"));
                }
                if (name == "circuit") != p.is_circuit() {
                    r.push("path", format!("{name} {i} has the wrong shape"));
                }
            }
            let bodies: Vec<DirectedPath> = fam
                .iter()
                .map(|p| if p.is_circuit() { p.slice(0, p.len() - 1) } else { p.clone() })
                .collect();
            if !pairwise_disjoint(&bodies) {
                r.push("disjoint", format!("{name}s share a vertex"));
            }
        }
        if !r.is_valid() {
            return r;
        }
        match self.embedding.nesting_order(&self.circuits) {
            Ok(order) if order.iter().copied().eq(0..self.circuits.len()) => {}
            Ok(_) => r.push("nesting", "circuits are not listed innermost first"),
            Err(e) => r.push("nesting", e.to_string()),
        }
        let inner = self.circuits[0].vertex_set();
        let outer = self.circuits.last().unwrap().vertex_set();
        let ends = |r: &mut Report, name: &str, fam: &[DirectedPath], from: &VertexSet, to: &VertexSet| {
            for (i, p) in fam.iter().enumerate() {
                let vs = p.vertices();
                let inside = &vs[1..vs.len() - 1];
                if !from.contains(&p.start()) || !to.contains(&p.finish()) || p.is_empty() {
                    r.push("endpoints", format!("{name} {i} has the wrong ends"));
                } else if inside.iter().any(|v| from.contains(v) || to.contains(v)) {
                    r.push("endpoints", format!("{name} {i} touches a boundary circuit inside"));
                }
            }
        };
        ends(&mut r, "in-path", &self.in_paths, &outer, &inner);
        ends(&mut r, "out-path", &self.out_paths, &inner, &outer);
        r
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AssemblyBranch {
    /// In-paths and out-paths with disjoint outer parts.
    DisjointOuterParts,
    /// Outer parts meet, but the staircase still finds crossing-free columns.
    Intersecting,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assembly {
    pub model: MinorModel,
    pub digraph: Digraph,
    pub witness: CylGridWitness,
    pub branch: AssemblyBranch,
}

/// Finds a cylindrical grid of size `n` in a butterfly minor of the input.
pub fn assemble_cylindrical_grid(input: &AssemblyInput, n: usize, budget: u64) -> Result<Assembly> {
    if n == 0 {
        return Err(Error::InvalidArgument("grid size must be positive".into()));
    }
    input.validate().into_result()?;
    let mut budget = Budget(budget);
    let parts = OuterParts::new(input);
    for branch in [AssemblyBranch::DisjointOuterParts, AssemblyBranch::Intersecting] {
        if let Some(a) = staircase_branch(input, &parts, n, &mut budget, branch)? {
            return Ok(a);
        }
    }
    Err(Error::Precondition(format!("no branch produced a cylindrical grid of size {n}")))
}

/// Prefixes of in-paths and suffixes of out-paths up to the middle circuit.
struct OuterParts {
    middle: usize,
    ins: Vec<DirectedPath>,
    outs: Vec<DirectedPath>,
}

impl OuterParts {
    fn new(input: &AssemblyInput) -> Self {
        let middle = (input.circuits.len() / 2).max(1) - 1;
        let mid = &input.circuits[middle];
        let ins = input
            .in_paths
            .iter()
            .map(|p| {
                let i = p.vertices().iter().position(|&v| mid.contains(v)).unwrap_or(p.len());
                p.slice(0, i)
            })
            .collect();
        let outs = input
            .out_paths
            .iter()
            .map(|p| {
                let i = p.vertices().iter().rposition(|&v| mid.contains(v)).unwrap_or(0);
                p.slice(i, p.len())
            })
            .collect();
        OuterParts { middle, ins, outs }
    }

    fn meet(&self, i: usize, o: usize) -> bool {
        !self.ins[i].is_vertex_disjoint(&self.outs[o])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    In,
    Out,
}

/// Where a path meets a circuit: positions on the circuit of its first and
/// last shared vertex. The interval runs along the circuit from `last` to
/// `first`.
#[derive(Clone, Copy, Debug)]
struct Interval {
    first: usize,
    last: usize,
}

fn interval(circuit: &DirectedPath, p: &DirectedPath) -> Option<Interval> {
    let m = circuit.len();
    let pos: Vec<usize> = p.vertices().iter().filter_map(|&v| circuit.position(v)).map(|i| i % m).collect();
    let (&first, &last) = (pos.first()?, pos.last()?);
    let span = (first + m - last) % m;
    pos.iter().all(|&q| (q + m - last) % m <= span).then_some(Interval { first, last })
}

fn arc_len(from: usize, to: usize, m: usize) -> usize {
    (to + m - from) % m
}

/// The shifted staircase over `3n - 1` circuits: circuit `r` starts on
/// level `n + 2r`, rides each in-path one level inward and then each
/// out-path one level outward, closing up where it began.
fn staircase_circuits(
    input: &AssemblyInput,
    levels: &[usize],
    seq: &[(Kind, DirectedPath)],
    n: usize,
) -> Option<Vec<DirectedPath>> {
    let circuits: Vec<&DirectedPath> = levels.iter().map(|&k| &input.circuits[k]).collect();
    let iv: Vec<Vec<Interval>> = circuits
        .iter()
        .map(|c| seq.iter().map(|(_, p)| interval(c, p)).collect::<Option<Vec<_>>>())
        .collect::<Option<_>>()?;
    (0..n)
        .map(|r| {
            let mut level = n + 2 * r;
            let start = circuits[level].vertices()[iv[level][seq.len() - 1].first];
            let mut walk = DirectedPath::trivial(start);
            let mut cur = start;
            for (idx, (kind, p)) in seq.iter().enumerate() {
                let c = circuits[level];
                let y = c.vertices()[iv[level][idx].last];
                walk = walk.concat(&c.arc(cur, y)?).ok()?;
                let next = match kind {
                    Kind::In => level.checked_sub(1)?,
                    Kind::Out => level + 1,
                };
                let target = circuits.get(next)?;
                let from = p.position(y)?;
                let to = (from..p.vertices().len()).find(|&i| target.contains(p.vertices()[i]))?;
                walk = walk.concat(&p.slice(from, to)).ok()?;
                cur = p.vertices()[to];
                level = next;
            }
            (cur == start && !walk.is_empty()).then_some(walk)
        })
        .collect()
}

/// Cyclic order of the chosen paths' intervals on one circuit, as indices
/// into `paths`, when the intervals are disjoint and the in-paths form one
/// block; starts at the first in-path of the block.
fn block_order(circuit: &DirectedPath, paths: &[(Kind, DirectedPath)]) -> Option<Vec<usize>> {
    let m = circuit.len();
    let iv: Vec<Interval> = paths.iter().map(|(_, p)| interval(circuit, p)).collect::<Option<_>>()?;
    let mut idx: Vec<usize> = (0..paths.len()).collect();
    idx.sort_by_key(|&i| iv[i].last);
    for w in 0..idx.len() {
        let a = iv[idx[w]];
        let b = iv[idx[(w + 1) % idx.len()]];
        if idx.len() > 1 && arc_len(a.last, a.first, m) >= arc_len(a.last, b.last, m) {
            return None;
        }
    }
    let kind = |i: usize| paths[idx[i % idx.len()]].0;
    let changes = (0..idx.len()).filter(|&i| kind(i) != kind(i + 1)).count();
    if changes != 2 {
        return None;
    }
    let s = (0..idx.len()).find(|&i| kind(i) == Kind::In && kind(i + idx.len() - 1) == Kind::Out)?;
    Some((0..idx.len()).map(|i| idx[(s + i) % idx.len()]).collect())
}

fn staircase_branch(
    input: &AssemblyInput,
    parts: &OuterParts,
    n: usize,
    budget: &mut Budget,
    branch: AssemblyBranch,
) -> Result<Option<Assembly>> {
    let disjoint = branch == AssemblyBranch::DisjointOuterParts;
    let big = input.circuits.len() - 1;
    let usable: Vec<usize> = (parts.middle + 1..big).collect();
    let need = 3 * n - 1;
    if usable.len() < need || parts.ins.len() < n || parts.outs.len() < n {
        return Ok(None);
    }
    for ins in (0..parts.ins.len()).combinations(n) {
        for outs in (0..parts.outs.len()).combinations(n) {
            budget.tick()?;
            let meet = ins.iter().any(|&i| outs.iter().any(|&o| parts.meet(i, o)));
            if meet == disjoint {
                continue;
            }
            let chosen: Vec<(Kind, DirectedPath)> = ins
                .iter()
                .map(|&i| (Kind::In, parts.ins[i].clone()))
                .chain(outs.iter().map(|&o| (Kind::Out, parts.outs[o].clone())))
                .collect();
            for w in (0..=usable.len() - need).rev() {
                budget.tick()?;
                let levels = &usable[w..w + need];
                let orders: Option<Vec<Vec<usize>>> =
                    levels.iter().map(|&k| block_order(&input.circuits[k], &chosen)).collect();
                let Some(orders) = orders else { continue };
                if orders.iter().any(|o| o != &orders[0]) {
                    continue;
                }
                let seq: Vec<(Kind, DirectedPath)> = orders[0].iter().map(|&i| chosen[i].clone()).collect();
                let Some(rings) = staircase_circuits(input, levels, &seq, n) else { continue };
                if let Ok(a) = finish(input.host(), &rings, &seq, n, branch) {
                    return Ok(Some(a));
                }
            }
        }
    }
    Ok(None)
}

/// Shrinks the rings and columns to a cylindrical grid and labels it.
/// `seq` lists the in-columns then the out-columns in ring order; rings
/// are innermost first.
fn finish(
    d: &Digraph,
    rings: &[DirectedPath],
    seq: &[(Kind, DirectedPath)],
    n: usize,
    branch: AssemblyBranch,
) -> Result<Assembly> {
    let on_rings: VertexSet = rings.iter().flat_map(|c| c.vertex_set()).collect();
    let columns: Vec<DirectedPath> = seq
        .iter()
        .map(|(_, p)| {
            let a = p.vertices().iter().position(|v| on_rings.contains(v));
            let b = p.vertices().iter().rposition(|v| on_rings.contains(v));
            match (a, b) {
                (Some(a), Some(b)) if a <= b => Ok(p.slice(a, b)),
                _ => Err(Error::Verification("a column misses the rings".into())),
            }
        })
        .collect::<Result<_>>()?;
    for c in rings.iter().chain(&columns) {
        c.check(d)?;
    }
    let (model, rings, columns) = shrink_and_smooth(d, rings, &columns)?;
    let digraph = model.replay(d)?;
    let crossing = |ring: &DirectedPath, col: &DirectedPath| -> Result<Vertex> {
        let shared: Vec<Vertex> = col.vertices().iter().copied().filter(|&v| ring.contains(v)).collect();
        match shared[..] {
            [v] => Ok(v),
            _ => Err(Error::Verification(format!("a ring meets a column in {} vertices", shared.len()))),
        }
    };
    // Grid column j: out-columns first, then in-columns, in ring order.
    let grid_cols: Vec<usize> = (n..2 * n).chain(0..n).collect();
    let mut circuits = Vec::with_capacity(n);
    for ring in &rings {
        let start = crossing(ring, &columns[grid_cols[0]])?;
        let c = ring
            .rotate_to(start)
            .ok_or_else(|| Error::Verification("ring is not a circuit".into()))?;
        for (j, &col) in grid_cols.iter().enumerate() {
            if c.vertices()[j] != crossing(ring, &columns[col])? {
                return Err(Error::Verification("ring meets the columns out of order".into()));
            }
        }
        circuits.push(c);
    }
    let mut spokes = BTreeMap::new();
    for i in 1..n {
        for (j, &col) in grid_cols.iter().enumerate() {
            let p = &columns[col];
            let a = p.position(circuits[i - 1].vertices()[j]).unwrap();
            let b = p.position(circuits[i].vertices()[j]).unwrap();
            if a.abs_diff(b) != 1 {
                return Err(Error::Verification("column does not join consecutive rings".into()));
            }
            spokes.insert((i, j + 1), p.edges()[a.min(b)]);
        }
    }
    let witness = CylGridWitness { n, circuits, spokes };
    validate_cylindrical_grid(&digraph, &witness).into_result()?;
    Ok(Assembly {
        model,
        digraph,
        witness,
        branch,
    })
}
