//! Exact finders for the Ramsey-type objects used by the linkage and haven
//! searches: monotone subsequences, transitive subtournaments and clean
//! cliques in labeled complete graphs.

use std::collections::BTreeMap;

use crate::digraph::{Digraph, Vertex, VertexSet};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Monotone {
    Increasing,
    Decreasing,
}

/// A longest monotone subsequence, returned as indices into `seq`.
///
/// Increasing wins ties; among equally long witnesses the one with the
/// lexicographically least index list is returned.
pub fn longest_monotone_indices<T: Ord>(seq: &[T]) -> (Monotone, Vec<usize>) {
    let inc = longest_by(seq, |a, b| a < b);
    let dec = longest_by(seq, |a, b| a > b);
    if dec.len() > inc.len() {
        (Monotone::Decreasing, dec)
    } else {
        (Monotone::Increasing, inc)
    }
}

/// A longest monotone subsequence of `seq`.
pub fn longest_monotone_subsequence<T: Ord + Clone>(seq: &[T]) -> Vec<T> {
    longest_monotone_indices(seq).1.into_iter().map(|i| seq[i].clone()).collect()
}

fn longest_by<T>(seq: &[T], before: impl Fn(&T, &T) -> bool) -> Vec<usize> {
    let n = seq.len();
    // best[i]: length of the longest chain starting at i.
    let mut best = vec![1usize; n];
    for i in (0..n).rev() {
        for j in i + 1..n {
            if before(&seq[i], &seq[j]) {
                best[i] = best[i].max(best[j] + 1);
            }
        }
    }
    let Some(&len) = best.iter().max() else { return Vec::new() };
    let mut out = Vec::with_capacity(len);
    let mut need = len;
    let mut i = best.iter().position(|&b| b == len).unwrap();
    out.push(i);
    while need > 1 {
        need -= 1;
        i = (i + 1..n).find(|&j| best[j] == need && before(&seq[i], &seq[j])).unwrap();
        out.push(i);
    }
    out
}

fn check_tournament(t: &Digraph) -> Result<()> {
    let verts: Vec<Vertex> = t.vertices().collect();
    let mut arcs: BTreeMap<(Vertex, Vertex), usize> = BTreeMap::new();
    for e in t.edges() {
        if e.is_loop() {
            return Err(Error::Precondition(format!("tournament has a loop at {}", e.tail)));
        }
        *arcs.entry((e.tail.min(e.head), e.tail.max(e.head))).or_default() += 1;
    }
    for (i, &u) in verts.iter().enumerate() {
        for &v in &verts[i + 1..] {
            let c = arcs.get(&(u, v)).copied().unwrap_or(0);
            if c != 1 {
                return Err(Error::Precondition(format!("pair {{{u}, {v}}} carries {c} arcs")));
            }
        }
    }
    Ok(())
}

/// The lexicographically least `k`-set of vertices inducing a transitive
/// subtournament, if any.
pub fn transitive_subtournament(t: &Digraph, k: usize) -> Result<Option<VertexSet>> {
    check_tournament(t)?;
    let verts: Vec<Vertex> = t.vertices().collect();
    let beats = |u: Vertex, v: Vertex| t.find_edge(u, v).is_some();

    // A set induces a transitive tournament iff it has no directed triangle.
    fn extend(
        start: usize,
        verts: &[Vertex],
        k: usize,
        chosen: &mut Vec<Vertex>,
        beats: &dyn Fn(Vertex, Vertex) -> bool,
    ) -> bool {
        if chosen.len() == k {
            return true;
        }
        for i in start..verts.len() {
            if verts.len() - i < k - chosen.len() {
                break;
            }
            let c = verts[i];
            let ok = chosen.iter().enumerate().all(|(a, &x)| {
                chosen[a + 1..].iter().all(|&y| {
                    !(beats(x, y) && beats(y, c) && beats(c, x)) && !(beats(y, x) && beats(x, c) && beats(c, y))
                })
            });
            if ok {
                chosen.push(c);
                if extend(i + 1, verts, k, chosen, beats) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }

    let mut chosen = Vec::new();
    Ok(extend(0, &verts, k, &mut chosen, &beats).then(|| chosen.into_iter().collect()))
}

/// A complete graph on `0..n` whose edges carry label sets of vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledClique {
    n: usize,
    labels: BTreeMap<(Vertex, Vertex), VertexSet>,
}

impl LabeledClique {
    /// Builds the labeled clique; missing pairs get empty label sets.
    pub fn new(n: usize, labels: BTreeMap<(Vertex, Vertex), VertexSet>) -> Result<Self> {
        let mut norm = BTreeMap::new();
        for ((u, v), set) in labels {
            let key = (u.min(v), u.max(v));
            if u == v || key.1 >= n {
                return Err(Error::InvalidArgument(format!("pair ({u}, {v}) is not an edge of K{n}")));
            }
            if set.contains(&u) || set.contains(&v) {
                return Err(Error::Precondition(format!("edge ({u}, {v}) is labeled by its own end")));
            }
            if let Some(&bad) = set.iter().find(|&&x| x >= n) {
                return Err(Error::InvalidArgument(format!("label {bad} is not a vertex")));
            }
            norm.entry(key).or_insert_with(VertexSet::new).extend(set);
        }
        Ok(LabeledClique { n, labels: norm })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn labels(&self, u: Vertex, v: Vertex) -> VertexSet {
        self.labels.get(&(u.min(v), u.max(v))).cloned().unwrap_or_default()
    }

    /// No edge inside `set` carries a label from `set`.
    pub fn is_clean(&self, set: &VertexSet) -> bool {
        let vs: Vec<Vertex> = set.iter().copied().collect();
        vs.iter().enumerate().all(|(i, &u)| {
            vs[i + 1..]
                .iter()
                .all(|&v| self.labels.get(&(u, v)).is_none_or(|l| l.is_disjoint(set)))
        })
    }

    /// Every vertex of `vertices` labels every edge of `edges`.
    pub fn is_cover(&self, edges: &[(Vertex, Vertex)], vertices: &VertexSet) -> bool {
        edges.iter().all(|&(u, v)| vertices.is_subset(&self.labels(u, v)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CliqueOutcome {
    Clean(VertexSet),
    Cover {
        edges: Vec<(Vertex, Vertex)>,
        vertices: VertexSet,
    },
    /// Exhaustive search found neither object.
    Neither,
    Exhausted,
}

/// Finds a clean clique of size `n`, or else `m2` vertices that each label
/// the same `m1` edges. Each candidate examined costs one unit of `budget`.
pub fn clean_clique_or_cover(l: &LabeledClique, n: usize, m1: usize, m2: usize, budget: u64) -> CliqueOutcome {
    let mut ticks = 0u64;
    match clean_search(l, n, budget, &mut ticks) {
        Some(Some(set)) => return CliqueOutcome::Clean(set),
        Some(None) => {}
        None => return CliqueOutcome::Exhausted,
    }
    let verts: Vec<Vertex> = (0..l.n).collect();
    let all: VertexSet = verts.iter().copied().collect();
    for s in crate::havens::subsets_below(&all, m2 + 1).into_iter().filter(|s| s.len() == m2) {
        ticks += 1;
        if ticks > budget {
            return CliqueOutcome::Exhausted;
        }
        let edges: Vec<(Vertex, Vertex)> = l
            .labels
            .iter()
            .filter(|(_, lab)| s.is_subset(lab))
            .map(|(&e, _)| e)
            .take(m1)
            .collect();
        if edges.len() == m1 {
            return CliqueOutcome::Cover { edges, vertices: s };
        }
    }
    CliqueOutcome::Neither
}

/// `Some(Some(set))` found, `Some(None)` proven absent, `None` out of budget.
fn clean_search(l: &LabeledClique, n: usize, budget: u64, ticks: &mut u64) -> Option<Option<VertexSet>> {
    fn go(
        l: &LabeledClique,
        start: Vertex,
        n: usize,
        chosen: &mut VertexSet,
        budget: u64,
        ticks: &mut u64,
    ) -> Option<bool> {
        if chosen.len() == n {
            return Some(true);
        }
        for c in start..l.n {
            if l.n - c < n - chosen.len() {
                break;
            }
            *ticks += 1;
            if *ticks > budget {
                return None;
            }
            chosen.insert(c);
            if l.is_clean(chosen) && go(l, c + 1, n, chosen, budget, ticks)? {
                return Some(true);
            }
            chosen.remove(&c);
        }
        Some(false)
    }
    let mut chosen = VertexSet::new();
    go(l, 0, n, &mut chosen, budget, ticks).map(|found| found.then_some(chosen))
}
