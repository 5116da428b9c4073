//! Linked sets and linkages: checking and extracting linked sets, monotone
//! classification, the agree/cross relation, and the matched-linkage searches.

mod matching;

use std::collections::{BTreeMap, BTreeSet};

use crate::digraph::{menger_paths, pairwise_disjoint, Digraph, DirectedPath, MengerOutcome, Vertex, VertexSet};
use crate::error::{Error, Result};
use crate::havens::{subsets_below, Haven};
use crate::report::Report;

pub use matching::{
    connectors, linkmatch2_search, linkmatch_search, verify_outcome_one, Connector, Linkmatch2Outcome,
    LinkmatchOutcome, MatchedPair,
};

/// Vertex-disjoint directed paths, one from each source, ending in distinct
/// targets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Linkage {
    sources: Vec<Vertex>,
    targets: Vec<Vertex>,
    paths: Vec<DirectedPath>,
}

impl Linkage {
    /// Checks the paths in `d` and orders them by source as listed in `sources`.
    pub fn new(d: &Digraph, sources: &[Vertex], targets: &[Vertex], paths: Vec<DirectedPath>) -> Result<Self> {
        let r = Self::check_parts(d, sources, targets, &paths);
        r.into_result()?;
        let mut by_start: BTreeMap<Vertex, DirectedPath> = paths.into_iter().map(|p| (p.start(), p)).collect();
        let paths = sources.iter().map(|a| by_start.remove(a).expect("checked")).collect();
        Ok(Linkage {
            sources: sources.to_vec(),
            targets: targets.to_vec(),
            paths,
        })
    }

    fn check_parts(d: &Digraph, sources: &[Vertex], targets: &[Vertex], paths: &[DirectedPath]) -> Report {
        let mut r = Report::new();
        let a: BTreeSet<Vertex> = sources.iter().copied().collect();
        let b: BTreeSet<Vertex> = targets.iter().copied().collect();
        if a.len() != sources.len() || b.len() != targets.len() || a.len() != b.len() {
            r.push("sizes", "sources and targets must be duplicate-free and of equal size");
        }
        if paths.len() != a.len() {
            r.push("sizes", format!("{} paths for {} sources", paths.len(), a.len()));
        }
        for p in paths {
            if let Err(e) = p.check(d) {
                r.push("path", e.to_string());
            }
        }
        if !pairwise_disjoint(paths) {
            r.push("disjoint", "paths are not pairwise vertex-disjoint");
        }
        let starts: BTreeSet<Vertex> = paths.iter().map(|p| p.start()).collect();
        let ends: BTreeSet<Vertex> = paths.iter().map(|p| p.finish()).collect();
        if starts != a {
            r.push("bijection", "path starts are not exactly the sources");
        }
        if ends != b {
            r.push("bijection", "path finishes are not exactly the targets");
        }
        r
    }

    pub fn validate(&self, d: &Digraph) -> Report {
        Self::check_parts(d, &self.sources, &self.targets, &self.paths)
    }

    pub fn sources(&self) -> &[Vertex] {
        &self.sources
    }

    pub fn targets(&self) -> &[Vertex] {
        &self.targets
    }

    pub fn paths(&self) -> &[DirectedPath] {
        &self.paths
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// The matching `f` induced by the paths.
    pub fn matching(&self) -> BTreeMap<Vertex, Vertex> {
        self.paths.iter().map(|p| (p.start(), p.finish())).collect()
    }

    pub fn path_from(&self, a: Vertex) -> Option<&DirectedPath> {
        self.paths.iter().find(|p| p.start() == a)
    }

    /// The sub-linkage on the given sources.
    pub fn restrict(&self, sources: &[Vertex]) -> Option<Linkage> {
        let paths: Option<Vec<DirectedPath>> = sources.iter().map(|&a| self.path_from(a).cloned()).collect();
        let paths = paths?;
        Some(Linkage {
            sources: sources.to_vec(),
            targets: paths.iter().map(|p| p.finish()).collect(),
            paths,
        })
    }
}

/// A linkage from `sources` to `targets`, if one exists.
pub fn find_linkage(d: &Digraph, sources: &[Vertex], targets: &[Vertex]) -> Result<Option<Linkage>> {
    if sources.len() != targets.len() {
        return Err(Error::InvalidArgument("sources and targets differ in size".into()));
    }
    if sources.is_empty() {
        return Ok(Some(Linkage {
            sources: vec![],
            targets: vec![],
            paths: vec![],
        }));
    }
    let a: VertexSet = sources.iter().copied().collect();
    let b: VertexSet = targets.iter().copied().collect();
    match menger_paths(d, &a, &b, sources.len())? {
        MengerOutcome::Paths(paths) => Linkage::new(d, sources, targets, paths).map(Some),
        MengerOutcome::Separator(_) => Ok(None),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinkedVerdict {
    Linked,
    NotLinked {
        a: VertexSet,
        b: VertexSet,
        separator: VertexSet,
    },
}

impl LinkedVerdict {
    pub fn is_linked(&self) -> bool {
        matches!(self, LinkedVerdict::Linked)
    }
}

/// Decides whether `x` is linked, spending one budget unit per Menger query.
/// Pairs are tried by size, then lexicographically.
pub fn is_linked_set(d: &Digraph, x: &VertexSet, budget: u64) -> Result<LinkedVerdict> {
    for &v in x {
        if !d.has_vertex(v) {
            return Err(Error::UnknownVertex(v));
        }
    }
    let subsets = subsets_below(x, x.len() + 1);
    let mut calls = 0u64;
    for k in 1..=x.len() {
        let level: Vec<&VertexSet> = subsets.iter().filter(|s| s.len() == k).collect();
        for a in &level {
            for b in &level {
                calls += 1;
                if calls > budget {
                    return Err(Error::BudgetExhausted);
                }
                if let MengerOutcome::Separator(separator) = menger_paths(d, a, b, k)? {
                    return Ok(LinkedVerdict::NotLinked {
                        a: (*a).clone(),
                        b: (*b).clone(),
                        separator,
                    });
                }
            }
        }
    }
    Ok(LinkedVerdict::Linked)
}

/// A linked set found by the extremal choice, with the successive best
/// candidates `(X, |B(X)|)` seen during the scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtractedLinkedSet {
    pub set: VertexSet,
    pub trace: Vec<(VertexSet, usize)>,
}

/// Finds a linked set of size `2n` from a haven of order at least `3n`: the
/// set `X` with `|X| ≤ 2n` minimizing `|B(X)|`, then `|X|`, then lexicographically.
pub fn extract_linked_set(d: &Digraph, haven: &dyn Haven, n: usize, budget: u64) -> Result<ExtractedLinkedSet> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    if haven.order() < 3 * n {
        return Err(Error::Precondition(format!(
            "haven of order {} is below the required {}",
            haven.order(),
            3 * n
        )));
    }
    let mut best: Option<(usize, VertexSet)> = None;
    let mut trace = Vec::new();
    for x in subsets_below(d.vertex_set(), 2 * n + 1) {
        let rep = haven
            .query(&x)
            .ok_or_else(|| Error::Precondition(format!("haven has no entry for {x:?}")))?;
        let size = crate::havens::component_in(d, &x, rep)
            .ok_or_else(|| Error::Precondition(format!("haven entry for {x:?} is not a component")))?
            .len();
        let better = match &best {
            None => true,
            Some((s, bx)) => (size, x.len()) < (*s, bx.len()),
        };
        if better {
            trace.push((x.clone(), size));
            best = Some((size, x));
        }
    }
    let (_, set) = best.expect("the empty set is always a candidate");
    if set.len() != 2 * n {
        return Err(Error::Verification(format!("extremal set has size {}, not {}", set.len(), 2 * n)));
    }
    match is_linked_set(d, &set, budget)? {
        LinkedVerdict::Linked => Ok(ExtractedLinkedSet { set, trace }),
        LinkedVerdict::NotLinked { .. } => Err(Error::Verification("extremal set is not linked".into())),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    Neither,
}

/// Classifies a linkage under the given total orders on its sources and targets.
/// A linkage of size at most one is reported increasing.
pub fn classify_monotone(l: &Linkage, order_a: &[Vertex], order_b: &[Vertex]) -> Result<Monotonicity> {
    let a: BTreeSet<Vertex> = l.sources.iter().copied().collect();
    let b: BTreeSet<Vertex> = l.targets.iter().copied().collect();
    if order_a.iter().copied().collect::<BTreeSet<_>>() != a || order_a.len() != a.len() {
        return Err(Error::InvalidArgument("order on A does not cover the sources".into()));
    }
    if order_b.iter().copied().collect::<BTreeSet<_>>() != b || order_b.len() != b.len() {
        return Err(Error::InvalidArgument("order on B does not cover the targets".into()));
    }
    let pos_b: BTreeMap<Vertex, usize> = order_b.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let f = l.matching();
    let image: Vec<usize> = order_a.iter().map(|a| pos_b[&f[a]]).collect();
    if image.windows(2).all(|w| w[0] < w[1]) {
        Ok(Monotonicity::Increasing)
    } else if image.windows(2).all(|w| w[0] > w[1]) {
        Ok(Monotonicity::Decreasing)
    } else {
        Ok(Monotonicity::Neither)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairRelation {
    Agree,
    Cross,
    Neither,
}

/// Decides agree/cross for linkages `A → B` and `B → A` from the composed
/// permutation `g∘f` of `A`.
pub fn pair_relation(forward: &Linkage, back: &Linkage) -> Result<PairRelation> {
    let a: BTreeSet<Vertex> = forward.sources.iter().copied().collect();
    let b: BTreeSet<Vertex> = forward.targets.iter().copied().collect();
    let ba: BTreeSet<Vertex> = back.targets.iter().copied().collect();
    let bb: BTreeSet<Vertex> = back.sources.iter().copied().collect();
    if a != ba || b != bb {
        return Err(Error::InvalidArgument("linkages are not over the same pair of sets".into()));
    }
    Ok(relation_of(&compose(forward, back)))
}

pub(crate) fn compose(forward: &Linkage, back: &Linkage) -> BTreeMap<Vertex, Vertex> {
    let f = forward.matching();
    let g = back.matching();
    f.iter().map(|(&a, b)| (a, g[b])).collect()
}

pub(crate) fn relation_of(sigma: &BTreeMap<Vertex, Vertex>) -> PairRelation {
    if sigma.iter().all(|(a, b)| a == b) {
        return PairRelation::Agree;
    }
    let involution = sigma.iter().all(|(a, b)| sigma[b] == *a);
    let fixed = sigma.iter().filter(|(a, b)| a == b).count();
    if involution && fixed <= 1 {
        PairRelation::Cross
    } else {
        PairRelation::Neither
    }
}
