use std::collections::BTreeMap;

use super::{compose, find_linkage, relation_of, Linkage, PairRelation};
use crate::digraph::{eulerianize, Digraph, EulerMultiplicity, Subdigraph, Vertex, VertexSet};
use crate::error::{Error, Result};
use crate::havens::{haven_from_intersecting_family, subsets_below, HavenCertificate};
use crate::report::Report;

/// Two linkages `A' → B'` and `B' → A'` that agree or cross.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchedPair {
    pub forward: Linkage,
    pub back: Linkage,
    pub relation: PairRelation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinkmatchOutcome {
    Found(MatchedPair),
    Exhausted,
}

/// The union of the paths of a matched pair that run between one group of
/// matched ends: two paths for agreeing pairs, four for crossing pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connector {
    /// Sources first, then their targets.
    pub ends: Vec<Vertex>,
    pub sub: Subdigraph,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Linkmatch2Outcome {
    /// Agreeing linkages that are disjoint except between matched ends.
    Disjoint(MatchedPair),
    /// A 4-eulerianizable subdigraph carrying a haven of order `n+1`.
    Eulerian {
        subdigraph: Digraph,
        multiplicity: EulerMultiplicity,
        certificate: HavenCertificate,
        connectors: Vec<Connector>,
    },
    Exhausted,
}

struct Search<'a> {
    d: &'a Digraph,
    calls: u64,
    budget: u64,
}

impl Search<'_> {
    /// Candidate pairs over `A' ⊆ A`, `B' ⊆ B` of size `m`; each probe costs
    /// two Menger queries. The visitor returns `Some` to stop.
    fn pairs<T>(
        &mut self,
        a: &VertexSet,
        b: &VertexSet,
        m: usize,
        full: &Linkage,
        mut visit: impl FnMut(&mut Self, MatchedPair) -> Result<Option<T>>,
    ) -> Result<Option<Option<T>>> {
        let b_subsets: Vec<VertexSet> = subsets_below(b, m + 1).into_iter().filter(|s| s.len() == m).collect();
        for a_sub in subsets_below(a, m + 1).into_iter().filter(|s| s.len() == m) {
            let first: VertexSet = full.matching().iter().filter(|(x, _)| a_sub.contains(x)).map(|(_, &y)| y).collect();
            let order = std::iter::once(&first).chain(b_subsets.iter().filter(|s| **s != first));
            for b_sub in order {
                self.calls += 2;
                if self.calls > self.budget {
                    return Ok(None);
                }
                let av: Vec<Vertex> = a_sub.iter().copied().collect();
                let bv: Vec<Vertex> = b_sub.iter().copied().collect();
                let (Some(forward), Some(back)) = (find_linkage(self.d, &av, &bv)?, find_linkage(self.d, &bv, &av)?) else {
                    continue;
                };
                let relation = relation_of(&compose(&forward, &back));
                if relation == PairRelation::Neither {
                    continue;
                }
                if let Some(t) = visit(self, MatchedPair { forward, back, relation })? {
                    return Ok(Some(Some(t)));
                }
            }
        }
        Ok(Some(None))
    }
}

fn check_inputs(d: &Digraph, x: &VertexSet, a: &VertexSet, b: &VertexSet, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    for &v in x {
        if !d.has_vertex(v) {
            return Err(Error::UnknownVertex(v));
        }
    }
    if !a.is_subset(x) || !b.is_subset(x) {
        return Err(Error::Precondition("A and B must lie in X".into()));
    }
    if !a.is_disjoint(b) {
        return Err(Error::Precondition("A and B must be disjoint".into()));
    }
    if a.len() != b.len() || a.len() < n {
        return Err(Error::Precondition(format!(
            "|A| = {} and |B| = {} must be equal and at least {n}",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

fn full_linkages(d: &Digraph, a: &VertexSet, b: &VertexSet) -> Result<Linkage> {
    let av: Vec<Vertex> = a.iter().copied().collect();
    let bv: Vec<Vertex> = b.iter().copied().collect();
    let forward = find_linkage(d, &av, &bv)?.ok_or_else(|| Error::Precondition("no linkage from A to B".into()))?;
    find_linkage(d, &bv, &av)?.ok_or_else(|| Error::Precondition("no linkage from B to A".into()))?;
    Ok(forward)
}

/// Finds `A' ⊆ A`, `B' ⊆ B` of size `n` with linkages both ways that agree or
/// cross. The budget counts Menger queries.
pub fn linkmatch_search(
    d: &Digraph,
    x: &VertexSet,
    a: &VertexSet,
    b: &VertexSet,
    n: usize,
    budget: u64,
) -> Result<LinkmatchOutcome> {
    check_inputs(d, x, a, b, n)?;
    if budget == 0 {
        return Ok(LinkmatchOutcome::Exhausted);
    }
    let full = full_linkages(d, a, b)?;
    let mut s = Search { d, calls: 0, budget };
    match s.pairs(a, b, n, &full, |_, pair| Ok(Some(pair)))? {
        Some(Some(pair)) => Ok(LinkmatchOutcome::Found(pair)),
        _ => Ok(LinkmatchOutcome::Exhausted),
    }
}

/// Connectors of an agreeing or crossing pair.
pub fn connectors(pair: &MatchedPair) -> Vec<Connector> {
    let f = pair.forward.matching();
    let sigma = compose(&pair.forward, &pair.back);
    let mut out = Vec::new();
    for &a in f.keys() {
        let groups: Vec<Vertex> = match pair.relation {
            PairRelation::Agree => vec![a],
            PairRelation::Cross => {
                let a2 = sigma[&a];
                if a2 <= a {
                    continue;
                }
                vec![a, a2]
            }
            PairRelation::Neither => return Vec::new(),
        };
        let targets: Vec<Vertex> = groups.iter().map(|s| f[s]).collect();
        let mut paths: Vec<_> = groups.iter().filter_map(|&s| pair.forward.path_from(s)).collect();
        paths.extend(targets.iter().filter_map(|&t| pair.back.path_from(t)));
        let mut ends = groups;
        ends.extend(targets);
        out.push(Connector {
            ends,
            sub: Subdigraph::from_paths(paths),
        });
    }
    out
}

/// Lexicographically least `k` indices whose members pairwise satisfy `rel`.
fn pick(members: &[Connector], k: usize, rel: impl Fn(&Subdigraph, &Subdigraph) -> bool) -> Option<Vec<usize>> {
    fn go(
        members: &[Connector],
        k: usize,
        start: usize,
        chosen: &mut Vec<usize>,
        rel: &dyn Fn(&Subdigraph, &Subdigraph) -> bool,
    ) -> bool {
        if chosen.len() == k {
            return true;
        }
        for i in start..members.len() {
            if chosen.iter().all(|&j| rel(&members[j].sub, &members[i].sub)) {
                chosen.push(i);
                if go(members, k, i + 1, chosen, rel) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::new();
    go(members, k, 0, &mut chosen, &rel).then_some(chosen)
}

fn disjoint_outcome(d: &Digraph, chosen: &[&Connector]) -> Result<MatchedPair> {
    let mut a_star = Vec::new();
    let mut b_star = Vec::new();
    let mut fwd = Vec::new();
    let mut back = Vec::new();
    for c in chosen {
        let k = c.ends.len() / 2;
        let (a, b) = (c.ends[0], c.ends[k]);
        let inner = c.sub.materialize(d)?;
        let none = VertexSet::new();
        fwd.push(
            inner
                .shortest_path(&VertexSet::from([a]), &VertexSet::from([b]), &none)
                .ok_or_else(|| Error::Verification("connector is not strongly connected".into()))?,
        );
        back.push(
            inner
                .shortest_path(&VertexSet::from([b]), &VertexSet::from([a]), &none)
                .ok_or_else(|| Error::Verification("connector is not strongly connected".into()))?,
        );
        a_star.push(a);
        b_star.push(b);
    }
    let forward = Linkage::new(d, &a_star, &b_star, fwd)?;
    let back = Linkage::new(d, &b_star, &a_star, back)?;
    Ok(MatchedPair {
        forward,
        back,
        relation: PairRelation::Agree,
    })
}

/// Checks an outcome-one pair: valid linkages that agree, and paths between
/// different matched ends are vertex-disjoint.
pub fn verify_outcome_one(d: &Digraph, pair: &MatchedPair) -> Report {
    let mut r = pair.forward.validate(d);
    r.merge(pair.back.validate(d));
    if !r.is_valid() {
        return r;
    }
    if relation_of(&compose(&pair.forward, &pair.back)) != PairRelation::Agree {
        r.push("agree", "linkages do not agree");
        return r;
    }
    let f = pair.forward.matching();
    let groups: BTreeMap<Vertex, VertexSet> = f
        .iter()
        .map(|(&a, b)| {
            let mut s = pair.forward.path_from(a).unwrap().vertex_set();
            s.extend(pair.back.path_from(*b).unwrap().vertex_set());
            (a, s)
        })
        .collect();
    let gs: Vec<_> = groups.iter().collect();
    for (i, (a1, s1)) in gs.iter().enumerate() {
        for (a2, s2) in &gs[i + 1..] {
            if !s1.is_disjoint(s2) {
                r.push("disjoint", format!("paths through {a1} and {a2} meet"));
            }
        }
    }
    r
}

/// Either `n` pairwise disjoint connectors (agreeing linkages disjoint except
/// between matched ends) or `2n+1` pairwise intersecting connectors whose
/// union is 4-eulerianizable with a haven of order `n+1`. The intersecting
/// family is looked for first. The budget counts Menger queries.
pub fn linkmatch2_search(
    d: &Digraph,
    x: &VertexSet,
    a: &VertexSet,
    b: &VertexSet,
    n: usize,
    budget: u64,
) -> Result<Linkmatch2Outcome> {
    check_inputs(d, x, a, b, n)?;
    if budget == 0 {
        return Ok(Linkmatch2Outcome::Exhausted);
    }
    let full = full_linkages(d, a, b)?;
    let mut s = Search { d, calls: 0, budget };
    for m in (n..=a.len()).rev() {
        let found = s.pairs(a, b, m, &full, |s, pair| {
            let cs = connectors(&pair);
            if let Some(idx) = pick(&cs, 2 * n + 1, |p, q| p.meets(q)) {
                let family: Vec<Connector> = idx.iter().map(|&i| cs[i].clone()).collect();
                let subs: Vec<Subdigraph> = family.iter().map(|c| c.sub.clone()).collect();
                if let Ok((subdigraph, certificate)) = haven_from_intersecting_family(s.d, &subs, n) {
                    if let Ok(Some(multiplicity)) = eulerianize(&subdigraph, 4) {
                        return Ok(Some(Linkmatch2Outcome::Eulerian {
                            subdigraph,
                            multiplicity,
                            certificate,
                            connectors: family,
                        }));
                    }
                }
            }
            if let Some(idx) = pick(&cs, n, |p, q| !p.meets(q)) {
                let chosen: Vec<&Connector> = idx.iter().map(|&i| &cs[i]).collect();
                let out = disjoint_outcome(s.d, &chosen)?;
                if verify_outcome_one(s.d, &out).is_valid() {
                    return Ok(Some(Linkmatch2Outcome::Disjoint(out)));
                }
            }
            Ok(None)
        })?;
        match found {
            None => return Ok(Linkmatch2Outcome::Exhausted),
            Some(Some(out)) => return Ok(out),
            Some(None) => {}
        }
    }
    Ok(Linkmatch2Outcome::Exhausted)
}
