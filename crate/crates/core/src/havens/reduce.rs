use std::collections::BTreeMap;

use super::{check_haven, haven_from_intersecting_family, HavenCertificate, Representation};
use crate::digraph::{eulerianize, Digraph, EulerMultiplicity, Subdigraph, Vertex, VertexSet};
use crate::error::{Error, Result};
use crate::linkages::{is_linked_set, linkmatch2_search, LinkedVerdict, Linkmatch2Outcome};

/// Search limits for [`reduce_to_eulerian`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReduceConfig {
    /// Shared step budget across all stages.
    pub budget: u64,
    /// Size of the clique to represent when no eulerian piece is found.
    pub clique_size: usize,
    /// Largest vertex member tried in the clique representation.
    pub max_blob: usize,
    /// Longest circuit used as a family member or edge member.
    pub max_circuit: usize,
}

impl Default for ReduceConfig {
    fn default() -> Self {
        ReduceConfig {
            budget: 1 << 20,
            clique_size: 3,
            max_blob: 3,
            max_circuit: 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EulerianOutcome {
    /// A `k`-eulerianizable subdigraph (`k` is 4 or 5) with a haven of order at least `h+1`.
    Eulerian {
        k: usize,
        subdigraph: Digraph,
        multiplicity: EulerMultiplicity,
        certificate: HavenCertificate,
        members: Vec<Subdigraph>,
    },
    Clique(Representation),
    Exhausted,
}

struct Budget {
    left: u64,
}

impl Budget {
    fn spend(&mut self, n: u64) -> bool {
        if self.left < n {
            self.left = 0;
            false
        } else {
            self.left -= n;
            true
        }
    }
}

/// Looks for a 4- or 5-eulerianizable subdigraph with a haven of order at
/// least `h+1`, or failing that a representation of a clique, starting from
/// a linked set `x`.
///
/// Stages: the intersecting-connector outcome of the matched-linkage search
/// on two halves of `x`; `2h+1` pairwise intersecting short circuits covering
/// no vertex three times; a clique representation with small strongly
/// connected vertex members and circuit edge members.
pub fn reduce_to_eulerian(d: &Digraph, x: &VertexSet, h: usize, cfg: &ReduceConfig) -> Result<EulerianOutcome> {
    if h == 0 {
        return Err(Error::InvalidArgument("h must be positive".into()));
    }
    if cfg.budget == 0 {
        return Ok(EulerianOutcome::Exhausted);
    }
    let mut budget = Budget { left: cfg.budget };
    match is_linked_set(d, x, budget.left) {
        Ok(LinkedVerdict::Linked) => {}
        Ok(LinkedVerdict::NotLinked { .. }) => return Err(Error::Precondition("X is not linked".into())),
        Err(Error::BudgetExhausted) => return Ok(EulerianOutcome::Exhausted),
        Err(e) => return Err(e),
    }
    let cost = x.len() as u64;
    budget.spend(cost * cost);

    if let Some(out) = from_linkmatch(d, x, h, &mut budget)? {
        return Ok(out);
    }
    if budget.left == 0 {
        return Ok(EulerianOutcome::Exhausted);
    }
    let circuits: Vec<Subdigraph> = d
        .short_circuits(cfg.max_circuit)
        .iter()
        .map(|c| Subdigraph::from_paths([c]))
        .collect();
    match intersecting_circuits(d, &circuits, h, &mut budget)? {
        Some(out) => return Ok(out),
        None if budget.left == 0 => return Ok(EulerianOutcome::Exhausted),
        None => {}
    }
    match clique_representation(d, &circuits, cfg, &mut budget)? {
        Some(rep) => Ok(EulerianOutcome::Clique(rep)),
        None => Ok(EulerianOutcome::Exhausted),
    }
}

fn eulerian_outcome(
    subdigraph: Digraph,
    certificate: HavenCertificate,
    members: Vec<Subdigraph>,
) -> Result<Option<EulerianOutcome>> {
    if !check_haven(&subdigraph, &certificate).is_valid() {
        return Ok(None);
    }
    for k in [4, 5] {
        if let Some(multiplicity) = eulerianize(&subdigraph, k)? {
            return Ok(Some(EulerianOutcome::Eulerian {
                k,
                subdigraph,
                multiplicity,
                certificate,
                members,
            }));
        }
    }
    Ok(None)
}

fn from_linkmatch(d: &Digraph, x: &VertexSet, h: usize, budget: &mut Budget) -> Result<Option<EulerianOutcome>> {
    let half = x.len() / 2;
    if half < 2 * h + 1 {
        return Ok(None);
    }
    let a: VertexSet = x.iter().copied().take(half).collect();
    let b: VertexSet = x.iter().copied().skip(half).take(half).collect();
    let out = match linkmatch2_search(d, x, &a, &b, h, budget.left) {
        Ok(o) => o,
        Err(Error::Precondition(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    budget.spend(budget.left / 2);
    match out {
        Linkmatch2Outcome::Eulerian {
            subdigraph,
            certificate,
            connectors,
            ..
        } => eulerian_outcome(subdigraph, certificate, connectors.into_iter().map(|c| c.sub).collect()),
        _ => Ok(None),
    }
}

/// `2h+1` pairwise intersecting circuits with every vertex in at most two.
fn intersecting_circuits(
    d: &Digraph,
    circuits: &[Subdigraph],
    h: usize,
    budget: &mut Budget,
) -> Result<Option<EulerianOutcome>> {
    let want = 2 * h + 1;
    let mut chosen: Vec<usize> = Vec::new();
    let mut cover: BTreeMap<Vertex, usize> = BTreeMap::new();

    #[allow(clippy::too_many_arguments)]
    fn go(
        d: &Digraph,
        circuits: &[Subdigraph],
        want: usize,
        h: usize,
        start: usize,
        chosen: &mut Vec<usize>,
        cover: &mut BTreeMap<Vertex, usize>,
        budget: &mut Budget,
    ) -> Result<Option<EulerianOutcome>> {
        if chosen.len() == want {
            let subs: Vec<Subdigraph> = chosen.iter().map(|&i| circuits[i].clone()).collect();
            if let Ok((dp, cert)) = haven_from_intersecting_family(d, &subs, h) {
                return eulerian_outcome(dp, cert, subs);
            }
            return Ok(None);
        }
        for i in start..circuits.len() {
            if !budget.spend(1) {
                return Ok(None);
            }
            let c = &circuits[i];
            if !chosen.iter().all(|&j| circuits[j].meets(c)) {
                continue;
            }
            if c.vertices.iter().any(|v| cover.get(v).copied().unwrap_or(0) >= 2) {
                continue;
            }
            for v in &c.vertices {
                *cover.entry(*v).or_default() += 1;
            }
            chosen.push(i);
            if let Some(out) = go(d, circuits, want, h, i + 1, chosen, cover, budget)? {
                return Ok(Some(out));
            }
            chosen.pop();
            for v in &c.vertices {
                *cover.get_mut(v).unwrap() -= 1;
            }
        }
        Ok(None)
    }

    go(d, circuits, want, h, 0, &mut chosen, &mut cover, budget)
}

/// Vertex sets of size at most `max` whose induced subdigraph is strongly
/// connected, by size then lexicographically.
fn blobs(d: &Digraph, max: usize) -> Vec<Subdigraph> {
    super::subsets_below(d.vertex_set(), max + 1)
        .into_iter()
        .filter(|s| !s.is_empty())
        .filter_map(|s| {
            let ind = d.induced(&s);
            ind.is_strongly_connected().then(|| Subdigraph::from_digraph(&ind))
        })
        .collect()
}

fn clique_representation(
    d: &Digraph,
    circuits: &[Subdigraph],
    cfg: &ReduceConfig,
    budget: &mut Budget,
) -> Result<Option<Representation>> {
    let n = cfg.clique_size;
    let candidates = blobs(d, cfg.max_blob);
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();

    fn choose_vertices(
        candidates: &[Subdigraph],
        n: usize,
        start: usize,
        chosen: &mut Vec<usize>,
        budget: &mut Budget,
        inner: &mut dyn FnMut(&[usize], &mut Budget) -> Option<Vec<usize>>,
    ) -> Option<(Vec<usize>, Vec<usize>)> {
        if chosen.len() == n {
            return inner(chosen, budget).map(|e| (chosen.clone(), e));
        }
        for i in start..candidates.len() {
            if !budget.spend(1) {
                return None;
            }
            if chosen.iter().any(|&j| candidates[j].meets(&candidates[i])) {
                continue;
            }
            chosen.push(i);
            if let Some(found) = choose_vertices(candidates, n, i + 1, chosen, budget, inner) {
                return Some(found);
            }
            chosen.pop();
        }
        None
    }

    fn choose_edges(
        vs: &[&Subdigraph],
        circuits: &[Subdigraph],
        pairs: &[(usize, usize)],
        chosen: &mut Vec<usize>,
        budget: &mut Budget,
    ) -> bool {
        let Some(&(i, j)) = pairs.get(chosen.len()) else { return true };
        for (c, circ) in circuits.iter().enumerate() {
            if !budget.spend(1) {
                return false;
            }
            if !circ.meets(vs[i]) || !circ.meets(vs[j]) {
                continue;
            }
            if chosen.iter().any(|&k| circuits[k].meets(circ)) {
                continue;
            }
            chosen.push(c);
            if choose_edges(vs, circuits, pairs, chosen, budget) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    let mut inner = |vidx: &[usize], budget: &mut Budget| -> Option<Vec<usize>> {
        let vs: Vec<&Subdigraph> = vidx.iter().map(|&i| &candidates[i]).collect();
        let mut chosen = Vec::new();
        choose_edges(&vs, circuits, &pairs, &mut chosen, budget).then_some(chosen)
    };
    let mut chosen = Vec::new();
    let Some((vidx, eidx)) = choose_vertices(&candidates, n, 0, &mut chosen, budget, &mut inner) else {
        return Ok(None);
    };
    let rep = Representation {
        host: d.clone(),
        vertex_subs: vidx.iter().enumerate().map(|(k, &i)| (k, candidates[i].clone())).collect(),
        edge_subs: pairs.iter().zip(&eidx).map(|(&p, &c)| (p, circuits[c].clone())).collect(),
    };
    rep.validate().into_result()?;
    Ok(Some(rep))
}
