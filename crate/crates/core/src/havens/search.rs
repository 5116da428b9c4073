use std::collections::{BTreeMap, HashMap};

use super::HavenCertificate;
use crate::digraph::{Digraph, Vertex, VertexSet};
use crate::error::{Error, Result};

/// Outcome of a search for a haven of one fixed order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HavenSearch {
    Found(HavenCertificate),
    None,
    Exhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HavenOrder {
    pub order: usize,
    pub certificate: HavenCertificate,
}

struct Masks {
    verts: Vec<Vertex>,
    out: Vec<u64>,
    inn: Vec<u64>,
}

impl Masks {
    fn new(d: &Digraph) -> Result<Self> {
        let verts: Vec<Vertex> = d.vertices().collect();
        if verts.len() > 64 {
            return Err(Error::InvalidArgument(format!(
                "exhaustive haven search supports at most 64 vertices, got {}",
                verts.len()
            )));
        }
        let index: BTreeMap<Vertex, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut out = vec![0u64; verts.len()];
        let mut inn = vec![0u64; verts.len()];
        for e in d.edges() {
            let (t, h) = (index[&e.tail], index[&e.head]);
            out[t] |= 1 << h;
            inn[h] |= 1 << t;
        }
        Ok(Masks { verts, out, inn })
    }

    fn full(&self) -> u64 {
        if self.verts.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.verts.len()) - 1
        }
    }

    fn reach(adj: &[u64], start: usize, alive: u64) -> u64 {
        let mut seen = 1u64 << start;
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0;
            let mut f = frontier;
            while f != 0 {
                let i = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= adj[i];
            }
            next &= alive & !seen;
            seen |= next;
            frontier = next;
        }
        seen
    }

    /// Strong components of the digraph restricted to `alive`, by smallest vertex.
    fn components(&self, alive: u64) -> Vec<u64> {
        let mut left = alive;
        let mut comps = Vec::new();
        while left != 0 {
            let i = left.trailing_zeros() as usize;
            let c = Self::reach(&self.out, i, alive) & Self::reach(&self.inn, i, alive);
            comps.push(c);
            left &= !c;
        }
        comps
    }

    fn to_set(&self, mask: u64) -> VertexSet {
        let mut s = VertexSet::new();
        let mut m = mask;
        while m != 0 {
            s.insert(self.verts[m.trailing_zeros() as usize]);
            m &= m - 1;
        }
        s
    }
}

fn masks_below(n: usize, bound: usize) -> Vec<u64> {
    let mut out = Vec::new();
    for k in 0..bound.min(n + 1) {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            out.push(idx.iter().fold(0u64, |m, &i| m | (1 << i)));
            let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else { break };
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    out
}

/// Searches for a haven of order exactly `order`, spending at most `budget`
/// assignment steps.
pub fn find_haven(d: &Digraph, order: usize, budget: u64) -> Result<HavenSearch> {
    search(d, order, budget).map(|(s, _)| s)
}

fn search(d: &Digraph, order: usize, budget: u64) -> Result<(HavenSearch, u64)> {
    if order == 0 {
        return Ok((HavenSearch::Found(HavenCertificate::default()), 0));
    }
    if order > d.vertex_count() {
        return Ok((HavenSearch::None, 0));
    }
    let m = Masks::new(d)?;
    let n = m.verts.len();
    let full = m.full();
    let subsets = masks_below(n, order);
    let pos: HashMap<u64, usize> = subsets.iter().enumerate().map(|(i, &z)| (z, i)).collect();
    let comps: Vec<Vec<u64>> = subsets.iter().map(|&z| m.components(full & !z)).collect();
    let bits = |z: u64| (0..n).filter(move |&i| z >> i & 1 == 1);
    let parents: Vec<Vec<usize>> = subsets.iter().map(|&z| bits(z).map(|i| pos[&(z & !(1 << i))]).collect()).collect();
    let children: Vec<Vec<usize>> = subsets
        .iter()
        .map(|&z| (0..n).filter(|&i| z >> i & 1 == 0).filter_map(|i| pos.get(&(z | 1 << i)).copied()).collect())
        .collect();

    let total = subsets.len();
    let mut chosen: Vec<Option<u64>> = vec![None; total];
    let mut cursor: Vec<usize> = vec![0; total];
    let mut ticks = 0u64;

    let fits = |c: u64, j: usize, chosen: &[Option<u64>]| parents[j].iter().all(|&p| chosen[p].is_none_or(|b| c & !b == 0));

    let mut i = 0usize;
    loop {
        if i == total {
            let table = subsets
                .iter()
                .zip(&chosen)
                .map(|(&z, c)| (m.to_set(z), m.verts[c.unwrap().trailing_zeros() as usize]))
                .collect();
            return Ok((HavenSearch::Found(HavenCertificate { order, table }), ticks));
        }
        let mut placed = false;
        while cursor[i] < comps[i].len() {
            let c = comps[i][cursor[i]];
            cursor[i] += 1;
            if !fits(c, i, &chosen) {
                continue;
            }
            ticks += 1;
            if ticks > budget {
                return Ok((HavenSearch::Exhausted, ticks));
            }
            chosen[i] = Some(c);
            let ok = children[i].iter().all(|&j| comps[j].iter().any(|&cc| fits(cc, j, &chosen)));
            if ok {
                placed = true;
                break;
            }
            chosen[i] = None;
        }
        if placed {
            i += 1;
            continue;
        }
        cursor[i] = 0;
        chosen[i] = None;
        if i == 0 {
            return Ok((HavenSearch::None, ticks));
        }
        i -= 1;
        chosen[i] = None;
    }
}

/// The largest order `w ≤ cap` for which `D` has a haven, with a certificate.
pub fn haven_order(d: &Digraph, cap: usize, budget: u64) -> Result<HavenOrder> {
    let mut remaining = budget;
    for w in (1..=cap.min(d.vertex_count())).rev() {
        let (out, used) = search(d, w, remaining)?;
        remaining -= used.min(remaining);
        match out {
            HavenSearch::Found(certificate) => return Ok(HavenOrder { order: w, certificate }),
            HavenSearch::None => {}
            HavenSearch::Exhausted => return Err(Error::BudgetExhausted),
        }
    }
    Ok(HavenOrder {
        order: 0,
        certificate: HavenCertificate::default(),
    })
}
