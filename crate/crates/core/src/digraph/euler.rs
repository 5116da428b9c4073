use std::collections::BTreeMap;

use super::flow::Circulation;
use super::{Digraph, EdgeId};
use crate::error::{Error, Result};

/// Edge multiplicities turning a digraph into an eulerian one with every
/// multiplied degree at most `bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerMultiplicity {
    pub bound: usize,
    pub multiplicity: BTreeMap<EdgeId, usize>,
}

impl EulerMultiplicity {
    pub fn get(&self, e: EdgeId) -> usize {
        self.multiplicity.get(&e).copied().unwrap_or(0)
    }

    /// Checks every invariant against `d`.
    pub fn verify(&self, d: &Digraph) -> Result<()> {
        for e in d.edges() {
            if self.get(e.id) == 0 {
                return Err(Error::Verification(format!("edge {} has multiplicity 0", e.id)));
            }
        }
        for &id in self.multiplicity.keys() {
            if !d.has_edge(id) {
                return Err(Error::UnknownEdge(id));
            }
        }
        for v in d.vertices() {
            let inn: usize = d.in_edges(v).map(|e| self.get(e.id)).sum();
            let out: usize = d.out_edges(v).map(|e| self.get(e.id)).sum();
            if inn != out {
                return Err(Error::Verification(format!("vertex {v}: in {inn} != out {out}")));
            }
            if inn > self.bound {
                return Err(Error::Verification(format!("vertex {v}: degree {inn} exceeds {}", self.bound)));
            }
        }
        Ok(())
    }
}

/// k-eulerianization for `k ∈ {2, 4, 5, 6}`.
///
/// `d` must be weakly connected. A digraph that is not strongly connected has
/// no witness, so for every `k` it yields `None`. Among all witnesses the
/// lexicographically smallest multiplicity vector (by edge id) is returned.
pub fn eulerianize(d: &Digraph, k: usize) -> Result<Option<EulerMultiplicity>> {
    if ![2, 4, 5, 6].contains(&k) {
        return Err(Error::InvalidArgument(format!("k = {k} not in {{2, 4, 5, 6}}")));
    }
    if !d.is_weakly_connected() {
        return Err(Error::Precondition("digraph is not weakly connected".into()));
    }
    if !d.is_strongly_connected() {
        return Ok(None);
    }
    Ok(eulerianize_bounded(d, k))
}

/// Lexicographically smallest eulerian multiplicity with degrees at most `k`,
/// for any bound and any digraph.
pub fn eulerianize_bounded(d: &Digraph, k: usize) -> Option<EulerMultiplicity> {
    let verts: Vec<_> = d.vertices().collect();
    let index: BTreeMap<_, _> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let edges: Vec<_> = d.edges().copied().collect();
    let k = k as i64;

    let feasible = |bounds: &[(i64, i64)]| -> Option<Vec<i64>> {
        let n = verts.len();
        let mut c = Circulation::new(2 * n);
        for i in 0..n {
            c.add(2 * i, 2 * i + 1, 0, k);
        }
        let ids: Vec<usize> = edges
            .iter()
            .zip(bounds)
            .map(|(e, &(lo, hi))| c.add(2 * index[&e.tail] + 1, 2 * index[&e.head], lo, hi))
            .collect();
        c.solve().map(|f| ids.iter().map(|&i| f[i]).collect())
    };

    let mut bounds: Vec<(i64, i64)> = vec![(1, k); edges.len()];
    feasible(&bounds)?;
    for i in 0..edges.len() {
        let mut m = 1;
        loop {
            bounds[i] = (m, m);
            if feasible(&bounds).is_some() {
                break;
            }
            m += 1;
            debug_assert!(m <= k);
        }
    }
    let flows = feasible(&bounds)?;
    Some(EulerMultiplicity {
        bound: k as usize,
        multiplicity: edges.iter().zip(flows).map(|(e, f)| (e.id, f as usize)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digon_is_eulerian() {
        let d = Digraph::directed_cycle(2);
        let m = eulerianize(&d, 2).unwrap().unwrap();
        assert!(m.multiplicity.values().all(|&x| x == 1));
    }

    #[test]
    fn out_star_has_no_witness() {
        let d = Digraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]);
        assert_eq!(eulerianize(&d, 2).unwrap(), None);
    }

    #[test]
    fn parallel_pair_needs_doubling() {
        let d = Digraph::from_edges(2, &[(0, 1), (0, 1), (1, 0)]);
        let m = eulerianize(&d, 2).unwrap().unwrap();
        assert_eq!(m.multiplicity, BTreeMap::from([(0, 1), (1, 1), (2, 2)]));
        m.verify(&d).unwrap();
    }

    #[test]
    fn bad_k_rejected() {
        assert!(eulerianize(&Digraph::directed_cycle(2), 3).is_err());
    }
}
