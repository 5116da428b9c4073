//! Extraction of acyclic grids from disk path systems and of cylindrical
//! grids from linked path families.

use std::collections::BTreeMap;

use itertools::Itertools;

use crate::digraph::{Digraph, DirectedPath, Vertex};
use crate::error::{Error, Result};
use crate::minors::{shrink_to_paths, validate_acyclic_grid, AcyclicGridWitness, GridFlavor, MinorModel};

mod acyclic;
mod assemble;
mod config;
mod raw;

pub use acyclic::{debubble, get_acyclic_grid, get_bubble_grid};
pub use assemble::{assemble_cylindrical_grid, Assembly, AssemblyBranch, AssemblyInput};
pub use config::PipelineConfig;
pub use raw::{find_circuits_and_paths, link_cuts, link_cuts_with_order, CutLinkage, RawCylinder, UndirectedWitness};

/// The pieces of each vertical between consecutive horizontals.
///
/// Horizontals are numbered `1..=h` from the bottom; level `0` stands for the
/// start of a vertical and level `h + 1` for its end. The piece of vertical
/// `i` at level `j` runs from horizontal `j` to horizontal `j + 1` without
/// touching any horizontal in between, and is the last such piece along the
/// vertical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubpathDecomposition {
    pub horizontals: Vec<DirectedPath>,
    pub verticals: Vec<DirectedPath>,
    spans: Vec<Vec<Option<(usize, usize)>>>,
}

impl SubpathDecomposition {
    /// `horizontals` bottom to top, `verticals` left to right.
    pub fn new(horizontals: Vec<DirectedPath>, verticals: Vec<DirectedPath>) -> Self {
        let h = horizontals.len();
        let level_of: BTreeMap<Vertex, usize> = horizontals
            .iter()
            .enumerate()
            .flat_map(|(k, p)| p.vertices().iter().map(move |&v| (v, k + 1)))
            .collect();
        let spans = verticals
            .iter()
            .map(|v| {
                let vs = v.vertices();
                let last = vs.len() - 1;
                let mut hits = Vec::new();
                for (idx, x) in vs.iter().enumerate() {
                    match level_of.get(x) {
                        Some(&lv) => hits.push((idx, lv)),
                        None if idx == 0 => hits.push((0, 0)),
                        None if idx == last => hits.push((last, h + 1)),
                        None => {}
                    }
                }
                let mut row = vec![None; h + 1];
                for w in hits.windows(2) {
                    let ((a, la), (b, lb)) = (w[0], w[1]);
                    if lb == la + 1 {
                        row[la] = Some((a, b));
                    }
                }
                row
            })
            .collect();
        SubpathDecomposition {
            horizontals,
            verticals,
            spans,
        }
    }

    pub fn height(&self) -> usize {
        self.horizontals.len()
    }

    /// Index range of the piece on its vertical.
    pub fn span(&self, i: usize, j: usize) -> Option<(usize, usize)> {
        self.spans.get(i)?.get(j).copied().flatten()
    }

    pub fn segment(&self, i: usize, j: usize) -> Option<DirectedPath> {
        let (a, b) = self.span(i, j)?;
        Some(self.verticals[i].slice(a, b))
    }

    /// First vertex of the piece at level `j`, on horizontal `j`.
    pub fn first(&self, i: usize, j: usize) -> Option<Vertex> {
        self.span(i, j).map(|(a, _)| self.verticals[i].vertices()[a])
    }

    /// Last vertex of the piece at level `j`, on horizontal `j + 1`.
    pub fn last(&self, i: usize, j: usize) -> Option<Vertex> {
        self.span(i, j).map(|(_, b)| self.verticals[i].vertices()[b])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Marker {
    /// Departure of vertical `i` from the horizontal.
    First(usize),
    /// Arrival of vertical `i` on the horizontal.
    Last(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mix {
    Integrated,
    Segregated,
}

/// Departures and arrivals of the verticals on one horizontal, in the order
/// the horizontal meets them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mixing {
    pub level: usize,
    pub order: Vec<(Vertex, Marker)>,
    positions: BTreeMap<usize, (Option<usize>, Option<usize>)>,
}

impl Mixing {
    fn pattern_holds(&self, seq: &[Option<usize>]) -> bool {
        let pos: Option<Vec<usize>> = seq.iter().copied().collect();
        pos.is_some_and(|p| p.windows(2).all(|w| w[0] <= w[1]))
    }

    fn get(&self, i: usize) -> (Option<usize>, Option<usize>) {
        self.positions.get(&i).copied().unwrap_or((None, None))
    }

    /// Along the horizontal, the rightmost vertical departs then arrives,
    /// then the next one, and so on. A vertical that ends on the horizontal
    /// contributes only its arrival.
    pub fn is_integrated(&self, subset: &[usize]) -> bool {
        let mut seq = Vec::new();
        for &i in subset.iter().rev() {
            let (f, l) = self.get(i);
            if l.is_none() {
                return false;
            }
            if f.is_some() {
                seq.push(f);
            }
            seq.push(l);
        }
        self.pattern_holds(&seq)
    }

    /// Along the horizontal, every departure (right to left) comes before
    /// every arrival (right to left).
    pub fn is_segregated(&self, subset: &[usize]) -> bool {
        let fs = subset.iter().rev().map(|&i| self.get(i).0);
        let ls = subset.iter().rev().map(|&i| self.get(i).1);
        let seq: Vec<Option<usize>> = fs.chain(ls).collect();
        self.pattern_holds(&seq)
    }

    pub fn classify(&self, subset: &[usize]) -> Option<Mix> {
        if self.is_integrated(subset) {
            Some(Mix::Integrated)
        } else if self.is_segregated(subset) {
            Some(Mix::Segregated)
        } else {
            None
        }
    }

    /// A largest subset of `verticals` with at least `min` members that is
    /// integrated or segregated, found by exhaustive search.
    pub fn uniform_subset(&self, verticals: &[usize], min: usize) -> Option<(Vec<usize>, Mix)> {
        let mut sorted = verticals.to_vec();
        sorted.sort_unstable();
        (min.max(1)..=sorted.len()).rev().find_map(|k| {
            sorted
                .iter()
                .copied()
                .combinations(k)
                .find_map(|s| self.classify(&s).map(|m| (s, m)))
        })
    }
}

/// Departures at level `j` and arrivals from level `j - 1` on horizontal `j`.
pub fn mixing_analysis(dec: &SubpathDecomposition, j: usize) -> Result<Mixing> {
    if j == 0 || j > dec.height() {
        return Err(Error::InvalidArgument(format!(
            "level {j} outside 1..={}",
            dec.height()
        )));
    }
    let h = &dec.horizontals[j - 1];
    let mut positions = BTreeMap::new();
    let mut order = Vec::new();
    for i in 0..dec.verticals.len() {
        let f = dec.first(i, j);
        let l = dec.last(i, j - 1);
        let pf = f.and_then(|v| h.position(v));
        let pl = l.and_then(|v| h.position(v));
        if let (Some(v), Some(p)) = (f, pf) {
            order.push((p, v, Marker::First(i)));
        }
        if let (Some(v), Some(p)) = (l, pl) {
            order.push((p, v, Marker::Last(i)));
        }
        positions.insert(i, (pf, pl));
    }
    order.sort();
    Ok(Mixing {
        level: j,
        order: order.into_iter().map(|(_, v, m)| (v, m)).collect(),
        positions,
    })
}

/// Which construction produced a grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// The input paths already formed the grid.
    FixedPoint,
    Segregated,
    Integrated,
    PropertyP,
    Truncation,
    Debubble,
}

/// A grid in a butterfly minor of the host, with the script that produces
/// the minor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridExtraction {
    pub model: MinorModel,
    pub digraph: Digraph,
    pub witness: AcyclicGridWitness,
    pub branch: Branch,
}

/// Puts both families in grid order: horizontals by where the first vertical
/// meets them, verticals by where the first horizontal meets them.
fn grid_order(horizontals: &mut [DirectedPath], verticals: &mut [DirectedPath]) {
    let first_meeting = |p: &DirectedPath, q: &DirectedPath| {
        p.vertices().iter().position(|&v| q.contains(v)).unwrap_or(usize::MAX)
    };
    if let Some(v0) = verticals.first().cloned() {
        horizontals.sort_by_key(|h| first_meeting(&v0, h));
    }
    if let Some(h0) = horizontals.first().cloned() {
        verticals.sort_by_key(|v| first_meeting(&h0, v));
    }
}

/// Deletes everything off the two families, contracts the edges they share,
/// and checks that the result is a grid of the given flavour.
fn realize(
    d: &Digraph,
    horizontals: &[DirectedPath],
    verticals: &[DirectedPath],
    flavor: GridFlavor,
    branch: Branch,
) -> Result<GridExtraction> {
    for p in horizontals.iter().chain(verticals) {
        p.check(d)?;
    }
    let (model, mut hs, mut vs) = shrink_to_paths(d, horizontals, verticals)?;
    let digraph = model.replay(d)?;
    grid_order(&mut hs, &mut vs);
    let witness = AcyclicGridWitness {
        horizontals: hs,
        verticals: vs,
        flavor,
    };
    validate_acyclic_grid(&digraph, &witness).into_result()?;
    Ok(GridExtraction {
        model,
        digraph,
        witness,
        branch,
    })
}

/// Checks the families directly in `d` with no minor operations.
fn as_is(d: &Digraph, horizontals: &[DirectedPath], verticals: &[DirectedPath], flavor: GridFlavor) -> Option<AcyclicGridWitness> {
    let mut hs = horizontals.to_vec();
    let mut vs = verticals.to_vec();
    grid_order(&mut hs, &mut vs);
    let w = AcyclicGridWitness {
        horizontals: hs,
        verticals: vs,
        flavor,
    };
    validate_acyclic_grid(d, &w).is_valid().then_some(w)
}

fn identity(d: &Digraph) -> MinorModel {
    MinorModel::new(vec![], d.vertices().map(|v| (v, v)).collect())
}

/// Work counter shared by the searches.
struct Budget(u64);

impl Budget {
    fn tick(&mut self) -> Result<()> {
        if self.0 == 0 {
            return Err(Error::BudgetExhausted);
        }
        self.0 -= 1;
        Ok(())
    }
}
