use itertools::Itertools;

use super::{as_is, identity, mixing_analysis, realize, Branch, Budget, GridExtraction, SubpathDecomposition};
use crate::digraph::{Digraph, DirectedPath};
use crate::embedding::Surface;
use crate::error::{Error, Result};
use crate::minors::{validate_acyclic_grid, AcyclicGridWitness, GridFlavor};
use crate::rerouting::RoutedSystem;

/// Horizontals bottom to top and verticals left to right.
fn ordered(sys: &RoutedSystem) -> Result<(Vec<DirectedPath>, Vec<DirectedPath>)> {
    if sys.embedding.surface() != Surface::Disk {
        return Err(Error::InvalidArgument("grid extraction needs a disk system".into()));
    }
    sys.validate().into_result()?;
    let emb = &sys.embedding;
    let hs = emb.bottom_top_order(&sys.horizontals)?.into_iter().map(|i| sys.horizontals[i].clone()).collect();
    let vs = emb.left_right_order(&sys.verticals)?.into_iter().map(|i| sys.verticals[i].clone()).collect();
    Ok((hs, vs))
}

/// Starting at the beginning of horizontal `2t`, walk along it to the first
/// vertex of `visit[0]`, ride that vertical up to the next horizontal, walk
/// along it to `visit[1]`, and so on, stopping on the last vertical. Needs
/// `3k - 2` horizontals for `k` walks.
fn staircase(hs: &[DirectedPath], visit: &[DirectedPath]) -> Option<Vec<DirectedPath>> {
    let k = visit.len();
    if k == 0 || hs.len() < 3 * k - 2 {
        return None;
    }
    (0..k)
        .map(|t| {
            let mut c = 2 * t;
            let mut walk = DirectedPath::trivial(hs[c].start());
            let mut at = 0;
            for (r, v) in visit.iter().enumerate() {
                let h = &hs[c];
                let x = (at..h.vertices().len()).find(|&p| v.contains(h.vertices()[p]))?;
                walk = walk.concat(&h.slice(at, x)).ok()?;
                if r + 1 == k {
                    break;
                }
                let from = v.position(h.vertices()[x])?;
                let up = &hs[c + 1];
                let to = (from..v.vertices().len()).find(|&p| up.contains(v.vertices()[p]))?;
                walk = walk.concat(&v.slice(from, to)).ok()?;
                c += 1;
                at = up.position(v.vertices()[to])?;
            }
            Some(walk)
        })
        .collect()
}

/// Diagonal walks through the verticals `s` (left to right, `3n - 2` of
/// them) over the `n` horizontals starting at level `base + 1`: the walk
/// starting on vertical `s[m - 1 - 2k]` rides one level of it, walks along
/// the next horizontal to the departure of the vertical to its left, and so
/// on, finishing along the rest of the last vertical it rides.
fn diagonal_walks(dec: &SubpathDecomposition, s: &[usize], base: usize, n: usize) -> Option<Vec<DirectedPath>> {
    let m = s.len();
    (0..n)
        .map(|k| {
            let mut walk: Option<DirectedPath> = None;
            let mut prev = None;
            for t in 0..n {
                let level = base + 1 + t;
                let vi = s[m - 1 - 2 * k - t];
                let f = dec.first(vi, level);
                if let Some(pi) = prev {
                    let l = dec.last(pi, level - 1)?;
                    let Some(f) = f else {
                        if t + 1 == n && dec.verticals[pi].finish() == l {
                            break;
                        }
                        return None;
                    };
                    let piece = dec.horizontals[level - 1].subpath(l, f)?;
                    walk = Some(walk?.concat(&piece).ok()?);
                }
                let (a, b) = dec.span(vi, level)?;
                let v = &dec.verticals[vi];
                let ride = if t + 1 == n { v.slice(a, v.vertices().len() - 1) } else { v.slice(a, b) };
                walk = Some(match walk {
                    None => ride,
                    Some(w) => w.concat(&ride).ok()?,
                });
                prev = Some(vi);
            }
            walk
        })
        .collect()
}

/// Tries the integrated construction on every window of `n` consecutive
/// horizontals of `dec` and every `3n - 2` verticals integrated on it.
fn integrated(d: &Digraph, dec: &SubpathDecomposition, n: usize, branch: Branch, budget: &mut Budget) -> Result<Option<GridExtraction>> {
    let m = 3 * n - 2;
    let h = dec.height();
    if dec.verticals.len() < m || h < n {
        return Ok(None);
    }
    let mixings = (1..=h).map(|j| mixing_analysis(dec, j)).collect::<Result<Vec<_>>>()?;
    for s in (0..dec.verticals.len()).combinations(m) {
        for base in 0..=h - n {
            budget.tick()?;
            if !(base + 2..=base + n).all(|j| mixings[j - 1].is_integrated(&s)) {
                continue;
            }
            let Some(walks) = diagonal_walks(dec, &s, base, n) else { continue };
            if walks.iter().any(|w| w.check(d).is_err()) {
                continue;
            }
            let hs = &dec.horizontals[base..base + n];
            if let Ok(g) = realize(d, hs, &walks, GridFlavor::Plain, branch) {
                return Ok(Some(g));
            }
        }
    }
    Ok(None)
}

/// Finds a plain acyclic grid of size `n` in a butterfly minor of the host.
///
/// First looks for `n` horizontals and `n` verticals that already form one.
/// Then looks for `n` verticals segregated on `3n - 2` horizontals: those
/// horizontals are cut after the last departure and rerouted in a staircase
/// along the verticals. Otherwise looks for `3n - 2` verticals integrated on
/// `n` consecutive horizontals and walks diagonally through them, or for a
/// single vertical alternating `3n - 2` times between two horizontals. Every
/// horizontal of the result lies below the topmost input horizontal and
/// every vertical left of the rightmost input vertical.
pub fn get_acyclic_grid(sys: &RoutedSystem, n: usize, budget: u64) -> Result<GridExtraction> {
    if n == 0 {
        return Err(Error::InvalidArgument("grid size must be positive".into()));
    }
    let (hs, vs) = ordered(sys)?;
    if hs.len() < n || vs.len() < n {
        return Err(Error::Precondition(format!(
            "{} horizontals and {} verticals cannot carry a grid of size {n}",
            hs.len(),
            vs.len()
        )));
    }
    let d = sys.host();
    let mut budget = Budget(budget);

    for hsel in (0..hs.len()).combinations(n) {
        for vsel in (0..vs.len()).combinations(n) {
            budget.tick()?;
            let h: Vec<_> = hsel.iter().map(|&i| hs[i].clone()).collect();
            let v: Vec<_> = vsel.iter().map(|&i| vs[i].clone()).collect();
            if let Some(witness) = as_is(d, &h, &v, GridFlavor::Plain) {
                return Ok(GridExtraction {
                    model: identity(d),
                    digraph: d.clone(),
                    witness,
                    branch: Branch::FixedPoint,
                });
            }
        }
    }

    let dec = SubpathDecomposition::new(hs.clone(), vs.clone());
    let mixings = (1..=hs.len()).map(|j| mixing_analysis(&dec, j)).collect::<Result<Vec<_>>>()?;
    let need = 3 * n - 2;
    for s in (0..vs.len()).combinations(n) {
        budget.tick()?;
        let levels: Vec<usize> = (1..=hs.len()).filter(|&j| mixings[j - 1].is_segregated(&s)).collect();
        if levels.len() < need {
            continue;
        }
        let chosen_h: Vec<DirectedPath> = levels[..need].iter().map(|&j| hs[j - 1].clone()).collect();
        let chosen_v: Vec<DirectedPath> = s.iter().map(|&i| vs[i].clone()).collect();
        let local = SubpathDecomposition::new(chosen_h.clone(), chosen_v.clone());
        let truncated: Option<Vec<DirectedPath>> = chosen_h
            .iter()
            .enumerate()
            .map(|(k, h)| {
                let cut = (0..n).map(|i| local.first(i, k + 1).and_then(|f| h.position(f))).collect::<Option<Vec<_>>>()?;
                Some(h.slice(0, cut.into_iter().max()?))
            })
            .collect();
        let Some(truncated) = truncated else { continue };
        let visit: Vec<DirectedPath> = chosen_v.iter().rev().cloned().collect();
        let Some(walks) = staircase(&truncated, &visit) else { continue };
        if walks.iter().any(|w| w.check(d).is_err()) {
            continue;
        }
        if let Ok(g) = realize(d, &walks, &chosen_v, GridFlavor::Plain, Branch::Segregated) {
            return Ok(g);
        }
    }

    if let Some(g) = integrated(d, &dec, n, Branch::Integrated, &mut budget)? {
        return Ok(g);
    }
    if let Some(g) = alternating(d, &hs, &vs, n, &mut budget)? {
        return Ok(g);
    }
    Err(Error::Precondition(format!(
        "no segregated, integrated or alternating vertical subset yields a grid of size {n}"
    )))
}

/// A vertical that alternates `3n - 2` times between two horizontals: the
/// pieces between them act as verticals of an integrated construction.
fn alternating(
    d: &Digraph,
    hs: &[DirectedPath],
    vs: &[DirectedPath],
    n: usize,
    budget: &mut Budget,
) -> Result<Option<GridExtraction>> {
    let need = 3 * n - 2;
    for p in vs {
        for (a, b) in (0..hs.len()).tuple_combinations() {
            budget.tick()?;
            let pieces = alternations(p, &hs[a], &hs[b]);
            if pieces.len() < need {
                continue;
            }
            let low = &hs[a];
            let chosen: Vec<DirectedPath> = pieces
                .into_iter()
                .take(need)
                .sorted_by_key(|q| std::cmp::Reverse(low.position(q.start())))
                .collect();
            let dec = SubpathDecomposition::new(hs[a..=b].to_vec(), chosen);
            if let Some(g) = integrated(d, &dec, n, Branch::PropertyP, budget)? {
                return Ok(Some(g));
            }
        }
    }
    Ok(None)
}

/// Finds a bubble grid of size `n` whose horizontals are input horizontals
/// (up to contraction).
///
/// If some vertical alternates `3n - 2` times between two horizontals, the
/// pieces between them act as verticals and the integrated construction is
/// applied. Otherwise looks for `n` horizontals and `n` verticals, each cut
/// at its first vertex on the topmost chosen horizontal, that already form a
/// bubble grid.
pub fn get_bubble_grid(sys: &RoutedSystem, n: usize, budget: u64) -> Result<GridExtraction> {
    if n == 0 {
        return Err(Error::InvalidArgument("grid size must be positive".into()));
    }
    let (hs, vs) = ordered(sys)?;
    if hs.len() < n || vs.len() < n {
        return Err(Error::Precondition(format!(
            "{} horizontals and {} verticals cannot carry a grid of size {n}",
            hs.len(),
            vs.len()
        )));
    }
    let d = sys.host();
    let mut budget = Budget(budget);

    if let Some(mut g) = alternating(d, &hs, &vs, n, &mut budget)? {
        g.witness.flavor = GridFlavor::Bubble;
        validate_acyclic_grid(&g.digraph, &g.witness).into_result()?;
        return Ok(g);
    }

    for hsel in (0..hs.len()).combinations(n) {
        let top = &hs[*hsel.last().unwrap()];
        let cut: Vec<Option<DirectedPath>> = vs
            .iter()
            .map(|v| v.vertices().iter().position(|&x| top.contains(x)).map(|i| v.slice(0, i)))
            .collect();
        let h: Vec<DirectedPath> = hsel.iter().map(|&i| hs[i].clone()).collect();
        for vsel in (0..vs.len()).combinations(n) {
            budget.tick()?;
            let Some(v) = vsel.iter().map(|&i| cut[i].clone()).collect::<Option<Vec<_>>>() else { continue };
            if let Some(witness) = as_is(d, &h, &v, GridFlavor::Bubble) {
                return Ok(GridExtraction {
                    model: identity(d),
                    digraph: d.clone(),
                    witness,
                    branch: Branch::Truncation,
                });
            }
        }
    }
    Err(Error::Precondition(format!("no bubble grid of size {n} found")))
}

/// The pieces of `p` that run from `low` to `high`, each starting at the
/// last visit to `low` before reaching `high`.
fn alternations(p: &DirectedPath, low: &DirectedPath, high: &DirectedPath) -> Vec<DirectedPath> {
    let mut out = Vec::new();
    let mut last_low = None;
    for (i, &v) in p.vertices().iter().enumerate() {
        if low.contains(v) {
            last_low = Some(i);
        } else if high.contains(v) {
            if let Some(a) = last_low.take() {
                out.push(p.slice(a, i));
            }
        }
    }
    out
}

/// Turns a bubble grid with at least `3k - 1` horizontals into a plain grid
/// of size `k` in a butterfly minor of `d`, rerouting the horizontals in a
/// staircase along `k` of the verticals.
pub fn debubble(d: &Digraph, w: &AcyclicGridWitness, k: usize) -> Result<GridExtraction> {
    if k == 0 {
        return Err(Error::InvalidArgument("grid size must be positive".into()));
    }
    validate_acyclic_grid(d, w).into_result()?;
    if w.horizontals.len() < 3 * k - 1 || w.verticals.len() < k {
        return Err(Error::Precondition(format!(
            "debubbling to size {k} needs {} horizontals and {k} verticals, got {} and {}",
            3 * k - 1,
            w.horizontals.len(),
            w.verticals.len()
        )));
    }
    let h0 = &w.horizontals[0];
    let visit: Vec<DirectedPath> = w
        .verticals
        .iter()
        .sorted_by_key(|v| h0.vertices().iter().position(|&x| v.contains(x)))
        .take(k)
        .cloned()
        .collect();
    let walks = staircase(&w.horizontals, &visit)
        .ok_or_else(|| Error::Verification("staircase walk left the grid".into()))?;
    realize(d, &walks, &visit, GridFlavor::Plain, Branch::Debubble)
}
